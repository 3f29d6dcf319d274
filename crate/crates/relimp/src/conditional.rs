//! Conditional system lifetime: survival kernels of series subsystems,
//! the inclusion–exclusion representation of `Pr(T > t | X_k = x)`, and the
//! regression and error curves built from it.
//!
//! For a path-set union `U` the conditional survival of the series lifetime
//! `X_U` given `X_i = x` equals the survival-copula kernel evaluated at the
//! component survivals, cut off at `t = x` when `i` belongs to `U`. Summing
//! the kernels over all nonempty unions of minimal path sets with
//! alternating signs yields the conditional survival of the system. The
//! conditional expectation `m_k(x)` integrates that survival over time; the
//! integral is split at the known jump point `t = x`.

use serde::Serialize;
use thiserror::Error;

use crate::copulas::{Copula, CopulaError, MAX_DIM};
use crate::interp::{InterpKind, Table};
use crate::marginals::Marginal;
use crate::quad::{integrate_piecewise, QuadError};
use crate::structure::{StructureError, SystemStructure};

use rayon::prelude::*;

/// Cap on the number of minimal path sets (the inclusion–exclusion walks
/// `2^r - 1` subsets once at model build time).
pub const MAX_PATH_SETS: usize = 20;

/// Numeric policy for quadrature and tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraturePolicy {
    /// Absolute tolerance for time integrals of conditional survival.
    /// Nested moment integrals use `abs_tol / 10` inside and `abs_tol * 10`
    /// outside.
    pub abs_tol: f64,
    /// Relative tolerance floor for all integrals; keeps targets reachable
    /// when a system's time scale pushes moment integrals far above 1.
    pub rel_tol: f64,
    /// Tabulation points for regression and error curves.
    pub grid_points: usize,
    /// Tail probability cutting the time domain of curve integrals.
    pub curve_tail: f64,
    /// Tail probability cutting moment integrals (tighter: their truncation
    /// error scales with the squared time horizon).
    pub moment_tail: f64,
    /// Tail probability defining the ends of tabulation grids.
    pub grid_tail: f64,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy {
            abs_tol: 1e-9,
            rel_tol: 1e-11,
            grid_points: 512,
            curve_tail: 1e-10,
            moment_tail: 1e-12,
            grid_tail: 1e-4,
        }
    }
}

impl QuadraturePolicy {
    pub(crate) fn inner_tol(&self) -> f64 {
        self.abs_tol / 10.0
    }

    pub(crate) fn outer_tol(&self) -> f64 {
        self.abs_tol * 10.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{marginals} marginals supplied for {components} components")]
    MarginalCount { marginals: usize, components: usize },
    #[error("copula dimension {copula} does not match component count {components}")]
    CopulaDimension { copula: usize, components: usize },
    #[error("{path_sets} path sets exceed the supported maximum {max}")]
    TooManyPathSets { path_sets: usize, max: usize },
    #[error("{components} components exceed the supported maximum {max}")]
    TooManyComponents { components: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("component {component} out of range for {n} components")]
    ComponentOutOfRange { component: usize, n: usize },
    #[error("density of component {component} vanishes at x = {x}; the conditional law requires f(x) > 0")]
    DensityZero { component: usize, x: f64 },
    #[error("path set is empty")]
    EmptyPathSet,
    #[error("path set references component {component}, but the system has {n}")]
    PathSetOutOfRange { component: usize, n: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Copula(#[from] CopulaError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A coherent system with dependent component lifetimes: structure, one
/// marginal per component, and the survival copula tying them together.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    structure: SystemStructure,
    marginals: Vec<Marginal>,
    copula: Copula,
    policy: QuadraturePolicy,
    /// Distinct nonempty unions of minimal path sets with their summed
    /// inclusion–exclusion coefficients (zero coefficients dropped).
    unions: Vec<(Vec<usize>, f64)>,
}

impl SystemModel {
    pub fn new(
        structure: SystemStructure,
        marginals: Vec<Marginal>,
        copula: Copula,
    ) -> Result<Self, ModelError> {
        let n = structure.component_count();
        if marginals.len() != n {
            return Err(ModelError::MarginalCount { marginals: marginals.len(), components: n });
        }
        if copula.dim() != n {
            return Err(ModelError::CopulaDimension { copula: copula.dim(), components: n });
        }
        if n > MAX_DIM {
            return Err(ModelError::TooManyComponents { components: n, max: MAX_DIM });
        }
        let r = structure.path_sets().len();
        if r > MAX_PATH_SETS {
            return Err(ModelError::TooManyPathSets { path_sets: r, max: MAX_PATH_SETS });
        }
        let unions = union_coefficients(&structure);
        Ok(SystemModel {
            structure,
            marginals,
            copula,
            policy: QuadraturePolicy::default(),
            unions,
        })
    }

    pub fn with_policy(mut self, policy: QuadraturePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn set_policy(&mut self, policy: QuadraturePolicy) {
        self.policy = policy;
    }

    pub fn policy(&self) -> &QuadraturePolicy {
        &self.policy
    }

    pub fn structure(&self) -> &SystemStructure {
        &self.structure
    }

    pub fn marginals(&self) -> &[Marginal] {
        &self.marginals
    }

    pub fn copula(&self) -> &Copula {
        &self.copula
    }

    pub fn component_count(&self) -> usize {
        self.structure.component_count()
    }

    /// Distinct path-set unions and their inclusion–exclusion coefficients.
    pub fn union_terms(&self) -> &[(Vec<usize>, f64)] {
        &self.unions
    }

    /// Latest time the curve integrals reach (`1 - curve_tail` quantile of
    /// the slowest component).
    pub fn time_horizon(&self) -> f64 {
        self.horizon(self.policy.curve_tail)
    }

    pub(crate) fn moment_horizon(&self) -> f64 {
        self.horizon(self.policy.moment_tail)
    }

    fn horizon(&self, tail: f64) -> f64 {
        self.marginals
            .iter()
            .map(|m| m.upper_time(tail))
            .fold(0.0, f64::max)
    }

    /// Support edges of bounded marginals: the time integrands are not
    /// smooth there, so every quadrature splits at these points.
    pub(crate) fn support_edges(&self) -> Vec<f64> {
        let mut edges = Vec::new();
        for m in &self.marginals {
            if let Marginal::Uniform { lower, upper } = *m {
                if lower > 0.0 {
                    edges.push(lower);
                }
                edges.push(upper);
            }
        }
        edges
    }

    /// Integration domain for moments of functions of `X_k`.
    pub(crate) fn moment_domain(&self, k: usize) -> (f64, f64) {
        let m = &self.marginals[k];
        let tail = self.policy.moment_tail;
        (
            m.quantile(tail).expect("tail is a valid probability"),
            m.quantile(1.0 - tail).expect("tail is a valid probability"),
        )
    }

    /// Unconditional system reliability `Pr(T > t)` via the distortion of
    /// the component survivals over path-set unions.
    pub fn reliability(&self, t: f64) -> f64 {
        let n = self.component_count();
        let mut survs = [1.0_f64; MAX_DIM];
        for (j, m) in self.marginals.iter().enumerate() {
            survs[j] = m.survival(t);
        }
        let mut total = 0.0;
        let mut u = [1.0_f64; MAX_DIM];
        for (union, coeff) in &self.unions {
            u[..n].fill(1.0);
            for &j in union {
                u[j] = survs[j];
            }
            total += coeff * self.copula.eval_unchecked(&u[..n]);
        }
        total
    }

    /// Map one copula draw to component lifetimes: the draw follows the
    /// survival copula, so `X_j = F_j^{-1}(1 - v_j)`.
    pub(crate) fn lifetimes_from_draw(&self, draw: &[f64], out: &mut [f64]) {
        for (j, (&v, m)) in draw.iter().zip(&self.marginals).enumerate() {
            out[j] = m
                .quantile((1.0 - v).clamp(0.0, 1.0 - f64::EPSILON))
                .expect("probability stays in [0, 1)");
        }
    }

    fn check_component(&self, k: usize) -> Result<(), EvalError> {
        let n = self.component_count();
        if k >= n {
            return Err(EvalError::ComponentOutOfRange { component: k, n });
        }
        Ok(())
    }

    fn density_at(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        let f = self.marginals[k].density(x);
        if !(f > 0.0) || !f.is_finite() {
            return Err(EvalError::DensityZero { component: k, x });
        }
        Ok(f)
    }

    /// Survival-copula kernel for the series lifetime of `union` given
    /// `X_k = x` (with `s_x = survival_k(x)` precomputed): coordinates in the
    /// union carry the partner survivals at `t`, coordinate `k` carries
    /// `s_x`, everything else is masked to 1.
    fn kernel(&self, union: &[usize], k: usize, s_x: f64, t: f64) -> f64 {
        let n = self.component_count();
        let mut u = [1.0_f64; MAX_DIM];
        for &j in union {
            if j != k {
                u[j] = self.marginals[j].survival(t);
            }
        }
        u[k] = s_x;
        self.copula.partial_unchecked(k, &u[..n])
    }

    /// `Pr(X_P > t | X_i = x)` for the series lifetime over `path_set`.
    ///
    /// For `i` in the set the value drops to 0 at `t = x`; for `i` outside
    /// the set the kernel applies for all `t`; a singleton `{i}` degenerates
    /// to the indicator of `t < x`.
    pub fn series_conditional_survival(
        &self,
        path_set: &[usize],
        i: usize,
        x: f64,
        t: f64,
    ) -> Result<f64, EvalError> {
        self.check_component(i)?;
        if path_set.is_empty() {
            return Err(EvalError::EmptyPathSet);
        }
        let n = self.component_count();
        if let Some(&bad) = path_set.iter().find(|&&j| j >= n) {
            return Err(EvalError::PathSetOutOfRange { component: bad, n });
        }
        self.density_at(i, x)?;
        let in_set = path_set.contains(&i);
        if in_set && path_set.len() == 1 {
            return Ok(if t < x { 1.0 } else { 0.0 });
        }
        if in_set && t >= x {
            return Ok(0.0);
        }
        let s_x = self.marginals[i].survival(x);
        Ok(self.kernel(path_set, i, s_x, t))
    }

    /// `Pr(T > t | X_k = x)` by inclusion–exclusion over path-set unions.
    ///
    /// The raw alternating sum is returned unclamped; transient values a
    /// hair outside `[0, 1]` are legitimate inputs to the time integrals.
    /// Clamp for display only.
    pub fn system_conditional_survival(&self, k: usize, x: f64, t: f64) -> Result<f64, EvalError> {
        self.check_component(k)?;
        self.density_at(k, x)?;
        let s_x = self.marginals[k].survival(x);
        Ok(self.conditional_survival_core(k, s_x, x, t))
    }

    fn conditional_survival_core(&self, k: usize, s_x: f64, x: f64, t: f64) -> f64 {
        let mut total = 0.0;
        for (union, coeff) in &self.unions {
            let contains_k = union.binary_search(&k).is_ok();
            let v = if contains_k {
                if t >= x {
                    0.0
                } else if union.len() == 1 {
                    1.0
                } else {
                    self.kernel(union, k, s_x, t)
                }
            } else {
                self.kernel(union, k, s_x, t)
            };
            total += coeff * v;
        }
        total
    }

    /// Regression curve value `m_k(x) = E[T | X_k = x]`, by integrating the
    /// conditional survival over time with the integral split at `t = x`.
    pub fn regression(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        self.check_component(k)?;
        self.density_at(k, x)?;
        self.regression_with_tol(k, x, self.policy.abs_tol)
    }

    fn regression_with_tol(&self, k: usize, x: f64, tol: f64) -> Result<f64, EvalError> {
        let s_x = self.marginals[k].survival(x);
        let hi = self.time_horizon();
        let mut breaks = self.support_edges();
        breaks.push(x);
        let f = |t: f64| self.conditional_survival_core(k, s_x, x, t);
        Ok(integrate_piecewise(f, 0.0, hi, &breaks, tol, self.policy.rel_tol)?.value)
    }

    /// Conditional second moment `E[T^2 | X_k = x] = 2 ∫ t Pr(T > t | X_k = x) dt`.
    fn conditional_second_moment(&self, k: usize, x: f64, tol: f64) -> Result<f64, EvalError> {
        let s_x = self.marginals[k].survival(x);
        let hi = self.moment_horizon();
        let mut breaks = self.support_edges();
        breaks.push(x);
        let f = |t: f64| t * self.conditional_survival_core(k, s_x, x, t);
        let q = integrate_piecewise(f, 0.0, hi, &breaks, tol, self.policy.rel_tol)?;
        Ok(2.0 * q.value)
    }

    /// Error curve value `e_k(x) = Var[T | X_k = x]`.
    pub fn conditional_variance(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        self.check_component(k)?;
        self.density_at(k, x)?;
        let tol = self.policy.abs_tol;
        let m = self.regression_with_tol(k, x, tol)?;
        let m2 = self.conditional_second_moment(k, x, tol)?;
        Ok(m2 - m * m)
    }

    pub(crate) fn regression_quiet(&self, k: usize, x: f64, tol: f64) -> Result<f64, EvalError> {
        self.density_at(k, x)?;
        self.regression_with_tol(k, x, tol)
    }

    pub(crate) fn second_moment_quiet(&self, k: usize, x: f64, tol: f64) -> Result<f64, EvalError> {
        self.density_at(k, x)?;
        self.conditional_second_moment(k, x, tol)
    }

    /// Tabulation grid on `[F_k^{-1}(grid_tail), F_k^{-1}(1 - grid_tail)]`.
    pub fn curve_grid(&self, k: usize, points: usize) -> Result<Vec<f64>, EvalError> {
        self.check_component(k)?;
        let tail = self.policy.grid_tail;
        let m = &self.marginals[k];
        let lo = m.quantile(tail).expect("valid tail");
        let hi = m.quantile(1.0 - tail).expect("valid tail");
        let steps = points.max(2) - 1;
        Ok((0..=steps)
            .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
            .collect())
    }

    /// Tabulated regression curve on the default grid. Monotone cubic
    /// interpolation when the copula is CI-flagged (the curve is then
    /// provably nondecreasing), linear otherwise.
    pub fn regression_curve(&self, k: usize) -> Result<RegressionCurve, EvalError> {
        self.regression_curve_with(k, self.policy.grid_points)
    }

    pub fn regression_curve_with(&self, k: usize, points: usize) -> Result<RegressionCurve, EvalError> {
        let grid = self.curve_grid(k, points)?;
        let values: Result<Vec<f64>, EvalError> = grid
            .par_iter()
            .map(|&x| self.regression(k, x).map(|v| v.max(0.0)))
            .collect();
        let kind = if self.copula.is_ci() {
            InterpKind::MonotoneCubic
        } else {
            InterpKind::Linear
        };
        Ok(RegressionCurve {
            component: k,
            kind,
            table: Table::new(grid, values?, kind),
        })
    }

    /// Tabulated error curve on the default grid (always linear
    /// interpolation; the curve is generally not monotone).
    pub fn error_curve(&self, k: usize) -> Result<ErrorCurve, EvalError> {
        self.error_curve_with(k, self.policy.grid_points)
    }

    pub fn error_curve_with(&self, k: usize, points: usize) -> Result<ErrorCurve, EvalError> {
        Ok(self.curves_with(k, points)?.1)
    }

    /// Regression and error curves over one shared grid, computing the
    /// conditional moments of each grid point once.
    pub fn curves(&self, k: usize) -> Result<(RegressionCurve, ErrorCurve), EvalError> {
        self.curves_with(k, self.policy.grid_points)
    }

    pub fn curves_with(
        &self,
        k: usize,
        points: usize,
    ) -> Result<(RegressionCurve, ErrorCurve), EvalError> {
        let grid = self.curve_grid(k, points)?;
        let tol = self.policy.abs_tol;
        let moments: Result<Vec<(f64, f64)>, EvalError> = grid
            .par_iter()
            .map(|&x| {
                self.density_at(k, x)?;
                let m = self.regression_with_tol(k, x, tol)?;
                let m2 = self.conditional_second_moment(k, x, tol)?;
                Ok((m.max(0.0), (m2 - m * m).max(0.0)))
            })
            .collect();
        let moments = moments?;
        let m_values: Vec<f64> = moments.iter().map(|&(m, _)| m).collect();
        let e_values: Vec<f64> = moments.iter().map(|&(_, e)| e).collect();
        let kind = if self.copula.is_ci() {
            InterpKind::MonotoneCubic
        } else {
            InterpKind::Linear
        };
        Ok((
            RegressionCurve {
                component: k,
                kind,
                table: Table::new(grid.clone(), m_values, kind),
            },
            ErrorCurve {
                component: k,
                table: Table::new(grid, e_values, InterpKind::Linear),
            },
        ))
    }
}

fn union_coefficients(structure: &SystemStructure) -> Vec<(Vec<usize>, f64)> {
    let sets = structure.path_sets();
    let r = sets.len();
    let masks: Vec<u32> = sets
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &j| m | (1 << j)))
        .collect();
    let mut coeffs: std::collections::BTreeMap<u32, i64> = std::collections::BTreeMap::new();
    for subset in 1u32..(1u32 << r) {
        let mut union = 0u32;
        for (i, &m) in masks.iter().enumerate() {
            if subset & (1 << i) != 0 {
                union |= m;
            }
        }
        let sign = if subset.count_ones() % 2 == 1 { 1 } else { -1 };
        *coeffs.entry(union).or_insert(0) += sign;
    }
    coeffs
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(bits, c)| {
            let members: Vec<usize> = (0..MAX_DIM).filter(|&j| bits & (1 << j) != 0).collect();
            (members, c as f64)
        })
        .collect()
}

/// Tabulated `m_k`: grid, values and the interpolation rule used between
/// grid points (linear extrapolation with the boundary slope outside).
#[derive(Debug, Clone)]
pub struct RegressionCurve {
    component: usize,
    kind: InterpKind,
    table: Table,
}

impl RegressionCurve {
    pub fn component(&self) -> usize {
        self.component
    }

    pub fn interp_kind(&self) -> InterpKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        self.table.xs()
    }

    pub fn values(&self) -> &[f64] {
        self.table.ys()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.table.eval(x).max(0.0)
    }

    /// Whether the tabulated values are nondecreasing up to `-tol`.
    pub fn is_nondecreasing(&self, tol: f64) -> bool {
        self.table.ys().windows(2).all(|w| w[1] >= w[0] - tol)
    }

    /// Index pairs where the tabulation strictly descends by more than `tol`.
    pub fn descents(&self, tol: f64) -> Vec<(usize, usize)> {
        self.table
            .ys()
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] < w[0] - tol)
            .map(|(i, _)| (i, i + 1))
            .collect()
    }
}

/// Tabulated `e_k`; same shape as [`RegressionCurve`] with nonnegative values.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    component: usize,
    table: Table,
}

impl ErrorCurve {
    pub fn component(&self) -> usize {
        self.component
    }

    pub fn grid(&self) -> &[f64] {
        self.table.xs()
    }

    pub fn values(&self) -> &[f64] {
        self.table.ys()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.table.eval(x).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(rate: f64) -> Marginal {
        Marginal::exponential(rate).unwrap()
    }

    /// T = max(X_0, min(X_1, X_2)) with unit exponentials, independent.
    fn parallel_series_independent() -> SystemModel {
        let s = SystemStructure::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        SystemModel::new(s, vec![exp(1.0), exp(1.0), exp(1.0)], Copula::product(3).unwrap()).unwrap()
    }

    fn two_series(copula: Copula, l1: f64, l2: f64) -> SystemModel {
        let s = SystemStructure::new(2, vec![vec![0, 1]]).unwrap();
        SystemModel::new(s, vec![exp(l1), exp(l2)], copula).unwrap()
    }

    #[test]
    fn union_coefficients_merge_duplicates() {
        let m = parallel_series_independent();
        // unions: {0}: +1, {1,2}: +1, {0,1,2}: -1
        let terms = m.union_terms();
        assert_eq!(terms.len(), 3);
        let find = |set: &[usize]| terms.iter().find(|(u, _)| u == set).unwrap().1;
        assert_eq!(find(&[0]), 1.0);
        assert_eq!(find(&[1, 2]), 1.0);
        assert_eq!(find(&[0, 1, 2]), -1.0);
    }

    #[test]
    fn series_kernel_under_independence() {
        let m = two_series(Copula::product(2).unwrap(), 1.0, 2.0);
        let x = 1.3;
        let t = 0.4;
        let v = m.series_conditional_survival(&[0, 1], 0, x, t).unwrap();
        assert!((v - (-2.0 * t).exp()).abs() < 1e-14);
        assert_eq!(m.series_conditional_survival(&[0, 1], 0, x, 1.3).unwrap(), 0.0);
        assert_eq!(m.series_conditional_survival(&[0, 1], 0, x, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn singleton_path_set_is_an_indicator() {
        let m = parallel_series_independent();
        assert_eq!(m.series_conditional_survival(&[0], 0, 1.0, 0.5).unwrap(), 1.0);
        assert_eq!(m.series_conditional_survival(&[0], 0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(m.series_conditional_survival(&[0], 0, 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn system_conditional_survival_closed_forms() {
        let m = parallel_series_independent();
        let x = 0.8;
        // conditioning on component 0: 1 before x, survival of the pair after
        assert_eq!(m.system_conditional_survival(0, x, 0.3).unwrap(), 1.0);
        let t = 1.7_f64;
        let expect = (-2.0 * t).exp();
        assert!((m.system_conditional_survival(0, x, t).unwrap() - expect).abs() < 1e-14);
        // conditioning on component 1
        let t = 0.3_f64;
        let e1 = (-t).exp();
        let expect_before = e1 + e1 - e1 * e1;
        assert!((m.system_conditional_survival(1, x, t).unwrap() - expect_before).abs() < 1e-14);
        let t = 1.1;
        assert!((m.system_conditional_survival(1, x, t).unwrap() - (-t).exp()).abs() < 1e-14);
    }

    #[test]
    fn conditional_survival_is_nonincreasing_in_t() {
        let models = [
            parallel_series_independent(),
            two_series(Copula::fgm(-1.0, 2).unwrap(), 1.0, 2.0),
            two_series(Copula::clayton(2.0, 2).unwrap(), 1.0, 2.0),
        ];
        for m in &models {
            for k in 0..m.component_count() {
                let x = 0.9;
                let mut prev = f64::INFINITY;
                for i in 0..=60 {
                    let t = i as f64 * 0.08;
                    let v = m.system_conditional_survival(k, x, t).unwrap();
                    assert!(v <= prev + 1e-12, "k={k} t={t}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn jump_at_conditioning_time_is_positive() {
        let models = [
            parallel_series_independent(),
            two_series(Copula::clayton(1.5, 2).unwrap(), 1.0, 2.0),
        ];
        for m in &models {
            for k in 0..m.component_count() {
                let x = 1.1;
                let before = m.system_conditional_survival(k, x, x - 1e-9).unwrap();
                let at = m.system_conditional_survival(k, x, x).unwrap();
                assert!(before - at > 1e-6, "k={k}: jump {}", before - at);
            }
        }
    }

    #[test]
    fn regression_matches_closed_form_for_parallel_series() {
        let m = parallel_series_independent();
        for &x in &[0.05_f64, 0.4, 1.0, 2.3, 5.0] {
            let expect = x + 0.5 * (-2.0 * x).exp();
            let got = m.regression(0, x).unwrap();
            assert!((got - expect).abs() < 1e-8, "x={x}: {got} vs {expect}");
            let expect2 = 1.5 - (-x).exp() + 0.5 * (-2.0 * x).exp();
            let got2 = m.regression(1, x).unwrap();
            assert!((got2 - expect2).abs() < 1e-8, "x={x}: {got2} vs {expect2}");
        }
    }

    #[test]
    fn independent_series_regression_closed_form() {
        let m = two_series(Copula::product(2).unwrap(), 1.0, 2.0);
        for &x in &[0.1_f64, 0.7, 1.9] {
            let expect = (1.0 - (-2.0 * x).exp()) / 2.0;
            assert!((m.regression(0, x).unwrap() - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_single_component_system() {
        // T = X_0: the conditional law is a point mass, so e_0(x) = 0 and
        // m_0(x) = x
        let s = SystemStructure::new(1, vec![vec![0]]).unwrap();
        let m = SystemModel::new(s, vec![exp(1.0)], Copula::product(1).unwrap()).unwrap();
        for &x in &[0.2_f64, 1.0, 4.0] {
            assert!((m.regression(0, x).unwrap() - x).abs() < 1e-10);
            assert!(m.conditional_variance(0, x).unwrap().abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn density_zero_is_a_domain_error() {
        let s = SystemStructure::new(2, vec![vec![0, 1]]).unwrap();
        let m = SystemModel::new(
            s,
            vec![Marginal::uniform(0.0, 2.0).unwrap(), exp(1.0)],
            Copula::product(2).unwrap(),
        )
        .unwrap();
        match m.regression(0, 3.0) {
            Err(EvalError::DensityZero { component: 0, x }) => assert_eq!(x, 3.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(m.regression(0, 1.0).is_ok());
    }

    #[test]
    fn tower_property() {
        let models = [
            parallel_series_independent(),
            two_series(Copula::clayton(2.0, 2).unwrap(), 1.0, 2.0),
            two_series(Copula::fgm(-1.0, 2).unwrap(), 1.0, 2.0),
        ];
        for model in &models {
            let hi = model.moment_horizon();
            let mean_t = integrate_piecewise(|t| model.reliability(t), 0.0, hi, &[], 1e-10, 1e-12)
                .unwrap()
                .value;
            for k in 0..model.component_count() {
                let (lo, hi_x) = model.moment_domain(k);
                let tol = model.policy().inner_tol();
                let e_m = integrate_piecewise(
                    |x| model.regression_quiet(k, x, tol).unwrap() * model.marginals()[k].density(x),
                    lo,
                    hi_x,
                    &[],
                    1e-8,
                    1e-11,
                )
                .unwrap()
                .value;
                assert!((e_m - mean_t).abs() < 1e-6, "k={k}: E[m]={e_m} E[T]={mean_t}");
            }
        }
    }

    #[test]
    fn ci_copulas_yield_monotone_regression_curves() {
        let s = SystemStructure::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let marginals = vec![exp(1.0), exp(1.0), exp(1.0)];
        for copula in [Copula::product(3).unwrap(), Copula::clayton(2.0, 3).unwrap()] {
            let m = SystemModel::new(s.clone(), marginals.clone(), copula).unwrap();
            for k in 0..3 {
                let curve = m.regression_curve_with(k, 64).unwrap();
                assert!(curve.is_nondecreasing(1e-9), "{copula:?} k={k}");
                assert_eq!(curve.interp_kind(), InterpKind::MonotoneCubic);
            }
        }
    }

    #[test]
    fn fgm_negative_dependence_breaks_monotonicity() {
        let m = two_series(Copula::fgm(-1.0, 2).unwrap(), 1.0, 2.0);
        let curve = m.regression_curve_with(0, 200).unwrap();
        assert_eq!(curve.interp_kind(), InterpKind::Linear);
        assert!(!curve.descents(1e-9).is_empty(), "expected a strict descent");
    }

    #[test]
    fn lemma_kernel_matches_joint_survival_derivative() {
        // Oracle: Pr(X_P > t | X_i = x) = -d/dx Pr(X_i > x, X_P > t) / f_i(x),
        // with the joint survival evaluated through the survival copula.
        let cases: Vec<(SystemModel, Vec<usize>, usize)> = vec![
            (two_series(Copula::fgm(-1.0, 2).unwrap(), 1.0, 1.0), vec![0, 1], 0),
            (two_series(Copula::clayton(2.0, 2).unwrap(), 1.0, 2.0), vec![0, 1], 1),
            (parallel_series_independent(), vec![1, 2], 0),
        ];
        for (model, pset, i) in cases {
            let n = model.component_count();
            let joint = |x: f64, t: f64| {
                let mut u = vec![1.0; n];
                for &j in &pset {
                    if j != i {
                        u[j] = model.marginals()[j].survival(t);
                    }
                }
                u[i] = model.marginals()[i].survival(x);
                model.copula().survival_eval(&u).unwrap()
            };
            let (x, t) = (1.0, 0.5);
            let h = 1e-5;
            let fd = -(joint(x + h, t) - joint(x - h, t)) / (2.0 * h);
            let oracle = fd / model.marginals()[i].density(x);
            let got = model.series_conditional_survival(&pset, i, x, t).unwrap();
            assert!(
                (got - oracle).abs() < 1e-6,
                "P={pset:?} i={i}: got {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn reliability_closed_form() {
        let m = parallel_series_independent();
        for &t in &[0.0_f64, 0.3, 1.0, 2.5] {
            let e = (-t).exp();
            let expect = e + e * e - e * e * e;
            assert!((m.reliability(t) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn model_construction_guards() {
        let s = SystemStructure::new(2, vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            SystemModel::new(s.clone(), vec![exp(1.0)], Copula::product(2).unwrap()),
            Err(ModelError::MarginalCount { .. })
        ));
        assert!(matches!(
            SystemModel::new(s, vec![exp(1.0), exp(2.0)], Copula::product(3).unwrap()),
            Err(ModelError::CopulaDimension { .. })
        ));
    }
}
