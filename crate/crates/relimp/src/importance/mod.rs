//! The regression importance index: the share of system-lifetime variance
//! explained by one component, `R_k^2 = Var(m_k(X_k)) / Var(T)`.
//!
//! Two computation paths are provided. The exact path integrates the
//! regression and error curves against the conditioning marginal with
//! adaptive quadrature. The Monte Carlo path simulates component lifetimes
//! through the survival copula, evaluates the (tabulated) regression curve
//! at the conditioning coordinates and forms the sample-variance ratio,
//! using the same draws for the numerator and denominator.

pub mod oracles;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conditional::{EvalError, RegressionCurve, SystemModel};
use crate::copulas::derive_seed;
use crate::quad::integrate_piecewise;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    #[serde(rename = "mc")]
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImportanceError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("sample size {n} is too small; at least 2 draws are required")]
    SampleTooSmall { n: usize },
    #[error("simulated system lifetimes are degenerate (zero sample variance)")]
    DegenerateSample,
}

/// Importance of one component.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComponentImportance {
    /// 0-based component index.
    pub component: usize,
    /// `Var(m_k(X_k)) / Var(T)`.
    pub r_squared: f64,
    /// `Var(m_k(X_k))`.
    pub explained: f64,
    /// `E(e_k(X_k))`.
    pub residual: f64,
}

/// Importance of every requested component plus system-level moments and
/// estimator metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ImportanceReport {
    pub mean_lifetime: f64,
    pub variance: f64,
    pub rows: Vec<ComponentImportance>,
    pub method: Method,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub repetitions: Option<usize>,
    /// Quadrature tolerance (exact) or curve-tabulation tolerance (MC).
    pub tolerance: f64,
}

/// `(E(T), Var(T))` by integrating the system reliability:
/// `E(T) = ∫ Pr(T > t) dt`, `E(T^2) = 2 ∫ t Pr(T > t) dt`.
pub fn system_moments(model: &SystemModel) -> Result<(f64, f64), EvalError> {
    let hi = model.moment_horizon();
    let tol = model.policy().inner_tol();
    let rel = model.policy().rel_tol;
    let breaks = model.support_edges();
    let mean = integrate_piecewise(|t| model.reliability(t), 0.0, hi, &breaks, tol, rel)?.value;
    let second =
        2.0 * integrate_piecewise(|t| t * model.reliability(t), 0.0, hi, &breaks, tol, rel)?.value;
    Ok((mean, second - mean * mean))
}

fn integrate_checked(
    mut f: impl FnMut(f64) -> Result<f64, EvalError>,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
    rel_tol: f64,
) -> Result<f64, EvalError> {
    let mut pending: Option<EvalError> = None;
    let wrapped = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            pending = Some(e);
            f64::NAN
        }
    };
    let outcome = integrate_piecewise(wrapped, a, b, breaks, tol, rel_tol);
    if let Some(e) = pending {
        return Err(e);
    }
    Ok(outcome?.value)
}

fn exact_row(
    model: &SystemModel,
    k: usize,
    mean_t: f64,
    var_t: f64,
) -> Result<ComponentImportance, EvalError> {
    let (lo, hi) = model.moment_domain(k);
    let inner = model.policy().inner_tol();
    let outer = model.policy().outer_tol();
    let density = |x: f64| model.marginals()[k].density(x);

    let rel = model.policy().rel_tol;
    // the regression and error curves kink where a partner marginal's
    // support ends; split the conditioning integrals there as well
    let breaks = model.support_edges();
    let second_of_m = integrate_checked(
        |x| {
            let m = model.regression_quiet(k, x, inner)?;
            Ok(m * m * density(x))
        },
        lo,
        hi,
        &breaks,
        outer,
        rel,
    )?;
    let explained = second_of_m - mean_t * mean_t;

    // residual route kept independent of the `explained` route: the error
    // curve integrates the conditional second moment, so the law of total
    // variance is a genuine cross-check rather than an identity
    let residual = integrate_checked(
        |x| {
            let m = model.regression_quiet(k, x, inner)?;
            let m2 = model.second_moment_quiet(k, x, inner)?;
            Ok((m2 - m * m) * density(x))
        },
        lo,
        hi,
        &breaks,
        outer,
        rel,
    )?;

    Ok(ComponentImportance {
        component: k,
        r_squared: explained / var_t,
        explained,
        residual,
    })
}

/// Exact importance of component `k` by quadrature.
pub fn r_squared_exact(model: &SystemModel, k: usize) -> Result<ComponentImportance, EvalError> {
    let (mean_t, var_t) = system_moments(model)?;
    exact_row(model, k, mean_t, var_t)
}

/// Exact importance of every component.
pub fn importance_exact(model: &SystemModel) -> Result<ImportanceReport, EvalError> {
    let (mean_t, var_t) = system_moments(model)?;
    let rows: Result<Vec<ComponentImportance>, EvalError> = (0..model.component_count())
        .into_par_iter()
        .map(|k| exact_row(model, k, mean_t, var_t))
        .collect();
    Ok(ImportanceReport {
        mean_lifetime: mean_t,
        variance: var_t,
        rows: rows?,
        method: Method::Exact,
        n: None,
        seed: None,
        repetitions: None,
        tolerance: model.policy().abs_tol,
    })
}

fn sample_mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

struct McSamples {
    lifetimes: Vec<f64>,
    system: Vec<f64>,
}

fn simulate(model: &SystemModel, n: usize, seed: u64) -> Result<McSamples, ImportanceError> {
    if n < 2 {
        return Err(ImportanceError::SampleTooSmall { n });
    }
    let dim = model.component_count();
    let draws = model.copula().sample(n, seed);
    let mut lifetimes = vec![0.0_f64; n * dim];
    let mut system = vec![0.0_f64; n];
    for (i, row) in draws.rows().enumerate() {
        let x = &mut lifetimes[i * dim..(i + 1) * dim];
        model.lifetimes_from_draw(row, x);
        system[i] = model
            .structure()
            .lifetime(x)
            .expect("lifetime vector built with matching length");
    }
    Ok(McSamples { lifetimes, system })
}

fn mc_row_from_samples(
    model: &SystemModel,
    k: usize,
    curve: &RegressionCurve,
    samples: &McSamples,
) -> Result<ComponentImportance, ImportanceError> {
    let dim = model.component_count();
    let n = samples.system.len();
    let m_vals: Vec<f64> = (0..n)
        .map(|i| curve.eval(samples.lifetimes[i * dim + k]))
        .collect();
    let (_, var_t) = sample_mean_var(&samples.system);
    if var_t <= 0.0 {
        return Err(ImportanceError::DegenerateSample);
    }
    let (_, var_m) = sample_mean_var(&m_vals);
    Ok(ComponentImportance {
        component: k,
        r_squared: var_m / var_t,
        explained: var_m,
        residual: var_t - var_m,
    })
}

/// Monte Carlo importance of component `k` from `n` seeded draws. The
/// regression curve is tabulated once and interpolated at the sampled
/// conditioning values.
pub fn r_squared_mc(
    model: &SystemModel,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<ComponentImportance, ImportanceError> {
    let curve = model.regression_curve(k)?;
    let samples = simulate(model, n, seed)?;
    mc_row_from_samples(model, k, &curve, &samples)
}

/// Monte Carlo importance of every component from one common set of draws.
pub fn importance_mc(
    model: &SystemModel,
    n: usize,
    seed: u64,
) -> Result<ImportanceReport, ImportanceError> {
    let curves: Result<Vec<RegressionCurve>, EvalError> = (0..model.component_count())
        .into_par_iter()
        .map(|k| model.regression_curve(k))
        .collect();
    let curves = curves?;
    let samples = simulate(model, n, seed)?;
    let (mean_t, var_t) = sample_mean_var(&samples.system);
    let rows: Result<Vec<ComponentImportance>, ImportanceError> = curves
        .iter()
        .enumerate()
        .map(|(k, curve)| mc_row_from_samples(model, k, curve, &samples))
        .collect();
    Ok(ImportanceReport {
        mean_lifetime: mean_t,
        variance: var_t,
        rows: rows?,
        method: Method::MonteCarlo,
        n: Some(n),
        seed: Some(seed),
        repetitions: None,
        tolerance: model.policy().abs_tol,
    })
}

/// Dispersion study of the Monte Carlo error `R_k^2 - estimate`.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorStudy {
    pub component: usize,
    pub n: usize,
    pub repetitions: usize,
    /// Exact index the estimates are compared against.
    pub exact: f64,
    /// Per-repetition errors `exact - estimate`, in repetition order.
    pub errors: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    /// First quartile, median, third quartile of the errors.
    pub quartiles: [f64; 3],
}

/// Run `repetitions` independent Monte Carlo estimates of `R_k^2` at sample
/// size `n` and summarize the error dispersion. Repetition `r` uses the
/// derived seed `derive_seed(seed, r)`.
pub fn error_study(
    model: &SystemModel,
    k: usize,
    n: usize,
    repetitions: usize,
    seed: u64,
) -> Result<ErrorStudy, ImportanceError> {
    if repetitions == 0 {
        return Err(ImportanceError::SampleTooSmall { n: 0 });
    }
    let exact = r_squared_exact(model, k)?.r_squared;
    let curve = model.regression_curve(k)?;
    let errors: Result<Vec<f64>, ImportanceError> = (0..repetitions)
        .into_par_iter()
        .map(|r| {
            let samples = simulate(model, n, derive_seed(seed, r as u64))?;
            let row = mc_row_from_samples(model, k, &curve, &samples)?;
            Ok(exact - row.r_squared)
        })
        .collect();
    let errors = errors?;
    let (mean, var) = if errors.len() >= 2 {
        sample_mean_var(&errors)
    } else {
        (errors[0], 0.0)
    };
    let quartiles = [
        quantile(&errors, 0.25),
        quantile(&errors, 0.5),
        quantile(&errors, 0.75),
    ];
    Ok(ErrorStudy {
        component: k,
        n,
        repetitions,
        exact,
        errors,
        mean,
        sd: var.sqrt(),
        quartiles,
    })
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(values: &[f64], p: f64) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}
