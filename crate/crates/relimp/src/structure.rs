//! Coherent-system structure as minimal path sets.
//!
//! A structure over components `0..n` is a nonempty antichain of path sets in
//! which every component appears. The system lifetime is
//! `max_over_path_sets(min_within_path_set)`; the dual structure swaps the
//! roles of series and parallel (its path sets are the minimal cut sets of
//! the original). Bivariate signature matrices are computed by enumerating
//! all `n!` orderings of component lifetimes.

use std::fmt;
use thiserror::Error;

/// Default cap on `n` for the factorial signature enumeration.
pub const DEFAULT_SIGNATURE_LIMIT: usize = 10;

/// One violated structural invariant; indices are 0-based as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoComponents,
    NoPathSets,
    EmptyPathSet { set: usize },
    IndexOutOfRange { set: usize, component: usize },
    DuplicateComponent { set: usize, component: usize },
    DuplicatePathSet { first: usize, second: usize },
    ContainedPathSet { inner: usize, outer: usize },
    IrrelevantComponent { component: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoComponents => write!(f, "component count must be at least 1"),
            Violation::NoPathSets => write!(f, "at least one path set is required"),
            Violation::EmptyPathSet { set } => write!(f, "path set {set} is empty"),
            Violation::IndexOutOfRange { set, component } => {
                write!(f, "path set {set} references component {component} out of range")
            }
            Violation::DuplicateComponent { set, component } => {
                write!(f, "path set {set} lists component {component} twice")
            }
            Violation::DuplicatePathSet { first, second } => {
                write!(f, "path sets {first} and {second} are identical")
            }
            Violation::ContainedPathSet { inner, outer } => {
                write!(f, "path set {inner} is contained in path set {outer}; sets must be minimal")
            }
            Violation::IrrelevantComponent { component } => {
                write!(f, "component {component} appears in no path set")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("invalid structure: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("lifetime vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("component index {component} out of range for {n} components")]
    ComponentOutOfRange { component: usize, n: usize },
    #[error("signature enumeration needs {n}! orderings; limit is n <= {limit}")]
    FactorialLimit { n: usize, limit: usize },
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Minimal-path-set representation of a coherent system.
///
/// Component indices are 0-based. Path sets are stored sorted, with the list
/// of sets itself in lexicographic order, so structural equality is
/// representation independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemStructure {
    n: usize,
    path_sets: Vec<Vec<usize>>,
}

/// Check the coherence invariants without constructing a structure.
pub fn validate(n: usize, path_sets: &[Vec<usize>]) -> Vec<Violation> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Violation::NoComponents);
    }
    if path_sets.is_empty() {
        out.push(Violation::NoPathSets);
    }

    let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(path_sets.len());
    for (idx, set) in path_sets.iter().enumerate() {
        if set.is_empty() {
            out.push(Violation::EmptyPathSet { set: idx });
        }
        let mut s = set.clone();
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                out.push(Violation::DuplicateComponent { set: idx, component: w[0] });
            }
        }
        s.dedup();
        for &c in &s {
            if c >= n {
                out.push(Violation::IndexOutOfRange { set: idx, component: c });
            }
        }
        sorted.push(s);
    }

    for i in 0..sorted.len() {
        for j in 0..sorted.len() {
            if i == j || sorted[i].is_empty() || sorted[j].is_empty() {
                continue;
            }
            if i < j && sorted[i] == sorted[j] {
                out.push(Violation::DuplicatePathSet { first: i, second: j });
            } else if sorted[i] != sorted[j] && is_subset(&sorted[i], &sorted[j]) {
                out.push(Violation::ContainedPathSet { inner: i, outer: j });
            }
        }
    }

    let mut covered = vec![false; n];
    for set in &sorted {
        for &c in set {
            if c < n {
                covered[c] = true;
            }
        }
    }
    for (c, hit) in covered.iter().enumerate() {
        if !hit {
            out.push(Violation::IrrelevantComponent { component: c });
        }
    }
    out
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl SystemStructure {
    /// Build a structure, enforcing every coherence invariant.
    pub fn new(n: usize, path_sets: Vec<Vec<usize>>) -> Result<Self, StructureError> {
        let violations = validate(n, &path_sets);
        if !violations.is_empty() {
            return Err(StructureError::Invalid(violations));
        }
        let mut sets: Vec<Vec<usize>> = path_sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort();
        Ok(SystemStructure { n, path_sets: sets })
    }

    pub fn component_count(&self) -> usize {
        self.n
    }

    pub fn path_sets(&self) -> &[Vec<usize>] {
        &self.path_sets
    }

    /// System lifetime `max_i min_{j in P_i} x_j`.
    pub fn lifetime(&self, x: &[f64]) -> Result<f64, StructureError> {
        if x.len() != self.n {
            return Err(StructureError::LengthMismatch { expected: self.n, got: x.len() });
        }
        let mut best = f64::NEG_INFINITY;
        for set in &self.path_sets {
            let mut m = f64::INFINITY;
            for &j in set {
                if x[j] < m {
                    m = x[j];
                }
            }
            if m > best {
                best = m;
            }
        }
        Ok(best)
    }

    /// Dual structure: its minimal path sets are the minimal cut sets of
    /// `self`, computed as the minimal transversals of the path-set
    /// hypergraph.
    pub fn dual(&self) -> SystemStructure {
        let mut transversals: Vec<Vec<usize>> =
            self.path_sets[0].iter().map(|&j| vec![j]).collect();
        for set in &self.path_sets[1..] {
            let mut next: Vec<Vec<usize>> = Vec::new();
            for t in &transversals {
                if t.iter().any(|j| set.binary_search(j).is_ok()) {
                    next.push(t.clone());
                } else {
                    for &j in set {
                        let mut v = t.clone();
                        let pos = v.partition_point(|&e| e < j);
                        v.insert(pos, j);
                        next.push(v);
                    }
                }
            }
            next.sort();
            next.dedup();
            transversals = minimalize(next);
        }
        SystemStructure::new(self.n, transversals)
            .expect("dual of a coherent structure is coherent")
    }

    /// Bivariate signature matrix of `(T, X_k)` under the default `n!`
    /// enumeration limit.
    pub fn bivariate_signature(&self, k: usize) -> Result<BivariateSignature, StructureError> {
        self.bivariate_signature_with_limit(k, DEFAULT_SIGNATURE_LIMIT)
    }

    /// As [`Self::bivariate_signature`] with an explicit cap on `n`.
    ///
    /// Enumerates all `n!` orderings of the component lifetimes; for each,
    /// records which order statistic the system lifetime equals and which the
    /// `k`th component equals. The interpretation as a probability mass
    /// assumes exchangeable absolutely continuous lifetimes.
    pub fn bivariate_signature_with_limit(
        &self,
        k: usize,
        limit: usize,
    ) -> Result<BivariateSignature, StructureError> {
        if k >= self.n {
            return Err(StructureError::ComponentOutOfRange { component: k, n: self.n });
        }
        if self.n > limit {
            return Err(StructureError::FactorialLimit { n: self.n, limit });
        }
        let n = self.n;
        let mut mass = vec![0.0_f64; n * n];
        let mut count = 0u64;
        let mut ranks = vec![0.0_f64; n];
        for_each_permutation(n, |perm| {
            // perm[m] is the component holding rank m+1
            for (m, &c) in perm.iter().enumerate() {
                ranks[c] = (m + 1) as f64;
            }
            let t = self
                .lifetime(&ranks)
                .expect("rank vector has matching length") as usize;
            let j = ranks[k] as usize;
            mass[(t - 1) * n + (j - 1)] += 1.0;
            count += 1;
        });
        let total = count as f64;
        for v in &mut mass {
            *v /= total;
        }
        Ok(BivariateSignature { k, n, mass })
    }
}

/// Drop every set that contains another set of the collection.
fn minimalize(mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    sets.sort_by_key(|s| s.len());
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| is_subset(k, &s)) {
            kept.push(s);
        }
    }
    kept
}

/// Heap's algorithm; visits each permutation of `0..n` exactly once.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Joint distribution of the order-statistic indices of `(T, X_k)`:
/// `mass(i, j)` is the probability that `T` equals the `(i+1)`-th order
/// statistic while `X_k` equals the `(j+1)`-th.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSignature {
    k: usize,
    n: usize,
    mass: Vec<f64>,
}

impl BivariateSignature {
    pub fn component(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Probability mass at 0-based order-statistic indices `(i, j)`.
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.n + j]
    }

    /// Row-major mass matrix.
    pub fn mass_matrix(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Build a signature-shaped mass matrix directly (used for order tests
    /// on synthetic masses). The matrix must be `n x n`, nonnegative and sum
    /// to 1 within `1e-9`.
    pub fn from_mass(k: usize, n: usize, mass: Vec<f64>) -> Result<Self, StructureError> {
        if mass.len() != n * n || mass.iter().any(|&m| !(m >= 0.0)) {
            return Err(StructureError::Invalid(vec![Violation::NoPathSets]));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(StructureError::Invalid(vec![Violation::NoPathSets]));
        }
        Ok(BivariateSignature { k, n, mass })
    }
}
