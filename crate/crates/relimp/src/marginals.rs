//! Component lifetime distributions.
//!
//! Three parametric families cover the catalogued systems: exponential,
//! Weibull and uniform. Each exposes the full functional interface the
//! conditional formulas need: survival, cdf, density, quantile and
//! inverse-transform sampling.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarginalError {
    #[error("{family} parameter {name} = {value} is out of range")]
    Parameter { family: &'static str, name: &'static str, value: f64 },
    #[error("quantile probability {p} is outside [0, 1)")]
    ProbabilityOutOfRange { p: f64 },
}

/// A component lifetime distribution with support contained in `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marginal {
    /// Constant failure rate `rate > 0`.
    Exponential { rate: f64 },
    /// Survival `exp(-(t/scale)^shape)` with `scale, shape > 0`.
    Weibull { scale: f64, shape: f64 },
    /// Uniform on `(lower, upper)` with `0 <= lower < upper`.
    Uniform { lower: f64, upper: f64 },
}

impl Marginal {
    pub fn exponential(rate: f64) -> Result<Self, MarginalError> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(MarginalError::Parameter { family: "exponential", name: "rate", value: rate });
        }
        Ok(Marginal::Exponential { rate })
    }

    pub fn weibull(scale: f64, shape: f64) -> Result<Self, MarginalError> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(MarginalError::Parameter { family: "weibull", name: "scale", value: scale });
        }
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(MarginalError::Parameter { family: "weibull", name: "shape", value: shape });
        }
        Ok(Marginal::Weibull { scale, shape })
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self, MarginalError> {
        if !(lower >= 0.0) || !lower.is_finite() {
            return Err(MarginalError::Parameter { family: "uniform", name: "lower", value: lower });
        }
        if !(upper > lower) || !upper.is_finite() {
            return Err(MarginalError::Parameter { family: "uniform", name: "upper", value: upper });
        }
        Ok(Marginal::Uniform { lower, upper })
    }

    /// Survival function; 1 for negative arguments.
    pub fn survival(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 1.0;
        }
        match *self {
            Marginal::Exponential { rate } => (-rate * t).exp(),
            Marginal::Weibull { scale, shape } => (-(t / scale).powf(shape)).exp(),
            Marginal::Uniform { lower, upper } => {
                if t <= lower {
                    1.0
                } else if t >= upper {
                    0.0
                } else {
                    (upper - t) / (upper - lower)
                }
            }
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            Marginal::Exponential { rate } => -(-rate * t).exp_m1(),
            Marginal::Weibull { scale, shape } => -(-(t / scale).powf(shape)).exp_m1(),
            Marginal::Uniform { .. } => 1.0 - self.survival(t),
        }
    }

    /// Density; zero outside the support. Strictly positive on the open
    /// support interior, which is what the conditional formulas require.
    pub fn density(&self, t: f64) -> f64 {
        match *self {
            Marginal::Exponential { rate } => {
                if t < 0.0 {
                    0.0
                } else {
                    rate * (-rate * t).exp()
                }
            }
            Marginal::Weibull { scale, shape } => {
                if t < 0.0 {
                    0.0
                } else if t == 0.0 {
                    match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => f64::INFINITY,
                        Some(std::cmp::Ordering::Equal) => 1.0 / scale,
                        _ => 0.0,
                    }
                } else {
                    let z = t / scale;
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
                }
            }
            Marginal::Uniform { lower, upper } => {
                if t > lower && t < upper {
                    1.0 / (upper - lower)
                } else {
                    0.0
                }
            }
        }
    }

    /// Quantile `F^{-1}(p)` for `p in [0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64, MarginalError> {
        if !(0.0..1.0).contains(&p) {
            return Err(MarginalError::ProbabilityOutOfRange { p });
        }
        Ok(match *self {
            Marginal::Exponential { rate } => -(-p).ln_1p() / rate,
            Marginal::Weibull { scale, shape } => scale * (-(-p).ln_1p()).powf(1.0 / shape),
            Marginal::Uniform { lower, upper } => lower + p * (upper - lower),
        })
    }

    /// Inverse-transform sample: identical to `quantile(u)`.
    pub fn sample(&self, u: f64) -> Result<f64, MarginalError> {
        self.quantile(u)
    }

    /// Upper bound of the support, or the `1 - eps` quantile when the
    /// support is unbounded. Used to truncate time integrals.
    pub fn upper_time(&self, eps: f64) -> f64 {
        match *self {
            Marginal::Uniform { upper, .. } => upper,
            _ => self.quantile(1.0 - eps).expect("1 - eps is a valid probability"),
        }
    }

    /// Whether the support is a bounded interval.
    pub fn bounded_support(&self) -> bool {
        matches!(self, Marginal::Uniform { .. })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Marginal::Exponential { .. } => "exponential",
            Marginal::Weibull { .. } => "weibull",
            Marginal::Uniform { .. } => "uniform",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<Marginal> {
        vec![
            Marginal::exponential(1.0).unwrap(),
            Marginal::exponential(2.0).unwrap(),
            Marginal::exponential(1.0 / 60.0).unwrap(),
            Marginal::weibull(11.0, 1.5).unwrap(),
            Marginal::weibull(2.0, 0.8).unwrap(),
            Marginal::uniform(0.0, 2.0).unwrap(),
            Marginal::uniform(1.0, 4.0).unwrap(),
        ]
    }

    #[test]
    fn parameter_validation() {
        assert!(Marginal::exponential(0.0).is_err());
        assert!(Marginal::exponential(-1.0).is_err());
        assert!(Marginal::weibull(1.0, 0.0).is_err());
        assert!(Marginal::weibull(-1.0, 1.0).is_err());
        assert!(Marginal::uniform(-0.1, 1.0).is_err());
        assert!(Marginal::uniform(1.0, 1.0).is_err());
    }

    #[test]
    fn survival_examples() {
        assert_eq!(Marginal::exponential(1.0).unwrap().survival(0.0), 1.0);
        let half = Marginal::exponential(2.0).unwrap().survival(0.5 * 2.0_f64.ln());
        assert!((half - 0.5).abs() < 1e-15);
        assert_eq!(Marginal::weibull(11.0, 1.5).unwrap().survival(0.0), 1.0);
        assert_eq!(Marginal::exponential(1.0).unwrap().survival(-1.0), 1.0);
    }

    #[test]
    fn quantile_examples() {
        let e = Marginal::exponential(1.0).unwrap();
        assert_eq!(e.quantile(0.0).unwrap(), 0.0);
        let p = 1.0 - (-1.0_f64).exp();
        assert!((e.quantile(p).unwrap() - 1.0).abs() < 1e-12);
        assert!(e.quantile(1.0).is_err());
        assert!(e.quantile(-0.1).is_err());
        let u = Marginal::uniform(0.0, 2.0).unwrap();
        assert_eq!(u.density(1.0), 0.5);
        assert_eq!(u.density(3.0), 0.0);
    }

    #[test]
    fn sample_is_quantile() {
        for m in families() {
            for &u in &[0.0, 0.25, 0.5, 0.9, 0.999] {
                assert_eq!(m.sample(u).unwrap(), m.quantile(u).unwrap());
            }
        }
    }

    #[test]
    fn cdf_plus_survival_is_one() {
        for m in families() {
            for i in 0..100 {
                let t = i as f64 * 0.37;
                let s = m.cdf(t) + m.survival(t);
                assert!((s - 1.0).abs() < 1e-14, "{m:?} at t={t}: {s}");
            }
        }
    }

    #[test]
    fn quantile_round_trips() {
        for m in families() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let x = m.quantile(p).unwrap();
                assert!((m.cdf(x) - p).abs() <= 1e-9, "{m:?} at p={p}");
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf_on_the_support() {
        for m in families() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let x = m.quantile(p).unwrap();
                let back = m.quantile(m.cdf(x)).unwrap();
                assert!((back - x).abs() <= 1e-10 * x.max(1.0), "{m:?} at p={p}");
            }
        }
    }

    #[test]
    fn survival_is_nonincreasing() {
        for m in families() {
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let t = i as f64 * 0.11;
                let s = m.survival(t);
                assert!(s <= prev + 1e-15);
                assert!((0.0..=1.0).contains(&s));
                prev = s;
            }
        }
    }

    #[test]
    fn density_matches_cdf_derivative() {
        for m in families() {
            let hi = m.upper_time(1e-3);
            for i in 1..60 {
                let t = hi * i as f64 / 60.0;
                let f = m.density(t);
                if f == 0.0 || !f.is_finite() {
                    continue;
                }
                let h = 1e-6 * t.max(1.0);
                // keep the stencil inside the support for the uniform family
                if let Marginal::Uniform { lower, upper } = m {
                    if t - h <= lower || t + h >= upper {
                        continue;
                    }
                }
                let fd = (m.cdf(t + h) - m.cdf(t - h)) / (2.0 * h);
                assert!(
                    (fd - f).abs() <= 1e-6 * f.max(1.0),
                    "{m:?} at t={t}: fd={fd} f={f}"
                );
            }
        }
    }

    #[test]
    fn density_integrates_to_one() {
        for m in families() {
            // integrate piecewise between the known non-smooth points
            let (lo, hi) = match m {
                Marginal::Uniform { lower, upper } => (lower, upper),
                _ => (0.0, m.upper_time(1e-13)),
            };
            let split = lo + (hi - lo) * 1e-6;
            // near the left end a Weibull with shape < 1 has an integrable pole
            let head = crate::quad::integrate(|t| m.density(t), lo, split, 1e-11, 0.0)
                .map(|q| q.value)
                .unwrap_or_else(|_| m.cdf(split) - m.cdf(lo));
            let body = crate::quad::integrate(|t| m.density(t), split, hi, 1e-11, 1e-13).unwrap();
            let total = head + body.value;
            assert!((total - 1.0).abs() < 1e-6, "{m:?}: {total}");
        }
    }

    #[test]
    fn upper_time_for_bounded_support() {
        let u = Marginal::uniform(1.0, 4.0).unwrap();
        assert_eq!(u.upper_time(1e-10), 4.0);
        assert!(u.bounded_support());
        assert!(!Marginal::exponential(1.0).unwrap().bounded_support());
    }
}
