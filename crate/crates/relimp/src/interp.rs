//! Tabulated-curve interpolation: piecewise linear and monotone cubic
//! (Fritsch–Carlson) with linear end-slope extrapolation.

/// Interpolation rule for a tabulated curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpKind {
    Linear,
    /// Shape-preserving cubic Hermite (PCHIP slopes).
    MonotoneCubic,
}

#[derive(Debug, Clone)]
pub(crate) struct Table {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Hermite slopes; present only for `MonotoneCubic`.
    slopes: Option<Vec<f64>>,
}

impl Table {
    /// Build a table over strictly increasing abscissae.
    pub(crate) fn new(xs: Vec<f64>, ys: Vec<f64>, kind: InterpKind) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2, "table needs at least two points");
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let slopes = match kind {
            InterpKind::Linear => None,
            InterpKind::MonotoneCubic => Some(pchip_slopes(&xs, &ys)),
        };
        Table { xs, ys, slopes }
    }

    pub(crate) fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub(crate) fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Evaluate at `x`; outside the grid the curve continues linearly with
    /// the boundary slope.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.end_slope(0) * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.end_slope(n - 1) * (x - self.xs[n - 1]);
        }
        let seg = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p => p - 1,
        };
        let h = self.xs[seg + 1] - self.xs[seg];
        let t = (x - self.xs[seg]) / h;
        match &self.slopes {
            None => self.ys[seg] * (1.0 - t) + self.ys[seg + 1] * t,
            Some(m) => {
                let (y0, y1) = (self.ys[seg], self.ys[seg + 1]);
                let (m0, m1) = (m[seg] * h, m[seg + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + m0 * (t3 - 2.0 * t2 + t)
                    + y1 * (-2.0 * t3 + 3.0 * t2)
                    + m1 * (t3 - t2)
            }
        }
    }

    fn end_slope(&self, idx: usize) -> f64 {
        match &self.slopes {
            Some(m) => m[idx],
            None => {
                let n = self.xs.len();
                if idx == 0 {
                    (self.ys[1] - self.ys[0]) / (self.xs[1] - self.xs[0])
                } else {
                    (self.ys[n - 1] - self.ys[n - 2]) / (self.xs[n - 1] - self.xs[n - 2])
                }
            }
        }
    }
}

/// Fritsch–Carlson slopes: harmonic-mean weighting on the interior, shape
/// clamped one-sided estimates at the ends. Monotone data yields a monotone
/// interpolant; non-monotone data is handled without overshoot.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let mut m = vec![0.0; n];

    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }

    m[0] = end_slope(h[0], h.get(1).copied().unwrap_or(h[0]), d[0], d.get(1).copied().unwrap_or(d[0]));
    m[n - 1] = end_slope(
        h[n - 2],
        if n >= 3 { h[n - 3] } else { h[n - 2] },
        d[n - 2],
        if n >= 3 { d[n - 3] } else { d[n - 2] },
    );
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}
