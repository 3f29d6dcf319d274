//! Closed-form regression curves, variances and importance indices for the
//! catalogued systems. These are pure formula evaluations, independent of
//! the quadrature path, and serve as oracles in tests and examples.

/// `m_i(x)` for a series system of independent exponentials.
pub fn series_exponential_regression(rates: &[f64], i: usize, x: f64) -> f64 {
    let lam: f64 = rates
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &l)| l)
        .sum();
    (1.0 - (-lam * x).exp()) / lam
}

/// `R_i^2 = lambda_i / (lambda_i + 2 sum_{j != i} lambda_j)` for a series
/// system of independent exponentials.
pub fn series_exponential_r_squared(rates: &[f64], i: usize) -> f64 {
    let rest: f64 = rates
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &l)| l)
        .sum();
    rates[i] / (rates[i] + 2.0 * rest)
}

/// `Var(T) = 1 / (sum lambda)^2` for a series system of independent
/// exponentials.
pub fn series_exponential_variance(rates: &[f64]) -> f64 {
    let total: f64 = rates.iter().sum();
    1.0 / (total * total)
}

/// `m_1(x)` for the two-component series system with exponential marginals
/// and FGM dependence.
pub fn fgm_series_exponential_regression(l1: f64, l2: f64, theta: f64, x: f64) -> f64 {
    let base = (1.0 - (-l2 * x).exp()) / l2;
    let bracket = (1.0 - (-l2 * x).exp()) - 0.5 * (1.0 - (-2.0 * l2 * x).exp());
    base + theta / l2 * (1.0 - 2.0 * (-l1 * x).exp()) * bracket
}

/// Closed forms for `T = max(X_1, min(X_2, X_3))` with independent
/// exponential components.
#[derive(Debug, Clone, Copy)]
pub struct ParallelSeriesExponential {
    rates: [f64; 3],
}

impl ParallelSeriesExponential {
    pub fn new(rates: [f64; 3]) -> Self {
        assert!(rates.iter().all(|&l| l > 0.0));
        ParallelSeriesExponential { rates }
    }

    pub fn rates(&self) -> [f64; 3] {
        self.rates
    }

    /// Regression curve of the component in the singleton path set.
    pub fn m1(&self, x: f64) -> f64 {
        let [_, l2, l3] = self.rates;
        let pair = l2 + l3;
        x + (-pair * x).exp() / pair
    }

    /// Regression curve of the first component of the series pair.
    pub fn m2(&self, x: f64) -> f64 {
        let [l1, _, l3] = self.rates;
        Self::pair_regression(l1, l3, x)
    }

    /// Regression curve of the second component of the series pair
    /// (swap the roles of the pair members in `m2`).
    pub fn m3(&self, x: f64) -> f64 {
        let [l1, l2, _] = self.rates;
        Self::pair_regression(l1, l2, x)
    }

    fn pair_regression(l1: f64, partner: f64, x: f64) -> f64 {
        1.0 / l1 + 1.0 / partner - 1.0 / (l1 + partner) - (-partner * x).exp() / partner
            + (-(l1 + partner) * x).exp() / (l1 + partner)
    }

    pub fn regression(&self, k: usize, x: f64) -> f64 {
        match k {
            0 => self.m1(x),
            1 => self.m2(x),
            2 => self.m3(x),
            _ => panic!("component {k} out of range"),
        }
    }

    pub fn mean_lifetime(&self) -> f64 {
        let [l1, l2, l3] = self.rates;
        let total = l1 + l2 + l3;
        1.0 / l1 + 1.0 / (l2 + l3) - 1.0 / total
    }

    pub fn second_moment(&self) -> f64 {
        let [l1, l2, l3] = self.rates;
        let total = l1 + l2 + l3;
        let pair = l2 + l3;
        2.0 / (l1 * l1) + 2.0 / (pair * pair) - 2.0 / (total * total)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean_lifetime();
        self.second_moment() - m * m
    }

    /// `kappa` entering the second moment of `m_2(X_2)`, for pair partner
    /// rates `(a, b)`.
    pub fn kappa(a: f64, b: f64) -> f64 {
        ((a + b) * (a + b) - a * b) / (a * b * (a + b))
    }

    /// `Var(m_k(X_k))` in closed form.
    pub fn explained_variance(&self, k: usize) -> f64 {
        let [l1, l2, l3] = self.rates;
        match k {
            0 => {
                let pair = l2 + l3;
                let total = l1 + l2 + l3;
                let second = 2.0 / (l1 * l1)
                    + l1 / (pair * pair * (l1 + 2.0 * pair))
                    + 2.0 * l1 / (pair * total * total);
                second - self.mean_lifetime().powi(2)
            }
            1 => Self::pair_explained(l1, l2, l3, self.mean_lifetime()),
            2 => Self::pair_explained(l1, l3, l2, self.mean_lifetime()),
            _ => panic!("component {k} out of range"),
        }
    }

    /// Second moment of the pair-component regression minus `E(T)^2`;
    /// `own` is the conditioning component's rate, `partner` its series
    /// partner.
    fn pair_explained(l1: f64, own: f64, partner: f64, mean: f64) -> f64 {
        let kappa = Self::kappa(l1, partner);
        let second = kappa * kappa
            + own / (partner * partner * (own + 2.0 * partner))
            - 2.0 * own * kappa / (partner * (own + partner))
            + own / ((l1 + partner) * (l1 + partner) * (2.0 * l1 + own + 2.0 * partner))
            + 2.0 * own * kappa / ((l1 + partner) * (l1 + own + partner))
            - 2.0 * own / (partner * (l1 + partner) * (l1 + own + 2.0 * partner));
        second - mean * mean
    }

    pub fn r_squared(&self, k: usize) -> f64 {
        self.explained_variance(k) / self.variance()
    }
}

/// Exponential failure rates of the four-component ship control system
/// (manual valves, motor, bridge panel, machine panel).
pub fn ship_rates() -> [f64; 4] {
    [1.0 / 60.0, 1.0 / 50.0, 1.0 / 45.0, 1.0 / 45.0]
}

/// Closed-form regression curves for the ship control system
/// `T = max(X_1, min(X_2, X_3), min(X_2, X_4))` with the exponential rates
/// of [`ship_rates`] and four-dimensional FGM dependence of parameter
/// `theta`.
#[derive(Debug, Clone, Copy)]
pub struct ShipSystem {
    pub theta: f64,
}

impl ShipSystem {
    pub fn new(theta: f64) -> Self {
        assert!((-1.0..=1.0).contains(&theta));
        ShipSystem { theta }
    }

    // All exponentials are written with their net (nonpositive) exponent in
    // units of x/900 so large x cannot overflow before cancellation.
    pub fn m1(&self, x: f64) -> f64 {
        let th = self.theta;
        let e = |c: f64| (c * x / 900.0).exp();
        let inner = 290472.0 * e(-131.0) - 145236.0 * e(-116.0) - 343824.0 * e(-113.0)
            - 701974.0 * e(-111.0)
            + 171912.0 * e(-98.0)
            + 350987.0 * e(-96.0)
            + 863968.0 * e(-93.0)
            + 443352.0 * e(-91.0)
            - 431984.0 * e(-78.0)
            - 221676.0 * e(-76.0)
            - 580944.0 * e(-73.0);
        900.0 / 19.0 * e(-38.0) + x - 75.0 * th / 1403948.0 * inner
            - 450.0 / 29.0 * (1.0 + th) * e(-58.0)
    }

    pub fn m2(&self, x: f64) -> f64 {
        let th = self.theta;
        let e = |c: f64| (c * x / 900.0).exp();
        // pair(c) = (-2 + exp(18 x/900)) * exp(c x/900), already reduced
        let pair = |c: f64| -2.0 * e(c) + e(c + 18.0);
        let tail = 5985.0 * pair(-128.0) * th - 6930.0 * pair(-113.0) * th
            - 14630.0 * pair(-108.0) * th
            + 17556.0 * pair(-93.0) * th
            + 9405.0 * pair(-88.0) * th
            - 11970.0 * (-2.0 * th * e(-73.0) + (1.0 + th) * e(-55.0))
            + 2.0 * (-584.0 * th * e(-18.0) + 5985.0 + 292.0 * th);
        150.0 - 90.0 * e(-20.0) - 45.0 / 2.0 * (1.0 - e(-40.0))
            - 360.0 / 7.0 * (1.0 - e(-35.0))
            + 2.0 / 1463.0 * tail
    }

    pub fn m3(&self, x: f64) -> f64 {
        let th = self.theta;
        let e = |c: f64| (c * x / 900.0).exp();
        110.0 + 450.0 / 19.0 * e(-38.0) - 50.0 * e(-18.0) - 300.0 / 11.0 * (1.0 - e(-33.0))
            - 900.0 / 53.0 * th * e(-126.0)
            + 1800.0 / 91.0 * th * e(-111.0)
            + 225.0 / 11.0 * th * e(-108.0)
            + 67050.0 / 2279.0 * th * e(-106.0)
            - 1800.0 / 73.0 * th * e(-93.0)
            - 227700.0 / 6461.0 * th * e(-91.0)
            - 13725.0 / 374.0 * th * e(-88.0)
            - 450.0 / 43.0 * th * e(-86.0)
            + 179100.0 / 3869.0 * th * e(-73.0)
            + 900.0 / 71.0 * th * e(-71.0)
            + 225.0 / 17.0 * th * e(-68.0)
            - 900.0 / 53.0 * (1.0 + th) * e(-53.0)
    }

    /// The two panel components play symmetric roles.
    pub fn m4(&self, x: f64) -> f64 {
        self.m3(x)
    }

    pub fn regression(&self, k: usize, x: f64) -> f64 {
        match k {
            0 => self.m1(x),
            1 => self.m2(x),
            2 => self.m3(x),
            3 => self.m4(x),
            _ => panic!("component {k} out of range"),
        }
    }
}
