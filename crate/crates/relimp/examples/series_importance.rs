//! Importance indices of series systems with independent exponential
//! components: the closed form against the quadrature path, and how the
//! index reacts to the failure rates.
//!
//! Run with `cargo run --release --example series_importance`.

use relimp::copulas::Copula;
use relimp::importance::{oracles, r_squared_exact};
use relimp::marginals::Marginal;
use relimp::structure::SystemStructure;
use relimp::SystemModel;

fn series(rates: &[f64]) -> SystemModel {
    let n = rates.len();
    let structure = SystemStructure::new(n, vec![(0..n).collect()]).unwrap();
    let marginals = rates.iter().map(|&l| Marginal::exponential(l).unwrap()).collect();
    SystemModel::new(structure, marginals, Copula::product(n).unwrap()).unwrap()
}

fn main() {
    println!("two-component series, rates (1, 2):");
    let model = series(&[1.0, 2.0]);
    for k in 0..2 {
        let exact = r_squared_exact(&model, k).unwrap();
        let oracle = oracles::series_exponential_r_squared(&[1.0, 2.0], k);
        println!(
            "  component {}: R^2 = {:.9} (quadrature), {:.9} (closed form), diff {:.2e}",
            k + 1,
            exact.r_squared,
            oracle,
            (exact.r_squared - oracle).abs()
        );
    }

    println!("\nthe weaker component dominates:");
    for rates in [[1.0, 1.0], [1.0, 2.0], [1.0, 5.0], [1.0, 20.0]] {
        let r: Vec<f64> = (0..2)
            .map(|k| oracles::series_exponential_r_squared(&rates, k))
            .collect();
        println!("  rates ({:>4}, {:>4}): R_1^2 = {:.4}  R_2^2 = {:.4}", rates[0], rates[1], r[0], r[1]);
    }

    println!("\nfour heterogeneous components in series:");
    let rates = [0.5, 1.0, 1.5, 2.0];
    let model = series(&rates);
    for k in 0..4 {
        let exact = r_squared_exact(&model, k).unwrap();
        let oracle = oracles::series_exponential_r_squared(&rates, k);
        println!(
            "  component {} (rate {:>3}): R^2 = {:.6}  closed form {:.6}",
            k + 1,
            rates[k],
            exact.r_squared,
            oracle
        );
    }
}
