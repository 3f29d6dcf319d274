//! Negative dependence can make a regression curve non-monotone: knowing
//! that a component failed LATER can lower the predicted system lifetime.
//!
//! The two-component series system with Exp(1), Exp(2) marginals under the
//! FGM copula with theta = -1 exhibits this; under any CI-flagged copula
//! (product, Clayton, FGM with theta >= 0) the curves are provably
//! nondecreasing.
//!
//! Run with `cargo run --release --example nonmonotone_regression`.

use relimp::specfile::{bundled, parse_spec};
use relimp::Copula;

fn main() {
    let model = parse_spec(bundled::FGM_NEGATIVE_SERIES).unwrap().model;
    let curve = model.regression_curve_with(0, 200).unwrap();

    println!("series system, Exp(1) and Exp(2), FGM theta = -1");
    println!("CI-flagged copula: {}", model.copula().is_ci());

    let descents = curve.descents(1e-9);
    println!("strict descents on a 200-point grid: {}", descents.len());
    if let Some(&(lo, hi)) = descents.first() {
        println!(
            "first descent: m_1({:.4}) = {:.6} -> m_1({:.4}) = {:.6}",
            curve.grid()[lo],
            curve.values()[lo],
            curve.grid()[hi],
            curve.values()[hi],
        );
    }
    let peak = curve
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!(
        "local maximum near x = {:.4}: m_1 = {:.6}",
        curve.grid()[peak.0],
        peak.1
    );

    // the same structure and marginals under independence are monotone
    let independent = relimp::SystemModel::new(
        model.structure().clone(),
        model.marginals().to_vec(),
        Copula::product(2).unwrap(),
    )
    .unwrap();
    let flat = independent.regression_curve_with(0, 200).unwrap();
    println!(
        "same system under independence: nondecreasing = {}",
        flat.is_nondecreasing(1e-9)
    );
}
