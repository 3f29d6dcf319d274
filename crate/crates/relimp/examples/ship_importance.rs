//! Ranking the components of a four-component ship control system
//! (manual valves / motor / bridge panel / machine panel) under FGM
//! dependence: exact indices across dependence levels, Monte Carlo
//! estimates, and the Weibull wear-out variant.
//!
//! Run with `cargo run --release --example ship_importance`.

use relimp::copulas::Copula;
use relimp::importance::{importance_exact, importance_mc, oracles};
use relimp::marginals::Marginal;
use relimp::specfile::{bundled, parse_spec};
use relimp::SystemModel;

fn main() {
    let base = parse_spec(bundled::SHIP_EXPONENTIAL).unwrap().model;

    println!("exponential lifetimes (means 60, 50, 45, 45):");
    println!("{:>6}  {:>10} {:>10} {:>10} {:>10}", "theta", "R_1^2", "R_2^2", "R_3^2", "R_4^2");
    for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let model = SystemModel::new(
            base.structure().clone(),
            base.marginals().to_vec(),
            Copula::fgm(theta, 4).unwrap(),
        )
        .unwrap();
        let exact = importance_exact(&model).unwrap();
        print!("{theta:>6}  ");
        for row in &exact.rows {
            print!("{:>10.7} ", row.r_squared);
        }
        println!();
    }
    println!("the ranking 1 > 2 > 3 = 4 is stable across dependence levels\n");

    println!("Monte Carlo at n = 5000 (seed 7), theta = 1:");
    let mc = importance_mc(&base, 5000, 7).unwrap();
    for row in &mc.rows {
        println!("  component {}: estimate {:.7}", row.component + 1, row.r_squared);
    }

    println!("\nclosed-form regression curves at theta = 1 (hours of expected system life):");
    let oracle = oracles::ShipSystem::new(1.0);
    println!("{:>6}  {:>9} {:>9} {:>9}", "x", "m_1", "m_2", "m_3=m_4");
    for x in [0.0, 30.0, 60.0, 120.0] {
        println!(
            "{x:>6}  {:>9.4} {:>9.4} {:>9.4}",
            oracle.m1(x),
            oracle.m2(x),
            oracle.m3(x)
        );
    }

    println!("\nWeibull wear-out variant (scale 11, shape 1.5, theta = 1):");
    let weibull = SystemModel::new(
        base.structure().clone(),
        vec![Marginal::weibull(11.0, 1.5).unwrap(); 4],
        Copula::fgm(1.0, 4).unwrap(),
    )
    .unwrap();
    let report = importance_exact(&weibull).unwrap();
    for row in &report.rows {
        println!("  component {}: R^2 = {:.6}", row.component + 1, row.r_squared);
    }
    println!("wear-out softens the valves' dominance and shifts weight to the motor");
}
