//! Regression and error curves: `m_k(x)` is the best mean-square prediction
//! of the system lifetime from component `k`'s failure time, `e_k(x)` the
//! residual conditional variance. Tabulates both for the parallel-series
//! system and prints CSV to stdout.
//!
//! Run with `cargo run --release --example regression_curves > curves.csv`.

use relimp::specfile::{bundled, parse_spec};

fn main() {
    let model = parse_spec(bundled::PARALLEL_SERIES).unwrap().model;

    // closed forms for this system, for comparison in the output
    let m1 = |x: f64| x + 0.5 * (-2.0 * x).exp();
    let m2 = |x: f64| 1.5 - (-x).exp() + 0.5 * (-2.0 * x).exp();

    let (reg1, err1) = model.curves_with(0, 65).unwrap();
    let (reg2, err2) = model.curves_with(1, 65).unwrap();

    println!("x,m_1,e_1,m_1_closed_form,m_2,e_2,m_2_closed_form");
    for (i, &x) in reg1.grid().iter().enumerate() {
        println!(
            "{x},{},{},{},{},{},{}",
            reg1.values()[i],
            err1.values()[i],
            m1(x),
            reg2.values()[i],
            err2.values()[i],
            m2(x),
        );
    }

    eprintln!(
        "worst |m_1 - closed form| on the grid: {:.3e}",
        reg1.grid()
            .iter()
            .zip(reg1.values())
            .map(|(&x, &v)| (v - m1(x)).abs())
            .fold(0.0_f64, f64::max)
    );
    eprintln!(
        "worst |m_2 - closed form| on the grid: {:.3e}",
        reg2.grid()
            .iter()
            .zip(reg2.values())
            .map(|(&x, &v)| (v - m2(x)).abs())
            .fold(0.0_f64, f64::max)
    );
}
