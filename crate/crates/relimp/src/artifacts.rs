//! CSV emission and the run manifest.
//!
//! All CSV output uses a fixed column order, `\n` line endings and Rust's
//! shortest round-trip float formatting with a `.` decimal separator, so a
//! run is byte-reproducible from its manifest. The manifest records the
//! tool version, the full argv, a hash and embedded copy of the spec, the
//! resolved parameters and the produced files.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::conditional::{ErrorCurve, QuadraturePolicy, RegressionCurve};
use crate::importance::{ErrorStudy, ImportanceReport, Method};
use crate::ordering::{CrossingReport, CrossingVerdict};
use crate::structure::BivariateSignature;

fn float(v: f64) -> String {
    format!("{v}")
}

/// `component,r_squared,explained_variance,residual_variance,system_variance,system_mean`
/// with 1-based component ids, one row per component.
pub fn importance_csv(report: &ImportanceReport) -> String {
    let mut out = String::from(
        "component,r_squared,explained_variance,residual_variance,system_variance,system_mean\n",
    );
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.component + 1,
            float(row.r_squared),
            float(row.explained),
            float(row.residual),
            float(report.variance),
            float(report.mean_lifetime),
        ));
    }
    out
}

/// Human-readable table, components ranked by importance.
pub fn ranked_table(report: &ImportanceReport) -> String {
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| b.r_squared.total_cmp(&a.r_squared));
    let mut out = String::new();
    let method = match report.method {
        Method::Exact => "exact".to_string(),
        Method::MonteCarlo => format!(
            "monte carlo (n = {}, seed = {}{})",
            report.n.unwrap_or(0),
            report.seed.unwrap_or(0),
            report
                .repetitions
                .filter(|&r| r > 1)
                .map(|r| format!(", {r} repetitions"))
                .unwrap_or_default()
        ),
    };
    out.push_str(&format!("method: {method}\n"));
    out.push_str(&format!(
        "E(T) = {:.6}   Var(T) = {:.6}\n",
        report.mean_lifetime, report.variance
    ));
    out.push_str("rank  component  R^2         Var(m_k)    E(e_k)\n");
    for (rank, row) in rows.iter().enumerate() {
        out.push_str(&format!(
            "{:>4}  {:>9}  {:<10.6}  {:<10.6}  {:<10.6}\n",
            rank + 1,
            row.component + 1,
            row.r_squared,
            row.explained,
            row.residual,
        ));
    }
    out
}

/// `x,m,e`: the regression and error curves over their shared grid.
pub fn curve_csv(regression: &RegressionCurve, error: &ErrorCurve) -> String {
    assert_eq!(regression.grid(), error.grid(), "curves share one grid");
    let mut out = String::from("x,m,e\n");
    for ((&x, &m), &e) in regression
        .grid()
        .iter()
        .zip(regression.values())
        .zip(error.values())
    {
        out.push_str(&format!("{},{},{}\n", float(x), float(m), float(e)));
    }
    out
}

/// `t,reliability`.
pub fn reliability_csv(times: &[f64], survival: &[f64]) -> String {
    let mut out = String::from("t,reliability\n");
    for (&t, &s) in times.iter().zip(survival) {
        out.push_str(&format!("{},{}\n", float(t), float(s)));
    }
    out
}

/// `i,j,mass` triples of the bivariate signature, 1-based order-statistic
/// indices.
pub fn signature_csv(signature: &BivariateSignature) -> String {
    let n = signature.order();
    let mut out = String::from("i,j,mass\n");
    for i in 0..n {
        for j in 0..n {
            out.push_str(&format!("{},{},{}\n", i + 1, j + 1, float(signature.mass(i, j))));
        }
    }
    out
}

/// `first,second,verdict,sign_changes,reason` per compared pair
/// (1-based component ids).
pub fn crossing_csv(reports: &[CrossingReport]) -> String {
    let mut out = String::from("first,second,verdict,sign_changes,reason\n");
    for report in reports {
        let (verdict, reason) = match &report.verdict {
            CrossingVerdict::FirstAtMostSecond => ("first<=second", String::new()),
            CrossingVerdict::SecondAtMostFirst => ("second<=first", String::new()),
            CrossingVerdict::Inconclusive { reason } => ("inconclusive", reason.replace(',', ";")),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            report.first + 1,
            report.second + 1,
            verdict,
            report.sign_changes,
            reason,
        ));
    }
    out
}

/// One-row dispersion summary of a Monte Carlo error study.
pub fn error_study_csv(study: &ErrorStudy) -> String {
    let mut out = String::from(
        "component,n,repetitions,exact_r_squared,mean_error,sd_error,q1,median,q3\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        study.component + 1,
        study.n,
        study.repetitions,
        float(study.exact),
        float(study.mean),
        float(study.sd),
        float(study.quartiles[0]),
        float(study.quartiles[1]),
        float(study.quartiles[2]),
    ));
    out
}

/// `repetition,error` rows of an error study.
pub fn error_samples_csv(study: &ErrorStudy) -> String {
    let mut out = String::from("repetition,error\n");
    for (r, e) in study.errors.iter().enumerate() {
        out.push_str(&format!("{},{}\n", r, float(*e)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecInfo {
    pub path: String,
    pub sha256: String,
    pub content: String,
}

/// Resolved run parameters; `None` fields did not apply to the command.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunParameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    /// 1-based component id.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Everything needed to reproduce a run byte for byte: re-invoking the tool
/// with `argv` against a file holding `spec.content` rewrites identical
/// artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: ToolInfo,
    pub command: String,
    pub argv: Vec<String>,
    pub spec: SpecInfo,
    pub parameters: RunParameters,
    pub policy: QuadraturePolicy,
    pub outputs: Vec<String>,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn manifest_json(manifest: &Manifest) -> String {
    let mut s = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::Copula;
    use crate::importance::importance_exact;
    use crate::marginals::Marginal;
    use crate::structure::SystemStructure;
    use crate::SystemModel;

    fn model() -> SystemModel {
        let s = SystemStructure::new(2, vec![vec![0, 1]]).unwrap();
        SystemModel::new(
            s,
            vec![
                Marginal::exponential(1.0).unwrap(),
                Marginal::exponential(2.0).unwrap(),
            ],
            Copula::product(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn importance_csv_layout() {
        let report = importance_exact(&model()).unwrap();
        let csv = importance_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "component,r_squared,explained_variance,residual_variance,system_variance,system_mean"
        );
        assert_eq!(csv.lines().count(), 3);
        let first_row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = first_row.split(',').collect();
        assert_eq!(fields[0], "1");
        let r2: f64 = fields[1].parse().unwrap();
        assert!((r2 - 0.2).abs() < 1e-6, "{first_row}");
    }

    #[test]
    fn ranked_table_orders_by_importance() {
        let report = importance_exact(&model()).unwrap();
        let table = ranked_table(&report);
        let rank1 = table.lines().find(|l| l.trim_start().starts_with('1') && l.contains("  2  ")).unwrap();
        assert!(rank1.contains('2'), "component 2 ranks first: {table}");
    }

    #[test]
    fn curve_csv_layout() {
        let m = model();
        let (reg, err) = m.curves_with(0, 16).unwrap();
        let csv = curve_csv(&reg, &err);
        assert_eq!(csv.lines().next().unwrap(), "x,m,e");
        assert_eq!(csv.lines().count(), 17);
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), 3);
        }
    }

    #[test]
    fn manifest_is_deterministic() {
        let manifest = Manifest {
            tool: ToolInfo { name: "relimp", version: "0.0.0" },
            command: "importance".into(),
            argv: vec!["importance".into(), "spec.toml".into()],
            spec: SpecInfo {
                path: "spec.toml".into(),
                sha256: sha256_hex("spec"),
                content: "spec".into(),
            },
            parameters: RunParameters { method: Some("exact".into()), ..Default::default() },
            policy: QuadraturePolicy::default(),
            outputs: vec!["importance.csv".into()],
        };
        assert_eq!(manifest_json(&manifest), manifest_json(&manifest));
        assert_eq!(sha256_hex("spec"), sha256_hex("spec"));
        assert_eq!(sha256_hex("spec").len(), 64);
    }
}
