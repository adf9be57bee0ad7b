//! Deterministic report rendering.
//!
//! JSON reports serialize through `serde_json` (floats in shortest
//! round-trip form, so every number re-parses exactly); CSV cells carry 17
//! significant digits. Neither format embeds timestamps: identical inputs
//! produce byte-identical output.

use serde::Serialize;

use crate::analysis::{ThermoReport, Tolerances};
use crate::matrix::ComplexMatrix;

/// `[re, im]` nested rows, the same layout the configuration accepts.
pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Serialize)]
struct Verdicts {
    effective_coupling_left: bool,
    effective_coupling_right: bool,
    trivial_commutant_left: bool,
    trivial_commutant_right: bool,
    trivial_commutant_joint: bool,
    theorem_applicable: bool,
    strict_positivity: Option<bool>,
}

#[derive(Serialize)]
struct Thermo {
    beta_left: f64,
    beta_right: f64,
    kernel_dim: usize,
    sigma0: Option<f64>,
    sigma_left: Option<f64>,
    sigma_right: Option<f64>,
    sigma_total: Option<f64>,
    ness: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize)]
struct Meta {
    model: String,
    dimension: usize,
    cluster_tol: f64,
    rank_tol: f64,
    pos_tol: f64,
    spectral_gap: f64,
    bohr_frequencies: Vec<f64>,
    failing_frequencies_left: Vec<f64>,
    failing_frequencies_right: Vec<f64>,
}

#[derive(Serialize)]
struct CheckReport {
    verdicts: Verdicts,
    thermo: Thermo,
    meta: Meta,
}

/// Render the full check report as pretty-printed JSON.
pub fn render_check_report(
    report: &ThermoReport,
    model_name: &str,
    dimension: usize,
    tols: &Tolerances,
) -> String {
    let doc = CheckReport {
        verdicts: Verdicts {
            effective_coupling_left: report.criteria.effective_coupling_left,
            effective_coupling_right: report.criteria.effective_coupling_right,
            trivial_commutant_left: report.criteria.trivial_commutant_left,
            trivial_commutant_right: report.criteria.trivial_commutant_right,
            trivial_commutant_joint: report.criteria.trivial_commutant_joint,
            theorem_applicable: report.theorem_applicable,
            strict_positivity: report.strict_positivity,
        },
        thermo: Thermo {
            beta_left: report.betas.0,
            beta_right: report.betas.1,
            kernel_dim: report.kernel_dim,
            sigma0: report.sigma0,
            sigma_left: report.sigma_left,
            sigma_right: report.sigma_right,
            sigma_total: report.sigma_total,
            ness: report.ness.as_ref().map(matrix_to_json),
        },
        meta: Meta {
            model: model_name.to_string(),
            dimension,
            cluster_tol: tols.cluster_tol,
            rank_tol: tols.rank_tol,
            pos_tol: tols.pos_tol,
            spectral_gap: report.spectral_gap,
            bohr_frequencies: report.bohr_frequencies.clone(),
            failing_frequencies_left: report.criteria.failing_frequencies_left.clone(),
            failing_frequencies_right: report.criteria.failing_frequencies_right.clone(),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serialization");
    out.push('\n');
    out
}

/// One CSV cell with 17 significant digits; empty for absent values.
pub fn csv_number(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

/// Assemble a CSV document from a header and rows.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_cells_reparse_exactly() {
        for &x in &[
            0.202433424120052,
            -1.0 / 3.0,
            6.02e23,
            1.0e-300,
            0.862810868015791,
        ] {
            let cell = csv_number(Some(x));
            let back: f64 = cell.parse().unwrap();
            assert_eq!(back, x, "cell {cell}");
        }
        assert_eq!(csv_number(None), "");
    }

    #[test]
    fn csv_layout() {
        let doc = csv_document(
            &["a", "b"],
            &[vec!["1".into(), "2".into()], vec!["3".into(), String::new()]],
        );
        assert_eq!(doc, "a,b\n1,2\n3,\n");
    }
}
