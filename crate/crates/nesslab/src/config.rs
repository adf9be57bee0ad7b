//! Run configuration: a single JSON document with top-level keys `model`,
//! `reservoir_left`, `reservoir_right`, `tolerances`, `sweep`, `output`.
//!
//! Matrices are nested arrays of `[re, im]` pairs. Tabulated spectral
//! functions and envelopes reference two-column CSV files resolved
//! relative to the configuration file's directory.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::analysis::Tolerances;
use crate::matrix::ComplexMatrix;
use crate::models::{self, ModelSpec};
use crate::reservoir::{Envelope, LambShiftMode, ReservoirSpec, SpectralFamily, Table};

/// Environment variable overriding the rank tolerance, as an audit escape
/// hatch for borderline kernel decisions.
pub const RANK_TOL_ENV: &str = "NESSLAB_TOL_RANK";

/// Configuration problems map to exit code 64, numerical failures to 70.
#[derive(Debug, Clone)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 64,
            CliError::Numerical(_) => 70,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<crate::error::Error> for CliError {
    fn from(e: crate::error::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", deny_unknown_fields)]
pub enum ModelConfig {
    #[serde(rename = "single_spin")]
    SingleSpin {},
    #[serde(rename = "xy_two_spin")]
    XyTwoSpin { gamma1: f64, gamma2: f64 },
    #[serde(rename = "xy_anisotropic")]
    XyAnisotropic { gamma: f64 },
    #[serde(rename = "custom")]
    Custom {
        hamiltonian: MatrixData,
        coupling_left: MatrixData,
        coupling_right: MatrixData,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EnvelopeConfig {
    Named {
        name: String,
        #[serde(default)]
        value: Option<f64>,
    },
    Csv {
        csv: String,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FamilyConfig {
    #[serde(rename = "fermionic_flat")]
    FermionicFlat {},
    #[serde(rename = "fermionic_envelope")]
    FermionicEnvelope { envelope: EnvelopeConfig },
    #[serde(rename = "tabulated")]
    Tabulated { csv: String },
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig::FermionicFlat {}
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", deny_unknown_fields)]
pub enum LambShiftConfig {
    #[serde(rename = "zero")]
    Zero {},
    #[serde(rename = "principal_value")]
    PrincipalValue {
        #[serde(default)]
        cutoff: Option<f64>,
        #[serde(default)]
        points: Option<usize>,
    },
}

impl Default for LambShiftConfig {
    fn default() -> Self {
        LambShiftConfig::Zero {}
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    pub beta: f64,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub lamb_shift: LambShiftConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    #[serde(default)]
    pub cluster_tol: Option<f64>,
    #[serde(default)]
    pub rank_tol: Option<f64>,
    #[serde(default)]
    pub pos_tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    /// One of `beta_L`, `beta_R`, `gamma`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<AxisConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfigFile {
    model: ModelConfig,
    reservoir_left: ReservoirConfig,
    reservoir_right: ReservoirConfig,
    #[serde(default)]
    tolerances: TolerancesConfig,
    #[serde(default)]
    sweep: Option<SweepConfig>,
    #[serde(default)]
    output: Option<OutputConfig>,
}

/// A fully loaded configuration: file references resolved, tolerances
/// merged with defaults and the environment override.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub beta_left: f64,
    pub beta_right: f64,
    family_left: SpectralFamily,
    family_right: SpectralFamily,
    lamb_left: LambShiftConfig,
    lamb_right: LambShiftConfig,
    pub tolerances: Tolerances,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(PathBuf::from).unwrap_or_default();
        Self::from_json_str(&text, &base)
    }

    pub fn from_json_str(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let file: RunConfigFile =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;

        let beta_ok = |b: f64| b.is_finite() && b > 0.0;
        if !beta_ok(file.reservoir_left.beta) || !beta_ok(file.reservoir_right.beta) {
            return Err(CliError::Config(
                "reservoir inverse temperatures must be positive".into(),
            ));
        }

        let family_left = resolve_family(&file.reservoir_left.family, base_dir)?;
        let family_right = resolve_family(&file.reservoir_right.family, base_dir)?;

        let defaults = Tolerances::default();
        let mut tolerances = Tolerances {
            cluster_tol: file.tolerances.cluster_tol.unwrap_or(defaults.cluster_tol),
            rank_tol: file.tolerances.rank_tol.unwrap_or(defaults.rank_tol),
            pos_tol: file.tolerances.pos_tol.unwrap_or(defaults.pos_tol),
        };
        if let Ok(raw) = std::env::var(RANK_TOL_ENV) {
            let v: f64 = raw.parse().map_err(|_| {
                CliError::Config(format!("{RANK_TOL_ENV} must be a number, got `{raw}`"))
            })?;
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Config(format!(
                    "{RANK_TOL_ENV} must lie in (0,1), got {v}"
                )));
            }
            tolerances.rank_tol = v;
        }

        if let Some(sweep) = &file.sweep {
            if sweep.axes.is_empty() {
                return Err(CliError::Config("sweep.axes must not be empty".into()));
            }
            for axis in &sweep.axes {
                if !matches!(axis.parameter.as_str(), "beta_L" | "beta_R" | "gamma") {
                    return Err(CliError::Config(format!(
                        "unknown sweep parameter `{}` (use beta_L, beta_R, gamma)",
                        axis.parameter
                    )));
                }
                if axis.steps < 2 {
                    return Err(CliError::Config(format!(
                        "sweep axis `{}` needs at least 2 steps",
                        axis.parameter
                    )));
                }
                if axis.start == axis.stop {
                    return Err(CliError::Config(format!(
                        "sweep axis `{}` is degenerate: start == stop == {}",
                        axis.parameter, axis.start
                    )));
                }
                if axis.parameter.starts_with("beta") && (axis.start <= 0.0 || axis.stop <= 0.0) {
                    return Err(CliError::Config(format!(
                        "sweep axis `{}` must keep β positive",
                        axis.parameter
                    )));
                }
                if axis.parameter == "gamma"
                    && !matches!(
                        file.model,
                        ModelConfig::XyTwoSpin { .. } | ModelConfig::XyAnisotropic { .. }
                    )
                {
                    return Err(CliError::Config(
                        "gamma sweeps require an xy model".into(),
                    ));
                }
            }
        }

        let config = Self {
            model: file.model,
            beta_left: file.reservoir_left.beta,
            beta_right: file.reservoir_right.beta,
            family_left,
            family_right,
            lamb_left: file.reservoir_left.lamb_shift,
            lamb_right: file.reservoir_right.lamb_shift,
            tolerances,
            sweep: file.sweep,
            output: file.output.unwrap_or_default(),
        };
        // Surface malformed explicit matrices at load time.
        config.build_model(None)?;
        config.reservoir_left(None).validate()?;
        config.reservoir_right(None).validate()?;
        Ok(config)
    }

    /// Instantiate the model, optionally overriding the anisotropy
    /// parameter γ (valid for the xy family only).
    pub fn build_model(&self, gamma: Option<f64>) -> Result<ModelSpec, CliError> {
        let spec = match (&self.model, gamma) {
            (ModelConfig::SingleSpin {}, None) => models::single_spin(),
            (ModelConfig::XyTwoSpin { gamma1, gamma2 }, None) => {
                models::xy_two_spin(*gamma1, *gamma2)
            }
            (ModelConfig::XyAnisotropic { gamma }, None) => models::xy_anisotropic(*gamma),
            (ModelConfig::XyTwoSpin { .. } | ModelConfig::XyAnisotropic { .. }, Some(g)) => {
                models::xy_anisotropic(g)
            }
            (ModelConfig::Custom {
                hamiltonian,
                coupling_left,
                coupling_right,
            }, None) => {
                let h = parse_matrix(hamiltonian, "hamiltonian")?;
                let ql = parse_matrix(coupling_left, "coupling_left")?;
                let qr = parse_matrix(coupling_right, "coupling_right")?;
                ModelSpec::new("custom", h, ql, qr)
            }
            (_, Some(_)) => {
                return Err(CliError::Config(
                    "gamma override requires an xy model".into(),
                ))
            }
        };
        spec.validate()
            .map_err(|e| CliError::Config(format!("invalid model: {e}")))?;
        Ok(spec)
    }

    pub fn reservoir_left(&self, beta: Option<f64>) -> ReservoirSpec {
        build_reservoir(
            beta.unwrap_or(self.beta_left),
            &self.family_left,
            &self.lamb_left,
        )
    }

    pub fn reservoir_right(&self, beta: Option<f64>) -> ReservoirSpec {
        build_reservoir(
            beta.unwrap_or(self.beta_right),
            &self.family_right,
            &self.lamb_right,
        )
    }
}

fn build_reservoir(beta: f64, family: &SpectralFamily, lamb: &LambShiftConfig) -> ReservoirSpec {
    let mode = match lamb {
        LambShiftConfig::Zero {} => LambShiftMode::Zero,
        LambShiftConfig::PrincipalValue { cutoff, points } => LambShiftMode::PrincipalValue {
            cutoff: cutoff.unwrap_or(crate::reservoir::DEFAULT_PV_CUTOFF_FACTOR / beta),
            points: points.unwrap_or(crate::reservoir::DEFAULT_PV_POINTS),
        },
    };
    ReservoirSpec {
        beta,
        family: family.clone(),
        lamb_shift_mode: mode,
    }
}

fn resolve_family(config: &FamilyConfig, base_dir: &Path) -> Result<SpectralFamily, CliError> {
    Ok(match config {
        FamilyConfig::FermionicFlat {} => SpectralFamily::FermionicFlat,
        FamilyConfig::FermionicEnvelope { envelope } => {
            SpectralFamily::FermionicEnvelope(resolve_envelope(envelope, base_dir)?)
        }
        FamilyConfig::Tabulated { csv } => SpectralFamily::Tabulated(load_table(csv, base_dir)?),
    })
}

fn resolve_envelope(config: &EnvelopeConfig, base_dir: &Path) -> Result<Envelope, CliError> {
    match config {
        EnvelopeConfig::Named { name, value } => match (name.as_str(), value) {
            ("gaussian", None) => Ok(Envelope::Gaussian),
            ("ohmic", None) => Ok(Envelope::Ohmic),
            ("constant", Some(a)) if *a >= 0.0 => Ok(Envelope::Constant(*a)),
            ("constant", _) => Err(CliError::Config(
                "constant envelope needs a nonnegative `value`".into(),
            )),
            (other, _) => Err(CliError::Config(format!(
                "unknown envelope `{other}` (use gaussian, ohmic, constant, or a csv table)"
            ))),
        },
        EnvelopeConfig::Csv { csv } => Ok(Envelope::Table(load_table(csv, base_dir)?)),
    }
}

fn load_table(rel: &str, base_dir: &Path) -> Result<Table, CliError> {
    let path = base_dir.join(rel);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Table::from_csv_str(&text).map_err(|e| CliError::Config(e.to_string()))
}

/// Parse a nested `[re, im]` matrix.
pub fn parse_matrix(data: &MatrixData, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows = data.len();
    if rows == 0 {
        return Err(CliError::Config(format!("{what}: matrix must be nonempty")));
    }
    let cols = data[0].len();
    if data.iter().any(|row| row.len() != cols) {
        return Err(CliError::Config(format!("{what}: ragged matrix rows")));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(data[i][j][0], data[i][j][1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(model: &str) -> String {
        format!(
            r#"{{
  "model": {model},
  "reservoir_left": {{"beta": 1.0}},
  "reservoir_right": {{"beta": 2.0}}
}}"#
        )
    }

    #[test]
    fn parses_minimal_config_with_defaults() {
        let cfg = RunConfig::from_json_str(
            &minimal(r#"{"name": "xy_anisotropic", "gamma": 0.3}"#),
            Path::new("."),
        )
        .unwrap();
        assert_eq!(cfg.beta_left, 1.0);
        assert_eq!(cfg.beta_right, 2.0);
        assert_eq!(cfg.tolerances.cluster_tol, 1e-9);
        assert_eq!(cfg.tolerances.rank_tol, 1e-9);
        let m = cfg.build_model(None).unwrap();
        assert_eq!(m.dim(), 4);
        assert!(matches!(
            cfg.reservoir_left(None).family,
            SpectralFamily::FermionicFlat
        ));
    }

    #[test]
    fn missing_reservoir_is_config_error() {
        let text = r#"{"model": {"name": "single_spin"}, "reservoir_left": {"beta": 1.0}}"#;
        let err = RunConfig::from_json_str(text, Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    #[test]
    fn rejects_nonpositive_beta() {
        let text = r#"{
  "model": {"name": "single_spin"},
  "reservoir_left": {"beta": 0.0},
  "reservoir_right": {"beta": 2.0}
}"#;
        let err = RunConfig::from_json_str(text, Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    #[test]
    fn rejects_degenerate_sweep_axis() {
        let text = r#"{
  "model": {"name": "xy_two_spin", "gamma1": 1.0, "gamma2": 1.0},
  "reservoir_left": {"beta": 1.0},
  "reservoir_right": {"beta": 2.0},
  "sweep": {"axes": [{"parameter": "beta_R", "start": 1.0, "stop": 1.0, "steps": 2}]}
}"#;
        let err = RunConfig::from_json_str(text, Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 64);
        assert!(err.message().contains("degenerate"));
    }

    #[test]
    fn rejects_gamma_sweep_on_single_spin() {
        let text = r#"{
  "model": {"name": "single_spin"},
  "reservoir_left": {"beta": 1.0},
  "reservoir_right": {"beta": 2.0},
  "sweep": {"axes": [{"parameter": "gamma", "start": -0.5, "stop": 0.5, "steps": 3}]}
}"#;
        let err = RunConfig::from_json_str(text, Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    #[test]
    fn custom_model_round_trip() {
        let text = r#"{
  "model": {"name": "custom",
    "hamiltonian": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]],
    "coupling_left": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "coupling_right": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]},
  "reservoir_left": {"beta": 1.0},
  "reservoir_right": {"beta": 2.0}
}"#;
        let cfg = RunConfig::from_json_str(text, Path::new(".")).unwrap();
        let m = cfg.build_model(None).unwrap();
        assert!(m.hamiltonian.max_abs_diff(&crate::models::sigma_z()) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_custom_model() {
        let text = r#"{
  "model": {"name": "custom",
    "hamiltonian": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
    "coupling_left": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "coupling_right": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]},
  "reservoir_left": {"beta": 1.0},
  "reservoir_right": {"beta": 2.0}
}"#;
        let err = RunConfig::from_json_str(text, Path::new(".")).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    #[test]
    fn envelope_variants_parse() {
        let text = r#"{
  "model": {"name": "single_spin"},
  "reservoir_left": {"beta": 1.0, "family": {"type": "fermionic_envelope", "envelope": {"name": "constant", "value": 2.0}}},
  "reservoir_right": {"beta": 2.0, "family": {"type": "fermionic_envelope", "envelope": {"name": "gaussian"}},
                      "lamb_shift": {"mode": "principal_value"}}
}"#;
        let cfg = RunConfig::from_json_str(text, Path::new(".")).unwrap();
        let left = cfg.reservoir_left(None);
        assert!((left.h(0.0).unwrap() - 1.0).abs() < 1e-14, "2/(1+1)");
        let right = cfg.reservoir_right(None);
        match right.lamb_shift_mode {
            LambShiftMode::PrincipalValue { cutoff, points } => {
                assert!((cutoff - 25.0).abs() < 1e-12, "default 50/β at β=2");
                assert_eq!(points, 20_001);
            }
            _ => panic!("expected principal value mode"),
        }
    }

    #[test]
    fn beta_override_recomputes_pv_cutoff() {
        let text = r#"{
  "model": {"name": "single_spin"},
  "reservoir_left": {"beta": 1.0, "lamb_shift": {"mode": "principal_value"}},
  "reservoir_right": {"beta": 2.0}
}"#;
        let cfg = RunConfig::from_json_str(text, Path::new(".")).unwrap();
        match cfg.reservoir_left(Some(4.0)).lamb_shift_mode {
            LambShiftMode::PrincipalValue { cutoff, .. } => {
                assert!((cutoff - 12.5).abs() < 1e-12)
            }
            _ => panic!(),
        }
    }
}
