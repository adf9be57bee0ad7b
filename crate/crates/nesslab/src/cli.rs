//! Command implementations behind the `nesslab` binary: criteria checks,
//! parameter sweeps, and time evolution, all emitting deterministic
//! reports.

use std::path::PathBuf;

use num_complex::Complex64;

use crate::analysis;
use crate::config::{parse_matrix, CliError, RunConfig};
use crate::error::Error;
use crate::lindblad;
use crate::matrix::ComplexMatrix;
use crate::models;
use crate::report;

/// Report text plus the process exit code (0 = theorem applicable,
/// 2 = hypotheses fail; the computation is reported either way).
pub struct CheckOutcome {
    pub report: String,
    pub exit_code: i32,
}

pub fn run_check(config: &RunConfig) -> Result<CheckOutcome, CliError> {
    let model = config.build_model(None)?;
    let left = config.reservoir_left(None);
    let right = config.reservoir_right(None);
    let thermo = analysis::theorem_check(&model, &left, &right, &config.tolerances)?;
    let report = report::render_check_report(
        &thermo,
        &model.name,
        model.dim(),
        &config.tolerances,
    );
    let exit_code = if thermo.theorem_applicable { 0 } else { 2 };
    Ok(CheckOutcome { report, exit_code })
}

const SWEEP_COLUMNS: [&str; 10] = [
    "sigma0",
    "sigma_left",
    "sigma_right",
    "sigma_total",
    "kernel_dim",
    "effective_coupling_left",
    "effective_coupling_right",
    "trivial_commutant_left",
    "trivial_commutant_right",
    "error",
];

pub fn run_sweep(config: &RunConfig) -> Result<String, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep command needs a `sweep` block".into()))?;

    let axes: Vec<(&str, Vec<f64>)> = sweep
        .axes
        .iter()
        .map(|a| (a.parameter.as_str(), linspace(a.start, a.stop, a.steps)))
        .collect();

    let mut header: Vec<&str> = axes.iter().map(|(name, _)| *name).collect();
    header.extend_from_slice(&SWEEP_COLUMNS);

    // Grid points in row-major axis order: the first axis varies slowest.
    let mut rows = Vec::new();
    let total: usize = axes.iter().map(|(_, vs)| vs.len()).product();
    for index in 0..total {
        let mut rem = index;
        let mut values = vec![0.0; axes.len()];
        for (k, (_, vs)) in axes.iter().enumerate().rev() {
            values[k] = vs[rem % vs.len()];
            rem /= vs.len();
        }
        let mut beta_left = None;
        let mut beta_right = None;
        let mut gamma = None;
        for ((name, _), &v) in axes.iter().zip(values.iter()) {
            match *name {
                "beta_L" => beta_left = Some(v),
                "beta_R" => beta_right = Some(v),
                "gamma" => gamma = Some(v),
                _ => unreachable!("validated at load"),
            }
        }

        let mut row: Vec<String> = values.iter().map(|&v| report::csv_number(Some(v))).collect();
        match sweep_point(config, beta_left, beta_right, gamma) {
            Ok(thermo) => {
                row.push(report::csv_number(thermo.sigma0));
                row.push(report::csv_number(thermo.sigma_left));
                row.push(report::csv_number(thermo.sigma_right));
                row.push(report::csv_number(thermo.sigma_total));
                row.push(thermo.kernel_dim.to_string());
                row.push(thermo.criteria.effective_coupling_left.to_string());
                row.push(thermo.criteria.effective_coupling_right.to_string());
                row.push(thermo.criteria.trivial_commutant_left.to_string());
                row.push(thermo.criteria.trivial_commutant_right.to_string());
                row.push(String::new());
            }
            Err(e) => {
                for _ in 0..SWEEP_COLUMNS.len() - 1 {
                    row.push(String::new());
                }
                row.push(e.to_string().replace(',', ";"));
            }
        }
        rows.push(row);
    }
    Ok(report::csv_document(&header, &rows))
}

fn sweep_point(
    config: &RunConfig,
    beta_left: Option<f64>,
    beta_right: Option<f64>,
    gamma: Option<f64>,
) -> Result<analysis::ThermoReport, Error> {
    let model = config
        .build_model(gamma)
        .map_err(|e| Error::InvalidTable {
            reason: e.message().to_string(),
        })?;
    let left = config.reservoir_left(beta_left);
    let right = config.reservoir_right(beta_right);
    analysis::theorem_check(&model, &left, &right, &config.tolerances)
}

/// Starting point for a trajectory.
#[derive(Debug, Clone)]
pub enum InitialState {
    GibbsLeft,
    GibbsRight,
    MaximallyMixed,
    File(PathBuf),
}

impl InitialState {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "gibbs-left" => Ok(Self::GibbsLeft),
            "gibbs-right" => Ok(Self::GibbsRight),
            "maximally-mixed" => Ok(Self::MaximallyMixed),
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
                _ => Err(CliError::Config(format!(
                    "unknown initial state `{other}` (use gibbs-left, gibbs-right, maximally-mixed, file:<path>)"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub t_max: f64,
    pub steps: usize,
    pub initial: InitialState,
}

pub fn run_evolve(config: &RunConfig, opts: &EvolveOptions) -> Result<String, CliError> {
    if !opts.t_max.is_finite() || opts.t_max <= 0.0 {
        return Err(CliError::Config("t_max must be positive".into()));
    }
    if opts.steps < 2 {
        return Err(CliError::Config("steps must be at least 2".into()));
    }

    let model = config.build_model(None)?;
    let left = config.reservoir_left(None);
    let right = config.reservoir_right(None);
    let tols = &config.tolerances;

    let k_left = lindblad::davies_generator(&model.hamiltonian, &model.coupling_left, &left, tols.cluster_tol)?;
    let k_right = lindblad::davies_generator(&model.hamiltonian, &model.coupling_right, &right, tols.cluster_tol)?;
    let k = lindblad::total_generator(&k_left, &k_right)?;
    let target = analysis::ness(&k, tols.rank_tol)?;

    let rho0 = initial_state(&opts.initial, &model, &left, &right)?;
    lindblad::validate_density_matrix(&rho0, 1e-8)
        .map_err(|e| CliError::Config(format!("invalid initial state: {e}")))?;

    let dt = opts.t_max / (opts.steps - 1) as f64;
    let propagator = k.exponential(dt)?;

    let header = ["t", "energy", "entropy_production", "trace_distance"];
    let mut rows = Vec::with_capacity(opts.steps);
    let mut rho = rho0;
    for step in 0..opts.steps {
        let t = step as f64 * dt;
        let energy = model.hamiltonian.matmul(&rho).trace().re;
        let entropy = match analysis::entropy_production_total(
            &model.hamiltonian,
            (left.beta, right.beta),
            &k_left,
            &k_right,
            &rho,
        ) {
            Ok(s) => Some(s),
            Err(Error::NotFaithful { .. }) => Some(f64::NAN),
            Err(e) => return Err(e.into()),
        };
        let distance = analysis::trace_distance(&rho, &target)?;
        rows.push(vec![
            report::csv_number(Some(t)),
            report::csv_number(Some(energy)),
            report::csv_number(entropy),
            report::csv_number(Some(distance)),
        ]);
        if step + 1 < opts.steps {
            rho = propagator.apply(&rho)?.hermitize();
        }
    }
    Ok(report::csv_document(&header, &rows))
}

fn initial_state(
    initial: &InitialState,
    model: &models::ModelSpec,
    left: &crate::reservoir::ReservoirSpec,
    right: &crate::reservoir::ReservoirSpec,
) -> Result<ComplexMatrix, CliError> {
    match initial {
        InitialState::GibbsLeft => Ok(models::gibbs(&model.hamiltonian, left.beta)?),
        InitialState::GibbsRight => Ok(models::gibbs(&model.hamiltonian, right.beta)?),
        InitialState::MaximallyMixed => {
            let d = model.dim();
            Ok(ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)))
        }
        InitialState::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            let data: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let m = parse_matrix(&data, "initial state")?;
            if m.rows() != model.dim() {
                return Err(CliError::Config(format!(
                    "initial state is {}×{} but the model dimension is {}",
                    m.rows(),
                    m.cols(),
                    model.dim()
                )));
            }
            Ok(m)
        }
    }
}

/// Write `content` to the configured output path, or stdout when no path
/// is set. The configured format, when present, must match the command's.
pub fn write_output(content: &str, config: &RunConfig, expected_format: &str) -> Result<(), CliError> {
    if let Some(format) = &config.output.format {
        if format != expected_format {
            return Err(CliError::Config(format!(
                "output.format `{format}` does not match this command's `{expected_format}`"
            )));
        }
    }
    match &config.output.path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Numerical(format!("cannot write {path}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    let dx = (stop - start) / (steps - 1) as f64;
    (0..steps).map(|k| start + k as f64 * dx).collect()
}
