//! C ABI over the nesslab library.
//!
//! Handles are opaque pointers created and freed by this library; every
//! fallible call returns a [`NesslabStatus`] and records a human-readable
//! message retrievable through [`nesslab_last_error_message`]. Matrices
//! cross the boundary as row-major interleaved `re, im` doubles of length
//! `2·dim·dim`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nesslab::analysis::{theorem_check, ThermoReport, Tolerances};
use nesslab::matrix::ComplexMatrix;
use nesslab::models::{self, ModelSpec};
use nesslab::report::render_check_report;
use nesslab::reservoir::{Envelope, LambShiftMode, ReservoirSpec, Table};

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NesslabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalError = 3,
    /// The requested quantity was not computed (degenerate kernel or
    /// non-faithful stationary state).
    Unavailable = 4,
    BufferTooSmall = 5,
}

/// Boolean verdicts of a report, addressable by index.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NesslabCriterion {
    EffectiveCouplingLeft = 0,
    EffectiveCouplingRight = 1,
    TrivialCommutantLeft = 2,
    TrivialCommutantRight = 3,
    TrivialCommutantJoint = 4,
    TheoremApplicable = 5,
    StrictPositivity = 6,
}

/// Opaque small-system handle (Hamiltonian plus two couplings).
pub struct NesslabModel {
    inner: ModelSpec,
}

/// Opaque reservoir handle.
pub struct NesslabReservoir {
    inner: ReservoirSpec,
}

/// Opaque analysis result handle.
pub struct NesslabReport {
    thermo: ThermoReport,
    model_name: String,
    dimension: usize,
    tolerances: Tolerances,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let text = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|cell| *cell.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|cell| *cell.borrow_mut() = None);
}

/// Copy of the last error message on this thread, or null when the last
/// call succeeded. Free with [`nesslab_string_free`].
#[no_mangle]
pub extern "C" fn nesslab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|cell| match &*cell.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Free a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must be a pointer previously returned by a nesslab function and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nesslab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Single spin-½ model: H = σ₃, Q_L = Q_R = σ₁.
#[no_mangle]
pub extern "C" fn nesslab_model_single_spin() -> *mut NesslabModel {
    clear_error();
    Box::into_raw(Box::new(NesslabModel {
        inner: models::single_spin(),
    }))
}

/// Two XY-coupled spins with couplings σ₁⊗1 and 1⊗σ₁.
#[no_mangle]
pub extern "C" fn nesslab_model_xy_two_spin(gamma1: f64, gamma2: f64) -> *mut NesslabModel {
    clear_error();
    Box::into_raw(Box::new(NesslabModel {
        inner: models::xy_two_spin(gamma1, gamma2),
    }))
}

fn matrix_from_raw(data: *const f64, dim: usize) -> Option<ComplexMatrix> {
    if data.is_null() {
        return None;
    }
    let slice = unsafe { std::slice::from_raw_parts(data, 2 * dim * dim) };
    Some(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let base = 2 * (i * dim + j);
        nesslab::Complex64::new(slice[base], slice[base + 1])
    }))
}

/// Build a model from three row-major interleaved `re, im` arrays of
/// length `2·dim·dim`. Returns null (with an error message) when a
/// pointer is null or an operator is not Hermitian.
///
/// # Safety
/// Each non-null pointer must reference at least `2·dim·dim` readable
/// doubles that stay valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_model_custom(
    dim: usize,
    hamiltonian: *const f64,
    coupling_left: *const f64,
    coupling_right: *const f64,
) -> *mut NesslabModel {
    clear_error();
    if dim == 0 {
        set_error("dimension must be positive");
        return std::ptr::null_mut();
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let h = matrix_from_raw(hamiltonian, dim)?;
        let ql = matrix_from_raw(coupling_left, dim)?;
        let qr = matrix_from_raw(coupling_right, dim)?;
        Some(ModelSpec::new("custom", h, ql, qr))
    }));
    match result {
        Ok(Some(spec)) => match spec.validate() {
            Ok(()) => Box::into_raw(Box::new(NesslabModel { inner: spec })),
            Err(e) => {
                set_error(e.to_string());
                std::ptr::null_mut()
            }
        },
        Ok(None) => {
            set_error("null matrix pointer");
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic while building the model");
            std::ptr::null_mut()
        }
    }
}

/// System dimension, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_model_dim(model: *const NesslabModel) -> usize {
    match unsafe { model.as_ref() } {
        Some(m) => m.inner.dim(),
        None => 0,
    }
}

/// # Safety
/// `model` must come from a nesslab model constructor and not be freed
/// twice. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn nesslab_model_free(model: *mut NesslabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

fn reservoir_handle(beta: f64, family: fn(f64) -> ReservoirSpec) -> *mut NesslabReservoir {
    clear_error();
    if !beta.is_finite() || beta <= 0.0 {
        set_error(format!("inverse temperature beta must be positive, got {beta}"));
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(NesslabReservoir {
        inner: family(beta),
    }))
}

/// Flat fermionic spectral function `h(E) = 1/(1+e^{−βE})`.
#[no_mangle]
pub extern "C" fn nesslab_reservoir_flat(beta: f64) -> *mut NesslabReservoir {
    reservoir_handle(beta, ReservoirSpec::flat)
}

/// Unit-coupling normalization `h(E) = 2/(1+e^{−βE})`, under which the
/// two-spin closed-form flux and entropy values hold.
#[no_mangle]
pub extern "C" fn nesslab_reservoir_unit_coupling(beta: f64) -> *mut NesslabReservoir {
    reservoir_handle(beta, ReservoirSpec::unit_coupling)
}

/// Gaussian envelope `h(E) = e^{−E²}/(1+e^{−βE})`.
#[no_mangle]
pub extern "C" fn nesslab_reservoir_gaussian(beta: f64) -> *mut NesslabReservoir {
    reservoir_handle(beta, |b| ReservoirSpec::with_envelope(b, Envelope::Gaussian))
}

/// Ohmic envelope `h(E) = |E|e^{−|E|}/(1+e^{−βE})`; not effectively
/// coupled at zero frequency.
#[no_mangle]
pub extern "C" fn nesslab_reservoir_ohmic(beta: f64) -> *mut NesslabReservoir {
    reservoir_handle(beta, |b| ReservoirSpec::with_envelope(b, Envelope::Ohmic))
}

/// Tabulated spectral function from parallel `energies`/`values` arrays
/// of length `len` (ascending energies, nonnegative values). The table is
/// validated against detailed balance at `beta`.
///
/// # Safety
/// `energies` and `values` must reference `len` readable doubles each.
#[no_mangle]
pub unsafe extern "C" fn nesslab_reservoir_tabulated(
    beta: f64,
    energies: *const f64,
    values: *const f64,
    len: usize,
) -> *mut NesslabReservoir {
    clear_error();
    if energies.is_null() || values.is_null() {
        set_error("null table pointer");
        return std::ptr::null_mut();
    }
    if !beta.is_finite() || beta <= 0.0 {
        set_error(format!("inverse temperature beta must be positive, got {beta}"));
        return std::ptr::null_mut();
    }
    let es = std::slice::from_raw_parts(energies, len).to_vec();
    let hs = std::slice::from_raw_parts(values, len).to_vec();
    let table = match Table::new(es, hs) {
        Ok(t) => t,
        Err(e) => {
            set_error(e.to_string());
            return std::ptr::null_mut();
        }
    };
    let spec = ReservoirSpec::tabulated(beta, table);
    if let Err(e) = spec.validate() {
        set_error(e.to_string());
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(NesslabReservoir { inner: spec }))
}

/// Switch the reservoir's Lamb shift to principal-value quadrature.
/// Non-positive `cutoff` or zero `points` select the defaults
/// (cutoff 50/β, 20001 nodes).
///
/// # Safety
/// `reservoir` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_reservoir_set_principal_value_lamb_shift(
    reservoir: *mut NesslabReservoir,
    cutoff: f64,
    points: usize,
) -> NesslabStatus {
    clear_error();
    let Some(res) = (unsafe { reservoir.as_mut() }) else {
        set_error("null reservoir handle");
        return NesslabStatus::NullPointer;
    };
    let beta = res.inner.beta;
    let mode = LambShiftMode::PrincipalValue {
        cutoff: if cutoff > 0.0 {
            cutoff
        } else {
            nesslab::reservoir::DEFAULT_PV_CUTOFF_FACTOR / beta
        },
        points: if points > 0 {
            points
        } else {
            nesslab::reservoir::DEFAULT_PV_POINTS
        },
    };
    res.inner.lamb_shift_mode = mode;
    NesslabStatus::Ok
}

/// Evaluate the spectral function at `energy`.
///
/// # Safety
/// `reservoir` and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_reservoir_h(
    reservoir: *const NesslabReservoir,
    energy: f64,
    out: *mut f64,
) -> NesslabStatus {
    clear_error();
    let Some(res) = (unsafe { reservoir.as_ref() }) else {
        set_error("null reservoir handle");
        return NesslabStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NesslabStatus::NullPointer;
    }
    match res.inner.h(energy) {
        Ok(v) => {
            unsafe { *out = v };
            NesslabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            NesslabStatus::InvalidArgument
        }
    }
}

/// # Safety
/// `reservoir` must come from a nesslab reservoir constructor and not be
/// freed twice. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn nesslab_reservoir_free(reservoir: *mut NesslabReservoir) {
    if !reservoir.is_null() {
        drop(Box::from_raw(reservoir));
    }
}

/// Run the full analysis: assumption checks, generators, stationary
/// state, flux, and entropy production. Tolerances that are zero or
/// negative select the defaults (cluster 1e−9, rank 1e−9, positivity
/// 1e−12). On success `*out` owns a fresh report handle.
///
/// # Safety
/// `model`, `left`, `right`, and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_theorem_check(
    model: *const NesslabModel,
    left: *const NesslabReservoir,
    right: *const NesslabReservoir,
    cluster_tol: f64,
    rank_tol: f64,
    pos_tol: f64,
    out: *mut *mut NesslabReport,
) -> NesslabStatus {
    clear_error();
    let (Some(model), Some(left), Some(right)) = (unsafe { model.as_ref() }, unsafe {
        left.as_ref()
    }, unsafe { right.as_ref() }) else {
        set_error("null handle passed to nesslab_theorem_check");
        return NesslabStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NesslabStatus::NullPointer;
    }
    let defaults = Tolerances::default();
    let tols = Tolerances {
        cluster_tol: if cluster_tol > 0.0 { cluster_tol } else { defaults.cluster_tol },
        rank_tol: if rank_tol > 0.0 { rank_tol } else { defaults.rank_tol },
        pos_tol: if pos_tol > 0.0 { pos_tol } else { defaults.pos_tol },
    };
    let result = catch_unwind(AssertUnwindSafe(|| {
        theorem_check(&model.inner, &left.inner, &right.inner, &tols)
    }));
    match result {
        Ok(Ok(thermo)) => {
            let report = NesslabReport {
                thermo,
                model_name: model.inner.name.clone(),
                dimension: model.inner.dim(),
                tolerances: tols,
            };
            unsafe { *out = Box::into_raw(Box::new(report)) };
            NesslabStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            NesslabStatus::NumericalError
        }
        Err(_) => {
            set_error("internal panic during analysis");
            NesslabStatus::NumericalError
        }
    }
}

/// Kernel dimension of the total generator, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_kernel_dim(report: *const NesslabReport) -> usize {
    match unsafe { report.as_ref() } {
        Some(r) => r.thermo.kernel_dim,
        None => 0,
    }
}

/// Smallest nonzero singular value of the generator; NaN for null input.
///
/// # Safety
/// `report` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_spectral_gap(report: *const NesslabReport) -> f64 {
    match unsafe { report.as_ref() } {
        Some(r) => r.thermo.spectral_gap,
        None => f64::NAN,
    }
}

/// Boolean verdict: 1 true, 0 false, −1 for null input or a verdict that
/// was not computed.
///
/// # Safety
/// `report` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_criterion(
    report: *const NesslabReport,
    criterion: NesslabCriterion,
) -> i32 {
    let Some(r) = (unsafe { report.as_ref() }) else {
        return -1;
    };
    let value = match criterion {
        NesslabCriterion::EffectiveCouplingLeft => Some(r.thermo.criteria.effective_coupling_left),
        NesslabCriterion::EffectiveCouplingRight => {
            Some(r.thermo.criteria.effective_coupling_right)
        }
        NesslabCriterion::TrivialCommutantLeft => Some(r.thermo.criteria.trivial_commutant_left),
        NesslabCriterion::TrivialCommutantRight => Some(r.thermo.criteria.trivial_commutant_right),
        NesslabCriterion::TrivialCommutantJoint => Some(r.thermo.criteria.trivial_commutant_joint),
        NesslabCriterion::TheoremApplicable => Some(r.thermo.theorem_applicable),
        NesslabCriterion::StrictPositivity => r.thermo.strict_positivity,
    };
    match value {
        Some(true) => 1,
        Some(false) => 0,
        None => -1,
    }
}

fn scalar_getter(
    report: *const NesslabReport,
    out: *mut f64,
    pick: impl Fn(&ThermoReport) -> Option<f64>,
) -> NesslabStatus {
    clear_error();
    let Some(r) = (unsafe { report.as_ref() }) else {
        set_error("null report handle");
        return NesslabStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NesslabStatus::NullPointer;
    }
    match pick(&r.thermo) {
        Some(v) => {
            unsafe { *out = v };
            NesslabStatus::Ok
        }
        None => {
            set_error("quantity not computed for this configuration");
            NesslabStatus::Unavailable
        }
    }
}

/// Steady-state energy flux `tr(H·K_L·ρ₀)`.
///
/// # Safety
/// `report` and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_sigma0(
    report: *const NesslabReport,
    out: *mut f64,
) -> NesslabStatus {
    scalar_getter(report, out, |t| t.sigma0)
}

/// Entropy production of the left reservoir at the steady state.
///
/// # Safety
/// `report` and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_sigma_left(
    report: *const NesslabReport,
    out: *mut f64,
) -> NesslabStatus {
    scalar_getter(report, out, |t| t.sigma_left)
}

/// Entropy production of the right reservoir at the steady state.
///
/// # Safety
/// `report` and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_sigma_right(
    report: *const NesslabReport,
    out: *mut f64,
) -> NesslabStatus {
    scalar_getter(report, out, |t| t.sigma_right)
}

/// Total entropy production `σ_L + σ_R` at the steady state.
///
/// # Safety
/// `report` and `out` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_sigma_total(
    report: *const NesslabReport,
    out: *mut f64,
) -> NesslabStatus {
    scalar_getter(report, out, |t| t.sigma_total)
}

/// Copy the steady state into `buffer` as row-major interleaved `re, im`
/// doubles; `len` must be at least `2·dim·dim`.
///
/// # Safety
/// `buffer` must reference `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_ness(
    report: *const NesslabReport,
    buffer: *mut f64,
    len: usize,
) -> NesslabStatus {
    clear_error();
    let Some(r) = report.as_ref() else {
        set_error("null report handle");
        return NesslabStatus::NullPointer;
    };
    if buffer.is_null() {
        set_error("null buffer pointer");
        return NesslabStatus::NullPointer;
    }
    let Some(ness) = &r.thermo.ness else {
        set_error("no unique stationary state for this configuration");
        return NesslabStatus::Unavailable;
    };
    let d = ness.rows();
    if len < 2 * d * d {
        set_error(format!("buffer holds {len} doubles, need {}", 2 * d * d));
        return NesslabStatus::BufferTooSmall;
    }
    let out = std::slice::from_raw_parts_mut(buffer, 2 * d * d);
    for i in 0..d {
        for j in 0..d {
            let base = 2 * (i * d + j);
            out[base] = ness[(i, j)].re;
            out[base + 1] = ness[(i, j)].im;
        }
    }
    NesslabStatus::Ok
}

/// Render the same JSON report the CLI `check` command emits. Free the
/// returned string with [`nesslab_string_free`]; null for a null handle.
///
/// # Safety
/// `report` must be null or valid handles from the matching nesslab
/// constructor, alive for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_to_json(report: *const NesslabReport) -> *mut c_char {
    clear_error();
    let Some(r) = (unsafe { report.as_ref() }) else {
        set_error("null report handle");
        return std::ptr::null_mut();
    };
    let json = render_check_report(&r.thermo, &r.model_name, r.dimension, &r.tolerances);
    CString::new(json)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// # Safety
/// `report` must come from [`nesslab_theorem_check`] and not be freed
/// twice. Null is accepted.
#[no_mangle]
pub unsafe extern "C" fn nesslab_report_free(report: *mut NesslabReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
