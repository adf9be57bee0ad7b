//! Thermal reservoir spectral functions.
//!
//! A reservoir at inverse temperature β enters the weak-coupling generator
//! only through its spectral function `h(E)` — nonnegative and satisfying
//! the KMS detailed-balance relation `h(−E) = e^{−βE}·h(E)` — and through
//! the Hilbert transform `s(E)` of `h` that produces the Lamb-shift term.
//! The built-in families parameterize `h` directly as `c(|E|)/(1+e^{−βE})`
//! with an even nonnegative envelope `c`, which satisfies the KMS relation
//! identically; a tabulated family covers measured or externally computed
//! spectra.

use crate::error::{Error, Result};

/// Absolute positivity threshold for the effective-coupling check,
/// separating structural zeros of `h` from rounding noise.
pub const EFFECTIVE_COUPLING_POS_TOL: f64 = 1e-12;

/// Default principal-value cutoff is `50/β`.
pub const DEFAULT_PV_CUTOFF_FACTOR: f64 = 50.0;
/// Default number of principal-value quadrature nodes.
pub const DEFAULT_PV_POINTS: usize = 20_001;

/// Relative KMS defect accepted when validating tabulated spectra.
pub const KMS_TOL: f64 = 1e-8;

/// Sampled `(E, h(E))` table with linear interpolation between nodes.
#[derive(Debug, Clone)]
pub struct Table {
    energies: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn new(energies: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if energies.len() != values.len() {
            return Err(Error::InvalidTable {
                reason: format!(
                    "{} energies but {} values",
                    energies.len(),
                    values.len()
                ),
            });
        }
        if energies.len() < 2 {
            return Err(Error::InvalidTable {
                reason: "need at least two samples".into(),
            });
        }
        if energies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTable {
                reason: "energies must be strictly ascending".into(),
            });
        }
        if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidTable {
                reason: "values must be finite and nonnegative".into(),
            });
        }
        Ok(Self { energies, values })
    }

    /// Parse a two-column CSV `E,h` with ascending `E`. Blank lines and
    /// `#` comments are skipped; a non-numeric first row is treated as a
    /// header.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut energies = Vec::new();
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (e, h) = match (fields.next(), fields.next()) {
                (Some(e), Some(h)) => (e, h),
                _ => {
                    return Err(Error::InvalidTable {
                        reason: format!("line {}: expected two comma-separated columns", lineno + 1),
                    })
                }
            };
            match (e.parse::<f64>(), h.parse::<f64>()) {
                (Ok(e), Ok(h)) => {
                    energies.push(e);
                    values.push(h);
                }
                _ if energies.is_empty() => continue, // header row
                _ => {
                    return Err(Error::InvalidTable {
                        reason: format!("line {}: expected two numbers, got `{line}`", lineno + 1),
                    })
                }
            }
        }
        Self::new(energies, values)
    }

    pub fn min_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_energy(&self) -> f64 {
        *self.energies.last().unwrap()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    fn interpolate(&self, e: f64) -> Result<f64> {
        if e < self.min_energy() || e > self.max_energy() {
            return Err(Error::OutOfTable {
                energy: e,
                min: self.min_energy(),
                max: self.max_energy(),
            });
        }
        let idx = match self
            .energies
            .binary_search_by(|probe| probe.partial_cmp(&e).unwrap())
        {
            Ok(exact) => return Ok(self.values[exact]),
            Err(ins) => ins,
        };
        let (e0, e1) = (self.energies[idx - 1], self.energies[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        Ok(v0 + (v1 - v0) * (e - e0) / (e1 - e0))
    }
}

/// Even nonnegative envelope `c(x)` modulating the fermionic occupation
/// factor; evaluated at `|E|`.
#[derive(Debug, Clone)]
pub enum Envelope {
    /// `c(x) = a`. The reservoir correlation functions of an ideal Fermi
    /// gas obey `h(E) + h(−E) = 2‖α‖²`; `Constant(2.0)` is the unit-
    /// coupling normalization under which the two-spin closed-form flux
    /// and entropy values hold.
    Constant(f64),
    /// `c(x) = e^{−x²}`.
    Gaussian,
    /// `c(x) = |x|·e^{−|x|}`; vanishes at zero frequency.
    Ohmic,
    /// Sampled envelope on `x ≥ 0`.
    Table(Table),
}

impl Envelope {
    fn eval(&self, x: f64) -> Result<f64> {
        let x = x.abs();
        match self {
            Envelope::Constant(a) => Ok(*a),
            Envelope::Gaussian => Ok((-x * x).exp()),
            Envelope::Ohmic => Ok(x * (-x).exp()),
            Envelope::Table(table) => table.interpolate(x),
        }
    }
}

/// Functional form of the reservoir spectral function.
#[derive(Debug, Clone)]
pub enum SpectralFamily {
    /// `h(E) = 1/(1+e^{−βE})`: flat envelope, strictly positive.
    FermionicFlat,
    /// `h(E) = c(|E|)/(1+e^{−βE})`.
    FermionicEnvelope(Envelope),
    /// Directly tabulated `h(E)`; KMS compliance is the table's burden and
    /// is checked by [`ReservoirSpec::validate`].
    Tabulated(Table),
}

/// How the Hilbert transform `s(E)` is evaluated.
#[derive(Debug, Clone)]
pub enum LambShiftMode {
    /// `s ≡ 0`. The default: the Lamb shift only perturbs the Hamiltonian
    /// part and never moves the stationary state, so zero keeps reference
    /// results exactly reproducible.
    Zero,
    /// Principal-value quadrature of `(1/2π)∫ h(E′)/(E′−E) dE′` on
    /// `[−cutoff, cutoff]` with a grid that pairs nodes equidistant from
    /// the singularity.
    PrincipalValue { cutoff: f64, points: usize },
}

impl LambShiftMode {
    /// Principal value with the default cutoff `50/β` and node count.
    pub fn principal_value_default(beta: f64) -> Self {
        LambShiftMode::PrincipalValue {
            cutoff: DEFAULT_PV_CUTOFF_FACTOR / beta,
            points: DEFAULT_PV_POINTS,
        }
    }
}

/// A thermal reservoir: inverse temperature, spectral function family, and
/// Lamb-shift evaluation mode.
#[derive(Debug, Clone)]
pub struct ReservoirSpec {
    pub beta: f64,
    pub family: SpectralFamily,
    pub lamb_shift_mode: LambShiftMode,
}

impl ReservoirSpec {
    pub fn flat(beta: f64) -> Self {
        Self {
            beta,
            family: SpectralFamily::FermionicFlat,
            lamb_shift_mode: LambShiftMode::Zero,
        }
    }

    pub fn with_envelope(beta: f64, envelope: Envelope) -> Self {
        Self {
            beta,
            family: SpectralFamily::FermionicEnvelope(envelope),
            lamb_shift_mode: LambShiftMode::Zero,
        }
    }

    /// `h(E) = 2/(1+e^{−βE})`, the normalization `h(E) + h(−E) = 2` of a
    /// fermionic reservoir with unit coupling weight.
    pub fn unit_coupling(beta: f64) -> Self {
        Self::with_envelope(beta, Envelope::Constant(2.0))
    }

    pub fn tabulated(beta: f64, table: Table) -> Self {
        Self {
            beta,
            family: SpectralFamily::Tabulated(table),
            lamb_shift_mode: LambShiftMode::Zero,
        }
    }

    pub fn with_lamb_shift(mut self, mode: LambShiftMode) -> Self {
        self.lamb_shift_mode = mode;
        self
    }

    /// Spectral function `h(E) ≥ 0`.
    pub fn h(&self, e: f64) -> Result<f64> {
        match &self.family {
            SpectralFamily::FermionicFlat => Ok(fermi_factor(self.beta, e)),
            SpectralFamily::FermionicEnvelope(c) => Ok(c.eval(e)? * fermi_factor(self.beta, e)),
            SpectralFamily::Tabulated(table) => table.interpolate(e),
        }
    }

    /// Lamb shift `s(E)`, the Hilbert transform of `h`.
    ///
    /// In principal-value mode the integral runs over `[−Λ, Λ]`; the
    /// window symmetric about the singularity is integrated pairwise so
    /// the `1/(E′−E)` divergence cancels analytically, and the remaining
    /// tail carries no singularity. Trapezoid rule on both parts gives
    /// O(1/N²) convergence for smooth `h`.
    pub fn lamb_shift(&self, e: f64) -> Result<f64> {
        match self.lamb_shift_mode {
            LambShiftMode::Zero => Ok(0.0),
            LambShiftMode::PrincipalValue { cutoff, points } => {
                if e.abs() >= 0.9 * cutoff {
                    return Err(Error::CutoffTooSmall { energy: e, cutoff });
                }
                self.principal_value(e, cutoff, points)
            }
        }
    }

    fn principal_value(&self, e: f64, cutoff: f64, points: usize) -> Result<f64> {
        let points = points.max(9);
        let step = 2.0 * cutoff / (points - 1) as f64;
        let window = cutoff - e.abs();
        let pairs = (window / step).floor().max(1.0) as usize;
        let paired_edge = pairs as f64 * step;

        // Paired window: ∫₀^w (h(E+u) − h(E−u))/u du by trapezoid; the
        // u→0 limit 2h′(E) comes from a central difference.
        let delta = (step * 0.5).min(1e-4);
        let mut paired = 0.5 * (self.h(e + delta)? - self.h(e - delta)?) / delta;
        for k in 1..=pairs {
            let u = k as f64 * step;
            let g = (self.h(e + u)? - self.h(e - u)?) / u;
            paired += if k == pairs { 0.5 * g } else { g };
        }
        let mut total = paired * step;

        // Unpaired tail on whichever side of the window reaches the cutoff.
        let (lo, hi) = if e >= 0.0 {
            (-cutoff, e - paired_edge)
        } else {
            (e + paired_edge, cutoff)
        };
        if hi - lo > step * 0.5 {
            let n_tail = ((hi - lo) / step).ceil() as usize + 1;
            let tail_step = (hi - lo) / (n_tail - 1) as f64;
            let mut tail = 0.0;
            for k in 0..n_tail {
                let ep = lo + k as f64 * tail_step;
                let f = self.h(ep)? / (ep - e);
                tail += if k == 0 || k == n_tail - 1 { 0.5 * f } else { f };
            }
            total += tail * tail_step;
        }
        Ok(total / (2.0 * std::f64::consts::PI))
    }

    /// Maximum relative KMS defect `|h(−E) − e^{−βE}h(E)|/(1+h(E))` over
    /// the grid points where both `±E` are evaluable.
    pub fn kms_defect(&self, grid: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &e in grid {
            let (hp, hm) = match (self.h(e), self.h(-e)) {
                (Ok(hp), Ok(hm)) => (hp, hm),
                _ => continue,
            };
            let defect = (hm - (-self.beta * e).exp() * hp).abs() / (1.0 + hp);
            worst = worst.max(defect);
        }
        Ok(worst)
    }

    /// Check β > 0, pointwise nonnegativity, and — for tabulated spectra —
    /// the KMS relation on the table's own grid.
    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta <= 0.0 {
            return Err(Error::InvalidTable {
                reason: format!("inverse temperature must be positive, got {}", self.beta),
            });
        }
        if let SpectralFamily::FermionicEnvelope(Envelope::Constant(a)) = &self.family {
            if !(a.is_finite() && *a >= 0.0) {
                return Err(Error::InvalidTable {
                    reason: format!("constant envelope must be nonnegative, got {a}"),
                });
            }
        }
        if let SpectralFamily::Tabulated(table) = &self.family {
            for &e in table.energies() {
                if -e < table.min_energy() || -e > table.max_energy() {
                    continue;
                }
                let hp = self.h(e)?;
                let hm = self.h(-e)?;
                let defect = (hm - (-self.beta * e).exp() * hp).abs();
                if defect > KMS_TOL * (1.0 + hp) {
                    return Err(Error::KmsViolation { energy: e, defect });
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn fermi_factor(beta: f64, e: f64) -> f64 {
    1.0 / (1.0 + (-beta * e).exp())
}

/// Verdict of the effective-coupling check: `h > 0` at every Bohr
/// frequency of the system.
#[derive(Debug, Clone)]
pub struct EffectiveCouplingReport {
    pub passed: bool,
    /// Bohr frequencies where `h(E) ≤ pos_tol` (or `h` was not evaluable).
    pub failing: Vec<f64>,
    pub pos_tol: f64,
}

/// Scan the full Bohr frequency set and report where `h` fails to be
/// strictly positive (above `pos_tol`).
pub fn check_effective_coupling_with_tol(
    spec: &ReservoirSpec,
    bohr: &[f64],
    pos_tol: f64,
) -> EffectiveCouplingReport {
    let mut failing = Vec::new();
    for &e in bohr {
        match spec.h(e) {
            Ok(h) if h > pos_tol => {}
            _ => failing.push(e),
        }
    }
    EffectiveCouplingReport {
        passed: failing.is_empty(),
        failing,
        pos_tol,
    }
}

/// [`check_effective_coupling_with_tol`] at the default positivity
/// threshold.
pub fn check_effective_coupling(spec: &ReservoirSpec, bohr: &[f64]) -> EffectiveCouplingReport {
    check_effective_coupling_with_tol(spec, bohr, EFFECTIVE_COUPLING_POS_TOL)
}
