//! Steady-state thermodynamics: commutant criteria, kernel and NESS
//! extraction, energy flux, and entropy production.
//!
//! The central quantities are the steady-state energy flux
//! `σ₀ = tr(H·K_L·ρ₀)` oriented from the left reservoir into the system,
//! the per-reservoir entropy production
//! `σ_r(ρ) = −β_r·tr(H·K_r·ρ) − tr(log ρ·K_r·ρ) ≥ 0`, and their stationary
//! identity `σ(ρ₀) = (β_R − β_L)·σ₀`. Two algebraic assumptions decide
//! whether the flux must be strictly positive: effective coupling (`h_r > 0`
//! on the Bohr set) and triviality of the commutants `{H, Q_r}′`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{self, SuperOperator};
use crate::matrix::ComplexMatrix;
use crate::models::ModelSpec;
use crate::reservoir::{self, ReservoirSpec};
use crate::spectral;

/// States with an eigenvalue below this floor are refused by the entropy
/// production formulas (`log ρ` is only quoted for faithful states).
pub const FAITHFULNESS_FLOOR: f64 = 1e-12;

/// Entropy production above this threshold counts as strictly positive;
/// below it, the value is numerically indistinguishable from zero.
pub const STRICT_POSITIVITY_TOL: f64 = 1e-9;

/// Tolerances threaded through the full analysis pipeline.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative eigenvalue/Bohr-frequency clustering tolerance.
    pub cluster_tol: f64,
    /// Relative singular-value threshold for kernels and commutants.
    pub rank_tol: f64,
    /// Absolute positivity threshold for the effective-coupling check.
    pub pos_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cluster_tol: crate::spectral::DEFAULT_CLUSTER_TOL,
            rank_tol: crate::matrix::DEFAULT_RANK_TOL,
            pos_tol: reservoir::EFFECTIVE_COUPLING_POS_TOL,
        }
    }
}

/// Eigenvalue clamp used inside `log ρ`.
pub const ENTROPY_EIG_FLOOR: f64 = 1e-14;

/// Basis of a commutant `{ops}′` together with its dimension.
#[derive(Debug, Clone)]
pub struct CommutantReport {
    pub dimension: usize,
    /// Matrices spanning the commutant, orthonormal in the
    /// Hilbert-Schmidt inner product.
    pub basis: Vec<ComplexMatrix>,
    /// `dimension == 1`, i.e. only multiples of the identity commute.
    pub is_trivial: bool,
}

/// Compute the joint commutant of a list of operators.
///
/// An operator Y commutes with every A iff the stacked superoperator
/// rows `kron(1, A) − kron(Aᵀ, 1)` annihilate `vec(Y)`; the commutant is
/// the SVD null space of that stack at relative tolerance `rel_tol`.
pub fn commutant(ops: &[ComplexMatrix], rel_tol: f64) -> Result<CommutantReport> {
    if ops.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = ops[0].rows();
    for op in ops {
        if op.rows() != dim || op.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: op.rows(),
            });
        }
    }
    let d2 = dim * dim;
    let identity = ComplexMatrix::identity(dim);
    let mut stacked = ComplexMatrix::zeros(ops.len() * d2, d2);
    for (block, op) in ops.iter().enumerate() {
        let commutator_map = &identity.kron(op) - &op.transpose().kron(&identity);
        for i in 0..d2 {
            for j in 0..d2 {
                stacked[(block * d2 + i, j)] = commutator_map[(i, j)];
            }
        }
    }
    let basis: Vec<ComplexMatrix> = stacked
        .svd_null_space(rel_tol)?
        .iter()
        .map(|v| ComplexMatrix::devectorize(v, dim))
        .collect::<Result<_>>()?;
    let dimension = basis.len();
    Ok(CommutantReport {
        dimension,
        basis,
        is_trivial: dimension == 1,
    })
}

/// Kernel of a generator, reported as Hermitian stationary elements.
#[derive(Debug, Clone)]
pub struct StationaryStates {
    /// One Hermitian element per kernel vector, trace-normalized whenever
    /// a nonzero trace permits it. Only in the one-dimensional case are
    /// these guaranteed to be density matrices.
    pub states: Vec<ComplexMatrix>,
    pub kernel_dim: usize,
    /// Smallest nonzero singular value of K: the margin by which the
    /// kernel decision at `rel_tol` can be audited.
    pub spectral_gap: f64,
}

/// Extract the kernel of `K` and shape each kernel vector into a Hermitian
/// stationary element.
///
/// SVD vectors carry an arbitrary complex phase, so Hermitization picks
/// the larger of `(X+X†)/2` and `(X−X†)/2i` — for a phase-rotated
/// Hermitian kernel element exactly one of the two can vanish.
pub fn stationary_states(k: &SuperOperator, rel_tol: f64) -> Result<StationaryStates> {
    let svals = k.matrix().singular_values()?;
    let smax = svals.last().copied().unwrap_or(0.0);
    let cutoff = rel_tol * smax;
    let kernel = k.matrix().svd_null_space(rel_tol)?;
    if kernel.is_empty() {
        return Err(Error::NoStationaryState);
    }
    let spectral_gap = svals.iter().copied().find(|&s| s > cutoff).unwrap_or(0.0);

    let dim = k.dim();
    let mut states = Vec::with_capacity(kernel.len());
    for v in &kernel {
        let x = ComplexMatrix::devectorize(v, dim)?;
        let herm = x.hermitize();
        let anti = (&x - &x.adjoint()).scale(Complex64::new(0.0, -0.5));
        let mut state = if herm.frobenius_norm() >= anti.frobenius_norm() {
            herm
        } else {
            anti
        };
        let trace = state.trace().re;
        if trace.abs() > 1e-9 {
            state = state.scale(Complex64::new(1.0 / trace, 0.0));
        }
        states.push(state);
    }
    Ok(StationaryStates {
        states,
        kernel_dim: kernel.len(),
        spectral_gap,
    })
}

/// The unique stationary density matrix of `K`.
///
/// Errors with [`Error::NonUniqueStationaryState`] when the kernel is
/// degenerate, which signals that the uniqueness hypotheses fail.
pub fn ness(k: &SuperOperator, rel_tol: f64) -> Result<ComplexMatrix> {
    let stationary = stationary_states(k, rel_tol)?;
    if stationary.kernel_dim != 1 {
        return Err(Error::NonUniqueStationaryState {
            kernel_dim: stationary.kernel_dim,
        });
    }
    let state = stationary.states.into_iter().next().unwrap();
    if (state.trace().re - 1.0).abs() > 1e-9 {
        return Err(Error::NoStationaryState);
    }
    let min = state.eigh()?.eigenvalues[0];
    if min < -1e-9 {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(state)
}

/// Steady-state energy flux `tr(H·K_L·ρ)`, positive when energy flows from
/// the left reservoir into the system.
pub fn energy_flux(
    h: &ComplexMatrix,
    k_left: &SuperOperator,
    rho: &ComplexMatrix,
) -> Result<f64> {
    let flux = h.matmul(&k_left.apply(rho)?).trace();
    if flux.im.abs() > 1e-10 * (1.0 + flux.re.abs()) {
        return Err(Error::NonRealFlux { imaginary: flux.im });
    }
    Ok(flux.re)
}

/// Entropy production of the system coupled to a single reservoir:
/// `σ_r(ρ) = −β_r·tr(H·K_r·ρ) − tr(log ρ·K_r·ρ)`.
///
/// Nonnegative for every faithful state, and zero exactly at the Gibbs
/// state `ρ_{β_r}` when the coupling is effective.
pub fn entropy_production_single(
    h: &ComplexMatrix,
    beta: f64,
    k_r: &SuperOperator,
    rho: &ComplexMatrix,
) -> Result<f64> {
    let es = rho.hermitize().eigh()?;
    let min = es.eigenvalues.first().copied().unwrap_or(0.0);
    if min < FAITHFULNESS_FLOOR {
        return Err(Error::NotFaithful {
            min_eigenvalue: min,
            floor: FAITHFULNESS_FLOOR,
        });
    }
    let k_rho = k_r.apply(rho)?;
    let log_rho = rho.logm_pd(ENTROPY_EIG_FLOOR)?;
    let value = h.matmul(&k_rho).trace().scale(-beta) - log_rho.matmul(&k_rho).trace();
    if value.im.abs() > 1e-10 * (1.0 + value.re.abs()) {
        return Err(Error::NonRealValue {
            imaginary: value.im,
        });
    }
    Ok(value.re)
}

/// Total entropy production `σ(ρ) = σ_L(ρ) + σ_R(ρ)`.
pub fn entropy_production_total(
    h: &ComplexMatrix,
    betas: (f64, f64),
    k_left: &SuperOperator,
    k_right: &SuperOperator,
    rho: &ComplexMatrix,
) -> Result<f64> {
    Ok(entropy_production_single(h, betas.0, k_left, rho)?
        + entropy_production_single(h, betas.1, k_right, rho)?)
}

/// Trace distance `½‖A − B‖₁` between two Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = (a - b).hermitize();
    let es = diff.eigh()?;
    Ok(0.5 * es.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// Outcome of the four assumption checks.
#[derive(Debug, Clone)]
pub struct CriteriaVerdicts {
    pub effective_coupling_left: bool,
    pub effective_coupling_right: bool,
    pub trivial_commutant_left: bool,
    pub trivial_commutant_right: bool,
    /// `{H, Q_L, Q_R}′ = ℂ1`, the hypothesis behind kernel uniqueness.
    pub trivial_commutant_joint: bool,
    pub failing_frequencies_left: Vec<f64>,
    pub failing_frequencies_right: Vec<f64>,
}

impl CriteriaVerdicts {
    /// All four theorem assumptions hold.
    pub fn assumptions_hold(&self) -> bool {
        self.effective_coupling_left
            && self.effective_coupling_right
            && self.trivial_commutant_left
            && self.trivial_commutant_right
    }
}

/// Everything the steady-state analysis produces for one configuration.
#[derive(Debug, Clone)]
pub struct ThermoReport {
    /// Unique stationary density matrix, absent when the kernel is
    /// degenerate.
    pub ness: Option<ComplexMatrix>,
    pub kernel_dim: usize,
    pub spectral_gap: f64,
    pub criteria: CriteriaVerdicts,
    /// Energy flux `tr(H·K_L·ρ₀)`.
    pub sigma0: Option<f64>,
    pub sigma_left: Option<f64>,
    pub sigma_right: Option<f64>,
    pub sigma_total: Option<f64>,
    pub betas: (f64, f64),
    /// Assumptions hold and `β_L ≠ β_R`, so strict positivity is asserted.
    pub theorem_applicable: bool,
    /// `σ(ρ₀) > 0` where computable.
    pub strict_positivity: Option<bool>,
    pub bohr_frequencies: Vec<f64>,
}

/// Evaluate the assumptions, build both generators, compute the stationary
/// state and all thermodynamic quantities.
///
/// When assumptions fail the computation still runs; `theorem_applicable`
/// records that the strict-positivity conclusion is not guaranteed. A
/// degenerate kernel leaves the state-dependent quantities unset, as does
/// a non-faithful stationary state for the entropy entries.
pub fn theorem_check(
    model: &ModelSpec,
    left: &ReservoirSpec,
    right: &ReservoirSpec,
    tols: &Tolerances,
) -> Result<ThermoReport> {
    model.validate()?;
    left.validate()?;
    right.validate()?;
    let cluster_tol = tols.cluster_tol;
    let rank_tol = tols.rank_tol;

    let h = &model.hamiltonian;
    let dec = spectral::decompose(h, cluster_tol)?;
    let bohr = dec.bohr_frequencies.clone();

    let ec_left = reservoir::check_effective_coupling_with_tol(left, &bohr, tols.pos_tol);
    let ec_right = reservoir::check_effective_coupling_with_tol(right, &bohr, tols.pos_tol);
    let c_left = commutant(&[h.clone(), model.coupling_left.clone()], rank_tol)?;
    let c_right = commutant(&[h.clone(), model.coupling_right.clone()], rank_tol)?;
    let c_joint = commutant(
        &[
            h.clone(),
            model.coupling_left.clone(),
            model.coupling_right.clone(),
        ],
        rank_tol,
    )?;
    let criteria = CriteriaVerdicts {
        effective_coupling_left: ec_left.passed,
        effective_coupling_right: ec_right.passed,
        trivial_commutant_left: c_left.is_trivial,
        trivial_commutant_right: c_right.is_trivial,
        trivial_commutant_joint: c_joint.is_trivial,
        failing_frequencies_left: ec_left.failing,
        failing_frequencies_right: ec_right.failing,
    };

    let k_left = lindblad::davies_generator(h, &model.coupling_left, left, cluster_tol)?;
    let k_right = lindblad::davies_generator(h, &model.coupling_right, right, cluster_tol)?;
    let k = lindblad::total_generator(&k_left, &k_right)?;

    let stationary = stationary_states(&k, rank_tol)?;
    let kernel_dim = stationary.kernel_dim;
    let spectral_gap = stationary.spectral_gap;

    let mut report = ThermoReport {
        ness: None,
        kernel_dim,
        spectral_gap,
        criteria,
        sigma0: None,
        sigma_left: None,
        sigma_right: None,
        sigma_total: None,
        betas: (left.beta, right.beta),
        theorem_applicable: false,
        strict_positivity: None,
        bohr_frequencies: bohr,
    };
    report.theorem_applicable =
        report.criteria.assumptions_hold() && (left.beta - right.beta).abs() > 0.0;

    if kernel_dim == 1 {
        let rho0 = ness(&k, rank_tol)?;
        report.sigma0 = Some(energy_flux(h, &k_left, &rho0)?);
        report.sigma_left = match entropy_production_single(h, left.beta, &k_left, &rho0) {
            Ok(s) => Some(s),
            Err(Error::NotFaithful { .. }) => None,
            Err(e) => return Err(e),
        };
        report.sigma_right = match entropy_production_single(h, right.beta, &k_right, &rho0) {
            Ok(s) => Some(s),
            Err(Error::NotFaithful { .. }) => None,
            Err(e) => return Err(e),
        };
        report.sigma_total = match (report.sigma_left, report.sigma_right) {
            (Some(l), Some(r)) => Some(l + r),
            _ => None,
        };
        report.strict_positivity = report.sigma_total.map(|s| s > STRICT_POSITIVITY_TOL);
        report.ness = Some(rho0);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{davies_generator, total_generator};
    use crate::models;
    use crate::reservoir::Envelope;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const CLUSTER_TOL: f64 = 1e-9;
    const RANK_TOL: f64 = 1e-9;

    fn hs_project_residual(basis: &[ComplexMatrix], target: &ComplexMatrix) -> f64 {
        // Residual of target after projection onto the (orthonormal) span.
        let tv = target.vectorize();
        let mut residual = tv.clone();
        for b in basis {
            let bv = b.vectorize();
            let coeff: Complex64 = bv.iter().zip(tv.iter()).map(|(x, y)| x.conj() * y).sum();
            for (r, x) in residual.iter_mut().zip(bv.iter()) {
                *r -= coeff * x;
            }
        }
        residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn commutant_of_sigma_z_is_diagonal() {
        let report = commutant(&[models::sigma_z()], RANK_TOL).unwrap();
        assert_eq!(report.dimension, 2);
        assert!(!report.is_trivial);
        for b in &report.basis {
            let comm = &models::sigma_z().matmul(b) - &b.matmul(&models::sigma_z());
            assert!(comm.max_abs() < 1e-9);
            assert!(b[(0, 1)].norm() < 1e-9 && b[(1, 0)].norm() < 1e-9);
        }
    }

    #[test]
    fn commutant_of_generating_pair_is_trivial() {
        let report = commutant(&[models::sigma_z(), models::sigma_x()], RANK_TOL).unwrap();
        assert_eq!(report.dimension, 1);
        assert!(report.is_trivial);
        // Identity lies in the span.
        let id = ComplexMatrix::identity(2);
        assert!(hs_project_residual(&report.basis, &id) < 1e-9);
    }

    #[test]
    fn commutant_isotropic_xy_witnesses() {
        let m = models::xy_two_spin(1.0, 1.0);
        let id = ComplexMatrix::identity(2);

        let left = commutant(&[m.hamiltonian.clone(), m.coupling_left.clone()], RANK_TOL).unwrap();
        assert!(left.dimension >= 2);
        let witness_left = &id.kron(&models::sigma_x()) + &models::sigma_x().kron(&models::sigma_z());
        for op in [&m.hamiltonian, &m.coupling_left] {
            let comm = &op.matmul(&witness_left) - &witness_left.matmul(op);
            assert!(comm.max_abs() < 1e-12, "witness must commute exactly");
        }
        let unit = witness_left.scale(Complex64::new(1.0 / witness_left.frobenius_norm(), 0.0));
        assert!(hs_project_residual(&left.basis, &unit) < 1e-9);

        let right = commutant(&[m.hamiltonian.clone(), m.coupling_right.clone()], RANK_TOL).unwrap();
        assert!(right.dimension >= 2);
        let witness_right = &models::sigma_x().kron(&id) + &models::sigma_z().kron(&models::sigma_x());
        let unit = witness_right.scale(Complex64::new(1.0 / witness_right.frobenius_norm(), 0.0));
        assert!(hs_project_residual(&right.basis, &unit) < 1e-9);

        // The joint commutant is nevertheless trivial.
        let joint = commutant(
            &[m.hamiltonian.clone(), m.coupling_left.clone(), m.coupling_right.clone()],
            RANK_TOL,
        )
        .unwrap();
        assert!(joint.is_trivial);
    }

    #[test]
    fn commutant_identity_always_in_span() {
        let mut rng = StdRng::seed_from_u64(57);
        for d in 2..=4 {
            let ops: Vec<ComplexMatrix> = (0..2)
                .map(|_| {
                    ComplexMatrix::from_fn(d, d, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .hermitize()
                })
                .collect();
            let report = commutant(&ops, RANK_TOL).unwrap();
            assert!(report.dimension >= 1);
            let id = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / (d as f64).sqrt(), 0.0));
            assert!(hs_project_residual(&report.basis, &id) < 1e-9);
            for b in &report.basis {
                for op in &ops {
                    let comm = &op.matmul(b) - &b.matmul(op);
                    assert!(comm.max_abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn commutant_empty_input() {
        assert!(matches!(commutant(&[], RANK_TOL), Err(Error::EmptyInput)));
    }

    #[test]
    fn stationary_single_spin_is_gibbs() {
        let beta = 1.3;
        let m = models::single_spin();
        let res = ReservoirSpec::flat(beta);
        let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
        let st = stationary_states(&k, RANK_TOL).unwrap();
        assert_eq!(st.kernel_dim, 1);
        assert!(st.spectral_gap > 0.1);
        let gibbs = models::gibbs(&m.hamiltonian, beta).unwrap();
        assert!(st.states[0].max_abs_diff(&gibbs) < 1e-10);
    }

    #[test]
    fn isotropic_xy_single_reservoir_kernel_dim_two() {
        let m = models::xy_two_spin(1.0, 1.0);
        for res in [
            ReservoirSpec::flat(1.0),
            ReservoirSpec::with_envelope(1.0, Envelope::Gaussian),
        ] {
            let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
            let st = stationary_states(&k, RANK_TOL).unwrap();
            assert_eq!(st.kernel_dim, 2);
            assert!(matches!(
                ness(&k, RANK_TOL),
                Err(Error::NonUniqueStationaryState { kernel_dim: 2 })
            ));
        }
    }

    #[test]
    fn cut_chain_unique_product_state() {
        let (bl, br) = (1.0, 2.0);
        let m = models::xy_two_spin(0.0, 0.0);
        let k_l = davies_generator(&m.hamiltonian, &m.coupling_left, &ReservoirSpec::flat(bl), CLUSTER_TOL).unwrap();
        let k_r = davies_generator(&m.hamiltonian, &m.coupling_right, &ReservoirSpec::flat(br), CLUSTER_TOL).unwrap();
        let k = total_generator(&k_l, &k_r).unwrap();
        let rho0 = ness(&k, RANK_TOL).unwrap();
        let expected = models::cut_chain_product_state(bl, br);
        assert!(rho0.max_abs_diff(&expected) < 1e-8);
        assert!(energy_flux(&m.hamiltonian, &k_l, &rho0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn isotropic_xy_ness_matches_closed_form() {
        // The steady state is normalization-independent; the closed-form
        // flux and entropy values hold at the unit-coupling normalization
        // h(E)+h(−E) = 2, and scale linearly with h(2)+h(−2) otherwise.
        let (bl, br) = (1.0, 2.0);
        let m = models::xy_two_spin(1.0, 1.0);
        let (expected, sigma_closed) = models::xy_isotropic_closed_form(bl, br);

        let k_l = davies_generator(&m.hamiltonian, &m.coupling_left, &ReservoirSpec::unit_coupling(bl), CLUSTER_TOL).unwrap();
        let k_r = davies_generator(&m.hamiltonian, &m.coupling_right, &ReservoirSpec::unit_coupling(br), CLUSTER_TOL).unwrap();
        let k = total_generator(&k_l, &k_r).unwrap();
        let rho0 = ness(&k, RANK_TOL).unwrap();
        assert!(rho0.max_abs_diff(&expected) < 1e-8);
        let flux = energy_flux(&m.hamiltonian, &k_l, &rho0).unwrap();
        assert!((flux - sigma_closed / (br - bl)).abs() < 1e-8);
        assert!((flux - 0.202_433_424_120_052).abs() < 1e-8);

        // Flat family: same state, exactly half the coupling weight.
        let f_l = davies_generator(&m.hamiltonian, &m.coupling_left, &ReservoirSpec::flat(bl), CLUSTER_TOL).unwrap();
        let f_r = davies_generator(&m.hamiltonian, &m.coupling_right, &ReservoirSpec::flat(br), CLUSTER_TOL).unwrap();
        let kf = total_generator(&f_l, &f_r).unwrap();
        let rho0_flat = ness(&kf, RANK_TOL).unwrap();
        assert!(rho0_flat.max_abs_diff(&expected) < 1e-8);
        let flux_flat = energy_flux(&m.hamiltonian, &f_l, &rho0_flat).unwrap();
        assert!((flux_flat - 0.5 * sigma_closed / (br - bl)).abs() < 1e-8);
    }

    #[test]
    fn equilibrium_ness_is_gibbs() {
        let beta = 0.9;
        let m = models::xy_two_spin(1.3, 0.7);
        let k_l = davies_generator(&m.hamiltonian, &m.coupling_left, &ReservoirSpec::flat(beta), CLUSTER_TOL).unwrap();
        let k_r = davies_generator(&m.hamiltonian, &m.coupling_right, &ReservoirSpec::flat(beta), CLUSTER_TOL).unwrap();
        let k = total_generator(&k_l, &k_r).unwrap();
        let rho0 = ness(&k, RANK_TOL).unwrap();
        let gibbs = models::gibbs(&m.hamiltonian, beta).unwrap();
        assert!(rho0.max_abs_diff(&gibbs) < 1e-9);
        assert!(energy_flux(&m.hamiltonian, &k_l, &rho0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn entropy_production_vanishes_at_gibbs() {
        let beta = 1.1;
        let m = models::single_spin();
        let res = ReservoirSpec::flat(beta);
        let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
        let rho = models::gibbs(&m.hamiltonian, beta).unwrap();
        let sigma = entropy_production_single(&m.hamiltonian, beta, &k, &rho).unwrap();
        assert!(sigma.abs() < 1e-10);
    }

    #[test]
    fn entropy_production_positive_off_equilibrium() {
        let beta = 1.0;
        let m = models::single_spin();
        let res = ReservoirSpec::flat(beta);
        let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
        for beta_other in [0.25, 0.7, 1.6, 3.0] {
            let rho = models::gibbs(&m.hamiltonian, beta_other).unwrap();
            let sigma = entropy_production_single(&m.hamiltonian, beta, &k, &rho).unwrap();
            assert!(sigma > 1e-4, "β′={beta_other}: σ={sigma}");
        }
    }

    #[test]
    fn entropy_production_nonnegative_random_states() {
        let mut rng = StdRng::seed_from_u64(61);
        let m = models::xy_two_spin(1.3, 0.7);
        let res = ReservoirSpec::flat(1.0);
        let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
        for _ in 0..100 {
            let g = ComplexMatrix::from_fn(4, 4, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let gg = g.matmul(&g.adjoint());
            let raw = gg.scale(Complex64::new(1.0, 0.0) / gg.trace());
            // Mix toward the identity to keep the state faithful.
            let rho = &raw.scale(Complex64::new(0.9, 0.0))
                + &ComplexMatrix::identity(4).scale(Complex64::new(0.1 / 4.0, 0.0));
            let sigma = entropy_production_single(&m.hamiltonian, 1.0, &k, &rho).unwrap();
            assert!(sigma >= -1e-9, "σ={sigma}");
        }
    }

    #[test]
    fn entropy_production_refuses_singular_states() {
        let m = models::single_spin();
        let res = ReservoirSpec::flat(1.0);
        let k = davies_generator(&m.hamiltonian, &m.coupling_left, &res, CLUSTER_TOL).unwrap();
        let pure = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(matches!(
            entropy_production_single(&m.hamiltonian, 1.0, &k, &pure),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn stationary_identities() {
        // At the NESS: tr(log ρ₀·Kρ₀) ≈ 0, σ(ρ₀) = (β_R−β_L)σ₀, and the
        // two reservoir fluxes cancel.
        let (bl, br) = (1.0, 2.0);
        for m in [
            models::single_spin(),
            models::xy_two_spin(1.0, 1.0),
            models::xy_two_spin(1.3, 0.7),
            models::xy_two_spin(0.0, 0.0),
        ] {
            let k_l = davies_generator(&m.hamiltonian, &m.coupling_left, &ReservoirSpec::flat(bl), CLUSTER_TOL).unwrap();
            let k_r = davies_generator(&m.hamiltonian, &m.coupling_right, &ReservoirSpec::flat(br), CLUSTER_TOL).unwrap();
            let k = total_generator(&k_l, &k_r).unwrap();
            let rho0 = ness(&k, RANK_TOL).unwrap();

            let log_term = rho0
                .logm_pd(ENTROPY_EIG_FLOOR)
                .unwrap()
                .matmul(&k.apply(&rho0).unwrap())
                .trace();
            assert!(log_term.norm() <= 1e-8, "{}", m.name);

            let sigma = entropy_production_total(&m.hamiltonian, (bl, br), &k_l, &k_r, &rho0).unwrap();
            let flux_l = energy_flux(&m.hamiltonian, &k_l, &rho0).unwrap();
            let flux_r = energy_flux(&m.hamiltonian, &k_r, &rho0).unwrap();
            assert!((sigma - (br - bl) * flux_l).abs() <= 1e-8, "{}", m.name);
            assert!((flux_l + flux_r).abs() <= 1e-9, "{}", m.name);
        }
    }

    #[test]
    fn theorem_check_anisotropic_applicable() {
        let m = models::xy_anisotropic(0.3);
        let report = theorem_check(
            &m,
            &ReservoirSpec::flat(1.0),
            &ReservoirSpec::flat(2.0),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(report.criteria.assumptions_hold());
        assert!(report.theorem_applicable);
        assert_eq!(report.kernel_dim, 1);
        assert!(report.sigma_total.unwrap() > 0.0);
        assert!(report.sigma0.unwrap() > 0.0, "β_R > β_L pushes energy rightward");
        assert_eq!(report.strict_positivity, Some(true));
    }

    #[test]
    fn theorem_check_isotropic_not_necessary() {
        // Assumptions fail yet the entropy production is strictly positive:
        // the criteria are sufficient, not necessary.
        let m = models::xy_two_spin(1.0, 1.0);
        let report = theorem_check(
            &m,
            &ReservoirSpec::flat(1.0),
            &ReservoirSpec::flat(2.0),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(!report.criteria.trivial_commutant_left);
        assert!(!report.criteria.trivial_commutant_right);
        assert!(report.criteria.trivial_commutant_joint);
        assert!(!report.theorem_applicable);
        assert_eq!(report.kernel_dim, 1);
        assert!(report.sigma_total.unwrap() > 0.0);
    }

    #[test]
    fn theorem_check_cut_chain_zero_flux() {
        let m = models::xy_two_spin(0.0, 0.0);
        let report = theorem_check(
            &m,
            &ReservoirSpec::flat(1.0),
            &ReservoirSpec::flat(2.0),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(!report.criteria.trivial_commutant_left);
        assert!(!report.criteria.trivial_commutant_right);
        assert!(report.criteria.trivial_commutant_joint);
        assert_eq!(report.kernel_dim, 1);
        assert!(report.sigma0.unwrap().abs() < 1e-10);
        assert!(report.sigma_total.unwrap().abs() < 1e-9);
        assert_eq!(report.strict_positivity, Some(false));
    }
}
