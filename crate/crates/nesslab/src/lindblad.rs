//! Assembly of the weak-coupling (Davies) generator as a dense
//! superoperator on vectorized density matrices.
//!
//! For each Bohr frequency E with jump operator Q(E) the generator picks up
//!
//! ```text
//!   −i·s(E)·[Q(E)†Q(E), ρ] + h(E)·([Q(E)ρ, Q(E)†] + [Q(E), ρ Q(E)†])
//! ```
//!
//! summed over the full Bohr set, so detailed-balance pairs (E, −E) arise
//! from the loop itself and never need manual folding. The generator is
//! kept in the interaction picture: the free part −i[H,·] is available
//! separately through [`hamiltonian_generator`] for Schrödinger-picture
//! trajectories but is never mixed into the dissipative part implicitly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITICITY_TOL};
use crate::reservoir::ReservoirSpec;
use crate::spectral;

/// Dense superoperator acting on column-stacked d×d matrices.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: matrix.rows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Apply to a d×d matrix: `devectorize(K·vec(ρ))`. No re-Hermitization
    /// happens here, so the map can be probed on arbitrary inputs.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rho.rows(),
            });
        }
        ComplexMatrix::devectorize(&self.matrix.matvec(&rho.vectorize()), self.dim)
    }

    /// The map `e^{tK}` as a superoperator.
    pub fn exponential(&self, t: f64) -> Result<SuperOperator> {
        let m = self.matrix.scale(Complex64::new(t, 0.0)).expm()?;
        Ok(SuperOperator {
            dim: self.dim,
            matrix: m,
        })
    }

    /// Propagate a density matrix to time `t ≥ 0`.
    ///
    /// The output is re-Hermitized `(X+X†)/2` to strip the ~1e−14
    /// asymmetry that devectorization accumulates.
    pub fn evolve(&self, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        validate_density_matrix(rho0, 1e-8)?;
        let propagator = self.exponential(t)?;
        Ok(propagator.apply(rho0)?.hermitize())
    }

    /// Worst violation of `tr(Kρ) = 0` over the matrix-unit basis,
    /// i.e. `max_j |(vec(1)† K)_j|`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for col in 0..d * d {
            let mut sum = Complex64::ZERO;
            for i in 0..d {
                sum += self.matrix[(i * d + i, col)];
            }
            worst = worst.max(sum.norm());
        }
        worst
    }

    /// `‖K(ρ†) − (Kρ)†‖_max` for a given probe matrix.
    pub fn hermiticity_preservation_defect(&self, rho: &ComplexMatrix) -> Result<f64> {
        let lhs = self.apply(&rho.adjoint())?;
        let rhs = self.apply(rho)?.adjoint();
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ K(|i⟩⟨j|)`, whose positive
    /// semidefiniteness certifies complete positivity of the map.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d * d, d * d, |row, col| {
            let (i, k) = (row / d, row % d);
            let (j, l) = (col / d, col % d);
            self.matrix[(l * d + k, j * d + i)]
        })
    }
}

impl std::ops::Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, other.dim, "superoperator dimension mismatch");
        SuperOperator {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        }
    }
}

/// Vectorized left multiplication `ρ ↦ Aρ`.
fn left_mul(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(a.rows()).kron(a)
}

/// Vectorized right multiplication `ρ ↦ ρB`.
fn right_mul(b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(&ComplexMatrix::identity(b.rows()))
}

/// Vectorized two-sided product `ρ ↦ AρB`.
fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(a)
}

/// The free evolution `ρ ↦ −i[H, ρ]` as a superoperator.
pub fn hamiltonian_generator(h: &ComplexMatrix) -> Result<SuperOperator> {
    let asym = h.asymmetry();
    if asym > HERMITICITY_TOL * (1.0 + h.frobenius_norm()) {
        return Err(Error::NonHermitianInput {
            asymmetry: asym,
            tol: HERMITICITY_TOL * (1.0 + h.frobenius_norm()),
        });
    }
    let m = (&left_mul(h) - &right_mul(h)).scale(Complex64::new(0.0, -1.0));
    SuperOperator::from_matrix(h.rows(), m)
}

/// Build the Davies generator for one reservoir.
///
/// `h` is Hermitian, `q` is the self-adjoint coupling operator (non-Hermitian
/// couplings are rejected), and the sum runs over the full Bohr set of `h`
/// after clustering with `cluster_tol`. Jump operators below the pruning
/// threshold contribute nothing and are skipped so that spectral-function
/// evaluation is never forced at frequencies the coupling cannot reach.
pub fn davies_generator(
    h: &ComplexMatrix,
    q: &ComplexMatrix,
    reservoir: &ReservoirSpec,
    cluster_tol: f64,
) -> Result<SuperOperator> {
    if q.rows() != h.rows() || q.cols() != h.cols() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            actual: q.rows(),
        });
    }
    let q_asym = q.asymmetry();
    if q_asym > HERMITICITY_TOL * (1.0 + q.frobenius_norm()) {
        return Err(Error::NonHermitianInput {
            asymmetry: q_asym,
            tol: HERMITICITY_TOL * (1.0 + q.frobenius_norm()),
        });
    }

    let dim = h.rows();
    let dec = spectral::decompose(h, cluster_tol)?;
    let jumps = spectral::jump_operators(&dec, q)?;

    let mut total = ComplexMatrix::zeros(dim * dim, dim * dim);
    for (energy, q_e) in jumps.nonzero() {
        let rate = reservoir.h(*energy)?;
        let shift = reservoir.lamb_shift(*energy)?;
        let qdq = q_e.adjoint().matmul(q_e);

        // h(E)·(2·Q(E)ρQ(E)† − {Q(E)†Q(E), ρ})
        let mut term = &sandwich(q_e, &q_e.adjoint()).scale(Complex64::new(2.0, 0.0))
            - &(&left_mul(&qdq) + &right_mul(&qdq));
        term = term.scale(Complex64::new(rate, 0.0));
        total = &total + &term;

        if shift != 0.0 {
            let lamb = (&left_mul(&qdq) - &right_mul(&qdq))
                .scale(Complex64::new(0.0, -shift));
            total = &total + &lamb;
        }
    }
    SuperOperator::from_matrix(dim, total)
}

/// Sum of the two reservoir generators: the total weak-coupling generator.
pub fn total_generator(k_left: &SuperOperator, k_right: &SuperOperator) -> Result<SuperOperator> {
    if k_left.dim() != k_right.dim() {
        return Err(Error::DimensionMismatch {
            expected: k_left.dim(),
            actual: k_right.dim(),
        });
    }
    Ok(k_left + k_right)
}

/// Hermitian + PSD + unit-trace check used by trajectory entry points.
pub fn validate_density_matrix(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    let asym = rho.asymmetry();
    if asym > tol * (1.0 + rho.frobenius_norm()) {
        return Err(Error::NonHermitianInput {
            asymmetry: asym,
            tol: tol * (1.0 + rho.frobenius_norm()),
        });
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
        return Err(Error::InvalidTable {
            reason: format!("density matrix trace {trace} differs from 1"),
        });
    }
    let es = rho.hermitize().eigh()?;
    let min = es.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}
