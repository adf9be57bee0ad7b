//! Built-in model constructors: Pauli algebra, the single spin, the
//! two-spin XY family, Gibbs states, and the isotropic-chain closed forms
//! used as oracles.
//!
//! Conventions are fixed once: σ₁ = [[0,1],[1,0]], σ₂ = [[0,−i],[i,0]],
//! σ₃ = [[1,0],[0,−1]], and tensor products order (left spin)⊗(right spin).

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::ComplexMatrix;

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::ZERO],
    ])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
}

/// A small system with Hermitian Hamiltonian and self-adjoint couplings to
/// the left and right reservoirs.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: String,
    pub hamiltonian: ComplexMatrix,
    pub coupling_left: ComplexMatrix,
    pub coupling_right: ComplexMatrix,
}

impl ModelSpec {
    pub fn new(
        name: impl Into<String>,
        hamiltonian: ComplexMatrix,
        coupling_left: ComplexMatrix,
        coupling_right: ComplexMatrix,
    ) -> Self {
        let spec = Self {
            name: name.into(),
            hamiltonian,
            coupling_left,
            coupling_right,
        };
        debug_assert!(spec.dim() > 0);
        spec
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    /// Hermiticity and dimension consistency of all three operators.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for op in [&self.hamiltonian, &self.coupling_left, &self.coupling_right] {
            if op.rows() != d || op.cols() != d {
                return Err(crate::error::Error::DimensionMismatch {
                    expected: d,
                    actual: op.rows(),
                });
            }
            let asym = op.asymmetry();
            if asym > 1e-10 * (1.0 + op.frobenius_norm()) {
                return Err(crate::error::Error::NonHermitianInput {
                    asymmetry: asym,
                    tol: 1e-10 * (1.0 + op.frobenius_norm()),
                });
            }
        }
        Ok(())
    }
}

/// Single spin-½: `H = σ₃`, `Q_L = Q_R = σ₁`.
pub fn single_spin() -> ModelSpec {
    ModelSpec::new("single_spin", sigma_z(), sigma_x(), sigma_x())
}

/// Two XY-coupled spins:
/// `H = ½(σ₃⊗1 + 1⊗σ₃ + γ₁·σ₁⊗σ₁ + γ₂·σ₂⊗σ₂)`,
/// `Q_L = σ₁⊗1`, `Q_R = 1⊗σ₁`.
pub fn xy_two_spin(gamma1: f64, gamma2: f64) -> ModelSpec {
    let id = ComplexMatrix::identity(2);
    let h = (&(&sigma_z().kron(&id) + &id.kron(&sigma_z()))
        + &(&sigma_x().kron(&sigma_x()).scale(Complex64::new(gamma1, 0.0))
            + &sigma_y().kron(&sigma_y()).scale(Complex64::new(gamma2, 0.0))))
        .scale(Complex64::new(0.5, 0.0));
    ModelSpec::new(
        format!("xy_two_spin(γ₁={gamma1}, γ₂={gamma2})"),
        h,
        sigma_x().kron(&id),
        id.kron(&sigma_x()),
    )
}

/// Anisotropic parameterization `γ₁ = 1+γ`, `γ₂ = 1−γ` of the XY pair.
pub fn xy_anisotropic(gamma: f64) -> ModelSpec {
    xy_two_spin(1.0 + gamma, 1.0 - gamma)
}

/// Gibbs state `e^{−βH}/tr(e^{−βH})`, computed in the eigenbasis (not via
/// `expm`) so equilibrium oracles sit at machine precision. Boltzmann
/// weights are referenced to the ground state to avoid overflow at
/// large β.
pub fn gibbs(h: &ComplexMatrix, beta: f64) -> Result<ComplexMatrix> {
    let es = h.eigh()?;
    let e0 = es.eigenvalues.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = es
        .eigenvalues
        .iter()
        .map(|&e| (-beta * (e - e0)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let diag: Vec<Complex64> = weights
        .iter()
        .map(|&w| Complex64::new(w / z, 0.0))
        .collect();
    let u = &es.eigenvectors;
    Ok(u.matmul(&ComplexMatrix::diag(&diag))
        .matmul(&u.adjoint())
        .hermitize())
}

/// Closed-form steady state and entropy production of the isotropic
/// (γ₁=γ₂=1) XY pair:
/// `ρ₀ = ¼(1 − sinh(β_L+β_R)/(2·cosh β_L·cosh β_R)·H)` and
/// `σ = (β_R−β_L)·sinh(β_R−β_L)/(cosh β_L·cosh β_R)`.
pub fn xy_isotropic_closed_form(beta_left: f64, beta_right: f64) -> (ComplexMatrix, f64) {
    let h = xy_two_spin(1.0, 1.0).hamiltonian;
    let coeff =
        (beta_left + beta_right).sinh() / (2.0 * beta_left.cosh() * beta_right.cosh());
    let rho = (&ComplexMatrix::identity(4) - &h.scale(Complex64::new(coeff, 0.0)))
        .scale(Complex64::new(0.25, 0.0));
    let sigma = (beta_right - beta_left) * (beta_right - beta_left).sinh()
        / (beta_left.cosh() * beta_right.cosh());
    (rho, sigma)
}

/// Product Gibbs state of the cut chain (γ₁=γ₂=0):
/// `(2cosh(β_L/2)·2cosh(β_R/2))⁻¹ · e^{−(β_L/2)σ₃} ⊗ e^{−(β_R/2)σ₃}`.
pub fn cut_chain_product_state(beta_left: f64, beta_right: f64) -> ComplexMatrix {
    let factor = |beta: f64| {
        let z = 2.0 * (beta / 2.0).cosh();
        ComplexMatrix::diag(&[
            Complex64::new((-beta / 2.0).exp() / z, 0.0),
            Complex64::new((beta / 2.0).exp() / z, 0.0),
        ])
    };
    factor(beta_left).kron(&factor(beta_right))
}
