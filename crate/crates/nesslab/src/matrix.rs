//! Dense complex linear algebra for small matrices (d ≲ 32).
//!
//! Everything here is sized for few-level quantum systems: Hermitian
//! eigendecomposition by cyclic Jacobi rotations, SVD-based null spaces,
//! Kronecker products, column-stacking vectorization, and matrix
//! exponential/logarithm. Robustness is preferred over speed throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative asymmetry tolerance accepted by the Hermitian eigensolver.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Default relative tolerance separating kernel singular values from noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Default eigenvalue floor for the positive-definite matrix logarithm.
pub const DEFAULT_EIG_FLOOR: f64 = 1e-14;
/// Induced 1-norm cap above which `expm` refuses to run.
pub const EXPM_NORM_CAP: f64 = 1e4;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let cols = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self { rows: r, cols, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c(x)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖M − M†‖_F`, zero for exactly Hermitian input.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                sum += d.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.asymmetry() <= tol * (1.0 + self.frobenius_norm())
    }

    /// Positive semidefinite up to `tol`; requires a Hermitian matrix.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(HERMITICITY_TOL) {
            return false;
        }
        match self.eigh() {
            Ok(es) => es.eigenvalues.first().is_none_or(|&lo| lo >= -tol),
            Err(_) => false,
        }
    }

    /// `(M + M†)/2`.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Kronecker product: `(A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l]` for B of shape p×q.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        out[(i * p + k, j * q + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Column-stacking vectorization: `vec(M)[j·rows + i] = M[i,j]`.
    ///
    /// This is the global convention; together with [`ComplexMatrix::kron`]
    /// it satisfies `vec(AρB) = kron(Bᵀ, A)·vec(ρ)`.
    pub fn vectorize(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for a d×d matrix.
    pub fn devectorize(v: &[Complex64], dim: usize) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: v.len(),
            });
        }
        Ok(Self::from_fn(dim, dim, |i, j| v[j * dim + i]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
    ///
    /// The input is symmetrized to `(M+M†)/2` before iterating; rotations
    /// run until the off-diagonal Frobenius norm drops below
    /// `1e-14·‖M‖_F`, with a cap of 100 sweeps. Eigenvalues come back in
    /// ascending order with the matching unitary of column eigenvectors.
    pub fn eigh(&self) -> Result<EigenSystem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: self.cols,
            });
        }
        let scale = self.frobenius_norm();
        let asym = self.asymmetry();
        if asym > HERMITICITY_TOL * (1.0 + scale) {
            return Err(Error::NonHermitianInput {
                asymmetry: asym,
                tol: HERMITICITY_TOL * (1.0 + scale),
            });
        }

        let n = self.rows;
        let mut a = self.hermitize();
        let mut v = Self::identity(n);
        if n <= 1 {
            let eigenvalues = (0..n).map(|i| a[(i, i)].re).collect();
            return Ok(EigenSystem {
                eigenvalues,
                eigenvectors: v,
            });
        }

        let threshold = 1e-14 * scale;
        let mut converged = false;
        let mut off = off_diagonal_norm(&a);
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
            off = off_diagonal_norm(&a);
        }
        if !converged && off > threshold {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off,
            });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
        let eigenvectors = Self::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok(EigenSystem {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Right singular vectors with refined singular values, ascending.
    ///
    /// The decomposition comes from `eigh(A†A)`, which loses absolute
    /// accuracy ~√ε·‖A‖ on tiny singular values because forming the Gram
    /// matrix squares the rounding floor. Each value is therefore
    /// re-measured as `‖A·v‖` on the computed eigenvector, which is exact
    /// to ~ε·‖A‖ and keeps genuine kernel directions well below any
    /// sensible rank tolerance.
    fn singular_system(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let gram = self.adjoint().matmul(self);
        let es = gram.eigh()?;
        let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..self.cols)
            .map(|k| {
                let v = es.eigenvectors.column(k);
                let av = self.matvec(&v);
                let s = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (s, v)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let svals = pairs.iter().map(|(s, _)| *s).collect();
        let vectors = ComplexMatrix::from_fn(self.cols, self.cols, |i, j| pairs[j].1[i]);
        Ok((svals, vectors))
    }

    /// Singular values in ascending order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(self.singular_system()?.0)
    }

    /// Orthonormal basis of the numerical null space.
    ///
    /// A vector belongs to the null space when its singular value is at
    /// most `rel_tol·σ_max`; a zero matrix (σ_max = 0) counts as rank 0,
    /// so the full standard basis of the domain comes back.
    pub fn svd_null_space(&self, rel_tol: f64) -> Result<Vec<Vec<Complex64>>> {
        assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must be in (0,1)");
        let (svals, vectors) = self.singular_system()?;
        let smax = svals.last().copied().unwrap_or(0.0);
        let cutoff = rel_tol * smax;
        let mut basis = Vec::new();
        for (k, &s) in svals.iter().enumerate() {
            if s <= cutoff {
                basis.push(vectors.column(k));
            }
        }
        Ok(basis)
    }

    /// Matrix exponential by scaling-and-squaring with a Padé(13) approximant.
    ///
    /// Accurate to better than 1e-10 in relative error for `‖A‖₁ ≤ 50`;
    /// inputs with `‖A‖₁ >` [`EXPM_NORM_CAP`] are rejected.
    pub fn expm(&self) -> Result<Self> {
        assert!(self.is_square(), "expm of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let norm = self.norm_one();
        if !norm.is_finite() || norm > EXPM_NORM_CAP {
            return Err(Error::OverflowRisk {
                norm,
                cap: EXPM_NORM_CAP,
            });
        }

        // theta_13 from Higham's scaling analysis.
        let theta = 5.371_920_351_148_152;
        let squarings = if norm > theta {
            (norm / theta).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(c(0.5f64.powi(squarings as i32)));
        let mut result = pade13(&scaled)?;
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        Ok(result)
    }

    /// Logarithm of a Hermitian positive-semidefinite matrix.
    ///
    /// Eigenvalues below `eig_floor` are clamped up to it before taking
    /// logs, so strictly singular inputs yield a large-but-finite result.
    pub fn logm_pd(&self, eig_floor: f64) -> Result<Self> {
        let es = self.eigh()?;
        let min = es.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let logs: Vec<Complex64> = es
            .eigenvalues
            .iter()
            .map(|&l| c(l.max(eig_floor).ln()))
            .collect();
        let u = &es.eigenvectors;
        Ok(u.matmul(&ComplexMatrix::diag(&logs))
            .matmul(&u.adjoint())
            .hermitize())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(c(-1.0))
    }
}

/// Eigenvalues (ascending) and the unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// `U diag(λ) U†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&l| c(l)).collect();
        self.eigenvectors
            .matmul(&ComplexMatrix::diag(&d))
            .matmul(&self.eigenvectors.adjoint())
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilate the (p,q) entry of the Hermitian matrix `a` with a unitary
/// plane rotation, accumulating it into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a[(p, q)];
    let r = beta.norm();
    if r == 0.0 {
        return;
    }
    let phase = beta / r;
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let tau = (gamma - alpha) / (2.0 * r);
    // Smaller root of t² − 2τt − 1 = 0 keeps the rotation angle ≤ π/4.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;

    let n = a.rows();
    // A ← A·U with U[p,p]=c, U[p,q]=−s·e^{iφ}, U[q,p]=s·e^{−iφ}, U[q,q]=c.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * cos + aiq * sin * phase.conj();
        a[(i, q)] = -aip * sin * phase + aiq * cos;
    }
    // A ← U†·A.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * cos + aqj * sin * phase;
        a[(q, j)] = -apj * sin * phase.conj() + aqj * cos;
    }
    // Pin the entries the rotation zeroes and keep the diagonal real.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = c(a[(p, p)].re);
    a[(q, q)] = c(a[(q, q)].re);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * cos + viq * sin * phase.conj();
        v[(i, q)] = -vip * sin * phase + viq * cos;
    }
}

/// Padé(13,13) approximant of exp(A); coefficients from Higham (2005).
fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    const B: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];
    let n = a.rows();
    let eye = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let w1 = &(&a6.scale(c(B[13])) + &a4.scale(c(B[11]))) + &a2.scale(c(B[9]));
    let w2 = &(&(&a6.matmul(&w1) + &a6.scale(c(B[7]))) + &a4.scale(c(B[5])))
        + &(&a2.scale(c(B[3])) + &eye.scale(c(B[1])));
    let u = a.matmul(&w2);

    let z1 = &(&a6.scale(c(B[12])) + &a4.scale(c(B[10]))) + &a2.scale(c(B[8]));
    let vmat = &(&(&a6.matmul(&z1) + &a6.scale(c(B[6]))) + &a4.scale(c(B[4])))
        + &(&a2.scale(c(B[2])) + &eye.scale(c(B[0])));

    // exp(A) ≈ (V − U)⁻¹ (V + U)
    solve(&(&vmat - &u), &(&vmat + &u))
}

/// Solve AX = B by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let m = b.cols();
    let mut aug = ComplexMatrix::zeros(n, n + m);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)];
        }
        for j in 0..m {
            aug[(i, n + j)] = b[(i, j)];
        }
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                aug[(i, col)]
                    .norm()
                    .partial_cmp(&aug[(j, col)].norm())
                    .unwrap()
            })
            .unwrap();
        let pivot = aug[(pivot_row, col)];
        if pivot.norm() < 1e-300 {
            return Err(Error::NoConvergence {
                sweeps: 0,
                off: pivot.norm(),
            });
        }
        if pivot_row != col {
            for j in 0..n + m {
                let tmp = aug[(col, j)];
                aug[(col, j)] = aug[(pivot_row, j)];
                aug[(pivot_row, j)] = tmp;
            }
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = aug[(i, col)] / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..n + m {
                let v = aug[(col, j)];
                aug[(i, j)] -= factor * v;
            }
        }
    }
    let mut x = ComplexMatrix::zeros(n, m);
    for i in 0..n {
        let pivot = aug[(i, i)];
        for j in 0..m {
            x[(i, j)] = aug[(i, n + j)] / pivot;
        }
    }
    Ok(x)
}
