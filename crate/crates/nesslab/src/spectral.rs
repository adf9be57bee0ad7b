//! Spectral structure of the system Hamiltonian: energy levels with their
//! orthogonal projections, the Bohr frequency set, and the jump operators
//! `Q(E) = Σ_{E_m−E_n=E} P_n Q P_m` that feed the Davies generator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default relative clustering tolerance for eigenvalues and Bohr frequencies.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Frobenius-norm threshold below which a jump operator counts as zero.
pub const JUMP_PRUNE_TOL: f64 = 1e-12;

/// Energy levels of a Hamiltonian after degeneracy clustering.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// `(E_n, P_n)` pairs with energies ascending; `Σ P_n = 1`.
    pub levels: Vec<(f64, ComplexMatrix)>,
    /// Distinct values of `E_m − E_n`, ascending; contains 0 and is
    /// symmetric under negation.
    pub bohr_frequencies: Vec<f64>,
    /// Relative tolerance used for both level and frequency clustering.
    pub cluster_tol: f64,
    dim: usize,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Σ_n E_n P_n`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim, self.dim);
        for (energy, p) in &self.levels {
            h = &h + &p.scale(Complex64::new(*energy, 0.0));
        }
        h
    }
}

/// Jump operators keyed by Bohr frequency.
///
/// Zero operators are retained so that effective-coupling checks can scan
/// the full frequency set; pruning happens only at generator assembly.
#[derive(Debug, Clone)]
pub struct JumpOperators {
    /// `(E, Q(E))` aligned with the decomposition's Bohr frequencies.
    pub entries: Vec<(f64, ComplexMatrix)>,
}

impl JumpOperators {
    /// Entries with `‖Q(E)‖_F` above the pruning threshold.
    pub fn nonzero(&self) -> impl Iterator<Item = &(f64, ComplexMatrix)> {
        self.entries
            .iter()
            .filter(|(_, q)| q.frobenius_norm() >= JUMP_PRUNE_TOL)
    }

    /// `Σ_E Q(E)`, which must reproduce the coupling operator.
    pub fn total(&self) -> ComplexMatrix {
        let dim = self.entries[0].1.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (_, q) in &self.entries {
            sum = &sum + q;
        }
        sum
    }
}

/// Split a Hermitian `H` into clustered energy levels and Bohr frequencies.
///
/// Eigenvalues closer than `cluster_tol·(1 + spectral radius)` are merged
/// into a single level whose projection spans the merged eigenvectors.
/// Degenerate levels must merge here: the resonance classes in the jump
/// operator construction assume exact degeneracy.
pub fn decompose(h: &ComplexMatrix, cluster_tol: f64) -> Result<SpectralDecomposition> {
    let es = h.eigh()?;
    let dim = h.rows();
    let radius = es
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let tol = cluster_tol * (1.0 + radius);

    let mut levels: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && es.eigenvalues[end] - es.eigenvalues[end - 1] <= tol {
            end += 1;
        }
        let energy = es.eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        let mut proj = ComplexMatrix::zeros(dim, dim);
        for k in start..end {
            let v = es.eigenvectors.column(k);
            for i in 0..dim {
                for j in 0..dim {
                    proj[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        levels.push((energy, proj.hermitize()));
        start = end;
    }

    // Cluster the positive level differences, then mirror: the Bohr set
    // always contains 0 and is exactly symmetric under negation.
    let mut positive: Vec<f64> = Vec::new();
    for (m, (em, _)) in levels.iter().enumerate() {
        for (en, _) in levels.iter().take(m) {
            positive.push(em - en);
        }
    }
    positive.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clustered: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < positive.len() {
        let mut j = i + 1;
        while j < positive.len() && positive[j] - positive[j - 1] <= tol {
            j += 1;
        }
        clustered.push(positive[i..j].iter().sum::<f64>() / (j - i) as f64);
        i = j;
    }
    let mut bohr_frequencies: Vec<f64> = clustered.iter().map(|&f| -f).collect();
    bohr_frequencies.reverse();
    bohr_frequencies.push(0.0);
    bohr_frequencies.extend(clustered.iter().copied());

    Ok(SpectralDecomposition {
        levels,
        bohr_frequencies,
        cluster_tol,
        dim,
    })
}

/// Build the jump operators `Q(E) = Σ_{E_m−E_n=E} P_n Q P_m` for every Bohr
/// frequency of the decomposition, keeping zero entries.
pub fn jump_operators(dec: &SpectralDecomposition, q: &ComplexMatrix) -> Result<JumpOperators> {
    if q.rows() != dec.dim() || q.cols() != dec.dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.dim(),
            actual: q.rows(),
        });
    }
    let dim = dec.dim();
    let mut entries: Vec<(f64, ComplexMatrix)> = dec
        .bohr_frequencies
        .iter()
        .map(|&f| (f, ComplexMatrix::zeros(dim, dim)))
        .collect();

    let radius = dec
        .levels
        .iter()
        .fold(0.0f64, |acc, (e, _)| acc.max(e.abs()));
    let tol = dec.cluster_tol * (1.0 + radius);

    for (en, pn) in &dec.levels {
        for (em, pm) in &dec.levels {
            let diff = em - en;
            let slot = nearest_index(&dec.bohr_frequencies, diff);
            debug_assert!(
                (dec.bohr_frequencies[slot] - diff).abs() <= tol.max(1e-12),
                "level difference {diff} not in the Bohr set"
            );
            let term = pn.matmul(q).matmul(pm);
            entries[slot].1 = &entries[slot].1 + &term;
        }
    }
    Ok(JumpOperators { entries })
}

fn nearest_index(sorted: &[f64], x: f64) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (k, &v) in sorted.iter().enumerate() {
        let d = (v - x).abs();
        if d < best_dist {
            best_dist = d;
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
    }

    fn random_hermitian(rng: &mut StdRng, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .hermitize()
    }

    fn xy_isotropic_hamiltonian() -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let sy = ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::ZERO],
        ]);
        (&(&sigma_z().kron(&id) + &id.kron(&sigma_z()))
            + &(&sigma_x().kron(&sigma_x()) + &sy.kron(&sy)))
            .scale(Complex64::new(0.5, 0.0))
    }

    #[test]
    fn decompose_two_level() {
        let dec = decompose(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.levels.len(), 2);
        assert!((dec.levels[0].0 + 1.0).abs() < 1e-12);
        assert!((dec.levels[1].0 - 1.0).abs() < 1e-12);
        let p_minus = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]);
        let p_plus = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(dec.levels[0].1.max_abs_diff(&p_minus) < 1e-12);
        assert!(dec.levels[1].1.max_abs_diff(&p_plus) < 1e-12);
        assert_eq!(dec.bohr_frequencies.len(), 3);
        for (got, want) in dec.bohr_frequencies.iter().zip([-2.0, 0.0, 2.0].iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn decompose_fully_degenerate() {
        let dec = decompose(&ComplexMatrix::identity(2), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.levels.len(), 1);
        assert!((dec.levels[0].0 - 1.0).abs() < 1e-14);
        assert!(dec.levels[0].1.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert_eq!(dec.bohr_frequencies, vec![0.0]);
    }

    #[test]
    fn decompose_xy_isotropic() {
        let dec = decompose(&xy_isotropic_hamiltonian(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.levels.len(), 2);
        assert!((dec.levels[0].0 + 1.0).abs() < 1e-12);
        assert!((dec.levels[1].0 - 1.0).abs() < 1e-12);
        for (_, p) in &dec.levels {
            assert!((p.trace().re - 2.0).abs() < 1e-10, "each level has rank 2");
        }
        for (got, want) in dec.bohr_frequencies.iter().zip([-2.0, 0.0, 2.0].iter()) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_invariants_random() {
        let mut rng = StdRng::seed_from_u64(5);
        for d in 2..=6 {
            let h = random_hermitian(&mut rng, d);
            let dec = decompose(&h, DEFAULT_CLUSTER_TOL).unwrap();
            let mut sum = ComplexMatrix::zeros(d, d);
            for (_, p) in &dec.levels {
                assert!(p.max_abs_diff(&p.matmul(p)) < 1e-10, "idempotent");
                assert!(p.max_abs_diff(&p.adjoint()) < 1e-10, "self-adjoint");
                sum = &sum + p;
            }
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
            assert!(dec.reconstruct().max_abs_diff(&h) < 1e-10);
            for (m, (_, pm)) in dec.levels.iter().enumerate() {
                for (n, (_, pn)) in dec.levels.iter().enumerate() {
                    if m != n {
                        assert!(pm.matmul(pn).max_abs() < 1e-10, "orthogonal");
                    }
                }
            }
        }
    }

    #[test]
    fn bohr_set_symmetric_and_contains_zero() {
        let mut rng = StdRng::seed_from_u64(9);
        for d in 2..=6 {
            let h = random_hermitian(&mut rng, d);
            let dec = decompose(&h, DEFAULT_CLUSTER_TOL).unwrap();
            let freqs = &dec.bohr_frequencies;
            assert!(freqs.contains(&0.0));
            for &f in freqs.iter() {
                assert!(
                    freqs.iter().any(|&g| (g + f).abs() < 1e-12),
                    "negation closure"
                );
            }
            for w in freqs.windows(2) {
                assert!(w[0] < w[1], "strictly ascending");
            }
        }
    }

    #[test]
    fn clustering_idempotent() {
        let h = xy_isotropic_hamiltonian();
        let first = decompose(&h, DEFAULT_CLUSTER_TOL).unwrap();
        let diag: Vec<Complex64> = first
            .levels
            .iter()
            .flat_map(|(e, p)| {
                let rank = p.trace().re.round() as usize;
                std::iter::repeat_n(Complex64::new(*e, 0.0), rank)
            })
            .collect();
        let second = decompose(&ComplexMatrix::diag(&diag), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(first.levels.len(), second.levels.len());
        for ((e1, _), (e2, _)) in first.levels.iter().zip(second.levels.iter()) {
            assert!((e1 - e2).abs() < 1e-14);
        }
    }

    #[test]
    fn jump_operators_two_level_flip() {
        let dec = decompose(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let jumps = jump_operators(&dec, &sigma_x()).unwrap();
        assert_eq!(jumps.entries.len(), 3);
        let lowering = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]);
        let raising = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(jumps.entries[0].1.max_abs_diff(&raising) < 1e-12, "Q(−2)");
        assert!(jumps.entries[1].1.max_abs() < 1e-12, "Q(0) = 0");
        assert!(jumps.entries[2].1.max_abs_diff(&lowering) < 1e-12, "Q(+2)");
    }

    #[test]
    fn jump_operators_single_level_passthrough() {
        let dec = decompose(&ComplexMatrix::identity(2), DEFAULT_CLUSTER_TOL).unwrap();
        let q = sigma_x();
        let jumps = jump_operators(&dec, &q).unwrap();
        assert_eq!(jumps.entries.len(), 1);
        assert!(jumps.entries[0].1.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn jump_operators_commuting_coupling() {
        let dec = decompose(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let jumps = jump_operators(&dec, &sigma_z()).unwrap();
        assert!(jumps.entries[0].1.max_abs() < 1e-12);
        assert!(jumps.entries[1].1.max_abs_diff(&sigma_z()) < 1e-12);
        assert!(jumps.entries[2].1.max_abs() < 1e-12);
    }

    #[test]
    fn jump_operators_dimension_check() {
        let dec = decompose(&sigma_z(), DEFAULT_CLUSTER_TOL).unwrap();
        let q3 = ComplexMatrix::identity(3);
        assert!(matches!(
            jump_operators(&dec, &q3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jump_operators_sum_and_adjoint_symmetry() {
        let mut rng = StdRng::seed_from_u64(13);
        for d in 2..=6 {
            let h = random_hermitian(&mut rng, d);
            let q = random_hermitian(&mut rng, d);
            let dec = decompose(&h, DEFAULT_CLUSTER_TOL).unwrap();
            let jumps = jump_operators(&dec, &q).unwrap();
            assert!(jumps.total().max_abs_diff(&q) < 1e-10, "Σ_E Q(E) = Q");
            // Hermitian coupling pairs frequencies: Q(−E) = Q(E)†.
            let n = jumps.entries.len();
            for k in 0..n {
                let (e, ref qe) = jumps.entries[k];
                let (e_neg, ref q_neg) = jumps.entries[n - 1 - k];
                assert!((e + e_neg).abs() < 1e-10);
                assert!(q_neg.max_abs_diff(&qe.adjoint()) < 1e-10);
            }
        }
    }

    #[test]
    fn jump_operators_are_eigenoperators() {
        // e^{iHt} Q(E) e^{−iHt} = e^{−iEt} Q(E) for the lowering convention
        // Q(E) = Σ_{E_m−E_n=E} P_n Q P_m.
        let mut rng = StdRng::seed_from_u64(17);
        for d in 2..=6 {
            let h = random_hermitian(&mut rng, d);
            let q = random_hermitian(&mut rng, d);
            let dec = decompose(&h, DEFAULT_CLUSTER_TOL).unwrap();
            let jumps = jump_operators(&dec, &q).unwrap();
            for &t in &[0.3, 1.0] {
                let u = h.scale(Complex64::new(0.0, t)).expm().unwrap();
                let u_inv = h.scale(Complex64::new(0.0, -t)).expm().unwrap();
                for (e, qe) in &jumps.entries {
                    let conjugated = u.matmul(qe).matmul(&u_inv);
                    let phased = qe.scale(Complex64::new(0.0, -e * t).exp());
                    assert!(conjugated.max_abs_diff(&phased) < 1e-8);
                }
            }
        }
    }
}
