//! Kraus-operator channels, the Pauli-Liouville picture, channel presets,
//! seeded random CPTP generation, and fidelity utilities.
//!
//! A channel is stored as a finite list of Kraus operators {K_k} with
//! Σ K_k†K_k = I. Qubit channels additionally admit the Pauli transfer
//! matrix Γ with entries Γ_ij = tr[P_i† ℰ(P_j)]/2 over the operator basis
//! (I, X, Z, XZ); in that picture channel composition is plain matrix
//! multiplication, which is what all the twirling algebra runs on.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    self, all_finite, c64, dagger, frobenius_distance, identity, pauli_basis, trace, CMatrix,
};

/// Tolerance on ‖Σ K†K − I‖_F below which a Kraus list counts as
/// trace preserving.
pub const CPTP_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct Channel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl Channel {
    /// Builds a channel from Kraus operators, verifying that the list is
    /// nonempty, every operator is a finite `dim`×`dim` matrix, and
    /// Σ K†K = I within [`CPTP_TOL`].
    pub fn new(dim: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(
                "channel dimension must be positive".into(),
            ));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        for (k, op) in kraus.iter().enumerate() {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::Dimension(format!(
                    "Kraus operator {} is {}x{}, expected {dim}x{dim}",
                    k,
                    op.nrows(),
                    op.ncols()
                )));
            }
            if !all_finite(op) {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} has non-finite entries"
                )));
            }
        }
        let channel = Self { dim, kraus };
        let defect = channel.trace_defect();
        if defect > CPTP_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving: ||sum K†K - I||_F = {defect:.3e}"
            )));
        }
        Ok(channel)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// ‖Σ K†K − I‖_F, the trace-preservation defect.
    pub fn trace_defect(&self) -> f64 {
        let mut sum: CMatrix = Array2::zeros((self.dim, self.dim));
        for k in &self.kraus {
            sum = sum + dagger(k).dot(k);
        }
        frobenius_distance(&sum, &identity(self.dim))
    }

    /// The identity channel on a `dim`-level system.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![identity(dim)],
        }
    }

    /// The unitary channel ρ ↦ UρU†. The argument must pass the structural
    /// unitarity check.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        if !linalg::unitarity_check(u, crate::STRUCTURAL_TOL) {
            return Err(Error::Parameter(
                "unitary channel argument fails the unitarity check".into(),
            ));
        }
        Ok(Self {
            dim: u.nrows(),
            kraus: vec![u.clone()],
        })
    }

    /// Depolarizing qubit channel ρ ↦ pρ + (1−p)I/2 for p ∈ [0, 1].
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!(
                "depolarizing probability must be in [0, 1], got {p}"
            )));
        }
        // I/2 = (ρ + XρX† + ZρZ† + (XZ)ρ(XZ)†)/4, so the Kraus weights are
        // (1+3p)/4 on the identity and (1−p)/4 on each of X, Z, XZ.
        let w0 = ((1.0 + 3.0 * p) / 4.0).sqrt();
        let w = ((1.0 - p) / 4.0).sqrt();
        let [i, x, z, xz] = pauli_basis();
        Ok(Self {
            dim: 2,
            kraus: vec![
                i.mapv(|v| v * w0),
                x.mapv(|v| v * w),
                z.mapv(|v| v * w),
                xz.mapv(|v| v * w),
            ],
        })
    }

    /// Dephasing qubit channel with Kraus operators {√(1−λ)·I, √λ·Z}.
    pub fn dephasing(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Parameter(format!(
                "dephasing probability must be in [0, 1], got {lambda}"
            )));
        }
        Ok(Self {
            dim: 2,
            kraus: vec![
                identity(2).mapv(|v| v * (1.0 - lambda).sqrt()),
                linalg::pauli_z().mapv(|v| v * lambda.sqrt()),
            ],
        })
    }

    /// Amplitude-damping qubit channel in the standard two-Kraus form.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Parameter(format!(
                "damping rate must be in [0, 1], got {gamma}"
            )));
        }
        let mut k0: CMatrix = Array2::zeros((2, 2));
        k0[[0, 0]] = c64(1.0, 0.0);
        k0[[1, 1]] = c64((1.0 - gamma).sqrt(), 0.0);
        let mut k1: CMatrix = Array2::zeros((2, 2));
        k1[[0, 1]] = c64(gamma.sqrt(), 0.0);
        Ok(Self {
            dim: 2,
            kraus: vec![k0, k1],
        })
    }

    /// Applies the channel to a density matrix: Σ K ρ K†.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::Dimension(format!(
                "state is {}x{} but channel dimension is {}",
                rho.nrows(),
                rho.ncols(),
                self.dim
            )));
        }
        let mut out: CMatrix = Array2::zeros((self.dim, self.dim));
        for k in &self.kraus {
            out = out + k.dot(rho).dot(&dagger(k));
        }
        Ok(out)
    }

    /// Composition self ∘ inner (`inner` acts first); the Kraus set is the
    /// pairwise products {A_i B_j}.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if self.dim != inner.dim {
            return Err(Error::Dimension(format!(
                "cannot compose channels of dimension {} and {}",
                self.dim, inner.dim
            )));
        }
        let kraus: Vec<CMatrix> = self
            .kraus
            .iter()
            .flat_map(|a| inner.kraus.iter().map(move |b| a.dot(b)))
            .collect();
        Ok(Channel {
            dim: self.dim,
            kraus,
        })
    }

    /// Pauli transfer matrix of a qubit channel.
    pub fn ptm(&self) -> Result<PauliTransferMatrix> {
        if self.dim != 2 {
            return Err(Error::Dimension(format!(
                "Pauli transfer matrix needs a qubit channel, got dimension {}",
                self.dim
            )));
        }
        let basis = pauli_basis();
        let mut gamma: CMatrix = Array2::zeros((4, 4));
        for (j, pj) in basis.iter().enumerate() {
            let image = self.apply(pj)?;
            for (i, pi) in basis.iter().enumerate() {
                gamma[[i, j]] = trace(&dagger(pi).dot(&image)) / 2.0;
            }
        }
        Ok(PauliTransferMatrix { gamma })
    }

    /// Choi matrix Σ_k vec(K_k)vec(K_k)† (column-stacking convention),
    /// positive semidefinite iff the Kraus list describes a CP map.
    pub fn choi(&self) -> CMatrix {
        let d2 = self.dim * self.dim;
        let mut choi: CMatrix = Array2::zeros((d2, d2));
        for k in &self.kraus {
            let mut v: Vec<Complex64> = Vec::with_capacity(d2);
            for col in 0..self.dim {
                for row in 0..self.dim {
                    v.push(k[[row, col]]);
                }
            }
            for (a, &va) in v.iter().enumerate() {
                for (b, &vb) in v.iter().enumerate() {
                    choi[[a, b]] += va * vb.conj();
                }
            }
        }
        choi
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> f64 {
        let eigs = linalg::hermitian_eigenvalues(&self.choi())
            .expect("Choi matrix is square by construction");
        eigs[0]
    }
}

/// 4×4 matrix of a qubit channel over the basis (I, X, Z, XZ).
#[derive(Debug, Clone)]
pub struct PauliTransferMatrix {
    gamma: CMatrix,
}

impl PauliTransferMatrix {
    /// Wraps an explicit 4×4 matrix.
    pub fn from_gamma(gamma: CMatrix) -> Result<Self> {
        if gamma.dim() != (4, 4) {
            return Err(Error::Dimension(format!(
                "Pauli transfer matrix must be 4x4, got {}x{}",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        Ok(Self { gamma })
    }

    /// Transfer matrix of the conjugation ρ ↦ UρU† for a qubit unitary.
    pub fn of_unitary(u: &CMatrix) -> Result<Self> {
        if u.dim() != (2, 2) {
            return Err(Error::Dimension(format!(
                "expected a 2x2 unitary, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let ud = dagger(u);
        let basis = pauli_basis();
        let mut gamma: CMatrix = Array2::zeros((4, 4));
        for (j, pj) in basis.iter().enumerate() {
            let image = u.dot(pj).dot(&ud);
            for (i, pi) in basis.iter().enumerate() {
                gamma[[i, j]] = trace(&dagger(pi).dot(&image)) / 2.0;
            }
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    /// Matrix product, i.e. the transfer matrix of the composition
    /// self ∘ inner.
    pub fn dot(&self, inner: &PauliTransferMatrix) -> PauliTransferMatrix {
        PauliTransferMatrix {
            gamma: self.gamma.dot(&inner.gamma),
        }
    }

    /// Depolarizing parameter η = (tr Γ − 1)/3. For any 2-design twirl the
    /// transfer matrix is diag(1, η, η, η), and because twirling preserves
    /// the trace of Γ this extraction is valid on the *untwirled* matrix as
    /// well. Errors if the accumulated imaginary part exceeds 1e-10.
    pub fn eta(&self) -> Result<f64> {
        let t = trace(&self.gamma);
        let eta = (t - 1.0) / 3.0;
        if eta.im.abs() >= 1e-10 {
            return Err(Error::Numerical(format!(
                "depolarizing parameter has imaginary part {:.3e}",
                eta.im
            )));
        }
        Ok(eta.re)
    }
}

/// Random CPTP qubit channel with `kraus_count` Kraus operators, built from a
/// Stinespring isometry: a (2·kraus_count)×2 matrix of standard complex
/// Gaussians is drawn from the seeded generator, its columns are
/// orthonormalized, and the rows are sliced into 2×2 blocks. Deterministic
/// for a fixed seed.
pub fn random_channel(seed: u64, kraus_count: usize) -> Channel {
    assert!(kraus_count >= 1, "need at least one Kraus operator");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = 2 * kraus_count;
    let mut cols: Vec<Vec<Complex64>> = (0..2)
        .map(|_| {
            (0..rows)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    c64(re, im)
                })
                .collect()
        })
        .collect();

    // Modified Gram-Schmidt on the two columns.
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n0 = norm(&cols[0]);
    cols[0].iter_mut().for_each(|z| *z /= n0);
    let overlap: Complex64 = cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(a, b)| a.conj() * b)
        .sum();
    let col0 = cols[0].clone();
    cols[1]
        .iter_mut()
        .zip(&col0)
        .for_each(|(b, a)| *b -= overlap * a);
    let n1 = norm(&cols[1]);
    cols[1].iter_mut().for_each(|z| *z /= n1);

    let kraus: Vec<CMatrix> = (0..kraus_count)
        .map(|k| {
            let mut m: CMatrix = Array2::zeros((2, 2));
            for r in 0..2 {
                for c in 0..2 {
                    m[[r, c]] = cols[c][2 * k + r];
                }
            }
            m
        })
        .collect();
    Channel::new(2, kraus).expect("Stinespring construction is CPTP by design")
}

/// Monte-Carlo estimate of the average gate fidelity
/// ∫⟨ψ|ℰ(|ψ⟩⟨ψ|)|ψ⟩ dψ over Haar-random pure states, with the standard error
/// of the mean. Haar sampling draws normalized vectors of independent
/// standard complex Gaussians.
pub fn avg_gate_fidelity_mc(e: &Channel, n_samples: usize, seed: u64) -> (f64, f64) {
    assert!(n_samples >= 1, "need at least one sample");
    let d = e.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let mut psi: Vec<Complex64> = (0..d)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c64(re, im)
            })
            .collect();
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|z| *z /= n);

        let mut rho: CMatrix = Array2::zeros((d, d));
        for (r, &pr) in psi.iter().enumerate() {
            for (c, &pc) in psi.iter().enumerate() {
                rho[[r, c]] = pr * pc.conj();
            }
        }
        let image = e.apply(&rho).expect("state dimension matches channel");
        let mut fid = c64(0.0, 0.0);
        for (r, &pr) in psi.iter().enumerate() {
            for (c, &pc) in psi.iter().enumerate() {
                fid += pr.conj() * image[[r, c]] * pc;
            }
        }
        sum += fid.re;
        sum_sq += fid.re * fid.re;
    }
    let mean = sum / n_samples as f64;
    let std_err = if n_samples > 1 {
        let var = (sum_sq - sum * sum / n_samples as f64) / (n_samples as f64 - 1.0);
        (var.max(0.0) / n_samples as f64).sqrt()
    } else {
        0.0
    };
    (mean, std_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, pauli_x, projector};

    fn diag4(d: [f64; 4]) -> CMatrix {
        let mut m: CMatrix = Array2::zeros((4, 4));
        for (i, v) in d.into_iter().enumerate() {
            m[[i, i]] = c64(v, 0.0);
        }
        m
    }

    #[test]
    fn identity_channel_ptm_is_identity() {
        let ptm = Channel::identity(2).ptm().unwrap();
        assert!(frobenius_distance(ptm.gamma(), &identity(4)) < 1e-14);
    }

    #[test]
    fn x_channel_ptm() {
        // Conjugating each basis element by X by hand:
        // XIX = I, XXX = X, XZX = -Z, X(XZ)X = -XZ.
        let ptm = Channel::from_unitary(&pauli_x()).unwrap().ptm().unwrap();
        assert!(frobenius_distance(ptm.gamma(), &diag4([1.0, 1.0, -1.0, -1.0])) < 1e-14);
    }

    #[test]
    fn depolarizing_ptm_is_diagonal() {
        for p in [0.0, 0.3, 0.8, 1.0] {
            let ptm = Channel::depolarizing(p).unwrap().ptm().unwrap();
            assert!(
                frobenius_distance(ptm.gamma(), &diag4([1.0, p, p, p])) < 1e-13,
                "p = {p}"
            );
        }
    }

    #[test]
    fn eta_examples() {
        let ptm = PauliTransferMatrix::from_gamma(diag4([1.0, 0.7, 0.7, 0.7])).unwrap();
        assert!((ptm.eta().unwrap() - 0.7).abs() < 1e-14);
        let ptm = Channel::identity(2).ptm().unwrap();
        assert!((ptm.eta().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eta_of_amplitude_damping() {
        // PTM diagonal of amplitude damping is (1, √(1−γ), √(1−γ), 1−γ), so
        // η = (2√0.9 + 0.9)/3; cross-checked against the trace formula.
        let e = Channel::amplitude_damping(0.1).unwrap();
        let eta = e.ptm().unwrap().eta().unwrap();
        let expected = (2.0 * 0.9_f64.sqrt() + 0.9) / 3.0;
        assert!((eta - expected).abs() < 1e-13);
        assert!((eta - 0.932455532).abs() < 1e-9);
    }

    #[test]
    fn eta_rejects_imaginary_trace() {
        let mut gamma = identity(4);
        gamma[[2, 2]] = c64(1.0, 1e-6);
        let ptm = PauliTransferMatrix::from_gamma(gamma).unwrap();
        assert!(matches!(ptm.eta(), Err(Error::Numerical(_))));
    }

    #[test]
    fn preset_parameter_ranges() {
        assert!(matches!(
            Channel::depolarizing(1.2),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(Channel::dephasing(-0.1), Err(Error::Parameter(_))));
        assert!(matches!(
            Channel::amplitude_damping(7.0),
            Err(Error::Parameter(_))
        ));
        let stretched = identity(2).mapv(|z| z * 2.0);
        assert!(matches!(
            Channel::from_unitary(&stretched),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn depolarizing_endpoints() {
        // p = 1 behaves as the identity channel on a non-trivial state;
        // p = 0 sends every unit-trace state to I/2.
        let rho = ndarray::array![
            [c64(0.25, 0.0), c64(0.1, -0.3)],
            [c64(0.1, 0.3), c64(0.75, 0.0)],
        ];
        let keep = Channel::depolarizing(1.0).unwrap().apply(&rho).unwrap();
        assert!(frobenius_distance(&keep, &rho) < 1e-14);
        let crush = Channel::depolarizing(0.0).unwrap().apply(&rho).unwrap();
        assert!(frobenius_distance(&crush, &identity(2).mapv(|z| z * 0.5)) < 1e-14);
    }

    #[test]
    fn amplitude_damping_is_cptp() {
        let e = Channel::amplitude_damping(0.3).unwrap();
        assert!(e.trace_defect() < 1e-12);
    }

    #[test]
    fn compose_with_identity_is_identity_on_states() {
        let e = random_channel(5, 3);
        let composed = Channel::identity(2).compose(&e).unwrap();
        let rho = projector(2, 1);
        let a = e.apply(&rho).unwrap();
        let b = composed.apply(&rho).unwrap();
        assert!(frobenius_distance(&a, &b) < 1e-14);
    }

    #[test]
    fn ptm_is_a_composition_homomorphism() {
        for seed in 0..20 {
            let a = random_channel(seed, 1 + (seed % 4) as usize);
            let b = random_channel(seed + 100, 1 + ((seed + 1) % 4) as usize);
            let lhs = a.compose(&b).unwrap().ptm().unwrap();
            let rhs = a.ptm().unwrap().dot(&b.ptm().unwrap());
            assert!(
                frobenius_distance(lhs.gamma(), rhs.gamma()) < 1e-12,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn random_channels_are_cptp_and_reproducible() {
        for seed in 0..50 {
            let e = random_channel(seed, 1 + (seed % 4) as usize);
            assert!(e.trace_defect() < 1e-10, "seed {seed}");
            assert!(e.min_choi_eigenvalue() >= -1e-10, "seed {seed}");
            // Trace preservation forces the first PTM row to (1, 0, 0, 0).
            let gamma = e.ptm().unwrap().gamma().clone();
            assert!((gamma[[0, 0]] - 1.0).norm() < 1e-10);
            for j in 1..4 {
                assert!(gamma[[0, j]].norm() < 1e-10, "seed {seed}, column {j}");
            }
        }
        let a = random_channel(42, 3);
        let b = random_channel(42, 3);
        for (ka, kb) in a.kraus().iter().zip(b.kraus()) {
            assert_eq!(ka, kb);
        }
        let c = random_channel(43, 3);
        assert!(a.kraus()[0] != c.kraus()[0]);
    }

    #[test]
    fn apply_preserves_trace_and_hermiticity() {
        for seed in 0..10 {
            let e = random_channel(seed, 2);
            let rho = ndarray::array![
                [c64(0.6, 0.0), c64(0.2, 0.1)],
                [c64(0.2, -0.1), c64(0.4, 0.0)],
            ];
            let out = e.apply(&rho).unwrap();
            assert!((trace(&out) - trace(&rho)).norm() < 1e-12);
            assert!(frobenius_distance(&out, &dagger(&out)) < 1e-12);
        }
    }

    #[test]
    fn mc_fidelity_of_identity_is_one() {
        let (mean, _) = avg_gate_fidelity_mc(&Channel::identity(2), 100, 7);
        assert!((mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mc_fidelity_of_depolarizing() {
        // Haar average for depolarizing(p) is (1 + p)/2.
        let e = Channel::depolarizing(0.8).unwrap();
        let (mean, se) = avg_gate_fidelity_mc(&e, 100_000, 11);
        assert!(
            (mean - 0.9).abs() < 3.0 * se,
            "mean {mean} differs from 0.9 by more than 3 x {se}"
        );
    }

    #[test]
    fn choi_of_identity_channel() {
        let eigs = linalg::hermitian_eigenvalues(&Channel::identity(2).choi()).unwrap();
        let expected = [0.0, 0.0, 0.0, 2.0];
        for (got, want) in eigs.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_cptp_kraus() {
        let bad = vec![identity(2).mapv(|z| z * 0.5)];
        assert!(matches!(
            Channel::new(2, bad),
            Err(Error::InvalidChannel(_))
        ));
        assert!(matches!(
            Channel::new(2, vec![]),
            Err(Error::InvalidChannel(_))
        ));
        assert!(matches!(
            Channel::new(2, vec![identity(3)]),
            Err(Error::Dimension(_))
        ));
    }
}
