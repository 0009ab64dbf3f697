//! Dense complex linear algebra for small tensor-product Hilbert spaces.
//!
//! Everything runs on [`CMatrix`] (`ndarray::Array2<Complex64>`), the carrier
//! for states, gates, and superoperator blocks alike. The largest space in
//! this crate is the 24-dimensional qubit ⊗ ququart ⊗ qutrit register, so all
//! routines are written for clarity rather than speed: plain dense storage,
//! no sparsity, no blocking.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
pub type CMatrix = Array2<Complex64>;

/// Ordered list of tensor factor dimensions, e.g. `[2, 4, 3]` for a
/// qubit ⊗ ququart ⊗ qutrit register. Factor 0 is the most significant index
/// in the row-major flattening: the flat index of `(i0, i1, i2)` over
/// `[d0, d1, d2]` is `(i0·d1 + i1)·d2 + i2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionProfile {
    factors: Vec<usize>,
}

impl DimensionProfile {
    /// Builds a profile from factor dimensions. Every factor must be ≥ 1 and
    /// the list must be nonempty.
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Dimension(
                "dimension profile must be nonempty".into(),
            ));
        }
        if factors.contains(&0) {
            return Err(Error::Dimension(
                "factor dimensions must be positive".into(),
            ));
        }
        Ok(Self {
            factors: factors.to_vec(),
        })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Product of all factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// Decomposes a flat index into one index per factor.
    fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.factors.len()];
        for (k, &d) in self.factors.iter().enumerate().rev() {
            idx[k] = flat % d;
            flat /= d;
        }
        idx
    }

    /// Recombines per-factor indices into a flat index.
    fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.factors)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

/// Complex constant shorthand.
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Identity matrix of dimension `d`.
pub fn identity(d: usize) -> CMatrix {
    Array2::eye(d)
}

/// Projector |i⟩⟨i| on the computational basis state `i` of dimension `d`.
pub fn projector(d: usize, i: usize) -> CMatrix {
    let mut m = Array2::zeros((d, d));
    m[[i, i]] = c64(1.0, 0.0);
    m
}

/// Pauli X (the bit flip |i⟩ ↦ |i ⊕ 1⟩).
pub fn pauli_x() -> CMatrix {
    ndarray::array![
        [c64(0.0, 0.0), c64(1.0, 0.0)],
        [c64(1.0, 0.0), c64(0.0, 0.0)],
    ]
}

/// Pauli Z (the phase flip |i⟩ ↦ (−1)^i |i⟩).
pub fn pauli_z() -> CMatrix {
    ndarray::array![
        [c64(1.0, 0.0), c64(0.0, 0.0)],
        [c64(0.0, 0.0), c64(-1.0, 0.0)],
    ]
}

/// The product X·Z (equal to −iY); used as the fourth basis element so the
/// whole operator basis is generated by X and Z alone.
pub fn pauli_xz() -> CMatrix {
    pauli_x().dot(&pauli_z())
}

/// The operator basis (I, X, Z, XZ), in that fixed order.
pub fn pauli_basis() -> [CMatrix; 4] {
    [identity(2), pauli_x(), pauli_z(), pauli_xz()]
}

/// The order-3 Clifford gate (1/√2)[[1, −i], [1, i]], which cycles the Pauli
/// axes under conjugation: X → Y → Z → X. Its third power is the identity up
/// to a global phase.
pub fn axis_cycle_gate() -> CMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    ndarray::array![[c64(s, 0.0), c64(0.0, -s)], [c64(s, 0.0), c64(0.0, s)],]
}

/// The phase gate diag(1, i).
pub fn phase_gate() -> CMatrix {
    ndarray::array![
        [c64(1.0, 0.0), c64(0.0, 0.0)],
        [c64(0.0, 0.0), c64(0.0, 1.0)],
    ]
}

/// The Hadamard gate, i.e. the 2-dimensional Fourier matrix.
pub fn hadamard() -> CMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    ndarray::array![[c64(s, 0.0), c64(s, 0.0)], [c64(s, 0.0), c64(-s, 0.0)],]
}

/// Discrete Fourier matrix of dimension `d`: entry (j, k) = ω^{jk}/√d with
/// ω = exp(2πi/d). Coincides with Hadamard for d = 2.
///
/// Only the column-0 overlap |⟨j|H†|0⟩|² = 1/d enters the twirl construction,
/// so the sign of the exponent is immaterial; the conjugate convention is
/// covered by a property test on the supermap output.
pub fn fourier_matrix(d: usize) -> CMatrix {
    assert!(d >= 1, "fourier_matrix requires d >= 1");
    let norm = 1.0 / (d as f64).sqrt();
    Array2::from_shape_fn((d, d), |(j, k)| {
        let angle = 2.0 * std::f64::consts::PI * ((j * k) as f64) / (d as f64);
        Complex64::from_polar(norm, angle)
    })
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product; entry ((i·b_rows + k), (j·b_cols + l)) = a(i,j)·b(k,l).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    ndarray::linalg::kron(a, b)
}

/// Trace.
pub fn trace(m: &CMatrix) -> Complex64 {
    m.diag().sum()
}

/// Frobenius norm √Σ|m_ij|².
pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance ‖a − b‖_F.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius_norm(&(a - b))
}

/// True iff every entry is finite (no NaN or ±∞ in either component).
pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// True iff `m` is square and ‖m†m − I‖_F ≤ tol. Non-square input is simply
/// not unitary.
pub fn unitarity_check(m: &CMatrix, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let gram = dagger(m).dot(m);
    frobenius_distance(&gram, &identity(m.nrows())) <= tol
}

/// Partial trace of a square matrix over the factors *not* listed in `keep`.
///
/// `keep` selects which tensor factors of `profile` survive, in ascending
/// factor order; the remaining factors are summed over their diagonal. The
/// result is linear in `m` and preserves the trace.
pub fn partial_trace(m: &CMatrix, profile: &DimensionProfile, keep: &[usize]) -> Result<CMatrix> {
    let total = profile.total_dim();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::Dimension(format!(
            "matrix is {}x{} but profile {:?} has total dimension {}",
            m.nrows(),
            m.ncols(),
            profile.factors(),
            total
        )));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::Dimension("keep set must be nonempty".into()));
    }
    if keep.iter().any(|&k| k >= profile.num_factors()) {
        return Err(Error::Dimension(format!(
            "keep set {:?} references a factor outside profile {:?}",
            keep,
            profile.factors()
        )));
    }
    let traced: Vec<usize> = (0..profile.num_factors())
        .filter(|k| !keep.contains(k))
        .collect();

    let kept_profile =
        DimensionProfile::new(&keep.iter().map(|&k| profile.factors[k]).collect::<Vec<_>>())?;
    let kept_dim = kept_profile.total_dim();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| profile.factors[k]).collect();
    let traced_dim: usize = traced_dims.iter().product::<usize>().max(1);
    let traced_profile = if traced.is_empty() {
        None
    } else {
        Some(DimensionProfile::new(&traced_dims)?)
    };

    let mut out: CMatrix = Array2::zeros((kept_dim, kept_dim));
    let mut full_row = vec![0usize; profile.num_factors()];
    let mut full_col = vec![0usize; profile.num_factors()];
    for a in 0..kept_dim {
        let ai = kept_profile.unravel(a);
        for b in 0..kept_dim {
            let bi = kept_profile.unravel(b);
            let mut acc = c64(0.0, 0.0);
            for t in 0..traced_dim {
                let ti = traced_profile
                    .as_ref()
                    .map(|p| p.unravel(t))
                    .unwrap_or_default();
                for (pos, &f) in keep.iter().enumerate() {
                    full_row[f] = ai[pos];
                    full_col[f] = bi[pos];
                }
                for (pos, &f) in traced.iter().enumerate() {
                    full_row[f] = ti[pos];
                    full_col[f] = ti[pos];
                }
                acc += m[[profile.ravel(&full_row), profile.ravel(&full_col)]];
            }
            out[[a, b]] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps, ascending.
///
/// The input is symmetrized as (m + m†)/2 first, so callers may pass matrices
/// that are Hermitian only up to rounding (Choi matrices, accumulated sums).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let mut a: CMatrix = (m + &dagger(m)).mapv(|z| z * 0.5);
    let scale = frobenius_norm(&a).max(1.0);
    let eps = 1e-15 * scale;

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .filter(|&(p, q)| p != q)
            .map(|(p, q)| a[[p, q]].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[[p, q]];
                let r = g.norm();
                if r <= eps * 1e-2 {
                    continue;
                }
                // Absorb the phase of the pivot so the 2x2 block is real
                // symmetric, then apply the classic Jacobi rotation.
                let phase = g / r;
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Combined 2x2 unitary V = diag(1, conj(phase)) · [[c, s], [-s, c]]:
                // V_pp = c, V_pq = s, V_qp = -s·conj(phase), V_qq = c·conj(phase).
                let vpp = c64(c, 0.0);
                let vpq = c64(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                // A <- V† A V, touching only rows/columns p and q.
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * vpp + akq * vqp;
                    a[[k, q]] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[[q, k]] = vpq.conj() * apk + vqq.conj() * aqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = a.diag().iter().map(|z| z.re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(eigs)
}
