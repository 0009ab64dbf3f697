//! Controlled-unitary twirling layers, the composite 24-dimensional twirling
//! gate, channel-level application of the supermap, and the measurement
//! circuits used by the estimator.
//!
//! A layer over a family {W'_i} of target unitaries controlled on an ancilla
//! of dimension d is Σ_i W'_i ⊗ H|i⟩⟨i|H† (with identities on any other
//! ancilla factors), H being the d-dimensional Fourier matrix. Sandwiching a
//! channel between such a layer and its adjoint — the ancilla starting in
//! |0⟩ and read out in the computational basis — leaves the uniform average
//! (1/d) Σ_i W'_i† ℰ(W'_i · W'_i†) W'_i: the overlaps ⟨j|H†|0⟩ contribute
//! exactly the uniform weight 1/d. Composing a Pauli layer on a ququart with
//! an axis-cycle layer on a qutrit enumerates the full 12-element 2-design,
//! so the output channel is the depolarized version of the input.

use std::sync::OnceLock;

use ndarray::Array2;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::linalg::{
    axis_cycle_gate, dagger, fourier_matrix, identity, kron, partial_trace, pauli_basis, pauli_x,
    projector, unitarity_check, CMatrix, DimensionProfile,
};
use crate::STRUCTURAL_TOL;

/// A family of target unitaries controlled on one ancilla factor: the layer
/// applies `unitaries[i]` to the target (factor 0) when the ancilla at
/// `slot` sits in the i-th Fourier-rotated basis state.
#[derive(Debug, Clone)]
pub struct ControlledFamily {
    unitaries: Vec<CMatrix>,
    slot: usize,
}

impl ControlledFamily {
    /// Builds a family from explicit unitaries. `slot` is the index of the
    /// ancilla factor the family controls on and must be ≥ 1 (factor 0 is
    /// the target).
    pub fn new(unitaries: Vec<CMatrix>, slot: usize) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::Parameter("controlled family is empty".into()));
        }
        if slot == 0 {
            return Err(Error::Dimension(
                "slot 0 is the target factor; control slots start at 1".into(),
            ));
        }
        for (i, u) in unitaries.iter().enumerate() {
            if !unitarity_check(u, STRUCTURAL_TOL) {
                return Err(Error::Parameter(format!(
                    "family element {i} is not unitary"
                )));
            }
        }
        Ok(Self { unitaries, slot })
    }

    /// The four Pauli basis elements (I, X, Z, XZ) controlled on the ququart
    /// at slot 1.
    pub fn pauli_family() -> Self {
        Self {
            unitaries: pauli_basis().to_vec(),
            slot: 1,
        }
    }

    /// The three powers (I, T, T²) of the axis-cycling gate controlled on the
    /// qutrit at slot 2.
    pub fn axis_cycle_family() -> Self {
        let t = axis_cycle_gate();
        Self {
            unitaries: vec![identity(2), t.clone(), t.dot(&t)],
            slot: 2,
        }
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    /// Ancilla dimension, equal to the number of unitaries in the family.
    pub fn aux_dim(&self) -> usize {
        self.unitaries.len()
    }

    pub fn slot(&self) -> usize {
        self.slot
    }
}

/// A unitary on the full target ⊗ ancillas space together with its factor
/// profile.
#[derive(Debug, Clone)]
pub struct SupermapUnitary {
    matrix: CMatrix,
    profile: DimensionProfile,
}

impl SupermapUnitary {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }
}

/// The qubit ⊗ ququart ⊗ qutrit profile of the composite twirling gate.
pub fn twirl_profile() -> DimensionProfile {
    DimensionProfile::new(&[2, 4, 3]).expect("static profile is valid")
}

/// Builds one controlled layer Σ_i W'_i ⊗ … ⊗ H|i⟩⟨i|H† ⊗ … over `profile`,
/// with the Fourier-rotated projectors sitting at the family's slot and
/// identities on every other ancilla factor.
pub fn build_layer(
    family: &ControlledFamily,
    profile: &DimensionProfile,
) -> Result<SupermapUnitary> {
    build_layer_impl(family, profile, false)
}

/// `conjugate_fourier` swaps H for its complex conjugate; the resulting layer
/// differs as a matrix but generates the identical twirl, which a property
/// test pins down.
pub(crate) fn build_layer_impl(
    family: &ControlledFamily,
    profile: &DimensionProfile,
    conjugate_fourier: bool,
) -> Result<SupermapUnitary> {
    let factors = profile.factors();
    if family.slot() >= factors.len() {
        return Err(Error::Dimension(format!(
            "slot {} does not exist in profile {:?}",
            family.slot(),
            factors
        )));
    }
    let target_dim = factors[0];
    let aux_dim = factors[family.slot()];
    if family.aux_dim() != aux_dim {
        return Err(Error::Dimension(format!(
            "family has {} unitaries but slot {} has dimension {}",
            family.aux_dim(),
            family.slot(),
            aux_dim
        )));
    }
    for u in family.unitaries() {
        if u.nrows() != target_dim {
            return Err(Error::Dimension(format!(
                "family unitary is {}x{} but the target factor has dimension {}",
                u.nrows(),
                u.ncols(),
                target_dim
            )));
        }
    }

    let mut h = fourier_matrix(aux_dim);
    if conjugate_fourier {
        h = h.mapv(|z| z.conj());
    }
    let hd = dagger(&h);

    let total = profile.total_dim();
    let mut layer: CMatrix = Array2::zeros((total, total));
    for (i, target_op) in family.unitaries().iter().enumerate() {
        let rotated = h.dot(&projector(aux_dim, i)).dot(&hd);
        let mut term = target_op.clone();
        for (f, &d) in factors.iter().enumerate().skip(1) {
            term = if f == family.slot() {
                kron(&term, &rotated)
            } else {
                kron(&term, &identity(d))
            };
        }
        layer = layer + term;
    }
    Ok(SupermapUnitary {
        matrix: layer,
        profile: profile.clone(),
    })
}

/// The composite twirling gate on the qubit ⊗ ququart ⊗ qutrit register: the
/// Pauli layer times the axis-cycle layer, in that order.
pub fn build_twirling_unitary() -> SupermapUnitary {
    build_twirling_unitary_impl(false)
}

/// Shared copy of the composite gate; construction is deterministic, so one
/// instance serves every caller.
pub fn twirling_unitary() -> &'static SupermapUnitary {
    static W: OnceLock<SupermapUnitary> = OnceLock::new();
    W.get_or_init(build_twirling_unitary)
}

pub(crate) fn build_twirling_unitary_impl(conjugate_fourier: bool) -> SupermapUnitary {
    let profile = twirl_profile();
    let pauli = build_layer_impl(
        &ControlledFamily::pauli_family(),
        &profile,
        conjugate_fourier,
    )
    .expect("static layer is well formed");
    let cycle = build_layer_impl(
        &ControlledFamily::axis_cycle_family(),
        &profile,
        conjugate_fourier,
    )
    .expect("static layer is well formed");
    SupermapUnitary {
        matrix: pauli.matrix().dot(cycle.matrix()),
        profile,
    }
}

/// Applies the supermap defined by `w` to a channel on the target factor.
///
/// The output Kraus set is
/// A_{m,k} = (I ⊗ ⟨m|) · w† · (K_k ⊗ I) · w · (I ⊗ |0…0⟩)
/// over all ancilla basis labels m and input Kraus indices k: the ancillas
/// start in |0…0⟩, the state is conjugated by w, the channel acts on the
/// target, the conjugation is undone, and the ancillas are read out in the
/// computational basis. With the composite twirling gate this reproduces the
/// uniform average of the channel over the 12-element 2-design.
pub fn apply_supermap(w: &SupermapUnitary, e: &Channel) -> Result<Channel> {
    let factors = w.profile().factors();
    let target_dim = factors[0];
    if e.dim() != target_dim {
        return Err(Error::Dimension(format!(
            "channel dimension {} does not match the target factor {}",
            e.dim(),
            target_dim
        )));
    }
    let total = w.profile().total_dim();
    if w.matrix().nrows() != total {
        return Err(Error::Dimension(format!(
            "supermap matrix is {}x{} but the profile total dimension is {}",
            w.matrix().nrows(),
            w.matrix().ncols(),
            total
        )));
    }
    let anc_dim = total / target_dim;
    let wd = dagger(w.matrix());
    let anc_identity = identity(anc_dim);

    let mut kraus: Vec<CMatrix> = Vec::with_capacity(e.kraus().len() * anc_dim);
    for k in e.kraus() {
        let lifted = kron(k, &anc_identity);
        let sandwich = wd.dot(&lifted).dot(w.matrix());
        for m in 0..anc_dim {
            let mut a: CMatrix = Array2::zeros((target_dim, target_dim));
            for q in 0..target_dim {
                for qp in 0..target_dim {
                    a[[q, qp]] = sandwich[[q * anc_dim + m, qp * anc_dim]];
                }
            }
            kraus.push(a);
        }
    }
    Channel::new(target_dim, kraus)
}

/// Density-matrix simulation of the measurement circuit.
///
/// Starting from |0⟩⟨0| on the full register: optionally flip the target
/// qubit with X, apply the preparation noise to the qubit, conjugate by `w`,
/// apply the channel under test to the qubit, conjugate by `w†`, trace out
/// the ancillas, apply the measurement noise, and return the population of
/// |0⟩. The result is a probability in [0, 1].
pub fn simulate_circuit(
    target: &Channel,
    prepend_x: bool,
    meas_noise: &Channel,
    prep_noise: &Channel,
) -> Result<f64> {
    for (name, ch) in [
        ("target", target),
        ("measurement noise", meas_noise),
        ("preparation noise", prep_noise),
    ] {
        if ch.dim() != 2 {
            return Err(Error::Dimension(format!(
                "{name} channel must be qubit-dimensional, got {}",
                ch.dim()
            )));
        }
    }
    let w = twirling_unitary();
    let profile = w.profile().clone();
    let total = profile.total_dim();
    let anc_dim = total / 2;
    let anc_identity = identity(anc_dim);

    let mut rho = projector(total, 0);
    if prepend_x {
        let x_full = kron(&pauli_x(), &anc_identity);
        rho = x_full.dot(&rho).dot(&dagger(&x_full));
    }
    rho = apply_on_target(prep_noise, &rho, anc_dim)?;
    rho = w.matrix().dot(&rho).dot(&dagger(w.matrix()));
    rho = apply_on_target(target, &rho, anc_dim)?;
    rho = dagger(w.matrix()).dot(&rho).dot(w.matrix());
    let reduced = partial_trace(&rho, &profile, &[0])?;
    let noisy = meas_noise.apply(&reduced)?;
    Ok(noisy[[0, 0]].re.clamp(0.0, 1.0))
}

/// Applies a qubit channel to the target factor of a register state by
/// lifting each Kraus operator with an ancilla identity.
fn apply_on_target(e: &Channel, rho: &CMatrix, anc_dim: usize) -> Result<CMatrix> {
    let mut out: CMatrix = Array2::zeros(rho.dim());
    for k in e.kraus() {
        let lifted = kron(k, &identity(anc_dim));
        out = out + lifted.dot(rho).dot(&dagger(&lifted));
    }
    Ok(out)
}
