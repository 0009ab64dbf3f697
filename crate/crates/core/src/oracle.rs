//! Brute-force group twirling, used as the reference implementation that the
//! ancilla supermap is checked against.
//!
//! Gate sets are finite lists of single-qubit unitaries, deduplicated modulo
//! global phase: each element is scaled so that its first nonzero entry in
//! row-major order is real and positive. Twirling a channel over a set is a
//! literal uniform average of the conjugated transfer matrices.

use ndarray::Array2;

use crate::channel::{Channel, PauliTransferMatrix};
use crate::error::{Error, Result};
use crate::linalg::{
    axis_cycle_gate, dagger, frobenius_distance, hadamard, pauli_x, pauli_xz, pauli_z, phase_gate,
    unitarity_check, CMatrix,
};
use crate::STRUCTURAL_TOL;

/// Hard cap on closure size; exceeding it means the generators do not
/// generate a small projective group and the construction is buggy.
const CLOSURE_BOUND: usize = 64;

/// Tolerance for phase-canonical matrix comparison during dedup. Group
/// elements here have entries of magnitude ≥ 1/2, far above this.
const DEDUP_TOL: f64 = 1e-9;

/// Rescales a matrix so its first nonzero entry (row-major scan) is real and
/// positive, which fixes the global phase of a unitary.
pub fn canonical_phase(m: &CMatrix) -> CMatrix {
    for entry in m.iter() {
        if entry.norm() > DEDUP_TOL {
            let phase = entry / entry.norm();
            return m.mapv(|z| z / phase);
        }
    }
    m.clone()
}

/// Finite list of single-qubit unitaries, pairwise distinct modulo global
/// phase.
#[derive(Debug, Clone)]
pub struct GateSet {
    label: String,
    elements: Vec<CMatrix>,
}

impl GateSet {
    /// Builds a gate set from explicit elements. Each element must pass the
    /// structural unitarity check; elements are phase-canonicalized and
    /// duplicates modulo phase are rejected.
    pub fn new(label: impl Into<String>, elements: Vec<CMatrix>) -> Result<Self> {
        let label = label.into();
        if elements.is_empty() {
            return Err(Error::Parameter(format!("gate set '{label}' is empty")));
        }
        let mut canonical: Vec<CMatrix> = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if !unitarity_check(e, STRUCTURAL_TOL) {
                return Err(Error::Parameter(format!(
                    "element {i} of gate set '{label}' is not unitary"
                )));
            }
            let c = canonical_phase(e);
            if canonical
                .iter()
                .any(|m| frobenius_distance(m, &c) <= DEDUP_TOL)
            {
                return Err(Error::Parameter(format!(
                    "element {i} of gate set '{label}' duplicates an earlier element up to phase"
                )));
            }
            canonical.push(c);
        }
        Ok(Self {
            label,
            elements: canonical,
        })
    }

    /// Closure of the generators under multiplication modulo global phase.
    /// Worklist search with canonical-phase dedup: each element is multiplied
    /// against every element known by the time it is processed, in both
    /// orders, so every product of two closure members is eventually formed.
    /// Errors if the closure exceeds the safety bound of 64 elements.
    pub fn closure(label: impl Into<String>, generators: &[CMatrix]) -> Result<Self> {
        let label = label.into();
        let mut elements: Vec<CMatrix> = Vec::new();
        for g in generators {
            if !unitarity_check(g, STRUCTURAL_TOL) {
                return Err(Error::Parameter(format!(
                    "generator of gate set '{label}' is not unitary"
                )));
            }
            let c = canonical_phase(g);
            if !elements
                .iter()
                .any(|m| frobenius_distance(m, &c) <= DEDUP_TOL)
            {
                elements.push(c);
            }
        }
        let mut next = 0;
        while next < elements.len() {
            let mut j = 0;
            while j < elements.len() {
                let forward = canonical_phase(&elements[next].dot(&elements[j]));
                let backward = canonical_phase(&elements[j].dot(&elements[next]));
                for c in [forward, backward] {
                    if !elements
                        .iter()
                        .any(|m| frobenius_distance(m, &c) <= DEDUP_TOL)
                    {
                        elements.push(c);
                        if elements.len() > CLOSURE_BOUND {
                            return Err(Error::GroupClosure {
                                bound: CLOSURE_BOUND,
                            });
                        }
                    }
                }
                j += 1;
            }
            next += 1;
        }
        Ok(Self { label, elements })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True iff `m` equals some element up to a global phase.
    pub fn contains_up_to_phase(&self, m: &CMatrix) -> bool {
        let c = canonical_phase(m);
        self.elements
            .iter()
            .any(|e| frobenius_distance(e, &c) <= DEDUP_TOL)
    }
}

/// The 12-element projective group generated by the axis-cycling gate
/// together with X, Z, and XZ. It is a unitary 2-design, so twirling over it
/// fully depolarizes any qubit channel.
pub fn minimal_two_design() -> GateSet {
    GateSet::closure(
        "pauli-cycle-12",
        &[axis_cycle_gate(), pauli_x(), pauli_z(), pauli_xz()],
    )
    .expect("fixed generators close at 12 elements")
}

/// The 24-element single-qubit Clifford group, generated by Hadamard and the
/// phase gate, modulo global phase.
pub fn single_qubit_cliffords() -> GateSet {
    GateSet::closure("clifford-24", &[hadamard(), phase_gate()])
        .expect("fixed generators close at 24 elements")
}

/// Uniform average of the conjugated transfer matrices,
/// (1/|G|) Σ_g Γ(g)·Γ(ℰ)·Γ(g†). The result does not depend on the phase
/// representatives because conjugation cancels global phases.
pub fn twirl_average(gates: &GateSet, e: &Channel) -> Result<PauliTransferMatrix> {
    let gamma_e = e.ptm()?;
    let mut acc: CMatrix = Array2::zeros((4, 4));
    for u in gates.elements() {
        let gu = PauliTransferMatrix::of_unitary(u)?;
        let gud = PauliTransferMatrix::of_unitary(&dagger(u))?;
        acc += gu.dot(&gamma_e).dot(&gud).gamma();
    }
    let n = gates.len() as f64;
    PauliTransferMatrix::from_gamma(acc.mapv(|z| z / n))
}

/// Checks whether a transfer matrix has the depolarizing form
/// diag(1, η, η, η): all off-diagonal magnitudes ≤ tol, the (0,0) entry
/// within tol of 1, and the three lower diagonal entries pairwise within tol.
/// The returned float is the mean of the three lower diagonal entries (real
/// part) whether or not the check passes.
pub fn is_depolarizing_form(ptm: &PauliTransferMatrix, tol: f64) -> (bool, f64) {
    let g = ptm.gamma();
    let eta = (g[[1, 1]].re + g[[2, 2]].re + g[[3, 3]].re) / 3.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && g[[i, j]].norm() > tol {
                return (false, eta);
            }
        }
    }
    if (g[[0, 0]] - 1.0).norm() > tol {
        return (false, eta);
    }
    for i in 1..4 {
        for j in (i + 1)..4 {
            if (g[[i, i]] - g[[j, j]]).norm() > tol {
                return (false, eta);
            }
        }
    }
    (true, eta)
}
