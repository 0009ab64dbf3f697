//! Ancilla-assisted twirling of qubit channels and average-gate-fidelity
//! estimation.
//!
//! The centrepiece is a fixed 24-dimensional unitary acting on a
//! qubit ⊗ ququart ⊗ qutrit register. Conjugating an arbitrary qubit channel
//! by that unitary and tracing out the two ancillas projects the channel onto
//! its depolarizing part — the same map one would get by averaging the channel
//! over a unitary 2-design, but realised by a single fixed gate instead of
//! random gate sampling. On top of the twirl sits a four-experiment protocol
//! that estimates the depolarizing parameter η, and hence the average gate
//! fidelity (1 + η)/2, in a way that is insensitive to state-preparation and
//! measurement noise.
//!
//! Module layout:
//!
//! - [`linalg`] — dense complex matrices, Kronecker products, partial traces,
//!   Fourier matrices, and the fixed single-qubit gates.
//! - [`channel`] — Kraus-operator channels, the Pauli-Liouville picture,
//!   presets, random CPTP generation, and fidelity utilities.
//! - [`oracle`] — brute-force group twirling used as the reference
//!   implementation: gate-set closure and direct group averages.
//! - [`supermap`] — the controlled-unitary layers, the composite twirling
//!   gate, channel-level application, and the measurement circuits.
//! - [`estimator`] — the four-experiment protocol, Hoeffding shot planning,
//!   and the survival-probability decay curve.
//! - [`io`] — the channel JSON schema, the preset spec grammar, and
//!   deterministic JSON output.

pub mod channel;
pub mod error;
pub mod estimator;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod supermap;

pub use error::{Error, Result};

/// Default tolerance for structural checks (unitarity, closure dedup,
/// exact identities between constructed matrices).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Default tolerance when comparing two independent computations of the same
/// quantity (supermap vs brute-force group average).
pub const ORACLE_TOL: f64 = 1e-10;
