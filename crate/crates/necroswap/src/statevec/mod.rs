//! Dense state-vector substrate: states, gates, circuits, inner products,
//! controlled/adjoint transforms and Haar sampling.

mod circuit;
mod gate;
mod state;

pub use circuit::{adjoint, apply_circuit, controlled, Circuit};
pub use gate::Gate;
pub(crate) use gate::apply_gate;
pub use state::{
    canonical_phase, haar_sample, inner_product, max_qubits, superpose, QuantumState,
    DEFAULT_MAX_QUBITS, PHASE_PIVOT_TOL,
};
pub(crate) use state::{
    canonicalize_raw, check_width, haar_overlap_with_zero, haar_sample_stream, raw_inner,
};
