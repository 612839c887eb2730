//! Exhaustive minimal-circuit search: how many gates does it take to map
//! one state onto another (relative complexity), or to exchange two states
//! under the symmetrized overlap (swap complexity)?
//!
//! Searches are breadth-first over reached states, deduplicated by a
//! canonical-phase hash, so a found size is exactly minimal for the gate
//! set. Swap searches propagate from both endpoints because their
//! objective is a property of the circuit, not of one reached state.

mod audit;
mod gateset;
mod search;

pub use audit::{
    inequality_audit, reflection_about_zero, swapper_from_prep, triangle_audit, InequalityAudit,
    SearchedSize, TriangleAudit, TriangleObjective,
};
pub use gateset::{GateSet, GateTemplate, DEFAULT_PHASE_ANGLE};
pub use search::{
    prep_complexity, relative_complexity, swap_complexity, DedupAudit, SearchConfig, SearchResult,
    SearchStatus, SearchStrategy, SwapPhase,
};
