//! necroswap: swap two orthogonal quantum states, or distinguish their
//! superpositions — the two abilities are interchangeable, and this crate
//! builds both directions explicitly on a dense state-vector simulator.
//!
//! The crate provides:
//!
//! - [`statevec`]: states, gates, circuits, controlled/adjoint transforms,
//!   Haar sampling.
//! - [`duality`]: the interferometric distinguisher built from a swap
//!   unitary, the `A\u{2020} Z A` swapper built from a distinguisher, and exact
//!   bias accounting for imperfect versions of both.
//! - [`complexity`]: exhaustive minimal-circuit search for relative and
//!   swap complexity over a configurable gate set, with inequality and
//!   triangle audits.
//! - [`tightness`]: the eight-branch construction showing the bias bound
//!   `|a+b|/2` cannot be beaten by index-diagonal unitaries, plus
//!   Haar-overlap statistics.
//! - [`claims`]: the reproducible claim suite behind `necroswap
//!   reproduce-all`.
//!
//! With the default `parallel` feature, batch work (Monte Carlo sampling,
//! search frontier expansion, instance sweeps) runs on rayon; results are
//! identical no matter the thread count.

pub mod claims;
pub mod complexity;
pub mod duality;
pub mod error;
pub mod par;
pub mod statevec;
pub mod tightness;
pub mod wire;

pub use error::{Error, Result};
