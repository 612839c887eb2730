//! Both directions of the swap/distinguish equivalence.
//!
//! Forward: a unitary that (partially) exchanges two orthogonal states `x`
//! and `y` drives an interferometric circuit — Hadamard on a control,
//! controlled-U, Hadamard — that tells the superposition `(x+y)/sqrt(2)`
//! from `(x-y)/sqrt(2)` with bias `|a+b|/2`, where `a = <y|U|x>` and
//! `b = <x|U|y>`.
//!
//! Backward: any procedure `A` that separates the two superpositions with
//! acceptance-probability gap `delta` yields the swapper `A\u{2020} Z A`, whose
//! symmetrized overlap equals `delta` exactly.
//!
//! All probabilities here are computed analytically from amplitudes; there
//! is no sampling anywhere in this module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{
    adjoint, apply_circuit, controlled, inner_product, Circuit, Gate, QuantumState,
};

const ORTHO_TOL: f64 = 1e-10;
const ANCILLA_CLEAN_TOL: f64 = 1e-9;

/// The pair `a = <y,0...0|U|x,0...0>`, `b = <x,0...0|U|y,0...0>` for a
/// candidate swap unitary, with ancillas projected back onto |0...0>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapOverlaps {
    pub a: Complex64,
    pub b: Complex64,
}

impl SwapOverlaps {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        SwapOverlaps { a, b }
    }

    /// The achievable distinguishing bias `|a+b|/2`.
    pub fn bias(&self) -> f64 {
        (self.a + self.b).norm() / 2.0
    }
}

/// A distinguishing procedure: run `circuit`, then read `flag_qubit`;
/// outcome `accept_on` means "the psi side".
#[derive(Debug, Clone)]
pub struct DistinguisherSpec {
    pub circuit: Circuit,
    pub flag_qubit: usize,
    pub accept_on: u8,
}

impl DistinguisherSpec {
    pub fn new(circuit: Circuit, flag_qubit: usize, accept_on: u8) -> Result<Self> {
        if flag_qubit >= circuit.width() {
            return Err(Error::QubitOutOfRange {
                qubit: flag_qubit,
                width: circuit.width(),
            });
        }
        if accept_on > 1 {
            return Err(Error::InvalidParameter("accept_on must be 0 or 1".into()));
        }
        Ok(DistinguisherSpec {
            circuit,
            flag_qubit,
            accept_on,
        })
    }
}

/// Exact acceptance probabilities of a distinguisher on the two inputs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub p_psi: f64,
    pub p_phi: f64,
    /// `p_psi - p_phi`.
    pub bias: f64,
}

/// Ancilla-return diagnostics for a candidate swap unitary.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AncillaReturnReport {
    pub ok: bool,
    /// `1 -` the smaller of the two clean-ancilla branch weights.
    pub residual: f64,
}

fn require_orthogonal(x: &QuantumState, y: &QuantumState) -> Result<()> {
    let overlap = inner_product(x, y)?;
    if overlap.norm() > ORTHO_TOL {
        return Err(Error::NonOrthogonal {
            overlap: overlap.norm(),
        });
    }
    Ok(())
}

/// Compute `(a, b)` for `unitary` against the orthogonal pair `(x, y)`.
/// Ancillas of the circuit are appended in |0...0> and projected back out
/// in the bra, as the swap objective requires.
pub fn swap_overlaps(unitary: &Circuit, x: &QuantumState, y: &QuantumState) -> Result<SwapOverlaps> {
    require_orthogonal(x, y)?;
    if x.n_qubits() != unitary.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: unitary.n_qubits,
            got: x.n_qubits(),
        });
    }
    let x_lift = x.lift_with_ancillas(unitary.n_ancillas)?;
    let y_lift = y.lift_with_ancillas(unitary.n_ancillas)?;
    let from_x = apply_circuit(x, unitary)?;
    let from_y = apply_circuit(y, unitary)?;
    let a = inner_product(&y_lift, &from_x)?;
    let b = inner_product(&x_lift, &from_y)?;
    Ok(SwapOverlaps::new(a, b))
}

/// The phase that aligns `a+b` with the real axis: `theta = -arg(a+b)`,
/// or 0 when `a+b` vanishes.
pub fn optimal_theta(overlaps: &SwapOverlaps) -> f64 {
    let sum = overlaps.a + overlaps.b;
    if sum.norm() == 0.0 {
        0.0
    } else {
        -sum.arg()
    }
}

/// Build the interferometric distinguisher for `unitary` with control
/// phase `theta`: H on a fresh control (qubit 0), R_theta on the control,
/// controlled-`unitary`, H on the control. Acceptance is the control
/// reading |0>.
pub fn build_distinguisher(unitary: &Circuit, theta: f64) -> Result<DistinguisherSpec> {
    let ctrl = controlled(unitary)?;
    let mut circuit = Circuit::new(ctrl.n_qubits, ctrl.n_ancillas)?;
    circuit.push(Gate::H { target: 0 })?;
    if theta != 0.0 {
        circuit.push(Gate::R { target: 0, phi: theta })?;
    }
    circuit.extend(&ctrl)?;
    circuit.push(Gate::H { target: 0 })?;
    DistinguisherSpec::new(circuit, 0, 0)
}

/// Exact acceptance probabilities of `spec` on `psi` and `phi`.
///
/// When the spec's circuit is wider than the inputs, the inputs are padded
/// with leading |0> qubits — the convention used by [`build_distinguisher`],
/// whose control wire sits in front of the data register.
pub fn distinguish_bias(
    spec: &DistinguisherSpec,
    psi: &QuantumState,
    phi: &QuantumState,
) -> Result<DistinguishReport> {
    require_orthogonal(psi, phi)?;
    let p_psi = accept_probability(spec, psi)?;
    let p_phi = accept_probability(spec, phi)?;
    Ok(DistinguishReport {
        p_psi,
        p_phi,
        bias: p_psi - p_phi,
    })
}

/// P(flag qubit = accept_on) after running the spec's circuit on `input`,
/// computed from the exact output marginal.
pub fn accept_probability(spec: &DistinguisherSpec, input: &QuantumState) -> Result<f64> {
    let embedded = embed_leading_zeros(input, spec.circuit.n_qubits)?;
    let out = apply_circuit(&embedded, &spec.circuit)?;
    let width = out.n_qubits();
    let mask = 1usize << (width - 1 - spec.flag_qubit);
    let want = if spec.accept_on == 1 { mask } else { 0 };
    let mut p = 0.0;
    for (i, amp) in out.amplitudes().iter().enumerate() {
        if i & mask == want {
            p += amp.norm_sqr();
        }
    }
    Ok(p)
}

fn embed_leading_zeros(state: &QuantumState, want_qubits: usize) -> Result<QuantumState> {
    if state.n_qubits() == want_qubits {
        return Ok(state.clone());
    }
    if state.n_qubits() > want_qubits {
        return Err(Error::DimensionMismatch {
            expected: want_qubits,
            got: state.n_qubits(),
        });
    }
    // Leading zeros are high-order bits, so amplitudes keep their indices.
    let extra = want_qubits - state.n_qubits();
    let mut amps = state.amplitudes().to_vec();
    amps.resize(state.dim() << extra, Complex64::new(0.0, 0.0));
    QuantumState::from_amplitudes(amps)
}

/// Build the swapper `A\u{2020} Z_flag A` from a distinguisher.
///
/// The returned circuit has the same width as `spec.circuit`. When the
/// distinguisher came from [`build_distinguisher`], its control wire should
/// afterwards be folded into the ancillas via
/// [`Circuit::demote_qubit_to_ancilla`] so the swapper acts on bare `x`/`y`
/// registers; [`swapper_on_data`] does both steps.
pub fn build_swapper(spec: &DistinguisherSpec) -> Result<Circuit> {
    let mut circuit = Circuit::new(spec.circuit.n_qubits, spec.circuit.n_ancillas)?;
    circuit.extend(&spec.circuit)?;
    circuit.push(Gate::Z {
        target: spec.flag_qubit,
    })?;
    circuit.extend(&adjoint(&spec.circuit))?;
    Ok(circuit)
}

/// [`build_swapper`] followed by demoting the flag wire to an ancilla, for
/// distinguishers whose flag is a control added on top of the data
/// register. The result acts directly on the original data width.
pub fn swapper_on_data(spec: &DistinguisherSpec) -> Result<Circuit> {
    let swapper = build_swapper(spec)?;
    swapper.demote_qubit_to_ancilla(spec.flag_qubit)
}

/// Check that the ancillas of `unitary` return to |0...0> on both inputs.
pub fn ancilla_return_check(
    unitary: &Circuit,
    x: &QuantumState,
    y: &QuantumState,
) -> Result<AncillaReturnReport> {
    require_orthogonal(x, y)?;
    let weight = |s: &QuantumState| -> Result<f64> {
        let out = apply_circuit(s, unitary)?;
        let anc_mask = (1usize << unitary.n_ancillas) - 1;
        let mut w = 0.0;
        for (i, amp) in out.amplitudes().iter().enumerate() {
            if i & anc_mask == 0 {
                w += amp.norm_sqr();
            }
        }
        Ok(w)
    };
    let residual = 1.0 - weight(x)?.min(weight(y)?);
    Ok(AncillaReturnReport {
        ok: residual < ANCILLA_CLEAN_TOL,
        residual,
    })
}
