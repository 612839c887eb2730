//! JSON wire formats: circuits, states, and the report documents the CLI
//! emits. States are arrays of `[re, im]` pairs; circuits carry
//! `{n_qubits, n_ancillas, gates}` with one object per gate. serde_json
//! prints floats with shortest round-trip precision, so integer-valued
//! amplitudes survive bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complexity::{DedupAudit, SearchResult, SearchStatus};
use crate::error::{Error, Result};
use crate::statevec::{Circuit, Gate, QuantumState};

/// Version stamped into every report document; bump on schema changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub n_qubits: usize,
    pub n_ancillas: usize,
    pub gates: Vec<GateDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GateParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateParams {
    /// Phase angle of an `r` gate.
    Angle(f64),
    /// Diagonal phases, one per sub-index.
    Phases(Vec<f64>),
    /// Row-major matrix entries as [re, im] pairs (4 for u1, 16 for u2).
    Matrix(Vec<[f64; 2]>),
    /// Wrapped gate of a `controlled` entry.
    Inner(Box<GateDoc>),
}

pub fn gate_to_doc(gate: &Gate) -> GateDoc {
    match gate {
        Gate::H { target } => GateDoc {
            kind: "h".into(),
            targets: vec![*target],
            params: None,
        },
        Gate::X { target } => GateDoc {
            kind: "x".into(),
            targets: vec![*target],
            params: None,
        },
        Gate::Z { target } => GateDoc {
            kind: "z".into(),
            targets: vec![*target],
            params: None,
        },
        Gate::S { target } => GateDoc {
            kind: "s".into(),
            targets: vec![*target],
            params: None,
        },
        Gate::R { target, phi } => GateDoc {
            kind: "r".into(),
            targets: vec![*target],
            params: Some(GateParams::Angle(*phi)),
        },
        Gate::Cnot { control, target } => GateDoc {
            kind: "cnot".into(),
            targets: vec![*control, *target],
            params: None,
        },
        Gate::U1 { target, matrix } => GateDoc {
            kind: "u1".into(),
            targets: vec![*target],
            params: Some(GateParams::Matrix(
                matrix.iter().map(|c| [c.re, c.im]).collect(),
            )),
        },
        Gate::U2 { targets, matrix } => GateDoc {
            kind: "u2".into(),
            targets: targets.to_vec(),
            params: Some(GateParams::Matrix(
                matrix.iter().map(|c| [c.re, c.im]).collect(),
            )),
        },
        Gate::DiagPhase { targets, phases } => GateDoc {
            kind: "diag".into(),
            targets: targets.clone(),
            params: Some(GateParams::Phases(phases.clone())),
        },
        Gate::Controlled { control, gate } => GateDoc {
            kind: "controlled".into(),
            targets: vec![*control],
            params: Some(GateParams::Inner(Box::new(gate_to_doc(gate)))),
        },
    }
}

pub fn doc_to_gate(doc: &GateDoc) -> Result<Gate> {
    let one_target = || -> Result<usize> {
        doc.targets
            .first()
            .copied()
            .filter(|_| doc.targets.len() == 1)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("gate {:?} needs exactly one target", doc.kind))
            })
    };
    match doc.kind.as_str() {
        "h" => Ok(Gate::H { target: one_target()? }),
        "x" => Ok(Gate::X { target: one_target()? }),
        "z" => Ok(Gate::Z { target: one_target()? }),
        "s" => Ok(Gate::S { target: one_target()? }),
        "r" => {
            let Some(GateParams::Angle(phi)) = doc.params else {
                return Err(Error::InvalidParameter("r gate needs an angle".into()));
            };
            Ok(Gate::R { target: one_target()?, phi })
        }
        "cnot" => {
            if doc.targets.len() != 2 {
                return Err(Error::InvalidParameter(
                    "cnot needs [control, target]".into(),
                ));
            }
            Ok(Gate::Cnot {
                control: doc.targets[0],
                target: doc.targets[1],
            })
        }
        "u1" => {
            let Some(GateParams::Matrix(entries)) = &doc.params else {
                return Err(Error::InvalidParameter("u1 needs a matrix".into()));
            };
            if entries.len() != 4 {
                return Err(Error::InvalidParameter("u1 matrix needs 4 entries".into()));
            }
            let mut matrix = [Complex64::new(0.0, 0.0); 4];
            for (slot, [re, im]) in matrix.iter_mut().zip(entries.iter()) {
                *slot = Complex64::new(*re, *im);
            }
            Gate::unitary1(one_target()?, matrix)
        }
        "u2" => {
            let Some(GateParams::Matrix(entries)) = &doc.params else {
                return Err(Error::InvalidParameter("u2 needs a matrix".into()));
            };
            if entries.len() != 16 || doc.targets.len() != 2 {
                return Err(Error::InvalidParameter(
                    "u2 needs two targets and 16 matrix entries".into(),
                ));
            }
            let mut matrix = [Complex64::new(0.0, 0.0); 16];
            for (slot, [re, im]) in matrix.iter_mut().zip(entries.iter()) {
                *slot = Complex64::new(*re, *im);
            }
            Gate::unitary2([doc.targets[0], doc.targets[1]], matrix)
        }
        "diag" => {
            let Some(GateParams::Phases(phases)) = &doc.params else {
                return Err(Error::InvalidParameter("diag needs phases".into()));
            };
            Gate::diag_phase(doc.targets.clone(), phases.clone())
        }
        "controlled" => {
            let Some(GateParams::Inner(inner)) = &doc.params else {
                return Err(Error::InvalidParameter(
                    "controlled needs a wrapped gate".into(),
                ));
            };
            Ok(Gate::controlled(one_target()?, doc_to_gate(inner)?))
        }
        other => Err(Error::InvalidParameter(format!("unknown gate kind {other:?}"))),
    }
}

pub fn circuit_to_doc(circuit: &Circuit) -> CircuitDoc {
    CircuitDoc {
        n_qubits: circuit.n_qubits,
        n_ancillas: circuit.n_ancillas,
        gates: circuit.gates.iter().map(gate_to_doc).collect(),
    }
}

/// Rebuild a circuit, re-validating targets and generic-gate unitarity.
pub fn doc_to_circuit(doc: &CircuitDoc) -> Result<Circuit> {
    let gates = doc
        .gates
        .iter()
        .map(doc_to_gate)
        .collect::<Result<Vec<_>>>()?;
    Circuit::from_gates(doc.n_qubits, doc.n_ancillas, gates)
}

pub fn state_to_doc(state: &QuantumState) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|c| [c.re, c.im]).collect()
}

pub fn doc_to_state(doc: &[[f64; 2]]) -> Result<QuantumState> {
    QuantumState::from_amplitudes(doc.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
}

/// Report of a `distinguish` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistinguishDoc {
    pub schema_version: u32,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub theta: f64,
    pub bias: f64,
    pub p_psi: f64,
    pub p_phi: f64,
}

/// Report of a `swap-from-distinguisher` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SwapFromDistinguisherDoc {
    pub schema_version: u32,
    /// p_psi - p_phi of the supplied distinguisher.
    pub delta: f64,
    pub p_psi: f64,
    pub p_phi: f64,
    /// Symmetrized overlap |a~+b~|/2 of the built swapper; equals |delta|.
    pub swapper_bias: f64,
    pub swapper_gates: usize,
    pub swapper: CircuitDoc,
}

/// Report of a `search` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchDoc {
    pub schema_version: u32,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CircuitDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_hits: Option<usize>,
    pub explored_states: usize,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup_audit: Option<DedupAudit>,
}

pub fn search_result_to_doc(result: &SearchResult) -> SearchDoc {
    let (status, size, witness, objective, distinct_hits) = match &result.status {
        SearchStatus::Found {
            size,
            witness,
            objective,
            distinct_hits,
        } => (
            "found".to_string(),
            Some(*size),
            Some(circuit_to_doc(witness)),
            Some(*objective),
            Some(*distinct_hits),
        ),
        SearchStatus::Exhausted { .. } => ("exhausted".to_string(), None, None, None, None),
    };
    SearchDoc {
        schema_version: SCHEMA_VERSION,
        status,
        size,
        witness,
        objective,
        distinct_hits,
        explored_states: result.explored_states,
        wall_time_s: result.wall_time_s,
        warnings: result.warnings.clone(),
        dedup_audit: result.dedup_audit,
    }
}

/// Report of a `haar` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HaarDoc {
    pub schema_version: u32,
    pub n_qubits: usize,
    pub eps: f64,
    pub samples: usize,
    pub fraction: f64,
    pub stderr: f64,
    pub closed_form: f64,
    /// |fraction - closed_form| in units of stderr.
    pub sigma_distance: f64,
}
