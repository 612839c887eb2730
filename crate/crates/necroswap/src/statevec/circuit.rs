use crate::error::{Error, Result};

use super::gate::{apply_gate, Gate};
use super::state::{check_width, QuantumState};

/// An ordered gate list over `n_qubits` data qubits plus `n_ancillas` work
/// qubits. Ancillas sit after the data qubits (less significant bits) and
/// start in |0...0>.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_ancillas: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_ancillas: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        check_width(n_qubits + n_ancillas)?;
        Ok(Circuit {
            n_qubits,
            n_ancillas,
            gates: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.n_qubits + self.n_ancillas
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Append a gate after validating its targets against the width.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.check_targets(self.width())?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Build from parts, validating every gate.
    pub fn from_gates(n_qubits: usize, n_ancillas: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Circuit::new(n_qubits, n_ancillas)?;
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    /// Append every gate of `other` (same width required).
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width() != self.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                got: other.width(),
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// Move one qubit to the back of the register and account it as an
    /// ancilla. Used when a distinguisher's control wire becomes a work
    /// qubit of the swapper built from it.
    pub fn demote_qubit_to_ancilla(&self, qubit: usize) -> Result<Circuit> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                width: self.n_qubits,
            });
        }
        if self.n_qubits == 1 {
            return Err(Error::InvalidParameter(
                "cannot demote the only data qubit".into(),
            ));
        }
        let last = self.width() - 1;
        let remap = |q: usize| {
            if q == qubit {
                last
            } else if q > qubit {
                q - 1
            } else {
                q
            }
        };
        Ok(Circuit {
            n_qubits: self.n_qubits - 1,
            n_ancillas: self.n_ancillas + 1,
            gates: self.gates.iter().map(|g| g.remapped(&remap)).collect(),
        })
    }
}

/// Run `circuit` on `state`, appending the circuit's ancillas in |0...0>.
/// Returns the full `(n_qubits + n_ancillas)`-qubit output state.
pub fn apply_circuit(state: &QuantumState, circuit: &Circuit) -> Result<QuantumState> {
    if state.n_qubits() != circuit.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits,
            got: state.n_qubits(),
        });
    }
    let lifted = state.lift_with_ancillas(circuit.n_ancillas)?;
    let width = circuit.width();
    let mut amps = lifted.into_amplitudes();
    for gate in &circuit.gates {
        gate.check_targets(width)?;
        apply_gate(&mut amps, width, gate, 0, 0);
    }
    Ok(QuantumState::from_parts_unchecked(width, amps))
}

/// The controlled version of a circuit: one new control qubit in front
/// (qubit 0), every gate wrapped so it fires only when the control is |1>.
pub fn controlled(circuit: &Circuit) -> Result<Circuit> {
    check_width(circuit.width() + 1)?;
    let gates = circuit
        .gates
        .iter()
        .map(|g| Gate::controlled(0, g.shifted(1)))
        .collect();
    Ok(Circuit {
        n_qubits: circuit.n_qubits + 1,
        n_ancillas: circuit.n_ancillas,
        gates,
    })
}

/// The inverse circuit: gates reversed, each replaced by its inverse.
pub fn adjoint(circuit: &Circuit) -> Circuit {
    Circuit {
        n_qubits: circuit.n_qubits,
        n_ancillas: circuit.n_ancillas,
        gates: circuit.gates.iter().rev().map(|g| g.adjoint()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::state::{haar_sample, inner_product};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The seven-gate swap of |000> and |1--> used throughout the tests:
    /// X on every wire, H on wires 1 and 2, X on wires 1 and 2.
    pub(crate) fn seven_gate_swap() -> Circuit {
        Circuit::from_gates(
            3,
            0,
            vec![
                Gate::X { target: 0 },
                Gate::X { target: 1 },
                Gate::X { target: 2 },
                Gate::H { target: 1 },
                Gate::H { target: 2 },
                Gate::X { target: 1 },
                Gate::X { target: 2 },
            ],
        )
        .unwrap()
    }

    fn random_circuit(n_qubits: usize, n_gates: usize, rng: &mut ChaCha8Rng) -> Circuit {
        let mut circuit = Circuit::new(n_qubits, 0).unwrap();
        for _ in 0..n_gates {
            let target = rng.gen_range(0..n_qubits);
            let gate = match rng.gen_range(0..6) {
                0 => Gate::H { target },
                1 => Gate::X { target },
                2 => Gate::Z { target },
                3 => Gate::S { target },
                4 => Gate::R {
                    target,
                    phi: rng.gen_range(0.0..std::f64::consts::TAU),
                },
                _ => {
                    if n_qubits < 2 {
                        Gate::H { target }
                    } else {
                        let mut other = rng.gen_range(0..n_qubits);
                        while other == target {
                            other = rng.gen_range(0..n_qubits);
                        }
                        Gate::Cnot {
                            control: target,
                            target: other,
                        }
                    }
                }
            };
            circuit.push(gate).unwrap();
        }
        circuit
    }

    #[test]
    fn hadamard_and_cnot_basics() {
        let mut h = Circuit::new(1, 0).unwrap();
        h.push(Gate::H { target: 0 }).unwrap();
        let out = apply_circuit(&QuantumState::zero(1).unwrap(), &h).unwrap();
        let plus = QuantumState::from_basis_str("+").unwrap();
        assert!((inner_product(&out, &plus).unwrap().re - 1.0).abs() < 1e-12);

        let mut cnot = Circuit::new(2, 0).unwrap();
        cnot.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let out = apply_circuit(&QuantumState::from_basis_str("10").unwrap(), &cnot).unwrap();
        assert_eq!(out.amplitudes()[0b11], c(1.0, 0.0));
    }

    #[test]
    fn seven_gate_circuit_swaps_the_pair() {
        let circuit = seven_gate_swap();
        let x = QuantumState::from_basis_str("000").unwrap();
        let y = QuantumState::from_basis_str("1--").unwrap();

        let out = apply_circuit(&x, &circuit).unwrap();
        assert!((inner_product(&y, &out).unwrap() - c(1.0, 0.0)).norm() < 1e-12);

        let back = apply_circuit(&y, &circuit).unwrap();
        assert!((inner_product(&x, &back).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn norm_preserved_over_long_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let circuit = random_circuit(5, 1000, &mut rng);
        let state = haar_sample(5, 3).unwrap();
        let out = apply_circuit(&state, &circuit).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn linearity_on_random_superpositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let circuit = random_circuit(4, 12, &mut rng);
            let s1 = haar_sample(4, 100 + trial).unwrap();
            let raw2 = haar_sample(4, 200 + trial).unwrap();
            // Orthogonalize so the combination stays normalized.
            let overlap = inner_product(&s1, &raw2).unwrap();
            let amps: Vec<Complex64> = raw2
                .amplitudes()
                .iter()
                .zip(s1.amplitudes())
                .map(|(b, a)| b - overlap * a)
                .collect();
            let s2 = QuantumState::normalized(amps).unwrap();

            let theta: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let alpha = Complex64::new(theta.cos(), 0.0);
            let beta = Complex64::from_polar(theta.sin(), phase);

            let combo = QuantumState::from_amplitudes(
                s1.amplitudes()
                    .iter()
                    .zip(s2.amplitudes())
                    .map(|(a, b)| alpha * a + beta * b)
                    .collect(),
            )
            .unwrap();

            let lhs = apply_circuit(&combo, &circuit).unwrap();
            let out1 = apply_circuit(&s1, &circuit).unwrap();
            let out2 = apply_circuit(&s2, &circuit).unwrap();
            for ((l, a), b) in lhs.amplitudes().iter().zip(out1.amplitudes()).zip(out2.amplitudes()) {
                assert!((l - (alpha * a + beta * b)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn adjoint_undoes_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let circuit = random_circuit(4, 10, &mut rng);
        let inverse = adjoint(&circuit);
        for seed in 0..100 {
            let state = haar_sample(4, 1000 + seed).unwrap();
            let forward = apply_circuit(&state, &circuit).unwrap();
            let back = apply_circuit(&forward, &inverse).unwrap();
            let overlap = inner_product(&state, &back).unwrap();
            assert!((overlap - c(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn controlled_x_matches_cnot() {
        let mut x = Circuit::new(1, 0).unwrap();
        x.push(Gate::X { target: 0 }).unwrap();
        let cx = controlled(&x).unwrap();

        let on = apply_circuit(&QuantumState::from_basis_str("10").unwrap(), &cx).unwrap();
        assert_eq!(on.amplitudes()[0b11], c(1.0, 0.0));
        let off = apply_circuit(&QuantumState::from_basis_str("00").unwrap(), &cx).unwrap();
        assert_eq!(off.amplitudes()[0b00], c(1.0, 0.0));
    }

    #[test]
    fn controlled_circuit_matches_dense_oracle() {
        // Dense oracle: assemble the full unitary column by column, embed it
        // as blockdiag(I, U), and compare against the gate-by-gate
        // controlled circuit on random inputs.
        let circuit = seven_gate_swap();
        let n = circuit.n_qubits;
        let dim = 1 << n;
        let mut columns = Vec::with_capacity(dim);
        for j in 0..dim {
            let col = apply_circuit(&QuantumState::basis(n, j).unwrap(), &circuit).unwrap();
            columns.push(col.amplitudes().to_vec());
        }

        let ctrl = controlled(&circuit).unwrap();
        for seed in 0..20 {
            let input = haar_sample(n + 1, 400 + seed).unwrap();
            let expect: Vec<Complex64> = {
                let amps = input.amplitudes();
                let mut out = amps[..dim].to_vec();
                let mut block = vec![c(0.0, 0.0); dim];
                for (column, coeff) in columns.iter().zip(&amps[dim..]) {
                    for (acc, v) in block.iter_mut().zip(column) {
                        *acc += v * coeff;
                    }
                }
                out.extend(block);
                out
            };
            let got = apply_circuit(&input, &ctrl).unwrap();
            for (g, e) in got.amplitudes().iter().zip(&expect) {
                assert!((g - e).norm() < 1e-10);
            }
        }

        // Spot check: controlled seven-gate circuit on |1>|000> gives |1>|1-->.
        let input = QuantumState::from_basis_str("1000").unwrap();
        let out = apply_circuit(&input, &ctrl).unwrap();
        let fig3 = QuantumState::from_basis_str("1--").unwrap();
        let mut expected = vec![c(0.0, 0.0); 16];
        for (i, &a) in fig3.amplitudes().iter().enumerate() {
            expected[8 + i] = a;
        }
        for (g, e) in out.amplitudes().iter().zip(&expected) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn controlled_block_structure_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let circuit = random_circuit(3, 15, &mut rng);
        let ctrl = controlled(&circuit).unwrap();
        for seed in 0..10 {
            let u = haar_sample(3, 700 + seed).unwrap();
            let v = haar_sample(3, 800 + seed).unwrap();

            // <0,u|CU|0,v> = <u|v>
            let v0 = embed_with_control(&v, 0);
            let u0 = embed_with_control(&u, 0);
            let out = apply_circuit(&v0, &ctrl).unwrap();
            let lhs = inner_product(&u0, &out).unwrap();
            let rhs = inner_product(&u, &v).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);

            // <1,u|CU|1,v> = <u|C|v>
            let v1 = embed_with_control(&v, 1);
            let u1 = embed_with_control(&u, 1);
            let out = apply_circuit(&v1, &ctrl).unwrap();
            let lhs = inner_product(&u1, &out).unwrap();
            let rhs = inner_product(&u, &apply_circuit(&v, &circuit).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    fn embed_with_control(state: &QuantumState, control: usize) -> QuantumState {
        let dim = state.dim();
        let mut amps = vec![c(0.0, 0.0); dim * 2];
        for (i, &a) in state.amplitudes().iter().enumerate() {
            amps[control * dim + i] = a;
        }
        QuantumState::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn ancillas_are_lifted_and_kept() {
        let mut circuit = Circuit::new(1, 1).unwrap();
        circuit.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let out = apply_circuit(&QuantumState::basis(1, 1).unwrap(), &circuit).unwrap();
        assert_eq!(out.n_qubits(), 2);
        assert_eq!(out.amplitudes()[0b11], c(1.0, 0.0));
    }

    #[test]
    fn demote_moves_qubit_to_back() {
        // H Z H = X; demoting the only other wire of a two-qubit circuit
        // relabels targets consistently.
        let mut circuit = Circuit::new(2, 0).unwrap();
        circuit.push(Gate::H { target: 0 }).unwrap();
        circuit.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let demoted = circuit.demote_qubit_to_ancilla(0).unwrap();
        assert_eq!(demoted.n_qubits, 1);
        assert_eq!(demoted.n_ancillas, 1);
        assert_eq!(demoted.gates[0], Gate::H { target: 1 });
        assert_eq!(demoted.gates[1], Gate::Cnot { control: 1, target: 0 });
    }

    #[test]
    fn apply_rejects_width_mismatch_and_bad_targets() {
        let circuit = Circuit::new(2, 0).unwrap();
        let state = QuantumState::zero(3).unwrap();
        assert!(apply_circuit(&state, &circuit).is_err());

        let mut bad = Circuit::new(2, 0).unwrap();
        assert!(bad.push(Gate::H { target: 5 }).is_err());
    }
}
