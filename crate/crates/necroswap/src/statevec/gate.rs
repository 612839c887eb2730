use num_complex::Complex64;

use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// One gate of a circuit. Matrices act on the sub-basis ordered with the
/// first listed target as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H { target: usize },
    X { target: usize },
    Z { target: usize },
    S { target: usize },
    /// Phase gate R_phi = diag(1, e^{i phi}).
    R { target: usize, phi: f64 },
    Cnot { control: usize, target: usize },
    /// Generic single-qubit unitary, row-major.
    U1 { target: usize, matrix: [Complex64; 4] },
    /// Generic two-qubit unitary, row-major over `(targets[0], targets[1])`.
    U2 { targets: [usize; 2], matrix: Box<[Complex64; 16]> },
    /// Diagonal phase over the listed qubits: basis sub-index k picks up
    /// `e^(i phases[k])`. Identity on everything else.
    DiagPhase { targets: Vec<usize>, phases: Vec<f64> },
    /// The wrapped gate, applied only where the control qubit is |1>.
    Controlled { control: usize, gate: Box<Gate> },
}

impl Gate {
    /// Generic single-qubit unitary; rejects matrices with
    /// |U†U - I| entries above 1e-10.
    pub fn unitary1(target: usize, matrix: [Complex64; 4]) -> Result<Self> {
        check_unitary(&matrix, 2)?;
        Ok(Gate::U1 { target, matrix })
    }

    /// Generic two-qubit unitary over ordered targets.
    pub fn unitary2(targets: [usize; 2], matrix: [Complex64; 16]) -> Result<Self> {
        check_unitary(&matrix, 4)?;
        if targets[0] == targets[1] {
            return Err(Error::InvalidParameter(
                "two-qubit gate targets must be distinct".into(),
            ));
        }
        Ok(Gate::U2 {
            targets,
            matrix: Box::new(matrix),
        })
    }

    /// Diagonal phase gate; `phases.len()` must equal `2^targets.len()`.
    pub fn diag_phase(targets: Vec<usize>, phases: Vec<f64>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidParameter("diagonal gate needs targets".into()));
        }
        let mut seen = targets.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::InvalidParameter(
                "diagonal gate targets must be distinct".into(),
            ));
        }
        if phases.len() != 1 << targets.len() {
            return Err(Error::InvalidParameter(format!(
                "diagonal gate over {} qubits needs {} phases, got {}",
                targets.len(),
                1 << targets.len(),
                phases.len()
            )));
        }
        Ok(Gate::DiagPhase { targets, phases })
    }

    pub fn controlled(control: usize, gate: Gate) -> Self {
        Gate::Controlled {
            control,
            gate: Box::new(gate),
        }
    }

    /// Qubits this gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H { target }
            | Gate::X { target }
            | Gate::Z { target }
            | Gate::S { target }
            | Gate::R { target, .. }
            | Gate::U1 { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::U2 { targets, .. } => targets.to_vec(),
            Gate::DiagPhase { targets, .. } => targets.clone(),
            Gate::Controlled { control, gate } => {
                let mut qs = vec![*control];
                qs.extend(gate.qubits());
                qs
            }
        }
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::H { .. } | Gate::X { .. } | Gate::Z { .. } | Gate::Cnot { .. } => self.clone(),
            Gate::S { target } => Gate::R {
                target: *target,
                phi: -std::f64::consts::FRAC_PI_2,
            },
            Gate::R { target, phi } => Gate::R {
                target: *target,
                phi: -phi,
            },
            Gate::U1 { target, matrix } => Gate::U1 {
                target: *target,
                matrix: conj_transpose2(matrix),
            },
            Gate::U2 { targets, matrix } => Gate::U2 {
                targets: *targets,
                matrix: Box::new(conj_transpose4(matrix)),
            },
            Gate::DiagPhase { targets, phases } => Gate::DiagPhase {
                targets: targets.clone(),
                phases: phases.iter().map(|p| -p).collect(),
            },
            Gate::Controlled { control, gate } => Gate::Controlled {
                control: *control,
                gate: Box::new(gate.adjoint()),
            },
        }
    }

    /// Same gate with every qubit index shifted up by `offset`.
    pub fn shifted(&self, offset: usize) -> Gate {
        self.remapped(&|q| q + offset)
    }

    /// Same gate with qubit indices rewritten through `f`.
    pub fn remapped(&self, f: &impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H { target } => Gate::H { target: f(*target) },
            Gate::X { target } => Gate::X { target: f(*target) },
            Gate::Z { target } => Gate::Z { target: f(*target) },
            Gate::S { target } => Gate::S { target: f(*target) },
            Gate::R { target, phi } => Gate::R {
                target: f(*target),
                phi: *phi,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::U1 { target, matrix } => Gate::U1 {
                target: f(*target),
                matrix: *matrix,
            },
            Gate::U2 { targets, matrix } => Gate::U2 {
                targets: [f(targets[0]), f(targets[1])],
                matrix: matrix.clone(),
            },
            Gate::DiagPhase { targets, phases } => Gate::DiagPhase {
                targets: targets.iter().map(|&q| f(q)).collect(),
                phases: phases.clone(),
            },
            Gate::Controlled { control, gate } => Gate::Controlled {
                control: f(*control),
                gate: Box::new(gate.remapped(f)),
            },
        }
    }

    /// Validate targets against a register of `width` qubits.
    pub fn check_targets(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::InvalidParameter(
                "gate targets must be distinct".into(),
            ));
        }
        Ok(())
    }
}

fn check_unitary(matrix: &[Complex64], dim: usize) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut entry = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                entry += matrix[k * dim + i].conj() * matrix[k * dim + j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((entry - expected).norm());
        }
    }
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

fn conj_transpose2(m: &[Complex64; 4]) -> [Complex64; 4] {
    [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()]
}

fn conj_transpose4(m: &[Complex64; 16]) -> [Complex64; 16] {
    let mut out = [Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            out[j * 4 + i] = m[i * 4 + j].conj();
        }
    }
    out
}

/// Apply `gate` to `amps` (a register of `width` qubits), restricted to the
/// indices where `idx & guard_mask == guard_val`. Controlled gates recurse
/// by extending the guard, so nesting costs nothing extra.
pub(crate) fn apply_gate(amps: &mut [Complex64], width: usize, gate: &Gate, guard_mask: usize, guard_val: usize) {
    let bit = |q: usize| 1usize << (width - 1 - q);
    match gate {
        Gate::H { target } => {
            let m = bit(*target);
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..amps.len() {
                if i & m == 0 && i & guard_mask == guard_val {
                    let a = amps[i];
                    let b = amps[i | m];
                    amps[i] = (a + b) * inv;
                    amps[i | m] = (a - b) * inv;
                }
            }
        }
        Gate::X { target } => {
            let m = bit(*target);
            for i in 0..amps.len() {
                if i & m == 0 && i & guard_mask == guard_val {
                    amps.swap(i, i | m);
                }
            }
        }
        Gate::Z { target } => {
            let m = bit(*target);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & m != 0 && i & guard_mask == guard_val {
                    *a = -*a;
                }
            }
        }
        Gate::S { target } => {
            let m = bit(*target);
            let phase = Complex64::new(0.0, 1.0);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & m != 0 && i & guard_mask == guard_val {
                    *a *= phase;
                }
            }
        }
        Gate::R { target, phi } => {
            let m = bit(*target);
            let phase = Complex64::from_polar(1.0, *phi);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & m != 0 && i & guard_mask == guard_val {
                    *a *= phase;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let mc = bit(*control);
            let mt = bit(*target);
            for i in 0..amps.len() {
                if i & mc != 0 && i & mt == 0 && i & guard_mask == guard_val {
                    amps.swap(i, i | mt);
                }
            }
        }
        Gate::U1 { target, matrix } => {
            let m = bit(*target);
            for i in 0..amps.len() {
                if i & m == 0 && i & guard_mask == guard_val {
                    let a = amps[i];
                    let b = amps[i | m];
                    amps[i] = matrix[0] * a + matrix[1] * b;
                    amps[i | m] = matrix[2] * a + matrix[3] * b;
                }
            }
        }
        Gate::U2 { targets, matrix } => {
            let m1 = bit(targets[0]);
            let m2 = bit(targets[1]);
            for i in 0..amps.len() {
                if i & (m1 | m2) == 0 && i & guard_mask == guard_val {
                    let idx = [i, i | m2, i | m1, i | m1 | m2];
                    let old = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
                    for (row, &out_i) in idx.iter().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (col, &v) in old.iter().enumerate() {
                            acc += matrix[row * 4 + col] * v;
                        }
                        amps[out_i] = acc;
                    }
                }
            }
        }
        Gate::DiagPhase { targets, phases } => {
            let masks: Vec<usize> = targets.iter().map(|&q| bit(q)).collect();
            let factors: Vec<Complex64> = phases
                .iter()
                .map(|&p| Complex64::from_polar(1.0, p))
                .collect();
            for (i, a) in amps.iter_mut().enumerate() {
                if i & guard_mask == guard_val {
                    let mut sub = 0usize;
                    for &m in &masks {
                        sub = (sub << 1) | usize::from(i & m != 0);
                    }
                    *a *= factors[sub];
                }
            }
        }
        Gate::Controlled { control, gate } => {
            let m = bit(*control);
            apply_gate(amps, width, gate, guard_mask | m, guard_val | m);
        }
    }
}
