use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Amplitudes below this modulus are ignored when picking the pivot for
/// global-phase canonicalization.
pub const PHASE_PIVOT_TOL: f64 = 1e-9;

const NORM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

/// Default cap on register width; override with `NECROSWAP_MAX_QUBITS`.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Current width cap. Dense vectors above this are refused before any
/// allocation happens.
pub fn max_qubits() -> usize {
    std::env::var("NECROSWAP_MAX_QUBITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    let cap = max_qubits();
    if width > cap {
        return Err(Error::WidthExceedsCap { width, cap });
    }
    Ok(())
}

/// A pure state of `n_qubits` qubits as a dense, normalized amplitude vector.
///
/// Qubit 0 is the most significant bit of the basis index, matching a
/// top-to-bottom reading of circuit diagrams: `|q0 q1 ... q_{n-1}>` has
/// index `q0*2^{n-1} + ... + q_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// |0...0> on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// The computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange {
                qubit: index,
                width: dim,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { n_qubits, amps })
    }

    /// Build from raw amplitudes, requiring unit norm within 1e-12.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = Self::infer_width(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 64.0 * NORM_TOL {
            return Err(Error::NotNormalized { norm: norm.sqrt() });
        }
        Ok(QuantumState { n_qubits, amps })
    }

    /// Build from raw amplitudes, rescaling to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = Self::infer_width(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(QuantumState { n_qubits, amps })
    }

    fn infer_width(len: usize) -> Result<usize> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_width(n_qubits)?;
        Ok(n_qubits)
    }

    /// Parse a product state written one character per qubit, most
    /// significant qubit first: `0`, `1`, `+`, `-` (ASCII or U+2212).
    pub fn from_basis_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.is_empty() {
            return Err(Error::InvalidParameter("empty state string".into()));
        }
        check_width(chars.len())?;
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for &c in &chars {
            let single: [f64; 2] = match c {
                '0' => [1.0, 0.0],
                '1' => [0.0, 1.0],
                '+' => [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
                '-' | '\u{2212}' => {
                    [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2]
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown qubit character {other:?} (expected 0, 1, +, -)"
                    )))
                }
            };
            let mut next = Vec::with_capacity(amps.len() * 2);
            for &a in &amps {
                next.push(a * single[0]);
                next.push(a * single[1]);
            }
            amps = next;
        }
        Ok(QuantumState {
            n_qubits: chars.len(),
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub(crate) fn from_parts_unchecked(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        QuantumState { n_qubits, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Append `count` ancilla qubits in |0...0>, placed after (less
    /// significant than) the existing qubits.
    pub fn lift_with_ancillas(&self, count: usize) -> Result<Self> {
        check_width(self.n_qubits + count)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len() << count];
        for (i, &a) in self.amps.iter().enumerate() {
            amps[i << count] = a;
        }
        Ok(QuantumState {
            n_qubits: self.n_qubits + count,
            amps,
        })
    }

    /// Multiply the whole state by e^{i alpha}.
    pub fn phase_shifted(&self, alpha: f64) -> Self {
        let phase = Complex64::from_polar(1.0, alpha);
        QuantumState {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }
}

/// <s1|s2>, conjugating the first argument.
pub fn inner_product(s1: &QuantumState, s2: &QuantumState) -> Result<Complex64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            got: s2.dim(),
        });
    }
    Ok(raw_inner(&s1.amps, &s2.amps))
}

pub(crate) fn raw_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// (|x> + e^{i alpha}|y>)/sqrt(2) for orthogonal `x`, `y`.
///
/// alpha = 0 and pi give the two conjugate superpositions; +/- pi/2 give the
/// imaginary-phase pair.
pub fn superpose(x: &QuantumState, y: &QuantumState, alpha: f64) -> Result<QuantumState> {
    let overlap = inner_product(x, y)?;
    if overlap.norm() > ORTHO_TOL {
        return Err(Error::NonOrthogonal {
            overlap: overlap.norm(),
        });
    }
    let phase = Complex64::from_polar(1.0, alpha);
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let amps = x
        .amps
        .iter()
        .zip(&y.amps)
        .map(|(a, b)| (a + phase * b) * inv)
        .collect();
    QuantumState::normalized(amps)
}

/// Rotate out the global phase: the first amplitude with modulus above
/// `PHASE_PIVOT_TOL` becomes real and positive.
pub fn canonical_phase(state: &QuantumState) -> Result<QuantumState> {
    let mut amps = state.amps.clone();
    canonicalize_raw(&mut amps)?;
    Ok(QuantumState {
        n_qubits: state.n_qubits,
        amps,
    })
}

pub(crate) fn canonicalize_raw(amps: &mut [Complex64]) -> Result<()> {
    let pivot = amps
        .iter()
        .find(|a| a.norm() > PHASE_PIVOT_TOL)
        .ok_or(Error::ZeroVector)?;
    let phase = pivot.conj() / pivot.norm();
    for a in amps.iter_mut() {
        *a *= phase;
    }
    Ok(())
}

/// Draw a Haar-random state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. Deterministic in the seed.
pub fn haar_sample(n_qubits: usize, seed: u64) -> Result<QuantumState> {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with_rng(n_qubits, rng)
}

pub(crate) fn haar_sample_with_rng(n_qubits: usize, mut rng: ChaCha8Rng) -> Result<QuantumState> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    check_width(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        amps.push(Complex64::new(re, im));
    }
    QuantumState::normalized(amps)
}

/// Independent Haar draw for stream `index` under a common seed; used for
/// Monte Carlo batches so results do not depend on scheduling.
pub(crate) fn haar_sample_stream(n_qubits: usize, seed: u64, index: u64) -> Result<QuantumState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    haar_sample_with_rng(n_qubits, rng)
}

/// |<sample|0...0>| for the stream-`index` Haar draw, computed without
/// materializing the vector. Bit-identical to taking the first amplitude
/// of [`haar_sample_stream`].
pub(crate) fn haar_overlap_with_zero(n_qubits: usize, seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let dim = 1usize << n_qubits;
    let mut first = Complex64::new(0.0, 0.0);
    let mut norm_sqr = 0.0;
    for i in 0..dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        if i == 0 {
            first = Complex64::new(re, im);
        }
        norm_sqr += re * re + im * im;
    }
    (first / norm_sqr.sqrt()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_states_and_parsing() {
        let s = QuantumState::from_basis_str("10").unwrap();
        // qubit 0 is the most significant bit, so |10> sits at index 2.
        assert_eq!(s.amplitudes()[2], c(1.0, 0.0));

        let plus = QuantumState::from_basis_str("+").unwrap();
        assert!((plus.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let fig3 = QuantumState::from_basis_str("1--").unwrap();
        assert!((fig3.norm() - 1.0).abs() < 1e-12);
        // |1--> = (|100> - |101> - |110> + |111>)/2
        assert!((fig3.amplitudes()[4].re - 0.5).abs() < 1e-15);
        assert!((fig3.amplitudes()[5].re + 0.5).abs() < 1e-15);
        assert!((fig3.amplitudes()[6].re + 0.5).abs() < 1e-15);
        assert!((fig3.amplitudes()[7].re - 0.5).abs() < 1e-15);

        assert!(QuantumState::from_basis_str("01x").is_err());
        assert!(QuantumState::from_basis_str("").is_err());
    }

    #[test]
    fn inner_product_examples() {
        let zero = QuantumState::basis(1, 0).unwrap();
        let one = QuantumState::basis(1, 1).unwrap();
        let plus = QuantumState::from_basis_str("+").unwrap();

        // <psi|psi> = 1, <0|1> = 0, <+|0> = 1/sqrt(2)
        assert!((inner_product(&plus, &plus).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(inner_product(&zero, &one).unwrap().norm() < 1e-15);
        let overlap = inner_product(&plus, &zero).unwrap();
        assert!((overlap.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let two = QuantumState::basis(2, 0).unwrap();
        assert!(inner_product(&zero, &two).is_err());
    }

    #[test]
    fn superpose_examples() {
        let zero = QuantumState::basis(1, 0).unwrap();
        let one = QuantumState::basis(1, 1).unwrap();

        let psi = superpose(&zero, &one, 0.0).unwrap();
        let plus = QuantumState::from_basis_str("+").unwrap();
        assert!((inner_product(&psi, &plus).unwrap().norm() - 1.0).abs() < 1e-12);

        let phi = superpose(&zero, &one, std::f64::consts::PI).unwrap();
        let minus = QuantumState::from_basis_str("-").unwrap();
        assert!((inner_product(&phi, &minus).unwrap().norm() - 1.0).abs() < 1e-12);

        // The conjugate pair is orthogonal.
        assert!(inner_product(&psi, &phi).unwrap().norm() < 1e-12);

        // Non-orthogonal inputs are refused.
        assert!(superpose(&zero, &psi, 0.0).is_err());
    }

    #[test]
    fn canonical_phase_examples() {
        let zero = QuantumState::basis(1, 0).unwrap();
        let rotated = zero.phase_shifted(std::f64::consts::PI / 3.0);
        let fixed = canonical_phase(&rotated).unwrap();
        assert!((fixed.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-12);

        let minus_plus = QuantumState::from_basis_str("+").unwrap().phase_shifted(std::f64::consts::PI);
        let fixed = canonical_phase(&minus_plus).unwrap();
        assert!((fixed.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        // Idempotent on random states.
        for seed in 0..100 {
            let s = haar_sample(3, seed).unwrap();
            let once = canonical_phase(&s).unwrap();
            let twice = canonical_phase(&once).unwrap();
            for (a, b) in once.amplitudes().iter().zip(twice.amplitudes()) {
                assert!((a - b).norm() < 1e-14);
            }
        }

        let zero_vec = QuantumState {
            n_qubits: 1,
            amps: vec![c(0.0, 0.0); 2],
        };
        assert!(canonical_phase(&zero_vec).is_err());
    }

    #[test]
    fn haar_samples_are_normalized_and_seeded() {
        for seed in 0..20 {
            let s = haar_sample(4, seed).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        let a = haar_sample(5, 42).unwrap();
        let b = haar_sample(5, 42).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let c = haar_sample(5, 43).unwrap();
        assert!(a.amplitudes() != c.amplitudes());
    }

    #[test]
    fn haar_single_qubit_overlap_is_uniform() {
        // For one qubit, |<sample|0>|^2 is uniform on [0,1]. Fixed-seed
        // Kolmogorov-Smirnov check at alpha = 0.01.
        let n_samples = 100_000usize;
        let mut values: Vec<f64> = (0..n_samples)
            .map(|i| {
                let s = haar_sample_stream(1, 9001, i as u64).unwrap();
                s.amplitudes()[0].norm_sqr()
            })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d_stat: f64 = 0.0;
        for (i, v) in values.iter().enumerate() {
            let cdf = v.clamp(0.0, 1.0);
            let hi = (i + 1) as f64 / n_samples as f64 - cdf;
            let lo = cdf - i as f64 / n_samples as f64;
            d_stat = d_stat.max(hi).max(lo);
        }
        let critical = 1.6276 / (n_samples as f64).sqrt();
        assert!(
            d_stat < critical,
            "KS statistic {d_stat} exceeds critical value {critical}"
        );
    }

    #[test]
    fn lift_places_ancillas_low() {
        let s = QuantumState::basis(2, 0b10).unwrap();
        let lifted = s.lift_with_ancillas(2).unwrap();
        assert_eq!(lifted.n_qubits(), 4);
        assert_eq!(lifted.amplitudes()[0b1000], c(1.0, 0.0));
    }

    #[test]
    fn width_cap_is_enforced() {
        let err = QuantumState::zero(DEFAULT_MAX_QUBITS + 1).unwrap_err();
        assert!(matches!(err, Error::WidthExceedsCap { .. }));
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(QuantumState::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(QuantumState::from_amplitudes(vec![c(0.9, 0.0), c(0.0, 0.0)]).is_err());
        assert!(QuantumState::normalized(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        let s = QuantumState::normalized(vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }
}
