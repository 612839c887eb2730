//! The eight-branch construction that pins the bias bound.
//!
//! Two states spread over an eight-value index register (each index tagged
//! with its own inner state) and an index-diagonal unitary realize any
//! target overlap pair `(a, b)` with constantly many gates. Restricting
//! competitors to index-diagonal unitaries — the regime left open when the
//! inner states are mutually unreachable — caps `|a~ + b~|` at `a + b`,
//! so the `|a+b|/2` bias of the interferometric distinguisher cannot be
//! improved. The optimizer here searches that restricted family and must
//! rediscover the cap.
//!
//! The module also carries the Haar-overlap statistics: the closed-form
//! tail `(1 - eps^2)^(N-1)`, its Monte Carlo estimate, and the
//! union-bound arithmetic in log space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::duality::{swap_overlaps, SwapOverlaps};
use crate::error::{Error, Result};
use crate::par;
use crate::statevec::{haar_overlap_with_zero, haar_sample_stream, inner_product, Circuit, Gate, QuantumState};

const PARAM_TOL: f64 = 1e-12;

/// The `(a, b, c)` parameters of the construction: `0 <= b <= a <= 1` and
/// `a + c = 1` by normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TightnessParams {
    /// Build from `(a, b)`, deriving `c = 1 - a`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::from_parts(a, b, 1.0 - a)
    }

    pub fn from_parts(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || b > a {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= b <= a <= 1, got a = {a}, b = {b}"
            )));
        }
        if (a + c - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidParameter(format!(
                "normalization requires a + c = 1, got {}",
                a + c
            )));
        }
        Ok(TightnessParams { a, b, c })
    }
}

/// The eight inner states eta_0..eta_7 tagging the index branches.
#[derive(Debug, Clone)]
pub struct EtaFamily {
    pub inner_qubits: usize,
    pub states: Vec<QuantumState>,
    pub seed: u64,
    /// Largest |<eta_j|eta_k>| over j != k; Haar draws are nearly but not
    /// exactly orthogonal, and this records by how much.
    pub max_pairwise_overlap: f64,
}

impl EtaFamily {
    /// Haar-random inner states on `inner_qubits` qubits.
    pub fn haar(inner_qubits: usize, seed: u64) -> Result<Self> {
        if inner_qubits == 0 {
            return Err(Error::InvalidParameter("inner register needs >= 1 qubit".into()));
        }
        let states: Vec<QuantumState> = (0..8)
            .map(|k| haar_sample_stream(inner_qubits, seed, k))
            .collect::<Result<_>>()?;
        let max_pairwise_overlap = max_overlap(&states)?;
        Ok(EtaFamily {
            inner_qubits,
            states,
            seed,
            max_pairwise_overlap,
        })
    }

    /// Exactly orthonormal inner states |k> on three qubits; isolates the
    /// index algebra from Haar noise.
    pub fn computational_basis() -> Result<Self> {
        let states: Vec<QuantumState> = (0..8)
            .map(|k| QuantumState::basis(3, k))
            .collect::<Result<_>>()?;
        Ok(EtaFamily {
            inner_qubits: 3,
            states,
            seed: 0,
            max_pairwise_overlap: 0.0,
        })
    }

    /// Build from explicit inner states (8 of them, one shared width).
    /// Duplicates are allowed; the recorded pairwise overlap is honest
    /// about them.
    pub fn from_states(states: Vec<QuantumState>, seed: u64) -> Result<Self> {
        if states.len() != 8 {
            return Err(Error::InvalidParameter(format!(
                "need exactly 8 inner states, got {}",
                states.len()
            )));
        }
        let inner_qubits = states[0].n_qubits();
        if states.iter().any(|s| s.n_qubits() != inner_qubits) {
            return Err(Error::InvalidParameter(
                "inner states must share one width".into(),
            ));
        }
        let max_pairwise_overlap = max_overlap(&states)?;
        Ok(EtaFamily {
            inner_qubits,
            states,
            seed,
            max_pairwise_overlap,
        })
    }

    /// The error budget the inner overlaps contribute to instance checks.
    pub fn residual_bound(&self) -> f64 {
        8.0 * self.max_pairwise_overlap
    }
}

fn max_overlap(states: &[QuantumState]) -> Result<f64> {
    let mut max = 0.0f64;
    for j in 0..states.len() {
        for k in (j + 1)..states.len() {
            max = max.max(inner_product(&states[j], &states[k])?.norm());
        }
    }
    Ok(max)
}

/// A built instance: the states `x`, `y` on `3 + m` qubits and the
/// index-diagonal unitary realizing overlaps `(a, b)` between them.
#[derive(Debug, Clone)]
pub struct TightnessInstance {
    pub params: TightnessParams,
    pub x: QuantumState,
    pub y: QuantumState,
    pub unitary: Circuit,
    /// 8 * max pairwise inner overlap, reported with every result.
    pub residual_bound: f64,
}

/// Index-branch phases of the construction's unitary: i^k on indices 0..3,
/// +1 on 4, -1 on 5, +1 on 6 and 7.
const BRANCH_PHASES: [f64; 8] = [
    0.0,
    std::f64::consts::FRAC_PI_2,
    std::f64::consts::PI,
    3.0 * std::f64::consts::FRAC_PI_2,
    0.0,
    std::f64::consts::PI,
    0.0,
    0.0,
];

/// Assemble the instance: branch coefficients `sqrt(a-b)/2` on indices
/// 0..3, `sqrt(b/2)` on 4 and 5, `sqrt(c)` on 6 (for x) and 7 (for y),
/// with y carrying phases `1, i, -1, -i` on the first four branches and a
/// minus on branch 5.
pub fn build_instance(params: &TightnessParams, etas: &EtaFamily) -> Result<TightnessInstance> {
    let m = etas.inner_qubits;
    let inner_dim = 1usize << m;
    let quarter = (params.a - params.b).max(0.0).sqrt() / 2.0;
    let half = (params.b / 2.0).sqrt();
    let tail = params.c.max(0.0).sqrt();

    let x_coeffs: [Complex64; 8] = [
        Complex64::new(quarter, 0.0),
        Complex64::new(quarter, 0.0),
        Complex64::new(quarter, 0.0),
        Complex64::new(quarter, 0.0),
        Complex64::new(half, 0.0),
        Complex64::new(half, 0.0),
        Complex64::new(tail, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let y_coeffs: [Complex64; 8] = [
        Complex64::new(quarter, 0.0),
        Complex64::new(0.0, quarter),
        Complex64::new(-quarter, 0.0),
        Complex64::new(0.0, -quarter),
        Complex64::new(half, 0.0),
        Complex64::new(-half, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(tail, 0.0),
    ];

    let assemble = |coeffs: &[Complex64; 8]| -> Result<QuantumState> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 8 * inner_dim];
        for (k, coeff) in coeffs.iter().enumerate() {
            if coeff.norm() == 0.0 {
                continue;
            }
            for (j, eta_amp) in etas.states[k].amplitudes().iter().enumerate() {
                amps[k * inner_dim + j] = coeff * eta_amp;
            }
        }
        QuantumState::from_amplitudes(amps)
    };

    let x = assemble(&x_coeffs)?;
    let y = assemble(&y_coeffs)?;

    let mut unitary = Circuit::new(3 + m, 0)?;
    unitary.push(Gate::diag_phase(vec![0, 1, 2], BRANCH_PHASES.to_vec())?)?;

    Ok(TightnessInstance {
        params: *params,
        x,
        y,
        unitary,
        residual_bound: etas.residual_bound(),
    })
}

/// Measure `(a, b)` of an instance by direct simulation.
pub fn verify_instance(instance: &TightnessInstance) -> Result<SwapOverlaps> {
    swap_overlaps(&instance.unitary, &instance.x, &instance.y)
}

/// A competitor unitary diagonal in the tagged index basis:
/// `sum_k beta_k e^{i theta_k} |k><k|` on the index register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictedUnitary {
    pub beta: [f64; 8],
    pub theta: [f64; 8],
}

impl RestrictedUnitary {
    pub fn new(beta: [f64; 8], theta: [f64; 8]) -> Result<Self> {
        for &b in &beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::InvalidParameter(format!(
                    "beta entries must lie in [0,1], got {b}"
                )));
            }
        }
        for &t in &theta {
            if !(0.0..std::f64::consts::TAU).contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "theta entries must lie in [0, 2pi), got {t}"
                )));
            }
        }
        Ok(RestrictedUnitary { beta, theta })
    }

    pub fn identity() -> Self {
        RestrictedUnitary {
            beta: [1.0; 8],
            theta: [0.0; 8],
        }
    }

    fn weight(&self, k: usize) -> Complex64 {
        Complex64::from_polar(self.beta[k], self.theta[k])
    }
}

/// The closed-form overlaps of a restricted competitor:
///
/// `a~ = (a-b)/4 * sum_k beta_k (-i)^k e^{i theta_k} + b/2 (beta_4 e^{i theta_4} - beta_5 e^{i theta_5})`
///
/// and `b~` the same with `(+i)^k`. Exact in this diagonal model.
pub fn restricted_overlaps(
    instance: &TightnessInstance,
    ru: &RestrictedUnitary,
) -> (Complex64, Complex64) {
    let params = &instance.params;
    let quarter = (params.a - params.b) / 4.0;
    let half = params.b / 2.0;
    let minus_i = Complex64::new(0.0, -1.0);
    let plus_i = Complex64::new(0.0, 1.0);

    let mut a_tilde = Complex64::new(0.0, 0.0);
    let mut b_tilde = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let w = ru.weight(k);
        a_tilde += quarter * minus_i.powu(k as u32) * w;
        b_tilde += quarter * plus_i.powu(k as u32) * w;
    }
    let tail = half * (ru.weight(4) - ru.weight(5));
    a_tilde += tail;
    b_tilde += tail;
    (a_tilde, b_tilde)
}

/// Result of maximizing `|a~ + b~|` over the restricted family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictedBiasOpt {
    pub max_value: f64,
    pub argmax: RestrictedUnitary,
    pub evaluations: usize,
    pub converged: bool,
}

fn objective(instance: &TightnessInstance, ru: &RestrictedUnitary) -> f64 {
    let (a_tilde, b_tilde) = restricted_overlaps(instance, ru);
    (a_tilde + b_tilde).norm()
}

/// Maximize `|a~ + b~|` over beta in `[0,1]^8`, theta in `[0, 2pi)^8`: a
/// 16-step grid over the four phases the bound depends on, then exact
/// coordinate ascent over all sixteen parameters. The analytic supremum is
/// `a + b`; the optimizer has to find it, not assume it.
pub fn optimize_restricted_bias(instance: &TightnessInstance) -> RestrictedBiasOpt {
    const GRID: usize = 16;
    let step = std::f64::consts::TAU / GRID as f64;

    // Coarse grid over (theta_0, theta_2, theta_4, theta_5), beta = 1.
    let cells = GRID * GRID * GRID * GRID;
    let scores = par::map_indexed(cells, |idx| {
        let mut ru = RestrictedUnitary::identity();
        ru.theta[0] = (idx % GRID) as f64 * step;
        ru.theta[2] = ((idx / GRID) % GRID) as f64 * step;
        ru.theta[4] = ((idx / (GRID * GRID)) % GRID) as f64 * step;
        ru.theta[5] = ((idx / (GRID * GRID * GRID)) % GRID) as f64 * step;
        objective(instance, &ru)
    });
    let mut best_idx = 0;
    for (i, score) in scores.iter().enumerate() {
        if *score > scores[best_idx] {
            best_idx = i;
        }
    }
    let mut ru = RestrictedUnitary::identity();
    ru.theta[0] = (best_idx % GRID) as f64 * step;
    ru.theta[2] = ((best_idx / GRID) % GRID) as f64 * step;
    ru.theta[4] = ((best_idx / (GRID * GRID)) % GRID) as f64 * step;
    ru.theta[5] = ((best_idx / (GRID * GRID * GRID)) % GRID) as f64 * step;
    let mut evaluations = cells;
    let mut best = objective(instance, &ru);

    // Exact coordinate ascent: the sum a~ + b~ is affine in each
    // t_k = beta_k e^{i theta_k}, so per coordinate the maximizer over the
    // unit disk is the unit-modulus point aligning t_k * Q with P.
    let mut converged = false;
    for _sweep in 0..100 {
        let before = best;
        for k in 0..8 {
            let mut probe = ru;
            probe.beta[k] = 0.0;
            let (pa, pb) = restricted_overlaps(instance, &probe);
            let p = pa + pb;
            probe.beta[k] = 1.0;
            probe.theta[k] = 0.0;
            let (qa, qb) = restricted_overlaps(instance, &probe);
            let q = (qa + qb) - p;
            evaluations += 2;

            if q.norm() < 1e-15 {
                // Coordinate has no effect; park it.
                ru.beta[k] = probe.beta[k];
                ru.theta[k] = 0.0;
                continue;
            }
            let theta = if p.norm() < 1e-15 {
                0.0
            } else {
                (p.arg() - q.arg()).rem_euclid(std::f64::consts::TAU)
            };
            ru.beta[k] = 1.0;
            ru.theta[k] = theta;
            best = objective(instance, &ru);
        }
        if best - before < 1e-14 {
            converged = true;
            break;
        }
    }

    RestrictedBiasOpt {
        max_value: best,
        argmax: ru,
        evaluations,
        converged,
    }
}

/// Pr(|<psi|0...0>| >= eps) for a Haar-random state of dimension `N`:
/// `(1 - eps^2)^(N-1)`, evaluated in log space.
pub fn haar_overlap_cdf(dimension: u64, eps: f64) -> Result<f64> {
    if dimension < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be >= 2, got {dimension}"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in [0,1], got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(1.0);
    }
    if eps == 1.0 {
        return Ok(0.0);
    }
    let log = (dimension - 1) as f64 * (-eps * eps).ln_1p();
    Ok(log.exp())
}

/// A Monte Carlo tail estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub fraction: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Fraction of Haar samples whose overlap with |0...0> reaches `eps`.
/// Deterministic in `(seed, samples)` regardless of thread count.
pub fn haar_overlap_montecarlo(
    n_qubits: usize,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    montecarlo_impl(n_qubits, eps, samples, seed, false)
}

/// Sequential reference for [`haar_overlap_montecarlo`]; same results,
/// exposed for the benchmark suite.
pub fn haar_overlap_montecarlo_seq(
    n_qubits: usize,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    montecarlo_impl(n_qubits, eps, samples, seed, true)
}

fn montecarlo_impl(
    n_qubits: usize,
    eps: f64,
    samples: usize,
    seed: u64,
    force_seq: bool,
) -> Result<MonteCarloEstimate> {
    crate::statevec::check_width(n_qubits)?;
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in [0,1], got {eps}"
        )));
    }
    let hit = |i: usize| u64::from(haar_overlap_with_zero(n_qubits, seed, i as u64) >= eps);
    let hits: u64 = if force_seq {
        par::map_indexed_seq(samples, hit).into_iter().sum()
    } else {
        par::map_indexed(samples, hit).into_iter().sum()
    };
    let fraction = hits as f64 / samples as f64;
    let stderr = (fraction * (1.0 - fraction) / samples as f64).sqrt();
    Ok(MonteCarloEstimate {
        fraction,
        stderr,
        samples,
    })
}

/// log2 of the union bound `g^M (1 - eps^2)^(N-1)` and of its
/// exponential relaxation `g^M e^{-eps^2 (N-1)}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UnionBoundLog {
    pub log2_exact: f64,
    pub log2_e_bound: f64,
}

pub fn union_bound_log(g: u64, m: u64, dimension: u64, eps: f64) -> Result<UnionBoundLog> {
    if g < 1 || dimension < 2 {
        return Err(Error::InvalidParameter(
            "need g >= 1 and dimension >= 2".into(),
        ));
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0,1), got {eps}"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let m_term = m as f64 * (g as f64).log2();
    let tail = (dimension - 1) as f64;
    Ok(UnionBoundLog {
        log2_exact: m_term + tail * (-eps * eps).ln_1p() / ln2,
        log2_e_bound: m_term - eps * eps * tail * std::f64::consts::LOG2_E,
    })
}

/// The overlap scale below which `M`-gate circuits from a size-`g` set
/// cannot reach a Haar-random target: `sqrt(M ln(g) / N)`. Natural
/// logarithm; the source bound only fixes the order, not the base. `g` is
/// accepted as a float so identities like `g = e` can be checked directly.
pub fn min_detectable_eps(m: u64, g: f64, dimension: u64) -> Result<f64> {
    if g < 1.0 || dimension < 1 {
        return Err(Error::InvalidParameter(
            "need g >= 1 and dimension >= 1".into(),
        ));
    }
    Ok((m as f64 * g.ln() / dimension as f64).sqrt())
}

/// One cell of a bias-surface sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightnessGridCell {
    pub a: f64,
    pub b: f64,
    pub measured_a: f64,
    pub measured_b: f64,
    pub residual_bound: f64,
    pub optimizer: Option<RestrictedBiasOpt>,
}

/// Sweep a `steps x steps` grid over `(a, b)` with `b <= a`, verifying
/// every instance and optionally running the restricted optimizer.
pub fn grid_sweep(
    steps: usize,
    etas: &EtaFamily,
    optimize: bool,
) -> Result<Vec<TightnessGridCell>> {
    if steps < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 steps".into()));
    }
    let denom = (steps - 1) as f64;
    let cells: Vec<Result<TightnessGridCell>> = par::map_indexed(steps * steps, |idx| {
        let i = idx / steps;
        let j = idx % steps;
        let a = i as f64 / denom;
        let b = a * j as f64 / denom;
        let params = TightnessParams::new(a, b)?;
        let instance = build_instance(&params, etas)?;
        let overlaps = verify_instance(&instance)?;
        let optimizer = optimize.then(|| optimize_restricted_bias(&instance));
        Ok(TightnessGridCell {
            a,
            b,
            measured_a: overlaps.a.re,
            measured_b: overlaps.b.re,
            residual_bound: instance.residual_bound,
            optimizer,
        })
    });
    cells.into_iter().collect()
}
