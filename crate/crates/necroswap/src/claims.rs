//! The reproducible claim suite: every headline identity and searched
//! value, packaged as pass/fail checks with pinned tolerances. The
//! acceptance tests and the `reproduce-all` subcommand both run these.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complexity::{
    inequality_audit, prep_complexity, relative_complexity, swap_complexity, GateSet,
    SearchConfig, SearchStatus, SwapPhase,
};
use crate::duality::{
    ancilla_return_check, build_distinguisher, distinguish_bias, optimal_theta, swap_overlaps,
    swapper_on_data, DistinguisherSpec,
};
use crate::error::{Error, Result};
use crate::statevec::{
    adjoint, apply_circuit, haar_sample, inner_product, superpose, Circuit, Gate, QuantumState,
};
use crate::tightness::{
    build_instance, haar_overlap_cdf, haar_overlap_montecarlo, optimize_restricted_bias,
    union_bound_log, verify_instance, EtaFamily, TightnessParams,
};

/// Default seed for the claim suite; any seed must pass.
pub const DEFAULT_SEED: u64 = 7;

/// One checked claim: an expected value, the measured value, and the
/// tolerance that decided `pass`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub description: String,
    pub expected: Value,
    pub measured: Value,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_s: f64,
}

pub const CLAIM_IDS: &[&str] = &[
    "s4-swap-sizes",
    "thm1-roundtrip",
    "thm2i-bias-law",
    "thm2ii-exact-delta",
    "thm3-tightness-grid",
    "cor4-inequality-audit",
    "haar-statistics",
    "fn2-ancilla-negative-control",
    "search-oracle-equivalence",
];

pub fn run_claim(claim_id: &str, seed: u64) -> Result<ClaimReport> {
    let clock = Instant::now();
    let mut report = match claim_id {
        "s4-swap-sizes" => swap_sizes_claim()?,
        "thm1-roundtrip" => roundtrip_claim(seed)?,
        "thm2i-bias-law" => bias_law_claim(seed)?,
        "thm2ii-exact-delta" => exact_delta_claim(seed)?,
        "thm3-tightness-grid" => tightness_grid_claim()?,
        "cor4-inequality-audit" => inequality_claim(seed)?,
        "haar-statistics" => haar_statistics_claim(seed)?,
        "fn2-ancilla-negative-control" => negative_control_claim()?,
        "search-oracle-equivalence" => oracle_equivalence_claim(seed)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown claim id {other:?}; known ids: {CLAIM_IDS:?}"
            )))
        }
    };
    report.wall_time_s = clock.elapsed().as_secs_f64();
    Ok(report)
}

pub fn run_all(seed: u64) -> Result<Vec<ClaimReport>> {
    CLAIM_IDS.iter().map(|id| run_claim(id, seed)).collect()
}

fn report(
    claim_id: &str,
    description: &str,
    expected: Value,
    measured: Value,
    tolerance: f64,
    pass: bool,
) -> ClaimReport {
    ClaimReport {
        claim_id: claim_id.to_string(),
        description: description.to_string(),
        expected,
        measured,
        tolerance,
        pass,
        wall_time_s: 0.0,
    }
}

// ---------------------------------------------------------------------------
// Shared instance generators
// ---------------------------------------------------------------------------

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15) ^ salt)
}

fn random_single_qubit_unitary(target: usize, rng: &mut ChaCha8Rng) -> Gate {
    let mix: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let p1: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let p2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Gate::unitary1(
        target,
        [
            Complex64::new(mix.cos(), 0.0),
            -Complex64::from_polar(mix.sin(), p2),
            Complex64::from_polar(mix.sin(), p1),
            Complex64::from_polar(mix.cos(), p1 + p2),
        ],
    )
    .expect("parameterized matrix is unitary")
}

fn random_circuit(n_qubits: usize, n_gates: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut circuit = Circuit::new(n_qubits, 0).expect("valid width");
    for _ in 0..n_gates {
        let target = rng.gen_range(0..n_qubits);
        let gate = match rng.gen_range(0..7) {
            0 => Gate::H { target },
            1 => Gate::X { target },
            2 => Gate::Z { target },
            3 => Gate::S { target },
            4 => Gate::R {
                target,
                phi: rng.gen_range(0.0..std::f64::consts::TAU),
            },
            5 => random_single_qubit_unitary(target, rng),
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
        circuit.push(gate).expect("targets in range");
    }
    circuit
}

fn random_orthogonal_pair(n: usize, rng: &mut ChaCha8Rng) -> (QuantumState, QuantumState) {
    let x = haar_sample(n, rng.gen()).expect("valid width");
    let raw = haar_sample(n, rng.gen()).expect("valid width");
    let overlap = inner_product(&x, &raw).expect("same width");
    let amps: Vec<Complex64> = raw
        .amplitudes()
        .iter()
        .zip(x.amplitudes())
        .map(|(b, a)| b - overlap * a)
        .collect();
    let y = QuantumState::normalized(amps).expect("nonzero remainder");
    (x, y)
}

// ---------------------------------------------------------------------------
// Claim 1: searched swap sizes and the triangle violation
// ---------------------------------------------------------------------------

fn swap_sizes_claim() -> Result<ClaimReport> {
    let gs = GateSet::universal_default(3)?;
    let x = QuantumState::from_basis_str("000")?;
    let y = QuantumState::from_basis_str("1--")?;
    let z = QuantumState::from_basis_str("011")?;

    let s_xz = swap_complexity(&x, &z, &SearchConfig::zero_error(4), &gs)?;
    let s_zy = swap_complexity(&z, &y, &SearchConfig::zero_error(4), &gs)?;
    let s_xy = swap_complexity(&x, &y, &SearchConfig::zero_error(7), &gs)?;

    let sizes = [
        s_xz.status.size(),
        s_zy.status.size(),
        s_xy.status.size(),
    ];
    let mut pass = sizes == [Some(2), Some(3), Some(7)];

    // The depth-7 witness must swap the pair exactly, phase +1 both ways —
    // the behavior of the seven-gate reference circuit.
    let mut witness_objective = 0.0;
    let mut witness_maps_both_ways = false;
    if let SearchStatus::Found { witness, objective, .. } = &s_xy.status {
        witness_objective = *objective;
        let fwd = apply_circuit(&x, witness)?;
        let back = apply_circuit(&y, witness)?;
        let to_y = inner_product(&y, &fwd)?;
        let to_x = inner_product(&x, &back)?;
        witness_maps_both_ways = (to_y - Complex64::new(1.0, 0.0)).norm() < 1e-9
            && (to_x - Complex64::new(1.0, 0.0)).norm() < 1e-9;
    }
    pass &= witness_maps_both_ways;

    // Semimetric violation: 7 > 2 + 3.
    let triangle_violated = match (sizes[2], sizes[0], sizes[1]) {
        (Some(xy), Some(xz), Some(zy)) => xy > xz + zy,
        _ => false,
    };
    pass &= triangle_violated;

    // Under the literal symmetrized-modulus objective, which also accepts
    // a common -1 phase, the same pair is swappable in 6 gates; the
    // violation survives either way (6 > 2 + 3). Asserted so the report
    // stays honest about both conventions.
    let free_cfg = SearchConfig {
        swap_phase: SwapPhase::Free,
        ..SearchConfig::zero_error(7)
    };
    let s_xy_free = swap_complexity(&x, &y, &free_cfg, &gs)?;
    pass &= s_xy_free.status.size() == Some(6);

    Ok(report(
        "s4-swap-sizes",
        "phase-aligned zero-error swap sizes 2, 3, 7 for |000>,|011>,|1-->; the depth-7 witness swaps both ways; 7 > 2 + 3; the phase-free objective needs only 6 gates",
        json!({"sizes": [2, 3, 7], "triangle_violated": true, "free_phase_size": 6}),
        json!({
            "sizes": sizes,
            "triangle_violated": triangle_violated,
            "free_phase_size": s_xy_free.status.size(),
            "witness_objective": witness_objective,
            "distinct_hits_at_7": match &s_xy.status {
                SearchStatus::Found { distinct_hits, .. } => Some(*distinct_hits),
                _ => None,
            },
            "explored_states": [s_xz.explored_states, s_zy.explored_states, s_xy.explored_states],
            "search_seconds": [s_xz.wall_time_s, s_zy.wall_time_s, s_xy.wall_time_s],
        }),
        1e-9,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 2: perfect round trip through both constructions
// ---------------------------------------------------------------------------

fn roundtrip_claim(seed: u64) -> Result<ClaimReport> {
    let mut rng = rng_for(seed, 0x01);
    let mut max_bias_err = 0.0f64;
    let mut max_overlap_err = 0.0f64;
    for trial in 0..50 {
        let n = 2 + (trial % 5);
        let gates = rng.gen_range(10..=30);
        let scrambler = random_circuit(n, gates, &mut rng);

        let x = apply_circuit(&QuantumState::zero(n)?, &scrambler)?;
        let flipped = QuantumState::basis(n, 1 << (n - 1))?;
        let y = apply_circuit(&flipped, &scrambler)?;

        // U = V X_0 V-dagger swaps x and y perfectly.
        let mut unitary = Circuit::new(n, 0)?;
        unitary.extend(&adjoint(&scrambler))?;
        unitary.push(Gate::X { target: 0 })?;
        unitary.extend(&scrambler)?;

        let overlaps = swap_overlaps(&unitary, &x, &y)?;
        let psi = superpose(&x, &y, 0.0)?;
        let phi = superpose(&x, &y, std::f64::consts::PI)?;
        let spec = build_distinguisher(&unitary, optimal_theta(&overlaps))?;
        let bias = distinguish_bias(&spec, &psi, &phi)?.bias;
        max_bias_err = max_bias_err.max((bias - 1.0).abs());

        let swapper = swapper_on_data(&spec)?;
        let rebuilt = swap_overlaps(&swapper, &x, &y)?;
        max_overlap_err = max_overlap_err.max((rebuilt.bias() - 1.0).abs());
    }
    let pass = max_bias_err < 1e-10 && max_overlap_err < 1e-10;
    Ok(report(
        "thm1-roundtrip",
        "50 constructed perfect swaps: distinguisher bias 1 and rebuilt swapper overlap 1, both to 1e-10",
        json!({"bias": 1.0, "symmetrized_overlap": 1.0}),
        json!({"max_bias_error": max_bias_err, "max_overlap_error": max_overlap_err}),
        1e-10,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 3: the bias law for imperfect swappers
// ---------------------------------------------------------------------------

fn bias_law_claim(seed: u64) -> Result<ClaimReport> {
    let mut rng = rng_for(seed, 0x02);
    let mut max_tuned_err = 0.0f64;
    let mut max_plain_err = 0.0f64;
    for trial in 0..200 {
        let n = 2 + (trial % 5);
        let unitary = random_circuit(n, 15, &mut rng);
        let (x, y) = random_orthogonal_pair(n, &mut rng);
        let overlaps = swap_overlaps(&unitary, &x, &y)?;
        let psi = superpose(&x, &y, 0.0)?;
        let phi = superpose(&x, &y, std::f64::consts::PI)?;

        let tuned = build_distinguisher(&unitary, optimal_theta(&overlaps))?;
        let bias = distinguish_bias(&tuned, &psi, &phi)?.bias;
        max_tuned_err = max_tuned_err.max((bias - overlaps.bias()).abs());

        let plain = build_distinguisher(&unitary, 0.0)?;
        let bias = distinguish_bias(&plain, &psi, &phi)?.bias;
        let expected = (overlaps.a + overlaps.b).re / 2.0;
        max_plain_err = max_plain_err.max((bias - expected).abs());
    }
    let pass = max_tuned_err < 1e-10 && max_plain_err < 1e-10;
    Ok(report(
        "thm2i-bias-law",
        "200 random (U, x, y): tuned bias = |a+b|/2 and theta=0 bias = Re(a+b)/2, both to 1e-10",
        json!({"tuned": "|a+b|/2", "plain": "Re(a+b)/2"}),
        json!({"max_tuned_error": max_tuned_err, "max_plain_error": max_plain_err}),
        1e-10,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 4: the swapper built from any distinguisher transfers its bias
// ---------------------------------------------------------------------------

fn exact_delta_claim(seed: u64) -> Result<ClaimReport> {
    let mut rng = rng_for(seed, 0x03);
    let mut max_err = 0.0f64;
    for trial in 0..200 {
        let n = 2 + (trial % 4);
        let circuit = random_circuit(n, 14, &mut rng);
        let flag = rng.gen_range(0..n);
        let spec = DistinguisherSpec::new(circuit, flag, 0)?;
        let (psi, phi) = random_orthogonal_pair(n, &mut rng);
        let delta = distinguish_bias(&spec, &psi, &phi)?.bias;

        let swapper = crate::duality::build_swapper(&spec)?;
        let x = superpose(&psi, &phi, 0.0)?;
        let y = superpose(&psi, &phi, std::f64::consts::PI)?;
        let overlaps = swap_overlaps(&swapper, &x, &y)?;
        max_err = max_err.max((overlaps.bias() - delta.abs()).abs());
    }
    let pass = max_err < 1e-10;
    Ok(report(
        "thm2ii-exact-delta",
        "200 random distinguishers A: the swapper A'ZA has symmetrized overlap |p_psi - p_phi| to 1e-10",
        json!({"identity": "|<y|A'ZA|x> + <x|A'ZA|y>|/2 = |p_psi - p_phi|"}),
        json!({"max_error": max_err}),
        1e-10,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 5: the tightness grid and the restricted optimizer
// ---------------------------------------------------------------------------

fn tightness_grid_claim() -> Result<ClaimReport> {
    let etas = EtaFamily::computational_basis()?;
    let mut max_overlap_err = 0.0f64;
    let mut max_opt_gap = 0.0f64;
    let mut max_over_cap = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let a = i as f64 / 9.0;
            let b = a * j as f64 / 9.0;
            let params = TightnessParams::new(a, b)?;
            let instance = build_instance(&params, &etas)?;
            let overlaps = verify_instance(&instance)?;
            max_overlap_err = max_overlap_err
                .max((overlaps.a - Complex64::new(a, 0.0)).norm())
                .max((overlaps.b - Complex64::new(b, 0.0)).norm());

            let opt = optimize_restricted_bias(&instance);
            max_opt_gap = max_opt_gap.max((opt.max_value - (a + b)).abs());
            max_over_cap = max_over_cap.max(opt.max_value - (a + b));
        }
    }

    // The zero-bias case: a unitary that maps x -> y but y -> -x. Sharing
    // the inner state across branches 4 and 5 lets a rotation of the last
    // index qubit act inside span{x, y}.
    let shared = haar_sample(3, 0xe7a)?;
    let mut states: Vec<QuantumState> = (0..8).map(|k| QuantumState::basis(3, k)).collect::<Result<_>>()?;
    states[4] = shared.clone();
    states[5] = shared;
    let family = EtaFamily::from_states(states, 0)?;
    let instance = build_instance(&TightnessParams::new(1.0, 1.0)?, &family)?;

    let mut rotation = Circuit::new(6, 0)?;
    // On the last index qubit: |+> -> |->, |-> -> -|+>.
    let quarter_turn = Gate::unitary1(
        2,
        [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )?;
    // Fire only on index branch 10?: conjugate the middle index bit with X
    // so both controls test |1>.
    rotation.push(Gate::X { target: 1 })?;
    rotation.push(Gate::controlled(0, Gate::controlled(1, quarter_turn)))?;
    rotation.push(Gate::X { target: 1 })?;

    let overlaps = swap_overlaps(&rotation, &instance.x, &instance.y)?;
    let zero_case_a_err = (overlaps.a - Complex64::new(1.0, 0.0)).norm();
    let zero_case_b_err = (overlaps.b - Complex64::new(-1.0, 0.0)).norm();
    let psi = superpose(&instance.x, &instance.y, 0.0)?;
    let phi = superpose(&instance.x, &instance.y, std::f64::consts::PI)?;
    let spec = build_distinguisher(&rotation, optimal_theta(&overlaps))?;
    let zero_bias = distinguish_bias(&spec, &psi, &phi)?.bias.abs();

    let pass = max_overlap_err < 1e-10
        && max_opt_gap < 1e-6
        && max_over_cap < 1e-9
        && zero_case_a_err < 1e-10
        && zero_case_b_err < 1e-10
        && zero_bias < 1e-10;
    Ok(report(
        "thm3-tightness-grid",
        "10x10 (a,b) grid: instances verify to 1e-10, the restricted optimizer attains a+b to 1e-6 without exceeding it, and the (1,-1) case has bias 0",
        json!({"overlaps": "(a, b)", "restricted_max": "a+b", "zero_case_bias": 0.0}),
        json!({
            "max_overlap_error": max_overlap_err,
            "max_optimizer_gap": max_opt_gap,
            "max_over_cap": max_over_cap,
            "zero_case_a_error": zero_case_a_err,
            "zero_case_b_error": zero_case_b_err,
            "zero_case_bias": zero_bias,
        }),
        1e-6,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 6: the inequality chain on searched values
// ---------------------------------------------------------------------------

fn inequality_claim(seed: u64) -> Result<ClaimReport> {
    let mut rng = rng_for(seed, 0x04);
    let mut pairs: Vec<(QuantumState, QuantumState)> = Vec::new();

    // Six orthogonal basis pairs on two qubits.
    for i in 0..4usize {
        for j in (i + 1)..4usize {
            pairs.push((QuantumState::basis(2, i)?, QuantumState::basis(2, j)?));
        }
    }
    // Ten random distinct basis pairs on three qubits.
    while pairs.len() < 16 {
        let i = rng.gen_range(0..8usize);
        let j = rng.gen_range(0..8usize);
        if i != j {
            pairs.push((QuantumState::basis(3, i)?, QuantumState::basis(3, j)?));
        }
    }
    // Four orthogonal product pairs mixing conjugate-basis qubits.
    for (sx, sy) in [("0+", "1+"), ("0-", "1-"), ("+0", "-0"), ("0+", "1-")] {
        pairs.push((
            QuantumState::from_basis_str(sx)?,
            QuantumState::from_basis_str(sy)?,
        ));
    }

    let mut audits_passed = 0usize;
    let mut audits_complete = 0usize;
    for (x, y) in &pairs {
        let gs = GateSet::universal_default(x.n_qubits())?;
        let audit = inequality_audit(x, y, &SearchConfig::zero_error(7), &gs)?;
        if audit.complete {
            audits_complete += 1;
            if audit.left_holds == Some(true) && audit.right_holds == Some(true) {
                audits_passed += 1;
            }
        }
    }

    // The separation example: swapping |0>eta and |1>eta needs one gate,
    // while preparing either superposition from |000> defeats a depth-3
    // search because eta is Haar-random.
    let eta = haar_sample(2, rng.gen())?;
    let mut amps_x = vec![Complex64::new(0.0, 0.0); 8];
    let mut amps_y = vec![Complex64::new(0.0, 0.0); 8];
    for (j, &v) in eta.amplitudes().iter().enumerate() {
        amps_x[j] = v;
        amps_y[4 + j] = v;
    }
    let x = QuantumState::from_amplitudes(amps_x)?;
    let y = QuantumState::from_amplitudes(amps_y)?;
    let gs = GateSet::universal_default(3)?;
    let s_result = swap_complexity(&x, &y, &SearchConfig::zero_error(3), &gs)?;
    let psi = superpose(&x, &y, 0.0)?;
    let phi = superpose(&x, &y, std::f64::consts::PI)?;
    let prep_psi = prep_complexity(&psi, &SearchConfig::zero_error(3), &gs)?;
    let prep_phi = prep_complexity(&phi, &SearchConfig::zero_error(3), &gs)?;
    let eta_s = s_result.status.size();
    let eta_preps_exhausted = prep_psi.status.size().is_none() && prep_phi.status.size().is_none();

    let pass = audits_complete == pairs.len()
        && audits_passed == pairs.len()
        && eta_s == Some(1)
        && eta_preps_exhausted;
    Ok(report(
        "cor4-inequality-audit",
        "20 instances: C <= S <= min prep + construction overhead with searched values; the |0>eta / |1>eta pair has S = 1 with preparation beyond depth 3",
        json!({"audits_passed": 20, "eta_s": 1, "eta_preps_exhausted": true}),
        json!({
            "audits_passed": audits_passed,
            "audits_complete": audits_complete,
            "eta_s": eta_s,
            "eta_preps_exhausted": eta_preps_exhausted,
        }),
        0.0,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 7: Haar overlap statistics and union-bound arithmetic
// ---------------------------------------------------------------------------

fn haar_statistics_claim(seed: u64) -> Result<ClaimReport> {
    const SAMPLES: usize = 100_000;
    let mut worst_sigma = 0.0f64;
    let mut rows = Vec::new();
    for n in [4usize, 6, 8, 10] {
        for eps in [0.05, 0.1, 0.2] {
            let est = haar_overlap_montecarlo(n, eps, SAMPLES, seed.wrapping_add(n as u64))?;
            let expected = haar_overlap_cdf(1u64 << n, eps)?;
            let sigma = (expected * (1.0 - expected) / SAMPLES as f64).sqrt();
            let distance = if sigma > 0.0 {
                (est.fraction - expected).abs() / sigma
            } else {
                0.0
            };
            worst_sigma = worst_sigma.max(distance);
            rows.push(json!({
                "n": n, "eps": eps,
                "fraction": est.fraction,
                "expected": expected,
                "sigma_distance": distance,
            }));
        }
    }

    // Union-bound log arithmetic against two independent routes: direct
    // small-number evaluation, and a re-derived large-number expression.
    let small = union_bound_log(2, 3, 4, 0.5)?;
    let direct = (2.0f64.powi(3) * 0.75f64.powi(3)).log2();
    let small_rel_err = (small.log2_exact - direct).abs() / direct.abs();

    let big = union_bound_log(16, 1 << 10, 1 << 30, 0.05)?;
    let hand_exact = 1024.0 * 4.0 + ((1u64 << 30) - 1) as f64 * (1.0f64 - 0.0025).log2();
    let big_rel_err = (big.log2_exact - hand_exact).abs() / hand_exact.abs();

    // The chain's endpoint: with eps^2 = M log2(g) / N the relaxed bound
    // sits below M log2(g) (1 - log2 e)/2.
    let m = 1u64 << 10;
    let n_dim = 1u64 << 30;
    let eps = ((m as f64 * 4.0) / n_dim as f64).sqrt();
    let chain = union_bound_log(16, m, n_dim, eps)?;
    let chain_cap = m as f64 * 4.0 * (1.0 - std::f64::consts::LOG2_E) / 2.0;
    let chain_ok = chain.log2_e_bound <= chain_cap;

    let pass = worst_sigma <= 3.0 && small_rel_err < 1e-9 && big_rel_err < 1e-9 && chain_ok;
    Ok(report(
        "haar-statistics",
        "Monte Carlo overlap tails match (1-eps^2)^(N-1) within 3 sigma for n in {4,6,8,10}, eps in {0.05,0.1,0.2}; union-bound logs match independent evaluation to 1e-9 relative",
        json!({"sigma_cap": 3.0, "log_rel_err_cap": 1e-9}),
        json!({
            "worst_sigma_distance": worst_sigma,
            "small_case_rel_err": small_rel_err,
            "big_case_rel_err": big_rel_err,
            "chain_bound_holds": chain_ok,
            "cells": rows,
        }),
        1e-9,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 8: dirty ancillas break the distinguisher, and the check says so
// ---------------------------------------------------------------------------

fn negative_control_claim() -> Result<ClaimReport> {
    let x = QuantumState::basis(1, 0)?;
    let y = QuantumState::basis(1, 1)?;
    let psi = superpose(&x, &y, 0.0)?;
    let phi = superpose(&x, &y, std::f64::consts::PI)?;

    // Clean swap: bias 1.
    let clean = Circuit::from_gates(1, 0, vec![Gate::X { target: 0 }])?;
    let clean_overlaps = swap_overlaps(&clean, &x, &y)?;
    let clean_spec = build_distinguisher(&clean, optimal_theta(&clean_overlaps))?;
    let clean_bias = distinguish_bias(&clean_spec, &psi, &phi)?.bias;

    // Same swap followed by copying the data bit into an ancilla that
    // never returns.
    let mut dirty = Circuit::new(1, 1)?;
    dirty.push(Gate::X { target: 0 })?;
    dirty.push(Gate::Cnot { control: 0, target: 1 })?;
    let check = ancilla_return_check(&dirty, &x, &y)?;
    let dirty_overlaps = swap_overlaps(&dirty, &x, &y)?;
    let dirty_spec = build_distinguisher(&dirty, optimal_theta(&dirty_overlaps))?;
    let dirty_bias = distinguish_bias(&dirty_spec, &psi, &phi)?.bias;

    let identity_gap = (dirty_bias - dirty_overlaps.bias()).abs();
    let pass = !check.ok
        && dirty_bias < clean_bias - 1e-6
        && identity_gap < 1e-10
        && (clean_bias - 1.0).abs() < 1e-10;
    Ok(report(
        "fn2-ancilla-negative-control",
        "a swapper leaving an ancilla dirty is flagged, and its measured bias drops strictly below the clean-case |a+b|/2 = 1 while matching its own projected overlaps",
        json!({"flagged": true, "clean_bias": 1.0, "dirty_bias_below": 1.0}),
        json!({
            "flagged": !check.ok,
            "residual": check.residual,
            "clean_bias": clean_bias,
            "dirty_bias": dirty_bias,
            "projected_identity_gap": identity_gap,
        }),
        1e-10,
        pass,
    ))
}

// ---------------------------------------------------------------------------
// Claim 9: the BFS agrees with a naive full enumerator
// ---------------------------------------------------------------------------

/// Which objective the naive oracle scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleObjective {
    Relative,
    Swap,
}

/// Minimal circuit size by brute-force enumeration of every gate sequence,
/// shortest first. Exponential in depth; independent of the BFS — it goes
/// through the public simulation API and never touches the dedup machinery.
pub fn oracle_minimal_size(
    x: &QuantumState,
    y: &QuantumState,
    objective: OracleObjective,
    swap_phase: SwapPhase,
    gs: &GateSet,
    max_depth: usize,
    threshold: f64,
) -> Result<Option<usize>> {
    let single_gate_circuits: Vec<Circuit> = gs
        .placements()
        .iter()
        .map(|g| Circuit::from_gates(gs.width(), 0, vec![g.clone()]))
        .collect::<Result<_>>()?;

    let score = |from_x: &QuantumState, from_y: &QuantumState| -> Result<f64> {
        Ok(match objective {
            OracleObjective::Relative => inner_product(y, from_x)?.norm_sqr(),
            OracleObjective::Swap => {
                let a = inner_product(y, from_x)?;
                let b = inner_product(x, from_y)?;
                match swap_phase {
                    SwapPhase::Free => (a + b).norm() / 2.0,
                    SwapPhase::Aligned => (a + b).re / 2.0,
                }
            }
        })
    };

    fn explore(
        from_x: &QuantumState,
        from_y: &QuantumState,
        remaining: usize,
        circuits: &[Circuit],
        score: &dyn Fn(&QuantumState, &QuantumState) -> Result<f64>,
        threshold: f64,
    ) -> Result<bool> {
        if remaining == 0 {
            return Ok(score(from_x, from_y)? >= threshold);
        }
        for circuit in circuits {
            let next_x = apply_circuit(from_x, circuit)?;
            let next_y = apply_circuit(from_y, circuit)?;
            if explore(&next_x, &next_y, remaining - 1, circuits, score, threshold)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    for depth in 0..=max_depth {
        if explore(x, y, depth, &single_gate_circuits, &score, threshold)? {
            return Ok(Some(depth));
        }
    }
    Ok(None)
}

fn oracle_equivalence_claim(seed: u64) -> Result<ClaimReport> {
    let mut rng = rng_for(seed, 0x05);
    let mut agreements = 0usize;
    let mut cases = Vec::new();
    const TRIALS: usize = 20;
    for trial in 0..TRIALS {
        let n = 2 + (trial % 2);
        let gs = GateSet::universal_default(n)?;
        let max_depth = 4 - (n - 2); // depth 4 on two qubits, 3 on three
        let threshold = 1.0 - 1e-9;

        let relative = trial % 2 == 0;
        let (x, y) = if relative {
            let x = QuantumState::basis(n, rng.gen_range(0..(1 << n)))?;
            let scram = random_search_target(n, rng.gen_range(0..=max_depth), &gs, &mut rng)?;
            (x, scram)
        } else {
            // Orthogonal pair with a reachable-ish partner.
            loop {
                let x = QuantumState::basis(n, rng.gen_range(0..(1 << n)))?;
                let y = random_search_target(n, rng.gen_range(0..=max_depth), &gs, &mut rng)?;
                if inner_product(&x, &y)?.norm() < 1e-10 {
                    break (x, y);
                }
            }
        };

        // Alternate the swap-phase convention so both objectives are
        // checked against the enumerator.
        let swap_phase = if trial % 4 < 2 {
            SwapPhase::Aligned
        } else {
            SwapPhase::Free
        };
        let cfg = SearchConfig {
            swap_phase,
            ..SearchConfig::zero_error(max_depth)
        };
        let (bfs, objective) = if relative {
            (relative_complexity(&x, &y, &cfg, &gs)?, OracleObjective::Relative)
        } else {
            (swap_complexity(&x, &y, &cfg, &gs)?, OracleObjective::Swap)
        };
        let oracle = oracle_minimal_size(&x, &y, objective, swap_phase, &gs, max_depth, threshold)?;
        let bfs_size = bfs.status.size();
        if bfs_size == oracle {
            agreements += 1;
        }
        cases.push(json!({"n": n, "relative": relative, "bfs": bfs_size, "oracle": oracle}));
    }
    let pass = agreements == TRIALS;
    Ok(report(
        "search-oracle-equivalence",
        "BFS minimal sizes equal naive full enumeration on 20 random problems (exact agreement, including exhaustion)",
        json!({"agreements": TRIALS}),
        json!({"agreements": agreements, "cases": cases}),
        0.0,
        pass,
    ))
}

fn random_search_target(
    n: usize,
    gates: usize,
    gs: &GateSet,
    rng: &mut ChaCha8Rng,
) -> Result<QuantumState> {
    let mut circuit = Circuit::new(n, 0)?;
    for _ in 0..gates {
        let idx = rng.gen_range(0..gs.len());
        circuit.push(gs.placements()[idx].clone())?;
    }
    apply_circuit(&QuantumState::zero(n)?, &circuit)
}
