use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use necroswap::claims::{self, ClaimReport};
use necroswap::complexity::{
    inequality_audit, prep_complexity, relative_complexity, swap_complexity, triangle_audit,
    GateSet, GateTemplate, SearchConfig, SearchStatus, SearchStrategy, SwapPhase,
    TriangleObjective,
};
use necroswap::duality::{
    build_distinguisher, build_swapper, distinguish_bias, optimal_theta, swap_overlaps,
    DistinguisherSpec,
};
use necroswap::statevec::{superpose, QuantumState};
use necroswap::tightness::{
    build_instance, grid_sweep, haar_overlap_cdf, haar_overlap_montecarlo,
    optimize_restricted_bias, verify_instance, EtaFamily, TightnessParams,
};
use necroswap::wire::{
    self, circuit_to_doc, doc_to_circuit, doc_to_state, search_result_to_doc, CircuitDoc,
    SCHEMA_VERSION,
};

/// Exit code when a search gave up before the cutoff depth.
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "necroswap",
    about = "Swap two orthogonal quantum states, distinguish their superpositions, and search for minimal circuits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for everything randomized; identical seeds give byte-identical
    /// reports up to wall-time fields.
    #[arg(long, global = true, default_value_t = claims::DEFAULT_SEED)]
    seed: u64,

    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Report format; csv is available for tabular reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the interferometric distinguisher for a swap unitary and
    /// report its exact bias on the conjugate superpositions.
    Distinguish(DistinguishArgs),
    /// Build the A'ZA swapper from a distinguisher circuit and report how
    /// well it swaps.
    SwapFromDistinguisher(SwapFromDistinguisherArgs),
    /// Minimal-circuit search for relative, swap, or preparation
    /// complexity.
    Search(SearchArgs),
    /// Build, verify, and optionally optimize the eight-branch tightness
    /// instance; sweeps a grid when asked.
    Tightness(TightnessArgs),
    /// Monte Carlo check of the Haar overlap tail against its closed form.
    Haar(HaarArgs),
    /// Inequality-chain or triangle audits with searched sizes.
    Audit(AuditArgs),
    /// Run every claim in the suite and print a pass/fail table.
    ReproduceAll(ReproduceAllArgs),
}

#[derive(Args)]
struct DistinguishArgs {
    /// The candidate swap unitary (circuit JSON file).
    #[arg(long)]
    swap_unitary: PathBuf,
    /// The orthogonal pair x:y (basis strings like 000:1-- or JSON files).
    #[arg(long)]
    pair: String,
    /// Control phase in radians; defaults to the optimal -arg(a+b).
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args)]
struct SwapFromDistinguisherArgs {
    /// The distinguisher circuit (JSON file).
    #[arg(long)]
    distinguisher: PathBuf,
    /// The orthogonal pair psi:phi the circuit distinguishes.
    #[arg(long)]
    pair: String,
    #[arg(long, default_value_t = 0)]
    flag_qubit: usize,
    #[arg(long, default_value_t = 0)]
    accept_on: u8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    Relative,
    Swap,
    Prep,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    ForwardBfs,
    MeetInTheMiddle,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    objective: Objective,
    /// Pair x:y for relative/swap objectives.
    #[arg(long)]
    pair: Option<String>,
    /// Target state for the prep objective.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Force epsilon = 0 (exact matching).
    #[arg(long)]
    zero_error: bool,
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
    /// Named gate set (universal-default, hxc) or a JSON template file.
    #[arg(long, default_value = "universal-default")]
    gates: String,
    #[arg(long, default_value_t = 0)]
    ancillas: usize,
    #[arg(long, value_enum, default_value_t = Strategy::ForwardBfs)]
    strategy: Strategy,
    /// Swap-objective phase convention: aligned scores Re(a+b)/2 (the
    /// circuit must swap with phase +1), free scores the symmetrized
    /// modulus |a+b|/2 (a common phase on both directions also counts).
    #[arg(long, value_enum, default_value_t = PhaseArg::Aligned)]
    swap_phase: PhaseArg,
    /// Also write the witness circuit JSON here.
    #[arg(long)]
    emit_witness: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhaseArg {
    Aligned,
    Free,
}

#[derive(Args)]
struct TightnessArgs {
    #[arg(long, default_value_t = 0.7)]
    a: f64,
    #[arg(long, default_value_t = 0.2)]
    b: f64,
    /// Haar inner-state width; ignored with --exact-basis.
    #[arg(long, default_value_t = 4)]
    inner_qubits: usize,
    /// Use exactly orthonormal |k> inner states instead of Haar draws.
    #[arg(long)]
    exact_basis: bool,
    /// Sweep a grid x grid surface over (a, b) instead of one instance.
    #[arg(long)]
    grid: Option<usize>,
    /// Run the restricted-unitary bias optimizer.
    #[arg(long)]
    optimize: bool,
}

#[derive(Args)]
struct HaarArgs {
    /// Qubit count of the sampled states.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

#[derive(Args)]
struct AuditArgs {
    /// Inequality audit over the orthogonal pair x:y.
    #[arg(long)]
    pair: Option<String>,
    /// Triangle audit over the triple x:y:z (z is the midpoint).
    #[arg(long)]
    triple: Option<String>,
    /// Complexity for the triangle audit.
    #[arg(long, value_enum, default_value_t = Which::Swap)]
    which: Which,
    #[arg(long, default_value_t = 7)]
    max_depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Relative,
    Swap,
}

#[derive(Args)]
struct ReproduceAllArgs {
    /// Run a single claim by id.
    #[arg(long)]
    only: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(threads) = cli.threads {
        // A second initialization (e.g. in tests) is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli.threads;

    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Distinguish(args) => distinguish_cmd(cli, args),
        Command::SwapFromDistinguisher(args) => swap_from_distinguisher_cmd(cli, args),
        Command::Search(args) => search_cmd(cli, args),
        Command::Tightness(args) => tightness_cmd(cli, args),
        Command::Haar(args) => haar_cmd(cli, args),
        Command::Audit(args) => audit_cmd(cli, args),
        Command::ReproduceAll(args) => reproduce_all_cmd(cli, args),
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

fn parse_state(arg: &str) -> Result<QuantumState> {
    let is_shorthand = !arg.is_empty()
        && arg
            .chars()
            .all(|c| matches!(c, '0' | '1' | '+' | '-' | '\u{2212}'));
    if is_shorthand {
        return Ok(QuantumState::from_basis_str(arg)?);
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading state file {arg}"))?;
    let doc: Vec<[f64; 2]> =
        serde_json::from_str(&text).with_context(|| format!("parsing state file {arg}"))?;
    Ok(doc_to_state(&doc)?)
}

fn parse_pair(arg: &str) -> Result<(QuantumState, QuantumState)> {
    let Some((left, right)) = arg.split_once(':') else {
        bail!("expected a pair written LEFT:RIGHT, got {arg:?}");
    };
    Ok((parse_state(left)?, parse_state(right)?))
}

fn parse_triple(arg: &str) -> Result<[QuantumState; 3]> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() != 3 {
        bail!("expected a triple written A:B:C, got {arg:?}");
    }
    Ok([
        parse_state(parts[0])?,
        parse_state(parts[1])?,
        parse_state(parts[2])?,
    ])
}

fn read_circuit(path: &Path) -> Result<necroswap::statevec::Circuit> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading circuit {}", path.display()))?;
    let doc: CircuitDoc =
        serde_json::from_str(&text).with_context(|| format!("parsing circuit {}", path.display()))?;
    Ok(doc_to_circuit(&doc)?)
}

fn load_gate_set(spec: &str, width: usize) -> Result<GateSet> {
    match spec {
        "universal-default" => Ok(GateSet::universal_default(width)?),
        "hxc" => Ok(GateSet::hxc(width)?),
        path => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("gate set {spec:?} is neither a known name nor a readable file"))?;
            let templates: Vec<GateTemplate> =
                serde_json::from_str(&text).with_context(|| format!("parsing gate set {path}"))?;
            Ok(GateSet::from_templates(path, &templates, width)?)
        }
    }
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => write_atomic(path, text),
    }
}

/// Write-temp-then-rename so a long run can never leave a torn report.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(dir) => dir.join(format!(
            ".{}.tmp-{}",
            path.file_name().unwrap_or_default().to_string_lossy(),
            std::process::id()
        )),
        None => PathBuf::from(format!(".necroswap.tmp-{}", std::process::id())),
    };
    fs::write(&tmp, text.as_bytes()).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn emit_json<T: serde::Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(cli, text.trim_end())
}

fn require_json(cli: &Cli, what: &str) -> Result<()> {
    if cli.format == Format::Csv {
        // Usage errors exit with 2, matching the argument-parsing path.
        eprintln!("error: {what} reports have no csv form; use --format json");
        std::process::exit(2);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn distinguish_cmd(cli: &Cli, args: &DistinguishArgs) -> Result<ExitCode> {
    require_json(cli, "distinguish")?;
    let unitary = read_circuit(&args.swap_unitary)?;
    let (x, y) = parse_pair(&args.pair)?;
    let overlaps = swap_overlaps(&unitary, &x, &y)?;
    let theta = args.theta.unwrap_or_else(|| optimal_theta(&overlaps));
    let spec = build_distinguisher(&unitary, theta)?;
    let psi = superpose(&x, &y, 0.0)?;
    let phi = superpose(&x, &y, std::f64::consts::PI)?;
    let report = distinguish_bias(&spec, &psi, &phi)?;
    emit_json(
        cli,
        &wire::DistinguishDoc {
            schema_version: SCHEMA_VERSION,
            a: [overlaps.a.re, overlaps.a.im],
            b: [overlaps.b.re, overlaps.b.im],
            theta,
            bias: report.bias,
            p_psi: report.p_psi,
            p_phi: report.p_phi,
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

fn swap_from_distinguisher_cmd(cli: &Cli, args: &SwapFromDistinguisherArgs) -> Result<ExitCode> {
    require_json(cli, "swap-from-distinguisher")?;
    let circuit = read_circuit(&args.distinguisher)?;
    let (psi, phi) = parse_pair(&args.pair)?;
    let spec = DistinguisherSpec::new(circuit, args.flag_qubit, args.accept_on)?;
    let report = distinguish_bias(&spec, &psi, &phi)?;
    // A distinguisher one wire wider than the pair carries a control in
    // front (the interferometric construction); that wire becomes a work
    // qubit of the swapper. Same width means the circuit reads the pair
    // directly.
    let swapper = if spec.circuit.n_qubits == psi.n_qubits() + 1 {
        necroswap::duality::swapper_on_data(&spec)?
    } else {
        build_swapper(&spec)?
    };
    let x = superpose(&psi, &phi, 0.0)?;
    let y = superpose(&psi, &phi, std::f64::consts::PI)?;
    let overlaps = swap_overlaps(&swapper, &x, &y)?;
    emit_json(
        cli,
        &wire::SwapFromDistinguisherDoc {
            schema_version: SCHEMA_VERSION,
            delta: report.bias,
            p_psi: report.p_psi,
            p_phi: report.p_phi,
            swapper_bias: overlaps.bias(),
            swapper_gates: swapper.len(),
            swapper: circuit_to_doc(&swapper),
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

fn search_cmd(cli: &Cli, args: &SearchArgs) -> Result<ExitCode> {
    require_json(cli, "search")?;
    let epsilon = if args.zero_error { 0.0 } else { args.epsilon };
    let strategy = match args.strategy {
        Strategy::ForwardBfs => SearchStrategy::ForwardBfs,
        Strategy::MeetInTheMiddle => SearchStrategy::MeetInTheMiddle,
    };
    let cfg = SearchConfig {
        epsilon,
        n_ancillas: args.ancillas,
        strategy,
        swap_phase: match args.swap_phase {
            PhaseArg::Aligned => SwapPhase::Aligned,
            PhaseArg::Free => SwapPhase::Free,
        },
        ..SearchConfig::zero_error(args.max_depth)
    };

    let result = match args.objective {
        Objective::Prep => {
            let Some(target) = &args.target else {
                bail!("--objective prep needs --target");
            };
            let target = parse_state(target)?;
            let gs = load_gate_set(&args.gates, target.n_qubits() + args.ancillas)?;
            prep_complexity(&target, &cfg, &gs)?
        }
        Objective::Relative | Objective::Swap => {
            let Some(pair) = &args.pair else {
                bail!("--objective relative/swap needs --pair");
            };
            let (x, y) = parse_pair(pair)?;
            let gs = load_gate_set(&args.gates, x.n_qubits() + args.ancillas)?;
            if args.objective == Objective::Relative {
                relative_complexity(&x, &y, &cfg, &gs)?
            } else {
                swap_complexity(&x, &y, &cfg, &gs)?
            }
        }
    };

    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    let doc = search_result_to_doc(&result);
    if let (Some(path), Some(witness)) = (&args.emit_witness, result.status.witness()) {
        write_atomic(path, &serde_json::to_string_pretty(&circuit_to_doc(witness))?)?;
    }
    emit_json(cli, &doc)?;
    Ok(match result.status {
        SearchStatus::Found { .. } => ExitCode::SUCCESS,
        SearchStatus::Exhausted { .. } => ExitCode::from(EXIT_EXHAUSTED),
    })
}

fn tightness_cmd(cli: &Cli, args: &TightnessArgs) -> Result<ExitCode> {
    let etas = if args.exact_basis {
        EtaFamily::computational_basis()?
    } else {
        EtaFamily::haar(args.inner_qubits, cli.seed)?
    };

    if let Some(steps) = args.grid {
        let cells = grid_sweep(steps, &etas, args.optimize)?;
        match cli.format {
            Format::Json => emit_json(
                cli,
                &serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "seed": cli.seed,
                    "exact_basis": args.exact_basis,
                    "inner_qubits": etas.inner_qubits,
                    "max_pairwise_eta_overlap": etas.max_pairwise_overlap,
                    "cells": cells,
                }),
            )?,
            Format::Csv => {
                let mut text = String::from("a,b,measured_a,measured_b,residual_bound,restricted_max,restricted_gap\n");
                for cell in &cells {
                    let (opt_max, opt_gap) = match &cell.optimizer {
                        Some(opt) => (
                            format!("{}", opt.max_value),
                            format!("{}", opt.max_value - (cell.a + cell.b)),
                        ),
                        None => (String::new(), String::new()),
                    };
                    text.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        cell.a, cell.b, cell.measured_a, cell.measured_b, cell.residual_bound,
                        opt_max, opt_gap,
                    ));
                }
                emit(cli, text.trim_end())?;
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    require_json(cli, "single-instance tightness")?;
    let params = TightnessParams::new(args.a, args.b)?;
    let instance = build_instance(&params, &etas)?;
    let overlaps = verify_instance(&instance)?;
    let optimizer = args.optimize.then(|| optimize_restricted_bias(&instance));
    emit_json(
        cli,
        &serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "seed": cli.seed,
            "params": params,
            "exact_basis": args.exact_basis,
            "inner_qubits": etas.inner_qubits,
            "max_pairwise_eta_overlap": etas.max_pairwise_overlap,
            "residual_bound": instance.residual_bound,
            "measured_a": [overlaps.a.re, overlaps.a.im],
            "measured_b": [overlaps.b.re, overlaps.b.im],
            "optimizer": optimizer,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn haar_cmd(cli: &Cli, args: &HaarArgs) -> Result<ExitCode> {
    let est = haar_overlap_montecarlo(args.n, args.eps, args.samples, cli.seed)?;
    let closed_form = haar_overlap_cdf(1u64 << args.n, args.eps)?;
    let sigma_distance = if est.stderr > 0.0 {
        (est.fraction - closed_form).abs() / est.stderr
    } else {
        0.0
    };
    let doc = wire::HaarDoc {
        schema_version: SCHEMA_VERSION,
        n_qubits: args.n,
        eps: args.eps,
        samples: est.samples,
        fraction: est.fraction,
        stderr: est.stderr,
        closed_form,
        sigma_distance,
    };
    match cli.format {
        Format::Json => emit_json(cli, &doc)?,
        Format::Csv => emit(
            cli,
            &format!(
                "n,eps,samples,fraction,stderr,closed_form,sigma_distance\n{},{},{},{},{},{},{}",
                doc.n_qubits,
                doc.eps,
                doc.samples,
                doc.fraction,
                doc.stderr,
                doc.closed_form,
                doc.sigma_distance
            ),
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn audit_cmd(cli: &Cli, args: &AuditArgs) -> Result<ExitCode> {
    require_json(cli, "audit")?;
    let cfg = SearchConfig::zero_error(args.max_depth);
    match (&args.pair, &args.triple) {
        (Some(pair), None) => {
            let (x, y) = parse_pair(pair)?;
            let gs = GateSet::universal_default(x.n_qubits())?;
            let audit = inequality_audit(&x, &y, &cfg, &gs)?;
            let complete = audit.complete;
            emit_json(
                cli,
                &serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "inequality",
                    "audit": audit,
                }),
            )?;
            Ok(if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_EXHAUSTED)
            })
        }
        (None, Some(triple)) => {
            let states = parse_triple(triple)?;
            let gs = GateSet::universal_default(states[0].n_qubits())?;
            let which = match args.which {
                Which::Relative => TriangleObjective::Relative,
                Which::Swap => TriangleObjective::Swap,
            };
            let audit = triangle_audit(&states, which, &cfg, &gs)?;
            let complete = audit.complete;
            emit_json(
                cli,
                &serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "triangle",
                    "which": args.which_str(),
                    "audit": audit,
                }),
            )?;
            Ok(if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_EXHAUSTED)
            })
        }
        _ => bail!("audit needs exactly one of --pair or --triple"),
    }
}

impl AuditArgs {
    fn which_str(&self) -> &'static str {
        match self.which {
            Which::Relative => "relative",
            Which::Swap => "swap",
        }
    }
}

fn reproduce_all_cmd(cli: &Cli, args: &ReproduceAllArgs) -> Result<ExitCode> {
    let reports: Vec<ClaimReport> = match &args.only {
        Some(id) => vec![claims::run_claim(id, cli.seed)?],
        None => claims::run_all(cli.seed)?,
    };

    for report in &reports {
        let status = if report.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:<32} ({:.2}s) {}",
            report.claim_id, report.wall_time_s, report.description
        );
    }
    let all_passed = reports.iter().all(|r| r.pass);
    println!(
        "{}/{} claims passed",
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    );

    if let Some(path) = &cli.out {
        let doc = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "seed": cli.seed,
            "all_passed": all_passed,
            "claims": reports,
        });
        write_atomic(path, &serde_json::to_string_pretty(&doc)?)?;
    }

    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
