//! End-to-end tests of the command-line interface: flag handling, exit
//! codes, determinism of emitted reports, atomic output writes, and schema
//! conformance of every document the binary produces.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn necroswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_necroswap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn approx(value: &Value, expected: f64, tol: f64) {
    let v = value.as_f64().expect("numeric field");
    assert!((v - expected).abs() < tol, "{v} !~ {expected}");
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn schema_validator() -> jsonschema::Validator {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).expect("schema file"))
            .expect("schema parses");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    assert!(
        validator.is_valid(doc),
        "document violates the report schema:\n{}\nerrors: {:?}",
        serde_json::to_string_pretty(doc).unwrap(),
        validator.iter_errors(doc).map(|e| e.to_string()).collect::<Vec<_>>()
    );
}

/// Null out wall-time fields everywhere; determinism holds modulo timing.
fn strip_wall_time(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                if key.contains("wall_time") || key.contains("seconds") {
                    *v = Value::Null;
                } else {
                    strip_wall_time(v);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(strip_wall_time),
        _ => {}
    }
}

#[test]
fn search_finds_basis_swap_and_validates() {
    let output = necroswap(&[
        "search",
        "--objective",
        "swap",
        "--zero-error",
        "--pair",
        "000:011",
        "--max-depth",
        "4",
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["status"], "found");
    assert_eq!(doc["size"], 2);
    assert_valid(&schema_validator(), &doc);
}

#[test]
fn search_exhaustion_exits_3_with_partial_report() {
    let output = necroswap(&[
        "search",
        "--objective",
        "swap",
        "--pair",
        "000:1--",
        "--max-depth",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&output.stdout).expect("partial report still valid JSON");
    assert_eq!(doc["status"], "exhausted");
    assert_valid(&schema_validator(), &doc);
}

#[test]
fn search_reports_are_deterministic_modulo_wall_time() {
    let args = [
        "search",
        "--objective",
        "relative",
        "--pair",
        "00:++",
        "--max-depth",
        "4",
        "--seed",
        "11",
    ];
    let mut first = stdout_json(&necroswap(&args));
    let mut second = stdout_json(&necroswap(&args));
    strip_wall_time(&mut first);
    strip_wall_time(&mut second);
    assert_eq!(first, second);

    // Thread count must not change anything either.
    let mut one_thread = stdout_json(&necroswap(
        &args.iter().chain(&["--threads", "1"]).copied().collect::<Vec<_>>(),
    ));
    strip_wall_time(&mut one_thread);
    assert_eq!(first, one_thread);
}

#[test]
fn distinguish_on_files_reports_the_bias_law() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("x.json");
    std::fs::write(
        &circuit,
        r#"{"n_qubits": 1, "n_ancillas": 0, "gates": [{"kind": "x", "targets": [0]}]}"#,
    )
    .unwrap();
    let x_state = dir.path().join("zero.json");
    std::fs::write(&x_state, "[[1.0,0.0],[0.0,0.0]]").unwrap();

    let output = necroswap(&[
        "distinguish",
        "--swap-unitary",
        circuit.to_str().unwrap(),
        "--pair",
        &format!("{}:1", x_state.display()),
    ]);
    let doc = stdout_json(&output);
    approx(&doc["a"][0], 1.0, 1e-12);
    approx(&doc["a"][1], 0.0, 1e-12);
    approx(&doc["b"][0], 1.0, 1e-12);
    approx(&doc["bias"], 1.0, 1e-12);
    approx(&doc["p_psi"], 1.0, 1e-12);
    assert_valid(&schema_validator(), &doc);
}

#[test]
fn swap_from_distinguisher_round_trips_delta() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("h.json");
    std::fs::write(
        &circuit,
        r#"{"n_qubits": 1, "n_ancillas": 0, "gates": [{"kind": "h", "targets": [0]}]}"#,
    )
    .unwrap();

    let output = necroswap(&[
        "swap-from-distinguisher",
        "--distinguisher",
        circuit.to_str().unwrap(),
        "--pair",
        "+:-",
    ]);
    let doc = stdout_json(&output);
    approx(&doc["delta"], 1.0, 1e-12);
    approx(&doc["swapper_bias"], 1.0, 1e-12);
    assert_eq!(doc["swapper_gates"], 3);
    assert_valid(&schema_validator(), &doc);

    // A control-style distinguisher (one wire wider than the pair): its
    // control becomes an ancilla of the swapper.
    let wide = dir.path().join("ctrl.json");
    std::fs::write(
        &wide,
        r#"{"n_qubits": 2, "n_ancillas": 0, "gates": [
            {"kind": "h", "targets": [0]},
            {"kind": "cnot", "targets": [0, 1]},
            {"kind": "h", "targets": [0]}]}"#,
    )
    .unwrap();
    let output = necroswap(&[
        "swap-from-distinguisher",
        "--distinguisher",
        wide.to_str().unwrap(),
        "--pair",
        "+:-",
    ]);
    let doc = stdout_json(&output);
    approx(&doc["delta"], 1.0, 1e-12);
    approx(&doc["swapper_bias"], 1.0, 1e-12);
    assert_eq!(doc["swapper"]["n_ancillas"], 1);
    assert_valid(&schema_validator(), &doc);
}

#[test]
fn haar_subcommand_matches_closed_form() {
    let output = necroswap(&["haar", "--n", "4", "--eps", "0.2", "--samples", "20000"]);
    let doc = stdout_json(&output);
    assert!(doc["sigma_distance"].as_f64().unwrap() < 4.0);
    assert_valid(&schema_validator(), &doc);

    let csv = necroswap(&[
        "haar", "--n", "4", "--eps", "0.2", "--samples", "20000", "--format", "csv",
    ]);
    assert!(csv.status.success());
    let text = String::from_utf8_lossy(&csv.stdout);
    assert!(text.starts_with("n,eps,samples,fraction"));
}

#[test]
fn tightness_single_and_grid_reports() {
    let output = necroswap(&[
        "tightness", "--a", "0.7", "--b", "0.2", "--exact-basis", "--optimize",
    ]);
    let doc = stdout_json(&output);
    approx(&doc["measured_a"][0], 0.7, 1e-12);
    let max = doc["optimizer"]["max_value"].as_f64().unwrap();
    assert!((max - 0.9).abs() < 1e-6);
    assert_valid(&schema_validator(), &doc);

    let grid = necroswap(&["tightness", "--grid", "3", "--exact-basis"]);
    let doc = stdout_json(&grid);
    assert_eq!(doc["cells"].as_array().unwrap().len(), 9);
    assert_valid(&schema_validator(), &doc);

    let csv = necroswap(&["tightness", "--grid", "3", "--exact-basis", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8_lossy(&csv.stdout);
    assert!(text.starts_with("a,b,measured_a"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn audit_subcommands_report_and_validate() {
    let output = necroswap(&["audit", "--pair", "0:1", "--max-depth", "4"]);
    let doc = stdout_json(&output);
    assert_eq!(doc["kind"], "inequality");
    assert_eq!(doc["audit"]["complete"], true);
    assert_eq!(doc["audit"]["left_holds"], true);
    assert_valid(&schema_validator(), &doc);

    let output = necroswap(&[
        "audit", "--triple", "00:11:01", "--which", "swap", "--max-depth", "4",
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["kind"], "triangle");
    assert_eq!(doc["audit"]["holds"], true);
    assert_valid(&schema_validator(), &doc);

    // Exhaustion surfaces as exit 3 with the partial audit emitted.
    let output = necroswap(&["audit", "--pair", "000:1--", "--max-depth", "2"]);
    assert_eq!(output.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["audit"]["complete"], false);
}

#[test]
fn out_flag_writes_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = necroswap(&[
        "haar", "--n", "2", "--eps", "0.3", "--samples", "1000",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    // No leftover temp files.
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn gate_set_files_are_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let gates = dir.path().join("hxc.json");
    std::fs::write(&gates, r#"[{"kind":"h"},{"kind":"x"},{"kind":"cnot"}]"#).unwrap();
    let output = necroswap(&[
        "search",
        "--objective",
        "relative",
        "--pair",
        "00:++",
        "--max-depth",
        "3",
        "--gates",
        gates.to_str().unwrap(),
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["size"], 2);

    let output = necroswap(&[
        "search", "--objective", "relative", "--pair", "00:++",
        "--max-depth", "3", "--gates", "no-such-set",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let output = necroswap(&["search", "--objective", "warp"]);
    assert_eq!(output.status.code(), Some(2));

    let output = necroswap(&["search", "--objective", "swap", "--pair", "0:1", "--format", "csv"]);
    assert_eq!(output.status.code(), Some(2));

    let output = necroswap(&["audit"]);
    assert_ne!(output.status.code(), Some(0));
}

#[test]
fn width_cap_env_var_is_honored() {
    let output = Command::new(env!("CARGO_BIN_EXE_necroswap"))
        .args(["haar", "--n", "12", "--eps", "0.1", "--samples", "1000"])
        .env("NECROSWAP_MAX_QUBITS", "10")
        .output()
        .expect("binary runs");
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("exceeds the configured cap"), "stderr: {stderr}");
}

#[test]
fn emit_witness_writes_a_loadable_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");
    let output = necroswap(&[
        "search",
        "--objective",
        "swap",
        "--pair",
        "011:1--",
        "--max-depth",
        "4",
        "--emit-witness",
        witness.to_str().unwrap(),
    ]);
    let doc = stdout_json(&output);
    assert_eq!(doc["size"], 3);
    let text = std::fs::read_to_string(&witness).unwrap();
    let circuit: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(circuit["n_qubits"], 3);
    assert_eq!(circuit["gates"].as_array().unwrap().len(), 3);
}

#[test]
fn reproduce_all_single_claim_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("claims.json");
    let output = necroswap(&[
        "reproduce-all",
        "--only",
        "fn2-ancilla-negative-control",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let table = String::from_utf8_lossy(&output.stdout);
    assert!(table.contains("[PASS] fn2-ancilla-negative-control"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["all_passed"], true);
    assert_valid(&schema_validator(), &doc);

    // Unknown claim ids fail loudly.
    let output = necroswap(&["reproduce-all", "--only", "no-such-claim"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn swap_phase_flag_is_accepted() {
    let aligned = stdout_json(&necroswap(&[
        "search", "--objective", "swap", "--pair", "0:1", "--max-depth", "2",
    ]));
    assert_eq!(aligned["size"], 1);

    // |0> and |1> swap in one X either way; the free objective must agree
    // on this easy case.
    let free = stdout_json(&necroswap(&[
        "search", "--objective", "swap", "--pair", "0:1", "--max-depth", "2",
        "--swap-phase", "free",
    ]));
    assert_eq!(free["size"], 1);
}
