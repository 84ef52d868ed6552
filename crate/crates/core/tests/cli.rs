//! The `finalg` binary end to end: exit codes, output formats and round trips.

use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;

use finalg::abelian::FiniteAbelianGroup;
use finalg::center::CenterClassification;
use finalg::cli::table::Table;
use finalg::cli::{ResultEnvelope, Status};
use finalg::clifford::PinReport;
use finalg::cohomology::{Cochain, CochainFile, CohomologySummary, FiniteGroup};
use finalg::quadratic::{evaluation_form, split_form, QuadraticForm};
use finalg::subgroups::Subgroup;

fn finalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finalg"))
        .args(args)
        .env_remove("FINALG_CAP")
        .output()
        .expect("binary runs")
}

fn envelope(args: &[&str]) -> (i32, ResultEnvelope) {
    let out = finalg(args);
    let env: ResultEnvelope = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), env)
}

fn payload(env: &ResultEnvelope) -> &Value {
    env.payload.as_ref().expect("payload")
}

#[test]
fn orth_order_reports_order_so_and_spectrum() {
    let (code, env) = envelope(&["orth", "order", "--group", "3,3", "--form", "ev:3"]);
    assert_eq!(code, 0);
    assert_eq!(env.status, Status::Ok);
    let p = payload(&env);
    assert_eq!(p["order"], 4);
    assert_eq!(p["so_order"], 2);
    assert_eq!(p["det_spectrum"]["1"], 2);
    assert!(env.wall_time_ms.is_some());
    assert!(!env.checks.is_empty() && env.all_checks_pass());
}

#[test]
fn center_classify_trivial_tau_gives_ev() {
    let (code, env) = envelope(&["center", "classify", "--group", "3", "--tau", "trivial"]);
    assert_eq!(code, 0);
    let c: CenterClassification = serde_json::from_value(payload(&env).clone()).unwrap();
    let got: QuadraticForm = serde_json::from_value(payload(&env)["metric"].clone()).unwrap();
    let ev = evaluation_form(&"3".parse().unwrap());
    for i in 0..9 {
        assert_eq!(got.value_idx(i), ev.form().value_idx(i));
    }
    assert!(c.checks.iter().all(|c| c.passed));
}

#[test]
fn malformed_group_is_usage_error() {
    let out = finalg(&["group", "info", "--group", "2,x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_verb_is_usage_error() {
    assert_eq!(finalg(&["orth", "shuffle"]).status.code(), Some(2));
}

#[test]
fn group_mismatch_is_usage_error() {
    let (code, env) = envelope(&["orth", "order", "--group", "9", "--form", "ev:3"]);
    assert_eq!(code, 2);
    assert_eq!(env.error.unwrap().kind, "ShapeMismatch");
}

#[test]
fn cap_exits_three_from_flag_and_env() {
    let (code, env) = envelope(&["group", "aut", "--group", "3,3", "--cap", "4"]);
    assert_eq!(code, 3);
    assert_eq!(env.error.unwrap().kind, "CapExceeded");

    let out = Command::new(env!("CARGO_BIN_EXE_finalg"))
        .args(["group", "aut", "--group", "3,3"])
        .env("FINALG_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn no_timing_is_byte_identical() {
    let args = [
        "cohomology",
        "random",
        "--group",
        "2,2",
        "--degree",
        "2",
        "--coeff",
        "muN:4",
        "--samples",
        "6",
    ];
    let a = finalg(&[&args[..], &["--seed", "5", "--no-timing"]].concat());
    let b = finalg(&[&args[..], &["--seed", "5", "--no-timing"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let env: ResultEnvelope = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(env.wall_time_ms, None);
    assert_eq!(env.input.seed, Some(5));

    let c = finalg(&[&args[..], &["--seed", "6", "--no-timing"]].concat());
    assert_ne!(a.stdout, c.stdout, "the seed reaches the sampler");
}

#[test]
fn cohomology_payload_round_trips() {
    let (code, env) = envelope(&["cohomology", "--group", "2", "--degree", "3"]);
    assert_eq!(code, 0);
    let s: CohomologySummary = serde_json::from_value(payload(&env).clone()).unwrap();
    assert_eq!(serde_json::to_value(&s).unwrap(), *payload(&env));

    let (_, compute) = envelope(&["cohomology", "compute", "--group", "2", "--degree", "3", "--no-timing"]);
    assert_eq!(compute.payload, env.payload);
}

#[test]
fn pin_payload_round_trips() {
    let (code, env) = envelope(&["clifford", "pin", "--p", "3", "--dim", "2", "--form", "split"]);
    assert_eq!(code, 0);
    let r: PinReport = serde_json::from_value(payload(&env).clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), *payload(&env));
    assert_eq!(payload(&env)["gamma_order"], 8);
    assert_eq!(payload(&env)["pin_order"], 4);
}

#[test]
fn subgroups_and_forms_round_trip() {
    let (_, env) = envelope(&["group", "subgroups", "--group", "2,2"]);
    let subs: Vec<Subgroup> = serde_json::from_value(payload(&env)["subgroups"].clone()).unwrap();
    assert_eq!(subs.len(), 5);

    let (_, env) = envelope(&["quad", "list", "--group", "2"]);
    let forms: Vec<QuadraticForm> = serde_json::from_value(payload(&env)["forms"].clone()).unwrap();
    assert_eq!(forms.len(), 4);
    for q in &forms {
        q.validate().unwrap();
    }
}

#[test]
fn envelope_is_accepted_back_as_a_job() {
    let (_, env) = envelope(&["quad", "summary", "--form", "split:1,3", "--no-timing"]);
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("jobs.json");
    std::fs::write(&batch, serde_json::to_string(&[&env.input]).unwrap()).unwrap();
    let out = finalg(&["batch", batch.to_str().unwrap(), "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let t: Table = serde_json::from_slice(&out.stdout).unwrap();
    let o = t.column("orthogonal_order").unwrap();
    assert_eq!(t.rows[0][o], payload(&env)["orthogonal_order"].to_string());
}

fn write_form(dir: &Path, q: &QuadraticForm) -> String {
    let path = dir.join("q.json");
    std::fs::write(&path, serde_json::to_string(q).unwrap()).unwrap();
    format!("file:{}", path.display())
}

#[test]
fn form_file_matches_inline_form() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_form(dir.path(), split_form(1, 5).unwrap().form());
    let (_, from_file) = envelope(&["orth", "order", "--form", &spec, "--no-timing"]);
    let (_, inline) = envelope(&["orth", "order", "--form", "split:1,5", "--no-timing"]);
    assert_eq!(from_file.payload, inline.payload);
    assert_eq!(payload(&inline)["order"], 8);
}

#[test]
fn missing_form_file_is_usage_error() {
    let out = finalg(&["orth", "order", "--form", "file:/nonexistent/q.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tau_file_is_read() {
    let l: FiniteAbelianGroup = "2".parse().unwrap();
    let g = Arc::new(FiniteGroup::from_abelian(&l));
    // τ(a,b,c) = abc/2 in Z/2 scalars: the nontrivial class on Z/2
    let values: Vec<u64> = (0..8).map(|i| u64::from(i == 7)).collect();
    let tau = Cochain::new(g, 3, 2, values).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.json");
    std::fs::write(
        &path,
        serde_json::to_string(&CochainFile::from_cochain(&l, &tau)).unwrap(),
    )
    .unwrap();
    let (code, env) = envelope(&["center", "pointed", "--group", "2", "--tau", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{env:?}");
    assert!(payload(&env)["pointed"].is_boolean());

    let (code, env) = envelope(&["center", "pointed", "--group", "4", "--tau", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(env.error.unwrap().kind, "ShapeMismatch");
}

#[test]
fn batch_table_marks_cap_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batch.json");
    let jobs = r#"[
        {"command": "quad summary", "form": "ev:2"},
        {"command": "quad summary", "form": "ev:4", "caps": {"root_order": 1048576, "group_order": 4, "subgroup_order": 256, "table_entries": 16777216}},
        {"command": "quad summary", "form": "split:1,3"}
    ]"#;
    std::fs::write(&path, jobs).unwrap();
    let out = finalg(&["batch", path.to_str().unwrap(), "--tsv", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let t = Table::from_tsv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let s = t.column("status").unwrap();
    let statuses: Vec<&str> = t.rows.iter().map(|r| r[s].as_str()).collect();
    assert_eq!(statuses, ["ok", "ERR:CapExceeded", "ok"]);
    let l = t.column("lagrangian_count").unwrap();
    assert_eq!(t.rows[0][l], "2");
}

#[test]
fn empty_batch_prints_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, "[]").unwrap();
    let out = finalg(&["batch", path.to_str().unwrap(), "--tsv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"job\tcommand\tinput\tstatus\tchecks\n");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = finalg(&[
        "clifford",
        "spinor",
        "--p",
        "3",
        "--m",
        "1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let env: ResultEnvelope = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(payload(&env)["bijective"], true);
}

#[test]
fn lagrangians_without_polarization_are_not_failures() {
    // ⟨(2,0),(0,2)⟩ is Lagrangian in ev on Z/4 but (Z/2)⁴ ≇ (Z/4)²
    let (code, env) = envelope(&["lagrangian", "polarize", "--form", "ev:4"]);
    assert_eq!(code, 0);
    assert_eq!(payload(&env)["lagrangian_count"], 3);
    assert_eq!(payload(&env)["count"], 2);
}
