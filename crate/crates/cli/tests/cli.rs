use serde_json::Value;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orderforge"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = bin();
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("valid json certificate")
}

fn write_temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).expect("writable temp file");
    path.to_string_lossy().into_owned()
}

#[test]
fn recalibrate_produces_the_worked_example() {
    let (code, stdout, _) = run(&["recalibrate", "--n", "3", "--delta", "2", "--a", "2"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["a_prime"], 5);
    assert_eq!(cert["evidence"]["b"], -1);
    assert_eq!(cert["evidence"]["natural_rotation"], "1/3");
    assert_eq!(cert["evidence"]["recalibrated_rotation"], "2/3");
}

#[test]
fn report_certifies_covers_seven_through_twelve() {
    let (code, stdout, _) = run(&["twobridge", "report", "--cf", "2,2,2"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["fraction"], "12/5");
    assert_eq!(
        cert["evidence"]["orderable_covers"],
        serde_json::json!([7, 8, 9, 10, 11, 12])
    );
    assert_eq!(cert["evidence"]["obstruction_bound"]["n"], 6);
}

#[test]
fn rotnum_of_the_identity_is_zero() {
    let path = write_temp("identity_map.json", r#"[["0", "0"]]"#);
    let (code, stdout, _) = run(&["rotnum", "--map", &path]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["translation_number"]["kind"], "exact");
    assert_eq!(cert["evidence"]["translation_number"]["value"], "0");
    assert_eq!(cert["evidence"]["fixed_point"], true);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["twobridge", "report", "--cf", "2,2,2,2,2"];
    let (c1, first, _) = run(&args);
    let (c2, second, _) = run(&args);
    assert_eq!(c1, 2, "two-component link has no cover certification");
    assert_eq!(json(&first)["verdict"], "inconclusive");
    assert_eq!(c1, c2);
    assert_eq!(first, second);
}

#[test]
fn malformed_files_give_exit_three_with_a_position() {
    let path = write_temp("broken_tree.json", "{\"nodes\": [\n  {\"id\": }\n]}");
    let (code, stdout, stderr) = run(&["tree", "ends", "--file", &path]);
    assert_eq!(code, 3);
    assert!(stdout.is_empty());
    assert!(stderr.contains("error:"), "stderr was {stderr:?}");
    assert!(stderr.contains(":2:"), "no line annotation in {stderr:?}");
}

#[test]
fn missing_file_is_invalid_input() {
    let (code, _, stderr) = run(&["rotnum", "--map", "/nonexistent/map.json"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("/nonexistent/map.json"));
}

#[test]
fn indefinite_pairing_is_refuted_with_a_witness() {
    let (code, stdout, _) =
        run(&["twobridge", "lt-definite", "--cf", "4", "--orientation", "reversed", "--n", "4"]);
    assert_eq!(code, 1);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "refuted");
    assert_eq!(cert["evidence"]["verdict"]["kind"], "root-at-endpoint");
}

#[test]
fn undersized_arc_is_unsupported() {
    let (code, stdout, _) =
        run(&["twobridge", "lt-definite", "--cf", "4", "--orientation", "reversed", "--n", "1"]);
    assert_eq!(code, 2);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "unsupported");
}

#[test]
fn trace_test_flips_at_seven() {
    let (code, stdout, _) = run(&["twobridge", "rho-theta", "--n", "6"]);
    assert_eq!(code, 1);
    assert_eq!(json(&stdout)["verdict"], "refuted");
    let (code, stdout, _) = run(&["twobridge", "rho-theta", "--n", "7"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["rotation_claim"], "1/7");
}

#[test]
fn starved_budget_turns_rotnum_inconclusive() {
    let path = write_temp(
        "third_rotation.json",
        r#"[["0", "1/3"], ["1/3", "2/3"], ["2/3", "1"]]"#,
    );
    let (code, stdout, _) = run_env(
        &["rotnum", "--map", &path],
        &[("ORDERFORGE_ITER_BUDGET", "2")],
    );
    assert_eq!(code, 2);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "inconclusive");
    assert_eq!(cert["evidence"]["translation_number"]["kind"], "interval");
    let (code, stdout, _) = run(&["rotnum", "--map", &path]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["translation_number"]["value"], "1/3");
}

#[test]
fn lift_pipeline_certifies_and_refutes() {
    let pres = write_temp(
        "double_cone.json",
        r#"{
            "generators": ["x", "y"],
            "relators": [[["x", 1], ["y", 1], ["x", -1], ["y", -1]]],
            "orbifold_cells": [["x", 7], ["y", 7]]
        }"#,
    );
    let (code, stdout, _) =
        run(&["homology", "lift", "--pres", &pres, "--n", "7", "--values", "x=1,y=1"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["eta"]["x"], "-1");
    assert_eq!(cert["evidence"]["omega"], serde_json::json!(["0", "-1", "-1"]));

    let bad = write_temp(
        "unkilled.json",
        r#"{"generators": ["x"], "relators": [[["x", 1]]], "orbifold_cells": []}"#,
    );
    let (code, stdout, _) =
        run(&["homology", "lift", "--pres", &bad, "--n", "7", "--values", "x=1"]);
    assert_eq!(code, 1);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "refuted");
    assert_eq!(cert["evidence"]["refutation"]["kind"], "relator-not-killed");
}

#[test]
fn detection_pipeline_reports_the_lift_shift() {
    let mu = write_temp("mu_zero.json", r#"[["0", "0"]]"#);
    let alpha = write_temp("alpha_fourth.json", r#"[["0", "9/4"]]"#);
    let (code, stdout, _) = run(&["homology", "detect", "--mu", &mu, "--alpha", &alpha]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "certified");
    assert_eq!(cert["evidence"]["rot_alpha"], "9/4");
    assert_eq!(cert["evidence"]["lift_shift"], "2");
    assert_eq!(cert["evidence"]["fractional"], "1/4");
}

#[test]
fn order_pipeline_validates_and_refutes_tables() {
    let good = write_temp(
        "triangle.json",
        r#"{"elements": ["a", "b", "c"], "triples": [[0, 1, 2, 1]]}"#,
    );
    let (code, stdout, _) = run(&["order", "validate", "--file", &good]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["order"]["listing"], serde_json::json!(["a", "b", "c"]));

    let bad = write_temp(
        "twisted.json",
        r#"{"elements": ["a", "b", "c", "d"],
            "triples": [[0,1,2,1],[0,1,3,1],[0,2,3,1],[1,2,3,-1]]}"#,
    );
    let (code, stdout, _) = run(&["order", "validate", "--file", &bad]);
    assert_eq!(code, 1);
    assert_eq!(json(&stdout)["verdict"], "refuted");
}

#[test]
fn automorphisms_of_a_square_form_the_rotation_group() {
    let square = write_temp(
        "square.json",
        r#"{"elements": ["a", "b", "c", "d"],
            "triples": [[0,1,2,1],[0,1,3,1],[0,2,3,1],[1,2,3,1]]}"#,
    );
    let (code, stdout, _) = run(&["order", "aut", "--file", &square, "--basepoint", "a"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["evidence"]["group_size"], 4);
    assert_eq!(cert["evidence"]["aut_order"]["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn tree_pipelines_share_one_file() {
    let tree = write_temp(
        "wye.json",
        r#"{
            "nodes": [
                {"id": "hub", "tag": "regular"},
                {"id": "p", "tag": "leaf"},
                {"id": "q", "tag": "leaf"},
                {"id": "r", "tag": "leaf"}
            ],
            "edges": [["hub", "p"], ["hub", "q"], ["hub", "r"]],
            "vertex_orders": {"hub": ["p", "q", "r"]}
        }"#,
    );
    let (code, stdout, _) = run(&["tree", "ends", "--file", &tree]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["evidence"]["leaves"], 3);

    let (code, stdout, _) =
        run(&["tree", "spine", "--file", &tree, "--from", "p", "--to", "q"]);
    assert_eq!(code, 0);
    let steps = json(&stdout)["evidence"]["steps"].as_array().unwrap().len();
    assert_eq!(steps, 2);

    let (code, stdout, _) =
        run(&["tree", "y", "--file", &tree, "--x", "p", "--y", "q", "--z", "r"]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["locus"]["node"], "hub");
}

#[test]
fn braid_stats_and_certificates() {
    let (code, stdout, _) = run(&["braid", "stats", "--strands", "2", "--word", "s1 s1"]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["evidence"]["exponent_sum"], 2);
    assert_eq!(cert["evidence"]["closure_components"], 2);

    let (code, stdout, _) = run(&[
        "braid", "fdtc-shift", "--strands", "3", "--word", "s1 s2", "--value", "1/2",
        "--twists", "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["value"], "5/2");

    let (code, stdout, _) = run(&["braid", "hyp-check", "--c", "1"]);
    assert_eq!(code, 1);
    let cert = json(&stdout);
    assert_eq!(cert["verdict"], "refuted");
    let checks = cert["evidence"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passes"] == false));

    let (code, stdout, _) = run(&["braid", "hyp-check", "--slope", "2,3", "--twists", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["coefficient"], "3/2");

    let (code, stdout, _) = run(&[
        "braid", "qp-verify", "--strands", "3", "--target", "s1 s2 S1", "--bands", "s1:2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["verdict"], "certified");

    let (code, stdout, _) = run(&[
        "braid", "qp-verify", "--strands", "3", "--target", "s1", "--bands", ":2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(json(&stdout)["verdict"], "refuted");
}

#[test]
fn tsv_mode_flattens_the_certificate() {
    let (code, stdout, _) =
        run(&["--tsv", "recalibrate", "--n", "3", "--delta", "2", "--a", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("verdict\tcertified"));
    assert!(stdout.contains("evidence.recalibrated_rotation\t2/3"));
    assert!(!stdout.contains('{'));
}

#[test]
fn snf_and_h2_pipelines_agree_on_a_diagonal() {
    let matrix = write_temp("diag23.json", "[[2, 0], [0, 3]]");
    let (code, stdout, _) = run(&["homology", "snf", "--matrix", &matrix]);
    assert_eq!(code, 0);
    let cert = json(&stdout);
    assert_eq!(cert["evidence"]["diagonal"], serde_json::json!(["1", "6"]));
    assert_eq!(cert["evidence"]["cokernel_torsion"], serde_json::json!(["6"]));

    let pres = write_temp(
        "two_cones.json",
        r#"{"generators": ["x", "y"], "relators": [],
            "orbifold_cells": [["x", 2], ["y", 3]]}"#,
    );
    let (code, stdout, _) = run(&["homology", "h2", "--pres", &pres]);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["evidence"]["torsion"], serde_json::json!(["6"]));
}
