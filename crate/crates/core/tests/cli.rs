use std::fs;
use std::path::Path;

use mtl2::calculus::{Proof, INDUCTION_PROOF_JSON};
use mtl2::cli::run;
use mtl2::engine::BranchTrace;
use mtl2::semantics::{verify_countermodel, Model};
use mtl2::parse_sequent;
use serde_json::Value;

fn mtl2(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mtl2").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_identity_writes_one_node_proof() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("proof.json");
    let (code, text, _) = mtl2(&["prove", "C:c:p0 |- C:c:p0", "--out", path(&out)]);
    assert_eq!(code, 0, "{text}");
    let proof = Proof::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(proof.size(), 1);
    assert_eq!(proof.rule, "id");
}

#[test]
fn prove_unprovable_writes_empty_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("model.toml");
    let (code, _, _) = mtl2(&["prove", "|- C:c:p0", "--out", path(&out)]);
    assert_eq!(code, 1);
    let m = Model::from_toml(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(m.regions.is_empty());
    assert!(verify_countermodel(&m, &parse_sequent("|- C : c : p0").unwrap()));
}

#[test]
fn prove_cofinality_closes_at_once() {
    let (code, text, _) = mtl2(&["prove", "|- bigvee(X0)", "--format", "structured"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "proved");
    assert_eq!(v["proof"]["rule"], "ax:cofinal");
}

#[test]
fn prove_reports_nodes_and_cuts() {
    let (code, text, _) = mtl2(&["prove", "|- exists X0. C < X0 & X0 < F(C)"]);
    assert_eq!(code, 0);
    assert!(text.contains("nodes: "), "{text}");
    assert!(text.contains("cut formulas: "), "{text}");
}

#[test]
fn tiny_budget_gives_unknown() {
    let (code, text, _) =
        mtl2(&["prove", "C : c : Box[0,2] p0 |- C : c : Box[0,1] p0", "--budget-nodes", "3", "--format", "structured"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "unknown");
    assert_eq!(v["reason"], "budget");
    let trace: BranchTrace = serde_json::from_value(v["open"][0].clone()).unwrap();
    assert!(!trace.order.is_empty());
}

#[test]
fn parse_and_usage_errors_exit_3() {
    assert_eq!(mtl2(&["prove", "|- C :"]).0, 3);
    assert_eq!(mtl2(&["prove"]).0, 3);
    assert_eq!(mtl2(&["frobnicate"]).0, 3);
    assert_eq!(mtl2(&["prove", "|- C < F(C)", "--omega-width", "many"]).0, 3);
    assert_eq!(mtl2(&["check", "/nonexistent/proof.json"]).0, 3);
    let (code, _, err) = mtl2(&["fmt", "C : c : q0 |-"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn check_bundled_induction_proof() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("induction.json");
    fs::write(&file, INDUCTION_PROOF_JSON).unwrap();
    let (code, text, _) = mtl2(&["check", path(&file), "--omega-k", "3"]);
    assert_eq!(code, 0, "{text}");
    // the induction proof cuts on boxed formulas, which no axiom provides
    let (code, text, _) = mtl2(&["check", path(&file), "--omega-k", "3", "--require-restricted-cuts"]);
    assert_eq!(code, 1);
    assert!(text.contains("unrestricted cut: C : c : Box[0,"), "{text}");
}

#[test]
fn check_rejects_mutated_rule() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, INDUCTION_PROOF_JSON.replacen("\"and_l\"", "\"and_r\"", 1)).unwrap();
    let (code, text, _) = mtl2(&["check", path(&file)]);
    assert_eq!(code, 1);
    assert!(text.starts_with("invalid: root/0"), "{text}");
}

#[test]
fn check_malformed_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("junk.json");
    fs::write(&file, "{\"rule\": 3}").unwrap();
    assert_eq!(mtl2(&["check", path(&file)]).0, 3);
}

#[test]
fn check_flags_unrestricted_cut() {
    let doc = r#"{
  "conclusion": "C : c : p0 |- C : c : p0",
  "rule": "cut",
  "params": {"formula": "C : c : Box[0,1] p1"},
  "premises": [
    {"conclusion": "C : c : p0 |- C : c : Box[0,1] p1, C : c : p0", "rule": "weakening",
     "premises": [{"conclusion": "C : c : p0 |- C : c : p0", "rule": "id"}]},
    {"conclusion": "C : c : Box[0,1] p1, C : c : p0 |- C : c : p0", "rule": "weakening",
     "premises": [{"conclusion": "C : c : p0 |- C : c : p0", "rule": "id"}]}
  ]
}"#;
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cut.json");
    fs::write(&file, doc).unwrap();
    assert_eq!(mtl2(&["check", path(&file)]).0, 0);
    let (code, text, _) = mtl2(&["check", path(&file), "--require-restricted-cuts"]);
    assert_eq!(code, 1);
    assert!(text.contains("unrestricted cut: C : c : Box[0,1] p1"), "{text}");
}

#[test]
fn pipeline_prove_then_check() {
    let dir = tempfile::tempdir().unwrap();
    for (i, s) in ["C : c : Box[0,2] p0 |- C : c : Box[0,1] p0", "|- C : exists x0. c < x0 & x0 < f(c)"].iter().enumerate() {
        let file = dir.path().join(format!("p{i}.json"));
        assert_eq!(mtl2(&["prove", s, "--out", path(&file)]).0, 0);
        let (code, text, _) = mtl2(&["check", path(&file), "--require-restricted-cuts"]);
        assert_eq!(code, 0, "{s}: {text}");
    }
}

fn model_file(dir: &Path, body: &str) -> String {
    let file = dir.join("m.toml");
    fs::write(&file, body).unwrap();
    file.to_str().unwrap().to_string()
}

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let total = model_file(dir.path(), "[[region]]\nletter = \"p0\"\next = \"[0, oo)\"\nint = \"[0, oo)\"\n");
    assert_eq!(mtl2(&["eval", "|- C : Box[0,1] c : p0", "--model", &total]).0, 0);

    let empty = model_file(dir.path(), "");
    assert_eq!(mtl2(&["eval", "|- C : c : p0", "--model", &empty]).0, 1);

    let chain = model_file(dir.path(), "[[region]]\nletter = \"p0\"\next = \"[0, oo)\"\nint = \"[0, 2]\"\n");
    let (code, text, _) = mtl2(&["eval", "|- C : Box[0,1] c : Box[0,1] p0", "--model", &chain, "--explain"]);
    assert_eq!(code, 0);
    assert_eq!(text, "true\nR C : Box[0,1] c : Box[0,1] p0: true on [0, oo)\n");
}

#[test]
fn eval_structured_explain() {
    let dir = tempfile::tempdir().unwrap();
    let m = model_file(dir.path(), "[[region]]\nletter = \"p0\"\next = \"[0, 1]\"\nint = \"[0, 1]\"\n");
    let (code, text, _) = mtl2(&["eval", "C : c : p0 |- C < F(C)", "--model", &m, "--explain", "--format", "structured"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["formulas"][0]["truth_set"], "[0, 1]");
    assert_eq!(v["formulas"][1]["value"], true);
}

#[test]
fn eval_bad_model_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let m = model_file(dir.path(), "[[region]]\nletter = \"q\"\next = \"[0, 1]\"\nint = \"[0, 1]\"\n");
    assert_eq!(mtl2(&["eval", "|- C < F(C)", "--model", &m]).0, 3);
}

#[test]
fn fmt_prints_canonical_text() {
    assert_eq!(mtl2(&["fmt", "C:c:p0|-"]), (0, "C : c : p0 |-\n".into(), String::new()));
    assert_eq!(mtl2(&["fmt", "|-X0<F(F(C))"]).1, "|- X0 < F^2(C)\n");
    let (_, text, _) = mtl2(&["fmt", "C:c:p0, C=X0 |- C<X0", "--format", "structured"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["antecedent"].as_array().unwrap().len(), 2);
}

#[test]
fn countermodel_from_exported_trace() {
    let (code, text, _) = mtl2(&["prove", "|- C:c:p0", "--format", "structured"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    fs::write(&trace, serde_json::to_string(&v["branch"]).unwrap()).unwrap();
    let out = dir.path().join("m.toml");
    let (code, text, _) = mtl2(&["countermodel", path(&trace), "--out", path(&out)]);
    assert_eq!(code, 0, "{text}");
    let m = Model::from_toml(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(verify_countermodel(&m, &parse_sequent("|- C : c : p0").unwrap()));
}

#[test]
fn countermodel_on_cyclic_order_fails() {
    let trace = BranchTrace {
        antecedent: vec!["X0 < X1".into(), "X1 < X0".into()],
        succedent: vec![],
        order: vec!["L X0 < X1".into(), "L X1 < X0".into()],
        used_terms: Default::default(),
        used_axioms: vec![],
        cursor: 0,
        idle: 0,
        steps: vec![],
    };
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cyclic.json");
    fs::write(&file, serde_json::to_string(&trace).unwrap()).unwrap();
    let (code, text, _) = mtl2(&["countermodel", path(&file)]);
    assert_eq!(code, 1);
    assert!(text.starts_with("no model:"), "{text}");
}

#[test]
fn structured_outputs_reload() {
    let (_, text, _) = mtl2(&["prove", "|- C : c : p0 -> p0", "--format", "structured"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let proof: Proof = serde_json::from_value(v["proof"].clone()).unwrap();
    assert_eq!(proof.conclusion, "|- C : c : p0 -> p0");

    let (_, text, _) = mtl2(&["prove", "|- X0 < F(C)", "--format", "structured"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let m = Model::from_toml(v["model"].as_str().unwrap()).unwrap();
    assert!(verify_countermodel(&m, &parse_sequent("|- X0 < F(C)").unwrap()));
    let trace: BranchTrace = serde_json::from_value(v["branch"].clone()).unwrap();
    assert_eq!(trace.succedent, vec!["X0 < F(C)".to_string()]);
}

#[test]
fn sequent_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.txt");
    fs::write(&file, "|- C < F(C)\n").unwrap();
    assert_eq!(mtl2(&["prove", &format!("@{}", path(&file))]).0, 0);
}
