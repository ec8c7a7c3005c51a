mod common;

use mtl2::calculus::{check_proof, CheckConfig, Proof};
use mtl2::engine::{build_reduction_tree, Budget, SearchOutcome, UnknownReason};
use mtl2::semantics::eval_sequent;
use mtl2::parse_sequent;

use common::{random_model, rng, INVALID, PROVABLE};

#[test]
fn random_models_separate_invalid_sequents() {
    // the sampled models must be able to falsify what is not valid
    let mut r = rng(9);
    let models: Vec<_> = (0..100).map(|_| random_model(&mut r)).collect();
    let mut survivors = Vec::new();
    for s in INVALID.iter().chain(&["|- X0 < X1", "|- C : x0 < x1", "C : c : p0 |- C : c : p1", "|- X0 : x0 : p0"]) {
        let seq = parse_sequent(s).unwrap();
        if models.iter().all(|m| eval_sequent(&seq, m)) {
            survivors.push(*s);
        }
    }
    assert!(survivors.is_empty(), "{survivors:?}");
}

#[test]
fn emitted_proofs_survive_json() {
    for s in PROVABLE {
        let SearchOutcome::Proved(p) = build_reduction_tree(&parse_sequent(s).unwrap(), &Budget::default(), 3) else {
            panic!("{s} not proved");
        };
        let back = Proof::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        check_proof(&back, &CheckConfig::default()).unwrap();
        assert_eq!(parse_sequent(&p.conclusion).unwrap(), parse_sequent(s).unwrap());
    }
}

#[test]
fn exhausted_budget_is_reported() {
    let s = parse_sequent("C : c : Box[0,2] p0 |- C : c : Box[0,1] p0").unwrap();
    match build_reduction_tree(&s, &Budget { max_nodes: 5, omega_width: 4 }, 3) {
        SearchOutcome::Unknown { reason, open } => {
            assert_eq!(reason, UnknownReason::Budget);
            assert!(!open.is_empty());
        }
        other => panic!("expected unknown, got {other:?}"),
    }
}

#[test]
fn induction_schema_is_not_refuted() {
    // valid but beyond the search budget; any answer other than a refutation is sound
    let s = parse_sequent("|- C : c : p0 & Box[0,oo) (p0 -> Box[0,1] p0) -> Box[0,oo) p0").unwrap();
    let out = build_reduction_tree(&s, &Budget { max_nodes: 500, omega_width: 3 }, 3);
    assert!(!matches!(out, SearchOutcome::Refuted { .. }));
}
