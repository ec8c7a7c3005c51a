//! The sequent calculus: axioms, rules and proof documents.

mod axioms;
mod induction;
mod proof;
mod rules;

pub use axioms::{
    detect_closed, enumerate_axioms, instances_from, is_axiom_succedent, match_axiom, nth_term, pair, term_index, unpair,
    AxiomInstance, Closure, Schema, TransportBody, Universe,
};
pub use rules::{
    arg_level, bigvee_disjunct, check_rule, eigen_ok, rule_premises, rule_side, shape, Arg, BoxBody, BoxView, Quant,
    Shape, Side, Violation, LOGICAL_RULES,
};
pub use proof::{
    check_proof, cut_formulas, fill_holes, instantiate, restricted_cuts, CheckConfig, OmegaTemplate, PathViolation, Proof,
    Recursion, MAX_RECURSION,
};
pub use induction::{induction_schema_proof, INDUCTION_PROOF_JSON, INDUCTION_SEQUENT};
