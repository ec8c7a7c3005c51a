//! Open branches of the reduction tree and one expansion step.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{
    bigvee_disjunct, detect_closed, instances_from, match_axiom, rule_premises, shape, term_index, Arg, AxiomInstance,
    Closure, Shape, Side, Universe,
};
use crate::syntax::{parse_formula, parse_sequent, parse_term, term_text, Base, Formula, Level, Sequent, Term};

/// A leaf of the reduction tree: the formulas in their current order plus
/// the bookkeeping that makes the expansion fair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchState {
    pub order: Vec<(Side, Formula)>,
    /// Instantiating terms used per formula. For eigenvariable rules and
    /// the left infinitary rule the set records the single application.
    pub used_terms: BTreeMap<Formula, BTreeSet<Term>>,
    pub used_axioms: BTreeSet<AxiomInstance>,
    /// Number of axiom-enumeration steps taken on this branch.
    pub cursor: u64,
    /// Consecutive steps that only rotated the ordering.
    pub idle: usize,
    pub steps: Vec<String>,
}

/// Result of examining the first formula of a branch.
#[derive(Clone, Debug)]
pub enum Step {
    Closed(Closure),
    /// No node is added; the branch continues with a new ordering.
    Rotated(BranchState),
    Cut { instance: AxiomInstance, children: Vec<BranchState> },
    Rule { rule: &'static str, principal: Formula, arg: Arg, children: Vec<BranchState> },
    /// The left infinitary rule, explored at `0..width`.
    Omega { principal: Formula, children: Vec<BranchState> },
}

impl BranchState {
    /// Ordering: antecedent formulas, then succedent formulas, as written.
    pub fn root(s: &Sequent) -> Self {
        let order =
            s.ante.iter().map(|f| (Side::Left, f.clone())).chain(s.succ.iter().map(|f| (Side::Right, f.clone()))).collect();
        BranchState {
            order,
            used_terms: BTreeMap::new(),
            used_axioms: BTreeSet::new(),
            cursor: 0,
            idle: 0,
            steps: Vec::new(),
        }
    }

    pub fn sequent(&self) -> Sequent {
        let pick = |side| self.order.iter().filter(|(s, _)| *s == side).map(|(_, f)| f.clone()).collect();
        Sequent::new(pick(Side::Left), pick(Side::Right))
    }

    pub fn has(&self, side: Side, f: &Formula) -> bool {
        self.order.iter().any(|(s, g)| *s == side && g.alpha_eq(f))
    }

    /// Two full rotations without an expansion; the second one gives
    /// deferred omega steps their turn.
    pub fn saturated(&self) -> bool {
        self.idle > 2 * self.order.len()
    }

    fn rotated(&self, note: String) -> BranchState {
        let mut b = self.clone();
        let first = b.order.remove(0);
        b.order.push(first);
        b.idle += 1;
        b.steps.push(note);
        b
    }

    /// `A2, ..., Aq, added..., A1`.
    fn child(&self, added: Vec<(Side, Formula)>, note: String) -> BranchState {
        let mut b = self.clone();
        let first = b.order.remove(0);
        b.order.extend(added);
        b.order.push(first);
        b.idle = 0;
        b.steps.push(note);
        b
    }

    fn mark(&mut self, f: &Formula, t: Term) {
        self.used_terms.entry(f.clone()).or_default().insert(t);
    }

    fn used(&self, f: &Formula) -> Option<&BTreeSet<Term>> {
        self.used_terms.get(f)
    }
}

/// Universe of the branch with bound-only variables removed.
fn branch_universe(s: &Sequent) -> Universe {
    let mut u = Universe::of(s.formulas());
    let free = s.free_variables();
    let keep = |level: Level, t: &Term| match t.base {
        Base::Const => true,
        Base::Var(k) => free.level(level).contains(&k),
    };
    u.ext.retain(|t| keep(Level::External, t));
    for set in u.int.values_mut() {
        set.retain(|t| keep(Level::Internal, t));
    }
    u
}

fn fresh_var(s: &Sequent, level: Level) -> u32 {
    let mut used = BTreeSet::new();
    for f in s.formulas() {
        used.extend(f.all_variables().level(level).iter().copied());
    }
    (0..).find(|k| !used.contains(k)).expect("fresh variable")
}

/// Order in which a branch consumes the axiom instances available to it.
fn instance_key(i: &AxiomInstance) -> (u64, usize, crate::calculus::Schema, String) {
    (i.weight(), i.sequent().succ.len(), i.schema, i.to_string())
}

/// Expand the branch at its first formula.
pub fn step_branch(b: &BranchState, omega_width: usize) -> Step {
    let seq = b.sequent();
    if let Some(c) = detect_closed(&seq) {
        return Step::Closed(c);
    }
    let Some((side, a1)) = b.order.first().cloned() else {
        return Step::Rotated(b.rotated("empty".into()));
    };
    if a1.is_reduction_atomic() {
        return extralogical(b, &seq);
    }
    let level_terms = |level: Level, label: Option<Term>| -> Vec<Term> {
        let u = branch_universe(&seq);
        let mut ts: Vec<Term> = match (level, label) {
            (Level::External, _) => u.ext.into_iter().collect(),
            (Level::Internal, Some(l)) => u.int.get(&l).cloned().unwrap_or_default().into_iter().collect(),
            (Level::Internal, None) => vec![Term::CONST],
        };
        ts.sort_by_key(term_index);
        ts
    };
    let (rule, arg): (&'static str, Arg) = match (side, shape(&a1)) {
        (_, Shape::Atomic) => unreachable!("atomic formulas handled above"),
        (Side::Left, Shape::Not(_)) => ("not_l", Arg::None),
        (Side::Right, Shape::Not(_)) => ("not_r", Arg::None),
        (Side::Left, Shape::And(..)) => ("and_l", Arg::None),
        (Side::Right, Shape::And(..)) => ("and_r", Arg::None),
        (Side::Left, Shape::Or(..)) => ("or_l", Arg::None),
        (Side::Right, Shape::Or(..)) => ("or_r", Arg::None),
        (Side::Left, Shape::Imp(..)) => ("imp_l", Arg::None),
        (Side::Right, Shape::Imp(..)) => ("imp_r", Arg::None),
        (Side::Left, Shape::Forall(q)) | (Side::Right, Shape::Exists(q)) => {
            let rule = if side == Side::Left { "forall_l" } else { "exists_r" };
            match next_term(b, &a1, level_terms(q.level(), q.label)) {
                Some(t) => (rule, Arg::Term(t)),
                None => return Step::Rotated(b.rotated(format!("{rule}: no unused term"))),
            }
        }
        (Side::Left, Shape::Box(bx)) => match next_term(b, &a1, level_terms(bx.level(), Some(bx.label))) {
            Some(t) => ("box_l", Arg::Term(t)),
            None => return Step::Rotated(b.rotated("box_l: no unused term".into())),
        },
        (Side::Right, Shape::Forall(q)) | (Side::Left, Shape::Exists(q)) => {
            let rule = if side == Side::Right { "forall_r" } else { "exists_l" };
            if b.used(&a1).is_some() {
                return Step::Rotated(b.rotated(format!("{rule}: applied")));
            }
            (rule, Arg::Var(fresh_var(&seq, q.level())))
        }
        (Side::Right, Shape::Box(bx)) => {
            if b.used(&a1).is_some() {
                return Step::Rotated(b.rotated("box_r: applied".into()));
            }
            ("box_r", Arg::Var(fresh_var(&seq, bx.level())))
        }
        (Side::Right, Shape::BigVee { label, term }) => {
            let m = (0..).find(|m| !b.has(Side::Right, &bigvee_disjunct(label, term, *m))).expect("unused numeral");
            ("bigvee_r", Arg::Numeral(m))
        }
        (Side::Left, Shape::BigVee { label, term }) => return omega(b, a1.clone(), label, term, omega_width),
    };
    let premises = rule_premises(rule, &a1, &Sequent::default(), arg).expect("rule fits the shape");
    let added: Vec<Vec<(Side, Formula)>> = premises
        .into_iter()
        .map(|p| {
            p.ante.into_iter().map(|f| (Side::Left, f)).chain(p.succ.into_iter().map(|f| (Side::Right, f))).collect()
        })
        .collect();
    let mut base = b.clone();
    match arg {
        Arg::Term(t) => base.mark(&a1, t),
        Arg::Var(x) => base.mark(&a1, Term::var(x)),
        _ => {}
    }
    // a premise adding nothing new is the conclusion itself
    if added.iter().any(|fs| fs.iter().all(|(s, f)| b.has(*s, f))) {
        return Step::Rotated(base.rotated(format!("{rule}: nothing new")));
    }
    let note = format!("{rule} on {a1}{}", arg_note(&a1, arg));
    let children = added.into_iter().map(|fs| base.child(fs, note.clone())).collect();
    Step::Rule { rule, principal: a1, arg, children }
}

fn arg_note(a1: &Formula, arg: Arg) -> String {
    let level = crate::calculus::arg_level(a1);
    match arg {
        Arg::None => String::new(),
        Arg::Term(t) => format!(" with {}", term_text(level, &t)),
        Arg::Var(x) => format!(" with {}", term_text(level, &Term::var(x))),
        Arg::Numeral(m) => format!(" with {m}"),
    }
}

fn next_term(b: &BranchState, a1: &Formula, candidates: Vec<Term>) -> Option<Term> {
    let used = b.used(a1);
    candidates.into_iter().find(|t| used.is_none_or(|u| !u.contains(t)))
}

/// Case of an atomic first formula: the next unused axiom instance whose
/// antecedent is present is cut in.
fn extralogical(b: &BranchState, seq: &Sequent) -> Step {
    let u = branch_universe(seq);
    let mut cands: Vec<AxiomInstance> =
        instances_from(&seq.ante, &u).into_iter().filter(|i| !b.used_axioms.contains(i)).collect();
    cands.sort_by_cached_key(instance_key);
    let mut next = b.clone();
    next.cursor += 1;
    // instances whose succedent is already present stay useless as the
    // branch grows, so they are consumed without spending a step
    let mut chosen = None;
    for inst in cands {
        next.used_axioms.insert(inst.clone());
        let succ = inst.sequent().succ;
        if !succ.is_empty() && !succ.iter().any(|d| b.has(Side::Left, d)) {
            chosen = Some((inst, succ));
            break;
        }
    }
    let Some((inst, succ)) = chosen else {
        return Step::Rotated(next.rotated("no unused axiom".into()));
    };
    let note = format!("cut axiom {inst}");
    let children = succ.into_iter().map(|d| next.child(vec![(Side::Left, d)], note.clone())).collect();
    Step::Cut { instance: inst, children }
}

fn omega(b: &BranchState, a1: Formula, label: Option<Term>, term: Term, width: usize) -> Step {
    if b.used(&a1).is_some() || (0..width as u32).any(|n| b.has(Side::Left, &bigvee_disjunct(label, term, n))) {
        return Step::Rotated(b.rotated("bigvee_l: nothing new".into()));
    }
    // infinite branching is a last resort once a full rotation found nothing
    if b.idle < b.order.len() {
        return Step::Rotated(b.rotated("bigvee_l: deferred".into()));
    }
    let mut base = b.clone();
    base.mark(&a1, Term::CONST);
    let note = format!("bigvee_l on {a1}");
    let children =
        (0..width.max(1) as u32).map(|n| base.child(vec![(Side::Left, bigvee_disjunct(label, term, n))], note.clone())).collect();
    Step::Omega { principal: a1, children }
}

/// Serializable view of a branch: the accumulated formulas, their order
/// and the bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchTrace {
    pub antecedent: Vec<String>,
    pub succedent: Vec<String>,
    /// Formulas in order, prefixed by `L ` or `R `.
    pub order: Vec<String>,
    pub used_terms: BTreeMap<String, Vec<String>>,
    pub used_axioms: Vec<AxiomRecord>,
    pub cursor: u64,
    pub idle: usize,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomRecord {
    pub rule: String,
    pub sequent: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Error)]
#[error("cannot import branch: {0}")]
pub struct ImportError(String);

impl BranchState {
    pub fn export(&self) -> BranchTrace {
        let s = self.sequent();
        BranchTrace {
            antecedent: s.ante.iter().map(|f| f.to_string()).collect(),
            succedent: s.succ.iter().map(|f| f.to_string()).collect(),
            order: self
                .order
                .iter()
                .map(|(side, f)| format!("{} {f}", if *side == Side::Left { 'L' } else { 'R' }))
                .collect(),
            used_terms: self
                .used_terms
                .iter()
                .map(|(f, ts)| {
                    let level = crate::calculus::arg_level(f);
                    (f.to_string(), ts.iter().map(|t| term_text(level, t)).collect())
                })
                .collect(),
            used_axioms: self
                .used_axioms
                .iter()
                .map(|i| AxiomRecord { rule: i.rule_id(), sequent: i.sequent().to_string(), params: i.params() })
                .collect(),
            cursor: self.cursor,
            idle: self.idle,
            steps: self.steps.clone(),
        }
    }

    pub fn import(t: &BranchTrace) -> Result<BranchState, ImportError> {
        let err = |m: String| ImportError(m);
        let formula = |s: &str| parse_formula(s).map_err(|e| err(format!("{s}: {e}")));
        let mut order = Vec::new();
        for entry in &t.order {
            let (side, text) = match entry.split_at_checked(2) {
                Some(("L ", rest)) => (Side::Left, rest),
                Some(("R ", rest)) => (Side::Right, rest),
                _ => return Err(err(format!("bad order entry '{entry}'"))),
            };
            order.push((side, formula(text)?));
        }
        let mut used_terms = BTreeMap::new();
        for (f, ts) in &t.used_terms {
            let mut set = BTreeSet::new();
            for x in ts {
                set.insert(parse_term(x).map_err(|e| err(format!("{x}: {e}")))?.1);
            }
            used_terms.insert(formula(f)?, set);
        }
        let mut used_axioms = BTreeSet::new();
        for r in &t.used_axioms {
            let s = parse_sequent(&r.sequent).map_err(|e| err(format!("{}: {e}", r.sequent)))?;
            let inst = match_axiom(&s)
                .into_iter()
                .find(|i| i.rule_id() == r.rule && i.params() == r.params)
                .ok_or_else(|| err(format!("'{}' is not an instance of {}", r.sequent, r.rule)))?;
            used_axioms.insert(inst);
        }
        Ok(BranchState { order, used_terms, used_axioms, cursor: t.cursor, idle: t.idle, steps: t.steps.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(s: &str) -> BranchState {
        BranchState::root(&parse_sequent(s).unwrap())
    }

    #[test]
    fn right_implication_keeps_principal_last() {
        let b = root("|- C : c : p0 -> p1");
        let Step::Rule { rule, children, .. } = step_branch(&b, 4) else { panic!() };
        assert_eq!(rule, "imp_r");
        let order: Vec<String> = children[0].export().order;
        assert_eq!(order, vec!["L C : c : p0", "R C : c : p1", "R C : c : p0 -> p1"]);
    }

    #[test]
    fn left_box_three_children() {
        let b = root("C : c : Box[0,1] p0 |- C : x0 : p1");
        let Step::Rule { rule, arg, children, .. } = step_branch(&b, 4) else { panic!() };
        assert_eq!((rule, arg), ("box_l", Arg::Term(Term::CONST)));
        let added: Vec<String> = children.iter().map(|c| c.export().order[1].clone()).collect();
        assert_eq!(added, vec!["R C : c < c | c = c", "R C : c < f(c) | c = f(c)", "L C : c : p0"]);
    }

    #[test]
    fn right_bigvee_is_an_axiom() {
        let b = root("C : c : p0 |- bigvee(X0)");
        assert!(matches!(step_branch(&b, 4), Step::Closed(Closure::Axiom(_))));
    }

    #[test]
    fn closes_and_roundtrips() {
        assert!(matches!(step_branch(&root("C : c : p0 |- C : c : p0"), 4), Step::Closed(Closure::Id(_))));
        let b = root("C : c : Box[0,1] p0 |- C : c : Box[0,2] p0");
        assert_eq!(BranchState::import(&b.export()).unwrap(), b);
        let Step::Rule { children, .. } = step_branch(&b, 4) else { panic!() };
        let c = &children[0];
        assert_eq!(&BranchState::import(&c.export()).unwrap(), c);
    }

    #[test]
    fn atomic_first_formula_cuts_axiom() {
        let b = root("|- C : c : p0");
        match step_branch(&b, 4) {
            Step::Cut { instance, children } => {
                assert_eq!(children.len(), instance.sequent().succ.len());
                assert_eq!(children[0].cursor, 1);
            }
            other => panic!("{other:?}"),
        }
    }
}
