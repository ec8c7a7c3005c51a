//! Breadth-first construction of the reduction tree and proof assembly.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::branch::{step_branch, BranchState, BranchTrace, Step};
use crate::calculus::{
    check_proof, restricted_cuts, Arg, AxiomInstance, CheckConfig, Closure, OmegaTemplate, Proof, Side,
};
use crate::semantics::{countermodel_from_trace, verify_countermodel, Model};
use crate::syntax::{term_text, Formula, Sequent, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: usize,
    pub omega_width: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 50_000, omega_width: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    Budget,
    UnverifiedModel,
    TruncatedOmega,
    /// The assembled proof failed its own check.
    RejectedProof,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Proved(Proof),
    Refuted { model: Model, branch: BranchTrace },
    Unknown { reason: UnknownReason, open: Vec<BranchTrace> },
}

/// Open branches tried per countermodel round.
const MODEL_ATTEMPTS: usize = 64;
/// Open branches reported with an unknown outcome.
const REPORTED_OPEN: usize = 8;

#[derive(Clone, Debug)]
enum Kind {
    Open,
    Closed(Closure),
    Cut(AxiomInstance, Vec<usize>),
    Rule(&'static str, Formula, Arg, Vec<usize>),
    Omega(Formula, Vec<usize>),
}

struct Node {
    state: BranchState,
    kind: Kind,
}

pub struct Search {
    nodes: Vec<Node>,
    root: Sequent,
    budget: Budget,
    omega_k: u32,
}

/// Expand the reduction tree of `root` until every branch closes, a
/// countermodel is verified, or the budget runs out.
pub fn build_reduction_tree(root: &Sequent, budget: &Budget, omega_k: u32) -> SearchOutcome {
    Search::new(root, budget, omega_k).run()
}

impl Search {
    pub fn new(root: &Sequent, budget: &Budget, omega_k: u32) -> Self {
        Search {
            nodes: vec![Node { state: BranchState::root(root), kind: Kind::Open }],
            root: root.clone(),
            budget: *budget,
            omega_k,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn run(&mut self) -> SearchOutcome {
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        let mut resting: Vec<usize> = Vec::new();
        let mut exhausted = false;
        loop {
            if let Some(found) = self.try_models(queue.iter().chain(&resting).copied()) {
                return found;
            }
            if queue.is_empty() || exhausted {
                break;
            }
            let layer: Vec<usize> = queue.drain(..).collect();
            for (pos, id) in layer.iter().copied().enumerate() {
                if self.nodes.len() >= self.budget.max_nodes {
                    exhausted = true;
                    queue.extend(layer[pos..].iter().copied());
                    break;
                }
                match step_branch(&self.nodes[id].state, self.budget.omega_width) {
                    Step::Closed(c) => self.nodes[id].kind = Kind::Closed(c),
                    Step::Rotated(next) => {
                        let saturated = next.saturated();
                        self.nodes[id].state = next;
                        if saturated {
                            resting.push(id);
                        } else {
                            queue.push_back(id);
                        }
                    }
                    Step::Cut { instance, children } => {
                        let ids = self.add(children, &mut queue);
                        self.nodes[id].kind = Kind::Cut(instance, ids);
                    }
                    Step::Rule { rule, principal, arg, children } => {
                        let ids = self.add(children, &mut queue);
                        self.nodes[id].kind = Kind::Rule(rule, principal, arg, ids);
                    }
                    Step::Omega { principal, children } => {
                        let ids = self.add(children, &mut queue);
                        self.nodes[id].kind = Kind::Omega(principal, ids);
                    }
                }
            }
        }
        let open: Vec<usize> = queue.iter().chain(&resting).copied().collect();
        if open.is_empty() {
            return self.assemble_checked();
        }
        let reason = if exhausted { UnknownReason::Budget } else { UnknownReason::UnverifiedModel };
        SearchOutcome::Unknown { reason, open: self.report(&open) }
    }

    fn add(&mut self, children: Vec<BranchState>, queue: &mut VecDeque<usize>) -> Vec<usize> {
        children
            .into_iter()
            .map(|state| {
                self.nodes.push(Node { state, kind: Kind::Open });
                let id = self.nodes.len() - 1;
                queue.push_back(id);
                id
            })
            .collect()
    }

    fn report(&self, open: &[usize]) -> Vec<BranchTrace> {
        let mut ids = open.to_vec();
        ids.sort_by_key(|id| (std::cmp::Reverse(self.nodes[*id].state.order.len()), *id));
        ids.iter().take(REPORTED_OPEN).map(|id| self.nodes[*id].state.export()).collect()
    }

    /// Longest open branches first; the first model that falsifies the root
    /// wins.
    fn try_models(&self, open: impl Iterator<Item = usize>) -> Option<SearchOutcome> {
        let mut ids: Vec<usize> = open.collect();
        ids.sort_by_key(|id| (std::cmp::Reverse(self.nodes[*id].state.order.len()), *id));
        for id in ids.into_iter().take(MODEL_ATTEMPTS) {
            let s = self.nodes[id].state.sequent();
            if let Ok(model) = countermodel_from_trace(&s.ante, &s.succ) {
                if verify_countermodel(&model, &self.root) {
                    return Some(SearchOutcome::Refuted { model, branch: self.nodes[id].state.export() });
                }
            }
        }
        None
    }

    fn assemble_checked(&self) -> SearchOutcome {
        let proof = match self.assemble(0) {
            Ok(p) => p,
            Err(reason) => return SearchOutcome::Unknown { reason, open: Vec::new() },
        };
        let cfg = CheckConfig { omega_k: self.omega_k };
        if check_proof(&proof, &cfg).is_err() || !restricted_cuts(&proof, &cfg) {
            return SearchOutcome::Unknown { reason: UnknownReason::RejectedProof, open: Vec::new() };
        }
        SearchOutcome::Proved(proof)
    }

    fn assemble(&self, id: usize) -> Result<Proof, UnknownReason> {
        let node = &self.nodes[id];
        let concl = node.state.sequent();
        Ok(match &node.kind {
            Kind::Open => return Err(UnknownReason::Budget),
            Kind::Closed(c) => {
                let leaf = match c {
                    Closure::Id(_) => Proof::leaf(&c.sequent(), "id"),
                    Closure::Axiom(a) => axiom_leaf(a),
                };
                weaken(&concl, leaf, &c.sequent())
            }
            Kind::Cut(inst, children) => {
                let ds = inst.sequent().succ;
                // Q_j = concl with D_j..D_m added on the right
                let with_right = |from: usize| {
                    let mut s = concl.clone();
                    s.succ.splice(0..0, ds[from..].iter().cloned());
                    s
                };
                let mut proof = weaken(&with_right(0), axiom_leaf(inst), &inst.sequent());
                for (j, d) in ds.iter().enumerate() {
                    let child = self.assemble(children[j])?;
                    let mut child_concl = self.nodes[children[j]].state.sequent();
                    child_concl.succ.splice(0..0, ds[j + 1..].iter().cloned());
                    let right = weaken(&child_concl, child, &self.nodes[children[j]].state.sequent());
                    proof = Proof::node(&with_right(j + 1), "cut", vec![proof, right]).with_param("formula", d.to_string());
                }
                proof
            }
            Kind::Rule(rule, principal, arg, children) => {
                let premises = children.iter().map(|c| self.assemble(*c)).collect::<Result<Vec<_>, _>>()?;
                let side = crate::calculus::rule_side(rule).expect("logical rule");
                let doubled = double(&concl, side, principal);
                let mut inner = Proof::node(&doubled, *rule, premises);
                if let Some((k, v)) = arg_param(principal, *arg) {
                    inner = inner.with_param(k, v);
                }
                Proof::node(&concl, if side == Side::Left { "contraction_l" } else { "contraction_r" }, vec![inner])
            }
            Kind::Omega(principal, children) => {
                let doubled = double(&concl, Side::Left, principal);
                let template = self.omega_template(principal, children)?;
                let inner = Proof {
                    omega_template: Some(OmegaTemplate { parameter: "n".into(), template: Box::new(template) }),
                    ..Proof::leaf(&doubled, "bigvee_l")
                };
                Proof::node(&concl, "contraction_l", vec![inner])
            }
        })
    }

    /// Numeral-uniform template from the explored premises, or a truncated
    /// node when they differ.
    fn omega_template(&self, principal: &Formula, children: &[usize]) -> Result<Proof, UnknownReason> {
        let crate::calculus::Shape::BigVee { label, term } = crate::calculus::shape(principal) else {
            unreachable!("omega nodes expand bigvee")
        };
        let hole = hole_text(label, term);
        let mut template: Option<Proof> = None;
        for (n, c) in children.iter().enumerate() {
            let p = self.assemble(*c)?;
            let disjunct = crate::calculus::bigvee_disjunct(label, term, n as u32);
            let t = abstract_formula(&p, &disjunct, &hole);
            match &template {
                None => template = Some(t),
                Some(prev) if *prev == t => {}
                Some(_) => return Err(UnknownReason::TruncatedOmega),
            }
        }
        template.ok_or(UnknownReason::TruncatedOmega)
    }
}

fn hole_text(label: Option<Term>, term: Term) -> String {
    let level = if label.is_some() { crate::syntax::Level::Internal } else { crate::syntax::Level::External };
    let t = term_text(level, &term);
    let (f, c) = if label.is_some() { ("f", "c") } else { ("F", "C") };
    let body = format!("{t} < {f}^{{n}}({c})");
    match label {
        Some(l) => format!("{} : {body}", term_text(crate::syntax::Level::External, &l)),
        None => body,
    }
}

/// Replace every occurrence of `f` in the sequents of `p` by `hole`.
fn abstract_formula(p: &Proof, f: &Formula, hole: &str) -> Proof {
    let seq_text = |text: &str| -> String {
        let Ok(s) = crate::syntax::parse_sequent(text) else { return text.to_string() };
        let show = |g: &Formula| if g.alpha_eq(f) { hole.to_string() } else { g.to_string() };
        let ante: Vec<String> = s.ante.iter().map(show).collect();
        let succ: Vec<String> = s.succ.iter().map(show).collect();
        join_sequent(&ante, &succ)
    };
    let mut q = p.clone();
    q.conclusion = seq_text(&p.conclusion);
    if let Some(v) = q.params.get_mut("formula") {
        if crate::syntax::parse_formula(v).is_ok_and(|g| g.alpha_eq(f)) {
            *v = hole.to_string();
        }
    }
    q.premises = p.premises.iter().map(|x| abstract_formula(x, f, hole)).collect();
    q
}

fn join_sequent(ante: &[String], succ: &[String]) -> String {
    match (ante.is_empty(), succ.is_empty()) {
        (true, true) => "|-".into(),
        (true, false) => format!("|- {}", succ.join(", ")),
        (false, true) => format!("{} |-", ante.join(", ")),
        (false, false) => format!("{} |- {}", ante.join(", "), succ.join(", ")),
    }
}

fn axiom_leaf(a: &AxiomInstance) -> Proof {
    let mut p = Proof::leaf(&a.sequent(), a.rule_id());
    p.params = a.params();
    p
}

/// `proof` of `small`, weakened to `big` when they differ.
fn weaken(big: &Sequent, proof: Proof, small: &Sequent) -> Proof {
    if big.len() == small.len() {
        proof
    } else {
        Proof::node(big, "weakening", vec![proof])
    }
}

fn double(s: &Sequent, side: Side, f: &Formula) -> Sequent {
    let mut d = s.clone();
    match side {
        Side::Left => d.ante.push(f.clone()),
        Side::Right => d.succ.push(f.clone()),
    }
    d
}

fn arg_param(principal: &Formula, arg: Arg) -> Option<(&'static str, String)> {
    let level = crate::calculus::arg_level(principal);
    match arg {
        Arg::None => None,
        Arg::Term(t) => Some(("term", term_text(level, &t))),
        Arg::Var(x) => Some(("var", term_text(level, &Term::var(x)))),
        Arg::Numeral(m) => Some(("m", m.to_string())),
    }
}
