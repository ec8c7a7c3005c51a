//! Capture-avoiding substitution, alpha keys and subformula families.

use std::collections::BTreeSet;

use super::{Body, Formula, Level, Rel, SyntaxError, Temporal, Term};

/// Bound variables are renamed to indices from here up in alpha keys.
const ALPHA_BASE: u32 = u32::MAX / 2;

pub(crate) fn rel_free_vars(r: &Rel, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
    match r {
        Rel::Eq(a, b) | Rel::Lt(a, b) => {
            for t in [a, b] {
                if let Some(k) = t.var_index() {
                    if !bound.contains(&k) {
                        out.insert(k);
                    }
                }
            }
        }
        Rel::BigVee(t) => {
            if let Some(k) = t.var_index() {
                if !bound.contains(&k) {
                    out.insert(k);
                }
            }
        }
        Rel::Not(a) => rel_free_vars(a, bound, out),
        Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => {
            rel_free_vars(a, bound, out);
            rel_free_vars(b, bound, out);
        }
        Rel::Forall(v, a) | Rel::Exists(v, a) => {
            bound.push(*v);
            rel_free_vars(a, bound, out);
            bound.pop();
        }
    }
}

pub(crate) fn rel_all_vars(r: &Rel, out: &mut BTreeSet<u32>) {
    let mut ts = Vec::new();
    r.terms(&mut ts);
    out.extend(ts.iter().filter_map(Term::var_index));
    collect_binders(r, out);
}

fn collect_binders(r: &Rel, out: &mut BTreeSet<u32>) {
    match r {
        Rel::Forall(v, a) | Rel::Exists(v, a) => {
            out.insert(*v);
            collect_binders(a, out);
        }
        Rel::Not(a) => collect_binders(a, out),
        Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => {
            collect_binders(a, out);
            collect_binders(b, out);
        }
        _ => {}
    }
}

pub(crate) fn alpha_rel(r: &Rel, env: &mut Vec<(u32, u32)>) -> Rel {
    let rename = |t: &Term, env: &Vec<(u32, u32)>| -> Term {
        match t.var_index() {
            Some(k) => match env.iter().rev().find(|(from, _)| *from == k) {
                Some((_, to)) => Term::var(*to).apply(t.depth),
                None => *t,
            },
            None => *t,
        }
    };
    match r {
        Rel::Eq(a, b) => Rel::Eq(rename(a, env), rename(b, env)),
        Rel::Lt(a, b) => Rel::Lt(rename(a, env), rename(b, env)),
        Rel::BigVee(t) => Rel::BigVee(rename(t, env)),
        Rel::Not(a) => Rel::Not(Box::new(alpha_rel(a, env))),
        Rel::And(a, b) => Rel::And(Box::new(alpha_rel(a, env)), Box::new(alpha_rel(b, env))),
        Rel::Or(a, b) => Rel::Or(Box::new(alpha_rel(a, env)), Box::new(alpha_rel(b, env))),
        Rel::Imp(a, b) => Rel::Imp(Box::new(alpha_rel(a, env)), Box::new(alpha_rel(b, env))),
        Rel::Forall(v, a) | Rel::Exists(v, a) => {
            let to = ALPHA_BASE + env.len() as u32;
            env.push((*v, to));
            let body = Box::new(alpha_rel(a, env));
            env.pop();
            if matches!(r, Rel::Forall(..)) {
                Rel::Forall(to, body)
            } else {
                Rel::Exists(to, body)
            }
        }
    }
}

/// `r[t/v]` on one level, renaming binders that would capture `t`.
pub fn subst_rel(r: &Rel, v: u32, t: &Term) -> Rel {
    match r {
        Rel::Eq(a, b) => Rel::Eq(a.subst(v, t), b.subst(v, t)),
        Rel::Lt(a, b) => Rel::Lt(a.subst(v, t), b.subst(v, t)),
        Rel::BigVee(a) => Rel::BigVee(a.subst(v, t)),
        Rel::Not(a) => Rel::Not(Box::new(subst_rel(a, v, t))),
        Rel::And(a, b) => Rel::And(Box::new(subst_rel(a, v, t)), Box::new(subst_rel(b, v, t))),
        Rel::Or(a, b) => Rel::Or(Box::new(subst_rel(a, v, t)), Box::new(subst_rel(b, v, t))),
        Rel::Imp(a, b) => Rel::Imp(Box::new(subst_rel(a, v, t)), Box::new(subst_rel(b, v, t))),
        Rel::Forall(y, a) | Rel::Exists(y, a) => {
            let forall = matches!(r, Rel::Forall(..));
            let wrap = |y, body| if forall { Rel::Forall(y, Box::new(body)) } else { Rel::Exists(y, Box::new(body)) };
            if *y == v {
                return r.clone();
            }
            let mut free = BTreeSet::new();
            rel_free_vars(a, &mut Vec::new(), &mut free);
            if !free.contains(&v) {
                return r.clone();
            }
            if t.has_var(*y) {
                let mut avoid = BTreeSet::new();
                rel_all_vars(a, &mut avoid);
                avoid.insert(v);
                avoid.extend(t.var_index());
                let fresh = (0..).find(|k| !avoid.contains(k)).expect("fresh index");
                let renamed = subst_rel(a, *y, &Term::var(fresh));
                wrap(fresh, subst_rel(&renamed, v, t))
            } else {
                wrap(*y, subst_rel(a, v, t))
            }
        }
    }
}

/// Substitute the variable `v` of the given level by `t` (a term of the same
/// level) throughout the formula.
pub fn substitute(f: &Formula, level: Level, v: u32, t: &Term) -> Formula {
    match (f, level) {
        (Formula::Rel(r), Level::External) => Formula::Rel(subst_rel(r, v, t)),
        (Formula::Rel(_), Level::Internal) => f.clone(),
        (Formula::Lab(s, body), Level::External) => Formula::Lab(s.subst(v, t), body.clone()),
        (Formula::Lab(s, Body::Rel(r)), Level::Internal) => Formula::lab_rel(*s, subst_rel(r, v, t)),
        (Formula::Lab(s, Body::Temporal(b)), Level::Internal) => {
            let body = b.map_atoms(&mut |a| super::LabelledAtom { label: a.label.subst(v, t), body: a.body.clone() });
            Formula::lab_tmp(*s, body)
        }
    }
}

/// Checked variant taking explicitly levelled variable and term.
pub fn substitute_checked(
    f: &Formula,
    var_level: Level,
    v: u32,
    term_level: Level,
    t: &Term,
) -> Result<Formula, SyntaxError> {
    if var_level != term_level {
        return Err(SyntaxError::LevelMismatch(format!(
            "cannot substitute a {term_level:?} term for a {var_level:?} variable"
        )));
    }
    Ok(substitute(f, var_level, v, t))
}

/// An infinite family of subformulas, produced on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Instances `phi[t/v]` of a quantified formula, under an optional label.
    Instances { label: Option<Term>, var: u32, body: Rel },
    /// Disjuncts `t < f^k(c)` of `bigvee(t)`, under an optional label.
    Disjuncts { label: Option<Term>, term: Term },
}

impl Family {
    pub fn instance(&self, t: &Term) -> Option<Formula> {
        match self {
            Family::Instances { label, var, body } => Some(Formula::with_rel(*label, subst_rel(body, *var, t))),
            Family::Disjuncts { .. } => None,
        }
    }

    pub fn disjunct(&self, k: u32) -> Option<Formula> {
        match self {
            Family::Disjuncts { label, term } => Some(Formula::with_rel(*label, Rel::Lt(*term, Term::constant_iter(k)))),
            Family::Instances { .. } => None,
        }
    }
}

/// Finite part of the subformula set plus the infinite families.
#[derive(Clone, Debug, Default)]
pub struct Subformulas {
    pub finite: Vec<Formula>,
    pub families: Vec<Family>,
}

impl Subformulas {
    pub fn of(f: &Formula) -> Self {
        let mut out = Subformulas::default();
        match f {
            Formula::Rel(r) => out.rel(None, r),
            Formula::Lab(s, Body::Rel(r)) => out.rel(Some(*s), r),
            Formula::Lab(s, Body::Temporal(b)) => out.ext(*s, b),
        }
        out
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.finite.iter().any(|g| g.alpha_eq(f))
    }

    fn rel(&mut self, label: Option<Term>, r: &Rel) {
        self.finite.push(Formula::with_rel(label, r.clone()));
        match r {
            Rel::Eq(..) | Rel::Lt(..) => {}
            Rel::BigVee(t) => self.families.push(Family::Disjuncts { label, term: *t }),
            Rel::Not(a) => self.rel(label, a),
            Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => {
                self.rel(label, a);
                self.rel(label, b);
            }
            Rel::Forall(v, a) | Rel::Exists(v, a) => {
                self.families.push(Family::Instances { label, var: *v, body: (**a).clone() });
                if let Rel::BigVee(t) = &**a {
                    if t.has_var(*v) {
                        self.families.push(Family::Disjuncts { label, term: *t });
                    }
                }
            }
        }
    }

    fn ext(&mut self, s: Term, b: &super::ExternalTemporal) {
        self.finite.push(Formula::lab_tmp(s, b.clone()));
        match b {
            Temporal::Atom(a) => self.int(s, a.label, &a.body),
            Temporal::Not(a) | Temporal::Box(_, a) => self.ext(s, a),
            Temporal::And(a, c) | Temporal::Or(a, c) | Temporal::Imp(a, c) => {
                self.ext(s, a);
                self.ext(s, c);
            }
        }
    }

    fn int(&mut self, s: Term, t: Term, b: &super::InternalTemporal) {
        let f = Formula::lab_atom(s, t, b.clone());
        if !self.finite.contains(&f) {
            self.finite.push(f);
        }
        match b {
            Temporal::Atom(_) => {}
            Temporal::Not(a) | Temporal::Box(_, a) => self.int(s, t, a),
            Temporal::And(a, c) | Temporal::Or(a, c) | Temporal::Imp(a, c) => {
                self.int(s, t, a);
                self.int(s, t, c);
            }
        }
    }
}
