//! Logical, structural and temporal rules, and single-step validation.

use thiserror::Error;

use crate::syntax::{
    parse_formula, parse_term, sub_multiset, subst_rel, Body, ExternalTemporal, Formula, IntervalSpec, InternalTemporal,
    LabelledAtom, Level, Rel, Sequent, Temporal, Term,
};

use super::axioms::{match_axiom, Schema};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct Violation(pub String);

fn violation<T>(msg: impl Into<String>) -> Result<T, Violation> {
    Err(Violation(msg.into()))
}

/// The principal connective of a sequent formula, at whatever level.
#[derive(Clone, Debug)]
pub enum Shape {
    Atomic,
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Forall(Quant),
    Exists(Quant),
    BigVee { label: Option<Term>, term: Term },
    Box(BoxView),
}

/// A quantified relational formula, external (`label = None`) or internal.
#[derive(Clone, Debug)]
pub struct Quant {
    pub label: Option<Term>,
    pub var: u32,
    pub body: Rel,
}

impl Quant {
    pub fn level(&self) -> Level {
        if self.label.is_some() {
            Level::Internal
        } else {
            Level::External
        }
    }

    pub fn instance(&self, t: &Term) -> Formula {
        Formula::with_rel(self.label, subst_rel(&self.body, self.var, t))
    }
}

#[derive(Clone, Debug)]
pub enum BoxBody {
    Ext(ExternalTemporal),
    Int(InternalTemporal),
}

/// `T : Box alpha` (external) or `T : t : Box eta` (internal).
#[derive(Clone, Debug)]
pub struct BoxView {
    pub label: Term,
    /// `T` for external boxes, `t` for internal ones.
    pub center: Term,
    pub spec: IntervalSpec,
    pub body: BoxBody,
}

fn bound(a: Term, b: Term, closed: bool) -> Rel {
    if closed {
        Rel::le(a, b)
    } else {
        Rel::Lt(a, b)
    }
}

impl BoxView {
    pub fn level(&self) -> Level {
        match self.body {
            BoxBody::Ext(_) => Level::External,
            BoxBody::Int(_) => Level::Internal,
        }
    }

    fn wrap(&self, r: Rel) -> Formula {
        match self.body {
            BoxBody::Ext(_) => Formula::Rel(r),
            BoxBody::Int(_) => Formula::lab_rel(self.label, r),
        }
    }

    pub fn lower(&self, s: Term) -> Formula {
        self.wrap(bound(self.center.apply(self.spec.lower), s, self.spec.lower_closed))
    }

    pub fn upper(&self, s: Term) -> Option<Formula> {
        self.spec.upper.map(|n| self.wrap(bound(s, self.center.apply(n), self.spec.upper_closed)))
    }

    pub fn instance(&self, s: Term) -> Formula {
        match &self.body {
            BoxBody::Ext(a) => Formula::lab_tmp(s, a.clone()),
            BoxBody::Int(e) => Formula::lab_atom(self.label, s, e.clone()),
        }
    }
}

pub fn shape(f: &Formula) -> Shape {
    match f {
        Formula::Rel(r) => rel_shape(None, r),
        Formula::Lab(t, Body::Rel(r)) => rel_shape(Some(*t), r),
        Formula::Lab(big, Body::Temporal(b)) => {
            let big = *big;
            let ext = |x: &ExternalTemporal| Formula::lab_tmp(big, x.clone());
            match b {
                Temporal::Atom(LabelledAtom { label, body }) => {
                    let int = |x: &InternalTemporal| Formula::lab_atom(big, *label, x.clone());
                    match body {
                        Temporal::Atom(_) => Shape::Atomic,
                        Temporal::Not(x) => Shape::Not(int(x)),
                        Temporal::And(x, y) => Shape::And(int(x), int(y)),
                        Temporal::Or(x, y) => Shape::Or(int(x), int(y)),
                        Temporal::Imp(x, y) => Shape::Imp(int(x), int(y)),
                        Temporal::Box(spec, x) => Shape::Box(BoxView {
                            label: big,
                            center: *label,
                            spec: *spec,
                            body: BoxBody::Int((**x).clone()),
                        }),
                    }
                }
                Temporal::Not(x) => Shape::Not(ext(x)),
                Temporal::And(x, y) => Shape::And(ext(x), ext(y)),
                Temporal::Or(x, y) => Shape::Or(ext(x), ext(y)),
                Temporal::Imp(x, y) => Shape::Imp(ext(x), ext(y)),
                Temporal::Box(spec, x) => {
                    Shape::Box(BoxView { label: big, center: big, spec: *spec, body: BoxBody::Ext((**x).clone()) })
                }
            }
        }
    }
}

fn rel_shape(label: Option<Term>, r: &Rel) -> Shape {
    let w = |x: &Rel| Formula::with_rel(label, x.clone());
    match r {
        Rel::Eq(..) | Rel::Lt(..) => Shape::Atomic,
        Rel::Not(a) => Shape::Not(w(a)),
        Rel::And(a, b) => Shape::And(w(a), w(b)),
        Rel::Or(a, b) => Shape::Or(w(a), w(b)),
        Rel::Imp(a, b) => Shape::Imp(w(a), w(b)),
        Rel::Forall(v, b) => Shape::Forall(Quant { label, var: *v, body: (**b).clone() }),
        Rel::Exists(v, b) => Shape::Exists(Quant { label, var: *v, body: (**b).clone() }),
        Rel::BigVee(t) => Shape::BigVee { label, term: *t },
    }
}

/// `t < f^m(c)` at the level given by `label`.
pub fn bigvee_disjunct(label: Option<Term>, t: Term, m: u32) -> Formula {
    Formula::with_rel(label, Rel::Lt(t, Term::constant_iter(m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Argument a rule instance is applied with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arg {
    None,
    Term(Term),
    Var(u32),
    Numeral(u32),
}

/// Logical rules, named `<connective>_<side>`.
pub const LOGICAL_RULES: [&str; 16] = [
    "not_l", "not_r", "and_l", "and_r", "or_l", "or_r", "imp_l", "imp_r", "forall_l", "forall_r", "exists_l",
    "exists_r", "bigvee_r", "box_l", "box_r", "bigvee_l",
];

pub fn rule_side(rule: &str) -> Option<Side> {
    if rule.ends_with("_l") {
        Some(Side::Left)
    } else if rule.ends_with("_r") {
        Some(Side::Right)
    } else {
        None
    }
}

fn with(ctx: &Sequent, left: &[Formula], right: &[Formula]) -> Sequent {
    let mut s = ctx.clone();
    s.ante.extend_from_slice(left);
    s.succ.extend_from_slice(right);
    s
}

/// Premises of a logical rule applied to `principal` in context `ctx`
/// (the conclusion without the principal occurrence). `None` when the rule
/// does not fit the formula's shape or the argument kind.
pub fn rule_premises(rule: &str, principal: &Formula, ctx: &Sequent, arg: Arg) -> Option<Vec<Sequent>> {
    let side = rule_side(rule)?;
    let l = |fs: &[Formula]| with(ctx, fs, &[]);
    let r = |fs: &[Formula]| with(ctx, &[], fs);
    let out = match (rule, shape(principal), arg) {
        ("not_l", Shape::Not(a), Arg::None) => vec![r(&[a])],
        ("not_r", Shape::Not(a), Arg::None) => vec![l(&[a])],
        ("and_l", Shape::And(a, b), Arg::None) => vec![l(&[a, b])],
        ("and_r", Shape::And(a, b), Arg::None) => vec![r(&[a]), r(&[b])],
        ("or_l", Shape::Or(a, b), Arg::None) => vec![l(&[a]), l(&[b])],
        ("or_r", Shape::Or(a, b), Arg::None) => vec![r(&[a, b])],
        ("imp_l", Shape::Imp(a, b), Arg::None) => vec![l(&[b]), r(&[a])],
        ("imp_r", Shape::Imp(a, b), Arg::None) => vec![with(ctx, &[a], &[b])],
        ("forall_l", Shape::Forall(q), Arg::Term(t)) => vec![l(&[q.instance(&t)])],
        ("exists_r", Shape::Exists(q), Arg::Term(t)) => vec![r(&[q.instance(&t)])],
        ("forall_r", Shape::Forall(q), Arg::Var(y)) => vec![r(&[q.instance(&Term::var(y))])],
        ("exists_l", Shape::Exists(q), Arg::Var(y)) => vec![l(&[q.instance(&Term::var(y))])],
        ("bigvee_r", Shape::BigVee { label, term }, Arg::Numeral(m)) => vec![r(&[bigvee_disjunct(label, term, m)])],
        ("bigvee_l", Shape::BigVee { label, term }, Arg::Numeral(m)) => vec![l(&[bigvee_disjunct(label, term, m)])],
        ("box_l", Shape::Box(bx), Arg::Term(s)) => {
            let mut ps = vec![r(&[bx.lower(s)])];
            if let Some(up) = bx.upper(s) {
                ps.push(r(&[up]));
            }
            ps.push(l(&[bx.instance(s)]));
            ps
        }
        ("box_r", Shape::Box(bx), Arg::Var(x)) => {
            let x = Term::var(x);
            let mut ante = vec![bx.lower(x)];
            ante.extend(bx.upper(x));
            vec![with(ctx, &ante, &[bx.instance(x)])]
        }
        _ => return None,
    };
    let _ = side;
    Some(out)
}

/// Level of the argument a rule expects for the given principal formula.
pub fn arg_level(principal: &Formula) -> Level {
    match shape(principal) {
        Shape::Forall(q) | Shape::Exists(q) => q.level(),
        Shape::Box(b) => b.level(),
        _ => Level::External,
    }
}

/// Eigenvariable condition: `x` not free at `level` anywhere in `s`.
pub fn eigen_ok(s: &Sequent, level: Level, x: u32) -> bool {
    !s.free_variables().level(level).contains(&x)
}

fn remove_at(s: &Sequent, side: Side, i: usize) -> Sequent {
    let mut c = s.clone();
    match side {
        Side::Left => c.ante.remove(i),
        Side::Right => c.succ.remove(i),
    };
    c
}

fn parse_arg(rule: &str, params: &std::collections::BTreeMap<String, String>, level: Level) -> Result<Arg, Violation> {
    let term = |key: &str| -> Result<Term, Violation> {
        let txt = params.get(key).ok_or_else(|| Violation(format!("{rule}: missing parameter '{key}'")))?;
        let (lv, t) = parse_term(txt).map_err(|e| Violation(format!("{rule}: {e}")))?;
        if lv != level {
            return violation(format!("{rule}: parameter '{key}' is at the wrong level"));
        }
        Ok(t)
    };
    Ok(match rule {
        "forall_l" | "exists_r" | "box_l" => Arg::Term(term("term")?),
        "forall_r" | "exists_l" | "box_r" => {
            let t = term("var")?;
            match (t.var_index(), t.depth) {
                (Some(k), 0) => Arg::Var(k),
                _ => return violation(format!("{rule}: eigenvariable must be a variable")),
            }
        }
        "bigvee_r" | "bigvee_l" => {
            let txt = params.get("m").ok_or_else(|| Violation(format!("{rule}: missing parameter 'm'")))?;
            Arg::Numeral(txt.parse().map_err(|_| Violation(format!("{rule}: bad numeral '{txt}'")))?)
        }
        _ => Arg::None,
    })
}

/// Validate one inference. Premises are compared as multisets up to
/// alpha-equivalence, so exchange is implicit.
pub fn check_rule(
    conclusion: &Sequent,
    premises: &[Sequent],
    rule: &str,
    params: &std::collections::BTreeMap<String, String>,
) -> Result<(), Violation> {
    match rule {
        "id" => {
            if !premises.is_empty() {
                return violation("id has no premises");
            }
            if conclusion.ante.len() == 1 && conclusion.succ.len() == 1 && conclusion.ante[0].alpha_eq(&conclusion.succ[0]) {
                return Ok(());
            }
            violation("id: conclusion is not A |- A")
        }
        r if r.starts_with("ax:") => {
            if !premises.is_empty() {
                return violation("axioms have no premises");
            }
            let schema = Schema::from_name(&r[3..]).ok_or_else(|| Violation(format!("unknown axiom schema '{}'", &r[3..])))?;
            let found = match_axiom(conclusion);
            let hit = found.iter().filter(|a| a.schema == schema).any(|a| {
                let p = a.params();
                params.iter().all(|(k, v)| k == "var" || p.get(k).is_some_and(|w| same_param(v, w)))
            });
            if hit {
                Ok(())
            } else {
                violation(format!("{r}: conclusion is not an instance with the given parameters"))
            }
        }
        "cut" => {
            let txt = params.get("formula").ok_or_else(|| Violation("cut: missing parameter 'formula'".into()))?;
            let a = parse_formula(txt).map_err(|e| Violation(format!("cut: {e}")))?;
            let expected = [with(conclusion, &[], &[a.clone()]), with(conclusion, &[a], &[])];
            compare(rule, &expected, premises)
        }
        "weakening" => {
            let [p] = premises else { return violation("weakening has one premise") };
            if p.is_sub_multiset_of(conclusion) && p.len() < conclusion.len() {
                Ok(())
            } else {
                violation("weakening: premise is not a proper sub-multiset of the conclusion")
            }
        }
        "exchange" => {
            let [p] = premises else { return violation("exchange has one premise") };
            if p.same_multiset(conclusion) {
                Ok(())
            } else {
                violation("exchange: premise is not a permutation of the conclusion")
            }
        }
        "contraction_l" | "contraction_r" => {
            let [p] = premises else { return violation("contraction has one premise") };
            let (big, small, other_p, other_c) = if rule == "contraction_l" {
                (&p.ante, &conclusion.ante, &p.succ, &conclusion.succ)
            } else {
                (&p.succ, &conclusion.succ, &p.ante, &conclusion.ante)
            };
            let same_other = crate::syntax::multiset_key(other_p) == crate::syntax::multiset_key(other_c);
            let grows_by_dup = big.len() == small.len() + 1
                && sub_multiset(small, big)
                && big.iter().any(|f| {
                    let extra: Vec<Formula> = small.iter().chain(std::iter::once(f)).cloned().collect();
                    crate::syntax::multiset_key(&extra) == crate::syntax::multiset_key(big)
                        && small.iter().any(|g| g.alpha_eq(f))
                });
            if same_other && grows_by_dup {
                Ok(())
            } else {
                violation(format!("{rule}: premise does not duplicate a conclusion formula"))
            }
        }
        _ if LOGICAL_RULES.contains(&rule) => {
            if rule == "bigvee_l" {
                return violation("bigvee_l needs an omega template");
            }
            let side = rule_side(rule).expect("logical rules have a side");
            let list = match side {
                Side::Left => &conclusion.ante,
                Side::Right => &conclusion.succ,
            };
            let mut last = Violation(format!("{rule}: no formula of the right shape"));
            for (i, principal) in list.iter().enumerate() {
                let level = arg_level(principal);
                let arg = match parse_arg(rule, params, level) {
                    Ok(a) => a,
                    Err(e) => {
                        last = e;
                        continue;
                    }
                };
                let ctx = remove_at(conclusion, side, i);
                let Some(expected) = rule_premises(rule, principal, &ctx, arg) else { continue };
                if let Arg::Var(x) = arg {
                    if !eigen_ok(conclusion, level, x) {
                        last = Violation(format!("{rule}: eigenvariable occurs free in the conclusion"));
                        continue;
                    }
                }
                match compare(rule, &expected, premises) {
                    Ok(()) => return Ok(()),
                    Err(e) => last = e,
                }
            }
            Err(last)
        }
        _ => violation(format!("unknown rule '{rule}'")),
    }
}

/// Parameter texts agree, reading terms up to `f^k` notation.
fn same_param(a: &str, b: &str) -> bool {
    a == b || matches!((parse_term(a), parse_term(b)), (Ok(x), Ok(y)) if x == y)
}

fn compare(rule: &str, expected: &[Sequent], premises: &[Sequent]) -> Result<(), Violation> {
    if expected.len() != premises.len() {
        return violation(format!("{rule}: expected {} premises, found {}", expected.len(), premises.len()));
    }
    for (k, (e, p)) in expected.iter().zip(premises).enumerate() {
        if !e.same_multiset(p) {
            return violation(format!("{rule}: premise {k} should be '{e}' but is '{p}'"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;
    use std::collections::BTreeMap;

    fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn external_box_right() {
        let concl = seq("C = C |- C : Box[0,1] (c : p0)");
        let prem = seq("C = C, C <= X0, X0 <= F(C) |- X0 : c : p0");
        assert!(check_rule(&concl, &[prem], "box_r", &params(&[("var", "X0")])).is_ok());
        let concl = seq("X0 = X0 |- C : Box[0,1] (c : p0)");
        let prem = seq("X0 = X0, C <= X0, X0 <= F(C) |- X0 : c : p0");
        let err = check_rule(&concl, &[prem], "box_r", &params(&[("var", "X0")])).unwrap_err();
        assert!(err.0.contains("eigenvariable"));
    }

    #[test]
    fn internal_box_left() {
        let concl = seq("C : c : Box(0,oo) p0 |- C : f(c) : p0");
        let prems = [
            seq("|- C : c < f(c), C : f(c) : p0"),
            seq("C : f(c) : p0 |- C : f(c) : p0"),
        ];
        assert!(check_rule(&concl, &prems, "box_l", &params(&[("term", "f(c)")])).is_ok());
        assert!(check_rule(&concl, &prems, "box_l", &params(&[("term", "F(C)")])).is_err());
    }

    #[test]
    fn cut_and_structural() {
        let concl = seq("C : c : p1 |- C : c : p2");
        let prems = [seq("C : c : p1 |- C : c : p0, C : c : p2"), seq("C : c : p1, C : c : p0 |- C : c : p2")];
        assert!(check_rule(&concl, &prems, "cut", &params(&[("formula", "C : c : p0")])).is_ok());
        assert!(check_rule(&concl, &prems, "cut", &params(&[("formula", "C : c : p1")])).is_err());
        assert!(check_rule(&concl, &[seq("|- C : c : p2")], "weakening", &params(&[])).is_ok());
        assert!(check_rule(&concl, &[concl.clone()], "weakening", &params(&[])).is_err());
        let dup = seq("C : c : p1, C : c : p1 |- C : c : p2");
        assert!(check_rule(&concl, &[dup.clone()], "contraction_l", &params(&[])).is_ok());
        assert!(check_rule(&concl, &[dup], "contraction_r", &params(&[])).is_err());
    }

    #[test]
    fn propositional() {
        let concl = seq("|- C : (c : p0) -> (c : p0)");
        assert!(check_rule(&concl, &[seq("C : c : p0 |- C : c : p0")], "imp_r", &params(&[])).is_ok());
        let concl = seq("|- C : c : p0 -> p1");
        assert!(check_rule(&concl, &[seq("C : c : p0 |- C : c : p1")], "imp_r", &params(&[])).is_ok());
        assert!(check_rule(&concl, &[seq("C : c : p1 |- C : c : p0")], "imp_r", &params(&[])).is_err());
    }

    #[test]
    fn quantifiers() {
        let concl = seq("forall X0. X0 = X0 |- C = C");
        assert!(check_rule(&concl, &[seq("C = C |- C = C")], "forall_l", &params(&[("term", "C")])).is_ok());
        let concl = seq("|- forall X0. X0 = X0");
        assert!(check_rule(&concl, &[seq("|- X3 = X3")], "forall_r", &params(&[("var", "X3")])).is_ok());
        let concl = seq("|- bigvee(X0)");
        assert!(check_rule(&concl, &[seq("|- X0 < F^2(C)")], "bigvee_r", &params(&[("m", "2")])).is_ok());
    }

    #[test]
    fn axiom_leaves() {
        assert!(check_rule(&seq("|- C < F(C)"), &[], "ax:f_inc", &params(&[("X", "C")])).is_ok());
        assert!(check_rule(&seq("|- C < F(C)"), &[], "ax:f_inc", &params(&[("X", "F(C)")])).is_err());
        assert!(check_rule(&seq("|- C < F(C)"), &[], "ax:trans", &params(&[])).is_err());
        assert!(check_rule(&seq("|- C : f(c) < f^2(c)"), &[], "ax:f_inc", &params(&[("X", "f^1(c)"), ("label", "C")])).is_ok());
    }
}
