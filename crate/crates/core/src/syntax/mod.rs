//! The stratified two-level language.
//!
//! Terms at both levels are `f^k(base)` with a constant or an indexed
//! variable as base, so they are stored in normal form as `(base, depth)`.
//! Which level a [`Term`] or [`Rel`] lives on is fixed by its position in a
//! [`Formula`]: a top-level relational formula and all labels of labelled
//! formulas are external; everything under a label is internal.

mod parse;
mod print;
mod subst;

use std::collections::BTreeSet;

use thiserror::Error;

pub use parse::{parse_formula, parse_sequent, parse_term};
pub use print::{print_sequent, rel_text, term_text, TermDisplay};
pub use subst::{subst_rel, substitute, substitute_checked, Family, Subformulas};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("stratification error: {0}")]
    Stratification(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("invalid interval: {0}")]
    Interval(String),
}

/// Internal (lower-case) or external (upper-case) level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Internal,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Const,
    Var(u32),
}

/// A term `f^depth(base)` in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub base: Base,
    pub depth: u32,
}

impl Term {
    pub const CONST: Term = Term { base: Base::Const, depth: 0 };

    pub fn var(k: u32) -> Self {
        Term { base: Base::Var(k), depth: 0 }
    }

    pub fn constant_iter(k: u32) -> Self {
        Term { base: Base::Const, depth: k }
    }

    /// `f^k(self)`.
    pub fn apply(self, k: u32) -> Self {
        Term { base: self.base, depth: self.depth + k }
    }

    pub fn var_index(&self) -> Option<u32> {
        match self.base {
            Base::Var(k) => Some(k),
            Base::Const => None,
        }
    }

    pub fn has_var(&self, v: u32) -> bool {
        self.base == Base::Var(v)
    }

    /// `self[t/v]`: replacing the base variable composes depths.
    pub fn subst(&self, v: u32, t: &Term) -> Term {
        if self.has_var(v) {
            t.apply(self.depth)
        } else {
            *self
        }
    }

    pub fn denormalize(&self) -> RawTerm {
        let mut raw = match self.base {
            Base::Const => RawTerm::Const,
            Base::Var(k) => RawTerm::Var(k),
        };
        for _ in 0..self.depth {
            raw = RawTerm::Apply(Box::new(raw));
        }
        raw
    }
}

/// A term as a tree of function applications, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Const,
    Var(u32),
    Apply(Box<RawTerm>),
}

pub fn normalize_term(raw: &RawTerm) -> Term {
    let mut depth = 0;
    let mut cur = raw;
    while let RawTerm::Apply(inner) = cur {
        depth += 1;
        cur = inner;
    }
    let base = match cur {
        RawTerm::Const => Base::Const,
        RawTerm::Var(k) => Base::Var(*k),
        RawTerm::Apply(_) => unreachable!(),
    };
    Term { base, depth }
}

/// Bracket shape and offsets of a box operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSpec {
    pub lower: u32,
    pub upper: Option<u32>,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl IntervalSpec {
    pub fn new(lower: u32, upper: Option<u32>, lower_closed: bool, upper_closed: bool) -> Result<Self, SyntaxError> {
        match upper {
            Some(n) if n <= lower => {
                return Err(SyntaxError::Interval(format!("need m < n, got {lower} and {n}")))
            }
            None if upper_closed => {
                return Err(SyntaxError::Interval("an unbounded interval is open above".into()))
            }
            _ => {}
        }
        Ok(IntervalSpec { lower, upper, lower_closed, upper_closed })
    }

    pub fn closed(m: u32, n: u32) -> Self {
        Self::new(m, Some(n), true, true).expect("m < n")
    }

    /// All six bracket shapes for the given offsets (three when `n` is `None`).
    pub fn shapes(m: u32, n: Option<u32>) -> Vec<IntervalSpec> {
        let mut out = Vec::new();
        for lc in [true, false] {
            match n {
                Some(_) => {
                    for uc in [true, false] {
                        out.extend(Self::new(m, n, lc, uc));
                    }
                }
                None => out.extend(Self::new(m, None, lc, false)),
            }
        }
        out
    }
}

/// First-order formulas over `<`, `=`, `f`, `c` plus the cofinality
/// disjunction `bigvee(t)`, meaning `t < f^n(c)` for some `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq(Term, Term),
    Lt(Term, Term),
    Not(Box<Rel>),
    And(Box<Rel>, Box<Rel>),
    Or(Box<Rel>, Box<Rel>),
    Imp(Box<Rel>, Box<Rel>),
    Forall(u32, Box<Rel>),
    Exists(u32, Box<Rel>),
    BigVee(Term),
}

impl Rel {
    /// `s <= t`, which abbreviates `s < t | s = t`.
    pub fn le(s: Term, t: Term) -> Rel {
        Rel::Or(Box::new(Rel::Lt(s, t)), Box::new(Rel::Eq(s, t)))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Rel::Eq(..) | Rel::Lt(..))
    }

    pub fn terms(&self, out: &mut Vec<Term>) {
        match self {
            Rel::Eq(a, b) | Rel::Lt(a, b) => {
                out.push(*a);
                out.push(*b);
            }
            Rel::Not(a) | Rel::Forall(_, a) | Rel::Exists(_, a) => a.terms(out),
            Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => {
                a.terms(out);
                b.terms(out);
            }
            Rel::BigVee(t) => out.push(*t),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Rel::Eq(..) | Rel::Lt(..) | Rel::BigVee(_) => 0,
            Rel::Not(a) => a.quantifier_depth(),
            Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Rel::Forall(_, a) | Rel::Exists(_, a) => 1 + a.quantifier_depth(),
        }
    }

    pub fn max_depth(&self) -> u32 {
        let mut ts = Vec::new();
        self.terms(&mut ts);
        ts.iter().map(|t| t.depth).max().unwrap_or(0)
    }
}

/// Propositional letter `p_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

/// Propositional metric-temporal formulas over atoms `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Temporal<A> {
    Atom(A),
    Not(Box<Temporal<A>>),
    And(Box<Temporal<A>>, Box<Temporal<A>>),
    Or(Box<Temporal<A>>, Box<Temporal<A>>),
    Imp(Box<Temporal<A>>, Box<Temporal<A>>),
    Box(IntervalSpec, Box<Temporal<A>>),
}

impl<A> Temporal<A> {
    pub fn depth(&self) -> usize {
        match self {
            Temporal::Atom(_) => 0,
            Temporal::Not(a) | Temporal::Box(_, a) => 1 + a.depth(),
            Temporal::And(a, b) | Temporal::Or(a, b) | Temporal::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn atoms<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            Temporal::Atom(a) => out.push(a),
            Temporal::Not(a) | Temporal::Box(_, a) => a.atoms(out),
            Temporal::And(a, b) | Temporal::Or(a, b) | Temporal::Imp(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> B) -> Temporal<B> {
        match self {
            Temporal::Atom(a) => Temporal::Atom(f(a)),
            Temporal::Not(a) => Temporal::Not(Box::new(a.map_atoms(f))),
            Temporal::And(a, b) => Temporal::And(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Temporal::Or(a, b) => Temporal::Or(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Temporal::Imp(a, b) => Temporal::Imp(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Temporal::Box(s, a) => Temporal::Box(*s, Box::new(a.map_atoms(f))),
        }
    }
}

pub type InternalTemporal = Temporal<Letter>;

/// `t : psi`, the atoms of external temporal formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledAtom {
    pub label: Term,
    pub body: InternalTemporal,
}

pub type ExternalTemporal = Temporal<LabelledAtom>;

/// What an external label may decorate: an external temporal formula or an
/// internal relational formula, never a mixture.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Body {
    Temporal(ExternalTemporal),
    Rel(Rel),
}

/// A formula that may appear in a sequent: external relational, or an
/// external label applied to a [`Body`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Rel(Rel),
    Lab(Term, Body),
}

impl Formula {
    pub fn lab_rel(label: Term, rel: Rel) -> Self {
        Formula::Lab(label, Body::Rel(rel))
    }

    pub fn lab_tmp(label: Term, body: ExternalTemporal) -> Self {
        Formula::Lab(label, Body::Temporal(body))
    }

    /// `T : t : psi`.
    pub fn lab_atom(label: Term, inner: Term, body: InternalTemporal) -> Self {
        Formula::Lab(label, Body::Temporal(Temporal::Atom(LabelledAtom { label: inner, body })))
    }

    /// Atomic in the sense of the reduction procedure: a relational atom
    /// (possibly labelled) or `T : t : p`.
    pub fn is_reduction_atomic(&self) -> bool {
        match self {
            Formula::Rel(r) | Formula::Lab(_, Body::Rel(r)) => r.is_atomic(),
            Formula::Lab(_, Body::Temporal(Temporal::Atom(a))) => matches!(a.body, Temporal::Atom(_)),
            Formula::Lab(..) => false,
        }
    }

    /// The relational formula and, for labelled ones, its external label.
    pub fn as_rel(&self) -> Option<(Option<Term>, &Rel)> {
        match self {
            Formula::Rel(r) => Some((None, r)),
            Formula::Lab(t, Body::Rel(r)) => Some((Some(*t), r)),
            _ => None,
        }
    }

    /// Re-wrap a relational formula at the same level and label as `self`.
    pub fn with_rel(label: Option<Term>, rel: Rel) -> Formula {
        match label {
            None => Formula::Rel(rel),
            Some(t) => Formula::lab_rel(t, rel),
        }
    }

    /// Free variables, internal and external reported separately.
    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        match self {
            Formula::Rel(r) => subst::rel_free_vars(r, &mut Vec::new(), &mut fv.external),
            Formula::Lab(t, body) => {
                fv.external.extend(t.var_index());
                match body {
                    Body::Rel(r) => subst::rel_free_vars(r, &mut Vec::new(), &mut fv.internal),
                    Body::Temporal(b) => {
                        let mut atoms = Vec::new();
                        b.atoms(&mut atoms);
                        fv.internal.extend(atoms.iter().filter_map(|a| a.label.var_index()));
                    }
                }
            }
        }
        fv
    }

    /// All variable indices occurring anywhere (free or bound) per level.
    pub fn all_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        match self {
            Formula::Rel(r) => subst::rel_all_vars(r, &mut fv.external),
            Formula::Lab(t, body) => {
                fv.external.extend(t.var_index());
                match body {
                    Body::Rel(r) => subst::rel_all_vars(r, &mut fv.internal),
                    Body::Temporal(b) => {
                        let mut atoms = Vec::new();
                        b.atoms(&mut atoms);
                        fv.internal.extend(atoms.iter().filter_map(|a| a.label.var_index()));
                    }
                }
            }
        }
        fv
    }

    /// Representative of the alpha-equivalence class: bound variables are
    /// renamed by binder depth.
    pub fn alpha_key(&self) -> Formula {
        match self {
            Formula::Rel(r) => Formula::Rel(subst::alpha_rel(r, &mut Vec::new())),
            Formula::Lab(t, Body::Rel(r)) => Formula::lab_rel(*t, subst::alpha_rel(r, &mut Vec::new())),
            other => other.clone(),
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.alpha_key() == other.alpha_key()
    }

    /// External terms occurring in the formula (labels and external atoms).
    pub fn external_terms(&self, out: &mut Vec<Term>) {
        match self {
            Formula::Rel(r) => r.terms(out),
            Formula::Lab(t, _) => out.push(*t),
        }
    }

    /// Internal terms together with the external label they occur under.
    pub fn internal_terms(&self, out: &mut Vec<(Term, Term)>) {
        if let Formula::Lab(label, body) = self {
            match body {
                Body::Rel(r) => {
                    let mut ts = Vec::new();
                    r.terms(&mut ts);
                    out.extend(ts.into_iter().map(|t| (*label, t)));
                }
                Body::Temporal(b) => {
                    let mut atoms = Vec::new();
                    b.atoms(&mut atoms);
                    out.extend(atoms.into_iter().map(|a| (*label, a.label)));
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub external: BTreeSet<u32>,
    pub internal: BTreeSet<u32>,
}

impl FreeVars {
    pub fn extend(&mut self, other: FreeVars) {
        self.external.extend(other.external);
        self.internal.extend(other.internal);
    }

    pub fn level(&self, level: Level) -> &BTreeSet<u32> {
        match level {
            Level::Internal => &self.internal,
            Level::External => &self.external,
        }
    }
}

/// `A1, ..., Am |- B1, ..., Bn`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Self {
        Sequent { ante, succ }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        for f in self.formulas() {
            fv.extend(f.free_variables());
        }
        fv
    }

    /// Multiset equality up to alpha-equivalence, ignoring order.
    pub fn same_multiset(&self, other: &Sequent) -> bool {
        multiset_key(&self.ante) == multiset_key(&other.ante) && multiset_key(&self.succ) == multiset_key(&other.succ)
    }

    /// Whether `self` is obtained from `other` by weakening (sub-multisets).
    pub fn is_sub_multiset_of(&self, other: &Sequent) -> bool {
        sub_multiset(&self.ante, &other.ante) && sub_multiset(&self.succ, &other.succ)
    }

    pub fn len(&self) -> usize {
        self.ante.len() + self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn multiset_key(fs: &[Formula]) -> Vec<Formula> {
    let mut keys: Vec<Formula> = fs.iter().map(Formula::alpha_key).collect();
    keys.sort();
    keys
}

pub fn sub_multiset(small: &[Formula], big: &[Formula]) -> bool {
    let mut pool = multiset_key(big);
    for f in small {
        let k = f.alpha_key();
        match pool.binary_search(&k) {
            Ok(i) => {
                pool.remove(i);
            }
            Err(_) => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms() {
        let ffc = RawTerm::Apply(Box::new(RawTerm::Apply(Box::new(RawTerm::Const))));
        assert_eq!(normalize_term(&ffc), Term { base: Base::Const, depth: 2 });
        assert_eq!(normalize_term(&RawTerm::Var(3)), Term::var(3));
        let fffc = Term::constant_iter(3);
        assert_eq!(normalize_term(&fffc.denormalize()), fffc);
        assert_eq!(fffc.denormalize(), RawTerm::Apply(Box::new(ffc)));
    }

    #[test]
    fn interval_spec_invariants() {
        assert!(IntervalSpec::new(1, Some(1), true, true).is_err());
        assert!(IntervalSpec::new(0, None, true, true).is_err());
        assert_eq!(IntervalSpec::shapes(0, Some(2)).len(), 4);
        assert_eq!(IntervalSpec::shapes(1, None).len(), 2);
    }

    #[test]
    fn free_variables_by_level() {
        let f = parse_formula("X0 : x1 : p0").unwrap();
        let fv = f.free_variables();
        assert_eq!(fv.external, BTreeSet::from([0]));
        assert_eq!(fv.internal, BTreeSet::from([1]));

        let g = parse_formula("C : forall x0. x0 < x1").unwrap();
        assert_eq!(g.free_variables().internal, BTreeSet::from([1]));

        let h = parse_formula("C < F(C)").unwrap();
        assert!(h.free_variables().external.is_empty());
    }
}
