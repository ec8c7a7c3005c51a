//! Axiom schemas and their instances.
//!
//! Every extralogical and equality schema exists at the external level and,
//! decorated with an external label, at the internal level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{rel_text, term_text, Body, Formula, LabelledAtom, Level, Rel, Sequent, Temporal, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    EqRefl,
    EqCong,
    Transport,
    Irrefl,
    Trans,
    Total,
    Least,
    Dense,
    FInc,
    FMono,
    Cofinal,
}

impl Schema {
    pub const ALL: [Schema; 11] = [
        Schema::EqRefl,
        Schema::EqCong,
        Schema::Transport,
        Schema::Irrefl,
        Schema::Trans,
        Schema::Total,
        Schema::Least,
        Schema::Dense,
        Schema::FInc,
        Schema::FMono,
        Schema::Cofinal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Schema::EqRefl => "eq_refl",
            Schema::EqCong => "eq_cong",
            Schema::Transport => "transport",
            Schema::Irrefl => "irrefl",
            Schema::Trans => "trans",
            Schema::Total => "total",
            Schema::Least => "least",
            Schema::Dense => "dense",
            Schema::FInc => "f_inc",
            Schema::FMono => "f_mono",
            Schema::Cofinal => "cofinal",
        }
    }

    pub fn from_name(s: &str) -> Option<Schema> {
        Schema::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Number of term arguments.
    pub fn arity(&self) -> usize {
        match self {
            Schema::EqRefl | Schema::Irrefl | Schema::Least | Schema::FInc | Schema::Cofinal => 1,
            Schema::EqCong | Schema::Transport | Schema::Total | Schema::Dense | Schema::FMono => 2,
            Schema::Trans => 3,
        }
    }
}

/// What the transport schema `T = S, T : eta |- S : eta` carries: a letter
/// at an internal term, or an internal relational atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransportBody {
    Letter(Term, u32),
    Atom(Rel),
}

impl TransportBody {
    fn under(&self, label: Term) -> Formula {
        match self {
            TransportBody::Letter(t, p) => Formula::lab_atom(label, *t, Temporal::Atom(crate::syntax::Letter(*p))),
            TransportBody::Atom(r) => Formula::lab_rel(label, r.clone()),
        }
    }

    fn of(f: &Formula) -> Option<(Term, TransportBody)> {
        match f {
            Formula::Lab(s, Body::Temporal(Temporal::Atom(LabelledAtom { label, body: Temporal::Atom(p) }))) => {
                Some((*s, TransportBody::Letter(*label, p.0)))
            }
            Formula::Lab(s, Body::Rel(r)) if r.is_atomic() => Some((*s, TransportBody::Atom(r.clone()))),
            _ => None,
        }
    }
}

/// A concrete axiom. `label` is `Some(T)` for internal versions. For the
/// transport schema `args` are the external terms `T, S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxiomInstance {
    pub schema: Schema,
    pub label: Option<Term>,
    pub args: Vec<Term>,
    /// Congruence: the atomic formula and its distinguished variable.
    pub rho: Option<(Rel, u32)>,
    pub eta: Option<TransportBody>,
}

fn lt(a: Term, b: Term) -> Rel {
    Rel::Lt(a, b)
}

fn eq(a: Term, b: Term) -> Rel {
    Rel::Eq(a, b)
}

/// Least variable index not used by the given terms.
fn fresh_for(ts: &[Term], extra: &BTreeSet<u32>) -> u32 {
    (0..).find(|k| !extra.contains(k) && !ts.iter().any(|t| t.has_var(*k))).expect("fresh index")
}

impl AxiomInstance {
    pub fn new(schema: Schema, label: Option<Term>, args: Vec<Term>) -> Self {
        AxiomInstance { schema, label, args, rho: None, eta: None }
    }

    pub fn is_internal(&self) -> bool {
        self.label.is_some()
    }

    fn level(&self) -> Level {
        if self.schema == Schema::Transport || self.label.is_none() {
            Level::External
        } else {
            Level::Internal
        }
    }

    /// The density witness variable.
    pub fn dense_var(&self) -> u32 {
        fresh_for(&self.args, &BTreeSet::new())
    }

    pub fn sequent(&self) -> Sequent {
        let w = |r: Rel| Formula::with_rel(self.label, r);
        let a = &self.args;
        let (ante, succ) = match self.schema {
            Schema::EqRefl => (vec![], vec![w(eq(a[0], a[0]))]),
            Schema::EqCong => {
                let (rho, z) = self.rho.as_ref().expect("congruence carries rho");
                let before = crate::syntax::subst_rel(rho, *z, &a[0]);
                let after = crate::syntax::subst_rel(rho, *z, &a[1]);
                (vec![w(eq(a[0], a[1])), w(before)], vec![w(after)])
            }
            Schema::Transport => {
                let eta = self.eta.as_ref().expect("transport carries eta");
                (vec![Formula::Rel(eq(a[0], a[1])), eta.under(a[0])], vec![eta.under(a[1])])
            }
            Schema::Irrefl => (vec![w(lt(a[0], a[0]))], vec![]),
            Schema::Trans => (vec![w(lt(a[0], a[1])), w(lt(a[1], a[2]))], vec![w(lt(a[0], a[2]))]),
            Schema::Total => (vec![], vec![w(lt(a[0], a[1])), w(eq(a[0], a[1])), w(lt(a[1], a[0]))]),
            Schema::Least => (vec![], vec![w(lt(Term::CONST, a[0])), w(eq(Term::CONST, a[0]))]),
            Schema::Dense => {
                let z = Term::var(self.dense_var());
                let body = Rel::And(Box::new(lt(a[0], z)), Box::new(lt(z, a[1])));
                (vec![w(lt(a[0], a[1]))], vec![w(Rel::Exists(self.dense_var(), Box::new(body)))])
            }
            Schema::FInc => (vec![], vec![w(lt(a[0], a[0].apply(1)))]),
            Schema::FMono => (vec![w(lt(a[0], a[1]))], vec![w(lt(a[0].apply(1), a[1].apply(1)))]),
            Schema::Cofinal => (vec![], vec![w(Rel::BigVee(a[0]))]),
        };
        Sequent::new(ante, succ)
    }

    /// Rule id used in proof documents.
    pub fn rule_id(&self) -> String {
        format!("ax:{}", self.schema.name())
    }

    /// Parameters recorded in proof documents.
    pub fn params(&self) -> BTreeMap<String, String> {
        let level = self.level();
        let mut out = BTreeMap::new();
        let names = ["X", "Y", "Z"];
        for (k, t) in self.args.iter().enumerate() {
            out.insert(names[k].to_string(), term_text(level, t));
        }
        if let Some(l) = self.label {
            out.insert("label".into(), term_text(Level::External, &l));
        }
        if let Some((rho, z)) = &self.rho {
            out.insert("rho".into(), rel_text(level, rho));
            out.insert("var".into(), term_text(level, &Term::var(*z)));
        }
        if let Some(eta) = &self.eta {
            let shown = eta.under(Term::CONST).to_string();
            out.insert("eta".into(), shown.trim_start_matches("C : ").to_string());
        }
        out
    }

    pub fn max_depth(&self) -> u32 {
        let s = self.sequent();
        let mut ts = Vec::new();
        for f in s.formulas() {
            f.external_terms(&mut ts);
            let mut it = Vec::new();
            f.internal_terms(&mut it);
            ts.extend(it.into_iter().map(|(_, t)| t));
        }
        ts.iter().map(|t| t.depth).max().unwrap_or(0)
    }

    /// Largest `depth + variable index` among the terms; only finitely many
    /// instances over a given signature share a weight.
    pub fn weight(&self) -> u64 {
        let s = self.sequent();
        let mut ts = Vec::new();
        for f in s.formulas() {
            f.external_terms(&mut ts);
            let mut it = Vec::new();
            f.internal_terms(&mut it);
            ts.extend(it.into_iter().map(|(_, t)| t));
        }
        ts.iter().map(term_rank).max().unwrap_or(0)
    }
}

impl fmt::Display for AxiomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rule_id(), self.sequent())
    }
}

/// Terms available for instantiating schemas, per level; internal terms are
/// kept per external label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    pub ext: BTreeSet<Term>,
    pub int: BTreeMap<Term, BTreeSet<Term>>,
}

impl Universe {
    /// Terms of the formulas, closed under subterms, plus the constants.
    pub fn of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut u = Universe::default();
        u.ext.insert(Term::CONST);
        for f in fs {
            let mut ts = Vec::new();
            f.external_terms(&mut ts);
            for t in ts {
                close(&mut u.ext, t);
            }
            let mut its = Vec::new();
            f.internal_terms(&mut its);
            if let Formula::Lab(l, _) = f {
                u.int.entry(*l).or_default().insert(Term::CONST);
            }
            for (l, t) in its {
                close(u.int.entry(l).or_default(), t);
            }
        }
        u
    }
}

fn close(set: &mut BTreeSet<Term>, t: Term) {
    for d in 0..=t.depth {
        set.insert(Term { base: t.base, depth: d });
    }
}

/// All instances whose antecedent formulas occur in `ante`, over the terms
/// of `universe`. Deterministic order.
pub fn instances_from(ante: &[Formula], universe: &Universe) -> Vec<AxiomInstance> {
    let mut out = BTreeSet::new();
    // per level: (label, atoms)
    let mut groups: BTreeMap<Option<Term>, Vec<Rel>> = BTreeMap::new();
    groups.entry(None).or_default();
    for l in universe.int.keys() {
        groups.entry(Some(*l)).or_default();
    }
    for f in ante {
        if let Some((label, r)) = f.as_rel() {
            if r.is_atomic() {
                groups.entry(label).or_default().push(r.clone());
            }
        }
    }
    let empty = BTreeSet::new();
    for (label, atoms) in &groups {
        let terms = match label {
            None => &universe.ext,
            Some(l) => universe.int.get(l).unwrap_or(&empty),
        };
        let mk = |s: Schema, args: Vec<Term>| AxiomInstance::new(s, *label, args);
        for t in terms {
            out.insert(mk(Schema::EqRefl, vec![*t]));
            out.insert(mk(Schema::Least, vec![*t]));
            out.insert(mk(Schema::FInc, vec![*t]));
            out.insert(mk(Schema::Cofinal, vec![*t]));
            for u in terms {
                out.insert(mk(Schema::Total, vec![*t, *u]));
            }
        }
        for a in atoms {
            match a {
                Rel::Lt(x, y) => {
                    if x == y {
                        out.insert(mk(Schema::Irrefl, vec![*x]));
                    }
                    out.insert(mk(Schema::Dense, vec![*x, *y]));
                    out.insert(mk(Schema::FMono, vec![*x, *y]));
                    for b in atoms {
                        if let Rel::Lt(y2, z) = b {
                            if y2 == y {
                                out.insert(mk(Schema::Trans, vec![*x, *y, *z]));
                            }
                        }
                    }
                }
                Rel::Eq(x, y) => {
                    for b in atoms {
                        for (rho, z) in congruence_shapes(b, x) {
                            let mut inst = mk(Schema::EqCong, vec![*x, *y]);
                            inst.rho = Some((rho, z));
                            out.insert(inst);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    // transport: T = S on the left, T : eta on the left
    for f in ante {
        if let Formula::Rel(Rel::Eq(t, s)) = f {
            for g in ante {
                if let Some((l, eta)) = TransportBody::of(g) {
                    if l == *t {
                        let mut inst = AxiomInstance::new(Schema::Transport, None, vec![*t, *s]);
                        inst.eta = Some(eta);
                        out.insert(inst);
                    }
                }
            }
        }
    }
    out.into_iter().filter(|i| i.sequent().ante.iter().all(|b| ante.contains(b))).collect()
}

/// Ways to read atom `b` as `rho[x/z]`: every nonempty set of argument
/// positions whose term is `f^d(x)` may be abstracted.
fn congruence_shapes(b: &Rel, x: &Term) -> Vec<(Rel, u32)> {
    let (l, r, is_lt) = match b {
        Rel::Lt(l, r) => (*l, *r, true),
        Rel::Eq(l, r) => (*l, *r, false),
        _ => return vec![],
    };
    let hit = |t: &Term| t.base == x.base && t.depth >= x.depth;
    let z = fresh_for(&[l, r, *x], &BTreeSet::new());
    let abstract_ = |t: &Term| Term::var(z).apply(t.depth - x.depth);
    let mut out = Vec::new();
    for mask in 1..4u8 {
        let (use_l, use_r) = (mask & 1 != 0, mask & 2 != 0);
        if (use_l && !hit(&l)) || (use_r && !hit(&r)) {
            continue;
        }
        let nl = if use_l { abstract_(&l) } else { l };
        let nr = if use_r { abstract_(&r) } else { r };
        let rho = if is_lt { Rel::Lt(nl, nr) } else { Rel::Eq(nl, nr) };
        out.push((rho, z));
    }
    out
}

/// All axiom instances (other than `id`) whose sequent is exactly `s`, up to
/// the order of formulas.
pub fn match_axiom(s: &Sequent) -> Vec<AxiomInstance> {
    let u = Universe::of(s.formulas());
    instances_from(&s.ante, &u).into_iter().filter(|i| i.sequent().same_multiset(s)).collect()
}

/// An axiom whose sequent sits inside `s` (sub-multisets on both sides):
/// `id` first, then the schemas in a fixed order.
pub fn detect_closed(s: &Sequent) -> Option<Closure> {
    for a in &s.ante {
        if s.succ.iter().any(|b| a.alpha_eq(b)) {
            return Some(Closure::Id(a.clone()));
        }
    }
    let u = Universe::of(s.formulas());
    instances_from(&s.ante, &u)
        .into_iter()
        .find(|i| i.sequent().is_sub_multiset_of(s))
        .map(Closure::Axiom)
}

/// How a leaf closes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    Id(Formula),
    Axiom(AxiomInstance),
}

impl Closure {
    pub fn sequent(&self) -> Sequent {
        match self {
            Closure::Id(f) => Sequent::new(vec![f.clone()], vec![f.clone()]),
            Closure::Axiom(a) => a.sequent(),
        }
    }
}

/// Formulas occurring on the right of some non-identity axiom instance.
pub fn is_axiom_succedent(f: &Formula) -> bool {
    match f {
        Formula::Rel(r) | Formula::Lab(_, Body::Rel(r)) => match r {
            Rel::Eq(..) | Rel::Lt(..) | Rel::BigVee(_) => true,
            Rel::Exists(_, body) => match &**body {
                Rel::And(a, b) => match (&**a, &**b) {
                    (Rel::Lt(x, _), Rel::Lt(_, y)) => {
                        let label = f.as_rel().and_then(|(l, _)| l);
                        let dense = AxiomInstance::new(Schema::Dense, label, vec![*x, *y]);
                        dense.sequent().succ[0].alpha_eq(f)
                    }
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        // transport of a letter
        Formula::Lab(_, Body::Temporal(Temporal::Atom(a))) => matches!(a.body, Temporal::Atom(_)),
        Formula::Lab(..) => false,
    }
}

/// The global enumeration of instances: instance `i` is the `i`-th term
/// tuple of the `i mod 11`-th schema over the canonical term enumeration,
/// paired with a repetition counter so that every instance recurs.
pub fn enumerate_axioms(k: u64) -> AxiomInstance {
    let (i, _rep) = unpair(k);
    let schema = Schema::ALL[(i % Schema::ALL.len() as u64) as usize];
    let j = i / Schema::ALL.len() as u64;
    let internal = j % 2 == 1;
    let j = j / 2;
    let label = if internal { Some(nth_term(unpair(j).1)) } else { None };
    let j = if internal { unpair(j).0 } else { j };
    let (ja, jb) = match schema {
        Schema::EqCong | Schema::Transport => unpair(j),
        _ => (j, 0),
    };
    let args = tuple(ja, schema.arity());
    let mut inst = AxiomInstance::new(schema, label, args.clone());
    match schema {
        Schema::EqCong => {
            let z = fresh_for(&args, &BTreeSet::new());
            let (shape, rest) = unpair(jb);
            let (d, t) = unpair(rest);
            let zd = Term::var(z).apply(d as u32);
            let t = nth_term(t);
            let rho = match shape % 6 {
                0 => Rel::Lt(zd, t),
                1 => Rel::Lt(t, zd),
                2 => Rel::Eq(zd, t),
                3 => Rel::Eq(t, zd),
                4 => Rel::Lt(zd, Term::var(z).apply(t.depth)),
                _ => Rel::Eq(zd, Term::var(z).apply(t.depth)),
            };
            inst.rho = Some((rho, z));
        }
        Schema::Transport => {
            inst.label = None;
            let (which, rest) = unpair(jb);
            let (a, b) = unpair(rest);
            inst.eta = Some(match which % 3 {
                0 => TransportBody::Letter(nth_term(b), a as u32),
                1 => TransportBody::Atom(Rel::Lt(nth_term(a), nth_term(b))),
                _ => TransportBody::Atom(Rel::Eq(nth_term(a), nth_term(b))),
            });
        }
        _ => {}
    }
    inst
}

/// Cantor pairing inverse.
pub fn unpair(k: u64) -> (u64, u64) {
    let w = (((8 * k as u128 + 1) as f64).sqrt() as u64 - 1) / 2;
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= k {
        w += 1;
    }
    while w * (w + 1) / 2 > k {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let y = k - t;
    (w - y, y)
}

pub fn pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

fn tuple(j: u64, n: usize) -> Vec<Term> {
    match n {
        1 => vec![nth_term(j)],
        2 => {
            let (a, b) = unpair(j);
            vec![nth_term(a), nth_term(b)]
        }
        _ => {
            let (a, rest) = unpair(j);
            let (b, c) = unpair(rest);
            vec![nth_term(a), nth_term(b), nth_term(c)]
        }
    }
}

/// Term enumeration: rank = depth + (0 for the constant, k + 1 for `x_k`),
/// ascending rank, then ascending depth. Every term has a finite index.
pub fn nth_term(i: u64) -> Term {
    // rank r holds r + 1 terms
    let mut r = 0u64;
    while (r + 1) * (r + 2) / 2 <= i {
        r += 1;
    }
    let within = i - r * (r + 1) / 2;
    let depth = within as u32;
    let base_rank = r - within;
    let base = if base_rank == 0 { crate::syntax::Base::Const } else { crate::syntax::Base::Var(base_rank as u32 - 1) };
    Term { base, depth }
}

fn term_rank(t: &Term) -> u64 {
    let base_rank = match t.base {
        crate::syntax::Base::Const => 0,
        crate::syntax::Base::Var(k) => k as u64 + 1,
    };
    base_rank + t.depth as u64
}

pub fn term_index(t: &Term) -> u64 {
    let r = term_rank(t);
    r * (r + 1) / 2 + t.depth as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    #[test]
    fn match_examples() {
        let m = match_axiom(&parse_sequent("|- F(C) = F(C)").unwrap());
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].schema, Schema::EqRefl);
        assert_eq!(m[0].args, vec![Term::constant_iter(1)]);
        let m = match_axiom(&parse_sequent("C < C |-").unwrap());
        assert_eq!(m[0].schema, Schema::Irrefl);
        assert!(match_axiom(&parse_sequent("|- C : c : p0").unwrap()).is_empty());
        let m = match_axiom(&parse_sequent("|- C = X0, C < X0").unwrap());
        assert_eq!(m[0].schema, Schema::Least);
        let m = match_axiom(&parse_sequent("X0 = X1, F(X0) < C |- F(X1) < C").unwrap());
        assert_eq!(m[0].schema, Schema::EqCong);
        let m = match_axiom(&parse_sequent("C = X0, C : x0 : p1 |- X0 : x0 : p1").unwrap());
        assert_eq!(m[0].schema, Schema::Transport);
        assert!(match_axiom(&parse_sequent("C = X0, C : x0 : Box[0,1] p1 |- X0 : x0 : Box[0,1] p1").unwrap()).is_empty());
        let m = match_axiom(&parse_sequent("X0 < X1 |- exists X2. X0 < X2 & X2 < X1").unwrap());
        assert_eq!(m[0].schema, Schema::Dense);
        let m = match_axiom(&parse_sequent("|- C : x0 < f(x0)").unwrap());
        assert_eq!(m[0].label, Some(Term::CONST));
    }

    #[test]
    fn closed_detection() {
        assert!(matches!(detect_closed(&parse_sequent("C : c : p0 |- C : c : p0").unwrap()), Some(Closure::Id(_))));
        let s = parse_sequent("C < F(C), C : c : p0 |- bigvee(C)").unwrap();
        assert!(matches!(detect_closed(&s), Some(Closure::Axiom(a)) if a.schema == Schema::Cofinal));
        assert!(detect_closed(&parse_sequent("|- C : c : p0").unwrap()).is_none());
    }

    #[test]
    fn term_enumeration_is_bijective() {
        for i in 0..500 {
            assert_eq!(term_index(&nth_term(i)), i);
        }
        assert_eq!(nth_term(0), Term::CONST);
        assert_eq!(nth_term(1), Term::var(0));
        assert_eq!(nth_term(2), Term::constant_iter(1));
    }

    #[test]
    fn pairing() {
        for k in 0..2000 {
            let (x, y) = unpair(k);
            assert_eq!(pair(x, y), k);
        }
    }

    #[test]
    fn enumeration_repeats() {
        let target = enumerate_axioms(pair(7, 0));
        for rep in 1..5 {
            assert_eq!(enumerate_axioms(pair(7, rep)), target);
        }
    }

    #[test]
    fn axiom_succedents() {
        assert!(is_axiom_succedent(&parse_formula("C : x0 < f(x0)").unwrap()));
        assert!(is_axiom_succedent(&parse_formula("exists X0. C < X0 & X0 < F(C)").unwrap()));
        assert!(!is_axiom_succedent(&parse_formula("C : c : Box[0,1] p0").unwrap()));
        assert!(is_axiom_succedent(&parse_formula("C : c : p0").unwrap()));
    }
}
