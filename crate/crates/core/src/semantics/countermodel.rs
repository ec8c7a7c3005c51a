//! Countermodels read off the accumulated formulas of an open branch.
//!
//! Order atoms on either level become difference constraints over the
//! variables (each `f` adds exactly 1, constants sit at 0). The system is
//! solved one variable at a time, always picking a point strictly inside the
//! feasible range. Letters get degenerate point regions for every
//! `S : t : p` on the left, and left box formulas are made true by dilating
//! the region they require.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use super::{eval_sequent, Model, Region};
use crate::interval::Interval;
use crate::syntax::{Base, Body, Formula, InternalTemporal, Level, Rel, Sequent, Temporal, Term};
use crate::{Rational, RationalIntervalSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountermodelError {
    #[error("order atoms on the {0:?} level admit no strict-order solution")]
    Inconsistent(Level),
    #[error("disequalities on the {0:?} level cannot be met")]
    Collision(Level),
}

/// The model falsifies `s`.
pub fn verify_countermodel(m: &Model, s: &Sequent) -> bool {
    !eval_sequent(s, m)
}

/// Build a candidate model from the left (`gamma`) and right (`delta`)
/// formulas accumulated on a branch.
pub fn countermodel_from_trace(gamma: &[Formula], delta: &[Formula]) -> Result<Model, CountermodelError> {
    let mut ext = Constraints::default();
    let mut int = Constraints::default();
    for (f, positive) in gamma.iter().map(|f| (f, true)).chain(delta.iter().map(|f| (f, false))) {
        match f {
            Formula::Rel(r) => ext.add_atom(r, positive),
            Formula::Lab(s, body) => {
                ext.touch(s);
                match body {
                    Body::Rel(r) => int.add_atom(r, positive),
                    Body::Temporal(b) => {
                        let mut atoms = Vec::new();
                        b.atoms(&mut atoms);
                        for a in atoms {
                            int.touch(&a.label);
                        }
                    }
                }
            }
        }
    }
    let mut m = Model {
        ext_assign: ext.solve().ok_or(CountermodelError::Inconsistent(Level::External))?,
        int_assign: int.solve().ok_or(CountermodelError::Inconsistent(Level::Internal))?,
        ..Model::default()
    };
    if !ext.diseq_ok(&m.ext_assign) {
        return Err(CountermodelError::Collision(Level::External));
    }
    if !int.diseq_ok(&m.int_assign) {
        return Err(CountermodelError::Collision(Level::Internal));
    }
    let mut regions = Vec::new();
    for f in gamma {
        if let Formula::Lab(s, Body::Temporal(b)) = f {
            let at = m.value(Level::External, s);
            force_external(b, &RationalIntervalSet::single(Interval::point(at)), &m, &mut regions);
        }
    }
    regions.sort_by(|a: &Region, b: &Region| (a.letter, a.ext.lo, a.int.to_string()).cmp(&(b.letter, b.ext.lo, b.int.to_string())));
    regions.dedup();
    m.regions = regions;
    Ok(m)
}

fn force_external(b: &crate::syntax::ExternalTemporal, at: &RationalIntervalSet, m: &Model, out: &mut Vec<Region>) {
    match b {
        Temporal::Atom(a) => {
            let d = m.value(Level::Internal, &a.label);
            for e in at.intervals() {
                force_internal(&a.body, e, &RationalIntervalSet::single(Interval::point(d)), out);
            }
        }
        Temporal::Box(spec, x) => force_external(x, &at.dilate(spec), m, out),
        Temporal::And(x, y) => {
            force_external(x, at, m, out);
            force_external(y, at, m, out);
        }
        _ => {}
    }
}

fn force_internal(psi: &InternalTemporal, ext: &crate::RationalInterval, at: &RationalIntervalSet, out: &mut Vec<Region>) {
    match psi {
        Temporal::Atom(p) => out.push(Region { letter: p.0, ext: ext.clone(), int: at.clone() }),
        Temporal::Box(spec, x) => force_internal(x, ext, &at.dilate(spec), out),
        Temporal::And(x, y) => {
            force_internal(x, ext, at, out);
            force_internal(y, ext, at, out);
        }
        _ => {}
    }
}

/// Bound `x_hi - x_lo <= w` (or `<` when strict); node 0 is the constant.
#[derive(Clone, Copy, Debug)]
struct Edge {
    from: usize,
    to: usize,
    w: Rational,
    strict: bool,
}

/// Path weight with an infinitesimal count; strict edges contribute `-eps`.
type Weight = (Rational, i64);

#[derive(Default)]
struct Constraints {
    vars: BTreeSet<u32>,
    // (lhs, rhs, strict): lhs < rhs or lhs <= rhs
    order: Vec<(Term, Term, bool)>,
    eqs: Vec<(Term, Term)>,
    diseqs: Vec<(Term, Term)>,
}

impl Constraints {
    fn touch(&mut self, t: &Term) {
        self.vars.extend(t.var_index());
    }

    fn add_atom(&mut self, r: &Rel, positive: bool) {
        let (a, b) = match r {
            Rel::Eq(a, b) | Rel::Lt(a, b) => (*a, *b),
            _ => return,
        };
        self.touch(&a);
        self.touch(&b);
        match (r, positive) {
            (Rel::Eq(..), true) => self.eqs.push((a, b)),
            (Rel::Eq(..), false) => self.diseqs.push((a, b)),
            (Rel::Lt(..), true) => self.order.push((a, b, true)),
            (Rel::Lt(..), false) => self.order.push((b, a, false)),
            _ => unreachable!(),
        }
    }

    fn node(&self, t: &Term) -> usize {
        match t.base {
            Base::Const => 0,
            Base::Var(k) => 1 + self.vars.iter().position(|v| *v == k).expect("registered"),
        }
    }

    fn edges(&self, fixed: &BTreeMap<u32, Rational>) -> Vec<Edge> {
        let mut out = Vec::new();
        let d = |t: &Term| Rational::from_integer(t.depth as i64);
        // a + da < b + db  as  x_a - x_b < db - da
        let mut le = |a: &Term, b: &Term, strict: bool| {
            out.push(Edge { from: self.node(b), to: self.node(a), w: d(b) - d(a), strict });
        };
        for (a, b, strict) in &self.order {
            le(a, b, *strict);
        }
        for (a, b) in &self.eqs {
            le(a, b, false);
            le(b, a, false);
        }
        for (i, v) in self.vars.iter().enumerate() {
            // x >= 0
            out.push(Edge { from: 1 + i, to: 0, w: Rational::zero(), strict: false });
            if let Some(q) = fixed.get(v) {
                out.push(Edge { from: 0, to: 1 + i, w: *q, strict: false });
                out.push(Edge { from: 1 + i, to: 0, w: -*q, strict: false });
            }
        }
        out
    }

    /// Shortest path weights from `src` (forward) or to `src` (reverse);
    /// `None` on a negative cycle.
    fn distances(&self, edges: &[Edge], src: usize, reverse: bool) -> Option<Vec<Option<Weight>>> {
        let n = self.vars.len() + 1;
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        dist[src] = Some((Rational::zero(), 0));
        for round in 0..=n {
            let mut changed = false;
            for e in edges {
                let (u, v) = if reverse { (e.to, e.from) } else { (e.from, e.to) };
                if let Some((w, k)) = dist[u] {
                    let cand = (w + e.w, k - e.strict as i64);
                    if dist[v].is_none_or(|cur| cand < cur) {
                        dist[v] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(dist);
            }
            if round == n {
                return None;
            }
        }
        Some(dist)
    }

    fn solve(&self) -> Option<BTreeMap<u32, Rational>> {
        let mut fixed = BTreeMap::new();
        let half = Rational::new(1, 2);
        for (i, v) in self.vars.iter().enumerate() {
            let edges = self.edges(&fixed);
            let up = self.distances(&edges, 0, false)?[1 + i];
            let down = self.distances(&edges, 0, true)?[1 + i].expect("x >= 0 edge");
            // lo = -down, hi = up; a nonzero eps count means the bound is strict
            let lo = -down.0;
            let lo_strict = down.1 < 0;
            let value = match up {
                None => lo + if lo_strict { half } else { Rational::one() },
                Some((hi, k)) => {
                    let hi_strict = k < 0;
                    if lo > hi || (lo == hi && (lo_strict || hi_strict)) {
                        return None;
                    }
                    if lo == hi {
                        lo
                    } else {
                        (lo + hi) / Rational::from_integer(2)
                    }
                }
            };
            let value = self.avoid_collisions(*v, value, lo, lo_strict, &fixed);
            fixed.insert(*v, value);
        }
        Some(fixed)
    }

    /// Move `value` toward `lo` until no disequality with an already fixed
    /// variable is violated.
    fn avoid_collisions(&self, v: u32, mut value: Rational, lo: Rational, lo_strict: bool, fixed: &BTreeMap<u32, Rational>) -> Rational {
        let mut bad = BTreeSet::new();
        let val = |t: &Term, fixed: &BTreeMap<u32, Rational>| -> Option<Rational> {
            let base = match t.base {
                Base::Const => Rational::zero(),
                Base::Var(k) => *fixed.get(&k)?,
            };
            Some(base + Rational::from_integer(t.depth as i64))
        };
        for (a, b) in &self.diseqs {
            for (x, y) in [(a, b), (b, a)] {
                if x.has_var(v) && !y.has_var(v) {
                    if let Some(q) = val(y, fixed) {
                        bad.insert(q - Rational::from_integer(x.depth as i64));
                    }
                }
            }
        }
        let two = Rational::from_integer(2);
        for _ in 0..64 {
            if !bad.contains(&value) || value == lo && !lo_strict {
                break;
            }
            value = (lo + value) / two;
        }
        value
    }

    fn diseq_ok(&self, assign: &BTreeMap<u32, Rational>) -> bool {
        let val = |t: &Term| {
            let base = match t.base {
                Base::Const => Rational::zero(),
                Base::Var(k) => assign.get(&k).copied().unwrap_or_else(Rational::zero),
            };
            base + Rational::from_integer(t.depth as i64)
        };
        self.diseqs.iter().all(|(a, b)| val(a) != val(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn build(src: &str) -> Result<Model, CountermodelError> {
        let s = parse_sequent(src).unwrap();
        countermodel_from_trace(&s.ante, &s.succ)
    }

    #[test]
    fn empty_prefix() {
        let m = build("|- C : c : p0").unwrap();
        assert!(m.regions.is_empty());
        assert!(verify_countermodel(&m, &parse_sequent("|- C : c : p0").unwrap()));
    }

    #[test]
    fn midpoint_solution() {
        let m = build("C < X0, X0 < F(C) |-").unwrap();
        assert_eq!(m.ext_assign[&0], Rational::new(1, 2));
    }

    #[test]
    fn cycle_fails() {
        assert_eq!(build("X0 < X1, X1 < X0 |-"), Err(CountermodelError::Inconsistent(Level::External)));
        assert!(build("X0 = F(X0) |-").is_err());
        assert!(build("X0 < C |-").is_err());
    }

    #[test]
    fn right_atoms_are_false() {
        let s = parse_sequent("C < X0 |- X0 = F(C), F(C) < X0").unwrap();
        let m = countermodel_from_trace(&s.ante, &s.succ).unwrap();
        assert!(verify_countermodel(&m, &s));
    }

    #[test]
    fn boxes_are_forced() {
        let s = parse_sequent("C : c : Box[0,1] p0, C : c < x0, C : f(c) < x0, C : x0 < f(f(c)) |- C : x0 : p0").unwrap();
        let m = countermodel_from_trace(&s.ante, &s.succ).unwrap();
        assert!(verify_countermodel(&m, &s));
    }
}
