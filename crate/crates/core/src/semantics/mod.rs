//! Exact evaluation over the canonical structure: both time flows are the
//! nonnegative rationals with `f(q) = F(q) = q + 1`.
//!
//! A model is a finite valuation (letter regions) plus variable assignments.
//! Truth sets of temporal formulas are computed as interval sets, with box
//! operators acting by erosion.

mod countermodel;
mod model_file;
mod relational;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::interval::Upper;
use crate::syntax::{Base, Body, ExternalTemporal, Formula, InternalTemporal, Level, Sequent, Temporal, Term};
use crate::{Rational, RationalInterval, RationalIntervalSet};

pub use countermodel::{countermodel_from_trace, verify_countermodel, CountermodelError};
pub use model_file::{format_rational, parse_interval, parse_interval_set, parse_rational, ModelFileError};
pub use relational::eval_relational;

/// `letter` holds at internal points `int` of every external point in `ext`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub letter: u32,
    pub ext: RationalInterval,
    pub int: RationalIntervalSet,
}

/// A finitely described structure on the canonical pre-structure.
/// Unassigned variables default to `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub regions: Vec<Region>,
    pub ext_assign: BTreeMap<u32, Rational>,
    pub int_assign: BTreeMap<u32, Rational>,
}

impl Model {
    pub fn assignment(&self, level: Level) -> &BTreeMap<u32, Rational> {
        match level {
            Level::External => &self.ext_assign,
            Level::Internal => &self.int_assign,
        }
    }

    pub fn value(&self, level: Level, t: &Term) -> Rational {
        let base = match t.base {
            Base::Const => Rational::zero(),
            Base::Var(k) => self.assignment(level).get(&k).copied().unwrap_or_else(Rational::zero),
        };
        base + Rational::from_integer(t.depth as i64)
    }

    /// Internal points where `p` holds in the flow indexed by `a`.
    pub fn letter_slice(&self, letter: u32, a: &Rational) -> RationalIntervalSet {
        let mut out = RationalIntervalSet::empty();
        for r in self.regions.iter().filter(|r| r.letter == letter && r.ext.contains(a)) {
            out = out.union(&r.int);
        }
        out
    }

    /// One representative external point per cell of the partition induced
    /// by region boundaries; letter slices are constant on each cell.
    pub fn external_cells(&self) -> Vec<(RationalInterval, Rational)> {
        let mut pts: BTreeSet<Rational> = BTreeSet::new();
        for r in &self.regions {
            pts.insert(r.ext.lo);
            if let Upper::Finite { value, .. } = r.ext.hi {
                pts.insert(value);
            }
        }
        pts.insert(Rational::zero());
        let pts: Vec<Rational> = pts.into_iter().filter(|p| *p >= Rational::zero()).collect();
        let two = Rational::from_integer(2);
        let mut cells = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            cells.push((RationalInterval::point(*p), *p));
            match pts.get(i + 1) {
                Some(q) => cells.push((RationalInterval::new(*p, false, *q, false), (*p + *q) / two)),
                None => cells.push((RationalInterval::from(*p, false), *p + Rational::one())),
            }
        }
        cells
    }
}

pub fn truthset_internal(psi: &InternalTemporal, a: &Rational, m: &Model) -> RationalIntervalSet {
    match psi {
        Temporal::Atom(p) => m.letter_slice(p.0, a),
        Temporal::Not(x) => truthset_internal(x, a, m).complement(),
        Temporal::And(x, y) => truthset_internal(x, a, m).intersection(&truthset_internal(y, a, m)),
        Temporal::Or(x, y) => truthset_internal(x, a, m).union(&truthset_internal(y, a, m)),
        Temporal::Imp(x, y) => truthset_internal(x, a, m).complement().union(&truthset_internal(y, a, m)),
        Temporal::Box(s, x) => truthset_internal(x, a, m).erode(s),
    }
}

pub fn truthset_external(beta: &ExternalTemporal, m: &Model) -> RationalIntervalSet {
    let cells = m.external_cells();
    external_rec(beta, m, &cells)
}

fn external_rec(beta: &ExternalTemporal, m: &Model, cells: &[(RationalInterval, Rational)]) -> RationalIntervalSet {
    match beta {
        Temporal::Atom(atom) => {
            let d = m.value(Level::Internal, &atom.label);
            cells
                .iter()
                .filter(|(_, rep)| truthset_internal(&atom.body, rep, m).contains(&d))
                .map(|(cell, _)| cell.clone())
                .collect()
        }
        Temporal::Not(x) => external_rec(x, m, cells).complement(),
        Temporal::And(x, y) => external_rec(x, m, cells).intersection(&external_rec(y, m, cells)),
        Temporal::Or(x, y) => external_rec(x, m, cells).union(&external_rec(y, m, cells)),
        Temporal::Imp(x, y) => external_rec(x, m, cells).complement().union(&external_rec(y, m, cells)),
        Temporal::Box(s, x) => external_rec(x, m, cells).erode(s),
    }
}

/// Truth of a sequent formula; labelled formulas are evaluated at the value
/// of their external label.
pub fn eval_formula(f: &Formula, m: &Model) -> bool {
    match f {
        Formula::Rel(r) => eval_relational(r, Level::External, m),
        Formula::Lab(_, Body::Rel(r)) => eval_relational(r, Level::Internal, m),
        Formula::Lab(s, Body::Temporal(b)) => truthset_external(b, m).contains(&m.value(Level::External, s)),
    }
}

/// A sequent is false in `m` iff every antecedent holds and every succedent fails.
pub fn eval_sequent(s: &Sequent, m: &Model) -> bool {
    !(s.ante.iter().all(|f| eval_formula(f, m)) && s.succ.iter().all(|f| !eval_formula(f, m)))
}
