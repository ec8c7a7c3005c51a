//! First-order evaluation over `(Q+, <, 0, +1)`.
//!
//! Order-automorphisms of the structure fix every integer, and map a tuple
//! to any other tuple with the same integer parts and the same relative order
//! of fractional parts. A quantifier therefore only needs one witness per
//! such type: each integer part up to a bound past the current values,
//! combined with each existing fractional part or a midpoint between two
//! neighbouring ones.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::Model;
use crate::syntax::{Base, Level, Rel, Term};
use crate::Rational;

pub fn eval_relational(r: &Rel, level: Level, m: &Model) -> bool {
    let depth = r.max_depth();
    let mut env = Vec::new();
    Eval { m, level, depth }.eval(r, &mut env)
}

struct Eval<'a> {
    m: &'a Model,
    level: Level,
    depth: u32,
}

impl Eval<'_> {
    fn value(&self, t: &Term, env: &[(u32, Rational)]) -> Rational {
        if let Base::Var(k) = t.base {
            if let Some((_, v)) = env.iter().rev().find(|(x, _)| *x == k) {
                return *v + Rational::from_integer(t.depth as i64);
            }
        }
        self.m.value(self.level, t)
    }

    fn eval(&self, r: &Rel, env: &mut Vec<(u32, Rational)>) -> bool {
        match r {
            Rel::Eq(a, b) => self.value(a, env) == self.value(b, env),
            Rel::Lt(a, b) => self.value(a, env) < self.value(b, env),
            // f^n(c) = n is eventually above any value
            Rel::BigVee(_) => true,
            Rel::Not(a) => !self.eval(a, env),
            Rel::And(a, b) => self.eval(a, env) && self.eval(b, env),
            Rel::Or(a, b) => self.eval(a, env) || self.eval(b, env),
            Rel::Imp(a, b) => !self.eval(a, env) || self.eval(b, env),
            Rel::Forall(v, body) | Rel::Exists(v, body) => {
                let forall = matches!(r, Rel::Forall(..));
                let rank = r.quantifier_depth() as u32;
                for cand in self.candidates(r, env, rank) {
                    env.push((*v, cand));
                    let holds = self.eval(body, env);
                    env.pop();
                    if holds != forall {
                        return !forall;
                    }
                }
                forall
            }
        }
    }

    /// One witness per type over the values currently in scope.
    fn candidates(&self, r: &Rel, env: &[(u32, Rational)], rank: u32) -> Vec<Rational> {
        let mut known: Vec<Rational> = env.iter().map(|(_, v)| *v).collect();
        let mut ts = Vec::new();
        r.terms(&mut ts);
        for t in &ts {
            if let Base::Var(k) = t.base {
                if !env.iter().any(|(x, _)| *x == k) {
                    known.push(self.m.value(self.level, &Term::var(k)));
                }
            }
        }
        let mut fracs: BTreeSet<Rational> = BTreeSet::from([Rational::zero()]);
        let mut max_floor = 0i64;
        for v in &known {
            let fl = v.floor();
            max_floor = max_floor.max(fl.to_integer());
            fracs.insert(*v - fl);
        }
        let fracs: Vec<Rational> = fracs.into_iter().collect();
        let two = Rational::from_integer(2);
        let mut offsets = Vec::new();
        for (i, f) in fracs.iter().enumerate() {
            offsets.push(*f);
            let next = fracs.get(i + 1).copied().unwrap_or_else(Rational::one);
            offsets.push((*f + next) / two);
        }
        let bound = max_floor + (self.depth as i64 + 1) * (1i64 << rank.min(20));
        let mut out = Vec::with_capacity(offsets.len() * (bound as usize + 1));
        for n in 0..=bound {
            for o in &offsets {
                out.push(Rational::from_integer(n) + *o);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Formula};

    fn holds(src: &str) -> bool {
        match parse_formula(src).unwrap() {
            Formula::Rel(r) => eval_relational(&r, Level::External, &Model::default()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn examples() {
        assert!(holds("C < F(C)"));
        assert!(holds("bigvee(F(F(C)))"));
        assert!(holds("exists X0. C < X0 & X0 < F(C)"));
        assert!(holds("forall X0. exists X1. X0 < X1"));
        assert!(!holds("exists X0. X0 < C"));
        assert!(holds("forall X0. X0 = C | C < X0"));
        assert!(!holds("exists X0. forall X1. X1 < X0"));
        assert!(holds("forall X0. forall X1. X0 < X1 -> exists X2. X0 < X2 & X2 < X1"));
        assert!(!holds("exists X0. exists X1. X0 < X1 & F(X1) < F(X0)"));
        assert!(holds("exists X0. F(F(C)) < X0 & X0 < F^3(C)"));
    }

    #[test]
    fn uses_assignment() {
        let mut m = Model::default();
        m.ext_assign.insert(0, Rational::new(1, 2));
        let Formula::Rel(r) = parse_formula("C < X0 & X0 < F(C)").unwrap() else { unreachable!() };
        assert!(eval_relational(&r, Level::External, &m));
        let Formula::Rel(r) = parse_formula("exists X1. X0 < X1 & X1 < F(C)").unwrap() else { unreachable!() };
        assert!(eval_relational(&r, Level::External, &m));
    }
}
