#![allow(dead_code)]

use mtl2::semantics::{Model, Region};
use mtl2::{Rational, RationalInterval, RationalIntervalSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k/d` with `d <= 8` in `[0, max]`, leaning towards small integers where
/// the terms `f^k(c)` live.
pub fn rational(r: &mut ChaCha8Rng, max: i64) -> Rational {
    if r.gen_bool(0.4) {
        return Rational::from_integer(r.gen_range(0..=max.min(3)));
    }
    let d = r.gen_range(1..=8);
    Rational::new(r.gen_range(0..=max * d), d)
}

/// A random interval; about a third start at a closed `0`.
pub fn interval(r: &mut ChaCha8Rng, max: i64) -> RationalInterval {
    let origin = r.gen_bool(0.3);
    let a = if origin { Rational::from_integer(0) } else { rational(r, max) };
    if r.gen_bool(0.2) {
        return RationalInterval::from(a, origin || r.gen_bool(0.5));
    }
    let b = rational(r, max);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if lo == hi {
        return RationalInterval::point(lo);
    }
    RationalInterval::new(lo, origin || r.gen_bool(0.5), hi, r.gen_bool(0.5))
}

pub fn interval_set(r: &mut ChaCha8Rng, max: i64, parts: usize) -> RationalIntervalSet {
    let n = r.gen_range(0..=parts);
    RationalIntervalSet::from_intervals((0..n).map(|_| interval(r, max)).collect::<Vec<_>>())
}

/// Up to four regions over letters `p0`, `p1`; variables `X0..X3` and
/// `x0..x3` get random values.
pub fn random_model(r: &mut ChaCha8Rng) -> Model {
    let n = r.gen_range(0..=4);
    let regions = (0..n)
        .map(|_| Region { letter: r.gen_range(0..2), ext: interval(r, 6), int: interval_set(r, 6, 2) })
        .collect();
    let mut m = Model { regions, ..Model::default() };
    for k in 0..4 {
        m.ext_assign.insert(k, rational(r, 6));
        m.int_assign.insert(k, rational(r, 6));
    }
    m
}

/// Sequents the engine proves.
pub const PROVABLE: &[&str] = &[
    "C : c : p0 |- C : c : p0",
    "X0 < X1 |- X0 < X1",
    "|- C < F(C)",
    "|- bigvee(X0)",
    "|- F(C) = F(C)",
    "X0 < X1 |- exists X2. X0 < X2 & X2 < X1",
    "|- exists X0. C < X0 & X0 < F(C)",
    "C < X0 |- exists X1. C < X1 & X1 < X0",
    "C : c : Box[0,2] p0 |- C : c : Box[0,1] p0",
    "|- C : c : p0 -> p0",
    "C : c : p0 & p1 |- C : c : p1 & p0",
    "X0 < X1, X1 < X2 |- X0 < X2",
    "|- C : c < f(c)",
    "|- C : bigvee(x0)",
    "X0 < X1 |- F(X0) < F(X1)",
    "|- forall X0. X0 < F(X0)",
    "C : Box[0,1] (c : p0) |- C : c : p0",
    "|- C : (c : p0) -> (c : p0)",
    "C = X0, C : c : p1 |- X0 : c : p1",
    "|- C : exists x0. c < x0 & x0 < f(c)",
];

/// Sequents with countermodels.
pub const INVALID: &[&str] = &[
    "|- C : c : p0",
    "C : c : Box[0,1] p0 |- C : c : Box[0,2] p0",
    "|- C : Box[0,1] c : Box[0,1] p0",
    "C : c : p0 |- C : f(c) : p0",
    "|- X0 < F(C)",
    "|- C : c : p0 | p1",
    "C : c : Box(0,1) p0 |- C : c : p0",
    "X0 < X1 |- F(X0) < X1",
    "|- C : x0 = c",
    "C : c : p0 -> p1 |- C : c : p1",
];
