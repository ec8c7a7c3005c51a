use mtl2::semantics::{eval_sequent, Model, Region};
use mtl2::syntax::{ExternalTemporal, InternalTemporal, LabelledAtom, Letter};
use mtl2::{
    parse_formula, parse_sequent, Body, Formula, IntervalSpec, Rational, RationalInterval, RationalIntervalSet, Rel,
    Sequent, Temporal, Term,
};
use proptest::prelude::*;

fn term(max_var: u32) -> impl Strategy<Value = Term> {
    (prop_oneof![Just(None), (0..max_var).prop_map(Some)], 0u32..4).prop_map(|(v, d)| {
        let base = v.map(Term::var).unwrap_or(Term::CONST);
        base.apply(d)
    })
}

/// `bigvee` only stands alone or directly under a universal quantifier.
fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![
        8 => compound_rel(),
        1 => term(3).prop_map(Rel::BigVee),
        1 => (0u32..3).prop_map(|x| Rel::Forall(x, Box::new(Rel::BigVee(Term::var(x))))),
    ]
}

fn compound_rel() -> impl Strategy<Value = Rel> {
    let leaf = prop_oneof![
        (term(3), term(3)).prop_map(|(a, b)| Rel::Lt(a, b)),
        (term(3), term(3)).prop_map(|(a, b)| Rel::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Rel::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Rel::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Rel::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Rel::Imp(Box::new(a), Box::new(b))),
            (0u32..3, inner.clone()).prop_map(|(x, a)| Rel::Forall(x, Box::new(a))),
            (0u32..3, inner).prop_map(|(x, a)| Rel::Exists(x, Box::new(a))),
        ]
    })
}

fn spec() -> impl Strategy<Value = IntervalSpec> {
    (0u32..4, prop::option::of(1u32..4), any::<bool>(), any::<bool>()).prop_map(|(m, n, lc, uc)| {
        let n = n.map(|n| m + n);
        IntervalSpec::new(m, n, lc, uc && n.is_some()).unwrap()
    })
}

fn temporal<A: Clone + std::fmt::Debug + 'static>(atom: impl Strategy<Value = A> + 'static) -> impl Strategy<Value = Temporal<A>> {
    atom.prop_map(Temporal::Atom).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Temporal::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Temporal::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Temporal::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Temporal::Imp(Box::new(a), Box::new(b))),
            (spec(), inner).prop_map(|(s, a)| Temporal::Box(s, Box::new(a))),
        ]
    })
}

fn internal() -> impl Strategy<Value = InternalTemporal> {
    temporal((0u32..3).prop_map(Letter))
}

fn external() -> impl Strategy<Value = ExternalTemporal> {
    temporal((term(2), internal()).prop_map(|(label, body)| LabelledAtom { label, body }))
}

fn formula() -> impl Strategy<Value = Formula> {
    prop_oneof![
        rel().prop_map(Formula::Rel),
        (term(2), rel()).prop_map(|(l, r)| Formula::Lab(l, Body::Rel(r))),
        (term(2), external()).prop_map(|(l, b)| Formula::Lab(l, Body::Temporal(b))),
    ]
}

fn sequent() -> impl Strategy<Value = Sequent> {
    (prop::collection::vec(formula(), 0..3), prop::collection::vec(formula(), 0..3))
        .prop_map(|(a, s)| Sequent::new(a, s))
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..64, 1i64..9).prop_map(|(n, d)| Rational::new(n, d))
}

fn interval() -> impl Strategy<Value = RationalInterval> {
    (rational(), rational(), any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc, unbounded)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if unbounded {
            RationalInterval::from(lo, lc)
        } else if lo == hi {
            RationalInterval::point(lo)
        } else {
            RationalInterval::new(lo, lc, hi, hc)
        }
    })
}

fn set() -> impl Strategy<Value = RationalIntervalSet> {
    prop::collection::vec(interval(), 0..4).prop_map(RationalIntervalSet::from_intervals)
}

fn model() -> impl Strategy<Value = Model> {
    let region = (0u32..3, interval(), set()).prop_map(|(letter, ext, int)| Region { letter, ext, int });
    (prop::collection::vec(region, 0..4), prop::collection::vec(rational(), 3), prop::collection::vec(rational(), 3))
        .prop_map(|(regions, e, i)| Model {
            regions,
            ext_assign: e.into_iter().enumerate().map(|(k, v)| (k as u32, v)).collect(),
            int_assign: i.into_iter().enumerate().map(|(k, v)| (k as u32, v)).collect(),
        })
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn sequent_print_parse_round_trip(s in sequent()) {
        let text = s.to_string();
        let back = parse_sequent(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn set_algebra(a in set(), b in set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersection(&b), b.intersection(&a));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersection(&b.complement()));
        prop_assert!(a.intersection(&b).is_subset(&a));
        prop_assert!(a.difference(&b).intersection(&b).is_empty());
    }

    #[test]
    fn canonical_form_is_unique(parts in prop::collection::vec(interval(), 0..5)) {
        let forward = RationalIntervalSet::from_intervals(parts.clone());
        let backward = RationalIntervalSet::from_intervals(parts.into_iter().rev().collect::<Vec<_>>());
        prop_assert_eq!(&forward, &backward);
        for w in forward.intervals().windows(2) {
            prop_assert!(w[0].intersect(&w[1]).is_empty());
        }
    }

    #[test]
    fn erosion_and_dilation_are_adjoint(a in set(), b in set(), s in spec()) {
        prop_assert_eq!(a.dilate(&s).is_subset(&b), a.is_subset(&b.erode(&s)));
    }

    #[test]
    fn erosion_is_monotone(a in set(), b in set(), s in spec()) {
        let small = a.intersection(&b);
        prop_assert!(small.erode(&s).is_subset(&a.erode(&s)));
    }

    #[test]
    fn identity_sequents_hold(f in formula(), m in model()) {
        prop_assert!(eval_sequent(&Sequent::new(vec![f.clone()], vec![f]), &m));
    }

    #[test]
    fn model_file_round_trip(m in model()) {
        let back = Model::from_toml(&m.to_toml()).unwrap();
        prop_assert_eq!(back.to_toml(), m.to_toml());
    }
}
