//! Finite unions of intervals over a nonnegative exact scalar line.
//!
//! Every [`IntervalSet`] is kept canonical: components are nonempty, sorted,
//! pairwise disjoint and never touch (two components that could be glued into
//! one are merged). All points are `>= 0`, matching time flows whose least
//! element is `0`. Box operators act on truth sets by [`IntervalSet::erode`].

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;
use crate::syntax::IntervalSpec;

/// Upper end of an interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Upper<T> {
    Finite { value: T, closed: bool },
    Infinite,
}

/// A single interval `lo ⋈ x ⋈ hi`, possibly unbounded above.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    pub lo: T,
    pub lo_closed: bool,
    pub hi: Upper<T>,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, lo_closed: bool, hi: T, hi_closed: bool) -> Self {
        Interval { lo, lo_closed, hi: Upper::Finite { value: hi, closed: hi_closed } }
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Self::new(lo, true, hi, true)
    }

    pub fn point(v: T) -> Self {
        Self::closed(v.clone(), v)
    }

    pub fn from(lo: T, lo_closed: bool) -> Self {
        Interval { lo, lo_closed, hi: Upper::Infinite }
    }

    /// The whole nonnegative line `[0, oo)`.
    pub fn nonnegative() -> Self {
        Self::from(T::zero(), true)
    }

    pub fn is_empty(&self) -> bool {
        match &self.hi {
            Upper::Infinite => false,
            Upper::Finite { value, closed } => match self.lo.cmp(value) {
                Ordering::Less => false,
                Ordering::Equal => !(self.lo_closed && *closed),
                Ordering::Greater => true,
            },
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        above
            && match &self.hi {
                Upper::Infinite => true,
                Upper::Finite { value, closed } => match x.cmp(value) {
                    Ordering::Less => true,
                    Ordering::Equal => *closed,
                    Ordering::Greater => false,
                },
            }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.hi, Upper::Finite { .. })
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        Interval { lo, lo_closed, hi: min_upper(&self.hi, &other.hi) }
    }

    /// Points of `self` that are `>= 0`.
    fn clip_nonnegative(self) -> Self {
        if self.lo < T::zero() {
            Interval { lo: T::zero(), lo_closed: true, hi: self.hi }
        } else {
            self
        }
    }
}

fn min_upper<T: Scalar>(a: &Upper<T>, b: &Upper<T>) -> Upper<T> {
    match (a, b) {
        (Upper::Infinite, x) | (x, Upper::Infinite) => x.clone(),
        (Upper::Finite { value: va, closed: ca }, Upper::Finite { value: vb, closed: cb }) => {
            match va.cmp(vb) {
                Ordering::Less => a.clone(),
                Ordering::Greater => b.clone(),
                Ordering::Equal => Upper::Finite { value: va.clone(), closed: *ca && *cb },
            }
        }
    }
}

fn max_upper<T: Scalar>(a: &Upper<T>, b: &Upper<T>) -> Upper<T> {
    match (a, b) {
        (Upper::Infinite, _) | (_, Upper::Infinite) => Upper::Infinite,
        (Upper::Finite { value: va, closed: ca }, Upper::Finite { value: vb, closed: cb }) => {
            match va.cmp(vb) {
                Ordering::Less => b.clone(),
                Ordering::Greater => a.clone(),
                Ordering::Equal => Upper::Finite { value: va.clone(), closed: *ca || *cb },
            }
        }
    }
}

/// Whether `b` (starting at or after `a`) overlaps or touches `a`.
fn glues<T: Scalar>(a: &Interval<T>, b: &Interval<T>) -> bool {
    match &a.hi {
        Upper::Infinite => true,
        Upper::Finite { value, closed } => match b.lo.cmp(value) {
            Ordering::Less => true,
            Ordering::Equal => *closed || b.lo_closed,
            Ordering::Greater => false,
        },
    }
}

/// The interval `{d : b+m ⋈ d ⋈ b+n}` selected by a box operator at point `b`.
pub fn interval_of<T: Scalar>(spec: &IntervalSpec, b: &T) -> Interval<T> {
    let lo = b.clone() + T::from_offset(spec.lower);
    let hi = match spec.upper {
        Some(n) => Upper::Finite { value: b.clone() + T::from_offset(n), closed: spec.upper_closed },
        None => Upper::Infinite,
    };
    Interval { lo, lo_closed: spec.lower_closed, hi }
}

/// Canonical finite union of intervals within `[0, oo)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalSet<T> {
    parts: Vec<Interval<T>>,
}

impl<T: Scalar> Default for IntervalSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Scalar> IntervalSet<T> {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet { parts: vec![Interval::nonnegative()] }
    }

    pub fn single(i: Interval<T>) -> Self {
        Self::from_intervals(vec![i])
    }

    /// Canonicalize an arbitrary list: clip to `[0, oo)`, drop empties, merge.
    pub fn from_intervals(items: impl IntoIterator<Item = Interval<T>>) -> Self {
        let mut items: Vec<Interval<T>> = items
            .into_iter()
            .map(Interval::clip_nonnegative)
            .filter(|i| !i.is_empty())
            .collect();
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut parts: Vec<Interval<T>> = Vec::with_capacity(items.len());
        for it in items {
            match parts.last_mut() {
                Some(last) if glues(last, &it) => {
                    last.hi = max_upper(&last.hi, &it.hi);
                }
                _ => parts.push(it),
            }
        }
        IntervalSet { parts }
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.parts.len() == 1 && self.parts[0] == Interval::nonnegative()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    /// Complement relative to `[0, oo)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = Some((T::zero(), true));
        for part in &self.parts {
            let Some((lo, lo_closed)) = cursor.take() else { break };
            out.push(Interval::new(lo, lo_closed, part.lo.clone(), !part.lo_closed));
            cursor = match &part.hi {
                Upper::Finite { value, closed } => Some((value.clone(), !*closed)),
                Upper::Infinite => None,
            };
        }
        if let Some((lo, lo_closed)) = cursor {
            out.push(Interval::from(lo, lo_closed));
        }
        Self::from_intervals(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Exact erosion: the points `x >= 0` with `interval_of(spec, x) ⊆ self`.
    ///
    /// The shifted interval is connected and canonical components are
    /// separated by nonempty gaps, so containment in the union reduces to
    /// containment in one component; each component then yields one interval
    /// of admissible `x`.
    pub fn erode(&self, spec: &IntervalSpec) -> Self {
        let m = T::from_offset(spec.lower);
        let mut out = Vec::new();
        for part in &self.parts {
            // x + m must clear the component's lower end
            let lo = part.lo.clone() - m.clone();
            let lo_closed = !spec.lower_closed || part.lo_closed;
            let hi = match (spec.upper, &part.hi) {
                (None, Upper::Infinite) => Upper::Infinite,
                (None, Upper::Finite { .. }) => continue,
                (Some(_), Upper::Infinite) => Upper::Infinite,
                (Some(n), Upper::Finite { value, closed }) => Upper::Finite {
                    value: value.clone() - T::from_offset(n),
                    closed: !spec.upper_closed || *closed,
                },
            };
            out.push(Interval { lo, lo_closed, hi });
        }
        Self::from_intervals(out)
    }

    /// Dilation: the union of `interval_of(spec, x)` over `x` in the set.
    pub fn dilate(&self, spec: &IntervalSpec) -> Self {
        let m = T::from_offset(spec.lower);
        let out = self.parts.iter().map(|part| {
            let hi = match (spec.upper, &part.hi) {
                (None, _) | (_, Upper::Infinite) => Upper::Infinite,
                (Some(n), Upper::Finite { value, closed }) => Upper::Finite {
                    value: value.clone() + T::from_offset(n),
                    closed: spec.upper_closed && *closed,
                },
            };
            Interval {
                lo: part.lo.clone() + m.clone(),
                lo_closed: spec.lower_closed && part.lo_closed,
                hi,
            }
        });
        Self::from_intervals(out.collect::<Vec<_>>())
    }

    /// Finite endpoints of all components, ascending, deduplicated.
    pub fn endpoints(&self) -> Vec<T> {
        let mut pts = Vec::new();
        for p in &self.parts {
            pts.push(p.lo.clone());
            if let Upper::Finite { value, .. } = &p.hi {
                pts.push(value.clone());
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }
}

impl<T: Scalar> FromIterator<Interval<T>> for IntervalSet<T> {
    fn from_iter<I: IntoIterator<Item = Interval<T>>>(iter: I) -> Self {
        Self::from_intervals(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<T: fmt::Display> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}, ", if self.lo_closed { '[' } else { '(' }, self.lo)?;
        match &self.hi {
            Upper::Finite { value, closed } => write!(f, "{}{}", value, if *closed { ']' } else { ')' }),
            Upper::Infinite => write!(f, "oo)"),
        }
    }
}

impl<T: fmt::Display> fmt::Display for IntervalSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn spec(m: u32, n: Option<u32>, lc: bool, uc: bool) -> IntervalSpec {
        IntervalSpec::new(m, n, lc, uc).unwrap()
    }

    #[test]
    fn interval_of_shapes() {
        let a = interval_of(&spec(0, Some(1), true, true), &r(0, 1));
        assert_eq!(a, Interval::closed(r(0, 1), r(1, 1)));
        let b = interval_of(&spec(1, None, false, false), &r(1, 2));
        assert_eq!(b, Interval::from(r(3, 2), false));
        let c = interval_of(&spec(0, Some(1), false, true), &r(2, 1));
        assert_eq!(c, Interval::new(r(2, 1), false, r(3, 1), true));
    }

    #[test]
    fn erode_examples() {
        let t = IntervalSet::single(Interval::closed(r(0, 1), r(2, 1)));
        let e = t.erode(&spec(0, Some(1), true, true));
        assert_eq!(e, IntervalSet::single(Interval::closed(r(0, 1), r(1, 1))));

        assert!(IntervalSet::<Rational>::empty().erode(&spec(1, Some(3), false, false)).is_empty());

        let tail = IntervalSet::single(Interval::from(r(3, 1), true));
        assert_eq!(tail.erode(&spec(0, None, true, false)), tail);
    }

    #[test]
    fn erode_open_bounds() {
        // (x, x+1) ⊆ [0,2]  iff  0 <= x <= 1
        let t = IntervalSet::single(Interval::closed(r(0, 1), r(2, 1)));
        let e = t.erode(&spec(0, Some(1), false, false));
        assert_eq!(e, IntervalSet::single(Interval::closed(r(0, 1), r(1, 1))));
        // [x, x+1] ⊆ (0,2)  iff  0 < x < 1
        let t = IntervalSet::single(Interval::new(r(0, 1), false, r(2, 1), false));
        let e = t.erode(&spec(0, Some(1), true, true));
        assert_eq!(e, IntervalSet::single(Interval::new(r(0, 1), false, r(1, 1), false)));
    }

    #[test]
    fn canonical_merge_and_complement() {
        let s = IntervalSet::from_intervals(vec![
            Interval::new(r(1, 1), true, r(2, 1), false),
            Interval::new(r(0, 1), true, r(1, 1), false),
            Interval::closed(r(5, 1), r(5, 1)),
        ]);
        assert_eq!(s.intervals().len(), 2);
        assert_eq!(s.to_string(), "[0, 2) U [5, 5]");
        let c = s.complement();
        assert_eq!(c.to_string(), "[2, 5) U (5, oo)");
        assert_eq!(c.complement(), s);
        // touching open ends stay apart
        let apart = IntervalSet::from_intervals(vec![
            Interval::new(r(0, 1), true, r(1, 1), false),
            Interval::new(r(1, 1), false, r(2, 1), true),
        ]);
        assert_eq!(apart.intervals().len(), 2);
    }

    #[test]
    fn generic_over_integers() {
        let s: IntervalSet<i64> = IntervalSet::single(Interval::closed(0, 10));
        let e = s.erode(&spec(2, Some(5), true, true));
        assert_eq!(e, IntervalSet::single(Interval::closed(0, 5)));
        assert_eq!(e.dilate(&spec(2, Some(5), true, true)), IntervalSet::single(Interval::closed(2, 10)));
    }
}
