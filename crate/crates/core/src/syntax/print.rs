//! Concrete syntax output. Round-trips through the parser.

use std::fmt;

use super::{Base, Body, Formula, IntervalSpec, Letter, LabelledAtom, Level, Rel, Sequent, Temporal, Term};

/// Term together with the level that decides its case.
pub struct TermDisplay(pub Level, pub Term);

impl fmt::Display for TermDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term(self.0, &self.1))
    }
}

pub(crate) fn term(level: Level, t: &Term) -> String {
    let ext = level == Level::External;
    let base = match t.base {
        Base::Const => (if ext { "C" } else { "c" }).to_string(),
        Base::Var(k) => format!("{}{k}", if ext { 'X' } else { 'x' }),
    };
    let fun = if ext { "F" } else { "f" };
    match t.depth {
        0 => base,
        1 => format!("{fun}({base})"),
        d => format!("{fun}^{d}({base})"),
    }
}

/// Text of a term at the given level.
pub fn term_text(level: Level, t: &Term) -> String {
    term(level, t)
}

/// Text of a relational formula at the given level.
pub fn rel_text(level: Level, r: &Rel) -> String {
    rel(level, r).0
}

fn var(level: Level, k: u32) -> String {
    term(level, &Term::var(k))
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        match self.upper {
            Some(n) => {
                let close = if self.upper_closed { ']' } else { ')' };
                write!(f, "{open}{},{n}{close}", self.lower)
            }
            None => write!(f, "{open}{},oo)", self.lower),
        }
    }
}

// Precedence: 0 for open-ended prefix forms (labels, quantifiers), then
// -> (1), | (2), & (3), unary and atoms (4).
const OPEN: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const TIGHT: u8 = 4;

fn paren(s: (String, u8), ok: bool) -> String {
    if ok {
        s.0
    } else {
        format!("({})", s.0)
    }
}

fn binary(l: (String, u8), op: &str, r: (String, u8), p: u8) -> (String, u8) {
    let right_assoc = p == IMP;
    let lok = if right_assoc { l.1 > p } else { l.1 >= p };
    let rok = if right_assoc { r.1 >= p } else { r.1 > p };
    (format!("{} {op} {}", paren(l, lok), paren(r, rok)), p)
}

fn unary(prefix: String, a: (String, u8)) -> (String, u8) {
    let open = a.1 == OPEN;
    let ok = open || a.1 >= TIGHT;
    (format!("{prefix}{}", paren(a, ok)), if open { OPEN } else { TIGHT })
}

pub(crate) fn rel(level: Level, r: &Rel) -> (String, u8) {
    match r {
        Rel::Eq(a, b) => (format!("{} = {}", term(level, a), term(level, b)), TIGHT),
        Rel::Lt(a, b) => (format!("{} < {}", term(level, a), term(level, b)), TIGHT),
        Rel::BigVee(t) => (format!("bigvee({})", term(level, t)), TIGHT),
        Rel::Not(a) => unary("~".into(), rel(level, a)),
        Rel::And(a, b) => binary(rel(level, a), "&", rel(level, b), AND),
        Rel::Or(a, b) => binary(rel(level, a), "|", rel(level, b), OR),
        Rel::Imp(a, b) => binary(rel(level, a), "->", rel(level, b), IMP),
        Rel::Forall(v, a) => (format!("forall {}. {}", var(level, *v), rel(level, a).0), OPEN),
        Rel::Exists(v, a) => (format!("exists {}. {}", var(level, *v), rel(level, a).0), OPEN),
    }
}

trait AtomText {
    fn text(&self) -> (String, u8);
}

impl AtomText for Letter {
    fn text(&self) -> (String, u8) {
        (format!("p{}", self.0), TIGHT)
    }
}

impl AtomText for LabelledAtom {
    fn text(&self) -> (String, u8) {
        (format!("{} : {}", term(Level::Internal, &self.label), temporal(&self.body).0), OPEN)
    }
}

fn temporal<A: AtomText>(t: &Temporal<A>) -> (String, u8) {
    match t {
        Temporal::Atom(a) => a.text(),
        Temporal::Not(a) => unary("~".into(), temporal(a)),
        Temporal::Box(s, a) => unary(format!("Box{s} "), temporal(a)),
        Temporal::And(a, b) => binary(temporal(a), "&", temporal(b), AND),
        Temporal::Or(a, b) => binary(temporal(a), "|", temporal(b), OR),
        Temporal::Imp(a, b) => binary(temporal(a), "->", temporal(b), IMP),
    }
}

impl fmt::Display for Rel {
    /// Printed at the internal level; use [`Formula`] for external context.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rel(Level::Internal, self).0)
    }
}

impl fmt::Display for Temporal<Letter> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&temporal(self).0)
    }
}

impl fmt::Display for Temporal<LabelledAtom> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&temporal(self).0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel(r) => f.write_str(&rel(Level::External, r).0),
            Formula::Lab(s, body) => {
                let inner = match body {
                    Body::Rel(r) => rel(Level::Internal, r).0,
                    Body::Temporal(b) => temporal(b).0,
                };
                write!(f, "{} : {inner}", term(Level::External, s))
            }
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sequent(self))
    }
}

pub fn print_sequent(s: &Sequent) -> String {
    let join = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let ante = join(&s.ante);
    let succ = join(&s.succ);
    match (ante.is_empty(), succ.is_empty()) {
        (true, true) => "|-".into(),
        (true, false) => format!("|- {succ}"),
        (false, true) => format!("{ante} |-"),
        (false, false) => format!("{ante} |- {succ}"),
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_sequent};

    fn roundtrip(src: &str, expect: &str) {
        let f = parse_formula(src).unwrap();
        assert_eq!(f.to_string(), expect);
        assert_eq!(parse_formula(expect).unwrap(), f);
    }

    #[test]
    fn canonical_text() {
        roundtrip("C:c:p0", "C : c : p0");
        roundtrip("C < F(C)", "C < F(C)");
        roundtrip("C : c : Box[0,1] p0 -> Box(2,oo) p1", "C : c : Box[0,1] p0 -> Box(2,oo) p1");
        assert!(parse_formula("(C : c : p0) & (C : c : p1)").is_err());
        roundtrip("C : (c : p0) & (c : p1)", "C : (c : p0) & (c : p1)");
        roundtrip("~(X0 < C | X0 = C)", "~(X0 < C | X0 = C)");
        roundtrip("(X0 < C -> X1 < C) -> C = C", "(X0 < C -> X1 < C) -> C = C");
        roundtrip("X0 < C -> (X1 < C -> C = C)", "X0 < C -> X1 < C -> C = C");
        roundtrip("forall X0. bigvee(X0)", "forall X0. bigvee(X0)");
        roundtrip("C : f(f(f(c))) < x2", "C : f^3(c) < x2");
        roundtrip("(forall X0. X0 = X0) & C = C", "(forall X0. X0 = X0) & C = C");
        roundtrip("C : ~(c : p0)", "C : ~c : p0");
        roundtrip("C : (~c : p0) & (c : p1)", "C : (~c : p0) & (c : p1)");
    }

    #[test]
    fn sequent_text() {
        let s = parse_sequent("C:c:p0 , C < F(C) |- C : c : p0").unwrap();
        assert_eq!(s.to_string(), "C : c : p0, C < F(C) |- C : c : p0");
        assert_eq!(parse_sequent("|- C = C").unwrap().to_string(), "|- C = C");
        assert_eq!(parse_sequent("C = C |-").unwrap().to_string(), "C = C |-");
    }
}
