//! Parser for formulas and sequents.
//!
//! Parsing runs in two passes: a precedence parser builds an untyped tree,
//! which is then sorted into the stratified types. Stratification errors
//! name the violated rule.

use super::{
    Base, Body, ExternalTemporal, Formula, IntervalSpec, InternalTemporal, LabelledAtom, Letter, Level, Rel, Sequent,
    SyntaxError, Temporal, Term,
};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Tilde,
    And,
    Or,
    Arrow,
    Turnstile,
    Lt,
    Le,
    Eq,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = src.get(i..i + 2).unwrap_or("");
        let tok = if two == "->" {
            i += 2;
            Tok::Arrow
        } else if two == "|-" {
            i += 2;
            Tok::Turnstile
        } else if two == "<=" {
            i += 2;
            Tok::Le
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse()
                .map_err(|_| SyntaxError::Parse { pos: start, msg: "number too large".into() })?;
            Tok::Num(n)
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Word(src[start..i].to_string())
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '~' | '!' => Tok::Tilde,
                '&' => Tok::And,
                '|' => Tok::Or,
                '<' => Tok::Lt,
                '=' => Tok::Eq,
                '^' => Tok::Caret,
                _ => return Err(SyntaxError::Parse { pos: start, msg: format!("unexpected character '{c}'") }),
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct LTerm {
    level: Level,
    term: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bin {
    And,
    Or,
    Imp,
}

#[derive(Clone, Debug)]
enum Ex {
    Eq(LTerm, LTerm),
    Lt(LTerm, LTerm),
    Le(LTerm, LTerm),
    BigVee(LTerm),
    Letter(u32),
    Not(Box<Ex>),
    Bin(Bin, Box<Ex>, Box<Ex>),
    Box(IntervalSpec, Box<Ex>),
    Quant(bool, Level, u32, Box<Ex>),
    Label(LTerm, Box<Ex>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(SyntaxError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn num(&mut self) -> PResult<u32> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn formula(&mut self) -> PResult<Ex> {
        let lhs = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Ex::Bin(Bin::Imp, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> PResult<Ex> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.conj()?;
            lhs = Ex::Bin(Bin::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Ex> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Ex::Bin(Bin::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Ex> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Ex::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Word(w)) => {
                let w = w.clone();
                match w.as_str() {
                    "Box" => {
                        self.pos += 1;
                        let spec = self.spec()?;
                        Ok(Ex::Box(spec, Box::new(self.unary()?)))
                    }
                    "forall" | "exists" => {
                        self.pos += 1;
                        let v = self.term()?;
                        let idx = match (v.term.base, v.term.depth) {
                            (Base::Var(k), 0) => k,
                            _ => return self.err("expected a variable after quantifier"),
                        };
                        self.expect(Tok::Dot, "'.'")?;
                        let body = self.formula()?;
                        Ok(Ex::Quant(w == "forall", v.level, idx, Box::new(body)))
                    }
                    "bigvee" => {
                        self.pos += 1;
                        self.expect(Tok::LParen, "'('")?;
                        let t = self.term()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Ex::BigVee(t))
                    }
                    _ if is_letter(&w).is_some() => {
                        self.pos += 1;
                        Ok(Ex::Letter(is_letter(&w).unwrap()))
                    }
                    _ => self.after_term(),
                }
            }
            Some(_) => self.err("expected a formula"),
            None => self.err("unexpected end of input"),
        }
    }

    fn after_term(&mut self) -> PResult<Ex> {
        let t = self.term()?;
        match self.bump() {
            Some(Tok::Colon) => Ok(Ex::Label(t, Box::new(self.formula()?))),
            Some(Tok::Lt) => Ok(Ex::Lt(t, self.term()?)),
            Some(Tok::Le) => Ok(Ex::Le(t, self.term()?)),
            Some(Tok::Eq) => Ok(Ex::Eq(t, self.term()?)),
            _ => {
                self.pos -= 1;
                self.err("expected ':', '<', '<=' or '=' after term")
            }
        }
    }

    fn spec(&mut self) -> PResult<IntervalSpec> {
        let lc = match self.bump() {
            Some(Tok::LBrack) => true,
            Some(Tok::LParen) => false,
            _ => {
                self.pos -= 1;
                return self.err("expected '[' or '(' after Box");
            }
        };
        let m = self.num()?;
        self.expect(Tok::Comma, "','")?;
        let n = match self.peek() {
            Some(Tok::Word(w)) if w == "oo" => {
                self.pos += 1;
                None
            }
            _ => Some(self.num()?),
        };
        let uc = match self.bump() {
            Some(Tok::RBrack) => true,
            Some(Tok::RParen) => false,
            _ => {
                self.pos -= 1;
                return self.err("expected ']' or ')'");
            }
        };
        let at = self.offset();
        IntervalSpec::new(m, n, lc, uc).map_err(|e| SyntaxError::Parse { pos: at, msg: e.to_string() })
    }

    fn term(&mut self) -> PResult<LTerm> {
        let w = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return self.err("expected a term"),
        };
        self.pos += 1;
        match w.as_str() {
            "c" | "C" => Ok(LTerm { level: level_of(&w), term: Term::CONST }),
            "f" | "F" => {
                let level = level_of(&w);
                let mut k = 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    k = self.num()?;
                }
                self.expect(Tok::LParen, "'('")?;
                let inner = self.term()?;
                if inner.level != level {
                    return self.err("function and argument are at different levels");
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(LTerm { level, term: inner.term.apply(k) })
            }
            _ => match var_of(&w) {
                Some((level, k)) => Ok(LTerm { level, term: Term { base: Base::Var(k), depth: 0 } }),
                None => {
                    self.pos -= 1;
                    self.err(format!("unknown identifier '{w}'"))
                }
            },
        }
    }
}

fn level_of(w: &str) -> Level {
    if w.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
        Level::External
    } else {
        Level::Internal
    }
}

fn var_of(w: &str) -> Option<(Level, u32)> {
    let rest = w.strip_prefix('x').or_else(|| w.strip_prefix('X'))?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((level_of(w), rest.parse().ok()?))
}

fn is_letter(w: &str) -> Option<u32> {
    let rest = w.strip_prefix('p')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn strat<T>(msg: &str) -> PResult<T> {
    Err(SyntaxError::Stratification(msg.into()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Relational,
    Temporal,
}

/// Leaf kinds below `e`, labels counting as temporal.
fn kinds(e: &Ex, out: &mut Vec<Kind>) {
    match e {
        Ex::Eq(..) | Ex::Lt(..) | Ex::Le(..) | Ex::BigVee(_) | Ex::Quant(..) => out.push(Kind::Relational),
        Ex::Letter(_) | Ex::Label(..) | Ex::Box(..) => out.push(Kind::Temporal),
        Ex::Not(a) => kinds(a, out),
        Ex::Bin(_, a, b) => {
            kinds(a, out);
            kinds(b, out);
        }
    }
}

fn uniform_kind(e: &Ex) -> PResult<Kind> {
    let mut ks = Vec::new();
    kinds(e, &mut ks);
    let first = ks[0];
    if ks.iter().any(|k| *k != first) {
        return strat("relational and temporal formulas cannot be combined by a connective");
    }
    Ok(first)
}

fn to_formula(e: &Ex) -> PResult<Formula> {
    match e {
        Ex::Label(t, body) => {
            if t.level != Level::External {
                return strat("a top-level label must be an external term");
            }
            Ok(Formula::Lab(t.term, to_body(body)?))
        }
        _ => match uniform_kind(e)? {
            Kind::Relational => {
                let r = to_rel(e, Level::External)?;
                check_bigvee(&r)?;
                Ok(Formula::Rel(r))
            }
            Kind::Temporal => strat("temporal formulas need an external label"),
        },
    }
}

fn to_body(e: &Ex) -> PResult<Body> {
    match uniform_kind(e)? {
        Kind::Relational => {
            let r = to_rel(e, Level::Internal)?;
            check_bigvee(&r)?;
            Ok(Body::Rel(r))
        }
        Kind::Temporal => Ok(Body::Temporal(to_ext(e)?)),
    }
}

fn to_ext(e: &Ex) -> PResult<ExternalTemporal> {
    Ok(match e {
        Ex::Label(t, body) => {
            if t.level != Level::Internal {
                return strat("an external label cannot occur under an external label");
            }
            Temporal::Atom(LabelledAtom { label: t.term, body: to_int(body)? })
        }
        Ex::Letter(_) => return strat("a propositional letter needs an internal label"),
        Ex::Not(a) => Temporal::Not(Box::new(to_ext(a)?)),
        Ex::Box(s, a) => Temporal::Box(*s, Box::new(to_ext(a)?)),
        Ex::Bin(op, a, b) => bin(*op, to_ext(a)?, to_ext(b)?),
        _ => return strat("relational and temporal formulas cannot be combined by a connective"),
    })
}

fn to_int(e: &Ex) -> PResult<InternalTemporal> {
    Ok(match e {
        Ex::Letter(k) => Temporal::Atom(Letter(*k)),
        Ex::Label(..) => return strat("an internal label cannot occur under an internal label"),
        Ex::Not(a) => Temporal::Not(Box::new(to_int(a)?)),
        Ex::Box(s, a) => Temporal::Box(*s, Box::new(to_int(a)?)),
        Ex::Bin(op, a, b) => bin(*op, to_int(a)?, to_int(b)?),
        _ => return strat("relational formulas cannot occur under an internal label"),
    })
}

fn bin<A>(op: Bin, a: Temporal<A>, b: Temporal<A>) -> Temporal<A> {
    let (a, b) = (Box::new(a), Box::new(b));
    match op {
        Bin::And => Temporal::And(a, b),
        Bin::Or => Temporal::Or(a, b),
        Bin::Imp => Temporal::Imp(a, b),
    }
}

fn to_rel(e: &Ex, level: Level) -> PResult<Rel> {
    let term = |t: &LTerm| -> PResult<Term> {
        if t.level != level {
            return strat(match level {
                Level::External => "internal term in an external relational formula",
                Level::Internal => "external term in an internal relational formula",
            });
        }
        Ok(t.term)
    };
    Ok(match e {
        Ex::Eq(a, b) => Rel::Eq(term(a)?, term(b)?),
        Ex::Lt(a, b) => Rel::Lt(term(a)?, term(b)?),
        Ex::Le(a, b) => Rel::le(term(a)?, term(b)?),
        Ex::BigVee(t) => Rel::BigVee(term(t)?),
        Ex::Not(a) => Rel::Not(Box::new(to_rel(a, level)?)),
        Ex::Bin(op, a, b) => {
            let (a, b) = (Box::new(to_rel(a, level)?), Box::new(to_rel(b, level)?));
            match op {
                Bin::And => Rel::And(a, b),
                Bin::Or => Rel::Or(a, b),
                Bin::Imp => Rel::Imp(a, b),
            }
        }
        Ex::Quant(forall, l, v, body) => {
            if *l != level {
                return strat("quantified variable is at the wrong level");
            }
            let body = Box::new(to_rel(body, level)?);
            if *forall {
                Rel::Forall(*v, body)
            } else {
                Rel::Exists(*v, body)
            }
        }
        _ => return strat("relational and temporal formulas cannot be combined by a connective"),
    })
}

/// `bigvee(t)` may only be a whole relational formula, or the body of a
/// universal quantifier binding its argument.
fn check_bigvee(r: &Rel) -> PResult<()> {
    fn contains(r: &Rel) -> bool {
        match r {
            Rel::BigVee(_) => true,
            Rel::Eq(..) | Rel::Lt(..) => false,
            Rel::Not(a) | Rel::Forall(_, a) | Rel::Exists(_, a) => contains(a),
            Rel::And(a, b) | Rel::Or(a, b) | Rel::Imp(a, b) => contains(a) || contains(b),
        }
    }
    match r {
        Rel::BigVee(_) => Ok(()),
        Rel::Forall(v, a) if matches!(&**a, Rel::BigVee(t) if *t == Term::var(*v)) => Ok(()),
        _ if contains(r) => strat("bigvee(t) is only allowed alone or as forall x. bigvee(x)"),
        _ => Ok(()),
    }
}

fn finish(p: &Parser) -> PResult<()> {
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(())
}

pub fn parse_formula(src: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(src)?;
    let e = p.formula()?;
    finish(&p)?;
    to_formula(&e)
}

pub fn parse_sequent(src: &str) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(src)?;
    let side = |p: &mut Parser, stop_at_turnstile: bool| -> PResult<Vec<Formula>> {
        let mut out = Vec::new();
        let at_end = |p: &Parser| match p.peek() {
            None => true,
            Some(Tok::Turnstile) => stop_at_turnstile,
            _ => false,
        };
        if at_end(p) {
            return Ok(out);
        }
        loop {
            out.push(to_formula(&p.formula()?)?);
            if p.peek() == Some(&Tok::Comma) {
                p.pos += 1;
            } else {
                return Ok(out);
            }
        }
    };
    let ante = side(&mut p, true)?;
    p.expect(Tok::Turnstile, "'|-'")?;
    let succ = side(&mut p, false)?;
    finish(&p)?;
    Ok(Sequent { ante, succ })
}

/// Parse a bare term; its level is read off the case of its first symbol.
pub fn parse_term(src: &str) -> Result<(Level, Term), SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    finish(&p)?;
    Ok((t.level, t.term))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let f = parse_formula("C : c : p0 & p1 | p2 -> p3").unwrap();
        assert_eq!(f.to_string(), "C : c : p0 & p1 | p2 -> p3");
        let Formula::Lab(_, Body::Temporal(Temporal::Atom(a))) = f else { panic!() };
        assert!(matches!(a.body, Temporal::Imp(..)));
    }

    #[test]
    fn stratification_errors() {
        let e = parse_formula("C : x0 : Box[0,1] (c : p0)").unwrap_err();
        assert!(matches!(e, SyntaxError::Stratification(ref m) if m.contains("internal label")));
        assert!(matches!(parse_formula("c : p0"), Err(SyntaxError::Stratification(_))));
        assert!(matches!(parse_formula("C : C : p0"), Err(SyntaxError::Stratification(_))));
        assert!(matches!(parse_formula("C : p0"), Err(SyntaxError::Stratification(_))));
        assert!(matches!(parse_formula("C < c"), Err(SyntaxError::Stratification(_))));
        assert!(matches!(parse_formula("C : (c : p0) & c < x0"), Err(SyntaxError::Stratification(_))));
        assert!(matches!(parse_formula("~bigvee(C)"), Err(SyntaxError::Stratification(_))));
        assert!(parse_formula("C : forall x1. bigvee(x1)").is_ok());
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_formula("C : c : Box[1,1] p0") {
            Err(SyntaxError::Parse { pos, .. }) => assert!(pos > 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_formula("C : c : p0 )"), Err(SyntaxError::Parse { pos: 11, .. })));
        assert!(parse_formula("F(c) = C").is_err());
    }

    #[test]
    fn le_is_sugar() {
        assert_eq!(parse_formula("X0 <= C").unwrap(), parse_formula("X0 < C | X0 = C").unwrap());
    }

    #[test]
    fn terms() {
        assert_eq!(parse_term("f^2(f(x3))").unwrap(), (Level::Internal, Term::var(3).apply(3)));
        assert_eq!(parse_term("F(C)").unwrap(), (Level::External, Term::constant_iter(1)));
    }
}
