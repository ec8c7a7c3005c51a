//! Proof documents and their checker.
//!
//! A node names its rule and parameters and lists its premise proofs. An
//! infinitary left rule on `bigvee` is written once, as a template whose
//! text contains numeral holes `{n}`, `{n+1}`, `{n-2}`. A `recursion` node
//! proves a family of sequents `statement({k})` by a base proof at `k = 0`
//! and a step template whose `hypothesis` leaves stand for `statement({k-1})`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::axioms::is_axiom_succedent;
use super::rules::{bigvee_disjunct, check_rule, shape, Shape, Violation};
use crate::syntax::{parse_formula, parse_sequent, Formula, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub conclusion: String,
    pub rule: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Proof>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_template: Option<OmegaTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recursion: Option<Recursion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaTemplate {
    pub parameter: String,
    pub template: Box<Proof>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recursion {
    pub parameter: String,
    /// Numeral text, possibly a hole of an enclosing template.
    pub argument: String,
    pub statement: String,
    pub base: Box<Proof>,
    pub step: Box<Proof>,
}

impl Proof {
    pub fn leaf(conclusion: &Sequent, rule: impl Into<String>) -> Proof {
        Proof {
            conclusion: conclusion.to_string(),
            rule: rule.into(),
            params: BTreeMap::new(),
            premises: Vec::new(),
            omega_template: None,
            recursion: None,
        }
    }

    pub fn node(conclusion: &Sequent, rule: impl Into<String>, premises: Vec<Proof>) -> Proof {
        Proof { premises, ..Proof::leaf(conclusion, rule) }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<String>) -> Proof {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn from_json(src: &str) -> Result<Proof, serde_json::Error> {
        serde_json::from_str(src)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("proof serializes");
        s.push('\n');
        s
    }

    /// Number of nodes, counting each template once.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
            + self.omega_template.as_ref().map_or(0, |o| o.template.size())
            + self.recursion.as_ref().map_or(0, |r| r.base.size() + r.step.size())
    }

    /// Rule names in tree order; identical for the instances of a uniform
    /// template.
    pub fn skeleton(&self) -> String {
        let mut out = String::new();
        self.skeleton_into(&mut out);
        out
    }

    fn skeleton_into(&self, out: &mut String) {
        out.push_str(&self.rule);
        out.push('(');
        for p in &self.premises {
            p.skeleton_into(out);
            out.push(',');
        }
        if let Some(o) = &self.omega_template {
            out.push_str("omega:");
            o.template.skeleton_into(out);
        }
        if let Some(r) = &self.recursion {
            out.push_str("base:");
            r.base.skeleton_into(out);
            out.push_str("step:");
            r.step.skeleton_into(out);
        }
        out.push(')');
    }
}

/// Replace the holes of `name` in `text` by `value + offset`.
pub fn fill_holes(text: &str, name: &str, value: i64) -> Result<String, Violation> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            out.push_str(&rest[open..]);
            return Ok(out);
        };
        let inner = after[..close].trim();
        match hole_value(inner, name, value) {
            Some(v) if v < 0 => return Err(Violation(format!("hole {{{inner}}} is negative at {name}={value}"))),
            Some(v) => out.push_str(&v.to_string()),
            None => out.push_str(&rest[open..open + close + 2]),
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn hole_value(inner: &str, name: &str, value: i64) -> Option<i64> {
    let tail = inner.strip_prefix(name)?.trim();
    if tail.is_empty() {
        return Some(value);
    }
    let (sign, digits) = match tail.as_bytes()[0] {
        b'+' => (1, &tail[1..]),
        b'-' => (-1, &tail[1..]),
        _ => return None,
    };
    digits.trim().parse::<i64>().ok().map(|d| value + sign * d)
}

/// Deep copy of `p` with the holes of `name` filled, stopping at inner
/// binders of the same name.
pub fn instantiate(p: &Proof, name: &str, value: i64) -> Result<Proof, Violation> {
    let fill = |s: &str| fill_holes(s, name, value);
    let mut q = Proof {
        conclusion: fill(&p.conclusion)?,
        rule: fill(&p.rule)?,
        params: p.params.iter().map(|(k, v)| Ok((k.clone(), fill(v)?))).collect::<Result<_, Violation>>()?,
        premises: p.premises.iter().map(|x| instantiate(x, name, value)).collect::<Result<_, _>>()?,
        omega_template: None,
        recursion: None,
    };
    if let Some(o) = &p.omega_template {
        let template = if o.parameter == name { o.template.clone() } else { Box::new(instantiate(&o.template, name, value)?) };
        q.omega_template = Some(OmegaTemplate { parameter: o.parameter.clone(), template });
    }
    if let Some(r) = &p.recursion {
        let shadow = r.parameter == name;
        let sub = |x: &Proof| -> Result<Box<Proof>, Violation> {
            Ok(Box::new(if shadow { x.clone() } else { instantiate(x, name, value)? }))
        };
        q.recursion = Some(Recursion {
            parameter: r.parameter.clone(),
            argument: fill(&r.argument)?,
            statement: if shadow { r.statement.clone() } else { fill(&r.statement)? },
            base: sub(&r.base)?,
            step: sub(&r.step)?,
        });
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub omega_k: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { omega_k: 3 }
    }
}

/// Largest recursion argument the checker unfolds.
pub const MAX_RECURSION: i64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathViolation {
    /// Premise indices from the root; template instances appear as
    /// `n=3`, recursion parts as `base` or `step(k=2)`.
    pub path: Vec<String>,
    pub violation: Violation,
}

impl fmt::Display for PathViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "root".to_string() } else { format!("root/{}", self.path.join("/")) };
        write!(f, "{path}: {}", self.violation)
    }
}

impl std::error::Error for PathViolation {}

pub fn check_proof(p: &Proof, cfg: &CheckConfig) -> Result<(), PathViolation> {
    Checker { cfg }.node(p, &mut Vec::new(), None)
}

struct Checker<'a> {
    cfg: &'a CheckConfig,
}

fn parse_seq(text: &str) -> Result<Sequent, Violation> {
    parse_sequent(text).map_err(|e| Violation(format!("cannot read sequent '{text}': {e}")))
}

impl Checker<'_> {
    fn node(&self, p: &Proof, path: &mut Vec<String>, hyp: Option<&Sequent>) -> Result<(), PathViolation> {
        let at = |path: &Vec<String>, v: Violation| PathViolation { path: path.clone(), violation: v };
        let conclusion = parse_seq(&p.conclusion).map_err(|v| at(path, v))?;
        if let Some(om) = &p.omega_template {
            return self.omega(p, om, &conclusion, path, hyp);
        }
        if p.recursion.is_some() || p.rule == "recursion" {
            return self.recursion(p, &conclusion, path);
        }
        if p.rule == "hypothesis" {
            let ok = p.premises.is_empty() && hyp.is_some_and(|h| h.same_multiset(&conclusion));
            return if ok { Ok(()) } else { Err(at(path, Violation("hypothesis leaf does not match the recursion hypothesis".into()))) };
        }
        let premises = p.premises.iter().map(|q| parse_seq(&q.conclusion)).collect::<Result<Vec<_>, _>>().map_err(|v| at(path, v))?;
        check_rule(&conclusion, &premises, &p.rule, &p.params).map_err(|v| at(path, v))?;
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i.to_string());
            self.node(q, path, hyp)?;
            path.pop();
        }
        Ok(())
    }

    fn omega(
        &self,
        p: &Proof,
        om: &OmegaTemplate,
        conclusion: &Sequent,
        path: &mut Vec<String>,
        hyp: Option<&Sequent>,
    ) -> Result<(), PathViolation> {
        let at = |path: &Vec<String>, msg: String| PathViolation { path: path.clone(), violation: Violation(msg) };
        if p.rule != "bigvee_l" || !p.premises.is_empty() {
            return Err(at(path, "an omega template belongs to a bigvee_l node without listed premises".into()));
        }
        let mut instances = Vec::new();
        for n in 0..=self.cfg.omega_k {
            let inst = instantiate(&om.template, &om.parameter, n as i64).map_err(|v| at(path, v.0))?;
            let seq = parse_seq(&inst.conclusion).map_err(|v| at(path, v.0))?;
            instances.push((n, inst, seq));
        }
        let fits = |i: usize| -> bool {
            let Shape::BigVee { label, term } = shape(&conclusion.ante[i]) else { return false };
            let mut ctx = conclusion.clone();
            ctx.ante.remove(i);
            instances.iter().all(|(n, _, seq)| {
                let mut e = ctx.clone();
                e.ante.push(bigvee_disjunct(label, term, *n));
                e.same_multiset(seq)
            })
        };
        if !(0..conclusion.ante.len()).any(fits) {
            return Err(at(path, "template instances are not the premises of a left bigvee rule".into()));
        }
        let skeleton = instances[0].1.skeleton();
        for (n, inst, _) in &instances {
            path.push(format!("{}={n}", om.parameter));
            if inst.skeleton() != skeleton {
                return Err(at(path, "template is not uniform in the numeral".into()));
            }
            self.node(inst, path, hyp)?;
            path.pop();
        }
        Ok(())
    }

    fn recursion(&self, p: &Proof, conclusion: &Sequent, path: &mut Vec<String>) -> Result<(), PathViolation> {
        let at = |path: &Vec<String>, msg: String| PathViolation { path: path.clone(), violation: Violation(msg) };
        let (Some(r), "recursion") = (&p.recursion, p.rule.as_str()) else {
            return Err(at(path, "recursion data and rule name must come together".into()));
        };
        if !p.premises.is_empty() {
            return Err(at(path, "a recursion node lists no premises".into()));
        }
        let arg: i64 = r.argument.trim().parse().map_err(|_| at(path, format!("bad recursion argument '{}'", r.argument)))?;
        if !(0..=MAX_RECURSION).contains(&arg) {
            return Err(at(path, format!("recursion argument {arg} out of range")));
        }
        let statement = |k: i64| -> Result<Sequent, Violation> { parse_seq(&fill_holes(&r.statement, &r.parameter, k)?) };
        let s_arg = statement(arg).map_err(|v| at(path, v.0))?;
        if !s_arg.same_multiset(conclusion) {
            return Err(at(path, "conclusion is not the statement at the argument".into()));
        }
        path.push("base".into());
        let base = instantiate(&r.base, &r.parameter, 0).map_err(|v| at(path, v.0))?;
        let s0 = statement(0).map_err(|v| at(path, v.0))?;
        if !parse_seq(&base.conclusion).map_err(|v| at(path, v.0))?.same_multiset(&s0) {
            return Err(at(path, "base does not prove the statement at 0".into()));
        }
        self.node(&base, path, None)?;
        path.pop();
        let mut skeleton = None;
        for k in 1..=arg.max(self.cfg.omega_k as i64) {
            path.push(format!("step({}={k})", r.parameter));
            let step = instantiate(&r.step, &r.parameter, k).map_err(|v| at(path, v.0))?;
            let sk = statement(k).map_err(|v| at(path, v.0))?;
            if !parse_seq(&step.conclusion).map_err(|v| at(path, v.0))?.same_multiset(&sk) {
                return Err(at(path, "step does not prove the statement".into()));
            }
            let shape = step.skeleton();
            if skeleton.get_or_insert_with(|| shape.clone()) != &shape {
                return Err(at(path, "step is not uniform in the numeral".into()));
            }
            let prev = statement(k - 1).map_err(|v| at(path, v.0))?;
            self.node(&step, path, Some(&prev))?;
            path.pop();
        }
        Ok(())
    }
}

/// Cut formulas of `p`, with templates unfolded at `0..=omega_k`.
pub fn cut_formulas(p: &Proof, cfg: &CheckConfig) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_cuts(p, cfg, &mut out);
    out
}

fn collect_cuts(p: &Proof, cfg: &CheckConfig, out: &mut Vec<Formula>) {
    if p.rule == "cut" {
        if let Some(f) = p.params.get("formula").and_then(|t| parse_formula(t).ok()) {
            out.push(f);
        }
    }
    for q in &p.premises {
        collect_cuts(q, cfg, out);
    }
    if let Some(o) = &p.omega_template {
        for n in 0..=cfg.omega_k {
            if let Ok(q) = instantiate(&o.template, &o.parameter, n as i64) {
                collect_cuts(&q, cfg, out);
            }
        }
    }
    if let Some(r) = &p.recursion {
        for n in 0..=cfg.omega_k.max(1) {
            let part = if n == 0 { &r.base } else { &r.step };
            if let Ok(q) = instantiate(part, &r.parameter, n as i64) {
                collect_cuts(&q, cfg, out);
            }
        }
    }
}

/// Every cut formula occurs on the right of some axiom other than `id`.
pub fn restricted_cuts(p: &Proof, cfg: &CheckConfig) -> bool {
    cut_formulas(p, cfg).iter().all(is_axiom_succedent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn implication_proof() {
        let p = Proof::node(
            &seq("|- C : (c : p0) -> (c : p0)"),
            "imp_r",
            vec![Proof::leaf(&seq("C : c : p0 |- C : c : p0"), "id")],
        );
        assert!(check_proof(&p, &CheckConfig::default()).is_ok());
        let mut bad = p.clone();
        bad.conclusion = "|- C : (c : p0) -> (c : p1)".into();
        bad.premises[0].conclusion = "C : c : p0 |- C : c : p1".into();
        let err = check_proof(&bad, &CheckConfig::default()).unwrap_err();
        assert_eq!(err.path, vec!["0".to_string()]);
        assert_eq!(cut_formulas(&p, &CheckConfig::default()), vec![]);
        assert!(restricted_cuts(&p, &CheckConfig::default()));
    }

    #[test]
    fn holes() {
        assert_eq!(fill_holes("Box[0,{n+1}] F^{n}(C) {m}", "n", 2).unwrap(), "Box[0,3] F^2(C) {m}");
        assert!(fill_holes("{n-1}", "n", 0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = Proof::leaf(&seq("|- C < F(C)"), "ax:f_inc").with_param("X", "C");
        let text = p.to_json();
        assert_eq!(Proof::from_json(&text).unwrap(), p);
        assert_eq!(Proof::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn omega_node() {
        // C : bigvee(c) |- C : bigvee(c) through its disjuncts
        let raw = |c: &str, rule: &str, premises: Vec<Proof>| Proof {
            conclusion: c.into(),
            rule: rule.into(),
            params: BTreeMap::new(),
            premises,
            omega_template: None,
            recursion: None,
        };
        let template = raw(
            "C : c < f^{n}(c) |- C : bigvee(c)",
            "bigvee_r",
            vec![raw("C : c < f^{n}(c) |- C : c < f^{n}(c)", "id", vec![])],
        )
        .with_param("m", "{n}");
        let p = Proof {
            omega_template: Some(OmegaTemplate { parameter: "n".into(), template: Box::new(template) }),
            ..Proof::leaf(&seq("C : bigvee(c) |- C : bigvee(c)"), "bigvee_l")
        };
        assert!(check_proof(&p, &CheckConfig { omega_k: 4 }).is_ok());
        let mut bad = p.clone();
        bad.omega_template.as_mut().unwrap().template.params.insert("m".into(), "{n+1}".into());
        assert!(check_proof(&bad, &CheckConfig::default()).is_err());
    }

    #[test]
    fn unrestricted_cut() {
        let a = "C : c : Box[0,1] p0";
        let p = Proof::node(
            &seq(&format!("{a} |- {a}")),
            "cut",
            vec![
                Proof::leaf(&seq(&format!("{a} |- {a}, {a}")), "weakening"),
                Proof::leaf(&seq(&format!("{a}, {a} |- {a}")), "weakening"),
            ],
        )
        .with_param("formula", a);
        assert!(!restricted_cuts(&p, &CheckConfig::default()));
    }
}
