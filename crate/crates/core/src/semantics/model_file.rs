//! TOML model files.
//!
//! ```toml
//! [[region]]
//! letter = "p0"
//! ext = "[0/1, oo)"
//! int = "[0/1, 2/1] U (3/1, 4/1)"
//!
//! [assign]
//! X0 = "1/2"
//! x0 = "0/1"
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Model, Region};
use crate::interval::{Interval, Upper};
use crate::{Rational, RationalInterval, RationalIntervalSet};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("model file is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("bad rational '{0}'")]
    Rational(String),
    #[error("bad interval '{0}'")]
    Interval(String),
    #[error("bad name '{0}'")]
    Name(String),
}

#[derive(Serialize, Deserialize, Default)]
struct RawModel {
    #[serde(default, rename = "region")]
    regions: Vec<RawRegion>,
    #[serde(default)]
    assign: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RawRegion {
    letter: String,
    ext: String,
    int: String,
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `n/d`, a bare integer `n`, or a decimal-free fraction with spaces.
pub fn parse_rational(s: &str) -> Result<Rational, ModelFileError> {
    let bad = || ModelFileError::Rational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    let q = Rational::new(n, d);
    if q < Rational::from_integer(0) {
        return Err(bad());
    }
    Ok(q)
}

fn format_interval(i: &RationalInterval) -> String {
    let open = if i.lo_closed { '[' } else { '(' };
    match &i.hi {
        Upper::Finite { value, closed } => {
            format!("{open}{}, {}{}", format_rational(&i.lo), format_rational(value), if *closed { ']' } else { ')' })
        }
        Upper::Infinite => format!("{open}{}, oo)", format_rational(&i.lo)),
    }
}

fn format_set(s: &RationalIntervalSet) -> String {
    if s.is_empty() {
        return "{}".into();
    }
    s.intervals().iter().map(format_interval).collect::<Vec<_>>().join(" U ")
}

pub fn parse_interval(s: &str) -> Result<RationalInterval, ModelFileError> {
    let bad = || ModelFileError::Interval(s.to_string());
    let t = s.trim();
    let lo_closed = match t.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(bad()),
    };
    let hi_closed = match t.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(bad()),
    };
    let inner = &t[1..t.len() - 1];
    let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
    let lo = parse_rational(lo).map_err(|_| bad())?;
    if hi.trim() == "oo" {
        if hi_closed {
            return Err(bad());
        }
        return Ok(Interval::from(lo, lo_closed));
    }
    let hi = parse_rational(hi).map_err(|_| bad())?;
    Ok(Interval::new(lo, lo_closed, hi, hi_closed))
}

pub fn parse_interval_set(s: &str) -> Result<RationalIntervalSet, ModelFileError> {
    let t = s.trim();
    if t == "{}" || t.is_empty() {
        return Ok(RationalIntervalSet::empty());
    }
    let parts = t.split(" U ").map(parse_interval).collect::<Result<Vec<_>, _>>()?;
    Ok(RationalIntervalSet::from_intervals(parts))
}

fn parse_index(name: &str, prefix: char) -> Option<u32> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl Model {
    pub fn from_toml(src: &str) -> Result<Model, ModelFileError> {
        let raw: RawModel = toml::from_str(src)?;
        let mut m = Model::default();
        for r in raw.regions {
            let letter = parse_index(&r.letter, 'p').ok_or_else(|| ModelFileError::Name(r.letter.clone()))?;
            m.regions.push(Region { letter, ext: parse_interval(&r.ext)?, int: parse_interval_set(&r.int)? });
        }
        for (name, val) in raw.assign {
            let q = parse_rational(&val)?;
            if let Some(k) = parse_index(&name, 'X') {
                m.ext_assign.insert(k, q);
            } else if let Some(k) = parse_index(&name, 'x') {
                m.int_assign.insert(k, q);
            } else {
                return Err(ModelFileError::Name(name));
            }
        }
        Ok(m)
    }

    pub fn to_toml(&self) -> String {
        let mut raw = RawModel::default();
        for r in &self.regions {
            raw.regions.push(RawRegion {
                letter: format!("p{}", r.letter),
                ext: format_interval(&r.ext),
                int: format_set(&r.int),
            });
        }
        for (k, v) in &self.ext_assign {
            raw.assign.insert(format!("X{k}"), format_rational(v));
        }
        for (k, v) in &self.int_assign {
            raw.assign.insert(format!("x{k}"), format_rational(v));
        }
        toml::to_string(&raw).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let src = r#"
[[region]]
letter = "p0"
ext = "[0/1, oo)"
int = "[0/1, 2/1] U (3, 4)"

[assign]
X0 = "1/2"
x0 = "0/1"
"#;
        let m = Model::from_toml(src).unwrap();
        assert_eq!(m.regions[0].int.to_string(), "[0, 2] U (3, 4)");
        assert_eq!(m.ext_assign[&0], Rational::new(1, 2));
        let again = Model::from_toml(&m.to_toml()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-1/2").is_err());
        assert!(parse_interval("[0, oo]").is_err());
        assert!(Model::from_toml("[assign]\nY0 = \"1\"").is_err());
    }
}
