//! Line-oriented family format.
//!
//! ```text
//! # elgi-family n=3 order=2
//! I(1;2) : -1*H{1,2} +1*H{1} +1*H{2} >= 0
//! ```
//!
//! One inequality per line, `label : terms >= 0`; each term is a sign, an
//! exact rational (`p` or `p/q`) and `*H{…}` with 1-based time labels. Terms
//! are written highest cardinality first, lexicographic within a level.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{coordinates, Inequality, InequalityFamily};
use crate::error::{Error, Result};
use crate::temporal::SubsetMask;
use crate::Rational;

pub fn format_inequality(ineq: &Inequality) -> String {
    let terms: Vec<String> = coordinates(ineq.n())
        .into_iter()
        .filter_map(|s| ineq.coeffs().get(&s).map(|c| (s, c)))
        .map(|(s, c)| {
            let sign = if c.is_negative() { '-' } else { '+' };
            format!("{sign}{}*H{s}", c.abs())
        })
        .collect();
    format!("{} : {} >= 0", ineq.label(), terms.join(" "))
}

pub fn format_family(family: &InequalityFamily) -> String {
    let mut out = format!("# elgi-family n={} order={}\n", family.n(), family.order());
    for m in family.members() {
        out.push_str(&format_inequality(m));
        out.push('\n');
    }
    out
}

pub fn parse_inequality(line: &str, n: usize) -> Result<Inequality> {
    let err = |msg: &str| Error::Parse(format!("{msg}: '{line}'"));
    let (label, body) = line.split_once(" : ").ok_or_else(|| err("missing ' : ' separator"))?;
    let body = body.strip_suffix(" >= 0").ok_or_else(|| err("missing trailing ' >= 0'"))?;
    let mut coeffs: BTreeMap<SubsetMask, Rational> = BTreeMap::new();
    for term in body.split(' ') {
        let (neg, rest) = match term.as_bytes().first() {
            Some(b'+') => (false, &term[1..]),
            Some(b'-') => (true, &term[1..]),
            _ => return Err(err("term without sign")),
        };
        let (coef, subset) = rest.split_once("*H").ok_or_else(|| err("term without '*H'"))?;
        let coef = parse_rational(coef).ok_or_else(|| err("bad coefficient"))?;
        let inner = subset
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| err("subset must be written {i,j,...}"))?;
        let mut mask = SubsetMask(0);
        for lab in inner.split(',') {
            let i: usize = lab.parse().map_err(|_| err("bad time label"))?;
            if i == 0 || i > n {
                return Err(err("time label out of range"));
            }
            if mask.contains(i - 1) {
                return Err(err("repeated time label"));
            }
            mask = mask.with(i - 1);
        }
        if coeffs.contains_key(&mask) {
            return Err(err("repeated subset"));
        }
        coeffs.insert(mask, if neg { -coef } else { coef });
    }
    Inequality::new(n, coeffs, label)
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.parse::<BigInt>().ok()?, b.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den.is_zero() || num.is_negative() || den.is_negative() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn parse_family(text: &str) -> Result<InequalityFamily> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty family text".into()))?;
    let rest = header.strip_prefix("# elgi-family ").ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
    let mut n = None;
    let mut order = None;
    for field in rest.split(' ') {
        match field.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("order", v)) => order = v.parse::<usize>().ok(),
            _ => return Err(Error::Parse(format!("bad header field '{field}'"))),
        }
    }
    let (n, order) = match (n, order) {
        (Some(n), Some(o)) => (n, o),
        _ => return Err(Error::Parse(format!("header needs n= and order=: '{header}'"))),
    };
    let members = lines.filter(|l| !l.trim().is_empty()).map(|l| parse_inequality(l, n)).collect::<Result<Vec<_>>>()?;
    InequalityFamily::new(n, order, members)
}
