//! Shannon-type entropic inequalities over joint-entropy coordinates.
//!
//! Coefficients are exact rationals. Every inequality reads
//! `Σ_S c_S H(Q_S) ≥ 0`; canonical form scales by a positive factor to coprime
//! integers (an inequality's sign is never flipped).

mod fm;
mod lp;
mod presets;
mod text;

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::temporal::{all_subsets, lex_key, EntropyVector, SubsetMask};
use crate::Rational;

pub use fm::{
    project_to_order, project_to_order_with_cap, remove_redundant, remove_redundant_within_order, DEFAULT_SIZE_CAP,
};
pub use lp::is_conic_combination;
pub use presets::{
    asymptotic_closed_form, closed_form_with, conditional_entropy_ineq, devi_forms, elemental_inequalities,
    elemental_on, elgi_family, mixed_state_closed_form, mutual_information_ineq, Elgi,
};
pub use text::{format_family, format_inequality, parse_family, parse_inequality};

/// Largest number of time variables accepted by the generators.
pub const MAX_VARIABLES: usize = 8;

/// Default violation threshold (nats).
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `Σ_S c_S H(Q_S) ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    n: usize,
    coeffs: BTreeMap<SubsetMask, Rational>,
    label: String,
}

impl Inequality {
    /// Zero coefficients are dropped; an all-zero functional is rejected.
    pub fn new(n: usize, coeffs: BTreeMap<SubsetMask, Rational>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.contains(':') || label.chars().any(char::is_control) {
            return domain(format!("label {label:?} may not contain ':' or control characters"));
        }
        let full = SubsetMask::full(n);
        let mut kept = BTreeMap::new();
        for (s, c) in coeffs {
            if s.is_empty() || !s.is_subset_of(full) {
                return domain(format!("subset {s} is not a nonempty subset of {} variables", n));
            }
            if !c.is_zero() {
                kept.insert(s, c);
            }
        }
        if kept.is_empty() {
            return domain("inequality has no nonzero coefficient");
        }
        Ok(Self { n, coeffs: kept, label })
    }

    /// Integer coefficients, convenient for hand-written forms.
    pub fn from_terms(n: usize, terms: &[(SubsetMask, i64)], label: impl Into<String>) -> Result<Self> {
        let mut coeffs: BTreeMap<SubsetMask, Rational> = BTreeMap::new();
        for &(s, c) in terms {
            *coeffs.entry(s).or_insert_with(Rational::zero) += Rational::from_integer(c.into());
        }
        Self::new(n, coeffs, label)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn coeffs(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, s: SubsetMask) -> Rational {
        self.coeffs.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest cardinality carrying a nonzero coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Positive rescaling to coprime integers.
    pub fn canonical(&self) -> Self {
        let lcm = self.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.values().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let coeffs = self.coeffs.keys().zip(ints).map(|(s, c)| (*s, Rational::from_integer(c / &gcd))).collect();
        Self { n: self.n, coeffs, label: self.label.clone() }
    }

    /// Dense coefficients in the order of `coords`.
    pub fn dense(&self, coords: &[SubsetMask]) -> Vec<Rational> {
        coords.iter().map(|s| self.coeff(*s)).collect()
    }

    /// Identity of the canonical form (labels ignored).
    pub fn key(&self) -> Vec<(SubsetMask, BigInt)> {
        self.canonical().coeffs.into_iter().map(|(s, c)| (s, c.to_integer())).collect()
    }

    /// Same half-space up to positive scaling.
    pub fn same_form(&self, other: &Self) -> bool {
        self.n == other.n && self.key() == other.key()
    }

    /// Relabel time indices: variable `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, c)| (SubsetMask::from_indices(s.indices().map(|i| perm[i])), c.clone()))
            .collect();
        Self { n: self.n, coeffs, label: self.label.clone() }
    }

    pub fn value<T: Real>(&self, h: &EntropyVector<T>) -> Result<T> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (s, c) in &self.coeffs {
            let hs = h.get(*s).ok_or_else(|| Error::Domain(format!("entropy vector has no value for H{s}")))?;
            terms.push(T::lit(c.to_f64().expect("finite coefficient")) * hs);
        }
        Ok(crate::scalar::compensated_sum(terms))
    }

    /// Sort key used for canonical family order.
    fn sort_key(&self, coords: &[SubsetMask]) -> (Reverse<usize>, Vec<Reverse<BigInt>>) {
        let c = self.canonical();
        (Reverse(c.order()), coords.iter().map(|s| Reverse(c.coeff(*s).to_integer())).collect())
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_inequality(self))
    }
}

/// Coordinates of `n` variables, highest cardinality first, lexicographic within.
pub fn coordinates(n: usize) -> Vec<SubsetMask> {
    let mut v = all_subsets(n);
    v.sort_by_key(|s| {
        let (card, idx) = lex_key(*s);
        (Reverse(card), idx)
    });
    v
}

/// Canonicalized, deduplicated set of inequalities on `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityFamily {
    n: usize,
    order: usize,
    members: Vec<Inequality>,
}

impl InequalityFamily {
    /// Members are canonicalized, sorted and deduplicated (first label wins
    /// in input order).
    pub fn new(n: usize, order: usize, members: Vec<Inequality>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|m| m.n != n) {
            return domain(format!("member '{}' has {} variables, family has {n}", bad.label, bad.n));
        }
        if let Some(bad) = members.iter().find(|m| m.order() > order) {
            return domain(format!("member '{}' exceeds family order {order}", bad.label));
        }
        let mut seen = BTreeMap::new();
        for m in members {
            let c = m.canonical();
            seen.entry(c.key()).or_insert(c);
        }
        let coords = coordinates(n);
        let mut members: Vec<(_, Inequality)> = seen.into_values().map(|m| (m.sort_key(&coords), m)).collect();
        members.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Self { n, order, members: members.into_iter().map(|(_, m)| m).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[Inequality] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_form(&self, ineq: &Inequality) -> bool {
        let key = ineq.key();
        self.members.iter().any(|m| m.key() == key)
    }

    /// Set equality of canonical forms.
    pub fn same_forms(&self, other: &Self) -> bool {
        let a: std::collections::BTreeSet<_> = self.members.iter().map(Inequality::key).collect();
        let b: std::collections::BTreeSet<_> = other.members.iter().map(Inequality::key).collect();
        self.n == other.n && a == b
    }

    /// Evaluate every member.
    pub fn evaluate<T: Real>(&self, h: &EntropyVector<T>, tol: T) -> Result<Vec<ViolationReport<T>>> {
        self.members.iter().map(|m| evaluate(m, h, tol)).collect()
    }

    /// Smallest member value.
    pub fn minimum<T: Real>(&self, h: &EntropyVector<T>) -> Result<T> {
        let mut best = T::infinity();
        for m in &self.members {
            best = best.min(m.value(h)?);
        }
        Ok(best)
    }
}

/// Outcome of testing one inequality on one entropy vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport<T> {
    pub label: String,
    pub value: T,
    pub violated: bool,
    pub tolerance: T,
}

/// `value = Σ c_S h(S)`; violated iff `value < -tol`.
pub fn evaluate<T: Real>(ineq: &Inequality, h: &EntropyVector<T>, tol: T) -> Result<ViolationReport<T>> {
    let value = ineq.value(h)?;
    Ok(ViolationReport { label: ineq.label.clone(), value, violated: value < -tol, tolerance: tol })
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_VARIABLES).contains(&n) {
        return domain(format!("number of variables must be in 2..={MAX_VARIABLES}, got {n}"));
    }
    Ok(())
}

pub(crate) fn rational(x: i64) -> Rational {
    Rational::from_integer(x.into())
}
