//! Fourier–Motzkin projection and redundancy removal, both exact.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{coordinates, is_conic_combination, Inequality, InequalityFamily};
use crate::error::{domain, Error, Result};
use crate::temporal::{lex_key, SubsetMask};
use crate::Rational;

/// Cap on intermediate member count during elimination.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// Project onto the coordinates of cardinality `≤ k`.
pub fn project_to_order(family: &InequalityFamily, k: usize) -> Result<InequalityFamily> {
    project_to_order_with_cap(family, k, DEFAULT_SIZE_CAP)
}

/// [`project_to_order`] with an explicit intermediate-size cap.
///
/// Coordinates are eliminated one at a time, largest cardinality first and
/// lexicographically within a level; after every step the system is pruned of
/// redundant members so intermediates stay small.
pub fn project_to_order_with_cap(family: &InequalityFamily, k: usize, cap: usize) -> Result<InequalityFamily> {
    if k == 0 || k > family.order() {
        return domain(format!("target order must be in 1..={}, got {k}", family.order()));
    }
    let n = family.n();
    let mut targets: Vec<SubsetMask> = family
        .members()
        .iter()
        .flat_map(|m| m.coeffs().keys().copied())
        .filter(|s| s.len() > k)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    targets.sort_by_key(|s| {
        let (card, idx) = lex_key(*s);
        (std::cmp::Reverse(card), idx)
    });

    if targets.is_empty() {
        return InequalityFamily::new(n, k, family.members().to_vec());
    }
    let mut current: Vec<Inequality> = family.members().to_vec();
    for x in targets {
        current = eliminate(&current, x, cap)?;
        let fam = InequalityFamily::new(n, family.order(), current)?;
        current = remove_redundant(&fam).members().to_vec();
    }
    let fam = InequalityFamily::new(n, k, current)?;
    Ok(remove_redundant(&fam))
}

fn eliminate(members: &[Inequality], x: SubsetMask, cap: usize) -> Result<Vec<Inequality>> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for m in members {
        let c = m.coeff(x);
        if c.is_positive() {
            pos.push(m);
        } else if c.is_negative() {
            neg.push(m);
        } else {
            out.push(m.clone());
        }
    }
    let size = out.len() + pos.len() * neg.len();
    if size > cap {
        return Err(Error::SizeLimit { what: "Fourier-Motzkin intermediate members", size, limit: cap });
    }
    for p in &pos {
        let cp = p.coeff(x);
        for q in &neg {
            let cq = -q.coeff(x);
            let mut coeffs: BTreeMap<SubsetMask, Rational> = BTreeMap::new();
            for (s, c) in p.coeffs() {
                *coeffs.entry(*s).or_insert_with(Rational::zero) += c * &cq;
            }
            for (s, c) in q.coeffs() {
                *coeffs.entry(*s).or_insert_with(Rational::zero) += c * &cp;
            }
            coeffs.remove(&x);
            // combinations that cancel entirely are the trivial 0 >= 0
            if coeffs.values().all(Zero::is_zero) {
                continue;
            }
            let label = format!("({})+({})", p.label(), q.label());
            out.push(Inequality::new(p.n(), coeffs, label)?);
        }
    }
    Ok(out)
}

/// Drop every member that is a non-negative combination of the others.
///
/// Members are visited in canonical family order; each test runs against the
/// members still present, so the result is irredundant and the operation is
/// idempotent.
pub fn remove_redundant(family: &InequalityFamily) -> InequalityFamily {
    prune(family, |_, _| true)
}

/// As [`remove_redundant`], but a member may only be explained by members of
/// its own order.
pub fn remove_redundant_within_order(family: &InequalityFamily) -> InequalityFamily {
    prune(family, |a, b| a.order() == b.order())
}

fn prune(family: &InequalityFamily, admissible: impl Fn(&Inequality, &Inequality) -> bool) -> InequalityFamily {
    let coords = coordinates(family.n());
    let dense: Vec<Vec<Rational>> = family.members().iter().map(|m| m.dense(&coords)).collect();
    let mut alive = vec![true; dense.len()];
    for i in 0..dense.len() {
        let target = &family.members()[i];
        let gens: Vec<Vec<Rational>> = (0..dense.len())
            .filter(|&j| j != i && alive[j] && admissible(target, &family.members()[j]))
            .map(|j| dense[j].clone())
            .collect();
        if is_conic_combination(&dense[i], &gens) {
            alive[i] = false;
        }
    }
    let kept = family.members().iter().zip(alive).filter(|(_, a)| *a).map(|(m, _)| m.clone()).collect();
    InequalityFamily::new(family.n(), family.order(), kept).expect("subset of a valid family")
}
