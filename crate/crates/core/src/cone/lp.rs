//! Exact-rational feasibility LP: is a vector a non-negative combination of
//! generators? Phase-one simplex with Bland's rule, so it cannot cycle.

use num_traits::{Signed, Zero};

use crate::Rational;

/// `true` iff `target = Σ λ_i gens[i]` for some `λ ≥ 0`.
pub fn is_conic_combination(target: &[Rational], gens: &[Vec<Rational>]) -> bool {
    let rows = target.len();
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    if gens.iter().any(|g| positive_multiple(g, target)) {
        return true;
    }

    let g = gens.len();
    let cols = g + rows;
    // tableau rows: constraints; column `cols` is the right-hand side
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let flip = target[r].is_negative();
            let mut row: Vec<Rational> =
                gens.iter().map(|gen| if flip { -gen[r].clone() } else { gen[r].clone() }).collect();
            row.extend((0..rows).map(|a| if a == r { one() } else { Rational::zero() }));
            row.push(target[r].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (g..cols).collect();

    // reduced costs of minimizing the artificial sum
    let mut cost: Vec<Rational> = vec![Rational::zero(); cols + 1];
    for row in &tab {
        for (j, v) in row.iter().enumerate() {
            if j < g || j == cols {
                cost[j] -= v;
            }
        }
    }

    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }
    cost[cols].is_zero()
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let piv = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        *v /= &piv;
    }
    let prow = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
}

fn positive_multiple(g: &[Rational], t: &[Rational]) -> bool {
    let mut ratio: Option<Rational> = None;
    for (a, b) in g.iter().zip(t) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return false,
            (false, false) => {
                let r = b / a;
                if !r.is_positive() {
                    return false;
                }
                match &ratio {
                    None => ratio = Some(r),
                    Some(x) if *x == r => {}
                    Some(_) => return false,
                }
            }
        }
    }
    ratio.is_some()
}
