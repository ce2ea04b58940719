//! Hand-derived family lists, written out group by group with 0-based times.

use elgi::cone::{Inequality, InequalityFamily};
use elgi::temporal::SubsetMask;

fn m(idx: &[usize]) -> SubsetMask {
    SubsetMask::from_indices(idx.iter().copied())
}

fn ineq(n: usize, terms: &[(&[usize], i64)]) -> Inequality {
    let t: Vec<(SubsetMask, i64)> = terms.iter().map(|&(s, c)| (m(s), c)).collect();
    Inequality::from_terms(n, &t, "x").unwrap()
}

fn rest(n: usize, skip: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !skip.contains(i)).collect()
}

fn join(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort();
    v
}

fn triples(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn pairs(of: &[usize]) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for (x, &a) in of.iter().enumerate() {
        for &b in &of[x + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// `H(T) - H(T∖i)` for every `i` in `T`.
fn top_conditionals(n: usize, t: &[usize]) -> Vec<Inequality> {
    t.iter().map(|&i| ineq(n, &[(t, 1), (&rest_of(t, &[i]), -1)])).collect()
}

fn rest_of(t: &[usize], skip: &[usize]) -> Vec<usize> {
    t.iter().copied().filter(|i| !skip.contains(i)).collect()
}

/// `H(i,K) + H(j,K) - H(T) - H(K)` with `K = T∖{i,j}`, for every pair in `T`.
fn top_mutuals(n: usize, t: &[usize]) -> Vec<Inequality> {
    pairs(t)
        .into_iter()
        .map(|(i, j)| {
            let k = rest_of(t, &[i, j]);
            let mut terms: Vec<(Vec<usize>, i64)> = vec![(join(&[i], &k), 1), (join(&[j], &k), 1), (t.to_vec(), -1)];
            if !k.is_empty() {
                terms.push((k.clone(), -1));
            }
            let borrowed: Vec<(&[usize], i64)> = terms.iter().map(|(s, c)| (s.as_slice(), *c)).collect();
            ineq(n, &borrowed)
        })
        .collect()
}

/// `H(m,l) + H(n,l) - H(l) - H(m,n)` for `{l, m, n} = T` and every choice of `l`,
/// with `extra` appended to every set.
fn chain_forms(n: usize, t: &[usize], extra: &[usize]) -> Vec<Inequality> {
    t.iter()
        .map(|&l| {
            let mn = rest_of(t, &[l]);
            let a = join(&[mn[0], l], extra);
            let b = join(&[mn[1], l], extra);
            let c = join(&[l], extra);
            let d = join(&mn, extra);
            ineq(n, &[(&a, 1), (&b, 1), (&c, -1), (&d, -1)])
        })
        .collect()
}

fn order2_basics(n: usize) -> Vec<Inequality> {
    let all: Vec<usize> = (0..n).collect();
    let mut out = vec![];
    for (i, j) in pairs(&all) {
        out.extend(top_conditionals(n, &[i, j]));
        out.extend(top_mutuals(n, &[i, j]));
    }
    out
}

pub fn listed(n: usize, k: usize) -> InequalityFamily {
    let all: Vec<usize> = (0..n).collect();
    let mut v = order2_basics(n);
    match (n, k) {
        (3, 2) => v.extend(chain_forms(3, &all, &[])),
        (3, 3) => {
            v.extend(top_conditionals(3, &all));
            v.extend(top_mutuals(3, &all));
        }
        (4, 2) => {
            for t in triples(4) {
                v.extend(chain_forms(4, &t, &[]));
            }
        }
        (4, 3) => {
            for t in triples(4) {
                v.extend(top_conditionals(4, &t));
                v.extend(top_mutuals(4, &t));
            }
            for r in 0..4 {
                v.extend(chain_forms(4, &rest(4, &[r]), &[r]));
            }
        }
        (4, 4) => {
            for t in triples(4) {
                v.extend(top_conditionals(4, &t));
                v.extend(top_mutuals(4, &t));
            }
            v.extend(top_conditionals(4, &all));
            v.extend(top_mutuals(4, &all));
        }
        _ => unreachable!(),
    }
    InequalityFamily::new(n, k, v).unwrap()
}
