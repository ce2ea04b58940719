//! Generators: elemental inequalities, order-graded families, named forms and
//! the maximally-mixed closed forms.

use std::collections::BTreeMap;

use super::{check_n, project_to_order, rational, remove_redundant_within_order, Inequality, InequalityFamily};
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::semiclassics::entropy_asymptotic;
use crate::spin::Spin;
use crate::temporal::{wigner_entropy, Schedule, SubsetMask};
use crate::Rational;

fn labels(s: SubsetMask) -> String {
    s.indices().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn build(n: usize, terms: &[(SubsetMask, i64)], label: String) -> Inequality {
    let mut coeffs: BTreeMap<SubsetMask, Rational> = BTreeMap::new();
    for &(s, c) in terms {
        if s.is_empty() {
            continue;
        }
        *coeffs.entry(s).or_insert_with(|| rational(0)) += rational(c);
    }
    Inequality::new(n, coeffs, label).expect("elemental forms are nonzero")
}

/// Elemental inequalities of the variables in `vars`, as functionals on `n`
/// variables: `H(Q_i | Q_{V∖i}) ≥ 0` and `I(Q_i;Q_k | Q_K) ≥ 0`.
pub fn elemental_on(n: usize, vars: SubsetMask) -> Vec<Inequality> {
    let idx: Vec<usize> = vars.indices().collect();
    let mut out = Vec::new();
    for &i in &idx {
        let rest = vars.without(i);
        let label = if rest.is_empty() { format!("H({})", i + 1) } else { format!("H({}|{})", i + 1, labels(rest)) };
        out.push(build(n, &[(vars, 1), (rest, -1)], label));
    }
    for (a, &i) in idx.iter().enumerate() {
        for &k in &idx[a + 1..] {
            let others = vars.without(i).without(k);
            // every subset of the remaining variables as conditioning set
            let others_idx: Vec<usize> = others.indices().collect();
            for bits in 0..(1u32 << others_idx.len()) {
                let cond = SubsetMask::from_indices(
                    others_idx.iter().enumerate().filter(|(b, _)| bits & (1 << b) != 0).map(|(_, &v)| v),
                );
                let label = if cond.is_empty() {
                    format!("I({};{})", i + 1, k + 1)
                } else {
                    format!("I({};{}|{})", i + 1, k + 1, labels(cond))
                };
                out.push(build(
                    n,
                    &[(cond.with(i), 1), (cond.with(k), 1), (cond.with(i).with(k), -1), (cond, -1)],
                    label,
                ));
            }
        }
    }
    out
}

/// Minimal elemental set of the Shannon cone on `n` variables
/// (`n + C(n,2)·2^{n-2}` members).
pub fn elemental_inequalities(n: usize) -> Result<InequalityFamily> {
    check_n(n)?;
    InequalityFamily::new(n, n, elemental_on(n, SubsetMask::full(n)))
}

/// Order-graded family: the elemental inequalities of every time subset of
/// size `2..=k`, plus the order-`k` projection of the Shannon cone of every
/// subset of size `k + 1`, then pruned of members implied by others of the
/// same order.
///
/// This is the grouping used for the published families. It is not the full
/// projection of the `n`-variable cone: for `n = 4, k = 2` that projection
/// (`project_to_order(&elemental_inequalities(4)?, 2)`) has six further
/// four-variable facets.
pub fn elgi_family(n: usize, k: usize) -> Result<InequalityFamily> {
    check_n(n)?;
    if !(1..=n).contains(&k) {
        return domain(format!("order must be in 1..={n}, got {k}"));
    }
    let mut members = Vec::new();
    for bits in 1..(1u32 << n) {
        let vars = SubsetMask(bits);
        if vars.len() < 2 {
            continue;
        }
        let elem = elemental_on(n, vars);
        if vars.len() <= k {
            members.extend(elem);
        } else if vars.len() == k + 1 {
            let fam = InequalityFamily::new(n, vars.len(), elem)?;
            members.extend(project_to_order(&fam, k)?.members().iter().cloned());
        }
    }
    let fam = InequalityFamily::new(n, k, members)?;
    Ok(remove_redundant_within_order(&fam))
}

/// `D_i = H(Q_All) - H(Q_All ∖ Q_i)` (0-based `i`).
pub fn conditional_entropy_ineq(n: usize, i: usize) -> Result<Inequality> {
    check_n(n)?;
    if i >= n {
        return domain(format!("time index {} out of range 1..={n}", i + 1));
    }
    let all = SubsetMask::full(n);
    Ok(build(n, &[(all, 1), (all.without(i), -1)], format!("D_{}", i + 1)))
}

/// `D_{i,k} = H(All∖i) + H(All∖k) - H(All) - H(All∖{i,k})` (0-based).
pub fn mutual_information_ineq(n: usize, i: usize, k: usize) -> Result<Inequality> {
    check_n(n)?;
    if i >= n || k >= n || i == k {
        return domain(format!("invalid index pair ({}, {}) for n = {n}", i + 1, k + 1));
    }
    let (i, k) = (i.min(k), i.max(k));
    let all = SubsetMask::full(n);
    Ok(build(
        n,
        &[(all.without(i), 1), (all.without(k), 1), (all, -1), (all.without(i).without(k), -1)],
        format!("D_{{{},{}}}", i + 1, k + 1),
    ))
}

/// Two-point chain inequalities for `n = 3` and `n = 4`:
/// `H(Q_i,Q_j) + H(Q_j,Q_k) - H(Q_j) - H(Q_i,Q_k) ≥ 0` for `i < j < k`, and for
/// `n = 4` also the four-point chain.
pub fn devi_forms(n: usize) -> Result<Vec<Inequality>> {
    if !(3..=4).contains(&n) {
        return domain(format!("chain forms are defined for n = 3 or 4, got {n}"));
    }
    let p = |a: usize, b: usize| SubsetMask::from_indices([a, b]);
    let s = SubsetMask::singleton;
    let mut out = Vec::new();
    if n == 4 {
        out.push(build(
            n,
            &[(p(0, 1), 1), (p(1, 2), 1), (p(2, 3), 1), (s(1), -1), (s(2), -1), (p(0, 3), -1)],
            "Devi(1,2,3,4)".to_string(),
        ));
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(build(
                    n,
                    &[(p(i, j), 1), (p(j, k), 1), (s(j), -1), (p(i, k), -1)],
                    format!("Devi({},{},{})", i + 1, j + 1, k + 1),
                ));
            }
        }
    }
    Ok(out)
}

/// The two elemental families of the full time set, 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elgi {
    /// `D_i`
    Conditional(usize),
    /// `D_{i,k}`
    Mutual(usize, usize),
}

impl Elgi {
    pub fn inequality(self, n: usize) -> Result<Inequality> {
        match self {
            Elgi::Conditional(i) => conditional_entropy_ineq(n, i),
            Elgi::Mutual(i, k) => mutual_information_ineq(n, i, k),
        }
    }

    pub fn label(self) -> String {
        match self {
            Elgi::Conditional(i) => format!("D_{}", i + 1),
            Elgi::Mutual(i, k) => format!("D_{{{},{}}}", i.min(k) + 1, i.max(k) + 1),
        }
    }
}

/// Maximally-mixed closed form of `which`, with `pair_entropy(a, b)` standing
/// for `H_j(β_{ab})` and `ln_dim = ln(2j+1)`.
pub fn closed_form_with<T: Real>(
    n: usize,
    which: Elgi,
    ln_dim: T,
    pair_entropy: impl Fn(usize, usize) -> T,
) -> Result<T> {
    if n < 2 {
        return domain("closed forms need at least two times");
    }
    let h = pair_entropy;
    match which {
        Elgi::Conditional(i) => {
            if i >= n {
                return domain(format!("time index {} out of range 1..={n}", i + 1));
            }
            Ok(if i == 0 {
                h(0, 1)
            } else if i == n - 1 {
                h(n - 2, n - 1)
            } else {
                h(i - 1, i) + h(i, i + 1) - h(i - 1, i + 1)
            })
        }
        Elgi::Mutual(a, b) => {
            if a >= n || b >= n || a == b {
                return domain(format!("invalid index pair ({}, {}) for n = {n}", a + 1, b + 1));
            }
            let (i, k) = (a.min(b), a.max(b));
            Ok(if k > i + 1 {
                T::zero()
            } else if n == 2 {
                // H(∅) = 0 leaves one ln(2j+1) uncancelled
                ln_dim - h(0, 1)
            } else if i == 0 {
                h(0, 2) - h(0, 1)
            } else if k == n - 1 {
                h(n - 3, n - 1) - h(n - 2, n - 1)
            } else {
                h(i, i + 2) + h(i - 1, i + 1) - h(i, i + 1) - h(i - 1, i + 2)
            })
        }
    }
}

/// Exact maximally-mixed value of `which` from Wigner-matrix entropies.
pub fn mixed_state_closed_form<T: Real>(spin: Spin, schedule: &Schedule<T>, which: Elgi) -> Result<T> {
    let ln_dim = T::lit(spin.dim() as f64).ln();
    closed_form_with(schedule.n(), which, ln_dim, |a, b| wigner_entropy(spin, schedule.beta(a, b)))
}

/// Large-spin limit of `which`: the closed form with every `H_j` replaced by
/// its asymptote. Fails if an involved angle is within `window` of a multiple
/// of π.
pub fn asymptotic_closed_form<T: Real>(spin: Spin, schedule: &Schedule<T>, which: Elgi, window: T) -> Result<T> {
    let n = schedule.n();
    let involved: Vec<(usize, usize)> = match which {
        Elgi::Conditional(i) if i < n => {
            if i == 0 {
                vec![(0, 1)]
            } else if i == n - 1 {
                vec![(n - 2, n - 1)]
            } else {
                vec![(i - 1, i), (i, i + 1), (i - 1, i + 1)]
            }
        }
        Elgi::Mutual(a, b) if a < n && b < n && a != b => {
            let (i, k) = (a.min(b), a.max(b));
            if k > i + 1 {
                vec![]
            } else if n == 2 {
                vec![(0, 1)]
            } else if i == 0 {
                vec![(0, 2), (0, 1)]
            } else if k == n - 1 {
                vec![(n - 3, n - 1), (n - 2, n - 1)]
            } else {
                vec![(i, i + 2), (i - 1, i + 1), (i, i + 1), (i - 1, i + 2)]
            }
        }
        _ => return closed_form_with(n, which, T::zero(), |_, _| T::zero()),
    };
    for (a, b) in involved {
        let beta = schedule.beta(a, b);
        if crate::semiclassics::distance_to_multiple_of_pi(beta) < window {
            return domain(format!(
                "angle beta_{{{},{}}} = {beta} lies within {window} of a multiple of pi",
                a + 1,
                b + 1
            ));
        }
    }
    let ln_dim = T::lit(spin.dim() as f64).ln();
    closed_form_with(n, which, ln_dim, |a, b| entropy_asymptotic(spin, schedule.beta(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{all_subsets, entropy_of, mixed_entropy_vector, EntropyVector};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn s(labels: &[usize]) -> SubsetMask {
        SubsetMask::from_labels(labels.iter().copied())
    }

    #[test]
    fn elemental_counts() {
        for (n, count) in [(2, 3), (3, 9), (4, 28), (5, 85)] {
            assert_eq!(elemental_inequalities(n).unwrap().len(), count, "n = {n}");
        }
        assert!(elemental_inequalities(1).is_err());
        assert!(elemental_inequalities(9).is_err());
    }

    #[test]
    fn elemental_three_has_textbook_members() {
        let fam = elemental_inequalities(3).unwrap();
        let cond = Inequality::from_terms(3, &[(s(&[1, 2, 3]), 1), (s(&[1, 2]), -1)], "").unwrap();
        let mi = Inequality::from_terms(3, &[(s(&[1]), 1), (s(&[3]), 1), (s(&[1, 3]), -1)], "").unwrap();
        assert!(fam.contains_form(&cond));
        assert!(fam.contains_form(&mi));
    }

    #[test]
    fn family_sizes() {
        for (n, k, count) in [(3, 2, 12), (3, 3, 15), (4, 2, 30), (4, 3, 54), (4, 4, 52)] {
            let fam = elgi_family(n, k).unwrap();
            assert_eq!(fam.len(), count, "n = {n}, order = {k}");
            assert!(fam.members().iter().all(|m| m.order() <= k));
        }
        assert!(elgi_family(3, 0).is_err());
        assert!(elgi_family(3, 4).is_err());
    }

    #[test]
    fn full_projection_has_extra_four_variable_facets() {
        let full = project_to_order(&elemental_inequalities(4).unwrap(), 2).unwrap();
        let grouped = elgi_family(4, 2).unwrap();
        assert_eq!(full.len(), 36);
        assert!(grouped.members().iter().all(|m| full.contains_form(m)));
        let extra = Inequality::from_terms(
            4,
            &[
                (s(&[1, 2]), 1),
                (s(&[1, 3]), 1),
                (s(&[1, 4]), -1),
                (s(&[2, 3]), -1),
                (s(&[2, 4]), 1),
                (s(&[3, 4]), 1),
                (s(&[2]), -1),
                (s(&[3]), -1),
            ],
            "",
        )
        .unwrap();
        assert!(full.contains_form(&extra) && !grouped.contains_form(&extra));
    }

    #[test]
    fn named_forms() {
        let d2 = conditional_entropy_ineq(3, 1).unwrap();
        assert_eq!(d2.coeff(s(&[1, 2, 3])), rational(1));
        assert_eq!(d2.coeff(s(&[1, 3])), rational(-1));
        assert_eq!(d2.label(), "D_2");
        let d23 = mutual_information_ineq(3, 2, 1).unwrap();
        assert_eq!(d23.label(), "D_{2,3}");
        assert_eq!(d23.coeff(s(&[1])), rational(-1));
        assert!(conditional_entropy_ineq(3, 3).is_err());
        assert!(mutual_information_ineq(3, 1, 1).is_err());
        assert_eq!(devi_forms(3).unwrap().len(), 1);
        assert_eq!(devi_forms(4).unwrap().len(), 5);
        assert!(devi_forms(5).is_err());
        // H(2|1) + H(3|2) - H(3|1) = D_{1,3} + D_2 for three times
        let devi = &devi_forms(3).unwrap()[0];
        let sum = &conditional_entropy_ineq(3, 1).unwrap();
        let d13 = mutual_information_ineq(3, 0, 2).unwrap();
        for c in crate::cone::coordinates(3) {
            assert_eq!(devi.coeff(c), sum.coeff(c) + d13.coeff(c));
        }
    }

    #[test]
    fn distant_pairs_vanish() {
        let sched = Schedule::from_angles(vec![0.0, 0.5, 1.1, 1.3]).unwrap();
        let v = mixed_state_closed_form(Spin::integer(2), &sched, Elgi::Mutual(0, 2)).unwrap();
        assert_eq!(v, 0.0);
        assert!(mixed_state_closed_form(Spin::integer(2), &sched, Elgi::Conditional(4)).is_err());
        assert!(mixed_state_closed_form(Spin::integer(2), &sched, Elgi::Mutual(1, 1)).is_err());
    }

    #[test]
    fn three_time_mutual_at_half_turn() {
        let spin = Spin::integer(3);
        let sched = Schedule::from_angles(vec![0.0, PI - 0.8, PI]).unwrap();
        let v = mixed_state_closed_form(spin, &sched, Elgi::Mutual(1, 2)).unwrap();
        assert!((v + wigner_entropy(spin, 0.8)).abs() < 1e-12);
    }

    fn binary_entropy(p: f64) -> f64 {
        entropy_of([p, 1.0 - p])
    }

    #[test]
    fn spin_half_mutual_from_binary_entropies() {
        let angles = vec![0.0, 2.0 * PI / 3.0 - 0.02, PI - 0.03];
        let sched = Schedule::from_angles(angles.clone()).unwrap();
        let spin = Spin::from_twice(1);
        let h = mixed_entropy_vector(spin, &sched, &all_subsets(3)).unwrap();
        let v = mutual_information_ineq(3, 1, 2).unwrap().value(&h).unwrap();
        let hb = |beta: f64| binary_entropy((beta / 2.0).cos().powi(2));
        let want = hb(angles[2]) - hb(angles[2] - angles[1]);
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
    }

    #[test]
    fn inner_conditional_can_go_negative() {
        // small equal steps: H(β) is superadditive near 0, so D_2 < 0
        let sched = Schedule::from_angles(vec![0.0, 0.01, 0.02]).unwrap();
        let v = mixed_state_closed_form(Spin::from_twice(1), &sched, Elgi::Conditional(1)).unwrap();
        assert!(v < -1e-4, "{v}");
    }

    /// Entropies of every marginal of one joint distribution over `n` variables.
    fn marginal_entropies(n: usize, dim: usize, weights: &[f64]) -> EntropyVector<f64> {
        let total: f64 = weights.iter().sum();
        let mut h = EntropyVector::new(n);
        for sub in all_subsets(n) {
            let idx: Vec<usize> = sub.indices().collect();
            let mut marg = vec![0.0; dim.pow(idx.len() as u32)];
            for (flat, w) in weights.iter().enumerate() {
                let mut key = 0;
                for &i in &idx {
                    key = key * dim + (flat / dim.pow((n - 1 - i) as u32)) % dim;
                }
                marg[key] += w / total;
            }
            h.insert(sub, entropy_of(marg));
        }
        h
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn closed_forms_match_definitions(tj in 1u32..=4, n in 2usize..=4, steps in prop::collection::vec(0.05f64..2.0, 3)) {
            let spin = Spin::from_twice(tj);
            let mut angles = vec![0.0];
            for st in &steps[..n - 1] {
                angles.push(angles.last().unwrap() + st);
            }
            let sched = Schedule::from_angles(angles).unwrap();
            let h = mixed_entropy_vector(spin, &sched, &all_subsets(n)).unwrap();
            for i in 0..n {
                let which = Elgi::Conditional(i);
                let def = which.inequality(n).unwrap().value(&h).unwrap();
                prop_assert!((def - mixed_state_closed_form(spin, &sched, which).unwrap()).abs() < 1e-10);
                for k in i + 1..n {
                    let which = Elgi::Mutual(i, k);
                    let def = which.inequality(n).unwrap().value(&h).unwrap();
                    prop_assert!((def - mixed_state_closed_form(spin, &sched, which).unwrap()).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn elemental_sound_on_single_distributions(n in 2usize..=4, dim in 2usize..=3, seed in prop::collection::vec(0.0f64..1.0, 81)) {
            let weights = &seed[..dim.pow(n as u32)];
            prop_assume!(weights.iter().sum::<f64>() > 0.0);
            let h = marginal_entropies(n, dim, weights);
            for m in elemental_inequalities(n).unwrap().members() {
                prop_assert!(m.value(&h).unwrap() >= -1e-9, "{}", m.label());
            }
        }
    }
}
