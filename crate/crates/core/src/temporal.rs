//! Sequential projective measurements of `J_z` on a spin rotating about `y`.
//!
//! A measurement record on the time subset `t_{i1} < … < t_{id}` has
//! probability `p_{m1} Π |d^j_{m_{k+1} m_k}(β_k)|²`, where `β_k` is the angle
//! accumulated between consecutive *measured* times; unmeasured times leave the
//! state undisturbed and contribute nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::spin::Spin;
use crate::wigner::d_matrix;

/// Largest number of outcome tuples [`joint_distribution`] will materialize.
pub const MAX_OUTCOMES: usize = 100_000_000;

/// Probabilities below this are treated as exact zeros inside `p ln p`.
pub const PROB_FLOOR: f64 = 1e-300;

/// Set of time indices, bit `i` for time `i` (0-based). Displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> Self {
        SubsetMask(idx.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    /// From 1-based labels, as written in `H(Q1,Q3)`.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_indices(labels.into_iter().map(|l| l - 1))
    }

    pub fn full(n: usize) -> Self {
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending 0-based indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// Highest index + 1 (0 for the empty set).
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Every nonempty subset of `n` times, ordered by cardinality then lexicographically.
pub fn all_subsets(n: usize) -> Vec<SubsetMask> {
    let mut v: Vec<SubsetMask> = (1..(1u32 << n)).map(SubsetMask).collect();
    v.sort_by_key(|s| lex_key(*s));
    v
}

/// Ordering key: cardinality, then ascending index list.
pub fn lex_key(s: SubsetMask) -> (usize, Vec<usize>) {
    (s.len(), s.indices().collect())
}

/// Measurement schedule as accumulated rotation angles `β_i = ω t_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule<T> {
    angles: Vec<T>,
}

impl<T: Real> Schedule<T> {
    /// Strictly increasing angles, at least two.
    pub fn from_angles(angles: Vec<T>) -> Result<Self> {
        Self::build(angles, false)
    }

    /// Non-decreasing angles; equal entries give zero-angle intervals.
    pub fn from_angles_allow_equal(angles: Vec<T>) -> Result<Self> {
        Self::build(angles, true)
    }

    /// `β_i = ω t_i`.
    pub fn from_times(omega: T, times: &[T]) -> Result<Self> {
        Self::from_angles(times.iter().map(|&t| omega * t).collect())
    }

    /// `n` times with constant step: angles `0, step, 2 step, …`.
    pub fn equally_spaced(n: usize, step: T) -> Result<Self> {
        let angles = (0..n).map(|i| T::lit(i as f64) * step).collect();
        if step == T::zero() {
            Self::from_angles_allow_equal(angles)
        } else {
            Self::from_angles(angles)
        }
    }

    fn build(angles: Vec<T>, allow_equal: bool) -> Result<Self> {
        if angles.len() < 2 {
            return domain("a schedule needs at least two times");
        }
        if angles.len() > 31 {
            return domain("at most 31 measurement times are supported");
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return domain("schedule angles must be finite");
        }
        for w in angles.windows(2) {
            let ok = if allow_equal { w[1] >= w[0] } else { w[1] > w[0] };
            if !ok {
                return domain(format!(
                    "schedule angles must be {} increasing",
                    if allow_equal { "non-strictly" } else { "strictly" }
                ));
            }
        }
        Ok(Self { angles })
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// `β_{ik} = β_k - β_i` (0-based indices).
    pub fn beta(&self, i: usize, k: usize) -> T {
        self.angles[k] - self.angles[i]
    }

    /// Pairs of consecutive measured times in `subset`.
    pub fn adjacent_pairs(&self, subset: SubsetMask) -> Vec<(usize, usize)> {
        let idx: Vec<usize> = subset.indices().collect();
        idx.windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn check_subset(&self, subset: SubsetMask) -> Result<()> {
        if subset.is_empty() {
            return domain("measured subset must be nonempty");
        }
        if subset.span() > self.n() {
            return domain(format!("subset {subset} exceeds the {} schedule times", self.n()));
        }
        Ok(())
    }
}

/// `J_z`-diagonal of the initial density operator, ordered `m = +j … -j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialState<T> {
    spin: Spin,
    diag: Vec<T>,
}

impl<T: Real> InitialState<T> {
    pub fn maximally_mixed(spin: Spin) -> Self {
        let p = T::one() / T::lit(spin.dim() as f64);
        Self { spin, diag: vec![p; spin.dim()] }
    }

    /// Probability vector over `m = +j … -j`.
    pub fn from_diagonal(spin: Spin, diag: Vec<T>) -> Result<Self> {
        if diag.len() != spin.dim() {
            return domain(format!("expected {} weights for j = {spin}, got {}", spin.dim(), diag.len()));
        }
        if diag.iter().any(|p| !(*p >= T::zero())) {
            return domain("state weights must be non-negative");
        }
        let total: f64 = diag.iter().map(|p| p.as_f64()).sum();
        let tol = 1e-12_f64.max(100.0 * T::epsilon().as_f64());
        if (total - 1.0).abs() > tol {
            return domain(format!("state weights must sum to 1 (got {total})"));
        }
        Ok(Self { spin, diag })
    }

    /// Unnormalized non-negative weights, rescaled to sum 1.
    pub fn from_weights(spin: Spin, weights: Vec<T>) -> Result<Self> {
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) {
            return domain("state weights must have positive sum");
        }
        Self::from_diagonal(spin, weights.into_iter().map(|w| w / total).collect())
    }

    /// Row-major `dim×dim` density matrix; only its diagonal enters the
    /// sequential statistics, so coherences are dropped with a warning.
    pub fn from_density_matrix(spin: Spin, rho: &[T]) -> Result<Self> {
        let d = spin.dim();
        if rho.len() != d * d {
            return domain(format!("density matrix must have {} entries", d * d));
        }
        let offdiag = (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .any(|(r, c)| rho[r * d + c] != T::zero());
        if offdiag {
            log::warn!("initial state has off-diagonal elements; only the J_z diagonal is used");
        }
        Self::from_diagonal(spin, (0..d).map(|k| rho[k * d + k]).collect())
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn is_maximally_mixed(&self) -> bool {
        let p = 1.0 / self.spin.dim() as f64;
        self.diag.iter().all(|q| (q.as_f64() - p).abs() < 1e-15)
    }
}

/// Joint outcome probabilities on one measured subset.
///
/// Outcome tuples are stored row-major: the earliest measured time is the
/// slowest-varying digit, each digit an `m` position (0 ↔ `m = +j`).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    subset: SubsetMask,
    dim: usize,
    probs: Vec<T>,
}

impl<T: Real> JointDistribution<T> {
    pub fn subset(&self) -> SubsetMask {
        self.subset
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn outcome_dim(&self) -> usize {
        self.dim
    }

    pub fn total(&self) -> T {
        crate::scalar::compensated_sum(self.probs.iter().copied())
    }

    /// Sum out the last measured time.
    pub fn marginalize_last(&self) -> Option<Self> {
        if self.subset.len() < 2 {
            return None;
        }
        let last = self.subset.indices().last().expect("nonempty");
        let probs = self.probs.chunks(self.dim).map(|c| crate::scalar::compensated_sum(c.iter().copied())).collect();
        Some(Self { subset: self.subset.without(last), dim: self.dim, probs })
    }
}

/// Sequential-measurement statistics for `subset`.
pub fn joint_distribution<T: Real>(
    state: &InitialState<T>,
    schedule: &Schedule<T>,
    subset: SubsetMask,
) -> Result<JointDistribution<T>> {
    schedule.check_subset(subset)?;
    let dim = state.spin.dim();
    let size = (dim as f64).powi(subset.len() as i32);
    if size > MAX_OUTCOMES as f64 {
        return Err(Error::SizeLimit { what: "joint outcome count", size: size as usize, limit: MAX_OUTCOMES });
    }
    let mut probs = state.diag.clone();
    for (a, b) in schedule.adjacent_pairs(subset) {
        let d = d_matrix(state.spin, schedule.beta(a, b));
        let trans: Vec<T> = d.as_slice().iter().map(|&x| x * x).collect();
        let mut next = Vec::with_capacity(probs.len() * dim);
        for (idx, &p) in probs.iter().enumerate() {
            let prev = idx % dim;
            next.extend((0..dim).map(|m_next| p * trans[m_next * dim + prev]));
        }
        probs = next;
    }
    Ok(JointDistribution { subset, dim, probs })
}

/// `-Σ p ln p` (nats).
pub fn shannon_entropy<T: Real>(dist: &JointDistribution<T>) -> T {
    entropy_of(dist.probs.iter().copied())
}

/// `-Σ p ln p` over raw probabilities, with `0 ln 0 = 0`.
pub fn entropy_of<T: Real, I: IntoIterator<Item = T>>(probs: I) -> T {
    let floor = T::lit(PROB_FLOOR);
    let terms = probs.into_iter().filter(|&p| p > floor).map(|p| -p * p.ln());
    crate::scalar::compensated_sum(terms)
}

/// `H_j(β) = -(2j+1)^{-1} Σ |d_{nm}|² ln |d_{nm}|²`.
pub fn wigner_entropy<T: Real>(spin: Spin, beta: T) -> T {
    let d = d_matrix(spin, beta);
    entropy_of(d.as_slice().iter().map(|&x| x * x)) / T::lit(spin.dim() as f64)
}

/// Joint entropies indexed by measured subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyVector<T> {
    n: usize,
    values: BTreeMap<SubsetMask, T>,
}

impl<T: Real> EntropyVector<T> {
    pub fn new(n: usize) -> Self {
        Self { n, values: BTreeMap::new() }
    }

    pub fn from_map(n: usize, values: BTreeMap<SubsetMask, T>) -> Self {
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: SubsetMask) -> Option<T> {
        self.values.get(&s).copied()
    }

    pub fn insert(&mut self, s: SubsetMask, h: T) {
        self.values.insert(s, h);
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, T)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Brute-force joint entropies from the full outcome distributions.
pub fn entropy_vector<T: Real>(
    state: &InitialState<T>,
    schedule: &Schedule<T>,
    subsets: &[SubsetMask],
) -> Result<EntropyVector<T>> {
    let values = subsets
        .par_iter()
        .map(|&s| joint_distribution(state, schedule, s).map(|d| (s, shannon_entropy(&d))))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyVector { n: schedule.n(), values: values.into_iter().collect() })
}

/// Maximally mixed shortcut: `H(S) = ln(2j+1) + Σ_{adjacent s,s'} H_j(β_{ss'})`.
pub fn mixed_entropy_vector<T: Real>(
    spin: Spin,
    schedule: &Schedule<T>,
    subsets: &[SubsetMask],
) -> Result<EntropyVector<T>> {
    for &s in subsets {
        schedule.check_subset(s)?;
    }
    let pairs: BTreeSet<(usize, usize)> = subsets.iter().flat_map(|&s| schedule.adjacent_pairs(s)).collect();
    let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    let h: BTreeMap<(usize, usize), T> = pairs
        .par_iter()
        .map(|&(a, b)| ((a, b), wigner_entropy(spin, schedule.beta(a, b))))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let base = T::lit(spin.dim() as f64).ln();
    let values = subsets
        .iter()
        .map(|&s| {
            let sum = crate::scalar::compensated_sum(schedule.adjacent_pairs(s).iter().map(|p| h[p]));
            (s, base + sum)
        })
        .collect();
    Ok(EntropyVector { n: schedule.n(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    fn mixed(tj: u32) -> InitialState<f64> {
        InitialState::maximally_mixed(Spin::from_twice(tj))
    }

    #[test]
    fn subset_mask_basics() {
        let s = SubsetMask::from_labels([1, 3]);
        assert_eq!(s, SubsetMask::from_indices([0, 2]));
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.len(), 2);
        assert_eq!(s.span(), 3);
        assert!(s.is_subset_of(SubsetMask::full(3)));
        assert_eq!(all_subsets(3).len(), 7);
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::from_angles(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Schedule::from_angles_allow_equal(vec![0.0, 1.0, 1.0]).is_ok());
        assert!(Schedule::from_angles(vec![0.0]).is_err());
        assert!(Schedule::from_angles(vec![0.0, f64::NAN]).is_err());
        let s = Schedule::from_times(2.0, &[0.0, 0.5, 1.5]).unwrap();
        assert_eq!(s.angles(), &[0.0, 1.0, 3.0]);
        assert_eq!(s.beta(0, 2), 3.0);
        assert_eq!(Schedule::equally_spaced(3, 0.0).unwrap().n(), 3);
    }

    #[test]
    fn state_validation() {
        let spin = Spin::integer(1);
        assert!(InitialState::from_diagonal(spin, vec![0.5, 0.5]).is_err());
        assert!(InitialState::from_diagonal(spin, vec![0.5, 0.6, -0.1]).is_err());
        assert!(InitialState::from_diagonal(spin, vec![0.2, 0.3, 0.4]).is_err());
        let s = InitialState::from_weights(spin, vec![1.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.diag(), &[0.25, 0.25, 0.5]);
        let rho = [0.5, 0.1, 0.0, 0.1, 0.25, 0.0, 0.0, 0.0, 0.25];
        let s = InitialState::from_density_matrix(spin, &rho).unwrap();
        assert_eq!(s.diag(), &[0.5, 0.25, 0.25]);
        assert!(mixed(4).is_maximally_mixed());
    }

    #[test]
    fn single_time_mixed_is_uniform() {
        let sched = Schedule::from_angles(vec![0.0, 1.0]).unwrap();
        let d = joint_distribution(&mixed(3), &sched, SubsetMask::singleton(1)).unwrap();
        assert!(d.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn zero_interval_is_diagonal() {
        let spin = Spin::integer(1);
        let state = InitialState::from_diagonal(spin, vec![0.2, 0.5, 0.3]).unwrap();
        let sched = Schedule::from_angles_allow_equal(vec![0.4, 0.4]).unwrap();
        let d = joint_distribution(&state, &sched, SubsetMask::full(2)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let want: f64 = if a == b { state.diag()[a] } else { 0.0 };
                assert!((d.probs()[a * 3 + b] - want).abs() < 1e-15);
            }
        }
        assert_eq!(shannon_entropy(&d), entropy_of(state.diag().iter().copied()));
    }

    #[test]
    fn spin_half_quarter_turn() {
        let sched = Schedule::from_angles(vec![0.0, FRAC_PI_2]).unwrap();
        let d = joint_distribution(&mixed(1), &sched, SubsetMask::full(2)).unwrap();
        assert!(d.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        assert!((shannon_entropy(&d) - 2.0 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn empty_subset_and_size_guard() {
        let sched = Schedule::from_angles(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(joint_distribution(&mixed(2), &sched, SubsetMask(0)).is_err());
        assert!(joint_distribution(&mixed(2), &sched, SubsetMask::singleton(5)).is_err());
        let big = InitialState::maximally_mixed(Spin::integer(100));
        let sched4 = Schedule::from_angles(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        match joint_distribution(&big, &sched4, SubsetMask::full(4)) {
            Err(Error::SizeLimit { .. }) => {}
            other => panic!("expected size limit, got {other:?}"),
        }
    }

    #[test]
    fn entropy_trivia() {
        assert_eq!(entropy_of([1.0, 0.0, 0.0]), 0.0);
        assert!((entropy_of([0.2; 5]) - 5f64.ln()).abs() < 1e-15);
        assert_eq!(entropy_of([1.0, 1e-320]), 0.0);
    }

    #[test]
    fn wigner_entropy_anchors() {
        for tj in [0, 1, 2, 5, 40, 200] {
            let spin = Spin::from_twice(tj);
            assert!(wigner_entropy(spin, 0.0f64).abs() < 1e-12);
            assert!(wigner_entropy(spin, PI).abs() < 1e-12);
        }
        assert!((wigner_entropy(Spin::from_twice(1), FRAC_PI_2) - LN_2).abs() < 1e-12);
    }

    #[test]
    fn three_time_spin_half_vector() {
        let sched = Schedule::from_angles(vec![0.0, FRAC_PI_2, PI]).unwrap();
        let h = entropy_vector(&mixed(1), &sched, &[SubsetMask::full(3)]).unwrap();
        assert!((h.get(SubsetMask::full(3)).unwrap() - 3.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn shortcut_uses_consecutive_measured_pair() {
        let spin = Spin::integer(2);
        let sched = Schedule::from_angles(vec![0.0, 0.7, 1.9]).unwrap();
        let s13 = SubsetMask::from_labels([1, 3]);
        let h = mixed_entropy_vector(spin, &sched, &[s13, SubsetMask::singleton(1)]).unwrap();
        let want = 5f64.ln() + wigner_entropy(spin, 1.9);
        assert!((h.get(s13).unwrap() - want).abs() < 1e-14);
        assert!((h.get(SubsetMask::singleton(1)).unwrap() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn small_angle_entropy_bound() {
        // β = J^{-3/2} keeps H_j(β) under J^{-1/2}
        for j in [50u32, 100, 200] {
            let spin = Spin::integer(j);
            let big_j = spin.big_j::<f64>();
            let h = wigner_entropy(spin, big_j.powf(-1.5));
            assert!(h <= big_j.powf(-0.5), "j = {j}: {h}");
        }
    }

    fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..2.5, n - 1).prop_map(|steps| {
            let mut acc = 0.0;
            std::iter::once(0.0)
                .chain(steps.into_iter().map(|s| {
                    acc += s;
                    acc
                }))
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn shortcut_matches_brute_force(tj in 1u32..=4, n in 2usize..=4, seed_angles in angles(4)) {
            let spin = Spin::from_twice(tj);
            let sched = Schedule::from_angles(seed_angles[..n].to_vec()).unwrap();
            let subsets = all_subsets(n);
            let brute = entropy_vector(&InitialState::maximally_mixed(spin), &sched, &subsets).unwrap();
            let fast = mixed_entropy_vector(spin, &sched, &subsets).unwrap();
            for s in subsets {
                prop_assert!((brute.get(s).unwrap() - fast.get(s).unwrap()).abs() < 1e-9);
            }
        }

        #[test]
        fn distributions_normalize_and_marginalize(tj in 1u32..=4, w in prop::collection::vec(0.01f64..1.0, 5), a in angles(3)) {
            let spin = Spin::from_twice(tj);
            let state = InitialState::from_weights(spin, w[..spin.dim()].to_vec()).unwrap();
            let sched = Schedule::from_angles(a).unwrap();
            let full = joint_distribution(&state, &sched, SubsetMask::full(3)).unwrap();
            prop_assert!((full.total() - 1.0).abs() < 1e-9);
            let prefix = joint_distribution(&state, &sched, SubsetMask::from_indices([0, 1])).unwrap();
            let marg = full.marginalize_last().unwrap();
            prop_assert_eq!(marg.subset(), prefix.subset());
            for (x, y) in marg.probs().iter().zip(prefix.probs()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn entropy_bounds_and_symmetry(tj in 0u32..60, beta in -6.0f64..6.0) {
            let spin = Spin::from_twice(tj);
            let h = wigner_entropy(spin, beta);
            prop_assert!(h >= -1e-15);
            prop_assert!(h <= (spin.dim() as f64).ln() + 1e-12);
            prop_assert!((h - wigner_entropy(spin, beta + PI)).abs() < 1e-10);
            prop_assert!((h - wigner_entropy(spin, 2.0 * PI - beta)).abs() < 1e-10);
        }

        #[test]
        fn quantum_vectors_are_monotone(tj in 1u32..=4, a in angles(3)) {
            let spin = Spin::from_twice(tj);
            let sched = Schedule::from_angles(a).unwrap();
            let subsets = all_subsets(3);
            let h = mixed_entropy_vector(spin, &sched, &subsets).unwrap();
            // only dropping outer measurements is guaranteed monotone: removing
            // an inner one is exactly what the D_i inequalities probe
            let contiguous_in = |s: SubsetMask, t: SubsetMask| {
                let ti: Vec<usize> = t.indices().collect();
                let si: Vec<usize> = s.indices().collect();
                ti.windows(si.len()).any(|w| w == si.as_slice())
            };
            for &s in &subsets {
                for &t in &subsets {
                    if s.is_subset_of(t) && contiguous_in(s, t) {
                        prop_assert!(h.get(s).unwrap() <= h.get(t).unwrap() + 1e-12);
                    }
                }
            }
        }
    }
}
