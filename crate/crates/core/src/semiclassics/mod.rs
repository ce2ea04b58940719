//! Large-spin semiclassics: discriminant, turning points, classical action,
//! the ζ-map, uniform Airy approximation of d-matrix elements, the asymptotic
//! Wigner entropy and the allowed/forbidden classifier.
//!
//! Reduced indices are `μ = m/J`, `ν = n/J` with `J = j + 1/2`. With
//! `x = cos β`, `a = μν` and `c = sqrt((1-μ²)(1-ν²))` the discriminant is
//! `R = c² - (x - a)²`, so the allowed band is `|cos β - a| < c`.

mod airy;

pub use airy::{airy_ai, airy_ai_f64, SWITCHOVER as AIRY_SWITCHOVER};

use crate::cone::{closed_form_with, Elgi};
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::spin::{MagneticIndex, Spin};
use crate::temporal::Schedule;
use crate::wigner::apply_symmetry;

/// Distance from a turning point below which `(-ζ/R)^{1/4}` is replaced by its limit.
pub const TURNING_POINT_SERIES: f64 = 1e-4;

/// `(μ, ν) = (m/J, n/J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedIndices<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Real> ReducedIndices<T> {
    pub fn new(spin: Spin, m: MagneticIndex, n: MagneticIndex) -> Self {
        Self { mu: m.reduced(spin), nu: n.reduced(spin) }
    }

    fn a(&self) -> T {
        self.mu * self.nu
    }

    fn c(&self) -> T {
        ((T::one() - self.mu * self.mu) * (T::one() - self.nu * self.nu)).max(T::zero()).sqrt()
    }
}

/// Normalized discriminant `R(μ, ν, β) = sin²β - μ² - ν² + 2μν cos β`.
pub fn discriminant<T: Real>(mu: T, nu: T, beta: T) -> T {
    let s = beta.sin();
    s * s - mu * mu - nu * nu + T::lit(2.0) * mu * nu * beta.cos()
}

/// `R` for integer-labelled indices, normalized by `J²`.
pub fn discriminant_for<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> T {
    let r = ReducedIndices::new(spin, m, n);
    discriminant(r.mu, r.nu, beta)
}

/// Unnormalized `J² sin²β - m² - n² + 2mn cos β`.
pub fn scaled_discriminant<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> T {
    let big_j = spin.big_j::<T>();
    big_j * big_j * discriminant_for(spin, m, n, beta)
}

/// `(β_-, β_+)` with `0 ≤ β_+ ≤ β_- ≤ π`; `R > 0` exactly on `(β_+, β_-)`.
pub fn turning_points<T: Real>(mu: T, nu: T) -> (T, T) {
    let r = ReducedIndices { mu, nu };
    let (a, c) = (r.a(), r.c());
    let clamp = |x: T| x.max(-T::one()).min(T::one());
    (clamp(a - c).acos(), clamp(a + c).acos())
}

/// Which turning point the action and ζ vanish at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Anchored at `β_+`, valid on `(0, β_-]`; `dS/dβ = +sqrt|R| / sin β`.
    Plus,
    /// Anchored at `β_-`, valid on `[β_+, π)`; `dS/dβ = -sqrt|R| / sin β`.
    Minus,
}

impl Branch {
    pub fn anchor<T: Real>(self, mu: T, nu: T) -> T {
        let (minus, plus) = turning_points(mu, nu);
        match self {
            Branch::Plus => plus,
            Branch::Minus => minus,
        }
    }
}

/// Branch whose anchor is nearest to `β`; ties go to [`Branch::Plus`].
pub fn nearest_branch<T: Real>(mu: T, nu: T, beta: T) -> Branch {
    let (minus, plus) = turning_points(mu, nu);
    if (beta - plus).abs() <= (beta - minus).abs() {
        Branch::Plus
    } else {
        Branch::Minus
    }
}

/// Antiderivative of `sqrt(R)/sin β` in the allowed band.
fn allowed_primitive<T: Real>(r: ReducedIndices<T>, beta: T) -> T {
    let x = beta.cos();
    let (a, c) = (r.a(), r.c());
    let k1 = (r.mu - r.nu).abs();
    let k2 = (r.mu + r.nu).abs();
    let half = T::lit(0.5);
    let asin = |v: T| v.max(-T::one()).min(T::one()).asin();
    let mut g = asin((x - a) / c);
    if k2 > T::zero() {
        g = g + half * k2 * asin((k2 * k2 / (x + T::one()) - a - T::one()) / c);
    }
    if k1 > T::zero() {
        g = g + half * k1 * asin((k1 * k1 / (x - T::one()) + T::one() - a) / c);
    }
    -g
}

/// `(k, ln|(k² + q t + k sqrt(P)) / t|)` for the pole at `x = p`, written so
/// that neither branch subtracts nearly equal numbers.
fn pole_log<T: Real>(x: T, p: T, a: T, c: T) -> (T, T) {
    let q = p - a;
    let k = (q * q - c * c).max(T::zero()).sqrt();
    let t = x - p;
    let s = ((x - a) * (x - a) - c * c).max(T::zero()).sqrt();
    let u = k * k + q * t;
    let log = if u >= T::zero() {
        (u + k * s).abs().ln() - t.abs().ln()
    } else {
        (c * c).ln() + t.abs().ln() - (u - k * s).abs().ln()
    };
    (k, log)
}

/// Antiderivative of `sqrt(-R)/sin β` outside the allowed band.
fn forbidden_primitive<T: Real>(r: ReducedIndices<T>, beta: T) -> T {
    let x = beta.cos();
    let (a, c) = (r.a(), r.c());
    let y = x - a;
    let s = (y * y - c * c).max(T::zero()).sqrt();
    let l = if y >= T::zero() { (y + s).ln() } else { (c * c).ln() - (y - s).abs().ln() };
    let half = T::lit(0.5);
    let mut g = -l;
    let (k2, m2) = pole_log(x, -T::one(), a, c);
    if k2 > T::zero() {
        g = g - half * k2 * m2;
    }
    let (k1, m1) = pole_log(x, T::one(), a, c);
    if k1 > T::zero() {
        g = g + half * k1 * m1;
    }
    -g
}

/// Exact primitive values at `β_+` (`x = a + c`) or `β_-` (`x = a - c`). Every
/// `asin` argument there is ±1 and every log argument is `c`, so rounding in
/// `acos`/`cos` would otherwise cost `sqrt(ε)`.
fn anchor_primitive<T: Real>(r: ReducedIndices<T>, at_plus: bool, allowed: bool) -> T {
    let k1 = (r.mu - r.nu).abs();
    let k2 = (r.mu + r.nu).abs();
    if allowed {
        let g = T::FRAC_PI_2() - (k1 + k2) * T::FRAC_PI_4();
        if at_plus {
            -g
        } else {
            g
        }
    } else {
        r.c().ln() * (T::one() + T::lit(0.5) * (k2 - k1))
    }
}

/// Classical action `S` on `branch`: non-negative in the allowed band,
/// non-positive in the forbidden region, zero at the anchor.
pub fn action<T: Real>(mu: T, nu: T, beta: T, branch: Branch) -> Result<T> {
    let (minus, plus) = turning_points(mu, nu);
    let r = ReducedIndices { mu, nu };
    if !(beta > T::zero() && beta < T::PI()) {
        return domain(format!("action needs beta in (0, pi), got {beta}"));
    }
    match branch {
        Branch::Plus => {
            if beta > minus {
                return domain(format!("beta = {beta} lies past the far turning point {minus} of the + branch"));
            }
            if beta == plus {
                return Ok(T::zero());
            }
            if beta == minus {
                return Ok(allowed_phase(mu, nu));
            }
            // each primitive extends continuously to the turning point but
            // they differ by a constant, so anchor with the evaluation arm
            let allowed = discriminant(mu, nu, beta) > T::zero();
            let f = if allowed { allowed_primitive } else { forbidden_primitive };
            Ok(f(r, beta) - anchor_primitive(r, true, allowed))
        }
        Branch::Minus => {
            if beta < plus {
                return domain(format!("beta = {beta} lies before the far turning point {plus} of the - branch"));
            }
            if beta == minus {
                return Ok(T::zero());
            }
            if beta == plus {
                return Ok(allowed_phase(mu, nu));
            }
            let allowed = discriminant(mu, nu, beta) > T::zero();
            let f = if allowed { allowed_primitive } else { forbidden_primitive };
            Ok(anchor_primitive(r, false, allowed) - f(r, beta))
        }
    }
}

/// Total action across the allowed band, `π (1 - max(|μ|, |ν|))`.
pub fn allowed_phase<T: Real>(mu: T, nu: T) -> T {
    T::PI() * (T::one() - mu.abs().max(nu.abs()))
}

/// `ζ` from the action: `-(3JS/2)^{2/3}` when allowed, `(-3JS/2)^{2/3}` when forbidden.
pub fn zeta<T: Real>(spin: Spin, mu: T, nu: T, beta: T, branch: Branch) -> Result<T> {
    let s = action(mu, nu, beta, branch)?;
    Ok(zeta_from_action(spin.big_j(), s))
}

fn zeta_from_action<T: Real>(big_j: T, s: T) -> T {
    let x = T::lit(1.5) * big_j * s;
    let p = T::lit(2.0 / 3.0);
    if x >= T::zero() {
        -x.powf(p)
    } else {
        (-x).powf(p)
    }
}

/// Allowed / forbidden / boundary-layer tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionTag {
    Allowed,
    Forbidden,
    /// Within the given half-width of the `R = 0` locus.
    Boundary(f64),
}

impl RegionTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegionTag::Allowed => "allowed",
            RegionTag::Forbidden => "forbidden",
            RegionTag::Boundary(_) => "boundary",
        }
    }
}

/// Radial coordinate `r` with `R = sin²β - r²`; the allowed region is the
/// ellipse `r < |sin β|` in the `(m, n)` plane.
pub fn radial_coordinate<T: Real>(mu: T, nu: T, beta: T) -> T {
    let (s, c) = (beta * T::lit(0.5)).sin_cos();
    let p = (mu + nu) * s;
    let q = (mu - nu) * c;
    (p * p + q * q).sqrt()
}

/// Boundary-layer half-width `J^{-2/3}`.
pub fn default_boundary_eps(spin: Spin) -> f64 {
    spin.big_j::<f64>().powf(-2.0 / 3.0)
}

pub fn classify_region<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T, eps: f64) -> RegionTag {
    let r = ReducedIndices::<T>::new(spin, m, n);
    let radius = radial_coordinate(r.mu, r.nu, beta);
    let gap = (radius - beta.sin().abs()).as_f64();
    if gap.abs() < eps {
        RegionTag::Boundary(eps)
    } else if gap < 0.0 {
        RegionTag::Allowed
    } else {
        RegionTag::Forbidden
    }
}

/// Uniform approximation of one d-matrix element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbElement<T> {
    pub value: T,
    pub zeta: T,
    pub action: T,
    pub branch: Branch,
    pub region: RegionTag,
    /// False near a double turning point, where a single-anchor Airy form does not apply.
    pub reliable: bool,
}

/// Airy approximation of `d^j_{mn}(β)`. Angles are first reduced to `[0, π]`;
/// exact multiples of π are rejected.
pub fn d_wkb<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Result<WkbElement<T>> {
    spin.check(m)?;
    spin.check(n)?;
    let canon = apply_symmetry(spin, m, n, beta);
    let (m, n, beta) = (canon.m, canon.n, canon.beta);
    if !(beta > T::zero() && beta < T::PI()) {
        return domain(format!("d_wkb needs beta away from multiples of pi, got {beta}"));
    }
    let big_j = spin.big_j::<T>();
    let r = ReducedIndices::<T>::new(spin, m, n);
    let (minus, plus) = turning_points(r.mu, r.nu);
    let branch = nearest_branch(r.mu, r.nu, beta);
    let anchor = branch.anchor(r.mu, r.nu);
    let s = action(r.mu, r.nu, beta, branch)?;
    let z = zeta_from_action(big_j, s);
    let rr = discriminant(r.mu, r.nu, beta);

    let ratio = if (beta - anchor).abs() < T::lit(TURNING_POINT_SERIES) || rr == T::zero() {
        // ζ ≈ -(J |R'| / sin β0)^{2/3} (β - β0) with |R'| = 2c sin β0
        let s0 = anchor.sin();
        let slope = T::lit(2.0) * r.c() * s0;
        big_j.powf(T::lit(2.0 / 3.0)) * (slope * s0).powf(T::lit(-2.0 / 3.0))
    } else {
        -z / rr
    };
    let mut value = T::lit(2.0).sqrt() / big_j.sqrt() * airy_ai(z) * ratio.powf(T::lit(0.25));
    let n_minus_m = (n.twice_m() - m.twice_m()) / 2;
    if n_minus_m > 0 && n_minus_m % 2 == 1 {
        value = -value;
    }
    if branch == Branch::Minus {
        let cycles = (big_j * allowed_phase(r.mu, r.nu) / T::PI() - T::lit(0.5)).round();
        if cycles.as_f64().rem_euclid(2.0) == 1.0 {
            value = -value;
        }
    }
    let region = if rr > T::zero() { RegionTag::Allowed } else { RegionTag::Forbidden };
    let reliable = (minus - plus).as_f64() > 4.0 * default_boundary_eps(spin);
    let value = if canon.sign < 0 { -value } else { value };
    Ok(WkbElement { value, zeta: z, action: s, branch, region, reliable })
}

/// Local average of `|d|²` in the allowed interior, `1/(π J sqrt R)`.
pub fn allowed_envelope<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> T {
    let rr = discriminant_for(spin, m, n, beta);
    T::one() / (T::PI() * spin.big_j::<T>() * rr.sqrt())
}

/// Forbidden-region decay scale `exp(2JS) / (2π J sqrt|R|)` for `|d|²`, with
/// `S` taken on the nearest branch.
pub fn forbidden_envelope<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Result<T> {
    let r = ReducedIndices::<T>::new(spin, m, n);
    let branch = nearest_branch(r.mu, r.nu, beta);
    let s = action(r.mu, r.nu, beta, branch)?;
    let big_j = spin.big_j::<T>();
    let rr = discriminant(r.mu, r.nu, beta).abs();
    Ok((T::lit(2.0) * big_j * s).exp() / (T::lit(2.0) * T::PI() * big_j * rr.sqrt()))
}

/// Large-spin limit of the Wigner entropy, `ln((2j+1)π) + ln|sin β| - 5/2`.
pub fn entropy_asymptotic<T: Real>(spin: Spin, beta: T) -> T {
    (T::lit(spin.dim() as f64) * T::PI()).ln() + beta.sin().abs().ln() - T::lit(2.5)
}

/// `min_k |β - kπ|`.
pub fn distance_to_multiple_of_pi<T: Real>(beta: T) -> T {
    let r = beta.abs() % T::PI();
    r.min(T::PI() - r)
}

/// Half-width of the window around `nπ` where the asymptotics are withheld,
/// `max(0.1, 5 J^{-2/3})`.
pub fn breakdown_half_width(spin: Spin) -> f64 {
    (5.0 * default_boundary_eps(spin)).max(0.1)
}

/// j-independent large-spin limit of `D_{i,i+1}` (0-based `i`), built from
/// `ln|sin β|` differences. Needs `n ≥ 3`: for two times the limit carries an
/// uncancelled `ln(2j+1)`.
pub fn asymptotic_mutual_limit<T: Real>(schedule: &Schedule<T>, i: usize, window: T) -> Result<T> {
    let n = schedule.n();
    if n < 3 {
        return domain("the j-independent limit needs at least three times");
    }
    if i + 1 >= n {
        return domain(format!("no pair ({}, {}) in a schedule of {n} times", i + 1, i + 2));
    }
    let bad = std::cell::Cell::new(None);
    let value = closed_form_with(n, Elgi::Mutual(i, i + 1), T::zero(), |a, b| {
        let beta = schedule.beta(a, b);
        if distance_to_multiple_of_pi(beta) < window {
            bad.set(Some((a, b, beta)));
        }
        beta.sin().abs().ln()
    })?;
    if let Some((a, b, beta)) = bad.get() {
        return domain(format!("angle beta_{{{},{}}} = {beta} lies within {window} of a multiple of pi", a + 1, b + 1));
    }
    Ok(value)
}

/// Large-spin value of `D_i` or `D_{i,k}` for the maximally mixed state.
pub fn asymptotic_d<T: Real>(spin: Spin, schedule: &Schedule<T>, which: Elgi, window: T) -> Result<T> {
    crate::cone::asymptotic_closed_form(spin, schedule, which, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::d_matrix;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn idx(twice_m: i32) -> MagneticIndex {
        MagneticIndex::from_twice(twice_m)
    }

    /// `∫ sqrt|R| / sin` between the anchor and `beta`, signed as the action.
    fn action_by_quadrature(mu: f64, nu: f64, beta: f64, branch: Branch) -> f64 {
        let anchor = branch.anchor(mu, nu);
        let (bm, bp) = turning_points(mu, nu);
        // factored R avoids the cancellation of the expanded form near the roots
        let g = |b: f64| {
            let r =
                4.0 * (0.5 * (b + bp)).sin() * (0.5 * (b - bp)).sin() * (0.5 * (bm + b)).sin() * (0.5 * (bm - b)).sin();
            r.abs().sqrt() / b.sin()
        };
        let (lo, hi) = if beta < anchor { (beta, anchor) } else { (anchor, beta) };
        // cosine map removes the square-root endpoint behaviour
        let h = |t: f64| {
            let b = lo + (hi - lo) * 0.5 * (1.0 - (PI * t).cos());
            g(b) * (hi - lo) * 0.5 * PI * (PI * t).sin()
        };
        let mag = quadrature::double_exponential::integrate(h, 0.0, 1.0, 1e-14).integral;
        let allowed = discriminant(mu, nu, beta) > 0.0;
        if allowed {
            mag
        } else {
            -mag
        }
    }

    #[test]
    fn discriminant_special_angles() {
        let (mu, nu) = (0.3f64, -0.55);
        assert!((discriminant(0.0, 0.0, 1.1f64) - 1.1f64.sin().powi(2)).abs() < 1e-15);
        assert!((discriminant(mu, nu, 0.0) + (mu - nu) * (mu - nu)).abs() < 1e-15);
        assert!((discriminant(mu, nu, PI) + (mu + nu) * (mu + nu)).abs() < 1e-15);
        let s = Spin::integer(10);
        let (m, n) = (idx(6), idx(-4));
        let big_j: f64 = s.big_j();
        let scaled = scaled_discriminant(s, m, n, 0.8);
        let direct = big_j * big_j * 0.8f64.sin().powi(2) - 9.0 - 4.0 + 2.0 * 3.0 * -2.0 * 0.8f64.cos();
        assert!((scaled - direct).abs() < 1e-12);
    }

    #[test]
    fn centre_action_is_linear() {
        for beta in [0.2f64, 1.0, FRAC_PI_2, 2.9] {
            assert!((action(0.0, 0.0, beta, Branch::Plus).unwrap() - beta).abs() < 1e-13);
            assert!((action(0.0, 0.0, beta, Branch::Minus).unwrap() - (PI - beta)).abs() < 1e-13);
        }
    }

    #[test]
    fn action_matches_quadrature() {
        let cases = [(0.3, -0.2), (0.7, 0.1), (-0.45, -0.6), (0.05, 0.9), (0.5, 0.5), (0.6, -0.6)];
        for (mu, nu) in cases {
            let (minus, plus) = turning_points(mu, nu);
            let mut betas = vec![];
            for t in [0.1, 0.37, 0.5, 0.81, 0.97] {
                betas.push(plus + t * (minus - plus));
            }
            for t in [0.2, 0.6, 0.9] {
                betas.push(t * plus);
                betas.push(minus + t * (PI - minus));
            }
            for beta in betas {
                if !(beta > 0.0 && beta < PI) {
                    continue;
                }
                for branch in [Branch::Plus, Branch::Minus] {
                    let Ok(got) = action(mu, nu, beta, branch) else { continue };
                    let want = action_by_quadrature(mu, nu, beta, branch);
                    assert!((got - want).abs() < 1e-9, "mu={mu} nu={nu} beta={beta} {branch:?}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn action_derivative() {
        let (mu, nu) = (0.25f64, -0.4);
        let h = 1e-6;
        for beta in [0.3f64, 1.2, 2.0, 2.9] {
            let slope = discriminant(mu, nu, beta).abs().sqrt() / beta.sin();
            for (branch, sign) in [(Branch::Plus, 1.0), (Branch::Minus, -1.0)] {
                let (Ok(a), Ok(b)) = (action(mu, nu, beta + h, branch), action(mu, nu, beta - h, branch)) else {
                    continue;
                };
                let fd = (a - b) / (2.0 * h);
                assert!((fd - sign * slope).abs() < 1e-6, "beta={beta} {branch:?}: {fd} vs {}", sign * slope);
            }
        }
    }

    #[test]
    fn action_sign_anchor_and_domain() {
        let (mu, nu) = (0.3, 0.2);
        let (minus, plus) = turning_points(mu, nu);
        assert!(minus > plus);
        assert_eq!(action(mu, nu, plus, Branch::Plus).unwrap(), 0.0);
        assert_eq!(action(mu, nu, minus, Branch::Minus).unwrap(), 0.0);
        let mid = 0.5 * (plus + minus);
        assert!(action(mu, nu, mid, Branch::Plus).unwrap() > 0.0);
        assert!(action(mu, nu, mid, Branch::Minus).unwrap() > 0.0);
        assert!(action(mu, nu, 0.5 * plus, Branch::Plus).unwrap() < 0.0);
        assert!(action(mu, nu, 0.5 * (minus + PI), Branch::Minus).unwrap() < 0.0);
        assert!(action(mu, nu, 0.5 * (minus + PI), Branch::Plus).is_err());
        assert!(action(mu, nu, 0.5 * plus, Branch::Minus).is_err());
        assert!(action(mu, nu, 0.0, Branch::Plus).is_err());
        assert!(action(mu, nu, PI, Branch::Minus).is_err());
    }

    #[test]
    fn full_band_phase() {
        for (mu, nu) in [(0.3f64, 0.2), (-0.7, 0.1), (0.0, 0.5), (0.45, -0.3)] {
            let (minus, _) = turning_points(mu, nu);
            let total = action(mu, nu, minus, Branch::Plus).unwrap();
            assert!((total - allowed_phase(mu, nu)).abs() < 1e-10, "({mu}, {nu}): {total}");
        }
    }

    #[test]
    fn zeta_signs_and_continuity() {
        let s = Spin::integer(50);
        let (mu, nu) = (0.3f64, -0.1);
        let (minus, plus) = turning_points(mu, nu);
        let inside = zeta(s, mu, nu, 0.5 * (plus + minus), Branch::Plus).unwrap();
        let outside = zeta(s, mu, nu, 0.5 * plus, Branch::Plus).unwrap();
        assert!(inside < 0.0 && outside > 0.0);
        for branch in [Branch::Plus, Branch::Minus] {
            let b0 = branch.anchor(mu, nu);
            let left = zeta(s, mu, nu, b0 - 1e-7, branch).unwrap();
            let right = zeta(s, mu, nu, b0 + 1e-7, branch).unwrap();
            assert!(left.abs() < 1e-3 && right.abs() < 1e-3);
            assert!(left.signum() != right.signum());
        }
    }

    proptest! {
        #[test]
        fn turning_points_are_roots(mu in -0.99f64..0.99, nu in -0.99f64..0.99) {
            let (minus, plus) = turning_points(mu, nu);
            prop_assert!(0.0 <= plus && plus <= minus && minus <= PI);
            prop_assert!(discriminant(mu, nu, plus).abs() < 1e-12);
            prop_assert!(discriminant(mu, nu, minus).abs() < 1e-12);
            prop_assert!(discriminant(mu, nu, 0.5 * (plus + minus)) >= 0.0);
        }
    }

    #[test]
    fn allowed_fraction_matches_ellipse_area() {
        let s = Spin::integer(200);
        for beta in [PI / 12.0, PI / 6.0, PI / 3.0, FRAC_PI_2] {
            let mut allowed = 0usize;
            for m in s.indices() {
                for n in s.indices() {
                    if discriminant_for::<f64>(s, m, n, beta) > 0.0 {
                        allowed += 1;
                    }
                }
            }
            let frac = allowed as f64 / (s.dim() * s.dim()) as f64;
            assert!((frac - PI * beta.sin() / 4.0).abs() < 0.02, "beta={beta}: {frac}");
        }
    }

    #[test]
    fn region_examples() {
        let s = Spin::integer(200);
        let eps = default_boundary_eps(s);
        assert_eq!(classify_region(s, idx(0), idx(0), FRAC_PI_2, eps), RegionTag::Allowed);
        assert_eq!(classify_region(s, idx(400), idx(-400), FRAC_PI_2, eps), RegionTag::Forbidden);
        assert_eq!(classify_region(s, idx(400), idx(400), 1.0, eps), RegionTag::Forbidden);
        let mut tags = std::collections::HashSet::new();
        for m in s.indices().step_by(7) {
            for n in s.indices().step_by(5) {
                tags.insert(classify_region(s, m, n, 1.0, 0.0).name());
            }
        }
        assert!(!tags.contains("boundary"));
        assert!(tags.contains("allowed") && tags.contains("forbidden"));
        assert_eq!(RegionTag::Boundary(0.1).name(), "boundary");
    }

    #[test]
    fn wkb_tracks_exact_matrix() {
        let s = Spin::integer(200);
        let big_j: f64 = s.big_j();
        let eps = default_boundary_eps(s);
        let beta = 1.0;
        let dm = d_matrix::<f64>(s, beta);
        let mut checked = 0;
        for m in s.indices().step_by(3) {
            for n in s.indices().step_by(5) {
                let exact = dm.element(m, n).unwrap();
                let w = d_wkb(s, m, n, beta).unwrap();
                let rr = discriminant_for::<f64>(s, m, n, beta);
                if classify_region(s, m, n, beta, eps) == RegionTag::Allowed && w.zeta < -2.0 && w.reliable {
                    let amp = (2.0 / (PI * big_j * rr.sqrt())).sqrt();
                    assert!((w.value - exact).abs() < 0.02 * amp, "m={m} n={n}: {} vs {exact}", w.value);
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn wkb_deep_forbidden_and_near_turning_point() {
        let s = Spin::integer(200);
        let w = d_wkb(s, idx(400), idx(400), FRAC_PI_2).unwrap();
        let exact = 0.5f64.powi(200);
        assert!(w.value.abs() < 1e-30);
        assert!(((w.value - exact) / exact).abs() < 0.1);

        let (m, n) = (idx(100), idx(-60));
        let r = ReducedIndices::<f64>::new(s, m, n);
        let (_, plus) = turning_points(r.mu, r.nu);
        for beta in [plus, plus + 1e-6, plus - 1e-6, plus + 1e-3] {
            let w = d_wkb(s, m, n, beta).unwrap();
            let exact = d_matrix::<f64>(s, beta).element(m, n).unwrap();
            assert!(w.value.is_finite());
            assert!((w.value - exact).abs() < 0.05 * exact.abs().max(1e-3), "beta={beta}: {} vs {exact}", w.value);
        }
        assert!(d_wkb(s, m, n, 0.0).is_err());
        assert!(d_wkb(s, m, n, PI).is_err());
        assert!(d_wkb(s, idx(401), n, 1.0).is_err());
    }

    #[test]
    fn wkb_respects_symmetries() {
        let s = Spin::from_twice(61);
        let (m, n) = (idx(13), idx(-7));
        let a = d_wkb(s, m, n, 1.1f64).unwrap().value;
        let b = d_wkb(s, n, m, -1.1).unwrap().value;
        let c = d_wkb(s, n, m, 1.1).unwrap().value;
        assert!((a - b).abs() < 1e-14);
        // (-1)^{m-n} with m - n = 10
        assert!((a - c).abs() < 1e-14);
    }

    #[test]
    fn envelope_average_at_centre() {
        // average one full oscillation period in beta around pi/2
        let s = Spin::integer(200);
        let big_j: f64 = s.big_j();
        let period = PI / big_j;
        let samples = 16;
        let mut mean = 0.0;
        for k in 0..samples {
            let beta = FRAC_PI_2 - 0.5 * period + period * (k as f64 + 0.5) / samples as f64;
            let d = d_matrix::<f64>(s, beta).element(idx(0), idx(0)).unwrap();
            mean += d * d / allowed_envelope(s, idx(0), idx(0), beta);
        }
        mean /= samples as f64;
        assert!((mean - 1.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn forbidden_decay_bound() {
        let s = Spin::integer(200);
        let cut = 5.0 * default_boundary_eps(s);
        for beta in [0.4, FRAC_PI_2, 2.5] {
            let dm = d_matrix::<f64>(s, beta);
            for m in s.indices().step_by(3) {
                for n in s.indices().step_by(3) {
                    let r = ReducedIndices::<f64>::new(s, m, n);
                    if radial_coordinate(r.mu, r.nu, beta) - beta.sin() <= cut {
                        continue;
                    }
                    let d = dm.element(m, n).unwrap();
                    let bound = forbidden_envelope(s, m, n, beta).unwrap();
                    assert!(d * d <= 3.0 * bound, "m={m} n={n} beta={beta}");
                    assert!(d * d < 1e-8);
                }
            }
        }
    }

    #[test]
    fn entropy_asymptote_and_windows() {
        let s = Spin::integer(200);
        let want = (401.0 * PI).ln() - 2.5;
        assert!((entropy_asymptotic(s, FRAC_PI_2) - want).abs() < 1e-13);
        assert!((entropy_asymptotic(s, 1.0) - entropy_asymptotic(s, 1.0 + PI)).abs() < 1e-12);
        assert!((distance_to_multiple_of_pi(3.0 * PI + 0.2) - 0.2).abs() < 1e-12);
        assert!((distance_to_multiple_of_pi(-0.3f64) - 0.3).abs() < 1e-15);
        assert_eq!(breakdown_half_width(Spin::integer(100_000)), 0.1);
        let w = breakdown_half_width(Spin::integer(200));
        assert!((w - 5.0 * 200.5f64.powf(-2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn mutual_limit_closed_forms() {
        let b: f64 = 0.7;
        let three = Schedule::equally_spaced(3, b).unwrap();
        let got = asymptotic_mutual_limit(&three, 0, 0.1).unwrap();
        assert!((got - (2.0 * b).sin().ln() + b.sin().ln()).abs() < 1e-13);
        let four = Schedule::equally_spaced(4, b).unwrap();
        let got = asymptotic_mutual_limit(&four, 1, 0.1).unwrap();
        let want = ((2.0 * b).sin().powi(2) / ((3.0 * b).sin() * b.sin())).abs().ln();
        assert!((got - want).abs() < 1e-13);
        assert!(asymptotic_mutual_limit(&Schedule::equally_spaced(3, PI / 2.0 + 0.01).unwrap(), 0, 0.1).is_err());
        assert!(asymptotic_mutual_limit(&Schedule::equally_spaced(2, b).unwrap(), 0, 0.1).is_err());
        assert!(asymptotic_mutual_limit(&three, 2, 0.1).is_err());
    }

    #[test]
    fn asymptotic_d_agrees_with_limit() {
        let s = Spin::integer(30);
        let four = Schedule::equally_spaced(4, 0.6f64).unwrap();
        let a: f64 = asymptotic_d(s, &four, Elgi::Mutual(1, 2), 0.1).unwrap();
        let b = asymptotic_mutual_limit(&four, 1, 0.1).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
