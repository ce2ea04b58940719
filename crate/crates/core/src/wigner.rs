//! Real Wigner d-matrices for rotations about the y axis.
//!
//! Layout: `DMatrix` stores `d^j_{mn}(β)` at row `n`, column `m`, both indices
//! descending from `+j` to `-j`. With this layout the matrix is the ordinary
//! rotation matrix `⟨j,n| exp(-iβJ_y) |j,m⟩`; for `j = 1/2` it reads
//! `[[cos β/2, -sin β/2], [sin β/2, cos β/2]]`.
//!
//! Full matrices are built by coupling one spin-1/2 factor at a time
//! (symmetric-power recursion), which keeps every step an exact isometry and
//! stays orthogonal to rounding for `2j` in the hundreds. The explicit
//! alternating series is kept as an independent reference evaluator.

use rayon::prelude::*;

use crate::dd::Dd;
use crate::error::{domain, Result};
use crate::scalar::{compensated_sum, ln_factorials, Real};
use crate::spin::{MagneticIndex, Spin};

/// Orthogonality gate used for matrices with `2j ≤ ORTHOGONALITY_GATE_TWICE_J`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;
pub const ORTHOGONALITY_GATE_TWICE_J: u32 = 400;

/// Dense `(2j+1)×(2j+1)` matrix `d^j(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix<T> {
    spin: Spin,
    beta: T,
    elems: Vec<T>,
}

impl<T: Real> DMatrix<T> {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// Entry at storage position (`row`, `col`).
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.elems[row * self.dim() + col]
    }

    /// `d^j_{mn}(β)`: ket `m`, bra `n`.
    pub fn element(&self, m: MagneticIndex, n: MagneticIndex) -> Result<T> {
        self.spin.check(m)?;
        self.spin.check(n)?;
        Ok(self.get(self.spin.position(n), self.spin.position(m)))
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.elems
    }

    pub fn row(&self, row: usize) -> &[T] {
        let d = self.dim();
        &self.elems[row * d..(row + 1) * d]
    }

    /// `max |d dᵀ - I|`.
    pub fn orthogonality_defect(&self) -> T {
        let d = self.dim();
        (0..d)
            .into_par_iter()
            .map(|r| {
                let mut worst = T::zero();
                let ra = self.row(r);
                for s in 0..d {
                    let rb = self.row(s);
                    let dot = compensated_sum(ra.iter().zip(rb).map(|(&x, &y)| x * y));
                    let target = if r == s { T::one() } else { T::zero() };
                    worst = worst.max((dot - target).abs());
                }
                worst
            })
            .reduce(T::zero, |a, b| a.max(b))
    }
}

/// Full `d^j(β)` for any real `β`.
///
/// The recursion is valid for all angles (the half-angle spinor carries the
/// `(-1)^{2j}` periodicity), so no argument reduction is applied.
pub fn d_matrix<T: Real>(spin: Spin, beta: T) -> DMatrix<T> {
    let half = beta / T::lit(2.0);
    let (s, c) = half.sin_cos();
    let nmax = spin.twice_j() as usize;
    let sqrt: Vec<T> = (0..=nmax).map(|k| T::lit(k as f64).sqrt()).collect();

    let mut prev = vec![T::one()];
    for big_n in 1..=nmax {
        let dp = big_n; // previous dimension
        let dn = big_n + 1;
        let at = |v: &Vec<T>, r: usize, k: usize| -> T {
            if r < dp && k < dp {
                v[r * dp + k]
            } else {
                T::zero()
            }
        };
        let inv_n = T::one() / T::lit(big_n as f64);
        let build_row = |r: usize, out: &mut [T]| {
            let wr = sqrt[big_n - r];
            let wl = sqrt[r];
            for (k, slot) in out.iter_mut().enumerate() {
                // new factor carries +1/2 (needs k < N) or -1/2 (needs k > 0);
                // the two routes are averaged with weights (N-k)/N and k/N
                let mut acc = T::zero();
                if k < big_n {
                    let up = c * wr * at(&prev, r, k);
                    let down = if r > 0 { s * wl * at(&prev, r - 1, k) } else { T::zero() };
                    acc = acc + sqrt[big_n - k] * (up + down);
                }
                if k > 0 {
                    let up = -s * wr * at(&prev, r, k - 1);
                    let down = if r > 0 { c * wl * at(&prev, r - 1, k - 1) } else { T::zero() };
                    acc = acc + sqrt[k] * (up + down);
                }
                *slot = acc * inv_n;
            }
        };
        let mut next = vec![T::zero(); dn * dn];
        if dn >= 96 {
            next.par_chunks_mut(dn).enumerate().for_each(|(r, out)| build_row(r, out));
        } else {
            next.chunks_mut(dn).enumerate().for_each(|(r, out)| build_row(r, out));
        }
        prev = next;
    }

    DMatrix { spin, beta, elems: prev }
}

/// Element-wise explicit series for `d^j_{mn}(β)`, `0 ≤ β ≤ π`.
///
/// Terms are binomial products evaluated and summed in double-double, so the
/// absolute error is about 1e-32 times the largest term. Terms reach ~1e7 at
/// `2j = 60` and grow roughly like `2^{2j}`, so past `2j ≈ 150` the result is
/// no better than `f64` cancellation allows.
pub fn d_element_series<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Result<T> {
    spin.check(m)?;
    spin.check(n)?;
    if !(beta >= T::zero() && beta <= T::PI()) {
        return domain(format!("series evaluation requires 0 <= beta <= pi, got {beta}"));
    }
    let tj = spin.twice_j() as i64;
    let (tm, tn) = (m.twice_m() as i64, n.twice_m() as i64);
    let jpm = ((tj + tm) / 2) as usize;
    let jmm = ((tj - tm) / 2) as usize;
    let jpn = ((tj + tn) / 2) as usize;
    let jmn = ((tj - tn) / 2) as usize;
    let n_minus_m = (tn - tm) / 2;

    // term_s = sqrt(jpn! jmn! / (jpm! jmm!)) · C(jpm, s) · C(jmm, jmn - s) · cos^a · sin^b
    let d = n_minus_m.unsigned_abs() as usize;
    let mut ratio = Dd::from(1.0);
    for i in 1..=d {
        ratio = if n_minus_m >= 0 {
            ratio.mul_f64((jpm + i) as f64).div_f64((jmn + i) as f64)
        } else {
            ratio.mul_f64((jmm + i) as f64).div_f64((jpn + i) as f64)
        };
    }
    let prefactor = ratio.sqrt();
    let binom = |top: usize, k: usize| {
        let k = k.min(top - k);
        (0..k).fold(Dd::from(1.0), |acc, i| acc.mul_f64((top - i) as f64).div_f64((i + 1) as f64))
    };

    let (sh, ch) = (beta.as_f64() / 2.0).sin_cos();
    let (sh, ch) = (Dd::from(sh), Dd::from(ch));
    let s_min = 0.max(-n_minus_m) as usize;
    let s_max = jpm.min(jmn);
    let mut sum = Dd::from(0.0);
    for s in s_min..=s_max {
        let cos_pow = tj + (tm - tn) / 2 - 2 * s as i64;
        let sin_pow = n_minus_m + 2 * s as i64;
        debug_assert!(cos_pow >= 0 && sin_pow >= 0);
        let term = prefactor
            .mul(binom(jpm, s))
            .mul(binom(jmm, jmn - s))
            .mul(ch.powi(cos_pow as u32))
            .mul(sh.powi(sin_pow as u32));
        let negative = (n_minus_m + s as i64).rem_euclid(2) == 1;
        sum = sum.add(if negative { term.neg() } else { term });
    }
    Ok(T::lit(sum.to_f64()))
}

/// Canonical representative produced by [`apply_symmetry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canonical<T> {
    pub m: MagneticIndex,
    pub n: MagneticIndex,
    pub beta: T,
    pub sign: i32,
}

/// Map `(m, n, β)` to `(m', n', β' ∈ [0, π])` with `d_{mn}(β) = sign · d_{m'n'}(β')`.
///
/// Uses `d(β + 2π) = (-1)^{2j} d(β)` and `d_{mn}(-β) = d_{nm}(β)`.
pub fn apply_symmetry<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Canonical<T> {
    let two_pi = T::PI() + T::PI();
    let turns = (beta / two_pi).round();
    let mut reduced = beta - turns * two_pi;
    let mut turns = turns.to_i64().unwrap_or(0);
    if reduced <= -T::PI() {
        reduced = reduced + two_pi;
        turns -= 1;
    } else if reduced > T::PI() {
        reduced = reduced - two_pi;
        turns += 1;
    }
    let sign = if turns.rem_euclid(2) == 1 { spin.parity_sign() } else { 1 };
    if reduced < T::zero() {
        Canonical { m: n, n: m, beta: -reduced, sign }
    } else {
        Canonical { m, n, beta: reduced, sign }
    }
}

/// Series for any `β`, via [`apply_symmetry`].
pub fn d_element_series_any<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Result<T> {
    let c = apply_symmetry(spin, m, n, beta);
    let v = d_element_series(spin, c.m, c.n, c.beta)?;
    Ok(if c.sign < 0 { -v } else { v })
}

/// Leading small-angle term of `d^j_{mn}(β)`:
/// `sqrt[(j+a)!(j-b)!/((j+b)!(j-a)!)] · (β/2)^{a-b}/(a-b)!` with
/// `a = max(m,n)`, `b = min(m,n)`, carrying the series sign `(-1)^{max(0, n-m)}`.
pub fn small_beta_leading<T: Real>(spin: Spin, m: MagneticIndex, n: MagneticIndex, beta: T) -> Result<T> {
    spin.check(m)?;
    spin.check(n)?;
    let tj = spin.twice_j() as i64;
    let (ta, tb) = (m.twice_m().max(n.twice_m()) as i64, m.twice_m().min(n.twice_m()) as i64);
    let k = ((ta - tb) / 2) as usize;
    let lf: Vec<T> = ln_factorials(spin.twice_j() as usize + 1);
    let idx = |t: i64| (t / 2) as usize;
    let log_ratio = T::lit(0.5) * (lf[idx(tj + ta)] + lf[idx(tj - tb)] - lf[idx(tj + tb)] - lf[idx(tj - ta)]);
    let mag = if k == 0 {
        log_ratio.exp()
    } else {
        (log_ratio - lf[k] + T::lit(k as f64) * (beta / T::lit(2.0)).abs().ln()).exp()
    };
    let signed_pow = if beta < T::zero() && k % 2 == 1 { -1 } else { 1 };
    let n_minus_m = (n.twice_m() - m.twice_m()) / 2;
    let series_sign = if n_minus_m > 0 && n_minus_m % 2 == 1 { -1 } else { 1 };
    Ok(if signed_pow * series_sign < 0 { -mag } else { mag })
}
