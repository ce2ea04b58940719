//! Airy function `Ai(x)` on the real line.
//!
//! `|x| < SWITCHOVER`: Maclaurin series summed in double-double arithmetic
//! (the alternating terms reach `e^{2|x|^{3/2}/3}` in size, so plain `f64`
//! loses up to nine digits at the switchover). `|x| ≥ SWITCHOVER`: the
//! large-argument expansions, truncated at their smallest term.

use crate::dd::Dd;
use crate::scalar::Real;

/// Boundary between the power series and the asymptotic expansions.
pub const SWITCHOVER: f64 = 8.0;

// Ai(0) and -Ai'(0) as double-double pairs.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

pub fn airy_ai<T: Real>(x: T) -> T {
    T::lit(airy_ai_f64(x.as_f64()))
}

pub fn airy_ai_f64(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() < SWITCHOVER {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic_positive(x)
    } else {
        asymptotic_negative(-x)
    }
}

/// Power-series branch, valid for any `x` but accurate only for moderate `|x|`.
pub fn maclaurin(x: f64) -> f64 {
    let xd = Dd::from(x);
    let x3 = xd.mul(xd).mul(xd);
    let mut f_term = Dd::from(1.0);
    let mut g_term = xd;
    let mut f = f_term;
    let mut g = g_term;
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        f_term = f_term.mul(x3).div_f64((k3 + 2.0) * (k3 + 3.0));
        g_term = g_term.mul(x3).div_f64((k3 + 3.0) * (k3 + 4.0));
        f = f.add(f_term);
        g = g.add(g_term);
        let small = 1e-34 * (f.hi.abs() + g.hi.abs()).max(1e-300);
        if f_term.hi.abs() < small && g_term.hi.abs() < small {
            break;
        }
    }
    AI0.mul(f).sub(MINUS_AIP0.mul(g)).to_f64()
}

/// `u_k` coefficients of the large-argument expansion.
fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    u
}

/// Sum `Σ (-1)^k u_k / ζ^k` over the selected parity, stopping at the
/// smallest term.
fn truncated(zeta: f64, parity: Option<usize>) -> f64 {
    let u = u_coefficients(80);
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut power = 1.0;
    for (k, uk) in u.iter().enumerate() {
        if k > 0 {
            power /= zeta;
        }
        let term = uk * power;
        if k > 1 && term.abs() > last {
            break;
        }
        last = term.abs();
        let wanted = parity.is_none_or(|p| k % 2 == p);
        if wanted {
            let sign = match parity {
                // alternate within the even/odd subsequence
                Some(_) => {
                    if (k / 2) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                None => {
                    if k % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            sum += sign * term;
        }
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `x → +∞` branch.
pub fn asymptotic_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let series = truncated(zeta, None);
    (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25)) * series
}

/// `Ai(-z)` for `z → +∞`.
pub fn asymptotic_negative(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let even = truncated(zeta, Some(0));
    let odd = truncated(zeta, Some(1));
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    (s * even - c * odd) / (std::f64::consts::PI.sqrt() * z.powf(0.25))
}
