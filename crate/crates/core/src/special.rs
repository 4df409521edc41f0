//! Special functions needed by the transverse modes: associated Laguerre
//! polynomials and integer-order Bessel functions of the first kind.
//!
//! Both Bessel families are evaluated with Miller's backward recurrence,
//! normalized with the generating-function sums
//!
//! ```text
//! e^x = I_0(x) + 2 Σ_{k≥1} I_k(x)        1 = J_0(x) + 2 Σ_{k≥1} J_{2k}(x)
//! ```
//!
//! The modified-Bessel sum has only positive terms, so the exponentially
//! scaled `e^{-x} I_l(x)` comes out with full relative precision and never
//! overflows.

use crate::error::{Error, Result};

/// Largest argument for which `e^x` is finite in `f64`.
const EXP_LIMIT: f64 = 709.782_712_893_384;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// Associated Laguerre polynomial `L_p^a(x)` in the standard convention,
/// `L_p^a(x) = Σ_m (-1)^m C(p+a, p-m) x^m / m!`, via the three-term recurrence.
pub fn laguerre_poly(p: u32, a: u32, x: f64) -> f64 {
    let a = a as f64;
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)` by direct summation; exact enough for the index ranges used here.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Exponentially scaled modified Bessel function `e^{-x} I_l(x)`, `x ≥ 0`.
///
/// Negative orders are folded with `I_{-l} = I_l`.
pub fn bessel_i_scaled(l: i32, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_i_scaled requires x >= 0, got {x}");
    let l = l.unsigned_abs() as usize;
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    // I_k/I_0 ~ exp(-k^2 / 2x) for large x; 1e-17 needs k^2 > 80 x.
    let start = l + 20 + (100.0 * x).sqrt().ceil() as usize;
    let two_over_x = 2.0 / x;

    let mut above = 0.0; // y_{k+1}
    let mut here = 1e-300; // y_k, arbitrary seed
    let mut at_l = 0.0;
    let mut sum = 0.0; // Σ_{k≥1} y_k
    for k in (1..=start).rev() {
        let below = (k as f64) * two_over_x * here + above;
        above = here;
        here = below;
        // `here` now holds y_{k-1}, `above` holds y_k.
        sum += above;
        if k == l {
            at_l = above;
        }
        if here > RESCALE_ABOVE {
            here *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            at_l *= RESCALE_BY;
        }
    }
    if l == 0 {
        at_l = here;
    }
    at_l / (here + 2.0 * sum)
}

/// Modified Bessel function of the first kind `I_l(x)`, `x ≥ 0`.
///
/// Returns [`Error::Overflow`] once `I_l(x)` leaves the `f64` range; callers
/// that combine `I_l` with a Gaussian should use [`bessel_i_scaled`].
pub fn bessel_i(l: i32, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Overflow(format!(
            "bessel_i: argument {x} must be >= 0"
        )));
    }
    let scaled = bessel_i_scaled(l, x);
    if x > EXP_LIMIT {
        // Only representable if the scaled value pulls it back into range.
        let ln = scaled.ln() + x;
        if ln > EXP_LIMIT {
            return Err(Error::Overflow(format!("I_{l}({x}) exceeds f64 range")));
        }
        return Ok(ln.exp());
    }
    let value = scaled * x.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("I_{l}({x}) exceeds f64 range")))
    }
}

/// Bessel function of the first kind `J_l(x)` for integer order and `x ≥ 0`.
pub fn bessel_j(l: i32, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_j requires x >= 0, got {x}");
    let sign = if l < 0 && l % 2 != 0 { -1.0 } else { 1.0 };
    let n = l.unsigned_abs() as usize;
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let top = (n as f64).max(x);
    let mut start = top.ceil() as usize + 30 + (40.0 * top).sqrt().ceil() as usize;
    start += start % 2;
    let two_over_x = 2.0 / x;

    let mut above = 0.0;
    let mut here = 1e-300;
    let mut at_n = 0.0;
    let mut even_sum = 0.0; // Σ_{k≥1} y_{2k}
    for k in (1..=start).rev() {
        let below = (k as f64) * two_over_x * here - above;
        above = here;
        here = below;
        if k % 2 == 0 {
            even_sum += above;
        }
        if k == n {
            at_n = above;
        }
        if here.abs() > RESCALE_ABOVE {
            here *= RESCALE_BY;
            above *= RESCALE_BY;
            even_sum *= RESCALE_BY;
            at_n *= RESCALE_BY;
        }
    }
    if n == 0 {
        at_n = here;
    }
    sign * at_n / (here + 2.0 * even_sum)
}
