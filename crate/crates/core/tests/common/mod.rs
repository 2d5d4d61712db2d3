//! Reference routines that share no code with the library.

#![allow(dead_code)]

use rug::ops::Pow;
use rug::Float;

/// `e^x` for real `x` by direct Taylor summation at `bits` of working
/// precision (plus guard bits to cover the cancellation for negative `x`).
pub fn exp_series(x: f64, bits: u32) -> Float {
    let guard = 64 + (x.abs() * 1.5) as u32;
    let work = bits + guard;
    let x = Float::with_val(work, x);
    let mut term = Float::with_val(work, 1);
    let mut sum = Float::with_val(work, 1);
    let tiny = Float::with_val(work, 2).pow(-(i64::from(work) + 8) as i32);
    let mut k = 1u32;
    loop {
        term *= &x;
        term /= k;
        sum += &term;
        if k as f64 > x.to_f64().abs() && Float::with_val(work, term.abs_ref()) < tiny {
            break;
        }
        k += 1;
    }
    Float::with_val(bits, sum)
}

pub fn cosh_sinh(x: f64, bits: u32) -> (Float, Float) {
    let (ep, em) = (exp_series(x, bits + 32), exp_series(-x, bits + 32));
    let cosh = Float::with_val(bits, &ep + &em) / 2u32;
    let sinh = Float::with_val(bits, &ep - &em) / 2u32;
    (cosh, sinh)
}

/// Decimal digits on which `a` agrees with the nonzero reference `b`.
pub fn agreement(a: &Float, b: &Float) -> f64 {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return f64::from(prec) * std::f64::consts::LOG10_2;
    }
    let rel = Float::with_val(prec, &diff / b.clone().abs());
    -rel.log10().to_f64()
}

/// `ψ(y_end)` of `ψ'' = (y⁴ − ε) ψ` from `ψ(0) = 1, ψ'(0) = 0` (even) or
/// `ψ(0) = 0, ψ'(0) = 1` (odd), classical RK4 with fixed step.
pub fn rk4_quartic(eps: f64, odd: bool, y_end: f64, steps: usize) -> f64 {
    let h = y_end / steps as f64;
    let f = |y: f64, p: f64, dp: f64| (dp, (y.powi(4) - eps) * p);
    let (mut p, mut dp) = if odd { (0.0, 1.0) } else { (1.0, 0.0) };
    for i in 0..steps {
        let y = i as f64 * h;
        let k1 = f(y, p, dp);
        let k2 = f(y + h / 2.0, p + h / 2.0 * k1.0, dp + h / 2.0 * k1.1);
        let k3 = f(y + h / 2.0, p + h / 2.0 * k2.0, dp + h / 2.0 * k2.1);
        let k4 = f(y + h, p + h * k3.0, dp + h * k3.1);
        p += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    p
}

/// Lowest eigenvalue in `[lo, hi]` of the given parity by bisection on the
/// RK4 boundary value.
pub fn rk4_eigenvalue(mut lo: f64, mut hi: f64, odd: bool) -> f64 {
    let g = |e: f64| rk4_quartic(e, odd, 4.5, 9000);
    let g_lo = g(lo);
    assert!(g_lo * g(hi) < 0.0, "bracket does not straddle a root");
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) * g_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
