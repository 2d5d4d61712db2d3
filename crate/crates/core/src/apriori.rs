//! A-priori estimates of coefficient size, largest term and term count.
//!
//! The growth of a solution along `|z| = e^u`, maximized over the phase, is
//! `exp S(u)`. Its Legendre dual gives the coefficient magnitudes:
//! `m̄ = S'(u)` and `ln |a_m̄| = S(u) − (ν + m̄) u`. Two closed-form families
//! are provided, both for the quartic potentials in `z = y²`:
//!
//! * `Anharmonic(c)`: `(y² + c²)²`
//! * `Doublewell(c)`: `(y² − c²)²`
//!
//! Everything here is plain `f64`; the results are order-of-magnitude tools
//! and never feed back into computed values.

use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Anharmonic,
    Doublewell,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "anharmonic" | "quartic" => Ok(Family::Anharmonic),
            "doublewell" | "double-well" => Ok(Family::Doublewell),
            _ => Err(Error::Parse(format!("unknown family {s:?}, expected anharmonic|doublewell"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Anharmonic => "anharmonic",
            Family::Doublewell => "doublewell",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AprioriModel {
    pub family: Family,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermEstimate {
    pub m_bar: f64,
    /// log₁₀ |a_m̄|.
    pub lg_a: f64,
    pub predicted_terms: u64,
    /// log₁₀ of the predicted largest `|A_m(x)|`.
    pub lg_max_term: f64,
}

/// Relative tolerance on `u` when inverting `m = S'(u)`.
const U_TOL: f64 = 1.0 / (1u64 << 40) as f64;

impl AprioriModel {
    pub fn new(family: Family, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Domain(format!("c must be a nonnegative real, got {c}")));
        }
        Ok(AprioriModel { family, c })
    }

    pub fn anharmonic(c: f64) -> Self {
        AprioriModel::new(Family::Anharmonic, c).expect("valid c")
    }

    pub fn doublewell(c: f64) -> Self {
        AprioriModel::new(Family::Doublewell, c).expect("valid c")
    }

    fn c2(&self) -> f64 {
        self.c * self.c
    }

    /// `e^u = c²/3` for the double well; anharmonic models have no breakpoint.
    pub fn breakpoint(&self) -> Option<f64> {
        match self.family {
            Family::Doublewell if self.c > 0.0 => Some((self.c2() / 3.0).ln()),
            _ => None,
        }
    }

    fn upper(&self, u: f64) -> bool {
        self.breakpoint().is_none_or(|b| u >= b)
    }

    pub fn s(&self, u: f64) -> f64 {
        let c2 = self.c2();
        let (t, t3) = ((u / 2.0).exp(), (1.5 * u).exp());
        match self.family {
            Family::Anharmonic => (t3 + 3.0 * c2 * t) / 3.0,
            Family::Doublewell if self.upper(u) => (u.exp() + c2).powf(1.5) / 3.0,
            Family::Doublewell => c2 * t - t3 / 3.0,
        }
    }

    pub fn s_prime(&self, u: f64) -> f64 {
        let c2 = self.c2();
        let (t, t3) = ((u / 2.0).exp(), (1.5 * u).exp());
        match self.family {
            Family::Anharmonic => 0.5 * (t3 + c2 * t),
            Family::Doublewell if self.upper(u) => 0.5 * u.exp() * (u.exp() + c2).sqrt(),
            Family::Doublewell => 0.5 * (c2 * t - t3),
        }
    }

    pub fn s_second(&self, u: f64) -> f64 {
        let c2 = self.c2();
        let (t, t3) = ((u / 2.0).exp(), (1.5 * u).exp());
        match self.family {
            Family::Anharmonic => 0.75 * t3 + 0.25 * c2 * t,
            Family::Doublewell if self.upper(u) => {
                let w = u.exp();
                let r = (w + c2).sqrt();
                0.5 * w * r + 0.25 * w * w / r
            }
            Family::Doublewell => 0.25 * c2 * t - 0.75 * t3,
        }
    }

    /// `ln |Q|` at the maximizing phase, where `Q` is the local WKB momentum
    /// in `z`.
    fn ln_q(&self, u: f64) -> f64 {
        let (w, c2) = (u.exp(), self.c2());
        match self.family {
            Family::Anharmonic => (w + c2).ln(),
            Family::Doublewell if self.upper(u) => 0.5 * u + 0.5 * (w + c2).ln(),
            Family::Doublewell => (c2 - w).abs().ln(),
        }
    }

    /// Only every third coefficient is non-zero for the pure quartic.
    fn stride(&self) -> f64 {
        if self.c == 0.0 {
            3.0
        } else {
            1.0
        }
    }

    /// `S_eff = S − ½ ln|Q| − ½ ln(2π S'') + ln(stride)`.
    pub fn s_eff(&self, u: f64) -> f64 {
        self.s(u) - 0.5 * self.ln_q(u) - 0.5 * (2.0 * PI * self.s_second(u)).ln() + self.stride().ln()
    }

    fn s_eff_prime(&self, u: f64) -> f64 {
        let h = 1e-5 * u.abs().max(1.0);
        (self.s_eff(u + h) - self.s_eff(u - h)) / (2.0 * h)
    }

    /// Legendre dual at `u`: `(m̄, ln a)`.
    pub fn legendre_at(&self, u: f64, nu: f64) -> (f64, f64) {
        let m_bar = self.s_prime(u);
        (m_bar, self.s(u) - (nu + m_bar) * u)
    }

    /// Plain estimate of `ln |a_m|`.
    pub fn coeff_estimate(&self, m: f64, nu: f64) -> Result<f64> {
        let u = invert(|u| self.s_prime(u), m, 0.0)?;
        Ok(self.legendre_at(u, nu).1)
    }

    /// Estimate of `ln |a_m|` including the WKB prefactor and the Gaussian
    /// width of the saddle point.
    pub fn improved_coeff_estimate(&self, m: f64, nu: f64) -> Result<f64> {
        let guess = invert(|u| self.s_prime(u), m, 0.0)?;
        let u = invert(|u| self.s_eff_prime(u), m, guess)?;
        Ok(self.s_eff(u) - (nu + m) * u)
    }

    /// Index and log₁₀ size of the largest term `|a_m| x^m`.
    pub fn predict_peak(&self, x: f64) -> (f64, f64) {
        let c2 = self.c2();
        match self.family {
            Family::Anharmonic => (
                0.5 * (x.powf(1.5) + c2 * x.sqrt()),
                (x.powf(1.5) + 3.0 * c2 * x.sqrt()) / 3.0 / LN_10,
            ),
            Family::Doublewell => (0.5 * x * (x + c2).sqrt(), (x + c2).powf(1.5) / 3.0 / LN_10),
        }
    }

    /// Smallest `𝓜` past the peak with `|a_𝓜| x^𝓜 ≤ 10^(−digits)`.
    pub fn predict_terms(&self, x: f64, nu: f64, digits: f64, improved: bool) -> Result<u64> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain(format!("x must be positive, got {x}")));
        }
        let log_term = |m: f64| -> Result<f64> {
            let ln_a = if improved {
                self.improved_coeff_estimate(m, nu)?
            } else {
                self.coeff_estimate(m, nu)?
            };
            Ok(ln_a + m * x.ln())
        };
        let goal = -digits * LN_10;
        let start = self.predict_peak(x).0.max(1.0).ceil();
        first_below(start, goal, log_term)
    }

    pub fn estimate_terms(&self, x: f64, nu: f64, digits: f64, improved: bool) -> Result<TermEstimate> {
        let terms = self.predict_terms(x, nu, digits, improved)?;
        let m = terms as f64;
        let ln_a = if improved {
            self.improved_coeff_estimate(m, nu)?
        } else {
            self.coeff_estimate(m, nu)?
        };
        Ok(TermEstimate {
            m_bar: m,
            lg_a: ln_a / LN_10,
            predicted_terms: terms,
            lg_max_term: self.predict_peak(x).1,
        })
    }
}

/// Terms needed per leg when the path to `y` is split into `k` equal legs,
/// from `(2/3) 𝓜 (1 − ln 2𝓜) + 2 𝓜 ln(y/k) = −P ln 10`.
pub fn predict_split_cost(y: f64, digits: f64, k: u32) -> Result<u64> {
    if y.is_nan() || y <= 0.0 || k == 0 {
        return Err(Error::Domain("split cost needs y > 0 and k >= 1".into()));
    }
    let r = (y / f64::from(k)).ln();
    let f = |m: f64| -> Result<f64> { Ok(2.0 / 3.0 * m * (1.0 - (2.0 * m).ln()) + 2.0 * m * r) };
    let peak = 0.5 * (y / f64::from(k)).powi(3);
    first_below(peak.max(1.0).ceil(), -digits * LN_10, f)
}

/// Smallest integer `m ≥ start` with `f(m) ≤ goal`, for `f` decreasing on
/// `[start, ∞)`.
fn first_below(start: f64, goal: f64, f: impl Fn(f64) -> Result<f64>) -> Result<u64> {
    if f(start)? <= goal {
        return Ok(start as u64);
    }
    let mut lo = start;
    let mut hi = (2.0 * start).max(start + 1.0);
    while f(hi)? > goal {
        lo = hi;
        hi *= 2.0;
        if hi > 1e18 {
            return Err(Error::Domain("term prediction diverged".into()));
        }
    }
    // f(lo) > goal >= f(hi)
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if f(mid)? <= goal {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi as u64)
}

/// Solves `g(u) = target` for increasing `g` by bisection, expanding the
/// bracket from `guess`.
fn invert(g: impl Fn(f64) -> f64, target: f64, guess: f64) -> Result<f64> {
    if !target.is_finite() || target <= 0.0 {
        return Err(Error::Domain(format!("coefficient index must be positive, got {target}")));
    }
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let mut step = 1.0;
    while g(lo) > target {
        lo -= step;
        step *= 2.0;
        if lo < -1e4 {
            return Err(Error::Domain(format!("no bracket for m = {target}")));
        }
    }
    step = 1.0;
    while g(hi) < target {
        hi += step;
        step *= 2.0;
        if hi > 1e4 {
            return Err(Error::Domain(format!("no bracket for m = {target}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= U_TOL * mid.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
