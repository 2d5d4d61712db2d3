//! Shooting eigensolver for the quartic and double-well oscillators
//!
//! ```text
//! −ψ''(y) + y⁴ ψ = ε ψ            (quartic)
//! −s² ψ''(y) + (y² − 1)² ψ = ε ψ   (double well)
//! ```
//!
//! written in `z = y²` and solved with a Dirichlet condition at a large
//! finite `y_b`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::accuracy::plan_precision;
use crate::apriori::AprioriModel;
use crate::error::{Error, Result};
use crate::frobenius::{evaluate, Branch, EquationSpec, EvalRequest, SeriesResult};
use crate::mpcore::{float_to_decimal, lg_float, ExactScalar, PrecisionSpec, LOG2_10};

/// Digits added on top of the target and the predicted cancellation loss.
pub const SHOOT_GUARD_DIGITS: u32 = 20;
/// Secant iterates are rounded to this many digits beyond the target.
const SECANT_EXTRA_DIGITS: u32 = 30;
/// Scan step in ε when no bracket is supplied (scaled by |s| for the double well).
const SCAN_STEP: f64 = 0.25;
const MAX_SCAN_STEPS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    Quartic,
    Doublewell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn branch(self) -> Branch {
        match self {
            Parity::Even => Branch::Minus,
            Parity::Odd => Branch::Plus,
        }
    }
}

impl FromStr for Potential {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quartic" | "anharmonic" => Ok(Potential::Quartic),
            "doublewell" | "double-well" => Ok(Potential::Doublewell),
            _ => Err(Error::Parse(format!("unknown potential {s:?}, expected quartic|doublewell"))),
        }
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Parse(format!("unknown parity {s:?}, expected even|odd"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenProblem {
    pub potential: Potential,
    /// Only used by the double well.
    pub s: ExactScalar,
    pub parity: Parity,
    /// Index among the levels of the given parity, starting at 0.
    pub level: u32,
    /// Dirichlet boundary; chosen from the target when absent.
    #[serde(serialize_with = "ser_opt_rational")]
    pub y_boundary: Option<Rational>,
    pub target_digits: u32,
    #[serde(serialize_with = "ser_bracket")]
    pub bracket: Option<(Rational, Rational)>,
    /// Digits added on top of the planned precision.
    pub extra_digits: u32,
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    q.as_ref().map(|q| q.to_string()).serialize(s)
}

fn ser_bracket<S: serde::Serializer>(
    b: &Option<(Rational, Rational)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    b.as_ref().map(|(lo, hi)| [lo.to_string(), hi.to_string()]).serialize(s)
}

impl EigenProblem {
    pub fn quartic(parity: Parity, level: u32, target_digits: u32) -> Self {
        EigenProblem {
            potential: Potential::Quartic,
            s: ExactScalar::int(1),
            parity,
            level,
            y_boundary: None,
            target_digits,
            bracket: None,
            extra_digits: 0,
        }
    }

    pub fn doublewell(s: ExactScalar, parity: Parity, level: u32, target_digits: u32) -> Self {
        EigenProblem {
            potential: Potential::Doublewell,
            s,
            ..EigenProblem::quartic(parity, level, target_digits)
        }
    }

    pub fn with_boundary(mut self, y_b: Rational) -> Self {
        self.y_boundary = Some(y_b);
        self
    }

    pub fn with_bracket(mut self, lo: Rational, hi: Rational) -> Self {
        self.bracket = Some((lo, hi));
        self
    }

    pub fn with_extra_digits(mut self, digits: u32) -> Self {
        self.extra_digits = digits;
        self
    }

    fn s_abs(&self) -> f64 {
        match self.potential {
            Potential::Quartic => 1.0,
            Potential::Doublewell => self.s.re_f64().hypot(self.s.im_f64()),
        }
    }

    /// Smallest integer `y` with `exp(−y³ / (3|s|)) < 10^(−target)`.
    pub fn default_boundary(&self) -> Rational {
        let y = (3.0 * self.s_abs() * f64::from(self.target_digits) * std::f64::consts::LN_10).cbrt();
        Rational::from(y.ceil().max(2.0) as i64)
    }

    pub fn boundary(&self) -> Rational {
        self.y_boundary.clone().unwrap_or_else(|| self.default_boundary())
    }

    fn validate(&self) -> Result<()> {
        if self.target_digits == 0 {
            return Err(Error::Config("target digits must be positive".into()));
        }
        if self.potential == Potential::Doublewell && self.s.is_zero() {
            return Err(Error::Config("double well needs s != 0".into()));
        }
        if let Some(y) = &self.y_boundary {
            if *y <= 0 {
                return Err(Error::Config("boundary must be positive".into()));
            }
        }
        if let Some((lo, hi)) = &self.bracket {
            if lo >= hi {
                return Err(Error::Config("bracket needs lo < hi".into()));
            }
        }
        Ok(())
    }

    /// Size of the largest series term at the boundary, in digits.
    fn predicted_loss(&self, y_b: &Rational) -> f64 {
        let y2 = Rational::from(y_b * y_b).to_f64();
        let (model, x) = match self.potential {
            Potential::Quartic => (AprioriModel::anharmonic(0.0), y2),
            Potential::Doublewell => {
                let s = self.s_abs();
                (AprioriModel::doublewell(s.powf(-1.0 / 3.0)), y2 * s.powf(-2.0 / 3.0))
            }
        };
        model.predict_peak(x).1.max(0.0)
    }
}

/// Equation in `z = y²` and the branch matching the parity.
pub fn to_equation(problem: &EigenProblem, epsilon: &Rational) -> (EquationSpec, Branch) {
    let quarter = |q: Rational| ExactScalar::real(q / 4);
    let (s, v) = match problem.potential {
        Potential::Quartic => (
            ExactScalar::int(1),
            vec![quarter(Rational::from(-epsilon)), ExactScalar::zero(), ExactScalar::ratio(1, 4)],
        ),
        Potential::Doublewell => (
            problem.s.clone(),
            vec![
                quarter(Rational::from(1 - epsilon)),
                ExactScalar::ratio(-1, 2),
                ExactScalar::ratio(1, 4),
            ],
        ),
    };
    let eq = EquationSpec::new(s, ExactScalar::ratio(1, 2), ExactScalar::zero(), v).expect("non-empty v");
    (eq, problem.parity.branch())
}

/// `ψ(y_b²)` for the trial value `epsilon`.
pub fn shoot(problem: &EigenProblem, epsilon: &Rational, y_b: &Rational, prec: PrecisionSpec) -> Result<SeriesResult> {
    let (eq, branch) = to_equation(problem, epsilon);
    let z = ExactScalar::real(Rational::from(y_b * y_b));
    evaluate(&EvalRequest::new(eq, z, branch, prec))
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub epsilon: String,
    #[serde(skip)]
    pub value: Rational,
    pub digits_certified: f64,
    pub y_boundary: String,
    pub precision_digits: u32,
    pub precision_bits: u32,
    /// `lg |ε(y_b+1) − ε(y_b)|`.
    pub lg_boundary_shift: f64,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub problem: EigenProblem,
}

/// Sign of the shooting function, with precision raised until the value is
/// clear of its error estimate by ten digits.
struct Shooter<'a> {
    problem: &'a EigenProblem,
    y_b: Rational,
    prec: PrecisionSpec,
    calls: usize,
}

impl Shooter<'_> {
    fn value(&mut self, epsilon: &Rational) -> Result<Float> {
        loop {
            self.calls += 1;
            let r = shoot(self.problem, epsilon, &self.y_b, self.prec)?;
            let lg = r.psi.lg_abs();
            let margin = lg - r.diagnostics.lg_error_f;
            if margin >= 10.0 {
                return Ok(r.psi.re);
            }
            let more = (10.0 - margin).max(0.0).ceil() as u32 + SHOOT_GUARD_DIGITS;
            if self.prec.decimal_digits > 1_000_000 {
                return Err(Error::Domain("shooting value lost in roundoff".into()));
            }
            self.prec = PrecisionSpec::from_digits(self.prec.decimal_digits + more);
        }
    }
}

fn rational_from_float(x: &Float, digits: u32) -> Rational {
    let bits = ((f64::from(digits) * LOG2_10).ceil() as u32).max(64);
    Float::with_val(bits, x).to_rational().expect("finite")
}

fn to_decimal(q: &Rational, digits: u32) -> String {
    let bits = ((f64::from(digits + 5) * LOG2_10).ceil() as u32).max(64);
    float_to_decimal(&Float::with_val(bits, q), digits as usize)
}

fn lg_rational(q: &Rational) -> f64 {
    if *q == 0 {
        return f64::NEG_INFINITY;
    }
    lg_float(&Float::with_val(64, q))
}

/// Solves at a fixed boundary; returns the eigenvalue, precision and the
/// number of shooting calls.
fn solve_at(
    problem: &EigenProblem,
    y_b: &Rational,
    bracket: Option<(Rational, Rational)>,
) -> Result<(Rational, PrecisionSpec, usize)> {
    let target = problem.target_digits;
    let loss = problem.predicted_loss(y_b).ceil() as u32;
    let mut digits = target + loss + SHOOT_GUARD_DIGITS;
    let start_eps = bracket.as_ref().map(|b| b.0.clone()).unwrap_or_default();
    let (eq, _) = to_equation(problem, &start_eps);
    let z = ExactScalar::real(Rational::from(y_b * y_b));
    if eq.valid_branches().len() == 2 {
        digits = digits.max(plan_precision(&eq, &z, target)?.decimal_digits);
    }
    let prec = PrecisionSpec::from_digits(digits + problem.extra_digits);
    let mut shooter = Shooter {
        problem,
        y_b: y_b.clone(),
        prec,
        calls: 0,
    };

    let (mut lo, mut hi, mut f_lo, mut f_hi) = match bracket {
        Some((lo, hi)) => {
            let (f_lo, f_hi) = (shooter.value(&lo)?, shooter.value(&hi)?);
            if f_lo.is_sign_negative() == f_hi.is_sign_negative() {
                return Err(Error::NoSignChange {
                    lo: to_decimal(&lo, 20),
                    hi: to_decimal(&hi, 20),
                });
            }
            (lo, hi, f_lo, f_hi)
        }
        None => scan(&mut shooter)?,
    };

    let tol_secant = pow10(-(i64::from(target) / 2));
    let tol_final = pow10(-(i64::from(target) + 2));

    // bisection on exact midpoints
    while Rational::from(&hi - &lo) > tol_secant {
        let mid: Rational = Rational::from(&lo + &hi) / 2;
        let f_mid = shooter.value(&mid)?;
        if f_mid.is_sign_negative() == f_lo.is_sign_negative() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        debug_assert!(f_lo.is_sign_negative() != f_hi.is_sign_negative());
    }

    // safeguarded secant
    let round_digits = target + SECANT_EXTRA_DIGITS;
    let mut prev = (lo.clone(), f_lo.clone());
    let mut cur = (hi.clone(), f_hi.clone());
    for _ in 0..200 {
        let bits = shooter.prec.bit_precision;
        let df = Float::with_val(bits, &cur.1 - &prev.1);
        let dx = Float::with_val(bits, Rational::from(&cur.0 - &prev.0));
        let step = Float::with_val(bits, &cur.1 * &dx) / df;
        let mut next = rational_from_float(&Float::with_val(bits, &cur.0 - &step), round_digits);
        if next <= lo || next >= hi || !step.is_finite() {
            next = Rational::from(&lo + &hi) / 2;
        }
        let f_next = shooter.value(&next)?;
        let moved = Rational::from(&next - &cur.0).abs();
        if f_next.is_sign_negative() == f_lo.is_sign_negative() {
            lo = next.clone();
            f_lo = f_next.clone();
        } else {
            hi = next.clone();
        }
        prev = cur;
        cur = (next, f_next);
        let scale = cur.0.clone().abs().max(Rational::from(1));
        if moved <= Rational::from(&tol_final * &scale) || Rational::from(&hi - &lo) <= tol_final {
            return Ok((cur.0, shooter.prec, shooter.calls));
        }
    }
    Err(Error::NonConvergence { terms: shooter.calls })
}

fn pow10(e: i64) -> Rational {
    let p = rug::Integer::from(rug::Integer::u_pow_u(10, e.unsigned_abs() as u32));
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((rug::Integer::from(1), p))
    }
}

/// Steps ε upward until the `level`-th sign change of the shooting function.
fn scan(shooter: &mut Shooter<'_>) -> Result<(Rational, Rational, Float, Float)> {
    let step = rational_from_float(
        &Float::with_val(64, SCAN_STEP * shooter.problem.s_abs().max(1e-6)),
        6,
    );
    let mut lo = Rational::new();
    let mut f_lo = shooter.value(&lo)?;
    let mut seen = 0;
    for _ in 0..MAX_SCAN_STEPS {
        let hi = Rational::from(&lo + &step);
        let f_hi = shooter.value(&hi)?;
        if f_hi.is_sign_negative() != f_lo.is_sign_negative() {
            if seen == shooter.problem.level {
                return Ok((lo, hi, f_lo, f_hi));
            }
            seen += 1;
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NoSignChange {
        lo: "0".into(),
        hi: to_decimal(&lo, 10),
    })
}

/// Solves for the eigenvalue to `target_digits` and checks that moving the
/// boundary out by one does not change it beyond the target.
pub fn solve_eigenvalue(problem: &EigenProblem) -> Result<EigenResult> {
    problem.validate()?;
    let started = Instant::now();
    let target = problem.target_digits;
    let y_b = problem.boundary();
    let (eps, prec, calls) = solve_at(problem, &y_b, problem.bracket.clone())?;

    let width = pow10(-(i64::from(target) / 2).max(1));
    let tight = (Rational::from(&eps - &width), Rational::from(&eps + &width));
    let y_out = Rational::from(&y_b + 1);
    let (eps_out, _, calls_out) = match solve_at(problem, &y_out, Some(tight)) {
        Ok(r) => r,
        Err(Error::NoSignChange { .. }) => {
            return Err(Error::BoundaryTooSmall {
                lg_shift: lg_rational(&width),
            })
        }
        Err(e) => return Err(e),
    };
    let shift = Rational::from(&eps_out - &eps).abs();
    let lg_shift = lg_rational(&shift);
    let lg_scale = lg_rational(&eps).max(0.0);
    if lg_shift > lg_scale - f64::from(target) {
        return Err(Error::BoundaryTooSmall { lg_shift });
    }
    let digits_certified = if lg_shift.is_finite() {
        (lg_scale - lg_shift).min(f64::from(target) + f64::from(SECANT_EXTRA_DIGITS))
    } else {
        f64::from(target)
    };
    Ok(EigenResult {
        epsilon: to_decimal(&eps, target),
        value: eps,
        digits_certified,
        y_boundary: to_decimal(&y_b, 10),
        precision_digits: prec.decimal_digits,
        precision_bits: prec.bit_precision,
        lg_boundary_shift: lg_shift,
        iterations: calls + calls_out,
        wall_time_s: started.elapsed().as_secs_f64(),
        problem: problem.clone(),
    })
}

/// Decimal digits shared by two eigenvalues.
pub fn shared_digits(a: &Rational, b: &Rational) -> f64 {
    let diff = Rational::from(a - b).abs();
    if diff == 0 {
        return f64::INFINITY;
    }
    lg_rational(a).max(lg_rational(b)) - lg_rational(&diff)
}
