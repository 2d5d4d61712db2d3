//! Roundoff error model, error bootstrap and Wronskian validation.
//!
//! Every error quantity is carried as `log₁₀` of an absolute error so that
//! values far outside the `f64` range stay representable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{evaluate, Branch, EquationSpec, EvalRequest, SeriesDiagnostics, SeriesResult};
use crate::mpcore::{ApComplex, ExactScalar, Exponent, PrecisionSpec, LOG10_2};

/// Guard digits added to the largest-term estimate for ψ.
pub const GUARD_PSI: f64 = 4.30;
/// Guard digits added to the largest-term estimate for ψ'.
pub const GUARD_DPSI: f64 = 3.02;

/// Probe precision used by [`plan_precision`].
pub const PROBE_DIGITS: u32 = 20;
/// Extra guard digits on top of the planned loss.
pub const PLAN_GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorModel {
    pub guard: f64,
    pub guard_derivative: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        ErrorModel {
            guard: GUARD_PSI,
            guard_derivative: GUARD_DPSI,
        }
    }
}

impl ErrorModel {
    /// `(Ā − M) log₁₀ 2 + G`.
    pub fn lg_error(&self, max_exponent: Exponent, bits: u32) -> f64 {
        largest_term(max_exponent, bits, self.guard)
    }

    pub fn lg_error_derivative(&self, max_exponent: Exponent, bits: u32) -> f64 {
        largest_term(max_exponent, bits, self.guard_derivative)
    }
}

fn largest_term(max_exponent: Exponent, bits: u32, guard: f64) -> f64 {
    match max_exponent {
        Exponent::NegInfinity => f64::NEG_INFINITY,
        Exponent::Finite(e) => (e - i64::from(bits)) as f64 * LOG10_2 + guard,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorSource {
    LargestTerm,
    Bootstrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimate {
    pub lg_error: f64,
    pub source: ErrorSource,
}

/// Largest-term estimate for ψ.
pub fn estimate_error(diag: &SeriesDiagnostics, prec: PrecisionSpec) -> ErrorEstimate {
    ErrorEstimate {
        lg_error: ErrorModel::default().lg_error(diag.max_a_exponent, prec.bit_precision),
        source: ErrorSource::LargestTerm,
    }
}

/// Largest-term estimate for ψ', if the derivative was summed.
pub fn estimate_derivative_error(diag: &SeriesDiagnostics, prec: PrecisionSpec) -> Option<ErrorEstimate> {
    diag.max_ad_exponent.map(|e| ErrorEstimate {
        lg_error: ErrorModel::default().lg_error_derivative(e, prec.bit_precision),
        source: ErrorSource::LargestTerm,
    })
}

/// Scales a real error measured at `bits_low` to `bits`, with two digits of
/// safety: `lg ε̃ − (M − M̃) log₁₀ 2 + 2`.
pub fn bootstrap_error(lg_error_low: f64, bits_low: u32, bits: u32) -> f64 {
    lg_error_low - (f64::from(bits) - f64::from(bits_low)) * LOG10_2 + 2.0
}

/// `lg |a − b|`, `-inf` when equal.
pub fn lg_distance(a: &ApComplex, b: &ApComplex) -> f64 {
    let prec = a.prec().max(b.prec());
    let a = a.clone().with_prec(prec);
    let b = b.clone().with_prec(prec);
    (&a - &b).lg_abs()
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchValues {
    pub psi: ApComplex,
    pub dpsi: ApComplex,
    pub diagnostics: SeriesDiagnostics,
}

impl BranchValues {
    fn from_result(r: SeriesResult) -> Self {
        BranchValues {
            psi: r.psi,
            dpsi: r.dpsi.expect("derivative requested"),
            diagnostics: r.diagnostics,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WronskiReport {
    pub w_exact: ApComplex,
    pub w_numeric: ApComplex,
    /// `lg δW_e`: estimated error from the per-branch estimates.
    pub lg_delta_e: f64,
    /// `lg |W_num − W_exact|`.
    pub lg_delta_r: Option<f64>,
    pub plus: BranchValues,
    pub minus: BranchValues,
    pub precision: PrecisionSpec,
}

impl WronskiReport {
    pub fn within_estimate(&self) -> bool {
        self.lg_delta_r.is_none_or(|r| r <= self.lg_delta_e)
    }
}

/// `(ν₋ − ν₊) z^{ν₊+ν₋−1}` at `bits` precision.
pub fn exact_wronskian(eq: &EquationSpec, z: &ExactScalar, bits: u32) -> Result<ApComplex> {
    let factor = eq.nu_minus.sub(&eq.nu_plus).to_complex(bits);
    let power = eq.nu_plus.add(&eq.nu_minus).sub(&ExactScalar::int(1)).to_complex(bits);
    Ok(&factor * &z.to_complex(bits).pow(&power)?)
}

/// `lg δW_e = max(|ψ₊| δψ'₋, |ψ₋| δψ'₊, |ψ'₋| δψ₊, |ψ'₊| δψ₋)`.
fn lg_wronskian_error(plus: (&ApComplex, &ApComplex, f64, f64), minus: (&ApComplex, &ApComplex, f64, f64)) -> f64 {
    let (pp, dp, ep, edp) = plus;
    let (pm, dm, em, edm) = minus;
    [
        pp.lg_abs() + edm,
        pm.lg_abs() + edp,
        dm.lg_abs() + ep,
        dp.lg_abs() + em,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max)
}

fn branch_pair(eq: &EquationSpec, z: &ExactScalar, prec: PrecisionSpec) -> Result<(SeriesResult, SeriesResult)> {
    let req = EvalRequest::new(eq.clone(), z.clone(), Branch::Plus, prec).with_derivative(true);
    let plus = evaluate(&req)?;
    let minus = evaluate(&req.with_branch(Branch::Minus))?;
    Ok((plus, minus))
}

/// Evaluates both branches with derivatives and checks the Wronskian.
pub fn wronskian(eq: &EquationSpec, z: &ExactScalar, prec: PrecisionSpec) -> Result<WronskiReport> {
    let (plus, minus) = branch_pair(eq, z, prec)?;
    let bits = prec.bit_precision;
    let plus = BranchValues::from_result(plus);
    let minus = BranchValues::from_result(minus);
    let w_numeric = &(&plus.psi * &minus.dpsi) - &(&minus.psi * &plus.dpsi);
    let w_exact = exact_wronskian(eq, z, bits + 128)?;
    let lg_delta_e = lg_wronskian_error(
        (
            &plus.psi,
            &plus.dpsi,
            plus.diagnostics.lg_error_f,
            plus.diagnostics.lg_error_fd.unwrap_or(f64::NEG_INFINITY),
        ),
        (
            &minus.psi,
            &minus.dpsi,
            minus.diagnostics.lg_error_f,
            minus.diagnostics.lg_error_fd.unwrap_or(f64::NEG_INFINITY),
        ),
    );
    let lg_delta_r = Some(lg_distance(&w_numeric, &w_exact));
    Ok(WronskiReport {
        w_exact: w_exact.with_prec(bits),
        w_numeric,
        lg_delta_e,
        lg_delta_r,
        plus,
        minus,
        precision: prec,
    })
}

/// Smallest precision whose predicted absolute Wronskian error stays below
/// `10^(−target_digits)`.
///
/// A probe at 20 digits is compared against a run with two extra words; the
/// larger of the largest-term estimate and the bootstrapped real error of
/// each quantity feeds the Wronskian error formula, and the resulting loss is
/// added to the target together with ten guard digits.
pub fn plan_precision(eq: &EquationSpec, z: &ExactScalar, target_digits: u32) -> Result<PrecisionSpec> {
    if target_digits == 0 {
        return Err(Error::Config("target digits must be at least 1".into()));
    }
    let probe = PrecisionSpec::from_digits(PROBE_DIGITS);
    let reference = probe.raised_by_words(2);
    let (p_lo, m_lo) = branch_pair(eq, z, probe)?;
    let (p_hi, m_hi) = branch_pair(eq, z, reference)?;
    let bits = probe.bit_precision;

    let combine = |estimate: f64, lo: &ApComplex, hi: &ApComplex| estimate.max(lg_distance(lo, hi) + 2.0);
    let quantities = |lo: &SeriesResult, hi: &SeriesResult| {
        let d = &lo.diagnostics;
        let (dlo, dhi) = (lo.dpsi.as_ref().expect("derivative"), hi.dpsi.as_ref().expect("derivative"));
        (
            combine(d.lg_error_f, &lo.psi, &hi.psi),
            combine(d.lg_error_fd.unwrap_or(f64::NEG_INFINITY), dlo, dhi),
        )
    };
    let (ep, edp) = quantities(&p_lo, &p_hi);
    let (em, edm) = quantities(&m_lo, &m_hi);
    let lg_dw = lg_wronskian_error(
        (&p_hi.psi, p_hi.dpsi.as_ref().expect("derivative"), ep, edp),
        (&m_hi.psi, m_hi.dpsi.as_ref().expect("derivative"), em, edm),
    );
    let loss = lg_dw + f64::from(bits) * LOG10_2 - GUARD_PSI;
    let loss = if loss.is_finite() { loss.max(0.0).ceil() as u32 } else { 0 };
    Ok(PrecisionSpec::from_digits(target_digits + loss + PLAN_GUARD_DIGITS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_examples() {
        let m = ErrorModel::default();
        assert!((m.lg_error(Exponent::Finite(1664), 1664) - 4.30).abs() < 1e-12);
        assert!((m.lg_error(Exponent::Finite(1664 - 333), 1664) - (-333.0 * LOG10_2 + 4.30)).abs() < 1e-12);
        assert!((m.lg_error(Exponent::Finite(0), 64) + 14.966).abs() < 1e-3);
        assert_eq!(m.lg_error(Exponent::NegInfinity, 64), f64::NEG_INFINITY);
        assert!((m.lg_error_derivative(Exponent::Finite(64), 64) - 3.02).abs() < 1e-12);
    }

    #[test]
    fn bootstrap_examples() {
        assert_eq!(bootstrap_error(-10.0, 64, 64), -8.0);
        assert!((bootstrap_error(-10.0, 64, 1664) + 489.65).abs() < 0.01);
        let step = bootstrap_error(-3.0, 64, 128) - bootstrap_error(-3.0, 64, 192);
        assert!((step - 64.0 * LOG10_2).abs() < 1e-12);
    }

    #[test]
    fn cosh_wronskian_is_minus_one() {
        let eq = EquationSpec::cosh();
        let r = wronskian(&eq, &1.into(), PrecisionSpec::from_digits(50)).unwrap();
        assert!((r.w_exact.re.to_f64() + 1.0).abs() < 1e-15);
        assert!(r.within_estimate());
        assert!(r.lg_delta_e < -40.0);
    }

    #[test]
    fn oscillator_exact_wronskian() {
        let eq = EquationSpec::new(1.into(), ExactScalar::ratio(1, 2), 0.into(), vec![1.into()]).unwrap();
        let w = exact_wronskian(&eq, &4.into(), 64).unwrap();
        assert!((w.re.to_f64() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn plan_without_loss() {
        let eq = EquationSpec::cosh();
        let p = plan_precision(&eq, &ExactScalar::ratio(1, 2), 50).unwrap();
        assert!((60..=62).contains(&p.decimal_digits), "{}", p.decimal_digits);
    }

    #[test]
    fn plan_accounts_for_cancellation() {
        // cosh(-40i) style cancellation: terms reach e^40 ≈ 1e17
        let eq = EquationSpec::ordinary(1.into(), &[(-1).into()]).unwrap();
        let p = plan_precision(&eq, &40.into(), 30).unwrap();
        assert!(p.decimal_digits >= 30 + 10 + 15, "{}", p.decimal_digits);
        let r = wronskian(&eq, &40.into(), p).unwrap();
        assert!(r.lg_delta_r.unwrap() < -30.0);
    }
}
