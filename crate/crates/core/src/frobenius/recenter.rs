use serde::Serialize;

use super::engine::{evaluate, EvalRequest};
use super::equation::{Branch, EquationSpec};
use crate::error::{Error, Result};
use crate::mpcore::{ApComplex, ExactScalar, PrecisionSpec};

/// Moves the expansion point of an ordinary-point equation to `shift`.
///
/// The equation is `s² ψ'' = q(z) ψ` with `q(z) = Σ_{n≥1} v_n z^{n-1}`; the
/// result carries the Taylor coefficients of `q(shift + w)` so that its
/// solutions are functions of `w = z - shift`.
pub fn recenter(eq: &EquationSpec, shift: &ExactScalar) -> Result<EquationSpec> {
    if !eq.is_ordinary_point() {
        return Err(Error::Domain(
            "recentering needs an ordinary point at the origin (nu_minus = 0, nu_plus = 1, v0 = 0)".into(),
        ));
    }
    // Taylor shift by repeated synthetic division.
    let mut shifted: Vec<ExactScalar> = eq.v[1..].to_vec();
    let n = shifted.len();
    for i in 0..n.saturating_sub(1) {
        for k in (i..n - 1).rev() {
            shifted[k] = shifted[k].add(&shifted[k + 1].mul(shift));
        }
    }
    let mut v = Vec::with_capacity(eq.v.len());
    v.push(ExactScalar::zero());
    v.extend(shifted);
    EquationSpec::new(eq.s.clone(), eq.nu_plus.clone(), eq.nu_minus.clone(), v)
}

/// `(ψ, ψ')` together with absolute error estimates in log₁₀.
#[derive(Debug, Clone, Serialize)]
pub struct Continuation {
    pub psi: ApComplex,
    pub dpsi: ApComplex,
    pub lg_error_psi: f64,
    pub lg_error_dpsi: f64,
}

impl Continuation {
    /// Exact initial data.
    pub fn exact(psi: ApComplex, dpsi: ApComplex) -> Self {
        Continuation {
            psi,
            dpsi,
            lg_error_psi: f64::NEG_INFINITY,
            lg_error_dpsi: f64::NEG_INFINITY,
        }
    }
}

fn lg_sum(parts: &[f64]) -> f64 {
    let max = parts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + parts.iter().map(|p| 10f64.powf(p - max)).sum::<f64>().log10()
}

/// Carries `(ψ, ψ')` from `path[0]` through every waypoint to the last one.
///
/// Each leg re-expands the equation at its start point and combines the
/// value-like (minus) and derivative-like (plus) local solutions.
pub fn continue_solution(
    eq: &EquationSpec,
    start: &Continuation,
    path: &[ExactScalar],
    prec: PrecisionSpec,
) -> Result<Continuation> {
    let mut state = start.clone();
    for leg in path.windows(2) {
        let step = leg[1].sub(&leg[0]);
        if step.is_zero() {
            continue;
        }
        let local = recenter(eq, &leg[0])?;
        let req = EvalRequest::new(local, step, Branch::Minus, prec).with_derivative(true);
        let u = evaluate(&req)?;
        let v = evaluate(&req.with_branch(Branch::Plus))?;
        let (u_psi, u_dpsi) = (&u.psi, u.dpsi.as_ref().expect("derivative requested"));
        let (v_psi, v_dpsi) = (&v.psi, v.dpsi.as_ref().expect("derivative requested"));
        let du = &u.diagnostics;
        let dv = &v.diagnostics;

        let psi = &(&state.psi * u_psi) + &(&state.dpsi * v_psi);
        let dpsi = &(&state.psi * u_dpsi) + &(&state.dpsi * v_dpsi);
        let (a, b) = (state.psi.lg_abs(), state.dpsi.lg_abs());
        let lg_error_psi = lg_sum(&[
            a + du.lg_error_f,
            b + dv.lg_error_f,
            state.lg_error_psi + u_psi.lg_abs(),
            state.lg_error_dpsi + v_psi.lg_abs(),
        ]);
        let lg_error_dpsi = lg_sum(&[
            a + du.lg_error_fd.unwrap_or(f64::NEG_INFINITY),
            b + dv.lg_error_fd.unwrap_or(f64::NEG_INFINITY),
            state.lg_error_psi + u_dpsi.lg_abs(),
            state.lg_error_dpsi + v_dpsi.lg_abs(),
        ]);
        state = Continuation {
            psi,
            dpsi,
            lg_error_psi,
            lg_error_dpsi,
        };
    }
    Ok(state)
}
