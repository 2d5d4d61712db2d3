use rug::ops::NegAssign;
use rug::{Assign, Float, Integer, Rational};
use serde::Serialize;

use super::equation::{validate, Branch, EquationSpec};
use super::stop::{StopDecision, StopRule};
use crate::accuracy::ErrorModel;
use crate::error::{Error, Result};
use crate::mpcore::{mul_add_into, mul_into, ApComplex, ExactScalar, Exponent, PrecisionSpec};

pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

/// One evaluation of `ψ_±(z)`.
#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub eq: EquationSpec,
    pub z: ExactScalar,
    pub branch: Branch,
    pub prec: PrecisionSpec,
    pub want_derivative: bool,
    pub max_terms: usize,
}

impl EvalRequest {
    pub fn new(eq: EquationSpec, z: ExactScalar, branch: Branch, prec: PrecisionSpec) -> Self {
        EvalRequest {
            eq,
            z,
            branch,
            prec,
            want_derivative: false,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_derivative(mut self, yes: bool) -> Self {
        self.want_derivative = yes;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_precision(mut self, prec: PrecisionSpec) -> Self {
        self.prec = prec;
        self
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesDiagnostics {
    /// Largest binary exponent among the terms of ψ.
    pub max_a_exponent: Exponent,
    pub max_a_at: usize,
    /// Same for the terms of ψ'.
    pub max_ad_exponent: Option<Exponent>,
    pub max_ad_at: Option<usize>,
    /// Index of the last term summed.
    pub terms_summed: usize,
    /// Estimated log₁₀ of the absolute roundoff error of ψ.
    pub lg_error_f: f64,
    pub lg_error_fd: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesResult {
    pub psi: ApComplex,
    pub dpsi: Option<ApComplex>,
    pub diagnostics: SeriesDiagnostics,
    pub precision: PrecisionSpec,
}

/// Term generator for `A_{m+1} = Σ_n V_n A_{m-n} / (s² (m+1)(m+1+δ))`
/// with `V_n = v_n z^{n+1}`.
struct Recursion {
    /// Ring buffer holding the last `N+1` terms; `A_k` lives at `k mod (N+1)`.
    window: Vec<ApComplex>,
    /// `(n, V_n)` for the non-zero coefficients only.
    weights: Vec<(usize, ApComplex)>,
    s2: ApComplex,
    s2_gap: ApComplex,
    /// `(s², s²δ)` as exact rationals when both are known exactly; the
    /// denominator is then formed exactly and rounded once, which keeps it
    /// accurate when `m+1+δ` nearly cancels.
    exact: Option<ExactDen>,
    /// Ordinary-point convention: the `(m+1+δ)` factor vanishes at `m = 0`
    /// and `A₁` is set to zero.
    zero_first: bool,
    m: usize,
    acc: ApComplex,
    den: ApComplex,
    next: ApComplex,
    scratch: Float,
    scratch2: Float,
}

struct ExactDen {
    /// Numerators of `s²` and `s²δ` (re, im) over the common denominator `d`.
    s2: (Integer, Integer),
    s2_gap: (Integer, Integer),
    d: Integer,
    re: Integer,
    im: Integer,
}

impl ExactDen {
    fn new(s: &ExactScalar, gap: &ExactScalar) -> Option<Self> {
        if !(s.is_exact() && gap.is_exact()) {
            return None;
        }
        let s2 = s.mul(s);
        let s2_gap = s2.mul(gap);
        let (ExactScalar::Rational { re: a, im: b }, ExactScalar::Rational { re: c, im: e }) = (&s2, &s2_gap) else {
            unreachable!("products of rationals");
        };
        let d = [a, b, c, e].iter().fold(Integer::from(1), |d, q| d.lcm(q.denom()));
        let num = |q: &Rational| q.numer() * Integer::from(&d / q.denom());
        Some(ExactDen {
            s2: (num(a), num(b)),
            s2_gap: (num(c), num(e)),
            re: Integer::new(),
            im: Integer::new(),
            d,
        })
    }

    /// `k (s² k + s² δ)` into `out`, rounded from the exact value.
    fn assign(&mut self, k: u64, out: &mut ApComplex) {
        self.re.assign(&self.s2.0 * k);
        self.re += &self.s2_gap.0;
        self.re *= k;
        self.im.assign(&self.s2.1 * k);
        self.im += &self.s2_gap.1;
        self.im *= k;
        out.re.assign(&self.re);
        out.im.assign(&self.im);
        if self.d != 1 {
            out.re /= &self.d;
            out.im /= &self.d;
        }
    }
}

impl Recursion {
    fn new(eq: &EquationSpec, z: &ApComplex, branch: Branch, prec: u32) -> Result<(Self, ApComplex)> {
        let nu = eq.exponent(branch).to_complex(prec);
        let gap = eq.indicial_gap(branch);
        let zero_first = gap.as_integer().is_some_and(|k| k == -1);
        let mut weights = Vec::new();
        let mut zpow = z.clone();
        for (n, v) in eq.v.iter().enumerate() {
            if !v.is_zero() {
                weights.push((n, &v.to_complex(prec) * &zpow));
            }
            zpow = &zpow * z;
        }
        let s = eq.s.to_complex(prec);
        let s2 = &s * &s;
        let s2_gap = &s2 * &gap.to_complex(prec);
        let exact = ExactDen::new(&eq.s, &gap);
        let a0 = z.pow(&nu)?.with_prec(prec);
        let width = eq.v.len();
        let mut window = vec![ApComplex::zero(prec); width];
        window[0] = a0.clone();
        Ok((
            Recursion {
                window,
                weights,
                s2,
                s2_gap,
                exact,
                zero_first,
                m: 0,
                acc: ApComplex::zero(prec),
                den: ApComplex::zero(prec),
                next: ApComplex::zero(prec),
                scratch: Float::new(prec),
                scratch2: Float::new(prec),
            },
            a0,
        ))
    }

    /// Computes `A_{m+1}`, advances `m`, and returns the new term.
    fn advance(&mut self) -> &ApComplex {
        let width = self.window.len();
        let m = self.m;
        let k = m + 1;
        if self.zero_first && m == 0 {
            self.next.re.assign(0);
            self.next.im.assign(0);
        } else {
            self.acc.re.assign(0);
            self.acc.im.assign(0);
            for (n, weight) in &self.weights {
                if *n > m {
                    break;
                }
                mul_add_into(&mut self.acc, weight, &self.window[(m - n) % width], &mut self.scratch);
            }
            // den = 1 / (k (s² k + s² δ))
            if let Some(exact) = &mut self.exact {
                exact.assign(k as u64, &mut self.den);
            } else {
                let kf = k as f64;
                self.den.re.assign(&self.s2.re * kf);
                self.den.re += &self.s2_gap.re;
                self.den.im.assign(&self.s2.im * kf);
                self.den.im += &self.s2_gap.im;
                self.den.re *= kf;
                self.den.im *= kf;
            }
            if self.den.im.is_zero() {
                self.den.re.recip_mut();
            } else {
                self.scratch.assign(self.den.re.square_ref());
                self.scratch2.assign(self.den.im.square_ref());
                self.scratch += &self.scratch2;
                self.den.re /= &self.scratch;
                self.den.im /= &self.scratch;
                self.den.im.neg_assign();
            }
            mul_into(&mut self.next, &self.acc, &self.den, &mut self.scratch);
        }
        let slot = k % width;
        std::mem::swap(&mut self.window[slot], &mut self.next);
        self.m = k;
        &self.window[slot]
    }
}

/// Evaluates the Frobenius series for `req`, summing until the stop rule
/// fires or `max_terms` is exceeded.
pub fn evaluate(req: &EvalRequest) -> Result<SeriesResult> {
    validate(&req.eq, &req.z, req.branch)?;
    let prec = req.prec.bit_precision;
    let z = req.z.to_complex(prec);
    let (mut rec, a0) = Recursion::new(&req.eq, &z, req.branch, prec)?;
    let mut stop = StopRule::new(req.prec, req.eq.degree());

    let mut psi = a0.clone();
    let mut max_a = (a0.exponent(), 0usize);

    // ψ' = Σ A_m (ν + m) / z
    let mut deriv = req.want_derivative.then(|| {
        let zinv = z.recip();
        let nu_over_z = &req.eq.exponent(req.branch).to_complex(prec) * &zinv;
        let first = &a0 * &nu_over_z;
        DerivativeSum {
            max: (first.exponent(), 0),
            sum: first,
            zinv,
            nu_over_z,
            coeff: ApComplex::zero(prec),
            term: ApComplex::zero(prec),
        }
    });
    let mut scratch = Float::new(prec);

    let mut m = 0usize;
    loop {
        if m >= req.max_terms {
            return Err(Error::NonConvergence { terms: m });
        }
        let term = rec.advance();
        m += 1;
        psi.re += &term.re;
        psi.im += &term.im;
        let e = term.exponent();
        if e > max_a.0 {
            max_a = (e, m);
        }
        let decision = match deriv.as_mut() {
            None => stop.observe(m, e, max_a.0),
            Some(d) => {
                let ed = d.add_term(term, m, &mut scratch);
                stop.observe_all(m, &[(e, max_a.0), (ed, d.max.0)])
            }
        };
        if decision == StopDecision::Stop {
            break;
        }
    }

    let model = ErrorModel::default();
    let diagnostics = SeriesDiagnostics {
        max_a_exponent: max_a.0,
        max_a_at: max_a.1,
        max_ad_exponent: deriv.as_ref().map(|d| d.max.0),
        max_ad_at: deriv.as_ref().map(|d| d.max.1),
        terms_summed: m,
        lg_error_f: model.lg_error(max_a.0, prec),
        lg_error_fd: deriv.as_ref().map(|d| model.lg_error_derivative(d.max.0, prec)),
    };
    Ok(SeriesResult {
        psi,
        dpsi: deriv.map(|d| d.sum),
        diagnostics,
        precision: req.prec,
    })
}

struct DerivativeSum {
    sum: ApComplex,
    max: (Exponent, usize),
    zinv: ApComplex,
    nu_over_z: ApComplex,
    coeff: ApComplex,
    term: ApComplex,
}

impl DerivativeSum {
    fn add_term(&mut self, a: &ApComplex, m: usize, scratch: &mut Float) -> Exponent {
        let mf = m as f64;
        self.coeff.re.assign(&self.zinv.re * mf);
        self.coeff.re += &self.nu_over_z.re;
        self.coeff.im.assign(&self.zinv.im * mf);
        self.coeff.im += &self.nu_over_z.im;
        mul_into(&mut self.term, a, &self.coeff, scratch);
        self.sum.re += &self.term.re;
        self.sum.im += &self.term.im;
        let e = self.term.exponent();
        if e > self.max.0 {
            self.max = (e, m);
        }
        e
    }
}

/// The first `count` series coefficients `a_0 … a_{count-1}` with `a_0 = 1`,
/// so that `ψ(z) = z^ν Σ a_m z^m`.
pub fn coefficients(
    eq: &EquationSpec,
    branch: Branch,
    count: usize,
    prec: PrecisionSpec,
) -> Result<Vec<ApComplex>> {
    eq.check_branch(branch)?;
    let bits = prec.bit_precision;
    let (mut rec, a0) = Recursion::new(eq, &ApComplex::one(bits), branch, bits)?;
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(a0);
    }
    while out.len() < count {
        out.push(rec.advance().clone());
    }
    Ok(out)
}
