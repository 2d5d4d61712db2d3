use std::time::Instant;

use serde::Serialize;

use crate::apriori::AprioriModel;
use crate::error::Result;
use crate::frobenius::{evaluate, Branch, EquationSpec, EvalRequest};
use crate::mpcore::{ExactScalar, PrecisionSpec};

/// Fits are taken over precisions at or above this many digits.
pub const FIT_FROM_DIGITS: u32 = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub p: u32,
    pub m_bits: u32,
    pub terms: usize,
    pub predicted_terms: Option<u64>,
    pub max_a_at: usize,
    pub wall_s: f64,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|y − fit| / y` over the fitted points.
    pub max_relative_residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<BenchRow>,
    pub fit: Option<LinearFit>,
}

/// Least-squares line through `(x, y)`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_relative_residual = points
        .iter()
        .map(|&(x, y)| ((y - (slope * x + intercept)) / y).abs())
        .fold(0.0, f64::max);
    Some(LinearFit {
        slope,
        intercept,
        max_relative_residual,
        points: n,
    })
}

/// Times one evaluation per precision and fits terms against digits for
/// `P ≥ 1000`. With a model and `x = |z|` the predicted term counts are
/// reported alongside.
pub fn run_scaling_bench(
    eq: &EquationSpec,
    z: &ExactScalar,
    branch: Branch,
    precisions: &[u32],
    model: Option<(AprioriModel, f64)>,
) -> Result<ScalingReport> {
    let mut rows = Vec::with_capacity(precisions.len());
    for &p in precisions {
        let prec = PrecisionSpec::from_digits(p);
        let started = Instant::now();
        let r = evaluate(&EvalRequest::new(eq.clone(), z.clone(), branch, prec))?;
        let wall_s = started.elapsed().as_secs_f64();
        let predicted_terms = match model {
            Some((m, x)) => Some(m.predict_terms(x, eq.exponent(branch).re_f64(), f64::from(p), false)?),
            None => None,
        };
        rows.push(BenchRow {
            p,
            m_bits: prec.bit_precision,
            terms: r.diagnostics.terms_summed,
            predicted_terms,
            max_a_at: r.diagnostics.max_a_at,
            wall_s,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.p >= FIT_FROM_DIGITS)
        .map(|r| (f64::from(r.p), r.terms as f64))
        .collect();
    Ok(ScalingReport {
        fit: linear_fit(&points),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(f.max_relative_residual < 1e-12);
        assert!(linear_fit(&[(1.0, 1.0)]).is_none());
    }

    #[test]
    fn bench_rows() {
        let eq = EquationSpec::cosh();
        let r = run_scaling_bench(&eq, &ExactScalar::int(3), Branch::Minus, &[20, 40], None).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows[1].terms > r.rows[0].terms);
        assert!(r.fit.is_none());
    }
}
