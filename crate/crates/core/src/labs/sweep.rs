use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{iqr, ks_distance, pearson, Quantiles};
use super::{draw_sample, Sample, SweepConfig};
use crate::accuracy::{lg_distance, plan_precision, wronskian};
use crate::error::Result;
use crate::frobenius::{evaluate, EvalRequest, SeriesResult};
use crate::mpcore::PrecisionSpec;

/// Range of `Δ = lg ε_r − lg ε_e` that counts as a good estimate.
pub const DELTA_RANGE: (f64, f64) = (-10.0, 6.0);
/// Range of `lg δW_r − lg δW_e` that counts as a good Wronskian estimate.
pub const WRONSKI_RANGE: (f64, f64) = (-6.0, 2.0);

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub seed: u64,
    pub case_id: usize,
    pub degree: usize,
    pub branch: String,
    pub p: u32,
    pub m_bits: u32,
    pub max_a_exponent: Option<i64>,
    pub terms: Option<usize>,
    pub lg_e: Option<f64>,
    pub lg_r: Option<f64>,
    pub delta: Option<f64>,
    pub lg_e_d: Option<f64>,
    pub lg_r_d: Option<f64>,
    pub delta_d: Option<f64>,
    pub error: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn run_at(sample: &Sample, prec: PrecisionSpec, cfg: &SweepConfig) -> Result<SeriesResult> {
    let req = EvalRequest::new(sample.eq.clone(), sample.z.clone(), sample.branch, prec)
        .with_derivative(cfg.derivative)
        .with_max_terms(cfg.max_terms);
    evaluate(&req)
}

fn error_records(sample: &Sample, cfg: &SweepConfig, reference: PrecisionSpec) -> Vec<ErrorRecord> {
    let exact = run_at(sample, reference, cfg);
    cfg.precisions
        .iter()
        .map(|&p| {
            let prec = PrecisionSpec::from_digits(p);
            let mut rec = ErrorRecord {
                seed: cfg.seed,
                case_id: sample.index,
                degree: sample.eq.degree(),
                branch: sample.branch.to_string(),
                p,
                m_bits: prec.bit_precision,
                max_a_exponent: None,
                terms: None,
                lg_e: None,
                lg_r: None,
                delta: None,
                lg_e_d: None,
                lg_r_d: None,
                delta_d: None,
                error: None,
            };
            let exact = match &exact {
                Ok(r) => r,
                Err(e) => {
                    rec.error = Some(format!("reference: {e}"));
                    return rec;
                }
            };
            match run_at(sample, prec, cfg) {
                Ok(r) => {
                    let d = &r.diagnostics;
                    rec.max_a_exponent = d.max_a_exponent.finite();
                    rec.terms = Some(d.terms_summed);
                    rec.lg_e = finite(d.lg_error_f);
                    rec.lg_r = finite(lg_distance(&r.psi, &exact.psi));
                    rec.delta = rec.lg_r.zip(rec.lg_e).map(|(r, e)| r - e);
                    if let (Some(dp), Some(de), Some(lg)) = (&r.dpsi, &exact.dpsi, d.lg_error_fd) {
                        rec.lg_e_d = finite(lg);
                        rec.lg_r_d = finite(lg_distance(dp, de));
                        rec.delta_d = rec.lg_r_d.zip(rec.lg_e_d).map(|(r, e)| r - e);
                    }
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
            rec
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecisionStats {
    pub p: u32,
    pub delta: Option<Quantiles>,
    pub pearson: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorSummary {
    pub config: SweepConfig,
    pub reference_digits: u32,
    pub samples: usize,
    pub redraws: u64,
    pub failures: usize,
    pub per_precision: Vec<PrecisionStats>,
    /// Correlation of `lg ε_e` with `lg ε_r` pooled over all precisions.
    pub pearson_pooled: Option<f64>,
    pub fraction_delta_in_range: f64,
    /// `Δ` over every precision but the lowest.
    pub iqr_delta: Option<f64>,
    /// `Δ − Δ̃` with `Δ̃` taken at the lowest precision.
    pub iqr_delta_minus_low: Option<f64>,
    /// KS distance between the `Δ` distributions of the two highest precisions.
    pub ks_top_two: Option<f64>,
    pub delta_range: (f64, f64),
    pub pass_range: bool,
    pub pass_correlation: bool,
    pub pass_iqr: bool,
}

impl ErrorSummary {
    fn build(cfg: &SweepConfig, reference_digits: u32, samples: &[Sample], records: &[ErrorRecord]) -> Self {
        let deltas_at = |p: u32| -> Vec<f64> {
            records.iter().filter(|r| r.p == p).filter_map(|r| r.delta).collect()
        };
        let pairs_at = |p: Option<u32>| -> (Vec<f64>, Vec<f64>) {
            records
                .iter()
                .filter(|r| p.is_none_or(|p| r.p == p))
                .filter_map(|r| r.lg_e.zip(r.lg_r))
                .unzip()
        };
        let per_precision = cfg
            .precisions
            .iter()
            .map(|&p| {
                let (e, r) = pairs_at(Some(p));
                PrecisionStats {
                    p,
                    delta: Quantiles::of(&deltas_at(p)),
                    pearson: pearson(&e, &r),
                }
            })
            .collect();
        let (e, r) = pairs_at(None);
        let pearson_pooled = pearson(&e, &r);

        let all: Vec<f64> = records.iter().filter_map(|r| r.delta).collect();
        let attempted = records.len().max(1);
        let in_range = all.iter().filter(|d| (DELTA_RANGE.0..=DELTA_RANGE.1).contains(*d)).count();

        let mut sorted_p = cfg.precisions.clone();
        sorted_p.sort_unstable();
        sorted_p.dedup();
        let low = sorted_p.first().copied();
        let tilde: HashMap<usize, f64> = records
            .iter()
            .filter(|r| Some(r.p) == low)
            .filter_map(|r| Some((r.case_id, r.delta?)))
            .collect();
        let (mut high_deltas, mut diffs) = (Vec::new(), Vec::new());
        for rec in records.iter().filter(|r| Some(r.p) != low) {
            let Some(d) = rec.delta else { continue };
            high_deltas.push(d);
            if let Some(t) = tilde.get(&rec.case_id) {
                diffs.push(d - t);
            }
        }
        let ks_top_two = match sorted_p.as_slice() {
            [.., a, b] => ks_distance(&deltas_at(*a), &deltas_at(*b)),
            _ => None,
        };
        let iqr_delta = iqr(&high_deltas);
        let iqr_delta_minus_low = iqr(&diffs);
        let fraction_delta_in_range = in_range as f64 / attempted as f64;
        ErrorSummary {
            config: cfg.clone(),
            reference_digits,
            samples: samples.len(),
            redraws: samples.iter().map(|s| u64::from(s.redraws)).sum(),
            failures: records.iter().filter(|r| r.error.is_some()).count(),
            per_precision,
            pearson_pooled,
            fraction_delta_in_range,
            iqr_delta,
            iqr_delta_minus_low,
            ks_top_two,
            delta_range: DELTA_RANGE,
            pass_range: fraction_delta_in_range >= 0.99,
            pass_correlation: pearson_pooled.is_some_and(|p| p >= 0.99),
            pass_iqr: matches!((iqr_delta_minus_low, iqr_delta), (Some(a), Some(b)) if a < b),
        }
    }
}

/// Evaluates every sample at each precision and at the reference precision,
/// recording estimated and real errors.
pub fn run_error_sweep(cfg: &SweepConfig) -> Result<(Vec<ErrorRecord>, ErrorSummary)> {
    cfg.check()?;
    let reference_digits = cfg.reference_digits()?;
    let reference = PrecisionSpec::from_digits(reference_digits);
    let samples: Vec<Sample> = (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| draw_sample(cfg.seed, i, false))
        .collect();
    let records: Vec<ErrorRecord> = samples
        .par_iter()
        .map(|s| error_records(s, cfg, reference))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = ErrorSummary::build(cfg, reference_digits, &samples, &records);
    Ok((records, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "digits")]
pub enum WronskiMode {
    /// Evaluate at a fixed precision.
    Fixed(u32),
    /// Plan the precision to reach an absolute error of `10^(−digits)`.
    Planned(u32),
}

#[derive(Debug, Clone, Serialize)]
pub struct WronskiRecord {
    pub seed: u64,
    pub case_id: usize,
    pub degree: usize,
    pub p: Option<u32>,
    pub lg_delta_e: Option<f64>,
    pub lg_delta_r: Option<f64>,
    pub diff: Option<f64>,
    pub within_estimate: Option<bool>,
    pub meets_target: Option<bool>,
    pub error: Option<String>,
}

fn wronski_record(sample: &Sample, seed: u64, mode: WronskiMode) -> WronskiRecord {
    let mut rec = WronskiRecord {
        seed,
        case_id: sample.index,
        degree: sample.eq.degree(),
        p: None,
        lg_delta_e: None,
        lg_delta_r: None,
        diff: None,
        within_estimate: None,
        meets_target: None,
        error: None,
    };
    let prec = match mode {
        WronskiMode::Fixed(p) => Ok(PrecisionSpec::from_digits(p)),
        WronskiMode::Planned(target) => plan_precision(&sample.eq, &sample.z, target),
    };
    let report = prec.and_then(|p| {
        rec.p = Some(p.decimal_digits);
        wronskian(&sample.eq, &sample.z, p)
    });
    match report {
        Ok(r) => {
            let lg_r = r.lg_delta_r.unwrap_or(f64::NEG_INFINITY);
            rec.lg_delta_e = finite(r.lg_delta_e);
            rec.lg_delta_r = finite(lg_r);
            rec.diff = rec.lg_delta_r.zip(rec.lg_delta_e).map(|(r, e)| r - e);
            rec.within_estimate = Some(r.within_estimate());
            if let WronskiMode::Planned(target) = mode {
                rec.meets_target = Some(lg_r <= -f64::from(target));
            }
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

#[derive(Debug, Clone, Serialize)]
pub struct WronskiSummary {
    pub sample_count: usize,
    pub seed: u64,
    pub mode: WronskiMode,
    pub redraws: u64,
    pub failures: usize,
    pub fraction_within_estimate: f64,
    pub fraction_diff_in_range: f64,
    pub diff_range: (f64, f64),
    pub fraction_meets_target: Option<f64>,
    pub diff: Option<Quantiles>,
    pub precision_digits: Option<Quantiles>,
}

/// Wronskian check on random samples that admit both branches.
pub fn run_wronskian_sweep(cfg: &SweepConfig, mode: WronskiMode) -> Result<(Vec<WronskiRecord>, WronskiSummary)> {
    let samples: Vec<Sample> = (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| draw_sample(cfg.seed, i, true))
        .collect();
    let records: Vec<WronskiRecord> = samples.par_iter().map(|s| wronski_record(s, cfg.seed, mode)).collect();
    let n = records.len().max(1) as f64;
    let frac = |pred: &dyn Fn(&WronskiRecord) -> bool| records.iter().filter(|r| pred(r)).count() as f64 / n;
    let diffs: Vec<f64> = records.iter().filter_map(|r| r.diff).collect();
    let digits: Vec<f64> = records.iter().filter_map(|r| r.p.map(f64::from)).collect();
    let summary = WronskiSummary {
        sample_count: records.len(),
        seed: cfg.seed,
        mode,
        redraws: samples.iter().map(|s| u64::from(s.redraws)).sum(),
        failures: records.iter().filter(|r| r.error.is_some()).count(),
        fraction_within_estimate: frac(&|r| r.within_estimate == Some(true)),
        fraction_diff_in_range: frac(&|r| {
            // an exact Wronskian has no measurable error and counts as in range
            r.error.is_none() && r.diff.map_or(r.lg_delta_r.is_none(), |d| (WRONSKI_RANGE.0..=WRONSKI_RANGE.1).contains(&d))
        }),
        diff_range: WRONSKI_RANGE,
        fraction_meets_target: matches!(mode, WronskiMode::Planned(_)).then(|| frac(&|r| r.meets_target == Some(true))),
        diff: Quantiles::of(&diffs),
        precision_digits: Quantiles::of(&digits),
    };
    Ok((records, summary))
}

/// Writes rows with a header to `out`.
pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_error_sweep_is_deterministic() {
        let cfg = SweepConfig::new(6, 42, vec![20, 40]);
        let (a, summary) = run_error_sweep(&cfg).unwrap();
        let (b, _) = run_error_sweep(&cfg).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_csv(&a, &mut ca).unwrap();
        write_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        assert_eq!(a.len(), 12);
        assert_eq!(summary.reference_digits, 116);
        assert!(String::from_utf8(ca).unwrap().starts_with("seed,case_id,degree,branch,p,m_bits"));
    }

    #[test]
    fn small_wronskian_sweep() {
        let cfg = SweepConfig::new(4, 3, vec![]);
        let (recs, summary) = run_wronskian_sweep(&cfg, WronskiMode::Fixed(40)).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(summary.fraction_meets_target, None);
    }
}
