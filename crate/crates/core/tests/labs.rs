use seriesode::labs::{self, draw_sample, SweepConfig, WronskiMode};

fn csv_bytes(cfg: &SweepConfig, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let (rows, _) = pool.install(|| labs::run_error_sweep(cfg)).unwrap();
    let mut out = Vec::new();
    labs::write_csv(&rows, &mut out).unwrap();
    out
}

#[test]
fn sweep_output_is_independent_of_worker_count() {
    let cfg = SweepConfig::new(24, 5, vec![20, 60]);
    let serial = csv_bytes(&cfg, 1);
    assert_eq!(serial, csv_bytes(&cfg, 4));
    assert_eq!(serial, csv_bytes(&cfg, 3));
}

#[test]
fn wronskian_sweep_is_reproducible() {
    let cfg = SweepConfig::new(12, 11, vec![50]);
    let (a, sa) = labs::run_wronskian_sweep(&cfg, WronskiMode::Fixed(50)).unwrap();
    let (b, _) = labs::run_wronskian_sweep(&cfg, WronskiMode::Fixed(50)).unwrap();
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    labs::write_csv(&a, &mut ca).unwrap();
    labs::write_csv(&b, &mut cb).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(sa.failures, 0);
    assert!(sa.fraction_within_estimate >= 0.99);
}

#[test]
fn redraw_rate_is_small() {
    let n = 2000;
    let redraws: u32 = (0..n).map(|i| draw_sample(42, i, true).redraws).sum();
    assert!(f64::from(redraws) < 0.05 * n as f64, "{redraws} redraws");
}

#[test]
fn low_precision_summary_is_sane() {
    let cfg = SweepConfig::new(40, 8, vec![20, 60]);
    let (rows, s) = labs::run_error_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 80);
    assert!(rows.iter().all(|r| r.error.is_none()));
    assert!(s.pearson_pooled.unwrap() > 0.99);
    assert_eq!(s.fraction_delta_in_range, 1.0);
    assert!(s.pass_range && s.pass_correlation);
}
