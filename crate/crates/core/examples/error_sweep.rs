//! Estimated versus measured roundoff over random equations, written as CSV
//! with a JSON summary on stderr.
//!
//! `cargo run --release --example error_sweep -- 200 > sweep.csv`

use seriesode::labs::{run_error_sweep, write_csv, SweepConfig};

fn main() -> seriesode::Result<()> {
    let samples = std::env::args().nth(1).map_or(200, |s| s.parse().expect("sample count"));
    let cfg = SweepConfig::new(samples, 1, vec![20, 200, 500]);
    let (rows, summary) = run_error_sweep(&cfg)?;
    write_csv(&rows, std::io::stdout().lock())?;
    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
