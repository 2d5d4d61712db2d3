//! Terms summed and wall time against precision for the quartic oscillator
//! at `y = √10`, with the a-priori prediction and a linear fit.

use rug::Rational;
use seriesode::apriori::AprioriModel;
use seriesode::labs::run_scaling_bench;
use seriesode::spectra::{to_equation, EigenProblem, Parity};

fn main() -> seriesode::Result<()> {
    let eps = Rational::from((10_603_620_904_841_829i64, 10_000_000_000_000_000i64));
    let (eq, branch) = to_equation(&EigenProblem::quartic(Parity::Even, 0, 50), &eps);
    let precisions = [200, 500, 1000, 2000, 4000, 8000];
    let model = Some((AprioriModel::anharmonic(0.0), 10.0));
    let report = run_scaling_bench(&eq, &10.into(), branch, &precisions, model)?;

    println!("{:>6} {:>7} {:>9} {:>10}", "P", "terms", "predicted", "seconds");
    for r in &report.rows {
        println!("{:>6} {:>7} {:>9} {:>10.4}", r.p, r.terms, r.predicted_terms.unwrap_or(0), r.wall_s);
    }
    if let Some(fit) = report.fit {
        println!(
            "terms ≈ {:.4} P + {:.1} (max residual {:.2}%)",
            fit.slope,
            fit.intercept,
            100.0 * fit.max_relative_residual
        );
    }
    Ok(())
}
