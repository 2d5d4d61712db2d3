//! Cost prediction for the quartic oscillator series without summing it:
//! largest term, number of terms, and the gain from splitting the path.

use seriesode::apriori::{predict_split_cost, AprioriModel};

fn main() -> seriesode::Result<()> {
    let model = AprioriModel::anharmonic(0.0);
    let y = 178f64.sqrt();
    let x = y * y;
    let (m_peak, lg_peak) = model.predict_peak(x);
    println!("y = {y:.4}: largest term ~ 1e{lg_peak:.0} near m = {m_peak:.0}");
    for digits in [100.0, 1000.0, 1e4, 1e5] {
        let m = model.predict_terms(x, 0.0, digits, false)?;
        println!("    P = {digits:>6}: {m:>7} terms");
    }
    println!("split evaluation at P = 1e5:");
    for k in 1..=4 {
        let per_leg = predict_split_cost(y, 1e5, k)?;
        println!("    {k} leg(s): {per_leg:>7} terms each, {:>7} total", per_leg * u64::from(k));
    }

    let wells = AprioriModel::doublewell(5.0);
    println!("double well c = 5, coefficient estimates:");
    for m in [100.0, 300.0, 1000.0] {
        println!(
            "    ln|a_{m}| ~ {:.1} (with prefactor {:.1})",
            wells.coeff_estimate(m, 0.0)?,
            wells.improved_coeff_estimate(m, 0.0)?
        );
    }
    Ok(())
}
