//! Compare the numerical Wronskian of a random-looking equation with its
//! closed form, first at a fixed precision, then at a planned one.

use seriesode::accuracy::{plan_precision, wronskian};
use seriesode::frobenius::EquationSpec;
use seriesode::mpcore::{parse_scalar, PrecisionSpec};

const EQUATION: &str = r#"{
    "s": "1/3+1i",
    "nu_plus": "2.5-1.25i",
    "nu_minus": "-3/7+4i",
    "v": ["1-2i", "0.5", "-3+1i", "2i"]
}"#;

fn main() -> seriesode::Result<()> {
    let eq = EquationSpec::from_json_str(EQUATION)?;
    let z = parse_scalar("6-4i")?;

    let fixed = wronskian(&eq, &z, PrecisionSpec::from_digits(50))?;
    println!("fixed P = 50:");
    println!("    estimated lg|δW| = {:.2}", fixed.lg_delta_e);
    println!("    actual    lg|δW| = {:.2}", fixed.lg_delta_r.unwrap_or(f64::NEG_INFINITY));
    println!("    within estimate: {}", fixed.within_estimate());

    let target = 100;
    let prec = plan_precision(&eq, &z, target)?;
    let planned = wronskian(&eq, &z, prec)?;
    println!("planned for 1e-{target}: P = {} ({} bits)", prec.decimal_digits, prec.bit_precision);
    println!("    actual lg|δW| = {:.2}", planned.lg_delta_r.unwrap_or(f64::NEG_INFINITY));
    Ok(())
}
