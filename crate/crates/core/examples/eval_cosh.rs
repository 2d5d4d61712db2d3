//! Sum the cosh/sinh equation `ψ'' = ψ` at a complex point and print both
//! branches with their error estimates.
//!
//! `cargo run --example eval_cosh -- 3/2+1/2i 60`

use seriesode::frobenius::{evaluate, Branch, EquationSpec, EvalRequest};
use seriesode::mpcore::{parse_scalar, PrecisionSpec};

fn main() -> seriesode::Result<()> {
    let mut args = std::env::args().skip(1);
    let z = parse_scalar(&args.next().unwrap_or_else(|| "3/2+1/2i".into()))?;
    let digits: u32 = args.next().map_or(Ok(60), |s| s.parse()).expect("digits");
    let prec = PrecisionSpec::from_digits(digits);

    for (name, branch) in [("cosh", Branch::Minus), ("sinh", Branch::Plus)] {
        let req = EvalRequest::new(EquationSpec::cosh(), z.clone(), branch, prec).with_derivative(true);
        let r = evaluate(&req)?;
        let (re, im) = r.psi.to_decimal_strings(digits as usize);
        let d = &r.diagnostics;
        println!("{name}({z}) = {re} + {im} i");
        println!("    terms {}, largest term 2^{:?} at m = {}, error ~ 1e{:.1}", d.terms_summed, d.max_a_exponent, d.max_a_at, d.lg_error_f);
    }
    Ok(())
}
