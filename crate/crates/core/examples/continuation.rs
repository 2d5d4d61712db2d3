//! Carry the quartic oscillator solution `ψ'' = (y⁴ − ε) ψ` from `y = 0`
//! along a path of re-expansions and compare with direct summation.

use rug::Rational;
use seriesode::frobenius::{continue_solution, evaluate, Branch, Continuation, EquationSpec, EvalRequest};
use seriesode::mpcore::{ApComplex, ExactScalar, PrecisionSpec};

fn main() -> seriesode::Result<()> {
    let eps = Rational::from((10_603_620_904_841_829i64, 10_000_000_000_000_000i64));
    let q: Vec<ExactScalar> = vec![(-eps).into(), 0.into(), 0.into(), 0.into(), 1.into()];
    let eq = EquationSpec::ordinary(1.into(), &q)?;
    let prec = PrecisionSpec::from_digits(100);
    let bits = prec.bit_precision;

    let end = 3;
    let direct = evaluate(&EvalRequest::new(eq.clone(), end.into(), Branch::Minus, prec).with_derivative(true))?;
    println!("direct:  ψ(3) = {}", direct.psi.to_decimal_strings(40).0);

    for legs in [2, 3, 6] {
        let path: Vec<ExactScalar> = (0..=legs).map(|k| ExactScalar::ratio(end * k, legs)).collect();
        let start = Continuation::exact(ApComplex::one(bits), ApComplex::zero(bits));
        let c = continue_solution(&eq, &start, &path, prec)?;
        println!(
            "{legs} legs:  ψ(3) = {}  shared digits {:.1}, estimated error 1e{:.1}",
            c.psi.to_decimal_strings(40).0,
            c.psi.shared_digits(&direct.psi),
            c.lg_error_psi
        );
    }
    Ok(())
}
