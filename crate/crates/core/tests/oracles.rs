mod common;

use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use seriesode::accuracy::lg_distance;
use seriesode::apriori::AprioriModel;
use seriesode::frobenius::{coefficients, continue_solution, evaluate, Branch, Continuation, EquationSpec, EvalRequest};
use seriesode::mpcore::{ApComplex, ExactScalar, PrecisionSpec};
use seriesode::spectra::{self, EigenProblem, Parity};

#[test]
fn cosh_and_sinh_against_exponential_series() {
    let eq = EquationSpec::cosh();
    for p in [30u32, 120] {
        let prec = PrecisionSpec::from_digits(p);
        for x in [1i64, 3, 10, -7] {
            let (cosh, sinh) = common::cosh_sinh(x as f64, prec.bit_precision + 64);
            let minus = evaluate(&EvalRequest::new(eq.clone(), x.into(), Branch::Minus, prec).with_derivative(true)).unwrap();
            assert!(common::agreement(&minus.psi.re, &cosh) >= f64::from(p) - 10.0, "cosh({x}) at P={p}");
            assert!(common::agreement(&minus.dpsi.unwrap().re, &sinh) >= f64::from(p) - 10.0);
            let plus = evaluate(&EvalRequest::new(eq.clone(), x.into(), Branch::Plus, prec)).unwrap();
            assert!(common::agreement(&plus.psi.re, &sinh) >= f64::from(p) - 10.0, "sinh({x}) at P={p}");
        }
    }
}

#[test]
fn quartic_eigenvalues_against_rk4() {
    for (parity, lo, hi) in [(Parity::Even, 0.9, 1.2), (Parity::Odd, 3.5, 4.0)] {
        let rk4 = common::rk4_eigenvalue(lo, hi, parity == Parity::Odd);
        let exact = spectra::solve_eigenvalue(&EigenProblem::quartic(parity, 0, 25)).unwrap();
        assert!((exact.value.to_f64() - rk4).abs() < 1e-8, "{parity}: {} vs {rk4}", exact.epsilon);
    }
}

#[test]
fn eigenvalue_is_precision_independent() {
    let base = EigenProblem::quartic(Parity::Even, 1, 20);
    let a = spectra::solve_eigenvalue(&base).unwrap();
    let b = spectra::solve_eigenvalue(&base.clone().with_extra_digits(38)).unwrap();
    let diff = Rational::from(&a.value - &b.value).abs();
    assert!(diff < Rational::from((1, Integer::from(10).pow(20))), "{} vs {}", a.epsilon, b.epsilon);
}

/// `ln |a_m| − improved estimate` at the indices kept by `keep`, m in
/// `[100, 1000]`.
fn ratio_spread(v: [(i64, i64); 3], model: AprioriModel, local_max_only: bool) -> f64 {
    let v = v.iter().map(|&(n, d)| ExactScalar::ratio(n, d)).collect();
    let eq = EquationSpec::new(1.into(), ExactScalar::ratio(1, 2), 0.into(), v).unwrap();
    let a = coefficients(&eq, Branch::Minus, 1002, PrecisionSpec::from_digits(300)).unwrap();
    let ln_a: Vec<f64> = a.iter().map(|x| x.lg_abs() * std::f64::consts::LN_10).collect();
    let r: Vec<f64> = (100..=1000)
        .filter(|&m| ln_a[m].is_finite())
        .filter(|&m| !local_max_only || (ln_a[m] >= ln_a[m - 1] && ln_a[m] >= ln_a[m + 1]))
        .map(|m| ln_a[m] - model.improved_coeff_estimate(m as f64, 0.0).unwrap())
        .collect();
    assert!(r.len() >= 5);
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    (r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / r.len() as f64).sqrt()
}

#[test]
fn coefficient_ratios_are_flat() {
    assert!(ratio_spread([(0, 1), (0, 1), (1, 4)], AprioriModel::anharmonic(0.0), false) <= 0.5);
    assert!(ratio_spread([(1, 4), (1, 2), (1, 4)], AprioriModel::anharmonic(1.0), false) <= 0.5);
    assert!(ratio_spread([(625, 4), (-25, 2), (1, 4)], AprioriModel::doublewell(5.0), true) <= 0.5);
}

fn quartic_ordinary() -> EquationSpec {
    let eps = Rational::from((10_603_620_904_841_829i64, 10_000_000_000_000_000i64));
    let q: Vec<ExactScalar> = vec![(-eps).into(), 0.into(), 0.into(), 0.into(), 1.into()];
    EquationSpec::ordinary(1.into(), &q).unwrap()
}

#[test]
fn continuation_round_trip_reproduces_initial_data() {
    let p = PrecisionSpec::from_digits(60);
    let bits = p.bit_precision;
    let path = [0.into(), ExactScalar::complex(Rational::from((3, 2)), Rational::from((1, 2))), 0.into()];
    for eq in [EquationSpec::cosh(), quartic_ordinary()] {
        for (psi, dpsi) in [(1, 0), (0, 1)] {
            let start = Continuation::exact(
                ApComplex::from_f64(bits, f64::from(psi), 0.0),
                ApComplex::from_f64(bits, f64::from(dpsi), 0.0),
            );
            let back = continue_solution(&eq, &start, &path, p).unwrap();
            assert!(lg_distance(&back.psi, &start.psi) <= -45.0);
            assert!(lg_distance(&back.dpsi, &start.dpsi) <= -45.0);
        }
    }
}

fn small_complex(bound: i64) -> impl Strategy<Value = ExactScalar> {
    let part = move || (-bound..=bound, 1i64..=7).prop_map(|(n, d)| Rational::from((n, d)));
    (part(), part()).prop_map(|(re, im)| ExactScalar::complex(re, im))
}

fn equation() -> impl Strategy<Value = EquationSpec> {
    (
        prop::sample::select(vec![(1i64, 1i64), (1, 3), (-1, 1)]),
        small_complex(40),
        small_complex(40),
        prop::collection::vec(small_complex(10), 1..=4),
    )
        .prop_map(|((sn, sd), nu_plus, nu_minus, v)| {
            EquationSpec::new(ExactScalar::ratio(sn, sd), nu_plus, nu_minus, v).unwrap()
        })
        .prop_filter("both branches valid", |eq| eq.valid_branches().len() == 2)
}

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `s² (m + ν − ν₊)(m + ν − ν₋) a_m = Σ v_n a_{m−n−1}` for every m ≥ 1.
    #[test]
    fn coefficients_satisfy_the_recursion(eq in equation(), b in branch()) {
        let prec = PrecisionSpec::from_digits(40);
        let bits = prec.bit_precision;
        let a = coefficients(&eq, b, 40, prec).unwrap();
        let to_c = |x: &ExactScalar| x.to_complex(bits + 64);
        let s = to_c(&eq.s);
        let s2 = mul(&s, &s);
        let nu = to_c(eq.exponent(b));
        let (np, nm) = (to_c(&eq.nu_plus), to_c(&eq.nu_minus));
        let v: Vec<ApComplex> = eq.v.iter().map(to_c).collect();
        for m in 1..a.len() {
            let mc = ApComplex::from_f64(bits + 64, m as f64, 0.0);
            let lhs = mul(&mul(&s2, &mul(&sub(&add(&mc, &nu), &np), &sub(&add(&mc, &nu), &nm))), &a[m]);
            let mut rhs = ApComplex::zero(bits + 64);
            let mut scale = lhs.lg_abs();
            for n in 0..v.len().min(m) {
                let term = mul(&v[n], &a[m - n - 1]);
                scale = scale.max(term.lg_abs());
                rhs = add(&rhs, &term);
            }
            if scale.is_finite() {
                let bound = scale - f64::from(bits - 4) * std::f64::consts::LOG10_2;
                prop_assert!(lg_distance(&lhs, &rhs) <= bound, "m = {}", m);
            }
        }
    }

    /// Raising the precision by 38 digits moves ψ by less than the estimate.
    #[test]
    fn precision_convergence(eq in equation(), b in branch(),
                             zr in -4i64..=4, zi in -4i64..=4, p in 20u32..80) {
        let z = ExactScalar::complex(Rational::from(zr), Rational::from(zi));
        prop_assume!(!z.is_zero());
        let low = EvalRequest::new(eq.clone(), z.clone(), b, PrecisionSpec::from_digits(p));
        let lo = evaluate(&low).unwrap();
        let hi = evaluate(&low.clone().with_precision(PrecisionSpec::from_digits(p + 38))).unwrap();
        prop_assert!(lg_distance(&lo.psi, &hi.psi) <= lo.diagnostics.lg_error_f);
    }

    #[test]
    fn derivative_present_iff_requested(eq in equation(), b in branch(), want in any::<bool>()) {
        let r = evaluate(&EvalRequest::new(eq, 2.into(), b, PrecisionSpec::from_digits(20)).with_derivative(want)).unwrap();
        prop_assert_eq!(r.dpsi.is_some(), want);
        prop_assert_eq!(r.diagnostics.lg_error_fd.is_some(), want);
    }
}

fn add(a: &ApComplex, b: &ApComplex) -> ApComplex {
    let p = a.prec();
    ApComplex::from_parts(Float::with_val(p, &a.re + &b.re), Float::with_val(p, &a.im + &b.im))
}

fn sub(a: &ApComplex, b: &ApComplex) -> ApComplex {
    let p = a.prec();
    ApComplex::from_parts(Float::with_val(p, &a.re - &b.re), Float::with_val(p, &a.im - &b.im))
}

fn mul(a: &ApComplex, b: &ApComplex) -> ApComplex {
    let p = a.prec();
    let re = Float::with_val(p, &a.re * &b.re) - Float::with_val(p, &a.im * &b.im);
    let im = Float::with_val(p, &a.re * &b.im) + Float::with_val(p, &a.im * &b.re);
    ApComplex::from_parts(re, im)
}
