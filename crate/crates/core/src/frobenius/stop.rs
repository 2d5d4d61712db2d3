use crate::mpcore::{Exponent, PrecisionSpec, LOG2_10};

/// Guard decimal digits kept below the working precision when truncating.
pub const STOP_GUARD_DIGITS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Continue,
    Stop,
}

/// Truncation rule for the series.
///
/// A term is negligible when its exponent lies more than `drop_bits` below
/// the running maximum. Summation stops after `consecutive` negligible terms
/// in a row, and never before `min_terms` terms have been summed.
#[derive(Debug, Clone)]
pub struct StopRule {
    drop_bits: i64,
    consecutive: usize,
    min_terms: usize,
    below: usize,
}

impl StopRule {
    /// Rule for a degree-`degree` equation at the given precision.
    ///
    /// The drop is measured against the actual mantissa width plus ten guard
    /// digits, which is never less than `ceil((P + 10) log₂ 10)` bits.
    pub fn new(prec: PrecisionSpec, degree: usize) -> Self {
        let requested = ((f64::from(prec.decimal_digits) + STOP_GUARD_DIGITS) * LOG2_10).ceil() as i64;
        let actual = i64::from(prec.bit_precision) + (STOP_GUARD_DIGITS * LOG2_10).ceil() as i64;
        StopRule::with_parts(requested.max(actual), degree + 3, degree + 2)
    }

    pub fn with_parts(drop_bits: i64, consecutive: usize, min_terms: usize) -> Self {
        StopRule {
            drop_bits,
            consecutive: consecutive.max(1),
            min_terms,
            below: 0,
        }
    }

    pub fn drop_bits(&self) -> i64 {
        self.drop_bits
    }

    fn negligible(&self, term: Exponent, running_max: Exponent) -> bool {
        match (term, running_max) {
            (Exponent::NegInfinity, _) => true,
            (_, Exponent::NegInfinity) => false,
            (Exponent::Finite(t), Exponent::Finite(max)) => t < max - self.drop_bits,
        }
    }

    /// Feeds term `index` (0-based) and returns whether summation may stop.
    pub fn observe(&mut self, index: usize, term: Exponent, running_max: Exponent) -> StopDecision {
        self.observe_all(index, &[(term, running_max)])
    }

    /// Like [`StopRule::observe`] for several simultaneous sums (ψ and ψ');
    /// a step counts as negligible only if it is negligible in every sum.
    pub fn observe_all(&mut self, index: usize, terms: &[(Exponent, Exponent)]) -> StopDecision {
        if terms.iter().all(|&(t, max)| self.negligible(t, max)) {
            self.below += 1;
        } else {
            self.below = 0;
        }
        if index + 1 >= self.min_terms && self.below >= self.consecutive {
            StopDecision::Stop
        } else {
            StopDecision::Continue
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feed(rule: &mut StopRule, exps: &[Exponent], max: Exponent) -> Option<usize> {
        exps.iter()
            .enumerate()
            .find(|&(m, &e)| rule.observe(m, e, max) == StopDecision::Stop)
            .map(|(m, _)| m)
    }

    #[test]
    fn stops_after_k_consecutive() {
        let mut rule = StopRule::with_parts(100, 4, 3);
        let max = Exponent::Finite(10);
        let exps: Vec<_> = (0..60)
            .map(|m| if m <= 40 { Exponent::Finite(5) } else { Exponent::Finite(-200) })
            .collect();
        assert_eq!(feed(&mut rule, &exps, max), Some(44));
    }

    #[test]
    fn oscillation_resets_the_count() {
        let mut rule = StopRule::with_parts(100, 4, 3);
        let max = Exponent::Finite(10);
        let low = Exponent::Finite(-200);
        let exps = [Exponent::Finite(5), low, low, low, Exponent::Finite(0), low, low, low];
        assert_eq!(feed(&mut rule, &exps, max), None);
    }

    #[test]
    fn zero_terms_count_as_negligible() {
        let mut rule = StopRule::with_parts(100, 2, 1);
        let max = Exponent::Finite(0);
        let exps = [Exponent::Finite(0), Exponent::NegInfinity, Exponent::NegInfinity];
        assert_eq!(feed(&mut rule, &exps, max), Some(2));
    }

    #[test]
    fn respects_minimum_term_count() {
        let mut rule = StopRule::with_parts(10, 1, 5);
        let max = Exponent::Finite(0);
        let exps = [Exponent::NegInfinity; 6];
        assert_eq!(feed(&mut rule, &exps, max), Some(4));
    }

    #[test]
    fn drop_is_at_least_the_requested_digits() {
        for p in [1u32, 19, 20, 100, 500, 5000] {
            let prec = PrecisionSpec::from_digits(p);
            let rule = StopRule::new(prec, 2);
            assert!(rule.drop_bits() >= ((f64::from(p) + 10.0) * LOG2_10).ceil() as i64);
            assert!(rule.drop_bits() > i64::from(prec.bit_precision));
        }
    }
}
