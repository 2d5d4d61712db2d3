use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Rejection, Result};
use crate::mpcore::ExactScalar;

/// Parameters of
///
/// ```text
/// -s² (ψ'' + (1-ν₊-ν₋)/z ψ' + ν₊ν₋/z² ψ) + (1/z) Σₙ vₙ zⁿ ψ = 0
/// ```
///
/// with `v = [v₀, …, v_N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub s: ExactScalar,
    pub nu_plus: ExactScalar,
    pub nu_minus: ExactScalar,
    pub v: Vec<ExactScalar>,
}

/// Which indicial exponent the series starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn other(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Parse(format!("unknown branch {s:?}, expected plus|minus"))),
        }
    }
}

impl EquationSpec {
    pub fn new(
        s: ExactScalar,
        nu_plus: ExactScalar,
        nu_minus: ExactScalar,
        v: Vec<ExactScalar>,
    ) -> Result<Self> {
        let eq = EquationSpec {
            s,
            nu_plus,
            nu_minus,
            v,
        };
        eq.check_shape()?;
        Ok(eq)
    }

    /// `ψ'' = q(z) ψ / s²` around an ordinary point: `ν₋ = 0`, `ν₊ = 1`,
    /// `v = [0, q₀, q₁, …]`.
    pub fn ordinary(s: ExactScalar, q: &[ExactScalar]) -> Result<Self> {
        let mut v = Vec::with_capacity(q.len() + 1);
        v.push(ExactScalar::zero());
        v.extend_from_slice(q);
        EquationSpec::new(s, ExactScalar::int(1), ExactScalar::zero(), v)
    }

    /// The `ψ'' = ψ` equation whose branches are `cosh z` (minus) and
    /// `sinh z` (plus).
    pub fn cosh() -> Self {
        EquationSpec::ordinary(ExactScalar::int(1), &[ExactScalar::int(1)]).expect("valid")
    }

    fn check_shape(&self) -> Result<()> {
        if self.v.is_empty() {
            return Err(Error::Config("coefficient list v must not be empty".into()));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let eq: EquationSpec = serde_json::from_str(text)?;
        eq.check_shape()?;
        Ok(eq)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        EquationSpec::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Polynomial degree N of the potential.
    pub fn degree(&self) -> usize {
        self.v.len() - 1
    }

    pub fn exponent(&self, branch: Branch) -> &ExactScalar {
        match branch {
            Branch::Plus => &self.nu_plus,
            Branch::Minus => &self.nu_minus,
        }
    }

    /// `ν − ν_other` for the chosen branch; the recursion denominator is
    /// `s² (m+1)(m+1+gap)`.
    pub fn indicial_gap(&self, branch: Branch) -> ExactScalar {
        self.exponent(branch).sub(self.exponent(branch.other()))
    }

    /// `ν₋ = 0`, `ν₊ = 1`, `v₀ = 0`: the origin is an ordinary point.
    pub fn is_ordinary_point(&self) -> bool {
        self.nu_minus.is_zero()
            && self.nu_plus.as_integer().is_some_and(|k| k == 1)
            && self.v[0].is_zero()
    }

    /// Rejects branches whose recursion would divide by zero.
    ///
    /// When `ν₊ − ν₋` is an integer the branch with the smaller real part is
    /// refused, except for a gap of one with `v₀ = 0`.
    pub fn check_branch(&self, branch: Branch) -> Result<(), Rejection> {
        if self.s.is_zero() {
            return Err(Rejection::ZeroS);
        }
        let Some(gap) = self.nu_plus.sub(&self.nu_minus).as_integer() else {
            return Ok(());
        };
        let lower = if gap >= 0 { Branch::Minus } else { Branch::Plus };
        if branch != lower {
            return Ok(());
        }
        if gap.clone().abs() == 1 && self.v[0].is_zero() {
            return Ok(());
        }
        Err(Rejection::DegenerateIndicial)
    }

    /// Branches accepted by [`EquationSpec::check_branch`].
    pub fn valid_branches(&self) -> Vec<Branch> {
        [Branch::Plus, Branch::Minus]
            .into_iter()
            .filter(|b| self.check_branch(*b).is_ok())
            .collect()
    }
}

/// Full admission check for an evaluation at `z`.
pub fn validate(eq: &EquationSpec, z: &ExactScalar, branch: Branch) -> Result<(), Rejection> {
    if z.is_zero() {
        return Err(Rejection::ZeroPoint);
    }
    eq.check_branch(branch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(nu_plus: ExactScalar, nu_minus: ExactScalar, v0: i64) -> EquationSpec {
        EquationSpec::new(ExactScalar::int(1), nu_plus, nu_minus, vec![ExactScalar::int(v0), ExactScalar::int(1)])
            .unwrap()
    }

    #[test]
    fn zero_point_rejected() {
        let e = EquationSpec::cosh();
        assert_eq!(validate(&e, &ExactScalar::zero(), Branch::Plus), Err(Rejection::ZeroPoint));
    }

    #[test]
    fn zero_s_rejected() {
        let mut e = EquationSpec::cosh();
        e.s = ExactScalar::zero();
        assert_eq!(validate(&e, &ExactScalar::int(1), Branch::Plus), Err(Rejection::ZeroS));
    }

    #[test]
    fn half_integer_gap_accepts_both() {
        let e = eq(ExactScalar::ratio(1, 2), ExactScalar::zero(), 3);
        assert_eq!(e.valid_branches(), vec![Branch::Plus, Branch::Minus]);
    }

    #[test]
    fn ordinary_point_exception() {
        let e = eq(ExactScalar::int(1), ExactScalar::zero(), 0);
        assert!(validate(&e, &ExactScalar::int(1), Branch::Minus).is_ok());
        assert!(e.is_ordinary_point());
        let e = eq(ExactScalar::int(1), ExactScalar::zero(), 2);
        assert_eq!(
            validate(&e, &ExactScalar::int(1), Branch::Minus),
            Err(Rejection::DegenerateIndicial)
        );
    }

    #[test]
    fn integer_gaps() {
        let e = eq(ExactScalar::int(3), ExactScalar::zero(), 0);
        assert_eq!(e.check_branch(Branch::Minus), Err(Rejection::DegenerateIndicial));
        assert!(e.check_branch(Branch::Plus).is_ok());
        // equal exponents: only one Frobenius solution
        let e = eq(ExactScalar::ratio(1, 3), ExactScalar::ratio(1, 3), 0);
        assert_eq!(e.check_branch(Branch::Minus), Err(Rejection::DegenerateIndicial));
        // labels swapped: the plus label carries the smaller exponent
        let e = eq(ExactScalar::zero(), ExactScalar::int(2), 1);
        assert_eq!(e.check_branch(Branch::Plus), Err(Rejection::DegenerateIndicial));
        assert!(e.check_branch(Branch::Minus).is_ok());
    }

    #[test]
    fn complex_gap_with_integer_real_part_is_fine() {
        let e = eq(
            ExactScalar::complex(2.into(), 1.into()),
            ExactScalar::zero(),
            1,
        );
        assert_eq!(e.valid_branches().len(), 2);
    }

    #[test]
    fn json_schema() {
        let text = r#"{"s": "1", "nu_plus": "1/2", "nu_minus": "0",
                       "v": ["-1/4", {"re": "0", "im": "0.5"}, "1/4"]}"#;
        let e = EquationSpec::from_json_str(text).unwrap();
        assert_eq!(e.degree(), 2);
        assert_eq!(e.nu_plus, ExactScalar::ratio(1, 2));
        assert!(EquationSpec::from_json_str(r#"{"s":"1","nu_plus":"1","nu_minus":"0","v":[]}"#).is_err());
    }
}
