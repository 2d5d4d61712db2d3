use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary exponent of a floating point value, with a sentinel for zero.
///
/// `NegInfinity` orders below every finite exponent, so running maxima over a
/// sequence that contains zeros are never disturbed by them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    NegInfinity,
    Finite(i64),
}

impl Exponent {
    pub fn finite(self) -> Option<i64> {
        match self {
            Exponent::NegInfinity => None,
            Exponent::Finite(e) => Some(e),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::NegInfinity => f64::NEG_INFINITY,
            Exponent::Finite(e) => e as f64,
        }
    }

    pub(crate) fn of_float(x: &Float) -> Self {
        match x.get_exp() {
            Some(e) => Exponent::Finite(i64::from(e)),
            None => Exponent::NegInfinity,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::NegInfinity => f.write_str("-inf"),
            Exponent::Finite(e) => write!(f, "{e}"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match Option::<i64>::deserialize(d)? {
            Some(e) => Exponent::Finite(e),
            None => Exponent::NegInfinity,
        })
    }
}

/// Arbitrary-precision complex number stored as two MPFR floats of equal
/// precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ApComplex {
    pub re: Float,
    pub im: Float,
}

impl ApComplex {
    pub fn zero(prec: u32) -> Self {
        ApComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ApComplex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let mut c = ApComplex { re, im };
        c.set_prec(prec);
        c
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        ApComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn with_real(re: Float) -> Self {
        let prec = re.prec();
        ApComplex {
            re,
            im: Float::new(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.set_prec(prec);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exponent `e` with `2^(e-1) <= max(|re|, |im|) < 2^e`.
    pub fn exponent(&self) -> Exponent {
        Exponent::of_float(&self.re).max(Exponent::of_float(&self.im))
    }

    pub fn conj(&self) -> Self {
        ApComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        let mut n = Float::with_val(prec, self.re.square_ref());
        n += Float::with_val(prec, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// log₁₀ of the modulus; `-inf` for zero.
    pub fn lg_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        lg_float(&self.abs())
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let inv = Float::with_val(prec, self.norm_sqr().recip_ref());
        ApComplex {
            re: Float::with_val(prec, &self.re * &inv),
            im: Float::with_val(prec, -(Float::with_val(prec, &self.im * &inv))),
        }
    }

    pub fn div(&self, other: &ApComplex) -> Self {
        self * &other.recip()
    }

    pub fn scale_u(&self, k: u32) -> Self {
        let prec = self.prec();
        ApComplex {
            re: Float::with_val(prec, &self.re * k),
            im: Float::with_val(prec, &self.im * k),
        }
    }

    pub fn scale_real(&self, k: &Float) -> Self {
        let prec = self.prec();
        ApComplex {
            re: Float::with_val(prec, &self.re * k),
            im: Float::with_val(prec, &self.im * k),
        }
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// Principal logarithm. Fails for zero.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let prec = self.prec();
        Ok(ApComplex {
            re: Float::with_val(prec, self.abs().ln_ref()),
            im: self.arg(),
        })
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let mag = Float::with_val(prec, self.re.exp_ref());
        if self.im.is_zero() {
            return ApComplex::with_real(mag);
        }
        let (sin, cos) = self.im.clone().sin_cos(Float::new(prec));
        ApComplex {
            re: Float::with_val(prec, &mag * &cos),
            im: Float::with_val(prec, &mag * &sin),
        }
    }

    /// Principal power `self^w = exp(w · Log self)`.
    ///
    /// Positive real bases with real exponents stay on the real axis exactly.
    pub fn pow(&self, w: &ApComplex) -> Result<Self> {
        if w.is_zero() {
            return Ok(ApComplex::one(self.prec()));
        }
        if self.is_zero() {
            return Err(Error::Domain("power of zero".into()));
        }
        let prec = self.prec().max(w.prec());
        if self.im.is_zero() && self.re.is_sign_positive() && w.im.is_zero() {
            let base = Float::with_val(prec, &self.re);
            return Ok(ApComplex::with_real(Float::with_val(prec, (&base).pow(&w.re))));
        }
        let log = self.clone().with_prec(prec).ln()?;
        Ok((&log * w).exp())
    }

    pub fn from_real_str(prec: u32, s: &str) -> Result<Float> {
        Float::parse(s)
            .map(|p| Float::with_val(prec, p))
            .map_err(|e| Error::Parse(format!("invalid decimal {s:?}: {e}")))
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            float_to_decimal(&self.re, digits),
            float_to_decimal(&self.im, digits),
        )
    }

    /// Relative agreement in decimal digits, `-lg(|a-b| / max(|a|,|b|))`.
    /// Returns `f64::INFINITY` for identical values.
    pub fn shared_digits(&self, other: &ApComplex) -> f64 {
        let diff = self - other;
        if diff.is_zero() {
            return f64::INFINITY;
        }
        let scale = self.lg_abs().max(other.lg_abs());
        scale - diff.lg_abs()
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }
}

/// log₁₀ |x| as an `f64`; `-inf` for zero. Works far outside the `f64` range.
pub fn lg_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    mant.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
}

/// Scientific decimal rendering that parses back through `Float::parse`.
pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

/// Serialized as `{"re": "...", "im": "..."}` with every significant digit
/// the mantissa carries.
impl Serialize for ApComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let digits = ((f64::from(self.prec()) * std::f64::consts::LOG10_2) as usize).max(2);
        let (re, im) = self.to_decimal_strings(digits);
        let mut st = s.serialize_struct("ApComplex", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

impl fmt::Display for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((f64::from(self.prec()) * std::f64::consts::LOG10_2) as usize).max(2);
        let (re, im) = self.to_decimal_strings(digits);
        if self.im.is_zero() {
            write!(f, "{re}")
        } else if self.im.is_sign_negative() {
            write!(f, "{re}{im}i")
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl<'a> Add<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn add(self, rhs: &'a ApComplex) -> ApComplex {
        let prec = self.prec().max(rhs.prec());
        ApComplex {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn sub(self, rhs: &'a ApComplex) -> ApComplex {
        let prec = self.prec().max(rhs.prec());
        ApComplex {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn mul(self, rhs: &'a ApComplex) -> ApComplex {
        let prec = self.prec().max(rhs.prec());
        let mut out = ApComplex::zero(prec);
        let mut scratch = Float::new(prec);
        mul_into(&mut out, self, rhs, &mut scratch);
        out
    }
}

impl Neg for &ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        let prec = self.prec();
        ApComplex {
            re: Float::with_val(prec, -&self.re),
            im: Float::with_val(prec, -&self.im),
        }
    }
}

/// `out = a · b` without allocating; `scratch` must have the output precision.
pub(crate) fn mul_into(out: &mut ApComplex, a: &ApComplex, b: &ApComplex, scratch: &mut Float) {
    if a.im.is_zero() && b.im.is_zero() {
        out.re.assign(&a.re * &b.re);
        out.im.assign(0);
        return;
    }
    out.re.assign(&a.re * &b.re);
    scratch.assign(&a.im * &b.im);
    out.re -= &*scratch;
    out.im.assign(&a.re * &b.im);
    scratch.assign(&a.im * &b.re);
    out.im += &*scratch;
}

/// `acc += a · b` without allocating.
pub(crate) fn mul_add_into(acc: &mut ApComplex, a: &ApComplex, b: &ApComplex, scratch: &mut Float) {
    scratch.assign(&a.re * &b.re);
    acc.re += &*scratch;
    if a.im.is_zero() && b.im.is_zero() {
        return;
    }
    scratch.assign(&a.im * &b.im);
    acc.re -= &*scratch;
    scratch.assign(&a.re * &b.im);
    acc.im += &*scratch;
    scratch.assign(&a.im * &b.re);
    acc.im += &*scratch;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_examples() {
        assert_eq!(ApComplex::one(64).exponent(), Exponent::Finite(1));
        assert_eq!(ApComplex::zero(64).exponent(), Exponent::NegInfinity);
        assert_eq!(ApComplex::from_f64(64, 3.0, 4.0).exponent(), Exponent::Finite(3));
        assert_eq!(ApComplex::from_f64(64, -0.75, 0.0).exponent(), Exponent::Finite(0));
    }

    #[test]
    fn sentinel_orders_below_everything() {
        assert!(Exponent::NegInfinity < Exponent::Finite(i64::MIN));
        let terms = [Exponent::Finite(-5), Exponent::NegInfinity, Exponent::Finite(-7)];
        assert_eq!(terms.iter().max(), Some(&Exponent::Finite(-5)));
    }

    #[test]
    fn principal_power_of_negative_real() {
        // (-4)^(1/2) = 2i on the principal branch
        let z = ApComplex::from_f64(128, -4.0, 0.0);
        let half = ApComplex::from_f64(128, 0.5, 0.0);
        let r = z.pow(&half).unwrap();
        assert!(r.re.to_f64().abs() < 1e-30);
        assert!((r.im.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn lg_float_outside_f64_range() {
        let x = Float::with_val(64, Float::i_pow_u(10, 5000));
        assert!((lg_float(&x) - 5000.0).abs() < 1e-9);
    }

    #[test]
    fn decimal_round_trip() {
        let prec = 256;
        let x = ApComplex::from_f64(prec, 1.0, 0.0).exp();
        let (re, _) = x.to_decimal_strings(77);
        let back = ApComplex::from_real_str(prec, &re).unwrap();
        let rel = Float::with_val(prec, &back - &x.re).abs() / &x.re;
        assert!(rel.to_f64() < 1e-76);
    }
}
