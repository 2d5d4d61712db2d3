use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::complex::{float_to_decimal, ApComplex};
use crate::error::{Error, Result};

/// An equation parameter or evaluation point.
///
/// Values written as integers, fractions or finite decimals are kept as exact
/// (complex) rationals, so the same problem can be re-run at any precision
/// without re-rounding its inputs. `Float` holds values produced at runtime
/// with a fixed precision.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactScalar {
    Rational { re: Rational, im: Rational },
    Float(ApComplex),
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::real(Rational::new())
    }

    pub fn real(re: Rational) -> Self {
        ExactScalar::Rational {
            re,
            im: Rational::new(),
        }
    }

    pub fn complex(re: Rational, im: Rational) -> Self {
        ExactScalar::Rational { re, im }
    }

    pub fn int(n: i64) -> Self {
        ExactScalar::real(Rational::from(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar::real(Rational::from((num, den)))
    }

    /// Exact conversion of a binary64 value (every finite `f64` is a dyadic
    /// rational).
    pub fn from_f64(re: f64, im: f64) -> Self {
        let conv = |x: f64| Rational::from_f64(x).expect("finite f64");
        ExactScalar::complex(conv(re), conv(im))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational { re, im } => *re == 0 && *im == 0,
            ExactScalar::Float(c) => c.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactScalar::Rational { .. })
    }

    pub fn is_real(&self) -> bool {
        match self {
            ExactScalar::Rational { im, .. } => *im == 0,
            ExactScalar::Float(c) => c.is_real(),
        }
    }

    /// Correctly rounded conversion to `prec` bits (exact rationals);
    /// float values are re-rounded or zero-extended.
    pub fn to_complex(&self, prec: u32) -> ApComplex {
        match self {
            ExactScalar::Rational { re, im } => ApComplex {
                re: Float::with_val(prec, re),
                im: Float::with_val(prec, im),
            },
            ExactScalar::Float(c) => c.clone().with_prec(prec),
        }
    }

    /// Real part as `f64` (rounded).
    pub fn re_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational { re, .. } => re.to_f64(),
            ExactScalar::Float(c) => c.re.to_f64(),
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational { im, .. } => im.to_f64(),
            ExactScalar::Float(c) => c.im.to_f64(),
        }
    }

    /// The value as an integer, if it is exactly one.
    pub fn as_integer(&self) -> Option<Integer> {
        match self {
            ExactScalar::Rational { re, im } => {
                if *im == 0 && *re.denom() == 1 {
                    Some(re.numer().clone())
                } else {
                    None
                }
            }
            ExactScalar::Float(c) => {
                if c.im.is_zero() && c.re.is_integer() {
                    c.re.to_integer()
                } else {
                    None
                }
            }
        }
    }

    fn float_prec(&self) -> Option<u32> {
        match self {
            ExactScalar::Float(c) => Some(c.prec()),
            _ => None,
        }
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl Fn(&Rational, &Rational, &Rational, &Rational) -> (Rational, Rational),
        approx: impl Fn(&ApComplex, &ApComplex) -> ApComplex,
    ) -> Self {
        match (self, other) {
            (ExactScalar::Rational { re: a, im: b }, ExactScalar::Rational { re: c, im: d }) => {
                let (re, im) = exact(a, b, c, d);
                ExactScalar::Rational { re, im }
            }
            _ => {
                let prec = self
                    .float_prec()
                    .into_iter()
                    .chain(other.float_prec())
                    .max()
                    .unwrap_or(64);
                ExactScalar::Float(approx(&self.to_complex(prec), &other.to_complex(prec)))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(
            other,
            |a, b, c, d| (Rational::from(a + c), Rational::from(b + d)),
            |x, y| x + y,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(
            other,
            |a, b, c, d| (Rational::from(a - c), Rational::from(b - d)),
            |x, y| x - y,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(
            other,
            |a, b, c, d| {
                let re = Rational::from(a * c) - Rational::from(b * d);
                let im = Rational::from(a * d) + Rational::from(b * c);
                (re, im)
            },
            |x, y| x * y,
        )
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactScalar::Rational { re, im } => ExactScalar::Rational {
                re: Rational::from(-re),
                im: Rational::from(-im),
            },
            ExactScalar::Float(c) => ExactScalar::Float(-c),
        }
    }

    /// Real part comparison `Re(self) >= Re(other)`.
    pub fn re_ge(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactScalar::Rational { re: a, .. }, ExactScalar::Rational { re: b, .. }) => a >= b,
            _ => {
                let prec = self.float_prec().max(other.float_prec()).unwrap_or(64);
                self.to_complex(prec).re >= other.to_complex(prec).re
            }
        }
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::int(n)
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::real(r)
    }
}

impl From<ApComplex> for ExactScalar {
    fn from(c: ApComplex) -> Self {
        ExactScalar::Float(c)
    }
}

/// Parses an integer, `p/q` fraction or finite decimal (optionally with an
/// exponent) into an exact rational.
pub fn parse_real(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid real number {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if t.contains('/') {
        return t.parse::<Rational>().map_err(|_| bad());
    }
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(pos) => (&body[..pos], &body[pos + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str(&digits).map_err(|_| bad())?);
    let scale = exp10 - frac_part.len() as i32;
    let pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses a scalar written as `p/q`, a decimal, or a complex `a+bi` / `a-bi` /
/// `bi` form whose parts are fractions or decimals.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let Some(body) = t.strip_suffix(['i', 'I']) else {
        return Ok(ExactScalar::real(parse_real(&t)?));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_text {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        s => parse_real(s)?,
    };
    Ok(ExactScalar::complex(parse_real(re_text)?, im))
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational { re, im } if *im == 0 => write!(f, "{re}"),
            ExactScalar::Rational { re, im } if *re == 0 => write!(f, "{im}i"),
            ExactScalar::Rational { re, im } => {
                if *im < 0 {
                    write!(f, "{re}{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
            ExactScalar::Float(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExactScalar::Rational { re, im } if *im == 0 => s.serialize_str(&re.to_string()),
            ExactScalar::Rational { re, im } => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("re", &re.to_string())?;
                map.serialize_entry("im", &im.to_string())?;
                map.end()
            }
            ExactScalar::Float(c) => {
                let digits = (f64::from(c.prec()) * std::f64::consts::LOG10_2) as usize + 2;
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("re", &float_to_decimal(&c.re, digits))?;
                map.serialize_entry("im", &float_to_decimal(&c.im, digits))?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Parts { re: PartRepr, im: PartRepr },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PartRepr {
    Text(String),
    Int(i64),
}

impl PartRepr {
    fn into_rational(self) -> Result<Rational> {
        match self {
            PartRepr::Text(s) => parse_real(&s),
            PartRepr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Text(s) => parse_scalar(&s).map_err(de::Error::custom),
            ScalarRepr::Int(n) => Ok(ExactScalar::int(n)),
            ScalarRepr::Parts { re, im } => Ok(ExactScalar::complex(
                re.into_rational().map_err(de::Error::custom)?,
                im.into_rational().map_err(de::Error::custom)?,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fractions_exactly() {
        assert_eq!(parse_scalar("27/2").unwrap(), ExactScalar::ratio(27, 2));
        assert_eq!(parse_scalar("-1/3").unwrap(), ExactScalar::ratio(-1, 3));
        assert_eq!(parse_scalar("7").unwrap(), ExactScalar::int(7));
    }

    #[test]
    fn parses_complex_forms() {
        let z = parse_scalar("1.5+2i").unwrap();
        assert_eq!(z, ExactScalar::complex(Rational::from((3, 2)), Rational::from(2)));
        let z = parse_scalar("13.5+6.142857i").unwrap();
        assert_eq!(
            z,
            ExactScalar::complex(Rational::from((27, 2)), Rational::from((6_142_857, 1_000_000)))
        );
        assert_eq!(
            parse_scalar("-i").unwrap(),
            ExactScalar::complex(Rational::new(), Rational::from(-1))
        );
        assert_eq!(
            parse_scalar("27/2+43/7i").unwrap(),
            ExactScalar::complex(Rational::from((27, 2)), Rational::from((43, 7)))
        );
        assert_eq!(
            parse_scalar("1e-2-2.5e1i").unwrap(),
            ExactScalar::complex(Rational::from((1, 100)), Rational::from(-25))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("1/0x").is_err());
        assert!(parse_scalar("1..2").is_err());
    }

    #[test]
    fn json_forms() {
        let s: ExactScalar = serde_json::from_str("\"-1/3\"").unwrap();
        assert_eq!(s, ExactScalar::ratio(-1, 3));
        let s: ExactScalar = serde_json::from_str(r#"{"re": "0.25", "im": "-1.5"}"#).unwrap();
        assert_eq!(s, ExactScalar::complex(Rational::from((1, 4)), Rational::from((-3, 2))));
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"re":"1/4","im":"-3/2"}"#);
    }

    proptest! {
        #[test]
        fn rational_conversion_is_correctly_rounded(p in -10_000i64..10_000, q in 1i64..10_000, words in 1u32..8) {
            let prec = 64 * words;
            let exact = Rational::from((p, q));
            let c = ExactScalar::real(exact.clone()).to_complex(prec);
            let back = c.re.to_rational().unwrap();
            let err = Rational::from(&back - &exact).abs();
            let bound = Rational::from(exact.abs_ref()) >> (prec - 1);
            prop_assert!(err <= bound);
        }
    }

}
