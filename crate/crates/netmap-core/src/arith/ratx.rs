//! Extended rationals `p/q ∈ ℚ ∪ {∞}` and slopes (which may also be the
//! absorbing symbol `⊙` for inessential/peripheral curve classes).

use crate::{int, Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A reduced extended rational: `num/den` with `gcd(|num|, den) = 1` and
/// `den ≥ 0`; `den = 0` only for the single value `∞ = 1/0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtRational {
    num: Int,
    den: Int,
}

/// Normal form of the ratio `p : q`, with `(±1, 0) ↦ ∞`.
///
/// Errors on `(0, 0)`, which names no slope.
pub fn reduce_slope(p: impl Into<Int>, q: impl Into<Int>) -> Result<ExtRational> {
    let (p, q) = (p.into(), q.into());
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = p.gcd(&q);
    let (mut p, mut q) = (p / &g, q / g);
    if q.is_negative() || (q.is_zero() && p.is_negative()) {
        p = -p;
        q = -q;
    }
    Ok(ExtRational { num: p, den: q })
}

impl ExtRational {
    pub fn infinity() -> Self {
        ExtRational {
            num: int(1),
            den: int(0),
        }
    }

    pub fn zero() -> Self {
        ExtRational {
            num: int(0),
            den: int(1),
        }
    }

    pub fn from_int(v: impl Into<Int>) -> Self {
        ExtRational {
            num: v.into(),
            den: int(1),
        }
    }

    pub fn from_rat(r: &Rat) -> Self {
        reduce_slope(r.numer().clone(), r.denom().clone()).expect("Ratio is never 0/0")
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn numer(&self) -> &Int {
        &self.num
    }

    pub fn denom(&self) -> &Int {
        &self.den
    }

    /// Finite value as a [`Rat`]; `None` for `∞`.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_infinity() {
            None
        } else {
            Some(Rat::new(self.num.clone(), self.den.clone()))
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "∞")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total order with `∞` greater than every rational; used for deterministic
/// table output and as the linear order underlying circular arithmetic.
impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            // p1/q1 vs p2/q2 with q1, q2 > 0
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "∞" || s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(ExtRational::infinity());
        }
        let parse_int = |t: &str| -> Result<Int> {
            Int::from_str(t.trim()).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("expected an integer, found {t:?}"),
            })
        };
        match s.split_once('/') {
            Some((p, q)) => reduce_slope(parse_int(p)?, parse_int(q)?),
            None => Ok(ExtRational::from_int(parse_int(s)?)),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The value of the slope function: a slope, or the absorbing symbol `⊙`
/// covering the union of inessential and peripheral classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Rational(ExtRational),
    Absorbed,
}

impl Slope {
    pub fn as_rational(&self) -> Option<&ExtRational> {
        match self {
            Slope::Rational(r) => Some(r),
            Slope::Absorbed => None,
        }
    }

    pub fn is_absorbed(&self) -> bool {
        matches!(self, Slope::Absorbed)
    }
}

impl From<ExtRational> for Slope {
    fn from(r: ExtRational) -> Self {
        Slope::Rational(r)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational(r) => r.fmt(f),
            Slope::Absorbed => write!(f, "⊙"),
        }
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "⊙" || t.eq_ignore_ascii_case("absorbed") {
            Ok(Slope::Absorbed)
        } else {
            Ok(Slope::Rational(t.parse()?))
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_normalizes_sign_and_gcd() {
        assert_eq!(reduce_slope(2, -4).unwrap().to_string(), "-1/2");
        assert_eq!(reduce_slope(1, 0).unwrap().to_string(), "∞");
        assert_eq!(reduce_slope(-1, 0).unwrap().to_string(), "∞");
        assert_eq!(reduce_slope(0, 5).unwrap().to_string(), "0/1");
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(reduce_slope(0, 0), Err(Error::ZeroVector)));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-1/2", "∞", "0/1", "7/3"] {
            let r: ExtRational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("3".parse::<ExtRational>().unwrap().to_string(), "3/1");
        assert_eq!(
            "inf".parse::<ExtRational>().unwrap(),
            ExtRational::infinity()
        );
        assert_eq!("⊙".parse::<Slope>().unwrap(), Slope::Absorbed);
    }

    proptest! {
        #[test]
        fn reduce_is_scale_invariant(p in -40i64..40, q in -40i64..40, k in 1i64..20) {
            prop_assume!(p != 0 || q != 0);
            for k in [k, -k] {
                prop_assert_eq!(
                    reduce_slope(p, q).unwrap(),
                    reduce_slope(k * p, k * q).unwrap()
                );
            }
        }

        #[test]
        fn order_matches_rational_order(a in -30i64..30, b in 1i64..20, c in -30i64..30, d in 1i64..20) {
            let x = reduce_slope(a, b).unwrap();
            let y = reduce_slope(c, d).unwrap();
            prop_assert_eq!(x.cmp(&y), rat(a, b).cmp(&rat(c, d)));
            prop_assert!(x < ExtRational::infinity());
        }
    }

    use crate::rat;
}
