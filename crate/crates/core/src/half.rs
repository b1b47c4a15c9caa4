use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::scalars::{Rational, Scalar};

/// A half-integer stored as twice its value.
///
/// Conformal weights, degrees and mode indices all live in `Z/2`; keeping
/// them doubled makes every index integral.
///
/// Serialized as its display string, `"3"` or `"-1/2"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const ONE: Half = Half(2);

    pub const fn from_int(n: i64) -> Half {
        Half(2 * n)
    }

    pub const fn from_doubled(twice: i64) -> Half {
        Half(twice)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    /// Smallest integer not below the value.
    pub fn ceil(self) -> i64 {
        -(-self.0).div_euclid(2)
    }

    /// Fractional part: `false` for integers, `true` for odd halves.
    pub fn is_half_odd(self) -> bool {
        !self.is_integer()
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.0.into(), 2.into())
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::from_ratio(self.0, 2)
    }

    /// Whether `self - other` is an integer.
    pub fn congruent(self, other: Half) -> bool {
        (self.0 - other.0) % 2 == 0
    }
}

impl From<i64> for Half {
    fn from(n: i64) -> Half {
        Half::from_int(n)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, o: Half) {
        self.0 += o.0;
    }
}

impl SubAssign for Half {
    fn sub_assign(&mut self, o: Half) {
        self.0 -= o.0;
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Half {
    type Err = Error;

    /// Accepts `3`, `-2` and `-1/2`.
    fn from_str(s: &str) -> Result<Half, Error> {
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a half-integer"),
        };
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<i64>().map(Half::from_int).map_err(|_| bad()),
            Some((num, "2")) => {
                let n: i64 = num.trim().parse().map_err(|_| bad())?;
                if n % 2 == 0 {
                    Err(bad())
                } else {
                    Ok(Half(n))
                }
            }
            Some(_) => Err(bad()),
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Half {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Half, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_as_text() {
        let h = Half::from_doubled(-3);
        assert_eq!(serde_json::to_string(&h).unwrap(), "\"-3/2\"");
        assert_eq!(serde_json::from_str::<Half>("\"-3/2\"").unwrap(), h);
        assert_eq!(serde_json::to_string(&Half::from_int(4)).unwrap(), "\"4\"");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Half::from_doubled(3).floor(), 1);
        assert_eq!(Half::from_doubled(3).ceil(), 2);
        assert_eq!(Half::from_doubled(-3).floor(), -2);
        assert_eq!(Half::from_doubled(-3).ceil(), -1);
        assert_eq!(Half::from_int(-4).floor(), -4);
        assert_eq!(Half::from_int(-4).ceil(), -4);
    }

    #[test]
    fn parse_roundtrip() {
        for d in -7..7 {
            let h = Half::from_doubled(d);
            assert_eq!(h.to_string().parse::<Half>().unwrap(), h);
        }
        assert!("2/2".parse::<Half>().is_err());
        assert!("1/3".parse::<Half>().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Half::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(Half::from_int(3).to_string(), "3");
    }
}
