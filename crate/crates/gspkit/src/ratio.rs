//! Exact cost arithmetic: arbitrary-precision rationals plus an absorbing
//! infinity sentinel. No floating point is used anywhere in cost computations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_u64(v: u64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` for integer (possibly negative) exponents.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        base.pow(-exp as i32).recip()
    }
}

/// The unique integer `e` with `base^e <= value < base^(e+1)` (base > 1, value > 0).
pub fn log_floor(base: &Rat, value: &Rat) -> i64 {
    assert!(base > &Rat::one(), "log base must exceed 1");
    assert!(value.is_positive(), "log argument must be positive");
    let mut e: i64 = 0;
    let mut cur = Rat::one();
    if value >= &Rat::one() {
        loop {
            let next = &cur * base;
            if &next > value {
                return e;
            }
            cur = next;
            e += 1;
        }
    } else {
        loop {
            cur /= base;
            e -= 1;
            if &cur <= value {
                return e;
            }
        }
    }
}

/// Floor of a nonnegative rational as u64.
pub fn rat_floor_u64(v: &Rat) -> u64 {
    assert!(!v.is_negative());
    v.floor().to_integer().to_u64().expect("floor fits u64")
}

/// Ceiling of a nonnegative rational as u64.
pub fn rat_ceil_u64(v: &Rat) -> u64 {
    assert!(!v.is_negative());
    v.ceil().to_integer().to_u64().expect("ceil fits u64")
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

pub fn format_rat(v: &Rat) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// An exact cost value: a nonnegative rational or infinity. Addition absorbs
/// infinity; infinity compares greater than every finite value.
#[derive(Clone, PartialEq, Eq)]
pub enum CostVal {
    Finite(Rat),
    Infinite,
}

impl CostVal {
    pub fn zero() -> Self {
        CostVal::Finite(Rat::zero())
    }

    pub fn from_u64(v: u64) -> Self {
        CostVal::Finite(rat_u64(v))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CostVal::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostVal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            CostVal::Finite(r) => Some(r),
            CostVal::Infinite => None,
        }
    }

    pub fn expect_finite(&self) -> &Rat {
        self.as_finite().expect("cost unexpectedly infinite")
    }

    /// Multiply by a nonnegative rational. `0 * inf` is defined as `0`,
    /// matching the convention that an unselected infinite-cost option
    /// contributes nothing.
    pub fn scale(&self, k: &Rat) -> CostVal {
        assert!(!k.is_negative());
        match self {
            CostVal::Finite(r) => CostVal::Finite(r * k),
            CostVal::Infinite => {
                if k.is_zero() {
                    CostVal::zero()
                } else {
                    CostVal::Infinite
                }
            }
        }
    }

    /// Saturating subtraction of a finite value; infinity stays infinite.
    pub fn sub_clamped(&self, other: &Rat) -> CostVal {
        match self {
            CostVal::Finite(r) => {
                let d = r - other;
                if d.is_negative() {
                    CostVal::zero()
                } else {
                    CostVal::Finite(d)
                }
            }
            CostVal::Infinite => CostVal::Infinite,
        }
    }
}

impl Add for CostVal {
    type Output = CostVal;
    fn add(self, rhs: CostVal) -> CostVal {
        match (self, rhs) {
            (CostVal::Finite(a), CostVal::Finite(b)) => CostVal::Finite(a + b),
            _ => CostVal::Infinite,
        }
    }
}

impl<'a> Add<&'a CostVal> for CostVal {
    type Output = CostVal;
    fn add(self, rhs: &'a CostVal) -> CostVal {
        match (self, rhs) {
            (CostVal::Finite(a), CostVal::Finite(b)) => CostVal::Finite(a + b),
            _ => CostVal::Infinite,
        }
    }
}

impl AddAssign for CostVal {
    fn add_assign(&mut self, rhs: CostVal) {
        let lhs = std::mem::replace(self, CostVal::Infinite);
        *self = lhs + rhs;
    }
}

impl PartialOrd for CostVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostVal::Finite(a), CostVal::Finite(b)) => a.cmp(b),
            (CostVal::Finite(_), CostVal::Infinite) => Ordering::Less,
            (CostVal::Infinite, CostVal::Finite(_)) => Ordering::Greater,
            (CostVal::Infinite, CostVal::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Debug for CostVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostVal::Finite(r) => write!(f, "{}", format_rat(r)),
            CostVal::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Display for CostVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for CostVal {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            CostVal::Infinite => ser.serialize_str("inf"),
            CostVal::Finite(r) => {
                if r.is_integer() {
                    if let Some(i) = r.to_integer().to_i64() {
                        return ser.serialize_i64(i);
                    }
                }
                ser.serialize_str(&format_rat(r))
            }
        }
    }
}

impl<'de> Deserialize<'de> for CostVal {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(i) => Ok(CostVal::Finite(rat_int(i))),
            Raw::Str(s) => {
                if s.trim() == "inf" {
                    Ok(CostVal::Infinite)
                } else {
                    parse_rat(&s)
                        .map(CostVal::Finite)
                        .ok_or_else(|| D::Error::custom(format!("bad rational: {s}")))
                }
            }
        }
    }
}

/// Serde adapter for plain `Rat` fields encoded as integer or "num/den".
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        if v.is_integer() {
            if let Some(i) = v.to_integer().to_i64() {
                return ser.serialize_i64(i);
            }
        }
        ser.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(i) => Ok(rat_int(i)),
            Raw::Str(s) => parse_rat(&s).ok_or_else(|| D::Error::custom(format!("bad rational: {s}"))),
        }
    }
}
