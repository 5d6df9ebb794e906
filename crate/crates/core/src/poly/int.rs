//! Arbitrary-precision integers with an inline fast path.
//!
//! Nearly every coefficient met in practice fits in an `i64`; the big
//! representation is only used after an overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub fn zero() -> Self {
        Int::Small(0)
    }

    pub fn one() -> Self {
        Int::Small(1)
    }

    fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    /// `2^k`.
    pub fn pow2(k: u32) -> Int {
        if k < 63 {
            Int::Small(1i64 << k)
        } else {
            Int::from_big(BigInt::one() << k as usize)
        }
    }

    /// Exact quotient if `d` divides `self`.
    pub fn checked_div_exact(&self, d: &Int) -> Option<Int> {
        if d.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, d) {
            match a.checked_rem(*b) {
                Some(0) => {
                    if let Some(q) = a.checked_div(*b) {
                        return Some(Int::Small(q));
                    }
                }
                Some(_) => return None,
                None => {}
            }
        }
        let (q, r) = self.to_big().div_rem(&d.to_big());
        if r.is_zero() {
            Some(Int::from_big(q))
        } else {
            None
        }
    }

    pub fn mul_small(&self, k: i64) -> Int {
        if let Int::Small(a) = self {
            if let Some(p) = a.checked_mul(k) {
                return Int::Small(p);
            }
        }
        Int::from_big(self.to_big() * BigInt::from(k))
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            // canonical form: a Big never holds an i64-representable value
            (Int::Big(a), Int::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl std::hash::Hash for Int {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Int::Big(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Int> for &'a Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Int> for &'a Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a Int> for &'a Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_mul(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(a) => match a.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*a)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                *self = Int::Small(s);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                *self = Int::Small(s);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<i64>() {
            Ok(v) => Ok(Int::Small(v)),
            Err(_) => Ok(Int::from_big(s.parse::<BigInt>()?)),
        }
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::Small(0)
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        &self + &rhs
    }
}
