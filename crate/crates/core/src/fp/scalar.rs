use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_PRIME: u32 = 97;

/// A certified prime `p <= 97`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    pub const TWO: Prime = Prime(2);

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.0) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.0 - b as u32) % self.0) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.0) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        ((self.0 - a as u32) % self.0) as u8
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u8) -> Option<u8> {
        if a as u32 % self.0 == 0 {
            return None;
        }
        // a^(p-2) by square-and-multiply
        let (mut base, mut exp, mut acc) = (a as u32 % self.0, self.0 - 2, 1u32);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        Some(acc as u8)
    }

    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.0 as i64) as u8
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u8 {
        let p = self.0;
        (1..p)
            .find(|&g| {
                let mut x = 1u32;
                (1..p - 1).all(|_| {
                    x = x * g % p;
                    x != 1
                })
            })
            .unwrap_or(1) as u8
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue in F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u8,
    p: Prime,
}

impl FpScalar {
    pub fn new(value: i64, p: Prime) -> Self {
        FpScalar {
            value: p.reduce(value),
            p,
        }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn inv(self) -> Option<Self> {
        self.p.inv(self.value).map(|value| FpScalar { value, p: self.p })
    }
}

impl Add for FpScalar {
    type Output = FpScalar;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;

    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;

    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;

    fn neg(self) -> Self {
        FpScalar {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
