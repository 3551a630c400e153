use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring. Elements are always carried as integers; over `F_p` they
/// are kept reduced to `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u32) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(Error::Contract(format!("{p} is not prime")))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            Ring::PrimeField(p) => Some(*p),
            _ => None,
        }
    }

    pub fn reduce(&self, v: BigInt) -> BigInt {
        match self {
            Ring::PrimeField(p) => v.mod_floor(&BigInt::from(*p)),
            _ => v,
        }
    }

    pub fn from_i64(&self, v: i64) -> BigInt {
        self.reduce(BigInt::from(v))
    }

    pub fn is_zero(&self, v: &BigInt) -> bool {
        match self {
            Ring::PrimeField(p) => (v % BigInt::from(*p)).is_zero(),
            _ => v.is_zero(),
        }
    }

    pub fn neg(&self, v: &BigInt) -> BigInt {
        self.reduce(-v)
    }

    pub fn one(&self) -> BigInt {
        BigInt::one()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "z" => Ok(Ring::Integers),
            "q" => Ok(Ring::Rationals),
            _ => {
                let digits = lower
                    .strip_prefix('f')
                    .ok_or_else(|| Error::Contract(format!("unknown ring '{s}'")))?;
                let p: u32 = digits
                    .parse()
                    .map_err(|_| Error::Contract(format!("unknown ring '{s}'")))?;
                Ring::prime_field(p)
            }
        }
    }
}

impl From<Ring> for String {
    fn from(r: Ring) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Ring {
    type Error = Error;
    fn try_from(s: String) -> Result<Ring> {
        s.parse()
    }
}
