use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::is_square_u64;
use crate::error::{Error, Result};

/// A positive nonsquare discriminant `D = 0, 1 (mod 4)` small enough for
/// machine arithmetic (class enumeration, divisor sums).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if Self::is_valid(d) {
            Ok(Discriminant(d))
        } else {
            Err(Error::InvalidDiscriminant(d.to_string()))
        }
    }

    pub fn is_valid(d: i64) -> bool {
        d > 0 && matches!(d % 4, 0 | 1) && !is_square_u64(d as u64)
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// Fundamental: `D = 1 (mod 4)` squarefree, or `D = 4m` with
    /// `m = 2, 3 (mod 4)` squarefree.
    pub fn is_fundamental(self) -> bool {
        let d = self.0;
        if d % 4 == 1 {
            squarefree(d as u64)
        } else {
            let m = d / 4;
            matches!(m % 4, 2 | 3) && squarefree(m as u64)
        }
    }
}

fn squarefree(n: u64) -> bool {
    let f = super::factorize_u64(n).expect("positive");
    f.pairs().iter().all(|&(_, e)| e == 1)
}

impl TryFrom<i64> for Discriminant {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Discriminant::new(d)
    }
}

impl From<Discriminant> for i64 {
    fn from(d: Discriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
