use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SpinError;

/// A non-negative half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: u32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(j: u32) -> Self {
        HalfInt { twice: 2 * j }
    }

    /// `2j`.
    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Multiplet size `2j + 1`.
    pub const fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    /// `m = -j + k` for basis index `k`.
    pub fn m_of_index(self, k: usize) -> f64 {
        k as f64 - self.value()
    }

    /// `2m` for basis index `k`, exact.
    pub fn twice_m_of_index(self, k: usize) -> i64 {
        2 * k as i64 - self.twice as i64
    }

    /// Basis index of the state with `2m = twice_m`, if it lies in the multiplet.
    pub fn index_of_twice_m(self, twice_m: i64) -> Option<usize> {
        let shifted = twice_m + self.twice as i64;
        if shifted < 0 || shifted % 2 != 0 || shifted / 2 > self.twice as i64 {
            None
        } else {
            Some((shifted / 2) as usize)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Accepts `"3"`, `"13/2"`, `"6.5"`.
impl FromStr for HalfInt {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SpinError::Usage(format!("malformed half-integer {s:?}: expected N, N/2 or N.5"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<u32>() {
            return Ok(HalfInt::from_int(n));
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if !(0.0..=u32::MAX as f64).contains(&twice) || twice.fract() != 0.0 {
            return Err(bad());
        }
        Ok(HalfInt::from_twice(twice as u32))
    }
}

impl TryFrom<String> for HalfInt {
    type Error = SpinError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}
