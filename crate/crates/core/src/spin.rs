//! Half-integer angular momentum labels, stored as twice their value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Total angular momentum `j`, held as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    /// Integer spin `j`.
    pub const fn integer(j: u32) -> Self {
        Self { twice_j: 2 * j }
    }

    pub const fn twice_j(self) -> u32 {
        self.twice_j
    }

    /// Matrix dimension `2j + 1`.
    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn j<T: Real>(self) -> T {
        T::lit(self.twice_j as f64 / 2.0)
    }

    /// `J = j + 1/2`.
    pub fn big_j<T: Real>(self) -> T {
        T::lit((self.twice_j as f64 + 1.0) / 2.0)
    }

    /// `(-1)^{2j}`.
    pub fn parity_sign(self) -> i32 {
        if self.twice_j % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Magnetic indices in storage order, `m = +j, j-1, …, -j`.
    pub fn indices(self) -> impl DoubleEndedIterator<Item = MagneticIndex> + ExactSizeIterator {
        let tj = self.twice_j as i32;
        (0..self.twice_j as i32 + 1).map(move |k| MagneticIndex::from_twice(tj - 2 * k))
    }

    /// Validate that `m` belongs to this spin.
    pub fn check(self, m: MagneticIndex) -> Result<()> {
        let tj = self.twice_j as i32;
        if m.twice_m.abs() > tj || (tj - m.twice_m).rem_euclid(2) != 0 {
            return Err(Error::Domain(format!("magnetic index {m} is not valid for j = {self}")));
        }
        Ok(())
    }

    /// Storage position of `m` (0 for `m = +j`). Caller must have checked `m`.
    pub fn position(self, m: MagneticIndex) -> usize {
        ((self.twice_j as i32 - m.twice_m) / 2) as usize
    }

    /// Index stored at position `k`.
    pub fn index_at(self, k: usize) -> MagneticIndex {
        MagneticIndex::from_twice(self.twice_j as i32 - 2 * k as i32)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_half(self.twice_j as i64, f)
    }
}

/// Accepts `3/2`, `1.5`, `2`.
impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let twice = parse_half_integer(s)?;
        if twice < 0 {
            return Err(Error::Parse(format!("spin must be non-negative, got '{s}'")));
        }
        u32::try_from(twice).map(Spin::from_twice).map_err(|_| Error::Parse(format!("spin '{s}' out of range")))
    }
}

/// Magnetic quantum number `m`, held as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MagneticIndex {
    twice_m: i32,
}

impl MagneticIndex {
    pub const fn from_twice(twice_m: i32) -> Self {
        Self { twice_m }
    }

    pub const fn twice_m(self) -> i32 {
        self.twice_m
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(self.twice_m as f64 / 2.0)
    }

    /// `μ = m / J`.
    pub fn reduced<T: Real>(self, spin: Spin) -> T {
        self.value::<T>() / spin.big_j::<T>()
    }
}

impl fmt::Display for MagneticIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_half(self.twice_m as i64, f)
    }
}

impl FromStr for MagneticIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let twice = parse_half_integer(s)?;
        i32::try_from(twice)
            .map(MagneticIndex::from_twice)
            .map_err(|_| Error::Parse(format!("index '{s}' out of range")))
    }
}

fn fmt_half(twice: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if twice % 2 == 0 {
        write!(f, "{}", twice / 2)
    } else {
        write!(f, "{twice}/2")
    }
}

/// Parse `p/2`, an integer, or a decimal with fractional part `.0` or `.5`
/// into twice its value.
pub fn parse_half_integer(s: &str) -> Result<i64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not an integer or half-integer"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        return match den.trim() {
            "2" => Ok(num),
            "1" => Ok(2 * num),
            _ => Err(bad()),
        };
    }
    if let Ok(v) = s.parse::<i64>() {
        return Ok(2 * v);
    }
    let (int, frac) = s.split_once('.').ok_or_else(bad)?;
    let neg = int.starts_with('-');
    let int_part: i64 = if int.is_empty() || int == "-" || int == "+" { 0 } else { int.parse().map_err(|_| bad())? };
    let frac = frac.trim_end_matches('0');
    let half = match frac {
        "" => 0,
        "5" => 1,
        _ => return Err(bad()),
    };
    let twice = 2 * int_part.abs() + half;
    Ok(if neg { -twice } else { twice })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!("1/2".parse::<Spin>().unwrap(), Spin::from_twice(1));
        assert_eq!("1.5".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("200".parse::<Spin>().unwrap(), Spin::integer(200));
        assert_eq!("2.0".parse::<Spin>().unwrap(), Spin::integer(2));
        assert_eq!("-0.5".parse::<MagneticIndex>().unwrap(), MagneticIndex::from_twice(-1));
        assert!("-1".parse::<Spin>().is_err());
        assert!("0.3".parse::<Spin>().is_err());
        assert!("1/3".parse::<Spin>().is_err());
    }

    #[test]
    fn index_layout_descends_from_plus_j() {
        let s = Spin::from_twice(3);
        let ms: Vec<i32> = s.indices().map(|m| m.twice_m()).collect();
        assert_eq!(ms, vec![3, 1, -1, -3]);
        for (k, m) in s.indices().enumerate() {
            assert_eq!(s.position(m), k);
            assert_eq!(s.index_at(k), m);
        }
        assert!(s.check(MagneticIndex::from_twice(2)).is_err());
        assert!(s.check(MagneticIndex::from_twice(5)).is_err());
        assert_eq!(s.to_string(), "3/2");
        assert!((s.big_j::<f64>() - 2.0).abs() < 1e-15);
    }
}
