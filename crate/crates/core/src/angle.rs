//! 128-bit wrapping fixed-point angles on the circle `R/Z`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Real};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;
const TWO_POW_NEG_53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// A point of the circle stored as `raw / 2^128`.
///
/// Addition, negation and integer multiples wrap modulo `2^128`, i.e. modulo 1,
/// so `n * alpha` is exact in the ring `Z / 2^128` for every integer `n`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedAngle(u128);

impl FixedAngle {
    pub const ZERO: Self = Self(0);
    pub const HALF: Self = Self(1 << 127);

    /// `(sqrt(5) - 1) / 2`, rounded down.
    pub const GOLDEN: Self = Self(0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c834);
    /// `sqrt(2) - 1`, rounded down.
    pub const SQRT2_MINUS_ONE: Self = Self(0x6a09_e667_f3bc_c908_b2fb_1366_ea95_7d3e);
    /// `sum_{m=1}^{6} 10^{-m!}`, rounded down. Terms with `m >= 5` are below one unit.
    pub const LIOUVILLE: Self = Self(0x1c29_0689_86fc_dee3_4fc7_466d_12a6_509e);

    pub const fn from_raw(raw: u128) -> Self {
        Self(raw)
    }

    pub const fn raw(self) -> u128 {
        self.0
    }

    /// The angle `v mod 1`. Exact for every `f64` in `[2^-75, 1)`.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "angle must be finite, got {v}");
        let frac = v - v.floor();
        if frac >= 1.0 {
            return Self::ZERO;
        }
        Self((frac * TWO_POW_128) as u128)
    }

    pub fn from_real<F: Real>(v: F) -> Self {
        Self::from_f64(v.as_f64())
    }

    /// `num / den mod 1`, rounded down.
    pub fn from_ratio(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let r = num.rem_euclid(den as i64) as u128;
        let den = den as u128;
        // floor(r * 2^128 / den) via two 64-bit long-division steps
        let hi = (r << 64) / den;
        let rem = (r << 64) % den;
        let lo = (rem << 64) / den;
        Self((hi << 64) | lo)
    }

    /// Value in `[0, 1)`, truncated to 53 bits so it never rounds up to 1.
    pub fn to_f64(self) -> f64 {
        ((self.0 >> 75) as f64) * TWO_POW_NEG_53
    }

    pub fn to_real<F: Real>(self) -> F {
        F::of(self.to_f64())
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// `n * self mod 1`, exact.
    pub fn mul_int(self, n: i128) -> Self {
        Self(self.0.wrapping_mul(n as u128))
    }

    /// Raw circle distance to zero, `min(raw, 2^128 - raw) <= 2^127`.
    pub fn norm_raw(self) -> u128 {
        self.0.min(self.0.wrapping_neg())
    }

    /// `||self||`, the distance to the nearest integer.
    pub fn norm(self) -> f64 {
        raw_distance_to_f64(self.norm_raw())
    }

    /// Circle distance `min(|a - b|, 1 - |a - b|)` in raw units.
    pub fn circle_dist_raw(self, other: Self) -> u128 {
        (self - other).norm_raw()
    }

    /// `(cos 2 pi a, sin 2 pi a)`, reducing the angle to `[-1/2, 1/2)` first.
    pub fn sin_cos_2pi<F: Real>(self) -> (F, F) {
        let t = F::of(self.to_signed_f64()) * F::TAU();
        let (s, c) = t.sin_cos();
        (s, c)
    }

    pub fn cos_2pi<F: Real>(self) -> F {
        self.sin_cos_2pi::<F>().1
    }

    pub fn to_hex(self) -> String {
        format!("0x{:032x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, Error> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or_else(|| Error::Parse(format!("angle `{s}` lacks 0x prefix")))?;
        if digits.is_empty() || digits.len() > 32 {
            return Err(Error::Parse(format!("angle `{s}` must have 1..=32 hex digits")));
        }
        u128::from_str_radix(digits, 16)
            .map(Self)
            .map_err(|e| Error::Parse(format!("angle `{s}`: {e}")))
    }
}

/// Converts a raw circle distance (at most `2^127`) to a real number.
pub fn raw_distance_to_f64(raw: u128) -> f64 {
    raw as f64 / TWO_POW_128
}

impl fmt::Debug for FixedAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FixedAngle({:.17} = {})", self.to_f64(), self.to_hex())
    }
}

impl fmt::Display for FixedAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17}", self.to_f64())
    }
}

/// Accepts `0x`-prefixed raw hex, the names `golden`, `sqrt2-1`, `liouville`,
/// a ratio `p/q`, or a decimal number.
impl FromStr for FixedAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "golden" => return Ok(Self::GOLDEN),
            "sqrt2-1" => return Ok(Self::SQRT2_MINUS_ONE),
            "liouville" => return Ok(Self::LIOUVILLE),
            _ => {}
        }
        if s.starts_with("0x") || s.starts_with("0X") {
            return Self::from_hex(s);
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad ratio `{s}`")))?;
            let q: u64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad ratio `{s}`")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Self::from_ratio(p, q));
        }
        let v: f64 = s.parse().map_err(|_| Error::Parse(format!("bad angle `{s}`")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("angle `{s}` is not finite")));
        }
        Ok(Self::from_f64(v))
    }
}

impl Serialize for FixedAngle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FixedAngle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for FixedAngle {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for FixedAngle {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for FixedAngle {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for FixedAngle {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for FixedAngle {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.wrapping_neg())
    }
}

/// Strict upper bound `d < delta` evaluated exactly on raw distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrictBound(u128);

impl StrictBound {
    /// Every circle distance is at most `1/2`, so `delta > 1/2` admits everything.
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0, "resolution must be positive, got {delta}");
        if delta > 0.5 {
            return Self(u128::MAX);
        }
        // raw < delta * 2^128  <=>  raw < ceil(delta * 2^128)
        Self((delta * TWO_POW_128).ceil() as u128)
    }

    pub fn admits(self, raw: u128) -> bool {
        raw < self.0
    }
}
