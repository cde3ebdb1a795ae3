//! Points of the 1- and 2-torus and the max-of-circle-distances metric.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angle::raw_distance_to_f64;
use crate::{Error, FixedAngle, Real, Result};

/// Largest torus dimension used anywhere in the crate.
pub const MAX_DIM: usize = 2;

/// A point of `T^k`, `k in {1, 2}`. Coordinates are fixed-point and therefore in
/// `[0, 1)` by construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    dim: u8,
    coords: [FixedAngle; MAX_DIM],
}

impl TorusPoint {
    pub fn circle(x: FixedAngle) -> Self {
        Self {
            dim: 1,
            coords: [x, FixedAngle::ZERO],
        }
    }

    pub fn plane(x: FixedAngle, y: FixedAngle) -> Self {
        Self {
            dim: 2,
            coords: [x, y],
        }
    }

    pub fn from_coords(coords: &[FixedAngle]) -> Result<Self> {
        match *coords {
            [x] => Ok(Self::circle(x)),
            [x, y] => Ok(Self::plane(x, y)),
            _ => Err(Error::invalid(
                "point",
                format!("torus dimension must be 1 or 2, got {}", coords.len()),
            )),
        }
    }

    /// Convenience constructor from reals taken mod 1.
    pub fn from_f64s(coords: &[f64]) -> Result<Self> {
        let angles: Vec<FixedAngle> = coords.iter().map(|&v| FixedAngle::from_f64(v)).collect();
        Self::from_coords(&angles)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[FixedAngle] {
        &self.coords[..self.dim as usize]
    }

    pub fn coord(&self, i: usize) -> FixedAngle {
        self.coords()[i]
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [FixedAngle] {
        &mut self.coords[..self.dim as usize]
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coords().iter().map(|c| c.to_f64()).collect()
    }

    /// Coordinatewise translation.
    pub fn translate(&self, by: &[FixedAngle]) -> Result<Self> {
        check_dim(self.dim(), by.len())?;
        let mut out = *self;
        for (c, b) in out.coords_mut().iter_mut().zip(by) {
            *c += *b;
        }
        Ok(out)
    }

    /// Projection onto the first coordinate.
    pub fn first(&self) -> Self {
        Self::circle(self.coords[0])
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_f64s()).finish()
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<FixedAngle>::deserialize(deserializer)?;
        Self::from_coords(&coords).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Max over coordinates of the circle distance, in raw `2^-128` units.
pub fn torus_dist_raw(x: &TorusPoint, y: &TorusPoint) -> Result<u128> {
    check_dim(x.dim(), y.dim())?;
    Ok(dist_raw(x, y))
}

#[inline]
pub(crate) fn dist_raw(x: &TorusPoint, y: &TorusPoint) -> u128 {
    debug_assert_eq!(x.dim, y.dim);
    let mut d = x.coords[0].circle_dist_raw(y.coords[0]);
    if x.dim == 2 {
        d = d.max(x.coords[1].circle_dist_raw(y.coords[1]));
    }
    d
}

/// `rho(x, y) = max_i min(|x_i - y_i|, 1 - |x_i - y_i|)`.
pub fn torus_dist<F: Real>(x: &TorusPoint, y: &TorusPoint) -> Result<F> {
    torus_dist_raw(x, y).map(|r| F::of(raw_distance_to_f64(r)))
}
