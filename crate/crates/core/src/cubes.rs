//! Dynamical parallelepipeds `(T^{n.eps} x : eps in {0,1}^d)` and the face group.
//!
//! Coordinates are indexed by `eps` read as a binary number, bit `j - 1`
//! holding `eps_j`, so for `d = 2` the order is `(x, T^m x, T^n x, T^{m+n} x)`.
//! Every face transformation is a power of the single map `T` acting on a
//! subset of coordinates, so the face group is parametrized by `Z^d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::raw_distance_to_f64;
use crate::torus::{check_dim, dist_raw};
use crate::{Error, Real, Result, SystemSpec, TorusPoint};

/// Largest cube dimension.
pub const MAX_CUBE_DIM: usize = 4;

/// `(n_1, ..., n_d)`, acting by `T^{n.eps}` on coordinate `eps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceElement {
    pub nvec: Vec<i64>,
}

impl FaceElement {
    pub fn new(nvec: Vec<i64>) -> Self {
        Self { nvec }
    }

    pub fn dim(&self) -> usize {
        self.nvec.len()
    }

    /// `n . eps` for the coordinate index `eps`.
    pub fn exponent(&self, eps: usize) -> i128 {
        self.nvec
            .iter()
            .enumerate()
            .filter(|(j, _)| eps >> j & 1 == 1)
            .map(|(_, &n)| n as i128)
            .sum()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.nvec.iter().zip(&other.nvec).map(|(a, b)| a + b).collect())
    }
}

/// A point of `X^{[d]}`, `2^d` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubePoint {
    pub d: usize,
    pub coords: Vec<TorusPoint>,
}

impl CubePoint {
    /// The diagonal point `(x, ..., x)`.
    pub fn diagonal(d: usize, x: TorusPoint) -> Result<Self> {
        check_cube_dim(d)?;
        Ok(Self {
            d,
            coords: vec![x; 1 << d],
        })
    }

    /// CSV rows `eps, coordinate values...`, `eps` written as a bit string `eps_1 .. eps_d`.
    pub fn csv_rows(&self) -> impl Iterator<Item = Vec<String>> + '_ {
        self.coords.iter().enumerate().map(move |(eps, p)| {
            let label: String = (0..self.d).map(|j| if eps >> j & 1 == 1 { '1' } else { '0' }).collect();
            std::iter::once(label)
                .chain(p.to_f64s().iter().map(|v| format!("{v:.17}")))
                .collect()
        })
    }
}

fn check_cube_dim(d: usize) -> Result<()> {
    if d > MAX_CUBE_DIM {
        return Err(Error::invalid("d", format!("cube dimension is capped at {MAX_CUBE_DIM}, got {d}")));
    }
    Ok(())
}

fn check_face<F: Real>(sys: &SystemSpec<F>, f: &FaceElement) -> Result<()> {
    let reach: i128 = f.nvec.iter().map(|n| n.unsigned_abs() as i128).sum();
    sys.check_horizon(reach)
}

/// `(T^{n.eps} x)_eps`.
pub fn cube_point<F: Real>(sys: &SystemSpec<F>, x: &TorusPoint, f: &FaceElement) -> Result<CubePoint> {
    check_cube_dim(f.dim())?;
    check_dim(sys.dim(), x.dim())?;
    check_face(sys, f)?;
    Ok(CubePoint {
        d: f.dim(),
        coords: (0..1usize << f.dim()).map(|eps| sys.jump(x, f.exponent(eps))).collect(),
    })
}

/// `coords[eps] -> T^{f.eps} coords[eps]`; the `eps = 0` coordinate never moves.
pub fn apply_face<F: Real>(sys: &SystemSpec<F>, cp: &CubePoint, f: &FaceElement) -> Result<CubePoint> {
    check_dim(cp.d, f.dim())?;
    check_face(sys, f)?;
    if let Some(p) = cp.coords.first() {
        check_dim(sys.dim(), p.dim())?;
    }
    Ok(CubePoint {
        d: cp.d,
        coords: cp
            .coords
            .iter()
            .enumerate()
            .map(|(eps, p)| sys.jump(p, f.exponent(eps)))
            .collect(),
    })
}

/// Applies the `power`-th power of the face generator `T^{[d]}_j` (`1 <= j <= d`)
/// using the recursive definition `T^{[d]}_d = id^{[d-1]} x T^{[d-1]}` and
/// `T^{[d]}_j = T^{[d-1]}_j x T^{[d-1]}_j` for `j < d`, where `T^{[d-1]}` is `T`
/// on every coordinate.
pub fn apply_generator<F: Real>(sys: &SystemSpec<F>, cp: &CubePoint, j: usize, power: i64) -> Result<CubePoint> {
    if !(1..=cp.d).contains(&j) {
        return Err(Error::invalid("j", format!("generator index must be in 1..={}, got {j}", cp.d)));
    }
    sys.check_horizon(power as i128)?;
    let mut coords = cp.coords.clone();
    generator_in_place(sys, &mut coords, j, power as i128);
    Ok(CubePoint { d: cp.d, coords })
}

fn generator_in_place<F: Real>(sys: &SystemSpec<F>, coords: &mut [TorusPoint], j: usize, power: i128) {
    let d = coords.len().trailing_zeros() as usize;
    let (lower, upper) = coords.split_at_mut(coords.len() / 2);
    if j == d {
        for p in upper.iter_mut() {
            *p = sys.jump(p, power);
        }
    } else {
        generator_in_place(sys, lower, j, power);
        generator_in_place(sys, upper, j, power);
    }
}

/// Best approximation of `(x, y, ..., y)` by a generated parallelepiped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyResidual {
    /// `min_{z, n} max(rho(x, z), max_{eps != 0} rho(y, T^{n.eps} z))`
    pub residual: f64,
    pub z: TorusPoint,
    pub nvec: Vec<i64>,
}

const Z_WAVE: usize = 16;

/// Minimizes over base points `z` of a uniform `z_grid^k` grid and over
/// `n in [-budget, budget]^d`. Exact up to the grid: pruning only skips
/// candidates that cannot improve the current minimum.
pub fn hkm_degeneracy_residual<F: Real>(
    sys: &SystemSpec<F>,
    d: usize,
    x: &TorusPoint,
    y: &TorusPoint,
    budget: u64,
    z_grid: usize,
) -> Result<DegeneracyResidual> {
    if !(2..=3).contains(&d) {
        return Err(Error::invalid("d", format!("must be 2 or 3, got {d}")));
    }
    if z_grid == 0 {
        return Err(Error::invalid("z_grid", "must be positive"));
    }
    check_dim(sys.dim(), x.dim())?;
    check_dim(x.dim(), y.dim())?;
    let budget = i64::try_from(budget).map_err(|_| Error::invalid("budget", "too large"))?;
    sys.check_horizon(d as i128 * budget as i128)?;

    let zs = grid(sys.dim(), z_grid);
    let mut best: Option<(u128, usize, Vec<i64>)> = None;
    for wave in zs.chunks(Z_WAVE).enumerate() {
        let (w, chunk) = wave;
        let bound = best.as_ref().map_or(u128::MAX, |b| b.0);
        let results: Vec<Option<(u128, Vec<i64>)>> = chunk
            .par_iter()
            .map(|z| best_for_base(sys, d, x, y, z, budget, bound))
            .collect();
        for (i, r) in results.into_iter().enumerate() {
            if let Some((key, nvec)) = r {
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, w * Z_WAVE + i, nvec));
                }
            }
        }
    }
    let (key, zi, nvec) = best.expect("grid is nonempty and the first base point always reports");
    Ok(DegeneracyResidual {
        residual: raw_distance_to_f64(key),
        z: zs[zi],
        nvec,
    })
}

/// Minimum for one base point, if it beats `bound`.
fn best_for_base<F: Real>(
    sys: &SystemSpec<F>,
    d: usize,
    x: &TorusPoint,
    y: &TorusPoint,
    z: &TorusPoint,
    budget: i64,
    bound: u128,
) -> Option<(u128, Vec<i64>)> {
    let rx = dist_raw(x, z);
    if rx >= bound {
        return None;
    }
    let reach = d as i64 * budget;
    // dist[m + reach] = rho(y, T^m z)
    let dist: Vec<u128> = (-reach..=reach).map(|m| dist_raw(y, &sys.jump(z, m as i128))).collect();
    let mut search = SubsetSearch {
        dist: &dist,
        reach,
        budget,
        d,
        best: bound,
        best_nvec: None,
        nvec: Vec::with_capacity(d),
    };
    search.descend(&[0], rx);
    search.best_nvec.map(|n| (search.best, n))
}

struct SubsetSearch<'a> {
    dist: &'a [u128],
    reach: i64,
    budget: i64,
    d: usize,
    best: u128,
    best_nvec: Option<Vec<i64>>,
    nvec: Vec<i64>,
}

impl SubsetSearch<'_> {
    /// `sums` holds `n . eps` over every `eps` on the components chosen so far
    /// (including the empty sum); `current` is the running max.
    fn descend(&mut self, sums: &[i64], current: u128) {
        if self.nvec.len() == self.d {
            if current < self.best {
                self.best = current;
                self.best_nvec = Some(self.nvec.clone());
            }
            return;
        }
        let mut next = Vec::with_capacity(sums.len() * 2);
        for n in -self.budget..=self.budget {
            let mut r = current;
            for &s in sums {
                r = r.max(self.dist[(s + n + self.reach) as usize]);
                if r >= self.best {
                    break;
                }
            }
            if r >= self.best {
                continue;
            }
            next.clear();
            next.extend_from_slice(sums);
            next.extend(sums.iter().map(|s| s + n));
            self.nvec.push(n);
            let snapshot = next.clone();
            self.descend(&snapshot, r);
            self.nvec.pop();
        }
    }
}

fn grid(dim: usize, g: usize) -> Vec<TorusPoint> {
    let axis: Vec<crate::FixedAngle> = (0..g)
        .map(|i| crate::FixedAngle::from_ratio(i as i64, g as u64))
        .collect();
    if dim == 1 {
        axis.iter().map(|&a| TorusPoint::circle(a)).collect()
    } else {
        axis.iter()
            .flat_map(|&a| axis.iter().map(move |&b| TorusPoint::plane(a, b)))
            .collect()
    }
}
