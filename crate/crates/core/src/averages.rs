//! Birkhoff averages, multiple ergodic averages and multiple recurrence
//! frequencies, evaluated along exact fixed-point orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::torus::check_dim;
use crate::{CompensatedSum, Error, FixedAngle, Real, Result, SystemSpec, TorusPoint};

/// Largest number of observables in a multiple average, and largest recurrence depth.
pub const MAX_ORDER: usize = 4;

/// Smallest box volume accepted by [`multiple_recurrence_frequency`].
pub const MIN_BOX_VOLUME: f64 = 0.01;

/// Half-open box `prod [lo_i, hi_i)` inside the unit cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoxBounds", into = "BoxBounds")]
pub struct BoxSet {
    lo: Vec<FixedAngle>,
    /// `None` stands for the right end `1`.
    hi: Vec<Option<FixedAngle>>,
    bounds: BoxBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct BoxBounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl TryFrom<BoxBounds> for BoxSet {
    type Error = Error;
    fn try_from(b: BoxBounds) -> Result<Self> {
        BoxSet::new(&b.lo, &b.hi)
    }
}

impl From<BoxSet> for BoxBounds {
    fn from(b: BoxSet) -> Self {
        b.bounds
    }
}

impl BoxSet {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.is_empty() || lo.len() > crate::torus::MAX_DIM {
            return Err(Error::invalid("box", "dimension must be 1 or 2"));
        }
        for (&l, &h) in lo.iter().zip(hi) {
            if !(0.0..1.0).contains(&l) || !(l < h && h <= 1.0) {
                return Err(Error::invalid("box", format!("need 0 <= lo < hi <= 1, got [{l}, {h})")));
            }
        }
        Ok(Self {
            lo: lo.iter().map(|&l| FixedAngle::from_f64(l)).collect(),
            hi: hi.iter().map(|&h| (h < 1.0).then(|| FixedAngle::from_f64(h))).collect(),
            bounds: BoxBounds {
                lo: lo.to_vec(),
                hi: hi.to_vec(),
            },
        })
    }

    /// The whole torus of the given dimension.
    pub fn full(dim: usize) -> Result<Self> {
        Self::new(&vec![0.0; dim], &vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.bounds.lo.iter().zip(&self.bounds.hi).map(|(l, h)| h - l).product()
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        p.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (lo, hi))| c >= lo && hi.is_none_or(|h| *c < h))
    }
}

/// Bounded test functions on the torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Observable {
    /// `cos(2 pi freq x_coord)`
    Cosine { coord: usize, freq: i64 },
    /// `1_A`
    Indicator { set: BoxSet },
    /// Pointwise product; the empty product is the constant 1.
    Product { factors: Vec<Observable> },
}

impl Observable {
    pub fn one() -> Self {
        Self::Product { factors: vec![] }
    }

    pub fn cosine(coord: usize, freq: i64) -> Self {
        Self::Cosine { coord, freq }
    }

    pub fn indicator(set: BoxSet) -> Self {
        Self::Indicator { set }
    }

    /// Smallest torus dimension the observable can be evaluated on.
    pub fn min_dim(&self) -> usize {
        match self {
            Self::Cosine { coord, .. } => coord + 1,
            Self::Indicator { set } => set.dim(),
            Self::Product { factors } => factors.iter().map(Self::min_dim).max().unwrap_or(0),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        match self {
            Self::Indicator { set } if set.dim() != dim => Err(Error::DimensionMismatch {
                expected: dim,
                got: set.dim(),
            }),
            Self::Product { factors } => factors.iter().try_for_each(|f| f.check(dim)),
            other if other.min_dim() > dim => Err(Error::DimensionMismatch {
                expected: dim,
                got: other.min_dim(),
            }),
            _ => Ok(()),
        }
    }

    pub fn eval<F: Real>(&self, p: &TorusPoint) -> F {
        match self {
            Self::Cosine { coord, freq } => p.coord(*coord).mul_int(*freq as i128).cos_2pi(),
            Self::Indicator { set } => {
                if set.contains(p) {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Self::Product { factors } => factors.iter().fold(F::one(), |acc, f| acc * f.eval::<F>(p)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Checkpoint<F> {
    pub n: u64,
    /// Running sum of the first `n` terms.
    pub sum: F,
    /// `sum / n`
    pub value: F,
}

/// Prefix averages `A_N` at increasing checkpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageSeries<F> {
    pub checkpoints: Vec<Checkpoint<F>>,
    /// `max - min` of the values over the later half of the checkpoints.
    pub oscillation: F,
    pub final_value: F,
}

impl<F: Real> AverageSeries<F> {
    fn from_checkpoints(checkpoints: Vec<Checkpoint<F>>) -> Self {
        let tail = &checkpoints[checkpoints.len() / 2..];
        let max = tail.iter().map(|c| c.value).fold(F::neg_infinity(), F::max);
        let min = tail.iter().map(|c| c.value).fold(F::infinity(), F::min);
        let final_value = checkpoints.last().map_or(F::zero(), |c| c.value);
        Self {
            oscillation: max - min,
            final_value,
            checkpoints,
        }
    }

    pub fn values(&self) -> Vec<F> {
        self.checkpoints.iter().map(|c| c.value).collect()
    }
}

pub(crate) fn validate_checkpoints(n_list: &[u64]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::invalid("n_list", "at least one checkpoint is required"));
    }
    if n_list[0] == 0 {
        return Err(Error::invalid("n_list", "checkpoints must be positive"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n_list", "checkpoints must be strictly increasing"));
    }
    Ok(())
}

/// Checkpoints `1, 2, 4, ...` up to `n`, ending with `n` itself.
pub fn dyadic_checkpoints(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(1u64), |&m| m.checked_mul(2))
        .take_while(|&m| m < n)
        .collect();
    if n > 0 {
        out.push(n);
    }
    out
}

/// Feeds terms one at a time and records compensated prefix averages.
pub(crate) struct CheckpointAccumulator<'a, F> {
    targets: &'a [u64],
    next: usize,
    count: u64,
    sum: CompensatedSum<F>,
    out: Vec<Checkpoint<F>>,
}

impl<'a, F: Real> CheckpointAccumulator<'a, F> {
    pub(crate) fn new(targets: &'a [u64]) -> Self {
        Self {
            targets,
            next: 0,
            count: 0,
            sum: CompensatedSum::new(),
            out: Vec::with_capacity(targets.len()),
        }
    }

    pub(crate) fn is_done(&self) -> bool {
        self.next == self.targets.len()
    }

    pub(crate) fn push(&mut self, term: F) {
        self.sum += term;
        self.count += 1;
        if self.targets.get(self.next) == Some(&self.count) {
            let sum = self.sum.value();
            self.out.push(Checkpoint {
                n: self.count,
                sum,
                value: sum / F::of(self.count as f64),
            });
            self.next += 1;
        }
    }

    pub(crate) fn finish(self) -> AverageSeries<F> {
        AverageSeries::from_checkpoints(self.out)
    }
}

/// `(1/N) sum_{n<N} f(T^n x)` at each `N` in `n_list`.
pub fn birkhoff_average<F: Real>(
    sys: &SystemSpec<F>,
    f: &Observable,
    x: &TorusPoint,
    n_list: &[u64],
) -> Result<AverageSeries<F>> {
    multiple_ergodic_average(sys, std::slice::from_ref(f), x, n_list)
}

/// `(1/N) sum_{n<N} prod_i f_i(T^{i n} x)` at each `N` in `n_list`.
pub fn multiple_ergodic_average<F: Real>(
    sys: &SystemSpec<F>,
    fs: &[Observable],
    x: &TorusPoint,
    n_list: &[u64],
) -> Result<AverageSeries<F>> {
    if fs.is_empty() || fs.len() > MAX_ORDER {
        return Err(Error::invalid(
            "fs",
            format!("need 1..={MAX_ORDER} observables, got {}", fs.len()),
        ));
    }
    validate_checkpoints(n_list)?;
    check_dim(sys.dim(), x.dim())?;
    for f in fs {
        f.check(sys.dim())?;
    }
    let horizon = *n_list.last().expect("validated") as i128;
    sys.check_horizon(horizon * fs.len() as i128)?;

    let mut points = vec![*x; fs.len()];
    let mut acc = CheckpointAccumulator::new(n_list);
    while !acc.is_done() {
        let term = fs
            .iter()
            .zip(&points)
            .fold(F::one(), |prod, (f, p)| prod * f.eval::<F>(p));
        acc.push(term);
        for (i, p) in points.iter_mut().enumerate() {
            *p = sys.jump(p, i as i128 + 1);
        }
    }
    Ok(acc.finish())
}

/// Running average over `n < n_max` of the grid estimate of
/// `mu(A ∩ T^{-n}A ∩ T^{-2n}A ∩ ... ∩ T^{-kn}A)`, Lebesgue measure on a
/// `grid_size^dim` grid of left endpoints. Checkpoints are [`dyadic_checkpoints`].
pub fn multiple_recurrence_frequency<F: Real>(
    sys: &SystemSpec<F>,
    set: &Observable,
    k: usize,
    n_max: u64,
    grid_size: usize,
) -> Result<AverageSeries<F>> {
    let Observable::Indicator { set } = set else {
        return Err(Error::invalid("set", "must be a box indicator"));
    };
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::invalid("k", format!("need 1..={MAX_ORDER}, got {k}")));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be at least 1"));
    }
    if grid_size == 0 {
        return Err(Error::invalid("grid_size", "must be positive"));
    }
    check_dim(sys.dim(), set.dim())?;
    if set.volume() < MIN_BOX_VOLUME {
        return Err(Error::invalid(
            "set",
            format!("box volume {} is below {MIN_BOX_VOLUME}", set.volume()),
        ));
    }
    sys.check_horizon(n_max as i128 * k as i128)?;

    let inside = grid_points_in(set, sys.dim(), grid_size);
    let cells = (grid_size as u64).pow(sys.dim() as u32);
    let counts: Vec<u64> = (0..n_max)
        .into_par_iter()
        .map(|n| {
            inside
                .iter()
                .filter(|z| (1..=k as i128).all(|j| set.contains(&sys.jump(z, j * n as i128))))
                .count() as u64
        })
        .collect();

    let targets = dyadic_checkpoints(n_max);
    let mut checkpoints = Vec::with_capacity(targets.len());
    let mut total: u128 = 0;
    let mut next = 0;
    for (i, c) in counts.iter().enumerate() {
        total += *c as u128;
        let n = i as u64 + 1;
        if targets[next] == n {
            let sum = F::of(total as f64 / cells as f64);
            checkpoints.push(Checkpoint {
                n,
                sum,
                value: F::of(total as f64 / (cells as f64 * n as f64)),
            });
            next += 1;
        }
    }
    Ok(AverageSeries::from_checkpoints(checkpoints))
}

fn grid_points_in(set: &BoxSet, dim: usize, grid_size: usize) -> Vec<TorusPoint> {
    let axis: Vec<FixedAngle> = (0..grid_size)
        .map(|i| FixedAngle::from_ratio(i as i64, grid_size as u64))
        .collect();
    let points: Vec<TorusPoint> = if dim == 1 {
        axis.iter().map(|&x| TorusPoint::circle(x)).collect()
    } else {
        axis.iter()
            .flat_map(|&x| axis.iter().map(move |&y| TorusPoint::plane(x, y)))
            .collect()
    };
    points.into_iter().filter(|p| set.contains(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type Sys = SystemSpec<f64>;

    fn p(c: &[f64]) -> TorusPoint {
        TorusPoint::from_f64s(c).unwrap()
    }

    #[test]
    fn constant_one() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let a = birkhoff_average(&s, &Observable::one(), &p(&[0.1, 0.2]), &[1, 10, 100]).unwrap();
        assert!(a.values().iter().all(|&v| v == 1.0));
        let fs = vec![Observable::one(); 3];
        let m = multiple_ergodic_average(&s, &fs, &p(&[0.1, 0.2]), &[5, 50]).unwrap();
        assert!(m.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn first_checkpoint_is_f_of_x() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let f = Observable::cosine(0, 1);
        let x = p(&[0.3]);
        let a = birkhoff_average(&s, &f, &x, &[1]).unwrap();
        assert_eq!(a.final_value, f.eval::<f64>(&x));
    }

    #[test]
    fn rotation_cosine_average_is_small() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let a = birkhoff_average(&s, &Observable::cosine(0, 1), &p(&[0.0]), &[100_000]).unwrap();
        assert!(a.final_value.abs() < 0.01);
    }

    #[test]
    fn checkpoint_validation() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let f = Observable::one();
        let x = p(&[0.0]);
        assert!(birkhoff_average(&s, &f, &x, &[]).is_err());
        assert!(birkhoff_average(&s, &f, &x, &[0, 1]).is_err());
        assert!(birkhoff_average(&s, &f, &x, &[4, 2]).is_err());
        assert!(multiple_ergodic_average(&s, &vec![f.clone(); 5], &x, &[1]).is_err());
        assert!(multiple_ergodic_average(&s, &[], &x, &[1]).is_err());
        assert!(birkhoff_average(&s, &Observable::cosine(1, 1), &x, &[1]).is_err());
    }

    #[test]
    fn whole_space_recurs_always() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let a = Observable::indicator(BoxSet::full(1).unwrap());
        let r = multiple_recurrence_frequency(&s, &a, 3, 100, 64).unwrap();
        assert!(r.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn first_term_is_grid_volume() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let set = BoxSet::new(&[0.1, 0.3], &[0.45, 0.8]).unwrap();
        let g = 256;
        let r = multiple_recurrence_frequency(&s, &Observable::indicator(set.clone()), 2, 1, g).unwrap();
        assert_eq!(r.checkpoints.len(), 1);
        assert!((r.final_value - set.volume()).abs() <= 2.0 * 2.0 / g as f64);
    }

    #[test]
    fn recurrence_guards() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let tiny = Observable::indicator(BoxSet::new(&[0.0], &[0.005]).unwrap());
        assert!(multiple_recurrence_frequency(&s, &tiny, 1, 10, 64).is_err());
        let a = Observable::indicator(BoxSet::new(&[0.0], &[0.1]).unwrap());
        assert!(multiple_recurrence_frequency(&s, &a, 5, 10, 64).is_err());
        assert!(multiple_recurrence_frequency(&s, &Observable::one(), 1, 10, 64).is_err());
        assert!(BoxSet::new(&[0.5], &[0.5]).is_err());
        assert!(BoxSet::new(&[0.5], &[1.5]).is_err());
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_checkpoints(1), vec![1]);
        assert_eq!(dyadic_checkpoints(8), vec![1, 2, 4, 8]);
        assert_eq!(dyadic_checkpoints(10), vec![1, 2, 4, 8, 10]);
    }

    #[test]
    fn oscillation_of_single_checkpoint_is_zero() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let a = birkhoff_average(&s, &Observable::cosine(0, 1), &p(&[0.3]), &[7]).unwrap();
        assert_eq!(a.oscillation, 0.0);
    }

    #[test]
    fn observable_serde() {
        let o = Observable::Product {
            factors: vec![
                Observable::cosine(1, 2),
                Observable::indicator(BoxSet::new(&[0.0, 0.2], &[1.0, 0.4]).unwrap()),
            ],
        };
        let json = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<Observable>(&json).unwrap(), o);
        assert!(serde_json::from_str::<Observable>(r#"{"kind":"indicator","set":{"lo":[0.5],"hi":[0.2]}}"#).is_err());
    }
}
