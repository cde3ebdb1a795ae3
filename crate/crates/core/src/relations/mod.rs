//! Detectors for proximality, `AP^[d]`, `RP^[d]` and `Ind_ap` pairs at a finite
//! resolution and search budget.
//!
//! Detectors are constructive. `Witnessed` carries data that re-verifies every
//! defining inequality through the `certify_*` functions; `RefutedAtBudget`
//! only means nothing was found within the budget and carries the smallest
//! residual seen.

mod counterexample;
mod independence;
pub(crate) mod scan;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::{raw_distance_to_f64, StrictBound};
use crate::torus::{check_dim, dist_raw};
use crate::{Error, FixedAngle, Real, Result, SystemSpec, TorusPoint};
use scan::{ordered_scan, zigzag, Probe, Scan, CHUNK};

pub use counterexample::weyl_ap1_orbit_check;
pub use independence::{certify_ind_ap, detect_ind_ap};

/// Largest order for `RP^[d]` and `Ind_ap` searches (`2^d` patterns).
pub const MAX_CUBE_ORDER: usize = 4;
/// Largest order for `AP^[d]` searches.
pub const MAX_AP_ORDER: usize = 16;

/// A pair of points and a search budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationQuery {
    pub x: TorusPoint,
    pub y: TorusPoint,
    /// Order `d >= 1`.
    pub d: usize,
    /// Resolution `delta > 0`; all bounds are strict.
    pub delta: f64,
    /// Time horizon: `|n| <= n_max`.
    pub n_max: u64,
    /// Perturbation grid points per axis of each `delta`-ball; `1` means no perturbation.
    pub ball_grid: usize,
    /// Seeded uniform perturbations tried after the grid comes up empty.
    #[serde(default)]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

impl RelationQuery {
    pub fn new(x: TorusPoint, y: TorusPoint, d: usize, delta: f64, n_max: u64, ball_grid: usize) -> Result<Self> {
        let q = Self {
            x,
            y,
            d,
            delta,
            n_max,
            ball_grid,
            restarts: 0,
            seed: 0,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_restarts(mut self, restarts: usize, seed: u64) -> Self {
        self.restarts = restarts;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.x.dim(), self.y.dim())?;
        if self.d == 0 {
            return Err(Error::invalid("d", "order must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be positive, got {}", self.delta)));
        }
        if self.n_max == 0 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        if self.ball_grid == 0 {
            return Err(Error::invalid("ball_grid", "must be at least 1"));
        }
        Ok(())
    }

    /// The same query for the first-coordinate factor.
    pub fn project_first(&self) -> Self {
        Self {
            x: self.x.first(),
            y: self.y.first(),
            ..self.clone()
        }
    }

    fn bound(&self) -> StrictBound {
        StrictBound::new(self.delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Witnessed,
    RefutedAtBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Perturbed points and a time: `[n]` for `AP^[d]`, `(n_1, ..., n_d)` for `RP^[d]`.
    Pair {
        x: TorusPoint,
        y: TorusPoint,
        times: Vec<i64>,
    },
    /// A time `n` and, for each pattern `t in {1,2}^d` (bit `i` set means `t_{i+1} = 2`),
    /// a point `z` with `T^{(i+1)n} z in U_{t_{i+1}}`.
    Independence { n: i64, hits: Vec<TorusPoint> },
    /// A single time.
    Time { n: i64 },
}

impl Witness {
    /// `AP^[d]` witness `(x', y', n)` as the `RP^[d]` witness `(x', y', (n, ..., n))`.
    pub fn ap_as_rp(&self, d: usize) -> Option<Self> {
        match self {
            Self::Pair { x, y, times } if times.len() == 1 => Some(Self::Pair {
                x: *x,
                y: *y,
                times: vec![times[0]; d],
            }),
            _ => None,
        }
    }

    /// Image under the projection onto the first coordinate.
    pub fn project_first(&self) -> Self {
        match self {
            Self::Pair { x, y, times } => Self::Pair {
                x: x.first(),
                y: y.first(),
                times: times.clone(),
            },
            Self::Independence { n, hits } => Self::Independence {
                n: *n,
                hits: hits.iter().map(TorusPoint::first).collect(),
            },
            Self::Time { n } => Self::Time { n: *n },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Largest defining distance of the witness, or the smallest such value
    /// seen when refuted. `Ind_ap` uses the fraction of unrealized patterns.
    pub residual: f64,
    /// Time (or time vector) at which `residual` was first achieved.
    pub best_times: Option<Vec<i64>>,
}

impl RelationVerdict {
    pub fn is_witnessed(&self) -> bool {
        self.status == Status::Witnessed
    }

    pub(crate) fn witnessed(witness: Witness, residual: f64, times: Vec<i64>) -> Self {
        Self {
            status: Status::Witnessed,
            witness: Some(witness),
            residual,
            best_times: Some(times),
        }
    }

    pub(crate) fn refuted(residual: f64, times: Option<Vec<i64>>) -> Self {
        Self {
            status: Status::RefutedAtBudget,
            witness: None,
            residual,
            best_times: times,
        }
    }
}

/// Search order over times.
pub(crate) enum Schedule {
    /// `n` in signed order `1, -1, 2, -2, ...` (preceded by `0` when `include_zero`),
    /// exponents `n, 2n, ..., dn`.
    Progression { d: usize, n_max: u64, include_zero: bool },
    /// Nonzero vectors of `[-c, c]^d` by sup-norm shell, then lexicographically
    /// in signed order; exponents `n . eps` over nonempty `eps`.
    Cube { d: usize, vectors: Vec<i64> },
}

impl Schedule {
    pub(crate) fn cube(d: usize, side: u64) -> Self {
        let side = side as i64;
        let width = (2 * side + 1) as usize;
        let total = width.pow(d as u32);
        let mut vecs: Vec<Vec<i64>> = (0..total)
            .map(|mut idx| {
                (0..d)
                    .map(|_| {
                        let v = (idx % width) as i64 - side;
                        idx /= width;
                        v
                    })
                    .collect()
            })
            .filter(|v: &Vec<i64>| v.iter().any(|&c| c != 0))
            .collect();
        vecs.sort_by_key(|v| {
            let shell = v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
            (shell, v.iter().map(|&c| scan::zigzag_rank(c)).collect::<Vec<_>>())
        });
        Self::Cube {
            d,
            vectors: vecs.into_iter().flatten().collect(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Self::Progression { n_max, include_zero, .. } => 2 * *n_max as usize + usize::from(*include_zero),
            Self::Cube { d, vectors } => vectors.len() / d,
        }
    }

    pub(crate) fn times(&self, idx: usize) -> Vec<i64> {
        match self {
            Self::Progression { include_zero, .. } => {
                vec![zigzag(idx as u64 + u64::from(!*include_zero))]
            }
            Self::Cube { d, vectors } => vectors[idx * d..(idx + 1) * d].to_vec(),
        }
    }

    pub(crate) fn exponents(&self, idx: usize) -> Vec<i128> {
        let t = self.times(idx);
        match self {
            Self::Progression { d, .. } => (1..=*d as i128).map(|i| i * t[0] as i128).collect(),
            Self::Cube { .. } => cube_exponents(&t),
        }
    }

    /// Largest `|exponent|` the schedule can produce.
    pub(crate) fn horizon(&self) -> i128 {
        match self {
            Self::Progression { d, n_max, .. } => *d as i128 * *n_max as i128,
            Self::Cube { d, vectors } => {
                *d as i128 * vectors.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as i128
            }
        }
    }
}

/// `n . eps` for `eps = 1 .. 2^d - 1`, bit `j` of `eps` selecting `n_{j+1}`.
pub(crate) fn cube_exponents(nvec: &[i64]) -> Vec<i128> {
    (1usize..1 << nvec.len())
        .map(|eps| {
            nvec.iter()
                .enumerate()
                .filter(|(j, _)| eps >> j & 1 == 1)
                .map(|(_, &n)| n as i128)
                .sum()
        })
        .collect()
}

/// Largest `c` with `c^d <= n`.
pub(crate) fn integer_root(n: u64, d: usize) -> u64 {
    let mut c = (n as f64).powf(1.0 / d as f64).round() as u64;
    while c > 0 && c.checked_pow(d as u32).is_none_or(|p| p > n) {
        c -= 1;
    }
    while (c + 1).checked_pow(d as u32).is_some_and(|p| p <= n) {
        c += 1;
    }
    c
}

/// Grid of `g^k` points strictly inside the open `delta`-ball (a box in the
/// max metric) around `center`, lexicographic in the coordinates.
pub(crate) fn ball_grid(center: &TorusPoint, delta: f64, g: usize) -> Vec<TorusPoint> {
    let offsets: Vec<FixedAngle> = (0..g)
        .map(|j| {
            let t = (2 * j + 1) as f64 / g as f64 - 1.0;
            FixedAngle::from_f64(delta.min(0.5) * t)
        })
        .collect();
    match center.dim() {
        1 => offsets
            .iter()
            .map(|&o| TorusPoint::circle(center.coord(0) + o))
            .collect(),
        _ => offsets
            .iter()
            .flat_map(|&a| {
                offsets
                    .iter()
                    .map(move |&b| TorusPoint::plane(center.coord(0) + a, center.coord(1) + b))
            })
            .collect(),
    }
}

struct PairHit {
    x: usize,
    y: usize,
    residual: u128,
}

/// Scans `schedule` for the first `(item, x', y')`, in order, with every
/// `rho(T^e x', T^e y') < delta`.
fn pair_scan<F: Real>(
    sys: &SystemSpec<F>,
    schedule: &Schedule,
    xs: &[TorusPoint],
    ys: &[TorusPoint],
    bound: StrictBound,
) -> Scan<PairHit> {
    ordered_scan(schedule.len(), CHUNK, |idx, best| {
        let exps = schedule.exponents(idx);
        let xi: Vec<Vec<TorusPoint>> = exps.iter().map(|&e| xs.iter().map(|p| sys.jump(p, e)).collect()).collect();
        let yi: Vec<Vec<TorusPoint>> = exps.iter().map(|&e| ys.iter().map(|p| sys.jump(p, e)).collect()).collect();
        let mut item_best = u128::MAX;
        for a in 0..xs.len() {
            for b in 0..ys.len() {
                let mut r = 0u128;
                for (xe, ye) in xi.iter().zip(&yi) {
                    r = r.max(dist_raw(&xe[a], &ye[b]));
                    if r >= best {
                        break;
                    }
                }
                if bound.admits(r) {
                    return Probe::Hit(PairHit { x: a, y: b, residual: r });
                }
                item_best = item_best.min(r);
            }
        }
        Probe::Miss((item_best < best).then_some(item_best))
    })
}

/// Grid search, then seeded restarts, over `schedule`.
fn perturbed_search<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, schedule: &Schedule) -> Result<RelationVerdict> {
    q.validate()?;
    check_dim(sys.dim(), q.x.dim())?;
    sys.check_horizon(schedule.horizon())?;
    let bound = q.bound();
    let xs = ball_grid(&q.x, q.delta, q.ball_grid);
    let ys = ball_grid(&q.y, q.delta, q.ball_grid);
    let mut best: Option<(u128, usize)> = None;
    let mut candidates = vec![(xs, ys)];
    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    for _ in 0..q.restarts {
        candidates.push((vec![sample_ball(&mut rng, &q.x, q.delta)], vec![sample_ball(&mut rng, &q.y, q.delta)]));
    }
    for (xs, ys) in &candidates {
        match pair_scan(sys, schedule, xs, ys, bound) {
            Scan::Hit { index, hit } => {
                let times = schedule.times(index);
                let witness = Witness::Pair {
                    x: xs[hit.x],
                    y: ys[hit.y],
                    times: times.clone(),
                };
                return Ok(RelationVerdict::witnessed(witness, raw_distance_to_f64(hit.residual), times));
            }
            Scan::Miss { best: Some(m) } if best.is_none_or(|b| m.0 < b.0) => best = Some(m),
            Scan::Miss { .. } => {}
        }
    }
    let (key, idx) = best.expect("schedules are nonempty");
    Ok(RelationVerdict::refuted(raw_distance_to_f64(key), Some(schedule.times(idx))))
}

fn sample_ball(rng: &mut ChaCha8Rng, center: &TorusPoint, delta: f64) -> TorusPoint {
    let bound = StrictBound::new(delta);
    let radius = delta.min(0.5);
    loop {
        let offsets: Vec<FixedAngle> = (0..center.dim())
            .map(|_| FixedAngle::from_f64(radius * rng.gen_range(-1.0..1.0)))
            .collect();
        let p = center.translate(&offsets).expect("same dimension");
        if bound.admits(dist_raw(&p, center)) {
            return p;
        }
    }
}

/// Is there `|n| <= n_max` with `rho(T^n x, T^n y) < delta`? No perturbation; `q.d` is ignored.
pub fn detect_proximal<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery) -> Result<RelationVerdict> {
    q.validate()?;
    check_dim(sys.dim(), q.x.dim())?;
    let schedule = Schedule::Progression {
        d: 1,
        n_max: q.n_max,
        include_zero: true,
    };
    sys.check_horizon(schedule.horizon())?;
    match pair_scan(sys, &schedule, &[q.x], &[q.y], q.bound()) {
        Scan::Hit { index, hit } => {
            let times = schedule.times(index);
            Ok(RelationVerdict::witnessed(
                Witness::Time { n: times[0] },
                raw_distance_to_f64(hit.residual),
                times,
            ))
        }
        Scan::Miss { best } => {
            let (key, idx) = best.expect("schedule is nonempty");
            Ok(RelationVerdict::refuted(raw_distance_to_f64(key), Some(schedule.times(idx))))
        }
    }
}

/// `AP^[d]` search: perturbations on the ball grids, `n = 1, -1, 2, -2, ...`, and
/// `rho(T^{in} x', T^{in} y') < delta` for `1 <= i <= d`.
pub fn detect_ap<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery) -> Result<RelationVerdict> {
    if q.d > MAX_AP_ORDER {
        return Err(Error::invalid("d", format!("at most {MAX_AP_ORDER} for AP searches")));
    }
    let schedule = Schedule::Progression {
        d: q.d,
        n_max: q.n_max,
        include_zero: false,
    };
    perturbed_search(sys, q, &schedule)
}

/// `RP^[d]` search over `n in [-c, c]^d \ {0}` with `c = floor(n_max^(1/d))`,
/// requiring `rho(T^{n.eps} x', T^{n.eps} y') < delta` for all nonempty `eps`.
pub fn detect_rp<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery) -> Result<RelationVerdict> {
    if q.d > MAX_CUBE_ORDER {
        return Err(Error::invalid("d", format!("at most {MAX_CUBE_ORDER} for RP searches")));
    }
    q.validate()?;
    let side = integer_root(q.n_max, q.d);
    if side == 0 {
        return Err(Error::invalid("n_max", "budget too small"));
    }
    let schedule = if q.d == 1 {
        Schedule::Progression {
            d: 1,
            n_max: side,
            include_zero: false,
        }
    } else {
        Schedule::cube(q.d, side)
    };
    perturbed_search(sys, q, &schedule)
}

fn certify_pair<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, xp: &TorusPoint, yp: &TorusPoint, exps: &[i128]) -> Result<bool> {
    let bound = q.bound();
    let mut ok = bound.admits(crate::torus_dist_raw(&q.x, xp)?) && bound.admits(crate::torus_dist_raw(&q.y, yp)?);
    for &e in exps {
        let e = i64::try_from(e).map_err(|_| Error::TimeOutOfRange {
            n: e,
            bound: crate::system::MAX_TIME as i128,
        })?;
        let a = sys.orbit_point(xp, e)?;
        let b = sys.orbit_point(yp, e)?;
        ok &= bound.admits(crate::torus_dist_raw(&a, &b)?);
    }
    Ok(ok)
}

/// Re-evaluates an `AP^[d]` witness `(x', y', [n])` against `q` (order `q.d`).
pub fn certify_ap<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, w: &Witness) -> Result<bool> {
    match w {
        Witness::Pair { x, y, times } if times.len() == 1 => {
            let exps: Vec<i128> = (1..=q.d as i128).map(|i| i * times[0] as i128).collect();
            certify_pair(sys, q, x, y, &exps)
        }
        _ => Ok(false),
    }
}

/// Re-evaluates an `RP^[d]` witness `(x', y', (n_1..n_d))` against `q`.
pub fn certify_rp<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, w: &Witness) -> Result<bool> {
    match w {
        Witness::Pair { x, y, times } if times.len() == q.d => certify_pair(sys, q, x, y, &cube_exponents(times)),
        _ => Ok(false),
    }
}

/// Re-evaluates a proximality witness.
pub fn certify_proximal<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, w: &Witness) -> Result<bool> {
    match w {
        Witness::Time { n } => {
            let a = sys.orbit_point(&q.x, *n)?;
            let b = sys.orbit_point(&q.y, *n)?;
            Ok(q.bound().admits(crate::torus_dist_raw(&a, &b)?))
        }
        _ => Ok(false),
    }
}

/// Results of probing `(a, b)`, `(b, c)` and `(a, c)` for `AP^[d]` membership.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitivityProbe {
    pub ab: RelationVerdict,
    pub bc: RelationVerdict,
    pub ac: RelationVerdict,
}

impl TransitivityProbe {
    /// Both premises witnessed but the conclusion not found at this budget.
    pub fn is_counterexample_candidate(&self) -> bool {
        self.ab.is_witnessed() && self.bc.is_witnessed() && !self.ac.is_witnessed()
    }
}

/// Runs [`detect_ap`] on the three pairs of `points`, reusing every budget field of `template`.
pub fn probe_transitivity<F: Real>(
    sys: &SystemSpec<F>,
    points: [TorusPoint; 3],
    template: &RelationQuery,
) -> Result<TransitivityProbe> {
    let [a, b, c] = points;
    let query = |x: TorusPoint, y: TorusPoint| RelationQuery {
        x,
        y,
        ..template.clone()
    };
    Ok(TransitivityProbe {
        ab: detect_ap(sys, &query(a, b))?,
        bc: detect_ap(sys, &query(b, c))?,
        ac: detect_ap(sys, &query(a, c))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Sys = SystemSpec<f64>;

    fn p(c: &[f64]) -> TorusPoint {
        TorusPoint::from_f64s(c).unwrap()
    }

    fn query(x: &[f64], y: &[f64], d: usize, delta: f64, n_max: u64, g: usize) -> RelationQuery {
        RelationQuery::new(p(x), p(y), d, delta, n_max, g).unwrap()
    }

    #[test]
    fn rotation_pairs_are_never_proximal() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let q = query(&[0.1], &[0.4], 1, 0.01, 1000, 1);
        let v = detect_proximal(&s, &q).unwrap();
        assert_eq!(v.status, Status::RefutedAtBudget);
        let rho: f64 = crate::torus_dist(&q.x, &q.y).unwrap();
        assert_eq!(v.residual, rho);
        assert_eq!(v.best_times, Some(vec![0]));
    }

    #[test]
    fn equal_points_are_proximal_at_zero() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let q = query(&[0.1, 0.2], &[0.1, 0.2], 1, 1e-9, 10, 1);
        let v = detect_proximal(&s, &q).unwrap();
        assert_eq!(v.witness, Some(Witness::Time { n: 0 }));
        assert!(certify_proximal(&s, &q, v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn diagonal_ap_witness_at_one() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let q = query(&[0.3, 0.4], &[0.3, 0.4], 3, 0.01, 10, 1);
        let v = detect_ap(&s, &q).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Pair {
                x: q.x,
                y: q.x,
                times: vec![1]
            })
        );
    }

    #[test]
    fn ball_grid_stays_inside_ball() {
        let c = p(&[0.99, 0.005]);
        for g in [1, 2, 5, 9] {
            let pts = ball_grid(&c, 0.01, g);
            assert_eq!(pts.len(), g * g);
            let bound = StrictBound::new(0.01);
            assert!(pts.iter().all(|q| bound.admits(dist_raw(q, &c))));
        }
        assert_eq!(ball_grid(&c, 0.01, 1), vec![c]);
    }

    #[test]
    fn cube_schedule_order() {
        let s = Schedule::cube(2, 1);
        assert_eq!(s.len(), 8);
        let firsts: Vec<Vec<i64>> = (0..4).map(|i| s.times(i)).collect();
        assert_eq!(firsts, vec![vec![0, 1], vec![0, -1], vec![1, 0], vec![1, 1]]);
        let s1 = Schedule::cube(1, 3);
        let p1 = Schedule::Progression {
            d: 1,
            n_max: 3,
            include_zero: false,
        };
        for i in 0..6 {
            assert_eq!(s1.times(i), p1.times(i));
            assert_eq!(s1.exponents(i), p1.exponents(i));
        }
    }

    #[test]
    fn cube_exponent_sets() {
        assert_eq!(cube_exponents(&[2, 5]), vec![2, 5, 7]);
        assert_eq!(cube_exponents(&[3, 3, 3]), vec![3, 3, 6, 3, 6, 6, 9]);
    }

    #[test]
    fn roots() {
        assert_eq!(integer_root(100_000, 1), 100_000);
        assert_eq!(integer_root(100_000, 2), 316);
        assert_eq!(integer_root(1000, 3), 10);
        assert_eq!(integer_root(999, 3), 9);
        assert_eq!(integer_root(1, 4), 1);
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(RelationQuery::new(p(&[0.1]), p(&[0.1, 0.2]), 1, 0.1, 10, 1).is_err());
        assert!(RelationQuery::new(p(&[0.1]), p(&[0.2]), 0, 0.1, 10, 1).is_err());
        assert!(RelationQuery::new(p(&[0.1]), p(&[0.2]), 1, 0.0, 10, 1).is_err());
        assert!(RelationQuery::new(p(&[0.1]), p(&[0.2]), 1, 0.1, 0, 1).is_err());
        assert!(RelationQuery::new(p(&[0.1]), p(&[0.2]), 1, 0.1, 10, 0).is_err());
        let s = Sys::weyl(FixedAngle::GOLDEN);
        assert!(detect_ap(&s, &query(&[0.1], &[0.2], 1, 0.1, 10, 1)).is_err());
        let r = Sys::rotation(FixedAngle::GOLDEN);
        assert!(detect_rp(&r, &query(&[0.1], &[0.2], 5, 0.1, 10, 1)).is_err());
    }

    #[test]
    fn restarts_are_seeded() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let q = query(&[0.3, 0.1], &[0.3, 0.7], 2, 0.02, 200, 2).with_restarts(4, 7);
        let a = detect_ap(&s, &q).unwrap();
        let b = detect_ap(&s, &q).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn restarts_can_find_what_the_grid_misses() {
        // a single grid point at the center misses; random points near x = y do not
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let q = query(&[0.1], &[0.1 + 0.015], 1, 0.01, 1, 1);
        assert!(!detect_ap(&s, &q).unwrap().is_witnessed());
        let v = detect_ap(&s, &q.clone().with_restarts(64, 1)).unwrap();
        assert!(v.is_witnessed());
        assert!(certify_ap(&s, &q, v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn transitivity_probe_on_a_chain_of_nearby_points() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let t = query(&[0.0], &[0.0], 2, 0.02, 50, 5);
        let probe = probe_transitivity(&s, [p(&[0.1]), p(&[0.12]), p(&[0.14])], &t).unwrap();
        assert!(probe.ab.is_witnessed() && probe.bc.is_witnessed());
        assert!(!probe.ac.is_witnessed() || !probe.is_counterexample_candidate());
    }
}
