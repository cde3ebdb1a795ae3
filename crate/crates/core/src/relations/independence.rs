use crate::angle::StrictBound;
use crate::relations::scan::{ordered_scan, zigzag, Probe, Scan, CHUNK};
use crate::relations::{RelationQuery, RelationVerdict, Witness, MAX_CUBE_ORDER};
use crate::torus::{check_dim, dist_raw};
use crate::{Error, FixedAngle, Real, Result, SystemSpec, TorusPoint};

/// Uniform `g^k` grid over the whole torus, lexicographic.
fn phase_space_grid(dim: usize, g: usize) -> Vec<TorusPoint> {
    let axis: Vec<FixedAngle> = (0..g).map(|i| FixedAngle::from_ratio(i as i64, g as u64)).collect();
    if dim == 1 {
        axis.iter().map(|&a| TorusPoint::circle(a)).collect()
    } else {
        axis.iter()
            .flat_map(|&a| axis.iter().map(move |&b| TorusPoint::plane(a, b)))
            .collect()
    }
}

/// Patterns `t in {1,2}^d` realized by a point whose memberships are `in1[i]`,
/// `in2[i]` (for `T^{(i+1)n} z in U_1`, `U_2`), as a bitmask over pattern indices.
fn realized_patterns(in1: &[bool], in2: &[bool]) -> u32 {
    let d = in1.len();
    (0u32..1 << d)
        .filter(|&t| (0..d).all(|i| if t >> i & 1 == 1 { in2[i] } else { in1[i] }))
        .fold(0, |mask, t| mask | 1 << t)
}

/// Searches `n = 0, 1, -1, ...` for a time at which every pattern
/// `T^{-n}U_{t_1} ∩ ... ∩ T^{-dn}U_{t_d}` is hit by a point of the sample grid,
/// where `U_1`, `U_2` are the open `delta`-balls around `q.x`, `q.y`.
///
/// The residual of a refuted search is the smallest fraction of unrealized patterns.
pub fn detect_ind_ap<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, sample_grid: usize) -> Result<RelationVerdict> {
    q.validate()?;
    check_dim(sys.dim(), q.x.dim())?;
    if q.d > MAX_CUBE_ORDER {
        return Err(Error::invalid("d", format!("at most {MAX_CUBE_ORDER} for independence searches")));
    }
    if sample_grid == 0 {
        return Err(Error::invalid("sample_grid", "must be positive"));
    }
    sys.check_horizon(q.d as i128 * q.n_max as i128)?;
    let d = q.d;
    let patterns = 1usize << d;
    let full: u32 = if patterns == 32 { u32::MAX } else { (1u32 << patterns) - 1 };
    let bound = StrictBound::new(q.delta);
    let samples = phase_space_grid(sys.dim(), sample_grid);
    let count = 2 * q.n_max as usize + 1;

    let outcome = ordered_scan(count, CHUNK, |idx, best| {
        let n = zigzag(idx as u64) as i128;
        let mut hits: Vec<Option<usize>> = vec![None; patterns];
        let mut seen = 0u32;
        let mut in1 = vec![false; d];
        let mut in2 = vec![false; d];
        for (zi, z) in samples.iter().enumerate() {
            for i in 0..d {
                let w = sys.jump(z, (i as i128 + 1) * n);
                in1[i] = bound.admits(dist_raw(&w, &q.x));
                in2[i] = bound.admits(dist_raw(&w, &q.y));
            }
            let fresh = realized_patterns(&in1, &in2) & !seen;
            if fresh != 0 {
                for (t, hit) in hits.iter_mut().enumerate() {
                    if fresh >> t & 1 == 1 {
                        *hit = Some(zi);
                    }
                }
                seen |= fresh;
                if seen == full {
                    return Probe::Hit(hits.into_iter().map(|h| h.expect("all seen")).collect::<Vec<_>>());
                }
            }
        }
        let missing = (patterns - seen.count_ones() as usize) as u128;
        Probe::Miss((missing < best).then_some(missing))
    });

    match outcome {
        Scan::Hit { index, hit } => {
            let n = zigzag(index as u64);
            let witness = Witness::Independence {
                n,
                hits: hit.into_iter().map(|i| samples[i]).collect(),
            };
            Ok(RelationVerdict::witnessed(witness, 0.0, vec![n]))
        }
        Scan::Miss { best } => {
            let (missing, idx) = best.expect("schedule is nonempty");
            Ok(RelationVerdict::refuted(
                missing as f64 / patterns as f64,
                Some(vec![zigzag(idx as u64)]),
            ))
        }
    }
}

/// Re-checks every stored hitting point of an independence witness.
pub fn certify_ind_ap<F: Real>(sys: &SystemSpec<F>, q: &RelationQuery, w: &Witness) -> Result<bool> {
    let Witness::Independence { n, hits } = w else {
        return Ok(false);
    };
    if hits.len() != 1 << q.d {
        return Ok(false);
    }
    let bound = StrictBound::new(q.delta);
    for (t, z) in hits.iter().enumerate() {
        for i in 0..q.d {
            let time = (i as i64 + 1)
                .checked_mul(*n)
                .ok_or_else(|| Error::invalid("n", "time overflow"))?;
            let w = sys.orbit_point(z, time)?;
            let target = if t >> i & 1 == 1 { &q.y } else { &q.x };
            if !bound.admits(crate::torus_dist_raw(&w, target)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::Status;

    type Sys = SystemSpec<f64>;

    fn p(c: &[f64]) -> TorusPoint {
        TorusPoint::from_f64s(c).unwrap()
    }

    #[test]
    fn pattern_masks() {
        assert_eq!(realized_patterns(&[true], &[true]), 0b11);
        assert_eq!(realized_patterns(&[true, false], &[false, true]), 1 << 0b10);
        assert_eq!(realized_patterns(&[true, true], &[false, false]), 1);
        assert_eq!(realized_patterns(&[false, true], &[false, true]), 0);
    }

    #[test]
    fn equal_points_are_independent() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        for d in 1..=3 {
            let q = RelationQuery::new(p(&[0.3]), p(&[0.3]), d, 0.05, 10, 1).unwrap();
            let v = detect_ind_ap(&s, &q, 256).unwrap();
            assert_eq!(v.status, Status::Witnessed);
            assert!(certify_ind_ap(&s, &q, v.witness.as_ref().unwrap()).unwrap());
        }
    }

    #[test]
    fn order_one_is_witnessed_at_time_zero() {
        let s = Sys::weyl(FixedAngle::GOLDEN);
        let q = RelationQuery::new(p(&[0.1, 0.2]), p(&[0.7, 0.9]), 1, 0.05, 10, 1).unwrap();
        let v = detect_ind_ap(&s, &q, 64).unwrap();
        assert_eq!(v.best_times, Some(vec![0]));
        assert!(certify_ind_ap(&s, &q, v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn rigid_rotation_has_no_independence() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let q = RelationQuery::new(p(&[0.1]), p(&[0.6]), 2, 0.05, 500, 1).unwrap();
        let v = detect_ind_ap(&s, &q, 1024).unwrap();
        assert_eq!(v.status, Status::RefutedAtBudget);
        assert!(v.residual > 0.0);
    }

    #[test]
    fn wrong_witness_shapes_fail_certification() {
        let s = Sys::rotation(FixedAngle::GOLDEN);
        let q = RelationQuery::new(p(&[0.1]), p(&[0.6]), 2, 0.05, 5, 1).unwrap();
        assert!(!certify_ind_ap(&s, &q, &Witness::Time { n: 1 }).unwrap());
        let w = Witness::Independence {
            n: 0,
            hits: vec![p(&[0.1]); 4],
        };
        assert!(!certify_ind_ap(&s, &q, &w).unwrap());
    }
}
