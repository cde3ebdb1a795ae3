use crate::angle::{raw_distance_to_f64, StrictBound};
use crate::relations::scan::{ordered_chunk_scan, ChunkResult, Scan};
use crate::relations::{RelationVerdict, Witness};
use crate::system::MAX_TIME;
use crate::{Error, FixedAngle, Result};

const CHUNK: usize = 1 << 14;

/// For the Weyl map `(x, y) -> (x + alpha, x + y)` started at `(0, 0)`, searches
/// `1 <= n <= n_max` for
/// `||n alpha||, ||2n alpha||, ||y - a(n) alpha||, ||y - a(2n) alpha|| < epsilon`,
/// i.e. `T^n(0,0)` and `T^{2n}(0,0)` both within `epsilon` of `(0, y)`.
///
/// Since `a(2n) = 4 a(n) + n`, any witness forces `||3y|| < 6 epsilon`.
pub fn weyl_ap1_orbit_check(alpha: FixedAngle, y: FixedAngle, epsilon: f64, n_max: u64) -> Result<RelationVerdict> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be at least 1"));
    }
    if 2 * n_max as i128 > MAX_TIME as i128 {
        return Err(Error::TimeOutOfRange {
            n: 2 * n_max as i128,
            bound: MAX_TIME as i128,
        });
    }
    let bound = StrictBound::new(epsilon);
    let outcome = ordered_chunk_scan(n_max as usize, CHUNK, |range| {
        let n = range.start as i128 + 1;
        // state at time n: n alpha, a(n) alpha, a(2n) alpha
        let mut lin = alpha.mul_int(n);
        let mut tri = alpha.mul_int(n * (n - 1) / 2);
        let mut tri2 = alpha.mul_int(n * (2 * n - 1));
        let mut best: Option<(u128, usize)> = None;
        for idx in range {
            let r = lin
                .norm_raw()
                .max(lin.mul_int(2).norm_raw())
                .max(y.circle_dist_raw(tri))
                .max(y.circle_dist_raw(tri2));
            if bound.admits(r) {
                return ChunkResult::Hit(idx, r);
            }
            if best.is_none_or(|b| r < b.0) {
                best = Some((r, idx));
            }
            // a(n+1) = a(n) + n,  a(2n+2) = a(2n) + 4n + 1
            tri += lin;
            tri2 += lin.mul_int(4) + alpha;
            lin += alpha;
        }
        ChunkResult::Miss(best)
    });
    Ok(match outcome {
        Scan::Hit { index, hit } => {
            let n = index as i64 + 1;
            RelationVerdict::witnessed(Witness::Time { n }, raw_distance_to_f64(hit), vec![n])
        }
        Scan::Miss { best } => {
            let (key, idx) = best.expect("n_max >= 1");
            RelationVerdict::refuted(raw_distance_to_f64(key), Some(vec![idx as i64 + 1]))
        }
    })
}
