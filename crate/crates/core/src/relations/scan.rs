//! Ordered search with early exit, parallel over fixed-size chunks.
//!
//! Items are numbered `0..count` in the deterministic search order. Chunks of
//! [`CHUNK`] items are evaluated in waves of [`WAVE`] chunks; the scan stops
//! after the first wave containing a hit and returns the lowest-numbered hit.
//! Chunk and wave sizes never depend on the worker count, so neither does the
//! outcome.

use rayon::prelude::*;

pub(crate) const CHUNK: usize = 64;
pub(crate) const WAVE: usize = 64;

/// Outcome of evaluating one item.
pub(crate) enum Probe<H> {
    Hit(H),
    /// A residual key (lower is better), or `None` when it cannot beat the bound passed in.
    Miss(Option<u128>),
}

pub(crate) enum Scan<H> {
    Hit { index: usize, hit: H },
    /// Lowest key and the first item achieving it. `None` only for an empty scan.
    Miss { best: Option<(u128, usize)> },
}

/// Outcome of one chunk: its first hit, or its best miss.
pub(crate) enum ChunkResult<H> {
    Hit(usize, H),
    Miss(Option<(u128, usize)>),
}

/// Runs `eval(index, best_key_so_far_in_chunk)` over `0..count` in order.
pub(crate) fn ordered_scan<H, E>(count: usize, chunk: usize, eval: E) -> Scan<H>
where
    H: Send,
    E: Fn(usize, u128) -> Probe<H> + Sync,
{
    ordered_chunk_scan(count, chunk, |range| run_chunk(range.start, range.end, &eval))
}

/// Like [`ordered_scan`] but hands whole index ranges to `eval_chunk`, for
/// kernels that carry state from one item to the next.
pub(crate) fn ordered_chunk_scan<H, E>(count: usize, chunk: usize, eval_chunk: E) -> Scan<H>
where
    H: Send,
    E: Fn(std::ops::Range<usize>) -> ChunkResult<H> + Sync,
{
    let chunks = count.div_ceil(chunk);
    let mut best: Option<(u128, usize)> = None;
    let mut wave_start = 0;
    while wave_start < chunks {
        let wave_end = (wave_start + WAVE).min(chunks);
        let results: Vec<ChunkResult<H>> = (wave_start..wave_end)
            .into_par_iter()
            .map(|c| eval_chunk(c * chunk..((c + 1) * chunk).min(count)))
            .collect();
        for r in results {
            match r {
                ChunkResult::Hit(index, hit) => return Scan::Hit { index, hit },
                ChunkResult::Miss(Some(m)) => {
                    if best.is_none_or(|b| m.0 < b.0) {
                        best = Some(m);
                    }
                }
                ChunkResult::Miss(None) => {}
            }
        }
        wave_start = wave_end;
    }
    Scan::Miss { best }
}

fn run_chunk<H, E>(start: usize, end: usize, eval: &E) -> ChunkResult<H>
where
    E: Fn(usize, u128) -> Probe<H>,
{
    let mut best: Option<(u128, usize)> = None;
    for i in start..end {
        let bound = best.map_or(u128::MAX, |b| b.0);
        match eval(i, bound) {
            Probe::Hit(h) => return ChunkResult::Hit(i, h),
            Probe::Miss(Some(k)) if k < bound => best = Some((k, i)),
            Probe::Miss(_) => {}
        }
    }
    ChunkResult::Miss(best)
}

/// `0, 1, -1, 2, -2, ...`: position of `n` in the signed search order.
pub(crate) fn zigzag_rank(n: i64) -> u64 {
    if n > 0 {
        2 * n as u64 - 1
    } else {
        2 * n.unsigned_abs()
    }
}

/// Inverse of [`zigzag_rank`].
pub(crate) fn zigzag(rank: u64) -> i64 {
    if rank % 2 == 1 {
        rank.div_ceil(2) as i64
    } else {
        -((rank / 2) as i64)
    }
}
