//! On-disk cache of orbit segments.
//!
//! One file per `(system, base point, range)`, named by the SHA-256 of the key.
//! The payload is the raw little-endian `u128` coordinates, so a cached orbit is
//! bit-identical to a recomputed one.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use torus_ap::{FixedAngle, System, TorusPoint};

use crate::error::{CliError, CliResult};

const MAGIC: &[u8; 8] = b"TORBIT01";

#[derive(Clone, Debug)]
pub struct OrbitCache {
    dir: PathBuf,
}

impl OrbitCache {
    pub fn new(dir: impl Into<PathBuf>) -> CliResult<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, sys: &System, p: &TorusPoint, n0: i64, n1: i64) -> PathBuf {
        let mut h = Sha256::new();
        h.update(sys.to_text().as_bytes());
        for c in p.coords() {
            h.update(c.raw().to_le_bytes());
        }
        h.update(n0.to_le_bytes());
        h.update(n1.to_le_bytes());
        self.dir.join(format!("{}.orbit", hex::encode(h.finalize())))
    }

    /// `T^n p` for `n0 <= n < n1`, from disk when present.
    pub fn orbit(&self, sys: &System, p: &TorusPoint, n0: i64, n1: i64) -> CliResult<Vec<TorusPoint>> {
        let path = self.path_for(sys, p, n0, n1);
        if let Ok(bytes) = std::fs::read(&path) {
            if let Some(points) = decode(&bytes, p.dim()) {
                log::debug!("orbit cache hit {}", path.display());
                return Ok(points);
            }
            log::warn!("ignoring malformed cache file {}", path.display());
        }
        let points = sys.orbit_segment(p, n0, n1, 1)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, encode(&points, p.dim())).map_err(CliError::io(&tmp))?;
        std::fs::rename(&tmp, &path).map_err(CliError::io(&path))?;
        Ok(points)
    }
}

fn encode(points: &[TorusPoint], dim: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(MAGIC.len() + 1 + points.len() * dim * 16);
    out.extend_from_slice(MAGIC);
    out.push(dim as u8);
    for p in points {
        for c in p.coords() {
            out.extend_from_slice(&c.raw().to_le_bytes());
        }
    }
    out
}

fn decode(bytes: &[u8], dim: usize) -> Option<Vec<TorusPoint>> {
    let body = bytes.strip_prefix(MAGIC.as_slice())?;
    let (&stored_dim, body) = body.split_first()?;
    if stored_dim as usize != dim || dim == 0 || body.len() % (16 * dim) != 0 {
        return None;
    }
    body.chunks_exact(16 * dim)
        .map(|chunk| {
            let coords: Vec<FixedAngle> = chunk
                .chunks_exact(16)
                .map(|c| FixedAngle::from_raw(u128::from_le_bytes(c.try_into().expect("16 bytes"))))
                .collect();
            TorusPoint::from_coords(&coords).ok()
        })
        .collect()
}
