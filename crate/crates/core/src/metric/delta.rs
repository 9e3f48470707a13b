use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};
use crate::spaces::Space;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaMode {
    /// All ordered quadruples of distinct indices.
    Exact,
    /// `count` uniformly drawn quadruples.
    Sampled { seed: u64, count: usize },
}

/// Largest four-point deficiency seen over the examined quadruples.
///
/// This is a lower bound for the hyperbolicity constant of the space: only
/// the supplied points are examined.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate {
    pub delta_hat: f64,
    /// `(p, x, y, z)` attaining `delta_hat`; `None` when nothing was positive.
    pub witness: Option<[Point; 4]>,
    pub sample_count: u64,
}

/// `(x|y)_p ∧ (y|z)_p − (x|z)_p`, with float noise snapped to zero.
pub(crate) fn deficiency(d: &[f64], n: usize, p: usize, x: usize, y: usize, z: usize) -> f64 {
    let (px, py, pz) = (d[p * n + x], d[p * n + y], d[p * n + z]);
    let (xy, yz, xz) = (d[x * n + y], d[y * n + z], d[x * n + z]);
    let raw = 0.5 * ((px + py - xy).min(py + pz - yz) - (px + pz - xz));
    let scale = px.max(py).max(pz).max(xy).max(yz).max(xz);
    if raw <= tol::noise(scale) {
        0.0
    } else {
        raw
    }
}

pub fn four_point_delta(space: &Space, points: &[Point], mode: DeltaMode) -> Result<DeltaEstimate> {
    let n = points.len();
    if matches!(mode, DeltaMode::Exact) && n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    if n == 0 {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = space.distance(&points[i], &points[j])?;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }

    let mut best = 0.0;
    let mut witness = None;
    let mut count = 0u64;
    let mut visit = |p: usize, x: usize, y: usize, z: usize| {
        count += 1;
        let v = deficiency(&d, n, p, x, y, z);
        if v > best {
            best = v;
            witness = Some([p, x, y, z]);
        }
    };
    match mode {
        DeltaMode::Exact => {
            // quadruples with a repeated index have non-positive deficiency
            for p in 0..n {
                for x in 0..n {
                    if x == p {
                        continue;
                    }
                    for y in 0..n {
                        if y == p || y == x {
                            continue;
                        }
                        for z in 0..n {
                            if z != p && z != x && z != y {
                                visit(p, x, y, z);
                            }
                        }
                    }
                }
            }
        }
        DeltaMode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                visit(q[0], q[1], q[2], q[3]);
            }
        }
    }
    Ok(DeltaEstimate {
        delta_hat: best,
        witness: witness.map(|w| w.map(|i| points[i])),
        sample_count: count,
    })
}

impl DeltaEstimate {
    /// Recomputes the deficiency of the witness quadruple.
    pub fn replay(&self, space: &Space) -> Result<f64> {
        let Some(w) = self.witness else {
            return Ok(0.0);
        };
        let mut d = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                d[i * 4 + j] = space.distance(&w[i], &w[j])?;
            }
        }
        Ok(deficiency(&d, 4, 0, 1, 2, 3))
    }
}
