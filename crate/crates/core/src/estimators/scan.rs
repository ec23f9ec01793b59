use serde::{Deserialize, Serialize};

use super::annulus::{annulus_crossing, AnnulusMode};
use super::Estimate;
use crate::coloring::ProbVector;
use crate::error::{Error, Result};
use crate::prf::{derive_seed, tag};

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PhasePoint {
    /// Integer barycentric weights `(i, j, k)` with `i + j + k = m`.
    pub weights: [u32; 3],
    pub p: [f64; 3],
    pub crossing: Estimate,
}

/// Annulus-crossing probabilities over the grid `{(i, j, k) / m}` of the
/// simplex.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PhaseMap {
    pub resolution: u32,
    pub n: i64,
    pub points: Vec<PhasePoint>,
}

impl PhaseMap {
    pub fn get(&self, weights: [u32; 3]) -> Option<&PhasePoint> {
        self.points.iter().find(|q| q.weights == weights)
    }
}

/// Seed of the grid point with weights `(i, j, k)`.
pub fn scan_point_seed(seed: u64, weights: [u32; 3]) -> u64 {
    let [i, j, _] = weights;
    derive_seed(seed, tag::SCAN, ((i as u64) << 32) | j as u64)
}

/// Runs [`annulus_crossing`] at every grid point, in lexicographic order of
/// the weights.
pub fn phase_scan(m: u32, n: i64, trials: u64, seed: u64, mode: AnnulusMode) -> Result<PhaseMap> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least 2, got {m}"
        )));
    }
    let mut points = Vec::new();
    for i in 0..=m {
        for j in 0..=m - i {
            let weights = [i, j, m - i - j];
            let p = ProbVector::new(
                i as f64 / m as f64,
                j as f64 / m as f64,
                (m - i - j) as f64 / m as f64,
            )?;
            let crossing = annulus_crossing(p, n, trials, scan_point_seed(seed, weights), mode)?;
            points.push(PhasePoint {
                weights,
                p: p.components(),
                crossing,
            });
        }
    }
    Ok(PhaseMap {
        resolution: m,
        n,
        points,
    })
}
