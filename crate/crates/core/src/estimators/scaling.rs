use serde::{Deserialize, Serialize};
use serde_json::json;

use super::loops::least_squares;
use super::{check_trials, run_trials, Estimate};
use crate::coloring::{Coloring, ProbVector};
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::prf::{derive_seed, hash_coords, tag};
use crate::tracer::{DirectedEdgeState, Walk};

/// Bootstrap replicates for the slope error.
const BOOTSTRAP_REPLICATES: u64 = 400;

/// Squared head displacement `|head_L − head_0|²` after each of `lengths`
/// steps, or `None` from the first length the trace no longer reaches (it
/// closed a loop or left the region earlier).
pub fn squared_displacements(
    s0: DirectedEdgeState,
    col: &Coloring,
    region: &Region,
    lengths: &[u64],
) -> Result<Vec<Option<i64>>> {
    let max = lengths.iter().copied().max().unwrap_or(0);
    let mut out = vec![None; lengths.len()];
    if max == 0 {
        return Ok(out);
    }
    let mut walk = Walk::new(s0, col, region, max)?;
    let mut next = 0;
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]);
    while let Some(s) = walk.next_state()? {
        if walk.termination().is_some() {
            // the loop closed on this step
            break;
        }
        while next < order.len() && lengths[order[next]] == walk.steps() {
            let d = s.head.diff(s0.head);
            out[order[next]] = Some(d.iter().map(|v| v * v).sum());
            next += 1;
        }
    }
    Ok(out)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::InvalidParameter(
            "log-log fit needs two positive points".into(),
        ));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    Ok(least_squares(&xy).0)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub length: u64,
    pub mean_r2: f64,
    pub survivors: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ScalingFit {
    pub estimate: Estimate,
    pub points: Vec<ScalingPoint>,
}

/// Slope of `ln E[R²]` against `ln L` along traces from the origin edge.
///
/// Each trial forces the origin edge tricolor as in the loop histogram and
/// follows the path for up to the largest grid length. At each length the
/// mean is taken over traces still running there; traces that closed
/// earlier are left out and counted. The error is the standard deviation of
/// the slope over bootstrap resamples of the trials.
pub fn scaling_exponent(
    p: ProbVector,
    lengths: &[u64],
    trials: u64,
    seed: u64,
) -> Result<ScalingFit> {
    check_trials(trials)?;
    if lengths.len() < 3 || lengths.windows(2).any(|w| w[0] >= w[1]) || lengths[0] == 0 {
        return Err(Error::InvalidParameter(
            "length grid must be increasing, positive, with at least 3 points".into(),
        ));
    }
    let s0 = DirectedEdgeState::canonical_origin();
    let samples = run_trials(trials, |t| {
        let col = Coloring::uniform(p, derive_seed(seed, tag::SCALING, t))
            .with_fixed(DirectedEdgeState::canonical_origin_colors());
        squared_displacements(s0, &col, &Region::All, lengths)
    })?;

    let summarize = |rows: &mut dyn Iterator<Item = &Vec<Option<i64>>>| {
        let mut sums = vec![0f64; lengths.len()];
        let mut counts = vec![0u64; lengths.len()];
        for row in rows {
            for (j, v) in row.iter().enumerate() {
                if let Some(r2) = v {
                    sums[j] += *r2 as f64;
                    counts[j] += 1;
                }
            }
        }
        (sums, counts)
    };
    let (sums, counts) = summarize(&mut samples.iter());
    if let Some(j) = counts.iter().position(|&c| c < 2) {
        return Err(Error::InsufficientSamples(format!(
            "{} of {trials} traces reach length {}",
            counts[j], lengths[j]
        )));
    }
    let points: Vec<ScalingPoint> = (0..lengths.len())
        .map(|j| ScalingPoint {
            length: lengths[j],
            mean_r2: sums[j] / counts[j] as f64,
            survivors: counts[j],
        })
        .collect();
    let slope = fit_loglog(
        &points
            .iter()
            .map(|q| (q.length as f64, q.mean_r2))
            .collect::<Vec<_>>(),
    )?;

    let boot_seed = derive_seed(seed, tag::BOOTSTRAP, 0);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_REPLICATES as usize);
    for b in 0..BOOTSTRAP_REPLICATES {
        let mut pick = (0..trials)
            .map(|i| &samples[(hash_coords(boot_seed, &[b as i64, i as i64]) % trials) as usize]);
        let (s, c) = summarize(&mut pick);
        if c.contains(&0) {
            continue;
        }
        let pts: Vec<(f64, f64)> = (0..lengths.len())
            .map(|j| (lengths[j] as f64, s[j] / c[j] as f64))
            .collect();
        if let Ok(m) = fit_loglog(&pts) {
            slopes.push(m);
        }
    }
    let mean = slopes.iter().sum::<f64>() / slopes.len().max(1) as f64;
    let var =
        slopes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (slopes.len().max(2) - 1) as f64;
    let estimate = Estimate {
        value: slope,
        standard_error: var.sqrt(),
        trials,
        seed,
        params: json!({ "p": p.components(), "lengths": lengths }),
    };
    Ok(ScalingFit { estimate, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::fixture_straight_path;
    use crate::lattice::CellCoord;

    #[test]
    fn straight_path_is_ballistic() {
        let col = fixture_straight_path(80, Coloring::uniform(ProbVector::UNIFORM, 0)).unwrap();
        let c = |x, y, z| CellCoord::new(x, y, z).unwrap();
        let s0 =
            DirectedEdgeState::new(c(1, 1, 1), c(1, 1, 3), c(0, 2, 2), c(2, 2, 2), &col).unwrap();
        let lengths = [3, 6, 12, 24, 48, 96, 192];
        let r2 = squared_displacements(s0, &col, &Region::All, &lengths).unwrap();
        let pts: Vec<(f64, f64)> = lengths
            .iter()
            .zip(&r2)
            .map(|(&l, v)| (l as f64, v.unwrap() as f64))
            .collect();
        let slope = fit_loglog(&pts).unwrap();
        assert!((slope - 2.0).abs() < 0.02, "{slope}");
    }

    #[test]
    fn displacement_stops_at_loop_closure() {
        let col = Coloring::uniform(ProbVector::new(0.8, 0.1, 0.1).unwrap(), 1)
            .with_fixed(DirectedEdgeState::canonical_origin_colors());
        let s0 = DirectedEdgeState::canonical_origin();
        let rec = crate::tracer::trace(s0, &col, &Region::All, 1_000_000).unwrap();
        let l = rec.steps;
        let r2 = squared_displacements(s0, &col, &Region::All, &[l - 1, l, l + 1]).unwrap();
        assert!(r2[0].is_some());
        assert_eq!(r2[1], None);
        assert_eq!(r2[2], None);
    }

    #[test]
    fn grid_validation() {
        assert!(scaling_exponent(ProbVector::UNIFORM, &[10, 20], 10, 0).is_err());
        assert!(scaling_exponent(ProbVector::UNIFORM, &[10, 10, 20], 10, 0).is_err());
        let compact = ProbVector::new(0.9, 0.05, 0.05).unwrap();
        assert!(matches!(
            scaling_exponent(compact, &[1000, 2000, 4000], 20, 0),
            Err(Error::InsufficientSamples(_))
        ));
    }
}
