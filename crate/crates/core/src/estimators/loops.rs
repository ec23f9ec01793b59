use serde::{Deserialize, Serialize};

use super::{check_trials, histogram_trials, Histogram};
use crate::coloring::{Coloring, ProbVector};
use crate::error::{Error, Result};
use crate::lattice::Region;
use crate::prf::{derive_seed, tag};
use crate::tracer::{trace, DirectedEdgeState, Termination};

/// Lengths of the loops through the origin edge.
///
/// Each trial colors the three cells of [`DirectedEdgeState::canonical_origin`]
/// red, yellow and blue and draws every other cell from `p`, then traces from
/// that state. Loops are binned by step count; traces reaching `cap` steps
/// count as truncated. The histogram is therefore conditioned on the origin
/// edge being tricolor.
pub fn loop_length_histogram(p: ProbVector, trials: u64, cap: u64, seed: u64) -> Result<Histogram> {
    check_trials(trials)?;
    if cap < 1 {
        return Err(Error::InvalidParameter(
            "step cap must be at least 1".into(),
        ));
    }
    let s0 = DirectedEdgeState::canonical_origin();
    histogram_trials(trials, cap, |t| {
        let col = Coloring::uniform(p, derive_seed(seed, tag::LOOPS, t))
            .with_fixed(DirectedEdgeState::canonical_origin_colors());
        let rec = trace(s0, &col, &Region::All, cap)?;
        Ok((rec.termination == Termination::LoopClosed).then_some(rec.steps))
    })
}

/// Least-squares line through `(length, ln frequency)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(bucket center, frequency)` pairs used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Fits `ln(frequency)` against length over `[lo, hi]`.
///
/// Lengths are grouped into consecutive buckets of `width` starting at `lo`;
/// a partial bucket at the top is dropped. Each bucket contributes its mean
/// frequency per unit length. Buckets with fewer than `min_count` samples
/// are left out, and the fit needs at least three.
pub fn exponential_tail_fit(
    h: &Histogram,
    lo: u64,
    hi: u64,
    width: u64,
    min_count: u64,
) -> Result<TailFit> {
    if width == 0 || hi < lo {
        return Err(Error::InvalidParameter("empty fit window".into()));
    }
    let total = h.total() as f64;
    let mut points = Vec::new();
    let mut start = lo;
    while start + width - 1 <= hi {
        let end = start + width - 1;
        let count: u64 = h.bins.range(start..=end).map(|(_, &v)| v).sum();
        if count >= min_count && count > 0 {
            let center = (start + end) as f64 / 2.0;
            points.push((center, count as f64 / total / width as f64));
        }
        start = end + 1;
    }
    if points.len() < 3 {
        return Err(Error::InsufficientSamples(format!(
            "{} populated buckets in [{lo}, {hi}], need 3",
            points.len()
        )));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(x, f)| (x, f.ln())).collect();
    let (slope, intercept, r_squared) = least_squares(&xy);
    Ok(TailFit {
        slope,
        intercept,
        r_squared,
        points,
    })
}

/// Slope, intercept and coefficient of determination.
pub(crate) fn least_squares(xy: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, my - slope * mx, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_is_conserved() {
        let h = loop_length_histogram(ProbVector::UNIFORM, 200, 500, 3).unwrap();
        assert_eq!(h.total(), 200);
        assert_eq!(h.cap, 500);
        assert!(h.bins.keys().all(|&k| k <= 500));
    }

    #[test]
    fn lengths_are_even() {
        let h =
            loop_length_histogram(ProbVector::new(0.6, 0.2, 0.2).unwrap(), 300, 10_000, 9).unwrap();
        assert!(h.bins.keys().all(|&k| k % 2 == 0 && k >= 4), "{:?}", h.bins);
    }

    #[test]
    fn fit_recovers_a_geometric_tail() {
        let mut h = Histogram::new(1000);
        for k in 1..200u64 {
            h.bins
                .insert(2 * k, (1e6 * (-0.05 * k as f64).exp()).round() as u64);
        }
        let fit = exponential_tail_fit(&h, 10, 200, 10, 1).unwrap();
        assert!((fit.slope + 0.025).abs() < 1e-3, "{}", fit.slope);
        assert!(fit.r_squared > 0.999);
    }

    #[test]
    fn fit_needs_points() {
        let h = Histogram::new(10);
        assert!(matches!(
            exponential_tail_fit(&h, 10, 200, 10, 1),
            Err(Error::InsufficientSamples(_))
        ));
    }

    #[test]
    fn least_squares_exact_line() {
        let (m, b, r2) = least_squares(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        assert!((m - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}
