//! Seed-deterministic colorings of the lattice.
//!
//! A coloring is never materialized. Each cell carries the uniform variate
//! `u = unit(seed, cell)` and its color is read off the probability vector by
//! thresholds in the order red < yellow < blue: red if `u < p1`, yellow if
//! `u < p1 + p2`, blue otherwise. Raising `p3` with `u` fixed can therefore
//! only turn cells blue, never the reverse; the same threshold coupling
//! underlies the monotonicity checks in the estimators.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CellCoord;
use crate::prf;

/// Sum tolerance accepted by [`ProbVector::new`].
pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum Color {
    Red = 1,
    Yellow = 2,
    Blue = 3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Yellow, Color::Blue];

    /// Zero-based index (red 0, yellow 1, blue 2).
    #[inline]
    pub fn index(self) -> usize {
        self as usize - 1
    }

    #[inline]
    pub fn from_index(i: usize) -> Color {
        Color::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Yellow => "yellow",
            Color::Blue => "blue",
        }
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the probability simplex.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ProbVector([f64; 3]);

impl ProbVector {
    pub const UNIFORM: ProbVector = ProbVector([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);

    /// Validates each component in `[0, 1]` and the sum within
    /// [`PROB_TOLERANCE`], then renormalizes.
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let p = [p1, p2, p3];
        if p.iter().any(|x| !x.is_finite() || *x < 0.0 || *x > 1.0) {
            return Err(Error::InvalidProbability(format!(
                "components must lie in [0, 1], got {p:?}"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::InvalidProbability(format!(
                "components sum to {sum}, not 1"
            )));
        }
        Ok(ProbVector(p.map(|x| x / sum)))
    }

    /// The third component is inferred as `1 − p1 − p2`.
    pub fn from_two(p1: f64, p2: f64) -> Result<Self> {
        let p3 = 1.0 - p1 - p2;
        let p3 = if p3 < 0.0 && p3 > -PROB_TOLERANCE {
            0.0
        } else {
            p3
        };
        Self::new(p1, p2, p3)
    }

    #[inline]
    pub fn get(&self, c: Color) -> f64 {
        self.0[c.index()]
    }

    #[inline]
    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    /// Applies the color permutation `perm` (new color `i` gets the old
    /// weight of color `perm[i]`).
    pub fn permuted(&self, perm: [usize; 3]) -> ProbVector {
        ProbVector(perm.map(|i| self.0[i]))
    }

    /// Threshold rule mapping a uniform variate to a color.
    #[inline]
    pub fn color_for(&self, u: f64) -> Color {
        if u < self.0[0] {
            Color::Red
        } else if u < self.0[0] + self.0[1] {
            Color::Yellow
        } else {
            Color::Blue
        }
    }
}

impl TryFrom<[f64; 3]> for ProbVector {
    type Error = Error;

    fn try_from(p: [f64; 3]) -> Result<Self> {
        ProbVector::new(p[0], p[1], p[2])
    }
}

impl From<ProbVector> for [f64; 3] {
    fn from(p: ProbVector) -> Self {
        p.0
    }
}

/// Location of a cell inside the prism `T_n`: the layer shift `k` with
/// `c − (k,k,k) ∈ L_n = W_{n−1} ∪ W_n ∪ W_{n+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PrismLayerIndex {
    pub n: i64,
    pub k: i64,
}

impl PrismLayerIndex {
    /// Layer index of `c` in `T_n`, or `None` if `c ∉ T_n`.
    ///
    /// Layers partition the planes `x1 + x2 + x3 = s`: the shift is the
    /// unique `k` with `|s − n − 3k| ≤ 1`.
    #[inline]
    pub fn locate(c: CellCoord, n: i64) -> Option<PrismLayerIndex> {
        let s = c.x() + c.y() + c.z();
        let k = (s - n + 1).div_euclid(3);
        let u = [c.x() - k, c.y() - k, c.z() - k];
        if u.iter().all(|&v| v > 0) {
            Some(PrismLayerIndex { n, k })
        } else {
            None
        }
    }

    /// `c − (k,k,k)`, the representative of `c` in `L_n`.
    pub fn reduce(&self, c: CellCoord) -> [i64; 3] {
        [c.x() - self.k, c.y() - self.k, c.z() - self.k]
    }

    /// Level sum `m ∈ {n−1, n, n+1}` of the reduced cell.
    pub fn level(&self, c: CellCoord) -> i64 {
        self.reduce(c).iter().sum()
    }
}

/// Smallest prism size for which all three levels of a layer have three
/// distinct corner vertices.
pub const MIN_PRISM_N: i64 = 8;

/// Barycentric probability vector `p_{c,n}` of a prism cell.
///
/// The reduced cell lies on level `W_m`, whose cells are all odd (`m` odd,
/// coordinates ≥ 1) or all even (`m` even, coordinates ≥ 2). The corners are
/// `(m−2,1,1)`, `(1,m−2,1)`, `(1,1,m−2)` resp. `(m−4,2,2)`, …, so the weights
/// are the exact rationals `(u_i − 1)/(m − 3)` resp. `(u_i − 2)/(m − 6)`.
pub fn barycentric_p(c: CellCoord, n: i64) -> Result<ProbVector> {
    if n < MIN_PRISM_N {
        return Err(Error::InvalidParameter(format!(
            "prism size n = {n} is below the minimum {MIN_PRISM_N}"
        )));
    }
    let idx =
        PrismLayerIndex::locate(c, n).ok_or_else(|| Error::OutsideSupport(c.coords().to_vec()))?;
    let u = idx.reduce(c);
    let m: i64 = u.iter().sum();
    let (base, span) = if m.rem_euclid(2) == 1 {
        (1, m - 3)
    } else {
        (2, m - 6)
    };
    let num = u.map(|x| x - base);
    debug_assert!(num.iter().all(|&x| x >= 0) && num.iter().sum::<i64>() == span);
    let p = num.map(|x| x as f64 / span as f64);
    let sum: f64 = p.iter().sum();
    Ok(ProbVector(p.map(|x| (x / sum).clamp(0.0, 1.0))))
}

/// The law from which unconstrained cells draw their colors.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "law")]
pub enum Law {
    /// i.i.d. colors with a fixed probability vector.
    Uniform { p: ProbVector },
    /// Independent colors on `T_n` with the barycentric vector `p_{c,n}`.
    Prism { n: i64 },
}

/// An immutable, pure map from cells to colors.
#[derive(Clone, Debug)]
pub struct Coloring {
    law: Law,
    seed: u64,
    fixed: Arc<HashMap<CellCoord, Color>>,
}

impl Coloring {
    pub fn uniform(p: ProbVector, seed: u64) -> Coloring {
        Coloring {
            law: Law::Uniform { p },
            seed,
            fixed: Arc::default(),
        }
    }

    pub fn prism(n: i64, seed: u64) -> Result<Coloring> {
        if n < MIN_PRISM_N {
            return Err(Error::InvalidParameter(format!(
                "prism size n = {n} is below the minimum {MIN_PRISM_N}"
            )));
        }
        Ok(Coloring {
            law: Law::Prism { n },
            seed,
            fixed: Arc::default(),
        })
    }

    /// Overrides the colors of finitely many cells; all other cells keep the
    /// background law. Later entries win over earlier ones.
    pub fn with_fixed(mut self, cells: impl IntoIterator<Item = (CellCoord, Color)>) -> Coloring {
        let map = Arc::make_mut(&mut self.fixed);
        map.extend(cells);
        self
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fixed_cells(&self) -> &HashMap<CellCoord, Color> {
        &self.fixed
    }

    /// The uniform variate attached to a cell.
    #[inline]
    pub fn variate(&self, c: CellCoord) -> f64 {
        prf::unit_cell(self.seed, c.coords())
    }

    #[inline]
    pub fn color_at(&self, c: CellCoord) -> Result<Color> {
        if !self.fixed.is_empty() {
            if let Some(&col) = self.fixed.get(&c) {
                return Ok(col);
            }
        }
        match self.law {
            Law::Uniform { p } => Ok(p.color_for(self.variate(c))),
            Law::Prism { n } => Ok(barycentric_p(c, n)?.color_for(self.variate(c))),
        }
    }

    /// Whether `c` has a color under this coloring.
    pub fn supports(&self, c: CellCoord) -> bool {
        match self.law {
            Law::Uniform { .. } => true,
            Law::Prism { n } => {
                self.fixed.contains_key(&c) || PrismLayerIndex::locate(c, n).is_some()
            }
        }
    }

    /// Colors that can appear at `c` with positive probability.
    pub fn possible_colors(&self, c: CellCoord) -> Result<Vec<Color>> {
        if let Some(&col) = self.fixed.get(&c) {
            return Ok(vec![col]);
        }
        let p = match self.law {
            Law::Uniform { p } => p,
            Law::Prism { n } => barycentric_p(c, n)?,
        };
        Ok(Color::ALL
            .into_iter()
            .filter(|&col| p.get(col) > 0.0)
            .collect())
    }
}

/// The "straight" tricolor path fixture: cells `(i,i,i)` red, `(i,i,i+2)`
/// yellow and `(i−1,i+1,i+1)` blue for `i = 1..=len`, over `background`.
pub fn fixture_straight_path(len: i64, background: Coloring) -> Result<Coloring> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!(
            "straight path length must be at least 2, got {len}"
        )));
    }
    let mut cells = Vec::with_capacity(3 * len as usize);
    for i in 1..=len {
        cells.push((CellCoord::new(i, i, i)?, Color::Red));
        cells.push((CellCoord::new(i, i, i + 2)?, Color::Yellow));
        cells.push((CellCoord::new(i - 1, i + 1, i + 1)?, Color::Blue));
    }
    Ok(background.with_fixed(cells))
}
