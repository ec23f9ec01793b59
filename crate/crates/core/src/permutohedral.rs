//! The permutohedral lattice of order `d` and its full-spectrum paths.
//!
//! `L_d` is the set of integer `d`-vectors summing to zero whose
//! coordinates are all congruent mod `d`. Its Voronoi cells are permutohedra
//! tiling the `(d−1)`-dimensional hyperplane `Σx = 0`; `d = 4` recovers the
//! body-centered cubic cells and `d = 3` the hexagonal tiling.
//!
//! Cells are colored with `m = d − 1` colors, one per cell of an edge
//! (a `(d−1)`-clique). An edge is full-spectrum when its cells carry all `m`
//! colors, and every vertex (a `d`-clique) with all colors present has
//! exactly two full-spectrum edges, so paths are traced exactly as in three
//! dimensions. Note the indexing: order `d` means `m = d − 1` colors in a
//! space of dimension `d − 1`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{histogram_trials, Histogram};
use crate::prf::{derive_seed, hash_coords, tag, to_unit};
use crate::tracer::Termination;

/// Largest supported order; neighbor lists have `2^d − 2` entries.
pub const MAX_ORDER: usize = 12;

fn check_order(d: usize) -> Result<()> {
    if !(3..=MAX_ORDER).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "order must be in [3, {MAX_ORDER}], got {d}"
        )));
    }
    Ok(())
}

/// Whether `v` is a point of `L_d`.
pub fn is_lattice_point(v: &[i64], d: usize) -> Result<bool> {
    check_order(d)?;
    if v.len() != d {
        return Err(Error::InvalidParameter(format!(
            "expected {d} coordinates, got {}",
            v.len()
        )));
    }
    let r = v[0].rem_euclid(d as i64);
    Ok(v.iter().sum::<i64>() == 0 && v.iter().all(|x| x.rem_euclid(d as i64) == r))
}

/// The generator `v_F`: `|F| − d` on the coordinates in `F`, `|F|` elsewhere.
/// `subset` lists 0-based coordinate indices and must be nonempty and
/// proper.
pub fn generator_vf(subset: &[usize], d: usize) -> Result<Vec<i64>> {
    check_order(d)?;
    let mut mask = 0u32;
    for &i in subset {
        if i >= d {
            return Err(Error::InvalidParameter(format!(
                "index {i} out of range for order {d}"
            )));
        }
        mask |= 1 << i;
    }
    if mask == 0 || mask == (1 << d) - 1 {
        return Err(Error::InvalidParameter(
            "subset must be nonempty and proper".into(),
        ));
    }
    Ok(vf_mask(mask, d))
}

fn vf_mask(mask: u32, d: usize) -> Vec<i64> {
    let k = mask.count_ones() as i64;
    (0..d)
        .map(|i| if mask >> i & 1 == 1 { k - d as i64 } else { k })
        .collect()
}

/// A cell of `L_d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PermCell(Vec<i64>);

impl PermCell {
    pub fn new(coords: Vec<i64>) -> Result<PermCell> {
        let d = coords.len();
        if !is_lattice_point(&coords, d)? {
            return Err(Error::InvalidParameter(format!(
                "{coords:?} is not a lattice point"
            )));
        }
        if coords
            .iter()
            .any(|x| x.abs() >= crate::lattice::COORD_LIMIT)
        {
            return Err(Error::CoordinateRange(
                *coords.iter().max_by_key(|x| x.abs()).unwrap(),
            ));
        }
        Ok(PermCell(coords))
    }

    pub fn origin(d: usize) -> Result<PermCell> {
        check_order(d)?;
        Ok(PermCell(vec![0; d]))
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    fn add(&self, v: &[i64]) -> PermCell {
        PermCell(self.0.iter().zip(v).map(|(a, b)| a + b).collect())
    }

    pub fn linf_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl std::fmt::Debug for PermCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<i64>> for PermCell {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        PermCell::new(v)
    }
}

impl From<PermCell> for Vec<i64> {
    fn from(c: PermCell) -> Self {
        c.0
    }
}

/// The `2^d − 2` neighbors `c + v_F`, in increasing order of the bitmask of
/// `F`.
pub fn neighbors_d(c: &PermCell) -> Vec<PermCell> {
    let d = c.d();
    (1..(1u32 << d) - 1)
        .map(|mask| c.add(&vf_mask(mask, d)))
        .collect()
}

/// Neighbors found by searching all differences with entries in `(−d, d)`;
/// sorted. Exponential in `d`, for cross-checking.
pub fn neighbors_by_search(c: &PermCell) -> Vec<PermCell> {
    let d = c.d();
    let b = d as i64 - 1;
    let mut out = Vec::new();
    let mut delta = vec![-b; d];
    loop {
        if delta.iter().any(|&x| x != 0) && is_lattice_point(&delta, d).unwrap_or(false) {
            out.push(c.add(&delta));
        }
        let mut i = 0;
        loop {
            if i == d {
                out.sort();
                return out;
            }
            if delta[i] < b {
                delta[i] += 1;
                break;
            }
            delta[i] = -b;
            i += 1;
        }
    }
}

/// Adjacency: distinct cells whose difference has all entries in `(−d, d)`.
pub fn is_adjacent_d(a: &PermCell, b: &PermCell) -> bool {
    let d = a.d() as i64;
    a.d() == b.d() && a != b && a.0.iter().zip(&b.0).all(|(x, y)| (x - y).abs() < d)
}

/// The cells completing a `(d−1)`-clique to a `d`-clique, sorted.
pub fn clique_completions_d(cells: &[PermCell]) -> Result<[PermCell; 2]> {
    let d = cells.first().map_or(0, PermCell::d);
    check_order(d)?;
    if cells.len() != d - 1 {
        return Err(Error::NotAClique(cells.len()));
    }
    for (i, a) in cells.iter().enumerate() {
        if a.d() != d || cells[i + 1..].iter().any(|b| !is_adjacent_d(a, b)) {
            return Err(Error::NotAClique(cells.len()));
        }
    }
    let mut found: Vec<PermCell> = neighbors_d(&cells[0])
        .into_iter()
        .filter(|w| cells[1..].iter().all(|c| is_adjacent_d(w, c)))
        .collect();
    found.sort();
    match <[PermCell; 2]>::try_from(found) {
        Ok(pair) => Ok(pair),
        Err(v) => Err(Error::ModelViolation(format!(
            "clique {cells:?} has {} completions",
            v.len()
        ))),
    }
}

/// A set of `d − 1` pairwise adjacent cells, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PermEdgeClique(Vec<PermCell>);

impl PermEdgeClique {
    pub fn new(mut cells: Vec<PermCell>) -> Result<PermEdgeClique> {
        clique_completions_d(&cells)?;
        cells.sort();
        Ok(PermEdgeClique(cells))
    }

    pub fn cells(&self) -> &[PermCell] {
        &self.0
    }

    pub fn completions(&self) -> [PermCell; 2] {
        clique_completions_d(&self.0).expect("validated clique")
    }
}

/// Nearest point of `L_d` to `z` (which should satisfy `Σz = 0`).
///
/// For each residue `r` the points are `r·1 + d·k` with `Σk = −r`; the
/// nearest such `k` rounds `(z − r)/d` and then fixes the sum by moving the
/// coordinates with the largest rounding error.
pub fn nearest_lattice_point(z: &[f64]) -> Result<PermCell> {
    let d = z.len();
    check_order(d)?;
    let df = d as f64;
    let mut best: Option<(f64, Vec<i64>)> = None;
    for r in 0..d as i64 {
        let y: Vec<f64> = z.iter().map(|&x| (x - r as f64) / df).collect();
        let mut k: Vec<i64> = y.iter().map(|v| v.round() as i64).collect();
        let deficit = -r - k.iter().sum::<i64>();
        let mut idx: Vec<usize> = (0..d).collect();
        // residual y − k; raise the largest, lower the smallest
        idx.sort_by(|&a, &b| (y[b] - k[b] as f64).total_cmp(&(y[a] - k[a] as f64)));
        if deficit > 0 {
            for &i in idx.iter().take(deficit as usize) {
                k[i] += 1;
            }
        } else {
            for &i in idx.iter().rev().take((-deficit) as usize) {
                k[i] -= 1;
            }
        }
        let v: Vec<i64> = k.iter().map(|&ki| r + d as i64 * ki).collect();
        let dist: f64 = v.iter().zip(z).map(|(&a, &b)| (a as f64 - b).powi(2)).sum();
        if best.as_ref().is_none_or(|(bd, _)| dist < *bd) {
            best = Some((dist, v));
        }
    }
    PermCell::new(best.expect("d >= 3").1)
}

/// Whether `z` lies in the permutohedron around `c`: the convex hull of the
/// permutations of `(1, …, d) − (d+1)/2`, translated to `c`.
///
/// A sum-zero point lies in it iff for every `k` the sum of its `k` smallest
/// coordinates is at least `−k(d−k)/2`.
pub fn permutohedron_contains(c: &PermCell, z: &[f64], tol: f64) -> bool {
    let d = c.d();
    if z.len() != d {
        return false;
    }
    let mut w: Vec<f64> = z
        .iter()
        .zip(c.coords())
        .map(|(&a, &b)| a - b as f64)
        .collect();
    if w.iter().sum::<f64>().abs() > tol * d as f64 {
        return false;
    }
    w.sort_by(f64::total_cmp);
    let mut prefix = 0.0;
    for (k, x) in w.iter().enumerate().take(d - 1) {
        prefix += x;
        let k = (k + 1) as f64;
        if prefix < -k * (d as f64 - k) / 2.0 - tol {
            return false;
        }
    }
    true
}

/// A coloring of `L_d` with colors `0..m`.
pub trait PermColoring: Sync {
    fn colors(&self) -> usize;
    fn color_at(&self, c: &PermCell) -> Result<usize>;
}

/// Independent colors with probabilities `probs` (threshold rule on a
/// per-cell variate), optionally overridden on finitely many cells.
#[derive(Clone, Debug)]
pub struct UniformPermColoring {
    cumulative: Vec<f64>,
    seed: u64,
    fixed: Arc<HashMap<PermCell, usize>>,
}

impl UniformPermColoring {
    /// Equal weights on `m` colors.
    pub fn equal(m: usize, seed: u64) -> Result<UniformPermColoring> {
        UniformPermColoring::new(&vec![1.0 / m.max(1) as f64; m], seed)
    }

    pub fn new(probs: &[f64], seed: u64) -> Result<UniformPermColoring> {
        if probs.len() < 2 || probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidProbability(format!("{probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > crate::coloring::PROB_TOLERANCE {
            return Err(Error::InvalidProbability(format!(
                "{probs:?} sums to {total}"
            )));
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        Ok(UniformPermColoring {
            cumulative,
            seed,
            fixed: Arc::new(HashMap::new()),
        })
    }

    pub fn with_fixed(
        mut self,
        cells: impl IntoIterator<Item = (PermCell, usize)>,
    ) -> UniformPermColoring {
        Arc::make_mut(&mut self.fixed).extend(cells);
        self
    }
}

impl PermColoring for UniformPermColoring {
    fn colors(&self) -> usize {
        self.cumulative.len()
    }

    fn color_at(&self, c: &PermCell) -> Result<usize> {
        if let Some(&k) = self.fixed.get(c) {
            return Ok(k);
        }
        let u = to_unit(hash_coords(self.seed, c.coords()));
        let m = self.cumulative.len();
        Ok(self.cumulative[..m - 1]
            .iter()
            .position(|&t| u < t)
            .unwrap_or(m - 1))
    }
}

/// A full-spectrum edge indexed by color, directed toward the vertex
/// completed by `head`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PermState {
    pub cells: Vec<PermCell>,
    pub head: PermCell,
}

impl PermState {
    /// Validates cliques and colors: `cells[i]` must have color `i`.
    pub fn new(cells: Vec<PermCell>, head: PermCell, col: &dyn PermColoring) -> Result<PermState> {
        let d = head.d();
        check_order(d)?;
        if col.colors() != d - 1 {
            return Err(Error::InvalidParameter(format!(
                "order {d} needs {} colors, coloring has {}",
                d - 1,
                col.colors()
            )));
        }
        let [a, b] = clique_completions_d(&cells)?;
        if head != a && head != b {
            return Err(Error::InvalidState(format!(
                "{head:?} does not complete {cells:?}"
            )));
        }
        for (i, c) in cells.iter().enumerate() {
            let k = col.color_at(c)?;
            if k != i {
                return Err(Error::InvalidState(format!(
                    "cell {c:?} has color {k}, expected {i}"
                )));
            }
        }
        Ok(PermState { cells, head })
    }

    /// Cells `0, v_{S_1}, …, v_{S_{d−2}}` with head `v_{S_{d−1}}`, where
    /// `S_j = {0, …, j−1}`: a vertex around the origin. Color `j` must be
    /// forced on cell `j` (see [`PermState::canonical_colors`]).
    pub fn canonical(d: usize) -> Result<PermState> {
        check_order(d)?;
        let chain = |j: usize| -> PermCell {
            if j == 0 {
                PermCell(vec![0; d])
            } else {
                PermCell(vf_mask((1u32 << j) - 1, d))
            }
        };
        Ok(PermState {
            cells: (0..d - 1).map(chain).collect(),
            head: chain(d - 1),
        })
    }

    pub fn canonical_colors(d: usize) -> Result<Vec<(PermCell, usize)>> {
        Ok(PermState::canonical(d)?
            .cells
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect())
    }

    pub fn edge(&self) -> PermEdgeClique {
        let mut cells = self.cells.clone();
        cells.sort();
        PermEdgeClique(cells)
    }

    pub fn tail(&self) -> PermCell {
        let [a, b] = clique_completions_d(&self.cells).expect("valid state");
        if a == self.head {
            b
        } else {
            a
        }
    }

    pub fn reversed(&self) -> PermState {
        PermState {
            cells: self.cells.clone(),
            head: self.tail(),
        }
    }
}

/// One step: the cell of the head's color is displaced by the head, and the
/// new head is the completion of the new edge other than the displaced cell.
pub fn step_d(s: &PermState, col: &dyn PermColoring) -> Result<PermState> {
    let k = col.color_at(&s.head)?;
    if k >= s.cells.len() {
        return Err(Error::InvalidState(format!("color {k} out of range")));
    }
    let mut cells = s.cells.clone();
    let displaced = std::mem::replace(&mut cells[k], s.head.clone());
    let [a, b] = clique_completions_d(&cells)?;
    let head = if a == displaced {
        b
    } else if b == displaced {
        a
    } else {
        return Err(Error::ModelViolation(format!(
            "{displaced:?} is not a completion of {cells:?}"
        )));
    };
    Ok(PermState { cells, head })
}

/// Cells a trace may consult.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PermRegion {
    All,
    /// Cells with every coordinate at most `radius` in absolute value.
    Box {
        radius: i64,
    },
}

impl PermRegion {
    pub fn contains(&self, c: &PermCell) -> bool {
        match *self {
            PermRegion::All => true,
            PermRegion::Box { radius } => c.linf_norm() <= radius,
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PermPathRecord {
    pub start: PermState,
    pub end: PermState,
    pub steps: u64,
    pub termination: Termination,
    pub displacement: Vec<i64>,
}

/// Traces until the start state recurs, the head leaves `region`, or `cap`
/// steps, with the same conventions as the three-dimensional tracer.
pub fn trace_d(
    s0: &PermState,
    col: &dyn PermColoring,
    region: &PermRegion,
    cap: u64,
) -> Result<PermPathRecord> {
    if cap < 1 {
        return Err(Error::InvalidParameter(
            "step cap must be at least 1".into(),
        ));
    }
    let s0 = PermState::new(s0.cells.clone(), s0.head.clone(), col)?;
    let mut s = s0.clone();
    let mut steps = 0;
    let termination = loop {
        if steps >= cap {
            break Termination::StepCap;
        }
        if !region.contains(&s.head) {
            break Termination::RegionExit;
        }
        s = step_d(&s, col)?;
        steps += 1;
        if s == s0 {
            break Termination::LoopClosed;
        }
    };
    let displacement = s
        .head
        .0
        .iter()
        .zip(&s0.head.0)
        .map(|(a, b)| a - b)
        .collect();
    Ok(PermPathRecord {
        start: s0,
        end: s,
        steps,
        termination,
        displacement,
    })
}

/// Loop lengths through the canonical edge of order `d` under equal color
/// weights, with the canonical cells forced to colors `0..d−1`; the analog
/// of [`crate::estimators::loop_length_histogram`].
pub fn loop_length_histogram_d(d: usize, trials: u64, cap: u64, seed: u64) -> Result<Histogram> {
    check_order(d)?;
    if trials == 0 || cap < 1 {
        return Err(Error::InvalidParameter(
            "trials and cap must be at least 1".into(),
        ));
    }
    let s0 = PermState::canonical(d)?;
    let forced = PermState::canonical_colors(d)?;
    histogram_trials(trials, cap, |t| {
        let col = UniformPermColoring::equal(d - 1, derive_seed(seed, tag::PERMUTOHEDRAL, t))?
            .with_fixed(forced.iter().cloned());
        let rec = trace_d(&s0, &col, &PermRegion::All, cap)?;
        Ok((rec.termination == Termination::LoopClosed).then_some(rec.steps))
    })
}

/// The isomorphism from `L_4` onto the body-centered cubic lattice.
pub fn to_bcc(c: &PermCell) -> Result<crate::lattice::CellCoord> {
    if c.d() != 4 {
        return Err(Error::InvalidParameter(
            "only order 4 maps to three dimensions".into(),
        ));
    }
    let x = c.coords();
    let f = |s: i64| s / 4;
    crate::lattice::CellCoord::new(
        f(x[0] + x[1] - x[2] - x[3]),
        f(x[0] - x[1] + x[2] - x[3]),
        f(x[0] - x[1] - x[2] + x[3]),
    )
}

/// Inverse of [`to_bcc`].
pub fn from_bcc(c: crate::lattice::CellCoord) -> PermCell {
    let [a, b, e] = c.coords();
    PermCell(vec![a + b + e, a - b - e, -a + b - e, -a - b + e])
}
