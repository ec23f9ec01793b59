//! Vortex accounting: the color pairing η, its edge field σ′, the per-edge
//! curl σ″ and the flux through a closed loop of cells.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring, PrismLayerIndex, MIN_PRISM_N};
use crate::error::{Error, Result};
use crate::lattice::{completions_of, is_adjacent, vertex_position2, CellCoord};
use crate::tracer::DirectedEdgeState;

/// Antisymmetric color pairing: −1 on (red, yellow), (yellow, blue),
/// (blue, red), +1 on the reversed pairs, 0 on equal colors.
#[inline]
pub fn eta(a: Color, b: Color) -> i64 {
    match (b.index() + 3 - a.index()) % 3 {
        0 => 0,
        1 => -1,
        _ => 1,
    }
}

/// σ′(v, w) = η(color(v), color(w)) for adjacent cells.
pub fn sigma_prime(v: CellCoord, w: CellCoord, col: &Coloring) -> Result<i64> {
    if !is_adjacent(v, w) {
        return Err(Error::InvalidState(format!(
            "cells {v:?} and {w:?} are not adjacent"
        )));
    }
    Ok(eta(col.color_at(v)?, col.color_at(w)?))
}

/// σ″(v, w, x) = ⅓(σ′(v,w) + σ′(w,x) + σ′(x,v)). Zero unless the three cells
/// carry three colors; (red, yellow, blue) in that cyclic order gives −1.
pub fn edge_curl(v: CellCoord, w: CellCoord, x: CellCoord, col: &Coloring) -> Result<i64> {
    completions_of(v, w, x)?;
    Ok(curl_of_colors(
        col.color_at(v)?,
        col.color_at(w)?,
        col.color_at(x)?,
    ))
}

#[inline]
pub(crate) fn curl_of_colors(a: Color, b: Color, c: Color) -> i64 {
    (eta(a, b) + eta(b, c) + eta(c, a)) / 3
}

/// Curl of a directed tricolor edge with its cells ordered so that their
/// right-handed normal points along the direction of travel (from the tail
/// vertex toward the head vertex).
///
/// Along any traced path this value is constant; reversing the path
/// negates it.
pub fn directed_curl(s: &DirectedEdgeState) -> i64 {
    let [r, y, b] = s.cells;
    let normal = cross(y.diff(r), b.diff(r));
    let travel = sub(
        vertex_position2([r, y, b, s.head]),
        vertex_position2([r, y, b, s.tail()]),
    );
    // (red, yellow, blue) has curl −1 when its normal points along travel
    if dot(normal, travel) > 0 {
        -1
    } else {
        1
    }
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A closed non-self-intersecting sequence of cells, consecutive ones
/// adjacent. The closing cell is implicit: the last cell is adjacent to the
/// first.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<CellCoord>", into = "Vec<CellCoord>")]
pub struct CellLoop(Vec<CellCoord>);

impl CellLoop {
    pub fn new(cells: Vec<CellCoord>) -> Result<CellLoop> {
        if cells.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a loop needs at least 3 cells, got {}",
                cells.len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(cells.len());
        for (i, &c) in cells.iter().enumerate() {
            if !seen.insert(c) {
                return Err(Error::InvalidParameter(format!("loop revisits cell {c:?}")));
            }
            let next = cells[(i + 1) % cells.len()];
            if !is_adjacent(c, next) {
                return Err(Error::InvalidParameter(format!(
                    "loop cells {c:?} and {next:?} are not adjacent"
                )));
            }
        }
        Ok(CellLoop(cells))
    }

    pub fn cells(&self) -> &[CellCoord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive pairs including the closing one.
    pub fn steps(&self) -> impl Iterator<Item = (CellCoord, CellCoord)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    pub fn reversed(&self) -> CellLoop {
        let mut cells = self.0.clone();
        cells.reverse();
        CellLoop(cells)
    }

    pub fn translated(&self, by: [i64; 3]) -> CellLoop {
        CellLoop(self.0.iter().map(|c| c.offset(by)).collect())
    }
}

impl TryFrom<Vec<CellCoord>> for CellLoop {
    type Error = Error;
    fn try_from(v: Vec<CellCoord>) -> Result<Self> {
        CellLoop::new(v)
    }
}

impl From<CellLoop> for Vec<CellCoord> {
    fn from(l: CellLoop) -> Self {
        l.0
    }
}

/// Sum of σ′ around a closed walk. Always a multiple of 3.
pub fn circulation(cl: &CellLoop, col: &Coloring) -> Result<i64> {
    let mut colors = Vec::with_capacity(cl.len());
    for &c in cl.cells() {
        colors.push(col.color_at(c)?);
    }
    let k = colors.len();
    Ok((0..k).map(|i| eta(colors[i], colors[(i + 1) % k])).sum())
}

/// Net number of tricolor edges passing through any surface bounded by the
/// loop, counted with sign.
pub fn loop_flux(cl: &CellLoop, col: &Coloring) -> Result<i64> {
    let total = circulation(cl, col)?;
    if total % 3 != 0 {
        return Err(Error::NonIntegerFlux(total));
    }
    Ok(total / 3)
}

/// Boundary of layer `k` of the prism `T_n`, clockwise as seen from
/// +(1,1,1).
///
/// The loop runs along the three rectangular sides through alternating cells
/// of the odd and even level of the layer, turning at the even-level corner
/// cells. Every cell of the loop lies on a side, so at most two colors occur
/// along each of its three arcs.
pub fn prism_boundary_loop(n: i64, k: i64) -> Result<CellLoop> {
    if n < MIN_PRISM_N {
        return Err(Error::InvalidParameter(format!(
            "prism size must be at least {MIN_PRISM_N}, got {n}"
        )));
    }
    let m = if n % 2 == 0 { n - 1 } else { n };
    // red corner to yellow corner along the side with the smallest z
    let mut arc = Vec::new();
    let mut c = [m - 3, 2, 2];
    arc.push(c);
    let mut up = false;
    while c[0] > 2 {
        c = [c[0] - 1, c[1] + 1, if up { c[2] + 1 } else { c[2] - 1 }];
        up = !up;
        arc.push(c);
    }
    let rotate = |v: [i64; 3]| [v[2], v[0], v[1]];
    let mut ccw = Vec::with_capacity(3 * arc.len());
    let mut side = arc;
    for _ in 0..3 {
        ccw.extend_from_slice(&side[..side.len() - 1]);
        side = side.into_iter().map(rotate).collect();
    }
    let mut cells = ccw
        .into_iter()
        .map(|v| CellCoord::new(v[0] + k, v[1] + k, v[2] + k))
        .collect::<Result<Vec<_>>>()?;
    cells.reverse();
    let cl = CellLoop::new(cells)?;
    debug_assert!(cl
        .cells()
        .iter()
        .all(|&c| PrismLayerIndex::locate(c, n).map(|l| l.k) == Some(k)));
    Ok(cl)
}
