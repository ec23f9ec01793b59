//! Geometry and combinatorics of the body-centered cubic lattice
//! `L = 2Z^3 ∪ (2Z^3 + (1,1,1))`, whose Voronoi cells are truncated octahedra.
//!
//! Cells are identified with lattice points. Two cells share a square face
//! when they differ by `(±2,0,0)` (or a permutation), and a hexagonal face when
//! they differ by `(±1,±1,±1)`. Tessellation edges are 3-cliques of mutually
//! adjacent cells and tessellation vertices are 4-cliques.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::PrismLayerIndex;
use crate::error::{Error, Result};

/// Coordinates must satisfy `|c| < COORD_LIMIT`.
pub const COORD_LIMIT: i64 = 1 << 60;

/// Square-face offsets, axis by axis, negative first.
pub const SQUARE_OFFSETS: [[i64; 3]; 6] = [
    [-2, 0, 0],
    [2, 0, 0],
    [0, -2, 0],
    [0, 2, 0],
    [0, 0, -2],
    [0, 0, 2],
];

/// Hexagonal-face offsets in sign-lexicographic order (`-` before `+`).
pub const HEX_OFFSETS: [[i64; 3]; 8] = [
    [-1, -1, -1],
    [-1, -1, 1],
    [-1, 1, -1],
    [-1, 1, 1],
    [1, -1, -1],
    [1, -1, 1],
    [1, 1, -1],
    [1, 1, 1],
];

/// All 14 neighbor offsets: squares first, then hexagons.
pub const NEIGHBOR_OFFSETS: [[i64; 3]; 14] = [
    SQUARE_OFFSETS[0],
    SQUARE_OFFSETS[1],
    SQUARE_OFFSETS[2],
    SQUARE_OFFSETS[3],
    SQUARE_OFFSETS[4],
    SQUARE_OFFSETS[5],
    HEX_OFFSETS[0],
    HEX_OFFSETS[1],
    HEX_OFFSETS[2],
    HEX_OFFSETS[3],
    HEX_OFFSETS[4],
    HEX_OFFSETS[5],
    HEX_OFFSETS[6],
    HEX_OFFSETS[7],
];

/// A cell center: a point of `Z^3` whose coordinates are all even or all odd.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 3]", into = "[i64; 3]")]
pub struct CellCoord([i64; 3]);

impl CellCoord {
    pub const ORIGIN: CellCoord = CellCoord([0, 0, 0]);

    pub fn new(x: i64, y: i64, z: i64) -> Result<Self> {
        for c in [x, y, z] {
            if c.abs() >= COORD_LIMIT {
                return Err(Error::CoordinateRange(c));
            }
        }
        if !is_lattice_point([x, y, z]) {
            return Err(Error::OffLattice(x, y, z));
        }
        Ok(CellCoord([x, y, z]))
    }

    /// Skips validation. The caller guarantees the parity invariant.
    #[inline]
    pub(crate) const fn from_raw(c: [i64; 3]) -> Self {
        CellCoord(c)
    }

    #[inline]
    pub fn x(self) -> i64 {
        self.0[0]
    }

    #[inline]
    pub fn y(self) -> i64 {
        self.0[1]
    }

    #[inline]
    pub fn z(self) -> i64 {
        self.0[2]
    }

    #[inline]
    pub fn coords(self) -> [i64; 3] {
        self.0
    }

    /// Translation by a lattice vector (itself a cell of `L`).
    #[inline]
    pub fn translate(self, by: CellCoord) -> CellCoord {
        self.offset(by.0)
    }

    /// `self + d`. Offsets must preserve parity (neighbor offsets, or any
    /// lattice vector); checked in debug builds.
    #[inline]
    pub fn offset(self, d: [i64; 3]) -> CellCoord {
        let c = [self.0[0] + d[0], self.0[1] + d[1], self.0[2] + d[2]];
        debug_assert!(is_lattice_point(c));
        CellCoord(c)
    }

    #[inline]
    pub fn diff(self, other: CellCoord) -> [i64; 3] {
        [
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ]
    }

    #[inline]
    pub fn linf_norm(self) -> i64 {
        self.0[0].abs().max(self.0[1].abs()).max(self.0[2].abs())
    }

    #[inline]
    pub fn linf_dist(self, other: CellCoord) -> i64 {
        let d = self.diff(other);
        d[0].abs().max(d[1].abs()).max(d[2].abs())
    }

    /// The 14 neighbors in the order of [`NEIGHBOR_OFFSETS`].
    #[inline]
    pub fn neighbors(self) -> [CellCoord; 14] {
        NEIGHBOR_OFFSETS.map(|d| self.offset(d))
    }
}

impl fmt::Debug for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl TryFrom<[i64; 3]> for CellCoord {
    type Error = Error;

    fn try_from(c: [i64; 3]) -> Result<Self> {
        CellCoord::new(c[0], c[1], c[2])
    }
}

impl From<CellCoord> for [i64; 3] {
    fn from(c: CellCoord) -> Self {
        c.0
    }
}

#[inline]
pub fn is_lattice_point(c: [i64; 3]) -> bool {
    let p = c[0].rem_euclid(2);
    c[1].rem_euclid(2) == p && c[2].rem_euclid(2) == p
}

/// Neighbors of an arbitrary integer point; rejects points off the lattice.
pub fn neighbors(c: [i64; 3]) -> Result<[CellCoord; 14]> {
    Ok(CellCoord::try_from(c)?.neighbors())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacencyKind {
    Square,
    Hexagonal,
    None,
}

#[inline]
pub fn adjacency(a: CellCoord, b: CellCoord) -> AdjacencyKind {
    let d = a.diff(b);
    let [x, y, z] = d.map(i64::abs);
    if x == 1 && y == 1 && z == 1 {
        AdjacencyKind::Hexagonal
    } else if (x == 2 && y == 0 && z == 0)
        || (x == 0 && y == 2 && z == 0)
        || (x == 0 && y == 0 && z == 2)
    {
        AdjacencyKind::Square
    } else {
        AdjacencyKind::None
    }
}

#[inline]
pub fn is_adjacent(a: CellCoord, b: CellCoord) -> bool {
    adjacency(a, b) != AdjacencyKind::None
}

/// Adjacency of two integer points; rejects points off the lattice.
pub fn adjacency_kind(a: [i64; 3], b: [i64; 3]) -> Result<AdjacencyKind> {
    Ok(adjacency(CellCoord::try_from(a)?, CellCoord::try_from(b)?))
}

/// A tessellation edge: three pairwise adjacent cells, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct EdgeClique([CellCoord; 3]);

impl EdgeClique {
    pub fn new(a: CellCoord, b: CellCoord, c: CellCoord) -> Result<Self> {
        if !(is_adjacent(a, b) && is_adjacent(b, c) && is_adjacent(a, c)) {
            return Err(Error::NotAClique(3));
        }
        Ok(Self::new_unchecked(a, b, c))
    }

    #[inline]
    pub(crate) fn new_unchecked(a: CellCoord, b: CellCoord, c: CellCoord) -> Self {
        let mut cells = [a, b, c];
        cells.sort_unstable();
        EdgeClique(cells)
    }

    #[inline]
    pub fn cells(&self) -> [CellCoord; 3] {
        self.0
    }

    pub fn contains(&self, c: CellCoord) -> bool {
        self.0.contains(&c)
    }

    /// The two cells completing this edge to a 4-clique, i.e. the two
    /// endpoint vertices of the edge, in ascending order.
    pub fn completions(&self) -> [CellCoord; 2] {
        let [a, b] = clique_completions(self.0);
        if a < b {
            [a, b]
        } else {
            [b, a]
        }
    }
}

/// A tessellation vertex: four pairwise adjacent cells, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexClique([CellCoord; 4]);

impl VertexClique {
    pub fn new(cells: [CellCoord; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in i + 1..4 {
                if !is_adjacent(cells[i], cells[j]) {
                    return Err(Error::NotAClique(4));
                }
            }
        }
        let mut cells = cells;
        cells.sort_unstable();
        Ok(VertexClique(cells))
    }

    #[inline]
    pub fn cells(&self) -> [CellCoord; 4] {
        self.0
    }

    /// The four edges incident to this vertex.
    pub fn edges(&self) -> [EdgeClique; 4] {
        let c = self.0;
        [
            EdgeClique::new_unchecked(c[1], c[2], c[3]),
            EdgeClique::new_unchecked(c[0], c[2], c[3]),
            EdgeClique::new_unchecked(c[0], c[1], c[3]),
            EdgeClique::new_unchecked(c[0], c[1], c[2]),
        ]
    }

    /// Position of the tessellation vertex, in doubled coordinates.
    pub fn position2(&self) -> [i64; 3] {
        vertex_position2(self.0)
    }
}

/// Both completions of a 3-clique. Every 3-clique of `L` has one square pair
/// `{a, b}` (differing by `2e_i`) and a third cell `c` at `m + s_j e_j + s_k e_k`
/// from their midpoint `m`; the completions are `m ∓ s_j e_j ± s_k e_k`.
#[inline]
pub(crate) fn clique_completions(t: [CellCoord; 3]) -> [CellCoord; 2] {
    let (a, b, c) = if adjacency(t[0], t[1]) == AdjacencyKind::Square {
        (t[0], t[1], t[2])
    } else if adjacency(t[0], t[2]) == AdjacencyKind::Square {
        (t[0], t[2], t[1])
    } else {
        (t[1], t[2], t[0])
    };
    let m = [
        (a.x() + b.x()) / 2,
        (a.y() + b.y()) / 2,
        (a.z() + b.z()) / 2,
    ];
    let r = [c.x() - m[0], c.y() - m[1], c.z() - m[2]];
    let axis = (0..3).find(|&i| r[i] == 0).expect("square pair axis");
    let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
    let mut first = m;
    first[j] -= r[j];
    first[k] += r[k];
    let mut second = m;
    second[j] += r[j];
    second[k] -= r[k];
    [CellCoord::from_raw(first), CellCoord::from_raw(second)]
}

/// The two cells `d` for which `e ∪ {d}` is a 4-clique (ascending order).
pub fn edge_completions(e: &EdgeClique) -> [CellCoord; 2] {
    e.completions()
}

/// Validating form of [`edge_completions`] for raw triples.
pub fn completions_of(a: CellCoord, b: CellCoord, c: CellCoord) -> Result<[CellCoord; 2]> {
    Ok(EdgeClique::new(a, b, c)?.completions())
}

/// The 24 vertices of the truncated octahedron centered at the origin, in
/// doubled coordinates: all permutations of `(0, ±1, ±2)`.
pub fn cell_vertex_offsets2() -> [[i64; 3]; 24] {
    let mut out = [[0i64; 3]; 24];
    let mut n = 0;
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in PERMS {
        for s1 in [-1i64, 1] {
            for s2 in [-1i64, 1] {
                let vals = [0, s1, 2 * s2];
                let mut v = [0i64; 3];
                for (slot, &src) in perm.iter().enumerate() {
                    v[slot] = vals[src];
                }
                out[n] = v;
                n += 1;
            }
        }
    }
    out
}

/// Position (doubled coordinates) of the tessellation vertex shared by a
/// 4-clique: the point equidistant from all four centers.
pub fn vertex_position2(cells: [CellCoord; 4]) -> [i64; 3] {
    let base = cells[0].coords().map(|x| 2 * x);
    let dist2 = |p: [i64; 3], c: CellCoord| -> i64 {
        let q = c.coords();
        (0..3).map(|i| (p[i] - 2 * q[i]).pow(2)).sum()
    };
    for off in cell_vertex_offsets2() {
        let p = [base[0] + off[0], base[1] + off[1], base[2] + off[2]];
        let r = dist2(p, cells[0]);
        if cells[1..].iter().all(|&c| dist2(p, c) == r) {
            return p;
        }
    }
    unreachable!("4-clique without a common vertex")
}

/// A finite or infinite set of cells. Membership is defined on cells; a
/// clique lies in a region iff all of its cells do.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Region {
    /// Cells with `‖c − center‖∞ ≤ radius`.
    Box { radius: i64, center: CellCoord },
    /// The cubic annulus `([-3n,3n]^3 \ [-n,n]^3) ∩ L`, translated by `center`.
    Annulus { n: i64, center: CellCoord },
    /// Cells with `inner < ‖c − center‖∞ ≤ outer`.
    Shell {
        inner: i64,
        outer: i64,
        center: CellCoord,
    },
    /// The triangular prism `T_n`, optionally restricted to the layers
    /// `L_{k,n}` with `lo ≤ k ≤ hi`.
    Prism { n: i64, layers: Option<(i64, i64)> },
    /// The whole lattice.
    All,
}

impl Region {
    pub fn cube(radius: i64) -> Region {
        Region::Box {
            radius,
            center: CellCoord::ORIGIN,
        }
    }

    pub fn annulus(n: i64) -> Region {
        Region::Annulus {
            n,
            center: CellCoord::ORIGIN,
        }
    }

    #[inline]
    pub fn contains(&self, c: CellCoord) -> bool {
        match *self {
            Region::Box { radius, center } => c.linf_dist(center) <= radius,
            Region::Annulus { n, center } => {
                let r = c.linf_dist(center);
                r > n && r <= 3 * n
            }
            Region::Shell {
                inner,
                outer,
                center,
            } => {
                let r = c.linf_dist(center);
                r > inner && r <= outer
            }
            Region::Prism { n, layers } => match PrismLayerIndex::locate(c, n) {
                Some(idx) => layers.is_none_or(|(lo, hi)| idx.k >= lo && idx.k <= hi),
                None => false,
            },
            Region::All => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_box().is_some()
    }

    /// Inclusive coordinate bounds `(lo, hi)` of the region, if finite.
    pub fn bounding_box(&self) -> Option<([i64; 3], [i64; 3])> {
        let around = |c: CellCoord, r: i64| {
            let c = c.coords();
            Some((
                [c[0] - r, c[1] - r, c[2] - r],
                [c[0] + r, c[1] + r, c[2] + r],
            ))
        };
        match *self {
            Region::Box { radius, center } => around(center, radius),
            Region::Annulus { n, center } => around(center, 3 * n),
            Region::Shell { outer, center, .. } => around(center, outer),
            Region::Prism {
                n,
                layers: Some((lo, hi)),
            } => {
                // reduced coordinates lie in [1, n - 1]
                Some(([lo + 1; 3], [hi + n - 1; 3]))
            }
            Region::Prism { layers: None, .. } | Region::All => None,
        }
    }

    /// Every cell of a bounded region, in lexicographic order.
    pub fn cells(&self) -> Result<impl Iterator<Item = CellCoord> + '_> {
        let (lo, hi) = self.bounding_box().ok_or(Error::UnboundedRegion)?;
        Ok((lo[0]..=hi[0]).flat_map(move |x| {
            (lo[1]..=hi[1]).flat_map(move |y| {
                let parity = x.rem_euclid(2);
                let z0 = if lo[2].rem_euclid(2) == parity {
                    lo[2]
                } else {
                    lo[2] + 1
                };
                (z0..=hi[2])
                    .step_by(2)
                    .filter(move |_| y.rem_euclid(2) == parity)
                    .map(move |z| CellCoord::from_raw([x, y, z]))
                    .filter(move |&c| self.contains(c))
            })
        }))
    }
}

/// Every 3-clique lying in a bounded region, each exactly once, as sorted
/// triples `a < b < c`, in lexicographic order of `a`.
pub fn enumerate_edges_in(region: &Region) -> Result<impl Iterator<Item = EdgeClique> + '_> {
    Ok(region.cells()?.flat_map(move |a| {
        let nbrs = a.neighbors();
        let mut out = Vec::new();
        for &b in nbrs.iter().filter(|&&b| b > a && region.contains(b)) {
            for &c in nbrs.iter() {
                if c > b && is_adjacent(b, c) && region.contains(c) {
                    out.push(EdgeClique([a, b, c]));
                }
            }
        }
        out.into_iter()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn cell(x: i64, y: i64, z: i64) -> CellCoord {
        CellCoord::new(x, y, z).unwrap()
    }

    fn brute_completions(t: [CellCoord; 3]) -> BTreeSet<CellCoord> {
        t[0].neighbors()
            .into_iter()
            .filter(|&d| is_adjacent(d, t[1]) && is_adjacent(d, t[2]))
            .collect()
    }

    #[test]
    fn neighbors_of_origin() {
        let n = neighbors([0, 0, 0]).unwrap();
        assert_eq!(n.len(), 14);
        assert!(n.contains(&cell(2, 0, 0)));
        assert!(n.contains(&cell(1, 1, 1)));
        assert_eq!(n[0], cell(-2, 0, 0));
        assert_eq!(n[6], cell(-1, -1, -1));
        assert_eq!(n[13], cell(1, 1, 1));
    }

    #[test]
    fn neighbors_of_odd_cell() {
        let n = neighbors([3, 3, 3]).unwrap();
        assert!(n.contains(&cell(3, 3, 5)));
        assert!(n.contains(&cell(4, 4, 4)));
    }

    #[test]
    fn off_lattice_is_rejected() {
        assert_eq!(neighbors([1, 0, 0]), Err(Error::OffLattice(1, 0, 0)));
        assert!(adjacency_kind([0, 0, 0], [1, 2, 3]).is_err());
        assert!(CellCoord::new(COORD_LIMIT, 0, 0).is_err());
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(
            adjacency_kind([3, 3, 3], [3, 3, 5]),
            Ok(AdjacencyKind::Square)
        );
        assert_eq!(
            adjacency_kind([3, 3, 3], [4, 4, 4]),
            Ok(AdjacencyKind::Hexagonal)
        );
        assert_eq!(
            adjacency_kind([0, 0, 0], [0, 0, 0]),
            Ok(AdjacencyKind::None)
        );
        assert_eq!(
            adjacency_kind([0, 0, 0], [2, 2, 0]),
            Ok(AdjacencyKind::None)
        );
    }

    #[test]
    fn completions_of_paper_edge() {
        let e = EdgeClique::new(cell(3, 3, 3), cell(3, 3, 5), cell(4, 4, 4)).unwrap();
        let comps = edge_completions(&e);
        assert_eq!(comps, [cell(2, 4, 4), cell(4, 2, 4)]);
        let brute = brute_completions(e.cells());
        assert_eq!(brute, comps.into_iter().collect());
    }

    #[test]
    fn non_clique_rejected() {
        assert_eq!(
            EdgeClique::new(cell(0, 0, 0), cell(2, 0, 0), cell(4, 0, 0)),
            Err(Error::NotAClique(3))
        );
        assert!(completions_of(cell(0, 0, 0), cell(2, 0, 0), cell(0, 2, 0)).is_err());
    }

    #[test]
    fn vertex_position_of_listing_quadruple() {
        // red (0,0,0), yellow (1,1,1), blue (-1,1,1), head (0,0,2)
        let v = VertexClique::new([cell(0, 0, 0), cell(1, 1, 1), cell(-1, 1, 1), cell(0, 0, 2)])
            .unwrap();
        assert_eq!(v.position2(), [0, 1, 2]);
    }

    #[test]
    fn cell_has_24_distinct_vertices() {
        let offs: BTreeSet<_> = cell_vertex_offsets2().into_iter().collect();
        assert_eq!(offs.len(), 24);
    }

    #[test]
    fn every_clique_has_two_completions_in_window() {
        let region = Region::cube(4);
        let mut count = 0;
        for e in enumerate_edges_in(&region).unwrap() {
            let brute = brute_completions(e.cells());
            assert_eq!(brute.len(), 2);
            assert_eq!(brute, e.completions().into_iter().collect());
            count += 1;
        }
        assert!(count > 0);
    }

    #[test]
    fn vertex_has_four_edges_and_one_position() {
        let region = Region::cube(3);
        for e in enumerate_edges_in(&region).unwrap() {
            for d in e.completions() {
                let c = e.cells();
                let v = VertexClique::new([c[0], c[1], c[2], d]).unwrap();
                let edges = v.edges();
                assert!(edges.contains(&e));
                let set: BTreeSet<_> = edges.iter().collect();
                assert_eq!(set.len(), 4);
                let p = v.position2();
                // a vertex of every one of its four cells
                for cc in v.cells() {
                    let rel = [p[0] - 2 * cc.x(), p[1] - 2 * cc.y(), p[2] - 2 * cc.z()];
                    assert!(cell_vertex_offsets2().contains(&rel));
                }
            }
        }
    }

    #[test]
    fn edges_in_box_are_cliques_and_unique() {
        let region = Region::cube(2);
        let edges: Vec<_> = enumerate_edges_in(&region).unwrap().collect();
        let set: BTreeSet<_> = edges.iter().copied().collect();
        assert_eq!(set.len(), edges.len());
        for e in &edges {
            let [a, b, c] = e.cells();
            assert!(a < b && b < c);
            assert!(is_adjacent(a, b) && is_adjacent(b, c) && is_adjacent(a, c));
            assert!(e.cells().iter().all(|&x| region.contains(x)));
        }
    }

    #[test]
    fn annulus_edges_avoid_inner_cube() {
        let region = Region::annulus(2);
        let mut any = false;
        for e in enumerate_edges_in(&region).unwrap() {
            any = true;
            assert!(e
                .cells()
                .iter()
                .all(|c| c.linf_norm() > 2 && c.linf_norm() <= 6));
        }
        assert!(any);
    }

    #[test]
    fn unbounded_regions_rejected() {
        assert!(enumerate_edges_in(&Region::All).is_err());
        assert!(enumerate_edges_in(&Region::Prism {
            n: 10,
            layers: None
        })
        .is_err());
    }

    /// Brute force: count cliques by testing all triples of box cells.
    fn brute_edge_count(r: i64) -> usize {
        let cells: Vec<_> = Region::cube(r).cells().unwrap().collect();
        let mut count = 0;
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if !is_adjacent(cells[i], cells[j]) {
                    continue;
                }
                for k in j + 1..cells.len() {
                    if is_adjacent(cells[i], cells[k]) && is_adjacent(cells[j], cells[k]) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn edge_count_matches_brute_force_and_scales_with_volume() {
        for r in [1, 2, 3] {
            assert_eq!(
                enumerate_edges_in(&Region::cube(r)).unwrap().count(),
                brute_edge_count(r)
            );
        }
        // 12 edges per cell in the bulk; the box holds ~ (2r+1)^3 / 4 cells
        let counts: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&r| enumerate_edges_in(&Region::cube(r)).unwrap().count() as f64)
            .collect();
        let density: Vec<f64> = [4.0f64, 8.0, 16.0]
            .iter()
            .zip(&counts)
            .map(|(r, c)| c / (2.0 * r + 1.0).powi(3))
            .collect();
        // boundary losses shrink toward the bulk density 12/4 = 3
        assert!(density.windows(2).all(|w| w[0] < w[1]), "{density:?}");
        assert!(density[2] > 2.5 && density[2] < 3.0, "{density:?}");
        let ratio = counts[2] / counts[1];
        assert!((ratio - 8.0).abs() < 1.2, "ratio {ratio}");
    }

    #[test]
    fn region_cells_match_filter() {
        let region = Region::Shell {
            inner: 2,
            outer: 4,
            center: cell(1, 1, 1),
        };
        let listed: BTreeSet<_> = region.cells().unwrap().collect();
        let mut brute = BTreeSet::new();
        for x in -3..=5 {
            for y in -3..=5 {
                for z in -3..=5 {
                    if let Ok(c) = CellCoord::new(x, y, z) {
                        if region.contains(c) {
                            brute.insert(c);
                        }
                    }
                }
            }
        }
        assert_eq!(listed, brute);
    }

    #[test]
    fn serde_validates_parity() {
        let c: CellCoord = serde_json::from_str("[1,3,-5]").unwrap();
        assert_eq!(c, cell(1, 3, -5));
        assert!(serde_json::from_str::<CellCoord>("[1,2,3]").is_err());
    }
}
