//! Brute-force oracles shared by the integration tests. The oracles do not
//! call into the tracer or the flux formula; they only use the lattice, the
//! colorings and plain graph search. `traced_components` is the tracer side
//! of the comparison.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use tricolor::flow::CellLoop;
use tricolor::lattice::{enumerate_edges_in, is_adjacent, vertex_position2};
use tricolor::prf::mix64;
use tricolor::tracer::{DirectedEdgeState, Termination, Walk};
use tricolor::{CellCoord, Coloring, EdgeClique, Region};

/// Small deterministic generator for test inputs.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> TestRng {
        TestRng(mix64(seed ^ 0x5eed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(self.0)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn cell(x: i64, y: i64, z: i64) -> CellCoord {
    CellCoord::new(x, y, z).unwrap()
}

pub fn random_cell_in_cube(rng: &mut TestRng, r: i64) -> CellCoord {
    loop {
        let odd = rng.below(2) as i64;
        let half = |rng: &mut TestRng| {
            if odd == 1 {
                2 * rng.range(-(r + 1) / 2, (r - 1) / 2) + 1
            } else {
                2 * rng.range(-r / 2, r / 2)
            }
        };
        let c = [half(rng), half(rng), half(rng)];
        if c.iter().all(|v| v.abs() <= r) {
            return cell(c[0], c[1], c[2]);
        }
    }
}

pub fn is_tricolor(e: &EdgeClique, col: &Coloring) -> bool {
    let cs: BTreeSet<_> = e
        .cells()
        .iter()
        .map(|&c| col.color_at(c).unwrap())
        .collect();
    cs.len() == 3
}

/// Brute-force completions: the intersection of the three neighbor sets.
pub fn brute_completions(cells: [CellCoord; 3]) -> Vec<CellCoord> {
    let [a, b, c] = cells;
    let nb: HashSet<CellCoord> = b.neighbors().into_iter().collect();
    let nc: HashSet<CellCoord> = c.neighbors().into_iter().collect();
    let mut out: Vec<_> = a
        .neighbors()
        .into_iter()
        .filter(|d| nb.contains(d) && nc.contains(d))
        .collect();
    out.sort();
    out
}

/// A connected set of tricolor edges: a cycle, or a chain whose ends touch
/// the region boundary.
#[derive(Debug)]
pub struct Component {
    pub edges: HashSet<EdgeClique>,
    pub closed: bool,
}

/// Decomposes the tricolor edges of a bounded region by graph search.
///
/// Two tricolor edges are joined when they share a vertex (a 4-clique) whose
/// four cells all lie in the region.
pub fn oracle_components(region: &Region, col: &Coloring) -> Vec<Component> {
    let edges: Vec<EdgeClique> = enumerate_edges_in(region)
        .unwrap()
        .filter(|e| is_tricolor(e, col))
        .collect();
    let mut by_vertex: HashMap<[CellCoord; 4], Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        for d in brute_completions(e.cells()) {
            let mut v = [e.cells()[0], e.cells()[1], e.cells()[2], d];
            v.sort();
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    let mut open_end = vec![false; edges.len()];
    for (v, list) in &by_vertex {
        let inside = v.iter().all(|&c| region.contains(c));
        if inside {
            assert_eq!(
                list.len(),
                2,
                "tricolor vertex {v:?} has {} tricolor edges",
                list.len()
            );
            adj[list[0]].push(list[1]);
            adj[list[1]].push(list[0]);
        } else {
            for &i in list {
                open_end[i] = true;
            }
        }
    }
    let mut seen = vec![false; edges.len()];
    let mut out = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        let mut comp = HashSet::new();
        let mut closed = true;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            comp.insert(edges[i]);
            closed &= !open_end[i];
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        out.push(Component {
            edges: comp,
            closed,
        });
    }
    out
}

/// Random simple loop of cells inside a cube: a loop-erased random walk
/// closed by a shortest return path that avoids the walk.
pub fn random_loop(rng: &mut TestRng, r: i64, max_walk: usize) -> CellLoop {
    let region = Region::cube(r);
    loop {
        let start = random_cell_in_cube(rng, r - 1);
        let target = 2 + rng.below(max_walk as u64 - 1) as usize;
        let mut path = vec![start];
        let mut pos: HashMap<CellCoord, usize> = HashMap::from([(start, 0)]);
        for _ in 0..target * 4 {
            if path.len() > target {
                break;
            }
            let nb = path.last().unwrap().neighbors();
            let next = nb[rng.below(14) as usize];
            if !region.contains(next) {
                continue;
            }
            if let Some(&i) = pos.get(&next) {
                for c in path.drain(i + 1..) {
                    pos.remove(&c);
                }
            } else {
                pos.insert(next, path.len());
                path.push(next);
            }
        }
        if path.len() < 3 {
            continue;
        }
        let (first, last) = (path[0], *path.last().unwrap());
        let blocked: HashSet<CellCoord> = path[1..path.len() - 1].iter().copied().collect();
        // shortest path last -> first avoiding the walk interior
        let mut prev: HashMap<CellCoord, CellCoord> = HashMap::new();
        let mut queue = VecDeque::from([last]);
        prev.insert(last, last);
        let mut found = false;
        while let Some(c) = queue.pop_front() {
            if c == first {
                found = true;
                break;
            }
            for d in c.neighbors() {
                if region.contains(d) && !blocked.contains(&d) && !prev.contains_key(&d) {
                    prev.insert(d, c);
                    queue.push_back(d);
                }
            }
        }
        if !found {
            continue;
        }
        let mut back = Vec::new();
        let mut c = prev[&first];
        while c != last {
            back.push(c);
            c = prev[&c];
        }
        back.reverse();
        // back runs from the cell after `last` to the cell before `first`
        let mut cells = path;
        cells.extend(back);
        if let Ok(cl) = CellLoop::new(cells) {
            return cl;
        }
    }
}

fn orient(a: [i128; 3], b: [i128; 3], c: [i128; 3], d: [i128; 3]) -> i128 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let w = [d[0] - a[0], d[1] - a[1], d[2] - a[2]];
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

enum Pierce {
    Miss,
    Hit(i128),
    Degenerate,
}

/// Exact segment–triangle test. `Hit(s)` carries the sign of the triangle's
/// right-handed normal along the segment direction.
fn pierce(q1: [i128; 3], q2: [i128; 3], a: [i128; 3], b: [i128; 3], c: [i128; 3]) -> Pierce {
    let o1 = orient(a, b, c, q1).signum();
    let o2 = orient(a, b, c, q2).signum();
    if o1 == o2 && o1 != 0 {
        return Pierce::Miss;
    }
    let e = [
        orient(q1, q2, a, b).signum(),
        orient(q1, q2, b, c).signum(),
        orient(q1, q2, c, a).signum(),
    ];
    if e.contains(&1) && e.contains(&-1) {
        return Pierce::Miss;
    }
    if o1 == 0 || o2 == 0 || e.contains(&0) {
        return Pierce::Degenerate;
    }
    Pierce::Hit(o2)
}

const SCALE: i128 = 1009;

/// Signed count of tricolor edges crossing a cone spanned by the loop from a
/// random apex, in exact integer arithmetic. Each crossing edge contributes
/// its curl σ″(a,b,c), with the edge segment directed along the normal of
/// (a,b,c), times the side it passes to. Degenerate apexes are resampled.
pub fn surface_flux(cl: &CellLoop, col: &Coloring, rng: &mut TestRng) -> i64 {
    let cells = cl.cells();
    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for c in cells {
        for i in 0..3 {
            lo[i] = lo[i].min(c.coords()[i]);
            hi[i] = hi[i].max(c.coords()[i]);
        }
    }
    let center = cell(0, 0, 0);
    let radius = (0..3).map(|i| lo[i].abs().max(hi[i].abs())).max().unwrap() + 3;
    let region = Region::Box { radius, center };
    let edges: Vec<EdgeClique> = enumerate_edges_in(&region)
        .unwrap()
        .filter(|e| is_tricolor(e, col))
        .collect();
    let scaled2 = |p: [i64; 3]| p.map(|v| v as i128 * SCALE);
    let centers: Vec<[i128; 3]> = cells
        .iter()
        .map(|c| scaled2(c.coords().map(|v| 2 * v)))
        .collect();
    let segments: Vec<([i128; 3], [i128; 3], i64)> = edges
        .iter()
        .map(|e| {
            let [a, b, c] = e.cells();
            let [d1, d2] = e.completions();
            let mut q1 = scaled2(vertex_position2([a, b, c, d1]));
            let mut q2 = scaled2(vertex_position2([a, b, c, d2]));
            let ab = a.diff(b).map(|v| -v);
            let ac = a.diff(c).map(|v| -v);
            let n = [
                ab[1] * ac[2] - ab[2] * ac[1],
                ab[2] * ac[0] - ab[0] * ac[2],
                ab[0] * ac[1] - ab[1] * ac[0],
            ];
            let dir: i128 = (0..3).map(|i| (q2[i] - q1[i]) * n[i] as i128).sum();
            assert_ne!(dir, 0);
            if dir < 0 {
                std::mem::swap(&mut q1, &mut q2);
            }
            let curl = curl_brute(a, b, c, col);
            (q1, q2, curl)
        })
        .collect();
    'apex: loop {
        let p: [i128; 3] = std::array::from_fn(|i| {
            let span = (2 * (hi[i] - lo[i]) as i128 + 2) * SCALE;
            2 * lo[i] as i128 * SCALE - SCALE + (rng.next_u64() as i128).rem_euclid(span)
        });
        let k = centers.len();
        let mut total = 0i64;
        for i in 0..k {
            let (a, b) = (centers[i], centers[(i + 1) % k]);
            let nrm = orient(p, a, b, [p[0] + 1, p[1], p[2]]) != 0
                || orient(p, a, b, [p[0], p[1] + 1, p[2]]) != 0
                || orient(p, a, b, [p[0], p[1], p[2] + 1]) != 0;
            if !nrm {
                continue 'apex;
            }
            for &(q1, q2, curl) in &segments {
                match pierce(q1, q2, p, a, b) {
                    Pierce::Miss => {}
                    Pierce::Hit(s) => total += curl * s as i64,
                    Pierce::Degenerate => continue 'apex,
                }
            }
        }
        return total;
    }
}

/// σ″ from the color table directly.
pub fn curl_brute(a: CellCoord, b: CellCoord, c: CellCoord, col: &Coloring) -> i64 {
    use tricolor::Color::*;
    let eta = |x, y| match (x, y) {
        (Red, Yellow) | (Yellow, Blue) | (Blue, Red) => -1,
        (Yellow, Red) | (Blue, Yellow) | (Red, Blue) => 1,
        _ => 0,
    };
    let (ca, cb, cc) = (
        col.color_at(a).unwrap(),
        col.color_at(b).unwrap(),
        col.color_at(c).unwrap(),
    );
    let s = eta(ca, cb) + eta(cb, cc) + eta(cc, ca);
    assert_eq!(s % 3, 0);
    s / 3
}

/// Whether the cells of a single color `target` (threshold `u < q`) connect
/// the faces `x ≤ 1` and `x ≥ 2L−2` of the box `[0, 2L)³`, by breadth-first
/// search.
pub fn bfs_crosses(l: i64, open: impl Fn(CellCoord) -> bool) -> bool {
    let side = 2 * l;
    let inside = |c: CellCoord| c.coords().iter().all(|&v| (0..side).contains(&v));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for y in 0..side {
        for z in 0..side {
            for x in [0, 1] {
                if let Ok(c) = CellCoord::new(x, y, z) {
                    if open(c) && seen.insert(c) {
                        queue.push_back(c);
                    }
                }
            }
        }
    }
    while let Some(c) = queue.pop_front() {
        if c.x() >= side - 2 {
            return true;
        }
        for d in c.neighbors() {
            if inside(d) && !seen.contains(&d) && open(d) {
                seen.insert(d);
                queue.push_back(d);
            }
        }
    }
    false
}

pub fn assert_adjacent_loop(cl: &CellLoop) {
    for (a, b) in cl.steps() {
        assert!(is_adjacent(a, b));
    }
}

/// Decomposes the tricolor edges of a bounded region by tracing from every
/// edge not yet visited, in both directions.
pub fn traced_components(region: &Region, col: &Coloring) -> Vec<Component> {
    let mut visited: HashSet<EdgeClique> = HashSet::new();
    let mut out = Vec::new();
    for e in enumerate_edges_in(region).unwrap() {
        if visited.contains(&e) || !is_tricolor(&e, col) {
            continue;
        }
        let s0 = DirectedEdgeState::from_edge(&e, e.completions()[0], col).unwrap();
        let mut comp = HashSet::from([e]);
        let mut walk = Walk::new(s0, col, region, u64::MAX).unwrap();
        while let Some(s) = walk.next_state().unwrap() {
            comp.insert(s.edge());
        }
        let closed = walk.termination() == Some(Termination::LoopClosed);
        if closed {
            assert_eq!(walk.steps() as usize, comp.len(), "loop revisits an edge");
        } else {
            let forward = walk.steps();
            let mut back = Walk::new(s0.reversed(), col, region, u64::MAX).unwrap();
            while let Some(s) = back.next_state().unwrap() {
                comp.insert(s.edge());
            }
            assert_eq!(back.termination(), Some(Termination::RegionExit));
            assert_eq!(
                (forward + back.steps() + 1) as usize,
                comp.len(),
                "chain revisits an edge"
            );
        }
        visited.extend(comp.iter().copied());
        out.push(Component {
            edges: comp,
            closed,
        });
    }
    out
}

/// Whether two decompositions agree edge for edge.
pub fn same_components(a: &[Component], b: &[Component]) -> bool {
    let key = |cs: &[Component]| {
        let mut v: Vec<(bool, Vec<EdgeClique>)> = cs
            .iter()
            .map(|c| {
                let mut e: Vec<_> = c.edges.iter().copied().collect();
                e.sort();
                (c.closed, e)
            })
            .collect();
        v.sort();
        v
    };
    key(a) == key(b)
}
