//! Single-color site percolation on the lattice.
//!
//! A cell is open at level `q` when its variate `u < q`, so one seed defines
//! a coupled family of configurations for all `q`. For each trial the
//! crossing threshold, the smallest `q` at which an open cluster joins the
//! faces `x ≤ 1` and `x ≥ 2L−2` of the box `[0, 2L)³`, is found by adding
//! cells in increasing order of `u` to a union-find structure. Crossing at
//! `q` then holds iff the threshold is below `q`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{check_trials, run_trials, Estimate};
use crate::error::{Error, Result};
use crate::prf::{derive_seed, hash_cell, tag, to_unit};

/// Bisection steps toward the 50% crossing point.
pub const BISECTION_STEPS: u32 = 12;

const BUCKET_BITS: u32 = 16;

/// Seed of trial `t` at box size `l`.
pub fn percolation_seed(seed: u64, l: i64, t: u64) -> u64 {
    derive_seed(
        derive_seed(seed, tag::PERCOLATION, l as u64),
        tag::PERCOLATION,
        t,
    )
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Cells of the box indexed by parity and `(i, j, k) ∈ [0, L)³`: cell
/// `(2i+p, 2j+p, 2k+p)` has index `p·L³ + (i·L + j)·L + k`.
struct BoxIndex {
    l: i64,
}

impl BoxIndex {
    fn len(&self) -> usize {
        (2 * self.l * self.l * self.l) as usize
    }

    fn decode(&self, idx: u32) -> (i64, [i64; 3]) {
        let l = self.l;
        let idx = idx as i64;
        let p = idx / (l * l * l);
        let r = idx % (l * l * l);
        (p, [r / (l * l), (r / l) % l, r % l])
    }

    fn encode(&self, p: i64, v: [i64; 3]) -> Option<u32> {
        let l = self.l;
        v.iter()
            .all(|&x| (0..l).contains(&x))
            .then(|| (p * l * l * l + (v[0] * l + v[1]) * l + v[2]) as u32)
    }

    fn coords(&self, idx: u32) -> [i64; 3] {
        let (p, v) = self.decode(idx);
        v.map(|x| 2 * x + p)
    }

    fn neighbors(&self, idx: u32, out: &mut Vec<u32>) {
        out.clear();
        let (p, v) = self.decode(idx);
        for axis in 0..3 {
            for d in [-1, 1] {
                let mut w = v;
                w[axis] += d;
                out.extend(self.encode(p, w));
            }
        }
        // hexagonal neighbors sit on the other sublattice, shifted by 0 or
        // -1 (from even) or 0 or +1 (from odd) along each axis
        let step = if p == 0 { -1 } else { 1 };
        for mask in 0..8 {
            let w = [0, 1, 2].map(|a| v[a] + if mask >> a & 1 == 1 { step } else { 0 });
            out.extend(self.encode(1 - p, w));
        }
    }
}

/// Crossing threshold of one configuration of the box of size `l`.
pub fn crossing_threshold(l: i64, trial_seed: u64) -> Result<f64> {
    if !(2..=256).contains(&l) {
        return Err(Error::InvalidParameter(format!(
            "box size must be in [2, 256], got {l}"
        )));
    }
    let bx = BoxIndex { l };
    let n = bx.len();
    let keys: Vec<u64> = (0..n as u32)
        .map(|i| hash_cell(trial_seed, bx.coords(i)) >> 11)
        .collect();

    // counting sort on the leading bits, then sort within buckets lazily
    let shift = 53 - BUCKET_BITS;
    let mut starts = vec![0u32; (1 << BUCKET_BITS) + 1];
    for &k in &keys {
        starts[(k >> shift) as usize + 1] += 1;
    }
    for b in 0..(1 << BUCKET_BITS) {
        starts[b + 1] += starts[b];
    }
    let mut fill = starts.clone();
    let mut order = vec![0u32; n];
    for (i, &k) in keys.iter().enumerate() {
        let b = (k >> shift) as usize;
        order[fill[b] as usize] = i as u32;
        fill[b] += 1;
    }

    let left = n as u32;
    let right = n as u32 + 1;
    let mut uf = UnionFind::new(n + 2);
    let mut open = vec![false; n];
    let mut nbrs = Vec::with_capacity(14);
    for b in 0..(1 << BUCKET_BITS) {
        let bucket = &mut order[starts[b] as usize..starts[b + 1] as usize];
        bucket.sort_unstable_by_key(|&i| keys[i as usize]);
        for &i in bucket.iter() {
            open[i as usize] = true;
            let (_, v) = bx.decode(i);
            if v[0] == 0 {
                uf.union(i, left);
            }
            if v[0] == l - 1 {
                uf.union(i, right);
            }
            bx.neighbors(i, &mut nbrs);
            for &j in &nbrs {
                if open[j as usize] {
                    uf.union(i, j);
                }
            }
            if uf.find(left) == uf.find(right) {
                return Ok(to_unit(keys[i as usize] << 11));
            }
        }
    }
    unreachable!("a fully open box always crosses")
}

/// Fraction of thresholds strictly below `q`.
pub fn crossing_fraction(thresholds: &[f64], q: f64) -> f64 {
    thresholds.iter().filter(|&&t| t < q).count() as f64 / thresholds.len() as f64
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PcResult {
    /// 50% point of the largest box, with the spread across sizes as error.
    pub estimate: Estimate,
    /// `(L, 50% point)` for every size.
    pub per_size: Vec<(i64, f64)>,
}

/// Bisects the crossing fraction to 50% for each box size.
pub fn estimate_pc(sizes: &[i64], trials: u64, seed: u64) -> Result<PcResult> {
    check_trials(trials)?;
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 distinct box sizes".into(),
        ));
    }
    let mut per_size = Vec::with_capacity(sorted.len());
    for &l in &sorted {
        let thresholds = run_trials(trials, |t| {
            crossing_threshold(l, percolation_seed(seed, l, t))
        })?;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if crossing_fraction(&thresholds, mid) >= 0.5 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        per_size.push((l, 0.5 * (lo + hi)));
    }
    let values: Vec<f64> = per_size.iter().map(|s| s.1).collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    Ok(PcResult {
        estimate: Estimate {
            value: *values.last().unwrap(),
            standard_error: spread,
            trials,
            seed,
            params: json!({ "sizes": sorted, "bisection_steps": BISECTION_STEPS }),
        },
        per_size,
    })
}
