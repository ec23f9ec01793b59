use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{check_trials, histogram_trials, Histogram};
use crate::coloring::{Color, Coloring, ProbVector};
use crate::error::{Error, Result};
use crate::lattice::{is_adjacent, CellCoord};
use crate::prf::{derive_seed, tag, FastHashSet};

/// Faces between two cells of different colors.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    /// Red and yellow.
    Orange,
    /// Yellow and blue.
    Green,
    /// Blue and red.
    Purple,
}

impl FaceKind {
    pub fn colors(self) -> (Color, Color) {
        match self {
            FaceKind::Orange => (Color::Red, Color::Yellow),
            FaceKind::Green => (Color::Yellow, Color::Blue),
            FaceKind::Purple => (Color::Blue, Color::Red),
        }
    }

    fn matches(self, a: Color, b: Color) -> bool {
        let (x, y) = self.colors();
        (a == x && b == y) || (a == y && b == x)
    }
}

/// The face between the origin and `(1,1,1)`.
fn seed_face() -> (CellCoord, CellCoord) {
    (CellCoord::ORIGIN, CellCoord::ORIGIN.offset([1, 1, 1]))
}

/// Number of faces of `kind` in the cluster of the face `{a, b}`, where two
/// faces are joined when they share a tessellation edge. Returns `None` once
/// the cluster exceeds `cap` faces.
pub fn face_cluster_size(
    col: &Coloring,
    kind: FaceKind,
    a: CellCoord,
    b: CellCoord,
    cap: u64,
) -> Result<Option<u64>> {
    if !is_adjacent(a, b) {
        return Err(Error::InvalidParameter(format!(
            "{a:?} and {b:?} do not share a face"
        )));
    }
    if !kind.matches(col.color_at(a)?, col.color_at(b)?) {
        return Ok(Some(0));
    }
    let key = |x: CellCoord, y: CellCoord| if x < y { (x, y) } else { (y, x) };
    let mut seen: FastHashSet<(CellCoord, CellCoord)> = FastHashSet::default();
    let mut queue = VecDeque::new();
    seen.insert(key(a, b));
    queue.push_back((a, b));
    while let Some((x, y)) = queue.pop_front() {
        for c in x.neighbors() {
            if !is_adjacent(c, y) {
                continue;
            }
            // the edge {x, y, c} bounds the faces {x, c} and {y, c}
            let cc = col.color_at(c)?;
            for (u, cu) in [(x, col.color_at(x)?), (y, col.color_at(y)?)] {
                if kind.matches(cu, cc) && seen.insert(key(u, c)) {
                    if seen.len() as u64 > cap {
                        return Ok(None);
                    }
                    queue.push_back((u, c));
                }
            }
        }
    }
    Ok(Some(seen.len() as u64))
}

/// Sizes of the face cluster through the seed face, which is forced to
/// carry the two colors of `kind`.
pub fn face_cluster_histogram(
    p: ProbVector,
    kind: FaceKind,
    trials: u64,
    cap: u64,
    seed: u64,
) -> Result<Histogram> {
    check_trials(trials)?;
    if cap < 1 {
        return Err(Error::InvalidParameter(
            "cluster cap must be at least 1".into(),
        ));
    }
    let (a, b) = seed_face();
    let (ca, cb) = kind.colors();
    histogram_trials(trials, cap, |t| {
        let col =
            Coloring::uniform(p, derive_seed(seed, tag::FACES, t)).with_fixed([(a, ca), (b, cb)]);
        face_cluster_size(&col, kind, a, b, cap)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_face() {
        let col = Coloring::uniform(ProbVector::new(1.0, 0.0, 0.0).unwrap(), 0);
        let (a, b) = seed_face();
        let col = col.with_fixed([(b, Color::Yellow)]);
        let size = face_cluster_size(&col, FaceKind::Orange, a, b, 1000)
            .unwrap()
            .unwrap();
        // a lone yellow cell in a red background: its 14 faces form one cluster
        assert_eq!(size, 14);
        assert_eq!(
            face_cluster_size(&col, FaceKind::Green, a, b, 1000).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn mass_accounting_and_cap() {
        let h = face_cluster_histogram(
            ProbVector::new(0.0, 0.5, 0.5).unwrap(),
            FaceKind::Green,
            20,
            200,
            1,
        )
        .unwrap();
        assert_eq!(h.total(), 20);
        assert!(h.bins.keys().all(|&k| (1..=200).contains(&k)));
    }
}
