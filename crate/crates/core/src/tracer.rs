//! The directed tricolor-edge automaton.
//!
//! A state is a tricolor edge, stored as its red, yellow and blue cells, plus
//! the fourth cell `head` of the vertex the edge points to. One step reads the
//! color of `head`, swaps `head` in for the cell of that color, and points the
//! new edge at the vertex on the far side: the completion of the new 3-clique
//! other than the cell that was swapped out.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::lattice::{clique_completions, is_adjacent, CellCoord, EdgeClique, Region};

/// Default step cap for traces.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// A directed tricolor edge with its head vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DirectedEdgeState {
    /// Cells of the edge indexed by color: red, yellow, blue.
    pub cells: [CellCoord; 3],
    /// The fourth cell of the vertex the edge points to.
    pub head: CellCoord,
}

impl DirectedEdgeState {
    /// Builds and validates a state against a coloring.
    pub fn new(
        red: CellCoord,
        yellow: CellCoord,
        blue: CellCoord,
        head: CellCoord,
        col: &Coloring,
    ) -> Result<Self> {
        let s = DirectedEdgeState {
            cells: [red, yellow, blue],
            head,
        };
        s.validate(col)?;
        Ok(s)
    }

    /// Orients a tricolor edge toward `head`, which must complete it to a
    /// 4-clique. Fails if the edge is not tricolor.
    pub fn from_edge(edge: &EdgeClique, head: CellCoord, col: &Coloring) -> Result<Self> {
        let mut slots: [Option<CellCoord>; 3] = [None; 3];
        for c in edge.cells() {
            let i = col.color_at(c)?.index();
            if slots[i].replace(c).is_some() {
                return Err(Error::InvalidState(format!(
                    "edge {edge:?} is not tricolor"
                )));
            }
        }
        let cells = slots.map(|c| c.expect("three distinct colors"));
        let s = DirectedEdgeState { cells, head };
        s.validate(col)?;
        Ok(s)
    }

    /// The listing's initial quadruple translated to the origin: red
    /// `(0,0,0)`, yellow `(1,1,1)`, blue `(−1,1,1)`, head `(0,0,2)`.
    pub fn canonical_origin() -> DirectedEdgeState {
        DirectedEdgeState {
            cells: [
                CellCoord::from_raw([0, 0, 0]),
                CellCoord::from_raw([1, 1, 1]),
                CellCoord::from_raw([-1, 1, 1]),
            ],
            head: CellCoord::from_raw([0, 0, 2]),
        }
    }

    /// Colors that must be forced on the origin triple so that
    /// [`canonical_origin`](Self::canonical_origin) is a valid state.
    pub fn canonical_origin_colors() -> [(CellCoord, Color); 3] {
        let s = Self::canonical_origin();
        [
            (s.cells[0], Color::Red),
            (s.cells[1], Color::Yellow),
            (s.cells[2], Color::Blue),
        ]
    }

    #[inline]
    pub fn red(&self) -> CellCoord {
        self.cells[0]
    }

    #[inline]
    pub fn yellow(&self) -> CellCoord {
        self.cells[1]
    }

    #[inline]
    pub fn blue(&self) -> CellCoord {
        self.cells[2]
    }

    /// The undirected edge.
    #[inline]
    pub fn edge(&self) -> EdgeClique {
        EdgeClique::new_unchecked(self.cells[0], self.cells[1], self.cells[2])
    }

    /// The completion at the other end of the edge.
    #[inline]
    pub fn tail(&self) -> CellCoord {
        other_end(self.cells, self.head)
    }

    /// Same edge, opposite direction.
    #[inline]
    pub fn reversed(&self) -> DirectedEdgeState {
        DirectedEdgeState {
            cells: self.cells,
            head: self.tail(),
        }
    }

    fn validate(&self, col: &Coloring) -> Result<()> {
        let [r, y, b] = self.cells;
        let h = self.head;
        let pairs = [(r, y), (y, b), (r, b), (r, h), (y, h), (b, h)];
        if pairs.iter().any(|&(a, c)| !is_adjacent(a, c)) {
            return Err(Error::InvalidState(format!("{self:?} is not a 4-clique")));
        }
        for (c, want) in self.cells.iter().zip(Color::ALL) {
            let got = col.color_at(*c)?;
            if got != want {
                return Err(Error::InvalidState(format!(
                    "cell {c:?} has color {got:?}, expected {want:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form other endpoint of the edge `{a, b, c}` given one endpoint `d`,
/// as in the reference listing: componentwise
/// `d − 2·sign((t mod 3)·t)` with `t = 3d − a − b − c`.
#[inline]
pub fn new_end(cells: [CellCoord; 3], d: CellCoord) -> CellCoord {
    let mut out = [0i64; 3];
    let dc = d.coords();
    let [a, b, c] = cells.map(|x| x.coords());
    for i in 0..3 {
        let t = 3 * dc[i] - a[i] - b[i] - c[i];
        out[i] = dc[i] - 2 * (t.rem_euclid(3) * t).signum();
    }
    CellCoord::from_raw(out)
}

#[inline]
fn other_end(cells: [CellCoord; 3], d: CellCoord) -> CellCoord {
    let e = new_end(cells, d);
    debug_assert!({
        let [p, q] = clique_completions(cells);
        (p == d && q == e) || (q == d && p == e)
    });
    e
}

/// Advances a state already known to be valid.
#[inline]
fn advance(s: &DirectedEdgeState, color_of_head: Color) -> DirectedEdgeState {
    let i = color_of_head.index();
    let displaced = s.cells[i];
    let mut cells = s.cells;
    cells[i] = s.head;
    DirectedEdgeState {
        cells,
        head: other_end(cells, displaced),
    }
}

/// One step of the automaton, validating the input state.
pub fn step(s: &DirectedEdgeState, col: &Coloring) -> Result<DirectedEdgeState> {
    s.validate(col)?;
    Ok(advance(s, col.color_at(s.head)?))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The walk returned to its start state.
    LoopClosed,
    /// The next state would consult a cell outside the region.
    RegionExit,
    /// The step cap was reached.
    StepCap,
}

/// A step-by-step walk along a tricolor path.
///
/// [`Walk::next_state`] yields successive states. When the state just
/// yielded has its head outside the region the walk stops with
/// [`Termination::RegionExit`]; its edge is still inside the region, but the
/// head's color is never consulted.
pub struct Walk<'a> {
    col: &'a Coloring,
    region: &'a Region,
    start: DirectedEdgeState,
    current: DirectedEdgeState,
    steps: u64,
    cap: u64,
    termination: Option<Termination>,
}

impl<'a> Walk<'a> {
    pub fn new(
        s0: DirectedEdgeState,
        col: &'a Coloring,
        region: &'a Region,
        cap: u64,
    ) -> Result<Self> {
        if cap < 1 {
            return Err(Error::InvalidParameter(
                "step cap must be at least 1".into(),
            ));
        }
        if !s0.cells.iter().all(|&c| region.contains(c)) {
            return Err(Error::InvalidState(format!(
                "start edge {s0:?} is not inside the region"
            )));
        }
        s0.validate(col)?;
        Ok(Walk {
            col,
            region,
            start: s0,
            current: s0,
            steps: 0,
            cap,
            termination: None,
        })
    }

    pub fn start(&self) -> &DirectedEdgeState {
        &self.start
    }

    pub fn current(&self) -> &DirectedEdgeState {
        &self.current
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    #[inline]
    pub fn next_state(&mut self) -> Result<Option<DirectedEdgeState>> {
        if self.termination.is_some() {
            return Ok(None);
        }
        if self.steps >= self.cap {
            self.termination = Some(Termination::StepCap);
            return Ok(None);
        }
        if !self.region.contains(self.current.head) {
            self.termination = Some(Termination::RegionExit);
            return Ok(None);
        }
        let color = self.col.color_at(self.current.head)?;
        self.current = advance(&self.current, color);
        self.steps += 1;
        if self.current == self.start {
            self.termination = Some(Termination::LoopClosed);
        }
        Ok(Some(self.current))
    }

    /// Runs to termination.
    pub fn finish(&mut self) -> Result<Termination> {
        while self.next_state()?.is_some() {}
        Ok(self.termination.expect("walk terminated"))
    }
}

/// Outcome of a trace.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PathRecord {
    pub start: DirectedEdgeState,
    pub end: DirectedEdgeState,
    pub steps: u64,
    pub termination: Termination,
    /// Head of the final state minus head of the start state.
    pub displacement: [i64; 3],
    /// The most recent states, oldest first, when arc storage was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<Vec<DirectedEdgeState>>,
}

fn record(walk: &Walk<'_>, arc: Option<VecDeque<DirectedEdgeState>>) -> PathRecord {
    let start = walk.start;
    let end = walk.current;
    PathRecord {
        start,
        end,
        steps: walk.steps,
        termination: walk.termination.expect("walk terminated"),
        displacement: end.head.diff(start.head),
        arc: arc.map(Vec::from),
    }
}

/// Traces from `s0` until the loop closes, the path leaves `region`, or
/// `cap` steps have been taken.
pub fn trace(
    s0: DirectedEdgeState,
    col: &Coloring,
    region: &Region,
    cap: u64,
) -> Result<PathRecord> {
    let mut walk = Walk::new(s0, col, region, cap)?;
    walk.finish()?;
    Ok(record(&walk, None))
}

/// Like [`trace`], additionally keeping the last `arc_capacity` states
/// (including the start state) in a ring buffer.
pub fn trace_with_arc(
    s0: DirectedEdgeState,
    col: &Coloring,
    region: &Region,
    cap: u64,
    arc_capacity: usize,
) -> Result<PathRecord> {
    let mut walk = Walk::new(s0, col, region, cap)?;
    let mut arc = VecDeque::with_capacity(arc_capacity.min(1024));
    let push = |s: DirectedEdgeState, arc: &mut VecDeque<DirectedEdgeState>| {
        if arc_capacity == 0 {
            return;
        }
        if arc.len() == arc_capacity {
            arc.pop_front();
        }
        arc.push_back(s);
    };
    push(s0, &mut arc);
    while let Some(s) = walk.next_state()? {
        push(s, &mut arc);
    }
    Ok(record(&walk, Some(arc)))
}

/// Whether all three cells of an edge carry distinct colors.
pub fn is_tricolor(edge: &EdgeClique, col: &Coloring) -> Result<bool> {
    let [a, b, c] = edge.cells();
    let (ca, cb, cc) = (col.color_at(a)?, col.color_at(b)?, col.color_at(c)?);
    Ok(ca != cb && cb != cc && ca != cc)
}

/// Both directed states of every tricolor edge lying in a bounded region.
pub fn find_states_on<'a>(
    region: &'a Region,
    col: &'a Coloring,
) -> Result<impl Iterator<Item = Result<DirectedEdgeState>> + 'a> {
    let edges = crate::lattice::enumerate_edges_in(region)?;
    Ok(edges.flat_map(move |e| {
        let out: Vec<Result<DirectedEdgeState>> = match is_tricolor(&e, col) {
            Ok(true) => e
                .completions()
                .into_iter()
                .map(|h| DirectedEdgeState::from_edge(&e, h, col))
                .collect(),
            Ok(false) => Vec::new(),
            Err(err) => vec![Err(err)],
        };
        out.into_iter()
    }))
}
