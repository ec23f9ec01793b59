use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{check_trials, run_trials, Estimate};
use crate::coloring::{Coloring, ProbVector};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_edges_in, CellCoord, EdgeClique, Region};
use crate::prf::{derive_seed, tag, FastHashSet};
use crate::tracer::{is_tricolor, DirectedEdgeState, Walk};

/// Where crossing paths may go.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnulusMode {
    /// Paths stay inside the annulus `A_n`.
    #[default]
    Confined,
    /// Paths may also pass through the inner cube.
    Unconfined,
}

/// Width of the boundary shells in which paths start and end.
const SHELL_WIDTH: i64 = 2;

/// One annulus-crossing trial on a given coloring: whether some tricolor
/// path joins the inner shell `n < ‖c‖∞ ≤ n+2` to the outer shell
/// `‖c‖∞ ≥ 3n−2` of `A_n`.
///
/// Every tricolor edge lying in `A_n` with a cell in the inner shell is a
/// start edge; the path through it is traced in both directions. Edges seen
/// on earlier paths are skipped.
pub fn annulus_trial(col: &Coloring, n: i64, mode: AnnulusMode) -> Result<bool> {
    check_n(n)?;
    let annulus = Region::annulus(n);
    let trace_region = match mode {
        AnnulusMode::Confined => annulus,
        AnnulusMode::Unconfined => Region::cube(3 * n),
    };
    let seeds = Region::Shell {
        inner: n,
        outer: n + 2 * SHELL_WIDTH,
        center: CellCoord::ORIGIN,
    };
    let inner = |c: CellCoord| c.linf_norm() <= n + SHELL_WIDTH;
    let outer = |e: &EdgeClique| {
        e.cells()
            .iter()
            .any(|c| c.linf_norm() >= 3 * n - SHELL_WIDTH)
    };

    let mut visited: FastHashSet<EdgeClique> = FastHashSet::default();
    for e in enumerate_edges_in(&seeds)? {
        if !e.cells().iter().any(|&c| inner(c)) || visited.contains(&e) || !is_tricolor(&e, col)? {
            continue;
        }
        if outer(&e) {
            return Ok(true);
        }
        visited.insert(e);
        let s0 = DirectedEdgeState::from_edge(&e, e.completions()[0], col)?;
        for start in [s0, s0.reversed()] {
            let mut walk = Walk::new(start, col, &trace_region, u64::MAX)?;
            while let Some(s) = walk.next_state()? {
                let edge = s.edge();
                if outer(&edge) {
                    return Ok(true);
                }
                if !visited.insert(edge) {
                    // closed loop, or a path already traced from the other end
                    break;
                }
            }
        }
    }
    Ok(false)
}

fn check_n(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "annulus size must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Fraction of independent colorings with a tricolor path crossing `A_n`.
pub fn annulus_crossing(
    p: ProbVector,
    n: i64,
    trials: u64,
    seed: u64,
    mode: AnnulusMode,
) -> Result<Estimate> {
    check_n(n)?;
    check_trials(trials)?;
    let hits = run_trials(trials, |t| {
        let col = Coloring::uniform(p, derive_seed(seed, tag::ANNULUS, t));
        annulus_trial(&col, n, mode)
    })?;
    let successes = hits.iter().filter(|&&h| h).count() as u64;
    Ok(Estimate::binomial(
        successes,
        trials,
        seed,
        json!({ "p": p.components(), "n": n, "mode": mode }),
    ))
}
