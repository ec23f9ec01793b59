use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, PrismLayerIndex, MIN_PRISM_N};
use crate::error::{Error, Result};
use crate::flow::{loop_flux, prism_boundary_loop};
use crate::lattice::{enumerate_edges_in, EdgeClique, Region};
use crate::prf::{derive_seed, tag, FastHashSet};
use crate::tracer::{is_tricolor, trace, DirectedEdgeState, PathRecord, Termination};

/// A tricolor path through the whole layer window, traced both ways from an
/// edge in the middle layer.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ChainSummary {
    pub start: DirectedEdgeState,
    pub forward: PathRecord,
    pub backward: PathRecord,
    /// Layer of the first head outside the window in each direction.
    pub exit_layers: (i64, i64),
    pub length: u64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PrismReport {
    pub n: i64,
    pub height: i64,
    pub seed: u64,
    /// Flux through the boundary loop of each layer `0..height`.
    pub fluxes: Vec<i64>,
    /// Tricolor edges in the window with an endpoint vertex outside the
    /// prism, i.e. edges leaving through a rectangular side.
    pub side_tricolor_edges: u64,
    pub chain: ChainSummary,
}

/// Colors the layers `0..height` of `T_n` with the barycentric law, checks
/// that each layer boundary carries flux 1 and that no tricolor edge leaves
/// through the sides, and traces a path spanning the window.
///
/// Any violation is a [`Error::ModelViolation`].
pub fn prism_run(n: i64, height: i64, seed: u64) -> Result<PrismReport> {
    if n < MIN_PRISM_N {
        return Err(Error::InvalidParameter(format!(
            "prism size must be at least {MIN_PRISM_N}, got {n}"
        )));
    }
    if height < 1 {
        return Err(Error::InvalidParameter(format!(
            "height must be at least 1, got {height}"
        )));
    }
    let col = Coloring::prism(n, derive_seed(seed, tag::PRISM, 0))?;
    let window = Region::Prism {
        n,
        layers: Some((0, height - 1)),
    };

    let mut fluxes = Vec::with_capacity(height as usize);
    for k in 0..height {
        let f = loop_flux(&prism_boundary_loop(n, k)?, &col)?;
        if f != 1 {
            return Err(Error::ModelViolation(format!("layer {k} carries flux {f}")));
        }
        fluxes.push(f);
    }

    let mut side_tricolor_edges = 0u64;
    let mut middle = Vec::new();
    let mid = height / 2;
    for e in enumerate_edges_in(&window)? {
        if !is_tricolor(&e, &col)? {
            continue;
        }
        if e.completions()
            .iter()
            .any(|&d| PrismLayerIndex::locate(d, n).is_none())
        {
            side_tricolor_edges += 1;
        }
        let in_middle = e
            .cells()
            .iter()
            .any(|&c| PrismLayerIndex::locate(c, n).is_some_and(|l| l.k == mid));
        if in_middle {
            middle.push(e);
        }
    }
    if side_tricolor_edges > 0 {
        return Err(Error::ModelViolation(format!(
            "{side_tricolor_edges} tricolor edges leave through the prism sides"
        )));
    }

    let chain = spanning_chain(&middle, &col, &window, n, height)?
        .ok_or_else(|| Error::ModelViolation("no tricolor path spans the layer window".into()))?;
    Ok(PrismReport {
        n,
        height,
        seed,
        fluxes,
        side_tricolor_edges,
        chain,
    })
}

fn spanning_chain(
    middle: &[EdgeClique],
    col: &Coloring,
    window: &Region,
    n: i64,
    height: i64,
) -> Result<Option<ChainSummary>> {
    let mut seen: FastHashSet<EdgeClique> = FastHashSet::default();
    for e in middle {
        if seen.contains(e) {
            continue;
        }
        let s0 = DirectedEdgeState::from_edge(e, e.completions()[0], col)?;
        let forward = crate::tracer::trace_with_arc(s0, col, window, u64::MAX, usize::MAX)?;
        let arc = forward.arc.as_deref().unwrap_or_default();
        seen.extend(arc.iter().map(|s| s.edge()));
        if forward.termination != Termination::RegionExit {
            continue;
        }
        let backward = trace(s0.reversed(), col, window, u64::MAX)?;
        let layer = |r: &PathRecord| PrismLayerIndex::locate(r.end.head, n).map(|l| l.k);
        let (a, b) = match (layer(&forward), layer(&backward)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::ModelViolation(
                    "a tricolor path left the prism".into(),
                ))
            }
        };
        let spans = (a < 0 && b >= height) || (b < 0 && a >= height);
        if spans {
            let forward = PathRecord {
                arc: None,
                ..forward
            };
            return Ok(Some(ChainSummary {
                start: s0,
                length: forward.steps + backward.steps + 1,
                forward,
                backward,
                exit_layers: (a, b),
            }));
        }
    }
    Ok(None)
}
