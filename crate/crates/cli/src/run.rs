use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;
use serde_json::{json, Value};

use tricolor::estimators::*;
use tricolor::lattice::Region;
use tricolor::permutohedral::loop_length_histogram_d;
use tricolor::tracer::{trace_with_arc, Termination};
use tricolor::{CellCoord, Color, Coloring, DirectedEdgeState, ProbVector};

use crate::args::*;
use crate::mesh::{write_mtl, Mesh};

pub fn prob(p: &PArg) -> anyhow::Result<ProbVector> {
    Ok(match p.p[..] {
        [a, b] => ProbVector::from_two(a, b)?,
        [a, b, c] => ProbVector::new(a, b, c)?,
        _ => bail!("--p takes two or three values, got {}", p.p.len()),
    })
}

fn mode(unconfined: bool) -> AnnulusMode {
    if unconfined {
        AnnulusMode::Unconfined
    } else {
        AnnulusMode::Confined
    }
}

fn check_parent(path: &Path) -> anyhow::Result<()> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if !parent.is_dir() {
        bail!("output directory {} does not exist", parent.display());
    }
    Ok(())
}

/// Validation that needs no computation: probability vectors and output
/// directories.
pub fn validate(cli: &Cli) -> anyhow::Result<()> {
    if let Some(out) = &cli.out {
        check_parent(out)?;
    }
    match &cli.command {
        Command::Annulus(a) => {
            prob(&a.p)?;
        }
        Command::Loops(a) => {
            prob(&a.p)?;
            if let Some(c) = &a.csv {
                check_parent(c)?;
            }
        }
        Command::Scale(a) => {
            prob(&a.p)?;
        }
        Command::Faces(a) => {
            prob(&a.p)?;
            if let Some(c) = &a.csv {
                check_parent(c)?;
            }
        }
        Command::Perm(a) => {
            if let Some(c) = &a.csv {
                check_parent(c)?;
            }
        }
        Command::Export(a) => {
            prob(&a.p)?;
            check_parent(&a.obj)?;
            if a.cells.is_none() && a.cells_file.is_none() && !a.trace {
                bail!("export needs --cells, --cells-file or --trace");
            }
        }
        Command::Pc(_) | Command::Prism(_) | Command::Scan(_) => {}
    }
    Ok(())
}

fn write_csv(path: &Option<PathBuf>, h: &Histogram) -> anyhow::Result<()> {
    if let Some(p) = path {
        fs::write(p, h.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn histogram_steps(h: &Histogram) -> u64 {
    h.bins.iter().map(|(k, v)| k * v).sum::<u64>() + h.truncated_mass * h.cap
}

/// Runs the command on the current rayon pool. Returns the payload and the
/// tracer step count where it is tracked.
pub fn dispatch(cli: &Cli) -> anyhow::Result<(Value, Option<u64>)> {
    validate(cli)?;
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Annulus(a) => (
            serde_json::to_value(annulus_crossing(
                prob(&a.p)?,
                a.n,
                a.trials,
                seed,
                mode(a.unconfined),
            )?)?,
            None,
        ),
        Command::Loops(a) => {
            let h = loop_length_histogram(prob(&a.p)?, a.trials, a.cap, seed)?;
            write_csv(&a.csv, &h)?;
            let fit = exponential_tail_fit(&h, a.fit_lo, a.fit_hi, a.fit_width, a.fit_min_count);
            let steps = histogram_steps(&h);
            let (fit, fit_error) = match fit {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            (
                json!({ "histogram": h, "tail_fit": fit, "tail_fit_error": fit_error }),
                Some(steps),
            )
        }
        Command::Scale(a) => (
            serde_json::to_value(scaling_exponent(prob(&a.p)?, &a.lengths, a.trials, seed)?)?,
            None,
        ),
        Command::Pc(a) => (
            serde_json::to_value(estimate_pc(&a.sizes, a.trials, seed)?)?,
            None,
        ),
        Command::Faces(a) => {
            let kind = match a.kind {
                FaceKindArg::Orange => FaceKind::Orange,
                FaceKindArg::Green => FaceKind::Green,
                FaceKindArg::Purple => FaceKind::Purple,
            };
            let h = face_cluster_histogram(prob(&a.p)?, kind, a.trials, a.cap, seed)?;
            write_csv(&a.csv, &h)?;
            (json!({ "kind": kind, "histogram": h }), None)
        }
        Command::Prism(a) => {
            let r = prism_run(a.n, a.height, seed)?;
            let steps = r.chain.length;
            (serde_json::to_value(r)?, Some(steps))
        }
        Command::Scan(a) => (
            serde_json::to_value(phase_scan(
                a.resolution,
                a.n,
                a.trials,
                seed,
                mode(a.unconfined),
            )?)?,
            None,
        ),
        Command::Perm(a) => {
            let h = loop_length_histogram_d(a.d, a.trials, a.cap, seed)?;
            write_csv(&a.csv, &h)?;
            let steps = histogram_steps(&h);
            (
                json!({ "d": a.d, "colors": a.d - 1, "histogram": h }),
                Some(steps),
            )
        }
        Command::Export(a) => export(a, seed)?,
    })
}

#[derive(Deserialize)]
struct CellEntry {
    cell: [i64; 3],
    color: Option<Color>,
}

fn parse_cells(s: &str) -> anyhow::Result<Vec<(CellCoord, Option<Color>)>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: Vec<i64> = t
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("bad cell `{t}`"))?;
            match v[..] {
                [x, y, z] => Ok((CellCoord::new(x, y, z)?, None)),
                _ => bail!("cell `{t}` needs three coordinates"),
            }
        })
        .collect()
}

fn export(a: &ExportArgs, seed: u64) -> anyhow::Result<(Value, Option<u64>)> {
    let mut steps = None;
    let cells = if let Some(s) = &a.cells {
        parse_cells(s)?
    } else if let Some(path) = &a.cells_file {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let entries: Vec<CellEntry> = serde_json::from_str(&text)?;
        entries
            .into_iter()
            .map(|e| Ok((CellCoord::try_from(e.cell)?, e.color)))
            .collect::<anyhow::Result<_>>()?
    } else {
        let col = Coloring::uniform(prob(&a.p)?, seed)
            .with_fixed(DirectedEdgeState::canonical_origin_colors());
        let rec = trace_with_arc(
            DirectedEdgeState::canonical_origin(),
            &col,
            &Region::All,
            a.cap,
            usize::MAX,
        )?;
        steps = Some(rec.steps);
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let start = DirectedEdgeState::canonical_origin();
        for s in std::iter::once(&start).chain(rec.arc.iter().flatten()) {
            for c in s.cells {
                if seen.insert(c) {
                    out.push((c, Some(col.color_at(c)?)));
                }
            }
        }
        if rec.termination == Termination::StepCap {
            eprintln!("note: path truncated at {} steps", rec.steps);
        }
        out
    };
    let mesh = Mesh::from_cells(&cells);
    let mtl = a.obj.with_extension("mtl");
    let mtl_name = mtl
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut obj_buf = Vec::new();
    mesh.write_obj(&mut obj_buf, &mtl_name)?;
    fs::write(&a.obj, obj_buf).with_context(|| format!("writing {}", a.obj.display()))?;
    let mut mtl_buf = Vec::new();
    write_mtl(&mut mtl_buf)?;
    fs::write(&mtl, mtl_buf).with_context(|| format!("writing {}", mtl.display()))?;
    Ok((
        json!({
            "obj": a.obj,
            "mtl": mtl,
            "cells": cells.len(),
            "vertices": mesh.vertices.len(),
            "faces": mesh.faces.len(),
        }),
        steps,
    ))
}
