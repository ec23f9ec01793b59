//! Command-line flags and the TOML config file that mirrors them.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[command(
    name = "tricolor",
    version,
    about = "Tricolor percolation experiments",
    args_override_self = true
)]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// TOML file whose keys mirror the flags; flags given on the command
    /// line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON result record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Probability that a tricolor path crosses the annulus A_n.
    Annulus(AnnulusArgs),
    /// Length histogram of the loop through the origin edge.
    Loops(LoopsArgs),
    /// Scaling exponent of E[R²] against path length.
    Scale(ScaleArgs),
    /// Site percolation threshold by crossing bisection.
    Pc(PcArgs),
    /// Size histogram of the bicolor face cluster through a seed face.
    Faces(FacesArgs),
    /// Flux and spanning-path checks in the triangular prism.
    Prism(PrismArgs),
    /// Annulus crossing over a grid of the probability simplex.
    Scan(ScanArgs),
    /// Loop lengths on the permutohedral lattice of order d.
    Perm(PermArgs),
    /// Write cells as an OBJ mesh with a material file.
    Export(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Annulus(_) => "annulus",
            Command::Loops(_) => "loops",
            Command::Scale(_) => "scale",
            Command::Pc(_) => "pc",
            Command::Faces(_) => "faces",
            Command::Prism(_) => "prism",
            Command::Scan(_) => "scan",
            Command::Perm(_) => "perm",
            Command::Export(_) => "export",
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PArg {
    /// Color probabilities: two values (third inferred) or three.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0.3333333333333333,0.3333333333333333,0.3333333333333334")]
    pub p: Vec<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: PArg,
    #[arg(long, default_value_t = 8)]
    pub n: i64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Let paths pass through the inner cube.
    #[arg(long)]
    pub unconfined: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: PArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    /// Histogram CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub fit_lo: u64,
    #[arg(long, default_value_t = 200)]
    pub fit_hi: u64,
    #[arg(long, default_value_t = 2)]
    pub fit_width: u64,
    #[arg(long, default_value_t = 10)]
    pub fit_min_count: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: PArg,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1000,3162,10000,31623,100000")]
    pub lengths: Vec<u64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "16,32")]
    pub sizes: Vec<i64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKindArg {
    Orange,
    Green,
    Purple,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: PArg,
    #[arg(long, value_enum, default_value_t = FaceKindArg::Green)]
    pub kind: FaceKindArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 100_000)]
    pub cap: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrismArgs {
    #[arg(long, default_value_t = 12)]
    pub n: i64,
    #[arg(long, default_value_t = 24)]
    pub height: i64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanArgs {
    /// Grid resolution m: points (i, j, k)/m of the simplex.
    #[arg(long, default_value_t = 10)]
    pub resolution: u32,
    #[arg(long, default_value_t = 8)]
    pub n: i64,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long)]
    pub unconfined: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermArgs {
    /// Lattice order; cells get d − 1 colors.
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 100_000)]
    pub cap: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportArgs {
    /// OBJ output; the material file is written next to it.
    #[arg(long)]
    pub obj: PathBuf,
    /// Cells as `x,y,z;x,y,z;...`.
    #[arg(long, conflicts_with_all = ["cells_file", "trace"])]
    pub cells: Option<String>,
    /// JSON array of `{"cell": [x, y, z], "color": "red"}` (color optional).
    #[arg(long, conflicts_with = "trace")]
    pub cells_file: Option<PathBuf>,
    /// Export the cells along the path through the origin edge.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub p: PArg,
    #[arg(long, default_value_t = 10_000)]
    pub cap: u64,
}

fn subcommand_names() -> Vec<String> {
    Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

/// Flag tokens for a TOML table: `key = v` becomes `--key v`, arrays are
/// comma-joined, `true` becomes a bare flag and `false` is dropped. The
/// optional key `command` names the subcommand.
pub fn config_tokens(table: &toml::Table) -> anyhow::Result<(Option<String>, Vec<OsString>)> {
    let mut command = None;
    let mut out = Vec::new();
    for (key, value) in table {
        if key == "command" {
            match value {
                toml::Value::String(s) => command = Some(s.clone()),
                _ => bail!("config key `command` must be a string"),
            }
            continue;
        }
        if key == "config" {
            bail!("config files cannot nest");
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &toml::Value| -> anyhow::Result<String> {
            Ok(match v {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                _ => bail!("config key `{key}` has an unsupported value"),
            })
        };
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(scalar)
                    .collect::<anyhow::Result<Vec<_>>>()?;
                out.push(flag.into());
                out.push(parts.join(",").into());
            }
            v => {
                out.push(flag.into());
                out.push(scalar(v)?.into());
            }
        }
    }
    Ok((command, out))
}

/// Splices the flags of a `--config` file into `argv` right after the
/// subcommand, so that later command-line flags override them.
pub fn expand_config(argv: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .with_context(|| format!("parsing config {}", path.display()))?;
    let (command, tokens) = config_tokens(&table)?;
    let names = subcommand_names();
    let position = argv
        .iter()
        .skip(1)
        .position(|a| names.iter().any(|n| a == n.as_str()));
    let mut out = argv;
    match (position, command) {
        (Some(i), cmd) => {
            if let Some(cmd) = cmd {
                if out[i + 1] != cmd.as_str() {
                    bail!(
                        "config names command `{cmd}` but the command line has {:?}",
                        out[i + 1]
                    );
                }
            }
            out.splice(i + 2..i + 2, tokens);
        }
        (None, Some(cmd)) => {
            out.push(cmd.into());
            out.extend(tokens);
        }
        (None, None) => bail!("no subcommand on the command line or in {}", path.display()),
    }
    Ok(out)
}
