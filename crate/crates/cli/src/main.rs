//! `tverberg`: generate witness grids, certify them, run the exhaustive
//! oracles, build separating systems and run the Turán-type searches.
//!
//! Exit codes: 0 when every check passes, 2 when a certificate or check
//! fails, 1 on usage, input or cap errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::Status;

#[derive(Debug, Parser)]
#[command(name = "tverberg", version, about = "Exact witnesses and searches for Tverberg problems on unions of convex sets")]
pub struct Cli {
    /// Output directory [default: ./out]
    #[arg(long, global = true, env = "TVERBERG_OUT")]
    pub out: Option<PathBuf>,

    /// Seed for the randomized instance generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Re-run the command recorded in a manifest.
    #[arg(long, value_name = "MANIFEST")]
    pub replay: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate a planar scalloped grid (r = 2) or its torus lift (r >= 3).
    Generate(GridArgs),
    /// Certify a grid or torus witness.
    Certify(CertifyArgs),
    /// Enumerate every partition of a small grid or torus witness.
    Exhaust(ExhaustArgs),
    /// Build, improve and check a separating system for a random family.
    Separate(SeparateArgs),
    /// Hypercube-free sets, box-Turán numbers and geometric checks.
    #[command(subcommand)]
    Turan(TuranCommand),
    /// Render a grid or separating-system artifact as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Number of arcs, and points per arc.
    #[arg(long)]
    pub s: Option<usize>,
    /// Number of parts; r >= 3 lifts the grid into dimension 2r - 2.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Use 2s points per arc.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value_t = false)]
    pub refined: bool,
    #[arg(long, default_value_t = tverberg_core::constructions::DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Negative,
    Maximal,
    Exhaust,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    /// Grid or torus JSON from `generate`; without it the witness is
    /// generated from the grid flags.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GridArgs,
    #[arg(long, value_enum, default_value_t = Mode::Maximal)]
    pub mode: Mode,
    /// Cap for exhaust mode: grid points, or r-partitions for a torus.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExhaustArgs {
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GridArgs,
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeparateArgs {
    /// Number of disjoint convex sets.
    #[arg(long, default_value_t = 6)]
    pub a: usize,
    /// Family JSON (from a previous run) instead of a random one.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Improvement rounds.
    #[arg(long, default_value_t = tverberg_core::separating::DEFAULT_MAX_ROUNDS)]
    pub cap: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TuranCommand {
    /// Exact F(k, m, s).
    Hypercube {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        /// Search node budget.
        #[arg(long, default_value_t = tverberg_core::turan::hypercube::DEFAULT_NODE_CAP)]
        cap: u64,
    },
    /// The double-counting inequality and the power bound for F(k, m, s).
    Recursion {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = tverberg_core::turan::hypercube::DEFAULT_NODE_CAP)]
        cap: u64,
    },
    /// Exact balanced d-partite box-Turán number with parts of size n.
    Boxes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Largest candidate edge pool.
        #[arg(long, default_value_t = tverberg_core::turan::boxes::DEFAULT_POOL_CAP)]
        cap: usize,
    },
    /// Box-freeness of random intersection hypergraphs.
    BoxFree {
        /// Number of families (r - 1); the sets live in dimension parts - 1.
        #[arg(long, default_value_t = 2)]
        parts: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
    /// Inductive versus brute-force empty tuples for separated pairs.
    EmptyTuple {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
    /// Polyhedral thickening of random families with disjoint unions.
    Thicken {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// VC dimension of halfplane ranges on random points.
    Vc {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenderArgs {
    /// Grid JSON from `generate`.
    #[arg(long, conflicts_with = "separation", required_unless_present = "separation")]
    pub grid: Option<PathBuf>,
    /// Bipartition mask for the container overlay: bit k puts flat cell k
    /// in the second part.
    #[arg(long, requires = "grid")]
    pub partition: Option<u64>,
    /// Separation JSON from `separate`.
    #[arg(long)]
    pub separation: Option<PathBuf>,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "render.svg")]
    pub name: String,
}

fn report_error(err: &anyhow::Error) {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<tverberg_core::Error>().map(|c| c.kind()))
        .or_else(|| err.chain().find_map(|e| e.downcast_ref::<std::io::Error>().map(|_| "io")))
        .unwrap_or("usage");
    let report = serde_json::json!({
        "schema": tverberg_core::SCHEMA,
        "error": { "kind": kind, "message": format!("{err:#}") },
    });
    eprintln!("{report}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(2),
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}
