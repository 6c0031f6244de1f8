//! Thin command-line front end: parses flags (with key=value config-file
//! fallback; flags win), dispatches to the library, prints one JSON report
//! to stdout. Exit codes: 0 success, 1 usage or input error, 2 invariant
//! violation.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use coarselab::error::Error;
use coarselab::filling::FillingParams;
use coarselab::run::{
    self, AnalyzeArgs, BoundaryArgs, Caps, CoverageArgs, FillArgs, GenArgs, PerfectnessArgs,
    RichArgs, RigidityArgs, SpaceArgs, SpaceKind,
};

#[derive(Parser)]
#[command(name = "coarselab", version, about = "Coarse-geometry experiments on finite graphs")]
struct Cli {
    /// key=value config file supplying defaults for any flag not given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here as well as to stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    vertex_cap: Option<usize>,

    #[arg(long, global = true)]
    pair_cap: Option<usize>,

    #[arg(long, global = true)]
    triple_budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpaceFlags {
    #[arg(long)]
    cantor_depth: Option<u32>,
    #[arg(long)]
    cantor_ratio: Option<f64>,
    #[arg(long)]
    n_min: Option<i32>,
    #[arg(long)]
    n_max: Option<i32>,
    #[arg(long)]
    valence: Option<usize>,
    #[arg(long)]
    tree_depth: Option<u32>,
    /// Comma-separated tooth lengths for comb spaces.
    #[arg(long)]
    teeth: Option<String>,
}

#[derive(Args, Clone)]
struct FillFlags {
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    ball_factor: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus space and write it to --out-file.
    Gen {
        /// Space kind: cantor | lacunary | tree | comb.
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        space: SpaceFlags,
        /// Destination path for the metric CSV or graph file.
        #[arg(long = "out")]
        out_file: PathBuf,
    },
    /// Build the hyperbolic filling of a metric CSV.
    Fill {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        fill: FillFlags,
        /// Destination path for the graph file.
        #[arg(long = "out")]
        out_file: PathBuf,
        /// Sidecar JSON with per-vertex (level, center, radius) records.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Hyperbolicity constants of a graph file.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        triangles: Option<usize>,
    },
    /// Boundary products, visual metrics, and the boundary perfectness
    /// profile of a filling.
    Boundary {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        fill: FillFlags,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Directory for products.csv, rho.csv, visual.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Uniform-perfectness profile of a metric CSV.
    Perfectness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Coverage of a filling by quasi-centroids of its boundary triples.
    CentroidCoverage {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        fill: FillFlags,
        #[arg(long)]
        rho: Option<f64>,
        /// Triple budget for this run; overrides --triple-budget.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Segment schedule, stretch maps, displacement, and fitted constants.
    Rigidity {
        /// Space kind: cantor | lacunary | tree | comb.
        #[arg(long = "space")]
        kind: Option<String>,
        #[command(flatten)]
        space: SpaceFlags,
        /// Filling depth (metric spaces) or tree depth (tree, comb).
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long = "D")]
        d_param: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// Also run the tooth-halving probe (comb only).
        #[arg(long)]
        halve_teeth: bool,
        /// CSV of per-segment displacement vs length.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Geodesic-richness conditions with derived constants.
    Rich {
        /// Space kind: cantor | lacunary | tree | comb.
        #[arg(long = "space")]
        kind: Option<String>,
        #[command(flatten)]
        space: SpaceFlags,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        r1: Option<f64>,
        #[arg(long)]
        r2: Option<f64>,
        #[arg(long)]
        sample: Option<usize>,
    },
}

/// Flag value, or config-file value, or default.
fn pick<T: FromStr + Clone>(flag: &Option<T>, cfg: &BTreeMap<String, String>, key: &str, default: T) -> T {
    if let Some(v) = flag {
        return v.clone();
    }
    cfg.get(key).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn pick_opt<T: FromStr + Clone>(flag: &Option<T>, cfg: &BTreeMap<String, String>, key: &str) -> Option<T> {
    flag.clone().or_else(|| cfg.get(key).and_then(|s| s.parse().ok()))
}

fn parse_teeth(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad tooth length {t:?}")))
        })
        .collect()
}

fn space_args(flags: &SpaceFlags, cfg: &BTreeMap<String, String>) -> Result<SpaceArgs, Error> {
    let default = SpaceArgs::default();
    let teeth = match pick_opt(&flags.teeth, cfg, "teeth") {
        Some(text) => parse_teeth(&text)?,
        None => default.teeth.clone(),
    };
    Ok(SpaceArgs {
        cantor_depth: pick(&flags.cantor_depth, cfg, "cantor_depth", default.cantor_depth),
        cantor_ratio: pick(&flags.cantor_ratio, cfg, "cantor_ratio", default.cantor_ratio),
        n_min: pick(&flags.n_min, cfg, "n_min", default.n_min),
        n_max: pick(&flags.n_max, cfg, "n_max", default.n_max),
        valence: pick(&flags.valence, cfg, "valence", default.valence),
        tree_depth: pick(&flags.tree_depth, cfg, "tree_depth", default.tree_depth),
        teeth,
    })
}

fn space_kind(
    kind: &Option<String>,
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> Result<SpaceKind, Error> {
    match pick_opt(kind, cfg, key) {
        Some(text) => text.parse(),
        None => Err(Error::InvalidInput(format!("missing --{key}"))),
    }
}

fn fill_params(flags: &FillFlags, cfg: &BTreeMap<String, String>) -> FillingParams {
    let default = FillingParams::default();
    FillingParams {
        r: pick(&flags.r, cfg, "r", default.r),
        max_level: pick(&flags.levels, cfg, "levels", default.max_level),
        ball_factor: pick(&flags.ball_factor, cfg, "ball_factor", default.ball_factor),
    }
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let cfg = match &cli.config {
        Some(path) => run::parse_config(&std::fs::read_to_string(path)?),
        None => BTreeMap::new(),
    };
    let caps = Caps {
        vertex_cap: pick(&cli.vertex_cap, &cfg, "vertex_cap", Caps::default().vertex_cap),
        pair_cap: pick(&cli.pair_cap, &cfg, "pair_cap", Caps::default().pair_cap),
        triple_budget: pick(
            &cli.triple_budget,
            &cfg,
            "triple_budget",
            Caps::default().triple_budget,
        ),
    };
    let seed = pick(&cli.seed, &cfg, "seed", 0u64);
    let json = match &cli.command {
        Command::Gen { kind, space, out_file } => {
            let args = GenArgs {
                kind: space_kind(kind, &cfg, "kind")?,
                space: space_args(space, &cfg)?,
                out: out_file.clone(),
                caps,
            };
            run::to_json(&run::gen_run(&args)?)
        }
        Command::Fill {
            input,
            fill,
            out_file,
            meta,
        } => {
            let args = FillArgs {
                input: input.clone(),
                params: fill_params(fill, &cfg),
                out: out_file.clone(),
                meta_out: meta.clone(),
                caps,
            };
            run::to_json(&run::fill_run(&args)?)
        }
        Command::Analyze { input, triangles } => {
            let args = AnalyzeArgs {
                input: input.clone(),
                triangles: pick(triangles, &cfg, "triangles", 2000),
                seed,
                caps,
            };
            run::to_json(&run::analyze_run(&args)?)
        }
        Command::Boundary {
            input,
            fill,
            epsilon,
            out_dir,
        } => {
            let args = BoundaryArgs {
                input: input.clone(),
                params: fill_params(fill, &cfg),
                epsilon: pick_opt(epsilon, &cfg, "epsilon"),
                out_dir: out_dir.clone(),
                caps,
                seed,
            };
            run::to_json(&run::boundary_run(&args)?)
        }
        Command::Perfectness { input, r0 } => {
            let args = PerfectnessArgs {
                input: input.clone(),
                r0: pick_opt(r0, &cfg, "r0"),
                caps,
            };
            run::to_json(&run::perfectness_run(&args)?)
        }
        Command::CentroidCoverage {
            input,
            fill,
            rho,
            budget,
        } => {
            let mut caps = caps;
            if let Some(b) = pick_opt(budget, &cfg, "budget") {
                caps.triple_budget = b;
            }
            let args = CoverageArgs {
                input: input.clone(),
                params: fill_params(fill, &cfg),
                rho: pick_opt(rho, &cfg, "rho"),
                seed,
                caps,
            };
            run::to_json(&run::coverage_run(&args)?)
        }
        Command::Rigidity {
            kind,
            space,
            depth,
            d_param,
            count,
            halve_teeth,
            csv,
        } => {
            let args = RigidityArgs {
                kind: space_kind(kind, &cfg, "space")?,
                space: space_args(space, &cfg)?,
                depth: pick(depth, &cfg, "depth", 5),
                d_param: pick(d_param, &cfg, "d", 0.5),
                count: pick(count, &cfg, "count", 1),
                seed,
                caps,
                halve_teeth: *halve_teeth,
                csv_out: csv.clone(),
            };
            run::to_json(&run::rigidity_run(&args)?)
        }
        Command::Rich {
            kind,
            space,
            depth,
            r0,
            r1,
            r2,
            sample,
        } => {
            let args = RichArgs {
                kind: space_kind(kind, &cfg, "space")?,
                space: space_args(space, &cfg)?,
                depth: pick(depth, &cfg, "depth", 4),
                r0: pick(r0, &cfg, "r0", 1.0),
                r1: pick(r1, &cfg, "r1", 1.0),
                r2: pick(r2, &cfg, "r2", 1.0),
                sample: pick(sample, &cfg, "sample", 20_000),
                seed,
                caps,
            };
            run::to_json(&run::rich_run(&args)?)
        }
    };
    run::emit(&json, cli.report.as_deref())?;
    Ok(json)
}

fn main() -> ExitCode {
    run::configure_threads_from_env();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(json) => {
            print!("{json}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let payload = serde_json::json!({
                "schema": run::SCHEMA_VERSION,
                "error": { "kind": err.kind(), "message": err.to_string() },
            });
            eprintln!("{payload}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
