use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tsgen::cbf::{cbf_generate_dataset, CbfParams};
use tsgen::classify::{knn1_loo_score, run_sweep, Axis, Generator, Param, SweepSpec};
use tsgen::distance::{distance, DistanceKind};
use tsgen::io;
use tsgen::ram::{ram_generate_dataset, RamParams};
use tsgen::{Error, LabeledDataset, Result};

#[derive(Parser)]
#[command(
    name = "tsgen",
    version,
    about = "Multidimensional time-series generators and 1-NN benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled dataset
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Distance between two records of a dataset file
    Distance {
        #[arg(long)]
        kind: DistanceKind,
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Leave-one-out 1-NN score of a dataset file
    Classify {
        #[arg(long)]
        kind: DistanceKind,
        #[arg(long)]
        file: PathBuf,
    },
    /// Score a grid of generator parameters
    Sweep(SweepArgs),
    /// Render a score table
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand)]
enum GenerateCmd {
    Cbf {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        class_size: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    Ram {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        distortion: f64,
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        class_size: usize,
        #[arg(long, default_value_t = 1.0)]
        impulse_scale: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    generator: Generator,
    /// Comma-separated distance kinds
    #[arg(long, value_delimiter = ',', required = true)]
    kind: Vec<DistanceKind>,
    /// NAME=v1,v2,... (at most twice)
    #[arg(long = "axis", required = true)]
    axes: Vec<String>,
    /// NAME=VALUE
    #[arg(long)]
    fixed: Vec<String>,
    #[arg(long)]
    replicates: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum ExportCmd {
    Heatmap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_number(param: Param, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("bad value {s:?} for {param}")))
}

fn split_assignment(s: &str) -> Result<(Param, &str)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("expected NAME=VALUE, got {s:?}")))?;
    Ok((name.trim().parse()?, value))
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    if args.axes.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "at most 2 sweep axes, got {}",
            args.axes.len()
        )));
    }
    let axes = args
        .axes
        .iter()
        .map(|a| {
            let (param, values) = split_assignment(a)?;
            let values = values
                .split(',')
                .map(|v| parse_number(param, v))
                .collect::<Result<Vec<_>>>()?;
            Ok(Axis { param, values })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fixed = BTreeMap::new();
    for f in &args.fixed {
        let (param, value) = split_assignment(f)?;
        if fixed.insert(param, parse_number(param, value)?).is_some() {
            return Err(Error::InvalidArgument(format!("parameter {param} fixed twice")));
        }
    }
    let mut kinds = args.kind.clone();
    kinds.dedup();
    Ok(SweepSpec {
        generator: args.generator,
        kinds,
        axes,
        fixed,
        replicates: args.replicates,
        seed: args.seed,
    })
}

/// `s.csv` + dtw -> `s.dtw.csv`
fn kind_path(out: &Path, kind: DistanceKind) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{kind}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{kind}"),
    };
    out.with_file_name(name)
}

fn record(ds: &LabeledDataset, index: usize) -> Result<&tsgen::TimeSeries> {
    ds.items().get(index).map(|it| it.series()).ok_or_else(|| {
        Error::InvalidArgument(format!("record {index} out of range (dataset has {})", ds.len()))
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(cmd) => {
            let (ds, out) = match cmd {
                GenerateCmd::Cbf {
                    length,
                    dim,
                    classes,
                    class_size,
                    seed,
                    out,
                } => {
                    let params = CbfParams {
                        length,
                        dim,
                        num_classes: classes,
                        class_size,
                        seed,
                    };
                    (cbf_generate_dataset(&params)?, out)
                }
                GenerateCmd::Ram {
                    length,
                    dim,
                    radius,
                    distortion,
                    classes,
                    class_size,
                    impulse_scale,
                    seed,
                    out,
                } => {
                    let params = RamParams {
                        length,
                        dim,
                        radius,
                        distortion,
                        num_classes: classes,
                        class_size,
                        impulse_scale,
                        seed,
                    };
                    (ram_generate_dataset(&params)?, out)
                }
            };
            io::write_dataset_file(&ds, &out)?;
            println!(
                "wrote {} series ({} classes, dimensionality {}) to {}",
                ds.len(),
                ds.labels().len(),
                ds.dim(),
                out.display()
            );
        }
        Command::Distance { kind, file, a, b } => {
            let ds = io::read_dataset_file(file)?;
            println!("{}", distance(kind, record(&ds, a)?, record(&ds, b)?)?);
        }
        Command::Classify { kind, file } => {
            let ds = io::read_dataset_file(file)?;
            println!("{}", knn1_loo_score(&ds, kind)?);
        }
        Command::Sweep(args) => {
            let spec = sweep_spec(&args)?;
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(jobs) = args.jobs {
                if jobs == 0 {
                    return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
                }
                pool = pool.num_threads(jobs);
            }
            let pool = pool
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
            let tables = pool.install(|| run_sweep(&spec))?;
            for table in &tables {
                let path = if tables.len() == 1 {
                    args.out.clone()
                } else {
                    kind_path(&args.out, table.distance)
                };
                io::write_scores_file(table, &path)?;
                println!(
                    "wrote {} cells ({}) to {}",
                    table.cell_count(),
                    table.distance,
                    path.display()
                );
            }
        }
        Command::Export(ExportCmd::Heatmap { input, out }) => {
            let table = io::read_scores_file(input)?;
            io::export_heatmap_file(&table, &out)?;
            println!("wrote heatmap to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
