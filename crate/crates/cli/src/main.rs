use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use progsimp::geometry::{Curve, ErrorMeasure};
use progsimp::progressive::ScaleSequence;
use progsimp::{compute_all_errors_hull, compute_all_errors_naive, min_progressive_continuous, ErrorMatrix};
use progsimp_cli::*;

#[derive(Parser)]
#[command(name = "progsimp", about = "Progressive polygonal curve simplification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the all-pairs shortcut error matrix and write it as CSV.
    Errors {
        #[command(flatten)]
        input: InputArgs,
        /// naive or hull (hull is Hausdorff-only)
        #[arg(long, default_value = "hull")]
        method: String,
        #[arg(long, default_value = "hausdorff")]
        measure: String,
        /// Output CSV path (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export the shortcut interval set at a tolerance as `i,x,y` CSV.
    Graph {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "hausdorff")]
        measure: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the adjacency raster as a PGM image
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Run one progressive simplification algorithm.
    Simplify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "optimal")]
        algo: String,
        #[command(flatten)]
        scales: ScaleArgs,
        #[arg(long, default_value = "hausdorff")]
        measure: String,
        /// Range-query scan/tree cutoff constant
        #[arg(long)]
        cutoff: Option<f64>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory for simplification.csv and summary.json
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimize the size integral over all tolerances.
    Continuous {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "hausdorff")]
        measure: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare algorithms over curve prefixes; writes records and size table.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated prefix lengths
        #[arg(long)]
        ns: String,
        #[arg(long, default_value_t = 10)]
        num_scales: usize,
        #[arg(long, default_value = "decile")]
        sampling: String,
        /// Comma-separated algorithm ids (default: all)
        #[arg(long)]
        algos: Option<String>,
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Render a simplification pyramid as SVG.
    Render {
        #[command(flatten)]
        input: InputArgs,
        /// simplification.csv produced by `simplify`
        #[arg(long)]
        simplification: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a synthetic curve as CSV.
    Synth {
        /// zigzag, random-walk or noisy-circle
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input curve CSV (`x,y` lines)
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ScaleArgs {
    /// Explicit comma-separated tolerance list
    #[arg(long)]
    epsilons: Option<String>,
    /// Number of scales to sample from the shortcut errors
    #[arg(long)]
    num_scales: Option<usize>,
    /// decile or all
    #[arg(long, default_value = "decile")]
    sampling: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_curve(args: &InputArgs) -> CliResult<Curve> {
    let f = File::open(&args.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let (c, dropped) = ingest_csv(BufReader::new(f))?;
    if dropped > 0 {
        eprintln!("warning: collapsed {dropped} consecutive duplicate point(s)");
    }
    Ok(c)
}

fn parse_measure(s: &str) -> CliResult<ErrorMeasure> {
    s.parse()
        .map_err(|_| CliError::Input(format!("unknown measure `{s}`")))
}

fn out_writer(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn create(p: &Path) -> CliResult<File> {
    File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

fn matrix_for(c: &Curve, method: &str, measure: ErrorMeasure) -> CliResult<ErrorMatrix> {
    match method {
        "naive" => Ok(compute_all_errors_naive(c, measure)),
        "hull" => {
            if measure != ErrorMeasure::Hausdorff {
                return Err(CliError::Input(
                    "the hull method supports only the hausdorff measure".into(),
                ));
            }
            Ok(compute_all_errors_hull(c))
        }
        other => Err(CliError::Input(format!("unknown method `{other}`"))),
    }
}

fn resolve_scales(c: &Curve, args: &ScaleArgs, measure: ErrorMeasure) -> CliResult<ScaleSequence> {
    match (&args.epsilons, args.num_scales) {
        (Some(list), None) => {
            let eps: Vec<f64> = list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Input(format!("bad tolerance `{s}`")))
                })
                .collect::<CliResult<_>>()?;
            Ok(ScaleSequence::new(eps)?)
        }
        (None, Some(count)) => {
            let rule: SamplingRule = args.sampling.parse()?;
            let m = match measure {
                ErrorMeasure::Hausdorff => compute_all_errors_hull(c),
                _ => compute_all_errors_naive(c, measure),
            };
            sample_scales(&m, count, rule)
        }
        _ => Err(CliError::Input(
            "pass exactly one of --epsilons or --num-scales".into(),
        )),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Errors {
            input,
            method,
            measure,
            output,
        } => {
            let c = load_curve(&input)?;
            let m = matrix_for(&c, &method, parse_measure(&measure)?)?;
            let mut w = out_writer(&output)?;
            m.write_csv(&mut w)?;
        }
        Command::Graph {
            input,
            epsilon,
            measure,
            output,
            pgm,
        } => {
            let c = load_curve(&input)?;
            let g = graph_for(&c, epsilon, parse_measure(&measure)?)?;
            write_intervals_csv(out_writer(&output)?, &g)?;
            if let Some(p) = pgm {
                write_density_pgm(BufWriter::new(create(&p)?), &g)?;
            }
        }
        Command::Simplify {
            input,
            algo,
            scales,
            measure,
            cutoff,
            threads,
            output,
        } => {
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            let c = load_curve(&input)?;
            let measure = parse_measure(&measure)?;
            let algo: Algorithm = algo.parse()?;
            let seq = resolve_scales(&c, &scales, measure)?;
            let cutoff = cutoff.unwrap_or_else(default_cutoff);
            let start = std::time::Instant::now();
            let ps = run_algorithm(&c, &seq, measure, algo, cutoff)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            std::fs::create_dir_all(&output)
                .map_err(|e| CliError::Input(format!("{}: {e}", output.display())))?;
            write_simplification_csv(
                BufWriter::new(create(&output.join("simplification.csv"))?),
                &ps,
            )?;
            let summary = summarize(algo, c.len(), &ps, wall_ms);
            serde_json::to_writer_pretty(
                BufWriter::new(create(&output.join("summary.json"))?),
                &summary,
            )
            .map_err(|e| CliError::Internal(e.to_string()))?;
            eprintln!(
                "cumulative size {} over {} scale(s) in {:.1} ms",
                summary.cumulative,
                summary.sizes.len(),
                wall_ms
            );
        }
        Command::Continuous {
            input,
            measure,
            output,
        } => {
            let c = load_curve(&input)?;
            let cont = min_progressive_continuous(&c, parse_measure(&measure)?)?;
            write_continuous_csv(out_writer(&output)?, &cont)?;
        }
        Command::Bench {
            input,
            ns,
            num_scales,
            sampling,
            algos,
            cutoff,
            output,
        } => {
            let c = load_curve(&input)?;
            let ns: Vec<usize> = ns
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Input(format!("bad prefix length `{s}`")))
                })
                .collect::<CliResult<_>>()?;
            let algos: Vec<Algorithm> = match algos {
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<CliResult<_>>()?,
                None => Algorithm::ALL.to_vec(),
            };
            let rule: SamplingRule = sampling.parse()?;
            std::fs::create_dir_all(&output)
                .map_err(|e| CliError::Input(format!("{}: {e}", output.display())))?;
            let records = run_bench(
                &c,
                &ns,
                num_scales,
                rule,
                &algos,
                cutoff.unwrap_or_else(default_cutoff),
                BufWriter::new(create(&output.join("records.csv"))?),
                io::stderr().lock(),
            )?;
            let mut table = BufWriter::new(create(&output.join("scale_sizes.csv"))?);
            if let Some(&n) = ns.last() {
                write_scale_table(&mut table, &records, n)?;
            }
        }
        Command::Render {
            input,
            simplification,
            output,
        } => {
            let c = load_curve(&input)?;
            let f = File::open(&simplification)
                .map_err(|e| CliError::Input(format!("{}: {e}", simplification.display())))?;
            let ps = read_simplification_csv(BufReader::new(f))?;
            render_svg(BufWriter::new(create(&output)?), &c, &ps)?;
        }
        Command::Synth {
            kind,
            n,
            seed,
            output,
        } => {
            let c = synth_curve(kind.parse()?, n, seed)?;
            write_curve_csv(out_writer(&output)?, &c)?;
        }
    }
    Ok(())
}
