use clap::{Parser, Subcommand, ValueEnum};
use mlsa_bench::emit::{load_summary_json, write_rows_csv, write_summary_json};
use mlsa_bench::svg::{render_loglog, Series};
use mlsa_bench::summary::{Summary, SummaryRow};
use mlsa_bench::{execute, load_plan, load_rows_csv, summarize, BenchError};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "mlsa-bench",
    about = "Value-at-risk estimation benchmark: nested, multilevel and adaptively refined SA schemes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the replication matrix of an experiment config.
    Run {
        /// Experiment config (TOML).
        config: PathBuf,
        /// Worker threads for the cell matrix.
        #[arg(long, default_value_t = default_parallelism())]
        parallelism: usize,
        /// Output directory (defaults to the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override (also via the MLSA_SEED environment variable).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute summaries and slopes from a rows CSV.
    Summarize {
        /// Rows file produced by `run`.
        rows: PathBuf,
        /// Output directory (defaults to the rows file's directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a log-log figure from a summary JSON.
    Plot {
        /// Summary file produced by `run` or `summarize`.
        summary: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Horizontal axis.
        #[arg(long, value_enum, default_value_t = XAxis::Eps)]
        x: XAxis,
        /// Vertical axis.
        #[arg(long, value_enum, default_value_t = YAxis::Evals)]
        y: YAxis,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum XAxis {
    /// Prescribed accuracy ε.
    Eps,
    /// Achieved root-mean-square error.
    Rmse,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum YAxis {
    /// Mean loss-simulator evaluations per run.
    Evals,
    /// Mean wall time per run in seconds.
    Time,
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn main() {
    if let Err(e) = dispatch() {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            eprintln!("  caused by: {s}");
            source = s.source();
        }
        std::process::exit(1);
    }
}

fn dispatch() -> Result<(), BenchError> {
    match Cli::parse().command {
        Command::Run { config, parallelism, out, seed } => run(&config, parallelism, out, seed),
        Command::Summarize { rows, out } => cmd_summarize(&rows, out),
        Command::Plot { summary, out, x, y } => plot(&summary, &out, x, y),
    }
}

fn run(
    config: &Path,
    parallelism: usize,
    out: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<(), BenchError> {
    let mut plan = load_plan(config)?;
    if let Some(seed) = seed.or_else(env_seed) {
        plan.seed = seed;
    }
    let out_dir = out.unwrap_or_else(|| plan.output_dir.clone());
    std::fs::create_dir_all(&out_dir).map_err(|source| BenchError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;

    let cell_count = plan.schemes.iter().map(|s| s.cells.len()).sum::<usize>()
        * plan.replications as usize;
    eprintln!(
        "running '{}': {} schemes x {} accuracies x {} replications = {} cells on {} threads (seed {})",
        plan.name,
        plan.schemes.len(),
        plan.accuracies.len(),
        plan.replications,
        cell_count,
        parallelism,
        plan.seed
    );

    let started = std::time::Instant::now();
    let (rows, failures) = execute(&plan, parallelism);
    eprintln!("completed {} cells in {:.1}s", rows.len(), started.elapsed().as_secs_f64());

    let summary = summarize(&rows);
    print_summary(&summary);

    write_rows_csv(&out_dir.join("rows.csv"), &rows)?;
    write_summary_json(&out_dir.join("summary.json"), &plan.name, &summary)?;
    for (file, x, y) in [
        ("evals_vs_eps.svg", XAxis::Eps, YAxis::Evals),
        ("time_vs_eps.svg", XAxis::Eps, YAxis::Time),
        ("rmse_vs_evals.svg", XAxis::Rmse, YAxis::Evals),
        ("rmse_vs_time.svg", XAxis::Rmse, YAxis::Time),
    ] {
        let svg = render_figure(&summary, x, y);
        let path = out_dir.join(file);
        std::fs::write(&path, svg).map_err(|source| BenchError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    eprintln!("wrote rows.csv, summary.json and figures to {}", out_dir.display());

    for f in &failures {
        eprintln!(
            "FAILED cell scheme={} epsilon={} run={}: {}",
            f.scheme, f.epsilon, f.run, f.error
        );
    }
    if !failures.is_empty() {
        eprintln!("{} of {} cells failed", failures.len(), cell_count);
        std::process::exit(1);
    }
    Ok(())
}

fn env_seed() -> Option<u64> {
    let raw = std::env::var("MLSA_SEED").ok()?;
    match raw.trim().parse() {
        Ok(seed) => Some(seed),
        Err(_) => {
            eprintln!("warning: ignoring unparsable MLSA_SEED='{raw}'");
            None
        }
    }
}

fn cmd_summarize(rows_path: &Path, out: Option<PathBuf>) -> Result<(), BenchError> {
    let rows = load_rows_csv(rows_path)?;
    let summary = summarize(&rows);
    print_summary(&summary);
    let out_dir = out
        .or_else(|| rows_path.parent().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|source| BenchError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let name = rows_path.file_stem().and_then(|s| s.to_str()).unwrap_or("summary");
    write_summary_json(&out_dir.join("summary.json"), name, &summary)?;
    eprintln!("wrote {}", out_dir.join("summary.json").display());
    Ok(())
}

fn plot(summary_path: &Path, out: &Path, x: XAxis, y: YAxis) -> Result<(), BenchError> {
    let doc = load_summary_json(summary_path)?;
    let svg = render_figure(&doc.summary, x, y);
    std::fs::write(out, svg).map_err(|source| BenchError::Io {
        path: out.display().to_string(),
        source,
    })?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn render_figure(summary: &Summary, x: XAxis, y: YAxis) -> String {
    let pick_x = |r: &SummaryRow| match x {
        XAxis::Eps => r.epsilon,
        XAxis::Rmse => r.rmse,
    };
    let pick_y = |r: &SummaryRow| match y {
        YAxis::Evals => r.mean_evals,
        YAxis::Time => r.mean_time_s,
    };

    let mut series = Vec::new();
    for slopes in &summary.slopes {
        let points: Vec<(f64, f64)> = summary
            .rows
            .iter()
            .filter(|r| r.scheme == slopes.scheme)
            .map(|r| (pick_x(r), pick_y(r)))
            .collect();
        let fit = match (x, y) {
            (XAxis::Eps, YAxis::Evals) => slopes.evals_vs_eps,
            (XAxis::Eps, YAxis::Time) => slopes.time_vs_eps,
            (XAxis::Rmse, YAxis::Evals) => slopes.evals_vs_rmse,
            (XAxis::Rmse, YAxis::Time) => slopes.time_vs_rmse,
        };
        series.push(Series {
            name: slopes.scheme.clone(),
            points,
            fit: fit.map(|f| (f.slope, f.intercept)),
        });
    }

    let xlabel = match x {
        XAxis::Eps => "prescribed accuracy",
        XAxis::Rmse => "RMSE",
    };
    let ylabel = match y {
        YAxis::Evals => "mean evaluations per run",
        YAxis::Time => "mean wall time per run (s)",
    };
    render_loglog(&format!("{ylabel} vs {xlabel}"), xlabel, ylabel, &series)
}

fn print_summary(summary: &Summary) {
    println!(
        "{:<14} {:>12} {:>6} {:>12} {:>14} {:>12}",
        "scheme", "epsilon", "runs", "rmse", "mean_evals", "mean_time_s"
    );
    for r in &summary.rows {
        println!(
            "{:<14} {:>12.6} {:>6} {:>12.6} {:>14.3e} {:>12.4}",
            r.scheme, r.epsilon, r.runs, r.rmse, r.mean_evals, r.mean_time_s
        );
    }
    for s in &summary.slopes {
        let fmt = |f: Option<mlsa_bench::summary::SlopeFit>| match f {
            Some(f) => format!("{:+.2}", f.slope),
            None => "n/a".to_string(),
        };
        println!(
            "slopes[{}]: evals~eps {} | time~eps {} | evals~rmse {} | time~rmse {}",
            s.scheme,
            fmt(s.evals_vs_eps),
            fmt(s.time_vs_eps),
            fmt(s.evals_vs_rmse),
            fmt(s.time_vs_rmse)
        );
    }
}
