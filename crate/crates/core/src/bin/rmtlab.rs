use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rmtlab::harness::{emit, parse_config_file, run_experiment, ExperimentConfig, ExperimentKind, Format, Report, OUT_DIR_ENV};
use rmtlab::{Error, Result};

/// Random-matrix universality laboratory.
///
/// Exit status: 0 when every check passes, 1 on a statistical failure,
/// 2 on a configuration or runtime error.
#[derive(Parser, Debug)]
#[command(name = "rmtlab", version)]
struct Cli {
    /// Experiment kind (omit when using --config).
    kind: Option<ExperimentKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    /// gaussian | rademacher | uniform | student_t:<dof> | goe | gue | tridiag:<beta>
    #[arg(long)]
    dist: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Kind-specific parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "rmtlab-out")]
    out: PathBuf,
    /// Output formats, repeatable or comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    format: Vec<Format>,
    /// Replace existing artifacts.
    #[arg(long)]
    force: bool,
    /// Artifact file stem (default: the kind, or the section name).
    #[arg(long)]
    name: Option<String>,
    /// Run experiments from a sectioned key-value file.
    #[arg(long, conflicts_with_all = ["kind", "n", "reps", "dist", "params"])]
    config: Option<PathBuf>,
    /// Only run this section of --config.
    #[arg(long, requires = "config")]
    section: Option<String>,
}

fn config_from_flags(cli: &Cli) -> Result<ExperimentConfig> {
    let kind = cli.kind.ok_or_else(|| Error::Config("an experiment kind or --config is required".into()))?;
    let needs_size = kind != ExperimentKind::TwTable;
    let n = cli.n.or((!needs_size).then_some(0)).ok_or_else(|| Error::Config("--n is required".into()))?;
    let reps = cli.reps.or((!needs_size).then_some(0)).ok_or_else(|| Error::Config("--reps is required".into()))?;
    let mut cfg = ExperimentConfig::new(kind, n, reps).with_seed(cli.seed).with_workers(cli.workers);
    if let Some(d) = &cli.dist {
        cfg = cfg.with_dist(d.parse()?);
    }
    for p in &cli.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--param expects KEY=VALUE, got '{p}'")))?;
        cfg = cfg.with_param(k.trim(), v.trim());
    }
    Ok(cfg)
}

fn jobs(cli: &Cli) -> Result<Vec<(String, ExperimentConfig)>> {
    let Some(path) = &cli.config else {
        let cfg = config_from_flags(cli)?;
        let stem = cli.name.clone().unwrap_or_else(|| cfg.kind.to_string());
        return Ok(vec![(stem, cfg)]);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut sections = parse_config_file(&text)?;
    if let Some(s) = &cli.section {
        sections.retain(|(name, _)| name == s);
        if sections.is_empty() {
            return Err(Error::Config(format!("no section [{s}] in {}", path.display())));
        }
    }
    Ok(sections
        .into_iter()
        .map(|(name, mut cfg)| {
            // command-line parallelism applies to every section that does not set it
            if cfg.workers == 1 {
                cfg.workers = cli.workers;
            }
            (name, cfg)
        })
        .collect())
}

fn fmt_num(v: Option<f64>) -> String {
    match v {
        Some(x) if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) => format!("{x:.4e}"),
        Some(x) => format!("{x:.6}"),
        None => "nan".into(),
    }
}

fn print_summary(stem: &str, report: &Report) {
    println!("{stem}: {} n={} reps={} dist={}", report.metadata.kind, report.metadata.n, report.metadata.reps, report.metadata.dist);
    for w in &report.metadata.warnings {
        println!("  warning: {w}");
    }
    for e in &report.summary.estimates {
        let v = fmt_num(e.value);
        match e.std_error {
            Some(se) => println!("  {:<40} {v} ± {}", e.name, fmt_num(Some(se))),
            None => println!("  {:<40} {v}", e.name),
        }
    }
    for c in &report.summary.checks {
        let s = fmt_num(c.statistic);
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("  {verdict} {:<35} {s} {:?} {}", c.name, c.comparison, c.threshold);
    }
    if report.summary.failed_replicates > 0 {
        println!("  failed replicates: {}", report.summary.failed_replicates);
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let formats = if cli.format.is_empty() { Format::ALL.to_vec() } else { cli.format.clone() };
    let mut all_passed = true;
    for (stem, cfg) in jobs(cli)? {
        let start = Instant::now();
        let report = run_experiment(cfg)?;
        let paths = emit(&report, &formats, &cli.out, &stem, cli.force)?;
        print_summary(&stem, &report);
        for p in paths {
            println!("  wrote {}", p.display());
        }
        eprintln!("{stem}: wall time {:.2} s", start.elapsed().as_secs_f64());
        all_passed &= report.summary.passed;
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rmtlab: {e}");
            ExitCode::from(2)
        }
    }
}
