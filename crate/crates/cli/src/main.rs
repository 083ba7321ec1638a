//! `symcond` command-line tool.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symcond::experiments::{ratio_experiment, speed_benchmark, verify_suite, ExperimentConfig, RankRule, VerifyConfig};
use symcond::io::{load_decomposition, Decomposition};
use symcond::{
    condition_psrd_fast, condition_segre, condition_segre_veronese, condition_veronese, condition_waring_fast,
    ConditionReport, Error, PsrdDecomposition,
};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "symcond", version, about = "Condition numbers of symmetric tensor decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldArg {
    Segre,
    Veronese,
    SegreVeronese,
}

#[derive(Subcommand)]
enum Command {
    /// Condition number of the decomposition stored in a JSON file.
    Cond {
        file: PathBuf,
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        /// Use the compressed fast path (Veronese and Segre-Veronese only).
        #[arg(long)]
        fast: bool,
    },
    /// Ratio of CPD to Waring condition numbers over random decompositions.
    RatioExperiment {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long = "D", default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV output.
        #[arg(long)]
        out: PathBuf,
        /// Summary CSV output; defaults to `<out stem>_summary.csv`.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Use this single rank instead of every rank below the finiteness bound.
        #[arg(long = "rank")]
        rank: Option<usize>,
    },
    /// Time the direct and compressed Waring paths.
    Bench {
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long = "D", default_value_t = 3)]
        order: usize,
        #[arg(long = "R", default_value_t = 8)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized property checks.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        #[arg(long, hide = true)]
        corrupt_tangent_basis: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SvdNoConvergence | Error::EigNoConvergence | Error::Allocation { .. } | Error::NonFinite { .. } => {
                EXIT_NUMERICAL
            }
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult = Result<(), Failure>;

fn print_json(value: &impl serde::Serialize) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn with_fallback(
    fast: Result<ConditionReport, Error>,
    direct: impl FnOnce() -> Result<ConditionReport, Error>,
) -> Result<ConditionReport, Error> {
    match fast {
        Err(e @ Error::FastPathInapplicable { .. }) => {
            eprintln!("warning: {e}; falling back to the direct path");
            direct()
        }
        other => other,
    }
}

fn cond(file: &Path, manifold: ManifoldArg, fast: bool) -> CliResult {
    let loaded = load_decomposition(file)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let report = match (loaded.decomposition, manifold) {
        (_, ManifoldArg::Segre) if fast => {
            return Err(Failure::usage("--fast is available for veronese and segre-veronese only"))
        }
        (Decomposition::Waring(d), ManifoldArg::Segre) => condition_segre(&d)?,
        (Decomposition::Waring(d), ManifoldArg::Veronese) if fast => {
            with_fallback(condition_waring_fast(&d), || condition_veronese(&d))?
        }
        (Decomposition::Waring(d), ManifoldArg::Veronese) => condition_veronese(&d)?,
        (Decomposition::Waring(d), ManifoldArg::SegreVeronese) => {
            psrd_condition(&PsrdDecomposition::from_waring(&d), fast)?
        }
        (Decomposition::Psrd(p), ManifoldArg::SegreVeronese) => psrd_condition(&p, fast)?,
        (Decomposition::Psrd(p), ManifoldArg::Segre) => {
            if p.degrees().iter().any(|&d| d != 1) {
                return Err(Failure::usage("segre needs a partially symmetric file with all degrees equal to 1"));
            }
            condition_segre_veronese(&p)?
        }
        (Decomposition::Psrd(_), ManifoldArg::Veronese) => {
            return Err(Failure::usage("veronese needs a Waring file with keys n, D, terms"))
        }
    };
    print_json(&report)
}

fn psrd_condition(p: &PsrdDecomposition, fast: bool) -> Result<ConditionReport, Error> {
    if fast {
        with_fallback(condition_psrd_fast(p), || condition_segre_veronese(p))
    } else {
        condition_segre_veronese(p)
    }
}

fn default_summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "ratio".into());
    out.with_file_name(format!("{stem}_summary.csv"))
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult {
    let io_fail = |e: std::io::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(io_fail)?);
    body(&mut w).and_then(|()| w.flush()).map_err(io_fail)
}

fn ratio(cfg: ExperimentConfig, out: &Path, summary: Option<PathBuf>) -> CliResult {
    let outcome = ratio_experiment(&cfg)?;
    let summary = summary.unwrap_or_else(|| default_summary_path(out));
    write_file(out, |w| outcome.write_records_csv(w))?;
    write_file(&summary, |w| outcome.write_summary_csv(w))?;
    let infinite = outcome.records.iter().filter(|r| r.infinite).count();
    let failed = outcome.records.iter().filter(|r| r.failure.is_some()).count();
    eprintln!(
        "{} trials, {} infinite, {} failed; max ratio {}, min ratio {}",
        outcome.records.len(),
        infinite,
        failed,
        outcome.max_ratio().unwrap_or(f64::NAN),
        outcome.min_ratio().unwrap_or(f64::NAN),
    );
    eprintln!("wrote {} and {}", out.display(), summary.display());
    if failed > 0 {
        return Err(Failure { code: EXIT_NUMERICAL, message: format!("{failed} trials failed numerically") });
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Cond { file, manifold, fast } => cond(&file, manifold, fast),
        Command::RatioExperiment { n_min, n_max, order, trials, seed, out, summary, rank } => {
            let rank_rule = rank.map_or(RankRule::FinitenessBound, RankRule::Fixed);
            ratio(ExperimentConfig { n_min, n_max, order, trials, seed, rank_rule }, &out, summary)
        }
        Command::Bench { n, order, rank, reps, seed } => print_json(&speed_benchmark(n, order, rank, seed, reps)?),
        Command::Verify { seed, cases, corrupt_tangent_basis } => {
            let report = verify_suite(&VerifyConfig { seed, cases, corrupt_tangent_basis });
            print!("{}", report.render());
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure { code: EXIT_VERIFY, message: "verification failed".into() })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
