use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torus_harmonics::report::{
    emit_reports, exit, exit_code, run_selftest, tables, write_file, OutputFormat, RunConfig, Table,
    DEFAULT_TOLERANCE,
};
use torus_harmonics::{Error, Result, Setting};

const THREADS_VAR: &str = "TORUS_HARMONICS_THREADS";

#[derive(Parser)]
#[command(name = "torus-harmonics", version, about = "Harmonic analysis on the twisted finite upper half-plane of GL(2,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Odd prime q.
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Field parameters, generators and group sizes.
    FieldInfo(Output),
    /// The character table of GL(2,q).
    Chartable(Output),
    /// Torus double cosets with representatives and diagonal labels.
    Doublecosets(Output),
    /// Multiplicities of every irreducible in Ind Φ_j.
    Decompose {
        #[command(flatten)]
        output: Output,
        /// Dual index j of Φ.
        #[arg(long)]
        phi: u32,
    },
    /// Values of the spherical function of a cuspidal constituent, per double coset.
    Spherical {
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        phi: u32,
        /// Dual index of Λ; Λ and Λ^q name the same constituent.
        #[arg(long)]
        lambda: u32,
    },
    /// Uncertainty records for random Hecke functions.
    Uncertainty {
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        phi: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also scan epsilon, the coset indicators and the spherical functions.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run every check and write the findings report.
    Selftest {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 5, 7])]
        q: Vec<u32>,
        #[arg(long, default_value = "selftest-report")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random functions per character, overriding the defaults.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(short, long, action = clap::ArgAction::Count)]
        verbose: u8,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn setting_for(q: u32) -> Result<Setting> {
    RunConfig { qs: vec![q], ..RunConfig::default() }.validate()?;
    Setting::new(q)
}

fn deliver(table: &Table, output: &Output) -> Result<()> {
    let text = table.render(output.format);
    match &output.out {
        Some(path) => write_file(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let (table, output) = match &cli.command {
        Command::FieldInfo(o) => (tables::field_info(&setting_for(o.q)?), o),
        Command::Chartable(o) => (tables::chartable(&setting_for(o.q)?), o),
        Command::Doublecosets(o) => (tables::double_cosets(&setting_for(o.q)?), o),
        Command::Decompose { output, phi } => {
            let s = setting_for(output.q)?;
            (tables::decomposition(&s, tables::ext_character(&s, *phi)?)?, output)
        }
        Command::Spherical { output, phi, lambda } => {
            let s = setting_for(output.q)?;
            (tables::spherical(&s, tables::ext_character(&s, *phi)?, *lambda)?, output)
        }
        Command::Uncertainty { output, phi, samples, seed, exhaustive } => {
            if *samples == 0 && !exhaustive {
                return Err(Error::Config("nothing to do: samples is 0 and --exhaustive is off".into()));
            }
            let s = setting_for(output.q)?;
            (tables::uncertainty(&s, tables::ext_character(&s, *phi)?, *samples, *seed, *exhaustive)?, output)
        }
        Command::Selftest { q, out, tolerance, seed, samples, format, verbose } => {
            let cfg = RunConfig {
                qs: q.clone(),
                tolerance: *tolerance,
                seed: *seed,
                format: *format,
                out: Some(out.clone()),
                verbosity: *verbose,
                samples: *samples,
            };
            return selftest(&cfg, out);
        }
    };
    deliver(&table, output)?;
    Ok(exit::SUCCESS)
}

fn selftest(cfg: &RunConfig, out: &Path) -> Result<i32> {
    cfg.validate()?;
    let mut log = |o: &torus_harmonics::report::CriterionOutcome| println!("{}", o.line());
    let report = run_selftest(cfg, &mut log)?;
    emit_reports(&report, cfg, out)?;
    if cfg.verbosity > 0 {
        for e in &report.findings.entries {
            println!("{:<26} {}", e.claim_id, e.status.name());
        }
    }
    let failures = report.failures().len();
    println!(
        "{} criteria reported, {failures} failed; findings in {}",
        report.outcomes.len(),
        out.join("FINDINGS.md").display()
    );
    if failures > 0 {
        eprintln!("{}", report.failure_json());
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
