use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use tangle_core::oracle::{random_density_matrices, stream_seed, verification_report, MergedReport};
use tangle_core::{Method, RandomSpec};

use crate::bench;
use crate::format::{parse_matrix_file, write_matrix_file, Diagnostic, LabeledState};
use crate::record::{to_json_line, Detail, ResultRecord, VerifyRecord};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Validation = 2,
    Violation = 3,
}

#[derive(Debug, Parser)]
#[command(name = "tangle", version, about = "Entanglement of formation of two-qubit density matrices")]
pub struct Cli {
    /// Worker threads for batch commands (default: one per core). Output order
    /// never depends on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence, entanglement of formation and lambda spectrum.
    Eof(InputArgs),
    /// Concurrence and lambda spectrum only.
    Concurrence(InputArgs),
    /// Like `eof`, plus an optimal decomposition with a self-check.
    Decompose(InputArgs),
    /// Check the closed form against the construction and sampled decompositions.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Random decompositions per matrix.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a file of seeded random density matrices.
    Random {
        /// ginibre, mixture_of_pures or haar_pure.
        #[arg(long, default_value = "ginibre", value_parser = parse_method)]
        method: Method,
        /// Rank of every state (default: 1 for haar_pure, 4 otherwise).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; `-` writes to standard output.
        output: PathBuf,
    },
    /// Time eof (and decompose) over pre-generated random matrices on one thread.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the decompose timing.
        #[arg(long)]
        eof_only: bool,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix file (JSON).
    pub input: PathBuf,
    /// Rescale each matrix to unit trace when its trace lies in [0.9, 1.1].
    #[arg(long)]
    pub normalize: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown method {s:?} (expected ginibre, mixture_of_pures or haar_pure)"))
}

/// Parses `args` (including the program name) and runs the command. Records
/// go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    Exit::Success
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    Exit::Usage
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "tangle: {message}");
            Exit::Usage
        }
    }
}

/// Usage and I/O failures come back as `Err` (exit 1).
fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, String> {
    if cli.threads == Some(0) {
        return Err("--threads must be at least 1".into());
    }
    let threads = cli.threads;
    match cli.command {
        Command::Eof(input) => records(&input, Detail::Eof, threads, out, err),
        Command::Concurrence(input) => records(&input, Detail::Concurrence, threads, out, err),
        Command::Decompose(input) => records(&input, Detail::Decompose, threads, out, err),
        Command::Verify { input, samples, seed } => {
            if samples == 0 {
                return Err("--samples must be at least 1".into());
            }
            verify(&input, samples, seed, threads, out, err)
        }
        Command::Random { method, rank, count, seed, output } => {
            let rank = rank.unwrap_or(if method == Method::HaarPure { 1 } else { 4 });
            let spec = RandomSpec { method, rank, count, seed };
            spec.validate()?;
            let text = random_file(&spec);
            if output.as_os_str() == "-" {
                out.write_all(text.as_bytes()).map_err(|e| format!("writing output: {e}"))?;
            } else {
                fs::write(&output, text).map_err(|e| format!("{}: {e}", output.display()))?;
            }
            Ok(Exit::Success)
        }
        Command::Bench { count, seed, eof_only } => {
            if count == 0 {
                return Err("--count must be at least 1".into());
            }
            bench::run(count, seed, eof_only, out).map_err(|e| format!("writing output: {e}"))?;
            Ok(Exit::Success)
        }
    }
}

/// The matrix file `tangle random` writes for `spec`.
pub fn random_file(spec: &RandomSpec) -> String {
    let states = random_density_matrices(spec);
    let labels: Vec<String> = (0..spec.count)
        .map(|i| format!("{}-rank{}-seed{}-{i}", spec.method.name(), spec.rank, spec.seed))
        .collect();
    write_matrix_file(labels.iter().map(String::as_str).zip(states.iter().map(|s| s.matrix())))
}

fn load(input: &InputArgs, err: &mut dyn Write) -> Result<(Vec<LabeledState>, bool), String> {
    let text = fs::read_to_string(&input.input).map_err(|e| format!("{}: {e}", input.input.display()))?;
    let parsed = parse_matrix_file(&text, input.normalize);
    report(&input.input, &parsed.diagnostics, err);
    Ok((parsed.states, !parsed.diagnostics.is_empty()))
}

fn report(path: &Path, diagnostics: &[Diagnostic], err: &mut dyn Write) {
    for d in diagnostics {
        let _ = writeln!(err, "tangle: {}: {d}", path.display());
    }
}

fn parallel_map<T, F>(threads: Option<usize>, states: &[LabeledState], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&LabeledState) -> T + Sync + Send,
{
    let work = || states.par_iter().map(&f).collect();
    match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

fn records(input: &InputArgs, detail: Detail, threads: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, String> {
    let (states, mut invalid) = load(input, err)?;
    let results = parallel_map(threads, &states, |s| ResultRecord::compute(&s.label, &s.rho, detail));
    for (s, r) in states.iter().zip(results) {
        match r {
            Ok(record) => writeln!(out, "{}", to_json_line(&record)).map_err(|e| format!("writing output: {e}"))?,
            Err(e) => {
                invalid = true;
                let _ = writeln!(err, "tangle: {}: matrix {} ({}): {e}", input.input.display(), s.index, s.label);
            }
        }
    }
    Ok(if invalid { Exit::Validation } else { Exit::Success })
}

fn verify(input: &InputArgs, samples: usize, seed: u64, threads: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, String> {
    let (states, invalid) = load(input, err)?;
    let results = parallel_map(threads, &states, |s| verification_report(&s.rho, samples, stream_seed(seed, s.index as u64)));
    let mut total = MergedReport::empty();
    let mut violated = false;
    for (s, r) in states.iter().zip(results) {
        match r {
            Ok(report) => {
                total = total.merge(&MergedReport::from(&report));
                if !report.passed() {
                    violated = true;
                    let _ = writeln!(err, "tangle: {}: matrix {} ({}): {} violation(s)", input.input.display(), s.index, s.label, report.violations);
                }
                writeln!(out, "{}", to_json_line(&VerifyRecord::new(&s.label, &report))).map_err(|e| format!("writing output: {e}"))?;
            }
            Err(e) => {
                violated = true;
                let _ = writeln!(err, "tangle: {}: matrix {} ({}): construction failed: {e}", input.input.display(), s.index, s.label);
            }
        }
    }
    let _ = writeln!(
        err,
        "verified {} matrices x {} samples: {} violation(s); smallest margins: entanglement {:.3e}, concurrence {:.3e}",
        total.states, samples, total.violations, total.min_entanglement_margin, total.min_concurrence_margin
    );
    Ok(if violated {
        Exit::Violation
    } else if invalid {
        Exit::Validation
    } else {
        Exit::Success
    })
}
