//! Experiment runner for viscous-shock contraction and decay studies.
//!
//! Subcommands: `run` (simulate an experiment config), `verify-lemmas`
//! (standalone inequality corpus), `report` (recompute the summary of a
//! stored run). Exit codes follow the runner contract: 2 for config/parse
//! problems, 3 for admissibility failures, 4 for numerical aborts, 1 for
//! failed checks.

use clap::{Parser, Subcommand};
use shocklab::config::ExperimentConfig;
use shocklab::error::Error;
use shocklab::inequalities::{run_lemma_suite, LemmaSuiteOptions};
use shocklab::persist;
use shocklab::runner::{self, RunOptions};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shocklab", version, about = "Planar viscous shock laboratory")]
struct Cli {
    /// Worker threads for stencil passes (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an experiment config and write run artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: config [output].dir, else
        /// $SHOCKLAB_OUT/<config-stem>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override for seeded initial-data families.
        #[arg(long)]
        seed: Option<u64>,
        /// Run hypothesis-violating configurations anyway (negative tests).
        #[arg(long)]
        allow_inadmissible: bool,
    },
    /// Run the lemma verification corpus and write a JSON report.
    VerifyLemmas {
        /// Report path (default: lemma_report.json under $SHOCKLAB_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Substring filter over lemma/fixture ids.
        #[arg(long)]
        filter: Option<String>,
        /// Number of random weighted-Poincaré fixtures.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Negative control: corrupt one fixture so the suite must fail.
        #[arg(long, hide = true)]
        inject_failure: bool,
    },
    /// Recompute summary and plot data from a stored run directory.
    Report {
        run_dir: PathBuf,
        /// Fit-window override.
        #[arg(long)]
        tmin: Option<f64>,
    },
}

fn out_root() -> PathBuf {
    std::env::var_os("SHOCKLAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Format(_)
        | Error::InvalidFlux(_)
        | Error::InvalidParameter(_)
        | Error::G2BoundViolated { .. }
        | Error::DegenerateShock { .. } => 2,
        Error::NotAdmissible(_) => 3,
        Error::NumericalAbort { .. }
        | Error::ProfileWidth { .. }
        | Error::NonFinite(_)
        | Error::GridMismatch { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: failed to set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    let code = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            allow_inadmissible,
        } => cmd_run(&config, out, seed, allow_inadmissible),
        Command::VerifyLemmas {
            out,
            filter,
            cases,
            inject_failure,
        } => cmd_verify_lemmas(out, filter, cases, inject_failure),
        Command::Report { run_dir, tmin } => cmd_report(&run_dir, tmin),
    };
    ExitCode::from(code)
}

fn cmd_run(
    config_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    allow_inadmissible: bool,
) -> u8 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", config_path.display());
            return 2;
        }
    };
    let cfg = match ExperimentConfig::from_toml_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let validated = match cfg.validate() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let out_dir = out
        .or_else(|| validated.config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| {
            let stem = config_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into());
            out_root().join(stem)
        });
    if !validated.admissibility.admissible {
        eprintln!("admissibility: {}", validated.admissibility);
    }
    let opts = RunOptions {
        out_dir: Some(out_dir.clone()),
        seed,
        allow_inadmissible,
    };
    let output = match runner::execute(&validated, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    println!(
        "run completed: t_final = {}, out = {}",
        validated.config.time.t_final,
        out_dir.display()
    );
    println!(
        "alpha = {:.6}, C0 = {:.6}, beta = {:.6}, dt = {:.6e}",
        output.manifest.constants.alpha,
        output.manifest.constants.c0,
        output.manifest.constants.beta,
        output.manifest.dt
    );
    let mut all_pass = true;
    for (name, verdict) in output.summary.gate_checks() {
        let word = match verdict {
            Some(true) => "pass",
            Some(false) => {
                all_pass = false;
                "FAIL"
            }
            None => "inconclusive",
        };
        println!("{name}: {word}");
    }
    if output.summary.decay.conclusive {
        println!(
            "decay: slope = {:.4}, envelope ratio = {:.4}",
            output.summary.decay.slope, output.summary.decay.envelope_ratio
        );
    }
    if all_pass {
        0
    } else {
        1
    }
}

fn cmd_verify_lemmas(
    out: Option<PathBuf>,
    filter: Option<String>,
    cases: usize,
    inject_failure: bool,
) -> u8 {
    let opts = LemmaSuiteOptions {
        poincare_random_cases: cases,
        filter,
        inject_failure,
        ..Default::default()
    };
    let reports = match run_lemma_suite(&opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if reports.is_empty() {
        eprintln!("error: lemma corpus is empty after filtering; nothing verified");
        return 2;
    }
    let out_path = out.unwrap_or_else(|| out_root().join("lemma_report.json"));
    if let Err(e) = persist::write_json(&out_path, &reports) {
        eprintln!("error: cannot write report {}: {e}", out_path.display());
        return 2;
    }
    let failures: Vec<_> = reports.iter().filter(|r| !r.ok).collect();
    let degenerate = reports.iter().filter(|r| r.degenerate).count();
    println!(
        "verified {} fixtures ({} flagged degenerate), report at {}",
        reports.len(),
        degenerate,
        out_path.display()
    );
    if failures.is_empty() {
        println!("all lemma checks pass");
        0
    } else {
        for f in &failures {
            eprintln!("FAIL {} / {} (margin {:.3e})", f.lemma, f.fixture, f.margin);
        }
        1
    }
}

fn cmd_report(run_dir: &Path, tmin: Option<f64>) -> u8 {
    let (manifest, summary) = match runner::report(run_dir, tmin) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if manifest.status == "aborted" {
        println!(
            "ABORTED RUN (partial report): {}",
            manifest.abort_detail.as_deref().unwrap_or("no detail")
        );
    }
    if let Err(e) = persist::write_json(&run_dir.join("summary.json"), &summary) {
        eprintln!("error: {e}");
        return 2;
    }
    let csv = match std::fs::read_to_string(run_dir.join("diagnostics.csv")) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let series = match persist::parse_diagnostics_csv(&csv) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = persist::write_plot_csv(&run_dir.join("plot_decay.csv"), &series) {
        eprintln!("error: {e}");
        return 2;
    }
    println!(
        "samples = {}, l2: {:.6e} -> {:.6e}",
        series.len(),
        summary.contraction.l2_initial,
        summary.contraction.l2_final
    );
    println!(
        "decay slope = {:.4} (conclusive: {}), envelope ratio = {:.4}",
        summary.decay.slope, summary.decay.conclusive, summary.decay.envelope_ratio
    );
    if let Some(slope) = summary.xdot.slope {
        println!("xdot slope = {slope:.4}");
    }
    println!(
        "shift bound margin = {:.4e}, sublinear margin = {:.4e}",
        summary.l1.shift_bound - summary.l1.shift_max_abs,
        summary.sublinear.min_margin
    );
    for (name, verdict) in summary.gate_checks() {
        let word = match verdict {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "inconclusive",
        };
        println!("{name}: {word}");
    }
    0
}
