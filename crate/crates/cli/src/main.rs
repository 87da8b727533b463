//! Command-line driver: solve, check, attractor, oracle and render
//! subcommands over TOML run configs.
//!
//! Exit codes: 0 success, 1 oracle violation, 2 validation or schema
//! failure, 3 non-convergence, 4 I/O failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use starmeasure::config::{BuiltRun, RunConfig};
use starmeasure::error::Error;
use starmeasure::fixpoint::solve;
use starmeasure::gifs::{attractor_set, check_contraction};
use starmeasure::oracle;
use starmeasure::render::{read_measure_csv, render_pgm, render_pgm_strip, write_measure_csv};
use starmeasure::report::{write_point_set_csv, write_trace_csv, RunReport};
use starmeasure::space::PermGroup;
use starmeasure::tnorm::TNorm;

const EXIT_ORACLE_VIOLATION: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_IO: u8 = 4;

/// Samples drawn by the contraction checker.
const CONTRACTION_SAMPLES: usize = 512;

#[derive(Parser)]
#[command(name = "starmeasure", version, about = "Invariant idempotent measures of generalized iterated function systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the measure operator to its fixed point and write
    /// measure.csv, trace.csv, report.json and render.pgm.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the enumeration kernels (default: all cores,
        /// or STARMEASURE_THREADS).
        #[arg(long)]
        threads: Option<usize>,
        /// Run even when the contraction check finds no contraction.
        #[arg(long)]
        force: bool,
        /// Override the config's sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Validate the system and sample the contraction ladder.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Also write report.json into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Iterate the set map and write the attractor as attractor.csv.
    Attractor {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        force: bool,
    },
    /// Run the exact finite-model law suites and print a report.
    Oracle {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Render a measure CSV on the config's grid as a PGM image.
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Laws,
    Iso,
    Tensor,
    Projection,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve {
            config,
            out,
            threads,
            force,
            seed,
        } => {
            configure_threads(threads);
            cmd_solve(&config, &out, force, seed)
        }
        Command::Check {
            config,
            out,
            threads,
            seed,
        } => {
            configure_threads(threads);
            cmd_check(&config, out.as_deref(), seed)
        }
        Command::Attractor {
            config,
            out,
            threads,
            force,
        } => {
            configure_threads(threads);
            cmd_attractor(&config, &out, force)
        }
        Command::Oracle { suite } => cmd_oracle(suite),
        Command::Render {
            config,
            measure,
            out,
        } => cmd_render(&config, &measure, &out),
    }
}

/// Thread count resolution: --threads flag, then STARMEASURE_THREADS, then
/// the rayon default. Results never depend on the choice.
fn configure_threads(flag: Option<usize>) {
    let from_env = std::env::var("STARMEASURE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let threads = flag.or(from_env);
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    if let Some(n) = threads {
        if n > 1 {
            eprintln!("note: built without the parallel feature; running single-threaded");
        }
    }
}

fn load_and_build(path: &Path, seed_override: Option<u64>) -> Result<BuiltRun, Error> {
    let config = RunConfig::load(path)?;
    let mut built = config.build()?;
    if let Some(seed) = seed_override {
        built.seed = seed;
    }
    Ok(built)
}

fn cmd_solve(config: &Path, out: &Path, force: bool, seed: Option<u64>) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let built = load_and_build(config, seed)?;
    std::fs::create_dir_all(out)?;

    let validation = built.system.validate();
    let mut report = RunReport::new("solve", &built.config, &built.solver, &validation);
    if !validation.is_ok() {
        eprintln!("validation failed:\n{validation}");
        report.write_json(&out.join("report.json"))?;
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }

    let contraction = check_contraction(&built.system, CONTRACTION_SAMPLES, built.seed);
    if !contraction.contractive && !force {
        eprintln!(
            "contraction check found no contraction (max alpha {}); rerun with --force to iterate anyway",
            contraction.max_alpha()
        );
        report.contraction = Some(&contraction);
        report.write_json(&out.join("report.json"))?;
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }

    let solve_started = Instant::now();
    let mut result = solve(&built.system, &built.solver)?;
    let solve_us = solve_started.elapsed().as_micros() as u64;
    if !contraction.contractive {
        result
            .trace
            .warnings
            .push("forced run: contraction check found no contraction".to_string());
    }

    write_measure_csv(&result.measure, &out.join("measure.csv"))?;
    write_trace_csv(&result.trace, &out.join("trace.csv"))?;
    if built.render {
        if let Some(grid) = built.space.as_grid() {
            match grid.dim() {
                2 => render_pgm(&result.measure, &out.join("render.pgm"))?,
                1 => render_pgm_strip(&result.measure, &out.join("render.pgm"))?,
                _ => {}
            }
        }
    }

    report.contraction = Some(&contraction);
    report.converged = Some(result.converged);
    report.iterations = Some(result.trace.iterations());
    report.final_residual = result.trace.last_distance();
    report.support_size = Some(result.measure.support(built.system.tau_supp()).len());
    report.warnings = result.trace.warnings.clone();
    report.timings.solve_us = solve_us;
    report.timings.total_us = started.elapsed().as_micros() as u64;
    report.write_json(&out.join("report.json"))?;

    if result.converged {
        println!(
            "converged in {} iterations (residual {} <= epsilon {})",
            result.trace.iterations(),
            result.trace.last_distance().unwrap_or(0.0),
            built.solver.epsilon
        );
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "no convergence after {} iterations (last distance {})",
            result.trace.iterations(),
            result.trace.last_distance().unwrap_or(f64::NAN)
        );
        Ok(ExitCode::from(EXIT_NO_CONVERGENCE))
    }
}

fn cmd_check(config: &Path, out: Option<&Path>, seed: Option<u64>) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let built = load_and_build(config, seed)?;
    let validation = built.system.validate();
    let contraction = check_contraction(&built.system, CONTRACTION_SAMPLES, built.seed);

    let mut report = RunReport::new("check", &built.config, &built.solver, &validation);
    report.contraction = Some(&contraction);
    report.timings.total_us = started.elapsed().as_micros() as u64;

    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        report.write_json(&dir.join("report.json"))?;
    }
    if !validation.is_ok() {
        eprintln!("validation failed:\n{validation}");
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }
    println!(
        "verdict: {}",
        if contraction.contractive {
            "contractive (no violation found among sampled pairs)"
        } else {
            "not contractive"
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_attractor(config: &Path, out: &Path, force: bool) -> Result<ExitCode, Error> {
    let built = load_and_build(config, None)?;
    let validation = built.system.validate();
    if !validation.is_ok() {
        eprintln!("validation failed:\n{validation}");
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }
    let contraction = check_contraction(&built.system, CONTRACTION_SAMPLES, built.seed);
    if !contraction.contractive && !force {
        eprintln!("contraction check found no contraction; rerun with --force");
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }
    let max_iter = (2 * built.space.len()).max(64);
    let attractor = attractor_set(&built.system, max_iter, 0.0)?;
    std::fs::create_dir_all(out)?;
    write_point_set_csv(&built.space, &attractor, &out.join("attractor.csv"))?;
    println!("attractor has {} points", attractor.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(config: &Path, measure: &Path, out: &Path) -> Result<ExitCode, Error> {
    let built = load_and_build(config, None)?;
    let m = read_measure_csv(built.space.clone(), measure)?;
    std::fs::create_dir_all(out)?;
    let grid = built.space.as_grid().ok_or(Error::NotAGrid)?;
    match grid.dim() {
        2 => render_pgm(&m, &out.join("render.pgm"))?,
        1 => render_pgm_strip(&m, &out.join("render.pgm"))?,
        _ => return Err(Error::NotTwoDimensional),
    }
    println!("wrote {}", out.join("render.pgm").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(suite: Suite) -> Result<ExitCode, Error> {
    let mut reports: Vec<oracle::LawReport> = Vec::new();
    let lattice_norms = [TNorm::Minimum, TNorm::Lukasiewicz];

    if matches!(suite, Suite::Laws | Suite::All) {
        for kind in lattice_norms {
            for (n, q) in [(1usize, 1u32), (2, 1), (2, 2)] {
                reports.push(oracle::check_monad_laws(n, q, kind)?);
            }
        }
    }
    if matches!(suite, Suite::Iso | Suite::All) {
        for kind in lattice_norms {
            for (n, q) in [(1usize, 2u32), (2, 2)] {
                reports.push(oracle::check_isomorphism(n, q, kind)?);
            }
        }
    }
    if matches!(suite, Suite::Tensor | Suite::All) {
        for kind in lattice_norms {
            for n1 in 1..=3usize {
                for n2 in 1..=3usize {
                    reports.push(oracle::check_tensor_equivalence(n1, n2, 2, kind)?);
                }
            }
        }
        reports.push(oracle::product_tensor_spot_checks());
    }
    if matches!(suite, Suite::Projection | Suite::All) {
        let e2 = PermGroup::trivial(2);
        let s2 = PermGroup::symmetric(2).expect("S2 fits the cap");
        let e3 = PermGroup::trivial(3);
        let c3 = PermGroup::cyclic(3).expect("C3 fits the cap");
        let s3 = PermGroup::symmetric(3).expect("S3 fits the cap");
        for kind in lattice_norms {
            reports.push(oracle::check_projection_compat(2, &e2, &s2, 2, kind)?);
        }
        reports.push(oracle::check_projection_compat(
            2,
            &e3,
            &s3,
            1,
            TNorm::Minimum,
        )?);
        reports.push(oracle::check_projection_compat(
            2,
            &c3,
            &s3,
            1,
            TNorm::Minimum,
        )?);
    }

    let total_instances: usize = reports.iter().map(|r| r.instances).sum();
    let total_violations: usize = reports.iter().map(|r| r.violations).sum();
    let summary = serde_json::json!({
        "suites": reports,
        "total_instances": total_instances,
        "total_violations": total_violations,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializes"));
    if total_violations > 0 {
        Ok(ExitCode::from(EXIT_ORACLE_VIOLATION))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
