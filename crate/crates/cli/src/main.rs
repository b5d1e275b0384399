//! `bmwind` command-line tool.
//!
//! Every run subcommand takes an optional `--config` JSON file; flags given on
//! the command line override the file. Outputs go to `--out`, or to
//! `$BMWIND_OUT_DIR`, or to `./out`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 failed
//! verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bmwind::io::config::load_json;
use bmwind::io::{
    run_conjecture, run_mc, run_simulate, run_verify, ConjectureConfig, RunManifest,
    SimulateConfig, VerifyConfig,
};
use bmwind::montecarlo::{McConfig, Study};
use bmwind::verify::{make_schedule, validate_params};
use bmwind::{Error, EtaVariant, ParamSet};
use clap::{Args, Parser, Subcommand, ValueEnum};

const OUT_ENV: &str = "BMWIND_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "bmwind",
    version,
    about = "Winding of planar Brownian motion: simulation and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one path and write its winding field and normalized areas.
    Simulate(SimulateArgs),
    /// Check the subloop decomposition, additivity and discrepancy on one path.
    Verify(VerifyArgs),
    /// Replicated studies.
    Mc(McArgs),
    /// Print the derived integers T, M, N' and the exponent eta.
    Schedule(ScheduleArgs),
    /// Joint winding of two independent paths.
    Conjecture(ConjectureArgs),
}

#[derive(Args)]
struct Common {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: $BMWIND_OUT_DIR or ./out].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dyadic levels; the path has 2^levels steps.
    #[arg(long)]
    levels: Option<u32>,
    /// Grid cells per side.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated thresholds N.
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<i32>>,
}

impl Common {
    fn load<T: Default + serde::de::DeserializeOwned>(&self) -> Result<T, Error> {
        match &self.config {
            Some(p) => load_json(p),
            None => Ok(T::default()),
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    pgm_scale: Option<u32>,
    /// Paint on-curve cells white in the heatmap.
    #[arg(long)]
    mark_curve: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Threshold N of the sandwich.
    #[arg(long = "N")]
    n: Option<i32>,
    /// Number of subloops T.
    #[arg(long = "T")]
    t: Option<usize>,
    /// Pair threshold M.
    #[arg(long = "M")]
    m: Option<i32>,
    #[arg(long)]
    eta_variant: Option<EtaArg>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    replicates: Option<usize>,
    /// Comma-separated studies.
    #[arg(long, value_delimiter = ',')]
    studies: Option<Vec<StudyArg>>,
    #[arg(long)]
    eta_variant: Option<EtaArg>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ConjectureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long = "N")]
    n: u64,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "positive")]
    eta_variant: EtaArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaArg {
    Paper,
    Positive,
}

impl From<EtaArg> for EtaVariant {
    fn from(v: EtaArg) -> Self {
        match v {
            EtaArg::Paper => EtaVariant::Paper,
            EtaArg::Positive => EtaVariant::Positive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyArg {
    Werner,
    Tail,
    Pairmoment,
    Scaling,
}

impl From<StudyArg> for Study {
    fn from(v: StudyArg) -> Self {
        match v {
            StudyArg::Werner => Study::Werner,
            StudyArg::Tail => Study::Tail,
            StudyArg::Pairmoment => Study::Pairmoment,
            StudyArg::Scaling => Study::Scaling,
        }
    }
}

enum Failure {
    Error(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn report(out: &Path, manifest: &RunManifest) {
    println!(
        "wrote {} outputs to {}",
        manifest.checksums.len(),
        out.display()
    );
    for (name, sum) in &manifest.checksums {
        println!("  {name}  sha256:{sum}");
    }
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let c = &a.common;
    let mut cfg: SimulateConfig = c.load()?;
    set(&mut cfg.seed, c.seed);
    set(&mut cfg.levels, c.levels);
    set(&mut cfg.resolution, c.grid);
    set(&mut cfg.n_values, c.n_values.clone());
    set(&mut cfg.pgm_scale, a.pgm_scale);
    cfg.mark_curve |= a.mark_curve;
    let out = c.out_dir();
    report(&out, &run_simulate(&cfg, &out)?);
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let c = &a.common;
    let mut cfg: VerifyConfig = c.load()?;
    set(&mut cfg.seed, c.seed);
    set(&mut cfg.levels, c.levels);
    set(&mut cfg.resolution, c.grid);
    set(&mut cfg.n_values, c.n_values.clone());
    set(&mut cfg.n, a.n);
    set(&mut cfg.t, a.t);
    set(&mut cfg.m, a.m);
    set(&mut cfg.eta_variant, a.eta_variant.map(Into::into));
    let out = c.out_dir();
    let o = run_verify(&cfg, &out)?;
    for s in &o.sandwich {
        println!(
            "sandwich N={} T={} M={}: {:.6e} <= {:.6e} <= {:.6e}, violations upper={} lower={} [{}]",
            s.n,
            s.subdivisions,
            s.pair_threshold,
            s.lower,
            s.center,
            s.upper,
            s.upper_violations,
            s.lower_violations,
            if s.holds() { "ok" } else { "FAIL" }
        );
    }
    println!(
        "additivity: {} cells checked, {} violations",
        o.additivity.checked, o.additivity.violations
    );
    for e in &o.theorem {
        println!(
            "N={} f={}: discrepancy {:.6e}, bound {:.6e}, ratio {:.4}",
            e.n,
            e.f_name,
            e.discrepancy.inclusive,
            e.bound,
            e.ratio()
        );
    }
    report(&out, &o.manifest);
    if o.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn mc(a: McArgs) -> Result<(), Failure> {
    let c = &a.common;
    let mut cfg: McConfig = c.load()?;
    set(&mut cfg.master_seed, c.seed);
    set(&mut cfg.levels, c.levels);
    set(&mut cfg.resolution, c.grid);
    set(&mut cfg.n_values, c.n_values.clone());
    set(&mut cfg.replicates, a.replicates);
    set(
        &mut cfg.studies,
        a.studies.map(|v| v.into_iter().map(Into::into).collect()),
    );
    set(&mut cfg.eta_variant, a.eta_variant.map(Into::into));
    set(&mut cfg.threads, a.threads);
    let out = c.out_dir();
    report(&out, &run_mc(&cfg, &out)?);
    Ok(())
}

fn conjecture(a: ConjectureArgs) -> Result<(), Failure> {
    let c = &a.common;
    let mut cfg: ConjectureConfig = c.load()?;
    set(&mut cfg.master_seed, c.seed);
    set(&mut cfg.levels, c.levels);
    set(&mut cfg.resolution, c.grid);
    set(&mut cfg.n_values, c.n_values.clone());
    set(&mut cfg.replicates, a.replicates);
    set(&mut cfg.threads, a.threads);
    let out = c.out_dir();
    report(&out, &run_conjecture(&cfg, &out)?);
    Ok(())
}

fn schedule(a: ScheduleArgs) -> Result<(), Failure> {
    let mut p = ParamSet::default();
    set(&mut p.t, a.t);
    set(&mut p.alpha, a.alpha);
    set(&mut p.m, a.m);
    set(&mut p.zeta, a.zeta);
    set(&mut p.s, a.s);
    set(&mut p.delta, a.delta);
    set(&mut p.gamma, a.gamma);
    let violations = validate_params(&p);
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations).into());
    }
    let s = make_schedule(a.n, &p, a.eta_variant.into())?;
    println!("T={}", s.subdivisions);
    println!("M={}", s.pair_threshold);
    println!("N'={}", s.n_prime);
    // Rounded so that e.g. 0.3 - 0.2 prints as 0.1.
    println!("eta={}", (s.eta * 1e12).round() / 1e12);
    println!("K={}", s.shift());
    println!("sandwich_applies={}", s.sandwich_applies());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Verify(a) => verify(a),
        Command::Mc(a) => mc(a),
        Command::Schedule(a) => schedule(a),
        Command::Conjecture(a) => conjecture(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
