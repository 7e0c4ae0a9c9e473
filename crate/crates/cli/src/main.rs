use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};
use multibump_cli::commands::{self, Outcome};
use multibump_cli::context::{default_cache_dir, Context};
use multibump_cli::manifest::{read_config, RunManifest};
use multibump_core::config::ModelConfig;
use multibump_core::error::Error;

#[derive(Parser)]
#[command(name = "multibump", version, about = "Ring-shaped multi-bump solutions of -Δu + V(|y|)u = u^p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Radial ground state U and its energy constants.
    Ground,
    /// Reduced-energy ring radius r_k and the force balance.
    Radius,
    /// Full sector PDE solve at the configured h.
    Solve,
    /// Edge spectrum of the linearization on the sector and the odd reflection block.
    Spectrum,
    /// Local Pohozaev identity at h and h/2 around the first bump.
    Pohozaev,
    /// Outer ring of n bumps around a frozen inner ring (dim >= 4).
    TwoRing,
    /// Acceptance checks.
    VerifyAll,
}

/// Flags override the config file, which overrides the defaults.
#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    /// Worker threads; defaults to the logical core count.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    a1: Option<f64>,
    #[arg(long, global = true)]
    a2: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Comma-separated k values (n for two-ring) replacing the single --k / --n.
    #[arg(long, global = true, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    #[arg(long, global = true)]
    num_eigs: Option<usize>,
    #[arg(long, global = true)]
    all_pairs: bool,
    /// verify-all: only the criteria inside the laptop budget.
    #[arg(long, global = true)]
    quick: bool,
}

impl Opts {
    fn resolve(&self) -> Result<ModelConfig> {
        let mut c = match &self.config {
            Some(path) => read_config(path).with_context(|| format!("config file {}", path.display()))?,
            None => ModelConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),*) => {
                $(if let Some(v) = self.$flag { c.$($field).+ = v; })*
            };
        }
        set!(seed => seed, k => k, n => n, dim => dim, p => p, alpha => alpha, a1 => a1, a2 => a2, h => grid.h, tau => tau, num_eigs => num_eigs);
        if self.beta.is_some() {
            c.beta = self.beta;
        }
        c.all_pairs |= self.all_pairs;
        Ok(c)
    }
}

/// A failure caused by the configuration rather than the numerics.
fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<Error>(),
            Some(Error::InvalidParameter { .. } | Error::BetaTooLarge { .. } | Error::DimensionError(_) | Error::DomainError(_))
        )
    })
}

fn dispatch(cmd: &Command, ctx: &Context, opts: &Opts) -> Result<Outcome> {
    let out = &opts.out;
    std::fs::create_dir_all(out)?;
    let ks = opts.sweep.clone().unwrap_or_else(|| vec![ctx.cfg.k]);
    match cmd {
        Command::Ground => commands::ground(ctx, out),
        Command::Radius => commands::radius(ctx, out, &ks),
        Command::Solve => commands::solve(ctx, out, &ks),
        Command::Spectrum => commands::spectrum(ctx, out, &ks),
        Command::Pohozaev => commands::pohozaev(ctx, out, &ks),
        Command::TwoRing => commands::two_ring(ctx, out, &opts.sweep.clone().unwrap_or_else(|| vec![ctx.cfg.n])),
        Command::VerifyAll => commands::verify_all(ctx, out, opts.quick),
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Ground => "ground",
        Command::Radius => "radius",
        Command::Solve => "solve",
        Command::Spectrum => "spectrum",
        Command::Pohozaev => "pohozaev",
        Command::TwoRing => "two-ring",
        Command::VerifyAll => "verify-all",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.opts.resolve().and_then(|c| {
        c.validate_base()?;
        Ok(c)
    }) {
        Ok(c) => c.resolved(),
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Some(j) = cli.opts.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("configuration error: jobs: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Context::new(cfg.clone(), &default_cache_dir());
    let start = Instant::now();
    let result = dispatch(&cli.command, &ctx, &cli.opts);
    let mut manifest = RunManifest {
        command: name(&cli.command).to_string(),
        config: cfg,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: 0.0,
        outputs: Vec::new(),
        assertions: Default::default(),
        failure: None,
    };
    let code = match result {
        Ok(outcome) => {
            for (group, ok) in &outcome.assertions {
                println!("{}: {group}", if *ok { "PASS" } else { "FAIL" });
            }
            manifest.outputs = outcome.outputs;
            manifest.assertions = outcome.assertions;
            if manifest.passed() { 0 } else { 2 }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            manifest.failure = Some(format!("{e:#}"));
            if is_config_error(&e) { 1 } else { 2 }
        }
    };
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = manifest.write(&cli.opts.out) {
        eprintln!("error: writing manifest: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
