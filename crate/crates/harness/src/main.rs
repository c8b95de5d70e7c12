use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harness::commands::run;
use harness::config::{CommandKind, EngineSpec, RunConfig};
use harness::error::{HarnessError, Result};

#[derive(Parser)]
#[command(
    name = "gamma-lab",
    version,
    about = "Γ-calculus and isoperimetric stability laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isoperimetric profiles: iso-gauss, sphere, c-n, gap
    Profile(RunArgs),
    /// Heat-flow functionals: bobkov, perimeter
    Flow(RunArgs),
    /// Inequality checks: commutation, local-poincare, reverse-iso, second-order, ...
    Check(RunArgs),
    /// Deficit experiments: sweep, pipeline, hscan, rounding, projection
    Deficit(RunArgs),
    /// Heat-kernel scans: derivatives, cap-gap
    Kernel(RunArgs),
    /// Standard battery: quick or full
    Battery(RunArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    /// Operation name
    operation: Option<String>,
    /// gauss | sphere:N | line:NAME | line:PATH.csv
    #[arg(long)]
    engine: Option<String>,
    /// Sphere dimension (also the range limit for `profile c-n`)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Volume of the set
    #[arg(long)]
    v: Option<f64>,
    /// Half-line threshold or profile slope
    #[arg(long)]
    a: Option<f64>,
    /// Test function: h<k>, p<k>, e<k>, x, pos, phi, random, cap, half, smooth-cap
    #[arg(long)]
    f: Option<String>,
    /// Perturbation family, or `all`
    #[arg(long)]
    family: Option<String>,
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Extra numeric parameter KEY=VALUE (repeatable)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Extra named option KEY=VALUE (repeatable)
    #[arg(long = "opt", value_name = "KEY=VALUE")]
    options: Vec<String>,
}

fn split_pair(s: &str) -> Result<(String, String)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| HarnessError::Usage(format!("expected KEY=VALUE, got {s:?}")))
}

fn build_config(kind: CommandKind, a: RunArgs) -> Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let mut c = RunConfig::load(path)?;
            c.command = kind;
            c
        }
        None => {
            let engine = match kind {
                CommandKind::Deficit | CommandKind::Kernel => EngineSpec::Sphere(a.n.unwrap_or(50)),
                _ if a.n.is_some() && a.engine.is_none() => EngineSpec::Sphere(a.n.unwrap_or(3)),
                _ => EngineSpec::Gauss,
            };
            let op = match (&a.operation, kind) {
                (Some(op), _) => op.clone(),
                (None, CommandKind::Battery) => "quick".into(),
                (None, _) => return Err(HarnessError::Usage(format!("{kind} needs an operation name"))),
            };
            RunConfig::new(kind, engine, op)
        }
    };
    if let Some(op) = a.operation {
        cfg.operation = op;
    }
    if let Some(e) = &a.engine {
        cfg.engine = e.parse()?;
    }
    if let Some(n) = a.n {
        if let EngineSpec::Sphere(_) = cfg.engine {
            cfg.engine = EngineSpec::Sphere(n);
        }
        cfg.params.insert("n".into(), n as f64);
    }
    for (key, val) in [("t", a.t), ("kappa", a.kappa), ("eps", a.eps), ("v", a.v), ("a", a.a)] {
        if let Some(v) = val {
            cfg.params.insert(key.into(), v);
        }
    }
    for (key, val) in [("f", a.f), ("family", a.family)] {
        if let Some(v) = val {
            cfg.options.insert(key.into(), v);
        }
    }
    for p in &a.params {
        let (k, v) = split_pair(p)?;
        let x: f64 = v
            .parse()
            .map_err(|_| HarnessError::Usage(format!("parameter {k} is not a number: {v:?}")))?;
        cfg.params.insert(k, x);
    }
    for o in &a.options {
        let (k, v) = split_pair(o)?;
        cfg.options.insert(k, v);
    }
    if let Some(out) = a.out {
        cfg.out = out;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = a.tol {
        cfg.tolerance = tol;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Profile(a) => (CommandKind::Profile, a),
        Command::Flow(a) => (CommandKind::Flow, a),
        Command::Check(a) => (CommandKind::Check, a),
        Command::Deficit(a) => (CommandKind::Deficit, a),
        Command::Kernel(a) => (CommandKind::Kernel, a),
        Command::Battery(a) => (CommandKind::Battery, a),
    };
    let result = build_config(kind, args).and_then(|cfg| run(&cfg));
    match result {
        Ok(r) => {
            println!("{}", serde_json::to_string(&r.summary).unwrap_or_default());
            match &r.violation {
                Some(path) => eprintln!("violated: see {}", path.display()),
                None => eprintln!("holds: artifacts in {}", r.out.display()),
            }
            ExitCode::from(r.exit_status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
