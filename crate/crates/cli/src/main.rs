use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use supergrade_cli::{emit, exit_code, parse_config, run, Command, ConfigError, Format, RunConfig};

/// Exact gradings, superinvolutions and the structures they carry.
#[derive(Parser)]
#[command(name = "supergrade", version)]
struct Cli {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// text or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Element, character and subgroup counts of a finite abelian group.
    Group(Params),
    /// Components of an elementary, Pauli, even-type or odd-type grading.
    Grade(Params),
    /// Axiom check and H/K dimensions of a superinvolution.
    Involution(Params),
    /// All block tuples of a family with predicate and direct verdicts.
    Enumerate(Params),
    /// Bounded search for compatible superinvolutions.
    Falsify(Params),
    /// Check a claim on one instance.
    Verify(Params),
    /// Jordan or Lie superalgebra on H or K.
    Structure(Params),
}

#[derive(Args, Default)]
struct Params {
    #[arg(long)]
    group: Option<String>,
    /// n,m
    #[arg(long)]
    sig: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    gs: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    perm: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    /// osp, osp-paired or trp
    #[arg(long)]
    inv: Option<String>,
    #[arg(long)]
    claim: Option<String>,
    #[arg(long)]
    pauli: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    /// order=16,size=8
    #[arg(long)]
    bounds: Option<String>,
}

impl Params {
    fn entries(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("group", &self.group),
            ("sig", &self.sig),
            ("theta", &self.theta),
            ("gs", &self.gs),
            ("p", &self.p),
            ("q", &self.q),
            ("perm", &self.perm),
            ("h", &self.h),
            ("k", &self.k),
            ("kind", &self.kind),
            ("inv", &self.inv),
            ("claim", &self.claim),
            ("pauli", &self.pauli),
            ("n", &self.n),
            ("m", &self.m),
            ("bounds", &self.bounds),
        ]
    }
}

fn build(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::new(),
    };
    let (command, params) = match &cli.command {
        Sub::Group(p) => (Command::Group, p),
        Sub::Grade(p) => (Command::Grade, p),
        Sub::Involution(p) => (Command::Involution, p),
        Sub::Enumerate(p) => (Command::Enumerate, p),
        Sub::Falsify(p) => (Command::Falsify, p),
        Sub::Verify(p) => (Command::Verify, p),
        Sub::Structure(p) => (Command::Structure, p),
    };
    let set = |cfg: &mut RunConfig, k: &str, v: &str| cfg.set(k, v).map_err(|e: ConfigError| e.to_string());
    set(&mut cfg, "command", command.name())?;
    if let Some(f) = &cli.format {
        set(&mut cfg, "format", f)?;
    }
    for (key, value) in params.entries() {
        if let Some(v) = value {
            set(&mut cfg, key, v)?;
        }
    }
    cfg.validate().map_err(|e| format!("configuration error: {e}"))?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("supergrade: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cfg.format().unwrap_or(Format::Text);
    let result = run(&cfg);
    match &result {
        Ok(report) => print!("{}", emit(report, format)),
        Err(e) => eprintln!("supergrade: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
