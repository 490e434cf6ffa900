//! `gamble`: figure data and model queries for betting and decisions under
//! imperfectly known probabilities.
//!
//! Exit status: 0 success, 1 I/O failure, 2 usage error, 3 model domain
//! error, 4 quadrature convergence failure.

mod args;
mod commands;
mod config;
mod grid;
mod table;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Context;
use config::RunConfig;
use gamble_core::QuadratureSpec;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_TOL: f64 = 1e-9;
const MAX_SUBDIVISIONS: usize = 2000;

enum Failure {
    Usage(String),
    Model(gamble_core::Error),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Model(gamble_core::Error::Domain(_)) => 3,
            Failure::Model(gamble_core::Error::Convergence { .. }) => 4,
        }
    }
}

impl From<gamble_core::Error> for Failure {
    fn from(e: gamble_core::Error) -> Self {
        Failure::Model(e)
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Io(m) => eprintln!("gamble: {m}"),
                Failure::Model(e) => eprintln!("gamble: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}

/// Re-parses the subcommand with the config's parameters placed before the
/// user's own flags.
fn merge_config(cli: &Cli, cfg: &RunConfig, argv: &[OsString]) -> Result<Command, Failure> {
    let name = match (&cli.command, &cfg.subcommand) {
        (Some(c), Some(s)) if c.name() != s => {
            return Err(Failure::Usage(format!(
                "config names subcommand `{s}` but `{}` was given",
                c.name()
            )))
        }
        (Some(c), _) => c.name().to_string(),
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Failure::Usage("no subcommand given (see --help)".into())),
    };
    let user_after: Vec<OsString> = match &cli.command {
        Some(_) => {
            let at = argv.iter().skip(1).position(|a| a.to_string_lossy() == name).map(|i| i + 2);
            at.map(|i| argv[i..].to_vec()).unwrap_or_default()
        }
        None => Vec::new(),
    };
    let mut merged: Vec<OsString> = vec![argv.first().cloned().unwrap_or_else(|| "gamble".into()), name.into()];
    merged.extend(cfg.parameter_args(&user_after).map_err(Failure::Usage)?);
    merged.extend(user_after);
    let re = Cli::try_parse_from(&merged).map_err(|e| Failure::Usage(e.render().to_string().trim_end().to_string()))?;
    re.command.ok_or_else(|| Failure::Usage("no subcommand given (see --help)".into()))
}

fn output_path(cli_out: Option<PathBuf>, name: &str, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os("GAMBLE_OUT_DIR").map(PathBuf::from);
    let ext = match format {
        Format::Csv => "csv",
        Format::Svg => "svg",
    };
    match (cli_out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p),
        (None, Some(d)) => Some(d.join(format!("{name}.{ext}"))),
        (None, None) => None,
    }
}

fn run(cli: Cli, argv: &[OsString]) -> Result<(), Failure> {
    let cfg = match &cli.common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str::<RunConfig>(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    let command = match (&cli.command, cli.common.config.is_some()) {
        (Some(c), false) => c.clone(),
        (None, false) => return Err(Failure::Usage("no subcommand given (see --help)".into())),
        (_, true) => merge_config(&cli, &cfg, argv)?,
    };
    let c = &cli.common;
    let seed = c.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let reps = c.reps.or(cfg.reps).unwrap_or_else(|| commands::default_reps(&command));
    if reps == 0 {
        return Err(Failure::Usage("--reps must be positive".into()));
    }
    let tol = c.tol.or(cfg.tol).unwrap_or(DEFAULT_TOL);
    let spec = QuadratureSpec::new(tol, tol, MAX_SUBDIVISIONS).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = c.out.clone().or(cfg.output_path.clone());
    let format = c.format.or(cfg.format).unwrap_or_else(|| match &out {
        Some(p) if p.extension().is_some_and(|e| e == "svg") => Format::Svg,
        _ => Format::Csv,
    });

    let ctx = Context { seed, reps, spec };
    let result = commands::run(&command, &ctx)?;

    let mut params = serde_json::to_value(&command).map_err(|e| Failure::Io(e.to_string()))?;
    if let Some(obj) = params.as_object_mut() {
        obj.insert("command".into(), command.name().into());
        obj.insert("tol".into(), tol.into());
    }
    let comments = vec![
        format!("seed={seed} reps={reps} version={} params={params}", env!("CARGO_PKG_VERSION")),
        result.title.clone(),
    ];
    let body = match format {
        Format::Csv => table::to_csv(&result.table, &comments),
        Format::Svg => table::to_svg(&result.table, &result.title, &comments),
    };
    match output_path(out, command.name(), format) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(&path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}
