//! Manifest loading, command dispatch and report rendering for `contact-check`.

pub mod commands;
pub mod error;
pub mod manifest;
pub mod report;

use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

pub use error::CliError;
use manifest::{parse_rational, Manifest, Overrides};
pub use report::Report;
use report::{ManifestInfo, SettingsInfo, Tool};

#[derive(Debug, Parser)]
#[command(name = "contact-check", version, about = "Verify almost contact metric structures and solitons")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the sampling seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the number of sample points.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Override the zero-test tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the structure checks.
    Check {
        /// Path to a JSON manifest.
        manifest: PathBuf,
        /// Comma-separated subset of checks to run.
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<CheckSection>,
    },
    /// Print connection, curvature or structure tensor tables.
    Tables {
        manifest: PathBuf,
        #[arg(long, value_enum)]
        what: Table,
        /// Include zero entries.
        #[arg(long)]
        all: bool,
    },
    /// Solve for or verify soliton constants.
    #[command(group = ArgGroup::new("mode").required(true).args(["solve", "verify"]))]
    Soliton {
        manifest: PathBuf,
        /// Fit lambda_tilde and mu from the sampled equations.
        #[arg(long)]
        solve: bool,
        /// Evaluate the residual at given constants.
        #[arg(long)]
        verify: bool,
        /// Rational value, e.g. -4 or 3/2.
        #[arg(long, allow_hyphen_values = true)]
        lambda_tilde: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        /// Pressure value used for classification.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckSection {
    AlmostContact,
    Kenmotsu,
    AlmostKenmotsu,
    Nullity,
    EtaEinstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Brackets,
    Conn,
    Riem,
    Ricci,
    Star,
    H,
}

impl Table {
    pub fn name(self) -> &'static str {
        match self {
            Table::Brackets => "brackets",
            Table::Conn => "conn",
            Table::Riem => "riem",
            Table::Ricci => "ricci",
            Table::Star => "star",
            Table::H => "h",
        }
    }
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            samples: self.samples,
            tol: self.tol,
        }
    }

    fn manifest_path(&self) -> &PathBuf {
        match &self.command {
            Command::Check { manifest, .. }
            | Command::Tables { manifest, .. }
            | Command::Soliton { manifest, .. } => manifest,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs one command and builds its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let path = cli.manifest_path();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    run_text(cli, &text)
}

/// Like [`execute`] but with the manifest text already in memory.
pub fn run_text(cli: &Cli, text: &str) -> Result<Report, CliError> {
    let loaded = Manifest::parse(text)?.load(text, cli.overrides())?;
    let (passed, body) = match &cli.command {
        Command::Check { only, .. } => commands::check(&loaded, only)?,
        Command::Tables { what, all, .. } => (true, commands::tables(&loaded, *what, *all)),
        Command::Soliton {
            verify,
            lambda_tilde,
            mu,
            p,
            ..
        } => {
            let q = |name: &str, s: &Option<String>| s.as_deref().map(|s| parse_rational(name, s)).transpose();
            let p = q("--p", p)?;
            let mode = if *verify {
                commands::Mode::Verify {
                    lambda_tilde: q("--lambda-tilde", lambda_tilde)?,
                    mu: q("--mu", mu)?,
                }
            } else {
                commands::Mode::Solve
            };
            commands::soliton(&loaded, mode, p)?
        }
    };
    let m = &loaded.manifold;
    Ok(Report {
        tool: Tool::current(),
        manifest: ManifestInfo {
            name: loaded.manifest.name.clone(),
            sha256: sha256_hex(text.as_bytes()),
            coordinates: m.coordinates().to_vec(),
            dimension: m.dim(),
        },
        settings: SettingsInfo {
            seed: loaded.settings.seed,
            samples: loaded.settings.samples,
            tol: loaded.settings.tol,
            points: m.points().len(),
        },
        passed,
        body,
    })
}

pub fn exit_code(result: &Result<Report, CliError>) -> i32 {
    match result {
        Ok(r) if r.passed => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}

/// Standard output text for a result.
pub fn render(result: &Result<Report, CliError>, json: bool) -> String {
    match (result, json) {
        (Ok(r), true) => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        (Ok(r), false) => r.render_text(),
        (Err(e), true) => serde_json::to_string_pretty(&serde_json::json!({ "error": e })).expect("error serializes") + "\n",
        (Err(_), false) => String::new(),
    }
}
