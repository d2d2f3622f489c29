//! Command-line front end. Exit status: 0 pass, 2 verification failure, 1 error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filtration;
use crate::formal::analyze;
use crate::mellin::verify::VerifyOptions;
use crate::mellin::{pole_scan, verify_skeleton, PoleLattice, Window};
use crate::parse::{parse_distribution, parse_operator};
use crate::scalar::parse_rat;
use crate::skeleton::{skeleton_from_operators, ExpansionSkeleton};
use crate::config::AnalysisConfig;

#[derive(Debug, Parser)]
#[command(name = "holodist", version, about = "Local structure of holonomic ODEs and moderate distributions, with Mellin pole checks")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// TOML configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Largest ramification index tried.
    #[arg(long, global = true)]
    pub q_cap: Option<u32>,
    /// Number of terms in formal solutions.
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Scan window `re_min,re_max` or `re_min,re_max,im_min,im_max`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Filtration index, a rational such as `-1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Power k' of `y^{-k'}` in the Mellin pairing.
    #[arg(long, global = true)]
    pub kprime: Option<u32>,
    /// Power k'' of `conj(y)^{-k''}` in the Mellin pairing.
    #[arg(long, global = true)]
    pub kdouble: Option<u32>,
    /// Cutoff plateau radius.
    #[arg(long, global = true)]
    pub chi_a: Option<f64>,
    /// Cutoff support radius.
    #[arg(long, global = true)]
    pub chi_b: Option<f64>,
    /// Output file; `mellin-scan` writes `<out>.csv` and `<out>.svg`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elementary model of an operator, as JSON.
    Analyze { operator: String },
    /// Expansion skeleton from operators annihilating v and conj(v).
    Skeleton {
        operator: String,
        /// Operator for conj(v); defaults to the first one.
        anti: Option<String>,
    },
    /// Deligne and parabolic lattices and the graded piece at `--b`.
    Filtration { operator: String },
    /// Mellin pole report of a model distribution, as CSV (and SVG with `--out`).
    MellinScan {
        distribution: String,
        /// Skeleton JSON supplying candidate poles; default: the distribution's own lattice.
        #[arg(long)]
        skeleton: Option<PathBuf>,
    },
    /// Check Mellin poles of a distribution against a skeleton JSON file.
    Verify { distribution: String, skeleton: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    /// Main output, printed or written to `--out`.
    pub output: String,
    /// Extra `(extension, content)` files written next to `--out`.
    pub extra: Vec<(String, String)>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            status: 0,
            output,
            extra: Vec::new(),
        }
    }
}

/// Config from the file (if any) with flags applied.
pub fn resolve_config(flags: &Flags) -> Result<AnalysisConfig> {
    let mut cfg = match &flags.config {
        Some(p) => AnalysisConfig::load(p)?,
        None => AnalysisConfig::default(),
    };
    if let Some(v) = flags.q_cap {
        cfg.q_cap = v;
    }
    if let Some(v) = flags.trunc {
        cfg.truncation = v;
    }
    if let Some(w) = &flags.window {
        let w = Window::parse(w)?;
        cfg.window = [w.re_min, w.re_max, w.im_min, w.im_max];
    }
    if let Some(v) = flags.kprime {
        cfg.k_prime = v;
    }
    if let Some(v) = flags.kdouble {
        cfg.k_double = v;
    }
    if let Some(v) = flags.chi_a {
        cfg.chi_a = v;
    }
    if let Some(v) = flags.chi_b {
        cfg.chi_b = v;
    }
    if let Some(v) = &flags.out {
        cfg.out = Some(v.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn read_skeleton(path: &Path) -> Result<ExpansionSkeleton> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    ExpansionSkeleton::from_json(&v)
}

pub fn run(command: &Command, b: Option<&str>, cfg: &AnalysisConfig) -> Result<Outcome> {
    match command {
        Command::Analyze { operator } => {
            let a = analyze(&parse_operator(operator)?, &cfg.formal())?;
            Ok(Outcome::ok(pretty(&a.model.to_json())))
        }
        Command::Skeleton { operator, anti } => {
            let hol = parse_operator(operator)?;
            let anti = anti.as_deref().map(parse_operator).transpose()?.unwrap_or_else(|| hol.clone());
            let (_, _, s) = skeleton_from_operators(&hol, &anti, &cfg.formal())?;
            Ok(Outcome::ok(pretty(&s.to_json())))
        }
        Command::Filtration { operator } => {
            let b: BigRational = parse_rat(b.ok_or_else(|| Error::Invalid("filtration needs --b".into()))?)?;
            let a = analyze(&parse_operator(operator)?, &cfg.formal())?;
            Ok(Outcome::ok(pretty(&filtration::report(&a.model, &b))))
        }
        Command::MellinScan { distribution, skeleton } => {
            let v = parse_distribution(distribution)?;
            let lattice = match skeleton {
                Some(p) => PoleLattice::from_skeleton(&read_skeleton(p)?),
                None => PoleLattice::from_distribution(&v),
            };
            let window = cfg.window()?;
            let chi = cfg.cutoff()?;
            let report = pole_scan(&v, &window, cfg.k_prime, cfg.k_double, &chi, &cfg.mellin, Some(&lattice))?;
            let crosses: Vec<_> = lattice.candidates(cfg.k_prime, cfg.k_double, &window).into_iter().map(|c| c.0).collect();
            Ok(Outcome {
                status: 0,
                output: report.to_csv(),
                extra: vec![("svg".into(), report.to_svg(&crosses))],
            })
        }
        Command::Verify { distribution, skeleton } => {
            let v = parse_distribution(distribution)?;
            let s = read_skeleton(skeleton)?;
            let opts = VerifyOptions {
                window: cfg.window()?,
                k_max: cfg.verify_k_max,
                ..VerifyOptions::default()
            };
            let report = verify_skeleton(&v, &s, &cfg.cutoff()?, &cfg.mellin, &opts);
            Ok(Outcome {
                status: if report.passed() { 0 } else { 2 },
                output: pretty(&report.to_json()),
                extra: Vec::new(),
            })
        }
    }
}

fn write_outputs(outcome: &Outcome, out: Option<&Path>, csv: bool) -> Result<()> {
    match out {
        None => print!("{}", outcome.output),
        Some(path) => {
            let main = if csv { path.with_extension("csv") } else { path.to_path_buf() };
            std::fs::write(&main, &outcome.output)?;
            for (ext, content) in &outcome.extra {
                std::fs::write(path.with_extension(ext), content)?;
            }
        }
    }
    Ok(())
}

/// Parses arguments, runs and writes artifacts; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = resolve_config(&cli.flags).and_then(|cfg| {
        let outcome = run(&cli.command, cli.flags.b.as_deref(), &cfg)?;
        let csv = matches!(cli.command, Command::MellinScan { .. });
        write_outputs(&outcome, cfg.out.as_deref(), csv)?;
        Ok(outcome.status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("{}", json!({"error": e.code(), "message": e.to_string()}));
            1
        }
    }
}
