//! Command-line front end.
//!
//! Exit codes: `0` success, `1` numeric or I/O failure, `2` usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{verify_attack, AttackReport};
use crate::attack::{check_disturbance, f_domain_max};
use crate::error::{Error, Result};
use crate::infocurves::{crossing, dimension_scan, sweep_curves, uniform_grid, CrossingResult};
use crate::mub::{check_supported_dimension, mub_bases};
use crate::oracle::{stochastic_search, DEFAULT_TRIALS};
use crate::output::{
    format_sig, to_rounded_json, write_curves_csv, write_dimscan_csv, RunManifest,
};

/// Directory used for file artifacts when `--out` is not given.
pub const OUT_DIR_ENV: &str = "MUB_EAVESDROP_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mub-eavesdrop",
    version,
    about = "Symmetric eavesdropping on d-dimensional MUB key distribution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the attack and check unitarity and equal disturbance by simulation.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_negative_numbers = true)]
        disturbance: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the I_AB / I_AE curves over a uniform disturbance grid.
    Curves {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        grid_points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the disturbance where Eve's and Bob's information are equal.
    Crossing {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Eve's information as a function of the dimension at fixed disturbance.
    Dimscan {
        #[arg(long, allow_negative_numbers = true)]
        disturbance: f64,
        /// Inclusive range `lo:hi` or a comma-separated list.
        #[arg(long)]
        dims: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for ancilla configurations that beat the closed form.
    Oracle {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        disturbance: f64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

fn failure(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: e.to_string(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> CmdResult {
    match command {
        Command::Verify {
            dim,
            disturbance,
            tol,
            format,
            out,
        } => cmd_verify(dim, disturbance, tol, format, out, stdout),
        Command::Curves {
            dim,
            grid_points,
            format,
            out,
        } => cmd_curves(dim, grid_points, format, out, stdout),
        Command::Crossing { dim, tol, format } => cmd_crossing(dim, tol, format, stdout),
        Command::Dimscan {
            disturbance,
            dims,
            format,
            out,
        } => cmd_dimscan(disturbance, &dims, format, out, stdout),
        Command::Oracle {
            dim,
            disturbance,
            trials,
            seed,
            format,
            out,
        } => cmd_oracle(dim, disturbance, trials, seed, format, out, stdout),
    }
}

fn check_dim(dim: usize) -> std::result::Result<(), Failure> {
    check_supported_dimension(dim).map_err(usage)
}

fn check_positive(name: &str, v: f64) -> std::result::Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

/// Resolves where a file artifact goes: `--out`, else the output directory
/// from the environment, else stdout (`None`).
fn artifact_path(out: Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    out.or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| Path::new(&d).join(default_name))
    })
}

/// Writes `contents` to `path` with a manifest alongside, or to stdout.
fn emit(
    contents: &[u8],
    path: Option<PathBuf>,
    command: &str,
    parameters: BTreeMap<String, String>,
    stdout: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match path {
        None => stdout.write_all(contents).map_err(failure),
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(failure)?;
            }
            std::fs::write(&path, contents)
                .map_err(|e| failure(format!("cannot write {}: {e}", path.display())))?;
            let manifest_path = RunManifest::path_for(&path);
            let manifest = RunManifest::new(
                command,
                parameters,
                vec![
                    path.display().to_string(),
                    manifest_path.display().to_string(),
                ],
            );
            manifest.write(&manifest_path).map_err(failure)?;
            writeln!(stdout, "wrote {}", path.display()).map_err(failure)
        }
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn report_text(r: &AttackReport) -> String {
    let mut s = String::new();
    let line = |s: &mut String, k: &str, v: f64| s.push_str(&format!("{k}: {}\n", format_sig(v)));
    s.push_str(&format!("d: {}\n", r.d));
    line(&mut s, "D", r.disturbance);
    line(&mut s, "S", r.overlap);
    line(&mut s, "x", r.x);
    line(&mut s, "y", r.y);
    line(&mut s, "isometry_residual", r.isometry_residual);
    line(&mut s, "max_disturbance_spread", r.max_disturbance_spread);
    line(&mut s, "max_disturbance_error", r.max_disturbance_error);
    for (i, v) in r.unitarity_residuals.iter().enumerate() {
        line(&mut s, &format!("unitarity_residual[{i}]"), *v);
    }
    for (i, v) in r.symmetry_residuals.iter().enumerate() {
        line(&mut s, &format!("symmetry_residual[{i}]"), *v);
    }
    line(&mut s, "eve_info_computational", r.eve_info_computational);
    line(&mut s, "eve_info_closed_form", r.eve_info_closed_form);
    for (i, v) in r.holevo_per_basis.iter().enumerate() {
        line(&mut s, &format!("holevo[{i}]"), *v);
    }
    for st in &r.disturbance_per_state {
        s.push_str(&format!(
            "disturbance[{}]: {}\n",
            st.label,
            format_sig(st.disturbance)
        ));
    }
    s
}

fn report_csv(r: &AttackReport) -> Result<Vec<u8>> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    out.write_record(["state", "disturbance"])?;
    for st in &r.disturbance_per_state {
        out.write_record([st.label.clone(), format_sig(st.disturbance)])?;
    }
    out.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn with_newline(mut s: String) -> Vec<u8> {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.into_bytes()
}

fn cmd_verify(
    dim: usize,
    disturbance: f64,
    tol: f64,
    format: Format,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_dim(dim)?;
    check_positive("tol", tol)?;
    check_disturbance(dim, disturbance).map_err(usage)?;
    let bases = mub_bases(dim).map_err(usage)?;
    let report = verify_attack(dim, disturbance, &bases).map_err(failure)?;
    let body = match format {
        Format::Json => with_newline(to_rounded_json(&report).map_err(failure)?),
        Format::Text => report_text(&report).into_bytes(),
        Format::Csv => report_csv(&report).map_err(failure)?,
    };
    let parameters = params([
        ("dim", dim.to_string()),
        ("disturbance", format_sig(disturbance)),
        ("tol", format_sig(tol)),
    ]);
    emit(&body, out, "verify", parameters, stdout)?;
    if report.passes(tol) {
        Ok(EXIT_OK)
    } else {
        Err(failure(format!(
            "residual {:e} exceeds tolerance {tol:e}",
            report.worst_residual()
        )))
    }
}

fn cmd_curves(
    dim: usize,
    grid_points: usize,
    format: Format,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_dim(dim)?;
    if grid_points < 2 {
        return Err(usage("--grid-points must be at least 2"));
    }
    let grid = uniform_grid(dim, grid_points);
    let points = sweep_curves(dim, &grid).map_err(failure)?;
    let body = match format {
        Format::Json => with_newline(to_rounded_json(&points).map_err(failure)?),
        _ => {
            let mut buf = Vec::new();
            write_curves_csv(&mut buf, &points).map_err(failure)?;
            buf
        }
    };
    let ext = if format == Format::Json {
        "json"
    } else {
        "csv"
    };
    let path = artifact_path(out, &format!("curves_d{dim}.{ext}"));
    let parameters = params([
        ("dim", dim.to_string()),
        ("grid_points", grid_points.to_string()),
    ]);
    emit(&body, path, "curves", parameters, stdout)?;
    Ok(EXIT_OK)
}

fn crossing_text(c: &CrossingResult) -> String {
    format!(
        "d: {}\nd_c: {}\ninfo_at_crossing: {}\niterations: {}\nresidual: {}\n",
        c.d,
        format_sig(c.d_c),
        format_sig(c.info_at_crossing),
        c.iterations,
        format_sig(c.residual)
    )
}

fn cmd_crossing(dim: usize, tol: f64, format: Format, stdout: &mut dyn Write) -> CmdResult {
    check_dim(dim)?;
    check_positive("tol", tol)?;
    let result = crossing(dim, tol).map_err(failure)?;
    let body = match format {
        Format::Text => crossing_text(&result).into_bytes(),
        _ => with_newline(to_rounded_json(&result).map_err(failure)?),
    };
    stdout.write_all(&body).map_err(failure)?;
    if result.residual < tol {
        Ok(EXIT_OK)
    } else {
        Err(failure(format!(
            "bisection stopped at residual {:e} (tolerance {tol:e})",
            result.residual
        )))
    }
}

/// Parses `lo:hi` (inclusive) or `a,b,c`.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse dimension list '{spec}'"));
    let dims: Vec<usize> = if let Some((lo, hi)) = spec.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if dims.is_empty() {
        return Err(bad());
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "dimensions must be at least 2",
        });
    }
    Ok(dims)
}

fn cmd_dimscan(
    disturbance: f64,
    dims: &str,
    format: Format,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CmdResult {
    let dims = parse_dims(dims).map_err(usage)?;
    if let Some(&d) = dims
        .iter()
        .find(|&&d| disturbance < 0.0 || disturbance > f_domain_max(d))
    {
        return Err(usage(Error::DisturbanceOutOfRange {
            d,
            value: disturbance,
            min: 0.0,
            max: f_domain_max(d),
        }));
    }
    let rows = dimension_scan(disturbance, &dims).map_err(failure)?;
    let body = match format {
        Format::Json => {
            let objs: Vec<_> = rows
                .iter()
                .map(|&(d, v)| serde_json::json!({ "d": d, "i_ae": v }))
                .collect();
            with_newline(to_rounded_json(&objs).map_err(failure)?)
        }
        _ => {
            let mut buf = Vec::new();
            write_dimscan_csv(&mut buf, &rows).map_err(failure)?;
            buf
        }
    };
    let ext = if format == Format::Json {
        "json"
    } else {
        "csv"
    };
    let path = artifact_path(out, &format!("dimscan_D{}.{ext}", format_sig(disturbance)));
    let parameters = params([
        ("disturbance", format_sig(disturbance)),
        (
            "dims",
            dims.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
    ]);
    emit(&body, path, "dimscan", parameters, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_oracle(
    dim: usize,
    disturbance: f64,
    trials: usize,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CmdResult {
    check_dim(dim)?;
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    check_disturbance(dim, disturbance).map_err(usage)?;
    let outcome = stochastic_search(dim, disturbance, trials, seed).map_err(failure)?;
    let body = match format {
        Format::Text => format!(
            "d: {}\nD: {}\nbest_found_info: {}\nclosed_form_info: {}\ngap: {}\ntrials: {}\nseed: {}\nrng: {}\n",
            outcome.d,
            format_sig(outcome.disturbance),
            format_sig(outcome.best_found_info),
            format_sig(outcome.closed_form_info),
            format_sig(outcome.gap),
            outcome.trials,
            outcome.seed,
            outcome.rng
        )
        .into_bytes(),
        _ => with_newline(to_rounded_json(&outcome).map_err(failure)?),
    };
    let parameters = params([
        ("dim", dim.to_string()),
        ("disturbance", format_sig(disturbance)),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ]);
    emit(&body, out, "oracle", parameters, stdout)?;
    if outcome.passes() {
        Ok(EXIT_OK)
    } else {
        Err(failure(format!(
            "sampled configuration beats the closed form by {:e}",
            outcome.gap
        )))
    }
}
