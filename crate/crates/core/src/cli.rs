//! Command-line front end for the `qlag` binary.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical
//! failure (or a failed self-check), 3 leak guard.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assembly::Variant;
use crate::scenario::{
    compare_oracles, load_scenario, preset_scenario, run_batch, RunOptions, PRESETS,
};
use crate::symbolic::{
    coefficient_symbol, compare_modes, derive_pde, published_form, quantized_hamiltonian,
    DerivationConfig, ExpansionMode, PdeTerm, Sym, SymbolicPde,
};

#[derive(Debug, Parser)]
#[command(name = "qlag", version, about = "Quadratic-Lagrangian quantum dynamics and derivation audit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "paper_literal", alias = "paper-literal")]
    PaperLiteral,
    Exact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "paper_literal", alias = "paper-literal")]
    PaperLiteral,
    Rederived,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::PaperLiteral => Variant::PaperLiteral,
            VariantArg::Rederived => Variant::Rederived,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one or more scenario files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Output directory (root directory when several files are given).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Scenarios to run in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write a plot.py next to the CSV files.
        #[arg(long)]
        emit_plotscript: bool,
    },
    /// Re-derive the evolution equation symbolically.
    VerifyDerivation {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Coefficients to set to zero, e.g. `b,d`.
        #[arg(long, value_delimiter = ',')]
        zero: Vec<String>,
    },
    /// Compare the grid evolver with the Gaussian oracles.
    CompareOracles {
        file: PathBuf,
        /// Also sweep the short-time step size and fit the convergence order.
        #[arg(long)]
        eps_sweep: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List or emit preset scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a ready-to-run scenario file for `free`, `a`, `b`, `c` or `d`.
    Emit {
        case: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run {
            files,
            out: dir,
            variant,
            jobs,
            format,
            emit_plotscript,
        } => cmd_run(&files, dir, variant.map(Into::into), jobs, format, emit_plotscript, out, err),
        Command::VerifyDerivation { mode, format, zero } => cmd_verify(mode, format, &zero, out, err),
        Command::CompareOracles {
            file,
            eps_sweep,
            out: dir,
            variant,
            format,
        } => cmd_compare(&file, eps_sweep, dir, variant.map(Into::into), format, out, err),
        Command::Presets { action } => cmd_presets(action, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "qlag: write failed: {e}");
        1
    })
}

type CmdResult = std::io::Result<i32>;

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    files: &[PathBuf],
    dir: Option<PathBuf>,
    variant: Option<Variant>,
    jobs: usize,
    format: Format,
    emit_plotscript: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let opts = RunOptions {
        out: dir,
        variant,
        emit_plotscript,
    };
    let mut worst = 0;
    let mut json_reports = Vec::new();
    for (path, res) in run_batch(files, &opts, jobs) {
        match res {
            Ok(outcome) => {
                let r = &outcome.report;
                worst = worst.max(outcome.exit_code());
                match format {
                    Format::Json => json_reports.push(serde_json::to_value(r).expect("report serializes")),
                    Format::Text => {
                        writeln!(
                            out,
                            "{}: {:?} ({} steps, variant {}, norm drift {:.3e}) -> {}",
                            r.label,
                            r.status,
                            r.steps,
                            r.variant,
                            r.norm_drift,
                            outcome.out_dir.display()
                        )?;
                    }
                }
                if let Some(m) = &r.message {
                    writeln!(err, "{}: {m}", path.display())?;
                }
            }
            Err(e) => {
                worst = worst.max(e.exit_code());
                writeln!(err, "{}: {e}", path.display())?;
            }
        }
    }
    if format == Format::Json {
        let v = if files.len() == 1 && json_reports.len() == 1 {
            json_reports.pop().unwrap()
        } else {
            serde_json::Value::Array(json_reports)
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    }
    Ok(worst)
}

#[derive(Serialize)]
struct PdeView {
    mode: ExpansionMode,
    terms: BTreeMap<PdeTerm, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_published: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_quantization: Option<bool>,
}

fn pde_view(mode: ExpansionMode, pde: &SymbolicPde, zero: &[Sym]) -> Result<PdeView, String> {
    let mut view = PdeView {
        mode,
        terms: pde.terms.iter().map(|(t, p)| (*t, p.to_string())).collect(),
        matches_published: None,
        matches_quantization: None,
    };
    match mode {
        ExpansionMode::PaperLiteral => {
            view.matches_published = Some(*pde == published_form().restrict(zero.iter().copied()));
        }
        ExpansionMode::Exact => {
            let q = quantized_hamiltonian(zero).map_err(|e| e.to_string())?;
            view.matches_quantization = Some(*pde == q);
        }
    }
    Ok(view)
}

fn write_pde_text(out: &mut dyn Write, v: &PdeView) -> std::io::Result<()> {
    writeln!(out, "mode: {}", v.mode)?;
    writeln!(out, "i*hbar*dpsi/dt = sum of:")?;
    for (term, poly) in &v.terms {
        writeln!(out, "  {:<12} {poly}", term.label())?;
    }
    if let Some(m) = v.matches_published {
        writeln!(out, "matches published equation: {m}")?;
    }
    if let Some(m) = v.matches_quantization {
        writeln!(out, "matches Weyl quantization: {m}")?;
    }
    Ok(())
}

fn cmd_verify(mode: ModeArg, format: Format, zero: &[String], out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut syms = Vec::new();
    for name in zero {
        match coefficient_symbol(name.trim()) {
            Some(s) => syms.push(s),
            None => {
                writeln!(err, "qlag: --zero accepts b, c, d, f, g; got `{name}`")?;
                return Ok(1);
            }
        }
    }
    let modes: Vec<ExpansionMode> = match mode {
        ModeArg::PaperLiteral => vec![ExpansionMode::PaperLiteral],
        ModeArg::Exact => vec![ExpansionMode::Exact],
        ModeArg::Both => ExpansionMode::ALL.to_vec(),
    };
    let mut views = Vec::new();
    for m in &modes {
        let cfg = DerivationConfig::new(*m).with_zero(syms.iter().copied());
        let view = derive_pde(&cfg)
            .map_err(|e| e.to_string())
            .and_then(|pde| pde_view(*m, &pde, &syms));
        match view {
            Ok(v) => views.push(v),
            Err(e) => {
                writeln!(err, "qlag: derivation failed: {e}")?;
                return Ok(2);
            }
        }
    }
    let report = if mode == ModeArg::Both {
        match compare_modes(&syms) {
            Ok(r) => Some(r),
            Err(e) => {
                writeln!(err, "qlag: comparison failed: {e}")?;
                return Ok(2);
            }
        }
    } else {
        None
    };
    let self_checks_pass = views
        .iter()
        .all(|v| v.matches_published.unwrap_or(true) && v.matches_quantization.unwrap_or(true))
        && report
            .as_ref()
            .is_none_or(|r| r.claims.iter().all(|c| c.holds));

    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                derivations: &'a [PdeView],
                #[serde(skip_serializing_if = "Option::is_none")]
                report: Option<&'a crate::symbolic::DiscrepancyReport>,
            }
            let o = Out {
                derivations: &views,
                report: report.as_ref(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("json"))?;
        }
        Format::Text => {
            for v in &views {
                write_pde_text(out, v)?;
                writeln!(out)?;
            }
            if let Some(r) = &report {
                if r.is_empty() {
                    writeln!(out, "discrepancies: none")?;
                } else {
                    writeln!(out, "discrepancies ({}):", r.entries.len())?;
                    for d in &r.entries {
                        writeln!(
                            out,
                            "  {:<12} {:<24} paper_literal {:>6}  exact {:>6}",
                            d.term.label(),
                            d.monomial.to_string(),
                            d.paper_literal.to_string(),
                            d.exact.to_string()
                        )?;
                    }
                }
                for c in &r.claims {
                    writeln!(out, "  [{}] {}: {}", if c.holds { "ok" } else { "FAILS" }, c.mode, c.claim)?;
                }
            }
        }
    }
    Ok(if self_checks_pass { 0 } else { 2 })
}

fn cmd_compare(
    file: &PathBuf,
    sweep: bool,
    dir: Option<PathBuf>,
    variant: Option<Variant>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let cfg = match load_scenario(file) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "{}: {e}", file.display())?;
            return Ok(1);
        }
    };
    let opts = RunOptions {
        out: dir,
        variant,
        emit_plotscript: false,
    };
    let (out_dir, result) = match compare_oracles(&cfg, &opts, sweep) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "{}: {e}", file.display())?;
            return Ok(e.exit_code());
        }
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&result).expect("json"))?,
        Format::Text => {
            let cv = &result.cross_validation;
            writeln!(
                out,
                "{}: grid ({}) vs Riccati ({}): max |dpsi| {:.3e}, max observable delta {:.3e}",
                result.label, cv.grid_variant, cv.oracle_variant, cv.max_abs_diff, cv.max_observable_delta
            )?;
            if let Some(fit) = &result.fit {
                writeln!(out, "eps sweep ({}): slope {:.3}, {}", fit.variant, fit.slope, fit.verdict)?;
            }
            writeln!(out, "outputs in {}", out_dir.display())?;
        }
    }
    Ok(0)
}

fn cmd_presets(action: PresetAction, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match action {
        PresetAction::List { format } => match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&PRESETS).expect("json"))?,
            Format::Text => {
                for p in PRESETS {
                    writeln!(out, "{:<5} L = {:<22} {}", p.name, p.lagrangian, p.equation)?;
                }
            }
        },
        PresetAction::Emit { case, format } => {
            let Some(cfg) = preset_scenario(&case) else {
                let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
                writeln!(err, "qlag: unknown preset `{case}`; expected one of: {}", names.join(", "))?;
                return Ok(1);
            };
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&cfg).expect("json"))?,
                Format::Text => write!(out, "{}", cfg.to_toml())?,
            }
        }
    }
    Ok(0)
}
