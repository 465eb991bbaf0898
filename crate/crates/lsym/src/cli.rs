//! The `lsym` command-line front end.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 on numerical failures and
//! on failed checks.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::checks::{self, CheckOptions, Fault, Suite, SuiteReport};
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::lie_core::{build_group, GroupSpec, ReductiveGroup};
use crate::orbital::{OrbitalIntegrator, ClosedForm, OrbitalRequest, OrbitalValue};
use crate::parabolic::{build_structure, HElement};
use crate::roots_weyl::{self, VirtualCharacter};
use crate::zeta::{self, SpectrumDataset, SplitData, SyntheticConfig, TraceModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lsym", version, about = "Lie structure, orbital integrals and zeta functions of rank-one locally symmetric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions, fundamental rank, root data and, when δ = 1, the σ_η table.
    Describe {
        /// Shorthand (`sl3`, `so(3,1)`, `so(3,1)xsl2`), inline JSON, or a JSON file.
        #[arg(long)]
        group: String,
    },
    /// Weights, characters and Casimir tables of the δ = 1 splitting.
    Structure {
        #[arg(long)]
        group: String,
    },
    /// Run identity-check suites; exits 3 if any check fails.
    Check {
        /// Suite names (comma separated) or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<String>,
        /// Negative control: `structure-constant`.
        #[arg(long)]
        inject_fault: Option<String>,
        /// `synthetic:N` or a spectrum file (needs --group unless the file names one).
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// σ values for the factorization suite (comma separated).
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Orbital integral of exp(−tC/2) at a regular element of H.
    Orbital {
        #[arg(long)]
        group: String,
        /// |a|.
        #[arg(long)]
        length: f64,
        /// Torus coordinates θ of k (comma separated).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Vec<f64>,
        /// `eta0`, `eta1`, … or `lambda-p`.
        #[arg(long, default_value = "eta0")]
        rep: String,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 20)]
        quad: usize,
        #[arg(long, value_enum, default_value_t = PathChoice::Both)]
        path: PathChoice,
    },
    /// Ruelle or Selberg zeta function over a σ-grid, as CSV `sigma,re,im`.
    Zeta {
        /// `synthetic:N` or a spectrum file.
        #[arg(long)]
        spectrum: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value_t = ZetaFunction::Ruelle)]
        function: ZetaFunction,
        /// j for the Selberg zeta function of η_j.
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long)]
        sigma_start: Option<f64>,
        #[arg(long)]
        sigma_stop: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        sigma_step: f64,
        /// A single σ instead of a grid.
        #[arg(long)]
        sigma: Option<f64>,
        /// Emit the logarithm Ξ instead of the zeta value.
        #[arg(long)]
        log: bool,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// C_ρ, r_ρ and χ' from graded multiplicities r_0..r_2l.
    Laurent {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        r: Vec<i64>,
        /// Takes |α|² from this group.
        #[arg(long)]
        group: Option<String>,
        /// |α|² as a rational, e.g. `3/2`.
        #[arg(long)]
        alpha_norm_sq: Option<String>,
    },
    /// Seeded synthetic length spectrum with exponential counting.
    SynthSpectrum {
        #[arg(long, default_value_t = 50)]
        classes: usize,
        /// Takes l (angles per class) from this group.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        angles: Option<usize>,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        counting_constant: f64,
        #[arg(long, default_value_t = 1.0)]
        counting_rate: f64,
        #[arg(long, default_value_t = 1)]
        rho_rank: usize,
        #[arg(long, value_enum, default_value_t = Traces::Trivial)]
        traces: Traces,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Quadrature,
    ClosedForm,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZetaFunction {
    Ruelle,
    Selberg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Traces {
    Trivial,
    Phases,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Describe { group } => {
            let (spec, g) = load_group(&group)?;
            emit_json(out, &describe(&spec, &g)?)?;
            Ok(EXIT_OK)
        }
        Command::Structure { group } => {
            let (spec, g) = load_group(&group)?;
            emit_json(out, &structure_tables(&spec, g)?)?;
            Ok(EXIT_OK)
        }
        Command::Check { suite, inject_fault, spectrum, group, sigma, seed, format } => {
            let suites = parse_suites(&suite)?;
            let mut opts = CheckOptions { seed, sigmas: sigma, ..CheckOptions::default() };
            opts.fault = inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
            if let Some(sp) = spectrum {
                opts.spectra = check_spectra(&sp, group.as_deref(), seed)?;
            }
            let reports: Vec<SuiteReport> = suites.iter().map(|s| checks::run_suite(*s, &opts)).collect::<Result<_>>()?;
            let passed = reports.iter().all(|r| r.passed);
            match format {
                Format::Json => emit_json(out, &json!({ "passed": passed, "suites": reports }))?,
                Format::Table => write_table(out, &reports)?,
            }
            Ok(if passed { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::Orbital { group, length, angles, rep, time, quad, path } => {
            let (spec, g) = load_group(&group)?;
            emit_json(out, &orbital(&spec, &g, length, &angles, &rep, time, quad, path)?)?;
            Ok(EXIT_OK)
        }
        Command::Zeta { spectrum, group, function, j, sigma_start, sigma_stop, sigma_step, sigma, log, seed, output } => {
            let grid = match (sigma, sigma_start, sigma_stop) {
                (Some(s), None, None) => vec![s],
                (None, Some(a), Some(b)) => zeta::sigma_grid(a, b, sigma_step)?,
                _ => return Err(Error::InvalidInput("give either --sigma or both --sigma-start and --sigma-stop".into())),
            };
            let (spec, ds) = load_spectrum(&spectrum, group.as_deref(), seed)?;
            let csv = zeta_csv(&spec, &ds, function, j, &grid, log)?;
            write_output(out, output.as_deref(), &csv)?;
            Ok(EXIT_OK)
        }
        Command::Laurent { r, group, alpha_norm_sq } => {
            let a2: Q = match (group, alpha_norm_sq) {
                (Some(gs), None) => build_structure(&load_group(&gs)?.1)?.alpha_norm_sq,
                (None, Some(s)) => exact::parse_rational(&s)
                    .ok_or_else(|| Error::InvalidInput(format!("cannot parse |α|² = {s:?}")))?,
                _ => return Err(Error::InvalidInput("give exactly one of --group and --alpha-norm-sq".into())),
            };
            if r.len() % 2 == 0 {
                return Err(Error::InvalidInput(format!("need an odd number 2l+1 of values r_j, got {}", r.len())));
            }
            let d = zeta::laurent_constants(&r, (r.len() - 1) / 2, &a2)?;
            emit_json(out, &json!({ "laurent": d, "consistent": d.consistent(), "ratio_exponent": d.ratio_exponent() }))?;
            Ok(EXIT_OK)
        }
        Command::SynthSpectrum {
            classes,
            group,
            angles,
            seed,
            counting_constant,
            counting_rate,
            rho_rank,
            traces,
            format,
            output,
        } => {
            let (l, name) = match (&group, angles) {
                (Some(gs), None) => {
                    let (spec, g) = load_group(gs)?;
                    (build_structure(&g)?.l, Some(spec.to_string()))
                }
                (None, Some(a)) => (a, None),
                (None, None) => (1, None),
                _ => return Err(Error::InvalidInput("give at most one of --group and --angles".into())),
            };
            let cfg = SyntheticConfig {
                counting_constant,
                counting_rate,
                rho_rank,
                trace_model: match traces {
                    Traces::Trivial => TraceModel::Trivial,
                    Traces::Phases => TraceModel::Phases,
                },
                group: name,
                ..SyntheticConfig::new(classes, l, seed)
            };
            let ds = zeta::synthetic_spectrum(&cfg)?;
            let text = match format {
                DataFormat::Csv => ds.to_csv(),
                DataFormat::Json => ds.to_json() + "\n",
            };
            write_output(out, output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("write failed: {e}"))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn write_output(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// Inline shorthand or JSON, or a path to a JSON descriptor.
pub fn load_group(arg: &str) -> Result<(GroupSpec, ReductiveGroup)> {
    let p = Path::new(arg);
    let spec = if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))?;
        GroupSpec::parse(&text)?
    } else if arg.ends_with(".json") {
        return Err(Error::InvalidInput(format!("group file {arg} not found")));
    } else {
        GroupSpec::parse(arg)?
    };
    let g = build_group(&spec)?;
    Ok((spec, g))
}

fn describe(spec: &GroupSpec, g: &ReductiveGroup) -> Result<serde_json::Value> {
    let delta = g.delta_invariant();
    let roots = roots_weyl::root_system(g)?;
    let mut v = json!({
        "group": spec.to_string(),
        "dim": g.dim(),
        "dim_k": g.dim_k(),
        "dim_p": g.dim_p(),
        "torus_rank": g.torus_rank(),
        "delta": delta,
        "k_roots": roots.summary(),
        "weyl_order": roots.weyl_order(),
    });
    if delta == 1 {
        v["structure"] = serde_json::to_value(build_structure(g)?.summary()?).expect("summary serializes");
    }
    Ok(v)
}

fn show_character(c: &VirtualCharacter) -> Vec<String> {
    c.terms().iter().map(|(w, m)| format!("{m}·{w}")).collect()
}

fn structure_tables(spec: &GroupSpec, g: ReductiveGroup) -> Result<serde_json::Value> {
    let s = build_structure(&g)?;
    let (pm, km) = s.m_over_t_weights()?;
    let hats = s.eta_hat_characters()?;
    let casimir: Vec<_> = (0..=2 * s.l).map(|j| s.casimir_shift(j)).collect::<Result<_>>()?;
    let invariants = s.check_invariants();
    let characters = s.character_identities()?;
    Ok(json!({
        "group": spec.to_string(),
        "summary": s.summary()?,
        "invariants": invariants,
        "character_identities": characters,
        "weights": {
            "n": show_character(&s.n_weights),
            "p_m": show_character(&pm),
            "k_m_roots": show_character(&km),
            "p": show_character(&s.p_weights),
        },
        "eta": (0..=2 * s.l).map(|j| show_character(&s.eta_character(j))).collect::<Vec<_>>(),
        "eta_hat": hats.iter().map(show_character).collect::<Vec<_>>(),
        "casimir": casimir,
    }))
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    if names.iter().any(|n| n == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    names.iter().map(|n| n.trim().parse()).collect()
}

fn write_table(out: &mut dyn Write, reports: &[SuiteReport]) -> Result<()> {
    for r in reports {
        writeln!(out, "[{}] {}", if r.passed { "PASS" } else { "FAIL" }, r.suite).map_err(io_err)?;
        for o in &r.outcomes {
            writeln!(
                out,
                "    {} {:<70} {:.3e} (tol {:.0e})",
                if o.passed { "ok  " } else { "FAIL" },
                o.name,
                o.metric,
                o.tolerance
            )
            .map_err(io_err)?;
        }
    }
    let n = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "{n}/{} suites passed", reports.len()).map_err(io_err)
}

/// `synthetic:N` gives the SO(3,1) and sl3 spectra; a file needs a group.
fn check_spectra(arg: &str, group: Option<&str>, seed: u64) -> Result<Vec<(GroupSpec, SpectrumDataset)>> {
    if let Some(n) = arg.strip_prefix("synthetic:") {
        let n = n.parse().map_err(|_| Error::InvalidInput(format!("bad class count in {arg:?}")))?;
        return checks::synthetic_spectra(seed, n);
    }
    Ok(vec![load_spectrum(arg, group, seed)?])
}

fn load_spectrum(arg: &str, group: Option<&str>, seed: u64) -> Result<(GroupSpec, SpectrumDataset)> {
    if let Some(n) = arg.strip_prefix("synthetic:") {
        let n: usize = n.parse().map_err(|_| Error::InvalidInput(format!("bad class count in {arg:?}")))?;
        let spec = match group {
            Some(gs) => load_group(gs)?.0,
            None => GroupSpec::so(3, 1),
        };
        let l = build_structure(&build_group(&spec)?)?.l;
        let mut cfg = SyntheticConfig::new(n, l, seed);
        cfg.group = Some(spec.to_string());
        return Ok((spec, zeta::synthetic_spectrum(&cfg)?));
    }
    let ds = SpectrumDataset::load(Path::new(arg))?;
    let name = group.map(str::to_string).or_else(|| ds.group.clone()).ok_or_else(|| {
        Error::InvalidInput("the spectrum does not name its group; pass --group".into())
    })?;
    Ok((load_group(&name)?.0, ds))
}

fn zeta_csv(spec: &GroupSpec, ds: &SpectrumDataset, f: ZetaFunction, j: usize, grid: &[f64], log: bool) -> Result<String> {
    let g = build_group(spec)?;
    let delta = g.delta_invariant();
    let split = if delta == 1 { Some(SplitData::from(&build_structure(&g)?)) } else { None };
    let mut out = String::from("sigma,re,im\n");
    for &s in grid {
        let sigma = Complex64::new(s, 0.0);
        let xi = match (f, &split) {
            (ZetaFunction::Ruelle, Some(_)) => zeta::xi_rho(ds, sigma),
            (ZetaFunction::Ruelle, None) => Complex64::new(0.0, 0.0),
            (ZetaFunction::Selberg, Some(sp)) => {
                if j > 2 * sp.l {
                    return Err(Error::InvalidInput(format!("j = {j} exceeds 2l = {}", 2 * sp.l)));
                }
                zeta::xi_eta(ds, sp, j, sigma)?
            }
            (ZetaFunction::Selberg, None) => return Err(Error::DeltaNotOne(delta)),
        };
        let v = if log { xi } else { xi.exp() };
        out.push_str(&format!("{s},{},{}\n", v.re, v.im));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn orbital(
    spec: &GroupSpec,
    g: &ReductiveGroup,
    length: f64,
    angles: &[f64],
    rep: &str,
    t: f64,
    quad: usize,
    path: PathChoice,
) -> Result<serde_json::Value> {
    let s = build_structure(g)?;
    if angles.len() != s.frame.rank() {
        return Err(Error::InvalidInput(format!("--angles needs {} torus coordinates", s.frame.rank())));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidInput("--length must be positive".into()));
    }
    let h = HElement { length, theta: angles.to_vec() };
    let cf = ClosedForm::new(&s)?;
    cf.check_regular(&h)?;
    let (character, j) = if rep == "lambda-p" {
        (s.lambda_p_character(), None)
    } else {
        let j: usize = rep
            .strip_prefix("eta")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("--rep must be etaJ or lambda-p, got {rep:?}")))?;
        if j > 2 * s.l {
            return Err(Error::InvalidInput(format!("j = {j} exceeds 2l = {}", 2 * s.l)));
        }
        (s.eta_hat_character(j)?, Some(j))
    };
    let mut results: Vec<OrbitalValue> = Vec::new();
    if path != PathChoice::ClosedForm {
        let req = OrbitalRequest { gamma: s.element(&h), character, t, quad_order: quad };
        results.push(OrbitalIntegrator::new(g).integrate(&req)?);
    }
    if path != PathChoice::Quadrature {
        results.push(match j {
            Some(j) => cf.trg(&h, j, t)?,
            None => cf.lambda_p(&h, t)?,
        });
    }
    let mut v = json!({
        "group": spec.to_string(),
        "length": length,
        "angles": angles,
        "rep": rep,
        "time": t,
        "results": results,
    });
    if let [a, b] = results.as_slice() {
        v["relative_difference"] = json!((a.value - b.value).abs() / b.value.abs().max(f64::MIN_POSITIVE));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("lsym").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn describe_sl3() {
        let (code, out) = run_capture(&["describe", "--group", "sl3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["delta"], 1);
        assert_eq!(v["structure"]["alpha_norm_sq"], "3/2");
    }

    #[test]
    fn bad_inputs_exit_2() {
        assert_eq!(run_capture(&["describe", "--group", "{\"family\":"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["laurent", "--r", "1,0,2", "--alpha-norm-sq", "1"]).0, 2);
    }

    #[test]
    fn non_regular_element_is_an_input_error() {
        let (code, _) = run_capture(&["orbital", "--group", "sl3", "--length", "1", "--angles", "3.141592653589793"]);
        assert_eq!(code, 2);
    }
}
