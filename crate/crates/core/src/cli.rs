//! The `zs` command line.
//!
//! Exit codes: 0 success, 2 malformed input, 3 computation error (the error
//! name goes to stderr), 4 target rejected by the nonvanishing guard.
//! Tables are CSV with a header row and 17 significant digits; structured
//! results are JSON. Output goes to `--out` or stdout. Points are given as
//! repeated `--s` flags, e.g. `--s 2 --s -0.5+3i`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explicit_formulas::{self as ef, DimensionWindow, Level};
use crate::fractal_strings::{self as fs, StringDefinition, ZetaMode};
use crate::operator_model::{
    self as om, Grid, SampledFunction, SpectralFunction, TruncatedShift, Truncation,
};
use crate::universality::{self as un, fmt17, Base, CompactBox, ScanOptions, Target};
use crate::zeta_core::{self as zc, DirichletCharacter, EvalOptions};

#[derive(Parser, Debug)]
#[command(
    name = "zs",
    version,
    about = "Zeta functions, fractal strings, spectral operators and shift scans"
)]
struct Cli {
    /// output file (stdout if absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// worker threads
    #[arg(long, global = true, env = "ZS_WORKERS")]
    workers: Option<usize>,
    /// seed for generated test points
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// absolute tolerance for zeta evaluations
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// cap on the Euler-Maclaurin cut
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Riemann, Hurwitz, Dirichlet L and completed zeta values
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Generalized fractal strings from a definition file
    #[command(subcommand)]
    String(StringCmd),
    /// Truncated infinitesimal shifts and the spectral operator
    #[command(subcommand)]
    Operator(OperatorCmd),
    /// Shift searches for universality and almost periodicity
    #[command(subcommand)]
    Universality(UniCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Function {
    Zeta,
    Xi,
    Hurwitz,
    DirichletL,
    EulerProduct,
}

#[derive(Subcommand, Debug)]
enum ZetaCmd {
    /// Evaluate at one or more points
    Eval {
        #[arg(long = "s", required = true, action = ArgAction::Append, allow_hyphen_values = true)]
        s: Vec<String>,
        #[arg(long, value_enum, default_value = "zeta")]
        function: Function,
        #[arg(long)]
        alpha: Option<f64>,
        /// chi4, principal:q, legendre:p or values:v0,v1,...
        #[arg(long)]
        chi: Option<String>,
        /// largest prime in the Euler product
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
    },
    /// ξ(s), or a functional-equation check at seeded points of the strip
    Xi {
        #[arg(long = "s", action = ArgAction::Append, allow_hyphen_values = true)]
        s: Vec<String>,
        #[arg(long)]
        check_functional_equation: bool,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// |Im s| bound for generated points
        #[arg(long, default_value_t = 50.0)]
        height: f64,
    },
}

#[derive(Args, Debug)]
struct DefArg {
    /// string definition file
    #[arg(long)]
    def: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum LevelArg {
    Geometric,
    Spectral,
}

#[derive(Subcommand, Debug)]
enum StringCmd {
    /// Geometric counting function N(x)
    Counting {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, required = true, num_args = 1..)]
        x: Vec<f64>,
    },
    /// Geometric zeta function
    Zeta {
        #[command(flatten)]
        def: DefArg,
        #[arg(long = "s", required = true, action = ArgAction::Append, allow_hyphen_values = true)]
        s: Vec<String>,
        /// sum over atoms instead of the closed form
        #[arg(long)]
        atoms: bool,
    },
    /// Abscissa of convergence
    Dimension {
        #[command(flatten)]
        def: DefArg,
    },
    /// Spectral counting at x, or the product formula check at s
    Spectral {
        #[command(flatten)]
        def: DefArg,
        #[arg(long, num_args = 1..)]
        x: Vec<f64>,
        #[arg(long = "s", action = ArgAction::Append, allow_hyphen_values = true)]
        s: Vec<String>,
        /// spectral atoms up to this scale for the check
        #[arg(long, default_value_t = 1e4)]
        limit: f64,
    },
    /// Complex dimensions with residues
    Dimensions {
        #[command(flatten)]
        def: DefArg,
        #[arg(long)]
        k_max: u32,
    },
    /// Truncated explicit formula against direct counting
    ExplicitCompare {
        #[command(flatten)]
        def: DefArg,
        #[arg(long)]
        k_max: u32,
        /// number of log-cell midpoints in [lo, hi]
        #[arg(long, default_value_t = 20)]
        midpoints: usize,
        #[arg(long, default_value_t = 2.0)]
        lo: f64,
        #[arg(long, default_value_t = 100.0)]
        hi: f64,
        #[arg(long, value_enum, default_value = "geometric")]
        level: LevelArg,
    },
    /// Rewrite a definition in canonical form
    Normalize {
        #[command(flatten)]
        def: DefArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Psi {
    Zeta,
    Identity,
}

#[derive(Subcommand, Debug)]
enum OperatorCmd {
    /// Spectrum of the truncated shift
    Segment {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// ‖ψ(∂_c^(T))‖
    Norm {
        #[arg(long, value_enum)]
        psi: Psi,
        #[arg(long)]
        c: f64,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// ‖(∂ - λ)ψ_σ‖ / ‖ψ_σ‖ for a Gaussian-damped exponential
    EigenResidual {
        #[arg(long)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long)]
        sigma: f64,
        /// grid step
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// ζ(c + ik·step) for k ≥ 1
    RangeSample {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        tau_max: f64,
        #[arg(long)]
        step: f64,
    },
    /// Σ_{n ≤ N} f(t - log n) for a sampled f (CSV t,re,im on a uniform grid)
    Apply {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n_max: Option<u64>,
        /// choose N from this tail tolerance instead
        #[arg(long, conflicts_with = "n_max")]
        tail_tol: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
struct TargetArgs {
    /// self, translate:a, const:z or grid:FILE
    #[arg(long, default_value = "self")]
    target: String,
    /// zeta, hurwitz:alpha, chi4, principal:q, legendre:p or coeffs:FILE
    #[arg(long, default_value = "zeta")]
    base: String,
}

#[derive(Args, Debug, Clone)]
struct BoxArgs {
    /// c_lo:c_hi:T0 or tiny
    #[arg(long = "box", default_value = "tiny")]
    bx: String,
    /// grid points across c
    #[arg(long)]
    grid_c: Option<usize>,
    /// grid points along t
    #[arg(long)]
    grid_t: Option<usize>,
    /// allow boxes outside 1/2 < Re(s) < 1
    #[arg(long)]
    no_strip_guard: bool,
}

#[derive(Args, Debug, Clone)]
struct ScanOut {
    /// thresholds for the density report
    #[arg(long, num_args = 1.., default_values_t = [0.1])]
    eps: Vec<f64>,
    /// CSV mirror of the tau,J table
    #[arg(long)]
    csv: Option<PathBuf>,
    /// accept targets that vanish on the grid
    #[arg(long)]
    allow_vanishing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ProfileKind {
    Constant,
    Triangular,
}

#[derive(Subcommand, Debug)]
enum UniCmd {
    /// J(τ) on τ = k·step, 0 ≤ τ ≤ tau_max
    Scan {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        bx: BoxArgs,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.01)]
        tau_step: f64,
        #[command(flatten)]
        out: ScanOut,
    },
    /// J(nδ), n = 1..n_max
    ScanDiscrete {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        bx: BoxArgs,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: ScanOut,
    },
    /// Operator-norm distance at one τ, per c column
    Quantized {
        #[command(flatten)]
        target: TargetArgs,
        /// c_lo:c_hi
        #[arg(long = "calK")]
        cal_k: String,
        #[arg(long = "T0")]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, value_enum, default_value = "constant")]
        profile: ProfileKind,
        #[arg(long, default_value_t = 8)]
        grid_c: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Scan with a Hurwitz base; vanishing targets allowed
    Hurwitz {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        bx: BoxArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.01)]
        tau_step: f64,
        #[command(flatten)]
        out: ScanOut,
    },
    /// Scan against Taylor polynomials of ζ at z0 + iτ
    Taylor {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        bx: BoxArgs,
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.01)]
        tau_step: f64,
        #[command(flatten)]
        out: ScanOut,
    },
    /// ε-translation numbers grouped into windows of length ell
    AlmostPeriod {
        /// zeta, chi4, principal:q or legendre:p
        #[arg(long, default_value = "zeta")]
        base: String,
        /// lo:hi range of Re(s)
        #[arg(long, default_value = "1.5:2")]
        strip: String,
        /// half-height of the rectangle
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, required = true, num_args = 1..)]
        eps: Vec<f64>,
        /// window length, one per eps
        #[arg(long, required = true, num_args = 1..)]
        ell: Vec<f64>,
        #[arg(long, default_value_t = 1e4)]
        range: f64,
    },
    /// Fraction of a saved scan with J ≤ eps
    Density {
        /// JSON written by scan
        #[arg(long)]
        scan: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        eps: Vec<f64>,
    },
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("'{text}' is not a complex number"));
    let num = |s: &str| -> Result<f64> {
        let v: f64 = match s {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => s.parse().map_err(|_| bad())?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(Complex64::new(num(&t).map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(num(&body[..k])?, num(&body[k..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidInput(format!("'{text}' is not lo:hi"));
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
    ))
}

fn parse_character(text: &str) -> Result<DirichletCharacter> {
    let bad = || Error::InvalidInput(format!("unknown character '{text}'"));
    if text == "chi4" {
        return Ok(DirichletCharacter::chi4());
    }
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    match kind {
        "principal" => DirichletCharacter::principal(arg.parse().map_err(|_| bad())?),
        "legendre" => DirichletCharacter::legendre(arg.parse().map_err(|_| bad())?),
        "values" => {
            let v = arg
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()?;
            DirichletCharacter::from_values(v)
        }
        _ => Err(bad()),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Complex values, one per line as `re,im` or a complex literal; a header
/// line that does not parse is skipped.
fn read_complex_list(path: &PathBuf) -> Result<Vec<Complex64>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = match line.split_once(',') {
            Some((a, b)) => match (a.trim().parse(), b.trim().parse()) {
                (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                _ => Err(Error::InvalidInput(format!(
                    "{}:{}: bad value",
                    path.display(),
                    i + 1
                ))),
            },
            None => parse_complex(line),
        };
        match v {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn parse_base(text: &str) -> Result<Base> {
    if text == "zeta" {
        return Ok(Base::Zeta);
    }
    if let Some(a) = text.strip_prefix("hurwitz:") {
        let alpha: f64 = a
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad alpha '{a}'")))?;
        return Ok(Base::Hurwitz(alpha));
    }
    if let Some(path) = text.strip_prefix("coeffs:") {
        return Ok(Base::Coefficients(read_complex_list(&PathBuf::from(path))?));
    }
    Ok(Base::Dirichlet(parse_character(text)?))
}

fn parse_target(text: &str) -> Result<Target> {
    if text == "self" {
        return Ok(Target::base());
    }
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("unknown target '{text}'")))?;
    match kind {
        "translate" => {
            Ok(Target::BaseTranslate(arg.parse().map_err(|_| {
                Error::InvalidInput(format!("bad shift '{arg}'"))
            })?))
        }
        "const" => Ok(Target::Constant(parse_complex(arg)?)),
        "grid" => Ok(Target::Samples(read_complex_list(&PathBuf::from(arg))?)),
        _ => Err(Error::InvalidInput(format!("unknown target '{text}'"))),
    }
}

fn parse_box(a: &BoxArgs) -> Result<CompactBox> {
    if a.bx == "tiny" {
        if a.grid_c.is_some() || a.grid_t.is_some() {
            let (lo, hi) = CompactBox::tiny().c_range();
            return build_box(lo, hi, CompactBox::tiny().t0(), a);
        }
        return Ok(CompactBox::tiny());
    }
    let parts: Vec<f64> =
        a.bx.split(':')
            .map(|p| p.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("'{}' is not c_lo:c_hi:T0", a.bx)))?;
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "'{}' is not c_lo:c_hi:T0",
            a.bx
        )));
    }
    build_box(parts[0], parts[1], parts[2], a)
}

fn build_box(lo: f64, hi: f64, t0: f64, a: &BoxArgs) -> Result<CompactBox> {
    let (gc, gt) = (a.grid_c.unwrap_or(64), a.grid_t.unwrap_or(64));
    if a.no_strip_guard {
        CompactBox::unguarded(lo, hi, t0, gc, gt)
    } else {
        CompactBox::new(lo, hi, t0, gc, gt)
    }
}

fn csv_complex_header(out: &mut String, cols: &[&str]) {
    out.push_str(&cols.join(","));
    out.push('\n');
}

fn csv_row(out: &mut String, vals: &[f64]) {
    let cells: Vec<String> = vals.iter().map(|&v| fmt17(v)).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("result serializes");
    s.push('\n');
    s
}

struct Ctx {
    eval: EvalOptions,
    workers: Option<usize>,
    seed: u64,
}

impl Ctx {
    fn scan_options(&self, require_nonvanishing: bool) -> ScanOptions {
        ScanOptions {
            eval: self.eval,
            workers: self.workers,
            require_nonvanishing,
        }
    }
}

fn euler_error(s: Complex64, n_max: u64, value: Complex64) -> f64 {
    // |log ζ_N - log ζ| ≤ 2 Σ_{n>N} n^{-σ} ≤ 2 N^{1-σ}/(σ-1)
    if s.re <= 1.0 {
        return f64::INFINITY;
    }
    let b = 2.0 * (n_max.max(1) as f64).powf(1.0 - s.re) / (s.re - 1.0);
    value.norm() * b.exp_m1()
}

fn cmd_zeta(cmd: &ZetaCmd, ctx: &Ctx) -> Result<String> {
    let o = &ctx.eval;
    let mut out = String::new();
    csv_complex_header(&mut out, &["re_s", "im_s", "re_val", "im_val", "est_err"]);
    match cmd {
        ZetaCmd::Eval {
            s,
            function,
            alpha,
            chi,
            n_max,
        } => {
            let chi = chi.as_deref().map(parse_character).transpose()?;
            let points = s
                .iter()
                .map(|p| parse_complex(p))
                .collect::<Result<Vec<_>>>()?;
            for s in points {
                let (v, e) = match function {
                    Function::Zeta => zc::zeta_with_error(s, o)?,
                    Function::Xi => zc::completed_xi_with_error(s, o)?,
                    Function::Hurwitz => {
                        let a = alpha
                            .ok_or_else(|| Error::InvalidInput("--alpha is required".into()))?;
                        zc::hurwitz_zeta_with_error(s, a, o)?
                    }
                    Function::DirichletL => {
                        let chi = chi
                            .as_ref()
                            .ok_or_else(|| Error::InvalidInput("--chi is required".into()))?;
                        zc::dirichlet_l_with_error(s, chi, o)?
                    }
                    Function::EulerProduct => {
                        let v = match &chi {
                            Some(chi) => zc::euler_product_character(s, chi, *n_max)?,
                            None => zc::euler_product_truncated(s, *n_max)?,
                        };
                        (v, euler_error(s, *n_max, v))
                    }
                };
                csv_row(&mut out, &[s.re, s.im, v.re, v.im, e]);
            }
            Ok(out)
        }
        ZetaCmd::Xi {
            s,
            check_functional_equation,
            n,
            height,
        } => {
            if *check_functional_equation {
                return Ok(json(&functional_equation_check(ctx.seed, *n, *height, o)?));
            }
            if s.is_empty() {
                return Err(Error::InvalidInput(
                    "give --s or --check-functional-equation".into(),
                ));
            }
            for p in s {
                let s = parse_complex(p)?;
                let (v, e) = zc::completed_xi_with_error(s, o)?;
                csv_row(&mut out, &[s.re, s.im, v.re, v.im, e]);
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalEquationReport {
    pub seed: u64,
    pub n: usize,
    pub max_residual: f64,
    /// `(Re s, Im s, |ξ(s) - ξ(1 - s)|)`
    pub points: Vec<[f64; 3]>,
}

/// `|ξ(s) - ξ(1-s)|` at `n` seeded points with `0 < Re s < 1`, `|Im s| ≤ height`.
pub fn functional_equation_check(
    seed: u64,
    n: usize,
    height: f64,
    opts: &EvalOptions,
) -> Result<FunctionalEquationReport> {
    if !(height > 0.0 && height.is_finite()) || n == 0 {
        return Err(Error::InvalidInput("need n >= 1 and height > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for _ in 0..n {
        let s = Complex64::new(rng.gen_range(0.01..0.99), rng.gen_range(-height..height));
        let r = (zc::completed_xi(s, opts)? - zc::completed_xi(1.0 - s, opts)?).norm();
        max_residual = max_residual.max(r);
        points.push([s.re, s.im, r]);
    }
    Ok(FunctionalEquationReport {
        seed,
        n,
        max_residual,
        points,
    })
}

#[derive(Serialize)]
struct DimensionOut {
    value: f64,
    estimated: bool,
}

#[derive(Serialize)]
struct CompareOut {
    level: &'static str,
    k_max: u32,
    max_error: f64,
    mean_error: f64,
    half_jump_mode: bool,
    rows: Vec<CompareRowOut>,
}

#[derive(Serialize)]
struct CompareRowOut {
    x: f64,
    direct: f64,
    explicit: f64,
    error: f64,
    at_atom: bool,
}

fn load_string(def: &DefArg) -> Result<fs::GeneralizedString> {
    StringDefinition::parse(&read(&def.def)?)?.build()
}

fn cmd_string(cmd: &StringCmd, ctx: &Ctx) -> Result<String> {
    let o = &ctx.eval;
    let mut out = String::new();
    match cmd {
        StringCmd::Counting { def, x } => {
            let eta = load_string(def)?;
            csv_complex_header(&mut out, &["x", "re_N", "im_N"]);
            for &x in x {
                let v = fs::counting_function(&eta, x)?;
                csv_row(&mut out, &[x, v.re, v.im]);
            }
        }
        StringCmd::Zeta { def, s, atoms } => {
            let eta = load_string(def)?;
            let mode = if *atoms {
                ZetaMode::Atoms(None)
            } else {
                ZetaMode::ClosedForm
            };
            csv_complex_header(&mut out, &["re_s", "im_s", "re_val", "im_val"]);
            for p in s {
                let s = parse_complex(p)?;
                let v = fs::geometric_zeta(&eta, s, mode, o)?;
                csv_row(&mut out, &[s.re, s.im, v.re, v.im]);
            }
        }
        StringCmd::Dimension { def } => {
            let d = fs::dimension(&load_string(def)?)?;
            out = json(&DimensionOut {
                value: d.value,
                estimated: d.estimated,
            });
        }
        StringCmd::Spectral { def, x, s, limit } => {
            let eta = load_string(def)?;
            if x.is_empty() == s.is_empty() {
                return Err(Error::InvalidInput(
                    "give exactly one of --x and --s".into(),
                ));
            }
            if !x.is_empty() {
                csv_complex_header(&mut out, &["x", "re_N", "im_N"]);
                for &x in x {
                    let v = fs::spectral_counting(&eta, x)?;
                    csv_row(&mut out, &[x, v.re, v.im]);
                }
            } else {
                csv_complex_header(
                    &mut out,
                    &[
                        "re_s",
                        "im_s",
                        "re_product",
                        "im_product",
                        "re_direct",
                        "im_direct",
                        "discrepancy",
                        "tail_bound",
                    ],
                );
                for p in s {
                    let s = parse_complex(p)?;
                    let c = fs::spectral_zeta_check(&eta, s, *limit, o)?;
                    csv_row(
                        &mut out,
                        &[
                            s.re,
                            s.im,
                            c.product.re,
                            c.product.im,
                            c.direct.re,
                            c.direct.im,
                            c.discrepancy,
                            c.tail_bound,
                        ],
                    );
                }
            }
        }
        StringCmd::Dimensions { def, k_max } => {
            let eta = load_string(def)?;
            let cf = eta
                .closed_form()
                .ok_or_else(|| Error::UnsupportedKind("string has no closed form".into()))?;
            let dims = ef::complex_dimensions(&cf, DimensionWindow::Index { k_max: *k_max }, o)?;
            csv_complex_header(
                &mut out,
                &["k", "re_omega", "im_omega", "re_residue", "im_residue"],
            );
            for d in dims {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    d.k,
                    fmt17(d.omega.re),
                    fmt17(d.omega.im),
                    fmt17(d.residue.re),
                    fmt17(d.residue.im)
                ));
            }
        }
        StringCmd::ExplicitCompare {
            def,
            k_max,
            midpoints,
            lo,
            hi,
            level,
        } => {
            let eta = load_string(def)?;
            let xs = ef::log_midpoints(*lo, *hi, *midpoints)?;
            let lvl = match level {
                LevelArg::Geometric => Level::Geometric,
                LevelArg::Spectral => Level::Spectral,
            };
            let r = ef::compare_explicit_vs_direct(
                &eta,
                &xs,
                DimensionWindow::Index { k_max: *k_max },
                lvl,
                o,
            )?;
            out = json(&CompareOut {
                level: match level {
                    LevelArg::Geometric => "geometric",
                    LevelArg::Spectral => "spectral",
                },
                k_max: *k_max,
                max_error: r.max_error,
                mean_error: r.mean_error,
                half_jump_mode: r.half_jump_mode,
                rows: r
                    .rows
                    .iter()
                    .map(|r| CompareRowOut {
                        x: r.x,
                        direct: r.direct,
                        explicit: r.explicit,
                        error: r.error,
                        at_atom: r.at_atom,
                    })
                    .collect(),
            });
        }
        StringCmd::Normalize { def } => {
            let d = StringDefinition::parse(&read(&def.def)?)?;
            d.build()?;
            out = d.to_json();
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SegmentOut {
    c: f64,
    tau_lo: f64,
    tau_hi: f64,
    cutoff: String,
}

#[derive(Serialize)]
struct NormOut {
    norm: f64,
    tau_star: f64,
    evaluations: usize,
}

#[derive(Serialize)]
struct EigenOut {
    c: f64,
    tau: f64,
    sigma: f64,
    residual: f64,
    /// `1/(σ√2)`
    expected: f64,
}

fn read_sampled(path: &PathBuf, c: f64) -> Result<SampledFunction> {
    let text = read(path)?;
    let mut t = Vec::new();
    let mut v = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            cells.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(p) if p.len() == 3 => {
                t.push(p[0]);
                v.push(Complex64::new(p[1], p[2]));
            }
            _ if i == 0 => continue,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "{}:{}: expected t,re,im",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    if t.len() < 2 {
        return Err(Error::InvalidGrid("need at least two samples".into()));
    }
    let step = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    for (j, &tj) in t.iter().enumerate() {
        if (tj - (t[0] + j as f64 * step)).abs() > 1e-9 * step.abs().max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "sample {j} is off the uniform grid"
            )));
        }
    }
    SampledFunction::new(Grid::new(t[0], t[t.len() - 1], step)?, v, c)
}

fn cmd_operator(cmd: &OperatorCmd, ctx: &Ctx) -> Result<String> {
    let o = &ctx.eval;
    let mut out = String::new();
    match cmd {
        OperatorCmd::Segment { c, t } => {
            let sh = TruncatedShift::new(*c, *t)?;
            let seg = om::segment_spectrum(&sh);
            out = json(&SegmentOut {
                c: seg.c,
                tau_lo: seg.tau_lo,
                tau_hi: seg.tau_hi,
                cutoff: format!("{:?}", sh.cutoff()).to_lowercase(),
            });
        }
        OperatorCmd::Norm { psi, c, t, tol } => {
            let sh = TruncatedShift::new(*c, *t)?;
            let f = match psi {
                Psi::Zeta => SpectralFunction::Zeta,
                Psi::Identity => SpectralFunction::Identity,
            };
            let r = om::op_function_norm(&sh, &f, *tol, o)?;
            out = json(&NormOut {
                norm: r.norm,
                tau_star: r.tau_star,
                evaluations: r.evaluations,
            });
        }
        OperatorCmd::EigenResidual {
            c,
            tau,
            sigma,
            step,
        } => {
            if !(*sigma > 0.0) {
                return Err(Error::InvalidInput(format!("sigma = {sigma} must be > 0")));
            }
            let grid = Grid::new(-7.0 * sigma, 7.0 * sigma, *step)?;
            let (_, residual) = om::approx_eigenfunction(*c, *tau, *sigma, grid)?;
            out = json(&EigenOut {
                c: *c,
                tau: *tau,
                sigma: *sigma,
                residual,
                expected: 1.0 / (sigma * 2f64.sqrt()),
            });
        }
        OperatorCmd::RangeSample { c, tau_max, step } => {
            let v = om::zeta_range_sample(*c, *tau_max, *step, o)?;
            csv_complex_header(&mut out, &["tau", "re", "im"]);
            for (k, z) in v.iter().enumerate() {
                csv_row(&mut out, &[(k + 1) as f64 * step, z.re, z.im]);
            }
        }
        OperatorCmd::Apply {
            f,
            c,
            n_max,
            tail_tol,
        } => {
            let f = read_sampled(f, *c)?;
            let trunc = match (n_max, tail_tol) {
                (Some(n), None) => Truncation::Terms(*n),
                (None, Some(t)) => Truncation::TailTol(*t),
                _ => return Err(Error::InvalidInput("give --n-max or --tail-tol".into())),
            };
            let r = om::apply_spectral_operator(&f, trunc)?;
            csv_complex_header(&mut out, &["t", "re", "im"]);
            let g = r.result.grid();
            for (j, z) in r.result.values().iter().enumerate() {
                csv_row(&mut out, &[g.t(j), z.re, z.im]);
            }
        }
    }
    Ok(out)
}

/// Linear hat `T(c)` peaking at `t0` in the middle of `[lo, hi]`.
pub fn triangular_profile(lo: f64, hi: f64, t0: f64) -> impl Fn(f64) -> f64 {
    move |c| {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        if half == 0.0 {
            t0
        } else {
            t0 * (1.0 - ((c - mid) / half).abs()).max(0.0)
        }
    }
}

fn write_scan(r: &un::ScanResult, out: &ScanOut) -> Result<String> {
    if let Some(p) = &out.csv {
        std::fs::write(p, r.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    let mut s = r.to_json();
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct DensityOut {
    eps: f64,
    fraction: f64,
    window: f64,
}

fn cmd_universality(cmd: &UniCmd, ctx: &Ctx) -> Result<String> {
    match cmd {
        UniCmd::Scan {
            target,
            bx,
            tau_max,
            tau_step,
            out,
        } => {
            let r = un::scan_continuous(
                parse_target(&target.target)?,
                &parse_box(bx)?,
                &parse_base(&target.base)?,
                *tau_max,
                *tau_step,
                &out.eps,
                &ctx.scan_options(!out.allow_vanishing),
            )?;
            write_scan(&r, out)
        }
        UniCmd::ScanDiscrete {
            target,
            bx,
            delta,
            n_max,
            out,
        } => {
            let r = un::scan_discrete(
                parse_target(&target.target)?,
                &parse_box(bx)?,
                &parse_base(&target.base)?,
                *delta,
                *n_max,
                &out.eps,
                &ctx.scan_options(!out.allow_vanishing),
            )?;
            write_scan(&r, out)
        }
        UniCmd::Quantized {
            target,
            cal_k,
            t0,
            tau,
            profile,
            grid_c,
            tol,
        } => {
            let (lo, hi) = parse_range(cal_k)?;
            let bx = match profile {
                ProfileKind::Constant => CompactBox::new(lo, hi, *t0, *grid_c, 64)?,
                ProfileKind::Triangular => CompactBox::with_profile_fn(
                    lo,
                    hi,
                    *grid_c,
                    64,
                    *t0,
                    triangular_profile(lo, hi, *t0),
                )?,
            };
            let r = un::quantized_sup(
                &parse_target(&target.target)?,
                *tau,
                &bx,
                &parse_base(&target.base)?,
                *tol,
                &ctx.scan_options(false),
            )?;
            Ok(json(&r))
        }
        UniCmd::Hurwitz {
            target,
            bx,
            alpha,
            tau_max,
            tau_step,
            out,
        } => {
            let r = un::hurwitz_scan(
                parse_target(&target.target)?,
                *alpha,
                &parse_box(bx)?,
                *tau_max,
                *tau_step,
                &out.eps,
                &ctx.scan_options(false),
            )?;
            write_scan(&r, out)
        }
        UniCmd::Taylor {
            target,
            bx,
            z0,
            n,
            tau_max,
            tau_step,
            out,
        } => {
            let r = un::taylor_translate_scan(
                parse_target(&target.target)?,
                &parse_box(bx)?,
                parse_complex(z0)?,
                *n,
                *tau_max,
                *tau_step,
                &ctx.scan_options(!out.allow_vanishing),
            )?;
            write_scan(&r, out)
        }
        UniCmd::AlmostPeriod {
            base,
            strip,
            y,
            eps,
            ell,
            range,
        } => {
            if eps.len() != ell.len() {
                return Err(Error::InvalidInput("give one --ell per --eps".into()));
            }
            let pairs: Vec<(f64, f64)> = eps.iter().copied().zip(ell.iter().copied()).collect();
            let r = un::almost_period_scan_multi(
                &parse_base(base)?,
                parse_range(strip)?,
                *y,
                &pairs,
                *range,
                un::AlmostPeriodGrid::default(),
                &ctx.scan_options(false),
            )?;
            Ok(json(&r))
        }
        UniCmd::Density { scan, eps } => {
            let r: un::ScanResult = serde_json::from_str(&read(scan)?)?;
            let rows = eps
                .iter()
                .map(|&e| {
                    Ok(DensityOut {
                        eps: e,
                        fraction: un::density_estimate(&r, e)?,
                        window: r.window,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(json(&rows))
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let mut eval = EvalOptions::default();
    if let Some(t) = cli.abs_tol {
        eval = EvalOptions::new(t, eval.max_terms)?;
    }
    if let Some(m) = cli.max_terms {
        eval = EvalOptions::new(eval.abs_tol, m)?;
    }
    if cli.workers == Some(0) {
        return Err(Error::InvalidInput("--workers must be at least 1".into()));
    }
    let ctx = Ctx {
        eval,
        workers: cli.workers,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Zeta(c) => cmd_zeta(c, &ctx),
        Command::String(c) => cmd_string(c, &ctx),
        Command::Operator(c) => cmd_operator(c, &ctx),
        Command::Universality(c) => cmd_universality(c, &ctx),
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_guard_rejection() {
        4
    } else if e.is_input_error() {
        2
    } else {
        3
    }
}

/// Runs `zs` with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {}", e.name(), e);
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2+0i").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("0.5-14.134725i").unwrap(), c(0.5, -14.134725));
        assert_eq!(parse_complex("-3").unwrap(), c(-3.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("1e-3+2E+1j").unwrap(), c(1e-3, 20.0));
        for bad in ["", "2+", "x", "1+2", "nan", "1+inf i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn specs() {
        assert!(matches!(parse_base("hurwitz:0.5").unwrap(), Base::Hurwitz(a) if a == 0.5));
        assert!(matches!(parse_base("chi4").unwrap(), Base::Dirichlet(_)));
        assert!(parse_base("nope").is_err());
        assert!(
            matches!(parse_target("translate:5").unwrap(), Target::BaseTranslate(a) if a == 5.0)
        );
        assert!(matches!(
            parse_target("const:1").unwrap(),
            Target::Constant(_)
        ));
        assert!(parse_target("const").is_err());
        assert_eq!(parse_range("0.6:0.9").unwrap(), (0.6, 0.9));
    }

    #[test]
    fn triangle() {
        let p = triangular_profile(0.6, 0.9, 1.0);
        assert_eq!(p(0.6), 0.0);
        assert!((p(0.75) - 1.0).abs() < 1e-12);
    }
}
