//! Shift searches: how well vertical translates `f(s + iτ)` of ζ, Hurwitz
//! zeta, Dirichlet L-functions or a user Dirichlet polynomial approximate a
//! target on a compact box, in scalar, discrete, quantized (operator-norm)
//! and Taylor-polynomial forms, plus ε-translation numbers.
//!
//! Every `τ` is evaluated independently and results are merged by index, so
//! scans are bit-identical for any worker count.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour;
use crate::error::{Error, Result};
use crate::operator_model::{self, SpectralFunction, TruncatedShift};
use crate::zeta_core::{self, DirichletCharacter, EvalOptions, Series, ShiftedEvaluator};

/// `|g|` at or below this counts as vanishing.
pub const VANISHING_FLOOR: f64 = 1e-12;
/// Largest Taylor degree accepted by [`taylor_translate_scan`].
pub const MAX_TAYLOR_DEGREE: usize = 30;
const TAYLOR_NODES: usize = 128;
const MAX_POLISHED_MINIMA: usize = 32;

/// The function whose translates are scanned.
#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    Zeta,
    Hurwitz(f64),
    Dirichlet(DirichletCharacter),
    /// finite Dirichlet series `Σ a_n n^{-s}`
    Coefficients(Vec<Complex64>),
}

impl Base {
    fn series(&self) -> Result<Series> {
        Ok(match self {
            Base::Zeta => Series::riemann(),
            Base::Hurwitz(a) => {
                if !(*a > 0.0 && *a <= 1.0) {
                    return Err(Error::BadAlpha(*a));
                }
                Series::hurwitz(*a)
            }
            Base::Dirichlet(chi) => Series::dirichlet(chi.values()),
            Base::Coefficients(c) => {
                if c.is_empty() {
                    return Err(Error::InvalidInput("empty coefficient list".into()));
                }
                Series::finite(c.clone())
            }
        })
    }

    pub fn eval(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        Ok(self.series()?.eval(s, opts)?.0)
    }
}

/// `K = [c_lo, c_hi] × [-T(c), T(c)]` sampled on a `grid_c × grid_t` grid;
/// `T` is constant `t0` unless a profile is given.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactBox {
    c_lo: f64,
    c_hi: f64,
    t0: f64,
    grid_c: usize,
    grid_t: usize,
    profile: Option<Vec<f64>>,
}

impl CompactBox {
    /// A rectangle inside the right half of the critical strip.
    pub fn new(c_lo: f64, c_hi: f64, t0: f64, grid_c: usize, grid_t: usize) -> Result<Self> {
        let b = Self::unguarded(c_lo, c_hi, t0, grid_c, grid_t)?;
        b.check_strip()?;
        Ok(b)
    }

    /// A rectangle anywhere in the plane.
    pub fn unguarded(c_lo: f64, c_hi: f64, t0: f64, grid_c: usize, grid_t: usize) -> Result<Self> {
        let finite = c_lo.is_finite() && c_hi.is_finite() && t0.is_finite();
        if !finite || c_lo > c_hi || t0 < 0.0 || grid_c == 0 || grid_t == 0 {
            return Err(Error::InvalidBox(format!(
                "[{c_lo}, {c_hi}] x [-{t0}, {t0}] on a {grid_c}x{grid_t} grid"
            )));
        }
        Ok(CompactBox {
            c_lo,
            c_hi,
            t0,
            grid_c,
            grid_t,
            profile: None,
        })
    }

    /// Default 64×64 grid.
    pub fn with_default_grid(c_lo: f64, c_hi: f64, t0: f64) -> Result<Self> {
        Self::new(c_lo, c_hi, t0, 64, 64)
    }

    /// `[0.74, 0.76] × [-0.05, 0.05]` on a 5×5 grid.
    pub fn tiny() -> Self {
        CompactBox {
            c_lo: 0.74,
            c_hi: 0.76,
            t0: 0.05,
            grid_c: 5,
            grid_t: 5,
            profile: None,
        }
    }

    /// Vertically convex set `{c + iτ : |τ| ≤ T(c)}` with `T` sampled at
    /// `profile.len()` equally spaced `c`; adjacent samples may differ by at
    /// most `max_jump`.
    pub fn with_profile(
        c_lo: f64,
        c_hi: f64,
        profile: Vec<f64>,
        grid_t: usize,
        max_jump: f64,
    ) -> Result<Self> {
        let t0 = profile.iter().copied().fold(0.0, f64::max);
        let mut b = Self::new(c_lo, c_hi, t0, profile.len().max(1), grid_t)?;
        if profile.is_empty() || profile.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidBox(
                "profile values must be finite and >= 0".into(),
            ));
        }
        for w in profile.windows(2) {
            let jump = (w[1] - w[0]).abs();
            if jump > max_jump {
                return Err(Error::ProfileDiscontinuous {
                    jump,
                    limit: max_jump,
                });
            }
        }
        b.profile = Some(profile);
        Ok(b)
    }

    /// Samples `T(c)` at the box's `c` grid.
    pub fn with_profile_fn(
        c_lo: f64,
        c_hi: f64,
        grid_c: usize,
        grid_t: usize,
        max_jump: f64,
        profile: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let cs = linspace(c_lo, c_hi, grid_c);
        Self::with_profile(
            c_lo,
            c_hi,
            cs.iter().map(|&c| profile(c)).collect(),
            grid_t,
            max_jump,
        )
    }

    fn check_strip(&self) -> Result<()> {
        if !(self.c_lo > 0.5 && self.c_hi < 1.0) {
            return Err(Error::InvalidBox(format!(
                "[{}, {}] is not inside the strip 1/2 < Re(s) < 1",
                self.c_lo, self.c_hi
            )));
        }
        Ok(())
    }

    pub fn c_range(&self) -> (f64, f64) {
        (self.c_lo, self.c_hi)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn profile(&self) -> Option<&[f64]> {
        self.profile.as_deref()
    }

    pub fn c_values(&self) -> Vec<f64> {
        linspace(self.c_lo, self.c_hi, self.grid_c)
    }

    /// Half-height of column `i`.
    pub fn half_height(&self, i: usize) -> f64 {
        match &self.profile {
            Some(p) => p[i],
            None => self.t0,
        }
    }

    fn columns(&self) -> Vec<Column> {
        self.c_values()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let h = self.half_height(i);
                let ts = if h == 0.0 {
                    vec![0.0]
                } else {
                    linspace(-h, h, self.grid_t)
                };
                Column { c, ts }
            })
            .collect()
    }

    /// Grid points, column by column in increasing `c`, increasing `t`.
    pub fn points(&self) -> Vec<Complex64> {
        self.columns()
            .iter()
            .flat_map(|col| col.ts.iter().map(move |&t| Complex64::new(col.c, t)))
            .collect()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Column {
    c: f64,
    ts: Vec<f64>,
}

/// The function `g` to approximate.
#[derive(Clone)]
pub enum Target {
    Expression(Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>),
    Constant(Complex64),
    /// values at the box grid points, in [`CompactBox::points`] order
    Samples(Vec<Complex64>),
    /// `s ↦ base(s + ia)`; `a = 0` is the base restricted to the box
    BaseTranslate(f64),
}

impl std::fmt::Debug for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Expression(_) => write!(f, "Expression"),
            Target::Constant(z) => write!(f, "Constant({z})"),
            Target::Samples(v) => write!(f, "Samples({} values)", v.len()),
            Target::BaseTranslate(a) => write!(f, "BaseTranslate({a})"),
        }
    }
}

impl Target {
    pub fn expression(f: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static) -> Self {
        Target::Expression(Arc::new(f))
    }

    /// The base function itself.
    pub fn base() -> Self {
        Target::BaseTranslate(0.0)
    }

    fn eval_at(&self, s: Complex64, base: &Series, opts: &EvalOptions) -> Result<Complex64> {
        match self {
            Target::Expression(f) => f(s),
            Target::Constant(z) => Ok(*z),
            Target::Samples(_) => Err(Error::TargetNotEvaluable),
            Target::BaseTranslate(a) => Ok(base.eval(s + Complex64::new(0.0, *a), opts)?.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub eval: EvalOptions,
    /// worker threads; `None` uses `ZS_WORKERS` or all cores
    pub workers: Option<usize>,
    /// refuse targets with `min |g| ≤ VANISHING_FLOOR` on the grid
    pub require_nonvanishing: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            eval: EvalOptions::default(),
            workers: None,
            require_nonvanishing: true,
        }
    }
}

impl ScanOptions {
    fn pool(&self) -> Result<rayon::ThreadPool> {
        let n = match self.workers {
            Some(n) => n,
            None => match std::env::var("ZS_WORKERS") {
                Ok(v) => v.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("ZS_WORKERS = '{v}' is not a count"))
                })?,
                Err(_) => 0,
            },
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// `|g - base(· + iτ)|` on the box: grid max, the max after one parabolic
/// step in `t` at the best cell, and the grid-resolution tolerance
/// `0.5 · h_t · L · 2` with `L` the largest sampled slope in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupReport {
    pub value: f64,
    pub grid_max: f64,
    pub tolerance: f64,
}

/// A box, base and target prepared for many shifts.
pub struct Scanner {
    series: Series,
    columns: Vec<Column>,
    target: Target,
    g: Vec<Complex64>,
    ev: ShiftedEvaluator,
    opts: EvalOptions,
}

impl Scanner {
    pub fn new(
        base: &Base,
        target: Target,
        bx: &CompactBox,
        tau_max: f64,
        opts: &EvalOptions,
    ) -> Result<Self> {
        let series = base.series()?;
        let columns = bx.columns();
        let points = bx.points();
        let ev = ShiftedEvaluator::new(series.clone(), points.clone(), tau_max, *opts);
        let g = match &target {
            Target::Samples(v) => {
                if v.len() != points.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} target samples for {} grid points",
                        v.len(),
                        points.len()
                    )));
                }
                v.clone()
            }
            Target::BaseTranslate(a) => ev.eval(*a)?,
            other => points
                .iter()
                .map(|&p| other.eval_at(p, &series, opts))
                .collect::<Result<Vec<_>>>()?,
        };
        if let Some(bad) = g.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite(format!("target value {bad}")));
        }
        Ok(Scanner {
            series,
            columns,
            target,
            g,
            ev,
            opts: *opts,
        })
    }

    pub fn min_abs_target(&self) -> f64 {
        self.g
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_nonvanishing(&self) -> Result<()> {
        let m = self.min_abs_target();
        if m <= VANISHING_FLOOR {
            return Err(Error::TargetVanishes { min_abs: m });
        }
        Ok(())
    }

    pub fn sup_report(&self, tau: f64) -> Result<SupReport> {
        let vals = self.ev.eval(tau)?;
        let f: Vec<f64> = vals
            .iter()
            .zip(&self.g)
            .map(|(v, g)| (g - v).norm())
            .collect();
        let mut best = 0usize;
        for (j, &x) in f.iter().enumerate() {
            if x > f[best] {
                best = j;
            }
        }
        let grid_max = f[best];
        let mut value = grid_max;
        let mut slope: f64 = 0.0;
        let mut offset = 0;
        let mut best_col = None;
        for (ci, col) in self.columns.iter().enumerate() {
            let n = col.ts.len();
            if n > 1 {
                let h = col.ts[1] - col.ts[0];
                for k in 0..n - 1 {
                    slope = slope.max((f[offset + k + 1] - f[offset + k]).abs() / h);
                }
            }
            if best >= offset && best < offset + n {
                best_col = Some((ci, best - offset, offset));
            }
            offset += n;
        }
        let mut tolerance = 0.0;
        if let Some((ci, k, off)) = best_col {
            let col = &self.columns[ci];
            let n = col.ts.len();
            if n > 1 {
                let h = col.ts[1] - col.ts[0];
                tolerance = 0.5 * h * slope * 2.0;
                if k > 0 && k + 1 < n && !matches!(self.target, Target::Samples(_)) {
                    let (fm, f0, fp) = (f[off + k - 1], f[off + k], f[off + k + 1]);
                    let den = fm - 2.0 * f0 + fp;
                    if den < 0.0 {
                        let d = 0.5 * h * (fm - fp) / den;
                        let s = Complex64::new(col.c, col.ts[k] + d);
                        let g = self.target.eval_at(s, &self.series, &self.opts)?;
                        let v = self
                            .series
                            .eval(s + Complex64::new(0.0, tau), &self.opts)?
                            .0;
                        value = value.max((g - v).norm());
                    }
                }
            } else {
                // single-point columns carry no t resolution
                tolerance = 0.0;
            }
        }
        Ok(SupReport {
            value,
            grid_max,
            tolerance,
        })
    }

    pub fn sup_distance(&self, tau: f64) -> Result<f64> {
        Ok(self.sup_report(tau)?.value)
    }
}

/// `sup_K |g(s) - base(s + iτ)|`.
pub fn sup_distance(
    target: Target,
    tau: f64,
    bx: &CompactBox,
    base: &Base,
    opts: &EvalOptions,
) -> Result<f64> {
    Scanner::new(base, target, bx, tau.abs(), opts)?.sup_distance(tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEntry {
    pub eps: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolishedMinimum {
    pub tau: f64,
    pub j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub taus: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    pub tau_star: f64,
    #[serde(rename = "J_star")]
    pub j_star: f64,
    pub grid_tau_star: f64,
    #[serde(rename = "grid_J_star")]
    pub grid_j_star: f64,
    pub polished: Vec<PolishedMinimum>,
    /// fraction of the τ grid with `J ≤ ε` (`J < ε` for discrete scans)
    pub density: Vec<DensityEntry>,
    /// length of the scanned τ range
    pub window: f64,
    pub flags: Vec<String>,
}

impl ScanResult {
    fn from_values(
        taus: Vec<f64>,
        j: Vec<f64>,
        eps_list: &[f64],
        strict: bool,
        window: f64,
    ) -> Result<Self> {
        for &e in eps_list {
            if !(e > 0.0) {
                return Err(Error::InvalidInput(format!("eps = {e} must be > 0")));
            }
        }
        let mut k0 = 0;
        for (k, &v) in j.iter().enumerate() {
            if v < j[k0] {
                k0 = k;
            }
        }
        let (tau0, j0) = if j.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (taus[k0], j[k0])
        };
        let mut eps: Vec<f64> = eps_list.to_vec();
        eps.sort_by(f64::total_cmp);
        eps.dedup();
        let density = eps
            .iter()
            .map(|&e| DensityEntry {
                eps: e,
                fraction: fraction_below(&j, e, strict),
            })
            .collect();
        Ok(ScanResult {
            taus,
            j,
            tau_star: tau0,
            j_star: j0,
            grid_tau_star: tau0,
            grid_j_star: j0,
            polished: Vec::new(),
            density,
            window,
            flags: Vec::new(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan result serializes")
    }

    /// `tau,J` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,J\n");
        for (t, j) in self.taus.iter().zip(&self.j) {
            out.push_str(&format!("{},{}\n", fmt17(*t), fmt17(*j)));
        }
        out
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn fraction_below(j: &[f64], eps: f64, strict: bool) -> f64 {
    if j.is_empty() {
        return 0.0;
    }
    let n = j
        .iter()
        .filter(|&&v| if strict { v < eps } else { v <= eps })
        .count();
    n as f64 / j.len() as f64
}

/// Fraction of the scan's τ grid with `J(τ) ≤ eps`.
pub fn density_estimate(result: &ScanResult, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must be > 0")));
    }
    Ok(fraction_below(&result.j, eps, false))
}

fn scan_values(scanner: &Scanner, taus: &[f64], pool: &rayon::ThreadPool) -> Result<Vec<f64>> {
    pool.install(|| taus.par_iter().map(|&t| scanner.sup_distance(t)).collect())
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - invphi * (b - a);
    let mut x2 = a + invphi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    let mut best = if f2 < f1 { (f2, x2) } else { (f1, x1) };
    for _ in 0..200 {
        if b - a <= 1e-12 * a.abs().max(1.0) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1)?;
            if f1 < best.0 || (f1 == best.0 && x1 < best.1) {
                best = (f1, x1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2)?;
            if f2 < best.0 || (f2 == best.0 && x2 < best.1) {
                best = (f2, x2);
            }
        }
    }
    Ok((best.1, best.0))
}

/// Golden-section refinement of grid minima below `2 J*`.
fn polish_minima(scanner: &Scanner, res: &mut ScanResult, pool: &rayon::ThreadPool) -> Result<()> {
    let j = &res.j;
    let n = j.len();
    if n < 2 || !(res.grid_j_star > 0.0) {
        return Ok(());
    }
    let mut cands: Vec<(f64, usize)> = (0..n)
        .filter(|&k| {
            let left = if k > 0 { j[k - 1] } else { f64::INFINITY };
            let right = if k + 1 < n { j[k + 1] } else { f64::INFINITY };
            j[k] <= left && j[k] <= right && j[k] < 2.0 * res.grid_j_star
        })
        .map(|k| (j[k], k))
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    cands.truncate(MAX_POLISHED_MINIMA);
    let taus = &res.taus;
    let polished: Vec<PolishedMinimum> = pool.install(|| {
        cands
            .par_iter()
            .map(|&(_, k)| {
                let lo = taus[k.saturating_sub(1)];
                let hi = taus[(k + 1).min(n - 1)];
                let (tau, v) = golden_section(|t| scanner.sup_distance(t), lo, hi)?;
                Ok(PolishedMinimum { tau, j: v })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for p in &polished {
        if p.j < res.j_star {
            res.j_star = p.j;
            res.tau_star = p.tau;
        }
    }
    res.polished = polished;
    Ok(())
}

fn check_step(step: f64, tau_max: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite()) || !(tau_max >= 0.0 && tau_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need tau_step > 0 and tau_max >= 0, got {step}, {tau_max}"
        )));
    }
    let n = (tau_max / step * (1.0 + 1e-12)).floor();
    if n > 5e7 {
        return Err(Error::InvalidInput("more than 5e7 shifts requested".into()));
    }
    Ok(n as usize)
}

/// `J(τ)` on `τ = k · tau_step`, `0 ≤ τ ≤ tau_max`, with golden-section
/// polish of the deepest local minima.
pub fn scan_continuous(
    target: Target,
    bx: &CompactBox,
    base: &Base,
    tau_max: f64,
    tau_step: f64,
    eps_list: &[f64],
    opts: &ScanOptions,
) -> Result<ScanResult> {
    let kmax = check_step(tau_step, tau_max)?;
    let scanner = Scanner::new(base, target, bx, tau_max, &opts.eval)?;
    if opts.require_nonvanishing {
        scanner.check_nonvanishing()?;
    }
    let pool = opts.pool()?;
    let taus: Vec<f64> = (0..=kmax).map(|k| k as f64 * tau_step).collect();
    let j = scan_values(&scanner, &taus, &pool)?;
    let mut res = ScanResult::from_values(taus, j, eps_list, false, tau_max)?;
    polish_minima(&scanner, &mut res, &pool)?;
    Ok(res)
}

/// `J(nδ)` for `1 ≤ n ≤ n_max`; density is `#{n : J(nδ) < ε} / n_max`.
pub fn scan_discrete(
    target: Target,
    bx: &CompactBox,
    base: &Base,
    delta: f64,
    n_max: usize,
    eps_list: &[f64],
    opts: &ScanOptions,
) -> Result<ScanResult> {
    if !(delta != 0.0 && delta.is_finite()) || n_max == 0 {
        return Err(Error::InvalidInput(format!(
            "need delta != 0 and n_max >= 1, got {delta}, {n_max}"
        )));
    }
    let tau_max = delta.abs() * n_max as f64;
    let scanner = Scanner::new(base, target, bx, tau_max, &opts.eval)?;
    if opts.require_nonvanishing {
        scanner.check_nonvanishing()?;
    }
    let pool = opts.pool()?;
    let taus: Vec<f64> = (1..=n_max).map(|n| n as f64 * delta).collect();
    let j = scan_values(&scanner, &taus, &pool)?;
    ScanResult::from_values(taus, j, eps_list, true, tau_max)
}

/// Continuous scan with a Hurwitz base; vanishing targets are allowed.
pub fn hurwitz_scan(
    target: Target,
    alpha: f64,
    bx: &CompactBox,
    tau_max: f64,
    tau_step: f64,
    eps_list: &[f64],
    opts: &ScanOptions,
) -> Result<ScanResult> {
    let relaxed = ScanOptions {
        require_nonvanishing: false,
        ..*opts
    };
    let mut res = scan_continuous(
        target,
        bx,
        &Base::Hurwitz(alpha),
        tau_max,
        tau_step,
        eps_list,
        &relaxed,
    )?;
    if alpha == 1.0 {
        res.flags
            .push("alpha = 1: the Hurwitz zeta function is the Riemann zeta function".into());
    } else if alpha == 0.5 {
        res.flags
            .push("alpha = 1/2: a multiple of the Riemann zeta function".into());
    }
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnNorm {
    pub c: f64,
    pub t: f64,
    pub norm: f64,
    pub tau_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizedResult {
    pub value: f64,
    pub columns: Vec<ColumnNorm>,
}

/// `max_c ‖φ(∂_c^(T(c)))‖` with `φ(s) = g(s) - base(s + iτ)`, each norm a
/// sup over the spectral segment `c + i[-T(c), T(c)]`; `c` runs over the
/// box's `c` grid and `T` is the box height or profile.
pub fn quantized_sup(
    target: &Target,
    tau: f64,
    bx: &CompactBox,
    base: &Base,
    refine_tol: f64,
    opts: &ScanOptions,
) -> Result<QuantizedResult> {
    if matches!(target, Target::Samples(_)) {
        return Err(Error::TargetNotEvaluable);
    }
    let series = base.series()?;
    let cs = bx.c_values();
    let pool = opts.pool()?;
    let eval = opts.eval;
    let columns: Vec<ColumnNorm> = pool.install(|| {
        cs.par_iter()
            .enumerate()
            .map(|(i, &c)| {
                let t = bx.half_height(i);
                let shift = TruncatedShift::new(c, t)?;
                let series = series.clone();
                let target = target.clone();
                let phi = SpectralFunction::Custom {
                    f: Box::new(move |s| {
                        Ok(target.eval_at(s, &series, &eval)?
                            - series.eval(s + Complex64::new(0.0, tau), &eval)?.0)
                    }),
                    poles: Vec::new(),
                };
                let r = operator_model::op_function_norm(&shift, &phi, refine_tol, &eval)?;
                Ok(ColumnNorm {
                    c,
                    t,
                    norm: r.norm,
                    tau_star: r.tau_star,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let value = columns.iter().map(|c| c.norm).fold(0.0, f64::max);
    Ok(QuantizedResult { value, columns })
}

/// [`quantized_sup`] on a box with a height profile.
pub fn quantized_sup_general(
    target: &Target,
    bx: &CompactBox,
    tau: f64,
    base: &Base,
    refine_tol: f64,
    opts: &ScanOptions,
) -> Result<QuantizedResult> {
    if bx.profile().is_none() {
        return Err(Error::InvalidBox("box has no height profile".into()));
    }
    quantized_sup(target, tau, bx, base, refine_tol, opts)
}

/// Taylor coefficients `a_0..=a_n` of ζ at `w` from a 128-point Cauchy
/// integral on the circle of radius `|w - 1| / 2`.
pub fn zeta_taylor_coefficients(
    w: Complex64,
    n: usize,
    opts: &EvalOptions,
) -> Result<Vec<Complex64>> {
    let rho = (w - 1.0).norm();
    if rho == 0.0 {
        return Err(Error::PoleAtOne);
    }
    contour::taylor_coefficients(|s| zeta_core::zeta(s, opts), w, 0.5 * rho, TAYLOR_NODES, n)
}

/// Scan of `sup_K |g(z) - T_n(z + iτ)|` where `T_n` is the degree-`n` Taylor
/// polynomial of ζ at `z0 + iτ`.
pub fn taylor_translate_scan(
    target: Target,
    bx: &CompactBox,
    z0: Complex64,
    n: usize,
    tau_max: f64,
    tau_step: f64,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    if n > MAX_TAYLOR_DEGREE {
        return Err(Error::InvalidInput(format!(
            "degree {n} exceeds {MAX_TAYLOR_DEGREE}"
        )));
    }
    let kmax = check_step(tau_step, tau_max)?;
    let points = bx.points();
    let reach = points.iter().map(|p| (p - z0).norm()).fold(0.0, f64::max);
    if points.iter().any(|&p| p == z0) && points.len() == 1 {
        return Err(Error::InvalidInput("z0 lies on the box".into()));
    }
    let taus: Vec<f64> = (0..=kmax).map(|k| k as f64 * tau_step).collect();
    // closest approach of z0 + iτ to the pole over the scanned range
    let closest_im = (-z0.im).clamp(0.0, taus.last().copied().unwrap_or(0.0));
    let radius = Complex64::new(z0.re - 1.0, z0.im + closest_im).norm();
    if reach >= radius {
        return Err(Error::RadiusTooSmall { reach, radius });
    }
    let series = Series::riemann();
    let g: Vec<Complex64> = match &target {
        Target::Samples(v) if v.len() == points.len() => v.clone(),
        Target::Samples(v) => {
            return Err(Error::InvalidInput(format!(
                "{} target samples for {} grid points",
                v.len(),
                points.len()
            )))
        }
        other => points
            .iter()
            .map(|&p| other.eval_at(p, &series, &opts.eval))
            .collect::<Result<Vec<_>>>()?,
    };
    if opts.require_nonvanishing {
        let m = g.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if m <= VANISHING_FLOOR {
            return Err(Error::TargetVanishes { min_abs: m });
        }
    }
    let pool = opts.pool()?;
    let eval = opts.eval;
    let j: Vec<f64> = pool.install(|| {
        taus.par_iter()
            .map(|&tau| {
                let w = z0 + Complex64::new(0.0, tau);
                let a = zeta_taylor_coefficients(w, n, &eval)?;
                let mut worst: f64 = 0.0;
                for (p, gv) in points.iter().zip(&g) {
                    let dz = p - z0;
                    let approx = a
                        .iter()
                        .rev()
                        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * dz + c);
                    worst = worst.max((gv - approx).norm());
                }
                Ok(worst)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    ScanResult::from_values(taus, j, &[], false, tau_max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationWindow {
    pub lo: f64,
    pub hi: f64,
    pub finds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostPeriodResult {
    pub eps: f64,
    pub ell: f64,
    pub windows: Vec<TranslationWindow>,
    /// indices of windows without a qualifying τ
    pub empty_windows: Vec<usize>,
    /// Lipschitz constant used to skip coarse cells
    pub lipschitz: f64,
    pub coarse_step: f64,
    pub fine_step: f64,
}

/// Sampling and search parameters for [`almost_period_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostPeriodGrid {
    pub grid_c: usize,
    pub grid_t: usize,
    pub coarse_step: f64,
    pub fine_step: f64,
}

impl Default for AlmostPeriodGrid {
    fn default() -> Self {
        AlmostPeriodGrid {
            grid_c: 3,
            grid_t: 5,
            coarse_step: 0.05,
            fine_step: 0.001,
        }
    }
}

/// ε-translation numbers `τ ∈ [0, range]`: `sup |f(s + iτ) - f(s)| < ε` on
/// `[alpha, beta] × [-y_window, y_window]`. Coarse cells that cannot
/// contain one by the Lipschitz bound are skipped; the rest are searched on
/// the fine grid. Finds are grouped into consecutive windows of length `ell`.
#[allow(clippy::too_many_arguments)]
pub fn almost_period_scan(
    base: &Base,
    strip: (f64, f64),
    y_window: f64,
    eps: f64,
    ell: f64,
    range: f64,
    grid: AlmostPeriodGrid,
    opts: &ScanOptions,
) -> Result<AlmostPeriodResult> {
    let mut r = almost_period_scan_multi(base, strip, y_window, &[(eps, ell)], range, grid, opts)?;
    Ok(r.remove(0))
}

/// [`almost_period_scan`] for several `(eps, ell)` pairs sharing one coarse pass.
pub fn almost_period_scan_multi(
    base: &Base,
    strip: (f64, f64),
    y_window: f64,
    targets: &[(f64, f64)],
    range: f64,
    grid: AlmostPeriodGrid,
    opts: &ScanOptions,
) -> Result<Vec<AlmostPeriodResult>> {
    let (lo, hi) = strip;
    let half_plane = match base {
        Base::Zeta => 1.0,
        Base::Dirichlet(chi) if chi.is_principal() => 1.0,
        Base::Dirichlet(_) => 0.0,
        _ => {
            return Err(Error::UnsupportedKind(
                "almost periodicity is scanned for zeta and Dirichlet L-functions".into(),
            ))
        }
    };
    if !(lo > half_plane && hi >= lo && hi.is_finite()) {
        return Err(Error::StripOutsideHalfPlane { lo, hi });
    }
    let bad = |&(eps, ell): &(f64, f64)| !(eps > 0.0 && ell > 0.0);
    if targets.is_empty() || targets.iter().any(bad) || !(range >= 0.0 && y_window >= 0.0) {
        return Err(Error::InvalidInput(
            "need eps > 0, ell > 0, range >= 0, y_window >= 0".into(),
        ));
    }
    if !(grid.fine_step > 0.0 && grid.coarse_step >= grid.fine_step) {
        return Err(Error::InvalidInput(
            "need 0 < fine_step <= coarse_step".into(),
        ));
    }
    let bx = CompactBox::unguarded(lo, hi, y_window, grid.grid_c, grid.grid_t)?;
    let scanner = Scanner::new(base, Target::base(), &bx, range, &opts.eval)?;
    let pool = opts.pool()?;
    let kmax = check_step(grid.coarse_step, range)?;
    let coarse: Vec<f64> = (0..=kmax).map(|k| k as f64 * grid.coarse_step).collect();
    let jc = scan_values(&scanner, &coarse, &pool)?;
    let lipschitz = if lo > 1.0 {
        // |d/dτ L(s + iτ)| ≤ Σ log n · n^{-σ} = -ζ'(σ)
        zeta_core::zeta_derivative(Complex64::new(lo, 0.0), &opts.eval)?.norm()
    } else {
        2.0 * jc
            .windows(2)
            .map(|w| (w[1] - w[0]).abs() / grid.coarse_step)
            .fold(0.0, f64::max)
    };
    let margin = lipschitz * grid.coarse_step / 2.0;
    let ratio = grid.coarse_step / grid.fine_step;
    let fmax = (range / grid.fine_step * (1.0 + 1e-12)).floor() as i64;
    let mut out = Vec::with_capacity(targets.len());
    for &(eps, ell) in targets {
        let mut fine_idx = std::collections::BTreeSet::new();
        for (k, &v) in jc.iter().enumerate() {
            if v - margin < eps {
                let centre = k as f64 * ratio;
                let a = (centre - ratio / 2.0).round() as i64;
                let b = (centre + ratio / 2.0).round() as i64;
                fine_idx.extend((a.max(0)..=b.min(fmax)).map(|i| i as u64));
            }
        }
        let fine: Vec<f64> = fine_idx
            .iter()
            .map(|&i| i as f64 * grid.fine_step)
            .collect();
        let jf = scan_values(&scanner, &fine, &pool)?;
        let nwin = ((range / ell).ceil() as usize).max(1);
        let mut windows: Vec<TranslationWindow> = (0..nwin)
            .map(|w| TranslationWindow {
                lo: w as f64 * ell,
                hi: ((w + 1) as f64 * ell).min(range),
                finds: Vec::new(),
            })
            .collect();
        for (&t, _) in fine.iter().zip(&jf).filter(|(_, &v)| v < eps) {
            let w = ((t / ell).floor() as usize).min(nwin - 1);
            windows[w].finds.push(t);
        }
        let empty_windows = windows
            .iter()
            .enumerate()
            .filter(|(_, w)| w.finds.is_empty())
            .map(|(i, _)| i)
            .collect();
        out.push(AlmostPeriodResult {
            eps,
            ell,
            windows,
            empty_windows,
            lipschitz,
            coarse_step: grid.coarse_step,
            fine_step: grid.fine_step,
        });
    }
    Ok(out)
}
