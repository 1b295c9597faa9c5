//! The weighted space `H_c`, the shift semigroup, the spectral operator
//! `ζ(∂_c) = Σ n^{-∂}` in additive form, truncated shifts `∂^(T)` and norms of
//! functions of them through their spectral segments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::zeta_core::{self, arith, EvalOptions, Series, ShiftedEvaluator};

/// Values above this on a segment are treated as a pole.
pub const OVERFLOW_GUARD: f64 = 1e12;

/// Uniform grid `t_min, t_min + step, ...` with `⌊(t_max - t_min)/step⌋ + 1`
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            t_min: -40.0,
            t_max: 40.0,
            step: 1e-3,
        }
    }
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        let g = Grid { t_min, t_max, step };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0
            && self.t_min.is_finite()
            && self.t_max.is_finite()
            && self.t_max >= self.t_min)
        {
            return Err(Error::InvalidGrid(format!(
                "[{}, {}] with step {}",
                self.t_min, self.t_max, self.step
            )));
        }
        if (self.t_max - self.t_min) / self.step > 5e8 {
            return Err(Error::InvalidGrid("more than 5e8 grid points".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // the tolerance keeps t_max on the grid when the width is a multiple of the step
        ((self.t_max - self.t_min) / self.step * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t_min + j as f64 * self.step
    }
}

/// A function on a uniform grid, viewed as an element of `H_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
    c: f64,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>, c: f64) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("weight c = {c} must be >= 0")));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite("sampled function value".into()));
        }
        Ok(SampledFunction { grid, values, c })
    }

    pub fn from_fn(grid: Grid, c: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        grid.validate()?;
        let values = (0..grid.len()).map(|j| f(grid.t(j))).collect();
        Self::new(grid, values, c)
    }

    /// `exp(-(t - center)^2 / (2 width^2))`.
    pub fn gaussian(grid: Grid, c: f64, center: f64, width: f64) -> Result<Self> {
        Self::from_fn(grid, c, |t| {
            let u = (t - center) / width;
            Complex64::new((-0.5 * u * u).exp(), 0.0)
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn scale(&self, k: Complex64) -> Self {
        SampledFunction {
            values: self.values.iter().map(|v| v * k).collect(),
            ..self.clone()
        }
    }

    fn with_values(&self, values: Vec<Complex64>) -> Self {
        SampledFunction {
            grid: self.grid,
            values,
            c: self.c,
        }
    }

    /// `|f(t)| e^{-ct}` at the two ends of the grid.
    pub fn boundary_weights(&self) -> (f64, f64) {
        let n = self.values.len();
        let w = |j: usize| self.values[j].norm() * (-self.c * self.grid.t(j)).exp();
        (w(0), w(n - 1))
    }

    /// Whether both boundary weights are below `threshold`.
    pub fn decays_at_boundary(&self, threshold: f64) -> bool {
        let (a, b) = self.boundary_weights();
        a < threshold && b < threshold
    }
}

/// `(∫ |f|^2 e^{-2ct} dt)^{1/2}` by the composite trapezoid rule.
pub fn hc_norm(f: &SampledFunction) -> f64 {
    weighted_norm(f, 0, f.values.len())
}

fn weighted_norm(f: &SampledFunction, lo: usize, hi: usize) -> f64 {
    if hi <= lo + 1 {
        return 0.0;
    }
    let g = f.grid;
    let mut acc = 0.0;
    for j in lo..hi {
        let v = f.values[j].norm() * (-f.c * g.t(j)).exp();
        let w = if j == lo || j + 1 == hi { 0.5 } else { 1.0 };
        acc += w * v * v;
    }
    (acc * g.step).sqrt()
}

/// Four-point Lagrange weights for sampling at fractional index `i0 + mu`,
/// taken from indices `i0 - 1 ..= i0 + 2`.
fn lagrange4(mu: f64) -> [f64; 4] {
    [
        -mu * (mu - 1.0) * (mu - 2.0) / 6.0,
        (mu + 1.0) * (mu - 1.0) * (mu - 2.0) / 2.0,
        -(mu + 1.0) * mu * (mu - 2.0) / 2.0,
        (mu + 1.0) * mu * (mu - 1.0) / 6.0,
    ]
}

/// Offsets `d` (output `j` reads input `j - d`) and weights realising
/// `f(t - a)`; a single unit tap when `a` is a whole number of steps.
fn shift_taps(a: f64, step: f64) -> Vec<(i64, f64)> {
    let s = a / step;
    let q = s.round();
    if (s - q).abs() <= 1e-9 * s.abs().max(1.0) {
        return vec![(q as i64, 1.0)];
    }
    let q = s.floor();
    let mu = 1.0 - (s - q);
    let base = q as i64 + 1;
    lagrange4(mu)
        .iter()
        .enumerate()
        .map(|(m, &w)| (base - (m as i64 - 1), w))
        .collect()
}

/// Kernel `Σ weight_k f(· - a_k)` as dense taps over offsets `-1 ..`.
#[derive(Debug, Default)]
struct Kernel {
    taps: Vec<f64>,
}

impl Kernel {
    fn add_shift(&mut self, a: f64, weight: f64, step: f64) {
        for (d, w) in shift_taps(a, step) {
            let i = (d + 1) as usize;
            if i >= self.taps.len() {
                self.taps.resize(i + 1, 0.0);
            }
            self.taps[i] += weight * w;
        }
    }

    fn apply(&self, f: &SampledFunction) -> SampledFunction {
        let n = f.values.len() as i64;
        let taps: Vec<(i64, f64)> = self
            .taps
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as i64 - 1, w))
            .filter(|&(d, w)| w != 0.0 && d < n)
            .collect();
        if taps.len() as f64 * n as f64 <= 2e8 {
            let mut out = vec![Complex64::new(0.0, 0.0); n as usize];
            for &(d, w) in &taps {
                let (lo, hi) = (d.max(0), (n + d).min(n));
                for j in lo..hi {
                    out[j as usize] += w * f.values[(j - d) as usize];
                }
            }
            f.with_values(out)
        } else {
            convolve_weighted(f, &taps)
        }
    }
}

/// FFT convolution in the weighted picture `g = f e^{-ct}`, where a shift by
/// `a` becomes a shift scaled by `e^{-ca}`; rounding then stays relative to
/// the `H_c` size of `f`.
fn convolve_weighted(f: &SampledFunction, taps: &[(i64, f64)]) -> SampledFunction {
    let g = f.grid;
    let n = f.values.len();
    let d_min = taps.first().map(|t| t.0).unwrap_or(0);
    let d_max = taps.last().map(|t| t.0).unwrap_or(0);
    let span = (d_max - d_min + 1) as usize;
    let size = (n + span).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    for j in 0..n {
        a[j] = f.values[j] * (-f.c * g.t(j)).exp();
    }
    let mut k = vec![Complex64::new(0.0, 0.0); size];
    for &(d, w) in taps {
        k[(d - d_min) as usize] += w * (-f.c * d as f64 * g.step).exp();
    }
    fwd.process(&mut a);
    fwd.process(&mut k);
    for (x, y) in a.iter_mut().zip(&k) {
        *x *= y;
    }
    inv.process(&mut a);
    let norm = 1.0 / size as f64;
    let out = (0..n)
        .map(|j| {
            let idx = j as i64 - d_min;
            let v = if idx >= 0 {
                a[idx as usize]
            } else {
                Complex64::new(0.0, 0.0)
            };
            v * norm * (f.c * g.t(j)).exp()
        })
        .collect();
    f.with_values(out)
}

/// `u ↦ f(u - t)` on the same window, zero-filled from the left.
///
/// Shifts by a whole number of steps move samples exactly; other shifts use
/// four-point Lagrange interpolation.
pub fn shift(f: &SampledFunction, t: f64) -> Result<SampledFunction> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("shift t = {t} must be >= 0")));
    }
    let mut k = Kernel::default();
    k.add_shift(t, 1.0, f.grid.step);
    Ok(k.apply(f))
}

/// How many terms of `Σ f(· - log n)` to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Terms(u64),
    /// smallest `N` with `‖f‖_c Σ_{n>N} n^{-c} ≤ tol`; needs `c > 1`
    TailTol(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralApplication {
    pub result: SampledFunction,
    pub n_max: u64,
    /// bound on the norm of the omitted terms, zero for an explicit `n_max`
    pub tail_bound: f64,
}

const MAX_SPECTRAL_TERMS: u64 = 100_000_000;

/// `Σ_{n>N} n^{-c} ≤ N^{1-c}/(c-1)`.
fn zeta_tail(c: f64, n: u64) -> f64 {
    (n as f64).powf(1.0 - c) / (c - 1.0)
}

/// Additive form `Σ_{n ≤ N} f(· - log n)` of the spectral operator.
pub fn apply_spectral_operator(
    f: &SampledFunction,
    trunc: Truncation,
) -> Result<SpectralApplication> {
    let norm = hc_norm(f);
    let (n_max, tail_bound) = match trunc {
        Truncation::Terms(0) => return Err(Error::InvalidInput("n_max must be >= 1".into())),
        Truncation::Terms(n) => (n, 0.0),
        Truncation::TailTol(tol) => {
            if f.c <= 1.0 {
                return Err(Error::DivergentTail { c: f.c });
            }
            if !(tol > 0.0) {
                return Err(Error::InvalidInput(format!("tail_tol = {tol} must be > 0")));
            }
            if norm == 0.0 {
                (1, 0.0)
            } else {
                let est = ((norm / (tol * (f.c - 1.0))).powf(1.0 / (f.c - 1.0))).ceil();
                if !(est <= MAX_SPECTRAL_TERMS as f64) {
                    return Err(Error::ToleranceUnreachable {
                        tol,
                        max_terms: MAX_SPECTRAL_TERMS as usize,
                    });
                }
                let n = est.max(1.0) as u64;
                (n, norm * zeta_tail(f.c, n))
            }
        }
    };
    let g = f.grid;
    let reach = (g.t_max - g.t_min) + 2.0 * g.step;
    let mut k = Kernel::default();
    for n in 1..=n_max {
        let a = (n as f64).ln();
        if a > reach {
            break;
        }
        k.add_shift(a, 1.0, g.step);
    }
    Ok(SpectralApplication {
        result: k.apply(f),
        n_max,
        tail_bound,
    })
}

/// `Σ_{m=0}^{m_max} f(· - m log p)`.
pub fn apply_euler_factor(f: &SampledFunction, p: u64, m_max: u32) -> Result<SampledFunction> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let g = f.grid;
    let reach = (g.t_max - g.t_min) + 2.0 * g.step;
    let lp = (p as f64).ln();
    let mut k = Kernel::default();
    for m in 0..=m_max {
        let a = m as f64 * lp;
        if a > reach {
            break;
        }
        k.add_shift(a, 1.0, g.step);
    }
    Ok(k.apply(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Clamp,
    Arctan,
}

/// `∂^(T) = c + i φ^(T)(V)` with an odd cutoff `φ^(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedShift {
    c: f64,
    t: f64,
    cutoff: Cutoff,
}

impl TruncatedShift {
    /// Clamp cutoff for `c ≠ 1`, arctan for `c = 1`.
    pub fn new(c: f64, t: f64) -> Result<Self> {
        let cutoff = if c == 1.0 {
            Cutoff::Arctan
        } else {
            Cutoff::Clamp
        };
        Self::with_cutoff(c, t, cutoff)
    }

    pub fn with_cutoff(c: f64, t: f64, cutoff: Cutoff) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite() && t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need c >= 0 and T >= 0, got c = {c}, T = {t}"
            )));
        }
        let ok = match cutoff {
            Cutoff::Arctan => c == 1.0,
            Cutoff::Clamp => c != 1.0,
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "{cutoff:?} cutoff is not allowed at c = {c}"
            )));
        }
        Ok(TruncatedShift { c, t, cutoff })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    /// `φ^(T)(τ)`.
    pub fn phi(&self, tau: f64) -> f64 {
        match self.cutoff {
            Cutoff::Clamp => tau.clamp(-self.t, self.t),
            Cutoff::Arctan => 2.0 * self.t / PI * tau.atan(),
        }
    }

    /// Symbol of `∂^(T)` at the spectral parameter `τ` of `V`.
    pub fn symbol(&self, tau: f64) -> Complex64 {
        Complex64::new(self.c, self.phi(tau))
    }
}

/// Vertical segment `c + i[tau_lo, tau_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSegment {
    pub c: f64,
    pub tau_lo: f64,
    pub tau_hi: f64,
}

impl SpectralSegment {
    pub fn contains(&self, s: Complex64) -> bool {
        s.re == self.c && s.im >= self.tau_lo && s.im <= self.tau_hi
    }

    pub fn is_subset_of(&self, other: &SpectralSegment) -> bool {
        self.c == other.c && self.tau_lo >= other.tau_lo && self.tau_hi <= other.tau_hi
    }
}

pub fn segment_spectrum(shift: &TruncatedShift) -> SpectralSegment {
    SpectralSegment {
        c: shift.c,
        tau_lo: -shift.t,
        tau_hi: shift.t,
    }
}

/// Scalar functions applied to `∂^(T)` by functional calculus.
pub enum SpectralFunction {
    Identity,
    Zeta,
    /// `Σ a_k s^k`
    Polynomial(Vec<Complex64>),
    /// any function, with its known poles
    Custom {
        f: Box<dyn Fn(Complex64) -> Result<Complex64> + Sync>,
        poles: Vec<Complex64>,
    },
}

impl SpectralFunction {
    pub fn eval(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        match self {
            SpectralFunction::Identity => Ok(s),
            SpectralFunction::Zeta => zeta_core::zeta(s, opts),
            SpectralFunction::Polynomial(a) => Ok(a
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * s + k)),
            SpectralFunction::Custom { f, .. } => f(s),
        }
    }

    pub fn poles(&self) -> Vec<Complex64> {
        match self {
            SpectralFunction::Zeta => vec![Complex64::new(1.0, 0.0)],
            SpectralFunction::Custom { poles, .. } => poles.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    /// `sup |ψ|` over the segment
    pub norm: f64,
    /// a `τ` where the sup is attained, to within the refinement tolerance
    pub tau_star: f64,
    pub evaluations: usize,
}

const MAX_NORM_EVALUATIONS: usize = 2_000_000;

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    key: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// `sup_{τ ∈ [lo, hi]} h(τ)` for a Lipschitz `h` by best-first bisection.
///
/// The Lipschitz constant is twice the largest slope seen so far; the search
/// stops when no interval's bound exceeds the best value by `tol`.
pub fn lipschitz_sup(
    h: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<NormResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "refine_tol = {tol} must be > 0"
        )));
    }
    if lo == hi {
        return Ok(NormResult {
            norm: h(lo)?,
            tau_star: lo,
            evaluations: 1,
        });
    }
    let n0 = 64 + 16 * (hi - lo).ceil() as usize;
    let xs: Vec<f64> = (0..=n0)
        .map(|i| lo + (hi - lo) * i as f64 / n0 as f64)
        .collect();
    let fs = xs.iter().map(|&x| h(x)).collect::<Result<Vec<f64>>>()?;
    let mut evaluations = fs.len();
    let (mut best, mut arg) = (f64::NEG_INFINITY, lo);
    for (&x, &f) in xs.iter().zip(&fs) {
        if f > best {
            best = f;
            arg = x;
        }
    }
    let slope = |a: f64, b: f64, fa: f64, fb: f64| (fb - fa).abs() / (b - a);
    let mut l = 2.0
        * xs.windows(2)
            .zip(fs.windows(2))
            .map(|(x, f)| slope(x[0], x[1], f[0], f[1]))
            .fold(0.0, f64::max);
    let key = |iv: &Interval, l: f64| 0.5 * (iv.fa + iv.fb) + 0.5 * l * (iv.b - iv.a);
    let mut heap: BinaryHeap<Interval> = xs
        .windows(2)
        .zip(fs.windows(2))
        .map(|(x, f)| {
            let mut iv = Interval {
                a: x[0],
                b: x[1],
                fa: f[0],
                fb: f[1],
                key: 0.0,
            };
            iv.key = key(&iv, l);
            iv
        })
        .collect();
    while let Some(iv) = heap.pop() {
        if iv.key <= best + tol {
            break;
        }
        if evaluations >= MAX_NORM_EVALUATIONS || iv.b - iv.a < 1e-15 * iv.a.abs().max(1.0) {
            return Err(Error::ToleranceUnreachable {
                tol,
                max_terms: MAX_NORM_EVALUATIONS,
            });
        }
        let m = 0.5 * (iv.a + iv.b);
        let fm = h(m)?;
        evaluations += 1;
        if fm > best {
            best = fm;
            arg = m;
        }
        let new_l = 2.0 * slope(iv.a, m, iv.fa, fm).max(slope(m, iv.b, fm, iv.fb));
        let mut halves = [
            Interval {
                a: iv.a,
                b: m,
                fa: iv.fa,
                fb: fm,
                key: 0.0,
            },
            Interval {
                a: m,
                b: iv.b,
                fa: fm,
                fb: iv.fb,
                key: 0.0,
            },
        ];
        if new_l > l {
            l = new_l;
            let rest: Vec<Interval> = heap
                .into_iter()
                .map(|mut x| {
                    x.key = key(&x, l);
                    x
                })
                .collect();
            heap = rest.into();
        }
        for half in halves.iter_mut() {
            half.key = key(half, l);
            heap.push(*half);
        }
    }
    Ok(NormResult {
        norm: best,
        tau_star: arg,
        evaluations,
    })
}

/// `‖ψ(∂^(T))‖ = sup |ψ|` over the spectral segment.
pub fn op_function_norm(
    shift: &TruncatedShift,
    psi: &SpectralFunction,
    refine_tol: f64,
    opts: &EvalOptions,
) -> Result<NormResult> {
    segment_sup(
        shift,
        refine_tol,
        |tau| psi.eval(Complex64::new(shift.c, tau), opts),
        &psi.poles(),
    )
}

fn segment_sup(
    shift: &TruncatedShift,
    refine_tol: f64,
    f: impl Fn(f64) -> Result<Complex64>,
    poles: &[Complex64],
) -> Result<NormResult> {
    let seg = segment_spectrum(shift);
    let unbounded = || Error::UnboundedOnSegment { c: shift.c };
    if poles.iter().any(|&p| seg.contains(p)) {
        return Err(unbounded());
    }
    let h = |tau: f64| -> Result<f64> {
        let v = f(tau).map_err(|e| match e {
            Error::PoleAtOne | Error::PoleHit { .. } => unbounded(),
            other => other,
        })?;
        let a = v.norm();
        if !(a <= OVERFLOW_GUARD) {
            return Err(unbounded());
        }
        Ok(a)
    };
    lipschitz_sup(h, seg.tau_lo, seg.tau_hi, refine_tol)
}

/// Norms of `ψ(∂^(T))` and `ψ(2c - ∂^(T))`; the second is a sup over the
/// reflected segment `c - i[-T, T]`.
pub fn adjoint_norm_check(
    shift: &TruncatedShift,
    psi: &SpectralFunction,
    refine_tol: f64,
    opts: &EvalOptions,
) -> Result<(NormResult, NormResult)> {
    let direct = op_function_norm(shift, psi, refine_tol, opts)?;
    let c = shift.c;
    let reflected_poles: Vec<Complex64> = psi.poles().iter().map(|p| 2.0 * c - p).collect();
    let adjoint = segment_sup(
        shift,
        refine_tol,
        |tau| psi.eval(2.0 * c - Complex64::new(c, tau), opts),
        &reflected_poles,
    )?;
    Ok((direct, adjoint))
}

/// `ψ_σ(t) = e^{(c+iτ)t} e^{-t²/(2σ²)}` and `‖(∂ - λ)ψ_σ‖_c / ‖ψ_σ‖_c` with
/// `∂` by centered differences on interior points.
pub fn approx_eigenfunction(
    c: f64,
    tau: f64,
    sigma: f64,
    grid: Grid,
) -> Result<(SampledFunction, f64)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("sigma = {sigma} must be > 0")));
    }
    grid.validate()?;
    let (need_lo, need_hi) = (-6.0 * sigma, 6.0 * sigma);
    if grid.t_min > need_lo || grid.t(grid.len() - 1) < need_hi {
        return Err(Error::WindowTooSmall {
            lo: grid.t_min,
            hi: grid.t_max,
            need_lo,
            need_hi,
        });
    }
    let lambda = Complex64::new(c, tau);
    let psi = SampledFunction::from_fn(grid, c, |t| {
        (lambda * t - t * t / (2.0 * sigma * sigma)).exp()
    })?;
    let n = psi.values.len();
    let h = grid.step;
    let mut resid = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n - 1 {
        let d = (psi.values[j + 1] - psi.values[j - 1]) / (2.0 * h);
        resid[j] = d - lambda * psi.values[j];
    }
    let r = psi.with_values(resid);
    let ratio = weighted_norm(&r, 1, n - 1) / weighted_norm(&psi, 1, n - 1);
    Ok((psi, ratio))
}

/// `ζ(c + iτ)` for `τ = k·step`, `k = 1, ..., ⌊tau_max/step⌋`.
pub fn zeta_range_sample(
    c: f64,
    tau_max: f64,
    step: f64,
    opts: &EvalOptions,
) -> Result<Vec<Complex64>> {
    if !(step > 0.0 && c.is_finite() && tau_max.is_finite()) {
        return Err(Error::InvalidInput(format!("step = {step} must be > 0")));
    }
    let count = if tau_max < step {
        0
    } else {
        (tau_max / step * (1.0 + 1e-12)).floor() as usize
    };
    if count == 0 {
        return Ok(Vec::new());
    }
    let ev = ShiftedEvaluator::new(
        Series::riemann(),
        vec![Complex64::new(c, 0.0)],
        tau_max,
        *opts,
    );
    (1..=count)
        .map(|k| ev.eval(k as f64 * step).map(|v| v[0]))
        .collect()
}

/// For each target, the distance to the nearest sample (infinite if none).
pub fn nearest_distances(samples: &[Complex64], targets: &[Complex64]) -> Vec<f64> {
    targets
        .iter()
        .map(|t| {
            samples
                .iter()
                .map(|s| (s - t).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    fn small_grid() -> Grid {
        Grid::new(-20.0, 20.0, 1e-3).unwrap()
    }

    #[test]
    fn grid_lengths() {
        assert_eq!(Grid::default().len(), 80_001);
        assert_eq!(Grid::new(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert_eq!(Grid::new(0.0, 1.05, 0.1).unwrap().len(), 11);
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
        let g = Grid::new(0.0, 1.0, 0.5).unwrap();
        assert!(SampledFunction::new(g, vec![Complex64::new(1.0, 0.0); 2], 0.0).is_err());
    }

    #[test]
    fn norm_examples() {
        let g = Grid::new(-2.0, 3.0, 1e-3).unwrap();
        let zero = SampledFunction::from_fn(g, 0.5, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(hc_norm(&zero), 0.0);
        let bump = SampledFunction::from_fn(g, 0.0, |t| {
            Complex64::new(if (0.0..=1.0).contains(&t) { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert!((hc_norm(&bump) - 1.0).abs() <= g.step);
        let f = SampledFunction::gaussian(g, 0.7, 0.3, 0.4).unwrap();
        assert_eq!(
            hc_norm(&f.scale(Complex64::new(2.0, 0.0))),
            2.0 * hc_norm(&f)
        );
    }

    #[test]
    fn shift_semigroup() {
        let f = SampledFunction::gaussian(small_grid(), 1.0, -3.0, 1.0).unwrap();
        assert_eq!(shift(&f, 0.0).unwrap(), f);
        let a = shift(&shift(&f, 0.25).unwrap(), 0.5).unwrap();
        assert_eq!(a, shift(&f, 0.75).unwrap());
        for (c, t) in [(0.5, 0.1), (1.0, 2f64.ln()), (2.0, 1.0), (1.0, 0.1234567)] {
            let f = SampledFunction::gaussian(small_grid(), c, -3.0, 1.0).unwrap();
            let ratio = hc_norm(&shift(&f, t).unwrap()) / hc_norm(&f);
            assert!((ratio - (-c * t).exp()).abs() < 1e-6, "c={c} t={t} {ratio}");
        }
        assert!(f.decays_at_boundary(1e-12));
    }

    #[test]
    fn spectral_operator() {
        let f = SampledFunction::gaussian(small_grid(), 2.0, 2.0, 1.0).unwrap();
        let one = apply_spectral_operator(&f, Truncation::Terms(1)).unwrap();
        assert_eq!(one.result, f);
        let full = apply_spectral_operator(&f, Truncation::TailTol(1e-6)).unwrap();
        let z2 = zeta_core::zeta(Complex64::new(2.0, 0.0), &o()).unwrap().re;
        assert!(hc_norm(&full.result) <= z2 * hc_norm(&f) * (1.0 + 1e-6));
        assert!(full.tail_bound <= 1e-6);
        let direct = apply_spectral_operator(&f, Truncation::Terms(200)).unwrap();
        let fft = apply_spectral_operator(&f, Truncation::Terms(20_000)).unwrap();
        let d: Vec<Complex64> = direct
            .result
            .values()
            .iter()
            .zip(fft.result.values())
            .map(|(a, b)| a - b)
            .collect();
        let diff = hc_norm(&f.with_values(d));
        assert!(diff <= hc_norm(&f) * 2.0 / 200.0, "{diff}");
        let slow = SampledFunction::gaussian(small_grid(), 0.5, -5.0, 1.0).unwrap();
        assert_eq!(
            apply_spectral_operator(&slow, Truncation::TailTol(1e-3)),
            Err(Error::DivergentTail { c: 0.5 })
        );
    }

    #[test]
    fn spectral_operator_on_exponentials() {
        // e^{st} is an eigenfunction: n^{-∂} e^{st} = n^{-s} e^{st}
        let g = Grid::new(0.0, 12.0, 1e-3).unwrap();
        let s = Complex64::new(2.0, 3.0);
        let f = SampledFunction::from_fn(g, 2.0, |t| (s * t).exp()).unwrap();
        let out = apply_spectral_operator(&f, Truncation::Terms(50))
            .unwrap()
            .result;
        let factor: Complex64 = (1..=50).map(|n| (-s * (n as f64).ln()).exp()).sum();
        let j = g.len() - 1;
        let rel = (out.values()[j] - factor * f.values()[j]).norm() / f.values()[j].norm();
        assert!(rel < 1e-9, "{rel}");
    }

    #[test]
    fn euler_factors() {
        let f = SampledFunction::gaussian(small_grid(), 2.0, 2.0, 1.0).unwrap();
        assert_eq!(apply_euler_factor(&f, 2, 0).unwrap(), f);
        let composed = apply_euler_factor(&apply_euler_factor(&f, 2, 6).unwrap(), 3, 4).unwrap();
        let mut k = Kernel::default();
        for m2 in 0..=6 {
            for m3 in 0..=4 {
                k.add_shift(
                    m2 as f64 * 2f64.ln() + m3 as f64 * 3f64.ln(),
                    1.0,
                    f.grid.step,
                );
            }
        }
        let double = k.apply(&f);
        let d: Vec<Complex64> = composed
            .values()
            .iter()
            .zip(double.values())
            .map(|(a, b)| a - b)
            .collect();
        assert!(hc_norm(&f.with_values(d)) < 1e-9 * hc_norm(&f));

        let target = apply_spectral_operator(&f, Truncation::TailTol(1e-7))
            .unwrap()
            .result;
        let mut last = f64::INFINITY;
        for pmax in [5, 30, 100] {
            let mut acc = f.clone();
            for p in arith::primes_up_to(pmax) {
                acc = apply_euler_factor(&acc, p, 40).unwrap();
            }
            let d: Vec<Complex64> = acc
                .values()
                .iter()
                .zip(target.values())
                .map(|(a, b)| a - b)
                .collect();
            let err = hc_norm(&f.with_values(d));
            assert!(err < last, "{pmax}: {err}");
            last = err;
        }
    }

    #[test]
    fn segments() {
        let s = segment_spectrum(&TruncatedShift::new(0.75, 2.0).unwrap());
        assert_eq!((s.c, s.tau_lo, s.tau_hi), (0.75, -2.0, 2.0));
        let inner = segment_spectrum(&TruncatedShift::new(0.75, 1.0).unwrap());
        assert!(inner.is_subset_of(&s));
        assert!(TruncatedShift::with_cutoff(1.0, 2.0, Cutoff::Clamp).is_err());
        assert!(TruncatedShift::with_cutoff(0.5, 2.0, Cutoff::Arctan).is_err());
        let a = TruncatedShift::new(1.0, 3.0).unwrap();
        assert_eq!(a.phi(-2.0), -a.phi(2.0));
        assert!(a.phi(1e9) < 3.0);
        let b = TruncatedShift::new(2.0, 3.0).unwrap();
        assert_eq!(b.phi(10.0), 3.0);
    }

    #[test]
    fn function_norms() {
        let sh = TruncatedShift::new(3.0, 4.0).unwrap();
        let r = op_function_norm(&sh, &SpectralFunction::Identity, 1e-10, &o()).unwrap();
        assert!((r.norm - 5.0).abs() < 1e-10);
        let sh = TruncatedShift::new(2.0, 10.0).unwrap();
        let r = op_function_norm(&sh, &SpectralFunction::Zeta, 1e-8, &o()).unwrap();
        let z2 = zeta_core::zeta(Complex64::new(2.0, 0.0), &o()).unwrap().re;
        assert!((r.norm - z2).abs() < 1e-8);
        assert!(r.tau_star.abs() < 1e-3);
        let sh = TruncatedShift::new(1.0, 1.0).unwrap();
        assert_eq!(
            op_function_norm(&sh, &SpectralFunction::Zeta, 1e-8, &o()),
            Err(Error::UnboundedOnSegment { c: 1.0 })
        );
        let point = TruncatedShift::new(0.5, 0.0).unwrap();
        let r = op_function_norm(
            &point,
            &SpectralFunction::Polynomial(vec![Complex64::new(1.0, 0.0); 3]),
            1e-8,
            &o(),
        )
        .unwrap();
        assert!((r.norm - 1.75).abs() < 1e-15);
    }

    #[test]
    fn adjoint_norms() {
        let sh = TruncatedShift::new(0.75, 3.0).unwrap();
        let (a, b) = adjoint_norm_check(&sh, &SpectralFunction::Zeta, 1e-9, &o()).unwrap();
        assert!((a.norm - b.norm).abs() < 1e-9);
        let sh = TruncatedShift::new(3.0, 4.0).unwrap();
        let (a, b) = adjoint_norm_check(&sh, &SpectralFunction::Identity, 1e-10, &o()).unwrap();
        assert!((a.norm - 5.0).abs() < 1e-10 && (b.norm - 5.0).abs() < 1e-10);
    }

    #[test]
    fn eigen_residuals() {
        for (sigma, tau) in [(10.0, 0.0), (10.0, 5.0), (20.0, 0.0)] {
            let g = Grid::new(-6.0 * sigma, 6.0 * sigma, 1e-3).unwrap();
            let (_, r) = approx_eigenfunction(0.75, tau, sigma, g).unwrap();
            let want = 1.0 / (sigma * 2f64.sqrt());
            assert!((r / want - 1.0).abs() < 0.02, "{sigma} {tau} {r}");
        }
        assert!(matches!(
            approx_eigenfunction(0.5, 0.0, 10.0, Grid::default()),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn range_samples() {
        let z2 = zeta_core::zeta(Complex64::new(2.0, 0.0), &o()).unwrap().re;
        let v = zeta_range_sample(2.0, 100.0, 0.1, &o()).unwrap();
        assert_eq!(v.len(), 1000);
        assert!(v.iter().all(|z| (z - 1.0).norm() <= z2 - 1.0));
        let direct = zeta_core::zeta(Complex64::new(2.0, 0.1 * 437.0), &o()).unwrap();
        assert!((v[436] - direct).norm() < 1e-12);
        assert!(zeta_range_sample(0.75, 0.05, 0.1, &o()).unwrap().is_empty());
        let targets = [Complex64::new(0.0, 0.0), Complex64::new(2.0, 2.0)];
        let a = nearest_distances(
            &zeta_range_sample(0.75, 50.0, 0.05, &o()).unwrap(),
            &targets,
        );
        let b = nearest_distances(
            &zeta_range_sample(0.75, 200.0, 0.05, &o()).unwrap(),
            &targets,
        );
        assert!(a.iter().zip(&b).all(|(x, y)| y <= x));
    }
}
