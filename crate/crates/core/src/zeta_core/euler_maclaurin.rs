//! Euler–Maclaurin summation for Hurwitz-type Dirichlet series.
//!
//! Every series evaluated here is a finite linear combination
//! `q^{-s} Σ_c w_c ζ(s, α_c)` (Riemann zeta, Hurwitz zeta, Dirichlet
//! L-functions) or a finite coefficient sum `Σ a_n n^{-s}`. The cut `N` is
//! chosen per argument so that the first omitted Bernoulli term, scaled by
//! the standard `|s + 2K + 1| / (σ + 2K + 1)` factor (never below 2), is
//! below the requested tolerance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeta_core::EvalOptions;

/// `B_{2k} / (2k)!` for `k = 1..=40`.
const BERNOULLI_OVER_FACTORIAL: [f64; 40] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_767e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.685_994_940_665_31e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_63e-32,
    5.990_671_762_482_134e-34,
    -1.517_454_884_468_290_3e-35,
    3.843_758_125_454_188e-37,
    -9.736_353_072_646_691e-39,
    2.466_247_044_200_681e-40,
    -6.247_076_741_820_744e-42,
    1.582_403_024_464_491_4e-43,
    -4.008_273_685_948_936e-45,
    1.015_307_585_556_955_6e-46,
    -2.571_804_158_241_871_7e-48,
    6.514_456_035_233_815e-50,
    -1.650_130_990_689_652_5e-51,
    4.179_830_628_539_476e-53,
    -1.058_763_466_770_290_9e-54,
    2.681_879_191_260_770_7e-56,
    -6.793_279_351_107_421e-58,
    1.720_757_761_668_140_5e-59,
    -4.358_730_329_348_894e-61,
    1.104_079_290_368_466_7e-62,
    -2.796_665_513_378_134_5e-64,
];

const ROUNDING: f64 = 4.0 * f64::EPSILON;

/// Asymptotic tail `a^{-s}/2 + Σ_k B_2k/(2k)! s(s+1)…(s+2k-2) a^{-s-2k+1}`
/// at `a = exp(ln_a)`, without the pole term. `None` when the terms stop
/// shrinking before reaching `tol`, meaning the cut must grow.
fn em_tail(s: Complex64, ln_a: f64, tol: f64) -> Option<(Complex64, f64)> {
    let a_pow = (-s * ln_a).exp();
    let mut value = 0.5 * a_pow;
    let inv_a2 = (-2.0 * ln_a).exp();
    let mut power = a_pow * (-ln_a).exp();
    let mut poch = s;
    let mut prev = f64::INFINITY;
    for (idx, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let k = (idx + 1) as f64;
        let term = b * poch * power;
        let size = term.norm();
        let denom = s.re + 2.0 * k - 1.0;
        if denom > 0.0 {
            let factor = ((s + (2.0 * k - 1.0)).norm() / denom).max(2.0);
            if size * factor <= tol {
                return Some((value, size * factor));
            }
        }
        if size > prev {
            return None;
        }
        prev = size;
        value += term;
        poch *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        power *= inv_a2;
    }
    None
}

/// `(e^z - 1) / z`, accurate near zero.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        1.0 + z / 2.0 + z * z / 6.0
    } else {
        // e^{x+iy} - 1 = expm1(x) cos y - 2 sin²(y/2) + i e^x sin y
        let (sin, cos) = z.im.sin_cos();
        let half = (z.im / 2.0).sin();
        let num = Complex64::new(z.re.exp_m1() * cos - 2.0 * half * half, z.re.exp() * sin);
        num / z
    }
}

fn initial_cut(s_abs: f64) -> usize {
    10 + (s_abs / 4.0).ceil() as usize
}

fn next_cut(n: usize) -> usize {
    n + n / 2 + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Component {
    weight: Complex64,
    alpha: f64,
}

/// A Dirichlet series with a known Euler–Maclaurin evaluation scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    kind: SeriesKind,
}

#[derive(Debug, Clone, PartialEq)]
enum SeriesKind {
    /// `q^{-s} Σ_c w_c ζ(s, α_c)`
    Hurwitz {
        components: Vec<Component>,
        ln_scale: f64,
    },
    /// `Σ_{n=1}^{len} a_n n^{-s}`
    Finite { coefficients: Vec<Complex64> },
}

impl Series {
    pub fn riemann() -> Self {
        Self::hurwitz(1.0)
    }

    /// `ζ(s, α)`; `alpha` is assumed already validated.
    pub fn hurwitz(alpha: f64) -> Self {
        Series {
            kind: SeriesKind::Hurwitz {
                components: vec![Component {
                    weight: Complex64::new(1.0, 0.0),
                    alpha,
                }],
                ln_scale: 0.0,
            },
        }
    }

    /// `q^{-s} Σ_{a=1}^{q} χ(a) ζ(s, a/q)` from a character table.
    pub fn dirichlet(values: &[Complex64]) -> Self {
        let q = values.len();
        let components = (1..=q)
            .filter_map(|a| {
                let w = values[a % q];
                (w != Complex64::new(0.0, 0.0)).then(|| Component {
                    weight: w,
                    alpha: a as f64 / q as f64,
                })
            })
            .collect();
        Series {
            kind: SeriesKind::Hurwitz {
                components,
                ln_scale: (q as f64).ln(),
            },
        }
    }

    pub fn finite(coefficients: Vec<Complex64>) -> Self {
        Series {
            kind: SeriesKind::Finite { coefficients },
        }
    }

    /// True when the series is entire (no pole at s = 1).
    pub fn pole_cancels(&self) -> bool {
        match &self.kind {
            SeriesKind::Hurwitz { components, .. } => {
                let total: Complex64 = components.iter().map(|c| c.weight).sum();
                total.norm() < 1e-12
            }
            SeriesKind::Finite { .. } => true,
        }
    }

    /// Value and error bound at one point.
    pub fn eval(&self, s: Complex64, opts: &EvalOptions) -> Result<(Complex64, f64)> {
        match &self.kind {
            SeriesKind::Finite { coefficients } => Ok((finite_sum(coefficients, s), 0.0)),
            SeriesKind::Hurwitz {
                components,
                ln_scale,
            } => {
                let cancels = self.pole_cancels();
                if !cancels && s == Complex64::new(1.0, 0.0) {
                    return Err(Error::PoleAtOne);
                }
                let scale = (-s * *ln_scale).exp();
                let tail_tol = tail_tolerance(components, scale, opts.abs_tol);
                let mut n = initial_cut(s.norm());
                let tails = loop {
                    if n > opts.max_terms {
                        return Err(Error::ToleranceUnreachable {
                            tol: opts.abs_tol,
                            max_terms: opts.max_terms,
                        });
                    }
                    if let Some(t) = tails_at(components, s, n, tail_tol) {
                        break t;
                    }
                    n = next_cut(n);
                };
                let mut main = Complex64::new(0.0, 0.0);
                let mut size = 0.0;
                for c in components {
                    let mut partial = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        let term = (-s * (k as f64 + c.alpha).ln()).exp();
                        size += term.norm() * c.weight.norm();
                        partial += term;
                    }
                    main += c.weight * partial;
                }
                let (value, bound) =
                    assemble(components, s, n, scale, cancels, main, size, &tails)?;
                finite_or_err(value, s).map(|v| (v, bound))
            }
        }
    }
}

fn finite_sum(coefficients: &[Complex64], s: Complex64) -> Complex64 {
    coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| a * (-s * ((i + 1) as f64).ln()).exp())
        .sum()
}

fn tail_tolerance(components: &[Component], scale: Complex64, tol: f64) -> f64 {
    let weight: f64 = components.iter().map(|c| c.weight.norm()).sum();
    tol / (weight * scale.norm()).max(1e-300)
}

fn tails_at(
    components: &[Component],
    s: Complex64,
    n: usize,
    tol: f64,
) -> Option<Vec<(Complex64, f64)>> {
    components
        .iter()
        .map(|c| em_tail(s, (n as f64 + c.alpha).ln(), tol))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    components: &[Component],
    s: Complex64,
    n: usize,
    scale: Complex64,
    cancels: bool,
    main: Complex64,
    main_size: f64,
    tails: &[(Complex64, f64)],
) -> Result<(Complex64, f64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for (c, (t, b)) in components.iter().zip(tails) {
        tail += c.weight * t;
        bound += c.weight.norm() * b;
    }
    let pole = if cancels {
        // Σ w_c = 0 lets the 1/(s-1) terms combine into an entire expression.
        -components
            .iter()
            .map(|c| {
                let ln_a = (n as f64 + c.alpha).ln();
                c.weight * ln_a * exprel((one - s) * ln_a)
            })
            .sum::<Complex64>()
    } else {
        if s == one {
            return Err(Error::PoleAtOne);
        }
        components
            .iter()
            .map(|c| {
                let ln_a = (n as f64 + c.alpha).ln();
                c.weight * ((one - s) * ln_a).exp()
            })
            .sum::<Complex64>()
            / (s - one)
    };
    let value = scale * (main + tail + pole);
    let rounding = ROUNDING * scale.norm() * (main_size + pole.norm() + tail.norm());
    Ok((value, scale.norm() * bound + rounding))
}

fn finite_or_err(v: Complex64, s: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("series at {s}")))
    }
}

/// A vertical run of equally spaced evaluation points `sigma + i(t_lo + j·dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridColumn {
    pub sigma: f64,
    pub t_lo: f64,
    pub dt: f64,
    pub count: usize,
}

impl GridColumn {
    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::new(self.sigma, self.t_lo + j as f64 * self.dt)
    }
}

/// Evaluates a [`Series`] at `P_j + iτ` for a fixed point set `P_j` and many
/// shifts `τ`.
///
/// The factors `w (n+α)^{-P_j}` are tabulated once; each shift then costs one
/// `sin_cos` per summand plus one complex multiply-add per point. Results
/// depend only on `τ`, never on call order or thread.
#[derive(Debug, Clone)]
pub struct ShiftedEvaluator {
    series: Series,
    points: Vec<Complex64>,
    opts: EvalOptions,
    cap: usize,
    // per component: ln(n+α) + ln q, and weighted powers [n * points + j]
    logs: Vec<Vec<f64>>,
    table: Vec<Vec<Complex64>>,
}

impl ShiftedEvaluator {
    /// `tau_max` sizes the tables; shifts beyond it still work, just slower.
    pub fn new(series: Series, points: Vec<Complex64>, tau_max: f64, opts: EvalOptions) -> Self {
        let reach = points
            .iter()
            .map(|p| Complex64::new(p.re, p.im.abs() + tau_max.abs()).norm())
            .fold(0.0, f64::max);
        let (logs, table, cap) = match &series.kind {
            SeriesKind::Hurwitz {
                components,
                ln_scale,
            } => {
                // the first cut that is likely to suffice at the far end
                let mut cap = initial_cut(reach);
                for _ in 0..3 {
                    cap = next_cut(cap);
                }
                let cap = cap.min(opts.max_terms);
                let mut logs = Vec::with_capacity(components.len());
                let mut table = Vec::with_capacity(components.len());
                for c in components {
                    let l: Vec<f64> = (0..cap)
                        .map(|k| ln_scale + (k as f64 + c.alpha).ln())
                        .collect();
                    let mut t = Vec::with_capacity(cap * points.len());
                    for &ln in &l {
                        for p in &points {
                            t.push(c.weight * (-p * ln).exp());
                        }
                    }
                    logs.push(l);
                    table.push(t);
                }
                (logs, table, cap)
            }
            SeriesKind::Finite { coefficients } => {
                let l: Vec<f64> = (1..=coefficients.len()).map(|k| (k as f64).ln()).collect();
                let mut t = Vec::with_capacity(l.len() * points.len());
                for (a, &ln) in coefficients.iter().zip(&l) {
                    for p in &points {
                        t.push(a * (-p * ln).exp());
                    }
                }
                let cap = l.len();
                (vec![l], vec![t], cap)
            }
        };
        ShiftedEvaluator {
            series,
            points,
            opts,
            cap,
            logs,
            table,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    /// Values at `P_j + iτ`, in point order.
    pub fn eval(&self, tau: f64) -> Result<Vec<Complex64>> {
        let np = self.points.len();
        let shift = Complex64::new(0.0, tau);
        match &self.series.kind {
            SeriesKind::Finite { .. } => {
                let mut acc = vec![Complex64::new(0.0, 0.0); np];
                accumulate(
                    &mut acc,
                    &self.logs[0],
                    &self.table[0],
                    tau,
                    self.logs[0].len(),
                );
                Ok(acc)
            }
            SeriesKind::Hurwitz {
                components,
                ln_scale,
            } => {
                let cancels = self.series.pole_cancels();
                let reach = self
                    .points
                    .iter()
                    .map(|p| (p + shift).norm())
                    .fold(0.0, f64::max);
                // common cut: every point's tail must converge at it
                let mut n = initial_cut(reach);
                let per_point: Vec<(Complex64, Vec<(Complex64, f64)>)> = loop {
                    if n > self.opts.max_terms {
                        return Err(Error::ToleranceUnreachable {
                            tol: self.opts.abs_tol,
                            max_terms: self.opts.max_terms,
                        });
                    }
                    let attempt: Option<Vec<_>> = self
                        .points
                        .iter()
                        .map(|p| {
                            let s = p + shift;
                            let scale = (-s * *ln_scale).exp();
                            let tol = tail_tolerance(components, scale, self.opts.abs_tol);
                            tails_at(components, s, n, tol).map(|t| (scale, t))
                        })
                        .collect();
                    if let Some(a) = attempt {
                        break a;
                    }
                    n = next_cut(n);
                };
                let mut out = Vec::with_capacity(np);
                let mut mains = vec![Complex64::new(0.0, 0.0); np];
                let mut sizes = vec![0.0; np];
                for (ci, c) in components.iter().enumerate() {
                    let upto = n.min(self.cap);
                    accumulate(&mut mains, &self.logs[ci], &self.table[ci], tau, upto);
                    // rows past the table, with the same arithmetic as the table so
                    // results do not depend on its size
                    for k in upto..n {
                        let ln = ln_scale + (k as f64 + c.alpha).ln();
                        let (sin, cos) = (-tau * ln).sin_cos();
                        let phase = Complex64::new(cos, sin);
                        for (j, p) in self.points.iter().enumerate() {
                            mains[j] += c.weight * (-p * ln).exp() * phase;
                        }
                    }
                    for (j, p) in self.points.iter().enumerate() {
                        // size estimate for rounding: Σ |(n+α)^{-σ}| ≈ integral
                        sizes[j] += c.weight.norm() * power_sum_size(p.re, c.alpha, n);
                    }
                }
                for (j, p) in self.points.iter().enumerate() {
                    let s = p + shift;
                    let (scale, tails) = &per_point[j];
                    // main sum was tabulated with the q^{-s} factor folded in
                    let main = mains[j] / scale;
                    let (v, _) =
                        assemble(components, s, n, *scale, cancels, main, sizes[j], tails)?;
                    out.push(finite_or_err(v, s)?);
                }
                Ok(out)
            }
        }
    }
}

fn accumulate(acc: &mut [Complex64], logs: &[f64], table: &[Complex64], tau: f64, upto: usize) {
    let np = acc.len();
    for (k, &ln) in logs.iter().enumerate().take(upto) {
        let (sin, cos) = (-tau * ln).sin_cos();
        let phase = Complex64::new(cos, sin);
        let row = &table[k * np..(k + 1) * np];
        for (a, &t) in acc.iter_mut().zip(row) {
            *a += t * phase;
        }
    }
}

fn power_sum_size(sigma: f64, alpha: f64, n: usize) -> f64 {
    let first = alpha.powf(-sigma);
    let far = (n as f64 + alpha).max(1.0);
    let integral = if (sigma - 1.0).abs() < 1e-9 {
        far.ln()
    } else {
        (far.powf(1.0 - sigma) - 1.0) / (1.0 - sigma)
    };
    first + integral.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn exprel_is_continuous_across_branch() {
        // (e^x - 1)/x at x = 1e-3
        let z = Complex64::new(1e-3, 0.0);
        assert!((exprel(z).re - 1.000_500_166_708_341_7).abs() < 1e-15);
        let a = Complex64::new(1e-5 - 1e-12, 0.0);
        let b = Complex64::new(1e-5 + 1e-12, 0.0);
        for x in [a, b] {
            let want = 1.0 + x.re / 2.0 + x.re * x.re / 6.0;
            assert!((exprel(x).re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn batch_independent_of_table_size() {
        let pts = vec![Complex64::new(0.75, 0.0), Complex64::new(0.8, 0.05)];
        let small = ShiftedEvaluator::new(Series::riemann(), pts.clone(), 1.0, opts());
        let large = ShiftedEvaluator::new(Series::riemann(), pts, 5000.0, opts());
        for tau in [0.0, 17.5, 999.99, 4000.0] {
            assert_eq!(small.eval(tau).unwrap(), large.eval(tau).unwrap());
        }
    }

    #[test]
    fn batch_matches_scalar() {
        let cols = [
            GridColumn {
                sigma: 0.6,
                t_lo: -1.0,
                dt: 0.5,
                count: 5,
            },
            GridColumn {
                sigma: 0.8,
                t_lo: -0.5,
                dt: 0.25,
                count: 5,
            },
        ];
        let points: Vec<Complex64> = cols
            .iter()
            .flat_map(|c| (0..c.count).map(move |j| c.point(j)))
            .collect();
        for series in [
            Series::riemann(),
            Series::hurwitz(0.3),
            Series::dirichlet(&[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ]),
        ] {
            let ev = ShiftedEvaluator::new(series.clone(), points.clone(), 200.0, opts());
            for &tau in &[0.0, 3.7, 150.0, 400.0] {
                let batch = ev.eval(tau).unwrap();
                for (p, b) in points.iter().zip(&batch) {
                    let (v, _) = series.eval(p + Complex64::new(0.0, tau), &opts()).unwrap();
                    assert!((v - b).norm() < 1e-11, "tau {tau} at {p}: {v} vs {b}");
                }
            }
        }
    }

    #[test]
    fn finite_series_is_plain_sum() {
        let s = Series::finite(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let (v, b) = s.eval(Complex64::new(2.0, 0.0), &opts()).unwrap();
        assert!((v.re - 0.75).abs() < 1e-15);
        assert_eq!(b, 0.0);
        let ev = ShiftedEvaluator::new(s, vec![Complex64::new(2.0, 0.0)], 1.0, opts());
        assert!((ev.eval(0.0).unwrap()[0].re - 0.75).abs() < 1e-15);
    }
}
