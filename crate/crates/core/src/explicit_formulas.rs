//! Complex dimensions of closed-form strings and the truncated residue
//! expansions of their densities and counting functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contour;
use crate::error::{Error, Result};
use crate::fractal_strings::{self as fs, ClosedForm, GeneralizedString};
use crate::zeta_core::{self, EvalOptions};

const RESIDUE_REL_TOL: f64 = 1e-8;
const CONTOUR_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDimension {
    pub omega: Complex64,
    pub residue: Complex64,
    /// position in the vertical family, 0 for the real pole
    pub k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimensionWindow {
    /// `|k| ≤ k_max` in a periodic family
    Index { k_max: u32 },
    Rect {
        re_lo: f64,
        re_hi: f64,
        im_lo: f64,
        im_hi: f64,
    },
}

impl DimensionWindow {
    fn contains(&self, k: i64, w: Complex64) -> bool {
        match *self {
            DimensionWindow::Index { k_max } => k.unsigned_abs() <= k_max as u64,
            DimensionWindow::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => w.re >= re_lo && w.re <= re_hi && w.im >= im_lo && w.im <= im_hi,
        }
    }

    /// Index range of a family `base + i k·step` meeting the window.
    fn k_range(&self, step: f64) -> (i64, i64) {
        match *self {
            DimensionWindow::Index { k_max } => (-(k_max as i64), k_max as i64),
            DimensionWindow::Rect { im_lo, im_hi, .. } => {
                ((im_lo / step).ceil() as i64, (im_hi / step).floor() as i64)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let DimensionWindow::Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } = *self
        {
            let ok = [re_lo, re_hi, im_lo, im_hi].iter().all(|v| v.is_finite())
                && re_lo <= re_hi
                && im_lo <= im_hi;
            if !ok {
                return Err(Error::InvalidInput(
                    "empty or non-finite dimension rectangle".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Vertical family `base + i k step` with a common residue; `step = 0` means
/// a single pole.
fn pole_family(cf: &ClosedForm) -> Result<(f64, f64, f64)> {
    match *cf {
        ClosedForm::SelfSimilar { r, m } => {
            let l = (1.0 / r).ln();
            Ok((m.ln() / l, 2.0 * PI / l, 1.0 / (m * l)))
        }
        ClosedForm::PrimeHarmonic { p } => {
            let l = (p as f64).ln();
            Ok((0.0, 2.0 * PI / l, 1.0 / l))
        }
        ClosedForm::Harmonic => Ok((1.0, 0.0, 1.0)),
        ClosedForm::Unit => Ok((f64::NAN, 0.0, 0.0)),
        ClosedForm::PrimeString | ClosedForm::MoebiusString => Err(Error::UnsupportedKind(
            format!("poles of {} are not computed", cf.name()),
        )),
    }
}

/// Poles of `ζ_η` in the window, ordered by ascending `|k|` with `-k` before
/// `k`; every residue is cross-checked by contour quadrature.
pub fn complex_dimensions(
    cf: &ClosedForm,
    window: DimensionWindow,
    opts: &EvalOptions,
) -> Result<Vec<ComplexDimension>> {
    cf.validate()?;
    window.validate()?;
    let (base, step, res) = pole_family(cf)?;
    if base.is_nan() {
        return Ok(Vec::new());
    }
    let (k_lo, k_hi) = if step == 0.0 {
        (0, 0)
    } else {
        window.k_range(step)
    };
    let mut ks: Vec<i64> = (k_lo..=k_hi).collect();
    ks.sort_by_key(|&k| (k.unsigned_abs(), k));
    let mut out = Vec::with_capacity(ks.len());
    for k in ks {
        let omega = Complex64::new(base, k as f64 * step);
        if !window.contains(k, omega) {
            continue;
        }
        let residue = Complex64::new(res, 0.0);
        verify_residue(cf, omega, residue, step, opts)?;
        out.push(ComplexDimension { omega, residue, k });
    }
    Ok(out)
}

fn verify_residue(
    cf: &ClosedForm,
    omega: Complex64,
    residue: Complex64,
    spacing: f64,
    opts: &EvalOptions,
) -> Result<()> {
    let radius = if spacing > 0.0 {
        (0.5 * spacing).min(1e-2)
    } else {
        1e-2
    };
    let q = contour::residue(|s| cf.eval(s, opts), omega, radius, CONTOUR_POINTS)?;
    if !((q - residue).norm() <= RESIDUE_REL_TOL * residue.norm()) {
        return Err(Error::ResidueCheckFailed {
            symbolic: residue.norm(),
            quadrature: q.norm(),
        });
    }
    Ok(())
}

/// Sum of `term(dim)` over conjugate pairs in ascending `|k|`.
fn pair_sum(
    dims: &[ComplexDimension],
    mut term: impl FnMut(&ComplexDimension) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut i = 0;
    while i < dims.len() {
        let mut pair = term(&dims[i])?;
        if i + 1 < dims.len() && dims[i + 1].k == -dims[i].k && dims[i].k != 0 {
            pair += term(&dims[i + 1])?;
            i += 1;
        }
        total += pair;
        i += 1;
    }
    Ok(total)
}

fn x_pow(x: f64, w: Complex64) -> Complex64 {
    (w * x.ln()).exp()
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("x = {x} must be positive")));
    }
    Ok(())
}

fn zeta_at(s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    zeta_core::zeta(s, opts).map_err(|e| match e {
        Error::PoleAtOne => Error::AssumptionViolated("complex dimension at s = 1".into()),
        other => other,
    })
}

/// `Re Σ res(ζ_η; ω) x^{ω-1}` over the window.
pub fn density_geometric_states(
    cf: &ClosedForm,
    x: f64,
    window: DimensionWindow,
    opts: &EvalOptions,
) -> Result<f64> {
    check_x(x)?;
    let dims = complex_dimensions(cf, window, opts)?;
    Ok(pair_sum(&dims, |d| Ok(d.residue * x_pow(x, d.omega - 1.0)))?.re)
}

/// `ζ_η(1) + Re Σ res(ζ_η; ω) ζ(ω) x^{ω-1}` over the window.
pub fn density_spectral_states(
    cf: &ClosedForm,
    x: f64,
    window: DimensionWindow,
    opts: &EvalOptions,
) -> Result<f64> {
    check_x(x)?;
    let dims = complex_dimensions(cf, window, opts)?;
    let constant = cf.eval(Complex64::new(1.0, 0.0), opts)?;
    let osc = pair_sum(&dims, |d| {
        Ok(d.residue * zeta_at(d.omega, opts)? * x_pow(x, d.omega - 1.0))
    })?;
    Ok((constant + osc).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Geometric,
    Spectral,
}

/// Level-1 expansion of `N_η(x)` or `N_ν(x)`: the window terms
/// `res · x^ω / ω` (times `ζ(ω)` at the spectral level) plus the residues of
/// `ζ_η(s) x^s / s` at `s = 0` and, for spectral counting, of `ζ(s)` at 1.
pub fn counting_from_dimensions(
    cf: &ClosedForm,
    x: f64,
    window: DimensionWindow,
    level: Level,
    opts: &EvalOptions,
) -> Result<f64> {
    check_x(x)?;
    let dims = complex_dimensions(cf, window, opts)?;
    if dims.iter().any(|d| d.omega.norm() < 1e-12) {
        return Err(Error::AssumptionViolated(
            "complex dimension at s = 0".into(),
        ));
    }
    let zero = Complex64::new(0.0, 0.0);
    let at_zero = cf.eval(zero, opts)?;
    let total = match level {
        Level::Geometric => {
            at_zero + pair_sum(&dims, |d| Ok(d.residue * x_pow(x, d.omega) / d.omega))?
        }
        Level::Spectral => {
            let at_one = cf.eval(Complex64::new(1.0, 0.0), opts)?;
            let zeta0 = Complex64::new(-0.5, 0.0);
            at_one * x
                + at_zero * zeta0
                + pair_sum(&dims, |d| {
                    Ok(d.residue * zeta_at(d.omega, opts)? * x_pow(x, d.omega) / d.omega)
                })?
        }
    };
    Ok(total.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub x: f64,
    pub direct: f64,
    pub explicit: f64,
    pub error: f64,
    /// x coincides with an atom, so `direct` is a half-jump value
    pub at_atom: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub max_error: f64,
    pub mean_error: f64,
    pub half_jump_mode: bool,
}

/// Direct counting against the truncated explicit formula at each `x`.
pub fn compare_explicit_vs_direct(
    eta: &GeneralizedString,
    xs: &[f64],
    window: DimensionWindow,
    level: Level,
    opts: &EvalOptions,
) -> Result<CompareReport> {
    let cf = eta
        .closed_form()
        .ok_or_else(|| Error::UnsupportedKind("string has no closed form".into()))?;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let direct = match level {
            Level::Geometric => fs::counting_function(eta, x)?,
            Level::Spectral => fs::spectral_counting(eta, x)?,
        }
        .re;
        let explicit = counting_from_dimensions(&cf, x, window, level, opts)?;
        let atoms = match level {
            Level::Geometric => eta.atoms().to_vec(),
            Level::Spectral => fs::spectral_measure_atoms(eta, x)?.atoms().to_vec(),
        };
        let at_atom = atoms.iter().any(|a| (a.x - x).abs() <= fs::MERGE_TOL * x);
        rows.push(CompareRow {
            x,
            direct,
            explicit,
            error: (direct - explicit).abs(),
            at_atom,
        });
    }
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    let mean_error = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.error).sum::<f64>() / rows.len() as f64
    };
    let half_jump_mode = rows.iter().any(|r| r.at_atom);
    Ok(CompareReport {
        rows,
        max_error,
        mean_error,
        half_jump_mode,
    })
}

/// Centres (in log scale) of `n` equal logarithmic cells covering `[lo, hi]`.
pub fn log_midpoints(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (a + (b - a) * (i as f64 + 0.5) / n as f64).exp())
        .collect())
}

/// Geometric means of consecutive atom scales inside `[lo, hi]`.
pub fn jump_midpoints(eta: &GeneralizedString, lo: f64, hi: f64) -> Vec<f64> {
    eta.atoms()
        .windows(2)
        .map(|w| (w[0].x * w[1].x).sqrt())
        .filter(|&x| x >= lo && x <= hi)
        .collect()
}
