//! Generalized fractal strings: atomic measures on `(0, ∞)` with complex
//! multiplicities, their counting functions, geometric and spectral zeta
//! functions, spectral measures and multiplicative convolutions.
//!
//! An atom `(x, w)` is a point mass `w δ_x` at the reciprocal scale `x = 1/l`.
//! Strings are always finite truncations of the underlying measure; each one
//! records the abscissa `complete_to` up to which its atom list is exact.

mod definition;

use num_complex::Complex64;

pub use definition::StringDefinition;

use crate::error::{Error, Result};
use crate::zeta_core::{self, arith, EvalOptions};

/// Relative tolerance under which two reciprocal scales are the same atom.
pub const MERGE_TOL: f64 = 1e-12;

const MIN_ATOMS_FOR_ESTIMATE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub w: Complex64,
}

impl Atom {
    pub fn new(x: f64, w: f64) -> Self {
        Atom {
            x,
            w: Complex64::new(w, 0.0),
        }
    }
}

fn same_scale(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * a.abs().max(b.abs())
}

/// Closed-form families whose geometric zeta function is known exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// atoms `r^{-j}` with multiplicity `m^{j-1}`, `j ≥ 1`;
    /// `ζ_η(s) = r^s / (1 - m r^s)`
    SelfSimilar { r: f64, m: f64 },
    /// atoms at every positive integer; `ζ_η = ζ`
    Harmonic,
    /// atoms `p^k`, `k ≥ 1`; `ζ_η(s) = p^{-s} / (1 - p^{-s})`
    PrimeHarmonic { p: u64 },
    /// atoms `p^m` with multiplicity `log p`; `ζ_η = -ζ'/ζ`
    PrimeString,
    /// atoms `j` with multiplicity `μ(j)`; `ζ_η = 1/ζ`
    MoebiusString,
    /// the unit mass at 1; `ζ_η ≡ 1`
    Unit,
}

impl ClosedForm {
    /// The Cantor string: lengths `3^{-j}` with multiplicities `2^{j-1}`.
    pub fn cantor() -> Self {
        ClosedForm::SelfSimilar {
            r: 1.0 / 3.0,
            m: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClosedForm::SelfSimilar { r, m } => {
                if !(r > 0.0 && r < 1.0) || !(m > 0.0 && m.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "self-similar string needs 0 < r < 1 and m > 0, got r = {r}, m = {m}"
                    )));
                }
            }
            ClosedForm::PrimeHarmonic { p } => {
                if !arith::is_prime(p) {
                    return Err(Error::InvalidInput(format!("{p} is not prime")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::SelfSimilar { .. } => "self_similar",
            ClosedForm::Harmonic => "harmonic",
            ClosedForm::PrimeHarmonic { .. } => "prime_harmonic",
            ClosedForm::PrimeString => "prime_string",
            ClosedForm::MoebiusString => "moebius_string",
            ClosedForm::Unit => "unit",
        }
    }

    /// Smallest reciprocal scale carrying mass.
    pub fn first_scale(&self) -> f64 {
        match *self {
            ClosedForm::SelfSimilar { r, .. } => 1.0 / r,
            ClosedForm::PrimeHarmonic { p } => p as f64,
            ClosedForm::PrimeString => 2.0,
            ClosedForm::Harmonic | ClosedForm::MoebiusString | ClosedForm::Unit => 1.0,
        }
    }

    /// All atoms with `x ≤ limit`, ascending, zero weights dropped.
    pub fn atoms_up_to(&self, limit: f64) -> Vec<Atom> {
        match *self {
            ClosedForm::SelfSimilar { r, m } => {
                let ratio = 1.0 / r;
                let mut out = Vec::new();
                let (mut x, mut w) = (ratio, 1.0);
                while x <= limit * (1.0 + MERGE_TOL) {
                    out.push(Atom::new(x, w));
                    x *= ratio;
                    w *= m;
                }
                out
            }
            ClosedForm::Harmonic => integer_atoms(limit, |_| 1.0),
            ClosedForm::MoebiusString => {
                let n = limit.floor().max(0.0) as usize;
                let mu = arith::moebius_table(n);
                integer_atoms(limit, |j| mu[j] as f64)
            }
            ClosedForm::PrimeHarmonic { p } => {
                let mut out = Vec::new();
                let mut x = p as f64;
                while x <= limit {
                    out.push(Atom::new(x, 1.0));
                    x *= p as f64;
                }
                out
            }
            ClosedForm::PrimeString => {
                let mut out = Vec::new();
                for p in arith::primes_up_to(limit.floor().max(0.0) as u64) {
                    let lp = (p as f64).ln();
                    let mut x = p as f64;
                    while x <= limit {
                        out.push(Atom::new(x, lp));
                        x *= p as f64;
                    }
                }
                out.sort_by(|a, b| a.x.total_cmp(&b.x));
                out
            }
            ClosedForm::Unit => {
                if limit >= 1.0 {
                    vec![Atom::new(1.0, 1.0)]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Exact meromorphic `ζ_η(s)`.
    pub fn eval(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let pole = || Error::PoleHit { re: s.re, im: s.im };
        match *self {
            ClosedForm::SelfSimilar { r, m } => {
                let rs = (s * r.ln()).exp();
                let denom = one - m * rs;
                if denom.norm() < 1e-12 {
                    return Err(pole());
                }
                Ok(rs / denom)
            }
            ClosedForm::Harmonic => zeta_core::zeta(s, opts).map_err(|e| match e {
                Error::PoleAtOne => pole(),
                other => other,
            }),
            ClosedForm::PrimeHarmonic { p } => {
                let ps = (-s * (p as f64).ln()).exp();
                let denom = one - ps;
                if denom.norm() < 1e-12 {
                    return Err(pole());
                }
                Ok(ps / denom)
            }
            ClosedForm::PrimeString => {
                if s == one {
                    return Err(pole());
                }
                let z = zeta_core::zeta(s, opts)?;
                if z.norm() < 1e-14 {
                    return Err(pole());
                }
                Ok(-zeta_core::zeta_derivative(s, opts)? / z)
            }
            ClosedForm::MoebiusString => {
                if s == one {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let z = zeta_core::zeta(s, opts)?;
                if z.norm() < 1e-14 {
                    return Err(pole());
                }
                Ok(one / z)
            }
            ClosedForm::Unit => Ok(one),
        }
    }

    /// Abscissa of absolute convergence.
    pub fn dimension(&self) -> f64 {
        match *self {
            ClosedForm::SelfSimilar { r, m } => m.ln() / (1.0 / r).ln(),
            ClosedForm::Harmonic | ClosedForm::PrimeString | ClosedForm::MoebiusString => 1.0,
            ClosedForm::PrimeHarmonic { .. } => 0.0,
            ClosedForm::Unit => f64::NEG_INFINITY,
        }
    }

    pub fn has_positive_weights(&self) -> bool {
        !matches!(self, ClosedForm::MoebiusString)
    }

    /// Upper bound for `Σ_{x_j > limit} |w_j| x_j^{-σ}`; needs `σ > dimension`.
    pub fn abs_tail(&self, sigma: f64, limit: f64, opts: &EvalOptions) -> Result<f64> {
        if sigma <= self.dimension() {
            return Err(Error::AssumptionViolated(format!(
                "tail of {} diverges at sigma = {sigma}",
                self.name()
            )));
        }
        let head =
            |atoms: &[Atom]| -> f64 { atoms.iter().map(|a| a.w.norm() * a.x.powf(-sigma)).sum() };
        let real = |v: Complex64| v.re;
        let s = Complex64::new(sigma, 0.0);
        let tail = match *self {
            ClosedForm::SelfSimilar { r, m } => {
                let j = self.atoms_up_to(limit).len() as i32;
                m.powi(j) * r.powf(sigma * (j + 1) as f64) / (1.0 - m * r.powf(sigma))
            }
            ClosedForm::PrimeHarmonic { p } => {
                let k = self.atoms_up_to(limit).len() as i32;
                let q = (p as f64).powf(-sigma);
                q.powi(k + 1) / (1.0 - q)
            }
            ClosedForm::Unit => 0.0,
            ClosedForm::MoebiusString => {
                let z = real(zeta_core::zeta(s, opts)?);
                z - head(&ClosedForm::Harmonic.atoms_up_to(limit))
            }
            ClosedForm::Harmonic | ClosedForm::PrimeString => {
                let total = real(self.eval(s, opts)?);
                total - head(&self.atoms_up_to(limit))
            }
        };
        // subtraction above can leave rounding-level negatives
        Ok(tail.max(0.0) + 1e-15)
    }
}

fn integer_atoms(limit: f64, weight: impl Fn(usize) -> f64) -> Vec<Atom> {
    let n = limit.floor().max(0.0) as usize;
    (1..=n)
        .map(|j| Atom::new(j as f64, weight(j)))
        .filter(|a| a.w.norm() != 0.0)
        .collect()
}

/// Sorts, merges coincident scales and drops atoms of zero total weight.
fn merge_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if same_scale(last.x, a.x) => last.w += a.w,
            _ => out.push(a),
        }
    }
    out.retain(|a| a.w.norm() != 0.0);
    out
}

/// A truncated generalized fractal string.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedString {
    atoms: Vec<Atom>,
    closed_form: Option<ClosedForm>,
    x0: f64,
    complete_to: f64,
}

/// Which expression [`geometric_zeta`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaMode {
    /// Dirichlet polynomial over the first `n` atoms (all atoms when `None`)
    Atoms(Option<usize>),
    ClosedForm,
}

/// Builtin families; `Cantor` is the self-similar string with r = 1/3, m = 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StringKind {
    Cantor,
    Family(ClosedForm),
}

impl StringKind {
    pub fn closed_form(&self) -> ClosedForm {
        match self {
            StringKind::Cantor => ClosedForm::cantor(),
            StringKind::Family(cf) => *cf,
        }
    }
}

impl GeneralizedString {
    /// A finite measure given by its atoms; the list is taken as complete.
    pub fn from_atoms(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.x > 0.0 && a.x.is_finite()) || !(a.w.re.is_finite() && a.w.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "atom ({}, {}) needs a positive finite scale and finite weight",
                    a.x, a.w
                )));
            }
        }
        let atoms = merge_atoms(atoms);
        let x0 = atoms
            .first()
            .map(|a| a.x)
            .ok_or_else(|| Error::InvalidInput("string has no atoms".into()))?;
        Ok(GeneralizedString {
            atoms,
            closed_form: None,
            x0,
            complete_to: f64::INFINITY,
        })
    }

    /// The unit mass `δ_1`, identity for multiplicative convolution.
    pub fn unit() -> Self {
        GeneralizedString {
            atoms: vec![Atom::new(1.0, 1.0)],
            closed_form: Some(ClosedForm::Unit),
            x0: 1.0,
            complete_to: f64::INFINITY,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Atoms are exact up to and including this reciprocal scale.
    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn has_positive_weights(&self) -> bool {
        self.atoms.iter().all(|a| a.w.im == 0.0 && a.w.re > 0.0)
    }

    fn require_coverage(&self, needed: f64) -> Result<()> {
        if needed > self.complete_to * (1.0 + MERGE_TOL) {
            Err(Error::TruncationTooShort {
                needed,
                covered: self.complete_to,
            })
        } else {
            Ok(())
        }
    }

    /// Sum of two measures.
    pub fn plus(&self, other: &GeneralizedString) -> GeneralizedString {
        let atoms = merge_atoms(self.atoms.iter().chain(&other.atoms).copied().collect());
        GeneralizedString {
            atoms,
            closed_form: None,
            x0: self.x0.min(other.x0),
            complete_to: self.complete_to.min(other.complete_to),
        }
    }

    /// Bound on `Σ_{x_j > limit} |w_j| x_j^{-σ}` for the untruncated measure.
    pub fn abs_tail(&self, sigma: f64, limit: f64, opts: &EvalOptions) -> Result<f64> {
        if self.complete_to.is_infinite() {
            return Ok(self
                .atoms
                .iter()
                .filter(|a| a.x > limit)
                .map(|a| a.w.norm() * a.x.powf(-sigma))
                .sum());
        }
        match self.closed_form {
            Some(cf) => cf.abs_tail(sigma, limit, opts),
            None => Err(Error::TruncationTooShort {
                needed: f64::INFINITY,
                covered: self.complete_to,
            }),
        }
    }
}

/// All atoms of a builtin family with reciprocal scale `≤ truncation`.
pub fn builtin_string(kind: StringKind, truncation: f64) -> Result<GeneralizedString> {
    let cf = kind.closed_form();
    cf.validate()?;
    let first = cf.first_scale();
    if !(truncation >= first * (1.0 - MERGE_TOL)) {
        return Err(Error::EmptyTruncation { x: truncation });
    }
    Ok(GeneralizedString {
        atoms: cf.atoms_up_to(truncation),
        closed_form: Some(cf),
        x0: first,
        complete_to: truncation,
    })
}

/// `N_η(x) = ½(η(0,x) + η(0,x])`.
pub fn counting_function(eta: &GeneralizedString, x: f64) -> Result<Complex64> {
    if x < eta.x0 * (1.0 - MERGE_TOL) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    eta.require_coverage(x)?;
    Ok(count_atoms(&eta.atoms, x))
}

fn count_atoms(atoms: &[Atom], x: f64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for a in atoms {
        if same_scale(a.x, x) {
            total += 0.5 * a.w;
        } else if a.x < x {
            total += a.w;
        } else {
            break;
        }
    }
    total
}

/// Total-variation count `|η|(0, x)` with the same half-jump convention.
fn abs_count(atoms: &[Atom], x: f64) -> f64 {
    atoms
        .iter()
        .take_while(|a| a.x <= x * (1.0 + MERGE_TOL))
        .map(|a| {
            if same_scale(a.x, x) {
                0.5 * a.w.norm()
            } else {
                a.w.norm()
            }
        })
        .sum()
}

/// `ζ_η(s)`, either as a Dirichlet polynomial over atoms or in closed form.
pub fn geometric_zeta(
    eta: &GeneralizedString,
    s: Complex64,
    mode: ZetaMode,
    opts: &EvalOptions,
) -> Result<Complex64> {
    match mode {
        ZetaMode::Atoms(n_max) => {
            let n = n_max.unwrap_or(eta.atoms.len()).min(eta.atoms.len());
            Ok(eta.atoms[..n]
                .iter()
                .map(|a| a.w * (-s * a.x.ln()).exp())
                .sum())
        }
        ZetaMode::ClosedForm => match eta.closed_form {
            Some(cf) => cf.eval(s, opts),
            None => Err(Error::UnsupportedKind("string has no closed form".into())),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimension {
    pub value: f64,
    /// true when fitted from atoms rather than read off a closed form
    pub estimated: bool,
}

/// Abscissa of convergence: exact for closed forms, otherwise a least-squares
/// slope of `log |η|(0, x)` against `log x` over the top decade of scales.
pub fn dimension(eta: &GeneralizedString) -> Result<Dimension> {
    if let Some(cf) = eta.closed_form {
        return Ok(Dimension {
            value: cf.dimension(),
            estimated: false,
        });
    }
    if eta.atoms.len() < MIN_ATOMS_FOR_ESTIMATE {
        return Err(Error::InsufficientAtoms {
            have: eta.atoms.len(),
            need: MIN_ATOMS_FOR_ESTIMATE,
        });
    }
    let top = eta.atoms.last().map(|a| a.x).unwrap_or(1.0);
    let (lo, hi) = ((top / 10.0).ln(), top.ln());
    let samples = 50;
    let mut pts = Vec::with_capacity(samples);
    for i in 0..samples {
        let lx = lo + (hi - lo) * (i as f64 + 0.5) / samples as f64;
        let n = abs_count(&eta.atoms, lx.exp());
        if n > 0.0 {
            pts.push((lx, n.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::InsufficientAtoms {
            have: eta.atoms.len(),
            need: MIN_ATOMS_FOR_ESTIMATE,
        });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(Dimension {
        value: sxy / sxx,
        estimated: true,
    })
}

/// Atoms of `ν(A) = Σ_k η(A/k)` with reciprocal scale `≤ limit`.
pub fn spectral_measure_atoms(eta: &GeneralizedString, limit: f64) -> Result<GeneralizedString> {
    let mut raw = Vec::new();
    if limit >= eta.x0 * (1.0 - MERGE_TOL) {
        eta.require_coverage(limit)?;
        for a in eta
            .atoms
            .iter()
            .take_while(|a| a.x <= limit * (1.0 + MERGE_TOL))
        {
            let kmax = (limit / a.x * (1.0 + MERGE_TOL)).floor() as u64;
            for k in 1..=kmax {
                raw.push(Atom {
                    x: k as f64 * a.x,
                    w: a.w,
                });
            }
        }
    }
    Ok(GeneralizedString {
        atoms: merge_atoms(raw),
        closed_form: None,
        x0: eta.x0,
        complete_to: limit,
    })
}

/// `N_ν(x) = Σ_{n ≤ x/x0} N_η(x/n)`.
pub fn spectral_counting(eta: &GeneralizedString, x: f64) -> Result<Complex64> {
    if x < eta.x0 * (1.0 - MERGE_TOL) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    eta.require_coverage(x)?;
    let nmax = (x / eta.x0 * (1.0 + MERGE_TOL)).floor() as u64;
    Ok((1..=nmax)
        .map(|n| count_atoms(&eta.atoms, x / n as f64))
        .sum())
}

/// `ζ_ν(s) = ζ_η(s) ζ(s)`; uses the closed form when there is one.
pub fn spectral_zeta(
    eta: &GeneralizedString,
    s: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    let geo = match eta.closed_form {
        Some(cf) => cf.eval(s, opts)?,
        None if eta.complete_to.is_infinite() => {
            geometric_zeta(eta, s, ZetaMode::Atoms(None), opts)?
        }
        None => {
            return Err(Error::UnsupportedKind(
                "truncated string without closed form".into(),
            ))
        }
    };
    let z = zeta_core::zeta(s, opts).map_err(|e| match e {
        Error::PoleAtOne => Error::PoleHit { re: s.re, im: s.im },
        other => other,
    })?;
    Ok(geo * z)
}

/// Direct Dirichlet sum over spectral atoms against the product formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCheck {
    pub product: Complex64,
    pub direct: Complex64,
    pub discrepancy: f64,
    /// bound on the part of `ζ_ν(s)` carried by atoms beyond the truncation
    pub tail_bound: f64,
}

pub fn spectral_zeta_check(
    eta: &GeneralizedString,
    s: Complex64,
    limit: f64,
    opts: &EvalOptions,
) -> Result<SpectralCheck> {
    let sigma = s.re;
    if sigma <= 1.0 {
        return Err(Error::AssumptionViolated(format!(
            "direct spectral sum needs Re(s) > 1, got {sigma}"
        )));
    }
    let product = spectral_zeta(eta, s, opts)?;
    let nu = spectral_measure_atoms(eta, limit)?;
    let direct = geometric_zeta(&nu, s, ZetaMode::Atoms(None), opts)?;
    // atoms of η up to the limit, each missing its multiples k > limit/x
    let mut tail = 0.0;
    for a in eta.atoms.iter().take_while(|a| a.x <= limit) {
        let k = (limit / a.x).floor().max(1.0);
        tail += a.w.norm() * a.x.powf(-sigma) * k.powf(1.0 - sigma) / (sigma - 1.0);
    }
    let zs = zeta_core::zeta(Complex64::new(sigma, 0.0), opts)?.re;
    tail += eta.abs_tail(sigma, limit, opts)? * zs;
    Ok(SpectralCheck {
        product,
        direct,
        discrepancy: (product - direct).norm(),
        tail_bound: tail,
    })
}

/// Multiplicative convolution truncated to scales `≤ limit`.
pub fn mult_convolve(
    a: &GeneralizedString,
    b: &GeneralizedString,
    limit: f64,
) -> Result<GeneralizedString> {
    a.require_coverage(limit / b.x0)?;
    b.require_coverage(limit / a.x0)?;
    let mut raw = Vec::new();
    for p in &a.atoms {
        for q in &b.atoms {
            let x = p.x * q.x;
            if x > limit * (1.0 + MERGE_TOL) {
                break;
            }
            raw.push(Atom { x, w: p.w * q.w });
        }
    }
    Ok(GeneralizedString {
        atoms: merge_atoms(raw),
        closed_form: None,
        x0: a.x0 * b.x0,
        complete_to: limit,
    })
}
