//! Riemann zeta, completed zeta, Hurwitz zeta, Dirichlet L-functions,
//! truncated Euler products and Möbius series.
//!
//! All evaluation goes through Euler–Maclaurin summation with an explicit
//! remainder bound (see [`Series`]); the left half-plane `Re(s) < 0` is
//! reached through the functional equation.

pub mod arith;
mod character;
mod euler_maclaurin;
pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use character::DirichletCharacter;
pub use euler_maclaurin::{GridColumn, Series, ShiftedEvaluator};

use crate::error::{Error, Result};

/// Points of the complex plane. Operations never return non-finite values.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// target absolute error
    pub abs_tol: f64,
    /// cap on the Euler–Maclaurin cut
    pub max_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            abs_tol: 1e-13,
            max_terms: 10_000_000,
        }
    }
}

impl EvalOptions {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol >= f64::EPSILON * 1e-3) || !abs_tol.is_finite() {
            return Err(Error::InvalidInput(format!("abs_tol {abs_tol} too small")));
        }
        if max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be at least 1".into()));
        }
        Ok(EvalOptions { abs_tol, max_terms })
    }

    pub fn with_tol(self, abs_tol: f64) -> Self {
        EvalOptions { abs_tol, ..self }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// ζ(s) for `s ≠ 1`.
pub fn zeta(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    zeta_with_error(s, opts).map(|(v, _)| v)
}

/// ζ(s) together with a bound on its absolute error.
pub fn zeta_with_error(s: ComplexValue, opts: &EvalOptions) -> Result<(ComplexValue, f64)> {
    if s == c(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if s.re >= 0.0 {
        return Series::riemann().eval(s, opts);
    }
    // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
    let one = c(1.0, 0.0);
    let ln_factor =
        s * 2f64.ln() + (s - one) * PI.ln() + gamma::ln_gamma(one - s) + ln_sin_half_pi(s);
    let factor = ln_factor.exp();
    let inner_tol = opts.abs_tol / factor.norm().max(1.0);
    let (z, err) = Series::riemann().eval(one - s, &opts.with_tol(inner_tol))?;
    let v = factor * z;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite(format!("zeta({s})")));
    }
    Ok((v, factor.norm() * err + 1e-13 * v.norm()))
}

fn ln_sin_half_pi(s: Complex64) -> Complex64 {
    let w = s * (PI / 2.0);
    let i = Complex64::i();
    if w.im > 20.0 {
        -i * w + ((2.0 * i * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else if w.im < -20.0 {
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - (2.0 * i).ln()
    } else {
        w.sin().ln()
    }
}

/// ζ'(s) by a 64-point Cauchy integral on a circle that stays clear of s = 1.
pub fn zeta_derivative(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    if s == c(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    let radius = (0.5 * (s - 1.0).norm()).min(0.1);
    let m = 64;
    let mut acc = c(0.0, 0.0);
    for k in 0..m {
        let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
        acc += zeta(s + radius * u, &opts.with_tol(opts.abs_tol * radius))? / u;
    }
    Ok(acc / (m as f64 * radius))
}

/// ξ(s) = π^{-s/2} Γ(s/2) ζ(s).
pub fn completed_xi(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    completed_xi_with_error(s, opts).map(|(v, _)| v)
}

const TRIVIAL_ZERO_RADIUS: f64 = 1e-8;

pub fn completed_xi_with_error(s: ComplexValue, opts: &EvalOptions) -> Result<(ComplexValue, f64)> {
    if s == c(0.0, 0.0) {
        return Err(Error::PoleAtZero);
    }
    if s == c(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    // Γ(s/2) has poles at the trivial zeros of ζ; use the finite limit there.
    if s.re < -1.0 {
        let n = (-s.re / 2.0).round();
        if n >= 1.0 && (s + 2.0 * n).norm() < TRIVIAL_ZERO_RADIUS {
            let v = xi_at_trivial_zero(n as u64, opts)?;
            return Ok((c(v, 0.0), 1e-12 * v.abs()));
        }
    }
    let prefactor = (-(s / 2.0) * PI.ln() + gamma::ln_gamma(s / 2.0)).exp();
    let (z, err) = zeta_with_error(s, &opts.with_tol(opts.abs_tol / prefactor.norm().max(1.0)))?;
    let v = prefactor * z;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite(format!("xi({s})")));
    }
    Ok((v, prefactor.norm() * err + 1e-13 * v.norm()))
}

/// lim_{s→-2n} ξ(s) = π^n (2n)! ζ(2n+1) / (n! (2π)^{2n}).
fn xi_at_trivial_zero(n: u64, opts: &EvalOptions) -> Result<f64> {
    let nf = n as f64;
    let z = zeta(c(2.0 * nf + 1.0, 0.0), opts)?.re;
    let ln = nf * PI.ln() + gamma::ln_gamma(c(2.0 * nf + 1.0, 0.0)).re
        - gamma::ln_gamma(c(nf + 1.0, 0.0)).re
        - 2.0 * nf * (2.0 * PI).ln();
    Ok(ln.exp() * z)
}

/// ∏_{p ≤ n_max} (1 - p^{-s})^{-1} as a finite product.
pub fn euler_product_truncated(s: ComplexValue, n_max: u64) -> Result<ComplexValue> {
    euler_product_weighted(s, n_max, |_| c(1.0, 0.0))
}

/// ∏_{p ≤ n_max} (1 - χ(p) p^{-s})^{-1}.
pub fn euler_product_character(
    s: ComplexValue,
    chi: &DirichletCharacter,
    n_max: u64,
) -> Result<ComplexValue> {
    euler_product_weighted(s, n_max, |p| chi.at(p))
}

fn euler_product_weighted(
    s: ComplexValue,
    n_max: u64,
    weight: impl Fn(u64) -> Complex64,
) -> Result<ComplexValue> {
    let mut prod = c(1.0, 0.0);
    for p in arith::primes_up_to(n_max) {
        let factor = 1.0 - weight(p) * (-s * (p as f64).ln()).exp();
        if factor.norm() < 1e-15 {
            return Err(Error::FactorSingular { p });
        }
        prod /= factor;
    }
    if !(prod.re.is_finite() && prod.im.is_finite()) {
        return Err(Error::NonFinite(format!("Euler product at {s}")));
    }
    Ok(prod)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

/// ζ(s, α) = Σ_{n≥0} (n + α)^{-s} for `0 < α ≤ 1`, `s ≠ 1`.
pub fn hurwitz_zeta(s: ComplexValue, alpha: f64, opts: &EvalOptions) -> Result<ComplexValue> {
    hurwitz_zeta_with_error(s, alpha, opts).map(|(v, _)| v)
}

pub fn hurwitz_zeta_with_error(
    s: ComplexValue,
    alpha: f64,
    opts: &EvalOptions,
) -> Result<(ComplexValue, f64)> {
    check_alpha(alpha)?;
    Series::hurwitz(alpha).eval(s, opts)
}

/// L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q). Entire for non-principal χ.
pub fn dirichlet_l(
    s: ComplexValue,
    chi: &DirichletCharacter,
    opts: &EvalOptions,
) -> Result<ComplexValue> {
    dirichlet_l_with_error(s, chi, opts).map(|(v, _)| v)
}

pub fn dirichlet_l_with_error(
    s: ComplexValue,
    chi: &DirichletCharacter,
    opts: &EvalOptions,
) -> Result<(ComplexValue, f64)> {
    Series::dirichlet(chi.values()).eval(s, opts)
}

/// Σ_{j ≤ n_max} μ(j) j^{-s}.
pub fn inverse_zeta_series(s: ComplexValue, n_max: usize) -> ComplexValue {
    let mu = arith::moebius_table(n_max.max(1));
    mu.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &m)| m != 0)
        .map(|(j, &m)| m as f64 * (-s * (j as f64).ln()).exp())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn zeta_two_is_basel() {
        let z = zeta(c(2.0, 0.0), &o()).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() <= 1e-12);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn zeta_special_values() {
        assert!((zeta(c(0.0, 0.0), &o()).unwrap().re + 0.5).abs() < 1e-13);
        assert!((zeta(c(-1.0, 0.0), &o()).unwrap().re + 1.0 / 12.0).abs() < 1e-13);
        assert!(zeta(c(-2.0, 0.0), &o()).unwrap().norm() < 1e-13);
        assert!((zeta(c(4.0, 0.0), &o()).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-13);
        // ζ(1/2) = -1.4603545088095868...
        assert!((zeta(c(0.5, 0.0), &o()).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-12);
    }

    #[test]
    fn zeta_pole() {
        assert_eq!(zeta(c(1.0, 0.0), &o()), Err(Error::PoleAtOne));
    }

    #[test]
    fn zeta_near_first_zero() {
        let z = zeta(c(0.5, 14.134725), &o()).unwrap();
        assert!(z.norm() < 1e-6, "{z}");
    }

    #[test]
    fn reflection_branch_agrees_with_direct_sum() {
        // both sides of Re(s) = 0
        for &t in &[0.5, 7.0, 25.0] {
            let a = zeta(c(-1e-9, t), &o()).unwrap();
            let b = zeta(c(1e-9, t), &o()).unwrap();
            assert!((a - b).norm() < 1e-7, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn error_bound_is_reported() {
        let (_, err) = zeta_with_error(c(0.7, 300.0), &o()).unwrap();
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn tolerance_unreachable_with_tiny_cap() {
        let opts = EvalOptions::new(1e-13, 5).unwrap();
        assert!(matches!(
            zeta(c(0.5, 1000.0), &opts),
            Err(Error::ToleranceUnreachable { .. })
        ));
    }

    #[test]
    fn xi_poles_and_realness() {
        assert_eq!(completed_xi(c(0.0, 0.0), &o()), Err(Error::PoleAtZero));
        assert_eq!(completed_xi(c(1.0, 0.0), &o()), Err(Error::PoleAtOne));
        let x = completed_xi(c(0.5, 0.0), &o()).unwrap();
        assert_eq!(x.im, 0.0);
        // ξ(1/2) = π^{-1/4} Γ(1/4) ζ(1/2) = -3.97696622550651...
        assert!((x.re + 3.976_966_225_506_513).abs() < 1e-11, "{x}");
    }

    #[test]
    fn xi_trivial_zero_limit_matches_reflection() {
        for n in 1..6u64 {
            let s = c(-2.0 * n as f64, 0.0);
            let left = completed_xi(s, &o()).unwrap();
            let right = completed_xi(c(1.0, 0.0) - s, &o()).unwrap();
            assert!((left - right).norm() <= 1e-11 * right.norm(), "n = {n}");
            // just outside the cancellation radius the direct route takes over
            let near = completed_xi(s + c(1e-6, 0.0), &o()).unwrap();
            assert!((near - left).norm() < 1e-4 * left.norm());
        }
    }

    #[test]
    fn xi_functional_equation_spot() {
        let s = c(0.3, 2.7);
        let d = completed_xi(s, &o()).unwrap() - completed_xi(c(1.0, 0.0) - s, &o()).unwrap();
        assert!(d.norm() < 1e-10);
    }

    #[test]
    fn euler_product_examples() {
        let v = euler_product_truncated(c(2.0, 0.0), 2).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            euler_product_truncated(c(0.0, 0.0), 10),
            Err(Error::FactorSingular { p: 2 })
        );
        let e = euler_product_truncated(c(2.0, 0.0), 100_000).unwrap();
        assert!((e.re - PI * PI / 6.0).abs() < 1e-4);
    }

    #[test]
    fn hurwitz_identities() {
        let s = c(2.0, 3.0);
        let h = hurwitz_zeta(s, 1.0, &o()).unwrap();
        assert!((h - zeta(s, &o()).unwrap()).norm() < 1e-10);
        let h = hurwitz_zeta(c(2.0, 0.0), 0.5, &o()).unwrap();
        assert!((h.re - 3.0 * PI * PI / 6.0).abs() < 1e-10);
        assert_eq!(hurwitz_zeta(c(1.0, 0.0), 0.3, &o()), Err(Error::PoleAtOne));
        assert_eq!(
            hurwitz_zeta(c(2.0, 0.0), 0.0, &o()),
            Err(Error::BadAlpha(0.0))
        );
        assert_eq!(
            hurwitz_zeta(c(2.0, 0.0), 1.5, &o()),
            Err(Error::BadAlpha(1.5))
        );
    }

    #[test]
    fn dirichlet_l_trivial_and_pole() {
        let one = DirichletCharacter::principal(1).unwrap();
        let l = dirichlet_l(c(3.0, 0.0), &one, &o()).unwrap();
        assert!((l - zeta(c(3.0, 0.0), &o()).unwrap()).norm() < 1e-10);
        assert_eq!(dirichlet_l(c(1.0, 0.0), &one, &o()), Err(Error::PoleAtOne));
        // nontrivial character is entire: L(1, χ4) = π/4
        let l1 = dirichlet_l(c(1.0, 0.0), &DirichletCharacter::chi4(), &o()).unwrap();
        assert!((l1.re - PI / 4.0).abs() < 1e-12, "{l1}");
        let near = dirichlet_l(c(1.0 + 1e-7, 0.0), &DirichletCharacter::chi4(), &o()).unwrap();
        assert!((near - l1).norm() < 1e-6);
    }

    #[test]
    fn moebius_series() {
        assert_eq!(inverse_zeta_series(c(0.3, 9.0), 1), c(1.0, 0.0));
        let v = inverse_zeta_series(c(2.0, 0.0), 1_000_000) * zeta(c(2.0, 0.0), &o()).unwrap();
        assert!((v - 1.0).norm() < 1e-4);
    }

    #[test]
    fn derivative_at_two() {
        // ζ'(2) = -0.93754825431584375...
        let d = zeta_derivative(c(2.0, 0.0), &o()).unwrap();
        assert!((d.re + 0.937_548_254_315_843_8).abs() < 1e-11, "{d}");
    }
}
