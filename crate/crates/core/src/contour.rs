//! Trapezoid-rule Cauchy integrals on circles.
//!
//! For a function analytic on an annulus around the circle the trapezoid
//! rule converges geometrically in the number of nodes, so 64–128 nodes give
//! residues and Taylor coefficients to near machine precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

fn nodes(center: Complex64, radius: f64, m: usize) -> impl Iterator<Item = (Complex64, Complex64)> {
    (0..m).map(move |k| {
        let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
        (center + radius * u, u)
    })
}

/// `(1 / 2πi) ∮ f(s) ds` over the circle `|s - center| = radius`.
pub fn residue<F>(f: F, center: Complex64, radius: f64, m: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, u) in nodes(center, radius, m) {
        acc += f(s)? * u;
    }
    Ok(acc * radius / m as f64)
}

/// Taylor coefficients `a_0..=a_n` of `f` at `center`.
pub fn taylor_coefficients<F>(
    f: F,
    center: Complex64,
    radius: f64,
    m: usize,
    n: usize,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let values: Vec<(Complex64, Complex64)> = nodes(center, radius, m)
        .map(|(s, u)| f(s).map(|v| (v, u)))
        .collect::<Result<_>>()?;
    Ok((0..=n)
        .map(|k| {
            let sum: Complex64 = values.iter().map(|(v, u)| v * u.powi(-(k as i32))).sum();
            sum / (m as f64 * radius.powi(k as i32))
        })
        .collect())
}
