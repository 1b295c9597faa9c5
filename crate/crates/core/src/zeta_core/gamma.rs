//! Complex log-gamma via a Lanczos approximation (g = 7, nine terms).

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-ish branch of `ln Γ(z)`. Only `exp` of the result is meaningful
/// in the left half-plane, where the imaginary part may differ from the
/// principal branch by a multiple of 2π.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z)
    } else {
        let z = z - 1.0;
        let mut x = Complex64::new(LANCZOS[0], 0.0);
        for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
            x += p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
    }
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `ln sin(πz)` without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = PI * z;
    let i = Complex64::i();
    if w.im > 20.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        -i * w + ((2.0 * i * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else if w.im < -20.0 {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - (2.0 * i).ln()
    } else {
        w.sin().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..15 {
            let g = gamma(c(n as f64, 0.0));
            assert!((g.re - f).abs() <= 1e-13 * f, "Γ({n}) = {g}");
            assert!(g.im.abs() <= 1e-13 * f);
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer_and_reflection() {
        let g = gamma(c(0.5, 0.0));
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        let g = gamma(c(-0.5, 0.0));
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn critical_line_modulus() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for &t in &[0.3, 1.0, 4.0, 12.5, 30.0] {
            let g = gamma(c(0.5, t));
            let want = PI / (PI * t).cosh();
            assert!((g.norm_sqr() / want - 1.0).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn large_imaginary_reflection_is_finite() {
        let g = ln_gamma(c(-3.2, 400.0));
        assert!(g.re.is_finite() && g.im.is_finite());
        let direct = ln_gamma(c(-3.2 + 1.0, 400.0)) - c(-3.2, 400.0).ln();
        let d = (g - direct).exp();
        assert!((d - 1.0).norm() < 1e-9);
    }
}
