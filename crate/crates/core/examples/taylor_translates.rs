//! Taylor polynomials of ζ at z0 + iτ used as approximants on the box.
use zeta_strings::universality::{
    taylor_translate_scan, zeta_taylor_coefficients, CompactBox, ScanOptions, Target,
};
use zeta_strings::zeta_core::EvalOptions;
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let z0 = Complex64::new(0.75, 0.0);
    let a = zeta_taylor_coefficients(Complex64::new(2.0, 0.0), 3, &EvalOptions::default())?;
    println!(
        "zeta(2), zeta'(2), zeta''(2)/2: {:.12} {:.12} {:.12}",
        a[0].re, a[1].re, a[2].re
    );
    for n in [2, 5, 10, 20] {
        let r = taylor_translate_scan(
            Target::base(),
            &CompactBox::tiny(),
            z0,
            n,
            0.0,
            1.0,
            &ScanOptions::default(),
        )?;
        println!(
            "degree {n:>2}: sup |zeta - T_n| on the box = {:.3e}",
            r.j[0]
        );
    }
    let r = taylor_translate_scan(
        Target::Constant(Complex64::new(1.0, 0.0)),
        &CompactBox::tiny(),
        z0,
        8,
        300.0,
        0.01,
        &ScanOptions::default(),
    )?;
    println!(
        "best degree-8 Taylor translate to 1: J = {:.6} at tau {}",
        r.j_star, r.tau_star
    );
    Ok(())
}
