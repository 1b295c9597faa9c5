//! Values of ζ, ξ, Hurwitz zeta, Dirichlet L and the truncated Euler product.
use zeta_strings::zeta_core::{self as zc, DirichletCharacter, EvalOptions};
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let o = EvalOptions::default();
    let s = Complex64::new(0.5, 14.134725141734693);
    println!("zeta(1/2 + 14.1347i) = {:.3e}", zc::zeta(s, &o)?.norm());
    let (v, err) = zc::zeta_with_error(Complex64::new(2.0, 0.0), &o)?;
    println!("zeta(2) = {} (+/- {err:.1e})", v.re);
    println!(
        "xi(1/2) = {}",
        zc::completed_xi(Complex64::new(0.5, 0.0), &o)?.re
    );
    println!(
        "zeta(2, 1/2) = {}",
        zc::hurwitz_zeta(Complex64::new(2.0, 0.0), 0.5, &o)?.re
    );
    let chi = DirichletCharacter::chi4();
    println!(
        "L(2, chi4) = {} (Catalan)",
        zc::dirichlet_l(Complex64::new(2.0, 0.0), &chi, &o)?.re
    );
    for n in [10, 1000, 100_000] {
        let p = zc::euler_product_truncated(Complex64::new(2.0, 0.0), n)?;
        println!("Euler product up to {n:>6}: {}", p.re);
    }
    match zc::zeta(Complex64::new(1.0, 0.0), &o) {
        Err(e) => println!("zeta(1): {}", e.name()),
        Ok(v) => println!("zeta(1) = {v}"),
    }
    Ok(())
}
