//! Operator-norm distance between g(∂^(T)) and ζ(∂^(T) + iτ), column by
//! column, against the scalar sup over the same box.
use zeta_strings::universality::{quantized_sup, Base, CompactBox, ScanOptions, Scanner, Target};
use zeta_strings::zeta_core::EvalOptions;
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let g = Target::Constant(Complex64::new(1.0, 0.0));
    let bx = CompactBox::with_profile_fn(0.6, 0.9, 8, 64, 1.0, |c| {
        1.0 - 2.0 * (c - 0.75).abs() / 0.3 * 0.5
    })?;
    let scanner = Scanner::new(&Base::Zeta, g.clone(), &bx, 50.0, &EvalOptions::default())?;
    for tau in [3.0, 17.5, 42.0] {
        let q = quantized_sup(&g, tau, &bx, &Base::Zeta, 1e-9, &ScanOptions::default())?;
        let s = scanner.sup_report(tau)?;
        println!(
            "tau {tau}: quantized {:.9}, grid sup {:.9} (tolerance {:.2e})",
            q.value, s.value, s.tolerance
        );
        for col in &q.columns {
            println!("    c {:.3} T {:.3}: {:.6}", col.c, col.t, col.norm);
        }
    }
    Ok(())
}
