//! Complex dimensions of the Cantor string and their residues, checked by
//! contour quadrature.
use zeta_strings::contour;
use zeta_strings::explicit_formulas::{complex_dimensions, DimensionWindow};
use zeta_strings::fractal_strings::ClosedForm;
use zeta_strings::zeta_core::EvalOptions;

fn main() -> Result<(), zeta_strings::Error> {
    let o = EvalOptions::default();
    let cf = ClosedForm::cantor();
    println!(
        "{:>3} {:>20} {:>20} {:>14}",
        "k", "omega", "residue", "quadrature"
    );
    for w in complex_dimensions(&cf, DimensionWindow::Index { k_max: 3 }, &o)? {
        let q = contour::residue(|s| cf.eval(s, &o), w.omega, 1e-2, 64)?;
        println!(
            "{:>3} {:>9.6} {:>+9.5}i {:>20.15} {:>14.3e}",
            w.k,
            w.omega.re,
            w.omega.im,
            w.residue.re,
            (q - w.residue).norm()
        );
    }
    println!("log 2 / log 3 = {}", 2f64.ln() / 3f64.ln());
    Ok(())
}
