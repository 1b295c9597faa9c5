//! The spectral zeta function of a string equals its geometric zeta times ζ:
//! a direct Dirichlet sum over the spectral atoms against the product.
use zeta_strings::fractal_strings::{
    builtin_string, spectral_counting, spectral_zeta_check, ClosedForm, StringKind,
};
use zeta_strings::zeta_core::EvalOptions;
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let o = EvalOptions::default();
    for cf in [
        ClosedForm::cantor(),
        ClosedForm::Harmonic,
        ClosedForm::PrimeHarmonic { p: 2 },
    ] {
        let eta = builtin_string(StringKind::Family(cf.clone()), 1e4)?;
        let r = spectral_zeta_check(&eta, Complex64::new(2.0, 3.0), 1e4, &o)?;
        println!(
            "{:<15} |direct - product| = {:.2e} (tail bound {:.2e}); N_nu(100) = {}",
            cf.name(),
            r.discrepancy,
            r.tail_bound,
            spectral_counting(&eta, 100.0)?.re
        );
    }
    Ok(())
}
