//! The spectral operator in additive form, Σ f(t - log n), on a sampled
//! Gaussian, plus the translation semigroup on H_c.
use zeta_strings::operator_model::{
    apply_spectral_operator, hc_norm, shift, Grid, SampledFunction, Truncation,
};

fn main() -> Result<(), zeta_strings::Error> {
    let grid = Grid::new(-20.0, 40.0, 1e-2)?;
    let f = SampledFunction::gaussian(grid, 2.0, 2.0, 1.0)?;
    for trunc in [
        Truncation::Terms(1),
        Truncation::Terms(10),
        Truncation::TailTol(1e-6),
    ] {
        let r = apply_spectral_operator(&f, trunc)?;
        println!(
            "{trunc:?}: N = {}, |result|_c = {:.6}, tail <= {:.1e}",
            r.n_max,
            hc_norm(&r.result),
            r.tail_bound
        );
    }
    for t in [0.5, 1.0, 2.5] {
        let ratio = hc_norm(&shift(&f, t)?) / hc_norm(&f);
        println!(
            "shift {t}: norm ratio {ratio:.12}, e^(-ct) = {:.12}",
            (-2.0 * t).exp()
        );
    }
    Ok(())
}
