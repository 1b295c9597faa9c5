//! Counting function of the Cantor string rebuilt from its complex
//! dimensions, against direct counting, for growing truncations.
use zeta_strings::explicit_formulas::{
    compare_explicit_vs_direct, log_midpoints, DimensionWindow, Level,
};
use zeta_strings::fractal_strings::{builtin_string, StringKind};
use zeta_strings::zeta_core::EvalOptions;

fn main() -> Result<(), zeta_strings::Error> {
    let eta = builtin_string(StringKind::Cantor, 1e3)?;
    let xs = log_midpoints(2.0, 100.0, 20)?;
    for k in [0, 5, 10, 50, 100, 200] {
        let r = compare_explicit_vs_direct(
            &eta,
            &xs,
            DimensionWindow::Index { k_max: k },
            Level::Geometric,
            &EvalOptions::default(),
        )?;
        println!(
            "k_max {k:>3}: max error {:.4}, mean {:.4}",
            r.max_error, r.mean_error
        );
    }
    Ok(())
}
