//! How densely ζ(c + iτ) visits a few target values as τ grows.
use zeta_strings::operator_model::{nearest_distances, zeta_range_sample};
use zeta_strings::zeta_core::EvalOptions;
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let targets = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(0.0, 2.0),
    ];
    for tau_max in [100.0, 1000.0, 5000.0] {
        let v = zeta_range_sample(0.75, tau_max, 0.01, &EvalOptions::default())?;
        let d = nearest_distances(&v, &targets);
        println!(
            "tau <= {tau_max:>6}: nearest approach {:.4} {:.4} {:.4}",
            d[0], d[1], d[2]
        );
    }
    Ok(())
}
