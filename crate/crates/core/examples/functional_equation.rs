//! ξ(s) = ξ(1 - s) at seeded random points of the critical strip.
use zeta_strings::cli::functional_equation_check;
use zeta_strings::zeta_core::EvalOptions;

fn main() -> Result<(), zeta_strings::Error> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(7);
    let r = functional_equation_check(seed, 100, 50.0, &EvalOptions::default())?;
    let worst = r
        .points
        .iter()
        .max_by(|a, b| a[2].total_cmp(&b[2]))
        .unwrap();
    println!(
        "seed {seed}: max residual {:.2e} at s = {:.4} + {:.4}i",
        r.max_residual, worst[0], worst[1]
    );
    Ok(())
}
