//! Every point of the line Re s = c is an approximate eigenvalue of the
//! infinitesimal shift: the residual of a Gaussian-damped exponential decays
//! like 1/(σ√2).
use zeta_strings::operator_model::{approx_eigenfunction, Grid};

fn main() -> Result<(), zeta_strings::Error> {
    for sigma in [5.0, 10.0, 20.0, 40.0] {
        let grid = Grid::new(-7.0 * sigma, 7.0 * sigma, 1e-3)?;
        let (_, r) = approx_eigenfunction(0.75, 5.0, sigma, grid)?;
        println!(
            "sigma {sigma:>4}: residual {r:.6}, 1/(sigma sqrt 2) = {:.6}",
            1.0 / (sigma * 2f64.sqrt())
        );
    }
    Ok(())
}
