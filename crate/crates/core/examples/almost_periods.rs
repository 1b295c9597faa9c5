//! ε-translation numbers of ζ on [1.5, 2] × [-1, 1]: one qualifying shift
//! in every window of length ℓ.
use zeta_strings::universality::{almost_period_scan_multi, AlmostPeriodGrid, Base, ScanOptions};

fn main() -> Result<(), zeta_strings::Error> {
    let range = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2500.0);
    let res = almost_period_scan_multi(
        &Base::Zeta,
        (1.5, 2.0),
        1.0,
        &[(0.5, 1250.0), (0.8, 250.0)],
        range,
        AlmostPeriodGrid::default(),
        &ScanOptions::default(),
    )?;
    for r in res {
        println!(
            "eps {} ell {} (L = {:.4}): {} windows, {} empty",
            r.eps,
            r.ell,
            r.lipschitz,
            r.windows.len(),
            r.empty_windows.len()
        );
        for w in r.windows.iter().take(4) {
            println!(
                "    [{}, {}]: {} hits, first {:?}",
                w.lo,
                w.hi,
                w.finds.len(),
                w.finds.iter().find(|&&t| t > 0.0)
            );
        }
    }
    Ok(())
}
