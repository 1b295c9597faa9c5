//! Searching shifts ζ(s + iτ) that approximate the constant 1 on a small
//! disc-like box near Re s = 3/4.
use zeta_strings::universality::{scan_continuous, Base, CompactBox, ScanOptions, Target};
use zeta_strings::Complex64;

fn main() -> Result<(), zeta_strings::Error> {
    let tau_max = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1000.0);
    let r = scan_continuous(
        Target::Constant(Complex64::new(1.0, 0.0)),
        &CompactBox::tiny(),
        &Base::Zeta,
        tau_max,
        0.01,
        &[0.1, 0.2, 0.5],
        &ScanOptions::default(),
    )?;
    println!(
        "grid minimum J = {:.6} at tau = {}",
        r.grid_j_star, r.grid_tau_star
    );
    println!(
        "polished J* = {:.15} at tau* = {:.10}",
        r.j_star, r.tau_star
    );
    for d in &r.density {
        println!(
            "fraction of [0, {}] with J <= {}: {:.5}",
            r.window, d.eps, d.fraction
        );
    }
    Ok(())
}
