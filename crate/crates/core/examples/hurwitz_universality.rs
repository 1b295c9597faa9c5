//! Hurwitz zeta with a transcendental parameter approximates targets with
//! zeros, which ζ cannot.
use zeta_strings::universality::{
    hurwitz_scan, scan_continuous, Base, CompactBox, ScanOptions, Target,
};

fn main() -> Result<(), zeta_strings::Error> {
    let bx = CompactBox::tiny();
    let g = Target::expression(|s| Ok(s - 0.75));
    let opts = ScanOptions::default();
    let alpha = 1.0 / std::f64::consts::E;
    let r = hurwitz_scan(g.clone(), alpha, &bx, 200.0, 0.01, &[0.5], &opts)?;
    println!(
        "Hurwitz a = 1/e: J* = {:.6} at tau {:.6}",
        r.j_star, r.tau_star
    );
    match scan_continuous(g, &bx, &Base::Zeta, 200.0, 0.01, &[0.5], &opts) {
        Err(e) => println!("zeta scan refused: {e}"),
        Ok(r) => println!("zeta: J* = {}", r.j_star),
    }
    let r = hurwitz_scan(Target::base(), 1.0, &bx, 1.0, 0.5, &[], &opts)?;
    println!("flags for a = 1: {:?}", r.flags);
    Ok(())
}
