//! Norms of functions of the truncated infinitesimal shift: sup over the
//! spectral segment c + i[-T, T].
use zeta_strings::operator_model::{
    op_function_norm, segment_spectrum, SpectralFunction, TruncatedShift,
};
use zeta_strings::zeta_core::EvalOptions;

fn main() -> Result<(), zeta_strings::Error> {
    let o = EvalOptions::default();
    for (c, t) in [(2.0, 10.0), (0.75, 30.0), (0.5, 14.2)] {
        let sh = TruncatedShift::new(c, t)?;
        let seg = segment_spectrum(&sh);
        let id = op_function_norm(&sh, &SpectralFunction::Identity, 1e-10, &o)?;
        let z = op_function_norm(&sh, &SpectralFunction::Zeta, 1e-8, &o)?;
        println!(
            "c={c} T={t}: segment [{}, {}], |identity| {:.6}, |zeta| {:.6} at tau {:.4} ({} evaluations)",
            seg.tau_lo, seg.tau_hi, id.norm, z.norm, z.tau_star, z.evaluations
        );
    }
    let pole = op_function_norm(
        &TruncatedShift::new(1.0, 1.0)?,
        &SpectralFunction::Zeta,
        1e-8,
        &o,
    );
    println!("c=1: {}", pole.unwrap_err().name());
    Ok(())
}
