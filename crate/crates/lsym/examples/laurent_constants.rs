//! Leading Laurent data of the Ruelle zeta function at the origin from the
//! orders of vanishing of the Selberg factors, and the recovered relation to
//! a torsion value on synthetic samples.

use lsym::zeta::{laurent_constants, synthetic_laurent_samples, torsion_laurent_relation};
use lsym::exact::qr;

fn main() -> lsym::error::Result<()> {
    let cases: [(&[i64], (i64, i64)); 4] = [(&[1, 0, 1], (1, 1)), (&[0, 0, 0], (3, 2)), (&[1, 2, 1], (1, 1)), (&[1, 0, 0, 0, 1], (1, 1))];
    for (r, (p, q)) in cases {
        let d = laurent_constants(r, (r.len() - 1) / 2, &qr(p, q))?;
        println!(
            "r = {r:?}, |α|² = {p}/{q}: r_ρ = {}, χ' = {}, C_ρ = {} ≈ {:.6}, consistent: {}",
            d.r_rho,
            d.chi_prime,
            d.c_rho_exact,
            d.c_rho,
            d.consistent()
        );
        let sigmas: Vec<f64> = (1..=8).map(|k| 1e-3 * k as f64).collect();
        let fit = torsion_laurent_relation(&synthetic_laurent_samples(&d, 0.37, &sigmas), &d)?;
        println!(
            "  fitted exponent {} (predicted {}), coefficient {:.6} (predicted {:.6})",
            fit.exponent, fit.predicted_exponent, fit.coefficient, fit.predicted_coefficient
        );
    }
    Ok(())
}
