//! Exact parabolic data for the δ = 1 groups: weights of 𝔫, 𝔭_𝔪 and the
//! 𝔨_𝔪 roots, the normalized |α|², and the Casimir shifts on Λʲ(𝔫*).

use lsym::checks::delta_one_groups;
use lsym::lie_core::build_group;
use lsym::parabolic::build_structure;

fn main() -> lsym::error::Result<()> {
    for spec in delta_one_groups() {
        let g = build_group(&spec)?;
        let s = build_structure(&g)?;
        let sum = s.summary()?;
        let (pm, km) = s.m_over_t_weights()?;
        println!("{spec}: dim 𝔤 = {}, l = {}, dim 𝔫 = {}", g.dim(), sum.l, sum.dim_n);
        println!("  |α|² = {}, Tr[U^⊥] = {}", sum.alpha_norm_sq, sum.trace_uperp);
        println!("  𝔫 weights    {:?}", s.n_weights.terms().keys().map(|w| w.to_string()).collect::<Vec<_>>());
        println!("  𝔭_𝔪 weights  {:?}", pm.terms().keys().map(|w| w.to_string()).collect::<Vec<_>>());
        println!("  𝔨_𝔪 roots    {:?}", km.terms().keys().map(|w| w.to_string()).collect::<Vec<_>>());
        for j in 0..=2 * s.l {
            let c = s.casimir_shift(j)?;
            println!("  Λ^{j}(𝔫*): Casimir shift {} (residual {:.1e})", c.sigma, c.residual());
        }
        println!("  invariants hold: {}", s.check_invariants().all());
    }
    Ok(())
}
