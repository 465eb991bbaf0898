//! Root systems of maximal compact subalgebras, their Weyl groups and the
//! strange formula |ρ|² = dim 𝔨 / 24 under the normalized form.

use lsym::lie_core::{build_group, GroupSpec};
use lsym::roots_weyl::{kostant_check, rat_f64, root_system, Weight};

fn main() -> lsym::error::Result<()> {
    for spec in [GroupSpec::sl(3), GroupSpec::so(5, 1), GroupSpec::so(3, 3), GroupSpec::so(7, 1)] {
        let g = build_group(&spec)?;
        let rs = root_system(&g)?;
        let k = kostant_check(&g)?;
        println!(
            "{spec}: rank 𝔨 = {}, {} positive roots, |W| = {}, vol(K/T) = {:.6}",
            rs.rank(),
            rs.positive.len(),
            rs.weyl_order(),
            rs.volume_k_over_t()
        );
        println!("  strange formula: {} vs {} (residual {:.1e})", k.lhs, k.rhs, k.residual);
        let rho2 = rs.rho.scale(2.into());
        let dim = rs.weyl_dimension(&Weight::zero(rs.rank()).add(&rho2));
        println!("  dim V(2ρ) = {}", rat_f64(&dim));
    }
    Ok(())
}
