//! Semisimple orbital integrals by Gauss–Hermite quadrature of the
//! explicit integrand against the closed form on the reduced torus.

use lsym::lie_core::{build_group, GroupSpec};
use lsym::orbital::{OrbitalIntegrator, ClosedForm, OrbitalRequest};
use lsym::parabolic::{build_structure, HElement};

fn main() -> lsym::error::Result<()> {
    for (spec, theta) in [(GroupSpec::so(3, 1), vec![1.1]), (GroupSpec::sl(3), vec![0.7]), (GroupSpec::so(5, 1), vec![0.4, 1.3])] {
        let g = build_group(&spec)?;
        let s = build_structure(&g)?;
        let cf = ClosedForm::new(&s)?;
        let integrator = OrbitalIntegrator::new(&g);
        let h = HElement { length: 0.8, theta };
        for t in [0.5, 1.0, 2.0] {
            for j in 0..=2 * s.l {
                let req = OrbitalRequest { gamma: s.element(&h), character: s.eta_hat_character(j)?, t, quad_order: 20 };
                let quad = integrator.integrate(&req)?;
                let exact = cf.trg(&h, j, t)?;
                println!(
                    "{spec} t={t} j={j}: quadrature {:+.12e} (order {}), closed form {:+.12e}, rel diff {:.1e}",
                    quad.value,
                    quad.order,
                    exact.value,
                    (quad.value - exact.value).abs() / exact.value.abs()
                );
            }
        }
    }
    Ok(())
}
