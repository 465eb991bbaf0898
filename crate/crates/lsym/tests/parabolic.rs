use std::f64::consts::PI;
use std::time::Instant;

use lsym::exact::{q, qr};
use lsym::lie_core::{build_group, GroupSpec, KPart, SemisimpleElement};
use lsym::parabolic::{build_structure, p_weights, vanishing_supertrace, HElement};
use lsym::Error;
use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn delta_one() -> Vec<GroupSpec> {
    vec![GroupSpec::sl(3), GroupSpec::so(3, 1), GroupSpec::so(5, 3), GroupSpec::so(7, 1)]
}

#[test]
fn structure_invariants_are_exact() {
    let start = Instant::now();
    for s in delta_one() {
        let st = build_structure(&build_group(&s).unwrap()).unwrap();
        let rep = st.check_invariants();
        assert!(rep.all(), "{s}: {rep:?}");
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn alpha_and_l_values() {
    let sl3 = build_structure(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    assert_eq!((sl3.l, sl3.alpha_norm_sq.clone(), sl3.c.clone()), (1, qr(3, 2), q(3)));
    let so31 = build_structure(&build_group(&GroupSpec::so(3, 1)).unwrap()).unwrap();
    assert_eq!((so31.l, so31.alpha_norm_sq.clone()), (1, q(1)));
    assert_eq!(so31.alpha_pairing(&so31.b_dir), Some(so31.c.clone()));
    let so53 = build_structure(&build_group(&GroupSpec::so(5, 3)).unwrap()).unwrap();
    assert_eq!((so53.dim_n(), so53.l), (6, 3));
    // ⟨α, a₀⟩ = 1
    assert_eq!(sl3.alpha_pairing(&sl3.a0), Some(q(1)));
}

#[test]
fn products_with_compact_center_factors() {
    let g = build_group(&GroupSpec::product(vec![GroupSpec::so(3, 1), GroupSpec::sl(2)])).unwrap();
    let s = build_structure(&g).unwrap();
    assert!(s.check_invariants().all());
    assert_eq!(s.l, 1);
    assert!(s.character_identities().unwrap().all());
}

#[test]
fn unsupported_delta_one_factors() {
    let g = build_group(&GroupSpec::so(1, 1)).unwrap();
    assert!(matches!(build_structure(&g), Err(Error::UnsupportedDeltaOneFactor(_))));
    let g = build_group(&GroupSpec::so(2, 2)).unwrap();
    assert!(matches!(build_structure(&g), Err(Error::DeltaNotOne(0))));
    let g = build_group(&GroupSpec::product(vec![GroupSpec::sl(3), GroupSpec::so(3, 1)])).unwrap();
    assert!(matches!(build_structure(&g), Err(Error::DeltaNotOne(2))));
}

fn random_h(rng: &mut ChaCha8Rng, rank: usize) -> HElement {
    HElement { length: rng.gen_range(0.05..2.0), theta: (0..rank).map(|_| rng.gen_range(-PI..PI)).collect() }
}

#[test]
fn halfdet_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in delta_one() {
        let st = build_structure(&build_group(&s).unwrap()).unwrap();
        for _ in 0..100 {
            let h = random_h(&mut rng, st.frame.rank());
            let rep = st.halfdet_identity(&st.element(&h)).unwrap();
            assert!(rep.residual <= 1e-12, "{s}: {rep:?}");
            let prod = st.halfdet_product(&h);
            assert!((prod - rep.rhs).abs() <= 1e-12 * rep.rhs.abs());
        }
    }
}

#[test]
fn halfdet_examples() {
    let so31 = build_structure(&build_group(&GroupSpec::so(3, 1)).unwrap()).unwrap();
    let (l, phi) = (0.7f64, 1.3f64);
    let rep = so31.halfdet_identity(&so31.element(&HElement { length: l, theta: vec![phi] })).unwrap();
    let expect = l.exp() - 2.0 * phi.cos() + (-l).exp();
    assert!((rep.lhs - expect).abs() < 1e-12 * expect);
    let sl3 = build_structure(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    let rep = sl3.halfdet_identity(&sl3.element(&HElement { length: 1.0, theta: vec![0.0] })).unwrap();
    let x = 1.5f64.sqrt();
    let expect = x.exp() - 2.0 + (-x).exp();
    assert!((rep.lhs - expect).abs() < 1e-12 * expect);
    assert!((rep.rhs - expect).abs() < 1e-12 * expect);
}

#[test]
fn halfdet_is_theta_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let st = build_structure(&build_group(&GroupSpec::so(5, 3)).unwrap()).unwrap();
    for _ in 0..20 {
        let h = random_h(&mut rng, st.frame.rank());
        let flipped = HElement { length: -h.length, theta: h.theta.clone() };
        let a = st.halfdet_brute(&st.element(&h)).unwrap();
        let b = st.halfdet_brute(&st.element(&flipped)).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn halfdet_rejects_elements_outside_h() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let st = build_structure(&g).unwrap();
    let p0 = g.p_indices().into_iter().find(|&i| st.b_dir[i] == q(0)).unwrap();
    let mut a = vec![0.0; g.dim()];
    a[p0] = 1.0;
    let e = SemisimpleElement::new(a, KPart::Identity);
    assert!(matches!(st.halfdet_identity(&e), Err(Error::NotInH(_))));
    let m = SemisimpleElement::new(st.a1.clone(), KPart::Matrix(DMatrix::identity(4, 4)));
    assert!(matches!(st.halfdet_identity(&m), Err(Error::NotInH(_))));
}

#[test]
fn representation_ring_identities() {
    for s in [GroupSpec::sl(3), GroupSpec::so(3, 1), GroupSpec::so(5, 3)] {
        let st = build_structure(&build_group(&s).unwrap()).unwrap();
        let rep = st.character_identities().unwrap();
        assert!(rep.all(), "{s}: {rep:?}");
    }
}

#[test]
fn family_lifts() {
    let st = build_structure(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    let lifts = st.lift_exterior_powers().unwrap();
    assert_eq!(lifts[0].character, lsym::roots_weyl::VirtualCharacter::one(1));
    // σ₃ − 1 has the two weights ±1
    let e = st.family_lift().unwrap();
    assert_eq!(e.degree(), 2);
    assert_eq!(e, st.n_weights);
    let st = build_structure(&build_group(&GroupSpec::so(5, 3)).unwrap()).unwrap();
    let e = st.family_lift().unwrap();
    assert_eq!(e.degree(), 4 + 2);
    assert!(st.lift_exterior_powers().unwrap().iter().all(|l| l.plus.sub(&l.minus) == l.character));
}

#[test]
fn casimir_tables() {
    let so31 = build_structure(&build_group(&GroupSpec::so(3, 1)).unwrap()).unwrap();
    let sig: Vec<_> = (0..3).map(|j| so31.casimir_shift(j).unwrap().sigma).collect();
    assert_eq!(sig, vec![q(-1), q(0), q(-1)]);
    let sl3 = build_structure(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    let sig: Vec<_> = (0..3).map(|j| sl3.casimir_shift(j).unwrap().sigma).collect();
    assert_eq!(sig, vec![qr(-3, 2), q(0), qr(-3, 2)]);
    for s in delta_one() {
        let st = build_structure(&build_group(&s).unwrap()).unwrap();
        assert_eq!(st.trace_uperp(), st.trace_uperp_compact(), "{s}");
        assert_eq!(st.trace_uperp(), st.trace_uperp_from_casimirs(), "{s}");
        for j in 0..=2 * st.l {
            let c = st.casimir_shift(j).unwrap();
            assert!(c.residual() <= 1e-12, "{s} j={j}: {c:?}");
        }
        assert_eq!(st.casimir_shift(st.l).unwrap().sigma, q(0));
    }
}

/// d/db det(1 − e^b M) at b = 0 from the Schur eigenvalues of M.
fn supertrace_oracle(m: &DMatrix<Complex64>) -> Complex64 {
    let ev = m.clone().schur().eigenvalues().expect("complex Schur form is triangular");
    let one = Complex64::new(1.0, 0.0);
    (0..ev.len())
        .map(|i| -ev[i] * (0..ev.len()).filter(|&k| k != i).map(|k| one - ev[k]).product::<Complex64>())
        .sum()
}

fn p_operator(g: &lsym::lie_core::ReductiveGroup, theta: &[f64], y: &[f64]) -> DMatrix<Complex64> {
    let adk = g.ad_exp_ortho(&g.torus_vector(theta)).map(|x| Complex64::new(x, 0.0));
    let ady = g.ad_ortho(&g.torus_vector(y)).map(|x| Complex64::new(0.0, x));
    let m = adk * ady.exp();
    let p = g.p_indices();
    DMatrix::from_fn(p.len(), p.len(), |i, j| m[(p[i], p[j])])
}

#[test]
fn supertrace_nonzero_for_generic_sl3() {
    let g = build_group(&GroupSpec::sl(3)).unwrap();
    let pw = p_weights(&g).unwrap();
    let y = [0.37];
    let rep = vanishing_supertrace(&pw, &[0.0], &y);
    assert_eq!(rep.zero_factors, 1);
    let oracle = supertrace_oracle(&p_operator(&g, &[0.0], &y));
    assert!(Complex64::new(rep.re, rep.im).norm() > 1e-3);
    assert!((Complex64::new(rep.re, rep.im) - oracle).norm() < 1e-9);
}

#[test]
fn supertrace_vanishes_with_two_zero_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let g = build_group(&GroupSpec::so(5, 3)).unwrap();
    let pw = p_weights(&g).unwrap();
    let nonzero: Vec<_> = pw.terms().keys().filter(|w| !w.is_zero()).cloned().collect();
    let r = g.torus_rank();
    for _ in 0..25 {
        let w = &nonzero[rng.gen_range(0..nonzero.len())];
        let wf: Vec<f64> = w.0.iter().map(lsym::roots_weyl::rat_f64).collect();
        let ww: f64 = wf.iter().map(|x| x * x).sum();
        let mut theta: Vec<f64> = (0..r).map(|_| rng.gen_range(-PI..PI)).collect();
        let mut y: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = rng.gen_range(-1..=1) as f64;
        let wt = w.dot(&theta);
        let wy = w.dot(&y);
        for s in 0..r {
            theta[s] += (2.0 * PI * n - wt) * wf[s] / ww;
            y[s] -= wy * wf[s] / ww;
        }
        let rep = vanishing_supertrace(&pw, &theta, &y);
        assert!(rep.zero_factors >= 2);
        assert!(Complex64::new(rep.re, rep.im).norm() <= 1e-12, "{rep:?}");
        let oracle = supertrace_oracle(&p_operator(&g, &theta, &y));
        assert!(oracle.norm() <= 1e-8, "oracle {oracle}");
    }
}
