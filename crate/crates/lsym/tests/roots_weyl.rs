use std::f64::consts::PI;

use lsym::exact::qr;
use lsym::lie_core::{build_group, GroupSpec};
use lsym::roots_weyl::{
    bott_euler_ratio, kostant_check, root_system, root_system_of, weyl_integrate_algebra, Rat, VirtualCharacter,
    Weight,
};
use lsym::Error;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn compact_hosts() -> Vec<GroupSpec> {
    // so(3) ⊂ sl3, so(5) ⊂ so(5,1), so(3)⊕so(3) ⊂ so(3,3), so(7) ⊂ so(7,1), so(5)⊕so(3) ⊂ so(5,3)
    vec![GroupSpec::sl(3), GroupSpec::so(5, 1), GroupSpec::so(3, 3), GroupSpec::so(7, 1), GroupSpec::so(5, 3)]
}

#[test]
fn root_counts_and_weyl_orders() {
    let expect = [(1, 2), (4, 8), (2, 4), (9, 48), (5, 16)];
    for (s, (npos, w)) in compact_hosts().into_iter().zip(expect) {
        let rs = root_system(&build_group(&s).unwrap()).unwrap();
        assert_eq!(rs.positive.len() * 2, rs.roots.len());
        assert_eq!((rs.positive.len(), rs.weyl_order()), (npos, w), "{s}");
        assert!(rs.weyl_permutes_roots());
        assert!(rs.weyl.iter().all(|e| e.sign.abs() == 1));
        assert!(rs.is_dominant(&rs.rho));
    }
}

#[test]
fn so5_has_two_root_lengths() {
    let rs = root_system(&build_group(&GroupSpec::so(5, 1)).unwrap()).unwrap();
    let mut lens: Vec<Rat> = rs.positive.iter().map(|a| rs.frame.pair(a, a)).collect();
    lens.sort();
    lens.dedup();
    assert_eq!(lens.len(), 2);
}

#[test]
fn product_roots_are_the_union() {
    let rs = root_system(&build_group(&GroupSpec::so(3, 3)).unwrap()).unwrap();
    // two orthogonal A1 factors
    assert_eq!(rs.simple.len(), 2);
    assert_eq!(rs.frame.pair(&rs.simple[0], &rs.simple[1]), Rat::from_integer(0));
}

#[test]
fn denominator_identity_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in compact_hosts() {
        let rs = root_system(&build_group(&s).unwrap()).unwrap();
        for _ in 0..50 {
            let y: Vec<Complex64> = (0..rs.rank()).map(|_| Complex64::new(rng.gen_range(-3.0..3.0), 0.0)).collect();
            let lhs = rs.weyl_denominator(&y);
            let rhs = rs.weyl_alternating_sum(&Weight::zero(rs.rank()), &y);
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "{s}");
        }
        let zero = vec![Complex64::new(0.0, 0.0); rs.rank()];
        assert_eq!(rs.weyl_denominator(&zero).norm(), 0.0);
    }
}

#[test]
fn so3_denominator_matches_eigenvalue_product() {
    // σ = Π over positive eigenvalues iμ of ad(Y) on 𝔨 of (e^{iμ/2} − e^{−iμ/2})
    let g = build_group(&GroupSpec::sl(3)).unwrap();
    let rs = root_system(&g).unwrap();
    let y = 0.83;
    let ad = g.ad_ortho(&rs.frame.vector(&[y]));
    let k = g.k_indices();
    let sub = nalgebra::DMatrix::from_fn(k.len(), k.len(), |i, j| ad[(k[i], k[j])]);
    let mu = lsym::numeric::joint_spectrum(&[sub]).unwrap();
    let top = mu.iter().map(|m| m[0]).fold(f64::MIN, f64::max);
    let direct = Complex64::new(0.0, 2.0 * (top / 2.0).sin());
    let sigma = rs.weyl_denominator(&[Complex64::new(y, 0.0)]);
    assert!((sigma - direct).norm() < 1e-12);
}

#[test]
fn character_formula_vs_weight_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = build_group(&GroupSpec::so(5, 1)).unwrap();
    let rs = root_system(&g).unwrap();
    // adjoint representation of so(5): highest root
    let highest = rs.positive.iter().max_by(|a, b| rs.frame.pair(a, &rs.rho).cmp(&rs.frame.pair(b, &rs.rho))).unwrap().clone();
    let k: Vec<_> = g.k_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    let adjoint = rs.frame.weights_on_exact(&g, &k).unwrap();
    for _ in 0..20 {
        let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let chi = rs.weyl_character(&highest, &y).unwrap();
        let direct = adjoint.eval_torus(&y);
        assert!((chi - direct).norm() < 1e-10);
        let z: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let lhs = chi * rs.weyl_denominator(&z);
        let rhs = rs.weyl_alternating_sum(&highest, &z);
        assert!((lhs - rhs).norm() < 1e-10);
    }
    assert_eq!(rs.weyl_dimension(&highest), Rat::from_integer(10));
}

#[test]
fn so3_fundamental_character_is_rotation_trace() {
    let g = build_group(&GroupSpec::sl(3)).unwrap();
    let rs = root_system(&g).unwrap();
    let lam = rs.positive[0].clone();
    let y = 1.1;
    let chi = rs.weyl_character(&lam, &[y]).unwrap();
    let rot = g.exp_matrix(&rs.frame.vector(&[y]));
    assert!((chi.re - rot.trace()).abs() < 1e-12);
    assert!((rs.weyl_character(&Weight::zero(1), &[y]).unwrap().re - 1.0).abs() < 1e-14);
    // at the identity the limit gives the dimension
    assert!((rs.weyl_character(&lam, &[0.0]).unwrap().re - 3.0).abs() < 1e-9);
    assert!(rs.weyl_character(&lam.neg(), &[y]).is_err());
}

#[test]
fn kostant_strange_formula() {
    let so3 = kostant_check(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    assert_eq!((so3.lhs.clone(), so3.rhs.clone()), (qr(1, 8), qr(1, 8)));
    let so5 = kostant_check(&build_group(&GroupSpec::so(5, 1)).unwrap()).unwrap();
    assert!(so5.residual <= 1e-12);
    let pair = kostant_check(&build_group(&GroupSpec::so(3, 3)).unwrap()).unwrap();
    assert!(pair.residual <= 1e-12);
    let single = kostant_check(&build_group(&GroupSpec::so(3, 1)).unwrap()).unwrap();
    assert_eq!(pair.lhs, &single.lhs * qr(2, 1));
    assert_eq!(pair.rhs, &single.rhs * qr(2, 1));
}

#[test]
fn gaussian_through_the_torus() {
    for s in [GroupSpec::sl(3), GroupSpec::so(3, 1), GroupSpec::so(5, 1)] {
        let g = build_group(&s).unwrap();
        let rs = root_system(&g).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let v = weyl_integrate_algebra(&rs, |_| 1.0, t, 40, true).unwrap();
            let exact = (2.0 * PI * t).powf(g.dim_k() as f64 / 2.0);
            assert!((v / exact - 1.0).abs() < 1e-8, "{s} t={t}: {v} vs {exact}");
        }
        assert_eq!(weyl_integrate_algebra(&rs, |_| 0.0, 1.0, 20, true).unwrap(), 0.0);
        assert!(matches!(weyl_integrate_algebra(&rs, |_| 1.0, 1.0, 20, false), Err(Error::NotInvariant)));
    }
}

#[test]
fn bott_ratios() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let s = lsym::parabolic::build_structure(&g).unwrap();
    let (k, km) = (s.k_roots().unwrap(), s.km_roots().unwrap());
    assert_eq!(bott_euler_ratio(&k, &km).unwrap(), Rat::from_integer(2));
    assert_eq!(bott_euler_ratio(&k, &k).unwrap(), Rat::from_integer(1));
    let g = build_group(&GroupSpec::so(5, 3)).unwrap();
    let s = lsym::parabolic::build_structure(&g).unwrap();
    assert_eq!(bott_euler_ratio(&s.k_roots().unwrap(), &s.km_roots().unwrap()).unwrap(), Rat::from_integer(4));
    let other = root_system(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
    assert!(matches!(bott_euler_ratio(&k, &other), Err(Error::TorusMismatch)));
}

#[test]
fn non_maximal_torus_is_rejected() {
    let g = build_group(&GroupSpec::so(5, 1)).unwrap();
    let frame = lsym::roots_weyl::TorusFrame::new(&g, vec![g.basis_vector(g.torus[0])]);
    let k: Vec<_> = g.k_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    assert!(matches!(root_system_of(&g, frame, &k), Err(Error::NotMaximalTorus { .. })));
}

#[test]
fn lambda_ring_relations() {
    let c = VirtualCharacter::from_weights(2, [Weight::from_ints(&[1, 0]), Weight::from_ints(&[-1, 0]), Weight::from_ints(&[0, 2])]);
    let d = VirtualCharacter::from_weights(2, [Weight::from_ints(&[0, 1]), Weight::zero(2)]);
    // Λ²(c ⊕ d) = Λ²c ⊕ c⊗d ⊕ Λ²d
    let lhs = c.add(&d).exterior(2);
    let rhs = c.exterior(2).add(&c.tensor(&d)).add(&d.exterior(2));
    assert_eq!(lhs, rhs);
    // top power is the determinant line and higher powers vanish
    assert_eq!(c.exterior(3), VirtualCharacter::monomial(Weight::from_ints(&[0, 2]), 1));
    assert!(c.exterior(4).is_zero());
    assert_eq!(c.adams(2).degree(), 3);
}
