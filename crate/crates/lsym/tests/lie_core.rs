use lsym::exact::{self, q, Q};
use lsym::lie_core::{build_group, GroupSpec, KPart, SemisimpleElement};
use lsym::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn supported() -> Vec<GroupSpec> {
    vec![
        GroupSpec::sl(2),
        GroupSpec::sl(3),
        GroupSpec::so(3, 1),
        GroupSpec::so(2, 2),
        GroupSpec::so(5, 3),
        GroupSpec::so(7, 1),
        GroupSpec::line(),
        GroupSpec::product(vec![GroupSpec::sl(3), GroupSpec::so(2, 1)]),
    ]
}

#[test]
fn every_supported_group_validates() {
    for s in supported() {
        let g = build_group(&s).unwrap();
        assert!(g.validate().all(), "{s}");
        assert_eq!(g.dim_p() + g.dim_k(), g.dim());
    }
}

#[test]
fn sl3_bracket_with_b_on_n() {
    let g = build_group(&GroupSpec::sl(3)).unwrap();
    // b = diag(x,x,−2x) is the second diagonal generator; E₀₂ + E₂₀ and the
    // matching skew element combine into the elementary matrix E₀₂.
    let x = q(5);
    let mut b = exact::zeros(g.dim());
    b[1] = x.clone();
    let s02 = g.p_indices().into_iter().find(|&i| g.matrix(&g.basis_vector(i))[(0, 2)] == q(1)).unwrap();
    let a02 = g.k_indices().into_iter().find(|&i| g.matrix(&g.basis_vector(i))[(0, 2)] == q(1)).unwrap();
    let mut f = exact::zeros(g.dim());
    f[s02] = Q::new(1.into(), 2.into());
    f[a02] = Q::new(1.into(), 2.into());
    assert_eq!(g.bracket(&b, &f), exact::scale(&(q(3) * x), &f));
}

#[test]
fn adjoint_identity_and_leaving_algebra() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let x: Vec<f64> = (0..g.dim()).map(|i| 0.3 * i as f64 - 0.7).collect();
    let id = DMatrix::<f64>::identity(4, 4);
    let y = g.adjoint_action(&id, &x).unwrap();
    assert!(x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-14));
    // a diagonal scaling does not preserve so(3,1)
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 1.0, 1.0]));
    assert!(matches!(g.adjoint_action(&d, &x), Err(Error::NotInAlgebra { .. })));
}

#[test]
fn adjoint_of_e_a1_scales_n() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let s = lsym::parabolic::build_structure(&g).unwrap();
    let ea = g.exp_matrix(&s.a1);
    for f in &s.n {
        let fv = exact::to_f64_vec(f);
        let img = g.adjoint_action(&ea, &fv).unwrap();
        let factor = s.alpha_norm.exp();
        assert!(img.iter().zip(&fv).all(|(a, b)| (a - factor * b).abs() < 1e-12));
    }
}

#[test]
fn centralizers() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let id = SemisimpleElement::identity(&g);
    assert_eq!(g.centralizer_algebra(&id).unwrap().dim(), g.dim());
    let s = lsym::parabolic::build_structure(&g).unwrap();
    let e = SemisimpleElement::from_exact(s.b_dir.clone(), KPart::Identity);
    let z = g.centralizer_algebra(&e).unwrap();
    assert_eq!((z.p_ortho.ncols(), z.k_ortho.ncols()), (1, 1));
    // regular element of H: 𝔷(γ) = 𝔟 ⊕ 𝔱 has dimension rk_C = 2
    let gamma = s.element(&lsym::parabolic::HElement { length: 0.8, theta: vec![0.9] });
    assert_eq!(g.centralizer_algebra(&gamma).unwrap().dim(), 2);
    let sl3 = build_group(&GroupSpec::sl(3)).unwrap();
    let s3 = lsym::parabolic::build_structure(&sl3).unwrap();
    let gamma = s3.element(&lsym::parabolic::HElement { length: 0.8, theta: vec![0.9] });
    assert_eq!(sl3.centralizer_algebra(&gamma).unwrap().dim(), 2);
}

#[test]
fn semisimple_validation() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let s = lsym::parabolic::build_structure(&g).unwrap();
    // a in 𝔟 is not fixed by a rotation that moves it
    let mut bad_theta = vec![0.0; g.torus_rank()];
    bad_theta[0] = 0.4;
    let p0 = g.p_indices()[0];
    let mut a = vec![0.0; g.dim()];
    a[p0] = 1.0;
    let e = SemisimpleElement::new(a, KPart::Torus(bad_theta));
    assert!(g.centralizer_algebra(&e).is_err());
    let ok = s.element(&lsym::parabolic::HElement { length: 1.0, theta: vec![0.4] });
    assert!(ok.validate(&g).is_ok());
}

#[test]
fn delta_table() {
    let d = |s: GroupSpec| build_group(&s).unwrap().delta_invariant();
    assert_eq!(d(GroupSpec::sl(2)), 0);
    assert_eq!(d(GroupSpec::sl(3)), 1);
    assert_eq!(d(GroupSpec::so(3, 1)), 1);
    assert_eq!(d(GroupSpec::so(2, 2)), 0);
    assert_eq!(d(GroupSpec::so(5, 3)), 1);
    assert_eq!(d(GroupSpec::so(7, 1)), 1);
}

#[test]
fn delta_is_additive_on_products() {
    let specs = supported();
    for a in &specs[..5] {
        for b in &specs[..5] {
            let prod = GroupSpec::product(vec![a.clone(), b.clone()]);
            let d = build_group(&prod).unwrap().delta_invariant();
            let sum = build_group(a).unwrap().delta_invariant() + build_group(b).unwrap().delta_invariant();
            assert_eq!(d, sum, "{prod}");
        }
    }
}

#[test]
fn b_scale_multiplies_the_form() {
    let g = build_group(&GroupSpec::so(3, 1)).unwrap();
    let h = build_group(&GroupSpec::so(3, 1).with_scale(Q::new(3.into(), 2.into()))).unwrap();
    for i in 0..g.dim() {
        assert_eq!(&h.norm_sq[i], &(&g.norm_sq[i] * Q::new(3.into(), 2.into())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn b_invariance_on_random_pairs(which in 0usize..5, seed in proptest::collection::vec(-4i64..5, 48)) {
        let g = build_group(&supported()[which]).unwrap();
        let d = g.dim();
        let vec_from = |off: usize| -> Vec<Q> { (0..d).map(|i| q(seed[(i + off) % seed.len()])).collect() };
        let (x, y, z) = (vec_from(0), vec_from(7), vec_from(13));
        let lhs = g.b_form(&g.bracket(&z, &x), &y) + g.b_form(&x, &g.bracket(&z, &y));
        prop_assert_eq!(lhs, q(0));
        // Jacobi and antisymmetry
        let jac = exact::add(&exact::add(&g.bracket(&x, &g.bracket(&y, &z)), &g.bracket(&y, &g.bracket(&z, &x))), &g.bracket(&z, &g.bracket(&x, &y)));
        prop_assert!(exact::is_zero(&jac));
        prop_assert!(exact::is_zero(&g.bracket(&x, &x)));
    }
}
