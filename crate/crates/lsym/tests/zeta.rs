use lsym::exact::{q, qr};
use lsym::lie_core::{build_group, GroupSpec};
use lsym::parabolic::build_structure;
use lsym::zeta::{
    class_halfdet, eta_traces, factorization_residual, laurent_constants, r_rho, selberg_tail_bound, sigma_grid,
    synthetic_laurent_samples, synthetic_spectrum, tail_bound, torsion_laurent_relation, xi_eta, xi_rho, z_eta,
    GeodesicClass, LaurentSample, SpectrumDataset, SplitData, SyntheticConfig, TraceModel,
};
use lsym::Error;
use num::complex::Complex64;
use num::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn split(spec: GroupSpec) -> SplitData {
    SplitData::from(&build_structure(&build_group(&spec).unwrap()).unwrap())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn class(length: f64, angles: Vec<f64>) -> GeodesicClass {
    GeodesicClass {
        id: "c".into(),
        length,
        holonomy_angles: angles,
        index: Rational64::from_integer(1),
        trace_rho_re: 1.0,
        trace_rho_im: 0.0,
        iterate: 1,
    }
}

#[test]
fn empty_dataset() {
    let ds = SpectrumDataset::empty(3.0);
    let sp = split(GroupSpec::so(3, 1));
    assert_eq!(xi_eta(&ds, &sp, 0, c(2.0)).unwrap(), c(0.0));
    assert_eq!(z_eta(&ds, &sp, 1, c(2.0)).unwrap(), c(1.0));
    assert_eq!(r_rho(&ds, 1, c(2.0)), c(1.0));
    assert_eq!(factorization_residual(&ds, &sp, c(2.0)).unwrap(), 0.0);
}

#[test]
fn single_class_by_hand() {
    let (len, phi) = (1.7, 0.9);
    let mut ds = SpectrumDataset::empty(2.0);
    ds.classes.push(class(len, vec![phi]));
    let sp = split(GroupSpec::so(3, 1));
    // |α| = 1, l = 1: halfdet = e^ℓ |1 − e^{−ℓ+iφ}|²
    let hd = len.exp() * (1.0 - 2.0 * (-len).exp() * phi.cos() + (-2.0 * len).exp());
    assert!((class_halfdet(&sp, len, &[phi]) - hd).abs() < 1e-14 * hd);
    let sigma = 2.5;
    let expect = [1.0, 2.0 * phi.cos(), 1.0].map(|e| -e * (-sigma * len).exp() / hd);
    for (j, e) in expect.iter().enumerate() {
        let v = xi_eta(&ds, &sp, j, c(sigma)).unwrap();
        assert!((v.re - e).abs() < 1e-15 && v.im == 0.0);
    }
    assert!((xi_rho(&ds, c(sigma)).re - (-sigma * len).exp()).abs() < 1e-16);
    for s in [0.3, 2.0, 7.5] {
        assert!(factorization_residual(&ds, &sp, Complex64::new(s, 0.4)).unwrap() <= 1e-14);
    }
}

#[test]
fn eta_traces_are_elementary_symmetric_functions() {
    let angles = [0.4, 1.3];
    let e: Vec<Complex64> = angles.iter().flat_map(|&a| [Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, -a)]).collect();
    let mut esym = vec![c(1.0)];
    for x in &e {
        let mut next = vec![c(0.0); esym.len() + 1];
        for (i, v) in esym.iter().enumerate() {
            next[i] += v;
            next[i + 1] += v * x;
        }
        esym = next;
    }
    let t = eta_traces(&angles);
    assert_eq!(t.len(), 5);
    for (a, b) in t.iter().zip(&esym) {
        assert!((a - b.re).abs() < 1e-14 && b.im.abs() < 1e-14);
    }
}

#[test]
fn factorization_on_synthetic_spectra() {
    for (seed, spec) in [(1, GroupSpec::so(3, 1)), (2, GroupSpec::sl(3)), (3, GroupSpec::so(5, 3))] {
        let sp = split(spec.clone());
        let mut cfg = SyntheticConfig::new(50, sp.l, seed);
        cfg.trace_model = TraceModel::Phases;
        cfg.rho_rank = 2;
        let ds = synthetic_spectrum(&cfg).unwrap();
        ds.validate().unwrap();
        let s0 = ds.abscissa().unwrap();
        for s in sigma_grid(s0 + 1.0, s0 + 5.0, 0.25).unwrap() {
            for im in [0.0, -1.1, 3.0] {
                let r = factorization_residual(&ds, &sp, Complex64::new(s, im)).unwrap();
                assert!(r <= 1e-12, "{spec} σ={s}+{im}i: {r:e}");
            }
        }
    }
}

#[test]
fn angle_mismatch_is_rejected() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(5, 2, 0)).unwrap();
    assert!(matches!(xi_eta(&ds, &split(GroupSpec::so(3, 1)), 0, c(3.0)), Err(Error::InvalidInput(_))));
}

#[test]
fn synthetic_spectrum_respects_its_counting_bound() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(200, 1, 4)).unwrap();
    ds.validate().unwrap();
    let cc = ds.counting.unwrap();
    for (n, cl) in ds.classes.iter().enumerate() {
        assert!((n + 1) as f64 <= cc.constant * (cc.rate * cl.length).exp() * (1.0 + 1e-12));
    }
    let again = synthetic_spectrum(&SyntheticConfig::new(200, 1, 4)).unwrap();
    assert_eq!(ds, again);
    assert_ne!(ds, synthetic_spectrum(&SyntheticConfig::new(200, 1, 5)).unwrap());
}

#[test]
fn real_for_real_traces() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(50, 1, 9)).unwrap();
    let sp = split(GroupSpec::so(3, 1));
    for s in [2.0, 3.5] {
        assert_eq!(xi_rho(&ds, c(s)).im, 0.0);
        for j in 0..3 {
            assert_eq!(xi_eta(&ds, &sp, j, c(s)).unwrap().im, 0.0);
        }
    }
}

#[test]
fn angle_negation_duality() {
    let sp = split(GroupSpec::so(5, 3));
    let ds = synthetic_spectrum(&SyntheticConfig::new(50, sp.l, 12)).unwrap();
    let neg = ds.negate_angles();
    for s in [2.0, 3.0] {
        for j in 0..=2 * sp.l {
            let a = z_eta(&ds, &sp, j, c(s)).unwrap();
            let b = z_eta(&neg, &sp, 2 * sp.l - j, c(s)).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm(), "j={j}");
        }
    }
}

#[test]
fn delta_not_one_route() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(20, 1, 1)).unwrap();
    for delta in [0, 2, 3] {
        assert_eq!(r_rho(&ds, delta, Complex64::new(0.1, 2.0)), c(1.0));
    }
    assert_ne!(r_rho(&ds, 1, c(2.0)), c(1.0));
}

#[test]
fn tail_bounds() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(50, 1, 3)).unwrap();
    let sp = split(GroupSpec::so(3, 1));
    assert!(tail_bound(&ds, 3.0).unwrap() < 1e-6);
    assert_eq!(tail_bound(&ds, 0.5).unwrap(), f64::INFINITY);
    assert_eq!(tail_bound(&ds, 1.0).unwrap(), f64::INFINITY);
    let mut prev = f64::INFINITY;
    for s in [1.5, 2.0, 4.0, 8.0, 50.0] {
        let b = tail_bound(&ds, s).unwrap();
        assert!(b < prev);
        prev = b;
    }
    assert!(prev < 1e-100);
    // doubling the cutoff at σ > σ₀ shrinks the bound by at least e^{−(σ−σ₀)L}
    let mut doubled = ds.clone();
    doubled.cutoff_length *= 2.0;
    for s in [1.5, 3.0] {
        let ratio = tail_bound(&doubled, s).unwrap() / tail_bound(&ds, s).unwrap();
        assert!(ratio <= (-(s - 1.0) * ds.cutoff_length).exp() * (1.0 + 1e-12));
    }
    for j in 0..3 {
        let b = selberg_tail_bound(&ds, &sp, j, 3.0).unwrap();
        assert!(b.is_finite() && b > 0.0);
        assert!(selberg_tail_bound(&ds, &sp, j, 5.0).unwrap() < b);
    }
    let mut bare = ds.clone();
    bare.counting = None;
    assert!(matches!(tail_bound(&bare, 3.0), Err(Error::MissingCountingConstants)));
}

#[test]
fn truncation_error_is_within_the_tail_bound() {
    let full = synthetic_spectrum(&SyntheticConfig::new(400, 1, 21)).unwrap();
    let mut cut = full.clone();
    cut.classes.truncate(50);
    cut.cutoff_length = cut.classes.last().unwrap().length;
    for s in [2.0, 3.0] {
        let diff = (xi_rho(&full, c(s)) - xi_rho(&cut, c(s))).norm();
        assert!(diff <= tail_bound(&cut, s).unwrap());
    }
}

#[test]
fn laurent_examples() {
    let acyclic = laurent_constants(&[0, 0, 0], 1, &q(1)).unwrap();
    assert_eq!((acyclic.c_rho_exact.clone(), acyclic.r_rho), (q(1), 0));
    let one = laurent_constants(&[1, 0, 1], 1, &q(1)).unwrap();
    assert_eq!((one.c_rho_exact.clone(), one.r_rho), (qr(-1, 4), -2));
    assert!((one.c_rho + 0.25).abs() < 1e-16);
    // l = 2: C = (−16|α|²)^{−r₀} (−4|α|²)^{r₁}
    let two = laurent_constants(&[1, 2, 0, 2, 1], 2, &qr(1, 2)).unwrap();
    assert_eq!(two.c_rho_exact, qr(-1, 8) * q(4));
    assert_eq!((two.r_rho, two.chi_prime), (2, 2));
    assert!(two.consistent());
    assert!(matches!(laurent_constants(&[1, 0, 2], 1, &q(1)), Err(Error::DualityViolation(0))));
    assert!(laurent_constants(&[1, 0], 1, &q(1)).is_err());
}

#[test]
fn laurent_consistency_for_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let l = rng.gen_range(1..=5usize);
        let half: Vec<i64> = (0..=l).map(|_| rng.gen_range(0..9)).collect();
        let r: Vec<i64> = (0..=2 * l).map(|j| half[j.min(2 * l - j)]).collect();
        let d = laurent_constants(&r, l, &qr(rng.gen_range(1..9), rng.gen_range(1..5))).unwrap();
        assert!(d.consistent(), "{r:?}");
        assert_ne!(d.c_rho, 0.0);
    }
}

#[test]
fn torsion_fit_recovers_the_leading_term() {
    for (r, l) in [(vec![1, 0, 1], 1), (vec![0, 0, 0], 1), (vec![2, 1, 3, 1, 2], 2)] {
        let d = laurent_constants(&r, l, &qr(3, 2)).unwrap();
        let sigmas: Vec<f64> = (1..=8).map(|k| 1e-3 * k as f64).collect();
        let fit = torsion_laurent_relation(&synthetic_laurent_samples(&d, 1.7, &sigmas), &d).unwrap();
        assert_eq!(fit.exponent, fit.predicted_exponent, "{r:?}");
        assert!(fit.relative_residual <= 1e-8, "{r:?}: {fit:?}");
    }
    let acyclic = laurent_constants(&[0, 0, 0], 1, &q(1)).unwrap();
    let s = synthetic_laurent_samples(&acyclic, 0.8, &[1e-6]);
    assert!((s[0].ruelle / s[0].torsion - 1.0).abs() < 1e-6);
    assert!(matches!(torsion_laurent_relation(&[], &acyclic), Err(Error::InsufficientSamples(_))));
    let zero = [LaurentSample { sigma: 0.1, ruelle: 1.0, torsion: 0.0 }; 3];
    assert!(matches!(torsion_laurent_relation(&zero, &acyclic), Err(Error::InsufficientSamples(_))));
}

#[test]
fn csv_and_json_round_trip() {
    let mut cfg = SyntheticConfig::new(30, 2, 5);
    cfg.trace_model = TraceModel::Phases;
    cfg.rho_rank = 3;
    let mut ds = synthetic_spectrum(&cfg).unwrap();
    ds.classes[3].index = Rational64::new(1, 3);
    ds.classes[3].iterate = 3;
    ds.volume = Some(12.5);
    assert_eq!(SpectrumDataset::from_json(&ds.to_json()).unwrap(), ds);
    let back = SpectrumDataset::from_csv(&ds.to_csv()).unwrap();
    assert_eq!(back, ds);
    assert!(ds.to_csv().lines().any(|l| l.contains(",1/3,")));
}

#[test]
fn validation_errors() {
    let mut ds = SpectrumDataset::empty(2.0);
    ds.classes.push(class(1.5, vec![0.1]));
    ds.classes.push(class(1.0, vec![0.1]));
    assert!(ds.validate().is_err());
    ds.classes.swap(0, 1);
    ds.validate().unwrap();
    ds.classes.push(class(3.0, vec![0.1]));
    assert!(ds.validate().is_err());
    ds.classes.pop();
    ds.negatively_curved = true;
    ds.classes[0].iterate = 2;
    assert!(ds.validate().is_err());
    ds.classes[0].index = Rational64::new(1, 2);
    ds.validate().unwrap();
    assert!(SpectrumDataset::from_csv("id,length\nx,1").is_err());
    assert!(SpectrumDataset::from_json("{").is_err());
}

#[test]
fn rescaled_lengths_shift_the_argument() {
    let ds = synthetic_spectrum(&SyntheticConfig::new(50, 1, 6)).unwrap();
    let f: f64 = 2f64.sqrt();
    let scaled = ds.rescale_lengths(f);
    for s in [2.0, 3.0] {
        let a = xi_rho(&scaled, c(s));
        let b = xi_rho(&ds, c(s * f));
        assert!((a - b).norm() <= 1e-14 * b.norm());
    }
    assert!((scaled.abscissa().unwrap() - 1.0 / f).abs() < 1e-15);
}

#[test]
fn sigma_grids() {
    assert_eq!(sigma_grid(2.0, 5.0, 0.1).unwrap().len(), 31);
    assert_eq!(sigma_grid(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
    assert!(sigma_grid(1.0, 2.0, 0.0).is_err());
    assert!(sigma_grid(3.0, 2.0, 0.1).is_err());
}
