//! Identity-check suites.
//!
//! Each suite recomputes one family of identities along two independent
//! routes and reports the worst residual against its tolerance. The `check`
//! subcommand and the acceptance target both run these.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, q, qr, Q};
use crate::lie_core::{build_group, GroupSpec, KPart, Part, ReductiveGroup, SemisimpleElement};
use crate::orbital::{self, OrbitalIntegrator, ClosedForm, OrbitalRequest};
use crate::parabolic::{self, build_structure, DeltaOneStructure, HElement};
use crate::roots_weyl::{self, VirtualCharacter};
use crate::zeta::{self, GeodesicClass, SpectrumDataset, SplitData, SyntheticConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Structure,
    Bracket,
    Halfdet,
    Characters,
    Kostant,
    Casimir,
    OrbitalCrosscheck,
    Vanishing,
    TimeIntegral,
    Factorization,
    Laurent,
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Structure,
        Suite::Bracket,
        Suite::Halfdet,
        Suite::Characters,
        Suite::Kostant,
        Suite::Casimir,
        Suite::OrbitalCrosscheck,
        Suite::Vanishing,
        Suite::TimeIntegral,
        Suite::Factorization,
        Suite::Laurent,
        Suite::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Bracket => "bracket",
            Suite::Halfdet => "halfdet",
            Suite::Characters => "characters",
            Suite::Kostant => "kostant",
            Suite::Casimir => "casimir",
            Suite::OrbitalCrosscheck => "orbital-crosscheck",
            Suite::Vanishing => "vanishing",
            Suite::TimeIntegral => "time-integral",
            Suite::Factorization => "factorization",
            Suite::Laurent => "laurent",
            Suite::Scaling => "scaling",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

/// A deliberate corruption used as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Shift one structure constant of sl3 by 1.
    StructureConstant,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structure-constant" | "bracket" => Ok(Fault::StructureConstant),
            _ => Err(Error::InvalidInput(format!("unknown fault '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst residual, or 0/1 for exact checks.
    pub metric: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn residual(name: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        CheckOutcome { name: name.into(), passed: metric <= tolerance, metric, tolerance }
    }

    fn exact(name: impl Into<String>, ok: bool) -> Self {
        CheckOutcome { name: name.into(), passed: ok, metric: if ok { 0.0 } else { 1.0 }, tolerance: 0.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    /// Wall time; left out of serialized output so reports are reproducible.
    #[serde(skip)]
    pub seconds: f64,
    pub outcomes: Vec<CheckOutcome>,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
    /// Datasets for the factorization suite; synthetic ones when empty.
    pub spectra: Vec<(GroupSpec, SpectrumDataset)>,
    /// σ values for the factorization suite; a grid over [σ₀+1, σ₀+5] when empty.
    pub sigmas: Vec<f64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 20240601, fault: None, spectra: Vec::new(), sigmas: Vec::new() }
    }
}

pub fn run_suite(suite: Suite, opts: &CheckOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let outcomes = match suite {
        Suite::Structure => structure()?,
        Suite::Bracket => bracket(opts.fault)?,
        Suite::Halfdet => halfdet(opts.seed)?,
        Suite::Characters => characters()?,
        Suite::Kostant => kostant()?,
        Suite::Casimir => casimir()?,
        Suite::OrbitalCrosscheck => orbital_crosscheck(opts.seed)?,
        Suite::Vanishing => vanishing(opts.seed)?,
        Suite::TimeIntegral => time_integral(opts.seed)?,
        Suite::Factorization => factorization(opts)?,
        Suite::Laurent => laurent(opts.seed)?,
        Suite::Scaling => scaling(opts.seed)?,
    };
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(SuiteReport { suite, passed, seconds: start.elapsed().as_secs_f64(), outcomes })
}

/// The groups of fundamental rank one the suites sweep over.
pub fn delta_one_groups() -> Vec<GroupSpec> {
    vec![GroupSpec::sl(3), GroupSpec::so(3, 1), GroupSpec::so(5, 3), GroupSpec::so(7, 1)]
}

fn structure_of(spec: &GroupSpec) -> Result<DeltaOneStructure> {
    build_structure(&build_group(spec)?)
}

fn random_h(rng: &mut ChaCha8Rng, rank: usize) -> HElement {
    HElement { length: rng.gen_range(0.1..2.0), theta: (0..rank).map(|_| rng.gen_range(-PI..PI)).collect() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

pub fn structure() -> Result<Vec<CheckOutcome>> {
    delta_one_groups()
        .iter()
        .map(|spec| Ok(CheckOutcome::exact(format!("{spec} splitting invariants"), structure_of(spec)?.check_invariants().all())))
        .collect()
}

pub fn bracket(fault: Option<Fault>) -> Result<Vec<CheckOutcome>> {
    let mut specs = vec![GroupSpec::sl(2), GroupSpec::line(), GroupSpec::product(vec![GroupSpec::sl(3), GroupSpec::so(3, 1)])];
    specs.extend(delta_one_groups());
    let mut out = Vec::new();
    for spec in specs {
        let mut g = build_group(&spec)?;
        let mut name = format!("{spec} bracket closure, Jacobi, invariance");
        if fault == Some(Fault::StructureConstant) && spec == GroupSpec::sl(3) {
            g = g.with_perturbed_constant(0, 1, 0, q(1));
            name.push_str(" (fault injected)");
        }
        out.push(CheckOutcome::exact(name, g.validate().all()));
    }
    Ok(out)
}

pub fn halfdet(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for spec in delta_one_groups() {
        let s = structure_of(&spec)?;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let h = random_h(&mut rng, s.frame.rank());
            worst = worst.max(s.halfdet_identity(&s.element(&h))?.residual);
        }
        out.push(CheckOutcome::residual(format!("{spec} brute determinant vs character sum (100 elements)"), worst, 1e-12));
    }
    Ok(out)
}

pub fn characters() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for spec in [GroupSpec::sl(3), GroupSpec::so(3, 1), GroupSpec::so(5, 3)] {
        let rep = structure_of(&spec)?.character_identities()?;
        out.push(CheckOutcome::exact(format!("{spec} lifts restrict to 𝔫 and Λʲ(𝔫*)"), rep.n_lifts && rep.exterior_lifts));
        out.push(CheckOutcome::exact(format!("{spec} η̂_j restricts to Λ(𝔭_𝔪*)⊗Λʲ(𝔫*)"), rep.eta_hat_restricts));
        out.push(CheckOutcome::exact(format!("{spec} number-operator character, double sum"), rep.sum_sum));
        out.push(CheckOutcome::exact(format!("{spec} number-operator character, alternating η̂ sum"), rep.alternating));
        out.push(CheckOutcome::exact(format!("{spec} η̂_j = η̂_(2l−j)"), rep.duality));
        out.push(CheckOutcome::exact(format!("{spec} Weyl invariance of lifts"), rep.weyl_invariant));
        out.push(CheckOutcome::exact(format!("{spec} λ-operations, Newton vs direct"), rep.newton_vs_direct));
    }
    Ok(out)
}

pub fn kostant() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (host, k) in [(GroupSpec::sl(3), "so(3)"), (GroupSpec::so(5, 1), "so(5)"), (GroupSpec::so(3, 3), "so(3)+so(3)")] {
        let rep = roots_weyl::kostant_check(&build_group(&host)?)?;
        out.push(CheckOutcome::residual(format!("{k} (in {host}) strange formula"), rep.residual, 1e-12));
        if host == GroupSpec::sl(3) {
            let eighth = qr(1, 8);
            out.push(CheckOutcome::exact("so(3) both sides equal 1/8", rep.lhs == eighth && rep.rhs == eighth));
        }
    }
    Ok(out)
}

pub fn casimir() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for spec in delta_one_groups() {
        let s = structure_of(&spec)?;
        let mut worst: f64 = 0.0;
        for j in 0..=2 * s.l {
            worst = worst.max(s.casimir_shift(j)?.residual());
        }
        out.push(CheckOutcome::residual(format!("{spec} Casimir on Λʲ(𝔫*), operator vs shift formula"), worst, 1e-12));
    }
    for (spec, table) in [(GroupSpec::so(3, 1), [q(-1), q(0), q(-1)]), (GroupSpec::sl(3), [qr(-3, 2), q(0), qr(-3, 2)])] {
        let s = structure_of(&spec)?;
        let got: Vec<Q> = (0..3).map(|j| s.casimir_shift(j).map(|c| c.sigma)).collect::<Result<_>>()?;
        out.push(CheckOutcome::exact(format!("{spec} σ_j table"), got == table));
    }
    Ok(out)
}

pub fn orbital_crosscheck(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f72);
    let mut out = Vec::new();
    for spec in [GroupSpec::so(3, 1), GroupSpec::sl(3)] {
        let g = build_group(&spec)?;
        let s = build_structure(&g)?;
        let cf = ClosedForm::new(&s)?;
        let bi = OrbitalIntegrator::new(&g);
        let hats = s.eta_hat_characters()?;
        let mut worst: f64 = 0.0;
        for _ in 0..25 {
            let h = random_h(&mut rng, s.frame.rank());
            for t in [0.25, 1.0, 4.0] {
                for (j, chi) in hats.iter().enumerate() {
                    let req = OrbitalRequest { gamma: s.element(&h), character: chi.clone(), t, quad_order: 20 };
                    let quad = bi.integrate(&req)?;
                    let closed = cf.trg(&h, j, t)?.value;
                    worst = worst.max(rel_c(Complex64::new(quad.value, quad.imag), Complex64::new(closed, 0.0)));
                }
            }
        }
        out.push(CheckOutcome::residual(format!("{spec} quadrature vs closed form (25 classes, 3 times)"), worst, 1e-6));
    }
    let g = build_group(&GroupSpec::line())?;
    let bi = OrbitalIntegrator::new(&g);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (a, t) = (rng.gen_range(0.0..3.0), rng.gen_range(0.25..4.0));
        let req = OrbitalRequest {
            gamma: SemisimpleElement::new(vec![a], KPart::Identity),
            character: VirtualCharacter::one(0),
            t,
            quad_order: 20,
        };
        worst = worst.max(rel(bi.integrate(&req)?.value, orbital::abelian_heat_trace(a, t)));
    }
    out.push(CheckOutcome::residual("line: abelian heat trace", worst, 1e-10));
    Ok(out)
}

/// e^a k⁻¹ with a generic in the centralizer of 𝔱 in 𝔭 and k generic in T.
fn generic_b_element(g: &ReductiveGroup, rng: &mut ChaCha8Rng) -> (SemisimpleElement, Vec<f64>) {
    let mut a = vec![0.0; g.dim()];
    for v in g.torus_centralizer_in(Part::P) {
        let c = rng.gen_range(0.3..1.5);
        for (x, e) in a.iter_mut().zip(exact::to_f64_vec(&v)) {
            *x += c * e;
        }
    }
    let theta: Vec<f64> = (0..g.torus_rank()).map(|_| rng.gen_range(-PI..PI)).collect();
    (SemisimpleElement::new(a, KPart::Torus(theta.clone())), theta)
}

pub fn vanishing(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7661);
    let so31 = GroupSpec::so(3, 1);
    let mut out = Vec::new();
    for spec in [GroupSpec::product(vec![so31.clone(), so31.clone()]), GroupSpec::product(vec![GroupSpec::sl(3), so31])] {
        let g = build_group(&spec)?;
        let bi = OrbitalIntegrator::new(&g);
        let chi = orbital::number_supertrace_character(&g)?;
        let pw = parabolic::p_weights(&g)?;
        let (mut quad, mut alg): (f64, f64) = (0.0, 0.0);
        let mut zero_factors = usize::MAX;
        for _ in 0..5 {
            let (gamma, theta) = generic_b_element(&g, &mut rng);
            for t in [0.5, 1.0, 2.0] {
                let v = bi.integrate(&OrbitalRequest { gamma: gamma.clone(), character: chi.clone(), t, quad_order: 20 })?;
                quad = quad.max(Complex64::new(v.value, v.imag).norm());
            }
            let y: Vec<f64> = (0..theta.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rep = parabolic::vanishing_supertrace(&pw, &theta, &y);
            zero_factors = zero_factors.min(rep.zero_factors);
            alg = alg.max(Complex64::new(rep.re, rep.im).norm());
        }
        out.push(CheckOutcome::exact(format!("{spec} dim 𝔟(γ) ≥ 2"), g.delta_invariant() >= 2 && zero_factors >= 2));
        out.push(CheckOutcome::residual(format!("{spec} number-operator supertrace, algebraic"), alg, 1e-12));
        out.push(CheckOutcome::residual(format!("{spec} number-operator orbital integral, quadrature"), quad, 1e-8));
    }
    Ok(out)
}

pub fn time_integral(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (b1, b2) = (rng.gen_range(0.05..10.0), rng.gen_range(0.0..10.0));
        let (quad, _) = orbital::gaussian_time_integral_quadrature(b1, b2)?;
        worst = worst.max(rel(quad, orbital::gaussian_time_integral(b1, b2)?));
    }
    Ok(vec![CheckOutcome::residual("∫e^{−B₁/t−B₂t}t^{−3/2}dt, quadrature vs closed form (20 pairs)", worst, 1e-8)])
}

/// 50-class synthetic spectra for SO(3,1) and sl3.
pub fn synthetic_spectra(seed: u64, classes: usize) -> Result<Vec<(GroupSpec, SpectrumDataset)>> {
    [GroupSpec::so(3, 1), GroupSpec::sl(3)]
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            let l = structure_of(&spec)?.l;
            let mut cfg = SyntheticConfig::new(classes, l, seed + i as u64);
            cfg.group = Some(spec.to_string());
            Ok((spec, zeta::synthetic_spectrum(&cfg)?))
        })
        .collect()
}

pub fn factorization(opts: &CheckOptions) -> Result<Vec<CheckOutcome>> {
    let spectra = if opts.spectra.is_empty() { synthetic_spectra(opts.seed, 50)? } else { opts.spectra.clone() };
    let mut out = Vec::new();
    for (spec, ds) in &spectra {
        let split = SplitData::from(&structure_of(spec)?);
        let s0 = ds.abscissa().unwrap_or(0.0);
        let sigmas = if opts.sigmas.is_empty() { zeta::sigma_grid(s0 + 1.0, s0 + 5.0, 0.25)? } else { opts.sigmas.clone() };
        let mut worst: f64 = 0.0;
        for &s in &sigmas {
            for im in [0.0, 0.7] {
                worst = worst.max(zeta::factorization_residual(ds, &split, Complex64::new(s, im))?);
            }
        }
        out.push(CheckOutcome::residual(
            format!("{spec} log R_ρ vs Σ(−1)^(j−1) log Z_η_j ({} classes, {} σ)", ds.classes.len(), sigmas.len()),
            worst,
            1e-12,
        ));
    }
    Ok(out)
}

pub fn laurent(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let acyclic = zeta::laurent_constants(&[0, 0, 0], 1, &q(1))?;
    out.push(CheckOutcome::exact("acyclic: C_ρ = 1, r_ρ = 0", acyclic.c_rho_exact == q(1) && acyclic.r_rho == 0));
    let one = zeta::laurent_constants(&[1, 0, 1], 1, &q(1))?;
    out.push(CheckOutcome::exact("l = 1, r = (1,0,1), |α| = 1: C_ρ = −1/4, r_ρ = −2", one.c_rho_exact == qr(-1, 4) && one.r_rho == -2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c61);
    let mut ok = true;
    for _ in 0..20 {
        let l = rng.gen_range(1..=4usize);
        let half: Vec<i64> = (0..=l).map(|_| rng.gen_range(0..6)).collect();
        let r: Vec<i64> = (0..=2 * l).map(|j| half[j.min(2 * l - j)]).collect();
        let a2 = qr(rng.gen_range(1..8), rng.gen_range(1..4));
        ok &= zeta::laurent_constants(&r, l, &a2)?.consistent();
    }
    out.push(CheckOutcome::exact("χ' and rescaling forms of r_ρ agree (20 random r_j)", ok));
    Ok(out)
}

/// Classes from random elements of H, returned with the elements.
fn h_dataset(s: &DeltaOneStructure, rng: &mut ChaCha8Rng, n: usize) -> (SpectrumDataset, Vec<SemisimpleElement>) {
    let mut hs: Vec<HElement> = (0..n).map(|_| random_h(rng, s.frame.rank())).collect();
    hs.iter_mut().for_each(|h| h.length = 0.5 + 2.0 * h.length);
    hs.sort_by(|a, b| a.length.total_cmp(&b.length));
    dataset_from(s, &hs)
}

fn dataset_from(s: &DeltaOneStructure, hs: &[HElement]) -> (SpectrumDataset, Vec<SemisimpleElement>) {
    let mut ds = SpectrumDataset::empty(hs.last().map_or(1.0, |h| h.length));
    for (i, h) in hs.iter().enumerate() {
        ds.classes.push(GeodesicClass {
            id: format!("h{}", i + 1),
            length: h.length,
            holonomy_angles: orbital::holonomy_angles(s, &h.theta),
            index: num::Rational64::from_integer(1),
            trace_rho_re: 1.0,
            trace_rho_im: 0.0,
            iterate: 1,
        });
    }
    (ds, hs.iter().map(|h| s.element(h)).collect())
}

pub fn scaling(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7363);
    let mut out = Vec::new();
    for base in [GroupSpec::so(3, 1), GroupSpec::sl(3)] {
        let s = structure_of(&base)?;
        let split = SplitData::from(&s);
        let (ds, elements) = h_dataset(&s, &mut rng, 30);
        for scale in [q(2), qr(1, 2), q(3)] {
            let sf = exact::to_f64(&scale);
            let root = sf.sqrt();
            let scaled = structure_of(&base.clone().with_scale(scale.clone()))?;
            let split_s = SplitData::from(&scaled);
            let hs: Vec<HElement> = elements.iter().map(|g| scaled.h_coordinates(g)).collect::<Result<_>>()?;
            let (ds_s, _) = dataset_from(&scaled, &hs);
            let mut worst = rel(split_s.alpha_norm, split.alpha_norm / root);
            for (c, cs) in ds.classes.iter().zip(&ds_s.classes) {
                worst = worst.max(rel(cs.length, root * c.length));
            }
            let mut resid: f64 = 0.0;
            for k in 0..=8 {
                let sigma = 1.0 + 0.5 * k as f64;
                let z = Complex64::new(sigma, 0.3);
                worst = worst.max(rel_c(zeta::xi_rho(&ds_s, z), zeta::xi_rho(&ds, z * root)));
                for j in 0..=2 * s.l {
                    worst = worst.max(rel_c(zeta::xi_eta(&ds_s, &split_s, j, z)?, zeta::xi_eta(&ds, &split, j, z * root)?));
                }
                resid = resid.max(zeta::factorization_residual(&ds_s, &split_s, z)?);
            }
            out.push(CheckOutcome::residual(format!("{base} B×{scale}: lengths, |α|, Ξ_ρ(σ) = Ξ_ρ^orig(√s σ), Ξ_η_j"), worst, 1e-12));
            out.push(CheckOutcome::residual(format!("{base} B×{scale}: factorization on rescaled data"), resid, 1e-12));
            let mut exact_ok = true;
            for _ in 0..10 {
                let l = s.l;
                let half: Vec<i64> = (0..=l).map(|_| rng.gen_range(0..5)).collect();
                let r: Vec<i64> = (0..=2 * l).map(|j| half[j.min(2 * l - j)]).collect();
                let orig = zeta::laurent_constants(&r, l, &s.alpha_norm_sq)?;
                let resc = zeta::laurent_constants(&r, l, &scaled.alpha_norm_sq)?;
                // C_ρ picks up s^{r_ρ/2 − χ'} so that R/T keeps its leading coefficient
                let e = orig.r_rho / 2 - orig.chi_prime;
                let factor = if e >= 0 { scale.pow(e as i32) } else { scale.pow((-e) as i32).recip() };
                exact_ok &= resc.c_rho_exact == &orig.c_rho_exact * factor && resc.r_rho == orig.r_rho && resc.consistent();
                exact_ok &= !orig.c_rho_exact.is_zero();
            }
            out.push(CheckOutcome::exact(format!("{base} B×{scale}: C_ρ picks up s^(r_ρ/2−χ')"), exact_ok));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("bracket".parse::<Fault>().unwrap(), Fault::StructureConstant);
    }

    #[test]
    fn injected_fault_fails_the_bracket_suite() {
        let opts = CheckOptions { fault: Some(Fault::StructureConstant), ..CheckOptions::default() };
        let rep = run_suite(Suite::Bracket, &opts).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.outcomes.iter().filter(|o| !o.passed).count(), 1);
        assert!(run_suite(Suite::Bracket, &CheckOptions::default()).unwrap().passed);
    }
}
