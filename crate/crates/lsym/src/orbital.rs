//! Semisimple orbital integrals of the heat kernel.
//!
//! For γ = e^a k⁻¹ with k in the maximal torus T of K and a centralizing 𝔱,
//! every piece of J_γ is read off from the weights of 𝔱 on 𝔭₀ = 𝔷(a) ∩ 𝔭 and
//! 𝔨₀ = 𝔷(a) ∩ 𝔨: the weights fixed by k span 𝔷(γ), the others pair up into
//! the planes of 𝔷₀^⊥(γ). The Gaussian integral over 𝔨(γ) is reduced to 𝔱
//! by the Weyl integral formula and computed by tensor Gauss–Hermite
//! quadrature. The closed forms for regular elements of H = exp(𝔟)T are
//! independent code paths used to cross-check the quadrature.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::lie_core::{KPart, ReductiveGroup, SemisimpleElement};
use crate::numeric;
use crate::parabolic::{self, binomial, DeltaOneStructure, HElement};
use crate::roots_weyl::{self, RootSystem, TorusFrame, VirtualCharacter, Weight};
use crate::zeta::{self, SpectrumDataset};

/// Torus-weight tolerance for "Ad(k) fixes this weight vector".
const FIXED_TOL: f64 = 1e-9;
/// Below this |sin(ν/2)| a non-fixed plane is numerically singular.
const SINGULAR_TOL: f64 = 1e-6;

/// Eigen-data of ad(Y), Y ∈ 𝔱, and Ad(k⁻¹) on the pieces of 𝔤 that enter J_γ.
#[derive(Clone, Debug)]
pub struct JGammaEvaluator {
    pub frame: TorusFrame,
    pub theta: Vec<f64>,
    /// |a|².
    pub a_norm_sq: f64,
    /// |det(1 − Ad(γ))|_{𝔷₀^⊥}|^{1/2}.
    pub halfdet: f64,
    pub dim_p_gamma: usize,
    pub dim_k_gamma: usize,
    /// Positive weights of 𝔱 on 𝔭(γ), with multiplicity.
    pub p_gamma_roots: Vec<Weight>,
    /// Root data of 𝔨(γ).
    pub k_gamma: RootSystem,
    /// Positive weights on 𝔭₀^⊥(γ) with ν = w·θ.
    pub p_perp: Vec<(Weight, f64)>,
    /// Positive weights on 𝔨₀^⊥(γ) with ν = w·θ.
    pub k_perp: Vec<(Weight, f64)>,
}

/// √[(1−e^z)(1−e^{−z}) / |1−e^{iν}|²] for z = x − iν on the branch equal to 1 at x = 0:
/// i sinh(z/2)/sin(ν/2) = cosh(x/2) + i sinh(x/2) cot(ν/2).
fn pair_factor(x: f64, nu: f64) -> Complex64 {
    let h = 0.5 * x;
    Complex64::new(h.cosh(), h.sinh() / (0.5 * nu).tan())
}

fn is_fixed(nu: f64) -> bool {
    (0.5 * nu).sin().abs() < FIXED_TOL
}

impl JGammaEvaluator {
    pub fn new(g: &ReductiveGroup, gamma: &SemisimpleElement) -> Result<Self> {
        gamma.validate(g)?;
        let frame = TorusFrame::of_group(g);
        let r = frame.rank();
        if r > 4 {
            return Err(Error::DimensionBudget(r));
        }
        let theta = match &gamma.k {
            KPart::Identity => vec![0.0; r],
            KPart::Torus(t) if t.len() == r => t.clone(),
            KPart::Torus(t) => {
                return Err(Error::InvalidInput(format!("torus element has {} coordinates, rank is {r}", t.len())))
            }
            KPart::Matrix(_) => return Err(Error::NotInH("k must be given by torus coordinates".into())),
        };
        let ad_a = g.ad_ortho(&gamma.a);
        let scale = ad_a.amax().max(1.0);
        for gen in &frame.generators {
            if (&ad_a * g.exact_to_ortho(gen)).amax() > 1e-10 * scale {
                return Err(Error::NotInH("a does not centralize the maximal torus of 𝔨".into()));
            }
        }
        let d = g.dim();
        let selector = |idx: &[usize]| {
            let mut m = DMatrix::zeros(d, idx.len());
            for (c, &i) in idx.iter().enumerate() {
                m[(i, c)] = 1.0;
            }
            m
        };
        let kernel_in = |idx: &[usize]| -> DMatrix<f64> {
            let sel = selector(idx);
            if idx.is_empty() {
                return sel;
            }
            let n = numeric::null_space(&(&ad_a * &sel), 1e-9 * scale);
            &sel * n
        };
        let p0 = kernel_in(&g.p_indices());
        let k0 = kernel_in(&g.k_indices());
        let wp0 = frame.weights_on(&p0)?;
        let wk0 = frame.weights_on(&k0)?;

        let mut dim_p_gamma = 0;
        let mut p_gamma_roots = Vec::new();
        let mut p_perp = Vec::new();
        for (w, &m) in wp0.terms() {
            let nu = w.dot(&theta);
            if is_fixed(nu) {
                dim_p_gamma += m as usize;
                if !w.is_zero() && w.is_positive() {
                    p_gamma_roots.extend(std::iter::repeat_n(w.clone(), m as usize));
                }
            } else if w.is_positive() {
                p_perp.extend(std::iter::repeat_n((w.clone(), nu), m as usize));
            }
        }
        let mut k_fixed = VirtualCharacter::zero(r);
        let mut k_perp = Vec::new();
        for (w, &m) in wk0.terms() {
            let nu = w.dot(&theta);
            if is_fixed(nu) {
                k_fixed.insert(w.clone(), m);
            } else if w.is_positive() {
                k_perp.extend(std::iter::repeat_n((w.clone(), nu), m as usize));
            }
        }
        if let Some((w, nu)) = p_perp.iter().chain(&k_perp).find(|(_, nu)| (0.5 * nu).sin().abs() < SINGULAR_TOL) {
            return Err(Error::SingularEigenvalue(format!(
                "Ad(k⁻¹) is within {SINGULAR_TOL:e} of fixing the weight {w} (ν = {nu})"
            )));
        }
        let dim_k_gamma = k_fixed.degree() as usize;
        let k_gamma = RootSystem::from_weights(frame.clone(), &k_fixed)?;

        let sym = 0.5 * (&ad_a + ad_a.transpose());
        let eig = SymmetricEigen::new(sym);
        let cols: Vec<_> = (0..d)
            .filter(|&i| eig.eigenvalues[i].abs() > 1e-9 * scale)
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect();
        let halfdet = if cols.is_empty() {
            1.0
        } else {
            let q = DMatrix::from_columns(&cols);
            let m = q.transpose() * gamma.ad_ortho(g)? * &q;
            (DMatrix::identity(m.nrows(), m.nrows()) - m).determinant().abs().sqrt()
        };
        if !(halfdet > 1e-300) {
            return Err(Error::SingularEigenvalue("det(1 − Ad(γ)) vanishes on 𝔷₀^⊥".into()));
        }
        let a_o = g.to_ortho(&gamma.a);
        Ok(JGammaEvaluator {
            frame,
            theta,
            a_norm_sq: a_o.iter().map(|x| x * x).sum(),
            halfdet,
            dim_p_gamma,
            dim_k_gamma,
            p_gamma_roots,
            k_gamma,
            p_perp,
            k_perp,
        })
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn dim_z_gamma(&self) -> usize {
        self.dim_p_gamma + self.dim_k_gamma
    }

    /// J_γ(Y) for Y = Σ yₛHₛ ∈ 𝔱.
    pub fn j_gamma(&self, y: &[f64]) -> Result<Complex64> {
        if y.len() != self.rank() {
            return Err(Error::InvalidInput(format!("Y has {} coordinates, rank is {}", y.len(), self.rank())));
        }
        Ok(self.eval(y))
    }

    fn eval(&self, y: &[f64]) -> Complex64 {
        let mut v = Complex64::new(1.0 / self.halfdet, 0.0);
        for w in &self.p_gamma_roots {
            v *= numeric::a_hat(w.dot(y));
        }
        for w in &self.k_gamma.positive {
            v /= numeric::a_hat(w.dot(y));
        }
        for (w, nu) in &self.k_perp {
            v *= pair_factor(w.dot(y), *nu);
        }
        // the 1/det(1 − Ad(k⁻¹)) in front of the bracket is absorbed by the 𝔨
        // planes but leaves 1/(4 sin²(ν/2)) on each 𝔭 plane
        for (w, nu) in &self.p_perp {
            v /= pair_factor(w.dot(y), *nu) * (4.0 * (0.5 * nu).sin().powi(2));
        }
        v
    }

    /// ∫_{𝔨(γ)} J_γ(Y) χ(k⁻¹e^{−iY}) e^{−|Y|²/2t} dY at quadrature order `n`,
    /// together with the same integral of the absolute values.
    fn gaussian_integral(&self, chi: &VirtualCharacter, t: f64, n: usize) -> (Complex64, f64) {
        let r = self.rank();
        let l = self.frame.cholesky();
        let lt_inv = if r == 0 { l } else { l.transpose().try_inverse().expect("Gram matrix is invertible") };
        let to_y = |u: &[f64]| -> Vec<f64> { (0..r).map(|i| (0..r).map(|j| lt_inv[(i, j)] * u[j]).sum()).collect() };
        let weyl = self.k_gamma.volume_k_over_t() / self.k_gamma.weyl_order() as f64;
        let pi_sq = |y: &[f64]| -> f64 { self.k_gamma.positive.iter().map(|a| a.dot(y).powi(2)).product() };
        let value = numeric::hermite_tensor(r, n, t, |u| {
            let y = to_y(u);
            let z: Vec<Complex64> = y.iter().zip(&self.theta).map(|(yi, th)| Complex64::new(-th, -yi)).collect();
            self.eval(&y) * chi.eval(&z) * pi_sq(&y)
        });
        let magnitude = numeric::hermite_tensor(r, n, t, |u| {
            let y = to_y(u);
            let abs_chi: f64 = chi.terms().iter().map(|(w, m)| m.unsigned_abs() as f64 * w.dot(&y).exp()).sum();
            Complex64::new(self.eval(&y).norm() * abs_chi * pi_sq(&y), 0.0)
        });
        (value * weyl, magnitude.re * weyl)
    }

    /// Fits |J_γ(Y)| ≤ C e^{c|Y|} on rays out to `radius`.
    pub fn growth_fit(&self, radius: f64) -> GrowthFit {
        let r = self.rank();
        if r == 0 {
            let v = self.eval(&[]).norm();
            return GrowthFit { rate: 0.0, constant: v, samples: 1, radius };
        }
        let l = self.frame.cholesky();
        let lt_inv = l.transpose().try_inverse().expect("Gram matrix is invertible");
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for i in 0..r {
            for s in [1.0, -1.0] {
                let mut u = vec![0.0; r];
                u[i] = s;
                dirs.push(u);
            }
        }
        dirs.push(vec![1.0 / (r as f64).sqrt(); r]);
        let steps = 16;
        let mut samples = Vec::new();
        let mut rate: f64 = 0.0;
        for u in &dirs {
            let y_at = |rad: f64| -> Vec<f64> { (0..r).map(|i| (0..r).map(|j| lt_inv[(i, j)] * u[j] * rad).sum()).collect() };
            for k in 0..=steps {
                let rad = radius * k as f64 / steps as f64;
                samples.push((rad, self.eval(&y_at(rad)).norm()));
            }
            let (near, far) = (self.eval(&y_at(0.5 * radius)).norm(), self.eval(&y_at(radius)).norm());
            rate = rate.max((far.ln() - near.ln()) / (0.5 * radius));
        }
        let constant = samples.iter().map(|(rad, v)| v * (-rate * rad).exp()).fold(0.0, f64::max) * (1.0 + 1e-12);
        let fit = GrowthFit { rate, constant, samples: samples.len(), radius };
        log::info!("J_γ growth: |J| ≤ {:.3e}·exp({:.4}|Y|) on |Y| ≤ {radius}", fit.constant, fit.rate);
        fit
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthFit {
    pub rate: f64,
    pub constant: f64,
    pub samples: usize,
    pub radius: f64,
}

/// Which route produced an orbital-integral value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalPath {
    Quadrature,
    ClosedForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalValue {
    pub value: f64,
    pub imag: f64,
    pub convergence_estimate: f64,
    pub order: usize,
    pub path: EvalPath,
}

#[derive(Clone, Debug)]
pub struct OrbitalRequest {
    pub gamma: SemisimpleElement,
    /// Virtual character of K on the torus.
    pub character: VirtualCharacter,
    pub t: f64,
    pub quad_order: usize,
}

/// Explicit orbital-integral formula with the group-level traces computed once.
#[derive(Clone, Debug)]
pub struct OrbitalIntegrator<'a> {
    pub group: &'a ReductiveGroup,
    /// Tr^𝔭[C^{𝔨,𝔭}].
    pub trace_kp: f64,
    /// Tr^𝔨[C^{𝔨,𝔨}].
    pub trace_kk: f64,
    /// Relative change that counts as converged under order doubling.
    pub tolerance: f64,
}

impl<'a> OrbitalIntegrator<'a> {
    pub fn new(group: &'a ReductiveGroup) -> Self {
        OrbitalIntegrator {
            group,
            trace_kp: exact::to_f64(&roots_weyl::casimir_trace_kp(group)),
            trace_kk: exact::to_f64(&roots_weyl::casimir_trace_k(group)),
            tolerance: 1e-6,
        }
    }

    /// (2πt)^{−dim 𝔷(γ)/2} exp(−|a|²/2t + (t/16)Tr^𝔭[C^{𝔨,𝔭}] + (t/48)Tr^𝔨[C^{𝔨,𝔨}]).
    pub fn prefactor(&self, ev: &JGammaEvaluator, t: f64) -> f64 {
        (2.0 * PI * t).powf(-(ev.dim_z_gamma() as f64) / 2.0)
            * (-ev.a_norm_sq / (2.0 * t) + t / 16.0 * self.trace_kp + t / 48.0 * self.trace_kk).exp()
    }

    /// Quadrature at orders n and 2n, then 4n if needed; the estimate is the
    /// last change relative to the integral of absolute values.
    pub fn integrate(&self, req: &OrbitalRequest) -> Result<OrbitalValue> {
        if !(req.t > 0.0 && req.t.is_finite()) {
            return Err(Error::InvalidInput("t must be positive".into()));
        }
        if req.quad_order < 2 {
            return Err(Error::InvalidInput("quadrature order must be at least 2".into()));
        }
        let ev = JGammaEvaluator::new(self.group, &req.gamma)?;
        if req.character.rank() != ev.rank() {
            return Err(Error::InvalidInput("character rank does not match the torus".into()));
        }
        let pre = self.prefactor(&ev, req.t);
        let mut order = req.quad_order;
        let (mut prev, _) = ev.gaussian_integral(&req.character, req.t, order);
        let mut estimate = f64::INFINITY;
        for _ in 0..2 {
            order *= 2;
            let (cur, mag) = ev.gaussian_integral(&req.character, req.t, order);
            estimate = (cur - prev).norm() / mag.max(cur.norm()).max(f64::MIN_POSITIVE);
            prev = cur;
            if estimate <= self.tolerance {
                break;
            }
        }
        if !(estimate <= self.tolerance) {
            return Err(Error::QuadratureNotConverged { estimate, order });
        }
        let v = prev * pre;
        Ok(OrbitalValue { value: v.re, imag: v.im, convergence_estimate: estimate, order, path: EvalPath::Quadrature })
    }
}

/// Σᵢ (−1)ⁱ i Λⁱ(𝔭*): the supertrace of the number operator on Λ·(𝔭*).
pub fn number_supertrace_character(g: &ReductiveGroup) -> Result<VirtualCharacter> {
    let p = parabolic::p_weights(g)?.dual();
    let powers = p.exterior_powers_direct().expect("honest character");
    let r = p.rank();
    Ok(powers.iter().enumerate().fold(VirtualCharacter::zero(r), |acc, (i, c)| {
        let k = if i % 2 == 0 { i as i64 } else { -(i as i64) };
        acc.add(&c.scale(k))
    }))
}

/// Closed forms for regular elements of H, with the scalars computed once.
#[derive(Clone, Debug)]
pub struct ClosedForm<'a> {
    pub structure: &'a DeltaOneStructure,
    /// Tr^{𝔲⊥(𝔟)}[C^{𝔲(𝔟),𝔲⊥(𝔟)}].
    pub trace_uperp: f64,
    /// C^{𝔲_𝔪, η_j}, j = 0..2l.
    pub casimir: Vec<f64>,
}

impl<'a> ClosedForm<'a> {
    pub fn new(structure: &'a DeltaOneStructure) -> Result<Self> {
        let casimir = (0..=2 * structure.l)
            .map(|j| structure.casimir_direct(j).map(|c| exact::to_f64(&c)))
            .collect::<Result<_>>()?;
        Ok(ClosedForm { structure, trace_uperp: exact::to_f64(&structure.trace_uperp()), casimir })
    }

    fn exponent(&self, j: usize, t: f64) -> f64 {
        t / 16.0 * self.trace_uperp - t / 2.0 * self.casimir[j]
    }

    /// Rejects k whose action on 𝔪/𝔱 has a fixed vector.
    pub fn check_regular(&self, h: &HElement) -> Result<()> {
        let (pm, km) = self.structure.m_over_t_weights()?;
        for (w, _) in pm.terms().iter().chain(km.terms()) {
            let f = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -w.dot(&h.theta))).norm();
            if f < 1e-10 {
                return Err(Error::NotRegular(format!("Ad(k⁻¹) fixes the weight {w} of 𝔪/𝔱")));
            }
        }
        Ok(())
    }

    /// Tr_s^{[γ]}[exp(−tC/2)] for the lift η̂_j:
    /// (2πt)^{−1/2} e^{−|a|²/2t + (t/16)Tr^{𝔲⊥} − (t/2)C_j} Tr[η_j(k⁻¹)] / halfdet.
    pub fn trg(&self, h: &HElement, j: usize, t: f64) -> Result<OrbitalValue> {
        if j > 2 * self.structure.l {
            return Err(Error::InvalidInput(format!("j = {j} exceeds 2l = {}", 2 * self.structure.l)));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidInput("t must be positive".into()));
        }
        if h.length == 0.0 {
            return Err(Error::NotInH("a must be nonzero".into()));
        }
        self.check_regular(h)?;
        let minus: Vec<f64> = h.theta.iter().map(|x| -x).collect();
        let chi = self.structure.eta_character(j).eval_torus(&minus).re;
        let value = (2.0 * PI * t).powf(-0.5) * (-h.length * h.length / (2.0 * t) + self.exponent(j, t)).exp() * chi
            / self.structure.halfdet_product(h);
        Ok(OrbitalValue { value, imag: 0.0, convergence_estimate: 0.0, order: 0, path: EvalPath::ClosedForm })
    }

    /// Σⱼ (−1)ʲ of [`Self::trg`]: the closed form for Σ(−1)^{i−1} i Λⁱ(𝔭*).
    pub fn lambda_p(&self, h: &HElement, t: f64) -> Result<OrbitalValue> {
        let mut terms = Vec::new();
        for j in 0..=2 * self.structure.l {
            let v = self.trg(h, j, t)?.value;
            terms.push(if j % 2 == 0 { v } else { -v });
        }
        Ok(OrbitalValue {
            value: numeric::neumaier_sum(terms),
            imag: 0.0,
            convergence_estimate: 0.0,
            order: 0,
            path: EvalPath::ClosedForm,
        })
    }

    /// The same closed form from a length and holonomy angles on 𝔫.
    pub fn trg_from_angles(&self, length: f64, angles: &[f64], j: usize, t: f64) -> f64 {
        let split = zeta::SplitData::from(self.structure);
        (2.0 * PI * t).powf(-0.5) * (-length * length / (2.0 * t) + self.exponent(j, t)).exp() * zeta::eta_trace(angles, j)
            / zeta::class_halfdet(&split, length, angles)
    }
}

/// Angles φ with Ad(k⁻¹)|_𝔫 ~ e^{±iφ}, k = exp(Σθₛ Hₛ).
pub fn holonomy_angles(s: &DeltaOneStructure, theta: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for (w, &m) in s.n_weights.terms() {
        if w.is_zero() {
            out.extend(std::iter::repeat_n(0.0, m as usize / 2));
        } else if w.is_positive() {
            out.extend(std::iter::repeat_n(w.dot(theta), m as usize));
        }
    }
    out
}

/// (2πt)^{−1/2} e^{−|a|²/2t}: the heat trace of e^a on the line.
pub fn abelian_heat_trace(length: f64, t: f64) -> f64 {
    (2.0 * PI * t).powf(-0.5) * (-length * length / (2.0 * t)).exp()
}

/// −(2πt)^{−1/2} e^{−|a|²/2t} times the supplied Euler-form factor
/// (1 for a point, 0 on a factor of nonzero fundamental rank).
pub fn laplace_beltrami_special(length: f64, t: f64, euler_factor: f64) -> f64 {
    -abelian_heat_trace(length, t) * euler_factor
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicSide {
    pub value: f64,
    pub imag: f64,
    pub classes: usize,
    /// None when the dataset has no counting constants.
    pub tail_bound: Option<f64>,
}

/// Σ over classes of vol(Γ(γ)\X(γ)) Tr ρ(γ) Tr_s^{[γ]}[exp(−tC/2)] for η̂_j,
/// with vol(Γ(γ)\X(γ)) = index·|a| for regular classes; the identity term is
/// not included.
pub fn selberg_trace_geodesic_side(ds: &SpectrumDataset, cf: &ClosedForm, j: usize, t: f64) -> Result<GeodesicSide> {
    let l = cf.structure.l;
    if j > 2 * l {
        return Err(Error::InvalidInput(format!("j = {j} exceeds 2l = {}", 2 * l)));
    }
    if let Some(c) = ds.classes.first() {
        if c.holonomy_angles.len() != l {
            return Err(Error::InvalidInput(format!("dataset angles per class must equal l = {l}")));
        }
    }
    let total = numeric::complex_sum(ds.classes.iter().map(|c| {
        c.trace_rho() * (c.index_f64() * c.length * cf.trg_from_angles(c.length, &c.holonomy_angles, j, t))
    }));
    let tail_bound = ds.counting.map(|cc| {
        let alpha = cf.structure.alpha_norm;
        let step = 0.25;
        let k = cf.exponent(j, t).exp() * binomial(2 * l, j) as f64 * cc.weight_bound * (2.0 * PI * t).powf(-0.5);
        let mut m = (ds.cutoff_length / step).floor() as usize;
        let mut acc = 0.0;
        loop {
            let s = m as f64 * step;
            let shell = cc.constant * (cc.rate * (s + step)).exp()
                * (s + step)
                * (-s * s / (2.0 * t) - l as f64 * alpha * s).exp()
                * (1.0 - (-alpha * s).exp()).powf(-2.0 * l as f64);
            acc += shell;
            if !acc.is_finite() || (shell <= 1e-17 * acc && s > 2.0 * t * cc.rate + ds.cutoff_length) || m > 1_000_000 {
                break;
            }
            m += 1;
        }
        acc * k
    });
    Ok(GeodesicSide { value: total.re, imag: total.im, classes: ds.classes.len(), tail_bound })
}

/// ∫₀^∞ e^{−B₁/t − B₂t} t^{−3/2} dt = √(π/B₁) e^{−2√(B₁B₂)}.
pub fn gaussian_time_integral(b1: f64, b2: f64) -> Result<f64> {
    if !(b1 > 0.0) || !(b2 >= 0.0) {
        return Err(Error::InvalidInput("need B1 > 0 and B2 ≥ 0".into()));
    }
    Ok((PI / b1).sqrt() * (-2.0 * (b1 * b2).sqrt()).exp())
}

/// The left side by adaptive quadrature in s = ln t; returns (value, error estimate).
pub fn gaussian_time_integral_quadrature(b1: f64, b2: f64) -> Result<(f64, f64)> {
    if !(b1 > 0.0) || !(b2 >= 0.0) {
        return Err(Error::InvalidInput("need B1 > 0 and B2 ≥ 0".into()));
    }
    let lo = (b1 / 60.0).ln();
    let far = b1.ln() + 80.0;
    let hi = if b2 > 0.0 { (60.0 / b2).ln().min(far) } else { far }.max(lo + 1.0);
    let f = |s: f64| (-b1 * (-s).exp() - b2 * s.exp() - 0.5 * s).exp();
    Ok(numeric::adaptive_integrate(f, lo, hi, 1e-13, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_factor_squares_to_the_determinant_ratio() {
        for (x, nu) in [(0.7, 1.1), (-2.0, 2.9), (3.0, -0.4)] {
            let z = Complex64::new(x, -nu);
            let one = Complex64::new(1.0, 0.0);
            let num = (one - z.exp()) * (one - (-z).exp());
            let den = (one - Complex64::from_polar(1.0, nu)).norm_sqr();
            let f = pair_factor(x, nu);
            assert!((f * f - num / den).norm() < 1e-12);
        }
        assert!((pair_factor(0.0, 1.3) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn time_integral_special_values() {
        let v = gaussian_time_integral(1.0, 1.0).unwrap();
        assert!((v - PI.sqrt() * (-2.0f64).exp()).abs() < 1e-15);
        assert!((gaussian_time_integral(4.0, 0.0).unwrap() - (PI / 4.0).sqrt()).abs() < 1e-15);
        assert!(gaussian_time_integral(0.0, 1.0).is_err());
    }
}
