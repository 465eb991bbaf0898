//! The splitting 𝔤 = 𝔟 ⊕ 𝔪 ⊕ 𝔫 ⊕ 𝔫̄ for groups of fundamental rank one.
//!
//! 𝔟 is the centralizer of the maximal torus of 𝔨 in 𝔭; it is spanned by a
//! rational vector `b_dir` whose adjoint action on 𝔷^⊥(𝔟) has eigenvalues ±c.
//! Everything here except the half-determinant and supertrace evaluations is
//! exact rational arithmetic.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, q, QMatrix, QVec, Q};
use crate::lie_core::{BlockKind, KPart, Part, ReductiveGroup, SemisimpleElement};
use crate::numeric;
use crate::roots_weyl::{self, RootSystem, TorusFrame, VirtualCharacter, Weight};

#[derive(Clone, Debug)]
pub struct DeltaOneStructure {
    pub group: ReductiveGroup,
    /// Index of the block carrying 𝔟.
    pub block: usize,
    /// Rational generator of 𝔟, oriented so that its first nonzero coordinate is positive.
    pub b_dir: QVec,
    /// ⟨α, b_dir⟩.
    pub c: Q,
    /// B(b_dir, b_dir).
    pub b_norm_sq: Q,
    /// |α|² = c² / B(b_dir, b_dir).
    pub alpha_norm_sq: Q,
    pub alpha_norm: f64,
    /// Unit vector of 𝔟 with B(a₁,a₁) = 1, basis coordinates.
    pub a1: Vec<f64>,
    /// ⟨α, a₀⟩ = 1.
    pub a0: QVec,
    pub p_m: Vec<QVec>,
    pub k_m: Vec<QVec>,
    pub n: Vec<QVec>,
    pub nbar: Vec<QVec>,
    pub zperp_p: Vec<QVec>,
    pub zperp_k: Vec<QVec>,
    pub l: usize,
    pub frame: TorusFrame,
    pub n_weights: VirtualCharacter,
    pub p_weights: VirtualCharacter,
    pub pm_weights: VirtualCharacter,
    zperp_ortho: DMatrix<f64>,
}

/// Builds the splitting; requires δ(G) = 1 with a supported rank-one factor.
pub fn build_structure(g: &ReductiveGroup) -> Result<DeltaOneStructure> {
    let delta = g.delta_invariant();
    if delta != 1 {
        return Err(Error::DeltaNotOne(delta));
    }
    let block = g.blocks.iter().position(|b| b.delta() == 1).expect("one block carries δ");
    match g.blocks[block].kind {
        BlockKind::Sl(3) => {}
        BlockKind::So(p, q) if p % 2 == 1 && q % 2 == 1 && p * q > 1 => {}
        BlockKind::Line => return Err(Error::UnsupportedDeltaOneFactor("abelian line factor".into())),
        other => return Err(Error::UnsupportedDeltaOneFactor(format!("{other:?}"))),
    }
    let mut b_dir = g.torus_centralizer_in(Part::P).pop().unwrap();
    let lead = b_dir.iter().find(|x| !x.is_zero()).unwrap().clone();
    b_dir = exact::scale(&(q(1) / lead), &b_dir);

    let ad = g.ad(&b_dir);
    let dim = g.dim();
    let split_kernel = |m: &QMatrix, part: Part| -> Vec<QVec> {
        let idx: Vec<usize> = (0..dim).filter(|&i| g.parts[i] == part).collect();
        if idx.is_empty() {
            return Vec::new();
        }
        let sub = QMatrix::from_columns(&idx.iter().map(|&c| m.column(c)).collect::<Vec<_>>(), dim);
        sub.null_space()
            .iter()
            .map(|s| {
                let mut v = exact::zeros(dim);
                for (j, &c) in idx.iter().enumerate() {
                    v[c] = s[j].clone();
                }
                v
            })
            .collect()
    };
    let z_p = split_kernel(&ad, Part::P);
    let z_k = split_kernel(&ad, Part::K);
    let all_p: Vec<QVec> = g.p_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    let all_k: Vec<QVec> = g.k_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    let zperp_p = exact::orthogonal_complement(&all_p, &z_p, &g.norm_sq);
    let zperp_k = exact::orthogonal_complement(&all_k, &z_k, &g.norm_sq);

    let probe = zperp_p.first().ok_or_else(|| Error::InvalidInput("𝔷^⊥(𝔟) is empty".into()))?;
    let ad2 = ad.mul(&ad);
    let c2 = g.inner(&ad2.mul_vec(probe), probe) / g.inner(probe, probe);
    let c = exact::rational_sqrt(&c2)
        .ok_or_else(|| Error::UnsupportedDeltaOneFactor("⟨α, b⟩ is irrational for the rational generator".into()))?;
    let shifted = |s: &Q| ad.sub(&QMatrix::identity(dim).scale(s));
    let n = shifted(&c).null_space();
    let nbar = shifted(&-c.clone()).null_space();
    let b_norm_sq = g.b_form(&b_dir, &b_dir);
    let alpha_norm_sq = &c2 / &b_norm_sq;
    let alpha_norm = exact::to_f64(&alpha_norm_sq).sqrt();
    let bn = exact::to_f64(&b_norm_sq).sqrt();
    let a1: Vec<f64> = b_dir.iter().map(|x| exact::to_f64(x) / bn).collect();
    let a0 = exact::scale(&(q(1) / &c), &b_dir);
    let p_m = exact::orthogonalize(&exact::orthogonal_complement(&z_p, std::slice::from_ref(&b_dir), &g.norm_sq), &g.norm_sq);
    let k_m = exact::orthogonalize(&z_k, &g.norm_sq);
    let zperp: Vec<QVec> = zperp_p.iter().chain(&zperp_k).cloned().collect();
    let zperp_ortho = roots_weyl::ortho_columns(g, &zperp);
    let frame = TorusFrame::of_group(g);
    let n_weights = frame.weights_on_exact(g, &n)?;
    let p_weights = frame.weights_on_exact(g, &all_p)?;
    let pm_weights = frame.weights_on_exact(g, &p_m)?;
    let l = n.len() / 2;
    Ok(DeltaOneStructure {
        group: g.clone(),
        block,
        b_dir,
        c,
        b_norm_sq,
        alpha_norm_sq,
        alpha_norm,
        a1,
        a0,
        p_m,
        k_m,
        n,
        nbar,
        zperp_p,
        zperp_k,
        l,
        frame,
        n_weights,
        p_weights,
        pm_weights,
        zperp_ortho,
    })
}

/// Exact checks of the splitting.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub b_acts_by_alpha: bool,
    pub nbar_acts_by_minus_alpha: bool,
    pub n_abelian: bool,
    pub b_vanishes_on_n: bool,
    pub theta_swaps_n: bool,
    pub p_dimension: bool,
    pub g_dimension: bool,
    pub n_even: bool,
    pub m_preserves_n: bool,
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.b_acts_by_alpha
            && self.nbar_acts_by_minus_alpha
            && self.n_abelian
            && self.b_vanishes_on_n
            && self.theta_swaps_n
            && self.p_dimension
            && self.g_dimension
            && self.n_even
            && self.m_preserves_n
    }
}

/// One exterior-power lift E_j = E⁺ − E⁻ in RO(K).
#[derive(Clone, Debug)]
pub struct LiftedRep {
    pub j: usize,
    pub character: VirtualCharacter,
    pub plus: VirtualCharacter,
    pub minus: VirtualCharacter,
}

/// Exact character identities between K-lifts and K_M restrictions.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    /// E restricted to T equals the weights of 𝔫.
    pub n_lifts: bool,
    /// E_j restricted to T equals Λʲ(𝔫*).
    pub exterior_lifts: bool,
    /// Every E_j and η̂_j is W(T,K)-invariant.
    pub weyl_invariant: bool,
    /// η̂_j restricted to T equals (Σ(−1)ⁱΛⁱ(𝔭_𝔪*)) ⊗ Λʲ(𝔫*).
    pub eta_hat_restricts: bool,
    /// Σ(−1)^{i−1} i Λⁱ(𝔭*) restricts to ΣΣ(−1)^{i+j} Λⁱ(𝔭_𝔪*) ⊗ Λʲ(𝔫*).
    pub sum_sum: bool,
    /// Σ(−1)^{i−1} i Λⁱ(𝔭*) = Σ(−1)ʲ η̂_j.
    pub alternating: bool,
    /// η̂_j = η̂_{2l−j}.
    pub duality: bool,
    /// Newton λ-operations agree with the generating function on honest characters.
    pub newton_vs_direct: bool,
}

impl CharacterReport {
    pub fn all(&self) -> bool {
        self.n_lifts
            && self.exterior_lifts
            && self.weyl_invariant
            && self.eta_hat_restricts
            && self.sum_sum
            && self.alternating
            && self.duality
            && self.newton_vs_direct
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CasimirShift {
    pub j: usize,
    /// Scalar of the 𝔲_𝔪 Casimir on Λʲ(𝔫*), from the operator itself.
    #[serde(serialize_with = "exact::serialize_q")]
    pub casimir_direct: Q,
    /// (1/8)Tr^{𝔲⊥(𝔟)}[C] + (j−l)²|α|².
    #[serde(serialize_with = "exact::serialize_q")]
    pub casimir_formula: Q,
    /// (1/8)Tr^{𝔲⊥(𝔟)}[C] − casimir_direct.
    #[serde(serialize_with = "exact::serialize_q")]
    pub sigma: Q,
    /// −(j−l)²|α|².
    #[serde(serialize_with = "exact::serialize_q")]
    pub sigma_expected: Q,
}

impl CasimirShift {
    pub fn residual(&self) -> f64 {
        let a = exact::to_f64(&(&self.casimir_direct - &self.casimir_formula)).abs();
        let b = exact::to_f64(&(&self.sigma - &self.sigma_expected)).abs();
        a.max(b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HalfDetReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// An element e^a k⁻¹ of H with a = length·a₁ and k = exp(Σ θₛHₛ).
#[derive(Clone, Debug)]
pub struct HElement {
    pub length: f64,
    pub theta: Vec<f64>,
}

impl DeltaOneStructure {
    pub fn dim_n(&self) -> usize {
        self.n.len()
    }

    pub fn check_invariants(&self) -> StructureReport {
        let g = &self.group;
        let ad_b = g.ad(&self.b_dir);
        let b_acts_by_alpha = self.n.iter().all(|f| ad_b.mul_vec(f) == exact::scale(&self.c, f));
        let nbar_acts_by_minus_alpha = self.nbar.iter().all(|f| ad_b.mul_vec(f) == exact::scale(&-self.c.clone(), f));
        let mut n_abelian = true;
        let mut b_vanishes_on_n = true;
        for f in &self.n {
            for h in &self.n {
                n_abelian &= exact::is_zero(&g.bracket(f, h));
                b_vanishes_on_n &= g.b_form(f, h).is_zero();
            }
        }
        let nbar_dim = exact::dim_span(&self.nbar);
        let theta_swaps_n = self.n.iter().all(|f| {
            let mut span = self.nbar.clone();
            span.push(g.theta(f));
            exact::dim_span(&span) == nbar_dim
        });
        let p_dimension = g.dim_p() == 1 + self.p_m.len() + self.n.len();
        let g_dimension = g.dim() == 1 + self.p_m.len() + self.k_m.len() + self.n.len() + self.nbar.len();
        let n_dim = exact::dim_span(&self.n);
        let m_preserves_n = self.p_m.iter().chain(&self.k_m).all(|x| {
            self.n.iter().all(|f| {
                let mut span = self.n.clone();
                span.push(g.bracket(x, f));
                exact::dim_span(&span) == n_dim
            })
        });
        StructureReport {
            b_acts_by_alpha,
            nbar_acts_by_minus_alpha,
            n_abelian,
            b_vanishes_on_n,
            theta_swaps_n,
            p_dimension,
            g_dimension,
            n_even: self.n.len().is_multiple_of(2),
            m_preserves_n,
        }
    }

    /// ⟨α, a⟩ for a ∈ 𝔟 in basis coordinates; None if a ∉ 𝔟.
    pub fn alpha_pairing(&self, a: &[Q]) -> Option<Q> {
        let i = self.b_dir.iter().position(|x| !x.is_zero())?;
        let t = &a[i] / &self.b_dir[i];
        (exact::scale(&t, &self.b_dir) == a).then(|| t * &self.c)
    }

    /// Root system of K for the shared torus.
    pub fn k_roots(&self) -> Result<RootSystem> {
        let g = &self.group;
        let k: Vec<QVec> = g.k_indices().into_iter().map(|i| g.basis_vector(i)).collect();
        roots_weyl::root_system_of(g, self.frame.clone(), &k)
    }

    /// Root system of K_M for the shared torus.
    pub fn km_roots(&self) -> Result<RootSystem> {
        roots_weyl::root_system_of(&self.group, self.frame.clone(), &self.k_m)
    }

    /// The lift E ∈ RO(K) of 𝔫 from the family identity: σ₃ − 1 for sl3,
    /// (σ_p − 1) ⊕ (σ_q − 1) for so(p,q).
    pub fn family_lift(&self) -> Result<VirtualCharacter> {
        let g = &self.group;
        let blk = &g.blocks[self.block];
        #[allow(clippy::single_range_in_vec_init)]
        let ranges: Vec<std::ops::Range<usize>> = match blk.kind {
            BlockKind::Sl(3) => vec![blk.offset..blk.offset + 3],
            BlockKind::So(p, q) => vec![blk.offset..blk.offset + p, blk.offset + p..blk.offset + p + q],
            other => return Err(Error::UnsupportedDeltaOneFactor(format!("{other:?}"))),
        };
        let r = self.frame.rank();
        let mut e = VirtualCharacter::zero(r);
        for range in ranges {
            let ops: Vec<DMatrix<f64>> = self
                .frame
                .generators
                .iter()
                .map(|h| {
                    let m = g.matrix(h).to_f64();
                    m.view((range.start, range.start), (range.len(), range.len())).into_owned()
                })
                .collect();
            let standard = if r == 0 {
                VirtualCharacter::monomial(Weight(vec![]), range.len() as i64)
            } else {
                let mut c = VirtualCharacter::zero(r);
                for mu in numeric::joint_spectrum(&ops)? {
                    let w = mu
                        .iter()
                        .map(|&x| {
                            numeric::rationalize(x, 1e-9)
                                .ok_or_else(|| Error::WeightExtraction(format!("standard weight {x}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    c.insert(Weight(w), 1);
                }
                c
            };
            e = e.add(&standard).sub(&VirtualCharacter::one(r));
        }
        Ok(e)
    }

    /// E_j = Λʲ(E*) for j = 0..2l.
    pub fn lift_exterior_powers(&self) -> Result<Vec<LiftedRep>> {
        let e = self.family_lift()?.dual();
        Ok(e.exterior_powers(2 * self.l)
            .into_iter()
            .enumerate()
            .map(|(j, character)| {
                let (plus, minus) = split_signs(&character);
                LiftedRep { j, character, plus, minus }
            })
            .collect())
    }

    /// η_j = Λʲ(𝔫*) as a K_M character on T.
    pub fn eta_character(&self, j: usize) -> VirtualCharacter {
        self.n_weights.dual().exterior(j)
    }

    /// The lift of 𝔭_𝔪 to RO(K): 𝔭 − 1 − E.
    pub fn pm_lift(&self) -> Result<VirtualCharacter> {
        let r = self.frame.rank();
        Ok(self.p_weights.sub(&VirtualCharacter::one(r)).sub(&self.family_lift()?))
    }

    /// η̂_j = (Σ(−1)ⁱΛⁱ(𝔭_𝔪*)) ⊗ Λʲ(𝔫*) lifted to K.
    pub fn eta_hat_character(&self, j: usize) -> Result<VirtualCharacter> {
        Ok(self.eta_hat_characters()?.swap_remove(j))
    }

    /// η̂_0 … η̂_{2l}.
    pub fn eta_hat_characters(&self) -> Result<Vec<VirtualCharacter>> {
        let pm = self.pm_lift()?.dual().alternating_exterior();
        Ok(self.family_lift()?.dual().exterior_powers(2 * self.l).iter().map(|e| pm.tensor(e)).collect())
    }

    /// Σ(−1)^{i−1} i Λⁱ(𝔭*): the number-operator supertrace character of Λ(𝔭*).
    pub fn lambda_p_character(&self) -> VirtualCharacter {
        let r = self.frame.rank();
        let p = self.p_weights.dual();
        let mut c = VirtualCharacter::zero(r);
        for (i, li) in p.exterior_powers(p.degree() as usize).into_iter().enumerate().skip(1) {
            let term = li.scale(i as i64);
            c = if i % 2 == 1 { c.add(&term) } else { c.sub(&term) };
        }
        c
    }

    pub fn character_identities(&self) -> Result<CharacterReport> {
        let e = self.family_lift()?;
        let lifts = self.lift_exterior_powers()?;
        let n_dual = self.n_weights.dual();
        let n_direct = n_dual.exterior_powers_direct().expect("honest");
        let k_rs = self.k_roots()?;
        let two_l = 2 * self.l;
        let n_lifts = e == self.n_weights;
        let exterior_lifts = lifts.iter().all(|lr| lr.character == n_direct[lr.j]);
        let hats = self.eta_hat_characters()?;
        let weyl_invariant = e.is_weyl_invariant(&k_rs)
            && lifts.iter().all(|lr| lr.character.is_weyl_invariant(&k_rs))
            && hats.iter().all(|h| h.is_weyl_invariant(&k_rs));
        let pm_alt = alternating_sum(&self.pm_weights.dual().exterior_powers_direct().expect("honest"));
        let eta_hat_restricts = hats.iter().zip(&n_direct).all(|(h, nj)| *h == pm_alt.tensor(nj));
        let lam_p = self.lambda_p_character();
        let sum_sum = lam_p == pm_alt.tensor(&alternating_sum(&n_direct));
        let alternating = lam_p == alternating_sum(&hats);
        let duality = (0..=two_l).all(|j| hats[j] == hats[two_l - j]);
        let newton_vs_direct = [&self.p_weights, &self.pm_weights, &self.n_weights]
            .iter()
            .all(|c| Some(c.exterior_powers(c.degree() as usize)) == c.exterior_powers_direct());
        Ok(CharacterReport {
            n_lifts,
            exterior_lifts,
            weyl_invariant,
            eta_hat_restricts,
            sum_sum,
            alternating,
            duality,
            newton_vs_direct,
        })
    }

    /// Tr^{𝔲⊥(𝔟)}[C^{𝔲(𝔟),𝔲⊥(𝔟)}] from the real form: the √−1 in front of
    /// 𝔟 ⊕ 𝔭_𝔪 flips the sign of ad(x)².
    pub fn trace_uperp(&self) -> Q {
        let g = &self.group;
        let zperp: Vec<QVec> = self.zperp_p.iter().chain(&self.zperp_k).cloned().collect();
        let mut t = Q::zero();
        for x in std::iter::once(&self.b_dir).chain(&self.p_m) {
            t -= crate::lie_core::trace_ad_squared_on(g, x, &zperp) / g.inner(x, x);
        }
        for y in &self.k_m {
            t += crate::lie_core::trace_ad_squared_on(g, y, &zperp) / g.inner(y, y);
        }
        t
    }

    /// The same trace from the structure constants of the compact form
    /// 𝔲 = √−1𝔭 ⊕ 𝔨, whose constants differ from 𝔤's by a sign on [𝔭,𝔭].
    pub fn trace_uperp_compact(&self) -> Q {
        let g = &self.group;
        let d = g.dim();
        let compact_ad = |x: &[Q]| {
            let mut m = QMatrix::zeros(d, d);
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let sign = if g.parts[i] == Part::P && g.parts[j] == Part::P { -q(1) } else { q(1) };
                    for (k, c) in g.structure_constants(i, j) {
                        m[(*k, j)] += xi * c * &sign;
                    }
                }
            }
            m
        };
        let uperp: Vec<QVec> = self.zperp_p.iter().chain(&self.zperp_k).cloned().collect();
        let mut t = Q::zero();
        for x in std::iter::once(&self.b_dir).chain(&self.p_m).chain(&self.k_m) {
            let ad = compact_ad(x);
            let mut tr = Q::zero();
            for v in &uperp {
                let w = ad.mul_vec(&ad.mul_vec(v));
                tr += g.inner(&w, v) / g.inner(v, v);
            }
            t += tr / g.inner(x, x);
        }
        t
    }

    /// Tr^𝔭[C^{𝔨,𝔭}] + ⅓Tr^𝔨[C^{𝔨,𝔨}] − ⅓Tr^{𝔲_𝔪}[C^{𝔲_𝔪,𝔲_𝔪}]; equals
    /// [`Self::trace_uperp`].
    pub fn trace_uperp_from_casimirs(&self) -> Q {
        let g = &self.group;
        let um: Vec<QVec> = self.p_m.iter().chain(&self.k_m).cloned().collect();
        let mut tr_um = Q::zero();
        for x in &self.p_m {
            tr_um -= crate::lie_core::trace_ad_squared_on(g, x, &um) / g.inner(x, x);
        }
        for y in &self.k_m {
            tr_um += crate::lie_core::trace_ad_squared_on(g, y, &um) / g.inner(y, y);
        }
        roots_weyl::casimir_trace_kp(g) + (roots_weyl::casimir_trace_k(g) - tr_um) / q(3)
    }

    /// Casimir of 𝔲_𝔪 on Λʲ(𝔫*), checked to be a scalar.
    pub fn casimir_direct(&self, j: usize) -> Result<Q> {
        let g = &self.group;
        let nmat = QMatrix::from_columns(&self.n, g.dim());
        let on_n = |x: &QVec| -> QMatrix {
            let cols: Vec<QVec> =
                self.n.iter().map(|f| nmat.solve(&g.bracket(x, f)).expect("𝔪 preserves 𝔫")).collect();
            let a = QMatrix::from_columns(&cols, self.n.len());
            exterior_derivation(&a.transpose().scale(&q(-1)), j)
        };
        let size = binomial(self.n.len(), j);
        let mut cas = QMatrix::zeros(size, size);
        for x in &self.p_m {
            let d = on_n(x);
            cas = cas.sub(&d.mul(&d).scale(&(q(1) / g.inner(x, x))));
        }
        for y in &self.k_m {
            let d = on_n(y);
            cas = cas.add(&d.mul(&d).scale(&(q(1) / g.inner(y, y))));
        }
        let scalar = if size == 0 { Q::zero() } else { cas[(0, 0)].clone() };
        if cas != QMatrix::identity(size).scale(&scalar) {
            return Err(Error::InvalidInput(format!("Casimir on Λ^{j}(𝔫*) is not scalar")));
        }
        Ok(scalar)
    }

    pub fn casimir_shift(&self, j: usize) -> Result<CasimirShift> {
        let tr = self.trace_uperp() / q(8);
        let jl = q(j as i64 - self.l as i64);
        let shift = &jl * &jl * &self.alpha_norm_sq;
        let casimir_direct = self.casimir_direct(j)?;
        Ok(CasimirShift {
            j,
            casimir_formula: &tr + &shift,
            sigma: &tr - &casimir_direct,
            sigma_expected: -shift,
            casimir_direct,
        })
    }

    /// γ = e^{length·a₁} exp(−Σ θₛHₛ).
    pub fn element(&self, h: &HElement) -> SemisimpleElement {
        SemisimpleElement::new(self.a1.iter().map(|x| x * h.length).collect(), KPart::Torus(h.theta.clone()))
    }

    /// Reads back (length, θ) from an element of H.
    pub fn h_coordinates(&self, gamma: &SemisimpleElement) -> Result<HElement> {
        let g = &self.group;
        let len = crate::exact::to_f64_vec(&self.b_dir);
        let bn = exact::to_f64(&self.b_norm_sq);
        let proj: f64 = gamma
            .a
            .iter()
            .zip(&len)
            .zip(&g.norm_sq)
            .map(|((a, b), n)| a * b * exact::to_f64(n))
            .sum::<f64>()
            / bn;
        let resid = gamma.a.iter().zip(&len).map(|(a, b)| (a - proj * b).abs()).fold(0.0, f64::max);
        let scale = gamma.a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if resid > 1e-12 * scale {
            return Err(Error::NotInH("a is not in 𝔟".into()));
        }
        let theta = match &gamma.k {
            KPart::Identity => vec![0.0; self.frame.rank()],
            KPart::Torus(t) => t.clone(),
            KPart::Matrix(_) => return Err(Error::NotInH("k is not given in the torus".into())),
        };
        Ok(HElement { length: proj * bn.sqrt(), theta })
    }

    /// |det(1 − Ad(γ))|_{𝔷^⊥(𝔟)}|^{1/2} by a dense determinant.
    pub fn halfdet_brute(&self, gamma: &SemisimpleElement) -> Result<f64> {
        let q = &self.zperp_ortho;
        let m = q.transpose() * gamma.ad_ortho(&self.group)? * q;
        let id = DMatrix::<f64>::identity(m.nrows(), m.nrows());
        Ok((id - m).determinant().abs().sqrt())
    }

    /// Σ_j (−1)ʲ Tr^{Λʲ(𝔫*)}[Ad(k⁻¹)] e^{(l−j)|α||a|}.
    pub fn halfdet_character_sum(&self, h: &HElement) -> f64 {
        let x = self.alpha_norm * h.length.abs();
        let minus: Vec<f64> = h.theta.iter().map(|t| -t).collect();
        numeric::neumaier_sum((0..=2 * self.l).map(|j| {
            let chi = self.eta_character(j).eval_torus(&minus).re;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * chi * ((self.l as f64 - j as f64) * x).exp()
        }))
    }

    /// e^{l|α|ℓ} Π over the weights of 𝔫 of (1 − e^{−|α|ℓ} e^{−iλ·θ}); real and positive.
    pub fn halfdet_product(&self, h: &HElement) -> f64 {
        let x = self.alpha_norm * h.length.abs();
        let mut prod = Complex64::new((self.l as f64 * x).exp(), 0.0);
        for (w, m) in self.n_weights.terms() {
            let f = Complex64::new(1.0, 0.0) - Complex64::from_polar((-x).exp(), -w.dot(&h.theta));
            prod *= f.powi(*m as i32);
        }
        prod.re
    }

    pub fn halfdet_identity(&self, gamma: &SemisimpleElement) -> Result<HalfDetReport> {
        let h = self.h_coordinates(gamma)?;
        if h.length == 0.0 {
            return Err(Error::NotInH("a must be nonzero".into()));
        }
        let lhs = self.halfdet_brute(gamma)?;
        let rhs = self.halfdet_character_sum(&h);
        Ok(HalfDetReport { lhs, rhs, residual: (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE) })
    }

    /// Weights of T on 𝔪/𝔱 (𝔭_𝔪 and 𝔨_𝔪 without the torus).
    pub fn m_over_t_weights(&self) -> Result<(VirtualCharacter, VirtualCharacter)> {
        let r = self.frame.rank();
        let km = self.frame.weights_on_exact(&self.group, &self.k_m)?;
        let km_roots = km.sub(&VirtualCharacter::monomial(Weight::zero(r), r as i64));
        Ok((self.pm_weights.clone(), km_roots))
    }

    /// Serializable summary for reports.
    pub fn summary(&self) -> Result<StructureSummary> {
        let sigma: Vec<String> =
            (0..=2 * self.l).map(|j| self.casimir_shift(j).map(|s| s.sigma.to_string())).collect::<Result<_>>()?;
        Ok(StructureSummary {
            l: self.l,
            dim_n: self.n.len(),
            dim_p_m: self.p_m.len(),
            dim_k_m: self.k_m.len(),
            alpha_on_b: self.c.to_string(),
            b_norm_sq: self.b_norm_sq.to_string(),
            alpha_norm_sq: self.alpha_norm_sq.to_string(),
            alpha_norm: self.alpha_norm,
            trace_uperp: self.trace_uperp().to_string(),
            sigma_eta: sigma,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureSummary {
    pub l: usize,
    pub dim_n: usize,
    pub dim_p_m: usize,
    pub dim_k_m: usize,
    /// ⟨α, b⟩ for the rational generator b of 𝔟.
    pub alpha_on_b: String,
    pub b_norm_sq: String,
    pub alpha_norm_sq: String,
    pub alpha_norm: f64,
    pub trace_uperp: String,
    pub sigma_eta: Vec<String>,
}

/// Σⱼ (−1)ʲ cⱼ.
pub fn alternating_sum(cs: &[VirtualCharacter]) -> VirtualCharacter {
    let rank = cs.first().map_or(0, |c| c.rank());
    cs.iter()
        .enumerate()
        .fold(VirtualCharacter::zero(rank), |acc, (j, c)| if j % 2 == 0 { acc.add(c) } else { acc.sub(c) })
}

fn split_signs(c: &VirtualCharacter) -> (VirtualCharacter, VirtualCharacter) {
    let mut plus = VirtualCharacter::zero(c.rank());
    let mut minus = VirtualCharacter::zero(c.rank());
    for (w, m) in c.terms() {
        if *m > 0 {
            plus.insert(w.clone(), *m);
        } else {
            minus.insert(w.clone(), -m);
        }
    }
    (plus, minus)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut s = vec![first];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Derivation extension of `a` to Λʲ in the sorted-subset basis.
pub fn exterior_derivation(a: &QMatrix, j: usize) -> QMatrix {
    let n = a.rows;
    let basis = subsets(n, j);
    let index = |s: &[usize]| basis.binary_search_by(|b| b.as_slice().cmp(s)).unwrap();
    let mut m = QMatrix::zeros(basis.len(), basis.len());
    for (col, s) in basis.iter().enumerate() {
        for pos in 0..s.len() {
            for k in 0..n {
                let c = &a[(k, s[pos])];
                if c.is_zero() || (s.contains(&k) && k != s[pos]) {
                    continue;
                }
                let mut t = s.clone();
                t[pos] = k;
                let mut sign = 1i64;
                // bubble sort while tracking the permutation sign
                for i in 0..t.len() {
                    for j2 in 0..t.len() - 1 - i {
                        if t[j2] > t[j2 + 1] {
                            t.swap(j2, j2 + 1);
                            sign = -sign;
                        }
                    }
                }
                let row = index(&t);
                m[(row, col)] += c * q(sign);
            }
        }
    }
    m
}

/// Result of the number-operator supertrace on Λ(𝔭*).
#[derive(Clone, Debug, Serialize)]
pub struct SupertraceReport {
    pub re: f64,
    pub im: f64,
    /// Weights w of 𝔭 with e^{i w·θ − w·y} = 1.
    pub zero_factors: usize,
}

/// Tr_s^{Λ(𝔭*)}[N Ad(k⁻¹) e^{−i ad Y}] = ∂_b|₀ det(1 − e^b Ad(k) e^{i ad Y})|_𝔭
/// for k = exp(Σ θₛHₛ) and Y = Σ yₛHₛ in the torus.
pub fn vanishing_supertrace(p_weights: &VirtualCharacter, theta: &[f64], y: &[f64]) -> SupertraceReport {
    let mut xs = Vec::new();
    for (w, m) in p_weights.terms() {
        let x = Complex64::from_polar((-w.dot(y)).exp(), w.dot(theta));
        for _ in 0..*m {
            xs.push(x);
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let zero_factors = xs.iter().filter(|x| (one - **x).norm() < 1e-10).count();
    let value = numeric::complex_sum((0..xs.len()).map(|i| {
        let rest: Complex64 = xs.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| one - x).product();
        -xs[i] * rest
    }));
    SupertraceReport { re: value.re, im: value.im, zero_factors }
}

/// 𝔭 weights of a group for the chosen torus.
pub fn p_weights(g: &ReductiveGroup) -> Result<VirtualCharacter> {
    let p: Vec<QVec> = g.p_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    TorusFrame::of_group(g).weights_on_exact(g, &p)
}

/// |x| ≥ 0 helper for sign-sensitive exact checks.
pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;
    use crate::lie_core::{build_group, GroupSpec};

    #[test]
    fn sl3_alpha() {
        let s = build_structure(&build_group(&GroupSpec::sl(3)).unwrap()).unwrap();
        assert_eq!(s.l, 1);
        assert_eq!(s.alpha_norm_sq, qr(3, 2));
        assert_eq!(s.c, q(3));
        assert!(s.check_invariants().all());
    }

    #[test]
    fn so31_casimir_table() {
        let s = build_structure(&build_group(&GroupSpec::so(3, 1)).unwrap()).unwrap();
        assert_eq!(s.trace_uperp(), q(-8));
        assert_eq!(s.trace_uperp_compact(), q(-8));
        let sig: Vec<Q> = (0..3).map(|j| s.casimir_shift(j).unwrap().sigma).collect();
        assert_eq!(sig, vec![q(-1), q(0), q(-1)]);
    }

    #[test]
    fn so53_dimension() {
        let s = build_structure(&build_group(&GroupSpec::so(5, 3)).unwrap()).unwrap();
        assert_eq!((s.dim_n(), s.l), (6, 3));
    }

    #[test]
    fn unsupported_factor() {
        let g = build_group(&GroupSpec::line()).unwrap();
        assert!(matches!(build_structure(&g), Err(Error::UnsupportedDeltaOneFactor(_))));
        let g = build_group(&GroupSpec::sl(2)).unwrap();
        assert!(matches!(build_structure(&g), Err(Error::DeltaNotOne(0))));
    }

    #[test]
    fn exterior_derivation_trace() {
        // tr of the derivation on Λʲ is C(n−1, j−1)·tr(a)
        let a = QMatrix::from_rows(&[vec![q(1), q(2), q(0)], vec![q(0), q(3), q(1)], vec![q(4), q(0), q(5)]]);
        assert_eq!(exterior_derivation(&a, 2).trace(), q(2) * a.trace());
    }
}
