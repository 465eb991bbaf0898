//! Maximal tori, root systems, Weyl groups and virtual characters.
//!
//! Weights are covectors on a torus written in the coordinates of its
//! generators: the weight `w` is the character `Y = Σ yₛHₛ ↦ e^{i w·y}`, so the
//! pairing with a torus vector is `w·y/2π`. Weights have exact rational
//! entries; all inner products between them go through the inverse Gram
//! matrix of the generators.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Rational64, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, QMatrix, QVec, Q};
use crate::lie_core::{Part, ReductiveGroup};
use crate::numeric;

pub type Rat = Rational64;

pub fn to_rat(x: &Q) -> Rat {
    Rat::new(x.numer().to_i64().expect("numerator fits i64"), x.denom().to_i64().expect("denominator fits i64"))
}

pub fn rat_to_q(x: &Rat) -> Q {
    exact::qr(*x.numer(), *x.denom())
}

pub fn rat_f64(x: &Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rat::zero(); rank])
    }
    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| Rat::from_integer(x)).collect())
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
    pub fn scale(&self, c: Rat) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }
    /// Lexicographic positivity: first nonzero entry positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
    }
    /// w·y for real torus coordinates.
    pub fn dot(&self, y: &[f64]) -> f64 {
        self.0.iter().zip(y).map(|(a, b)| rat_f64(a) * b).sum()
    }
    pub fn dot_complex(&self, z: &[Complex64]) -> Complex64 {
        self.0.iter().zip(z).map(|(a, b)| b * rat_f64(a)).sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Finite integer combination of torus characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharacter {
    rank: usize,
    terms: BTreeMap<Weight, i64>,
}

impl VirtualCharacter {
    pub fn zero(rank: usize) -> Self {
        VirtualCharacter { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), 1)
    }

    pub fn monomial(w: Weight, m: i64) -> Self {
        let mut c = Self::zero(w.0.len());
        c.insert(w, m);
        c
    }

    pub fn from_weights<I: IntoIterator<Item = Weight>>(rank: usize, weights: I) -> Self {
        let mut c = Self::zero(rank);
        for w in weights {
            c.insert(w, 1);
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, w: Weight, m: i64) {
        debug_assert_eq!(w.0.len(), self.rank);
        let e = self.terms.entry(w).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Virtual dimension.
    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut c = self.clone();
        for (w, m) in &o.terms {
            c.insert(w.clone(), *m);
        }
        c
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut c = Self::zero(self.rank);
        if k != 0 {
            c.terms = self.terms.iter().map(|(w, m)| (w.clone(), m * k)).collect();
        }
        c
    }

    pub fn tensor(&self, o: &Self) -> Self {
        let mut c = Self::zero(self.rank);
        for (a, m) in &self.terms {
            for (b, n) in &o.terms {
                c.insert(a.add(b), m * n);
            }
        }
        c
    }

    pub fn dual(&self) -> Self {
        let mut c = Self::zero(self.rank);
        c.terms = self.terms.iter().map(|(w, m)| (w.neg(), *m)).collect();
        c
    }

    /// Adams operation ψᵏ.
    pub fn adams(&self, k: i64) -> Self {
        let mut c = Self::zero(self.rank);
        for (w, m) in &self.terms {
            c.insert(w.scale(Rat::from_integer(k)), *m);
        }
        c
    }

    /// Λ⁰ … Λ^max by Newton's identity j·Λʲ = Σᵢ (−1)^{i−1} ψⁱ Λ^{j−i}.
    pub fn exterior_powers(&self, max: usize) -> Vec<Self> {
        let mut lam = vec![Self::one(self.rank)];
        let psi: Vec<Self> = (1..=max as i64).map(|k| self.adams(k)).collect();
        for j in 1..=max {
            let mut acc = Self::zero(self.rank);
            for i in 1..=j {
                let term = psi[i - 1].tensor(&lam[j - i]);
                acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
            }
            let mut c = Self::zero(self.rank);
            for (w, m) in acc.terms {
                assert!(m % j as i64 == 0, "Newton division is exact in a λ-ring");
                c.insert(w, m / j as i64);
            }
            lam.push(c);
        }
        lam
    }

    pub fn exterior(&self, j: usize) -> Self {
        self.exterior_powers(j).pop().unwrap()
    }

    /// Λ⁰ … Λ^deg from the generating function Π(1 + y e^w)^m; honest characters only.
    pub fn exterior_powers_direct(&self) -> Option<Vec<Self>> {
        if self.terms.values().any(|m| *m < 0) {
            return None;
        }
        let mut poly = vec![Self::one(self.rank)];
        for (w, m) in &self.terms {
            for _ in 0..*m {
                let mut next = poly.clone();
                next.push(Self::zero(self.rank));
                for (k, coeff) in poly.iter().enumerate() {
                    let shifted = coeff.tensor(&Self::monomial(w.clone(), 1));
                    next[k + 1] = next[k + 1].add(&shifted);
                }
                poly = next;
            }
        }
        Some(poly)
    }

    pub fn exterior_direct(&self, j: usize) -> Option<Self> {
        let all = self.exterior_powers_direct()?;
        Some(all.get(j).cloned().unwrap_or_else(|| Self::zero(self.rank)))
    }

    /// Σᵢ (−1)ⁱ Λⁱ of an honest character.
    pub fn alternating_exterior(&self) -> Self {
        let d = self.degree().max(0) as usize;
        let mut c = Self::zero(self.rank);
        for (i, l) in self.exterior_powers(d).into_iter().enumerate() {
            c = if i % 2 == 0 { c.add(&l) } else { c.sub(&l) };
        }
        c
    }

    /// Σ m e^{i w·z} at complex torus coordinates.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        numeric::complex_sum(
            self.terms.iter().map(|(w, m)| (Complex64::i() * w.dot_complex(z)).exp() * *m as f64),
        )
    }

    /// Σ m e^{i w·θ}.
    pub fn eval_torus(&self, theta: &[f64]) -> Complex64 {
        let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        self.eval(&z)
    }

    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        rs.weyl.iter().all(|w| self.terms.iter().all(|(lam, m)| self.multiplicity(&w.apply(lam)) == *m))
    }

    /// Drops the torus coordinates not listed, e.g. restriction to a subtorus.
    pub fn project(&self, keep: &[usize]) -> Self {
        let mut c = Self::zero(keep.len());
        for (w, m) in &self.terms {
            c.insert(Weight(keep.iter().map(|&i| w.0[i]).collect()), *m);
        }
        c
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, m)| format!("{m}·e{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Generators of a torus inside 𝔤 with their Gram matrix.
#[derive(Clone, Debug)]
pub struct TorusFrame {
    pub generators: Vec<QVec>,
    pub gram: Vec<Vec<Rat>>,
    pub gram_inv: Vec<Vec<Rat>>,
    ad_ortho: Vec<DMatrix<f64>>,
}

impl TorusFrame {
    /// The chosen maximal torus of 𝔨.
    pub fn of_group(g: &ReductiveGroup) -> Self {
        let gens = g.torus.iter().map(|&i| g.basis_vector(i)).collect();
        Self::new(g, gens)
    }

    pub fn new(g: &ReductiveGroup, generators: Vec<QVec>) -> Self {
        let r = generators.len();
        let gq: Vec<QVec> =
            (0..r).map(|i| (0..r).map(|j| g.inner(&generators[i], &generators[j])).collect()).collect();
        let inv = invert(&gq);
        let ad_ortho = generators.iter().map(|v| g.ad_ortho(&exact::to_f64_vec(v))).collect();
        TorusFrame {
            gram: gq.iter().map(|row| row.iter().map(to_rat).collect()).collect(),
            gram_inv: inv.iter().map(|row| row.iter().map(to_rat).collect()).collect(),
            generators,
            ad_ortho,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// (a, b) = aᵀ G⁻¹ b.
    pub fn pair(&self, a: &Weight, b: &Weight) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                s += a.0[i] * self.gram_inv[i][j] * b.0[j];
            }
        }
        s
    }

    /// |Y|² for Y = Σ yₛHₛ.
    pub fn norm_sq(&self, y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                s += y[i] * rat_f64(&self.gram[i][j]) * y[j];
            }
        }
        s
    }

    /// Lower Cholesky factor L of the Gram matrix, G = LLᵀ.
    pub fn cholesky(&self) -> DMatrix<f64> {
        let r = self.rank();
        let gm = DMatrix::from_fn(r, r, |i, j| rat_f64(&self.gram[i][j]));
        if r == 0 {
            return gm;
        }
        gm.cholesky().expect("Gram matrix is positive definite").l()
    }

    pub fn ad_generators(&self) -> &[DMatrix<f64>] {
        &self.ad_ortho
    }

    /// Algebra vector Σ yₛHₛ in basis coordinates.
    pub fn vector(&self, y: &[f64]) -> Vec<f64> {
        let d = self.generators.first().map_or(0, |v| v.len());
        let mut x = vec![0.0; d];
        for (s, gen) in self.generators.iter().enumerate() {
            for (i, c) in gen.iter().enumerate() {
                if !c.is_zero() {
                    x[i] += y[s] * exact::to_f64(c);
                }
            }
        }
        x
    }

    /// Weights of the torus on an ad-invariant subspace (orthonormal columns).
    pub fn weights_on(&self, sub: &DMatrix<f64>) -> Result<VirtualCharacter> {
        let r = self.rank();
        if sub.ncols() == 0 {
            return Ok(VirtualCharacter::zero(r));
        }
        if r == 0 {
            return Ok(VirtualCharacter::monomial(Weight(vec![]), sub.ncols() as i64));
        }
        let ops: Vec<DMatrix<f64>> = self.ad_ortho.iter().map(|a| sub.transpose() * a * sub).collect();
        let spec = numeric::joint_spectrum(&ops)?;
        let mut c = VirtualCharacter::zero(r);
        for mu in spec {
            let w = mu
                .iter()
                .map(|&x| {
                    numeric::rationalize(x, 1e-7)
                        .ok_or_else(|| Error::WeightExtraction(format!("eigenvalue {x} is not a small rational")))
                })
                .collect::<Result<Vec<_>>>()?;
            c.insert(Weight(w), 1);
        }
        Ok(c)
    }

    /// Weights on a span of exact basis-coordinate vectors.
    pub fn weights_on_exact(&self, g: &ReductiveGroup, vectors: &[QVec]) -> Result<VirtualCharacter> {
        self.weights_on(&ortho_columns(g, vectors))
    }

    pub fn same_as(&self, o: &TorusFrame) -> bool {
        self.generators == o.generators
    }
}

/// Orthonormal columns (orthonormal frame) spanning exact vectors.
pub fn ortho_columns(g: &ReductiveGroup, vectors: &[QVec]) -> DMatrix<f64> {
    let cols: Vec<_> = vectors.iter().map(|v| g.exact_to_ortho(v)).collect();
    numeric::columns_to_matrix(&numeric::orthonormal_span(&cols, 1e-12), g.dim())
}

fn invert(m: &[QVec]) -> Vec<QVec> {
    let n = m.len();
    let a = QMatrix::from_rows(m);
    (0..n)
        .map(|j| a.solve(&exact::unit(n, j)).expect("Gram matrix is invertible"))
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .fold(vec![exact::zeros(n); n], |mut acc, (j, col)| {
            for i in 0..n {
                acc[i][j] = col[i].clone();
            }
            acc
        })
}

/// A Weyl group element acting on weights, with its sign det(w).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: Vec<Vec<Rat>>,
    pub sign: i32,
}

impl WeylElement {
    pub fn identity(r: usize) -> Self {
        let matrix = (0..r).map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
        WeylElement { matrix, sign: 1 }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        Weight(self.matrix.iter().map(|row| row.iter().zip(&w.0).map(|(a, b)| a * b).sum()).collect())
    }

    fn compose(&self, o: &WeylElement) -> WeylElement {
        let r = self.matrix.len();
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.matrix[i][k] * o.matrix[k][j]).sum()).collect())
            .collect();
        WeylElement { matrix, sign: self.sign * o.sign }
    }

    /// Action on torus coordinates, fixed by (wλ)·(wy) = λ·y: y ↦ G M G⁻¹ y.
    pub fn apply_to_vector(&self, frame: &TorusFrame, y: &[f64]) -> Vec<f64> {
        let r = self.matrix.len();
        let mul = |m: &dyn Fn(usize, usize) -> f64, v: &[f64]| -> Vec<f64> {
            (0..r).map(|i| (0..r).map(|j| m(i, j) * v[j]).sum()).collect()
        };
        let a = mul(&|i, j| rat_f64(&frame.gram_inv[i][j]), y);
        let b = mul(&|i, j| rat_f64(&self.matrix[i][j]), &a);
        mul(&|i, j| rat_f64(&frame.gram[i][j]), &b)
    }
}

/// Root data of a compact algebra relative to a torus frame.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub frame: TorusFrame,
    pub roots: Vec<Weight>,
    pub positive: Vec<Weight>,
    pub simple: Vec<Weight>,
    pub rho: Weight,
    pub weyl: Vec<WeylElement>,
}

/// Root system of 𝔨 for the group's chosen maximal torus.
pub fn root_system(g: &ReductiveGroup) -> Result<RootSystem> {
    let frame = TorusFrame::of_group(g);
    let k: Vec<QVec> = g.k_indices().into_iter().map(|i| g.basis_vector(i)).collect();
    let weights = frame.weights_on_exact(g, &k)?;
    RootSystem::from_weights(frame, &weights)
}

/// Root system of the compact algebra spanned by `vectors`, on the same torus.
pub fn root_system_of(g: &ReductiveGroup, frame: TorusFrame, vectors: &[QVec]) -> Result<RootSystem> {
    let weights = frame.weights_on_exact(g, vectors)?;
    RootSystem::from_weights(frame, &weights)
}

impl RootSystem {
    /// Builds root data from the weights of the torus on a compact algebra.
    pub fn from_weights(frame: TorusFrame, weights: &VirtualCharacter) -> Result<RootSystem> {
        let r = frame.rank();
        let zero = weights.multiplicity(&Weight::zero(r));
        if zero as usize != r {
            return Err(Error::NotMaximalTorus { centralizer: zero.max(0) as usize, torus: r });
        }
        let mut roots = Vec::new();
        for (w, m) in weights.terms() {
            if !w.is_zero() {
                for _ in 0..*m {
                    roots.push(w.clone());
                }
            }
        }
        let positive: Vec<Weight> = roots.iter().filter(|w| w.is_positive()).cloned().collect();
        let pos_set: HashSet<&Weight> = positive.iter().collect();
        let simple: Vec<Weight> = positive
            .iter()
            .filter(|a| !positive.iter().any(|b| pos_set.contains(&a.sub(b)) && a.sub(b).is_positive()))
            .cloned()
            .collect();
        let rho = positive.iter().fold(Weight::zero(r), |acc, a| acc.add(a)).scale(Rat::new(1, 2));
        let reflections: Vec<WeylElement> = simple.iter().map(|a| reflection(&frame, a)).collect();
        let mut weyl = vec![WeylElement::identity(r)];
        let mut seen: HashSet<Vec<Vec<Rat>>> = weyl.iter().map(|w| w.matrix.clone()).collect();
        let mut frontier = weyl.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for s in &reflections {
                    let c = s.compose(e);
                    if seen.insert(c.matrix.clone()) {
                        next.push(c.clone());
                        weyl.push(c);
                    }
                }
            }
            frontier = next;
        }
        Ok(RootSystem { frame, roots, positive, simple, rho, weyl })
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    /// σ(Y) = Π_{α>0} (e^{iα·y/2} − e^{−iα·y/2}).
    pub fn weyl_denominator(&self, y: &[Complex64]) -> Complex64 {
        self.positive.iter().map(|a| Complex64::new(0.0, 2.0) * (a.dot_complex(y) * 0.5).sin()).product()
    }

    /// Σ_w ε_w e^{i (wρ)·y}.
    pub fn weyl_alternating_sum(&self, lambda: &Weight, y: &[Complex64]) -> Complex64 {
        let shifted = lambda.add(&self.rho);
        numeric::complex_sum(
            self.weyl.iter().map(|w| (Complex64::i() * w.apply(&shifted).dot_complex(y)).exp() * w.sign as f64),
        )
    }

    /// π(Y) = Π_{α>0} i α·y.
    pub fn pi(&self, y: &[Complex64]) -> Complex64 {
        self.positive.iter().map(|a| Complex64::i() * a.dot_complex(y)).product()
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        self.simple.iter().all(|a| !self.frame.pair(lambda, a).is_negative())
    }

    /// Character of the irreducible representation with highest weight λ.
    pub fn weyl_character(&self, lambda: &Weight, y: &[f64]) -> Result<Complex64> {
        if !self.is_dominant(lambda) {
            return Err(Error::InvalidInput(format!("weight {lambda} is not dominant")));
        }
        let z: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let den = self.weyl_denominator(&z);
        if den.norm() > 1e-6 {
            return Ok(self.weyl_alternating_sum(lambda, &z) / den);
        }
        // removable singularity: mean value over a small complex circle
        let r = self.rank();
        let dir: Vec<f64> = (0..r).map(|s| 1.0 / (2.0 + s as f64).sqrt() + 0.1 * s as f64).collect();
        let circle = |n: usize| {
            numeric::complex_sum((0..n).map(|k| {
                let h = Complex64::from_polar(0.3, 2.0 * PI * (k as f64 + 0.5) / n as f64);
                let p: Vec<Complex64> = z.iter().zip(&dir).map(|(a, d)| a + h * d).collect();
                self.weyl_alternating_sum(lambda, &p) / self.weyl_denominator(&p)
            })) / n as f64
        };
        let (coarse, fine) = (circle(32), circle(64));
        if (coarse - fine).norm() > 1e-9 * fine.norm().max(1.0) {
            return Err(Error::SingularPoint);
        }
        Ok(fine)
    }

    /// Π_{α>0} (λ+ρ, α)/(ρ, α).
    pub fn weyl_dimension(&self, lambda: &Weight) -> Rat {
        let shifted = lambda.add(&self.rho);
        self.positive
            .iter()
            .map(|a| self.frame.pair(&shifted, a) / self.frame.pair(&self.rho, a))
            .fold(Rat::one(), |acc, x| acc * x)
    }

    /// 4π²|ρ|² with the pairing ⟨ρ,Y⟩ = ρ·y/2π, i.e. ρᵀG⁻¹ρ.
    pub fn rho_norm_sq_scaled(&self) -> Rat {
        self.frame.pair(&self.rho, &self.rho)
    }

    /// Riemannian volume of K/T for the metric ⟨·,·⟩.
    pub fn volume_k_over_t(&self) -> f64 {
        self.positive.iter().map(|a| 2.0 * PI / rat_f64(&self.frame.pair(&self.rho, a))).product()
    }

    /// Checks that every Weyl element permutes the roots.
    pub fn weyl_permutes_roots(&self) -> bool {
        let set: HashSet<&Weight> = self.roots.iter().collect();
        self.weyl.iter().all(|w| self.roots.iter().all(|a| set.contains(&w.apply(a))))
    }

    pub fn summary(&self) -> RootSummary {
        let show = |v: &[Weight]| v.iter().map(|w| w.to_string()).collect();
        RootSummary {
            rank: self.rank(),
            roots: show(&self.roots),
            positive: show(&self.positive),
            simple: show(&self.simple),
            rho: self.rho.to_string(),
            weyl_order: self.weyl_order(),
        }
    }
}

fn reflection(frame: &TorusFrame, a: &Weight) -> WeylElement {
    let r = frame.rank();
    let aa = frame.pair(a, a);
    // s(λ) = λ − 2(λ,α)/(α,α) α; (λ,α) = λᵀ G⁻¹ α
    let ginv_a: Vec<Rat> = (0..r).map(|i| (0..r).map(|j| frame.gram_inv[i][j] * a.0[j]).sum()).collect();
    let two = Rat::from_integer(2);
    let matrix = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let id = if i == j { Rat::one() } else { Rat::zero() };
                    id - two * a.0[i] * ginv_a[j] / aa
                })
                .collect()
        })
        .collect();
    WeylElement { matrix, sign: -1 }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSummary {
    pub rank: usize,
    pub roots: Vec<String>,
    pub positive: Vec<String>,
    pub simple: Vec<String>,
    pub rho: String,
    pub weyl_order: usize,
}

/// Both sides of Kostant's strange formula for the 𝔨 of a group.
#[derive(Clone, Debug)]
pub struct KostantReport {
    pub lhs: Q,
    pub rhs: Q,
    pub residual: f64,
}

/// lhs = 4π²|ρ^𝔨|², rhs = −(1/24) Tr^𝔨[Σ ad(eᵢ)²] over an orthonormal basis of 𝔨.
pub fn kostant_check(g: &ReductiveGroup) -> Result<KostantReport> {
    let rs = root_system(g)?;
    let lhs = rat_to_q(&rs.rho_norm_sq_scaled());
    let rhs = -casimir_trace_k(g) / exact::q(24);
    let residual = exact::to_f64(&(&lhs - &rhs)).abs();
    Ok(KostantReport { lhs, rhs, residual })
}

/// Tr^𝔨[Σ_{eᵢ ∈ 𝔨} ad(eᵢ)²] with eᵢ orthonormal, exact.
pub fn casimir_trace_k(g: &ReductiveGroup) -> Q {
    let k = g.k_indices();
    let mut total = Q::zero();
    for &i in &k {
        let ad = g.ad_basis(i);
        let mut tr = Q::zero();
        for &j in &k {
            for &m in &k {
                tr += &ad[(j, m)] * &ad[(m, j)];
            }
        }
        total += tr / &g.norm_sq[i];
    }
    total
}

/// Tr^𝔭[Σ_{eᵢ ∈ 𝔨} ad(eᵢ)²|_𝔭] with eᵢ orthonormal, exact.
pub fn casimir_trace_kp(g: &ReductiveGroup) -> Q {
    let (k, p) = (g.k_indices(), g.p_indices());
    let mut total = Q::zero();
    for &i in &k {
        let ad = g.ad_basis(i);
        let mut tr = Q::zero();
        for &j in &p {
            for &m in &p {
                tr += &ad[(j, m)] * &ad[(m, j)];
            }
        }
        total += tr / &g.norm_sq[i];
    }
    total
}

/// ∫_𝔨 f(Y) e^{−|Y|²/2t} dY for K-invariant f, reduced to the torus:
/// (vol(K/T)/|W|) ∫_𝔱 |π(Y)|² f(Y) e^{−|Y|²/2t} dY.
pub fn weyl_integrate_algebra<F>(rs: &RootSystem, f: F, t: f64, order: usize, k_invariant: bool) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !k_invariant {
        return Err(Error::NotInvariant);
    }
    let r = rs.rank();
    let l = rs.frame.cholesky();
    let lt_inv = if r == 0 { l.clone() } else { l.transpose().try_inverse().expect("invertible") };
    let integral = numeric::hermite_tensor(r, order, t, |u| {
        let y: Vec<f64> = (0..r).map(|i| (0..r).map(|j| lt_inv[(i, j)] * u[j]).sum()).collect();
        let z: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Complex64::new(rs.pi(&z).norm_sqr() * f(&y), 0.0)
    });
    Ok(rs.volume_k_over_t() / rs.weyl_order() as f64 * integral.re)
}

/// χ(K/K_M) = |W(T,K)|/|W(T,K_M)| for a shared maximal torus.
pub fn bott_euler_ratio(k: &RootSystem, km: &RootSystem) -> Result<Rat> {
    if !k.frame.same_as(&km.frame) {
        return Err(Error::TorusMismatch);
    }
    Ok(Rat::new(k.weyl_order() as i64, km.weyl_order() as i64))
}

/// Zero-weight multiplicity check for 𝔨: the torus centralizer equals the torus.
pub fn torus_is_maximal(g: &ReductiveGroup) -> bool {
    g.torus_centralizer_in(Part::K).len() == g.torus_rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::{build_group, GroupSpec};

    #[test]
    fn newton_matches_generating_function() {
        let c = VirtualCharacter::from_weights(
            2,
            [Weight::from_ints(&[1, 0]), Weight::from_ints(&[-1, 0]), Weight::from_ints(&[0, 1]), Weight::zero(2)],
        );
        for j in 0..=5 {
            assert_eq!(c.exterior(j), c.exterior_direct(j).unwrap(), "j = {j}");
        }
    }

    #[test]
    fn so3_roots() {
        let g = build_group(&GroupSpec::so(3, 1)).unwrap();
        let rs = root_system(&g).unwrap();
        assert_eq!((rs.positive.len(), rs.weyl_order()), (1, 2));
    }

    #[test]
    fn so5_weyl_order() {
        let g = build_group(&GroupSpec::so(5, 1)).unwrap();
        let rs = root_system(&g).unwrap();
        assert_eq!((rs.positive.len(), rs.weyl_order()), (4, 8));
        assert!(rs.weyl_permutes_roots());
    }

    #[test]
    fn kostant_so3_in_sl3() {
        let g = build_group(&GroupSpec::sl(3)).unwrap();
        let k = kostant_check(&g).unwrap();
        assert_eq!(k.lhs, exact::qr(1, 8));
        assert_eq!(k.rhs, exact::qr(1, 8));
    }

    #[test]
    fn character_limit_gives_dimension() {
        let g = build_group(&GroupSpec::so(5, 1)).unwrap();
        let rs = root_system(&g).unwrap();
        let lam = rs.rho.scale(Rat::from_integer(2));
        let chi = rs.weyl_character(&lam, &[0.0, 0.0]).unwrap();
        assert!((chi.re - rat_f64(&rs.weyl_dimension(&lam))).abs() < 1e-9);
    }
}
