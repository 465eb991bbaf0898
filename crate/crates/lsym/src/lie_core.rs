//! Matrix realizations of the supported real reductive Lie algebras.
//!
//! Every algebra carries a basis of integer matrices that is orthogonal for
//! the Frobenius product, split into the −1 and +1 eigenspaces of the Cartan
//! involution θ(X) = −Xᵀ. Structure constants, θ and the invariant form B are
//! exact rationals. Float vectors passed across the public API are
//! coordinates in that basis unless a name says `ortho`, in which case they
//! are coordinates in the ⟨·,·⟩-orthonormal rescaling of it.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, q, qr, QMatrix, QVec, Q};
use crate::numeric;

/// Group descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "scale_serde")]
    pub b_scale: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Sl { n: usize },
    So { p: usize, q: usize },
    #[serde(alias = "r")]
    Line,
    Product { factors: Vec<GroupSpec> },
}

mod scale_serde {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Float(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw: Option<Raw> = Option::deserialize(d)?;
        let parsed = match raw {
            None => return Ok(None),
            Some(Raw::Int(n)) => Some(crate::exact::q(n)),
            Some(Raw::Float(f)) => crate::exact::parse_rational(&format!("{f}")),
            Some(Raw::Text(t)) => crate::exact::parse_rational(&t),
        };
        parsed.map(Some).ok_or_else(|| serde::de::Error::custom("b_scale must be a positive rational"))
    }
}

impl GroupSpec {
    pub fn sl(n: usize) -> Self {
        GroupSpec { family: Family::Sl { n }, b_scale: None }
    }
    pub fn so(p: usize, q: usize) -> Self {
        GroupSpec { family: Family::So { p, q }, b_scale: None }
    }
    pub fn line() -> Self {
        GroupSpec { family: Family::Line, b_scale: None }
    }
    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec { family: Family::Product { factors }, b_scale: None }
    }
    pub fn with_scale(mut self, s: Q) -> Self {
        self.b_scale = Some(s);
        self
    }

    /// Parses inline JSON or the shorthand `sl3`, `so(3,1)`, `line`, with
    /// factors joined by `x`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::InvalidInput(format!("group descriptor: {e}")));
        }
        let factors: Vec<GroupSpec> = t.split('x').map(parse_factor).collect::<Result<_>>()?;
        Ok(if factors.len() == 1 { factors.into_iter().next().unwrap() } else { GroupSpec::product(factors) })
    }
}

fn parse_factor(s: &str) -> Result<GroupSpec> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse group factor '{s}'"));
    if s == "line" || s == "r" || s == "R" {
        return Ok(GroupSpec::line());
    }
    if let Some(rest) = s.strip_prefix("sl") {
        let n = rest.trim_start_matches('(').trim_end_matches(')').parse().map_err(|_| bad())?;
        return Ok(GroupSpec::sl(n));
    }
    if let Some(rest) = s.strip_prefix("so") {
        let inner = rest.trim_start_matches('(').trim_end_matches(')');
        let (p, q) = inner.split_once(',').ok_or_else(bad)?;
        return Ok(GroupSpec::so(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?));
    }
    Err(bad())
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Sl { n } => write!(f, "sl{n}")?,
            Family::So { p, q } => write!(f, "so({p},{q})")?,
            Family::Line => write!(f, "line")?,
            Family::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join("x"))?
            }
        }
        if let Some(s) = &self.b_scale {
            write!(f, "[B*{s}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    P,
    K,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    Sl(usize),
    So(usize, usize),
    Line,
}

/// One simple (or abelian) factor, embedded as a diagonal block.
#[derive(Clone, Debug)]
pub struct Block {
    pub kind: BlockKind,
    pub offset: usize,
    pub size: usize,
    /// B = scale·Tr on this block.
    pub scale: Q,
    pub basis: std::ops::Range<usize>,
    pub torus: std::ops::Range<usize>,
}

impl Block {
    pub fn delta(&self) -> usize {
        match self.kind {
            BlockKind::Sl(n) => n - 1 - n / 2,
            BlockKind::So(p, q) => (p + q) / 2 - p / 2 - q / 2,
            BlockKind::Line => 1,
        }
    }
}

/// Sparse integer matrix entry list.
type Sparse = Vec<(usize, usize, i64)>;

#[derive(Clone, Debug)]
pub struct ReductiveGroup {
    pub spec: GroupSpec,
    pub blocks: Vec<Block>,
    pub matrix_size: usize,
    basis: Vec<Sparse>,
    pub parts: Vec<Part>,
    /// ⟨bᵢ,bᵢ⟩ for the orthogonal basis.
    pub norm_sq: Vec<Q>,
    /// Indices of basis vectors spanning the chosen maximal torus of 𝔨.
    pub torus: Vec<usize>,
    structure: Vec<Vec<(usize, Q)>>,
    ad_exact: Vec<QMatrix>,
    ad_ortho: Vec<DMatrix<f64>>,
    ortho_scale: Vec<f64>,
}

/// Builds the algebra of a descriptor with its default form.
pub fn build_group(spec: &GroupSpec) -> Result<ReductiveGroup> {
    let mut raw = Vec::new();
    flatten(spec, &q(1), &mut raw)?;
    let mut blocks = Vec::new();
    let mut basis: Vec<Sparse> = Vec::new();
    let mut parts = Vec::new();
    let mut scales = Vec::new();
    let mut torus = Vec::new();
    let mut offset = 0;
    for (kind, scale) in raw {
        let (size, elems, tor) = family_basis(kind);
        let start = basis.len();
        let tstart = torus.len();
        for (m, part) in elems {
            basis.push(m.into_iter().map(|(r, c, v)| (r + offset, c + offset, v)).collect());
            parts.push(part);
            scales.push(scale.clone());
        }
        torus.extend(tor.into_iter().map(|i| i + start));
        blocks.push(Block {
            kind,
            offset,
            size,
            scale,
            basis: start..basis.len(),
            torus: tstart..torus.len(),
        });
        offset += size;
    }
    let norm_sq: Vec<Q> =
        basis.iter().zip(&scales).map(|(b, s)| s * q(b.iter().map(|e| e.2 * e.2).sum::<i64>())).collect();
    let d = basis.len();
    let mut group = ReductiveGroup {
        spec: spec.clone(),
        blocks,
        matrix_size: offset,
        basis,
        parts,
        norm_sq,
        torus,
        structure: Vec::new(),
        ad_exact: Vec::new(),
        ad_ortho: Vec::new(),
        ortho_scale: Vec::new(),
    };
    group.structure = (0..d * d).map(|ij| group.basis_commutator_coords(ij / d, ij % d)).collect();
    group.rebuild_caches();
    Ok(group)
}

fn flatten(spec: &GroupSpec, outer: &Q, out: &mut Vec<(BlockKind, Q)>) -> Result<()> {
    let s = match &spec.b_scale {
        Some(x) if x.is_positive() => outer * x,
        Some(_) => return Err(Error::UnsupportedFamily("b_scale must be positive".into())),
        None => outer.clone(),
    };
    match &spec.family {
        Family::Sl { n } if *n == 2 || *n == 3 => out.push((BlockKind::Sl(*n), s)),
        Family::Sl { n } => return Err(Error::UnsupportedFamily(format!("sl({n}) (only n = 2, 3)"))),
        Family::So { p, q } if *p >= 1 && *q >= 1 => out.push((BlockKind::So(*p, *q), &s * qr(1, 2))),
        Family::So { p, q } => return Err(Error::UnsupportedFamily(format!("so({p},{q}) needs p,q ≥ 1"))),
        Family::Line => out.push((BlockKind::Line, s)),
        Family::Product { factors } if !factors.is_empty() => {
            for f in factors {
                flatten(f, &s, out)?;
            }
        }
        Family::Product { .. } => return Err(Error::UnsupportedFamily("empty product".into())),
    }
    Ok(())
}

/// (matrix size, basis with parts, torus indices within the block)
fn family_basis(kind: BlockKind) -> (usize, Vec<(Sparse, Part)>, Vec<usize>) {
    let sym = |i: usize, j: usize| vec![(i, j, 1), (j, i, 1)];
    let skew = |i: usize, j: usize| vec![(i, j, 1), (j, i, -1)];
    match kind {
        BlockKind::Line => (1, vec![(vec![(0, 0, 1)], Part::P)], vec![]),
        BlockKind::Sl(n) => {
            let mut v = Vec::new();
            for k in 1..n {
                let mut h: Sparse = (0..k).map(|i| (i, i, 1)).collect();
                h.push((k, k, -(k as i64)));
                v.push((h, Part::P));
            }
            for i in 0..n {
                for j in i + 1..n {
                    v.push((sym(i, j), Part::P));
                }
            }
            let torus_index = v.len();
            for i in 0..n {
                for j in i + 1..n {
                    v.push((skew(i, j), Part::K));
                }
            }
            (n, v, vec![torus_index])
        }
        BlockKind::So(p, q) => {
            let n = p + q;
            let mut v = Vec::new();
            for i in 0..p {
                for j in p..n {
                    v.push((sym(i, j), Part::P));
                }
            }
            let mut pairs = Vec::new();
            for s in 0..p / 2 {
                pairs.push((2 * s, 2 * s + 1));
            }
            let qstart = p + q % 2;
            for s in 0..q / 2 {
                pairs.push((qstart + 2 * s, qstart + 2 * s + 1));
            }
            let mut tor = Vec::new();
            for (lo, hi) in [(0, p), (p, n)] {
                for i in lo..hi {
                    for j in i + 1..hi {
                        if pairs.contains(&(i, j)) {
                            tor.push(v.len());
                        }
                        v.push((skew(i, j), Part::K));
                    }
                }
            }
            // keep torus order by pair order
            let mut ordered = Vec::new();
            for &(i, j) in &pairs {
                let idx = v.iter().position(|(m, part)| *part == Part::K && m[0] == (i, j, 1)).unwrap();
                ordered.push(idx);
            }
            debug_assert_eq!(ordered.len(), tor.len());
            (n, v, ordered)
        }
    }
}

impl ReductiveGroup {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn p_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parts[i] == Part::P).collect()
    }
    pub fn k_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parts[i] == Part::K).collect()
    }
    pub fn dim_p(&self) -> usize {
        self.p_indices().len()
    }
    pub fn dim_k(&self) -> usize {
        self.k_indices().len()
    }
    pub fn torus_rank(&self) -> usize {
        self.torus.len()
    }

    fn dense_int(&self, i: usize) -> Vec<i64> {
        let n = self.matrix_size;
        let mut m = vec![0i64; n * n];
        for &(r, c, v) in &self.basis[i] {
            m[r * n + c] += v;
        }
        m
    }

    fn basis_commutator_coords(&self, i: usize, j: usize) -> Vec<(usize, Q)> {
        let n = self.matrix_size;
        let (a, b) = (self.dense_int(i), self.dense_int(j));
        let mut c = vec![0i64; n * n];
        for r in 0..n {
            for m in 0..n {
                let (x, y) = (a[r * n + m], b[r * n + m]);
                if x == 0 && y == 0 {
                    continue;
                }
                for s in 0..n {
                    c[r * n + s] += x * b[m * n + s] - y * a[m * n + s];
                }
            }
        }
        self.project_int(&c)
    }

    fn project_int(&self, c: &[i64]) -> Vec<(usize, Q)> {
        let n = self.matrix_size;
        let mut out = Vec::new();
        for (k, bk) in self.basis.iter().enumerate() {
            let num: i64 = bk.iter().map(|&(r, s, v)| v * c[r * n + s]).sum();
            if num != 0 {
                let den: i64 = bk.iter().map(|e| e.2 * e.2).sum();
                out.push((k, qr(num, den)));
            }
        }
        out
    }

    fn rebuild_caches(&mut self) {
        let d = self.dim();
        self.ortho_scale = self.norm_sq.iter().map(|x| exact::to_f64(x).sqrt()).collect();
        self.ad_exact = (0..d)
            .map(|i| {
                let mut m = QMatrix::zeros(d, d);
                for j in 0..d {
                    for (k, c) in &self.structure[i * d + j] {
                        m[(*k, j)] = c.clone();
                    }
                }
                m
            })
            .collect();
        self.ad_ortho = (0..d)
            .map(|i| {
                let m = &self.ad_exact[i];
                DMatrix::from_fn(d, d, |k, j| {
                    exact::to_f64(&m[(k, j)]) * self.ortho_scale[k] / self.ortho_scale[j]
                })
            })
            .collect();
    }

    /// Structure constants of [bᵢ, bⱼ] as a sparse coordinate list.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.structure[i * self.dim() + j]
    }

    /// A copy with one structure constant shifted; used as a negative control.
    pub fn with_perturbed_constant(&self, i: usize, j: usize, k: usize, delta: Q) -> ReductiveGroup {
        let mut g = self.clone();
        let d = self.dim();
        let entry = &mut g.structure[i * d + j];
        match entry.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, c)) => *c += delta,
            None => entry.push((k, delta)),
        }
        g.rebuild_caches();
        g
    }

    /// Exact bracket in basis coordinates.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> QVec {
        self.ad(x).mul_vec(y)
    }

    /// Exact matrix of ad(x) in the basis.
    pub fn ad(&self, x: &[Q]) -> QMatrix {
        let d = self.dim();
        let mut m = QMatrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.ad_exact[i].scale(xi));
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> &QMatrix {
        &self.ad_exact[i]
    }

    /// B(x, y).
    pub fn b_form(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for i in 0..self.dim() {
            if !x[i].is_zero() && !y[i].is_zero() {
                let t = &x[i] * &y[i] * &self.norm_sq[i];
                if self.parts[i] == Part::P {
                    s += t
                } else {
                    s -= t
                }
            }
        }
        s
    }

    /// ⟨x, y⟩ = −B(x, θy).
    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        exact::weighted_dot(&self.norm_sq, x, y)
    }

    pub fn theta(&self, x: &[Q]) -> QVec {
        x.iter().zip(&self.parts).map(|(v, p)| if *p == Part::P { -v.clone() } else { v.clone() }).collect()
    }

    pub fn basis_vector(&self, i: usize) -> QVec {
        exact::unit(self.dim(), i)
    }

    /// The N×N matrix of an algebra vector.
    pub fn matrix(&self, x: &[Q]) -> QMatrix {
        let n = self.matrix_size;
        let mut m = QMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(r, c, v) in &self.basis[i] {
                m[(r, c)] += xi * q(v);
            }
        }
        m
    }

    pub fn matrix_f64(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.matrix_size;
        let mut m = DMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            for &(r, c, v) in &self.basis[i] {
                m[(r, c)] += xi * v as f64;
            }
        }
        m
    }

    /// Basis coordinates of an N×N matrix; fails if it leaves the algebra.
    pub fn coordinates(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        let coords: Vec<f64> = self
            .basis
            .iter()
            .map(|b| {
                let num: f64 = b.iter().map(|&(r, c, v)| v as f64 * m[(r, c)]).sum();
                let den: f64 = b.iter().map(|e| (e.2 * e.2) as f64).sum();
                num / den
            })
            .collect();
        let back = self.matrix_f64(&coords);
        let residual = (&back - m).amax() / m.amax().max(1.0);
        if residual > 1e-10 {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(coords)
    }

    /// g·x·g⁻¹ in basis coordinates.
    pub fn adjoint_action(&self, g: &DMatrix<f64>, x: &[f64]) -> Result<Vec<f64>> {
        let inv = g.clone().try_inverse().ok_or_else(|| Error::InvalidInput("group element is singular".into()))?;
        self.coordinates(&(g * self.matrix_f64(x) * inv))
    }

    pub fn exp_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        self.matrix_f64(x).exp()
    }

    /// √⟨bᵢ,bᵢ⟩; multiplies basis coordinates into orthonormal ones.
    pub fn ortho_scale(&self) -> &[f64] {
        &self.ortho_scale
    }

    pub fn to_ortho(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.ortho_scale).map(|(a, s)| a * s).collect()
    }

    pub fn from_ortho(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.ortho_scale).map(|(a, s)| a / s).collect()
    }

    pub fn exact_to_ortho(&self, x: &[Q]) -> DVector<f64> {
        DVector::from_iterator(self.dim(), x.iter().zip(&self.ortho_scale).map(|(a, s)| exact::to_f64(a) * s))
    }

    /// ad(x) in the orthonormal frame, x in basis coordinates.
    pub fn ad_ortho(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if *xi != 0.0 {
                m += &self.ad_ortho[i] * *xi;
            }
        }
        m
    }

    /// Algebra vector Σ θₛ Hₛ of torus coordinates.
    pub fn torus_vector(&self, theta: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        for (s, &i) in self.torus.iter().enumerate() {
            x[i] = theta[s];
        }
        x
    }

    pub fn torus_vector_exact(&self, y: &[Q]) -> QVec {
        let mut x = exact::zeros(self.dim());
        for (s, &i) in self.torus.iter().enumerate() {
            x[i] = y[s].clone();
        }
        x
    }

    /// Gram matrix of the torus generators for ⟨·,·⟩ (diagonal).
    pub fn torus_gram(&self) -> Vec<Q> {
        self.torus.iter().map(|&i| self.norm_sq[i].clone()).collect()
    }

    /// Ad(g) on 𝔤 in the orthonormal frame for g = exp(x).
    pub fn ad_exp_ortho(&self, x: &[f64]) -> DMatrix<f64> {
        self.ad_ortho(x).exp()
    }

    /// δ(G) = dim{Y ∈ 𝔭 : [Y, 𝔱] = 0}.
    pub fn delta_invariant(&self) -> usize {
        self.torus_centralizer_in(Part::P).len()
    }

    /// {Y ∈ part : [Y, 𝔱] = 0} exactly.
    pub fn torus_centralizer_in(&self, part: Part) -> Vec<QVec> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.parts[i] == part).collect();
        if idx.is_empty() {
            return Vec::new();
        }
        let d = self.dim();
        let mut rows = Vec::new();
        for &t in &self.torus {
            let ad = &self.ad_exact[t];
            for r in 0..d {
                rows.push(idx.iter().map(|&c| ad[(r, c)].clone()).collect::<QVec>());
            }
        }
        let sols = if rows.is_empty() {
            (0..idx.len()).map(|j| exact::unit(idx.len(), j)).collect()
        } else {
            QMatrix::from_rows(&rows).null_space()
        };
        sols.iter()
            .map(|s| {
                let mut v = exact::zeros(d);
                for (j, &c) in idx.iter().enumerate() {
                    v[c] = s[j].clone();
                }
                v
            })
            .collect()
    }

    /// Exact verification of the algebra invariants.
    pub fn validate(&self) -> InvariantReport {
        let d = self.dim();
        let n = self.matrix_size;
        let mut closure = true;
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (self.dense_int(i), self.dense_int(j));
                let mut comm = QMatrix::zeros(n, n);
                for r in 0..n {
                    for s in 0..n {
                        let mut v = 0i64;
                        for m in 0..n {
                            v += a[r * n + m] * b[m * n + s] - b[r * n + m] * a[m * n + s];
                        }
                        comm[(r, s)] = q(v);
                    }
                }
                let mut x = exact::zeros(d);
                for (k, c) in self.structure_constants(i, j) {
                    x[*k] = c.clone();
                }
                if self.matrix(&x) != comm {
                    closure = false;
                }
            }
        }
        let mut antisymmetry = true;
        let mut cartan_brackets = true;
        for i in 0..d {
            for j in 0..d {
                let xij = self.structure_constants(i, j);
                let xji = self.structure_constants(j, i);
                let mut sum = exact::zeros(d);
                for (k, c) in xij.iter().chain(xji) {
                    sum[*k] += c;
                }
                if !exact::is_zero(&sum) {
                    antisymmetry = false;
                }
                let expect = if self.parts[i] == self.parts[j] { Part::K } else { Part::P };
                if xij.iter().any(|(k, c)| !c.is_zero() && self.parts[*k] != expect) {
                    cartan_brackets = false;
                }
            }
        }
        let mut b_invariant = true;
        let signed_norm = |i: usize| {
            if self.parts[i] == Part::P {
                self.norm_sq[i].clone()
            } else {
                -self.norm_sq[i].clone()
            }
        };
        for z in 0..d {
            let ad = &self.ad_exact[z];
            for x in 0..d {
                for y in 0..d {
                    // B([z,x],y) + B(x,[z,y])
                    let v = &ad[(y, x)] * signed_norm(y) + &ad[(x, y)] * signed_norm(x);
                    if !v.is_zero() {
                        b_invariant = false;
                    }
                }
            }
        }
        let mut jacobi = true;
        'outer: for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut total = exact::zeros(d);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, cbc) in self.structure_constants(b, c) {
                            for (r, cam) in self.structure_constants(a, *m) {
                                total[*r] += cbc * cam;
                            }
                        }
                    }
                    if !exact::is_zero(&total) {
                        jacobi = false;
                        break 'outer;
                    }
                }
            }
        }
        let signature = self.norm_sq.iter().all(Signed::is_positive);
        InvariantReport { closure, antisymmetry, jacobi, b_invariant, cartan_brackets, signature }
    }

    /// 𝔷(γ) = 𝔷(a) ∩ 𝔷(k), split into 𝔭(γ) ⊕ 𝔨(γ).
    pub fn centralizer_algebra(&self, gamma: &SemisimpleElement) -> Result<Centralizer> {
        gamma.validate(self)?;
        let exact_route = gamma.a_exact.is_some() && gamma.k_is_identity();
        if exact_route {
            let a = gamma.a_exact.as_ref().unwrap();
            let ad = self.ad(a);
            let mut split = Vec::new();
            for part in [Part::P, Part::K] {
                let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.parts[i] == part).collect();
                let sub = QMatrix::from_columns(&idx.iter().map(|&c| ad.column(c)).collect::<Vec<_>>(), self.dim());
                let sols = if idx.is_empty() { vec![] } else { sub.null_space() };
                split.push(
                    sols.iter()
                        .map(|s| {
                            let mut v = exact::zeros(self.dim());
                            for (j, &c) in idx.iter().enumerate() {
                                v[c] = s[j].clone();
                            }
                            v
                        })
                        .collect::<Vec<_>>(),
                );
            }
            let k_ex = split.pop().unwrap();
            let p_ex = split.pop().unwrap();
            let to_cols = |vs: &[QVec]| {
                let cols: Vec<DVector<f64>> = vs.iter().map(|v| self.exact_to_ortho(v)).collect();
                numeric::columns_to_matrix(&numeric::orthonormal_span(&cols, 1e-12), self.dim())
            };
            return Ok(Centralizer { p_ortho: to_cols(&p_ex), k_ortho: to_cols(&k_ex), exact: Some((p_ex, k_ex)) });
        }
        let ad_a = self.ad_ortho(&gamma.a);
        let adk = gamma.ad_k_inverse_ortho(self)?;
        let d = self.dim();
        let mut stacked = DMatrix::zeros(2 * d, d);
        stacked.view_mut((0, 0), (d, d)).copy_from(&ad_a);
        stacked.view_mut((d, 0), (d, d)).copy_from(&(adk - DMatrix::identity(d, d)));
        let tol = 1e-9 * stacked.amax().max(1.0);
        let mut out = Vec::new();
        for part in [Part::P, Part::K] {
            let idx: Vec<usize> = (0..d).filter(|&i| self.parts[i] == part).collect();
            let sub = DMatrix::from_fn(2 * d, idx.len(), |r, c| stacked[(r, idx[c])]);
            let ns = numeric::null_space(&sub, tol);
            let mut full = DMatrix::zeros(d, ns.ncols());
            for (j, &c) in idx.iter().enumerate() {
                for col in 0..ns.ncols() {
                    full[(c, col)] = ns[(j, col)];
                }
            }
            out.push(full);
        }
        let k_ortho = out.pop().unwrap();
        let p_ortho = out.pop().unwrap();
        Ok(Centralizer { p_ortho, k_ortho, exact: None })
    }
}

/// Outcome of [`ReductiveGroup::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub closure: bool,
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub b_invariant: bool,
    pub cartan_brackets: bool,
    pub signature: bool,
}

impl InvariantReport {
    pub fn all(&self) -> bool {
        self.closure && self.antisymmetry && self.jacobi && self.b_invariant && self.cartan_brackets && self.signature
    }
}

/// The compact-group part of a semisimple element.
#[derive(Clone, Debug)]
pub enum KPart {
    Identity,
    /// k = exp(Σ θₛ Hₛ) in the chosen torus.
    Torus(Vec<f64>),
    /// An orthogonal N×N matrix in K.
    Matrix(DMatrix<f64>),
}

/// γ = e^a k⁻¹ with a ∈ 𝔭, k ∈ K and Ad(k)a = a.
#[derive(Clone, Debug)]
pub struct SemisimpleElement {
    pub a: Vec<f64>,
    pub a_exact: Option<QVec>,
    pub k: KPart,
}

impl SemisimpleElement {
    pub fn identity(g: &ReductiveGroup) -> Self {
        SemisimpleElement { a: vec![0.0; g.dim()], a_exact: Some(exact::zeros(g.dim())), k: KPart::Identity }
    }

    pub fn from_exact(a: QVec, k: KPart) -> Self {
        SemisimpleElement { a: exact::to_f64_vec(&a), a_exact: Some(a), k }
    }

    pub fn new(a: Vec<f64>, k: KPart) -> Self {
        SemisimpleElement { a, a_exact: None, k }
    }

    pub fn k_is_identity(&self) -> bool {
        match &self.k {
            KPart::Identity => true,
            KPart::Torus(t) => t.iter().all(|x| *x == 0.0),
            KPart::Matrix(_) => false,
        }
    }

    /// Ad(k⁻¹) on 𝔤 in the orthonormal frame.
    pub fn ad_k_inverse_ortho(&self, g: &ReductiveGroup) -> Result<DMatrix<f64>> {
        let d = g.dim();
        match &self.k {
            KPart::Identity => Ok(DMatrix::identity(d, d)),
            KPart::Torus(theta) => {
                let x: Vec<f64> = g.torus_vector(theta).iter().map(|v| -v).collect();
                Ok(g.ad_exp_ortho(&x))
            }
            KPart::Matrix(k) => {
                let kinv = k.transpose();
                let mut m = DMatrix::zeros(d, d);
                for j in 0..d {
                    let mut e = vec![0.0; d];
                    e[j] = 1.0 / g.ortho_scale[j];
                    let img = g.adjoint_action(&kinv, &e)?;
                    let o = g.to_ortho(&img);
                    for i in 0..d {
                        m[(i, j)] = o[i];
                    }
                }
                Ok(m)
            }
        }
    }

    /// Ad(γ) = exp(ad a)·Ad(k⁻¹) in the orthonormal frame.
    pub fn ad_ortho(&self, g: &ReductiveGroup) -> Result<DMatrix<f64>> {
        Ok(g.ad_exp_ortho(&self.a) * self.ad_k_inverse_ortho(g)?)
    }

    /// Checks a ∈ 𝔭 and Ad(k)a = a within 1e−12.
    pub fn validate(&self, g: &ReductiveGroup) -> Result<()> {
        if self.a.len() != g.dim() {
            return Err(Error::InvalidInput("element has wrong dimension".into()));
        }
        let scale = self.a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for (i, x) in self.a.iter().enumerate() {
            if g.parts[i] == Part::K && x.abs() > 1e-12 * scale {
                return Err(Error::InvalidInput("a must lie in 𝔭".into()));
            }
        }
        if let KPart::Matrix(k) = &self.k {
            let orth = (k.transpose() * k - DMatrix::identity(k.nrows(), k.nrows())).amax();
            if orth > 1e-10 {
                return Err(Error::InvalidInput("k is not orthogonal".into()));
            }
        }
        let adk = self.ad_k_inverse_ortho(g)?;
        let a = DVector::from_vec(g.to_ortho(&self.a));
        let resid = (&adk * &a - &a).amax();
        if resid > 1e-12 * scale {
            return Err(Error::InvalidInput(format!("Ad(k)a ≠ a (residual {resid:e})")));
        }
        Ok(())
    }
}

/// 𝔷(γ) = 𝔭(γ) ⊕ 𝔨(γ), as orthonormal columns in the orthonormal frame.
#[derive(Clone, Debug)]
pub struct Centralizer {
    pub p_ortho: DMatrix<f64>,
    pub k_ortho: DMatrix<f64>,
    pub exact: Option<(Vec<QVec>, Vec<QVec>)>,
}

impl Centralizer {
    pub fn dim(&self) -> usize {
        self.p_ortho.ncols() + self.k_ortho.ncols()
    }
}

/// Matrix of a linear operator preserving `sub` (orthonormal columns), in that basis.
pub fn restrict(op: &DMatrix<f64>, sub: &DMatrix<f64>) -> DMatrix<f64> {
    sub.transpose() * op * sub
}

/// Trace of ad(x)² restricted to an invariant subspace with an exact
/// ⟨·,·⟩-orthogonal basis.
pub fn trace_ad_squared_on(g: &ReductiveGroup, x: &[Q], sub: &[QVec]) -> Q {
    let ad = g.ad(x);
    let mut t = Q::zero();
    for v in sub {
        let w = ad.mul_vec(&ad.mul_vec(v));
        t += g.inner(&w, v) / g.inner(v, v);
    }
    t
}

/// One for integer-valued rationals; used by reports.
pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}
