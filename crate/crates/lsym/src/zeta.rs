//! Geodesic-side Selberg and Ruelle zeta functions.
//!
//! A length spectrum is a list of closed-geodesic classes, each carrying its
//! length |a|, the holonomy angles of Ad(k⁻¹) on 𝔫, the Fuller index and
//! Tr ρ(γ). Everything here is a finite sum over the listed classes; the
//! counting constants declared with a dataset turn truncation into explicit
//! exponential tail bounds.

use std::fmt::Write as _;
use std::path::Path;

use num::complex::Complex64;
use num::rational::Rational64;
use num::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::numeric;
use crate::parabolic::{binomial, DeltaOneStructure};

mod index_serde {
    use num::rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_index(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rational64::from_integer(n)),
            Raw::Text(t) => super::parse_index(&t).map_err(serde::de::Error::custom),
        }
    }
}

fn format_index(x: &Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_index(text: &str) -> Result<Rational64> {
    let bad = || Error::InvalidInput(format!("bad index {text:?}, expected an integer or p/q"));
    let t = text.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// One conjugacy class [γ] of the lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicClass {
    pub id: String,
    /// |a|.
    pub length: f64,
    /// Ad(k⁻¹) on 𝔫 has eigenvalues e^{±iφ} for φ in this list.
    pub holonomy_angles: Vec<f64>,
    /// χ_orb(S¹\B)/m.
    #[serde(with = "index_serde")]
    pub index: Rational64,
    pub trace_rho_re: f64,
    pub trace_rho_im: f64,
    pub iterate: u32,
}

impl GeodesicClass {
    pub fn trace_rho(&self) -> Complex64 {
        Complex64::new(self.trace_rho_re, self.trace_rho_im)
    }

    pub fn index_f64(&self) -> f64 {
        self.index.to_f64().unwrap_or(f64::NAN)
    }
}

/// N(L) ≤ constant·e^{rate·L}, and |index·Tr ρ| ≤ weight_bound for every class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingConstants {
    pub constant: f64,
    pub rate: f64,
    pub weight_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDataset {
    #[serde(default)]
    pub group: Option<String>,
    pub cutoff_length: f64,
    #[serde(default)]
    pub counting: Option<CountingConstants>,
    /// Every index equals 1/iterate.
    #[serde(default)]
    pub negatively_curved: bool,
    /// vol(Z); carried as metadata only.
    #[serde(default)]
    pub volume: Option<f64>,
    /// Rank of ρ; carried as metadata only.
    #[serde(default)]
    pub rho_rank: Option<usize>,
    pub classes: Vec<GeodesicClass>,
}

impl SpectrumDataset {
    pub fn empty(cutoff_length: f64) -> Self {
        SpectrumDataset {
            group: None,
            cutoff_length,
            counting: None,
            negatively_curved: false,
            volume: None,
            rho_rank: None,
            classes: Vec::new(),
        }
    }

    /// Sorted positive lengths below the cutoff, a common angle count, and
    /// index = 1/iterate under the negative-curvature flag.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(self.cutoff_length.is_finite() && self.cutoff_length > 0.0) {
            return bad("cutoff length must be positive".into());
        }
        let angles = self.classes.first().map(|c| c.holonomy_angles.len());
        let mut prev = 0.0;
        for c in &self.classes {
            if !(c.length.is_finite() && c.length > 0.0) {
                return bad(format!("class {}: length must be positive", c.id));
            }
            if c.length < prev {
                return bad(format!("class {}: classes must be sorted by length", c.id));
            }
            if c.length > self.cutoff_length {
                return bad(format!("class {}: length exceeds the cutoff", c.id));
            }
            if c.iterate == 0 {
                return bad(format!("class {}: iterate must be positive", c.id));
            }
            if Some(c.holonomy_angles.len()) != angles {
                return bad(format!("class {}: inconsistent number of holonomy angles", c.id));
            }
            if c.holonomy_angles.iter().chain([&c.trace_rho_re, &c.trace_rho_im]).any(|x| !x.is_finite()) {
                return bad(format!("class {}: non-finite entry", c.id));
            }
            if self.negatively_curved && c.index != Rational64::new(1, c.iterate as i64) {
                return bad(format!("class {}: index must be 1/iterate for negatively curved data", c.id));
            }
            prev = c.length;
        }
        if let Some(cc) = &self.counting {
            if !(cc.constant > 0.0 && cc.rate >= 0.0 && cc.weight_bound >= 0.0) {
                return bad("counting constants must be positive".into());
            }
            for c in &self.classes {
                let w = (c.trace_rho() * c.index_f64()).norm();
                if w > cc.weight_bound * (1.0 + 1e-12) {
                    return bad(format!("class {}: |index·Tr ρ| exceeds the declared weight bound", c.id));
                }
            }
        }
        Ok(())
    }

    /// Convergence abscissa σ₀ implied by the counting constants.
    pub fn abscissa(&self) -> Option<f64> {
        self.counting.map(|c| c.rate)
    }

    /// Multiplies every length by `factor`; the counting rate scales by 1/factor.
    pub fn rescale_lengths(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.cutoff_length *= factor;
        for c in &mut out.classes {
            c.length *= factor;
        }
        if let Some(cc) = &mut out.counting {
            cc.rate /= factor;
        }
        out
    }

    /// Negates every holonomy angle.
    pub fn negate_angles(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.classes {
            for a in &mut c.holonomy_angles {
                *a = -*a;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ds: SpectrumDataset =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("spectrum JSON: {e}")))?;
        ds.validate()?;
        Ok(ds)
    }

    /// CSV with `# key=value` metadata lines ahead of the header
    /// `id,length,angles,index,trace_rho_re,trace_rho_im,iterate`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(g) = &self.group {
            writeln!(out, "# group={g}").unwrap();
        }
        writeln!(out, "# cutoff_length={}", self.cutoff_length).unwrap();
        writeln!(out, "# negatively_curved={}", self.negatively_curved).unwrap();
        if let Some(c) = &self.counting {
            writeln!(out, "# counting_constant={}", c.constant).unwrap();
            writeln!(out, "# counting_rate={}", c.rate).unwrap();
            writeln!(out, "# weight_bound={}", c.weight_bound).unwrap();
        }
        if let Some(v) = self.volume {
            writeln!(out, "# volume={v}").unwrap();
        }
        if let Some(r) = self.rho_rank {
            writeln!(out, "# rho_rank={r}").unwrap();
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "length", "angles", "index", "trace_rho_re", "trace_rho_im", "iterate"]).unwrap();
        for c in &self.classes {
            let angles: Vec<String> = c.holonomy_angles.iter().map(|a| a.to_string()).collect();
            w.write_record([
                c.id.clone(),
                c.length.to_string(),
                angles.join(";"),
                format_index(&c.index),
                c.trace_rho_re.to_string(),
                c.trace_rho_im.to_string(),
                c.iterate.to_string(),
            ])
            .unwrap();
        }
        out.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidInput(format!("spectrum CSV: {m}"));
        let mut meta = std::collections::BTreeMap::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(rest) = line.trim_start().strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
            } else if !line.trim().is_empty() {
                body.push_str(line);
                body.push('\n');
            }
        }
        let num = |k: &str| -> Result<Option<f64>> {
            meta.get(k).map(|v| v.parse::<f64>().map_err(|_| bad(format!("metadata {k} is not a number")))).transpose()
        };
        let counting = match (num("counting_constant")?, num("counting_rate")?) {
            (Some(constant), Some(rate)) => {
                Some(CountingConstants { constant, rate, weight_bound: num("weight_bound")?.unwrap_or(f64::INFINITY) })
            }
            (None, None) => None,
            _ => return Err(bad("counting_constant and counting_rate must be given together".into())),
        };
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
        let expected = ["id", "length", "angles", "index", "trace_rho_re", "trace_rho_im", "iterate"];
        if headers.iter().map(str::trim).collect::<Vec<_>>() != expected {
            return Err(bad(format!("header must be {}", expected.join(","))));
        }
        let mut classes = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let f = |i: usize| -> Result<f64> {
                rec[i].trim().parse::<f64>().map_err(|_| bad(format!("row {}: column {} is not a number", row + 1, expected[i])))
            };
            let angles = if rec[2].trim().is_empty() {
                Vec::new()
            } else {
                rec[2]
                    .split(';')
                    .map(|a| a.trim().parse::<f64>().map_err(|_| bad(format!("row {}: bad angle {a:?}", row + 1))))
                    .collect::<Result<_>>()?
            };
            classes.push(GeodesicClass {
                id: rec[0].trim().to_string(),
                length: f(1)?,
                holonomy_angles: angles,
                index: parse_index(&rec[3])?,
                trace_rho_re: f(4)?,
                trace_rho_im: f(5)?,
                iterate: rec[6].trim().parse().map_err(|_| bad(format!("row {}: bad iterate", row + 1)))?,
            });
        }
        let ds = SpectrumDataset {
            group: meta.get("group").cloned(),
            cutoff_length: num("cutoff_length")?
                .unwrap_or_else(|| classes.last().map_or(f64::INFINITY, |c: &GeodesicClass| c.length)),
            counting,
            negatively_curved: meta.get("negatively_curved").is_some_and(|v| v == "true"),
            volume: num("volume")?,
            rho_rank: num("rho_rank")?.map(|r| r as usize),
            classes,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Reads CSV or JSON, chosen by extension (`.json`) or leading `{`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{') {
            Self::from_json(&text)
        } else {
            Self::from_csv(&text)
        }
    }
}

/// How synthetic Tr ρ(γ) values are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceModel {
    /// Tr ρ = rank.
    Trivial,
    /// Tr ρ = sum of `rank` random unit phases.
    Phases,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub classes: usize,
    /// Number of holonomy angles, i.e. l.
    pub angles: usize,
    pub seed: u64,
    pub counting_constant: f64,
    pub counting_rate: f64,
    pub rho_rank: usize,
    pub trace_model: TraceModel,
    pub group: Option<String>,
}

impl SyntheticConfig {
    pub fn new(classes: usize, angles: usize, seed: u64) -> Self {
        SyntheticConfig {
            classes,
            angles,
            seed,
            counting_constant: 0.05,
            counting_rate: 1.0,
            rho_rank: 1,
            trace_model: TraceModel::Trivial,
            group: None,
        }
    }
}

/// Random primitive classes with N(L) ≤ C e^{hL}: the n-th length is
/// ln(n/C)/h plus a nonnegative jitter, so the n-th smallest length never
/// undercuts ln(n/C)/h.
pub fn synthetic_spectrum(cfg: &SyntheticConfig) -> Result<SpectrumDataset> {
    if cfg.counting_constant <= 0.0 || cfg.counting_rate <= 0.0 || cfg.rho_rank == 0 {
        return Err(Error::InvalidInput("synthetic spectrum needs positive constants and rank".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut lengths: Vec<f64> = (1..=cfg.classes)
        .map(|n| (n as f64 / cfg.counting_constant).ln() / cfg.counting_rate + rng.gen_range(0.0..0.25))
        .collect();
    lengths.sort_by(f64::total_cmp);
    let classes = lengths
        .into_iter()
        .enumerate()
        .map(|(i, length)| {
            let holonomy_angles = (0..cfg.angles).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            let tr = match cfg.trace_model {
                TraceModel::Trivial => Complex64::new(cfg.rho_rank as f64, 0.0),
                TraceModel::Phases => (0..cfg.rho_rank)
                    .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
                    .sum(),
            };
            GeodesicClass {
                id: format!("g{}", i + 1),
                length,
                holonomy_angles,
                index: Rational64::one(),
                trace_rho_re: tr.re,
                trace_rho_im: tr.im,
                iterate: 1,
            }
        })
        .collect::<Vec<_>>();
    let cutoff_length = classes.last().map_or(1.0, |c: &GeodesicClass| c.length);
    Ok(SpectrumDataset {
        group: cfg.group.clone(),
        cutoff_length,
        counting: Some(CountingConstants {
            constant: cfg.counting_constant,
            rate: cfg.counting_rate,
            weight_bound: cfg.rho_rank as f64,
        }),
        negatively_curved: true,
        volume: None,
        rho_rank: Some(cfg.rho_rank),
        classes,
    })
}

/// The data of the splitting that the zeta functions need: l and |α|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitData {
    pub l: usize,
    pub alpha_norm: f64,
}

impl From<&DeltaOneStructure> for SplitData {
    fn from(s: &DeltaOneStructure) -> Self {
        SplitData { l: s.l, alpha_norm: s.alpha_norm }
    }
}

/// Tr^{Λʲ(𝔫*)}[Ad(k⁻¹)]: the j-th elementary symmetric function of e^{±iφ}.
pub fn eta_trace(angles: &[f64], j: usize) -> f64 {
    eta_traces(angles).get(j).copied().unwrap_or(0.0)
}

/// All Tr^{Λʲ(𝔫*)}[Ad(k⁻¹)], j = 0..2l, from Π(1 + 2cos φ u + u²).
pub fn eta_traces(angles: &[f64]) -> Vec<f64> {
    let mut poly = vec![1.0];
    for phi in angles {
        let c = 2.0 * phi.cos();
        let mut next = vec![0.0; poly.len() + 2];
        for (i, p) in poly.iter().enumerate() {
            next[i] += p;
            next[i + 1] += c * p;
            next[i + 2] += p;
        }
        poly = next;
    }
    poly
}

/// |det(1 − Ad(γ))|_{𝔷^⊥(𝔟)}|^{1/2} = e^{l x} Π |1 − e^{−x + iφ}|², x = |α|ℓ.
pub fn class_halfdet(split: &SplitData, length: f64, angles: &[f64]) -> f64 {
    let x = split.alpha_norm * length;
    let mut v = (split.l as f64 * x).exp();
    for phi in angles {
        v *= (Complex64::new(1.0, 0.0) - Complex64::from_polar((-x).exp(), *phi)).norm_sqr();
    }
    v
}

fn check_angles(ds: &SpectrumDataset, split: &SplitData) -> Result<()> {
    match ds.classes.first() {
        Some(c) if c.holonomy_angles.len() != split.l => Err(Error::InvalidInput(format!(
            "dataset has {} holonomy angles per class, the group needs l = {}",
            c.holonomy_angles.len(),
            split.l
        ))),
        _ => Ok(()),
    }
}

fn warn_abscissa(ds: &SpectrumDataset, re: f64) {
    if let Some(s0) = ds.abscissa() {
        if re <= s0 {
            log::warn!("Re σ = {re} is not above the convergence abscissa {s0}");
        }
    }
}

/// Ξ_{η_j}(σ) = −Σ Tr ρ · index · Tr^{Λʲ(𝔫*)}[Ad(k⁻¹)] e^{−σℓ} / halfdet.
pub fn xi_eta(ds: &SpectrumDataset, split: &SplitData, j: usize, sigma: Complex64) -> Result<Complex64> {
    check_angles(ds, split)?;
    warn_abscissa(ds, sigma.re);
    Ok(-numeric::complex_sum(ds.classes.iter().map(|c| {
        let eta = eta_trace(&c.holonomy_angles, j);
        c.trace_rho() * c.index_f64() * eta * (-sigma * c.length).exp()
            / class_halfdet(split, c.length, &c.holonomy_angles)
    })))
}

/// Z_{η_j}(σ) = exp Ξ_{η_j}(σ).
pub fn z_eta(ds: &SpectrumDataset, split: &SplitData, j: usize, sigma: Complex64) -> Result<Complex64> {
    Ok(xi_eta(ds, split, j, sigma)?.exp())
}

/// Ξ_ρ(σ) = Σ index · Tr ρ · e^{−σℓ}.
pub fn xi_rho(ds: &SpectrumDataset, sigma: Complex64) -> Complex64 {
    warn_abscissa(ds, sigma.re);
    numeric::complex_sum(ds.classes.iter().map(|c| c.trace_rho() * c.index_f64() * (-sigma * c.length).exp()))
}

/// R_ρ(σ) = exp Ξ_ρ(σ) when δ(G) = 1; identically 1 otherwise.
pub fn r_rho(ds: &SpectrumDataset, delta: usize, sigma: Complex64) -> Complex64 {
    if delta != 1 {
        return Complex64::new(1.0, 0.0);
    }
    xi_rho(ds, sigma).exp()
}

/// |Ξ_ρ(σ) − Σⱼ (−1)^{j−1} Ξ_{η_j}(σ + (j−l)|α|)|.
pub fn factorization_residual(ds: &SpectrumDataset, split: &SplitData, sigma: Complex64) -> Result<f64> {
    let lhs = xi_rho(ds, sigma);
    let mut terms = Vec::with_capacity(2 * split.l + 1);
    for j in 0..=2 * split.l {
        let shift = (j as f64 - split.l as f64) * split.alpha_norm;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(xi_eta(ds, split, j, sigma + shift)? * sign);
    }
    Ok((lhs - numeric::complex_sum(terms)).norm())
}

/// Bound on |Σ_{ℓ > L} w e^{−sℓ}| for |w| ≤ W and N(L) ≤ C e^{hL}:
/// W C s e^{−(s−h)L}/(s−h), +∞ when s ≤ h.
fn exponential_tail(cc: &CountingConstants, weight: f64, s: f64, cutoff: f64) -> f64 {
    if s <= cc.rate {
        return f64::INFINITY;
    }
    weight * cc.constant * s * (-(s - cc.rate) * cutoff).exp() / (s - cc.rate)
}

/// Tail bound for the truncated Ξ_ρ at Re σ.
pub fn tail_bound(ds: &SpectrumDataset, sigma: f64) -> Result<f64> {
    let cc = ds.counting.ok_or(Error::MissingCountingConstants)?;
    Ok(exponential_tail(&cc, cc.weight_bound, sigma, ds.cutoff_length))
}

/// Tail bound for the truncated Ξ_{η_j} at Re σ: beyond the cutoff
/// |Tr Λʲ|/halfdet ≤ C(2l,j) (1 − e^{−|α|L})^{−2l} e^{−l|α|ℓ}.
pub fn selberg_tail_bound(ds: &SpectrumDataset, split: &SplitData, j: usize, sigma: f64) -> Result<f64> {
    let cc = ds.counting.ok_or(Error::MissingCountingConstants)?;
    let l = split.l as f64;
    let x = split.alpha_norm * ds.cutoff_length;
    let w = cc.weight_bound * binomial(2 * split.l, j) as f64 * (1.0 - (-x).exp()).powf(-2.0 * l);
    Ok(exponential_tail(&cc, w, sigma + l * split.alpha_norm, ds.cutoff_length))
}

/// C_ρ, r_ρ and χ' from the graded multiplicities r_j, j = 0..2l.
#[derive(Clone, Debug, Serialize)]
pub struct LaurentData {
    pub r_j: Vec<i64>,
    pub l: usize,
    #[serde(serialize_with = "exact::serialize_q")]
    pub alpha_norm_sq: Q,
    pub alpha_norm: f64,
    #[serde(serialize_with = "exact::serialize_q")]
    pub c_rho_exact: Q,
    pub c_rho: f64,
    pub r_rho: i64,
    pub chi_prime: i64,
    /// r_ρ recomputed as 2Σ_{j<l}(−1)ʲ r_j + 2χ'.
    pub r_rho_rescaling: i64,
}

impl LaurentData {
    pub fn consistent(&self) -> bool {
        self.r_rho == self.r_rho_rescaling
    }

    /// Exponent of σ in R_ρ(σ)/T(σ²) near 0.
    pub fn ratio_exponent(&self) -> i64 {
        self.r_rho - 2 * self.chi_prime
    }
}

fn sign_pow(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// C_ρ = Π_{j<l} (−4(l−j)²|α|²)^{(−1)^{j−1} r_j}, r_ρ = 2Σ_{j≤l}(−1)^{j−1} r_j,
/// χ' = 2Σ_{j<l}(−1)^{j−1} r_j + (−1)^{l−1} r_l.
pub fn laurent_constants(r_j: &[i64], l: usize, alpha_norm_sq: &Q) -> Result<LaurentData> {
    if r_j.len() != 2 * l + 1 {
        return Err(Error::InvalidInput(format!("expected {} values r_0..r_2l, got {}", 2 * l + 1, r_j.len())));
    }
    if let Some(j) = (0..=2 * l).find(|&j| r_j[j] != r_j[2 * l - j]) {
        return Err(Error::DualityViolation(j));
    }
    if !alpha_norm_sq.is_positive() {
        return Err(Error::InvalidInput("|α|² must be positive".into()));
    }
    let mut c = Q::one();
    for (j, &r) in r_j.iter().enumerate().take(l) {
        let d = (l - j) as i64;
        let base = exact::q(-4 * d * d) * alpha_norm_sq;
        let e = sign_pow(j as i64 - 1) * r;
        let p = base.pow(e.unsigned_abs() as i32);
        c *= if e >= 0 { p } else { p.recip() };
    }
    let li = l as i64;
    let r_rho = 2 * (0..=l).map(|j| sign_pow(j as i64 - 1) * r_j[j]).sum::<i64>();
    let chi_prime = 2 * (0..l).map(|j| sign_pow(j as i64 - 1) * r_j[j]).sum::<i64>() + sign_pow(li - 1) * r_j[l];
    let r_rho_rescaling = 2 * (0..l).map(|j| sign_pow(j as i64) * r_j[j]).sum::<i64>() + 2 * chi_prime;
    let alpha_norm = exact::to_f64(alpha_norm_sq).sqrt();
    Ok(LaurentData {
        r_j: r_j.to_vec(),
        l,
        alpha_norm_sq: alpha_norm_sq.clone(),
        alpha_norm,
        c_rho: exact::to_f64(&c),
        c_rho_exact: c,
        r_rho,
        chi_prime,
        r_rho_rescaling,
    })
}

/// One sample near σ = 0: R_ρ(σ) and T(σ²).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LaurentSample {
    pub sigma: f64,
    pub ruelle: f64,
    pub torsion: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentFit {
    pub exponent_raw: f64,
    pub exponent: i64,
    pub predicted_exponent: i64,
    pub coefficient: f64,
    pub predicted_coefficient: f64,
    pub relative_residual: f64,
}

/// Fits R_ρ(σ)/T(σ²) ≈ c σ^e near 0 and compares with c = C_ρ, e = r_ρ − 2χ'.
///
/// The exponent comes from the log-log slope between the two smallest σ and
/// is rounded; the coefficient is the value at 0 of the polynomial through
/// (σ, ratio/σ^e).
pub fn torsion_laurent_relation(samples: &[LaurentSample], laurent: &LaurentData) -> Result<LaurentFit> {
    let mut s: Vec<LaurentSample> = samples.to_vec();
    s.retain(|x| x.sigma > 0.0 && x.torsion != 0.0 && x.ruelle != 0.0);
    if s.len() < 2 {
        return Err(Error::InsufficientSamples(format!("{} usable samples, need at least 2", s.len())));
    }
    s.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
    let ratio = |x: &LaurentSample| x.ruelle / x.torsion;
    let (a, b) = (&s[0], &s[1]);
    let exponent_raw = (ratio(b).abs().ln() - ratio(a).abs().ln()) / (b.sigma.ln() - a.sigma.ln());
    let exponent = exponent_raw.round() as i64;
    let pts: Vec<(f64, f64)> = s.iter().map(|x| (x.sigma, ratio(x) / x.sigma.powi(exponent as i32))).collect();
    let coefficient = neville_at_zero(&pts);
    let predicted_coefficient = laurent.c_rho;
    Ok(LaurentFit {
        exponent_raw,
        exponent,
        predicted_exponent: laurent.ratio_exponent(),
        coefficient,
        predicted_coefficient,
        relative_residual: (coefficient - predicted_coefficient).abs() / predicted_coefficient.abs(),
    })
}

/// Value at 0 of the interpolating polynomial (Neville).
fn neville_at_zero(pts: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = pts.iter().map(|x| x.1).collect();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            let (xi, xk) = (pts[i].0, pts[i + k].0);
            p[i] = (xk * p[i] - xi * p[i + 1]) / (xk - xi);
        }
    }
    p[0]
}

/// Samples of R_ρ(σ) = C_ρ T_F² σ^{r_ρ}(1 + σ/3 − σ²/7) and
/// T(s) = T_F² s^{χ'}(1 + s/5 + s²/11) at s = σ², for testing the fit.
pub fn synthetic_laurent_samples(laurent: &LaurentData, torsion_f: f64, sigmas: &[f64]) -> Vec<LaurentSample> {
    let tf2 = torsion_f * torsion_f;
    sigmas
        .iter()
        .map(|&sigma| {
            let s = sigma * sigma;
            LaurentSample {
                sigma,
                ruelle: laurent.c_rho * tf2 * sigma.powi(laurent.r_rho as i32) * (1.0 + sigma / 3.0 - sigma * sigma / 7.0),
                torsion: tf2 * s.powi(laurent.chi_prime as i32) * (1.0 + s / 5.0 + s * s / 11.0),
            }
        })
        .collect()
}

/// start, start + step, … up to stop inclusive.
pub fn sigma_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidInput("σ-grid needs finite start ≤ stop and step > 0".into()));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}
