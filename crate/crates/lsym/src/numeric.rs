//! Floating-point utilities: compensated sums, quadrature rules, float
//! subspaces and joint spectra of commuting skew matrices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use crate::error::{Error, Result};

/// Neumaier-compensated sum in the given order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

#[derive(Default, Clone, Copy, Debug)]
pub struct ComplexAccumulator {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier_step(acc: &mut (f64, f64), x: f64) {
    let (s, c) = *acc;
    let t = s + x;
    let c = if s.abs() >= x.abs() { c + ((s - t) + x) } else { c + ((x - t) + s) };
    *acc = (t, c);
}

impl ComplexAccumulator {
    pub fn add(&mut self, z: Complex64) {
        neumaier_step(&mut self.re, z.re);
        neumaier_step(&mut self.im, z.im);
    }
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

pub fn complex_sum<I: IntoIterator<Item = Complex64>>(zs: I) -> Complex64 {
    let mut acc = ComplexAccumulator::default();
    for z in zs {
        acc.add(z);
    }
    acc.value()
}

/// Thread pool honoring `LSYM_THREADS`.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("LSYM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
            b = b.num_threads(n.max(1));
        }
        b.build().expect("thread pool")
    })
}

/// Shared (nodes, weights) pair.
pub type Rule = std::sync::Arc<(Vec<f64>, Vec<f64>)>;

/// Gauss–Hermite rule for weight e^{−x²}; nodes ascending.
///
/// Newton iteration on the orthonormal Hermite recurrence; accurate through
/// order 160.
pub fn gauss_hermite(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let rule = std::sync::Arc::new(gauss_hermite_uncached(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn gauss_hermite_uncached(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration on [a, b].
/// Returns (value, error estimate).
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (f64, f64) {
    let mut intervals = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..5000 {
        let total: f64 = neumaier_sum(intervals.iter().map(|iv| iv.2 .0));
        let err: f64 = intervals.iter().map(|iv| iv.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return (total, err);
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        intervals.push((lo, mid, gk15(&f, lo, mid)));
        intervals.push((mid, hi, gk15(&f, mid, hi)));
    }
    let total = neumaier_sum(intervals.iter().map(|iv| iv.2 .0));
    let err = intervals.iter().map(|iv| iv.2 .1).sum();
    (total, err)
}

/// ∫_{ℝ^r} f(u) e^{−|u|²/2t} du on an order-`n` tensor Gauss–Hermite grid.
///
/// Slabs along the first axis run in parallel; each slab and the slab totals
/// are reduced in a fixed order, so the result does not depend on the thread count.
pub fn hermite_tensor<F>(r: usize, n: usize, t: f64, f: F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    let rule = gauss_hermite(n);
    let (x, w) = (&rule.0, &rule.1);
    let s = (2.0 * t).sqrt();
    let jac = (2.0 * t).powf(r as f64 / 2.0);
    if r == 0 {
        return f(&[]) * jac;
    }
    let inner = n.pow(r as u32 - 1);
    let slabs: Vec<Complex64> = pool().install(|| {
        (0..n)
            .into_par_iter()
            .map(|i0| {
                let mut acc = ComplexAccumulator::default();
                let mut u = vec![0.0; r];
                u[0] = s * x[i0];
                for flat in 0..inner {
                    let mut rest = flat;
                    let mut weight = w[i0];
                    #[allow(clippy::needless_range_loop)]
                    for axis in 1..r {
                        let i = rest % n;
                        rest /= n;
                        u[axis] = s * x[i];
                        weight *= w[i];
                    }
                    acc.add(f(&u) * weight);
                }
                acc.value()
            })
            .collect()
    });
    complex_sum(slabs) * jac
}

/// Orthonormal basis (columns) of the null space of `a`, singular values below `tol`.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let rows = a.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t");
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(i, _)| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the column span, dropping directions below `tol`.
pub fn orthonormal_span(vectors: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = e.dot(&u);
                u -= e * c;
            }
        }
        let nu = u.norm();
        if nu > tol {
            out.push(u / nu);
        }
    }
    out
}

pub fn columns_to_matrix(cols: &[DVector<f64>], nrows: usize) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(nrows, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}

/// Joint spectrum of commuting real skew-symmetric matrices: one entry per
/// eigenvector of the complexification, holding μ with `opsₛ v = i μₛ v`.
pub fn joint_spectrum(ops: &[DMatrix<f64>]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = ops.first() else { return Ok(Vec::new()) };
    let n = first.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let herm: Vec<DMatrix<Complex64>> =
        ops.iter().map(|a| a.map(|x| Complex64::new(0.0, -x))).collect();
    let scale = ops.iter().map(|a| a.amax()).fold(1.0f64, f64::max);
    'attempt: for attempt in 0..6 {
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for (s, m) in herm.iter().enumerate() {
            let c = 1.0 + (s as f64 + 1.0) * (0.2718281828459045 + 0.1414213562373095 * attempt as f64)
                + (s as f64).powi(2) * 0.0577215664901533;
            h += m * Complex64::new(c, 0.0);
        }
        let eig = nalgebra::SymmetricEigen::new(h);
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let v = eig.eigenvectors.column(j).into_owned();
            let mut mu = Vec::with_capacity(ops.len());
            for m in &herm {
                let mv = m * &v;
                let val = v.dotc(&mv).re;
                let resid = (&mv - &v * Complex64::new(val, 0.0)).norm();
                if resid > 1e-8 * scale {
                    continue 'attempt;
                }
                mu.push(val);
            }
            out.push(mu);
        }
        return Ok(out);
    }
    Err(Error::WeightExtraction("joint eigenspaces could not be separated".into()))
}

/// Rounds to the nearest rational with denominator ≤ 12 within `tol`.
pub fn rationalize(x: f64, tol: f64) -> Option<num::Rational64> {
    for d in 1..=12i64 {
        let n = (x * d as f64).round();
        if (x * d as f64 - n).abs() <= tol * d as f64 {
            return Some(num::Rational64::new(n as i64, d));
        }
    }
    None
}

/// Â(x) = (x/2)/sinh(x/2).
pub fn a_hat(x: f64) -> f64 {
    let h = 0.5 * x;
    if h.abs() < 1e-4 {
        let h2 = h * h;
        1.0 - h2 / 6.0 + 7.0 * h2 * h2 / 360.0
    } else {
        h / h.sinh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        for n in [20, 40, 80, 160] {
            let r = gauss_hermite(n);
            let (x, w) = (&r.0, &r.1);
            for b in [0.0f64, 3.0, 8.0] {
                let v = neumaier_sum(x.iter().zip(w).map(|(x, w)| w * (b * x).exp()));
                let exact = std::f64::consts::PI.sqrt() * (b * b / 4.0).exp();
                if n >= 80 || b < 4.0 {
                    assert!(((v - exact) / exact).abs() < 1e-13, "n={n} b={b}");
                }
            }
        }
    }

    #[test]
    fn kronrod_on_gaussian() {
        let (v, _) = adaptive_integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-14, 0.0);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!((a * ns).amax() < 1e-14);
    }

    #[test]
    fn joint_spectrum_of_rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let mut s = joint_spectrum(&[a]).unwrap();
        s.sort_by(|x, y| x[0].total_cmp(&y[0]));
        assert!((s[0][0] + 2.0).abs() < 1e-12 && (s[1][0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(xs), 2.0);
    }
}
