//! Exact rational linear algebra on small dense matrices and vectors.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn zeros(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn is_zero(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

/// `y += c·x`
pub fn axpy(y: &mut [Q], c: &Q, x: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

/// Σ wᵢ aᵢ bᵢ, a diagonal bilinear form.
pub fn weighted_dot(w: &[Q], a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for ((wi, ai), bi) in w.iter().zip(a).zip(b) {
        if !ai.is_zero() && !bi.is_zero() {
            s += wi * ai * bi;
        }
    }
    s
}

pub fn to_f64_vec(v: &[Q]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[QVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_columns(cols: &[QVec], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |s, i| s + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let x = &f * &m[(r, j)];
                        m[(i, j)] -= x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : A x = 0}.
    pub fn null_space(&self) -> Vec<QVec> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zeros(self.cols);
                v[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some x with A x = b, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<QVec> {
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = zeros(self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Orthogonal basis of span(vectors) for the diagonal form with weights `w`
/// (Gram–Schmidt over ℚ, dropping dependent vectors).
pub fn orthogonalize(vectors: &[QVec], w: &[Q]) -> Vec<QVec> {
    let mut out: Vec<(QVec, Q)> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for (e, ee) in &out {
            let c = weighted_dot(w, &u, e) / ee;
            axpy(&mut u, &-c, e);
        }
        if !is_zero(&u) {
            let uu = weighted_dot(w, &u, &u);
            out.push((u, uu));
        }
    }
    out.into_iter().map(|(u, _)| u).collect()
}

/// Vectors of `within` orthogonal (weights `w`) to every vector of `against`.
pub fn orthogonal_complement(within: &[QVec], against: &[QVec], w: &[Q]) -> Vec<QVec> {
    if within.is_empty() {
        return Vec::new();
    }
    // coefficients c with Σ cᵢ withinᵢ ⊥ against
    let mut m = QMatrix::zeros(against.len(), within.len());
    for (i, a) in against.iter().enumerate() {
        for (j, b) in within.iter().enumerate() {
            m[(i, j)] = weighted_dot(w, a, b);
        }
    }
    let n = within[0].len();
    let coeffs = if against.is_empty() {
        (0..within.len()).map(|j| unit(within.len(), j)).collect()
    } else {
        m.null_space()
    };
    coeffs
        .iter()
        .map(|c| {
            let mut v = zeros(n);
            for (cj, wj) in c.iter().zip(within) {
                axpy(&mut v, cj, wj);
            }
            v
        })
        .collect()
}

/// Intersection of two subspaces given by spanning sets in the same ambient space.
pub fn intersect(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a[0].len();
    // Σ xᵢ aᵢ − Σ yⱼ bⱼ = 0
    let mut cols: Vec<QVec> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect::<QVec>()));
    let m = QMatrix::from_columns(&cols, n);
    let basis: Vec<QVec> = m
        .null_space()
        .iter()
        .map(|c| {
            let mut v = zeros(n);
            for (ci, ai) in c.iter().zip(a) {
                axpy(&mut v, ci, ai);
            }
            v
        })
        .collect();
    independent(&basis)
}

/// A maximal linearly independent subset (in order).
pub fn independent(vectors: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for v in vectors {
        let mut trial = out.clone();
        trial.push(v.clone());
        if QMatrix::from_rows(&trial).rank() == trial.len() {
            out = trial;
        }
    }
    out
}

pub fn dim_span(vectors: &[QVec]) -> usize {
    if vectors.is_empty() {
        0
    } else {
        QMatrix::from_rows(vectors).rank()
    }
}

/// Exact square root of a nonnegative rational when it is a perfect square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Parses "p/q", "p", or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    let (int, frac) = s.split_once('.')?;
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num::pow(BigInt::from(10), frac.len());
    Some(Q::new(n, d))
}

/// Serializes a rational as its "p/q" string.
pub fn serialize_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = QMatrix::from_rows(&[vec![q(1), q(2), q(3)]]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn gram_schmidt_is_orthogonal() {
        let w = vec![q(1), q(2), q(3)];
        let vs = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)], vec![q(1), q(2), q(1)]];
        let o = orthogonalize(&vs, &w);
        assert_eq!(o.len(), 2);
        assert!(weighted_dot(&w, &o[0], &o[1]).is_zero());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/2"), Some(qr(3, 2)));
        assert_eq!(parse_rational("0.25"), Some(qr(1, 4)));
        assert_eq!(parse_rational("-4"), Some(q(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_sqrt(&qr(9, 4)), Some(qr(3, 2)));
        assert_eq!(rational_sqrt(&qr(3, 2)), None);
    }

    #[test]
    fn intersection_of_planes() {
        let a = vec![unit(3, 0), unit(3, 1)];
        let b = vec![unit(3, 1), unit(3, 2)];
        let i = intersect(&a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(dim_span(&[i[0].clone(), unit(3, 1)]), 1);
    }
}
