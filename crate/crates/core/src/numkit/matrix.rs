use crate::numkit::{NumError, Vector};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, NumError> {
        if rows == 0 || cols == 0 {
            return Err(NumError::Empty);
        }
        if data.len() != rows * cols {
            return Err(NumError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(NumError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| T::lit(v)));
        }
        Self::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn diag(d: &[T]) -> Result<Self, NumError> {
        if d.is_empty() {
            return Err(NumError::Empty);
        }
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn diag_f64(d: &[f64]) -> Result<Self, NumError> {
        Self::diag(&d.iter().map(|&v| T::lit(v)).collect::<Vec<_>>())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |m, &a| if a.abs() > m { a.abs() } else { m })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j) == T::zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let want = if i == j { T::one() } else { T::zero() };
                    self.get(i, j) == want
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, x: &Vector<T>) -> Result<Vector<T>, NumError> {
        if x.dim() != self.cols {
            return Err(NumError::DimensionMismatch {
                expected: self.cols,
                found: x.dim(),
            });
        }
        let xs = x.as_slice();
        let out = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(xs)
                    .map(|(&a, &b)| a * b)
                    .sum::<T>()
            })
            .collect();
        Vector::new(out)
    }

    /// `selfᵀ x`
    pub fn tmatvec(&self, x: &Vector<T>) -> Result<Vector<T>, NumError> {
        if x.dim() != self.rows {
            return Err(NumError::DimensionMismatch {
                expected: self.rows,
                found: x.dim(),
            });
        }
        let mut out = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        Vector::new(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, NumError> {
        if self.cols != other.rows {
            return Err(NumError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// First off-diagonal pair violating symmetry at relative tolerance `rtol`.
    pub fn asymmetry(&self, rtol: T) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let a = self.get(i, j);
                let b = self.get(j, i);
                let scale = a.abs().max(b.abs());
                if (a - b).abs() > rtol * scale {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Lower-triangular factor `C` with `C Cᵀ = self`. Rejects pivots below
    /// `floor` (absolute).
    pub fn cholesky(&self, floor: T) -> Result<Self, NumError> {
        if !self.is_square() {
            return Err(NumError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut c = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= c.get(j, k) * c.get(j, k);
            }
            if !(d > floor) || !d.is_finite() {
                return Err(NumError::NotPositiveDefinite { pivot: j });
            }
            let djj = d.sqrt();
            c.set(j, j, djj);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= c.get(i, k) * c.get(j, k);
                }
                c.set(i, j, s / djj);
            }
        }
        Ok(c)
    }

    /// Solves `self v = b` for lower-triangular `self`.
    pub fn solve_lower(&self, b: &Vector<T>) -> Result<Vector<T>, NumError> {
        let n = self.rows;
        if b.dim() != n {
            return Err(NumError::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        let mut v = b.clone();
        for i in 0..n {
            let mut s = v[i];
            for (k, &a) in self.row(i)[..i].iter().enumerate() {
                s -= a * v[k];
            }
            v[i] = s / self.get(i, i);
        }
        Ok(v)
    }

    /// Solves `selfᵀ v = b` for lower-triangular `self`.
    pub fn solve_lower_transposed(&self, b: &Vector<T>) -> Result<Vector<T>, NumError> {
        let n = self.rows;
        if b.dim() != n {
            return Err(NumError::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        let mut v = b.clone();
        for i in (0..n).rev() {
            let mut s = v[i];
            for k in (i + 1)..n {
                s -= self.get(k, i) * v[k];
            }
            v[i] = s / self.get(i, i);
        }
        Ok(v)
    }

    /// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
    /// eigenvalues (ascending) and the matrix whose columns are the
    /// corresponding orthonormal eigenvectors.
    pub fn symmetric_eigen(&self) -> Result<(Vec<T>, Self), NumError> {
        if !self.is_square() {
            return Err(NumError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let mut off = T::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.get(i, j) * a.get(i, j);
                }
            }
            let diag: T = (0..n).map(|i| a.get(i, i) * a.get(i, i)).sum();
            if off <= eps * eps * diag || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq == T::zero() {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let two = T::lit(2.0);
                    let theta = (aqq - app) / (two * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a.get(i, i)
                .partial_cmp(&a.get(j, j))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| a.get(i, i)).collect();
        let mut vecs = Self::zeros(n, n);
        for (col, &src) in order.iter().enumerate() {
            for k in 0..n {
                vecs.set(k, col, v.get(k, src));
            }
        }
        Ok((values, vecs))
    }
}
