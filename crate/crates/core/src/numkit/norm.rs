use crate::numkit::{Matrix, NumError, Vector};
use crate::scalar::Scalar;

/// Relative tolerance for the entrywise symmetry check on `Q`.
pub const SYMMETRY_RTOL: f64 = 1e-12;
/// Factor diagonal entries below this fraction of `max |Q_ij|` reject `Q`.
pub const SPD_PIVOT_RTOL: f64 = 1e-12;

/// Quadratic norm `‖x‖ = √(xᵀQx)` for symmetric positive-definite `Q`, with
/// dual norm `‖u‖⋆ = √(uᵀQ⁻¹u)`.
///
/// `Q` is factored once at construction; every `Q⁻¹` application is a pair
/// of triangular solves against the cached factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticNorm<T> {
    q: Matrix<T>,
    factor: Matrix<T>,
    identity: bool,
}

impl<T: Scalar> QuadraticNorm<T> {
    pub fn new(q: Matrix<T>) -> Result<Self, NumError> {
        if !q.is_square() {
            return Err(NumError::DimensionMismatch {
                expected: q.rows(),
                found: q.cols(),
            });
        }
        if let Some((row, col)) = q.asymmetry(T::lit(SYMMETRY_RTOL)) {
            return Err(NumError::NotSymmetric { row, col });
        }
        let floor = T::lit(SPD_PIVOT_RTOL) * q.max_abs();
        let factor = q.cholesky(T::zero())?;
        for i in 0..factor.rows() {
            if !(factor.get(i, i) > floor) {
                return Err(NumError::NotPositiveDefinite { pivot: i });
            }
        }
        let identity = q.is_identity();
        Ok(Self {
            q,
            factor,
            identity,
        })
    }

    /// Euclidean norm on `ℝⁿ`.
    pub fn identity(n: usize) -> Self {
        Self {
            q: Matrix::identity(n),
            factor: Matrix::identity(n),
            identity: true,
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self, NumError> {
        Self::new(Matrix::diag_f64(d)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.q
    }

    /// Lower-triangular `C` with `C Cᵀ = Q`.
    pub fn factor(&self) -> &Matrix<T> {
        &self.factor
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    fn check(&self, x: &Vector<T>) -> Result<(), NumError> {
        if x.dim() != self.dim() {
            return Err(NumError::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// `Qx`
    pub fn apply(&self, x: &Vector<T>) -> Result<Vector<T>, NumError> {
        self.check(x)?;
        if self.identity {
            return Ok(x.clone());
        }
        self.q.matvec(x)
    }

    /// `v` with `Qv = u`.
    pub fn apply_inverse(&self, u: &Vector<T>) -> Result<Vector<T>, NumError> {
        self.check(u)?;
        if self.identity {
            return Ok(u.clone());
        }
        let w = self.factor.solve_lower(u)?;
        self.factor.solve_lower_transposed(&w)
    }

    pub fn primal_norm_sq(&self, x: &Vector<T>) -> Result<T, NumError> {
        self.check(x)?;
        if self.identity {
            return x.dot(x);
        }
        // xᵀQx = ‖Cᵀx‖²
        let mut s = T::zero();
        let n = self.dim();
        for j in 0..n {
            let mut cj = T::zero();
            for i in j..n {
                cj += self.factor.get(i, j) * x[i];
            }
            s += cj * cj;
        }
        Ok(s)
    }

    pub fn primal_norm(&self, x: &Vector<T>) -> Result<T, NumError> {
        Ok(self.primal_norm_sq(x)?.sqrt())
    }

    pub fn dual_norm_sq(&self, u: &Vector<T>) -> Result<T, NumError> {
        self.check(u)?;
        if self.identity {
            return u.dot(u);
        }
        // uᵀQ⁻¹u = ‖C⁻¹u‖²
        let w = self.factor.solve_lower(u)?;
        w.dot(&w)
    }

    pub fn dual_norm(&self, u: &Vector<T>) -> Result<T, NumError> {
        Ok(self.dual_norm_sq(u)?.sqrt())
    }

    /// `‖x − y‖²`
    pub fn distance_sq(&self, x: &Vector<T>, y: &Vector<T>) -> Result<T, NumError> {
        self.primal_norm_sq(&x.sub(y)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector<f64> {
        Vector::from_f64(x).unwrap()
    }

    #[test]
    fn primal_norm_examples() {
        let id = QuadraticNorm::<f64>::identity(2);
        assert_eq!(id.primal_norm(&v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(id.primal_norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        let q = QuadraticNorm::<f64>::diagonal(&[2.0, 1.0]).unwrap();
        assert!((q.primal_norm(&v(&[1.0, 1.0])).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dual_norm_examples() {
        let id = QuadraticNorm::<f64>::identity(2);
        assert_eq!(id.dual_norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        let q = QuadraticNorm::<f64>::diagonal(&[2.0, 1.0]).unwrap();
        assert!((q.dual_norm(&v(&[2.0, 0.0])).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(q.dual_norm(&v(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn apply_inverse_examples() {
        let id = QuadraticNorm::<f64>::identity(2);
        assert_eq!(id.apply_inverse(&v(&[1.0, 2.0])).unwrap(), v(&[1.0, 2.0]));
        let q = QuadraticNorm::<f64>::diagonal(&[2.0, 4.0]).unwrap();
        let u = v(&[2.0, 4.0]);
        let sol = q.apply_inverse(&u).unwrap();
        assert!(sol.sub(&v(&[1.0, 1.0])).unwrap().max_abs() < 1e-15);
        let residual = q.apply(&sol).unwrap().sub(&u).unwrap().norm2();
        assert!(residual <= 1e-10 * u.norm2());
        assert_eq!(q.apply_inverse(&v(&[0.0, 0.0])).unwrap(), v(&[0.0, 0.0]));
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let q = QuadraticNorm::<f64>::identity(2);
        let e = NumError::DimensionMismatch {
            expected: 2,
            found: 3,
        };
        assert_eq!(q.primal_norm(&v(&[1.0, 2.0, 3.0])), Err(e.clone()));
        assert_eq!(q.dual_norm(&v(&[1.0, 2.0, 3.0])), Err(e.clone()));
        assert_eq!(q.apply_inverse(&v(&[1.0, 2.0, 3.0])), Err(e));
    }

    #[test]
    fn rejects_asymmetric_and_indefinite() {
        let asym = Matrix::<f64>::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(
            QuadraticNorm::new(asym),
            Err(NumError::NotSymmetric { row: 0, col: 1 })
        );
        let indef = Matrix::<f64>::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(matches!(
            QuadraticNorm::new(indef),
            Err(NumError::NotPositiveDefinite { .. })
        ));
        let tiny = Matrix::<f64>::diag_f64(&[1.0, 1e-26]).unwrap();
        assert!(QuadraticNorm::new(tiny).is_err());
    }

    #[test]
    fn cauchy_schwarz_tight_on_aligned_pair() {
        let q = QuadraticNorm::<f64>::new(
            Matrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap(),
        )
        .unwrap();
        let x = v(&[0.7, -1.3]);
        let qx = q.apply(&x).unwrap();
        let lhs = q.primal_norm(&x).unwrap() * q.dual_norm(&qx).unwrap();
        let rhs = x.dot(&qx).unwrap().abs();
        assert!(lhs >= rhs * (1.0 - 1e-15));
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }
}
