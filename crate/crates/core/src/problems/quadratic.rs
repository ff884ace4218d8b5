use std::sync::Arc;

use super::{gaussian, seeded_rng, Objective, ObjectiveOracle, ProblemError, ProblemKind, ProblemSpec, Reference};
use crate::numkit::{Matrix, NumError, QuadraticNorm, Vector};
use crate::scalar::Scalar;

const EIGEN_RTOL: f64 = 1e-13;
const EIGEN_MAX_ITERS: usize = 200_000;

/// `f(x) = ½xᵀAx − bᵀx` with symmetric positive semidefinite `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic<T> {
    a: Matrix<T>,
    b: Vector<T>,
}

impl<T: Scalar> Quadratic<T> {
    pub fn new(a: Matrix<T>, b: Vector<T>) -> Result<Self, NumError> {
        if !a.is_square() {
            return Err(NumError::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        if a.rows() != b.dim() {
            return Err(NumError::DimensionMismatch {
                expected: a.rows(),
                found: b.dim(),
            });
        }
        if let Some((row, col)) = a.asymmetry(T::lit(1e-12)) {
            return Err(NumError::NotSymmetric { row, col });
        }
        Ok(Self { a, b })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn linear_term(&self) -> &Vector<T> {
        &self.b
    }

    /// Wraps the quadratic with constants measured in `norm`: `L` and `μ` are
    /// the extreme eigenvalues of `C⁻¹AC⁻ᵀ` (`CCᵀ = Q`), and the reference
    /// solves `Ax = b` (minimum-norm solution when `A` is singular).
    pub fn into_oracle(
        self,
        norm: Arc<QuadraticNorm<T>>,
        name: impl Into<String>,
    ) -> Result<ObjectiveOracle<T>, ProblemError> {
        if norm.dim() != self.a.rows() {
            return Err(NumError::DimensionMismatch {
                expected: norm.dim(),
                found: self.a.rows(),
            }
            .into());
        }
        let (point, mu, l) = match self.a.cholesky(T::zero()) {
            Ok(chol) if min_pivot_sq(&chol) > T::lit(1e-14) * self.a.max_abs() => {
                let x = chol.solve_lower_transposed(&chol.solve_lower(&self.b)?)?;
                let l = generalized_top(&self.a, &norm)?;
                let mu = generalized_bottom(&chol, &norm)?;
                (x, mu.min(l), l)
            }
            _ => {
                let x = self.pseudo_solve()?;
                let l = generalized_top(&self.a, &norm)?;
                (x, T::zero(), l)
            }
        };
        if !(l > T::zero()) {
            return Err(ProblemError::Usage("quadratic with A = 0 has no smoothness scale".into()));
        }
        let value = -T::lit(0.5) * self.b.dot(&point)?;
        let residual = norm.dual_norm(&self.a.matvec(&point)?.sub(&self.b)?)?;
        let reference = Reference {
            point,
            value,
            residual,
            exact: true,
        };
        ObjectiveOracle::new(Arc::new(self), l, mu, norm, name)?.with_reference(reference)
    }

    /// Minimum-norm solution of `Ax = b` through the eigen-decomposition of
    /// `A`; fails when `b` has a component outside `range(A)`.
    fn pseudo_solve(&self) -> Result<Vector<T>, ProblemError> {
        let n = self.a.rows();
        let (vals, vecs) = self.a.symmetric_eigen()?;
        let top = vals.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let cutoff = T::lit(1e-12) * T::from_usize_lossy(n) * top;
        let mut x = Vector::zeros(n);
        for (j, &lam) in vals.iter().enumerate() {
            if lam.abs() <= cutoff {
                continue;
            }
            let mut coef = T::zero();
            for i in 0..n {
                coef += vecs.get(i, j) * self.b[i];
            }
            coef /= lam;
            for i in 0..n {
                x[i] += coef * vecs.get(i, j);
            }
        }
        let r = self.a.matvec(&x)?.sub(&self.b)?;
        let scale = self.b.norm2() + top * x.norm2();
        if r.norm2() > T::lit(1e-9) * scale.max(T::min_positive_value()) {
            return Err(ProblemError::NoMinimizer(
                "linear term has a component outside range(A)".into(),
            ));
        }
        Ok(x)
    }
}

impl<T: Scalar> Objective<T> for Quadratic<T> {
    fn dim(&self) -> usize {
        self.b.dim()
    }

    fn value(&self, x: &Vector<T>) -> T {
        let ax = self.a.matvec(x).expect("dimension checked by oracle");
        let quad = x.dot(&ax).expect("dimension checked by oracle");
        let lin = self.b.dot(x).expect("dimension checked by oracle");
        T::lit(0.5) * quad - lin
    }

    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let ax = self.a.matvec(x).expect("dimension checked by oracle");
        ax.sub(&self.b).expect("dimension checked by oracle")
    }

    /// `½(x − x⋆)ᵀA(x − x⋆)`, free of the cancellation in `f(x) − f⋆`.
    fn excess(&self, x: &Vector<T>, reference: &Reference<T>) -> T {
        if !reference.exact {
            return self.value(x) - reference.value;
        }
        let e = x.sub(&reference.point).expect("dimension checked by oracle");
        let ae = self.a.matvec(&e).expect("dimension checked by oracle");
        T::lit(0.5) * e.dot(&ae).expect("dimension checked by oracle")
    }
}

fn min_pivot_sq<T: Scalar>(chol: &Matrix<T>) -> T {
    (0..chol.rows())
        .map(|i| chol.get(i, i) * chol.get(i, i))
        .fold(T::infinity(), T::min)
}

/// `v ↦ C⁻¹ A C⁻ᵀ v`
fn whitened_apply<T: Scalar>(a: &Matrix<T>, norm: &QuadraticNorm<T>, v: &Vector<T>) -> Result<Vector<T>, NumError> {
    if norm.is_identity() {
        return a.matvec(v);
    }
    let c = norm.factor();
    let w = c.solve_lower_transposed(v)?;
    c.solve_lower(&a.matvec(&w)?)
}

/// `v ↦ (C⁻¹ A C⁻ᵀ)⁻¹ v = Cᵀ A⁻¹ C v` with `A = GGᵀ`.
fn whitened_solve<T: Scalar>(chol: &Matrix<T>, norm: &QuadraticNorm<T>, v: &Vector<T>) -> Result<Vector<T>, NumError> {
    let cv = if norm.is_identity() {
        v.clone()
    } else {
        norm.factor().matvec(v)?
    };
    let s = chol.solve_lower_transposed(&chol.solve_lower(&cv)?)?;
    if norm.is_identity() {
        Ok(s)
    } else {
        norm.factor().tmatvec(&s)
    }
}

/// Power iteration; returns the converged Rayleigh quotient.
fn rayleigh_iterate<T: Scalar>(
    n: usize,
    mut apply: impl FnMut(&Vector<T>) -> Result<Vector<T>, NumError>,
) -> Result<T, NumError> {
    // Deterministic start with no special alignment to coordinate axes.
    let mut v = Vector::new((0..n).map(|i| T::one() + T::lit(0.1) * T::from_usize_lossy(i % 7)).collect())?;
    let nv = v.norm2();
    v = v.scaled(T::one() / nv);
    let mut rho = T::zero();
    let mut stable = 0;
    for _ in 0..EIGEN_MAX_ITERS {
        let w = apply(&v)?;
        let next = v.dot(&w)?;
        let nw = w.norm2();
        if !(nw > T::zero()) {
            return Ok(T::zero());
        }
        let residual = w.add_scaled(-next, &v)?.norm2();
        let converged = (next - rho).abs() <= T::lit(EIGEN_RTOL) * next.abs();
        rho = next;
        v = w.scaled(T::one() / nw);
        if residual <= T::lit(1e-7) * next.abs() || converged {
            stable += 1;
            if stable >= 3 {
                break;
            }
        } else {
            stable = 0;
        }
    }
    Ok(rho)
}

fn generalized_top<T: Scalar>(a: &Matrix<T>, norm: &QuadraticNorm<T>) -> Result<T, NumError> {
    rayleigh_iterate(a.rows(), |v| whitened_apply(a, norm, v))
}

fn generalized_bottom<T: Scalar>(chol: &Matrix<T>, norm: &QuadraticNorm<T>) -> Result<T, NumError> {
    let inv_top = rayleigh_iterate(chol.rows(), |v| whitened_solve(chol, norm, v))?;
    Ok(T::one() / inv_top)
}

/// Seeded quadratic whose whitened Hessian `C⁻¹AC⁻ᵀ` has a geometric spectrum
/// from `L/κ` to `L` (or a zero eigenvalue when `κ = ∞`), a random
/// eigenbasis, and a random minimizer.
pub fn make_quadratic<T: Scalar>(
    spec: &ProblemSpec,
    norm: Arc<QuadraticNorm<T>>,
) -> Result<ObjectiveOracle<T>, ProblemError> {
    if spec.kind != ProblemKind::Quadratic {
        return Err(ProblemError::Usage(format!("expected a quadratic spec, got {}", spec.kind)));
    }
    spec.validate()?;
    let n = spec.dimension;
    if norm.dim() != n {
        return Err(NumError::DimensionMismatch {
            expected: n,
            found: norm.dim(),
        }
        .into());
    }
    let l = spec.smoothness;
    let kappa = spec.kappa;
    let spectrum: Vec<f64> = if kappa.is_infinite() {
        if n == 1 {
            return Err(ProblemError::Usage("a singular quadratic needs dimension ≥ 2".into()));
        }
        (0..n)
            .map(|i| match i {
                0 => 0.0,
                _ if n == 2 => l,
                _ => l * 10f64.powf(-2.0 * (1.0 - (i - 1) as f64 / (n - 2) as f64)),
            })
            .collect()
    } else if n == 1 {
        vec![l]
    } else {
        (0..n)
            .map(|i| l * kappa.powf(i as f64 / (n - 1) as f64 - 1.0))
            .collect()
    };

    let mut rng = seeded_rng(spec.seed);
    let u = random_orthogonal(n, &mut rng);
    let target: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();

    // M = U Λ Uᵀ, then A = C M Cᵀ so that C⁻¹AC⁻ᵀ = M.
    let mut m = Matrix::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..n).map(|p| u[i][p] * spectrum[p] * u[j][p]).sum();
            m.set(i, j, T::lit(s));
            m.set(j, i, T::lit(s));
        }
    }
    let a = if norm.is_identity() {
        m
    } else {
        let c = norm.factor();
        let cm = c.matmul(&m)?;
        symmetrize(&cm.matmul(&c.transpose())?)
    };
    let x_target = Vector::from_f64(&target)?;
    let b = a.matvec(&x_target)?;
    Quadratic::new(a, b)?.into_oracle(norm, spec.label())
}

fn symmetrize<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.rows();
    let mut s = a.clone();
    for i in 0..n {
        for j in 0..i {
            let v = T::lit(0.5) * (a.get(i, j) + a.get(j, i));
            s.set(i, j, v);
            s.set(j, i, v);
        }
    }
    s
}

/// Columns of a Haar-ish random orthogonal matrix via modified Gram–Schmidt,
/// returned row-major as `u[row][col]`.
fn random_orthogonal(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
            }
        }
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nv > 1e-8 {
            v.iter_mut().for_each(|a| *a /= nv);
            cols.push(v);
        }
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}
