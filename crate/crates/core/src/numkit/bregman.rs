use std::sync::Arc;

use crate::numkit::{NumError, QuadraticNorm, Vector};
use crate::scalar::Scalar;

/// Distance-generating function `w(y) = ‖y‖²/(2t)` over a quadratic norm.
///
/// For `t ∈ (0, 1]` the generator is 1-strongly convex w.r.t. the norm, and
/// its Bregman divergence is `V_x(y) = ‖x − y‖²/(2t)`.
#[derive(Debug, Clone)]
pub struct BregmanGenerator<T> {
    norm: Arc<QuadraticNorm<T>>,
    t: T,
}

impl<T: Scalar> BregmanGenerator<T> {
    pub fn new(norm: Arc<QuadraticNorm<T>>, t: T) -> Result<Self, NumError> {
        if !(t > T::zero() && t <= T::one()) {
            return Err(NumError::InvalidScale(t.to_f64_lossy()));
        }
        Ok(Self { norm, t })
    }

    pub fn norm(&self) -> &QuadraticNorm<T> {
        &self.norm
    }

    pub fn scale(&self) -> T {
        self.t
    }

    /// `V_x(y)`
    pub fn divergence(&self, x: &Vector<T>, y: &Vector<T>) -> Result<T, NumError> {
        let d = self.norm.distance_sq(x, y)?;
        Ok(d / (T::lit(2.0) * self.t))
    }

    /// Closed-form mirror step `argmin_y { V_z(y) + ⟨g, y⟩ } = z − t·Q⁻¹g`.
    pub fn mirror_step(&self, z: &Vector<T>, g: &Vector<T>) -> Result<Vector<T>, NumError> {
        let d = self.norm.apply_inverse(g)?;
        z.add_scaled(-self.t, &d)
    }
}

/// Free-function form of [`BregmanGenerator::divergence`].
pub fn bregman<T: Scalar>(
    x: &Vector<T>,
    y: &Vector<T>,
    generator: &BregmanGenerator<T>,
) -> Result<T, NumError> {
    generator.divergence(x, y)
}
