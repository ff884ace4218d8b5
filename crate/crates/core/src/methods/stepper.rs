use super::{Algorithm, MethodConfig, MethodError};
use crate::numkit::Vector;
use crate::problems::ObjectiveOracle;
use crate::schedules::{
    coupling_from_theta, gamma_sc, sc_agm_momentum, tilde_coupling, CouplingSchedule, PhiSchedule,
    ScGamma,
};
use crate::scalar::Scalar;

/// Iterates of one method at iteration `k`. `y_prev` is `y_{k−1}` (with the
/// convention `y₋₁ = x₀`) and `grad_x` caches `∇f(x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodState<T> {
    pub algorithm: Algorithm,
    pub k: usize,
    pub x: Vector<T>,
    pub y: Vector<T>,
    pub z: Vector<T>,
    pub y_prev: Vector<T>,
    pub grad_x: Vector<T>,
    pub x_tilde: Option<Vector<T>>,
}

/// `(y_{k+1}, z_{k+1}, x_{k+1})` computed from iteration `k` without a new
/// gradient evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposal<T> {
    pub y: Vector<T>,
    pub z: Vector<T>,
    pub x: Vector<T>,
}

/// A method bound to an oracle, with every schedule resolved and checked.
#[derive(Debug, Clone)]
pub struct Stepper<T: Scalar> {
    config: MethodConfig<T>,
    oracle: ObjectiveOracle<T>,
    gamma: Option<ScGamma<T>>,
    coupling: Option<CouplingSchedule<T>>,
}

impl<T: Scalar> Stepper<T> {
    /// `horizon` bounds the indices for which coupling schedules are
    /// validated. θ schedules for the momentum and three-sequence forms are
    /// deliberately not validated, so corrupted schedules can be studied.
    pub fn new(config: MethodConfig<T>, oracle: &ObjectiveOracle<T>, horizon: usize) -> Result<Self, MethodError> {
        let alg = config.algorithm;
        if matches!(alg, Algorithm::Lc | Algorithm::Unified | Algorithm::UnifiedZ)
            && !(config.t > T::zero() && config.t <= T::one())
        {
            return Err(MethodError::Usage(format!("t must lie in (0, 1], got {}", config.t)));
        }
        let mu = oracle.strong_convexity();
        if alg.is_strongly_convex() && !(mu > T::zero()) {
            return Err(MethodError::Usage(format!("{alg} needs a strongly convex objective (μ > 0)")));
        }
        let gamma = match alg {
            Algorithm::ScOgm | Algorithm::LcScOgm => Some(gamma_sc(oracle.condition_number()).map_err(|e| {
                MethodError::Usage(format!("{alg}: {e}"))
            })?),
            _ => None,
        };
        let coupling = match (alg, &config.phi) {
            (Algorithm::Lc, None) => Some(coupling_from_theta(
                config.theta.clone(),
                oracle.smoothness(),
                config.coupling,
                horizon,
            )?),
            (Algorithm::Lc, Some(phi)) => Some(tilde_coupling(
                config.theta.clone(),
                phi.clone(),
                oracle.smoothness(),
                config.coupling,
                horizon,
            )?),
            _ => None,
        };
        if config.phi.is_some() && !alg.uses_theta() {
            return Err(MethodError::Usage(format!("{alg} has no last-step sequence")));
        }
        Ok(Self {
            config,
            oracle: oracle.clone(),
            gamma,
            coupling,
        })
    }

    pub fn config(&self) -> &MethodConfig<T> {
        &self.config
    }

    pub fn oracle(&self) -> &ObjectiveOracle<T> {
        &self.oracle
    }

    pub fn gamma(&self) -> Option<ScGamma<T>> {
        self.gamma
    }

    pub fn coupling(&self) -> Option<&CouplingSchedule<T>> {
        self.coupling.as_ref()
    }

    /// `x = y = z = x₀`, with `∇f(x₀)` cached.
    pub fn init(&self, x0: &Vector<T>) -> Result<MethodState<T>, MethodError> {
        let grad_x = self.oracle.gradient(x0)?;
        if !x0.is_finite() || !grad_x.is_finite() {
            return Err(MethodError::Divergence { k: 0 });
        }
        let mut state = MethodState {
            algorithm: self.config.algorithm,
            k: 0,
            x: x0.clone(),
            y: x0.clone(),
            z: x0.clone(),
            y_prev: x0.clone(),
            grad_x,
            x_tilde: None,
        };
        self.refresh_tilde(&mut state)?;
        Ok(state)
    }

    /// Iteration `k + 1` from the cached gradient at `x_k`.
    pub fn propose(&self, s: &MethodState<T>) -> Result<Proposal<T>, MethodError> {
        let l = self.oracle.smoothness();
        let d = self.oracle.norm().apply_inverse(&s.grad_x)?;
        let y1 = s.x.add_scaled(-T::one() / l, &d)?;
        let th = &self.config.theta;
        let (th0, th1) = (th.at(s.k), th.at(s.k + 1));
        let one = T::one();
        let two = T::lit(2.0);

        // x = (1 − 1/θ)y + z/θ  ⇔  z = θx − (θ − 1)y
        let z_of = |x: &Vector<T>, y: &Vector<T>, theta: T| x.combine(theta, one - theta, y);
        let couple = |y: &Vector<T>, z: &Vector<T>, tau: T| y.combine(one - tau, tau, z);
        // y₁ + a(y₁ − y_k) + b(y₁ − x_k)
        let momentum = |a: T, b: T| -> Result<Vector<T>, MethodError> {
            let mut x1 = y1.scaled(one + a + b);
            x1.axpy(-a, &s.y)?;
            x1.axpy(-b, &s.x)?;
            Ok(x1)
        };

        let (z1, x1) = match s.algorithm {
            Algorithm::Agm | Algorithm::Ogm | Algorithm::Unified => {
                let corr = match s.algorithm {
                    Algorithm::Agm => T::zero(),
                    Algorithm::Ogm => th0 / th1,
                    _ => (two * self.config.t - one) * th0 / th1,
                };
                let x1 = momentum((th0 - one) / th1, corr)?;
                (z_of(&x1, &y1, th1)?, x1)
            }
            Algorithm::AgmZ | Algorithm::OgmZ | Algorithm::SimpleOgm | Algorithm::UnifiedZ => {
                let c = match s.algorithm {
                    Algorithm::AgmZ => one,
                    Algorithm::UnifiedZ => two * self.config.t,
                    _ => two,
                };
                let z1 = s.z.add_scaled(-c * th0 / l, &d)?;
                let x1 = couple(&y1, &z1, one / th1)?;
                (z1, x1)
            }
            Algorithm::Lc => {
                let cp = self.coupling.as_ref().expect("built in new");
                let z1 = s.z.add_scaled(-cp.alpha(s.k + 1) * self.config.t, &d)?;
                let x1 = couple(&y1, &z1, cp.tau(s.k + 1))?;
                (z1, x1)
            }
            Algorithm::ScAgm => {
                let kappa = self.oracle.condition_number();
                let x1 = momentum(sc_agm_momentum(kappa), T::zero())?;
                let z1 = x1.combine(one + kappa.sqrt(), -kappa.sqrt(), &y1)?;
                (z1, x1)
            }
            Algorithm::ScOgm => {
                let g = self.gamma.expect("built in new");
                let m = g.momentum();
                let x1 = momentum(m, m)?;
                let z1 = x1.combine((two * g.gamma + one) / g.gamma, -(g.gamma + one) / g.gamma, &y1)?;
                (z1, x1)
            }
            Algorithm::LcScOgm => {
                let g = self.gamma.expect("built in new").gamma;
                let mu = self.oracle.strong_convexity();
                let mut z1 = s.z.add_scaled(g, &s.x)?;
                z1.axpy(-g / mu, &d)?;
                let z1 = z1.scaled(one / (one + g));
                let x1 = couple(&y1, &z1, g / (two * g + one))?;
                (z1, x1)
            }
        };
        if !(y1.is_finite() && z1.is_finite() && x1.is_finite()) {
            return Err(MethodError::Divergence { k: s.k + 1 });
        }
        Ok(Proposal { y: y1, z: z1, x: x1 })
    }

    /// Commits a proposal from [`Self::propose`] and evaluates `∇f(x_{k+1})`.
    pub fn advance(&self, s: &mut MethodState<T>, p: Proposal<T>) -> Result<(), MethodError> {
        let grad = self.oracle.gradient(&p.x)?;
        if !grad.is_finite() {
            return Err(MethodError::Divergence { k: s.k + 1 });
        }
        s.y_prev = std::mem::replace(&mut s.y, p.y);
        s.z = p.z;
        s.x = p.x;
        s.grad_x = grad;
        s.k += 1;
        self.refresh_tilde(s)
    }

    pub fn step(&self, s: &mut MethodState<T>) -> Result<(), MethodError> {
        let p = self.propose(s)?;
        self.advance(s, p)
    }

    fn refresh_tilde(&self, s: &mut MethodState<T>) -> Result<(), MethodError> {
        if let Some(phi) = &self.config.phi {
            s.x_tilde = Some(last_step_modify(s, phi)?);
        }
        Ok(())
    }
}

/// `x̃_k = (1 − 1/φ_k)y_k + z_k/φ_k`, leaving the trajectory untouched.
pub fn last_step_modify<T: Scalar>(s: &MethodState<T>, phi: &PhiSchedule<T>) -> Result<Vector<T>, MethodError> {
    if !s.algorithm.uses_theta() {
        return Err(MethodError::Usage(format!(
            "{} carries no θ-coupled z sequence for the last step",
            s.algorithm
        )));
    }
    let p = phi.at(s.k);
    Ok(s.y.combine(T::one() - T::one() / p, T::one() / p, &s.z)?)
}
