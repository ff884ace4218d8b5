use super::{ObjectiveOracle, ProblemError, Reference};
use crate::methods::{Algorithm, MethodConfig, MethodError, Stepper};
use crate::numkit::Vector;
use crate::scalar::Scalar;

pub const REFINE_ITERATION_CAP: usize = 1_000_000;

/// Runs OGM until `‖∇f(x)‖⋆ ≤ tol·L·(1 + ‖x‖)` and installs the final point
/// as a (non-exact) reference. OGM's momentum is reset whenever the step
/// `y_{k+1} − y_k` points uphill, `⟨∇f(x_k), y_{k+1} − y_k⟩ > 0`; unlike a
/// function-value test this stays informative after `f` has converged to
/// working precision. An exact reference is returned unchanged.
pub fn refine_reference<T: Scalar>(oracle: ObjectiveOracle<T>, tol: T) -> Result<ObjectiveOracle<T>, ProblemError> {
    if !(tol > T::zero()) {
        return Err(ProblemError::Usage(format!("tol must be positive, got {tol}")));
    }
    if oracle.reference().is_some_and(|r| r.exact) {
        return Ok(oracle);
    }
    let start = match oracle.reference() {
        Some(r) => r.point.clone(),
        None => Vector::zeros(oracle.dim()),
    };
    let l = oracle.smoothness();
    let stepper = Stepper::new(MethodConfig::new(Algorithm::OgmZ), &oracle, 0).map_err(method_err)?;
    let mut state = stepper.init(&start).map_err(method_err)?;
    let mut best = (T::infinity(), state.x.clone());
    for it in 0..=REFINE_ITERATION_CAP {
        let residual = oracle.norm().dual_norm(&state.grad_x)?;
        if residual < best.0 {
            best = (residual, state.x.clone());
        }
        if residual <= tol * l * (T::one() + oracle.norm().primal_norm(&state.x)?) {
            let value = oracle.value(&state.x)?;
            let reference = Reference {
                point: state.x.clone(),
                value,
                residual,
                exact: false,
            };
            let installed = oracle.without_reference();
            return Ok(installed.with_refined_reference(reference));
        }
        if it == REFINE_ITERATION_CAP {
            break;
        }
        let proposal = stepper.propose(&state).map_err(method_err)?;
        let uphill = state.grad_x.dot(&proposal.y.sub(&state.y)?)? > T::zero();
        if uphill {
            state = stepper.init(&proposal.y).map_err(method_err)?;
            continue;
        }
        stepper.advance(&mut state, proposal).map_err(method_err)?;
    }
    Err(ProblemError::ReferenceUnavailable {
        iterations: REFINE_ITERATION_CAP,
        residual: best.0.to_f64_lossy(),
    })
}

fn method_err(e: MethodError) -> ProblemError {
    match e {
        MethodError::Num(n) => ProblemError::Num(n),
        other => ProblemError::Usage(other.to_string()),
    }
}
