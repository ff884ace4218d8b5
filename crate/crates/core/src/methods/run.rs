use thiserror::Error;

use super::{MethodConfig, MethodError, MethodState, Stepper};
use crate::numkit::Vector;
use crate::problems::ObjectiveOracle;
use crate::scalar::Scalar;

/// Everything certificates need about iteration `k`. `z_next` is `z_{k+1}`,
/// computed from iteration `k` alone so the final row is complete too.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub k: usize,
    pub x: Vector<T>,
    pub y: Vector<T>,
    pub z: Vector<T>,
    pub z_next: Vector<T>,
    pub grad_x: Vector<T>,
    pub f_x: T,
    pub f_y: T,
    pub x_tilde: Option<Vector<T>>,
    pub grad_xtilde: Option<Vector<T>>,
    pub f_xtilde: Option<T>,
}

/// Rows `k = 0, 1, …, iters` of one run.
#[derive(Debug, Clone)]
pub struct Trace<T: Scalar> {
    pub config: MethodConfig<T>,
    pub oracle: ObjectiveOracle<T>,
    pub rows: Vec<Snapshot<T>>,
}

impl<T: Scalar> Trace<T> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn x0(&self) -> Option<&Vector<T>> {
        self.rows.first().map(|r| &r.x)
    }
}

/// A failed run with the rows recorded before the failure.
#[derive(Debug, Clone, Error)]
#[error("{source}")]
pub struct RunError<T: Scalar> {
    pub source: MethodError,
    pub trace: Option<Trace<T>>,
}

impl<T: Scalar> From<MethodError> for RunError<T> {
    fn from(source: MethodError) -> Self {
        Self { source, trace: None }
    }
}

pub fn run<T: Scalar>(
    config: MethodConfig<T>,
    oracle: &ObjectiveOracle<T>,
    x0: &Vector<T>,
    iters: usize,
) -> Result<Trace<T>, RunError<T>> {
    run_with(config, oracle, x0, iters, |_| {})
}

/// Runs `iters ≥ 1` steps, calling `recorder` on every row as it is built.
pub fn run_with<T: Scalar>(
    config: MethodConfig<T>,
    oracle: &ObjectiveOracle<T>,
    x0: &Vector<T>,
    iters: usize,
    mut recorder: impl FnMut(&Snapshot<T>),
) -> Result<Trace<T>, RunError<T>> {
    if iters == 0 {
        return Err(MethodError::Usage("iterations must be ≥ 1".into()).into());
    }
    let stepper = Stepper::new(config.clone(), oracle, iters)?;
    let mut state = stepper.init(x0)?;
    let mut trace = Trace {
        config,
        oracle: oracle.clone(),
        rows: Vec::with_capacity(iters + 1),
    };
    let fail = |source: MethodError, trace: Trace<T>| RunError {
        source,
        trace: Some(trace),
    };
    loop {
        let proposal = match stepper.propose(&state) {
            Ok(p) => p,
            Err(e) => return Err(fail(e, trace)),
        };
        let row = match snapshot(&state, &proposal.z, oracle) {
            Ok(r) => r,
            Err(e) => return Err(fail(e, trace)),
        };
        recorder(&row);
        trace.rows.push(row);
        if state.k == iters {
            return Ok(trace);
        }
        if let Err(e) = stepper.advance(&mut state, proposal) {
            return Err(fail(e, trace));
        }
    }
}

fn snapshot<T: Scalar>(
    s: &MethodState<T>,
    z_next: &Vector<T>,
    oracle: &ObjectiveOracle<T>,
) -> Result<Snapshot<T>, MethodError> {
    let f_x = oracle.value(&s.x)?;
    let f_y = oracle.value(&s.y)?;
    let (grad_xtilde, f_xtilde) = match &s.x_tilde {
        Some(xt) => (Some(oracle.gradient(xt)?), Some(oracle.value(xt)?)),
        None => (None, None),
    };
    if !(f_x.is_finite() && f_y.is_finite() && f_xtilde.is_none_or(|v| v.is_finite())) {
        return Err(MethodError::Divergence { k: s.k });
    }
    Ok(Snapshot {
        k: s.k,
        x: s.x.clone(),
        y: s.y.clone(),
        z: s.z.clone(),
        z_next: z_next.clone(),
        grad_x: s.grad_x.clone(),
        f_x,
        f_y,
        x_tilde: s.x_tilde.clone(),
        grad_xtilde,
        f_xtilde,
    })
}
