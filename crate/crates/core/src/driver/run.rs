//! Time integration loop shared by the CLI, the examples and the tests.

use crate::boundary::StateFn;
use crate::equations::{Equation, MAX_NVAR};
use crate::error::{LwfrError, Result};
use crate::field::NodalField;
use crate::solver::LwfrSolver;
use crate::time_control::{embedded_error_estimate, fixed_cfl_step, propose_step, ControllerParams, ControllerState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMode {
    /// Step size from [`fixed_cfl_step`] at every step.
    Fixed { cfl_advective: f64, cfl_viscous: f64 },
    /// Error-based control with the embedded estimate.
    Adaptive {
        controller: ControllerParams,
        /// Safety factor of the initial fixed-CFL step.
        initial_safety: f64,
        /// Steps never exceed `max_cfl` times the fixed-CFL step with unit factors.
        max_cfl: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeConfig {
    pub final_time: f64,
    pub mode: TimeMode,
    /// Stop after this many accepted steps even before `final_time`.
    pub max_steps: Option<usize>,
}

impl TimeConfig {
    pub fn fixed(final_time: f64, cfl_advective: f64, cfl_viscous: f64) -> Self {
        Self {
            final_time,
            mode: TimeMode::Fixed {
                cfl_advective,
                cfl_viscous,
            },
            max_steps: None,
        }
    }

    pub fn adaptive(final_time: f64, controller: ControllerParams) -> Self {
        Self {
            final_time,
            mode: TimeMode::Adaptive {
                controller,
                initial_safety: 0.5,
                max_cfl: 1.0,
            },
            max_steps: None,
        }
    }
}

/// One attempted step, as written to `steps.log`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Number of accepted steps so far, including this one if accepted.
    pub step: usize,
    /// Time after the step if accepted, else the unchanged time.
    pub time: f64,
    pub dt: f64,
    pub error: f64,
    pub accepted: bool,
}

impl StepRecord {
    /// `step n t dt e accepted`.
    pub fn log_line(&self) -> String {
        format!(
            "step {} {:.16e} {:.16e} {:.6e} {}",
            self.step,
            self.time,
            self.dt,
            self.error,
            u8::from(self.accepted)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub final_time: f64,
    pub accepted: usize,
    pub rejected: usize,
    /// Largest error estimate among accepted steps.
    pub max_accepted_error: f64,
}

/// Advances `u0` to `time.final_time`, calling `observe` after every attempt.
///
/// The last step is clipped so the final time is hit exactly.
pub fn integrate<E: Equation>(
    solver: &LwfrSolver<E>,
    u0: &NodalField,
    time: &TimeConfig,
    mut observe: impl FnMut(&StepRecord, &NodalField) -> Result<()>,
) -> Result<(NodalField, RunStats)> {
    let mut u = u0.clone();
    let mut t = 0.0;
    let t_end = time.final_time;
    let mut stats = RunStats {
        final_time: 0.0,
        accepted: 0,
        rejected: 0,
        max_accepted_error: 0.0,
    };
    let degree = solver.degree();
    let geometry = solver.geometry();
    let eq = solver.equation();
    let abort = |t: f64, e: LwfrError| LwfrError::Aborted {
        time: t,
        source: Box::new(e),
    };

    let mut ctrl = match time.mode {
        TimeMode::Adaptive {
            controller,
            initial_safety,
            ..
        } => Some(ControllerState::new(
            controller,
            fixed_cfl_step(&u, geometry, eq, degree, initial_safety, initial_safety),
        )),
        TimeMode::Fixed { .. } => None,
    };
    let log_params = ControllerParams::for_degree(degree);

    while t < t_end && time.max_steps.is_none_or(|m| stats.accepted < m) {
        let remaining = t_end - t;
        let dt = match (&mut ctrl, time.mode) {
            (
                _,
                TimeMode::Fixed {
                    cfl_advective,
                    cfl_viscous,
                },
            ) => fixed_cfl_step(&u, geometry, eq, degree, cfl_advective, cfl_viscous),
            (Some(c), TimeMode::Adaptive { max_cfl, .. }) => {
                let cap = max_cfl * fixed_cfl_step(&u, geometry, eq, degree, 1.0, 1.0);
                c.dt = c.dt.min(cap);
                c.dt
            }
            (None, _) => unreachable!(),
        };
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(abort(t, LwfrError::StepControl(format!("invalid step size {dt:e}"))));
        }
        // clip so that the last step lands on t_end; absorb round-off slivers
        let last = dt >= remaining * (1.0 - 1e-12);
        let dt = if last { remaining } else { dt };
        if t + dt == t {
            return Err(abort(t, LwfrError::StepControl(format!("step size {dt:e} no longer advances t"))));
        }

        let out = match solver.take_step(&u, t, dt) {
            Ok(out) => out,
            Err(err @ LwfrError::State { .. }) => match &mut ctrl {
                Some(c) => {
                    c.dt = dt;
                    stats.rejected += 1;
                    c.reject_failed_step().map_err(|e| abort(t, e))?;
                    let rec = StepRecord {
                        step: stats.accepted,
                        time: t,
                        dt,
                        error: f64::INFINITY,
                        accepted: false,
                    };
                    observe(&rec, &u)?;
                    continue;
                }
                None => return Err(abort(t, err)),
            },
            Err(err) => return Err(abort(t, err)),
        };

        let (tol_a, tol_r) = match &ctrl {
            Some(c) => (c.params.abs_tol, c.params.rel_tol),
            None => (log_params.abs_tol, log_params.rel_tol),
        };
        let e = embedded_error_estimate(&out.solution, &out.embedded, &u, geometry, solver.basis(), tol_a, tol_r);
        let accepted = match &mut ctrl {
            Some(c) => {
                c.dt = dt;
                let (acc, _) = propose_step(c, e).map_err(|err| abort(t, err))?;
                acc
            }
            None => true,
        };
        if accepted {
            u = out.solution;
            t = if last { t_end } else { t + dt };
            stats.accepted += 1;
            stats.max_accepted_error = stats.max_accepted_error.max(e);
        } else {
            stats.rejected += 1;
        }
        let rec = StepRecord {
            step: stats.accepted,
            time: t,
            dt,
            error: e,
            accepted,
        };
        observe(&rec, &u)?;
    }
    stats.final_time = t;
    Ok((u, stats))
}

/// Domain-normalized L2 error per component:
/// `sqrt( sum wJ |u - u_exact|^2 / sum wJ )`.
pub fn compute_error_norm<E: Equation>(solver: &LwfrSolver<E>, u: &NodalField, exact: &StateFn, t: f64) -> Vec<f64> {
    let nvar = u.nvar();
    let basis = solver.basis();
    let n = basis.len();
    let nn = n * n;
    let w = basis.weights();
    let jac = solver.geometry().jacobian();
    let mut num = vec![0.0; nvar];
    let mut den = 0.0;
    let mut ex = [0.0; MAX_NVAR];
    for (k, (xy, val)) in solver.mesh().coords().iter().zip(u.data().chunks_exact(nvar)).enumerate() {
        let node = k % nn;
        let wj = w[node % n] * w[node / n] * jac[k];
        exact(xy[0], xy[1], t, &mut ex[..nvar]);
        for c in 0..nvar {
            let d = val[c] - ex[c];
            num[c] += wj * d * d;
        }
        den += wj;
    }
    num.iter().map(|s| (s / den).sqrt()).collect()
}
