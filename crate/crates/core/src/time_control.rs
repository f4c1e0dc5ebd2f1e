//! Error-based step-size control and the fixed-CFL step.

use rayon::prelude::*;

use crate::basis::Basis1D;
use crate::equations::Equation;
use crate::error::{LwfrError, Result};
use crate::field::NodalField;
use crate::mesh::Geometry;

/// Errors are floored here before entering the controller.
pub const ERROR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// `(beta1, beta2, beta3)` acting on the current and the two previous errors.
    pub gains: [f64; 3],
    /// Order parameter `k` dividing the gains.
    pub order: f64,
    /// Apply `kappa(x) = 1 + atan(x - 1)` to the step factor.
    pub limiter: bool,
    pub max_rejections: usize,
    /// Upper bound on the step factor after a rejection. With `beta1 < 1` the
    /// retried error otherwise creeps towards 1 from above.
    pub reject_factor: f64,
}

impl ControllerParams {
    /// Defaults for a degree-`N` scheme: tolerances `1e-8`, gains `(0.6, -0.2, 0)`, `k = N + 1`.
    pub fn for_degree(degree: usize) -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            gains: [0.6, -0.2, 0.0],
            order: degree as f64 + 1.0,
            limiter: true,
            max_rejections: 10,
            reject_factor: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    pub params: ControllerParams,
    pub dt: f64,
    /// `(eps_n, eps_{n-1})` of the last two accepted steps.
    pub history: [f64; 2],
    pub accepted: usize,
    pub rejected: usize,
    consecutive_rejects: usize,
}

impl ControllerState {
    pub fn new(params: ControllerParams, dt: f64) -> Self {
        Self {
            params,
            dt,
            history: [1.0, 1.0],
            accepted: 0,
            rejected: 0,
            consecutive_rejects: 0,
        }
    }

    /// Registers a step that could not be evaluated at all and halves `dt`.
    pub fn reject_failed_step(&mut self) -> Result<()> {
        self.dt *= 0.5;
        self.count_reject()
    }

    fn count_reject(&mut self) -> Result<()> {
        self.rejected += 1;
        self.consecutive_rejects += 1;
        if self.consecutive_rejects >= self.params.max_rejections {
            return Err(LwfrError::StepControl(format!(
                "{} consecutive rejected steps, last dt = {:.3e}",
                self.consecutive_rejects, self.dt
            )));
        }
        Ok(())
    }
}

/// `1 + atan(x - 1)`: smooth, equals one at one, bounded by `1 + pi/2`.
pub fn limiter(x: f64) -> f64 {
    1.0 + (x - 1.0).atan()
}

/// Weighted RMS of `high - low` in units of the mixed tolerance.
///
/// `e = sqrt( sum wJ |d|^2 / s^2 / (nvar sum wJ) )` with the componentwise scale
/// `s = abs_tol + rel_tol * max(|prev|, |high|)`.
pub fn embedded_error_estimate(
    high: &NodalField,
    low: &NodalField,
    prev: &NodalField,
    geometry: &Geometry,
    basis: &Basis1D,
    abs_tol: f64,
    rel_tol: f64,
) -> f64 {
    let n = basis.len();
    let nn = n * n;
    let nvar = high.nvar();
    let w = basis.weights();
    let parts: Vec<(f64, f64)> = (0..high.n_elements())
        .into_par_iter()
        .map(|e| {
            let (h, l, p) = (high.element(e), low.element(e), prev.element(e));
            let jac = geometry.element_jacobian(e);
            let (mut num, mut den) = (0.0, 0.0);
            for node in 0..nn {
                let wj = w[node % n] * w[node / n] * jac[node];
                let mut sum = 0.0;
                for c in 0..nvar {
                    let i = node * nvar + c;
                    let s = abs_tol + rel_tol * p[i].abs().max(h[i].abs());
                    let d = (h[i] - l[i]) / s;
                    sum += d * d;
                }
                num += wj * sum;
                den += wj;
            }
            (num, den)
        })
        .collect();
    let (num, den) = parts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let e = (num / (den * nvar as f64)).sqrt();
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

/// Accept/reject decision and the next step size.
///
/// Updates `ctrl.dt`, the counters, and on acceptance the error history.
pub fn propose_step(ctrl: &mut ControllerState, e: f64) -> Result<(bool, f64)> {
    let p = ctrl.params;
    let accept = e <= 1.0;
    let e = e.max(ERROR_FLOOR);
    let [b1, b2, b3] = p.gains;
    let k = p.order;
    let raw = (1.0 / e).powf(b1 / k)
        * (1.0 / ctrl.history[0]).powf(b2 / k)
        * (1.0 / ctrl.history[1]).powf(b3 / k);
    let factor = if p.limiter { limiter(raw) } else { raw };
    let factor = if factor.is_finite() { factor } else { 0.5 };
    let factor = if accept { factor } else { factor.min(p.reject_factor) };
    ctrl.dt *= factor;
    if accept {
        ctrl.history = [e, ctrl.history[0]];
        ctrl.accepted += 1;
        ctrl.consecutive_rejects = 0;
    } else {
        ctrl.count_reject()?;
    }
    Ok((accept, ctrl.dt))
}

/// Stable explicit step estimate.
///
/// `dt = min over nodes of [cfl_a h / ((2N+1) lambda), cfl_v h^2 / ((2N+1)^2 nu)]`
/// with `h = sqrt(J)`; terms with zero speed or diffusivity are skipped.
pub fn fixed_cfl_step<E: Equation>(
    u: &NodalField,
    geometry: &Geometry,
    eq: &E,
    degree: usize,
    cfl_a: f64,
    cfl_v: f64,
) -> f64 {
    let nvar = u.nvar();
    let m = (2 * degree + 1) as f64;
    u.data()
        .chunks_exact(nvar)
        .zip(geometry.jacobian())
        .map(|(s, j)| {
            let h = j.sqrt();
            let lam = eq.max_directional_speed(s);
            let nu = eq.diffusion_scale(s);
            let da = if lam > 0.0 { cfl_a * h / (m * lam) } else { f64::INFINITY };
            let dv = if nu > 0.0 && eq.is_viscous() {
                cfl_v * h * h / (m * m * nu)
            } else {
                f64::INFINITY
            };
            da.min(dv)
        })
        .fold(f64::INFINITY, f64::min)
}
