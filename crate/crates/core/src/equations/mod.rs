//! Conservative systems `u_t + div f^a(u) = div f^v(u, grad u)`.
//!
//! Fluxes and gradients are `p x 2` matrices stored row-major per component:
//! entry `(c, d)` lives at index `2 * c + d`.

mod advdiff;
pub mod manufactured;
mod navier_stokes;

pub use advdiff::{AdvDiffParams, AdvectionDiffusion};
pub use navier_stokes::{NavierStokes, NavierStokesParams};

/// Maximum number of solution components of any implemented system.
pub const MAX_NVAR: usize = 4;

/// Wall description used by the no-slip boundary treatments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    /// Tangential wall velocity; its normal component must vanish.
    pub velocity: [f64; 2],
    /// `Some(T)` for an isothermal wall, `None` for an adiabatic one.
    pub temperature: Option<f64>,
}

/// Uniform contract for the equation systems the solver can advance.
pub trait Equation: Send + Sync {
    /// Number of solution components `p`.
    fn nvar(&self) -> usize;

    /// Whether a viscous flux is present at all.
    fn is_viscous(&self) -> bool;

    /// True when both fluxes are linear in `(u, grad u)`.
    ///
    /// Linear systems let the time-derivative stencils collapse to a single
    /// flux evaluation per level.
    fn is_linear(&self) -> bool {
        false
    }

    fn advective_flux(&self, u: &[f64], flux: &mut [f64]);

    fn viscous_flux(&self, u: &[f64], grad: &[f64], flux: &mut [f64]);

    /// Local speed estimate at an interface with unit normal `normal`.
    fn wave_speed(&self, u_left: &[f64], u_right: &[f64], normal: [f64; 2]) -> f64;

    /// Sum over the physical axes of the directional signal speeds at `u`.
    fn max_directional_speed(&self, u: &[f64]) -> f64;

    /// Diffusivity scale used by the viscous time-step limit.
    fn diffusion_scale(&self, u: &[f64]) -> f64;

    /// `Err(reason)` if `u` is outside the admissible set.
    fn check_state(&self, u: &[f64]) -> Result<(), &'static str>;

    fn supports_walls(&self) -> bool {
        false
    }

    /// The prescribed wall state that replaces the interface value in the gradient solve.
    fn wall_state(&self, inner: &[f64], wall: &Wall, out: &mut [f64]) {
        let _ = wall;
        out.copy_from_slice(inner);
    }

    /// Mirror map `u -> u'` whose interface average carries the wall velocity.
    ///
    /// Affine in `u`, so it applies to time-averaged states as well.
    fn wall_mirror_state(&self, inner: &[f64], wall: &Wall, out: &mut [f64]) {
        let _ = wall;
        out.copy_from_slice(inner);
    }

    /// Normal advective flux of the mirrored state, expressed through the
    /// inner normal flux. Linear in the flux, so it commutes with time averaging.
    fn wall_mirror_flux(&self, inner_flux: &[f64], wall: &Wall, out: &mut [f64]) {
        let _ = wall;
        out.copy_from_slice(inner_flux);
    }

    /// Outer viscous normal flux at a wall, given the inner one.
    fn wall_viscous_flux(&self, inner_flux: &[f64], wall: &Wall, out: &mut [f64]) {
        let _ = wall;
        out.copy_from_slice(inner_flux);
    }
}

/// Contracts a physical flux with a metric vector: `out_c = ja . f_c`.
#[inline]
pub fn contract(flux: &[f64], ja: [f64; 2], out: &mut [f64]) {
    for (c, o) in out.iter_mut().enumerate() {
        *o = ja[0] * flux[2 * c] + ja[1] * flux[2 * c + 1];
    }
}

/// Contravariant flux `(Ja^1 . f, Ja^2 . f)`, laid out like a physical flux.
pub fn transform_to_contravariant(flux: &[f64], metric: [f64; 4], out: &mut [f64]) {
    let nvar = flux.len() / 2;
    for c in 0..nvar {
        let fx = flux[2 * c];
        let fy = flux[2 * c + 1];
        out[2 * c] = metric[0] * fx + metric[1] * fy;
        out[2 * c + 1] = metric[2] * fx + metric[3] * fy;
    }
}
