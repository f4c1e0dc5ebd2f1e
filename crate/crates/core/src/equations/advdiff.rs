use std::f64::consts::PI;

use super::Equation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvDiffParams {
    pub velocity: [f64; 2],
    pub diffusion: f64,
}

impl Default for AdvDiffParams {
    fn default() -> Self {
        Self {
            velocity: [1.5, 1.0],
            diffusion: 5e-2,
        }
    }
}

/// Scalar `u_t + a . grad u = nu lap u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectionDiffusion {
    pub params: AdvDiffParams,
}

impl AdvectionDiffusion {
    pub fn new(velocity: [f64; 2], diffusion: f64) -> Self {
        assert!(diffusion >= 0.0, "diffusion coefficient must be non-negative");
        Self {
            params: AdvDiffParams {
                velocity,
                diffusion,
            },
        }
    }

    /// `(f^a, f^v)` for a scalar state and gradient.
    pub fn fluxes(&self, u: f64, grad: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let a = self.params.velocity;
        let nu = self.params.diffusion;
        ([a[0] * u, a[1] * u], [nu * grad[0], nu * grad[1]])
    }

    /// Travelling, decaying sine wave on the periodic square `[-1, 1]^2`.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        let a = self.params.velocity;
        let nu = self.params.diffusion;
        1.0 + 0.5 * (-2.0 * nu * PI * PI * t).exp() * (PI * (x - a[0] * t + y - a[1] * t)).sin()
    }
}

impl Equation for AdvectionDiffusion {
    fn nvar(&self) -> usize {
        1
    }

    fn is_viscous(&self) -> bool {
        self.params.diffusion > 0.0
    }

    fn is_linear(&self) -> bool {
        true
    }

    #[inline]
    fn advective_flux(&self, u: &[f64], flux: &mut [f64]) {
        flux[0] = self.params.velocity[0] * u[0];
        flux[1] = self.params.velocity[1] * u[0];
    }

    #[inline]
    fn viscous_flux(&self, _u: &[f64], grad: &[f64], flux: &mut [f64]) {
        flux[0] = self.params.diffusion * grad[0];
        flux[1] = self.params.diffusion * grad[1];
    }

    fn wave_speed(&self, _l: &[f64], _r: &[f64], n: [f64; 2]) -> f64 {
        let a = self.params.velocity;
        (a[0] * n[0] + a[1] * n[1]).abs()
    }

    fn max_directional_speed(&self, _u: &[f64]) -> f64 {
        self.params.velocity[0].abs() + self.params.velocity[1].abs()
    }

    fn diffusion_scale(&self, _u: &[f64]) -> f64 {
        self.params.diffusion
    }

    fn check_state(&self, u: &[f64]) -> Result<(), &'static str> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err("non-finite value")
        }
    }
}
