use super::{Equation, Wall};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavierStokesParams {
    pub gamma: f64,
    pub mu: f64,
    pub prandtl: f64,
}

impl Default for NavierStokesParams {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            mu: 1e-3,
            prandtl: 0.72,
        }
    }
}

/// Compressible Navier-Stokes in conservative variables `(rho, rho v1, rho v2, E)`.
///
/// Temperature is normalized as `T = p / rho`, so the heat conductivity is
/// `kappa = mu gamma / (Pr (gamma - 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavierStokes {
    pub params: NavierStokesParams,
}

impl NavierStokes {
    pub fn new(gamma: f64, mu: f64, prandtl: f64) -> Self {
        assert!(gamma > 1.0 && mu >= 0.0 && prandtl > 0.0);
        Self {
            params: NavierStokesParams { gamma, mu, prandtl },
        }
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn conductivity(&self) -> f64 {
        let p = &self.params;
        p.mu * p.gamma / (p.prandtl * (p.gamma - 1.0))
    }

    #[inline]
    pub fn pressure(&self, u: &[f64]) -> f64 {
        (self.params.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }

    pub fn sound_speed(&self, u: &[f64]) -> f64 {
        (self.params.gamma * self.pressure(u) / u[0]).sqrt()
    }

    /// `(rho, v1, v2, p)` from conservative variables.
    pub fn to_primitive(&self, u: &[f64]) -> [f64; 4] {
        [u[0], u[1] / u[0], u[2] / u[0], self.pressure(u)]
    }

    pub fn to_conservative(&self, prim: [f64; 4]) -> [f64; 4] {
        let [rho, v1, v2, p] = prim;
        [
            rho,
            rho * v1,
            rho * v2,
            p / (self.params.gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2),
        ]
    }
}

impl Equation for NavierStokes {
    fn nvar(&self) -> usize {
        4
    }

    fn is_viscous(&self) -> bool {
        self.params.mu > 0.0
    }

    #[inline]
    fn advective_flux(&self, u: &[f64], f: &mut [f64]) {
        let rho = u[0];
        let (m1, m2, e) = (u[1], u[2], u[3]);
        let v1 = m1 / rho;
        let v2 = m2 / rho;
        let p = (self.params.gamma - 1.0) * (e - 0.5 * (m1 * v1 + m2 * v2));
        f[0] = m1;
        f[1] = m2;
        f[2] = m1 * v1 + p;
        f[3] = m1 * v2;
        f[4] = m2 * v1;
        f[5] = m2 * v2 + p;
        f[6] = (e + p) * v1;
        f[7] = (e + p) * v2;
    }

    #[inline]
    fn viscous_flux(&self, u: &[f64], g: &[f64], f: &mut [f64]) {
        let NavierStokesParams { gamma, mu, .. } = self.params;
        let kappa = self.conductivity();
        let rho = u[0];
        let inv_rho = 1.0 / rho;
        let v1 = u[1] * inv_rho;
        let v2 = u[2] * inv_rho;
        let p = (gamma - 1.0) * (u[3] - 0.5 * (u[1] * v1 + u[2] * v2));
        let t = p * inv_rho;
        let vsq = v1 * v1 + v2 * v2;

        let mut dv1 = [0.0; 2];
        let mut dv2 = [0.0; 2];
        let mut dt = [0.0; 2];
        for d in 0..2 {
            let drho = g[d];
            let dm1 = g[2 + d];
            let dm2 = g[4 + d];
            let de = g[6 + d];
            dv1[d] = (dm1 - v1 * drho) * inv_rho;
            dv2[d] = (dm2 - v2 * drho) * inv_rho;
            let dp = (gamma - 1.0) * (de - v1 * dm1 - v2 * dm2 + 0.5 * vsq * drho);
            dt[d] = (dp - t * drho) * inv_rho;
        }
        let div = dv1[0] + dv2[1];
        let txx = mu * (2.0 * dv1[0] - 2.0 / 3.0 * div);
        let tyy = mu * (2.0 * dv2[1] - 2.0 / 3.0 * div);
        let txy = mu * (dv1[1] + dv2[0]);
        f[0] = 0.0;
        f[1] = 0.0;
        f[2] = txx;
        f[3] = txy;
        f[4] = txy;
        f[5] = tyy;
        f[6] = v1 * txx + v2 * txy + kappa * dt[0];
        f[7] = v1 * txy + v2 * tyy + kappa * dt[1];
    }

    fn wave_speed(&self, ul: &[f64], ur: &[f64], n: [f64; 2]) -> f64 {
        let speed = |u: &[f64]| {
            let vn = (u[1] * n[0] + u[2] * n[1]) / u[0];
            vn.abs() + self.sound_speed(u)
        };
        speed(ul).max(speed(ur))
    }

    fn max_directional_speed(&self, u: &[f64]) -> f64 {
        let c = self.sound_speed(u);
        (u[1] / u[0]).abs() + (u[2] / u[0]).abs() + 2.0 * c
    }

    fn diffusion_scale(&self, u: &[f64]) -> f64 {
        let p = &self.params;
        p.mu * (4.0f64 / 3.0).max(p.gamma / p.prandtl) / u[0]
    }

    fn check_state(&self, u: &[f64]) -> Result<(), &'static str> {
        if !u.iter().all(|v| v.is_finite()) {
            return Err("non-finite value");
        }
        if u[0] <= 0.0 {
            return Err("non-positive density");
        }
        if self.pressure(u) <= 0.0 {
            return Err("non-positive pressure");
        }
        Ok(())
    }

    fn supports_walls(&self) -> bool {
        true
    }

    fn wall_state(&self, inner: &[f64], wall: &Wall, out: &mut [f64]) {
        let rho = inner[0];
        let [w1, w2] = wall.velocity;
        let internal = match wall.temperature {
            Some(t) => rho * t / (self.params.gamma - 1.0),
            None => self.pressure(inner) / (self.params.gamma - 1.0),
        };
        out[0] = rho;
        out[1] = rho * w1;
        out[2] = rho * w2;
        out[3] = internal + 0.5 * rho * (w1 * w1 + w2 * w2);
    }

    fn wall_mirror_state(&self, inner: &[f64], wall: &Wall, out: &mut [f64]) {
        let rho = inner[0];
        let [w1, w2] = wall.velocity;
        out[0] = rho;
        out[1] = 2.0 * rho * w1 - inner[1];
        out[2] = 2.0 * rho * w2 - inner[2];
        out[3] = inner[3] + 2.0 * rho * (w1 * w1 + w2 * w2) - 2.0 * (w1 * inner[1] + w2 * inner[2]);
    }

    fn wall_mirror_flux(&self, f: &[f64], wall: &Wall, out: &mut [f64]) {
        // Valid for tangential wall velocity (w . n = 0).
        let [w1, w2] = wall.velocity;
        out[0] = -f[0];
        out[1] = f[1] - 2.0 * w1 * f[0];
        out[2] = f[2] - 2.0 * w2 * f[0];
        out[3] = -f[3] - 2.0 * (w1 * w1 + w2 * w2) * f[0] + 2.0 * (w1 * f[1] + w2 * f[2]);
    }

    fn wall_viscous_flux(&self, f: &[f64], wall: &Wall, out: &mut [f64]) {
        out.copy_from_slice(f);
        if wall.temperature.is_none() {
            // zero heat flux: the averaged energy flux is the wall work only
            let work = wall.velocity[0] * f[1] + wall.velocity[1] * f[2];
            out[3] = 2.0 * work - f[3];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn ns() -> NavierStokes {
        NavierStokes::new(1.4, 0.01, 0.72)
    }

    fn random_state(eq: &NavierStokes, rng: &mut impl Rng) -> [f64; 4] {
        eq.to_conservative([
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.5..2.0),
        ])
    }

    #[test]
    fn constant_state_has_no_viscous_flux() {
        let eq = ns();
        let u = eq.to_conservative([1.2, 0.3, -0.4, 0.9]);
        let mut f = [1.0; 8];
        eq.viscous_flux(&u, &[0.0; 8], &mut f);
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn stagnant_gas_pressure_flux() {
        let eq = ns();
        let p = 0.7;
        let u = [1.0, 0.0, 0.0, p / 0.4];
        let mut f = [0.0; 8];
        eq.advective_flux(&u, &mut f);
        // columns x: (0, p, 0, 0), y: (0, 0, p, 0)
        let fx = [f[0], f[2], f[4], f[6]];
        let fy = [f[1], f[3], f[5], f[7]];
        for (a, e) in fx.iter().zip([0.0, p, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-15);
        }
        for (a, e) in fy.iter().zip([0.0, 0.0, p, 0.0]) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn shear_stress() {
        let eq = ns();
        // v = (y, 0) at y = 0.3, rho = 1: grad(rho v1) = (0, 1)
        let u = eq.to_conservative([1.0, 0.3, 0.0, 1.0]);
        let p = 1.0;
        // grad E with constant p and rho: d/dy (0.5 v1^2) = v1
        let g = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.3];
        let mut f = [0.0; 8];
        eq.viscous_flux(&u, &g, &mut f);
        assert_abs_diff_eq!(f[2], 0.0, epsilon = 1e-15); // tau_11
        assert_abs_diff_eq!(f[5], 0.0, epsilon = 1e-15); // tau_22
        assert_abs_diff_eq!(f[3], 0.01, epsilon = 1e-15); // tau_12
        assert_abs_diff_eq!(f[4], 0.01, epsilon = 1e-15);
        let _ = p;
    }

    #[test]
    fn unit_sound_speed() {
        let eq = ns();
        let u = eq.to_conservative([1.0, 0.0, 0.0, 1.0 / 1.4]);
        assert_abs_diff_eq!(eq.wave_speed(&u, &u, [0.6, 0.8]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn wave_speed_is_symmetric() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_state(&eq, &mut rng);
            let b = random_state(&eq, &mut rng);
            let th: f64 = rng.gen_range(0.0..6.3);
            let n = [th.cos(), th.sin()];
            assert_eq!(eq.wave_speed(&a, &b, n), eq.wave_speed(&b, &a, n));
            assert!(eq.wave_speed(&a, &b, n) >= 0.0);
        }
    }

    #[test]
    fn rotational_invariance() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..100 {
            let u = random_state(&eq, &mut rng);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (c, s) = (th.cos(), th.sin());
            let n = [c, s];
            let mut f = [0.0; 8];
            eq.advective_flux(&u, &mut f);
            let fn_: Vec<f64> = (0..4).map(|k| f[2 * k] * n[0] + f[2 * k + 1] * n[1]).collect();
            // rotate state so n maps to e_x
            let ur = [u[0], c * u[1] + s * u[2], -s * u[1] + c * u[2], u[3]];
            let mut fr = [0.0; 8];
            eq.advective_flux(&ur, &mut fr);
            let back = [fr[0], c * fr[2] - s * fr[4], s * fr[2] + c * fr[4], fr[6]];
            for (a, b) in fn_.iter().zip(back) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn viscous_flux_is_linear_in_gradient() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        for _ in 0..50 {
            let u = random_state(&eq, &mut rng);
            let g1: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g2: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let gc: Vec<f64> = g1.iter().zip(&g2).map(|(x, y)| a * x + b * y).collect();
            let (mut f1, mut f2, mut fc) = ([0.0; 8], [0.0; 8], [0.0; 8]);
            eq.viscous_flux(&u, &g1, &mut f1);
            eq.viscous_flux(&u, &g2, &mut f2);
            eq.viscous_flux(&u, &gc, &mut fc);
            for k in 0..8 {
                assert_abs_diff_eq!(fc[k], a * f1[k] + b * f2[k], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn primitive_round_trip() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let u = random_state(&eq, &mut rng);
            let back = eq.to_conservative(eq.to_primitive(&u));
            for (a, b) in u.iter().zip(back) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn non_physical_states_rejected() {
        let eq = ns();
        assert!(eq.check_state(&[-1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(eq.check_state(&[1.0, 2.0, 0.0, 1.0]).is_err());
        assert!(eq.check_state(&[1.0, f64::NAN, 0.0, 1.0]).is_err());
        assert!(eq.check_state(&[1.0, 0.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn wall_mirror_is_an_involution() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        for temperature in [None, Some(1.3)] {
            for _ in 0..50 {
                let u = random_state(&eq, &mut rng);
                let wall = Wall { velocity: [rng.gen_range(-1.0..1.0), 0.0], temperature };
                let (mut m, mut mm) = ([0.0; 4], [0.0; 4]);
                eq.wall_mirror_state(&u, &wall, &mut m);
                eq.wall_mirror_state(&m, &wall, &mut mm);
                for (a, b) in u.iter().zip(mm) {
                    assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
                }
                let (mut f, mut mf, mut mmf) = ([0.0; 4], [0.0; 4], [0.0; 4]);
                f.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
                eq.wall_mirror_flux(&f, &wall, &mut mf);
                eq.wall_mirror_flux(&mf, &wall, &mut mmf);
                for (a, b) in f.iter().zip(mmf) {
                    assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn mirror_flux_matches_flux_of_mirrored_state() {
        let eq = ns();
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let u = random_state(&eq, &mut rng);
            // horizontal wall (normal e_y) moving tangentially
            let wall = Wall { velocity: [rng.gen_range(-1.0..1.0), 0.0], temperature: None };
            let mut m = [0.0; 4];
            eq.wall_mirror_state(&u, &wall, &mut m);
            let (mut f, mut fm) = ([0.0; 8], [0.0; 8]);
            eq.advective_flux(&u, &mut f);
            eq.advective_flux(&m, &mut fm);
            let fy: Vec<f64> = (0..4).map(|c| f[2 * c + 1]).collect();
            let mut out = [0.0; 4];
            eq.wall_mirror_flux(&fy, &wall, &mut out);
            for c in 0..4 {
                assert_abs_diff_eq!(out[c], fm[2 * c + 1], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn moving_lid_mirror_velocity() {
        let eq = ns();
        let u = eq.to_conservative([1.0, 0.4, 0.0, 1.0]);
        let wall = Wall { velocity: [1.0, 0.0], temperature: Some(1.0) };
        let mut m = [0.0; 4];
        eq.wall_mirror_state(&u, &wall, &mut m);
        assert_abs_diff_eq!(m[1] / m[0], 1.6, epsilon = 1e-15);
        assert_abs_diff_eq!(m[2], 0.0, epsilon = 1e-15);
        // mirrored state keeps the inner thermodynamic state
        assert_abs_diff_eq!(eq.pressure(&m), eq.pressure(&u), epsilon = 1e-14);
    }
}
