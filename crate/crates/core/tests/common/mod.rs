#![allow(dead_code)]

use lwfr::equations::{transform_to_contravariant, Equation};
use lwfr::{Basis1D, BoundaryConditions, CurvilinearMesh, Domain, Geometry, LwfrSolver, NodalField};

/// Inviscid scalar `u_t + div (u^2/2, u^2/2) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Burgers;

impl Equation for Burgers {
    fn nvar(&self) -> usize {
        1
    }

    fn is_viscous(&self) -> bool {
        false
    }

    fn advective_flux(&self, u: &[f64], flux: &mut [f64]) {
        let f = 0.5 * u[0] * u[0];
        flux[0] = f;
        flux[1] = f;
    }

    fn viscous_flux(&self, _u: &[f64], _grad: &[f64], flux: &mut [f64]) {
        flux[..2].fill(0.0);
    }

    fn wave_speed(&self, l: &[f64], r: &[f64], n: [f64; 2]) -> f64 {
        l[0].abs().max(r[0].abs()) * (n[0] + n[1]).abs()
    }

    fn max_directional_speed(&self, u: &[f64]) -> f64 {
        2.0 * u[0].abs()
    }

    fn diffusion_scale(&self, _u: &[f64]) -> f64 {
        0.0
    }

    fn check_state(&self, u: &[f64]) -> Result<(), &'static str> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err("non-finite value")
        }
    }
}

/// Contravariant advective flux of one element, `[(node * nvar + c) * 2 + d]`.
pub fn contravariant_flux<E: Equation>(eq: &E, ue: &[f64], metric: &[[f64; 4]]) -> Vec<f64> {
    let nvar = eq.nvar();
    let mut out = vec![0.0; 2 * ue.len()];
    let mut f = vec![0.0; 2 * nvar];
    for (p, m) in metric.iter().enumerate() {
        eq.advective_flux(&ue[p * nvar..(p + 1) * nvar], &mut f);
        transform_to_contravariant(&f, *m, &mut out[2 * p * nvar..2 * (p + 1) * nvar]);
    }
    out
}

/// Element-local right-hand side `-(1/J) div_xi F(u)` without interface terms.
fn local_rhs<E: Equation>(eq: &E, basis: &Basis1D, ue: &[f64], metric: &[[f64; 4]], jac: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let nvar = eq.nvar();
    let n = basis.len();
    let flux = contravariant_flux(eq, ue, metric);
    let mut rhs = vec![0.0; ue.len()];
    for j in 0..n {
        for i in 0..n {
            for c in 0..nvar {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += basis.d(i, l) * flux[((j * n + l) * nvar + c) * 2]
                        + basis.d(j, l) * flux[((l * n + i) * nvar + c) * 2 + 1];
                }
                rhs[(j * n + i) * nvar + c] = -acc / jac[j * n + i];
            }
        }
    }
    (rhs, flux)
}

/// `(1/dt) int_0^dt F(u(s)) ds` for the element-local Cauchy problem, by
/// classical RK4 on the state augmented with the flux integral.
pub fn reference_time_average<E: Equation>(
    eq: &E,
    basis: &Basis1D,
    geometry: &Geometry,
    u: &NodalField,
    dt: f64,
    substeps: usize,
) -> Vec<Vec<f64>> {
    let h = dt / substeps as f64;
    (0..u.n_elements())
        .map(|e| {
            let metric = geometry.element_metric(e);
            let jac = geometry.element_jacobian(e);
            let mut ue = u.element(e).to_vec();
            let mut integral = vec![0.0; 2 * ue.len()];
            let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
            for _ in 0..substeps {
                let (k1, f1) = local_rhs(eq, basis, &ue, metric, jac);
                let (k2, f2) = local_rhs(eq, basis, &axpy(&ue, 0.5 * h, &k1), metric, jac);
                let (k3, f3) = local_rhs(eq, basis, &axpy(&ue, 0.5 * h, &k2), metric, jac);
                let (k4, f4) = local_rhs(eq, basis, &axpy(&ue, h, &k3), metric, jac);
                for i in 0..ue.len() {
                    ue[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                for i in 0..integral.len() {
                    integral[i] += h / 6.0 * (f1[i] + 2.0 * f2[i] + 2.0 * f3[i] + f4[i]);
                }
            }
            integral.iter().map(|v| v / dt).collect()
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Burgers on a warped, periodic 2x2 mesh of `[-1, 1]^2`.
pub fn burgers_solver(degree: usize) -> LwfrSolver<Burgers> {
    let b = Basis1D::gll(degree).unwrap();
    let m = CurvilinearMesh::warped(2, 2, Domain::new(-1.0, 1.0, -1.0, 1.0), 0.05, [true; 2], &b).unwrap();
    LwfrSolver::new(Burgers, m, b, BoundaryConditions::periodic(), None).unwrap()
}

/// Max nodal difference between the time-averaged advective flux and the
/// reference average of the local Cauchy problem, for a smooth initial state.
pub fn time_average_error(s: &LwfrSolver<Burgers>, dt: f64) -> f64 {
    use std::f64::consts::PI;
    let u = s.project(|x, y, o| o[0] = 1.0 + 0.3 * (PI * (x + 0.3)).sin() * (PI * (y - 0.2)).cos());
    let tav = s.time_averaged_data(&u, 0.0, dt).unwrap();
    let reference = reference_time_average(s.equation(), s.basis(), s.geometry(), &u, dt, 64);
    reference
        .iter()
        .enumerate()
        .flat_map(|(e, r)| tav.advective(e).iter().zip(r).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}
