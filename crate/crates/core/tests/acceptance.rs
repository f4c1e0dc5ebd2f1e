//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL line
//! per criterion; any failure makes the process exit non-zero.
//!
//! `cargo test --release --test acceptance -- 3 5` runs only criteria 3 and 5.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use lwfr::br1::{compute_auxiliary_gradient, interface_values};
use lwfr::driver::{compute_error_norm, integrate, TimeConfig};
use lwfr::equations::manufactured::ManufacturedSolution;
use lwfr::equations::{AdvDiffParams, AdvectionDiffusion, NavierStokesParams};
use lwfr::problems::{advection_diffusion_wave, cavity_params, lid_driven_cavity, navier_stokes_free_stream, navier_stokes_manufactured};
use lwfr::time_control::ControllerParams;
use lwfr::{Basis1D, BoundaryConditions, CurvilinearMesh, Domain, Geometry, LwfrSolver, NodalField};

// pinned tolerances
const EOC_MARGIN: f64 = 0.8;
const CONVERGENCE_CFL: f64 = 0.5;
const FREE_STREAM_TOL: f64 = 1e-12;
const METRIC_IDENTITY_TOL: f64 = 1e-13;
const UPWIND_TOL: f64 = 1e-14;
const TIME_AVERAGE_MARGIN: f64 = 0.9;
/// The gradient error is exactly O(h^N) and its EOC approaches N from below.
const GRADIENT_EOC_ROUNDING: f64 = 0.05;
const CONSERVATION_TOL: f64 = 1e-12;
const CAVITY_STEADY_RATIO: f64 = 1e-4;
const CAVITY_SPEED_BOUND: f64 = 1.05;
// at 1e-8 the lid corners pin the step near 0.2 of the CFL step, ~640k steps to t = 30
const CAVITY_TOL: f64 = 1e-5;
const CAVITY_FINAL_TIME: f64 = 30.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Terminal EOC of the travelling wave for each degree, plus the worst relative
/// drift of the integral of `u` over all runs.
fn wave_study(diffusion: f64) -> (Vec<(usize, Vec<f64>, f64)>, f64) {
    let params = AdvDiffParams {
        velocity: [1.5, 1.0],
        diffusion,
    };
    let mut drift: f64 = 0.0;
    let mut rows = Vec::new();
    for degree in 1..=4 {
        let mut errors = Vec::new();
        for nx in [8, 16, 32, 64] {
            let s = advection_diffusion_wave(params, degree, nx, 0.0).unwrap();
            let time = TimeConfig::fixed(1.0, CONVERGENCE_CFL, CONVERGENCE_CFL);
            let (g, b) = (s.solver.geometry(), s.solver.basis());
            let m0 = s.initial.integral(0, g, b);
            match integrate(&s.solver, &s.initial, &time, |_, _| Ok(())) {
                Ok((u, _)) => {
                    drift = drift.max(((u.integral(0, g, b) - m0) / m0).abs());
                    errors.push(compute_error_norm(&s.solver, &u, s.exact.as_ref().unwrap(), 1.0)[0]);
                }
                Err(_) => {
                    errors.push(f64::NAN);
                    drift = f64::INFINITY;
                }
            }
        }
        let eoc = (errors[2] / errors[3]).log2();
        rows.push((degree, errors, eoc));
    }
    (rows, drift)
}

fn convergence_verdict(rows: &[(usize, Vec<f64>, f64)]) -> Verdict {
    let pass = rows.iter().all(|(n, _, eoc)| *eoc >= *n as f64 + EOC_MARGIN);
    let detail = rows
        .iter()
        .map(|(n, e, eoc)| format!("N={n} err64={:.2e} eoc={eoc:.2}", e[3]))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(pass, format!("{detail} (need >= N+{EOC_MARGIN})"))
}

fn free_stream() -> Verdict {
    let params = NavierStokesParams::default();
    let prim = [1.0, 0.3, -0.2, 1.0];
    let mut worst: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut steps = usize::MAX;
    for degree in [3, 4] {
        let s = navier_stokes_free_stream(params, prim, degree, 8, 0.05).unwrap();
        residual = residual.max(s.solver.geometry().metric_identity_residual(s.solver.basis()));
        let mut time = TimeConfig::adaptive(1e6, ControllerParams::for_degree(degree));
        time.max_steps = Some(100);
        match integrate(&s.solver, &s.initial, &time, |_, _| Ok(())) {
            Ok((u, st)) => {
                worst = worst.max(u.max_abs_diff(&s.initial));
                steps = steps.min(st.accepted);
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    verdict(
        worst <= FREE_STREAM_TOL && residual <= METRIC_IDENTITY_TOL && steps == 100,
        format!("max deviation {worst:.2e} (<= {FREE_STREAM_TOL:e}), metric residual {residual:.2e} (<= {METRIC_IDENTITY_TOL:e}), steps {steps}"),
    )
}

fn upwind_equivalence() -> Verdict {
    let mut rng_state = 0x2545f4914f6cdd1du64;
    let mut rand = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        (rng_state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut worst: f64 = 0.0;
    for degree in 1..=4 {
        let b = Basis1D::gll(degree).unwrap();
        let m = CurvilinearMesh::warped(5, 4, Domain::new(-1.0, 1.0, -1.0, 1.0), 0.06, [true; 2], &b).unwrap();
        let velocity = [rand() * 2.0, rand() * 2.0];
        let eq = AdvectionDiffusion::new(velocity, 0.0);
        let s = LwfrSolver::new(eq, m, b, BoundaryConditions::periodic(), None).unwrap();
        let mut u = NodalField::zeros(1, s.mesh().nodes_per_element(), s.mesh().n_elements());
        u.data_mut().iter_mut().for_each(|v| *v = rand());
        let dt = 0.01;
        let tav = s.time_averaged_data(&u, 0.0, dt).unwrap();
        let fstar = s.interface_fluxes(&u, &tav, 0.0, dt).unwrap();
        let n = degree + 1;
        for (f, face) in s.mesh().faces().iter().enumerate() {
            let (em, ep) = (face.minus.unwrap(), face.plus.unwrap());
            let (ms, ps) = (2 * face.direction + 1, 2 * face.direction);
            for k in 0..n {
                let nm = lwfr::mesh::face_node(n, ms, k);
                let np = lwfr::mesh::face_node(n, ps, k);
                let normal = s.geometry().face_normals(f)[k];
                let an = (velocity[0] * normal[0] + velocity[1] * normal[1]) * s.geometry().face_scale(f)[k];
                for (part, low) in [(0, false), (1, true)] {
                    let pick = |e: usize, node: usize| {
                        let mut v = tav.solution(e)[node];
                        if low {
                            v -= tav.solution_top(e)[node];
                        }
                        v
                    };
                    let upwind = if an >= 0.0 { an * pick(em, nm) } else { an * pick(ep, np) };
                    let got = fstar[f * 2 * n + part * n + k];
                    worst = worst.max((got - upwind).abs());
                }
            }
        }
    }
    verdict(worst <= UPWIND_TOL, format!("max |F* - upwind| = {worst:.2e} (<= {UPWIND_TOL:e})"))
}

fn time_average_order() -> Verdict {
    let dts = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in 1..=3 {
        let s = common::burgers_solver(degree);
        let errs: Vec<f64> = dts.iter().map(|&dt| common::time_average_error(&s, dt)).collect();
        let slope = common::loglog_slope(&dts, &errs);
        pass &= slope >= degree as f64 + TIME_AVERAGE_MARGIN;
        parts.push(format!("N={degree} slope={slope:.2}"));
    }
    verdict(pass, format!("{} (need >= N+{TIME_AVERAGE_MARGIN})", parts.join(", ")))
}

/// Domain-normalized L2 error of the BR1 gradient of a smooth periodic field.
fn gradient_error(degree: usize, nx: usize) -> f64 {
    let b = Basis1D::gll(degree).unwrap();
    let m = CurvilinearMesh::warped(nx, nx, Domain::new(-1.0, 1.0, -1.0, 1.0), 0.05, [true; 2], &b).unwrap();
    let g = Geometry::compute(&m, &b).unwrap();
    let u = NodalField::from_fn(&m, 1, |x, y, o| o[0] = (PI * x).sin() * (PI * y).cos() + 0.5 * (PI * (x + y)).cos());
    let star = interface_values(&u, &m, |_, _, _, _| unreachable!("periodic mesh"));
    let q = compute_auxiliary_gradient(&u, &m, &g, &b, &star);
    let n = b.len();
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (xy, qn)) in m.coords().iter().zip(q.data().chunks(2)).enumerate() {
        let (x, y) = (xy[0], xy[1]);
        let s = -0.5 * PI * (PI * (x + y)).sin();
        let ex = [PI * (PI * x).cos() * (PI * y).cos() + s, -PI * (PI * x).sin() * (PI * y).sin() + s];
        let node = k % (n * n);
        let wj = b.weights()[node % n] * b.weights()[node / n] * g.jacobian()[k];
        num += wj * ((qn[0] - ex[0]).powi(2) + (qn[1] - ex[1]).powi(2));
        den += wj;
    }
    (num / den).sqrt()
}

fn gradient_order() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in [2, 3] {
        let errs: Vec<f64> = [16, 32, 64].iter().map(|&nx| gradient_error(degree, nx)).collect();
        let eoc = (errs[1] / errs[2]).log2();
        pass &= eoc >= degree as f64 - GRADIENT_EOC_ROUNDING;
        parts.push(format!("N={degree} eoc={eoc:.3}"));
    }
    verdict(pass, format!("{} (need >= N-{GRADIENT_EOC_ROUNDING})", parts.join(", ")))
}

fn controller_contract() -> Verdict {
    let run = |tol: f64| {
        let s = advection_diffusion_wave(AdvDiffParams::default(), 3, 16, 0.0).unwrap();
        let mut c = ControllerParams::for_degree(3);
        c.abs_tol = tol;
        c.rel_tol = tol;
        let mut worst_accepted: f64 = 0.0;
        let (u, st) = integrate(&s.solver, &s.initial, &TimeConfig::adaptive(1.0, c), |r, _| {
            if r.accepted {
                worst_accepted = worst_accepted.max(r.error);
            }
            Ok(())
        })
        .unwrap();
        let err = compute_error_norm(&s.solver, &u, s.exact.as_ref().unwrap(), 1.0)[0];
        (worst_accepted, st.accepted, err)
    };
    let (e8, n8, err8) = run(1e-8);
    let (e10, n10, err10) = run(1e-10);
    verdict(
        e8 <= 1.0 && e10 <= 1.0 && err10 <= err8 && n10 > n8,
        format!("tol 1e-8: max e={e8:.3} steps={n8} err={err8:.3e}; tol 1e-10: max e={e10:.3} steps={n10} err={err10:.3e}"),
    )
}

/// Weighted RMS of `(m_new - m_old) / dt` over both momentum components.
fn momentum_rate(s: &LwfrSolver<lwfr::NavierStokes>, old: &NodalField, new: &NodalField, dt: f64) -> f64 {
    let b = s.basis();
    let n = b.len();
    let w = b.weights();
    let jac = s.geometry().jacobian();
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (a, c)) in old.data().chunks(4).zip(new.data().chunks(4)).enumerate() {
        let node = k % (n * n);
        let wj = w[node % n] * w[node / n] * jac[k];
        num += wj * ((c[1] - a[1]).powi(2) + (c[2] - a[2]).powi(2)) / (dt * dt);
        den += wj;
    }
    (num / den).sqrt()
}

fn cavity() -> Verdict {
    let s = lid_driven_cavity(cavity_params(), 0.1, 3, 16).unwrap();
    let mut controller = ControllerParams::for_degree(3);
    controller.abs_tol = CAVITY_TOL;
    controller.rel_tol = CAVITY_TOL;
    let time = TimeConfig::adaptive(CAVITY_FINAL_TIME, controller);
    let mut prev = s.initial.clone();
    let mut first_rate = None;
    let mut last_rate = f64::NAN;
    let mut speed: f64 = 0.0;
    let result = integrate(&s.solver, &s.initial, &time, |r, u| {
        if r.accepted {
            let rate = momentum_rate(&s.solver, &prev, u, r.dt);
            first_rate.get_or_insert(rate);
            // the step clipped onto the final time changes dt, which shifts the
            // dt-dependent discrete steady state; it says nothing about the flow
            if r.time < CAVITY_FINAL_TIME {
                last_rate = rate;
            }
            for node in u.data().chunks(4) {
                speed = speed.max((node[1] * node[1] + node[2] * node[2]).sqrt() / node[0]);
            }
            prev.clone_from(u);
        }
        Ok(())
    });
    let (stats, finite) = match result {
        Ok((u, st)) => (st, u.all_finite()),
        Err(e) => return verdict(false, format!("run failed: {e}")),
    };
    let ratio = last_rate / first_rate.unwrap_or(f64::NAN);
    verdict(
        finite && ratio < CAVITY_STEADY_RATIO && speed <= CAVITY_SPEED_BOUND,
        format!(
            "tol {CAVITY_TOL:e}, rate ratio {ratio:.2e} (< {CAVITY_STEADY_RATIO:e}), max |v| {speed:.4} (<= {CAVITY_SPEED_BOUND}), steps {} rejected {}",
            stats.accepted, stats.rejected
        ),
    )
}

fn manufactured() -> Verdict {
    let params = NavierStokesParams {
        gamma: 1.4,
        mu: 1e-2,
        prandtl: 0.72,
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in [2, 3] {
        let mut errs = Vec::new();
        for nx in [4, 8, 16] {
            let s = navier_stokes_manufactured(ManufacturedSolution::new(params), degree, nx).unwrap();
            let time = TimeConfig::fixed(1.0, CONVERGENCE_CFL, CONVERGENCE_CFL);
            let e = match integrate(&s.solver, &s.initial, &time, |_, _| Ok(())) {
                Ok((u, _)) => compute_error_norm(&s.solver, &u, s.exact.as_ref().unwrap(), 1.0)[0],
                Err(_) => f64::NAN,
            };
            errs.push(e);
        }
        let eoc = (errs[1] / errs[2]).log2();
        pass &= eoc >= degree as f64 + EOC_MARGIN;
        parts.push(format!("N={degree} errors {:.2e} {:.2e} {:.2e} eoc={eoc:.2}", errs[0], errs[1], errs[2]));
    }
    verdict(pass, format!("{} (need >= N+{EOC_MARGIN})", parts.join(", ")))
}

fn main() {
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |k: usize| filter.is_empty() || filter.contains(&k);
    let mut failed = 0;
    let mut report = |k: usize, name: &str, started: Instant, v: Verdict| {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {k:>2} {tag} {name}: {} [{:.1}s]", v.detail, started.elapsed().as_secs_f64());
        if !v.pass {
            failed += 1;
        }
    };

    if wanted(1) || wanted(8) {
        let t = Instant::now();
        let (rows, drift) = wave_study(5e-2);
        if wanted(1) {
            report(1, "optimal convergence, nu = 5e-2", t, convergence_verdict(&rows));
        }
        if wanted(8) {
            report(
                8,
                "conservation",
                t,
                verdict(drift <= CONSERVATION_TOL, format!("max relative drift {drift:.2e} (<= {CONSERVATION_TOL:e})")),
            );
        }
    }
    if wanted(2) {
        let t = Instant::now();
        let (rows, _) = wave_study(1e-12);
        report(2, "optimal convergence, nu = 1e-12", t, convergence_verdict(&rows));
    }
    type Criterion = (usize, &'static str, fn() -> Verdict);
    let rest: [Criterion; 7] = [
        (3, "free-stream preservation", free_stream),
        (4, "upwind equivalence of the interface flux", upwind_equivalence),
        (5, "time-average order", time_average_order),
        (6, "auxiliary gradient order", gradient_order),
        (7, "controller contract", controller_contract),
        (9, "lid-driven cavity", cavity),
        (10, "manufactured Navier-Stokes convergence", manufactured),
    ];
    for (k, name, f) in rest {
        if wanted(k) {
            let t = Instant::now();
            report(k, name, t, f());
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
