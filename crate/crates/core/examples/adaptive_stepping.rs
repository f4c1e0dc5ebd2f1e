//! Error-based step control on the advection-diffusion wave.

use lwfr::driver::{compute_error_norm, integrate, TimeConfig};
use lwfr::equations::AdvDiffParams;
use lwfr::problems::advection_diffusion_wave;
use lwfr::time_control::ControllerParams;

fn main() -> lwfr::Result<()> {
    let s = advection_diffusion_wave(AdvDiffParams::default(), 3, 8, 0.05)?;
    let exact = s.exact.clone().unwrap();
    for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
        let mut controller = ControllerParams::for_degree(3);
        controller.abs_tol = tol;
        controller.rel_tol = tol;
        // loose tolerances end up on the CFL cap
        let time = TimeConfig::adaptive(1.0, controller);
        let mut dts = Vec::new();
        let (u, stats) = integrate(&s.solver, &s.initial, &time, |r, _| {
            if r.accepted {
                dts.push(r.dt);
            }
            Ok(())
        })?;
        let err = compute_error_norm(&s.solver, &u, &exact, stats.final_time)[0];
        let (lo, hi) = dts.iter().fold((f64::MAX, 0.0f64), |(a, b), &d| (a.min(d), b.max(d)));
        println!(
            "tol {tol:.0e}: {} accepted, {} rejected, dt in [{lo:.2e}, {hi:.2e}], l2 error {err:.3e}",
            stats.accepted, stats.rejected
        );
    }
    Ok(())
}
