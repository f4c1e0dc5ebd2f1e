//! A uniform Navier-Stokes state is kept to round-off on a warped mesh.

use lwfr::driver::{integrate, TimeConfig};
use lwfr::equations::NavierStokesParams;
use lwfr::problems::navier_stokes_free_stream;
use lwfr::time_control::ControllerParams;

fn main() -> lwfr::Result<()> {
    let params = NavierStokesParams::default();
    for degree in [2, 3, 4] {
        let s = navier_stokes_free_stream(params, [1.0, 0.3, -0.2, 1.0], degree, 6, 0.1)?;
        let mut time = TimeConfig::adaptive(10.0, ControllerParams::for_degree(degree));
        time.max_steps = Some(50);
        let (u, stats) = integrate(&s.solver, &s.initial, &time, |_, _| Ok(()))?;
        println!(
            "N={degree}: {} steps to t = {:.3}, max deviation {:.2e}",
            stats.accepted,
            stats.final_time,
            u.max_abs_diff(&s.initial)
        );
    }
    Ok(())
}
