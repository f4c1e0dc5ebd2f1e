//! Navier-Stokes with a manufactured solution between adiabatic walls.

use lwfr::driver::{compute_error_norm, integrate, TimeConfig};
use lwfr::equations::manufactured::ManufacturedSolution;
use lwfr::equations::NavierStokesParams;
use lwfr::problems::navier_stokes_manufactured;

fn main() -> lwfr::Result<()> {
    let params = NavierStokesParams {
        mu: 1e-2,
        ..Default::default()
    };
    let ms = ManufacturedSolution::new(params);
    let mut prev: Option<f64> = None;
    for nx in [4, 8, 16] {
        let s = navier_stokes_manufactured(ms, 2, nx)?;
        let (u, stats) = integrate(&s.solver, &s.initial, &TimeConfig::fixed(0.2, 0.5, 0.5), |_, _| Ok(()))?;
        let err = compute_error_norm(&s.solver, &u, s.exact.as_ref().unwrap(), stats.final_time);
        let rho = err[0];
        let eoc = prev.map(|p| format!("{:.2}", (p / rho).log2())).unwrap_or_else(|| "-".into());
        let list: Vec<String> = err.iter().map(|v| format!("{v:.3e}")).collect();
        println!("nx={nx:2} steps={:4} l2 [{}] density eoc {eoc}", stats.accepted, list.join(", "));
        prev = Some(rho);
    }
    Ok(())
}
