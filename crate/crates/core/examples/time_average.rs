//! The highest term of the time-averaged flux shrinks like dt^N.

use lwfr::equations::AdvDiffParams;
use lwfr::problems::advection_diffusion_wave;

fn main() -> lwfr::Result<()> {
    for degree in 1..=4 {
        let s = advection_diffusion_wave(AdvDiffParams::default(), degree, 4, 0.05)?;
        let mut prev: Option<f64> = None;
        print!("N={degree}:");
        for k in 0..5 {
            let dt = 1e-2 / f64::powi(2.0, k);
            let tav = s.solver.time_averaged_data(&s.initial, 0.0, dt)?;
            let top = (0..s.initial.n_elements())
                .flat_map(|e| tav.advective_top(e).to_vec())
                .fold(0.0, |m: f64, v| m.max(v.abs()));
            match prev {
                Some(p) => print!(" {top:.2e} ({:.2})", (p / top).log2()),
                None => print!(" {top:.2e}"),
            }
            prev = Some(top);
        }
        println!();
    }
    Ok(())
}
