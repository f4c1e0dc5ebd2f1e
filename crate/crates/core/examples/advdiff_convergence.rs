//! Convergence of the advection-diffusion wave on a periodic square.

use lwfr::driver::{convergence_study, parse_config};

fn main() -> lwfr::Result<()> {
    let cfg = parse_config(
        "[equation]\nproblem = wave\nvelocity = 1.5 1.0\ndiffusion = 0.05\n\
         [mesh]\nnx = 4\ndegree = 1\n\
         [time]\nfinal_time = 0.5\nmode = fixed\ncfl_advective = 0.5\ncfl_viscous = 0.5\n",
    )?;
    let report = convergence_study(&cfg, &[4, 8, 16], &[1, 2, 3], |r| {
        let eoc = r.eoc.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        println!("N={} nx={:3} l2={:.3e} eoc={eoc}", r.degree, r.nx, r.error.unwrap_or(f64::NAN));
    })?;
    report.write_csv(std::io::stdout())?;
    Ok(())
}
