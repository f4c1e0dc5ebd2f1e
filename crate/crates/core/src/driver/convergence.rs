//! Mesh-refinement studies and the `eoc.csv` table.

use std::io::Write;

use crate::error::Result;

use super::config::RunConfig;
use super::simulation::run_simulation;

/// One run of a study. `error` is `None` when the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub degree: usize,
    pub nx: usize,
    pub error: Option<f64>,
    pub eoc: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// `log(e_prev / e) / log(nx / nx_prev)`.
pub fn eoc(prev_error: f64, error: f64, prev_nx: usize, nx: usize) -> f64 {
    (prev_error / error).ln() / (nx as f64 / prev_nx as f64).ln()
}

impl ConvergenceReport {
    pub fn rows_for(&self, degree: usize) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.degree == degree)
    }

    /// EOC of the finest successful resolution of `degree`.
    pub fn terminal_eoc(&self, degree: usize) -> Option<f64> {
        self.rows_for(degree).last().and_then(|r| r.eoc)
    }

    /// CSV with header `degree,nx,l2_error,eoc`; missing values are empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "degree,nx,l2_error,eoc")?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_default();
        for r in &self.rows {
            writeln!(w, "{},{},{},{}", r.degree, r.nx, fmt(r.error), fmt(r.eoc))?;
        }
        Ok(())
    }
}

/// Runs `base` for every `(degree, nx)` pair, with `ny` scaled like `nx`.
///
/// The error is the L2 error of the first component. A failing run is
/// recorded with an empty error and the study moves on; `progress` sees every
/// row as soon as it is done.
pub fn convergence_study(
    base: &RunConfig,
    resolutions: &[usize],
    degrees: &[usize],
    mut progress: impl FnMut(&ConvergenceRow),
) -> Result<ConvergenceReport> {
    let mut report = ConvergenceReport::default();
    let aspect = base.mesh.ny as f64 / base.mesh.nx as f64;
    for &degree in degrees {
        let mut prev: Option<(usize, f64)> = None;
        for &nx in resolutions {
            let mut cfg = base.clone();
            cfg.mesh.degree = degree;
            cfg.mesh.nx = nx;
            cfg.mesh.ny = ((nx as f64 * aspect).round() as usize).max(1);
            cfg.output.directory = None;
            if let crate::driver::TimeMode::Adaptive { controller, .. } = &mut cfg.time.mode {
                controller.order = degree as f64 + 1.0;
            }
            let row = match run_simulation(&cfg) {
                Ok(s) => {
                    let error = s.error.map(|e| e[0]);
                    let eoc = match (prev, error) {
                        (Some((pn, pe)), Some(e)) => Some(eoc(pe, e, pn, nx)),
                        _ => None,
                    };
                    prev = error.map(|e| (nx, e));
                    ConvergenceRow {
                        degree,
                        nx,
                        error,
                        eoc,
                        failure: error.is_none().then(|| "problem has no exact solution".into()),
                    }
                }
                Err(e) if e.is_config() => return Err(e),
                Err(e) => {
                    prev = None;
                    ConvergenceRow {
                        degree,
                        nx,
                        error: None,
                        eoc: None,
                        failure: Some(e.to_string()),
                    }
                }
            };
            progress(&row);
            report.rows.push(row);
        }
    }
    Ok(report)
}
