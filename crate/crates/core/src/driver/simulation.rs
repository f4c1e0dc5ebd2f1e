//! Turning a [`RunConfig`] into a solver and running it with file output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::boundary::{BoundaryConditions, BoundaryTag, StateFn};
use crate::equations::manufactured::ManufacturedSolution;
use crate::equations::{AdvectionDiffusion, Equation, NavierStokes};
use crate::error::{LwfrError, Result};
use crate::field::NodalField;
use crate::mesh::{write_field_dump, BoundarySide, Geometry};
use crate::problems::{cavity_initial, manufactured_closures, wave_exact, Setup};

use super::config::{Problem, RunConfig};
use super::run::{compute_error_norm, integrate, RunStats};

/// A configured problem for either equation system.
pub enum Simulation {
    AdvectionDiffusion(Setup<AdvectionDiffusion>),
    NavierStokes(Setup<NavierStokes>),
}

/// Runs `$body` with `$s` bound to the inner [`Setup`].
#[macro_export]
macro_rules! with_setup {
    ($sim:expr, $s:ident => $body:expr) => {
        match $sim {
            $crate::driver::Simulation::AdvectionDiffusion($s) => $body,
            $crate::driver::Simulation::NavierStokes($s) => $body,
        }
    };
}

/// Outcome of [`run_simulation`].
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub solution: NodalField,
    pub stats: RunStats,
    /// Per-component L2 error at the final time, when an exact solution exists.
    pub error: Option<Vec<f64>>,
}

impl Simulation {
    pub fn build(cfg: &RunConfig) -> Result<Self> {
        let eqc = &cfg.equation;
        let m = &cfg.mesh;
        match eqc.problem {
            Problem::Wave => {
                let eq = AdvectionDiffusion::new(eqc.advdiff.velocity, eqc.advdiff.diffusion);
                let exact = wave_exact(eq);
                let init = exact.clone();
                let bc = boundary_conditions(cfg, Some(&exact), 1.0)?;
                Setup::new(
                    eq,
                    m.degree,
                    m.nx,
                    m.ny,
                    m.domain,
                    m.kind,
                    bc,
                    None,
                    move |x, y, o| init(x, y, 0.0, o),
                    Some(exact),
                )
                .map(Self::AdvectionDiffusion)
            }
            Problem::Manufactured => {
                let p = eqc.navier_stokes;
                let eq = NavierStokes::new(p.gamma, p.mu, p.prandtl);
                let ms = ManufacturedSolution {
                    c: eqc.mms_c,
                    amplitude: eqc.mms_amplitude,
                    velocity_shift: eqc.mms_shift,
                    params: p,
                };
                let (exact, source) = manufactured_closures(ms);
                let init = exact.clone();
                let bc = boundary_conditions(cfg, Some(&exact), 1.0)?;
                Setup::new(
                    eq,
                    m.degree,
                    m.nx,
                    m.ny,
                    m.domain,
                    m.kind,
                    bc,
                    Some(source),
                    move |x, y, o| init(x, y, 0.0, o),
                    Some(exact),
                )
                .map(Self::NavierStokes)
            }
            Problem::Cavity | Problem::FreeStream => {
                let p = eqc.navier_stokes;
                let eq = NavierStokes::new(p.gamma, p.mu, p.prandtl);
                let (prim, exact) = if eqc.problem == Problem::Cavity {
                    (cavity_initial(eqc.mach, p.gamma), None)
                } else {
                    let state = eq.to_conservative(eqc.free_stream);
                    let exact: StateFn = Arc::new(move |_, _, _, o: &mut [f64]| o.copy_from_slice(&state));
                    (eqc.free_stream, Some(exact))
                };
                let state = eq.to_conservative(prim);
                let bc = boundary_conditions(cfg, exact.as_ref(), prim[3] / prim[0])?;
                Setup::new(
                    eq,
                    m.degree,
                    m.nx,
                    m.ny,
                    m.domain,
                    m.kind,
                    bc,
                    None,
                    move |_, _, o| o.copy_from_slice(&state),
                    exact,
                )
                .map(Self::NavierStokes)
            }
        }
    }

    pub fn nvar(&self) -> usize {
        with_setup!(self, s => s.solver.equation().nvar())
    }

    pub fn geometry(&self) -> &Geometry {
        with_setup!(self, s => s.solver.geometry())
    }
}

/// Resolves tag names to [`BoundaryTag`]s. Walls without an explicit
/// temperature use `reference_temperature`; moving walls default to velocity `(1, 0)`.
fn boundary_conditions(cfg: &RunConfig, exact: Option<&StateFn>, reference_temperature: f64) -> Result<BoundaryConditions> {
    let mut tags: Vec<BoundaryTag> = Vec::with_capacity(4);
    for (side, sc) in BoundarySide::ALL.iter().zip(&cfg.boundary) {
        let need_exact = || {
            exact.cloned().ok_or_else(|| {
                LwfrError::Config(format!(
                    "{} boundary `{}` needs a problem with an exact solution",
                    side.name(),
                    sc.tag
                ))
            })
        };
        let temperature = sc.temperature.unwrap_or(reference_temperature);
        tags.push(match sc.tag.as_str() {
            "periodic" => BoundaryTag::Periodic,
            "dirichlet_exact" => BoundaryTag::DirichletExact(need_exact()?),
            "inflow_profile" => BoundaryTag::InflowProfile(need_exact()?),
            "noslip_isothermal" => BoundaryTag::NoSlipIsothermal { temperature },
            "noslip_adiabatic" => BoundaryTag::NoSlipAdiabatic,
            "moving_wall_isothermal" => BoundaryTag::MovingWallIsothermal {
                velocity: sc.velocity.unwrap_or([1.0, 0.0]),
                temperature,
            },
            other => return Err(LwfrError::Config(format!("unknown boundary tag `{other}`"))),
        });
    }
    let tags: [BoundaryTag; 4] = tags.try_into().expect("four sides");
    Ok(BoundaryConditions::new(tags))
}

fn dump_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("field_{index}.txt"))
}

/// Builds and runs `cfg`. With an output directory this writes `steps.log`
/// (when step logging is on) and `field_<n>.txt` dumps: `field_0` is the
/// initial state, then one every `dump_every` accepted steps, and always the
/// final state.
pub fn run_simulation(cfg: &RunConfig) -> Result<RunSummary> {
    let sim = Simulation::build(cfg)?;
    with_setup!(&sim, s => run_setup(s, cfg))
}

fn run_setup<E: Equation>(s: &Setup<E>, cfg: &RunConfig) -> Result<RunSummary> {
    let out = &cfg.output;
    let dir = out.directory.as_deref();
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
    }
    let mesh = s.solver.mesh();
    let nvar = s.solver.equation().nvar();
    let mut log = match (dir, out.log_steps) {
        (Some(d), true) => Some(BufWriter::new(File::create(d.join("steps.log"))?)),
        _ => None,
    };
    let mut dumps = 0;
    let mut last_dumped_step = 0;
    if let Some(d) = dir {
        write_field_dump(BufWriter::new(File::create(dump_path(d, 0))?), mesh, nvar, s.initial.data(), 0.0)?;
        dumps = 1;
    }
    let (u, stats) = integrate(&s.solver, &s.initial, &cfg.time, |rec, u| {
        if let Some(w) = log.as_mut() {
            writeln!(w, "{}", rec.log_line())?;
        }
        if let (Some(d), Some(every)) = (dir, out.dump_every) {
            if rec.accepted && rec.step % every == 0 {
                write_field_dump(BufWriter::new(File::create(dump_path(d, dumps))?), mesh, nvar, u.data(), rec.time)?;
                dumps += 1;
                last_dumped_step = rec.step;
            }
        }
        Ok(())
    })?;
    if let Some(d) = dir {
        if stats.accepted > 0 && last_dumped_step != stats.accepted {
            write_field_dump(BufWriter::new(File::create(dump_path(d, dumps))?), mesh, nvar, u.data(), stats.final_time)?;
        }
    }
    if let Some(mut w) = log {
        w.flush()?;
    }
    let error = s.exact.as_ref().map(|ex| compute_error_norm(&s.solver, &u, ex, stats.final_time));
    Ok(RunSummary {
        solution: u,
        stats,
        error,
    })
}

/// Metric-identity residual and minimum Jacobian of the configured mesh.
pub fn check_mesh(cfg: &RunConfig) -> Result<(f64, f64)> {
    let sim = Simulation::build(cfg)?;
    Ok(with_setup!(&sim, s => {
        let g = s.solver.geometry();
        (g.metric_identity_residual(s.solver.basis()), g.min_jacobian())
    }))
}
