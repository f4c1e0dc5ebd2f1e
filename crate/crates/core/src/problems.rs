//! Ready-made test problems: the travelling advection-diffusion wave, the
//! manufactured Navier-Stokes solution, the lid-driven cavity and a uniform
//! free stream.

use std::sync::Arc;

use crate::basis::Basis1D;
use crate::boundary::{BoundaryConditions, BoundaryTag, StateFn};
use crate::equations::manufactured::ManufacturedSolution;
use crate::equations::{AdvDiffParams, AdvectionDiffusion, Equation, NavierStokes, NavierStokesParams};
use crate::error::Result;
use crate::field::NodalField;
use crate::solver::{LwfrSolver, SourceFn};
use crate::mesh::{CurvilinearMesh, Domain, MeshKind};

pub const SQUARE: Domain = Domain::new(-1.0, 1.0, -1.0, 1.0);
pub const UNIT_SQUARE: Domain = Domain::new(0.0, 1.0, 0.0, 1.0);

/// A solver, its initial data and, when known, the exact solution.
pub struct Setup<E: Equation> {
    pub solver: LwfrSolver<E>,
    pub initial: NodalField,
    pub exact: Option<StateFn>,
}

impl<E: Equation> Setup<E> {
    /// Builds the solver and samples `initial(x, y, out)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        eq: E,
        degree: usize,
        nx: usize,
        ny: usize,
        domain: Domain,
        kind: MeshKind,
        boundary: BoundaryConditions,
        source: Option<SourceFn>,
        initial: impl Fn(f64, f64, &mut [f64]),
        exact: Option<StateFn>,
    ) -> Result<Self> {
        let basis = Basis1D::gll(degree)?;
        let periodic = boundary.periodicity()?;
        let mesh = CurvilinearMesh::build(nx, ny, domain, periodic, kind, &basis)?;
        let solver = LwfrSolver::new(eq, mesh, basis, boundary, source)?;
        let initial = solver.project(initial);
        Ok(Self {
            solver,
            initial,
            exact,
        })
    }
}

fn mesh_kind(amplitude: f64) -> MeshKind {
    if amplitude == 0.0 {
        MeshKind::Cartesian
    } else {
        MeshKind::Warped { amplitude }
    }
}

/// Exact-solution closure of the advection-diffusion wave.
pub fn wave_exact(eq: AdvectionDiffusion) -> StateFn {
    Arc::new(move |x, y, t, out: &mut [f64]| out[0] = eq.exact(x, y, t))
}

/// Periodic `[-1, 1]^2` with `u0 = 1 + 0.5 sin(pi (x + y))`.
pub fn advection_diffusion_wave(params: AdvDiffParams, degree: usize, nx: usize, amplitude: f64) -> Result<Setup<AdvectionDiffusion>> {
    let eq = AdvectionDiffusion::new(params.velocity, params.diffusion);
    let exact = wave_exact(eq);
    let init = exact.clone();
    Setup::new(
        eq,
        degree,
        nx,
        nx,
        SQUARE,
        mesh_kind(amplitude),
        BoundaryConditions::periodic(),
        None,
        move |x, y, o| init(x, y, 0.0, o),
        Some(exact),
    )
}

/// Exact state and source closures of the manufactured solution.
pub fn manufactured_closures(m: ManufacturedSolution) -> (StateFn, SourceFn) {
    let exact: StateFn = Arc::new(move |x, y, t, out: &mut [f64]| out.copy_from_slice(&m.state(x, y, t)));
    let source: SourceFn = Arc::new(move |x, y, t, out: &mut [f64]| out.copy_from_slice(&m.source(x, y, t)));
    (exact, source)
}

/// Manufactured solution on `[-1, 1]^2`: periodic in `x`, adiabatic no-slip walls at `y = +-1`.
pub fn navier_stokes_manufactured(m: ManufacturedSolution, degree: usize, nx: usize) -> Result<Setup<NavierStokes>> {
    let p = m.params;
    let eq = NavierStokes::new(p.gamma, p.mu, p.prandtl);
    let (exact, source) = manufactured_closures(m);
    let init = exact.clone();
    let bc = BoundaryConditions::new([
        BoundaryTag::Periodic,
        BoundaryTag::Periodic,
        BoundaryTag::NoSlipAdiabatic,
        BoundaryTag::NoSlipAdiabatic,
    ]);
    Setup::new(
        eq,
        degree,
        nx,
        nx,
        SQUARE,
        MeshKind::Cartesian,
        bc,
        Some(source),
        move |x, y, o| init(x, y, 0.0, o),
        Some(exact),
    )
}

/// Parameters of the lid-driven cavity at Reynolds number 1000.
pub fn cavity_params() -> NavierStokesParams {
    NavierStokesParams {
        gamma: 1.4,
        mu: 1e-3,
        prandtl: 0.7,
    }
}

/// Initial primitive state `(1, 0, 0, 1 / (M^2 gamma))` of the cavity.
pub fn cavity_initial(mach: f64, gamma: f64) -> [f64; 4] {
    [1.0, 0.0, 0.0, 1.0 / (mach * mach * gamma)]
}

/// Unit-square cavity with isothermal walls and a lid moving with velocity `(1, 0)`.
pub fn lid_driven_cavity(params: NavierStokesParams, mach: f64, degree: usize, nx: usize) -> Result<Setup<NavierStokes>> {
    let eq = NavierStokes::new(params.gamma, params.mu, params.prandtl);
    let prim = cavity_initial(mach, params.gamma);
    let temperature = prim[3] / prim[0];
    let wall = BoundaryTag::NoSlipIsothermal { temperature };
    let bc = BoundaryConditions::new([
        wall.clone(),
        wall.clone(),
        wall,
        BoundaryTag::MovingWallIsothermal {
            velocity: [1.0, 0.0],
            temperature,
        },
    ]);
    let state = eq.to_conservative(prim);
    Setup::new(
        eq,
        degree,
        nx,
        nx,
        UNIT_SQUARE,
        MeshKind::Cartesian,
        bc,
        None,
        move |_, _, o| o.copy_from_slice(&state),
        None,
    )
}

/// Uniform primitive state on a periodic, optionally warped `[-1, 1]^2`.
pub fn navier_stokes_free_stream(
    params: NavierStokesParams,
    primitive: [f64; 4],
    degree: usize,
    nx: usize,
    amplitude: f64,
) -> Result<Setup<NavierStokes>> {
    let eq = NavierStokes::new(params.gamma, params.mu, params.prandtl);
    let state = eq.to_conservative(primitive);
    let exact: StateFn = Arc::new(move |_, _, _, o: &mut [f64]| o.copy_from_slice(&state));
    Setup::new(
        eq,
        degree,
        nx,
        nx,
        SQUARE,
        mesh_kind(amplitude),
        BoundaryConditions::periodic(),
        None,
        move |_, _, o| o.copy_from_slice(&state),
        Some(exact),
    )
}
