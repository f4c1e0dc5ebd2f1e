//! Outer-side trace data on exterior faces.
//!
//! Prescribed-state conditions feed their state into the gradient solve and
//! the time-averaged fluxes. Solid walls use an affine mirror of the inner
//! data, so the interface average carries the wall velocity.

use std::fmt;
use std::sync::Arc;

use crate::equations::{contract, Equation, Wall, MAX_NVAR};
use crate::error::{LwfrError, Result};
use crate::mesh::BoundarySide;

/// Prescribed state `g(x, y, t, out)`.
pub type StateFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryTag {
    /// Handled structurally by the mesh; never queried for traces.
    Periodic,
    /// Time-dependent prescribed state, usually an exact solution.
    DirichletExact(StateFn),
    /// Steady prescribed state, evaluated at `t = 0`.
    InflowProfile(StateFn),
    NoSlipIsothermal { temperature: f64 },
    NoSlipAdiabatic,
    MovingWallIsothermal { velocity: [f64; 2], temperature: f64 },
}

impl fmt::Debug for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoSlipIsothermal { temperature } => {
                write!(f, "noslip_isothermal(T = {temperature})")
            }
            Self::MovingWallIsothermal {
                velocity,
                temperature,
            } => write!(f, "moving_wall_isothermal(v = {velocity:?}, T = {temperature})"),
            other => f.write_str(other.name()),
        }
    }
}

impl BoundaryTag {
    pub const NAMES: [&'static str; 6] = [
        "periodic",
        "dirichlet_exact",
        "inflow_profile",
        "noslip_isothermal",
        "noslip_adiabatic",
        "moving_wall_isothermal",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Periodic => "periodic",
            Self::DirichletExact(_) => "dirichlet_exact",
            Self::InflowProfile(_) => "inflow_profile",
            Self::NoSlipIsothermal { .. } => "noslip_isothermal",
            Self::NoSlipAdiabatic => "noslip_adiabatic",
            Self::MovingWallIsothermal { .. } => "moving_wall_isothermal",
        }
    }

    pub fn wall(&self) -> Option<Wall> {
        match *self {
            Self::NoSlipIsothermal { temperature } => Some(Wall {
                velocity: [0.0; 2],
                temperature: Some(temperature),
            }),
            Self::NoSlipAdiabatic => Some(Wall {
                velocity: [0.0; 2],
                temperature: None,
            }),
            Self::MovingWallIsothermal {
                velocity,
                temperature,
            } => Some(Wall {
                velocity,
                temperature: Some(temperature),
            }),
            _ => None,
        }
    }

    /// Prescribed state at `(x, y, t)`, if this is a prescribed-state condition.
    fn prescribed(&self, x: f64, y: f64, t: f64, out: &mut [f64]) -> bool {
        match self {
            Self::DirichletExact(g) => g(x, y, t, out),
            Self::InflowProfile(g) => g(x, y, 0.0, out),
            _ => return false,
        }
        true
    }
}

/// One tag per side of the rectangular domain.
#[derive(Debug, Clone)]
pub struct BoundaryConditions {
    tags: [BoundaryTag; 4],
}

impl BoundaryConditions {
    /// Tags in the order left, right, bottom, top.
    pub fn new(tags: [BoundaryTag; 4]) -> Self {
        Self { tags }
    }

    pub fn periodic() -> Self {
        Self::new(std::array::from_fn(|_| BoundaryTag::Periodic))
    }

    pub fn tag(&self, side: BoundarySide) -> &BoundaryTag {
        &self.tags[side as usize]
    }

    /// Periodicity flags `[x, y]` implied by the tags.
    pub fn periodicity(&self) -> Result<[bool; 2]> {
        let mut out = [false; 2];
        for (axis, (a, b)) in [(0, 1), (2, 3)].into_iter().enumerate() {
            let pa = matches!(self.tags[a], BoundaryTag::Periodic);
            let pb = matches!(self.tags[b], BoundaryTag::Periodic);
            if pa != pb {
                return Err(LwfrError::Config(format!(
                    "periodic boundary on {} requires periodic on {}",
                    BoundarySide::ALL[if pa { a } else { b }].name(),
                    BoundarySide::ALL[if pa { b } else { a }].name(),
                )));
            }
            out[axis] = pa;
        }
        Ok(out)
    }

    /// Checks the tags against the mesh periodicity and the equation system.
    pub fn validate<E: Equation>(&self, eq: &E, periodic: [bool; 2]) -> Result<()> {
        if self.periodicity()? != periodic {
            return Err(LwfrError::Config(
                "boundary tags disagree with mesh periodicity".into(),
            ));
        }
        for (side, tag) in BoundarySide::ALL.iter().zip(&self.tags) {
            if tag.wall().is_some() && !eq.supports_walls() {
                return Err(LwfrError::Config(format!(
                    "{} wall on {} needs an equation system with a velocity field",
                    tag.name(),
                    side.name()
                )));
            }
        }
        Ok(())
    }
}

/// Outer solution trace used for `u*` in the gradient solve.
///
/// The outer value is `2 u_b - inner`, so the interface average is the
/// boundary state `u_b`: the prescribed state, or the wall state.
pub fn boundary_solution_trace<E: Equation>(
    eq: &E,
    tag: &BoundaryTag,
    inner: &[f64],
    x: f64,
    y: f64,
    t: f64,
    out: &mut [f64],
) -> Result<()> {
    let nvar = inner.len();
    let mut ub = [0.0; MAX_NVAR];
    if !tag.prescribed(x, y, t, &mut ub[..nvar]) {
        match tag.wall() {
            Some(w) => eq.wall_state(inner, &w, &mut ub[..nvar]),
            None => return Err(periodic_error()),
        }
    }
    for c in 0..nvar {
        out[c] = 2.0 * ub[c] - inner[c];
    }
    Ok(())
}

/// Outer level-`n` state used only for the interface wave-speed estimate.
pub fn boundary_reference_state<E: Equation>(
    eq: &E,
    tag: &BoundaryTag,
    inner: &[f64],
    x: f64,
    y: f64,
    t: f64,
    out: &mut [f64],
) -> Result<()> {
    if tag.prescribed(x, y, t, out) {
        return Ok(());
    }
    match tag.wall() {
        Some(w) => {
            eq.wall_mirror_state(inner, &w, out);
            Ok(())
        }
        None => Err(periodic_error()),
    }
}

/// Time-averaged contravariant normal traces of one face point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceTrace {
    pub advective: [f64; MAX_NVAR],
    pub viscous: [f64; MAX_NVAR],
    pub solution: [f64; MAX_NVAR],
}

impl Default for FaceTrace {
    fn default() -> Self {
        Self {
            advective: [0.0; MAX_NVAR],
            viscous: [0.0; MAX_NVAR],
            solution: [0.0; MAX_NVAR],
        }
    }
}

/// Outer traces for the interface flux on an exterior face point.
///
/// `ja` is the metric vector of the face direction, so the returned fluxes
/// are contravariant like the inner ones. `time_rule` holds quadrature nodes
/// in `[0, 1]` and weights summing to one for averaging prescribed states
/// over `[t, t + dt]`.
#[allow(clippy::too_many_arguments)]
pub fn boundary_flux_traces<E: Equation>(
    eq: &E,
    tag: &BoundaryTag,
    inner: &FaceTrace,
    ja: [f64; 2],
    x: f64,
    y: f64,
    t: f64,
    dt: f64,
    time_rule: &[(f64, f64)],
    nvar: usize,
) -> Result<FaceTrace> {
    let mut out = FaceTrace::default();
    if let Some(w) = tag.wall() {
        eq.wall_mirror_state(&inner.solution[..nvar], &w, &mut out.solution[..nvar]);
        eq.wall_mirror_flux(&inner.advective[..nvar], &w, &mut out.advective[..nvar]);
        eq.wall_viscous_flux(&inner.viscous[..nvar], &w, &mut out.viscous[..nvar]);
        return Ok(out);
    }
    let mut g = [0.0; MAX_NVAR];
    let mut f = [0.0; 2 * MAX_NVAR];
    let mut fn_ = [0.0; MAX_NVAR];
    for &(theta, weight) in time_rule {
        if !tag.prescribed(x, y, t + theta * dt, &mut g[..nvar]) {
            return Err(periodic_error());
        }
        eq.advective_flux(&g[..nvar], &mut f[..2 * nvar]);
        contract(&f[..2 * nvar], ja, &mut fn_[..nvar]);
        for c in 0..nvar {
            out.solution[c] += weight * g[c];
            out.advective[c] += weight * fn_[c];
        }
    }
    out.viscous[..nvar].copy_from_slice(&inner.viscous[..nvar]);
    Ok(out)
}

fn periodic_error() -> LwfrError {
    LwfrError::Config("periodic boundary reached the exterior trace routine".into())
}
