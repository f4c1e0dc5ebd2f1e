//! Lax-Wendroff flux reconstruction for advection-diffusion systems on
//! curvilinear quadrilateral meshes.

#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod boundary;
pub mod br1;
pub mod driver;
pub mod equations;
pub mod error;
pub mod field;
mod kernels;
pub mod solver;
pub mod mesh;
pub mod problems;
pub mod time_control;

pub use basis::Basis1D;
pub use boundary::{BoundaryConditions, BoundaryTag};
pub use equations::{AdvectionDiffusion, Equation, NavierStokes};
pub use error::{LwfrError, Result};
pub use field::NodalField;
pub use solver::{LwfrSolver, StepOutput};
pub use mesh::{CurvilinearMesh, Domain, Geometry};
