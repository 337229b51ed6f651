//! Adaptive P1 finite elements for a degenerate diffuse-interface model of
//! tumour growth.
//!
//! Each time step solves a linear pressure problem with Jacobi-preconditioned
//! conjugate gradients, then a double-obstacle variational inequality for the
//! phase field with projected SOR, then adapts the mesh by newest-vertex
//! bisection in three size zones.

pub mod benchmark;
pub mod config;
pub mod error;
pub mod fem;
pub mod field;
pub mod io;
pub mod mesh;
pub mod params;
pub mod phase;
pub mod pressure;
pub mod radial;
pub mod simulation;

pub use error::{Error, Result};
pub use field::NodalField;
pub use mesh::{Mesh, NodeTransfer, Point, Rect, ZoneLabel};
pub use params::{InitialShape, ModelParams, SimParams, SolverSettings, SweepOrder, ZoneTargets};
pub use simulation::{initialize, run, step, Observer, SimState, StepDiagnostics};
