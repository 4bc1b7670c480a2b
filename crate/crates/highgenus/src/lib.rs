//! Combinatorial surfaces whose genus grows quadratically in the vertex
//! number, and exact polyhedral realizations of the mirror quad-surfaces.
//!
//! The crate has three layers:
//!
//! * **combinatorics** — [`surface`] (closed-surface validation and
//!   invariants), [`rotation`] (rotation schemes and the current-graph
//!   generator for the n = 12s+7 triangulations), [`heffter`]
//!   (self-dual finite-field surfaces), and [`mirror`] (the quad surface
//!   inside the m-cube);
//! * **exact geometry** — [`rational`] and [`linalg`] scalars and solvers,
//!   [`geom`] (the deformed-cube coordinatization), [`hull`] (exact 4-d
//!   convex hulls), and [`schlegel`] (projection into a facet);
//! * **certification and I/O** — [`verify`] (exact embedding checks) and
//!   [`io`] (OFF/OBJ/JSON export and import).

pub mod rational;
pub mod linalg;
pub mod surface;
pub mod rotation;
pub mod heffter;
pub mod mirror;
pub mod geom;
pub mod hull;
pub mod schlegel;
pub mod verify;
pub mod io;
