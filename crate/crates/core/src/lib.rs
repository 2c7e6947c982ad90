//! Modal discontinuous Galerkin solver for 2D hyperbolic conservation laws
//! on unstructured triangle meshes, instantiated for the Euler equations.
//!
//! * [`mesh`]: GMSH reader, edge connectivity, element and edge geometry.
//! * [`basis`]: orthonormal modal basis, quadrature, precomputed tables.
//! * [`euler`]: fluxes, Lax–Friedrichs numerical flux, ghost states.
//! * [`solver`]: coefficient layout, volume/surface/gather passes,
//!   Barth–Jespersen limiter, time stepping.

pub mod basis;
pub mod euler;
pub mod mesh;
pub mod solver;

pub use basis::BasisTables;
pub use euler::{Euler, EulerState, GasModel};
pub use mesh::{BoundaryCode, Mesh};
pub use solver::{CoefficientArray, ConservationLaw, Solver, SolverOptions, SolverState};

/// The book's chapters, compiled as doc-tests so their snippets stay in
/// step with the code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/mesh.md")]
    struct Mesh;
    #[doc = include_str!("../../../book/src/basis.md")]
    struct Basis;
    #[doc = include_str!("../../../book/src/passes.md")]
    struct Passes;
    #[doc = include_str!("../../../book/src/limiter.md")]
    struct Limiter;
    #[doc = include_str!("../../../book/src/time.md")]
    struct Time;
}
