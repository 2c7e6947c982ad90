//! Coefficient storage, the three data-parallel passes (volume, surface,
//! right-hand-side gather), the slope limiter and time stepping.
//!
//! A right-hand-side evaluation runs three passes separated by full
//! synchronisation:
//!
//! 1. **volume**: one work item per element, reading only that element's
//!    coefficients, writing its `N_EQ * n_p` volume-integral values;
//! 2. **surface**: one work item per edge. The numerical flux at each edge
//!    Gauss point is computed once and its two contributions go to the
//!    edge's own row of a *left* and a *right* buffer, so no two edges ever
//!    write the same slot;
//! 3. **gather**: one work item per element, summing the volume term and
//!    the left-or-right slot of each of its three edges, divided by `det J`.
//!
//! Work items are grouped in chunks of `chunk_size` and run on a private
//! worker pool. Every sum is taken in a fixed order, so the result does not
//! depend on the number of workers.

mod coeffs;
mod limiter;
mod passes;
mod time;

pub use coeffs::{CoefficientArray, Checkpoint, N_EQ};
pub use passes::{right_trace_index, SurfaceBuffers, TraceOrder};
pub use time::{RkOrder, SteadyReport, Timings};

use std::fmt;

use rayon::ThreadPool;
use thiserror::Error;

use crate::basis::BasisTables;
use crate::euler::PhysicsError;
use crate::mesh::geometry::{inradius, map_to_physical};
use crate::mesh::{BoundaryCode, Mesh};

/// Conserved variables at a point.
pub type State = [f64; N_EQ];

/// A system of four conservation laws `U_t + div F(U) = 0` together with its
/// numerical flux and boundary treatment.
pub trait ConservationLaw: Sync {
    /// The x and y flux columns.
    fn flux(&self, u: &State) -> Result<(State, State), PhysicsError>;
    /// Numerical flux across a face with unit normal `n` pointing from
    /// `ul` to `ur`.
    fn numerical_flux(&self, ul: &State, ur: &State, n: [f64; 2]) -> Result<State, PhysicsError>;
    fn max_wave_speed(&self, u: &State, n: [f64; 2]) -> Result<f64, PhysicsError>;
    /// Exterior state on a boundary edge at physical point `x`, time `t`.
    fn ghost(&self, u: &State, code: BoundaryCode, x: [f64; 2], n: [f64; 2], t: f64) -> Result<State, PhysicsError>;
    /// Admissibility check, by default whether the flux can be evaluated.
    fn check(&self, u: &State) -> Result<(), PhysicsError> {
        self.flux(u).map(|_| ())
    }
    /// Positive exactly on admissible states, with convex superlevel sets.
    /// Only the positivity guard reads it; by default nothing is excluded.
    fn margin(&self, _u: &State) -> f64 {
        f64::INFINITY
    }
}

/// Where in the mesh something went wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// Interior quadrature point of an element.
    Interior { element: usize, point: usize },
    /// Gauss point of an edge.
    Edge { edge: usize, point: usize },
    /// Midpoint of an element side.
    SideMidpoint { element: usize, side: usize },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Location::Interior { element, point } => write!(f, "element {element}, interior point {point}"),
            Location::Edge { edge, point } => write!(f, "edge {edge}, point {point}"),
            Location::SideMidpoint { element, side } => write!(f, "element {element}, side {} midpoint", side + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("{location}: {source}")]
    Physics { location: Location, source: PhysicsError },
    #[error("RK stage {stage} (t = {t}): {inner}")]
    Stage { stage: usize, t: f64, inner: Box<SolverError> },
    #[error("limiting is only defined for p = 1, got p = {0}")]
    LimiterDegree(usize),
    #[error("no steady state after {steps} steps (last residual {residual:e})")]
    NotConverged { steps: usize, residual: f64 },
    #[error("non-positive time step {0:e}")]
    BadTimestep(f64),
    #[error("coefficient array has shape ({n_p}, {n}), solver expects ({expect_p}, {expect_n})")]
    Shape { n_p: usize, n: usize, expect_p: usize, expect_n: usize },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl SolverError {
    fn at(location: Location) -> impl FnOnce(PhysicsError) -> SolverError {
        move |source| SolverError::Physics { location, source }
    }
}

/// First error in index order, so reported failures do not depend on
/// scheduling.
fn first_error(results: Vec<Result<(), SolverError>>) -> Result<(), SolverError> {
    results.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rk_order: RkOrder,
    pub limiting: bool,
    /// When limiting, also pull the linear modes toward the mean until the
    /// state is admissible at the element's vertices.
    pub positivity: bool,
    pub cfl: f64,
    /// Worker threads; `None` uses one per core.
    pub workers: Option<usize>,
    pub chunk_size: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rk_order: RkOrder::Rk4,
            limiting: false,
            positivity: false,
            cfl: 0.3,
            workers: None,
            chunk_size: 256,
        }
    }
}

/// Coefficients together with the time they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub coeffs: CoefficientArray,
    pub t: f64,
    pub step: u64,
}

impl SolverState {
    pub fn new(coeffs: CoefficientArray) -> Self {
        Self { coeffs, t: 0.0, step: 0 }
    }
}

pub struct Solver<'m, L> {
    mesh: &'m Mesh,
    tables: BasisTables,
    law: L,
    opts: SolverOptions,
    pool: ThreadPool,
    /// Physical Gauss points of the boundary edges, `[e * n_edge + k]`.
    boundary_points: Vec<[f64; 2]>,
    inradius: Vec<f64>,
    /// Basis values at the three side midpoints, `[side * n_p + j]`.
    mid_phi: Vec<f64>,
    /// Basis values at the centroid.
    centroid_phi: Vec<f64>,
    /// Edge neighbours of every element for the limiter, `NO_NEIGHBOR`
    /// across boundary edges. Empty without limiting.
    neighbors: Vec<[usize; 3]>,
    scratch: Option<Scratch>,
    timings: Timings,
}

struct Scratch {
    volume: CoefficientArray,
    surface: SurfaceBuffers,
}

impl<'m, L: ConservationLaw> Solver<'m, L> {
    pub fn new(mesh: &'m Mesh, tables: BasisTables, law: L, opts: SolverOptions) -> Result<Self, SolverError> {
        if opts.limiting && tables.p != 1 {
            return Err(SolverError::LimiterDegree(tables.p));
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = opts.workers {
            builder = builder.num_threads(w.max(1));
        }
        let pool = builder.build().map_err(|e| SolverError::Pool(e.to_string()))?;

        let ne = tables.n_edge();
        let mut boundary_points = Vec::with_capacity(mesh.n_boundary_edges * ne);
        for e in 0..mesh.n_boundary_edges {
            let edge = &mesh.edges[e];
            let v = mesh.element_vertices(edge.left);
            for k in 0..ne {
                boundary_points.push(map_to_physical(&v, tables.r_edge[k][edge.left_side]));
            }
        }
        let inradius = (0..mesh.n_elements()).map(|i| inradius(&mesh.element_vertices(i))).collect();
        let basis = crate::basis::Basis::new(tables.p).expect("tables were built for a supported degree");
        let mut mid_phi = Vec::with_capacity(3 * tables.n_modes);
        for side in 0..3 {
            mid_phi.extend(basis.eval_all(crate::basis::side_point(side, 0.0)));
        }
        let centroid_phi = basis.eval_all([1.0 / 3.0, 1.0 / 3.0]);
        let neighbors = if opts.limiting {
            (0..mesh.n_elements())
                .map(|i| {
                    let mut nb = [limiter::NO_NEIGHBOR; 3];
                    for (slot, j) in nb.iter_mut().zip(mesh.neighbors(i)) {
                        *slot = j;
                    }
                    nb
                })
                .collect()
        } else {
            Vec::new()
        };

        Ok(Self {
            mesh,
            tables,
            law,
            opts,
            pool,
            boundary_points,
            inradius,
            mid_phi,
            centroid_phi,
            neighbors,
            scratch: None,
            timings: Timings::default(),
        })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn tables(&self) -> &BasisTables {
        &self.tables
    }

    pub fn law(&self) -> &L {
        &self.law
    }

    pub fn options(&self) -> &SolverOptions {
        &self.opts
    }

    pub fn timings(&self) -> &Timings {
        &self.timings
    }

    pub fn reset_timings(&mut self) {
        self.timings = Timings::default();
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn zeros(&self) -> CoefficientArray {
        CoefficientArray::zeros(self.tables.n_modes, self.mesh.n_elements())
    }

    fn check_shape(&self, c: &CoefficientArray) -> Result<(), SolverError> {
        if c.n_modes() != self.tables.n_modes || c.n_elements() != self.mesh.n_elements() {
            return Err(SolverError::Shape {
                n_p: c.n_modes(),
                n: c.n_elements(),
                expect_p: self.tables.n_modes,
                expect_n: self.mesh.n_elements(),
            });
        }
        Ok(())
    }

    /// L2 projection of `u0`, checked for admissibility at every interior
    /// quadrature point.
    pub fn project<F>(&self, u0: F) -> Result<CoefficientArray, SolverError>
    where
        F: Fn([f64; 2]) -> State + Sync,
    {
        for i in 0..self.mesh.n_elements() {
            let v = self.mesh.element_vertices(i);
            for (k, &rs) in self.tables.r_interior.iter().enumerate() {
                self.law
                    .check(&u0(map_to_physical(&v, rs)))
                    .map_err(SolverError::at(Location::Interior { element: i, point: k }))?;
            }
        }
        Ok(project_initial(u0, self.mesh, &self.tables))
    }

    /// Element-average state of element `i`.
    pub fn centroid_value(&self, c: &CoefficientArray, i: usize) -> State {
        c.eval(i, &self.centroid_phi)
    }
}

/// L2 projection onto the modal basis:
/// `c_{i,j} = sum_k w_k u0(x_i(r_k)) phi_j(r_k)`.
///
/// The basis is orthonormal on the canonical triangle, whose quadrature
/// weights sum to its area 1/2, so no mass matrix needs to be inverted.
pub fn project_initial<F>(u0: F, mesh: &Mesh, tables: &BasisTables) -> CoefficientArray
where
    F: Fn([f64; 2]) -> State,
{
    let np = tables.n_modes;
    let mut c = CoefficientArray::zeros(np, mesh.n_elements());
    for i in 0..mesh.n_elements() {
        let v = mesh.element_vertices(i);
        for (k, &rs) in tables.r_interior.iter().enumerate() {
            let u = u0(map_to_physical(&v, rs));
            let w = tables.w_interior[k];
            let phi = tables.phi(k);
            for (m, um) in u.iter().enumerate() {
                for (j, p) in phi.iter().enumerate() {
                    let idx = c.index(m, j, i);
                    c.data_mut()[idx] += w * um * p;
                }
            }
        }
    }
    c
}

impl ConservationLaw for crate::euler::Euler {
    fn flux(&self, u: &State) -> Result<(State, State), PhysicsError> {
        crate::euler::flux(&(*u).into(), &self.gas)
    }

    fn numerical_flux(&self, ul: &State, ur: &State, n: [f64; 2]) -> Result<State, PhysicsError> {
        crate::euler::riemann_solver(&(*ul).into(), &(*ur).into(), n, &self.gas)
    }

    fn max_wave_speed(&self, u: &State, n: [f64; 2]) -> Result<f64, PhysicsError> {
        crate::euler::max_wave_speed(&(*u).into(), n, &self.gas)
    }

    fn ghost(&self, u: &State, code: BoundaryCode, x: [f64; 2], n: [f64; 2], t: f64) -> Result<State, PhysicsError> {
        crate::euler::ghost_state(&(*u).into(), code, x, n, t, &self.bc).map(Into::into)
    }

    fn check(&self, u: &State) -> Result<(), PhysicsError> {
        crate::euler::pressure(&(*u).into(), &self.gas).map(|_| ())
    }

    /// `min(rho, p)`; pressure is concave in the conserved variables where
    /// `rho > 0`.
    fn margin(&self, u: &State) -> f64 {
        let [rho, mx, my, e] = *u;
        if rho <= 0.0 {
            return rho;
        }
        let p = (self.gas.gamma - 1.0) * (e - 0.5 * (mx * mx + my * my) / rho);
        rho.min(p)
    }
}
