//! Triangle meshes with the edge-based connectivity the surface pass needs.
//!
//! Every edge has a *left* element and either a *right* element or a
//! boundary code. For interior edges the element with the lower index is the
//! left one. The edge normal points from left to right, so on the boundary
//! it points out of the domain. Edge vertices are stored in the left
//! element's counter-clockwise order; the right element traverses the same
//! edge in the opposite direction.
//!
//! Boundary edges come first in the edge list, grouped by code
//! (`-1, -2, ...`), followed by interior edges ordered by left element.

mod connectivity;
pub mod geometry;
mod gmsh;

pub use connectivity::build_connectivity;
pub use geometry::{edge_geometry, element_jacobian};
pub use gmsh::parse_msh;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unsupported mesh format version {version} (only ASCII 2.2 is read)")]
    UnsupportedVersion { line: usize, version: String },
    #[error("missing {0} section")]
    MissingSection(&'static str),
    #[error("line {line}: element references undefined node {node}")]
    UndefinedNode { line: usize, node: u64 },
    #[error("line {line}: element type {kind} is not a triangle")]
    NonTriangleElement { line: usize, kind: u32 },
    #[error("triangle {element} repeats a vertex")]
    RepeatedVertex { element: usize },
    #[error("degenerate element (det J = {det})")]
    DegenerateElement { det: f64 },
    #[error("zero-length edge")]
    ZeroLengthEdge,
    #[error("edge ({0}, {1}) is shared by {2} triangles")]
    NonManifoldEdge(usize, usize, usize),
    #[error("hull edge ({0}, {1}) has no boundary tag")]
    UntaggedBoundaryEdge(usize, usize),
}

/// Boundary condition type of a boundary edge, stored as a negative integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryCode(pub i32);

impl BoundaryCode {
    /// Slip wall, reflected about the straight edge.
    pub const REFLECTING: Self = Self(-1);
    /// Slip wall, reflected about the exact curved-boundary normal.
    pub const CURVED_REFLECTING: Self = Self(-2);
    /// Prescribed (Dirichlet) state.
    pub const INFLOW: Self = Self(-3);
    /// Copy of the interior state.
    pub const OUTFLOW: Self = Self(-4);
    /// Post- or pre-shock state depending on a moving front.
    pub const MOVING_SHOCK: Self = Self(-5);
}

impl fmt::Display for BoundaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Mesh as read from a file: vertices, triangles and tagged boundary lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeshSource {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<BoundarySegment>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub vertices: [usize; 2],
    pub code: BoundaryCode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    /// Counter-clockwise vertex indices.
    pub vertices: [usize; 3],
    /// `edges[k]` joins local vertices `k` and `k + 1` and is mapped onto
    /// canonical side `k`.
    pub edges: [usize; 3],
    pub jacobian_det: f64,
    /// `det J * J^-1`.
    pub jacobian_tau: [[f64; 2]; 2],
}

/// What lies on the right of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RightSide {
    Element { index: usize, side: usize },
    Boundary(BoundaryCode),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoints in the left element's counter-clockwise order.
    pub vertices: [usize; 2],
    pub left: usize,
    /// Canonical side (0..3) this edge maps to under the left element.
    pub left_side: usize,
    pub right: RightSide,
    /// Unit normal pointing from left to right.
    pub normal: [f64; 2],
    /// Half the edge length, the Jacobian of the map from `[-1, 1]`.
    pub half_length: f64,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        matches!(self.right, RightSide::Boundary(_))
    }

    /// Right element index, or the boundary code as a negative number.
    pub fn right_code(&self) -> i64 {
        match self.right {
            RightSide::Element { index, .. } => index as i64,
            RightSide::Boundary(c) => c.0 as i64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub elements: Vec<Element>,
    pub edges: Vec<Edge>,
    pub n_boundary_edges: usize,
}

impl Mesh {
    /// Parse `.msh` text and build connectivity.
    pub fn from_msh(text: &str) -> Result<Self, MeshError> {
        build_connectivity(&parse_msh(text)?)
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn element_vertices(&self, i: usize) -> [[f64; 2]; 3] {
        let v = &self.elements[i].vertices;
        [self.vertices[v[0]], self.vertices[v[1]], self.vertices[v[2]]]
    }

    pub fn edge_vertices(&self, e: usize) -> [[f64; 2]; 2] {
        let v = &self.edges[e].vertices;
        [self.vertices[v[0]], self.vertices[v[1]]]
    }

    pub fn area(&self) -> f64 {
        self.elements.iter().map(|e| 0.5 * e.jacobian_det).sum()
    }

    /// Elements sharing an interior edge with element `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.elements[i].edges.iter().filter_map(move |&e| {
            let edge = &self.edges[e];
            match edge.right {
                RightSide::Element { index, .. } if edge.left == i => Some(index),
                RightSide::Element { .. } => Some(edge.left),
                RightSide::Boundary(_) => None,
            }
        })
    }

    /// Plain-text connectivity dump, one edge per line:
    /// `v0 v1 left right L R nx ny half_length`.
    ///
    /// Indices are 0-based, `right` is the boundary code on boundary edges,
    /// side labels are 1-based and `R` is `-` on boundary edges.
    pub fn connectivity_dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let r_side = match e.right {
                RightSide::Element { side, .. } => (side + 1).to_string(),
                RightSide::Boundary(_) => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {:?} {:?} {:?}",
                e.vertices[0],
                e.vertices[1],
                e.left,
                e.right_code(),
                e.left_side + 1,
                r_side,
                e.normal[0],
                e.normal[1],
                e.half_length
            );
        }
        out
    }
}
