//! Orthonormal modal basis, quadrature rules and the precomputed tables the
//! solver passes read.
//!
//! Canonical side convention, shared by the mesh side maps and the edge
//! tables (0-based index here, label `index + 1` in dumps):
//!
//! | side | from    | to      |
//! |------|---------|---------|
//! | 0    | `(0,0)` | `(1,0)` |
//! | 1    | `(1,0)` | `(0,1)` |
//! | 2    | `(0,1)` | `(0,0)` |
//!
//! Each side is traversed counter-clockwise, and Gauss points on a side are
//! stored in that traversal order.

mod polynomial;
pub mod quadrature;
mod tables;

pub use polynomial::{mode_count, mode_indices};
pub use quadrature::{gauss_legendre, interior_quadrature, Rule};
pub use tables::BasisTables;

use thiserror::Error;

/// Highest supported polynomial degree.
pub const MAX_DEGREE: usize = 5;

/// Corners of the canonical triangle in counter-clockwise order.
pub const CANONICAL_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("polynomial degree {0} is not supported (expected 1..=5)")]
    UnsupportedDegree(usize),
    #[error("basis index {index} out of range for degree {p} ({count} modes)")]
    IndexOutOfRange { p: usize, index: usize, count: usize },
}

/// Start and end corner of canonical side `side` (0, 1 or 2).
pub fn canonical_side(side: usize) -> ([f64; 2], [f64; 2]) {
    (CANONICAL_VERTICES[side], CANONICAL_VERTICES[(side + 1) % 3])
}

/// Map `xi` in `[-1, 1]` onto canonical side `side`, counter-clockwise.
pub fn side_point(side: usize, xi: f64) -> [f64; 2] {
    let (a, b) = canonical_side(side);
    let (wa, wb) = (0.5 * (1.0 - xi), 0.5 * (1.0 + xi));
    [wa * a[0] + wb * b[0], wa * a[1] + wb * b[1]]
}

/// The modal basis of degree `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    p: usize,
}

impl Basis {
    pub fn new(p: usize) -> Result<Self, BasisError> {
        if !(1..=MAX_DEGREE).contains(&p) {
            return Err(BasisError::UnsupportedDegree(p));
        }
        Ok(Self { p })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        mode_count(self.p)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check(&self, j: usize) -> Result<(), BasisError> {
        if j >= self.len() {
            return Err(BasisError::IndexOutOfRange {
                p: self.p,
                index: j,
                count: self.len(),
            });
        }
        Ok(())
    }

    /// Values and `(d/dr, d/ds)` gradients of every mode at `point`.
    pub fn eval_with_grad(&self, point: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let mut phi = vec![0.0; self.len()];
        let mut grad = vec![[0.0; 2]; self.len()];
        polynomial::eval_modes(self.p, point[0], point[1], &mut phi, &mut grad);
        (phi, grad)
    }

    /// Value of mode `j` at `point = (r, s)`.
    pub fn eval(&self, j: usize, point: [f64; 2]) -> Result<f64, BasisError> {
        self.check(j)?;
        Ok(self.eval_all(point)[j])
    }

    /// `(d/dr, d/ds)` of mode `j` at `point`.
    pub fn eval_grad(&self, j: usize, point: [f64; 2]) -> Result<[f64; 2], BasisError> {
        self.check(j)?;
        Ok(self.eval_with_grad(point).1[j])
    }

    /// All mode values at `point`.
    pub fn eval_all(&self, point: [f64; 2]) -> Vec<f64> {
        self.eval_with_grad(point).0
    }
}

/// Value of mode `j` (0-based) of the degree-`p` basis at `point`.
///
pub fn eval_basis(p: usize, j: usize, point: [f64; 2]) -> Result<f64, BasisError> {
    Basis::new(p)?.eval(j, point)
}
