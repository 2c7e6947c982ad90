#![allow(dead_code)]

use dg2d::mesh::{build_connectivity, BoundarySegment, MeshSource};
use dg2d::solver::{ConservationLaw, State};
use dg2d::euler::PhysicsError;
use dg2d::{BoundaryCode, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `nx * ny` cells on `[x0, x1] x [y0, y1]`, each split into two triangles.
/// `codes` are the boundary codes of the bottom, right, top and left sides.
/// `jitter` moves interior vertices by up to that fraction of a cell;
/// `flip` randomly lists triangles clockwise.
pub fn rect_source(nx: usize, ny: usize, lo: [f64; 2], hi: [f64; 2], codes: [BoundaryCode; 4], jitter: f64, seed: u64) -> MeshSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let hx = (hi[0] - lo[0]) / nx as f64;
    let hy = (hi[1] - lo[1]) / ny as f64;
    let mut vertices = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let mut x = lo[0] + i as f64 * hx;
            let mut y = lo[1] + j as f64 * hy;
            if i > 0 && i < nx && j > 0 && j < ny && jitter > 0.0 {
                x += jitter * hx * rng.gen_range(-1.0..1.0);
                y += jitter * hy * rng.gen_range(-1.0..1.0);
            }
            vertices.push([x, y]);
        }
    }
    let mut triangles = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let (t1, t2) = if (i + j) % 2 == 0 { ([a, b, c], [a, c, d]) } else { ([a, b, d], [b, c, d]) };
            for t in [t1, t2] {
                if jitter > 0.0 && rng.gen_bool(0.3) {
                    triangles.push([t[0], t[2], t[1]]);
                } else {
                    triangles.push(t);
                }
            }
        }
    }
    let mut boundary = Vec::new();
    let mut seg = |a, b, code| boundary.push(BoundarySegment { vertices: [a, b], code });
    for i in 0..nx {
        seg(id(i, 0), id(i + 1, 0), codes[0]);
        seg(id(i, ny), id(i + 1, ny), codes[2]);
    }
    for j in 0..ny {
        seg(id(nx, j), id(nx, j + 1), codes[1]);
        seg(id(0, j), id(0, j + 1), codes[3]);
    }
    MeshSource { vertices, triangles, boundary }
}

pub fn rect(nx: usize, ny: usize, code: BoundaryCode, jitter: f64, seed: u64) -> Mesh {
    build_connectivity(&rect_source(nx, ny, [0.0, 0.0], [1.0, 1.0], [code; 4], jitter, seed)).unwrap()
}

/// A strip of `n` equilateral triangles of unit side along the x axis,
/// alternately pointing up and down, with every side tagged `code`.
pub fn strip(n: usize, code: BoundaryCode) -> Mesh {
    let h = 3f64.sqrt() / 2.0;
    let n_bottom = n.div_ceil(2) + 1;
    let n_top = n / 2 + 1;
    let mut vertices: Vec<[f64; 2]> = (0..n_bottom).map(|i| [i as f64, 0.0]).collect();
    vertices.extend((0..n_top).map(|i| [i as f64 + 0.5, h]));
    let b = |i: usize| i;
    let t = |i: usize| n_bottom + i;
    let mut triangles = Vec::new();
    for k in 0..n {
        let i = k / 2;
        triangles.push(if k % 2 == 0 { [b(i), b(i + 1), t(i)] } else { [b(i + 1), t(i + 1), t(i)] });
    }
    let mut boundary = Vec::new();
    let mut seg = |a, b| boundary.push(BoundarySegment { vertices: [a, b], code });
    for i in 0..n_bottom - 1 {
        seg(b(i), b(i + 1));
    }
    for i in 0..n_top.saturating_sub(1) {
        seg(t(i), t(i + 1));
    }
    seg(b(0), t(0));
    seg(b(n_bottom - 1), t(n_top - 1));
    build_connectivity(&MeshSource { vertices, triangles, boundary }).unwrap()
}

/// Scalar advection `u_t + a . grad u = 0` applied to each of the four
/// components, with upwind flux and zero inflow data.
#[derive(Debug, Clone, Copy)]
pub struct Advection {
    pub a: [f64; 2],
}

impl ConservationLaw for Advection {
    fn flux(&self, u: &State) -> Result<(State, State), PhysicsError> {
        Ok((u.map(|v| self.a[0] * v), u.map(|v| self.a[1] * v)))
    }

    fn numerical_flux(&self, ul: &State, ur: &State, n: [f64; 2]) -> Result<State, PhysicsError> {
        let an = self.a[0] * n[0] + self.a[1] * n[1];
        Ok(std::array::from_fn(|m| if an >= 0.0 { an * ul[m] } else { an * ur[m] }))
    }

    fn max_wave_speed(&self, _u: &State, n: [f64; 2]) -> Result<f64, PhysicsError> {
        Ok((self.a[0] * n[0] + self.a[1] * n[1]).abs())
    }

    fn ghost(&self, u: &State, _code: BoundaryCode, _x: [f64; 2], _n: [f64; 2], _t: f64) -> Result<State, PhysicsError> {
        Ok(*u)
    }
}

/// Flux that does not depend on the state, so the time derivative is the
/// same constant for every state. The numerical flux adds `g * n_x^2`, which
/// does not telescope around an element, so the derivative is non-zero.
#[derive(Debug, Clone, Copy)]
pub struct ConstantFlux {
    pub f1: State,
    pub f2: State,
    pub g: State,
}

impl ConservationLaw for ConstantFlux {
    fn flux(&self, _u: &State) -> Result<(State, State), PhysicsError> {
        Ok((self.f1, self.f2))
    }

    fn numerical_flux(&self, _ul: &State, _ur: &State, n: [f64; 2]) -> Result<State, PhysicsError> {
        Ok(std::array::from_fn(|m| self.f1[m] * n[0] + self.f2[m] * n[1] + self.g[m] * n[0] * n[0]))
    }

    fn max_wave_speed(&self, _u: &State, _n: [f64; 2]) -> Result<f64, PhysicsError> {
        Ok(1.0)
    }

    fn ghost(&self, u: &State, _code: BoundaryCode, _x: [f64; 2], _n: [f64; 2], _t: f64) -> Result<State, PhysicsError> {
        Ok(*u)
    }
}
