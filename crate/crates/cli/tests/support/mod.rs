#![allow(dead_code)]

//! Meshes, laws and the naive reference right-hand side used by the
//! acceptance checks.

use dg2d::basis::{gauss_legendre, Basis, Rule};
use dg2d::euler::PhysicsError;
use dg2d::mesh::{build_connectivity, BoundarySegment, MeshSource};
use dg2d::solver::{ConservationLaw, State};
use dg2d::{BoundaryCode, CoefficientArray, Mesh};
use rand::seq::SliceRandom;
use rand::Rng;

/// `nx x ny` cells on `[0, lx] x [0, ly]`, two triangles each.
/// `codes` are for the bottom, right, top and left sides. Every vertex not
/// on a side is moved by up to `jitter` cells; `shuffle` randomises the
/// diagonal, the vertex order of each triangle and the element order.
pub fn rect<R: Rng>(nx: usize, ny: usize, size: [f64; 2], codes: [BoundaryCode; 4], jitter: f64, shuffle: Option<&mut R>) -> MeshSource {
    rect_with(nx, ny, size, |side, _| codes[side], jitter, shuffle)
}

/// [`rect`] with the code of each boundary segment chosen by
/// `code(side, index along the side)`.
pub fn rect_with<R: Rng>(
    nx: usize,
    ny: usize,
    size: [f64; 2],
    mut code: impl FnMut(usize, usize) -> BoundaryCode,
    jitter: f64,
    mut shuffle: Option<&mut R>,
) -> MeshSource {
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let (hx, hy) = (size[0] / nx as f64, size[1] / ny as f64);
    let mut vertices = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let mut v = [i as f64 * hx, j as f64 * hy];
            if let Some(rng) = shuffle.as_deref_mut() {
                if i > 0 && i < nx && j > 0 && j < ny {
                    v[0] += jitter * hx * rng.gen_range(-1.0..1.0);
                    v[1] += jitter * hy * rng.gen_range(-1.0..1.0);
                }
            }
            vertices.push(v);
        }
    }
    let mut triangles = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let mut pair = [[a, b, c], [a, c, d]];
            if let Some(rng) = shuffle.as_deref_mut() {
                if rng.gen_bool(0.5) {
                    pair = [[a, b, d], [b, c, d]];
                }
                for t in &mut pair {
                    t.rotate_left(rng.gen_range(0..3));
                    if rng.gen_bool(0.5) {
                        t.swap(1, 2);
                    }
                }
            }
            triangles.extend(pair);
        }
    }
    if let Some(rng) = shuffle.as_deref_mut() {
        triangles.shuffle(rng);
    }
    let mut boundary = Vec::new();
    for i in 0..nx {
        boundary.push(BoundarySegment { vertices: [id(i, 0), id(i + 1, 0)], code: code(0, i) });
        boundary.push(BoundarySegment { vertices: [id(i, ny), id(i + 1, ny)], code: code(2, i) });
    }
    for j in 0..ny {
        boundary.push(BoundarySegment { vertices: [id(nx, j), id(nx, j + 1)], code: code(1, j) });
        boundary.push(BoundarySegment { vertices: [id(0, j), id(0, j + 1)], code: code(3, j) });
    }
    MeshSource { vertices, triangles, boundary }
}

/// Random mesh of at most eight elements with random boundary codes drawn
/// from `codes`, squeezed and sheared by a random affine map.
pub fn small_mesh<R: Rng>(rng: &mut R, codes: &[BoundaryCode]) -> Mesh {
    const SHAPES: [(usize, usize); 8] = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (4, 1), (1, 4)];
    loop {
        let (nx, ny) = SHAPES[rng.gen_range(0..SHAPES.len())];
        let mut src = rect_with(nx, ny, [nx as f64, ny as f64], |_, _| codes[rng.gen_range(0..codes.len())], 0.0, None::<&mut R>);
        let a = [
            [rng.gen_range(0.5..1.5), rng.gen_range(-0.4..0.4)],
            [rng.gen_range(-0.4..0.4), rng.gen_range(0.5..1.5)],
        ];
        let shift = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        for v in &mut src.vertices {
            let w = [v[0] + 0.3 * rng.gen_range(-1.0..1.0), v[1] + 0.3 * rng.gen_range(-1.0..1.0)];
            *v = [
                a[0][0] * w[0] + a[0][1] * w[1] + shift[0],
                a[1][0] * w[0] + a[1][1] * w[1] + shift[1],
            ];
        }
        for t in &mut src.triangles {
            t.rotate_left(rng.gen_range(0..3));
            if rng.gen_bool(0.5) {
                t.swap(1, 2);
            }
        }
        src.triangles.shuffle(rng);
        if let Ok(mesh) = build_connectivity(&src) {
            if (0..mesh.n_elements()).all(|i| mesh.elements[i].jacobian_det > 1e-2) {
                return mesh;
            }
        }
    }
}

/// Euler flux with every boundary replaced by the same constant state.
pub struct FreeStream {
    pub inner: dg2d::Euler,
    pub state: State,
}

impl ConservationLaw for FreeStream {
    fn flux(&self, u: &State) -> Result<(State, State), PhysicsError> {
        self.inner.flux(u)
    }
    fn numerical_flux(&self, ul: &State, ur: &State, n: [f64; 2]) -> Result<State, PhysicsError> {
        self.inner.numerical_flux(ul, ur, n)
    }
    fn max_wave_speed(&self, u: &State, n: [f64; 2]) -> Result<f64, PhysicsError> {
        self.inner.max_wave_speed(u, n)
    }
    fn ghost(&self, _u: &State, _code: BoundaryCode, _x: [f64; 2], _n: [f64; 2], _t: f64) -> Result<State, PhysicsError> {
        Ok(self.state)
    }
}

/// Scalar advection of each component with velocity `a`, upwind flux,
/// outflow-only boundaries.
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

/// Physical-to-reference map of a triangle, computed from scratch.
struct Affine {
    v0: [f64; 2],
    j: [[f64; 2]; 2],
    det: f64,
}

impl Affine {
    fn new(v: &[[f64; 2]; 3]) -> Self {
        let j = [[v[1][0] - v[0][0], v[2][0] - v[0][0]], [v[1][1] - v[0][1], v[2][1] - v[0][1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        Self { v0: v[0], j, det }
    }

    fn to_physical(&self, r: [f64; 2]) -> [f64; 2] {
        [
            self.v0[0] + self.j[0][0] * r[0] + self.j[0][1] * r[1],
            self.v0[1] + self.j[1][0] * r[0] + self.j[1][1] * r[1],
        ]
    }

    fn to_reference(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.v0[0], x[1] - self.v0[1]];
        [
            (self.j[1][1] * d[0] - self.j[0][1] * d[1]) / self.det,
            (-self.j[1][0] * d[0] + self.j[0][0] * d[1]) / self.det,
        ]
    }

    /// Physical gradient from a reference one: `J^-T g`.
    fn grad(&self, g: [f64; 2]) -> [f64; 2] {
        [
            (self.j[1][1] * g[0] - self.j[1][0] * g[1]) / self.det,
            (-self.j[0][1] * g[0] + self.j[0][0] * g[1]) / self.det,
        ]
    }
}

fn value_at(c: &CoefficientArray, basis: &Basis, i: usize, r: [f64; 2]) -> State {
    let phi = basis.eval_all(r);
    std::array::from_fn(|m| (0..phi.len()).map(|j| c.get(m, j, i) * phi[j]).sum())
}

/// Time derivative of every coefficient, `out[(i * 4 + m) * n_p + j]`,
/// computed element by element: basis evaluated directly at every point,
/// neighbour traces found by searching the mesh for the element sharing
/// the side and inverting its map, boundary codes looked up by vertex pair.
/// Each interior edge integral is therefore computed twice, once from each
/// side. `volume_rule` and `edge_points` set the quadrature.
pub fn reference_rhs<L: ConservationLaw>(law: &L, mesh: &Mesh, p: usize, c: &CoefficientArray, t: f64, volume_rule: &Rule<[f64; 2]>, edge_points: usize) -> Vec<f64> {
    let basis = Basis::new(p).unwrap();
    let np = basis.len();
    let gl = gauss_legendre(edge_points);
    let maps: Vec<Affine> = (0..mesh.n_elements()).map(|i| Affine::new(&mesh.element_vertices(i))).collect();
    let mut out = vec![0.0; mesh.n_elements() * 4 * np];
    for i in 0..mesh.n_elements() {
        let map = &maps[i];
        let area = map.det.abs();
        let mut acc = vec![[0.0; 4]; np];
        for (k, &r) in volume_rule.points.iter().enumerate() {
            let (phi, grad) = basis.eval_with_grad(r);
            let u: State = std::array::from_fn(|m| (0..np).map(|j| c.get(m, j, i) * phi[j]).sum());
            let (f1, f2) = law.flux(&u).unwrap();
            for j in 0..np {
                let g = map.grad(grad[j]);
                for m in 0..4 {
                    acc[j][m] += volume_rule.weights[k] * area * (f1[m] * g[0] + f2[m] * g[1]);
                }
            }
        }
        let verts = mesh.elements[i].vertices;
        let centroid = {
            let v = mesh.element_vertices(i);
            [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0]
        };
        for s in 0..3 {
            let (ia, ib) = (verts[s], verts[(s + 1) % 3]);
            let (a, b) = (mesh.vertices[ia], mesh.vertices[ib]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let mut n = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
            let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            if n[0] * (mid[0] - centroid[0]) + n[1] * (mid[1] - centroid[1]) < 0.0 {
                n = [-n[0], -n[1]];
            }
            let other = (0..mesh.n_elements()).find(|&o| o != i && mesh.elements[o].vertices.contains(&ia) && mesh.elements[o].vertices.contains(&ib));
            for (k, &xi) in gl.points.iter().enumerate() {
                let x = [mid[0] + xi * (b[0] - a[0]) / 2.0, mid[1] + xi * (b[1] - a[1]) / 2.0];
                let r = map.to_reference(x);
                let ui = value_at(c, &basis, i, r);
                let uo = match other {
                    Some(o) => value_at(c, &basis, o, maps[o].to_reference(x)),
                    None => {
                        let edge = mesh
                            .edges
                            .iter()
                            .find(|e| e.vertices.contains(&ia) && e.vertices.contains(&ib))
                            .unwrap();
                        let code = BoundaryCode(edge.right_code() as i32);
                        law.ghost(&ui, code, x, n, t).unwrap()
                    }
                };
                let f = law.numerical_flux(&ui, &uo, n).unwrap();
                let phi = basis.eval_all(r);
                for j in 0..np {
                    for m in 0..4 {
                        acc[j][m] -= gl.weights[k] * len / 2.0 * f[m] * phi[j];
                    }
                }
            }
        }
        // mass matrix on the element is |det J| times the identity
        for j in 0..np {
            for m in 0..4 {
                out[(i * 4 + m) * np + j] = acc[j][m] / area;
            }
        }
    }
    out
}

/// Physical point of reference point `r` in element `i`.
pub fn physical(mesh: &Mesh, i: usize, r: [f64; 2]) -> [f64; 2] {
    Affine::new(&mesh.element_vertices(i)).to_physical(r)
}

/// A strip of `n` equilateral triangles of unit side along the x axis,
/// alternately pointing up and down.
pub fn strip(n: usize, code: BoundaryCode) -> Mesh {
    let h = 3f64.sqrt() / 2.0;
    let n_bottom = n.div_ceil(2) + 1;
    let n_top = n / 2 + 1;
    let mut vertices: Vec<[f64; 2]> = (0..n_bottom).map(|i| [i as f64, 0.0]).collect();
    vertices.extend((0..n_top).map(|i| [i as f64 + 0.5, h]));
    let t = |i: usize| n_bottom + i;
    let triangles = (0..n)
        .map(|k| {
            let i = k / 2;
            if k % 2 == 0 {
                [i, i + 1, t(i)]
            } else {
                [i + 1, t(i + 1), t(i)]
            }
        })
        .collect();
    let mut segments: Vec<[usize; 2]> = (0..n_bottom - 1).map(|i| [i, i + 1]).collect();
    segments.extend((0..n_top - 1).map(|i| [t(i), t(i + 1)]));
    segments.push([0, t(0)]);
    segments.push([n_bottom - 1, t(n_top - 1)]);
    let boundary = segments.into_iter().map(|vertices| BoundarySegment { vertices, code }).collect();
    build_connectivity(&MeshSource { vertices, triangles, boundary }).unwrap()
}
