//! Generated meshes and mesh loading.
//!
//! `vortex:A` .. `vortex:F` are the quarter-annulus meshes of the supersonic
//! vortex: a `(5 * 2^k) x (18 * 2^k)` grid in `(r, theta)`, every cell cut
//! along the same diagonal, vertices placed exactly on the arcs. Refining a
//! level by splitting every triangle into four in `(r, theta)` gives the
//! next level, so element counts are `180 * 4^k`.
//!
//! `dmr:NXxNY` is the double Mach reflection channel `[0, 4] x [0, 1]` cut
//! into `NX x NY` cells, two triangles each.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use dg2d::mesh::{build_connectivity, BoundarySegment, MeshError, MeshSource};
use dg2d::{BoundaryCode, Mesh};
use thiserror::Error;

use crate::problems::VortexGeometry;

#[derive(Debug, Error)]
pub enum MeshLoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Mesh { path: String, source: MeshError },
    #[error("bad mesh name `{0}` (use vortex:A..F, dmr:NXxNY or a .msh path)")]
    BadName(String),
}

/// Vortex level letter to refinement count.
pub fn vortex_level(name: &str) -> Option<u32> {
    match name {
        "A" => Some(0),
        "B" => Some(1),
        "C" => Some(2),
        "D" => Some(3),
        "E" => Some(4),
        "F" => Some(5),
        _ => None,
    }
}

/// `n_r x n_theta` structured quarter annulus with the vortex boundary
/// codes: inflow at `y = 0`, outflow at `x = 0`, curved walls on the arcs.
pub fn annulus(n_r: usize, n_theta: usize, geom: &VortexGeometry) -> MeshSource {
    let id = |j: usize, k: usize| k * (n_r + 1) + j;
    let mut vertices = Vec::with_capacity((n_r + 1) * (n_theta + 1));
    for k in 0..=n_theta {
        let th = FRAC_PI_2 * k as f64 / n_theta as f64;
        let (s, c) = if k == n_theta { (1.0, 0.0) } else { th.sin_cos() };
        for j in 0..=n_r {
            let r = geom.r_inner + (geom.r_outer - geom.r_inner) * j as f64 / n_r as f64;
            vertices.push([r * c, r * s]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n_r * n_theta);
    for k in 0..n_theta {
        for j in 0..n_r {
            let (a, b, c, d) = (id(j, k), id(j + 1, k), id(j + 1, k + 1), id(j, k + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary = Vec::new();
    let mut seg = |a, b, code| boundary.push(BoundarySegment { vertices: [a, b], code });
    for j in 0..n_r {
        seg(id(j, 0), id(j + 1, 0), BoundaryCode::INFLOW);
        seg(id(j, n_theta), id(j + 1, n_theta), BoundaryCode::OUTFLOW);
    }
    for k in 0..n_theta {
        seg(id(0, k), id(0, k + 1), BoundaryCode::CURVED_REFLECTING);
        seg(id(n_r, k), id(n_r, k + 1), BoundaryCode::CURVED_REFLECTING);
    }
    MeshSource { vertices, triangles, boundary }
}

pub fn vortex_mesh(level: u32, geom: &VortexGeometry) -> MeshSource {
    let f = 1usize << level;
    annulus(5 * f, 18 * f, geom)
}

/// Double Mach reflection channel. The bottom wall starts at `x0`; left of
/// it the bottom carries the post-shock inflow state.
pub fn dmr_mesh(nx: usize, ny: usize, x0: f64) -> MeshSource {
    let (lx, ly) = (4.0, 1.0);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([lx * i as f64 / nx as f64, ly * j as f64 / ny as f64]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary = Vec::new();
    let mut seg = |a, b, code| boundary.push(BoundarySegment { vertices: [a, b], code });
    for i in 0..nx {
        let mid = lx * (i as f64 + 0.5) / nx as f64;
        let bottom = if mid < x0 { BoundaryCode::INFLOW } else { BoundaryCode::REFLECTING };
        seg(id(i, 0), id(i + 1, 0), bottom);
        seg(id(i, ny), id(i + 1, ny), BoundaryCode::MOVING_SHOCK);
    }
    for j in 0..ny {
        seg(id(0, j), id(0, j + 1), BoundaryCode::INFLOW);
        seg(id(nx, j), id(nx, j + 1), BoundaryCode::OUTFLOW);
    }
    MeshSource { vertices, triangles, boundary }
}

/// Mesh source for a generated-mesh name, `None` if `name` is not one.
pub fn generated(name: &str, geom: &VortexGeometry, shock_x0: f64) -> Result<Option<MeshSource>, MeshLoadError> {
    let bad = || MeshLoadError::BadName(name.to_string());
    if let Some(level) = name.strip_prefix("vortex:") {
        let k = vortex_level(level).ok_or_else(bad)?;
        return Ok(Some(vortex_mesh(k, geom)));
    }
    if let Some(dims) = name.strip_prefix("dmr:") {
        let (nx, ny) = dims.split_once('x').ok_or_else(bad)?;
        let nx: usize = nx.parse().map_err(|_| bad())?;
        let ny: usize = ny.parse().map_err(|_| bad())?;
        if nx == 0 || ny == 0 {
            return Err(bad());
        }
        return Ok(Some(dmr_mesh(nx, ny, shock_x0)));
    }
    Ok(None)
}

/// Generated mesh by name, or a `.msh` file.
pub fn load_mesh(name: &str, geom: &VortexGeometry, shock_x0: f64) -> Result<Mesh, MeshLoadError> {
    let source = match generated(name, geom, shock_x0)? {
        Some(src) => src,
        None => {
            let text = std::fs::read_to_string(Path::new(name)).map_err(|source| MeshLoadError::Io {
                path: name.to_string(),
                source,
            })?;
            dg2d::mesh::parse_msh(&text).map_err(|source| MeshLoadError::Mesh {
                path: name.to_string(),
                source,
            })?
        }
    };
    build_connectivity(&source).map_err(|source| MeshLoadError::Mesh {
        path: name.to_string(),
        source,
    })
}
