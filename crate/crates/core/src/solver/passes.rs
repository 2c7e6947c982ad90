use std::time::Instant;

use rayon::prelude::*;

use super::coeffs::column_chunks;
use super::{first_error, CoefficientArray, ConservationLaw, Location, Scratch, Solver, SolverError, State, N_EQ};
use crate::mesh::RightSide;

/// Per-edge surface contributions. Row `e` (length `N_EQ * n_p`, ordered
/// `[m][j]`) of `left` belongs to the left element of edge `e`, row `e` of
/// `right` to its right element; boundary edges leave `right` at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBuffers {
    pub row_len: usize,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl SurfaceBuffers {
    pub fn zeros(n_p: usize, n_edges: usize) -> Self {
        let row_len = N_EQ * n_p;
        Self {
            row_len,
            left: vec![0.0; row_len * n_edges],
            right: vec![0.0; row_len * n_edges],
        }
    }

    pub fn left_row(&self, e: usize) -> &[f64] {
        &self.left[e * self.row_len..(e + 1) * self.row_len]
    }

    pub fn right_row(&self, e: usize) -> &[f64] {
        &self.right[e * self.row_len..(e + 1) * self.row_len]
    }
}

/// Gauss point of the right element that meets point `k` of the left one.
///
/// Both elements traverse their sides counter-clockwise, so they run along
/// a shared edge in opposite directions.
#[inline]
pub fn right_trace_index(n_edge_points: usize, k: usize) -> usize {
    n_edge_points - 1 - k
}

/// Solution at one point from gathered coefficients `loc` (`[m][j]`).
#[inline]
fn eval_local(loc: &[f64], phi: &[f64]) -> State {
    let np = phi.len();
    std::array::from_fn(|m| loc[m * np..(m + 1) * np].iter().zip(phi).map(|(a, b)| a * b).sum())
}

/// How the right element's edge points are paired with the left ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOrder {
    Reversed,
    /// Same index on both sides. Wrong; kept for tests that show why.
    Forward,
}

impl<'m, L: ConservationLaw> Solver<'m, L> {
    /// Volume integrals `sum_k w_k F(U(r_k)) . (tau grad phi_j(r_k))` of
    /// every element, written in coefficient layout.
    pub fn eval_volume_pass(&self, c: &CoefficientArray, out: &mut CoefficientArray) -> Result<(), SolverError> {
        self.check_shape(c)?;
        self.check_shape(out)?;
        let n = self.mesh.n_elements();
        let chunk = self.opts.chunk_size;
        let views = column_chunks(out.data_mut(), n, chunk);
        let results = self.pool.install(|| {
            views
                .into_par_iter()
                .enumerate()
                .map(|(ci, mut rows)| self.volume_chunk(c, ci * chunk, &mut rows))
                .collect::<Vec<_>>()
        });
        first_error(results)
    }

    fn volume_chunk(&self, c: &CoefficientArray, start: usize, rows: &mut [&mut [f64]]) -> Result<(), SolverError> {
        let t = &self.tables;
        let np = t.n_modes;
        let mut loc = vec![0.0; N_EQ * np];
        let mut acc = vec![0.0; N_EQ * np];
        for off in 0..rows[0].len() {
            let i = start + off;
            c.gather(i, &mut loc);
            acc.fill(0.0);
            let tau = self.mesh.elements[i].jacobian_tau;
            for k in 0..t.n_interior() {
                let phi = t.phi(k);
                let u = eval_local(&loc, phi);
                let (f1, f2) = self
                    .law
                    .flux(&u)
                    .map_err(SolverError::at(Location::Interior { element: i, point: k }))?;
                let w = t.w_interior[k];
                let dr = t.dphi_dr(k);
                let ds = t.dphi_ds(k);
                for m in 0..N_EQ {
                    let a = w * (f1[m] * tau[0][0] + f2[m] * tau[0][1]);
                    let b = w * (f1[m] * tau[1][0] + f2[m] * tau[1][1]);
                    let am = &mut acc[m * np..(m + 1) * np];
                    for j in 0..np {
                        am[j] += a * dr[j] + b * ds[j];
                    }
                }
            }
            for (r, row) in rows.iter_mut().enumerate() {
                row[off] = acc[r];
            }
        }
        Ok(())
    }

    /// Edge integrals of the numerical flux, one work item per edge.
    pub fn eval_surface_pass(&self, c: &CoefficientArray, t: f64, out: &mut SurfaceBuffers) -> Result<(), SolverError> {
        self.check_shape(c)?;
        let stride = N_EQ * self.tables.n_modes;
        assert_eq!(out.left.len(), stride * self.mesh.n_edges());
        let chunk = self.opts.chunk_size;
        let results = self.pool.install(|| {
            out.left
                .par_chunks_mut(chunk * stride)
                .zip(out.right.par_chunks_mut(chunk * stride))
                .enumerate()
                .map(|(ci, (lb, rb))| {
                    let mut loc = [vec![0.0; stride], vec![0.0; stride]];
                    for (off, (lrow, rrow)) in lb.chunks_mut(stride).zip(rb.chunks_mut(stride)).enumerate() {
                        self.edge_flux(c, ci * chunk + off, t, &mut loc, lrow, rrow)?;
                    }
                    Ok(())
                })
                .collect::<Vec<_>>()
        });
        first_error(results)
    }

    /// `loc` is scratch for the gathered coefficients of both elements.
    fn edge_flux(
        &self,
        c: &CoefficientArray,
        e: usize,
        t: f64,
        loc: &mut [Vec<f64>; 2],
        lrow: &mut [f64],
        rrow: &mut [f64],
    ) -> Result<(), SolverError> {
        let tb = &self.tables;
        let np = tb.n_modes;
        let ne = tb.n_edge();
        let edge = &self.mesh.edges[e];
        lrow.fill(0.0);
        rrow.fill(0.0);
        let [cl, cr] = loc;
        c.gather(edge.left, cl);
        if let RightSide::Element { index, .. } = edge.right {
            c.gather(index, cr);
        }
        for k in 0..ne {
            let at = SolverError::at(Location::Edge { edge: e, point: k });
            let phi_l = tb.phi_side(edge.left_side, k);
            let ul = eval_local(cl, phi_l);
            let (ur, phi_r) = match edge.right {
                RightSide::Element { side, .. } => {
                    let phi_r = tb.phi_side(side, right_trace_index(ne, k));
                    (eval_local(cr, phi_r), Some(phi_r))
                }
                RightSide::Boundary(code) => {
                    let x = self.boundary_points[e * ne + k];
                    (self.law.ghost(&ul, code, x, edge.normal, t).map_err(at)?, None)
                }
            };
            let f = self
                .law
                .numerical_flux(&ul, &ur, edge.normal)
                .map_err(SolverError::at(Location::Edge { edge: e, point: k }))?;
            let w = edge.half_length * tb.w_edge[k];
            for m in 0..N_EQ {
                let a = w * f[m];
                let lm = &mut lrow[m * np..(m + 1) * np];
                for j in 0..np {
                    lm[j] -= a * phi_l[j];
                }
                if let Some(phi_r) = phi_r {
                    let rm = &mut rrow[m * np..(m + 1) * np];
                    for j in 0..np {
                        rm[j] += a * phi_r[j];
                    }
                }
            }
        }
        Ok(())
    }

    /// Gather: `dc_i = (volume_i + sum of the element's three edge slots) / det J_i`.
    pub fn eval_rhs_pass(&self, volume: &CoefficientArray, surface: &SurfaceBuffers, out: &mut CoefficientArray) -> Result<(), SolverError> {
        self.check_shape(volume)?;
        self.check_shape(out)?;
        let n = self.mesh.n_elements();
        let chunk = self.opts.chunk_size;
        let stride = surface.row_len;
        let views = column_chunks(out.data_mut(), n, chunk);
        let vol = volume.data();
        self.pool.install(|| {
            views.into_par_iter().enumerate().for_each(|(ci, mut rows)| {
                let start = ci * chunk;
                for off in 0..rows[0].len() {
                    let i = start + off;
                    let el = &self.mesh.elements[i];
                    let slots: [&[f64]; 3] = std::array::from_fn(|pos| {
                        let e = el.edges[pos];
                        let buf = if self.mesh.edges[e].left == i { &surface.left } else { &surface.right };
                        &buf[e * stride..(e + 1) * stride]
                    });
                    let inv = 1.0 / el.jacobian_det;
                    for (r, row) in rows.iter_mut().enumerate() {
                        row[off] = (vol[r * n + i] + slots[0][r] + slots[1][r] + slots[2][r]) * inv;
                    }
                }
            })
        });
        Ok(())
    }

    /// Time derivative of the coefficients: volume, surface and gather
    /// passes in sequence.
    pub fn rhs(&mut self, c: &CoefficientArray, t: f64) -> Result<CoefficientArray, SolverError> {
        let mut dc = self.zeros();
        self.rhs_into(c, t, &mut dc)?;
        Ok(dc)
    }

    pub(crate) fn rhs_into(&mut self, c: &CoefficientArray, t: f64, dc: &mut CoefficientArray) -> Result<(), SolverError> {
        let mut s = self.scratch.take().unwrap_or_else(|| Scratch {
            volume: self.zeros(),
            surface: SurfaceBuffers::zeros(self.tables.n_modes, self.mesh.n_edges()),
        });
        let result = (|| {
            let t0 = Instant::now();
            self.eval_volume_pass(c, &mut s.volume)?;
            let t1 = Instant::now();
            self.eval_surface_pass(c, t, &mut s.surface)?;
            let t2 = Instant::now();
            self.eval_rhs_pass(&s.volume, &s.surface, dc)?;
            let t3 = Instant::now();
            Ok::<_, SolverError>([t1 - t0, t2 - t1, t3 - t2])
        })();
        self.scratch = Some(s);
        let [v, su, r] = result?;
        self.timings.volume += v;
        self.timings.surface += su;
        self.timings.rhs += r;
        Ok(())
    }

    /// Left and right traces at the Gauss points of interior edge `e`,
    /// paired as the surface pass pairs them (`Reversed`) or naively.
    pub fn edge_traces(&self, c: &CoefficientArray, e: usize, order: TraceOrder) -> Vec<(State, State)> {
        let tb = &self.tables;
        let ne = tb.n_edge();
        let edge = &self.mesh.edges[e];
        let RightSide::Element { index, side } = edge.right else {
            panic!("edge {e} is a boundary edge");
        };
        (0..ne)
            .map(|k| {
                let kr = match order {
                    TraceOrder::Reversed => right_trace_index(ne, k),
                    TraceOrder::Forward => k,
                };
                (c.eval(edge.left, tb.phi_side(edge.left_side, k)), c.eval(index, tb.phi_side(side, kr)))
            })
            .collect()
    }
}
