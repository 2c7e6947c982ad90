//! Barth–Jespersen limiting of the linear modes (p = 1).
//!
//! For each element and each conserved variable, the extreme centroid
//! values over the element and its edge neighbours bound the values the
//! reconstruction may take at the edge Gauss points. The largest
//! `alpha in [0, 1]` that keeps every such point inside the bounds scales
//! both linear modes. The mean (mode 0) is never touched.
//!
//! Per-variable bounds do not keep pressure positive: near a strong shock
//! energy can reach its lower bound at a point where momentum has not.
//! The optional positivity guard then scales all variables' linear modes
//! by one more factor `theta`, the largest that keeps the state at the
//! three vertices above a small fraction of the mean's margin. A linear
//! state is a convex combination of its vertex states, so every
//! quadrature point follows.

use std::time::Instant;

use rayon::prelude::*;

use super::{CoefficientArray, ConservationLaw, Solver, SolverError, State, N_EQ};
use crate::basis::{Basis, CANONICAL_VERTICES};

pub(crate) const NO_NEIGHBOR: usize = usize::MAX;

/// The guard keeps the vertex margin above this fraction of the mean's.
const MARGIN_FLOOR: f64 = 1e-6;

impl<'m, L: ConservationLaw> Solver<'m, L> {
    /// Limiting factors `alpha[i][m]` for the current coefficients.
    pub fn limiter_alpha(&self, c: &CoefficientArray) -> Result<Vec<[f64; N_EQ]>, SolverError> {
        if self.tables.p != 1 {
            return Err(SolverError::LimiterDegree(self.tables.p));
        }
        self.check_shape(c)?;
        let n = self.mesh.n_elements();
        let chunk = self.opts.chunk_size;
        let mut means = vec![[0.0; N_EQ]; n];
        let mut alpha = vec![[1.0; N_EQ]; n];
        let tb = &self.tables;
        let edge_phi: Vec<[f64; 3]> = (0..3)
            .flat_map(|side| (0..tb.n_edge()).map(move |k| <[f64; 3]>::try_from(tb.phi_side(side, k)).expect("three modes")))
            .collect();
        let basis = Basis::new(1).expect("degree 1 exists");
        let vertex_phi = CANONICAL_VERTICES.map(|r| <[f64; 3]>::try_from(basis.eval_all(r)).expect("three modes"));
        self.pool.install(|| {
            means.par_chunks_mut(chunk).enumerate().for_each(|(ci, out)| {
                for (off, u) in out.iter_mut().enumerate() {
                    *u = self.centroid_value(c, ci * chunk + off);
                }
            });
            alpha.par_chunks_mut(chunk).enumerate().for_each(|(ci, out)| {
                for (off, a) in out.iter_mut().enumerate() {
                    let i = ci * chunk + off;
                    *a = self.element_alpha(c, &means, &edge_phi, i);
                    if self.opts.positivity {
                        let theta = self.element_theta(c, means[i], a, &vertex_phi, i);
                        a.iter_mut().for_each(|x| *x *= theta);
                    }
                }
            })
        });
        Ok(alpha)
    }

    /// The ratio `(U_max - mean) / d` falls as `d > 0` grows, and so does
    /// its rounded value, so only the largest and smallest `d` over the edge
    /// points need a division. Same result as taking the minimum over every
    /// point.
    fn element_alpha(&self, c: &CoefficientArray, means: &[State], edge_phi: &[[f64; 3]], i: usize) -> [f64; N_EQ] {
        const NP: usize = 3;
        let mean = means[i];
        let mut lo = mean;
        let mut hi = mean;
        for &nb in self.neighbors[i].iter().filter(|&&nb| nb != NO_NEIGHBOR) {
            for m in 0..N_EQ {
                lo[m] = lo[m].min(means[nb][m]);
                hi[m] = hi[m].max(means[nb][m]);
            }
        }
        let mut loc = [0.0; N_EQ * NP];
        c.gather(i, &mut loc);
        let mut d_max = [0.0f64; N_EQ];
        let mut d_min = [0.0f64; N_EQ];
        for phi in edge_phi {
            for m in 0..N_EQ {
                let u = loc[m * NP] * phi[0] + loc[m * NP + 1] * phi[1] + loc[m * NP + 2] * phi[2];
                let d = u - mean[m];
                d_max[m] = d_max[m].max(d);
                d_min[m] = d_min[m].min(d);
            }
        }
        std::array::from_fn(|m| {
            let mut a = 1.0f64;
            if d_max[m] > 0.0 {
                a = a.min((hi[m] - mean[m]) / d_max[m]);
            }
            if d_min[m] < 0.0 {
                a = a.min((lo[m] - mean[m]) / d_min[m]);
            }
            a.clamp(0.0, 1.0)
        })
    }

    /// Largest `theta in [0, 1]` such that scaling the already limited
    /// linear modes by it leaves every vertex state with margin at least
    /// `MARGIN_FLOOR` times the mean's. An inadmissible mean is left alone
    /// for the flux evaluation to report.
    fn element_theta(&self, c: &CoefficientArray, mean: State, alpha: &[f64; N_EQ], vertex_phi: &[[f64; 3]; 3], i: usize) -> f64 {
        let mean_margin = self.law.margin(&mean);
        if !(mean_margin > 0.0) || mean_margin == f64::INFINITY {
            return 1.0;
        }
        let floor = MARGIN_FLOOR * mean_margin;
        let mut loc = [0.0; N_EQ * 3];
        c.gather(i, &mut loc);
        let mut theta = 1.0f64;
        for phi in vertex_phi {
            let slope: State = std::array::from_fn(|m| {
                let u = loc[m * 3] * phi[0] + loc[m * 3 + 1] * phi[1] + loc[m * 3 + 2] * phi[2];
                alpha[m] * (u - mean[m])
            });
            let at = |t: f64| -> State { std::array::from_fn(|m| mean[m] + t * slope[m]) };
            if self.law.margin(&at(theta)) >= floor {
                continue;
            }
            // the superlevel set is convex, so the good t form an interval
            let (mut good, mut bad) = (0.0, theta);
            for _ in 0..60 {
                let mid = 0.5 * (good + bad);
                if self.law.margin(&at(mid)) >= floor {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            theta = good;
        }
        theta
    }

    /// Limit `c` in place.
    pub fn limit(&mut self, c: &mut CoefficientArray) -> Result<(), SolverError> {
        let t0 = Instant::now();
        let alpha = self.limiter_alpha(c)?;
        let chunk = self.opts.chunk_size;
        self.pool.install(|| {
            for m in 0..N_EQ {
                for j in 1..c.n_modes() {
                    c.row_mut(m, j)
                        .par_chunks_mut(chunk)
                        .zip(alpha.par_chunks(chunk))
                        .for_each(|(row, a)| {
                            for (x, a) in row.iter_mut().zip(a) {
                                *x *= a[m];
                            }
                        });
                }
            }
        });
        self.timings.limit += t0.elapsed();
        Ok(())
    }
}
