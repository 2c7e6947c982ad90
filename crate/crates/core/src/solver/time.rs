use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{CoefficientArray, ConservationLaw, Location, Solver, SolverError, SolverState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkOrder {
    /// Explicit midpoint method.
    Rk2,
    /// Classical four-stage method.
    Rk4,
}

impl RkOrder {
    pub fn from_order(order: usize) -> Option<Self> {
        match order {
            2 => Some(RkOrder::Rk2),
            4 => Some(RkOrder::Rk4),
            _ => None,
        }
    }

    pub fn order(self) -> usize {
        match self {
            RkOrder::Rk2 => 2,
            RkOrder::Rk4 => 4,
        }
    }
}

/// Accumulated wall time per pass.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub volume: Duration,
    pub surface: Duration,
    pub rhs: Duration,
    pub limit: Duration,
    /// Everything else inside time steps: stage updates, time step size.
    pub other: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.volume + self.surface + self.rhs + self.limit + self.other
    }

    /// Fractions `[volume, surface, rhs, limit, other]` of the total.
    pub fn shares(&self) -> [f64; 5] {
        let total = self.total().as_secs_f64();
        let parts = [self.volume, self.surface, self.rhs, self.limit, self.other];
        if total == 0.0 {
            return [0.0; 5];
        }
        parts.map(|d| d.as_secs_f64() / total)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyReport {
    pub steps: usize,
    /// `max |c^{n+1} - c^n|` after every step.
    pub residuals: Vec<f64>,
}

impl<'m, L: ConservationLaw> Solver<'m, L> {
    /// `cfl * min_i 2 r_i / ((2p + 1) lambda_i)`, with `r_i` the inradius and
    /// `lambda_i` the largest wave speed of the element's traces at its side
    /// midpoints.
    pub fn stable_dt(&self, c: &CoefficientArray) -> Result<f64, SolverError> {
        self.check_shape(c)?;
        let n = self.mesh.n_elements();
        let np = self.tables.n_modes;
        let chunk = self.opts.chunk_size;
        let denom = (2 * self.tables.p + 1) as f64;
        let n_chunks = n.div_ceil(chunk);
        let mins = self.pool.install(|| {
            (0..n_chunks)
                .into_par_iter()
                .map(|ci| {
                    let mut best = f64::INFINITY;
                    for i in ci * chunk..((ci + 1) * chunk).min(n) {
                        let el = &self.mesh.elements[i];
                        let mut lambda = 0.0f64;
                        for side in 0..3 {
                            let u = c.eval(i, &self.mid_phi[side * np..(side + 1) * np]);
                            let normal = self.mesh.edges[el.edges[side]].normal;
                            let s = self
                                .law
                                .max_wave_speed(&u, normal)
                                .map_err(SolverError::at(Location::SideMidpoint { element: i, side }))?;
                            lambda = lambda.max(s);
                        }
                        best = best.min(2.0 * self.inradius[i] / (denom * lambda));
                    }
                    Ok(best)
                })
                .collect::<Vec<Result<f64, SolverError>>>()
        });
        let mut dt = f64::INFINITY;
        for m in mins {
            dt = dt.min(m?);
        }
        let dt = self.opts.cfl * dt;
        if dt > 0.0 && dt.is_finite() {
            Ok(dt)
        } else {
            Err(SolverError::BadTimestep(dt))
        }
    }

    fn stage(&mut self, stage: usize, c: &CoefficientArray, t: f64, out: &mut CoefficientArray) -> Result<(), SolverError> {
        self.rhs_into(c, t, out).map_err(|e| SolverError::Stage {
            stage,
            t,
            inner: Box::new(e),
        })
    }

    fn limit_stage(&mut self, stage: usize, t: f64, c: &mut CoefficientArray) -> Result<(), SolverError> {
        if self.opts.limiting {
            self.limit(c).map_err(|e| SolverError::Stage {
                stage,
                t,
                inner: Box::new(e),
            })?;
        }
        Ok(())
    }

    /// Advance `state` by `dt`. With limiting on, every stage value and the
    /// final update are limited.
    pub fn rk_step(&mut self, state: &mut SolverState, dt: f64) -> Result<(), SolverError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SolverError::BadTimestep(dt));
        }
        self.check_shape(&state.coeffs)?;
        let start = Instant::now();
        let before = self.timings;
        let t = state.t;
        let u = &state.coeffs;
        let mut next = match self.opts.rk_order {
            RkOrder::Rk2 => {
                let mut k = self.zeros();
                self.stage(1, u, t, &mut k)?;
                let mut s = u.clone();
                s.axpy(0.5 * dt, &k);
                self.limit_stage(1, t + 0.5 * dt, &mut s)?;
                self.stage(2, &s, t + 0.5 * dt, &mut k)?;
                let mut next = u.clone();
                next.axpy(dt, &k);
                next
            }
            RkOrder::Rk4 => {
                let mut k1 = self.zeros();
                let mut k2 = self.zeros();
                let mut k3 = self.zeros();
                let mut k4 = self.zeros();
                self.stage(1, u, t, &mut k1)?;
                let mut s = u.clone();
                s.axpy(0.5 * dt, &k1);
                self.limit_stage(1, t + 0.5 * dt, &mut s)?;
                self.stage(2, &s, t + 0.5 * dt, &mut k2)?;
                s.data_mut().copy_from_slice(u.data());
                s.axpy(0.5 * dt, &k2);
                self.limit_stage(2, t + 0.5 * dt, &mut s)?;
                self.stage(3, &s, t + 0.5 * dt, &mut k3)?;
                s.data_mut().copy_from_slice(u.data());
                s.axpy(dt, &k3);
                self.limit_stage(3, t + dt, &mut s)?;
                self.stage(4, &s, t + dt, &mut k4)?;
                let mut next = u.clone();
                let d = next.data_mut();
                let (a, b, c, e) = (k1.data(), k2.data(), k3.data(), k4.data());
                for x in 0..d.len() {
                    d[x] += dt / 6.0 * (a[x] + 2.0 * b[x] + 2.0 * c[x] + e[x]);
                }
                next
            }
        };
        let last = self.opts.rk_order.order();
        self.limit_stage(last, t + dt, &mut next)?;
        state.coeffs = next;
        state.t = t + dt;
        state.step += 1;

        let passes = (self.timings.volume - before.volume)
            + (self.timings.surface - before.surface)
            + (self.timings.rhs - before.rhs)
            + (self.timings.limit - before.limit);
        self.timings.other += start.elapsed().saturating_sub(passes);
        Ok(())
    }

    /// One step of size [`stable_dt`](Self::stable_dt); returns the size.
    pub fn step(&mut self, state: &mut SolverState) -> Result<f64, SolverError> {
        let t0 = Instant::now();
        let dt = self.stable_dt(&state.coeffs)?;
        self.timings.other += t0.elapsed();
        self.rk_step(state, dt)?;
        Ok(dt)
    }

    /// Step until `t_end`, shortening the last step to land on it.
    pub fn run_until(&mut self, state: &mut SolverState, t_end: f64) -> Result<usize, SolverError> {
        let mut steps = 0;
        while state.t < t_end {
            let t0 = Instant::now();
            let dt = self.stable_dt(&state.coeffs)?.min(t_end - state.t);
            self.timings.other += t0.elapsed();
            self.rk_step(state, dt)?;
            steps += 1;
        }
        Ok(steps)
    }

    /// Step until `max |c^{n+1} - c^n| <= tol`.
    pub fn run_to_steady(&mut self, state: &mut SolverState, tol: f64, max_steps: usize) -> Result<SteadyReport, SolverError> {
        let mut residuals = Vec::new();
        loop {
            let prev = state.coeffs.clone();
            self.step(state)?;
            let r = state.coeffs.max_abs_diff(&prev);
            residuals.push(r);
            if r <= tol {
                return Ok(SteadyReport {
                    steps: residuals.len(),
                    residuals,
                });
            }
            if !r.is_finite() || residuals.len() >= max_steps {
                return Err(SolverError::NotConverged {
                    steps: residuals.len(),
                    residual: r,
                });
            }
        }
    }
}
