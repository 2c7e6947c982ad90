//! The benchmark problems: supersonic vortex, double Mach reflection and a
//! uniform-state custom problem.

use std::f64::consts::PI;
use std::sync::Arc;

use dg2d::euler::{BoundaryConditions, CurvedWall, Inflow, MovingShock};
use dg2d::{Euler, EulerState, GasModel};
use thiserror::Error;

use crate::config::{Problem, RunConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("point ({x}, {y}) is outside the vortex annulus")]
    OutsideAnnulus { x: f64, y: f64 },
}

/// Quarter annulus `r_inner <= r <= r_outer`, `x, y >= 0`, with isentropic
/// flow circling the origin counter-clockwise: in at `y = 0`, out at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexGeometry {
    pub r_inner: f64,
    pub r_outer: f64,
    /// Mach number on the inner wall.
    pub mach_inner: f64,
    /// Density on the inner wall.
    pub rho_inner: f64,
}

impl Default for VortexGeometry {
    fn default() -> Self {
        Self {
            r_inner: 1.0,
            r_outer: 1.384,
            mach_inner: 2.25,
            rho_inner: 1.0,
        }
    }
}

/// Relative slack on the radii. Straight-sided elements cut the inner arc,
/// so quadrature points can sit slightly inside `r_inner`.
pub const ANNULUS_MARGIN: f64 = 0.02;

/// Exact supersonic vortex state at `x`:
///
/// ```text
/// rho(r) = rho_i (1 + (g-1)/2 M_i^2 (1 - r_i^2/r^2))^(1/(g-1))
/// p      = rho^g / g
/// |v|    = c_i M_i r_i / r, counter-clockwise
/// ```
pub fn vortex_exact(x: [f64; 2], geom: &VortexGeometry, gas: &GasModel) -> Result<EulerState, ProblemError> {
    let r = x[0].hypot(x[1]);
    let slack = ANNULUS_MARGIN * geom.r_outer;
    let outside = r < geom.r_inner * (1.0 - ANNULUS_MARGIN)
        || r > geom.r_outer * (1.0 + ANNULUS_MARGIN)
        || x[0] < -slack
        || x[1] < -slack;
    if outside {
        return Err(ProblemError::OutsideAnnulus { x: x[0], y: x[1] });
    }
    Ok(vortex_state(x, r, geom, gas))
}

fn vortex_state(x: [f64; 2], r: f64, geom: &VortexGeometry, gas: &GasModel) -> EulerState {
    let g = gas.gamma;
    let ri = geom.r_inner;
    let mi = geom.mach_inner;
    let base = 1.0 + 0.5 * (g - 1.0) * mi * mi * (1.0 - ri * ri / (r * r));
    let rho = geom.rho_inner * base.powf(1.0 / (g - 1.0));
    let p = rho.powf(g) / g;
    let c_inner = (g * (geom.rho_inner.powf(g) / g) / geom.rho_inner).sqrt();
    let speed = c_inner * mi * ri / r;
    EulerState::from_primitive(rho, -speed * x[1] / r, speed * x[0] / r, p, gas)
}

/// Shock setup of the double Mach reflection: a front through `(x0, 0)`
/// at `angle_deg` to the wall, moving at Mach `mach` into gas at rest with
/// `rho = 1.4`, `p = 1` (sound speed 1 for gamma = 1.4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSetup {
    pub x0: f64,
    pub angle_deg: f64,
    pub mach: f64,
}

impl Default for ShockSetup {
    fn default() -> Self {
        Self {
            x0: 1.0 / 6.0,
            angle_deg: 60.0,
            mach: 10.0,
        }
    }
}

/// Post-shock state of a normal shock with Mach number `mach` running into
/// `(rho1, p1)` at rest, with the post-shock velocity along the unit shock
/// normal `n`. Also returns the shock speed.
pub fn rankine_hugoniot(rho1: f64, p1: f64, mach: f64, n: [f64; 2], gas: &GasModel) -> (EulerState, f64) {
    let g = gas.gamma;
    let c1 = (g * p1 / rho1).sqrt();
    let speed = mach * c1;
    let m2 = mach * mach;
    let rho2 = rho1 * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
    let p2 = p1 * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
    let un = speed * (1.0 - rho1 / rho2);
    (EulerState::from_primitive(rho2, un * n[0], un * n[1], p2, gas), speed)
}

impl ShockSetup {
    pub fn moving_shock(&self, gas: &GasModel) -> MovingShock {
        let angle = self.angle_deg * PI / 180.0;
        let (rho1, p1) = (1.4, 1.0);
        // normal of the front, pointing into the undisturbed gas
        let n = [angle.sin(), -angle.cos()];
        let (post, speed) = rankine_hugoniot(rho1, p1, self.mach, n, gas);
        MovingShock {
            x0: self.x0,
            angle,
            speed,
            post,
            pre: EulerState::from_primitive(rho1, 0.0, 0.0, p1, gas),
        }
    }
}

/// Everything the driver needs to know about a problem.
pub struct Setup {
    pub law: Euler,
    pub initial: Arc<dyn Fn([f64; 2]) -> EulerState + Send + Sync>,
    /// Exact steady solution, if there is one.
    pub exact: Option<Arc<dyn Fn([f64; 2]) -> EulerState + Send + Sync>>,
}

pub fn setup(cfg: &RunConfig) -> Setup {
    let gas = GasModel { gamma: cfg.gamma };
    match cfg.problem {
        Problem::SupersonicVortex => {
            let geom = cfg.vortex;
            // boundary data is evaluated on the straight chords too, so no
            // domain check here
            let exact = Arc::new(move |x: [f64; 2]| vortex_state(x, x[0].hypot(x[1]), &geom, &gas));
            let inflow = exact.clone();
            let bc = BoundaryConditions {
                inflow: Some(Inflow::Function(Arc::new(move |x, _t| inflow(x)))),
                curved_wall: Some(CurvedWall::Circle { center: [0.0, 0.0] }),
                shock: None,
            };
            Setup {
                law: Euler::new(gas, bc),
                initial: exact.clone(),
                exact: Some(exact),
            }
        }
        Problem::DoubleMach => {
            let shock = cfg.shock.moving_shock(&gas);
            let post = shock.post;
            let bc = BoundaryConditions {
                inflow: Some(Inflow::Constant(post)),
                curved_wall: None,
                shock: Some(shock),
            };
            Setup {
                law: Euler::new(gas, bc),
                initial: Arc::new(move |x| shock.state_at(x, 0.0)),
                exact: None,
            }
        }
        Problem::Custom => {
            let [rho, u, v, p] = cfg.inflow.expect("validated by the config");
            let state = EulerState::from_primitive(rho, u, v, p, &gas);
            let bc = BoundaryConditions {
                inflow: Some(Inflow::Constant(state)),
                curved_wall: Some(CurvedWall::Circle { center: [0.0, 0.0] }),
                shock: None,
            };
            Setup {
                law: Euler::new(gas, bc),
                initial: Arc::new(move |_| state),
                exact: None,
            }
        }
    }
}
