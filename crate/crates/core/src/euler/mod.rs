//! Compressible Euler equations: equation of state, fluxes, wave speeds, the
//! local Lax–Friedrichs numerical flux and boundary ghost states.
//!
//! States are passed around as `[rho, rho u, rho v, E]`; [`EulerState`] is
//! the named view of the same four numbers.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::mesh::BoundaryCode;

/// Conserved variables at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    pub e: f64,
}

impl EulerState {
    pub const fn new(rho: f64, mx: f64, my: f64, e: f64) -> Self {
        Self { rho, mx, my, e }
    }

    /// State from primitive variables `(rho, u, v, p)`.
    pub fn from_primitive(rho: f64, u: f64, v: f64, p: f64, gas: &GasModel) -> Self {
        Self {
            rho,
            mx: rho * u,
            my: rho * v,
            e: p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v),
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.mx, self.my, self.e]
    }

    pub fn from_array(u: [f64; 4]) -> Self {
        Self::new(u[0], u[1], u[2], u[3])
    }

    pub fn velocity(&self) -> [f64; 2] {
        [self.mx / self.rho, self.my / self.rho]
    }
}

impl From<[f64; 4]> for EulerState {
    fn from(u: [f64; 4]) -> Self {
        Self::from_array(u)
    }
}

impl From<EulerState> for [f64; 4] {
    fn from(s: EulerState) -> Self {
        s.to_array()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("inadmissible state rho = {rho:e}, p = {p:e}")]
    Inadmissible { rho: f64, p: f64 },
    #[error("no boundary condition registered for code {0}")]
    UnknownBoundary(BoundaryCode),
}

/// `p = (gamma - 1) (E - rho |v|^2 / 2)`; errors unless `rho > 0` and `p > 0`.
pub fn pressure(u: &EulerState, gas: &GasModel) -> Result<f64, PhysicsError> {
    let p = (gas.gamma - 1.0) * (u.e - 0.5 * (u.mx * u.mx + u.my * u.my) / u.rho);
    if u.rho > 0.0 && p > 0.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(PhysicsError::Inadmissible { rho: u.rho, p })
    }
}

pub fn sound_speed(u: &EulerState, gas: &GasModel) -> Result<f64, PhysicsError> {
    Ok((gas.gamma * pressure(u, gas)? / u.rho).sqrt())
}

/// The x and y flux columns `(F1, F2)`.
pub fn flux(u: &EulerState, gas: &GasModel) -> Result<([f64; 4], [f64; 4]), PhysicsError> {
    let p = pressure(u, gas)?;
    let vx = u.mx / u.rho;
    let vy = u.my / u.rho;
    let h = u.e + p;
    Ok((
        [u.mx, u.mx * vx + p, u.mx * vy, vx * h],
        [u.my, u.my * vx, u.my * vy + p, vy * h],
    ))
}

/// `|v . n| + c`.
pub fn max_wave_speed(u: &EulerState, n: [f64; 2], gas: &GasModel) -> Result<f64, PhysicsError> {
    let c = sound_speed(u, gas)?;
    Ok(((u.mx * n[0] + u.my * n[1]) / u.rho).abs() + c)
}

/// Local Lax–Friedrichs flux across a face with unit normal `n` pointing
/// from `ul` to `ur`.
pub fn riemann_solver(ul: &EulerState, ur: &EulerState, n: [f64; 2], gas: &GasModel) -> Result<[f64; 4], PhysicsError> {
    let (fl1, fl2) = flux(ul, gas)?;
    let (fr1, fr2) = flux(ur, gas)?;
    let s = max_wave_speed(ul, n, gas)?.max(max_wave_speed(ur, n, gas)?);
    let (a, b) = (ul.to_array(), ur.to_array());
    let mut out = [0.0; 4];
    for m in 0..4 {
        out[m] = 0.5 * ((fl1[m] + fr1[m]) * n[0] + (fl2[m] + fr2[m]) * n[1]) - 0.5 * s * (b[m] - a[m]);
    }
    Ok(out)
}

/// Mirror the momentum of `u` about the line with unit normal `n`.
pub fn reflect(u: &EulerState, n: [f64; 2]) -> EulerState {
    let mn = u.mx * n[0] + u.my * n[1];
    EulerState {
        rho: u.rho,
        mx: u.mx - 2.0 * mn * n[0],
        my: u.my - 2.0 * mn * n[1],
        e: u.e,
    }
}

pub type StateFn = Arc<dyn Fn([f64; 2], f64) -> EulerState + Send + Sync>;
pub type NormalFn = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;

/// Prescribed state on inflow (`-3`) edges.
#[derive(Clone)]
pub enum Inflow {
    Constant(EulerState),
    /// Function of the physical point and time.
    Function(StateFn),
}

impl fmt::Debug for Inflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inflow::Constant(s) => f.debug_tuple("Constant").field(s).finish(),
            Inflow::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Exact wall geometry for curved reflecting (`-2`) edges.
#[derive(Clone)]
pub enum CurvedWall {
    /// Walls are arcs of circles about this centre.
    Circle { center: [f64; 2] },
    /// Unit wall normal at a point; orientation does not matter.
    Normal(NormalFn),
}

impl CurvedWall {
    pub fn normal_at(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            CurvedWall::Circle { center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
                [d[0] / r, d[1] / r]
            }
            CurvedWall::Normal(f) => f(x),
        }
    }
}

impl fmt::Debug for CurvedWall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvedWall::Circle { center } => f.debug_struct("Circle").field("center", center).finish(),
            CurvedWall::Normal(_) => f.write_str("Normal(..)"),
        }
    }
}

/// Straight shock front moving into quiescent gas, used on `-5` edges.
///
/// The front passes through `(x0, 0)` at `t = 0`, makes angle `angle` with
/// the x axis and moves with normal speed `speed`:
/// `x_s(y, t) = x0 + y / tan(angle) + speed * t / sin(angle)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingShock {
    pub x0: f64,
    pub angle: f64,
    pub speed: f64,
    pub post: EulerState,
    pub pre: EulerState,
}

impl MovingShock {
    pub fn front_x(&self, y: f64, t: f64) -> f64 {
        self.x0 + y / self.angle.tan() + self.speed * t / self.angle.sin()
    }

    pub fn state_at(&self, x: [f64; 2], t: f64) -> EulerState {
        if x[0] < self.front_x(x[1], t) {
            self.post
        } else {
            self.pre
        }
    }
}

/// Data the ghost states of a problem need. Codes whose data is missing are
/// rejected by [`ghost_state`].
#[derive(Debug, Clone, Default)]
pub struct BoundaryConditions {
    pub inflow: Option<Inflow>,
    pub curved_wall: Option<CurvedWall>,
    pub shock: Option<MovingShock>,
}

/// Exterior state for a boundary edge at physical point `x`, time `t`.
pub fn ghost_state(
    u: &EulerState,
    code: BoundaryCode,
    x: [f64; 2],
    n: [f64; 2],
    t: f64,
    bc: &BoundaryConditions,
) -> Result<EulerState, PhysicsError> {
    match code {
        BoundaryCode::REFLECTING => Ok(reflect(u, n)),
        BoundaryCode::CURVED_REFLECTING => match &bc.curved_wall {
            Some(w) => Ok(reflect(u, w.normal_at(x))),
            None => Err(PhysicsError::UnknownBoundary(code)),
        },
        BoundaryCode::INFLOW => match &bc.inflow {
            Some(Inflow::Constant(s)) => Ok(*s),
            Some(Inflow::Function(f)) => Ok(f(x, t)),
            None => Err(PhysicsError::UnknownBoundary(code)),
        },
        BoundaryCode::OUTFLOW => Ok(*u),
        BoundaryCode::MOVING_SHOCK => match &bc.shock {
            Some(s) => Ok(s.state_at(x, t)),
            None => Err(PhysicsError::UnknownBoundary(code)),
        },
        other => Err(PhysicsError::UnknownBoundary(other)),
    }
}

/// Euler equations with their boundary data, as used by the solver.
#[derive(Debug, Clone, Default)]
pub struct Euler {
    pub gas: GasModel,
    pub bc: BoundaryConditions,
}

impl Euler {
    pub fn new(gas: GasModel, bc: BoundaryConditions) -> Self {
        Self { gas, bc }
    }
}
