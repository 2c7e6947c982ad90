//! Run configuration: a flat `key = value` file plus command-line overrides.
//!
//! ```text
//! # supersonic vortex, mesh C, cubic elements
//! problem    = supersonic_vortex
//! mesh       = vortex:C
//! p          = 3
//! rk         = 4
//! steady_tol = 1e-14
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown keys are errors, so a
//! typo never silently falls back to a default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dg2d::solver::RkOrder;
use thiserror::Error;

use crate::problems::{ShockSetup, VortexGeometry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    Duplicate(String),
    #[error("`{key}`: cannot parse `{value}`")]
    Value { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    SupersonicVortex,
    DoubleMach,
    /// Uniform initial state equal to the inflow state, boundaries from the
    /// mesh tags.
    Custom,
}

impl FromStr for Problem {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "supersonic_vortex" => Ok(Problem::SupersonicVortex),
            "double_mach" => Ok(Problem::DoubleMach),
            "custom" => Ok(Problem::Custom),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::SupersonicVortex => "supersonic_vortex",
            Problem::DoubleMach => "double_mach",
            Problem::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run to this time, shortening the last step to land on it.
    TEnd(f64),
    /// Run until `max |c^{n+1} - c^n| <= tol`, aborting after `max_steps`.
    Steady { tol: f64, max_steps: usize },
    /// A fixed number of CFL steps (benchmarks).
    Steps(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    None,
    Csv,
    Vtk,
}

impl FromStr for OutputFormat {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "none" => Ok(OutputFormat::None),
            "csv" => Ok(OutputFormat::Csv),
            "vtk" => Ok(OutputFormat::Vtk),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    /// A `.msh` path, or a generated mesh: `vortex:A` .. `vortex:F`,
    /// `dmr:NXxNY`.
    pub mesh: String,
    pub p: usize,
    pub rk_order: RkOrder,
    pub cfl: f64,
    pub limiting: bool,
    /// Positivity guard on top of the limiter.
    pub positivity: bool,
    pub stop: StopRule,
    pub output: OutputFormat,
    /// Write fields every this many steps (0: only at the end).
    pub output_every: usize,
    pub out_dir: PathBuf,
    pub gamma: f64,
    /// `(rho, u, v, p)` for the custom problem's initial and inflow state.
    pub inflow: Option<[f64; 4]>,
    pub vortex: VortexGeometry,
    pub shock: ShockSetup,
    pub workers: Option<usize>,
    pub chunk_size: usize,
    /// Start from this checkpoint instead of the initial condition.
    pub restart: Option<PathBuf>,
    /// Write a checkpoint here at the end of the run.
    pub checkpoint: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "problem",
    "mesh",
    "p",
    "rk",
    "cfl",
    "limit",
    "positivity",
    "t_end",
    "steady_tol",
    "max_steps",
    "steps",
    "output",
    "output_every",
    "out_dir",
    "gamma",
    "inflow",
    "vortex_r_inner",
    "vortex_r_outer",
    "vortex_mach",
    "vortex_rho",
    "shock_x0",
    "shock_angle_deg",
    "shock_mach",
    "workers",
    "chunk_size",
    "restart",
    "checkpoint",
];

/// Key/value pairs as read, before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: n + 1 })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::Syntax { line: n + 1 });
            }
            if raw.values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(ConfigError::Duplicate(k.to_string()));
            }
        }
        Ok(raw)
    }

    /// Set or replace a value (command-line overrides).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    /// Remove a value, e.g. to swap one stopping rule for another.
    pub fn unset(&mut self, key: &str) {
        self.values.remove(key);
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::Value {
                key: key.to_string(),
                value: v.clone(),
            }),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        if let Some(k) = self.values.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        let bad = |key: &str| ConfigError::Value {
            key: key.to_string(),
            value: self.values.get(key).cloned().unwrap_or_default(),
        };

        let problem: Problem = self.get("problem")?.ok_or_else(|| ConfigError::Invalid("`problem` is required".into()))?;
        let mesh: String = self.get("mesh")?.ok_or_else(|| ConfigError::Invalid("`mesh` is required".into()))?;
        let p: usize = self.or("p", 1)?;
        if !(1..=dg2d::basis::MAX_DEGREE).contains(&p) {
            return Err(ConfigError::Invalid(format!("p = {p} is outside 1..={}", dg2d::basis::MAX_DEGREE)));
        }
        let rk: usize = self.or("rk", 4)?;
        let rk_order = RkOrder::from_order(rk).ok_or_else(|| bad("rk"))?;
        let cfl: f64 = self.or("cfl", 0.3)?;
        if !(cfl > 0.0 && cfl.is_finite()) {
            return Err(bad("cfl"));
        }
        let limiting = match self.values.get("limit").map(String::as_str) {
            None | Some("off") => false,
            Some("on") => true,
            Some(_) => return Err(bad("limit")),
        };
        if limiting && p != 1 {
            return Err(ConfigError::Invalid(format!("limiting needs p = 1, got p = {p}")));
        }
        let positivity = match self.values.get("positivity").map(String::as_str) {
            None | Some("off") => false,
            Some("on") => true,
            Some(_) => return Err(bad("positivity")),
        };
        if positivity && !limiting {
            return Err(ConfigError::Invalid("positivity = on needs limit = on".into()));
        }

        let t_end: Option<f64> = self.get("t_end")?;
        let tol: Option<f64> = self.get("steady_tol")?;
        let steps: Option<usize> = self.get("steps")?;
        let set = [t_end.is_some(), tol.is_some(), steps.is_some()].iter().filter(|x| **x).count();
        if set != 1 {
            return Err(ConfigError::Invalid(format!(
                "exactly one of `t_end`, `steady_tol`, `steps` must be set ({set} given)"
            )));
        }
        let max_steps: Option<usize> = self.get("max_steps")?;
        if max_steps.is_some() && tol.is_none() {
            return Err(ConfigError::Invalid("`max_steps` only applies with `steady_tol`".into()));
        }
        let stop = match (t_end, tol, steps) {
            (Some(t), _, _) if t > 0.0 => StopRule::TEnd(t),
            (Some(_), _, _) => return Err(bad("t_end")),
            (_, Some(tol), _) if tol > 0.0 => StopRule::Steady {
                tol,
                max_steps: max_steps.unwrap_or(10_000_000),
            },
            (_, Some(_), _) => return Err(bad("steady_tol")),
            (_, _, Some(n)) => StopRule::Steps(n),
            _ => unreachable!(),
        };

        let output: OutputFormat = self.or("output", OutputFormat::None)?;
        let gamma: f64 = self.or("gamma", 1.4)?;
        if !(gamma > 1.0) {
            return Err(bad("gamma"));
        }
        let inflow = match self.values.get("inflow") {
            None => None,
            Some(v) => {
                let parts: Vec<f64> = v.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad("inflow"))?;
                let arr: [f64; 4] = parts.try_into().map_err(|_| bad("inflow"))?;
                Some(arr)
            }
        };
        if problem == Problem::Custom && inflow.is_none() {
            return Err(ConfigError::Invalid("the custom problem needs `inflow = rho, u, v, p`".into()));
        }

        let dv = VortexGeometry::default();
        let vortex = VortexGeometry {
            r_inner: self.or("vortex_r_inner", dv.r_inner)?,
            r_outer: self.or("vortex_r_outer", dv.r_outer)?,
            mach_inner: self.or("vortex_mach", dv.mach_inner)?,
            rho_inner: self.or("vortex_rho", dv.rho_inner)?,
        };
        if !(vortex.r_inner > 0.0 && vortex.r_outer > vortex.r_inner) {
            return Err(ConfigError::Invalid("vortex radii must satisfy 0 < r_inner < r_outer".into()));
        }
        let ds = ShockSetup::default();
        let shock = ShockSetup {
            x0: self.or("shock_x0", ds.x0)?,
            angle_deg: self.or("shock_angle_deg", ds.angle_deg)?,
            mach: self.or("shock_mach", ds.mach)?,
        };
        if !(shock.mach > 1.0) {
            return Err(bad("shock_mach"));
        }

        let workers: Option<usize> = self.get("workers")?;
        if workers == Some(0) {
            return Err(bad("workers"));
        }
        let chunk_size: usize = self.or("chunk_size", 256)?;
        if chunk_size == 0 {
            return Err(bad("chunk_size"));
        }

        Ok(RunConfig {
            problem,
            mesh,
            p,
            rk_order,
            cfl,
            limiting,
            positivity,
            stop,
            output,
            output_every: self.or("output_every", 0)?,
            out_dir: self.or("out_dir", PathBuf::from("out"))?,
            gamma,
            inflow,
            vortex,
            shock,
            workers,
            chunk_size,
            restart: self.get("restart")?,
            checkpoint: self.get("checkpoint")?,
        })
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        RawConfig::parse(text)?.resolve()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "problem = supersonic_vortex\nmesh = vortex:A\nsteady_tol = 1e-14\n";

    #[test]
    fn defaults() {
        let c = RunConfig::parse(BASE).unwrap();
        assert_eq!(c.p, 1);
        assert_eq!(c.rk_order, RkOrder::Rk4);
        assert_eq!(c.cfl, 0.3);
        assert!(!c.limiting);
        assert_eq!(c.stop, StopRule::Steady { tol: 1e-14, max_steps: 10_000_000 });
        assert_eq!(c.output, OutputFormat::None);
        assert_eq!(c.vortex, VortexGeometry::default());
    }

    #[test]
    fn comments_and_whitespace() {
        let c = RunConfig::parse("# header\n\n  problem=double_mach   # trailing\nmesh = dmr:8x2\nt_end=0.2\n").unwrap();
        assert_eq!(c.problem, Problem::DoubleMach);
        assert_eq!(c.stop, StopRule::TEnd(0.2));
    }

    #[test]
    fn exactly_one_stopping_rule() {
        let none = "problem = supersonic_vortex\nmesh = vortex:A\n";
        assert!(matches!(RunConfig::parse(none), Err(ConfigError::Invalid(_))));
        let two = format!("{BASE}t_end = 1\n");
        assert!(matches!(RunConfig::parse(&two), Err(ConfigError::Invalid(_))));
        let steps = "problem = supersonic_vortex\nmesh = vortex:A\nsteps = 10\n";
        assert_eq!(RunConfig::parse(steps).unwrap().stop, StopRule::Steps(10));
    }

    #[test]
    fn limiting_needs_linear_elements() {
        let bad = format!("{BASE}limit = on\np = 2\n");
        assert!(matches!(RunConfig::parse(&bad), Err(ConfigError::Invalid(_))));
        assert!(RunConfig::parse(&format!("{BASE}limit = on\n")).unwrap().limiting);
    }

    #[test]
    fn positivity_rides_on_the_limiter() {
        assert!(matches!(RunConfig::parse(&format!("{BASE}positivity = on\n")), Err(ConfigError::Invalid(_))));
        assert!(RunConfig::parse(&format!("{BASE}limit = on\npositivity = yes\n")).is_err());
        let c = RunConfig::parse(&format!("{BASE}limit = on\npositivity = on\n")).unwrap();
        assert!(c.limiting && c.positivity);
        assert!(!RunConfig::parse(BASE).unwrap().positivity);
    }

    #[test]
    fn rejects_bad_values_and_keys() {
        for extra in ["p = 6", "p = 0", "rk = 3", "cfl = -1", "limit = maybe", "gamma = 1", "workers = 0", "colour = red"] {
            assert!(RunConfig::parse(&format!("{BASE}{extra}\n")).is_err(), "{extra}");
        }
        assert!(matches!(RunConfig::parse("problem supersonic_vortex\n"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(RunConfig::parse(&format!("{BASE}p = 1\np = 2\n")), Err(ConfigError::Duplicate(_))));
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut raw = RawConfig::parse(&format!("{BASE}p = 2\n")).unwrap();
        raw.set("p", "4");
        raw.set("cfl", "0.5");
        let c = raw.resolve().unwrap();
        assert_eq!((c.p, c.cfl), (4, 0.5));
    }

    #[test]
    fn custom_needs_inflow() {
        let text = "problem = custom\nmesh = a.msh\nt_end = 1\n";
        assert!(RunConfig::parse(text).is_err());
        let c = RunConfig::parse(&format!("{text}inflow = 1.4, 3, 0, 1\n")).unwrap();
        assert_eq!(c.inflow, Some([1.4, 3.0, 0.0, 1.0]));
    }
}
