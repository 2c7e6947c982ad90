//! Errors, reports and field output.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use dg2d::basis::{Basis, CANONICAL_VERTICES};
use dg2d::euler::pressure;
use dg2d::mesh::geometry::map_to_physical;
use dg2d::{BasisTables, CoefficientArray, EulerState, GasModel, Mesh};

/// L2 norm of the density error against `exact`, with the tables' interior
/// rule.
pub fn compute_l2_error<F>(c: &CoefficientArray, exact: F, mesh: &Mesh, tables: &BasisTables) -> f64
where
    F: Fn([f64; 2]) -> EulerState,
{
    let mut sum = 0.0;
    for i in 0..mesh.n_elements() {
        let v = mesh.element_vertices(i);
        let mut local = 0.0;
        for k in 0..tables.n_interior() {
            let rho_h = c.eval(i, tables.phi(k))[0];
            let rho = exact(map_to_physical(&v, tables.r_interior[k])).rho;
            local += tables.w_interior[k] * (rho_h - rho).powi(2);
        }
        sum += mesh.elements[i].jacobian_det * local;
    }
    sum.sqrt()
}

/// `(rho, rho u, rho v, E, p)` at the three corners of every element.
/// Pressure is NaN where the state is inadmissible.
fn corner_values(c: &CoefficientArray, mesh: &Mesh, gas: &GasModel) -> Vec<[[f64; 5]; 3]> {
    let basis = Basis::new(c_degree(c)).expect("coefficient array has a valid degree");
    let phis: Vec<Vec<f64>> = CANONICAL_VERTICES.iter().map(|&x| basis.eval_all(x)).collect();
    (0..mesh.n_elements())
        .map(|i| {
            std::array::from_fn(|k| {
                let u = c.eval(i, &phis[k]);
                let p = pressure(&EulerState::from_array(u), gas).unwrap_or(f64::NAN);
                [u[0], u[1], u[2], u[3], p]
            })
        })
        .collect()
}

fn c_degree(c: &CoefficientArray) -> usize {
    (1..=dg2d::basis::MAX_DEGREE)
        .find(|&p| dg2d::basis::mode_count(p) == c.n_modes())
        .expect("coefficient array has a valid number of modes")
}

pub const FIELD_NAMES: [&str; 5] = ["rho", "rho_u", "rho_v", "E", "p"];

/// Legacy ASCII VTK unstructured grid. Every triangle carries its own three
/// corners, so jumps between elements stay visible. Field values are
/// written to 15 significant digits, which hides rounding noise in the
/// last bits.
pub fn write_vtk<W: Write>(mut w: W, c: &CoefficientArray, mesh: &Mesh, gas: &GasModel) -> io::Result<()> {
    let n = mesh.n_elements();
    let values = corner_values(c, mesh, gas);
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\ndg2d solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", 3 * n);
    for i in 0..n {
        for v in mesh.element_vertices(i) {
            let _ = writeln!(s, "{:e} {:e} 0", v[0], v[1]);
        }
    }
    let _ = writeln!(s, "CELLS {n} {}", 4 * n);
    for i in 0..n {
        let _ = writeln!(s, "3 {} {} {}", 3 * i, 3 * i + 1, 3 * i + 2);
    }
    let _ = writeln!(s, "CELL_TYPES {n}");
    for _ in 0..n {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "POINT_DATA {}", 3 * n);
    for (f, name) in FIELD_NAMES.iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for corners in &values {
            for v in corners {
                let _ = writeln!(s, "{:.14e}", v[f]);
            }
        }
    }
    w.write_all(s.as_bytes())
}

pub fn export_vtk(c: &CoefficientArray, mesh: &Mesh, gas: &GasModel, path: &Path) -> io::Result<()> {
    write_vtk(io::BufWriter::new(std::fs::File::create(path)?), c, mesh, gas)
}

/// One row per element: centroid and the mean conserved state and pressure.
pub fn write_csv<W: Write>(mut w: W, c: &CoefficientArray, mesh: &Mesh, gas: &GasModel) -> io::Result<()> {
    let mut s = String::from("element,x,y,rho,rho_u,rho_v,E,p\n");
    // the mean is mode 0 times phi_0 = sqrt 2
    let k = std::f64::consts::SQRT_2;
    for i in 0..mesh.n_elements() {
        let v = mesh.element_vertices(i);
        let x = (v[0][0] + v[1][0] + v[2][0]) / 3.0;
        let y = (v[0][1] + v[1][1] + v[2][1]) / 3.0;
        let u: [f64; 4] = std::array::from_fn(|m| k * c.get(m, 0, i));
        let p = pressure(&EulerState::from_array(u), gas).unwrap_or(f64::NAN);
        let _ = writeln!(s, "{i},{x:e},{y:e},{:e},{:e},{:e},{:e},{p:e}", u[0], u[1], u[2], u[3]);
    }
    w.write_all(s.as_bytes())
}

pub fn export_csv(c: &CoefficientArray, mesh: &Mesh, gas: &GasModel, path: &Path) -> io::Result<()> {
    write_csv(io::BufWriter::new(std::fs::File::create(path)?), c, mesh, gas)
}

/// Outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub l2_density_error: Option<f64>,
    /// Rate against the previous mesh, when one was supplied.
    pub convergence_rate: Option<f64>,
    pub steps: usize,
    pub t_final: f64,
    /// `max |c^{n+1} - c^n|` of the last step.
    pub last_residual: f64,
    pub wall_time: Duration,
    /// Shares of `[volume, surface, rhs, limit, other]`.
    pub shares: [f64; 5],
    pub elements: usize,
}

/// Observed order from errors on two meshes, with `h ~ N^{-1/2}`.
pub fn convergence_rate(prev_error: f64, prev_elements: usize, error: f64, elements: usize) -> f64 {
    (prev_error / error).ln() / (0.5 * (elements as f64 / prev_elements as f64).ln())
}

impl ErrorReport {
    pub fn with_previous(mut self, prev: &ErrorReport) -> Self {
        if let (Some(e0), Some(e1)) = (prev.l2_density_error, self.l2_density_error) {
            self.convergence_rate = Some(convergence_rate(e0, prev.elements, e1, self.elements));
        }
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "elements        {}", self.elements);
        let _ = writeln!(s, "steps           {}", self.steps);
        let _ = writeln!(s, "final time      {:.6e}", self.t_final);
        let _ = writeln!(s, "last residual   {:.3e}", self.last_residual);
        if let Some(e) = self.l2_density_error {
            let _ = writeln!(s, "L2 rho error    {e:.4e}");
        }
        if let Some(r) = self.convergence_rate {
            let _ = writeln!(s, "rate            {r:.3}");
        }
        let _ = writeln!(s, "wall time       {:.3} s", self.wall_time.as_secs_f64());
        let names = ["volume", "surface", "rhs", "limit", "other"];
        for (n, x) in names.iter().zip(self.shares) {
            let _ = writeln!(s, "  {n:<8} {:5.1} %", 100.0 * x);
        }
        s
    }

    pub fn to_key_values(&self) -> String {
        let opt = |x: Option<f64>| x.map_or("none".to_string(), |v| format!("{v:e}"));
        let mut s = String::new();
        let _ = writeln!(s, "elements={}", self.elements);
        let _ = writeln!(s, "steps={}", self.steps);
        let _ = writeln!(s, "t_final={:e}", self.t_final);
        let _ = writeln!(s, "last_residual={:e}", self.last_residual);
        let _ = writeln!(s, "l2_density_error={}", opt(self.l2_density_error));
        let _ = writeln!(s, "convergence_rate={}", opt(self.convergence_rate));
        let _ = writeln!(s, "wall_time={:e}", self.wall_time.as_secs_f64());
        for (n, x) in ["volume", "surface", "rhs", "limit", "other"].iter().zip(self.shares) {
            let _ = writeln!(s, "share_{n}={x:e}");
        }
        s
    }
}
