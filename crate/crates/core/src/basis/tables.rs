use super::{gauss_legendre, interior_quadrature, side_point, Basis, BasisError};

/// Basis values and gradients at every quadrature point, precomputed once
/// per degree and shared read-only by all workers.
///
/// Arrays are flat and row-major by quadrature point, then mode:
/// `phi_interior[k * n_modes + j]` is `phi_j(r_k)`, and
/// `phi_edge[(side * n_edge + k) * n_modes + j]` is `phi_j` at the `k`-th
/// Gauss point of canonical side `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTables {
    pub p: usize,
    pub n_modes: usize,
    pub phi_interior: Vec<f64>,
    pub dphi_dr_interior: Vec<f64>,
    pub dphi_ds_interior: Vec<f64>,
    pub phi_edge: Vec<f64>,
    pub w_interior: Vec<f64>,
    pub w_edge: Vec<f64>,
    pub r_interior: Vec<[f64; 2]>,
    /// Gauss points of each side in counter-clockwise order, `[side][k]`.
    pub r_edge: Vec<[[f64; 2]; 3]>,
    /// Gauss–Legendre nodes on `[-1, 1]`, ascending.
    pub xi_edge: Vec<f64>,
}

impl BasisTables {
    pub fn build(p: usize) -> Result<Self, BasisError> {
        let basis = Basis::new(p)?;
        let rule = interior_quadrature(p)?;
        let gl = gauss_legendre(p + 1);
        let n_modes = basis.len();

        let mut phi_interior = Vec::with_capacity(rule.len() * n_modes);
        let mut dphi_dr_interior = Vec::with_capacity(rule.len() * n_modes);
        let mut dphi_ds_interior = Vec::with_capacity(rule.len() * n_modes);
        for &x in &rule.points {
            let (phi, grad) = basis.eval_with_grad(x);
            phi_interior.extend(phi);
            dphi_dr_interior.extend(grad.iter().map(|g| g[0]));
            dphi_ds_interior.extend(grad.iter().map(|g| g[1]));
        }

        let n_edge = gl.len();
        let mut phi_edge = Vec::with_capacity(3 * n_edge * n_modes);
        let mut r_edge = vec![[[0.0; 2]; 3]; n_edge];
        for side in 0..3 {
            for (k, &xi) in gl.points.iter().enumerate() {
                let x = side_point(side, xi);
                r_edge[k][side] = x;
                phi_edge.extend(basis.eval_all(x));
            }
        }

        Ok(Self {
            p,
            n_modes,
            phi_interior,
            dphi_dr_interior,
            dphi_ds_interior,
            phi_edge,
            w_interior: rule.weights,
            w_edge: gl.weights,
            r_interior: rule.points,
            r_edge,
            xi_edge: gl.points,
        })
    }

    pub fn n_interior(&self) -> usize {
        self.w_interior.len()
    }

    /// Gauss points per edge, `p + 1`.
    pub fn n_edge(&self) -> usize {
        self.w_edge.len()
    }

    #[inline]
    pub fn phi(&self, k: usize) -> &[f64] {
        &self.phi_interior[k * self.n_modes..(k + 1) * self.n_modes]
    }

    #[inline]
    pub fn dphi_dr(&self, k: usize) -> &[f64] {
        &self.dphi_dr_interior[k * self.n_modes..(k + 1) * self.n_modes]
    }

    #[inline]
    pub fn dphi_ds(&self, k: usize) -> &[f64] {
        &self.dphi_ds_interior[k * self.n_modes..(k + 1) * self.n_modes]
    }

    /// Mode values at Gauss point `k` of canonical side `side`.
    #[inline]
    pub fn phi_side(&self, side: usize, k: usize) -> &[f64] {
        let row = side * self.n_edge() + k;
        &self.phi_edge[row * self.n_modes..(row + 1) * self.n_modes]
    }

    /// Number of `f64` values held by the tables: basis values, both
    /// gradient components, edge values, both weight sets, interior points
    /// and edge points (two coordinates each).
    pub fn stored_doubles(&self) -> usize {
        self.phi_interior.len()
            + self.dphi_dr_interior.len()
            + self.dphi_ds_interior.len()
            + self.phi_edge.len()
            + self.w_interior.len()
            + self.w_edge.len()
            + 2 * self.r_interior.len()
            + 2 * 3 * self.r_edge.len()
    }

    /// CSV dump, one row per table entry: `table,point,side,mode,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,point,side,mode,value\n");
        let n = self.n_modes;
        for k in 0..self.n_interior() {
            for j in 0..n {
                out += &format!("phi,{k},,{j},{}\n", self.phi(k)[j]);
                out += &format!("dphi_dr,{k},,{j},{}\n", self.dphi_dr(k)[j]);
                out += &format!("dphi_ds,{k},,{j},{}\n", self.dphi_ds(k)[j]);
            }
        }
        for side in 0..3 {
            for k in 0..self.n_edge() {
                for j in 0..n {
                    out += &format!("phi_edge,{k},{},{j},{}\n", side + 1, self.phi_side(side, k)[j]);
                }
            }
        }
        for (k, w) in self.w_interior.iter().enumerate() {
            out += &format!("w_interior,{k},,,{w}\n");
        }
        for (k, w) in self.w_edge.iter().enumerate() {
            out += &format!("w_edge,{k},,,{w}\n");
        }
        out
    }
}
