//! The orthonormal modal basis on the canonical triangle `(0,0), (1,0), (0,1)`.
//!
//! Modes are the Koornwinder–Dubiner polynomials
//!
//! ```text
//! phi_(a,b)(r, s) = sqrt(2 (2a+1)(a+b+1)) * Q_a(r, s) * P_b^(2a+1, 0)(2s - 1)
//! ```
//!
//! where `Q_a = (1 - s)^a P_a((2r - 1 + s) / (1 - s))` is the homogenised
//! Legendre polynomial, generated by
//! `(a+1) Q_{a+1} = (2a+1)(2r - 1 + s) Q_a - a (1-s)^2 Q_{a-1}`
//! so that the collapsed-coordinate singularity never appears.
//! Values are computed from the three-term recurrences directly (expanding
//! into monomials loses several digits at p = 4, 5); gradients come from
//! carrying first derivatives through the same recurrences.
//!
//! Modes are ordered by total degree, and inside one degree by increasing
//! `a`. Mode 0 is the constant `sqrt(2)`, modes 1 and 2 are the two linear
//! modes.

/// Value with its `(d/dr, d/ds)` derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dual {
    v: f64,
    dr: f64,
    ds: f64,
}

impl Dual {
    const fn new(v: f64, dr: f64, ds: f64) -> Self {
        Self { v, dr, ds }
    }

    const fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.v * o.v, self.dr * o.v + self.v * o.dr, self.ds * o.v + self.v * o.ds)
    }

    fn scale(self, k: f64) -> Self {
        Self::new(self.v * k, self.dr * k, self.ds * k)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.v - o.v, self.dr - o.dr, self.ds - o.ds)
    }

    fn add_const(self, c: f64) -> Self {
        Self::new(self.v + c, self.dr, self.ds)
    }
}

/// Number of modes of the complete polynomial space of degree `p`.
pub const fn mode_count(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

/// `(a, b)` index pair of mode `j` (0-based, degree-graded ordering).
pub fn mode_indices(j: usize) -> (usize, usize) {
    let mut d = 0;
    let mut first = 0;
    while first + d < j {
        first += d + 1;
        d += 1;
    }
    let a = j - first;
    (a, d - a)
}

/// Values and gradients of all modes of degree `<= p` at `(r, s)`.
pub(crate) fn eval_modes(p: usize, r: f64, s: f64, phi: &mut [f64], grad: &mut [[f64; 2]]) {
    let x = Dual::new(2.0 * r - 1.0 + s, 2.0, 1.0);
    let y = Dual::new(1.0 - s, 0.0, -1.0);
    let y2 = y.mul(y);
    let z = Dual::new(2.0 * s - 1.0, 0.0, 2.0);

    let mut q = Vec::with_capacity(p + 1);
    q.push(Dual::constant(1.0));
    if p >= 1 {
        q.push(x);
    }
    for a in 1..p {
        let af = a as f64;
        let next = x
            .mul(q[a])
            .scale(2.0 * af + 1.0)
            .sub(y2.mul(q[a - 1]).scale(af))
            .scale(1.0 / (af + 1.0));
        q.push(next);
    }

    // P_b^(alpha, 0)(z) for every a, b with a + b <= p
    let mut jac = vec![Vec::new(); p + 1];
    for (a, row) in jac.iter_mut().enumerate() {
        let al = (2 * a + 1) as f64;
        let nb = p - a;
        row.push(Dual::constant(1.0));
        if nb >= 1 {
            row.push(z.scale(0.5 * (al + 2.0)).add_const(0.5 * al));
        }
        for n in 2..=nb {
            let nf = n as f64;
            let c = 2.0 * nf + al;
            let a1 = 2.0 * nf * (nf + al) * (c - 2.0);
            let a2 = (c - 1.0) * al * al;
            let a3 = (c - 1.0) * c * (c - 2.0);
            let a4 = 2.0 * (nf + al - 1.0) * (nf - 1.0) * c;
            let next = z
                .scale(a3)
                .add_const(a2)
                .mul(row[n - 1])
                .sub(row[n - 2].scale(a4))
                .scale(1.0 / a1);
            row.push(next);
        }
    }

    for j in 0..mode_count(p) {
        let (a, b) = mode_indices(j);
        let norm = (2.0 * (2 * a + 1) as f64 * (a + b + 1) as f64).sqrt();
        let m = q[a].mul(jac[a][b]).scale(norm);
        phi[j] = m.v;
        grad[j] = [m.dr, m.ds];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modes(p: usize, r: f64, s: f64) -> (Vec<f64>, Vec<[f64; 2]>) {
        let n = mode_count(p);
        let mut phi = vec![0.0; n];
        let mut grad = vec![[0.0; 2]; n];
        eval_modes(p, r, s, &mut phi, &mut grad);
        (phi, grad)
    }

    #[test]
    fn mode_ordering_is_degree_graded() {
        let idx: Vec<_> = (0..6).map(mode_indices).collect();
        assert_eq!(idx, vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
        assert_eq!(mode_count(1), 3);
        assert_eq!(mode_count(5), 21);
    }

    #[test]
    fn constant_mode_is_sqrt_two() {
        for &(r, s) in &[(0.0, 0.0), (0.2, 0.3), (1.0, 0.0), (0.0, 1.0)] {
            let (phi, grad) = modes(3, r, s);
            assert!((phi[0] - 2f64.sqrt()).abs() < 1e-15);
            assert_eq!(grad[0], [0.0, 0.0]);
        }
    }

    #[test]
    fn linear_modes_in_closed_form() {
        // (0,1): 2 P_1^(1,0)(2s-1) = 6s - 2;  (1,0): sqrt(12) (2r - 1 + s)
        let (r, s) = (0.3, 0.45);
        let (phi, grad) = modes(1, r, s);
        assert!((phi[1] - (6.0 * s - 2.0)).abs() < 1e-15);
        assert_eq!(grad[1], [0.0, 6.0]);
        let k = 12f64.sqrt();
        assert!((phi[2] - k * (2.0 * r - 1.0 + s)).abs() < 1e-15);
        assert!((grad[2][0] - 2.0 * k).abs() < 1e-15 && (grad[2][1] - k).abs() < 1e-15);
    }
}
