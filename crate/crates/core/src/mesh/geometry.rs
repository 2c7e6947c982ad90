//! Affine element maps and edge geometry.

use super::MeshError;

/// `(det J, det J * J^-1)` of the map from the canonical triangle onto the
/// triangle with counter-clockwise vertices `v`.
///
/// `J = [[x2 - x1, x3 - x1], [y2 - y1, y3 - y1]]`. The second value, `tau`,
/// satisfies `tau * J = det J * I`; physical gradients follow from reference
/// gradients as `det J * grad_xy = tau^T * grad_rs`.
pub fn element_jacobian(v: &[[f64; 2]; 3]) -> Result<(f64, [[f64; 2]; 2]), MeshError> {
    let j00 = v[1][0] - v[0][0];
    let j01 = v[2][0] - v[0][0];
    let j10 = v[1][1] - v[0][1];
    let j11 = v[2][1] - v[0][1];
    let det = j00 * j11 - j01 * j10;
    if !(det > 0.0) {
        return Err(MeshError::DegenerateElement { det });
    }
    Ok((det, [[j11, -j01], [-j10, j00]]))
}

/// Unit normal (outward for a counter-clockwise owner traversing `a -> b`)
/// and half length of the edge `a -> b`.
pub fn edge_geometry(a: [f64; 2], b: [f64; 2]) -> Result<([f64; 2], f64), MeshError> {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let len = (dx * dx + dy * dy).sqrt();
    if !(len > 0.0) {
        return Err(MeshError::ZeroLengthEdge);
    }
    Ok(([dy / len, -dx / len], 0.5 * len))
}

/// Twice the signed area of the triangle `a, b, c`.
pub fn signed_area2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
}

/// Inscribed-circle radius, `2 * area / perimeter`.
pub fn inradius(v: &[[f64; 2]; 3]) -> f64 {
    let side = |a: [f64; 2], b: [f64; 2]| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let perimeter = side(v[0], v[1]) + side(v[1], v[2]) + side(v[2], v[0]);
    signed_area2(v[0], v[1], v[2]).abs() / perimeter
}

/// Physical image of reference point `(r, s)`.
#[inline]
pub fn map_to_physical(v: &[[f64; 2]; 3], rs: [f64; 2]) -> [f64; 2] {
    let l0 = 1.0 - rs[0] - rs[1];
    [
        l0 * v[0][0] + rs[0] * v[1][0] + rs[1] * v[2][0],
        l0 * v[0][1] + rs[0] * v[1][1] + rs[1] * v[2][1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    #[test]
    fn canonical_triangle_is_identity() {
        let (det, tau) = element_jacobian(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(det, 1.0);
        assert_eq!(tau, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn uniform_scaling() {
        let (det, tau) = element_jacobian(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(det, 4.0);
        assert_eq!(tau, [[2.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn tau_inverts_jacobian() {
        let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];
        let (det, tau) = element_jacobian(&v).unwrap();
        assert_eq!(det, 1.0);
        // direct 2x2 inverse oracle: J = [[1, 1], [0, 1]], J^-1 = [[1, -1], [0, 1]]
        assert_eq!(tau, [[1.0, -1.0], [0.0, 1.0]]);
        let j = [[1.0, 1.0], [0.0, 1.0]];
        assert_eq!(mat_mul(tau, j), [[det, 0.0], [0.0, det]]);
    }

    #[test]
    fn collinear_triangle_is_rejected() {
        let err = element_jacobian(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap_err();
        assert!(matches!(err, MeshError::DegenerateElement { .. }));
        assert!(element_jacobian(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn half_length_and_normal() {
        let (_, half) = edge_geometry([0.0, 0.0], [3.0, 4.0]).unwrap();
        assert_eq!(half, 2.5);
        let (n, _) = edge_geometry([0.0, 0.0], [1.0, 0.0]).unwrap();
        assert_eq!(n, [0.0, -1.0]);
        assert!(matches!(
            edge_geometry([1.0, 1.0], [1.0, 1.0]),
            Err(MeshError::ZeroLengthEdge)
        ));
    }

    #[test]
    fn canonical_inradius() {
        let r = inradius(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!((r - 1.0 / (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
