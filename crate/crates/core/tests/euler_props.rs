use dg2d::euler::{flux, ghost_state, pressure, reflect, riemann_solver, BoundaryConditions, EulerState, GasModel};
use dg2d::BoundaryCode;
use proptest::prelude::*;

const GAS: GasModel = GasModel { gamma: 1.4 };

fn state() -> impl Strategy<Value = EulerState> {
    (0.05f64..10.0, -5.0f64..5.0, -5.0f64..5.0, 0.05f64..50.0)
        .prop_map(|(rho, u, v, p)| EulerState::from_primitive(rho, u, v, p, &GAS))
}

fn normal() -> impl Strategy<Value = [f64; 2]> {
    (0.0f64..std::f64::consts::TAU).prop_map(|a| [a.cos(), a.sin()])
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * scale.max(1.0)
}

fn scale_of(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn rotate(u: &EulerState, th: f64) -> EulerState {
    let (s, c) = th.sin_cos();
    EulerState::new(u.rho, c * u.mx - s * u.my, s * u.mx + c * u.my, u.e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn llf_is_consistent(u in state(), n in normal()) {
        let f = riemann_solver(&u, &u, n, &GAS).unwrap();
        let (f1, f2) = flux(&u, &GAS).unwrap();
        let s = scale_of(&f1).max(scale_of(&f2));
        for m in 0..4 {
            prop_assert!(close(f[m], f1[m] * n[0] + f2[m] * n[1], s));
        }
    }

    #[test]
    fn llf_is_antisymmetric(ul in state(), ur in state(), n in normal()) {
        let a = riemann_solver(&ul, &ur, n, &GAS).unwrap();
        let b = riemann_solver(&ur, &ul, [-n[0], -n[1]], &GAS).unwrap();
        let s = scale_of(&a);
        for m in 0..4 {
            prop_assert!(close(a[m], -b[m], s));
        }
    }

    #[test]
    fn llf_is_rotation_covariant(ul in state(), ur in state(), n in normal(), th in 0.0f64..std::f64::consts::TAU) {
        let f = riemann_solver(&ul, &ur, n, &GAS).unwrap();
        let (s, c) = th.sin_cos();
        let nr = [c * n[0] - s * n[1], s * n[0] + c * n[1]];
        let g = riemann_solver(&rotate(&ul, th), &rotate(&ur, th), nr, &GAS).unwrap();
        let expect = [f[0], c * f[1] - s * f[2], s * f[1] + c * f[2], f[3]];
        let sc = scale_of(&f);
        for m in 0..4 {
            prop_assert!(close(g[m], expect[m], sc), "{m}: {} vs {}", g[m], expect[m]);
        }
    }

    #[test]
    fn reflection_is_an_involution(u in state(), n in normal()) {
        let back = reflect(&reflect(&u, n), n);
        let s = scale_of(&u.to_array());
        for (a, b) in back.to_array().iter().zip(u.to_array()) {
            prop_assert!(close(*a, b, s));
        }
        let g = reflect(&u, n);
        prop_assert!(close(pressure(&g, &GAS).unwrap(), pressure(&u, &GAS).unwrap(), u.e));
    }

    #[test]
    fn outflow_ghost_is_identity(u in state(), n in normal()) {
        let g = ghost_state(&u, BoundaryCode::OUTFLOW, [0.3, 0.7], n, 1.0, &BoundaryConditions::default()).unwrap();
        prop_assert_eq!(g, u);
    }
}
