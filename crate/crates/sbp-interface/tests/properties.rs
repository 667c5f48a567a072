use proptest::prelude::*;

use sbp_interface::euler::{convergence_rate, Primitive};
use sbp_interface::interp::{load_interp_pair, verify_accuracy, verify_sbp_preserving, InterpKind};
use sbp_interface::linalg::Matrix;
use sbp_interface::sat::symmetric_split;
use sbp_interface::sbp::{make_sbp_operator, verify_sbp_property};
use sbp_interface::tensor::kron;

fn sym3() -> impl Strategy<Value = Matrix<f64>> {
    prop::array::uniform6(-3.0f64..3.0).prop_map(|v| {
        Matrix::from_rows(vec![vec![v[0], v[1], v[2]], vec![v[1], v[3], v[4]], vec![v[2], v[4], v[5]]])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sbp_identity_holds_on_any_grid(order in prop::sample::select(vec![2usize, 4, 6, 8]), extra in 0usize..30, h in 0.01f64..1.0) {
        let n = 2 * order + 2 + extra;
        let r = verify_sbp_property(&make_sbp_operator(order, n, h).unwrap());
        prop_assert!(r.pass && r.exact, "{:?}", r.failures);
    }

    #[test]
    fn derivative_exact_for_low_degree(order in prop::sample::select(vec![2usize, 4, 6, 8]), extra in 0usize..20, x0 in -1.0f64..1.0, h in 0.02f64..0.2) {
        let n = 2 * order + 2 + extra;
        let op = make_sbp_operator(order, n, h).unwrap();
        let k = (order / 2) as i32;
        let u: Vec<f64> = (0..=n).map(|i| (x0 + i as f64 * h).powi(k)).collect();
        let du = op.apply_d1(&u).unwrap();
        let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs())) / h;
        for (i, d) in du.iter().enumerate() {
            let exact = k as f64 * (x0 + i as f64 * h).powi(k - 1);
            prop_assert!((d - exact).abs() <= 1e-10 * scale, "row {} {} vs {}", i, d, exact);
        }
    }

    #[test]
    fn tabulated_pairs_valid_for_any_size(kind in prop::sample::select(vec![InterpKind::P2, InterpKind::P4, InterpKind::P6, InterpKind::P4To2, InterpKind::P8To4]), mc in 24usize..48) {
        let pair = load_interp_pair(kind, mc, 1.0 / mc as f64).unwrap();
        prop_assert!(verify_sbp_preserving(&pair).pass);
        prop_assert!(verify_accuracy(&pair).pass);
    }

    #[test]
    fn flux_split_reassembles(a in sym3()) {
        let s = symmetric_split(&a).unwrap();
        prop_assert!(s.plus.add(&s.minus).sub(&a).max_abs() < 1e-12);
        prop_assert!(s.plus.sub(&s.minus).sub(&s.bar).max_abs() < 1e-12);
        prop_assert!(s.plus.min_sym_eigenvalue().unwrap() > -1e-12);
        prop_assert!(s.minus.scale(&-1.0).min_sym_eigenvalue().unwrap() > -1e-12);
    }

    #[test]
    fn kron_mixed_product(a in prop::array::uniform4(-4i32..4), b in prop::array::uniform4(-4i32..4), c in prop::array::uniform4(-4i32..4), d in prop::array::uniform4(-4i32..4)) {
        let m = |v: [i32; 4]| Matrix::from_fn(2, 2, |i, j| v[2 * i + j] as f64);
        let (a, b, c, d) = (m(a), m(b), m(c), m(d));
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rate_recovers_power_law(q in 0.5f64..9.0, c in 0.1f64..10.0, h in 0.005f64..0.1) {
        let (h1, h2) = (h, h * 2.0 / 3.0);
        let r = convergence_rate(c * h1.powf(q), c * h2.powf(q), h1, h2).unwrap();
        prop_assert!((r - q).abs() < 1e-9);
    }

    #[test]
    fn primitive_round_trip(rho in 0.1f64..3.0, u in -2.0f64..2.0, v in -2.0f64..2.0, p in 0.1f64..20.0) {
        let w = Primitive { rho, u, v, p };
        let back = Primitive::from_conservative(&w.to_conservative(1.4), 1.4);
        prop_assert!((back.rho - rho).abs() < 1e-12 && (back.u - u).abs() < 1e-12);
        prop_assert!((back.v - v).abs() < 1e-12 && (back.p - p).abs() < 1e-10);
    }
}
