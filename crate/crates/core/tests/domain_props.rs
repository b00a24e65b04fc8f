use proptest::prelude::*;
use quadpot::fixtures;
use quadpot::ratcalc::circle_point;
use quadpot::Complex64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invert_map_inverts(r in 0.0..0.95f64, t in 0.0..std::f64::consts::TAU, which in 0usize..3) {
        let dom = fixtures::all_domains().swap_remove(which);
        let v = Complex64::from_polar(r, t);
        let back = dom.invert_map(dom.eval_map(v)).unwrap();
        prop_assert!((back - v).norm() < 1e-10);
    }

    #[test]
    fn schwarz_function_is_conjugate_on_boundary(t in 0.0..std::f64::consts::TAU, which in 0usize..3) {
        let dom = fixtures::all_domains().swap_remove(which);
        let w = Complex64::from_polar(1.0, t);
        let s = dom.schwarz_pullback().value(w);
        prop_assert!((s - dom.eval_map(w).conj()).norm() < 1e-12);
    }

    #[test]
    fn witness_gives_arc_length(t in 0.0..std::f64::consts::TAU) {
        let dom = fixtures::double_cubic();
        let w = Complex64::from_polar(1.0, t);
        let q = dom.witness().unwrap().value(w);
        let qr = dom.witness_reflect().unwrap().value(w);
        prop_assert!(((q * qr).re - dom.eval_derivative(w).norm()).abs() < 1e-12);
        prop_assert!((q * qr).im.abs() < 1e-12);
    }
}

#[test]
fn frame_is_consistent() {
    for dom in fixtures::all_domains() {
        for k in 0..32 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
            let fr = dom.boundary_frame(th);
            assert!((fr.w - circle_point(k, 32)).norm() < 1e-14);
            assert!((fr.tangent.norm() - 1.0).abs() < 1e-14);
            let h = 1e-6;
            let dz = (dom.eval_map(Complex64::from_polar(1.0, th + h)) - dom.eval_map(Complex64::from_polar(1.0, th - h))) / (2.0 * h);
            assert!((dz / dz.norm() - fr.tangent).norm() < 1e-8);
            assert!((dz.norm() - fr.speed).abs() < 1e-8);
        }
    }
}

#[test]
fn json_round_trip_preserves_domain() {
    for dom in fixtures::all_domains() {
        let back = quadpot::QuadDomain::from_json_str(&dom.to_json().to_string()).unwrap();
        assert_eq!(back.name(), dom.name());
        assert_eq!(back.is_double(), dom.is_double());
        for k in 0..8 {
            let w = circle_point(k, 8) * 0.7;
            assert_eq!(back.eval_map(w), dom.eval_map(w));
        }
    }
}
