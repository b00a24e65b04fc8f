use proptest::prelude::*;
use quadpot::fixtures;
use quadpot::kernels::{eval_element, kernel_element, KernelKind};
use quadpot::ratcalc::circle_point;
use quadpot::Complex64;

fn inner_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.7f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn szego_kernel_reproduces(v in inner_point(), k in 0i32..4, which in 0usize..3) {
        let dom = fixtures::all_domains().swap_remove(which);
        let s = kernel_element(&dom, KernelKind::Szego, v, 0).unwrap();
        let n = 1024;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let w = circle_point(j, n);
            let z = dom.eval_map(w);
            acc += z.powi(k) * eval_element(&s, &dom, w).unwrap().conj() * dom.eval_derivative(w).norm();
        }
        acc *= 2.0 * std::f64::consts::PI / n as f64;
        let expect = dom.eval_map(v).powi(k);
        prop_assert!((acc - expect).norm() < 1e-10 * (1.0 + expect.norm()), "{} vs {}", acc, expect);
    }

    #[test]
    fn kernels_are_hermitian(a in inner_point(), b in inner_point(), which in 0usize..3) {
        let dom = fixtures::all_domains().swap_remove(which);
        for kind in [KernelKind::Szego, KernelKind::Bergman] {
            let ka = kernel_element(&dom, kind, a, 0).unwrap();
            let kb = kernel_element(&dom, kind, b, 0).unwrap();
            let x = eval_element(&ka, &dom, b).unwrap();
            let y = eval_element(&kb, &dom, a).unwrap();
            prop_assert!((x - y.conj()).norm() < 1e-10 * (1.0 + x.norm()), "{:?}: {} vs {}", kind, x, y);
        }
    }
}

#[test]
fn order_cap_is_enforced() {
    let d = fixtures::disc();
    assert!(kernel_element(&d, KernelKind::Szego, Complex64::new(0.1, 0.0), 12).is_ok());
    assert!(matches!(
        kernel_element(&d, KernelKind::Szego, Complex64::new(0.1, 0.0), 13),
        Err(quadpot::Error::OrderCapExceeded { .. })
    ));
    assert!(matches!(
        kernel_element(&d, KernelKind::Garabedian, Complex64::new(1.0, 0.0), 0),
        Err(quadpot::Error::ParameterOutsideDisc(_))
    ));
}
