use cev_core::quadrature::{integrate_adaptive, integrate_upper_semi_infinite, QuadratureSpec};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

/// Smooth test family with closed-form antiderivatives.
#[derive(Debug, Clone, Copy)]
enum Family {
    Exp(f64),
    Sin(f64),
    Lorentz(f64),
    Poly(f64),
}

impl Family {
    fn f(self, x: f64) -> f64 {
        match self {
            Family::Exp(c) => (c * x).exp(),
            Family::Sin(w) => (w * x).sin(),
            Family::Lorentz(s) => 1.0 / (1.0 + (s * x) * (s * x)),
            Family::Poly(c) => x.powi(5) - c * x * x + 1.0,
        }
    }

    fn antiderivative(self, x: f64) -> f64 {
        match self {
            Family::Exp(c) => (c * x).exp() / c,
            Family::Sin(w) => -(w * x).cos() / w,
            Family::Lorentz(s) => (s * x).atan() / s,
            Family::Poly(c) => x.powi(6) / 6.0 - c * x.powi(3) / 3.0 + x,
        }
    }
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (0.1f64..3.0).prop_map(Family::Exp),
        (0.5f64..20.0).prop_map(Family::Sin),
        (0.5f64..30.0).prop_map(Family::Lorentz),
        (-3.0f64..3.0).prop_map(Family::Poly),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linearity(f in family(), c in 0.1f64..10.0, a in -2.0f64..0.0, len in 0.5f64..3.0) {
        let spec = QuadratureSpec::default();
        let b = a + len;
        let base = integrate_adaptive(|x| f.f(x), a, b, &spec).unwrap();
        let scaled = integrate_adaptive(|x| c * f.f(x), a, b, &spec).unwrap();
        let tol = 2.0 * spec.tolerance_for(scaled.value);
        prop_assert!((scaled.value - c * base.value).abs() <= tol, "{} vs {}", scaled.value, c * base.value);
    }

    #[test]
    fn additivity(f in family(), a in -2.0f64..0.0, l1 in 0.2f64..2.0, l2 in 0.2f64..2.0) {
        let spec = QuadratureSpec::default();
        let (b, c) = (a + l1, a + l1 + l2);
        let left = integrate_adaptive(|x| f.f(x), a, b, &spec).unwrap();
        let right = integrate_adaptive(|x| f.f(x), b, c, &spec).unwrap();
        let whole = integrate_adaptive(|x| f.f(x), a, c, &spec).unwrap();
        let bound = left.error_estimate + right.error_estimate + whole.error_estimate + 4.0 * f64::EPSILON * whole.value.abs();
        prop_assert!((left.value + right.value - whole.value).abs() <= bound);
    }
}

#[test]
fn error_estimate_is_honest() {
    let spec = QuadratureSpec::default();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (family(), -2.0f64..0.0, 0.5f64..4.0);
    let mut honest = 0;
    let cases = 1000;
    for _ in 0..cases {
        let (f, a, len) = strat.new_tree(&mut runner).unwrap().current();
        let b = a + len;
        let r = integrate_adaptive(|x| f.f(x), a, b, &spec).unwrap();
        let truth = f.antiderivative(b) - f.antiderivative(a);
        if (r.value - truth).abs() <= 10.0 * r.error_estimate {
            honest += 1;
        }
    }
    assert!(honest * 100 >= cases * 99, "{honest}/{cases}");
}

#[test]
fn gaussian_over_long_interval() {
    let spec = QuadratureSpec::default();
    let r = integrate_adaptive(|x: f64| (-x * x).exp(), 0.0, 10.0, &spec).unwrap();
    let truth = 0.5 * std::f64::consts::PI.sqrt() * cev_core::specfun::erf(10.0);
    assert!((r.value - truth).abs() < 1e-10);
}

#[test]
fn semi_infinite_examples() {
    let spec = QuadratureSpec::default();
    let cases: [(fn(f64) -> f64, f64, f64); 3] = [
        (|x| (-x).exp(), 0.0, 1.0),
        (|x| x * (-x * x).exp(), 0.0, 0.5),
        (|x| x.powi(-3), 1.0, 0.5),
    ];
    for (f, a, truth) in cases {
        let r = integrate_upper_semi_infinite(f, a, &spec).unwrap();
        assert!((r.value - truth).abs() < 1e-10, "{} vs {truth}", r.value);
        assert!(r.converged);
    }
}
