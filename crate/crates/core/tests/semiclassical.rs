use cev_core::quadrature::{integrate_adaptive, QuadratureSpec};
use cev_core::semiclassical::{
    classical_action, classical_path_value, propagator, transform_spot, van_vleck, ClassicalPath, KernelStatus,
    TransformedModel,
};
use cev_core::{price_call_semiclassical, PricingRequest, SemiclassicalConfig, VanVleckMode};
use proptest::prelude::*;

const SIGMAS: [f64; 3] = [0.2, 0.5, 0.9];
const ALPHAS: [f64; 3] = [1.0, 1.45, 1.9];

/// Random model with a terminal spot within four log-standard deviations of
/// the spot, the region that carries the kernel mass.
fn model() -> impl Strategy<Value = (TransformedModel, f64, f64)> {
    (
        0.02f64..0.1,
        0.1f64..2.0,
        0.1f64..1.0,
        0.25f64..4.0,
        50.0f64..200.0,
        -4.0f64..4.0,
    )
        .prop_map(|(r, beta, sigma, tau, s0, z)| {
            let s_t = s0 * (z * sigma * tau.sqrt()).exp();
            (
                TransformedModel::from_parts(beta, sigma, r, tau),
                transform_spot(s0, beta),
                transform_spot(s_t, beta),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// The residual is a cancelling sum of terms as large as `ydd * y`, so it
    /// is measured against the largest of them.
    #[test]
    fn euler_lagrange_residual((m, y0, y_t) in model()) {
        let path = ClassicalPath::new(m, y0, y_t).unwrap();
        let k = m.beta * m.rate;
        for i in 1..=64 {
            let t = m.tau * i as f64 / 65.0;
            let y = classical_path_value(&path, t).unwrap();
            let v = path.velocity(t);
            let yy = 2.0 * y * path.acceleration(t);
            let residual = yy - v * v + k * k * (m.gamma * m.gamma - y * y);
            let scale = yy.abs().max(v * v).max(k * k * y * y).max((k * m.gamma).powi(2)).max(1.0);
            prop_assert!(residual.abs() <= 1e-12 * scale, "residual {residual} at t={t}");
        }
    }

    #[test]
    fn endpoints_reconstructed((m, y0, y_t) in model()) {
        let path = ClassicalPath::new(m, y0, y_t).unwrap();
        let (first, last) = if path.starts_at_spot { (y0, y_t) } else { (y_t, y0) };
        let start = classical_path_value(&path, 0.0).unwrap();
        let end = classical_path_value(&path, m.tau).unwrap();
        prop_assert!((start - first).abs() <= 1e-9 * first);
        prop_assert!((end - last).abs() <= 1e-9 * last);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn action_matches_lagrangian_quadrature((m, y0, y_t) in model()) {
        let path = ClassicalPath::new(m, y0, y_t).unwrap();
        let closed = classical_action(&path).unwrap();
        let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 1e-12, max_subdivisions: 4000 };
        let numeric = integrate_adaptive(|t| path.lagrangian(t), 0.0, m.tau, &spec).unwrap().value;
        prop_assert!((closed - numeric).abs() <= 1e-7 * numeric.abs(), "{closed} vs {numeric}");
    }
}

fn table_request(sigma: f64, alpha: f64) -> PricingRequest {
    PricingRequest::call(100.0, 110.0, 0.05, sigma, alpha, 0.5)
}

#[test]
fn van_vleck_modes_agree_on_table_grid() {
    let fd = SemiclassicalConfig {
        vanvleck_mode: VanVleckMode::FiniteDifference,
        ..Default::default()
    };
    for sigma in SIGMAS {
        for alpha in ALPHAS {
            let m = TransformedModel::new(&table_request(sigma, alpha).scenario, 0.5).unwrap();
            let beta = m.beta;
            for s_t in [80.0, 100.0, 110.0, 130.0] {
                let path = ClassicalPath::new(m, transform_spot(100.0, beta), transform_spot(s_t, beta)).unwrap();
                let a = van_vleck(&path, &SemiclassicalConfig::default()).unwrap();
                let f = van_vleck(&path, &fd).unwrap();
                assert!((a - f).abs() <= 1e-5 * a.abs(), "{sigma} {alpha} {s_t}: {a} vs {f}");
            }
        }
    }
}

/// The determinant keeps one sign over the bulk of every reference-grid pricing domain,
/// so `sqrt(-M / 2 pi)` is real wherever the kernel carries weight.
#[test]
fn determinant_sign_scan() {
    let cfg = SemiclassicalConfig::default();
    for sigma in SIGMAS {
        for alpha in ALPHAS {
            let m = TransformedModel::new(&table_request(sigma, alpha).scenario, 0.5).unwrap();
            let y0 = transform_spot(100.0, m.beta);
            let lower = transform_spot(110.0, m.beta);
            let width = m.beta * sigma * (y0 * m.tau).sqrt() * m.growth();
            let upper = y0 * m.growth() + 8.0 * width;
            for i in 0..=400 {
                let y_t = lower + (upper - lower) * i as f64 / 400.0;
                let path = ClassicalPath::new(m, y0, y_t).unwrap();
                let p = propagator(&path, &cfg);
                assert_eq!(p.status, KernelStatus::Valid, "{sigma} {alpha} yT={y_t}");
                assert!(-p.van_vleck > 0.0 && p.kernel >= 0.0);
            }
        }
    }
}

/// Total kernel mass decays like `exp(-beta r tau)` through the killing term.
#[test]
fn kernel_mass_matches_killing_rate() {
    let cfg = SemiclassicalConfig::default();
    let spec = QuadratureSpec::default();
    for sigma in SIGMAS {
        for alpha in ALPHAS {
            let m = TransformedModel::new(&table_request(sigma, alpha).scenario, 0.5).unwrap();
            let y0 = transform_spot(100.0, m.beta);
            let kernel = |y_t: f64| {
                ClassicalPath::new(m, y0, y_t)
                    .map(|p| propagator(&p, &cfg).kernel)
                    .unwrap_or(0.0)
            };
            let below = integrate_adaptive(kernel, 1e-12 * y0, y0, &spec).unwrap().value;
            let above = cev_core::quadrature::integrate_upper_semi_infinite_scaled(kernel, y0, y0, &spec)
                .unwrap()
                .value;
            let expected = (-m.beta * m.rate * m.tau).exp();
            let mass = below + above;
            assert!(
                (mass - expected).abs() <= 0.05 * expected,
                "{sigma} {alpha}: {mass} vs {expected}"
            );
        }
    }
}

#[test]
fn price_monotone_in_spot_and_strike() {
    let cfg = SemiclassicalConfig::default();
    for sigma in SIGMAS {
        for alpha in ALPHAS {
            let by_spot: Vec<f64> = [90.0, 100.0, 110.0, 120.0]
                .iter()
                .map(|&s| {
                    price_call_semiclassical(&PricingRequest::call(s, 110.0, 0.05, sigma, alpha, 0.5), &cfg)
                        .unwrap()
                        .price
                })
                .collect();
            assert!(by_spot.windows(2).all(|w| w[1] > w[0]), "{sigma} {alpha}: {by_spot:?}");
            let by_strike: Vec<f64> = [90.0, 100.0, 110.0, 120.0]
                .iter()
                .map(|&e| {
                    price_call_semiclassical(&PricingRequest::call(100.0, e, 0.05, sigma, alpha, 0.5), &cfg)
                        .unwrap()
                        .price
                })
                .collect();
            assert!(
                by_strike.windows(2).all(|w| w[1] < w[0]),
                "{sigma} {alpha}: {by_strike:?}"
            );
        }
    }
}

#[test]
fn table_examples() {
    let cfg = SemiclassicalConfig::default();
    for (sigma, alpha, published) in [(0.5, 1.9, 8.0777), (0.2, 1.9, 1.8505), (0.9, 1.45, 3.9003)] {
        let q = price_call_semiclassical(&table_request(sigma, alpha), &cfg).unwrap();
        assert!(
            (q.price - published).abs() <= 0.01 * published,
            "{sigma} {alpha}: {}",
            q.price
        );
        assert_eq!(q.diagnostics.get("exponent_mode"), Some("transform_consistent"));
    }
}

#[test]
fn tau_zero_and_sigma_zero_short_circuit() {
    let cfg = SemiclassicalConfig::default();
    let q = price_call_semiclassical(
        &PricingRequest::call(150.0, 110.0, 0.05, 0.5, 1.45, 0.5).with_tau(0.0),
        &cfg,
    )
    .unwrap();
    assert_eq!(q.price, 40.0);
    let q = price_call_semiclassical(&PricingRequest::call(150.0, 110.0, 0.05, 0.0, 1.45, 0.5), &cfg).unwrap();
    assert!((q.price - (150.0 - 110.0 * (-0.025f64).exp())).abs() < 1e-12);
}

#[test]
fn rejects_out_of_domain_requests() {
    let cfg = SemiclassicalConfig::default();
    for req in [
        PricingRequest::call(100.0, 110.0, 0.05, 0.5, 2.0, 0.5),
        PricingRequest::call(100.0, 110.0, 0.05, 0.5, 1.9995, 0.5),
        PricingRequest::call(100.0, 110.0, -0.01, 0.5, 1.45, 0.5),
    ] {
        assert!(price_call_semiclassical(&req, &cfg).unwrap_err().is_domain());
    }
}
