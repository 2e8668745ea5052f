//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |value|)`. Semi-infinite
//! ranges are mapped onto `[0, 1)` with `y = a + L u / (1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::QuadratureError;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn is_valid(&self) -> bool {
        self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_subdivisions >= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegrationResult {
    /// Sum of two results over adjacent ranges.
    pub fn combine(self, other: IntegrationResult) -> IntegrationResult {
        IntegrationResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadratureError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadratureError::NonFiniteEvaluation { x })
    }
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// `f` must be free of side effects; it may be called in any order.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<IntegrationResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && a < b) || !spec.is_valid() {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    let first = gk15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::with_capacity(spec.max_subdivisions.min(4096));
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);

    loop {
        if error <= spec.tolerance_for(value) {
            break;
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(non_convergence(&heap, evaluations));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            return Err(non_convergence(&heap, evaluations));
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Incremental sums drift; refresh them from the panels now and then.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    Ok(IntegrationResult {
        value,
        error_estimate,
        evaluations,
        converged: true,
    })
}

fn non_convergence(heap: &BinaryHeap<Panel>, evaluations: usize) -> QuadratureError {
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    QuadratureError::NonConvergence {
        error_estimate,
        partial: IntegrationResult {
            value,
            error_estimate,
            evaluations,
            converged: false,
        },
    }
}

/// Integrates `f` over `[a, inf)` through `y = a + u / (1 - u)`.
pub fn integrate_upper_semi_infinite<F>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<IntegrationResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    integrate_upper_semi_infinite_scaled(f, a, 1.0, spec)
}

/// As [`integrate_upper_semi_infinite`] with `y = a + scale * u / (1 - u)`,
/// which places the bulk of a decaying integrand of width `scale` near the
/// middle of `[0, 1)`.
pub fn integrate_upper_semi_infinite_scaled<F>(
    f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<IntegrationResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && scale.is_finite() && scale > 0.0) {
        return Err(QuadratureError::InvalidInterval { a, b: f64::INFINITY });
    }
    let mapped = |u: f64| {
        let w = 1.0 - u;
        let y = a + scale * u / w;
        if !y.is_finite() {
            return 0.0;
        }
        f(y) * scale / (w * w)
    };
    integrate_adaptive(mapped, 0.0, 1.0, spec).map_err(|e| match e {
        QuadratureError::NonFiniteEvaluation { x } => QuadratureError::NonFiniteEvaluation {
            x: a + scale * x / (1.0 - x),
        },
        other => other,
    })
}
