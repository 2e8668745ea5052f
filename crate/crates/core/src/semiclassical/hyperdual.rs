//! Hyper-dual numbers `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`.
//!
//! Seeding `y0 -> (y0, 1, 0, 0)` and `yT -> (yT, 0, 1, 0)` and evaluating a
//! closed form leaves the exact mixed partial `d^2 f / dy0 dyT` in the
//! `e1 e2` component, with no step-size error.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the closed-form path and action.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    fn re(&self) -> f64;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn exp(self) -> Self;
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        Self { re, e1, e2, e12 }
    }

    /// Applies a scalar function given its value and first two derivatives at `re`.
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            re: f,
            e1: df * self.e1,
            e2: df * self.e2,
            e12: df * self.e12 + d2f * self.e1 * self.e2,
        }
    }

    fn recip(self) -> Self {
        let inv = 1.0 / self.re;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re,
            self.re * o.e1 + self.e1 * o.re,
            self.re * o.e2 + self.e2 * o.re,
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl Scalar for HyperDual {
    fn cst(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.re))
    }
    fn ln(self) -> Self {
        let inv = 1.0 / self.re;
        self.chain(self.re.ln(), inv, -inv * inv)
    }
    fn ln_1p(self) -> Self {
        let inv = 1.0 / (1.0 + self.re);
        self.chain(self.re.ln_1p(), inv, -inv * inv)
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e, e)
    }
}
