//! Scalar abstraction shared by the pointwise tensor pipeline.
//!
//! `f64` carries plain values. [`Dual<T>`] adds one order of exact partial
//! derivatives on top of any scalar, so `Dual<Dual<f64>>` carries second
//! derivatives and so on. Every geometric formula is written once over
//! [`Scalar`]; running it over duals yields the derivatives of its output
//! as a field.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;

    /// Coordinate function `x^index` evaluated at `x`.
    fn variable(x: f64, index: usize) -> Self;

    fn value(&self) -> f64;

    fn scale(&self, c: f64) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powf(&self, p: f64) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn variable(x: f64, _index: usize) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powf(&self, p: f64) -> Self {
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            self.powi(p as i32)
        } else {
            f64::powf(*self, p)
        }
    }
}

/// First-order truncated Taylor element over an inner scalar.
///
/// Missing trailing partials are zero, so constants need no dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual<T> {
    value: T,
    partials: Vec<T>,
}

impl<T: Scalar> Dual<T> {
    pub fn new(value: T, partials: Vec<T>) -> Self {
        Dual { value, partials }
    }

    pub fn value_part(&self) -> &T {
        &self.value
    }

    /// `∂/∂x^k` of this quantity, itself carrying the inner derivatives.
    pub fn partial(&self, k: usize) -> T {
        self.partials.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Chain rule for a unary function with value `f` and derivative `df`.
    fn chain(&self, f: T, df: T) -> Self {
        Dual { value: f, partials: self.partials.iter().map(|p| p.clone() * df.clone()).collect() }
    }
}

fn zip_partials<T: Scalar>(a: &[T], b: &[T], mut f: impl FnMut(T, T) -> T) -> Vec<T> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(T::zero);
            let y = b.get(k).cloned().unwrap_or_else(T::zero);
            f(x, y)
        })
        .collect()
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual { partials: zip_partials(&self.partials, &rhs.partials, |a, b| a + b), value: self.value + rhs.value }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual { partials: zip_partials(&self.partials, &rhs.partials, |a, b| a - b), value: self.value - rhs.value }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        let (u, v) = (self.value.clone(), rhs.value.clone());
        let partials = zip_partials(&self.partials, &rhs.partials, |du, dv| du * v.clone() + u.clone() * dv);
        Dual { value: self.value * rhs.value, partials }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.value.clone();
        let q = self.value.clone() * inv.clone();
        let partials = zip_partials(&self.partials, &rhs.partials, |du, dv| (du - q.clone() * dv) * inv.clone());
        Dual { value: q, partials }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { value: -self.value, partials: self.partials.into_iter().map(|p| -p).collect() }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn constant(c: f64) -> Self {
        Dual { value: T::constant(c), partials: Vec::new() }
    }

    fn variable(x: f64, index: usize) -> Self {
        let mut partials = vec![T::zero(); index + 1];
        partials[index] = T::one();
        Dual { value: T::variable(x, index), partials }
    }

    fn value(&self) -> f64 {
        self.value.value()
    }

    fn scale(&self, c: f64) -> Self {
        Dual { value: self.value.scale(c), partials: self.partials.iter().map(|p| p.scale(c)).collect() }
    }

    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e.clone(), e)
    }

    fn ln(&self) -> Self {
        self.chain(self.value.ln(), T::one() / self.value.clone())
    }

    fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        let ds = (T::one() / s.clone()).scale(0.5);
        self.chain(s, ds)
    }

    fn powf(&self, p: f64) -> Self {
        let f = self.value.powf(p);
        let df = if p == 0.0 { T::zero() } else { self.value.powf(p - 1.0).scale(p) };
        self.chain(f, df)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D2 = Dual<Dual<f64>>;

    #[test]
    fn nested_duals_give_second_derivatives() {
        // f = x^2 y + sin(y) at (3, 0.5)
        let x = D2::variable(3.0, 0);
        let y = D2::variable(0.5, 1);
        let f = x.clone() * x * y.clone() + y.sin();
        assert_eq!(f.value(), 9.0 * 0.5 + 0.5f64.sin());
        let fx = f.partial(0);
        let fy = f.partial(1);
        assert!((fx.value() - 3.0).abs() < 1e-15);
        assert!((fy.value() - (9.0 + 0.5f64.cos())).abs() < 1e-15);
        assert!((fx.partial(0) - 1.0).abs() < 1e-15);
        assert!((fx.partial(1) - 6.0).abs() < 1e-15);
        assert!((fy.partial(0) - 6.0).abs() < 1e-15);
        assert!((fy.partial(1) + 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn constants_have_no_partials() {
        let c = Dual::<f64>::constant(4.0);
        assert_eq!(c.partial(3), 0.0);
        let x = Dual::<f64>::variable(2.0, 1);
        let q = c / x;
        assert_eq!(q.value(), 2.0);
        assert_eq!(q.partial(1), -1.0);
    }

    #[test]
    fn integer_powers_allow_negative_base() {
        let x = Dual::<f64>::variable(-2.0, 0);
        let p = x.powf(3.0);
        assert_eq!(p.value(), -8.0);
        assert_eq!(p.partial(0), 12.0);
    }
}
