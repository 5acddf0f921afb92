//! Degree-2 jets: value, gradient and Hessian of a smooth scalar at a point.

use crate::error::{Error, Result};

/// Second-order truncated Taylor element in `n` chart coordinates.
///
/// The Hessian is stored as a full row-major `n × n` matrix and is
/// symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    gradient: Vec<f64>,
    hessian: Vec<f64>,
}

/// Operations a jet can be pushed through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetFn {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    /// Power with a fixed real exponent.
    Pow(f64),
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl JetFn {
    fn arity(self) -> usize {
        match self {
            JetFn::Add | JetFn::Sub | JetFn::Mul | JetFn::Div => 2,
            _ => 1,
        }
    }
}

impl Jet2 {
    /// Builds a jet from raw parts, symmetrizing the Hessian.
    pub fn new(value: f64, gradient: Vec<f64>, hessian: Vec<f64>) -> Result<Self> {
        let n = gradient.len();
        if hessian.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: hessian.len() });
        }
        let mut h = hessian;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (h[i * n + j] + h[j * n + i]);
                h[i * n + j] = avg;
                h[j * n + i] = avg;
            }
        }
        Ok(Jet2 { value, gradient, hessian: h })
    }

    /// Constant lift when `coord` is `None`, coordinate lift `x^coord` otherwise.
    pub fn lift(value: f64, coord: Option<usize>, dimension: usize) -> Result<Self> {
        let mut gradient = vec![0.0; dimension];
        if let Some(i) = coord {
            if i >= dimension {
                return Err(Error::IndexOutOfRange { index: i, dimension });
            }
            gradient[i] = 1.0;
        }
        Ok(Jet2 { value, gradient, hessian: vec![0.0; dimension * dimension] })
    }

    pub fn constant(value: f64, dimension: usize) -> Self {
        Jet2 { value, gradient: vec![0.0; dimension], hessian: vec![0.0; dimension * dimension] }
    }

    pub fn dimension(&self) -> usize {
        self.gradient.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.gradient
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.dimension() + j]
    }

    pub fn hessian_matrix(&self) -> &[f64] {
        &self.hessian
    }

    /// Applies `f` to `args` by the exact first- and second-order chain rule.
    pub fn apply(f: JetFn, args: &[Jet2]) -> Result<Jet2> {
        if args.len() != f.arity() {
            return Err(Error::DimensionMismatch { expected: f.arity(), got: args.len() });
        }
        match f {
            JetFn::Add => args[0].add(&args[1]),
            JetFn::Sub => args[0].sub(&args[1]),
            JetFn::Mul => args[0].mul(&args[1]),
            JetFn::Div => args[0].div(&args[1]),
            JetFn::Neg => Ok(args[0].neg()),
            JetFn::Pow(p) => args[0].powf(p),
            JetFn::Exp => Ok(args[0].exp()),
            JetFn::Log => args[0].ln(),
            JetFn::Sin => Ok(args[0].sin()),
            JetFn::Cos => Ok(args[0].cos()),
            JetFn::Sqrt => args[0].sqrt(),
        }
    }

    fn check_dim(&self, other: &Jet2) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: other.dimension() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet2) -> Result<Jet2> {
        self.check_dim(other)?;
        Ok(Jet2 {
            value: self.value + other.value,
            gradient: self.gradient.iter().zip(&other.gradient).map(|(a, b)| a + b).collect(),
            hessian: self.hessian.iter().zip(&other.hessian).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Jet2) -> Result<Jet2> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet2 {
        Jet2 {
            value: -self.value,
            gradient: self.gradient.iter().map(|g| -g).collect(),
            hessian: self.hessian.iter().map(|h| -h).collect(),
        }
    }

    pub fn mul(&self, other: &Jet2) -> Result<Jet2> {
        self.check_dim(other)?;
        let n = self.dimension();
        let (u, v) = (self.value, other.value);
        let (du, dv) = (&self.gradient, &other.gradient);
        let gradient = (0..n).map(|i| u * dv[i] + v * du[i]).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                hessian[k] = u * other.hessian[k] + v * self.hessian[k] + du[i] * dv[j] + dv[i] * du[j];
            }
        }
        Ok(Jet2 { value: u * v, gradient, hessian })
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2> {
        self.check_dim(other)?;
        if other.value == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let v = other.value;
        let recip = other.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
        self.mul(&recip)
    }

    /// Real power. Non-integer exponents need a positive base; negative
    /// integer exponents need a nonzero base.
    pub fn powf(&self, p: f64) -> Result<Jet2> {
        let u = self.value;
        let integral = p.fract() == 0.0;
        if !integral && u <= 0.0 {
            return Err(Error::Domain { function: "pow", value: u });
        }
        if integral && p < 0.0 && u == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let pw = |e: f64| if e == 0.0 { 1.0 } else { crate::scalar::Scalar::powf(&u, e) };
        Ok(self.compose(pw(p), p * pw(p - 1.0), p * (p - 1.0) * pw(p - 2.0)))
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn ln(&self) -> Result<Jet2> {
        let u = self.value;
        if u <= 0.0 {
            return Err(Error::Domain { function: "log", value: u });
        }
        Ok(self.compose(u.ln(), 1.0 / u, -1.0 / (u * u)))
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        let u = self.value;
        if u <= 0.0 {
            return Err(Error::Domain { function: "sqrt", value: u });
        }
        let r = u.sqrt();
        Ok(self.compose(r, 0.5 / r, -0.25 / (r * u)))
    }

    /// `f ∘ self` given `f`, `f'` and `f''` at the current value.
    fn compose(&self, f: f64, df: f64, d2f: f64) -> Jet2 {
        let n = self.dimension();
        let g = &self.gradient;
        let gradient = g.iter().map(|gi| df * gi).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                hessian[i * n + j] = df * self.hessian[i * n + j] + d2f * g[i] * g[j];
            }
        }
        Jet2 { value: f, gradient, hessian }
    }
}
