//! Scalar-field expression language used in scene configs.
//!
//! Grammar: decimal literals (optional exponent), coordinate and parameter
//! identifiers, unary `-`, binary `+ - * / ^`, parentheses, and the calls
//! `exp log sin cos sqrt`. Implicit multiplication is rejected.

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::jets::Jet2;
use crate::scalar::Scalar;

pub use parser::parse;

/// Named scalar constants referenced by expressions.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at offset {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord { index: usize, name: String },
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parses with the given coordinate and parameter names in scope.
    pub fn parse(text: &str, coords: &[String], params: &[String]) -> Result<Expr> {
        Ok(parse(text, coords, params)?)
    }

    pub fn depends_on_coords(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Param(_) => false,
            Expr::Coord { .. } => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_coords(),
            Expr::Binary(_, a, b) => a.depends_on_coords() || b.depends_on_coords(),
        }
    }

    /// Plain real evaluation.
    pub fn eval_real(&self, point: &[f64], params: &Params) -> Result<f64> {
        self.eval_scalar::<f64>(point, params)
    }

    /// Evaluates over any [`Scalar`], lifting `point[i]` as `S::variable(point[i], i)`.
    pub fn eval_scalar<S: Scalar>(&self, point: &[f64], params: &Params) -> Result<S> {
        let seeded: Vec<S> = point.iter().enumerate().map(|(i, &x)| S::variable(x, i)).collect();
        self.eval_seeded(&seeded, point, params)
    }

    /// Evaluates with caller-seeded coordinates. `plain` holds the plain
    /// coordinate values, used for coordinate-free exponents.
    pub fn eval_seeded<S: Scalar>(&self, seeded: &[S], plain: &[f64], params: &Params) -> Result<S> {
        Ok(match self {
            Expr::Num(v) => S::constant(*v),
            Expr::Coord { index, .. } => seeded
                .get(*index)
                .cloned()
                .ok_or(Error::DimensionMismatch { expected: index + 1, got: seeded.len() })?,
            Expr::Param(name) => S::constant(lookup(params, name)?),
            Expr::Neg(e) => -e.eval_seeded(seeded, plain, params)?,
            Expr::Call(f, e) => {
                let u = e.eval_seeded::<S>(seeded, plain, params)?;
                match f {
                    Func::Exp => u.exp(),
                    Func::Log => {
                        check_positive("log", u.value())?;
                        u.ln()
                    }
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sqrt => {
                        check_positive("sqrt", u.value())?;
                        u.sqrt()
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                if *op == BinOp::Pow && !b.depends_on_coords() {
                    let base = a.eval_seeded::<S>(seeded, plain, params)?;
                    let p = b.eval_real(plain, params)?;
                    check_pow(base.value(), p)?;
                    return Ok(base.powf(p));
                }
                let u = a.eval_seeded::<S>(seeded, plain, params)?;
                let v = b.eval_seeded::<S>(seeded, plain, params)?;
                match op {
                    BinOp::Add => u + v,
                    BinOp::Sub => u - v,
                    BinOp::Mul => u * v,
                    BinOp::Div => {
                        if v.value() == 0.0 {
                            return Err(Error::DivisionByZero);
                        }
                        u / v
                    }
                    BinOp::Pow => {
                        check_positive("pow", u.value())?;
                        (v * u.ln()).exp()
                    }
                }
            }
        })
    }

    /// Degree-2 jet of the expression at `point`.
    pub fn eval_jet(&self, point: &[f64], params: &Params) -> Result<Jet2> {
        let n = point.len();
        Ok(match self {
            Expr::Num(v) => Jet2::constant(*v, n),
            Expr::Coord { index, .. } => {
                let x = *point.get(*index).ok_or(Error::DimensionMismatch { expected: index + 1, got: n })?;
                Jet2::lift(x, Some(*index), n)?
            }
            Expr::Param(name) => Jet2::constant(lookup(params, name)?, n),
            Expr::Neg(e) => e.eval_jet(point, params)?.neg(),
            Expr::Call(f, e) => {
                let u = e.eval_jet(point, params)?;
                match f {
                    Func::Exp => u.exp(),
                    Func::Log => u.ln()?,
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Sqrt => u.sqrt()?,
                }
            }
            Expr::Binary(op, a, b) => {
                if *op == BinOp::Pow && !b.depends_on_coords() {
                    let p = b.eval_real(point, params)?;
                    return a.eval_jet(point, params)?.powf(p);
                }
                let u = a.eval_jet(point, params)?;
                let v = b.eval_jet(point, params)?;
                match op {
                    BinOp::Add => u.add(&v)?,
                    BinOp::Sub => u.sub(&v)?,
                    BinOp::Mul => u.mul(&v)?,
                    BinOp::Div => u.div(&v)?,
                    BinOp::Pow => v.mul(&u.ln()?)?.exp(),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(_) | Expr::Coord { .. } | Expr::Param(_) | Expr::Call(..) => 10,
            Expr::Binary(BinOp::Pow, ..) => 7,
            Expr::Neg(_) => 5,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 3,
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        }
    }
}

fn lookup(params: &Params, name: &str) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::UnknownParameter(name.to_string()))
}

fn check_positive(function: &'static str, value: f64) -> Result<()> {
    if value <= 0.0 {
        return Err(Error::Domain { function, value });
    }
    Ok(())
}

fn check_pow(base: f64, p: f64) -> Result<()> {
    if p.fract() != 0.0 {
        check_positive("pow", base)
    } else if p < 0.0 && base == 0.0 {
        Err(Error::DivisionByZero)
    } else {
        Ok(())
    }
}

/// Prints with the minimal parentheses needed to reparse the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Coord { name, .. } => f.write_str(name),
            Expr::Param(name) => f.write_str(name),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 5)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                if *op == BinOp::Pow {
                    wrap(f, a, a.precedence() <= p)?;
                    f.write_str(sym)?;
                    wrap(f, b, b.precedence() < p)
                } else {
                    wrap(f, a, a.precedence() < p)?;
                    f.write_str(sym)?;
                    wrap(f, b, b.precedence() <= p)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str) -> Expr {
        Expr::parse(text, &names(&["x", "y"]), &names(&["c"])).unwrap()
    }

    #[test]
    fn sum_of_square_and_sine() {
        let e = p("x^2 + sin(y)");
        assert_eq!(e.eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 0.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(p("1 + 2*3").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 7.0);
        assert_eq!(p("-2^2").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), -4.0);
        assert_eq!(p("2^3^2").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 512.0);
        assert_eq!(p("8/4/2").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 1.0);
        assert_eq!(p("5-3-1").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 1.0);
        assert_eq!(p("2^-1").eval_real(&[0.0, 0.0], &Params::new()).unwrap(), 0.5);
    }

    #[test]
    fn dangling_operator_errors_at_end() {
        let err = Expr::parse("x +", &names(&["x"]), &[]).unwrap_err();
        assert_eq!(err, Error::Parse(ParseError { position: 3, kind: ParseErrorKind::UnexpectedEnd }));
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let err = Expr::parse("2x", &names(&["x"]), &[]).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { position: 1, .. })));
    }

    #[test]
    fn unknown_identifier_is_named() {
        let err = Expr::parse("x + z", &names(&["x"]), &[]).unwrap_err();
        assert_eq!(err, Error::Parse(ParseError { position: 4, kind: ParseErrorKind::UnknownIdentifier("z".into()) }));
    }

    #[test]
    fn function_without_call_is_an_error() {
        assert!(Expr::parse("sin + 1", &names(&["x"]), &[]).is_err());
        assert!(Expr::parse("sin(x, x)", &names(&["x"]), &[]).is_err());
        assert!(Expr::parse("(x", &names(&["x"]), &[]).is_err());
        assert!(Expr::parse("   ", &names(&["x"]), &[]).is_err());
    }

    #[test]
    fn jet_of_scaled_quadratic() {
        let e = p("c*(x*x + y*y + 1)");
        let params = Params::from([("c".to_string(), 1.0)]);
        let j = e.eval_jet(&[1.0, 1.0], &params).unwrap();
        assert_eq!(j.value(), 3.0);
        assert_eq!(j.gradient(), &[2.0, 2.0]);
        assert_eq!((j.hessian(0, 0), j.hessian(1, 1), j.hessian(0, 1)), (2.0, 2.0, 0.0));
    }

    #[test]
    fn conformal_factor_at_origin() {
        let e = p("2*c/(x*x + y*y + 1)");
        let params = Params::from([("c".to_string(), 2.0)]);
        assert_eq!(e.eval_jet(&[0.0, 0.0], &params).unwrap().value(), 4.0);
    }

    #[test]
    fn reciprocal_at_zero() {
        let e = p("1/x");
        assert_eq!(e.eval_jet(&[0.0, 1.0], &Params::new()), Err(Error::DivisionByZero));
        assert_eq!(e.eval_real(&[0.0, 1.0], &Params::new()), Err(Error::DivisionByZero));
    }

    #[test]
    fn missing_parameter_value() {
        let e = p("c*x");
        assert_eq!(e.eval_real(&[1.0, 1.0], &Params::new()), Err(Error::UnknownParameter("c".into())));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        for (src, printed) in [
            ("(x + y)*c", "(x + y)*c"),
            ("x - (y - c)", "x - (y - c)"),
            ("(x^y)^c", "(x^y)^c"),
            ("x^(y^c)", "x^y^c"),
            ("-(x*y)", "-(x*y)"),
            ("(-x)^2", "(-x)^2"),
            ("-x^2", "-x^2"),
            ("sin(x)/(1 + y)", "sin(x)/(1 + y)"),
        ] {
            let e = p(src);
            assert_eq!(e.to_string(), printed);
            assert_eq!(p(&e.to_string()), e);
        }
    }

    #[test]
    fn variable_exponent_goes_through_log() {
        let e = p("x^y");
        let v = e.eval_real(&[2.0, 3.0], &Params::new()).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        assert!(e.eval_real(&[-2.0, 3.0], &Params::new()).is_err());
    }
}
