use crate::error::Result;
use crate::expr::{Expr, Params};
use crate::scalar::{Dual, Scalar};
use crate::tensor::{split_dual, Tensor};

use super::Scene;

/// Components of a tensor field together with all first and second partials.
///
/// `d1` carries one extra trailing chart index, `d2` two (symmetric in them).
#[derive(Debug, Clone, PartialEq)]
pub struct PointEvaluation {
    pub components: Tensor<f64>,
    pub d1: Tensor<f64>,
    pub d2: Tensor<f64>,
}

/// Which tensor field of a scene to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum FieldSelector<'a> {
    Metric,
    Poisson,
    /// Any tensor of expressions in the scene's scope.
    Custom(&'a Tensor<Expr>),
}

/// Evaluates a field and its first and second partials through degree-2 jets.
pub fn eval_field(scene: &Scene, which: FieldSelector<'_>, point: &[f64]) -> Result<PointEvaluation> {
    scene.check_point(point)?;
    let exprs = match which {
        FieldSelector::Metric => scene.metric(),
        FieldSelector::Poisson => scene.poisson(),
        FieldSelector::Custom(t) => t,
    };
    evaluate_exprs(exprs, point, scene.params())
}

pub(crate) fn evaluate_exprs(exprs: &Tensor<Expr>, point: &[f64], params: &Params) -> Result<PointEvaluation> {
    let n = point.len();
    let jets = Tensor::try_from_fn(exprs.dim(), exprs.rank(), |idx| exprs[idx].eval_jet(point, params))?;
    let rank = exprs.rank();
    let components = jets.map(|j| j.value());
    let d1 = Tensor::from_fn(n, rank + 1, |idx| jets[&idx[..rank]].gradient()[idx[rank]]);
    let d2 = Tensor::from_fn(n, rank + 2, |idx| jets[&idx[..rank]].hessian(idx[rank], idx[rank + 1]));
    Ok(PointEvaluation { components, d1, d2 })
}

impl PointEvaluation {
    pub fn rank(&self) -> usize {
        self.components.rank()
    }

    /// Components and first partials as first-order duals: each entry carries
    /// its own partials, so formulas built from them yield one more order
    /// of derivatives.
    pub(crate) fn to_duals(&self) -> (Tensor<Dual<f64>>, Tensor<Dual<f64>>) {
        let n = self.components.dim();
        let r = self.rank();
        let value = Tensor::from_fn(n, r, |idx| {
            let partials = (0..n).map(|k| self.d1[&[idx, &[k]].concat()[..]]).collect();
            Dual::new(self.components[idx], partials)
        });
        let first = Tensor::from_fn(n, r + 1, |idx| {
            let partials = (0..n).map(|l| self.d2[&[idx, &[l]].concat()[..]]).collect();
            Dual::new(self.d1[idx], partials)
        });
        (value, first)
    }
}

/// Values and first partials of a tensor of expressions over an arbitrary
/// scalar, obtained by evaluating one dual order higher.
pub(crate) fn first_order<S: Scalar>(
    exprs: &Tensor<Expr>,
    point: &[f64],
    params: &Params,
) -> Result<(Tensor<S>, Tensor<S>)> {
    let lifted =
        Tensor::try_from_fn(exprs.dim(), exprs.rank(), |idx| exprs[idx].eval_scalar::<Dual<S>>(point, params))?;
    Ok(split_dual(&lifted))
}
