//! Pointwise geometric data over a generic scalar.
//!
//! A [`Local<f64>`] holds plain values at a point. A `Local<Dual<T>>` holds
//! the same quantities as fields: every entry also carries its partials, so
//! formulas applied to it produce their own derivatives.

use crate::error::{Error, Result};
use crate::geometry::metric::{covariant_derivative_of, IndexKind};
use crate::geometry::scene::NONDEGENERACY_TOL;
use crate::geometry::{first_order, PointEvaluation, Scene};
use crate::linalg;
use crate::scalar::{Dual, Scalar};
use crate::tensor::{sum, Tensor};

#[derive(Debug, Clone)]
pub(crate) struct Local<S> {
    pub n: usize,
    /// `g_ij`
    pub g: Tensor<S>,
    /// `g^ij`
    pub ginv: Tensor<S>,
    /// `∂_k g^ij` at `[i, j, k]`
    pub dginv: Tensor<S>,
    /// `Γ^i_jk`
    pub gamma: Tensor<S>,
    /// `π^ij`
    pub pi: Tensor<S>,
    /// `∂_k π^ij` at `[i, j, k]`
    pub dpi: Tensor<S>,
    /// `∇_k π^ij` at `[i, j, k]`
    pub nabla_pi: Tensor<S>,
    /// `A^ij_k` at `[i, j, k]`
    pub a: Tensor<S>,
}

impl<S: Scalar> Local<S> {
    /// Builds everything from the metric, the bivector and their first partials.
    pub fn from_parts(g: Tensor<S>, dg: Tensor<S>, pi: Tensor<S>, dpi: Tensor<S>) -> Result<Self> {
        let n = g.dim();
        let (ginv, det) = linalg::invert(&g)?;
        if det.abs() <= NONDEGENERACY_TOL {
            return Err(Error::SingularMetric { det });
        }
        let dginv = Tensor::from_fn(n, 3, |x| {
            let (i, j, k) = (x[0], x[1], x[2]);
            -sum(n, |a| sum(n, |b| ginv[[i, a]].clone() * dg[[a, b, k]].clone() * ginv[[b, j]].clone()))
        });
        let gamma = Tensor::from_fn(n, 3, |x| {
            let (i, j, k) = (x[0], x[1], x[2]);
            sum(n, |a| ginv[[i, a]].clone() * (dg[[a, k, j]].clone() + dg[[a, j, k]].clone() - dg[[j, k, a]].clone()))
                .scale(0.5)
        });
        let nabla_pi = covariant_derivative_of(&pi, &dpi, &[IndexKind::Up, IndexKind::Up], &gamma)?;
        // π^{j}_{k}^{|i} = g^{ic} g_{kb} ∇_c π^{jb}
        let moved = Tensor::from_fn(n, 3, |x| {
            let (j, k, i) = (x[0], x[1], x[2]);
            sum(n, |c| sum(n, |b| ginv[[i, c]].clone() * g[[k, b]].clone() * nabla_pi[[j, b, c]].clone()))
        });
        let a = Tensor::from_fn(n, 3, |x| {
            let (i, j, k) = (x[0], x[1], x[2]);
            (nabla_pi[[i, j, k]].clone() - moved[[j, k, i]].clone() - moved[[i, k, j]].clone()).scale(0.5)
        });
        Ok(Local { n, g, ginv, dginv, gamma, pi, dpi, nabla_pi, a })
    }

    /// Evaluates the scene's fields at `point` over `S`.
    pub fn at(scene: &Scene, point: &[f64]) -> Result<Self> {
        scene.check_point(point)?;
        let (g, dg) = first_order::<S>(scene.metric(), point, scene.params())?;
        let (pi, dpi) = first_order::<S>(scene.poisson(), point, scene.params())?;
        Self::from_parts(g, dg, pi, dpi)
    }

    /// The connection `∇_#`: same data with `A` set to zero.
    pub fn without_a(mut self) -> Self {
        self.a = Tensor::zeros(self.n, 3);
        self
    }

    /// Contravariant derivative `D^i T` of a tensor field given by its
    /// components and first partials. The new index comes first.
    ///
    /// `D^i T = π^ia ∇_a T`, minus `A^{ik}_l T^{..l..}` per upper index and
    /// plus `A^{il}_k T_{..l..}` per lower index.
    pub fn contravariant(&self, t: &Tensor<S>, dt: &Tensor<S>, kinds: &[IndexKind]) -> Result<Tensor<S>> {
        let n = self.n;
        let r = t.rank();
        let nabla = covariant_derivative_of(t, dt, kinds, &self.gamma)?;
        Ok(Tensor::from_fn(n, r + 1, |idx| {
            let (i, rest) = (idx[0], &idx[1..]);
            let mut full = rest.to_vec();
            full.push(0);
            let mut acc = sum(n, |a| {
                full[r] = a;
                self.pi[[i, a]].clone() * nabla[&full[..]].clone()
            });
            let mut moved = rest.to_vec();
            for (p, kind) in kinds.iter().enumerate() {
                let orig = rest[p];
                for l in 0..n {
                    moved[p] = l;
                    let term = match kind {
                        IndexKind::Up => -(self.a[[i, orig, l]].clone() * t[&moved[..]].clone()),
                        IndexKind::Down => self.a[[i, l, orig]].clone() * t[&moved[..]].clone(),
                    };
                    acc = acc + term;
                }
                moved[p] = orig;
            }
            acc
        }))
    }
}

impl Local<Dual<f64>> {
    /// Field-level data from jet evaluations of the metric and bivector.
    pub fn from_evaluations(g_eval: &PointEvaluation, pi_eval: &PointEvaluation) -> Result<Self> {
        let (g, dg) = g_eval.to_duals();
        let (pi, dpi) = pi_eval.to_duals();
        Self::from_parts(g, dg, pi, dpi)
    }

    /// Jet route: evaluates through [`crate::geometry::eval_field`].
    pub fn from_scene(scene: &Scene, point: &[f64]) -> Result<Self> {
        use crate::geometry::{eval_field, FieldSelector};
        let g = eval_field(scene, FieldSelector::Metric, point)?;
        let pi = eval_field(scene, FieldSelector::Poisson, point)?;
        Self::from_evaluations(&g, &pi)
    }
}

impl<T: Scalar> Local<Dual<T>> {
    /// Drops one derivative order.
    pub fn lower(&self) -> Local<T> {
        let v = |t: &Tensor<Dual<T>>| t.map(|d| d.value_part().clone());
        Local {
            n: self.n,
            g: v(&self.g),
            ginv: v(&self.ginv),
            dginv: v(&self.dginv),
            gamma: v(&self.gamma),
            pi: v(&self.pi),
            dpi: v(&self.dpi),
            nabla_pi: v(&self.nabla_pi),
            a: v(&self.a),
        }
    }
}
