//! The metric contravariant connection and its obstruction tensors.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::metric::covariant_derivative_of;
use crate::geometry::{first_order, riemann_tensor, IndexKind, Scene};
use crate::linalg;
use crate::local::Local;
use crate::poisson::{koszul_of, symplectic_inverse_of, OneFormField};
use crate::scalar::{Dual, Scalar};
use crate::tensor::{split_dual, sum, Tensor};

use IndexKind::{Down, Up};

/// Threshold on `max |K|` below which the base connection counts as flat
/// for [`linearized_defect`].
pub const FLATNESS_TOL: f64 = 1e-7;

/// Which contravariant connection to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    /// The unique torsion-free, metric-compatible one.
    Metric,
    /// `∇_#`, the Levi-Civita connection pushed through `#`.
    NablaSharp,
}

/// `A^ij_k` at `[i, j, k]` and `∇_a A^ij_k` at `[i, j, k, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ATensor {
    pub components: Tensor<f64>,
    pub derivative: Tensor<f64>,
}

/// `K^ijk_l` at `[i, j, k, l]`, acting on vectors as
/// `(K(dx^i, dx^j) v)^k = K^ijk_l v^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureK {
    pub components: Tensor<f64>,
}

/// Largest violation of each Riemann-type symmetry of `K^{ijkl} = K^{ijk}_m g^{ml}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    pub antisym_ij: f64,
    pub antisym_kl: f64,
    pub pair: f64,
    pub bianchi: f64,
}

impl CurvatureK {
    pub fn max_abs(&self) -> f64 {
        self.components.max_abs()
    }

    /// `K^{ijk}_m g^{ml}`.
    pub fn raised(&self, ginv: &Tensor<f64>) -> Tensor<f64> {
        let k = &self.components;
        let n = k.dim();
        Tensor::from_fn(n, 4, |x| (0..n).map(|m| k[[x[0], x[1], x[2], m]] * ginv[[m, x[3]]]).sum())
    }

    pub fn symmetry_defects(&self, ginv: &Tensor<f64>) -> SymmetryDefects {
        let r = self.raised(ginv);
        let mut d = SymmetryDefects { antisym_ij: 0.0, antisym_kl: 0.0, pair: 0.0, bianchi: 0.0 };
        for (x, v) in r.indexed() {
            let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
            d.antisym_ij = d.antisym_ij.max((v + r[[j, i, k, l]]).abs());
            d.antisym_kl = d.antisym_kl.max((v + r[[i, j, l, k]]).abs());
            d.pair = d.pair.max((v - r[[k, l, i, j]]).abs());
            d.bianchi = d.bianchi.max((v + r[[i, k, l, j]] + r[[i, l, j, k]]).abs());
        }
        d
    }

    /// `(K(α, β) γ)_l = -K^ijk_l α_i β_j γ_k` on 1-forms.
    pub fn act_on_forms(&self, alpha: &[f64], beta: &[f64], gamma: &[f64]) -> Vec<f64> {
        let k = &self.components;
        let n = k.dim();
        (0..n)
            .map(|l| {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        for m in 0..n {
                            acc -= k[[i, j, m, l]] * alpha[i] * beta[j] * gamma[m];
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

fn local_for(scene: &Scene, point: &[f64], which: Connection) -> Result<Local<Dual<f64>>> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    Ok(match which {
        Connection::Metric => l,
        Connection::NablaSharp => l.without_a(),
    })
}

pub fn a_tensor(scene: &Scene, point: &[f64]) -> Result<ATensor> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    let (gamma, _) = split_dual(&l.gamma);
    let (a, da) = split_dual(&l.a);
    let derivative = covariant_derivative_of(&a, &da, &[Up, Up, Down], &gamma)?;
    Ok(ATensor { components: a, derivative })
}

/// `(D^i σ)_k = π^ij ∇_j σ_k + A^ij_k σ_j` at `[i, k]`.
pub fn apply_connection(scene: &Scene, sigma: &OneFormField, point: &[f64]) -> Result<Tensor<f64>> {
    let l = local_for(scene, point, Connection::Metric)?.lower();
    let (s, ds) = sigma.eval::<f64>(point, scene.params())?;
    l.contravariant(&s, &ds, &[Down])
}

/// `⟨D_α β, γ⟩` from the six-term Koszul-type formula, with directional
/// derivatives of the pairings taken along `#α`, `#β`, `#γ`.
pub fn koszul_oracle_connection(
    scene: &Scene,
    alpha: &OneFormField,
    beta: &OneFormField,
    gamma: &OneFormField,
    point: &[f64],
) -> Result<f64> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    let base = l.lower();
    let params = scene.params();
    let n = scene.dim();
    let fields = [alpha, beta, gamma];
    let duals = fields.iter().map(|f| f.eval::<Dual<f64>>(point, params)).collect::<Result<Vec<_>>>()?;
    let plain = fields.iter().map(|f| f.eval::<f64>(point, params)).collect::<Result<Vec<_>>>()?;
    let pair_field = |x: usize, y: usize| {
        sum(n, |i| sum(n, |j| l.ginv[[i, j]].clone() * duals[x].0[[i]].clone() * duals[y].0[[j]].clone()))
    };
    let pair = |x: &Tensor<f64>, y: &Tensor<f64>| -> f64 {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| base.ginv[[i, j]] * x[[i]] * y[[j]]).sum()
    };
    let along = |v: usize, f: Dual<f64>| -> f64 {
        let sv = crate::poisson::sharp_of(&base.pi, &plain[v].0);
        (0..n).map(|k| sv[[k]] * f.partial(k)).sum()
    };
    let bracket =
        |x: usize, y: usize| koszul_of(&base.pi, &base.dpi, &plain[x].0, &plain[x].1, &plain[y].0, &plain[y].1);
    let (a, b, c) = (0, 1, 2);
    let total = along(a, pair_field(b, c)) - along(c, pair_field(a, b))
        + along(b, pair_field(c, a))
        + pair(&bracket(c, a), &plain[b].0)
        - pair(&bracket(b, c), &plain[a].0)
        + pair(&bracket(a, b), &plain[c].0);
    Ok(0.5 * total)
}

/// `T^ij_k` with `T(σ, ρ) = D_σ ρ - D_ρ σ - [σ, ρ]_π` on the co-frame.
pub fn torsion_defect(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    torsion_defect_with(scene, point, Connection::Metric)
}

pub fn torsion_defect_with(scene: &Scene, point: &[f64], which: Connection) -> Result<Tensor<f64>> {
    torsion_of(&local_for(scene, point, which)?.lower())
}

pub(crate) fn torsion_of<S: Scalar>(l: &Local<S>) -> Result<Tensor<S>> {
    let n = l.n;
    // d[j] holds (D^i dx^j)_k at [i, k]
    let d = (0..n)
        .map(|j| {
            let e = Tensor::from_fn(n, 1, |k| if k[0] == j { S::one() } else { S::zero() });
            l.contravariant(&e, &Tensor::zeros(n, 2), &[Down])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tensor::from_fn(n, 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        d[j][[i, k]].clone() - d[i][[j, k]].clone() - l.dpi[[i, j, k]].clone()
    }))
}

/// `(D^i g)^jk` at `[i, j, k]`.
pub fn metric_compat_defect(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    metric_compat_defect_with(scene, point, Connection::Metric)
}

pub fn metric_compat_defect_with(scene: &Scene, point: &[f64], which: Connection) -> Result<Tensor<f64>> {
    let l = local_for(scene, point, which)?.lower();
    l.contravariant(&l.ginv, &l.dginv, &[Up, Up])
}

/// `K^ijk_l` from the closed form in terms of `R`, `A` and `∇A`.
pub fn curvature_explicit(scene: &Scene, point: &[f64]) -> Result<CurvatureK> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    Ok(CurvatureK { components: explicit_of(&l)? })
}

pub(crate) fn explicit_of<T: Scalar>(l: &Local<Dual<T>>) -> Result<Tensor<T>> {
    let n = l.n;
    let b = l.lower();
    let (gamma, dgamma) = split_dual(&l.gamma);
    let r = riemann_tensor(&gamma, &dgamma);
    let (a, da) = split_dual(&l.a);
    let na = covariant_derivative_of(&a, &da, &[Up, Up, Down], &gamma)?;
    let pi = &b.pi;
    Ok(Tensor::from_fn(n, 4, |x| {
        let (i, j, k, m) = (x[0], x[1], x[2], x[3]);
        sum(n, |p| sum(n, |q| pi[[i, p]].clone() * pi[[j, q]].clone() * r[[k, m, p, q]].clone()))
            + sum(n, |p| {
                -(pi[[i, p]].clone() * na[[j, k, m, p]].clone()) + pi[[j, p]].clone() * na[[i, k, m, p]].clone()
                    - a[[i, p, m]].clone() * a[[j, k, p]].clone()
                    + a[[j, p, m]].clone() * a[[i, k, p]].clone()
                    + b.nabla_pi[[i, j, p]].clone() * a[[p, k, m]].clone()
            })
    }))
}

/// `K(dx^i, dx^j) ∂_m = D^i D^j ∂_m - D^j D^i ∂_m - D^{[dx^i, dx^j]_π} ∂_m`,
/// with the outer derivatives taken of the inner output as a field.
pub fn curvature_definitional(scene: &Scene, point: &[f64]) -> Result<CurvatureK> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    Ok(CurvatureK { components: definitional_of(&l)? })
}

pub(crate) fn definitional_of<T: Scalar>(l: &Local<Dual<T>>) -> Result<Tensor<T>> {
    let n = l.n;
    let b = l.lower();
    // w[m] = (D^j ∂_m)^k at [j, k] with partials at [j, k, a]
    let w = (0..n)
        .map(|m| {
            let e = Tensor::from_fn(n, 1, |k| if k[0] == m { Dual::<T>::one() } else { Dual::<T>::zero() });
            Ok(split_dual(&l.contravariant(&e, &Tensor::zeros(n, 2), &[Up])?))
        })
        .collect::<Result<Vec<_>>>()?;
    // (D^i w_j)^k for the vector field w_j = D^j ∂_m
    let outer = |i: usize, j: usize, k: usize, m: usize| {
        let (wv, dw) = &w[m];
        sum(n, |a| {
            b.pi[[i, a]].clone() * (dw[[j, k, a]].clone() + sum(n, |c| b.gamma[[k, a, c]].clone() * wv[[j, c]].clone()))
                - b.a[[i, k, a]].clone() * wv[[j, a]].clone()
        })
    };
    Ok(Tensor::from_fn(n, 4, |x| {
        let (i, j, k, m) = (x[0], x[1], x[2], x[3]);
        outer(i, j, k, m) - outer(j, i, k, m) - sum(n, |c| b.dpi[[i, j, c]].clone() * w[m].0[[c, k]].clone())
    }))
}

/// Largest violation of the Riemann-type symmetries of `K` at the point.
pub fn curvature_symmetry_defects(scene: &Scene, point: &[f64]) -> Result<SymmetryDefects> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    let k = CurvatureK { components: explicit_of(&l)? };
    Ok(k.symmetry_defects(&l.lower().ginv))
}

/// `g'_jk = ω_ja ω_kb g^ab`.
pub fn gprime(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    let l = Local::<f64>::at(scene, point)?;
    gprime_of(&l.g, &l.pi)
}

pub(crate) fn gprime_of<S: Scalar>(g: &Tensor<S>, pi: &Tensor<S>) -> Result<Tensor<S>> {
    let n = g.dim();
    let w = symplectic_inverse_of(pi)?;
    let (ginv, _) = linalg::invert(g)?;
    Ok(Tensor::from_fn(n, 2, |x| {
        sum(n, |a| sum(n, |b| w[[x[0], a]].clone() * w[[x[1], b]].clone() * ginv[[a, b]].clone()))
    }))
}

/// Riemann tensor `R^k_lab` of `g'`.
pub fn gprime_riemann(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    scene.check_point(point)?;
    type D2 = Dual<Dual<f64>>;
    let eval = |t: &Tensor<Expr>| Tensor::try_from_fn(t.dim(), 2, |ij| t[ij].eval_scalar::<D2>(point, scene.params()));
    let gp = gprime_of(&eval(scene.metric())?, &eval(scene.poisson())?)?;
    let (gp, dgp) = split_dual(&gp);
    let n = scene.dim();
    let flat = Local::from_parts(gp, dgp, Tensor::zeros(n, 2), Tensor::zeros(n, 3))?;
    let (gamma, dgamma) = split_dual(&flat.gamma);
    Ok(riemann_tensor(&gamma, &dgamma))
}

/// `h^ij = D^i α^j + D^j α^i` with `α^j = g^jm α_m`.
pub fn perturbation_from_oneform(scene: &Scene, alpha: &OneFormField, point: &[f64]) -> Result<Tensor<f64>> {
    let l = local_for(scene, point, Connection::Metric)?.lower();
    let (a, da) = alpha.eval::<f64>(point, scene.params())?;
    perturbation_of(&l, &a, &da)
}

pub(crate) fn perturbation_of<S: Scalar>(l: &Local<S>, a: &Tensor<S>, da: &Tensor<S>) -> Result<Tensor<S>> {
    let n = l.n;
    let up = Tensor::from_fn(n, 1, |j| sum(n, |m| l.ginv[[j[0], m]].clone() * a[[m]].clone()));
    let dup = Tensor::from_fn(n, 2, |x| {
        let (j, k) = (x[0], x[1]);
        sum(n, |m| l.dginv[[j, m, k]].clone() * a[[m]].clone() + l.ginv[[j, m]].clone() * da[[m, k]].clone())
    });
    let d = l.contravariant(&up, &dup, &[Up])?;
    Ok(Tensor::from_fn(n, 2, |x| d[[x[0], x[1]]].clone() + d[[x[1], x[0]]].clone()))
}

/// A symmetric contravariant perturbation `h^ij` of the metric.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationField {
    Components(Tensor<Expr>),
    /// `h` built from a 1-form as in [`perturbation_from_oneform`].
    FromOneForm(OneFormField),
}

impl PerturbationField {
    /// Parses `h^ij` component expressions in the scene's scope.
    pub fn components(scene: &Scene, rows: &[Vec<&str>]) -> Result<Self> {
        let n = scene.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
        let t = Tensor::try_from_fn(n, 2, |ij| scene.parse_expr(rows[ij[0]][ij[1]]))?;
        Ok(PerturbationField::Components(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedDefect {
    /// `D^j D^l h^ik + D^i D^k h^jl - D^k D^l h^ij - D^i D^j h^kl` at `[i, j, k, l]`.
    pub defect: Tensor<f64>,
    /// `max |K|` of the base connection.
    pub base_curvature: f64,
    /// Whether the base connection is flat to [`FLATNESS_TOL`]; the defect is
    /// only meaningful when it is.
    pub base_flat: bool,
}

pub fn linearized_defect(scene: &Scene, h: &PerturbationField, point: &[f64]) -> Result<LinearizedDefect> {
    scene.check_point(point)?;
    let l1 = Local::<Dual<f64>>::at(scene, point)?;
    let (hv, dh) = match h {
        PerturbationField::Components(t) => {
            if t.dim() != scene.dim() || t.rank() != 2 {
                return Err(Error::RankMismatch("perturbation must be an n×n tensor".into()));
            }
            first_order::<Dual<f64>>(t, point, scene.params())?
        }
        PerturbationField::FromOneForm(alpha) => {
            let l2 = Local::<Dual<Dual<f64>>>::at(scene, point)?;
            let (a, da) = alpha.eval::<Dual<Dual<f64>>>(point, scene.params())?;
            split_dual(&perturbation_of(&l2, &a, &da)?)
        }
    };
    let e = l1.contravariant(&hv, &dh, &[Up, Up])?;
    let (e, de) = split_dual(&e);
    let l0 = l1.lower();
    // f[j, l, i, k] = D^j D^l h^ik
    let f = l0.contravariant(&e, &de, &[Up, Up, Up])?;
    let n = scene.dim();
    let defect = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        f[[j, l, i, k]] + f[[i, k, j, l]] - f[[k, l, i, j]] - f[[i, j, k, l]]
    });
    let base_curvature = explicit_of(&l1)?.max_abs();
    Ok(LinearizedDefect { defect, base_curvature, base_flat: base_curvature < FLATNESS_TOL })
}

/// `#d(D^k α_k)`.
pub fn alpha_defect(scene: &Scene, alpha: &OneFormField, point: &[f64]) -> Result<Vec<f64>> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?;
    let (a, da) = alpha.eval::<Dual<f64>>(point, scene.params())?;
    let d = l.contravariant(&a, &da, &[Down])?;
    let n = scene.dim();
    let s = sum(n, |k| d[[k, k]].clone());
    let pi = l.lower().pi;
    Ok((0..n).map(|j| (0..n).map(|i| pi[[i, j]] * s.partial(i)).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn one_form(scene: &Scene, c: &[&str]) -> OneFormField {
        OneFormField::components(scene, c).unwrap()
    }

    #[test]
    fn flat_torus_is_trivial() {
        let t = catalog::flat_torus(1.0);
        let p = [0.4, 2.0];
        let a = a_tensor(&t, &p).unwrap();
        assert_eq!(a.components.max_abs(), 0.0);
        assert_eq!(a.derivative.max_abs(), 0.0);
        assert_eq!(curvature_explicit(&t, &p).unwrap().max_abs(), 0.0);
        assert_eq!(curvature_definitional(&t, &p).unwrap().max_abs(), 0.0);
        assert_eq!(torsion_defect(&t, &p).unwrap().max_abs(), 0.0);
        assert_eq!(metric_compat_defect(&t, &p).unwrap().max_abs(), 0.0);
        let s = one_form(&t, &["2", "-1"]);
        assert_eq!(apply_connection(&t, &s, &p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn su2_a_tensor_matches_index_bookkeeping() {
        let s = catalog::su2_dual();
        let a = a_tensor(&s, &[0.3, 0.2, -0.5]).unwrap();
        let eps = crate::liealg::levi_civita3;
        for (x, v) in a.components.indexed() {
            let (i, j, k) = (x[0], x[1], x[2]);
            let expect = 0.5 * (eps(i, j, k) - eps(j, k, i) - eps(i, k, j));
            assert!((v - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn su2_connection_on_constant_forms_is_half_bracket() {
        let s = catalog::su2_dual();
        let p = [0.3, 0.2, -0.5];
        // D_{dx^1} dx^2 = ½ [dx^1, dx^2] = ½ dx^3
        let d = apply_connection(&s, &OneFormField::coordinate(&s, 1).unwrap(), &p).unwrap();
        assert!((d[[0, 2]] - 0.5).abs() < 1e-15);
        assert!(d[[0, 0]].abs() < 1e-15 && d[[0, 1]].abs() < 1e-15);
    }

    #[test]
    fn nabla_sharp_has_torsion_minus_nabla_pi() {
        let s = catalog::su2_dual();
        let t = torsion_defect_with(&s, &[0.1, 0.2, 0.3], Connection::NablaSharp).unwrap();
        for (x, v) in t.indexed() {
            assert_eq!(*v, -crate::liealg::levi_civita3(x[0], x[1], x[2]));
        }
        let m = metric_compat_defect_with(&catalog::podles_sphere(2.0), &[0.5, 0.1], Connection::NablaSharp).unwrap();
        assert!(m.max_abs() < 1e-14);
    }

    #[test]
    fn routes_agree_on_fuzzy_sphere() {
        let s = catalog::fuzzy_sphere(1.0);
        let p = [0.7, -0.3];
        let a = curvature_explicit(&s, &p).unwrap();
        let b = curvature_definitional(&s, &p).unwrap();
        assert!(a.components.max_abs_diff(&b.components) < 1e-10);
        assert!(a.max_abs() > 0.01);
    }

    #[test]
    fn podles_is_flat_and_gprime_matches() {
        let s = catalog::podles_sphere(2.0);
        let p = [0.9, -0.4];
        assert!(curvature_explicit(&s, &p).unwrap().max_abs() < 1e-12);
        assert!(gprime_riemann(&s, &p).unwrap().max_abs() < 1e-12);
        // g' = h^{-2} g with h = 2c/(1+r²)
        let q: f64 = 1.0 + 0.81 + 0.16;
        let h = 4.0 / q;
        let g = 4.0 / (q * q);
        let gp = gprime(&s, &p).unwrap();
        assert!((gp[[0, 0]] - g / (h * h)).abs() < 1e-14);
        assert!(gp[[0, 1]].abs() < 1e-15);
    }

    #[test]
    fn gprime_on_torus() {
        let t = catalog::flat_torus(2.0);
        let gp = gprime(&t, &[0.0, 0.0]).unwrap();
        assert_eq!(gp[[0, 0]], 0.25);
        assert_eq!(gp[[1, 1]], 0.25);
        assert_eq!(gp[[0, 1]], 0.0);
        assert!(gprime(&catalog::su2_dual(), &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn koszul_formula_matches_closed_form_connection() {
        let s = catalog::fuzzy_sphere(1.0);
        let p = [0.2, 0.5];
        let a = one_form(&s, &["u*v", "1 + u"]);
        let b = one_form(&s, &["sin(v)", "u^2"]);
        let c = one_form(&s, &["exp(u)", "v - 1"]);
        let lhs = koszul_oracle_connection(&s, &a, &b, &c, &p).unwrap();
        let db = apply_connection(&s, &b, &p).unwrap();
        let params = s.params();
        let (av, _) = a.eval::<f64>(&p, params).unwrap();
        let (cv, _) = c.eval::<f64>(&p, params).unwrap();
        let ginv = Local::<f64>::at(&s, &p).unwrap().ginv;
        let mut rhs = 0.0;
        for i in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    rhs += av[[i]] * db[[i, k]] * ginv[[k, m]] * cv[[m]];
                }
            }
        }
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn perturbations() {
        let t = catalog::flat_torus(1.0);
        let zero = one_form(&t, &["0", "0"]);
        assert_eq!(perturbation_from_oneform(&t, &zero, &[0.1, 0.1]).unwrap().max_abs(), 0.0);
        // flat torus: h^ij = θ(ε^{ia}∂_a α_j + ε^{ja}∂_a α_i) with α = (x y, 0)
        let a = one_form(&t, &["x*y", "0"]);
        let h = perturbation_from_oneform(&t, &a, &[0.5, 2.0]).unwrap();
        // D^1 α^1 = ∂_2(x y) = x, so h^11 = 2x
        assert!((h[[0, 0]] - 1.0).abs() < 1e-15);
        let d = linearized_defect(&t, &PerturbationField::FromOneForm(a), &[0.5, 2.0]).unwrap();
        assert!(d.base_flat);
        assert!(d.defect.max_abs() < 1e-12);
    }

    #[test]
    fn linearized_flags_curved_base() {
        let s = catalog::fuzzy_sphere(1.0);
        let h = PerturbationField::components(&s, &[vec!["u", "0"], vec!["0", "v"]]).unwrap();
        let d = linearized_defect(&s, &h, &[0.3, 0.3]).unwrap();
        assert!(!d.base_flat);
    }

    #[test]
    fn alpha_defects() {
        let t = catalog::flat_torus(1.0);
        let c = one_form(&t, &["3", "-2"]);
        assert_eq!(alpha_defect(&t, &c, &[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
        // D^k α_k = ∂_y α_1 - ∂_x α_2 on the unit torus
        let closed = one_form(&t, &["x^2", "0"]);
        assert_eq!(alpha_defect(&t, &closed, &[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
        let q = one_form(&t, &["0", "x^2"]);
        assert_eq!(alpha_defect(&t, &q, &[0.5, 0.5]).unwrap(), vec![0.0, -2.0]);
    }
}
