//! Poisson-structure operations and the divergence obstruction.

use crate::error::{Error, Result};
use crate::expr::{Expr, Params};
use crate::geometry::{eval_field, first_order, FieldSelector, Scene};
use crate::linalg;
use crate::local::Local;
use crate::scalar::{Dual, Scalar};
use crate::tensor::{sum, Tensor};

/// Default relative tolerance for [`pi_rank`].
pub const RANK_TOL: f64 = 1e-9;

/// A 1-form field, either by components `σ_i` or as the differential `df`.
#[derive(Debug, Clone, PartialEq)]
pub enum OneFormField {
    Components(Vec<Expr>),
    Exact(Expr),
}

impl OneFormField {
    /// Parses component expressions in the scene's scope.
    pub fn components(scene: &Scene, texts: &[&str]) -> Result<Self> {
        if texts.len() != scene.dim() {
            return Err(Error::DimensionMismatch { expected: scene.dim(), got: texts.len() });
        }
        Ok(OneFormField::Components(texts.iter().map(|t| scene.parse_expr(t)).collect::<Result<_>>()?))
    }

    /// `df` for an expression `f` in the scene's scope.
    pub fn exact(scene: &Scene, f: &str) -> Result<Self> {
        Ok(OneFormField::Exact(scene.parse_expr(f)?))
    }

    /// The coordinate co-frame element `dx^i`.
    pub fn coordinate(scene: &Scene, i: usize) -> Result<Self> {
        let n = scene.dim();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dimension: n });
        }
        Ok(OneFormField::Components((0..n).map(|k| Expr::Num(if k == i { 1.0 } else { 0.0 })).collect()))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            OneFormField::Components(c) if c.len() != n => Err(Error::DimensionMismatch { expected: n, got: c.len() }),
            _ => Ok(()),
        }
    }

    /// Components `σ_i` and partials `∂_k σ_i` at `[i, k]` over `S`.
    pub(crate) fn eval<S: Scalar>(&self, point: &[f64], params: &Params) -> Result<(Tensor<S>, Tensor<S>)> {
        let n = point.len();
        self.check_dim(n)?;
        match self {
            OneFormField::Components(c) => {
                let t = Tensor::from_fn(n, 1, |i| c[i[0]].clone());
                first_order::<S>(&t, point, params)
            }
            OneFormField::Exact(f) => {
                let v: Dual<Dual<S>> = f.eval_scalar(point, params)?;
                let sigma = Tensor::from_fn(n, 1, |i| v.partial(i[0]).value_part().clone());
                let dsigma = Tensor::from_fn(n, 2, |x| v.partial(x[0]).partial(x[1]));
                Ok((sigma, dsigma))
            }
        }
    }
}

/// `π^ia ∂_a π^jk + π^ja ∂_a π^ki + π^ka ∂_a π^ij` at `[i, j, k]`.
pub fn jacobi_defect(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    let pi = eval_field(scene, FieldSelector::Poisson, point)?;
    Ok(jacobi_of(&pi.components, &pi.d1))
}

pub(crate) fn jacobi_of<S: Scalar>(pi: &Tensor<S>, dpi: &Tensor<S>) -> Tensor<S> {
    let n = pi.dim();
    let term = |i: usize, j: usize, k: usize| sum(n, |a| pi[[i, a]].clone() * dpi[[j, k, a]].clone());
    Tensor::from_fn(n, 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        term(i, j, k) + term(j, k, i) + term(k, i, j)
    })
}

/// `(#σ)^j = π^ij σ_i`.
pub fn sharp(scene: &Scene, sigma: &OneFormField, point: &[f64]) -> Result<Vec<f64>> {
    Ok(sharp_with_partials(scene, sigma, point)?.0)
}

/// `#σ` together with its partials `∂_k (#σ)^j` at `[j, k]`.
pub fn sharp_with_partials(scene: &Scene, sigma: &OneFormField, point: &[f64]) -> Result<(Vec<f64>, Tensor<f64>)> {
    scene.check_point(point)?;
    let (pi, dpi) = first_order::<f64>(scene.poisson(), point, scene.params())?;
    let (s, ds) = sigma.eval::<f64>(point, scene.params())?;
    let n = scene.dim();
    let v = sharp_of(&pi, &s);
    let dv = Tensor::from_fn(n, 2, |x| {
        let (j, k) = (x[0], x[1]);
        (0..n).map(|i| dpi[[i, j, k]] * s[[i]] + pi[[i, j]] * ds[[i, k]]).sum()
    });
    Ok((v.data().to_vec(), dv))
}

pub(crate) fn sharp_of<S: Scalar>(pi: &Tensor<S>, s: &Tensor<S>) -> Tensor<S> {
    let n = pi.dim();
    Tensor::from_fn(n, 1, |j| sum(n, |i| pi[[i, j[0]]].clone() * s[[i]].clone()))
}

/// `[σ,ρ]_π = L_{#σ}ρ - L_{#ρ}σ - d(π(σ,ρ))`.
pub fn koszul_bracket(scene: &Scene, sigma: &OneFormField, rho: &OneFormField, point: &[f64]) -> Result<Vec<f64>> {
    scene.check_point(point)?;
    let (pi, dpi) = first_order::<f64>(scene.poisson(), point, scene.params())?;
    let (s, ds) = sigma.eval::<f64>(point, scene.params())?;
    let (r, dr) = rho.eval::<f64>(point, scene.params())?;
    Ok(koszul_of(&pi, &dpi, &s, &ds, &r, &dr).data().to_vec())
}

pub(crate) fn koszul_of<S: Scalar>(
    pi: &Tensor<S>,
    dpi: &Tensor<S>,
    s: &Tensor<S>,
    ds: &Tensor<S>,
    r: &Tensor<S>,
    dr: &Tensor<S>,
) -> Tensor<S> {
    let n = pi.dim();
    // (L_{#a} b)_k = (#a)^j ∂_j b_k + b_j ∂_k (#a)^j
    let lie = |a: &Tensor<S>, da: &Tensor<S>, b: &Tensor<S>, db: &Tensor<S>, k: usize| {
        sum(n, |j| {
            let sharp_a = sum(n, |i| pi[[i, j]].clone() * a[[i]].clone());
            let d_sharp_a =
                sum(n, |i| dpi[[i, j, k]].clone() * a[[i]].clone() + pi[[i, j]].clone() * da[[i, k]].clone());
            sharp_a * db[[k, j]].clone() + b[[j]].clone() * d_sharp_a
        })
    };
    Tensor::from_fn(n, 1, |k| {
        let k = k[0];
        // ∂_k (π^ab σ_a ρ_b)
        let d_pair = sum(n, |a| {
            sum(n, |b| {
                dpi[[a, b, k]].clone() * s[[a]].clone() * r[[b]].clone()
                    + pi[[a, b]].clone() * (ds[[a, k]].clone() * r[[b]].clone() + s[[a]].clone() * dr[[b, k]].clone())
            })
        });
        lie(s, ds, r, dr, k) - lie(r, dr, s, ds, k) - d_pair
    })
}

/// `∇_j π^ij` with the Levi-Civita connection.
pub fn divergence_defect(scene: &Scene, point: &[f64]) -> Result<Vec<f64>> {
    let l = Local::<Dual<f64>>::from_scene(scene, point)?.lower();
    Ok(divergence_of(&l).data().to_vec())
}

pub(crate) fn divergence_of<S: Scalar>(l: &Local<S>) -> Tensor<S> {
    Tensor::from_fn(l.n, 1, |i| sum(l.n, |j| l.nabla_pi[[i[0], j, j]].clone()))
}

/// `ω_ij` with `π^ai ω_aj = δ^i_j`.
pub fn symplectic_inverse(scene: &Scene, point: &[f64]) -> Result<Tensor<f64>> {
    let pi = eval_field(scene, FieldSelector::Poisson, point)?;
    symplectic_inverse_of(&pi.components)
}

pub(crate) fn symplectic_inverse_of<S: Scalar>(pi: &Tensor<S>) -> Result<Tensor<S>> {
    let n = pi.dim();
    let rank = rank_of(&pi.values(), RANK_TOL);
    if rank < n {
        return Err(Error::DegeneratePoisson { rank, dimension: n });
    }
    // ω = (π^T)^{-1} = -π^{-1}
    let (inv, _) = linalg::invert(pi)?;
    Ok(inv.map(|x| -x.clone()))
}

/// Rank of `π` at the point: singular values above `tol` times the largest.
pub fn pi_rank(scene: &Scene, point: &[f64], tol: f64) -> Result<usize> {
    let pi = eval_field(scene, FieldSelector::Poisson, point)?;
    Ok(rank_of(&pi.components, tol))
}

pub(crate) fn rank_of(m: &Tensor<f64>, tol: f64) -> usize {
    let sv = linalg::singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn jacobi_vanishes_on_constant_and_linear() {
        let t = catalog::flat_torus(1.0);
        assert_eq!(jacobi_defect(&t, &[1.0, 2.0]).unwrap().max_abs(), 0.0);
        let s = catalog::su2_dual();
        assert_eq!(jacobi_defect(&s, &[0.3, -0.2, 0.9]).unwrap().max_abs(), 0.0);
    }

    fn scene3(entries: [[&str; 3]; 3]) -> Scene {
        let doc = crate::geometry::SceneDocument {
            name: "t".into(),
            coordinates: vec!["x".into(), "y".into(), "z".into()],
            params: Default::default(),
            metric: vec![
                vec!["1".into(), "0".into(), "0".into()],
                vec!["0".into(), "1".into(), "0".into()],
                vec!["0".into(), "0".into(), "1".into()],
            ],
            poisson: entries.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
            domain: crate::geometry::DomainDocument { lower: vec![-1.0; 3], upper: vec![1.0; 3], exclude: None },
            orientation: 1,
        };
        Scene::from_document(&doc).unwrap()
    }

    #[test]
    fn jacobi_detects_non_poisson_bivector() {
        let s = scene3([["0", "x", "y"], ["-x", "0", "0"], ["-y", "0", "0"]]);
        let y = 0.25;
        let j = jacobi_defect(&s, &[0.5, y, 0.7]).unwrap();
        // only π^{3a} ∂_a π^{12} = π^{31} ∂_1 x = -y survives
        assert!((j[[0, 1, 2]] + y).abs() < 1e-15);
        assert!((j[[0, 1, 2]] + j[[1, 0, 2]]).abs() < 1e-15);
    }

    #[test]
    fn sharp_on_flat_torus() {
        let t = catalog::flat_torus(2.5);
        let dx1 = OneFormField::coordinate(&t, 0).unwrap();
        assert_eq!(sharp(&t, &dx1, &[0.1, 0.1]).unwrap(), vec![0.0, 2.5]);
    }

    #[test]
    fn sharp_of_zero_bivector_is_zero() {
        let s = scene3([["0"; 3]; 3]);
        let f = OneFormField::components(&s, &["x", "y*z", "1"]).unwrap();
        assert_eq!(sharp(&s, &f, &[0.2, 0.3, 0.4]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn sharp_inverts_symplectic_lowering() {
        let s = catalog::podles_sphere(2.0);
        let p = [0.3, -0.5];
        let w = symplectic_inverse(&s, &p).unwrap();
        let v = [1.5, -0.7];
        // σ_i = ω_ia v^a; (#σ)^j = π^ij σ_i = v^j
        let comps: Vec<String> = (0..2).map(|i| format!("{}", w[[i, 0]] * v[0] + w[[i, 1]] * v[1])).collect();
        let refs: Vec<&str> = comps.iter().map(|c| c.as_str()).collect();
        let sigma = OneFormField::components(&s, &refs).unwrap();
        let out = sharp(&s, &sigma, &p).unwrap();
        assert!((out[0] - v[0]).abs() < 1e-12 && (out[1] - v[1]).abs() < 1e-12);
    }

    #[test]
    fn coordinate_brackets_on_torus_vanish() {
        let t = catalog::flat_torus(1.0);
        let f = OneFormField::exact(&t, "x").unwrap();
        let g = OneFormField::exact(&t, "y").unwrap();
        assert_eq!(koszul_bracket(&t, &f, &g, &[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn constant_forms_on_su2_bracket_like_the_algebra() {
        let s = catalog::su2_dual();
        let e = |i| OneFormField::coordinate(&s, i).unwrap();
        let b = koszul_bracket(&s, &e(0), &e(1), &[0.4, 0.1, -0.3]).unwrap();
        assert_eq!(b, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn divergence_on_catalog() {
        assert_eq!(divergence_defect(&catalog::flat_torus(1.0), &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(divergence_defect(&catalog::su2_dual(), &[0.2, 0.5, 0.1]).unwrap(), vec![0.0; 3]);
        let d = divergence_defect(&catalog::podles_sphere(2.0), &[0.5, 0.5]).unwrap();
        assert!(d[0].abs() > 0.1);
    }

    #[test]
    fn podles_divergence_closed_form() {
        // sqrt(g) π^{uv} = 2c/(1+r²) =: h; ∇_j π^{ij} = ε^{ij} ∂_j h / sqrt(g) up to sign.
        let c = 2.0;
        let s = catalog::podles_sphere(c);
        let (u, v) = (0.6, -1.3);
        let d = divergence_defect(&s, &[u, v]).unwrap();
        assert!((d[0] + c * v).abs() < 1e-12, "{d:?}");
        assert!((d[1] - c * u).abs() < 1e-12, "{d:?}");
    }

    #[test]
    fn symplectic_inverse_conventions() {
        let t = catalog::flat_torus(2.0);
        let w = symplectic_inverse(&t, &[0.0, 0.0]).unwrap();
        assert_eq!(w[[0, 1]], 0.5);
        assert_eq!(w[[1, 0]], -0.5);
        let p = catalog::podles_sphere(2.0);
        let w = symplectic_inverse(&p, &[0.0, 0.0]).unwrap();
        let pi = eval_field(&p, FieldSelector::Poisson, &[0.0, 0.0]).unwrap().components;
        for i in 0..2 {
            for j in 0..2 {
                let c: f64 = (0..2).map(|a| pi[[a, i]] * w[[a, j]]).sum();
                assert_eq!(c, if i == j { 1.0 } else { 0.0 });
            }
        }
        let s = scene3([["0"; 3]; 3]);
        assert!(matches!(symplectic_inverse(&s, &[0.0; 3]), Err(Error::DegeneratePoisson { rank: 0, .. })));
    }

    #[test]
    fn ranks() {
        let s = catalog::su2_dual();
        assert_eq!(pi_rank(&s, &[1.0, 0.0, 0.0], RANK_TOL).unwrap(), 2);
        assert_eq!(pi_rank(&catalog::flat_torus(1.0), &[0.0, 0.0], RANK_TOL).unwrap(), 2);
        let z = scene3([["0"; 3]; 3]);
        assert_eq!(pi_rank(&z, &[0.0; 3], RANK_TOL).unwrap(), 0);
        let lin = scene3([["0", "z", "-y"], ["-z", "0", "x"], ["y", "-x", "0"]]);
        assert_eq!(pi_rank(&lin, &[0.0; 3], RANK_TOL).unwrap(), 0);
    }
}
