use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::tensor::{sum, Tensor};

use super::scene::NONDEGENERACY_TOL;
use super::PointEvaluation;

/// Position of a tensor index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Up,
    Down,
}

/// Levi-Civita symbols `Γ^i_jk` at `[i, j, k]` and their partials
/// `∂_l Γ^i_jk` at `[i, j, k, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffels {
    pub gamma: Tensor<f64>,
    pub d_gamma: Tensor<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeDensity {
    /// `sqrt|det g|`, always positive.
    pub value: f64,
    pub d1: Vec<f64>,
    pub orientation: i8,
}

fn check_metric(g_eval: &PointEvaluation) -> Result<()> {
    if g_eval.rank() != 2 {
        return Err(Error::RankMismatch(format!("metric has rank {}", g_eval.rank())));
    }
    Ok(())
}

fn plain_inverse(g: &Tensor<f64>) -> Result<Tensor<f64>> {
    let (inv, det) = linalg::invert(g)?;
    if det.abs() <= NONDEGENERACY_TOL {
        return Err(Error::SingularMetric { det });
    }
    Ok(inv)
}

/// Contravariant metric `g^ij` with partials from the matrix-inverse identities
/// `∂G = -G (∂g) G` and
/// `∂_k∂_l G = G g_k G g_l G + G g_l G g_k G - G g_kl G`.
pub fn metric_inverse(g_eval: &PointEvaluation) -> Result<PointEvaluation> {
    check_metric(g_eval)?;
    let n = g_eval.components.dim();
    let ginv = plain_inverse(&g_eval.components)?;
    let slice1 = |k: usize| Tensor::from_fn(n, 2, |ij| g_eval.d1[[ij[0], ij[1], k]]);
    let slice2 = |k: usize, l: usize| Tensor::from_fn(n, 2, |ij| g_eval.d2[[ij[0], ij[1], k, l]]);
    let mm = linalg::matmul;
    let dg: Vec<Tensor<f64>> = (0..n).map(slice1).collect();
    let dginv: Vec<Tensor<f64>> = dg.iter().map(|d| mm(&mm(&ginv, d), &ginv).scaled(-1.0)).collect();
    let mut d1 = Tensor::zeros(n, 3);
    let mut d2 = Tensor::zeros(n, 4);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d1[[i, j, k]] = dginv[k][[i, j]];
            }
        }
        for l in 0..n {
            let a = mm(&mm(&mm(&mm(&ginv, &dg[k]), &ginv), &dg[l]), &ginv);
            let b = mm(&mm(&mm(&mm(&ginv, &dg[l]), &ginv), &dg[k]), &ginv);
            let c = mm(&mm(&ginv, &slice2(k, l)), &ginv);
            for i in 0..n {
                for j in 0..n {
                    d2[[i, j, k, l]] = a[[i, j]] + b[[i, j]] - c[[i, j]];
                }
            }
        }
    }
    Ok(PointEvaluation { components: ginv, d1, d2 })
}

/// `sqrt|det g|` and its first partials `½ sqrt|det g| tr(G ∂_k g)`.
pub fn volume_density(g_eval: &PointEvaluation, orientation: i8) -> Result<VolumeDensity> {
    check_metric(g_eval)?;
    let n = g_eval.components.dim();
    let det = linalg::det(&g_eval.components);
    if det.abs() <= NONDEGENERACY_TOL {
        return Err(Error::SingularMetric { det });
    }
    let ginv = plain_inverse(&g_eval.components)?;
    let value = det.abs().sqrt();
    let d1 = (0..n)
        .map(|k| {
            let tr: f64 = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| ginv[[a, b]] * g_eval.d1[[b, a, k]])
                .sum();
            0.5 * value * tr
        })
        .collect();
    Ok(VolumeDensity { value, d1, orientation })
}

/// Levi-Civita symbols from the metric and its first two partials.
pub fn christoffels(g_eval: &PointEvaluation) -> Result<Christoffels> {
    let inv = metric_inverse(g_eval)?;
    let n = g_eval.components.dim();
    let (dg, d2g) = (&g_eval.d1, &g_eval.d2);
    // S_ajk = ∂_j g_ak + ∂_k g_aj - ∂_a g_jk
    let s = Tensor::from_fn(n, 3, |x| {
        let (a, j, k) = (x[0], x[1], x[2]);
        dg[[a, k, j]] + dg[[a, j, k]] - dg[[j, k, a]]
    });
    let ds = Tensor::from_fn(n, 4, |x| {
        let (a, j, k, l) = (x[0], x[1], x[2], x[3]);
        d2g[[a, k, j, l]] + d2g[[a, j, k, l]] - d2g[[j, k, a, l]]
    });
    let gamma =
        Tensor::from_fn(n, 3, |x| 0.5 * (0..n).map(|a| inv.components[[x[0], a]] * s[[a, x[1], x[2]]]).sum::<f64>());
    let d_gamma = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        0.5 * (0..n).map(|a| inv.d1[[i, a, l]] * s[[a, j, k]] + inv.components[[i, a]] * ds[[a, j, k, l]]).sum::<f64>()
    });
    Ok(Christoffels { gamma, d_gamma })
}

/// `R^k_lab` at `[k, l, a, b]`.
pub fn riemann(g_eval: &PointEvaluation) -> Result<Tensor<f64>> {
    let c = christoffels(g_eval)?;
    Ok(riemann_tensor(&c.gamma, &c.d_gamma))
}

/// `R^k_lab = ∂_a Γ^k_bl - ∂_b Γ^k_al + Γ^k_ac Γ^c_bl - Γ^k_bc Γ^c_al`,
/// the convention with `[∇_a, ∇_b] v^k = R^k_lab v^l`.
pub fn riemann_tensor<S: Scalar>(gamma: &Tensor<S>, d_gamma: &Tensor<S>) -> Tensor<S> {
    let n = gamma.dim();
    Tensor::from_fn(n, 4, |x| {
        let (k, l, a, b) = (x[0], x[1], x[2], x[3]);
        d_gamma[[k, b, l, a]].clone() - d_gamma[[k, a, l, b]].clone()
            + sum(n, |c| {
                gamma[[k, a, c]].clone() * gamma[[c, b, l]].clone()
                    - gamma[[k, b, c]].clone() * gamma[[c, a, l]].clone()
            })
    })
}

/// `∇T` for a tensor with the given index positions; the derivative index is
/// appended last.
pub fn covariant_derivative(
    tensor: &PointEvaluation,
    kinds: &[IndexKind],
    christoffels: &Christoffels,
) -> Result<Tensor<f64>> {
    covariant_derivative_of(&tensor.components, &tensor.d1, kinds, &christoffels.gamma)
}

pub(crate) fn covariant_derivative_of<S: Scalar>(
    components: &Tensor<S>,
    d1: &Tensor<S>,
    kinds: &[IndexKind],
    gamma: &Tensor<S>,
) -> Result<Tensor<S>> {
    let r = components.rank();
    let n = components.dim();
    if kinds.len() != r || d1.rank() != r + 1 || gamma.dim() != n || d1.dim() != n {
        return Err(Error::RankMismatch(format!(
            "tensor of rank {r} with {} index kinds and derivative rank {}",
            kinds.len(),
            d1.rank()
        )));
    }
    Ok(Tensor::from_fn(n, r + 1, |idx| {
        let (t_idx, c) = (&idx[..r], idx[r]);
        let mut acc = d1[idx].clone();
        let mut moved = t_idx.to_vec();
        for (p, kind) in kinds.iter().enumerate() {
            let orig = t_idx[p];
            for a in 0..n {
                moved[p] = a;
                let term = match kind {
                    IndexKind::Up => gamma[[orig, c, a]].clone() * components[&moved[..]].clone(),
                    IndexKind::Down => -(gamma[[a, c, orig]].clone() * components[&moved[..]].clone()),
                };
                acc = acc + term;
            }
            moved[p] = orig;
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::geometry::{eval_field, FieldSelector};

    fn constant_metric(diag: &[f64]) -> PointEvaluation {
        let n = diag.len();
        PointEvaluation {
            components: Tensor::from_fn(n, 2, |ij| if ij[0] == ij[1] { diag[ij[0]] } else { 0.0 }),
            d1: Tensor::zeros(n, 3),
            d2: Tensor::zeros(n, 4),
        }
    }

    #[test]
    fn identity_inverse() {
        let inv = metric_inverse(&constant_metric(&[1.0, 1.0])).unwrap();
        assert_eq!(inv.components, constant_metric(&[1.0, 1.0]).components);
        assert_eq!(inv.d1.max_abs(), 0.0);
        assert_eq!(inv.d2.max_abs(), 0.0);
    }

    #[test]
    fn diagonal_inverse() {
        let inv = metric_inverse(&constant_metric(&[4.0, 9.0])).unwrap();
        assert_eq!(inv.components[[0, 0]], 0.25);
        assert!((inv.components[[1, 1]] - 1.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn stereographic_inverse_at_origin() {
        let s = catalog::podles_sphere(2.0);
        let g = eval_field(&s, FieldSelector::Metric, &[0.0, 0.0]).unwrap();
        let inv = metric_inverse(&g).unwrap();
        assert_eq!(inv.components[[0, 0]], 0.25);
        assert_eq!(inv.components[[0, 1]], 0.0);
        assert_eq!(inv.components[[1, 1]], 0.25);
    }

    #[test]
    fn singular_metric_errors() {
        let g = constant_metric(&[1.0, 0.0]);
        assert!(matches!(metric_inverse(&g), Err(Error::SingularMetric { .. })));
        assert!(matches!(volume_density(&g, 1), Err(Error::SingularMetric { .. })));
        assert!(christoffels(&g).is_err());
    }

    #[test]
    fn volume_densities() {
        assert_eq!(volume_density(&constant_metric(&[1.0, 1.0]), 1).unwrap().value, 1.0);
        assert_eq!(volume_density(&constant_metric(&[-1.0, 1.0, 1.0, 1.0]), 1).unwrap().value, 1.0);
        let s = catalog::podles_sphere(2.0);
        let g = eval_field(&s, FieldSelector::Metric, &[0.0, 0.0]).unwrap();
        assert_eq!(volume_density(&g, 1).unwrap().value, 4.0);
    }

    #[test]
    fn volume_density_partials_match_closed_form() {
        // sqrt det g = 4 (1 + r^2)^-2 on the stereographic sphere.
        let s = catalog::podles_sphere(2.0);
        let (u, v) = (0.3, -0.8);
        let g = eval_field(&s, FieldSelector::Metric, &[u, v]).unwrap();
        let vd = volume_density(&g, 1).unwrap();
        let q: f64 = 1.0 + u * u + v * v;
        assert!((vd.value - 4.0 / (q * q)).abs() < 1e-14);
        assert!((vd.d1[0] + 16.0 * u / q.powi(3)).abs() < 1e-13);
        assert!((vd.d1[1] + 16.0 * v / q.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn constant_metric_is_flat() {
        let c = christoffels(&constant_metric(&[2.0, 3.0, -1.0])).unwrap();
        assert_eq!(c.gamma.max_abs(), 0.0);
        assert_eq!(c.d_gamma.max_abs(), 0.0);
        assert_eq!(riemann(&constant_metric(&[2.0, 3.0, -1.0])).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn stereographic_christoffel_vanishes_at_origin() {
        let s = catalog::fuzzy_sphere(1.0);
        let g = eval_field(&s, FieldSelector::Metric, &[0.0, 0.0]).unwrap();
        let c = christoffels(&g).unwrap();
        assert_eq!(c.gamma[[0, 0, 0]], 0.0);
        assert_eq!(c.gamma.max_abs(), 0.0);
    }

    #[test]
    fn exponential_metric_in_one_dimension() {
        let doc = crate::geometry::SceneDocument {
            name: "exp".into(),
            coordinates: vec!["x".into()],
            params: Default::default(),
            metric: vec![vec!["exp(2*x)".into()]],
            poisson: vec![vec!["0".into()]],
            domain: crate::geometry::DomainDocument { lower: vec![-1.0], upper: vec![1.0], exclude: None },
            orientation: 1,
        };
        let s = crate::geometry::Scene::from_document(&doc).unwrap();
        let g = eval_field(&s, FieldSelector::Metric, &[0.37]).unwrap();
        let c = christoffels(&g).unwrap();
        assert!((c.gamma[[0, 0, 0]] - 1.0).abs() < 1e-14);
        assert!(c.d_gamma[[0, 0, 0, 0]].abs() < 1e-14);
    }

    #[test]
    fn round_sphere_has_unit_gaussian_curvature() {
        let s = catalog::fuzzy_sphere(1.0);
        for p in [[0.0, 0.0], [0.5, -1.5], [1.9, 1.2]] {
            let g = eval_field(&s, FieldSelector::Metric, &p).unwrap();
            let r = riemann(&g).unwrap();
            // K = R_1212 / det g with R_1212 = g_1k R^k_212
            let det = linalg::det(&g.components);
            let r1212: f64 = (0..2).map(|k| g.components[[0, k]] * r[[k, 1, 0, 1]]).sum();
            assert!((r1212 / det - 1.0).abs() < 1e-12, "K at {p:?} = {}", r1212 / det);
        }
    }

    #[test]
    fn metric_is_parallel() {
        let s = catalog::fuzzy_sphere(1.0);
        let g = eval_field(&s, FieldSelector::Metric, &[0.7, -0.4]).unwrap();
        let c = christoffels(&g).unwrap();
        let ng = covariant_derivative(&g, &[IndexKind::Down, IndexKind::Down], &c).unwrap();
        assert!(ng.max_abs() < 1e-12);
        assert!(covariant_derivative(&g, &[IndexKind::Down], &c).is_err());
    }

    #[test]
    fn constant_vector_in_flat_chart_is_parallel() {
        let v = PointEvaluation {
            components: Tensor::from_fn(2, 1, |i| [3.0, -1.0][i[0]]),
            d1: Tensor::zeros(2, 2),
            d2: Tensor::zeros(2, 3),
        };
        let c = christoffels(&constant_metric(&[1.0, 1.0])).unwrap();
        assert_eq!(covariant_derivative(&v, &[IndexKind::Up], &c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn poisson_derivative_on_su2_dual_is_structure_constants() {
        let s = catalog::su2_dual();
        let p = [0.3, -0.6, 0.2];
        let g = eval_field(&s, FieldSelector::Metric, &p).unwrap();
        let pi = eval_field(&s, FieldSelector::Poisson, &p).unwrap();
        let c = christoffels(&g).unwrap();
        let npi = covariant_derivative(&pi, &[IndexKind::Up, IndexKind::Up], &c).unwrap();
        for (idx, v) in npi.indexed() {
            assert_eq!(*v, crate::liealg::levi_civita3(idx[0], idx[1], idx[2]));
        }
    }
}
