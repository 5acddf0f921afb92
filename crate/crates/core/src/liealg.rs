//! Finite-dimensional Lie algebras: linear Poisson structures on the dual,
//! closed-form dual curvature, and the quantum-group reductions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainDocument, Scene, SceneDocument};
use crate::linalg;
use crate::tensor::Tensor;

/// `ε_ijk` for indices in `0..3`, zero elsewhere.
pub fn levi_civita3(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Structure constants `C^i_jk` (at `[i, j, k]`) with an invariant metric `B_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraPresentation {
    basis: Vec<String>,
    structure: Tensor<f64>,
    metric: Tensor<f64>,
    metric_inv: Tensor<f64>,
}

/// An antisymmetric `r^ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    components: Tensor<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Largest Jacobi-identity violation.
    pub jacobi: f64,
    /// Largest violation of `B([X,Y],Z) + B(Y,[X,Z]) = 0`.
    pub invariance: f64,
}

/// Config-file form of a presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraDocument {
    pub name: String,
    pub basis: Vec<String>,
    /// `structure_constants[i][j][k] = C^i_jk`.
    pub structure_constants: Vec<Vec<Vec<f64>>>,
    pub metric: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_matrix: Option<Vec<Vec<f64>>>,
}

impl LieAlgebraPresentation {
    /// Checks shapes, antisymmetry of `C` in its lower indices and a
    /// symmetric nondegenerate `B`. Jacobi and invariance are diagnostics.
    pub fn new(basis: Vec<String>, structure: Tensor<f64>, metric: Tensor<f64>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || structure.dim() != n || structure.rank() != 3 || metric.dim() != n || metric.rank() != 2 {
            return Err(Error::InvalidPresentation(format!(
                "expected {n} basis elements, C of shape {n}³, B of shape {n}²"
            )));
        }
        for (x, v) in structure.indexed() {
            if *v != -structure[[x[0], x[2], x[1]]] {
                return Err(Error::InvalidPresentation(format!("C^{}_{}{} is not antisymmetric", x[0], x[1], x[2])));
            }
        }
        for (x, v) in metric.indexed() {
            if *v != metric[[x[1], x[0]]] {
                return Err(Error::InvalidPresentation("metric is not symmetric".into()));
            }
        }
        let (metric_inv, det) =
            linalg::invert(&metric).map_err(|_| Error::InvalidPresentation("metric is degenerate".into()))?;
        if det.abs() <= crate::geometry::scene::NONDEGENERACY_TOL {
            return Err(Error::InvalidPresentation("metric is degenerate".into()));
        }
        Ok(LieAlgebraPresentation { basis, structure, metric, metric_inv })
    }

    pub fn from_document(doc: &LieAlgebraDocument) -> Result<(Self, Option<RMatrix>)> {
        let n = doc.basis.len();
        let c = &doc.structure_constants;
        if c.len() != n || c.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::InvalidPresentation(format!("structure_constants must be {n}×{n}×{n}")));
        }
        let square = |m: &Vec<Vec<f64>>, what: &str| {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                Err(Error::InvalidPresentation(format!("{what} must be {n}×{n}")))
            } else {
                Ok(Tensor::from_fn(n, 2, |ij| m[ij[0]][ij[1]]))
            }
        };
        let structure = Tensor::from_fn(n, 3, |x| c[x[0]][x[1]][x[2]]);
        let pres = Self::new(doc.basis.clone(), structure, square(&doc.metric, "metric")?)?;
        let r = doc.r_matrix.as_ref().map(|m| square(m, "r_matrix").and_then(RMatrix::new)).transpose()?;
        Ok((pres, r))
    }

    pub fn to_document(&self, name: &str, r: Option<&RMatrix>) -> LieAlgebraDocument {
        let n = self.dim();
        let rows = |t: &Tensor<f64>| (0..n).map(|i| (0..n).map(|j| t[[i, j]]).collect()).collect();
        LieAlgebraDocument {
            name: name.to_string(),
            basis: self.basis.clone(),
            structure_constants: (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.structure[[i, j, k]]).collect()).collect())
                .collect(),
            metric: rows(&self.metric),
            r_matrix: r.map(|r| rows(&r.components)),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn structure(&self) -> &Tensor<f64> {
        &self.structure
    }

    pub fn metric(&self) -> &Tensor<f64> {
        &self.metric
    }

    /// `[a, b]^i = C^i_jk a^j b^k`.
    pub fn bracket(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        s += self.structure[[i, j, k]] * a[j] * b[k];
                    }
                }
                s
            })
            .collect()
    }

    /// `(ad*_X γ)_b = -γ_a C^a_xb X^x`.
    pub fn coadjoint(&self, x: &[f64], gamma: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|b| {
                let mut s = 0.0;
                for a in 0..n {
                    for c in 0..n {
                        s -= gamma[a] * self.structure[[a, c, b]] * x[c];
                    }
                }
                s
            })
            .collect()
    }

    fn raise(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.metric_inv[[i, j]] * v[j]).sum()).collect()
    }

    fn lower(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.metric[[i, j]] * v[j]).sum()).collect()
    }
}

impl RMatrix {
    pub fn new(components: Tensor<f64>) -> Result<Self> {
        if components.rank() != 2 {
            return Err(Error::RankMismatch("r-matrix must have rank 2".into()));
        }
        for (x, v) in components.indexed() {
            if *v != -components[[x[1], x[0]]] {
                return Err(Error::InvalidPresentation("r-matrix is not antisymmetric".into()));
            }
        }
        Ok(RMatrix { components })
    }

    /// `c (e_a ∧ e_b)`, i.e. `r^ab = c = -r^ba`.
    pub fn wedge(dim: usize, a: usize, b: usize, c: f64) -> Result<Self> {
        for i in [a, b] {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dimension: dim });
            }
        }
        let mut t = Tensor::zeros(dim, 2);
        if a != b {
            t[[a, b]] = c;
            t[[b, a]] = -c;
        }
        Ok(RMatrix { components: t })
    }

    pub fn components(&self) -> &Tensor<f64> {
        &self.components
    }

    /// `(rα)^j = r^ij α_i`.
    pub fn apply(&self, alpha: &[f64]) -> Vec<f64> {
        let n = self.components.dim();
        (0..n).map(|j| (0..n).map(|i| self.components[[i, j]] * alpha[i]).sum()).collect()
    }
}

pub fn validate(p: &LieAlgebraPresentation) -> Diagnostics {
    let n = p.dim();
    let c = &p.structure;
    let b = &p.metric;
    let mut jacobi: f64 = 0.0;
    let mut invariance: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let inv: f64 = (0..n).map(|a| c[[a, i, j]] * b[[a, k]] + c[[a, i, k]] * b[[j, a]]).sum();
                invariance = invariance.max(inv.abs());
                for l in 0..n {
                    let s: f64 = (0..n)
                        .map(|a| {
                            c[[a, j, k]] * c[[i, a, l]] + c[[a, k, l]] * c[[i, a, j]] + c[[a, l, j]] * c[[i, a, k]]
                        })
                        .sum();
                    jacobi = jacobi.max(s.abs());
                }
            }
        }
    }
    Diagnostics { jacobi, invariance }
}

/// su(2): `C^i_jk = ε_ijk`, `B = δ`.
pub fn su2() -> LieAlgebraPresentation {
    let c = Tensor::from_fn(3, 3, |x| levi_civita3(x[0], x[1], x[2]));
    let b = Tensor::from_fn(3, 2, |x| if x[0] == x[1] { 1.0 } else { 0.0 });
    LieAlgebraPresentation::new(vec!["e1".into(), "e2".into(), "e3".into()], c, b).expect("su(2) is valid")
}

/// Index of `H`, `E`, `F` in [`sl2`].
pub const H: usize = 0;
pub const E: usize = 1;
pub const F: usize = 2;

/// sl(2) in the basis `(H, E, F)`, `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`,
/// with a quarter of the Killing form.
pub fn sl2() -> LieAlgebraPresentation {
    let mut c = Tensor::zeros(3, 3);
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        c[[i, j, k]] = v;
        c[[i, k, j]] = -v;
    };
    set(E, H, E, 2.0);
    set(F, H, F, -2.0);
    set(H, E, F, 1.0);
    let mut b = Tensor::zeros(3, 2);
    b[[H, H]] = 2.0;
    b[[E, F]] = 1.0;
    b[[F, E]] = 1.0;
    LieAlgebraPresentation::new(vec!["H".into(), "E".into(), "F".into()], c, b).expect("sl(2) is valid")
}

fn linear_form(coeffs: &[f64], coords: &[String]) -> String {
    let mut out = String::new();
    for (c, x) in coeffs.iter().zip(coords) {
        if *c == 0.0 {
            continue;
        }
        let mag = c.abs();
        let term = if mag == 1.0 { x.clone() } else { format!("{mag}*{x}") };
        if out.is_empty() {
            out = if *c < 0.0 { format!("-{term}") } else { term };
        } else {
            out.push_str(if *c < 0.0 { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Scene document for the linear Poisson structure on the dual:
/// metric `B` and `π^ij = B^ia B^jb C^c_ab B_cd x^d`.
pub fn linear_poisson_document(
    p: &LieAlgebraPresentation,
    name: &str,
    coords: &[String],
    domain: DomainDocument,
) -> Result<SceneDocument> {
    let n = p.dim();
    if coords.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: coords.len() });
    }
    let (c, b, bi) = (&p.structure, &p.metric, &p.metric_inv);
    let mut poisson = vec![vec![String::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let coeffs: Vec<f64> = (0..n)
                .map(|d| {
                    let mut s = 0.0;
                    for a in 0..n {
                        for bb in 0..n {
                            for cc in 0..n {
                                s += bi[[i, a]] * bi[[j, bb]] * c[[cc, a, bb]] * b[[cc, d]];
                            }
                        }
                    }
                    s
                })
                .collect();
            poisson[i][j] = linear_form(&coeffs, coords);
        }
    }
    let metric = (0..n).map(|i| (0..n).map(|j| format!("{}", b[[i, j]])).collect()).collect();
    Ok(SceneDocument {
        name: name.to_string(),
        coordinates: coords.to_vec(),
        params: Default::default(),
        metric,
        poisson,
        domain,
        orientation: 1,
    })
}

/// The linear Poisson scene on the box `[lower, upper]`, coordinates `x1..xn`.
pub fn linear_poisson_scene(p: &LieAlgebraPresentation, lower: &[f64], upper: &[f64]) -> Result<Scene> {
    let coords: Vec<String> = (1..=p.dim()).map(|i| format!("x{i}")).collect();
    let domain = DomainDocument { lower: lower.to_vec(), upper: upper.to_vec(), exclude: None };
    Scene::from_document(&linear_poisson_document(p, "linear-poisson", &coords, domain)?)
}

/// `-¼ [[α, β], γ]` for constant covectors, with `g*` identified with `g` through `B`.
pub fn dual_curvature_closed_form(p: &LieAlgebraPresentation, alpha: &[f64], beta: &[f64], gamma: &[f64]) -> Vec<f64> {
    let (a, b, c) = (p.raise(alpha), p.raise(beta), p.raise(gamma));
    let v: Vec<f64> = p.bracket(&p.bracket(&a, &b), &c).iter().map(|x| -0.25 * x).collect();
    p.lower(&v)
}

/// `[r,r]^ijk = C^i_ab r^aj r^bk + C^j_ab r^ak r^bi + C^k_ab r^ai r^bj`.
pub fn cybe_defect(p: &LieAlgebraPresentation, r: &RMatrix) -> Tensor<f64> {
    let n = p.dim();
    let (c, r) = (&p.structure, &r.components);
    let term = |i: usize, j: usize, k: usize| -> f64 {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += c[[i, a, b]] * r[[a, j]] * r[[b, k]];
            }
        }
        s
    };
    // Each term is antisymmetric in its last two slots, so the sum is totally
    // antisymmetric; fill from sorted indices to keep that exact.
    Tensor::from_fn(n, 3, |x| {
        let mut idx = [x[0], x[1], x[2]];
        if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
            return 0.0;
        }
        let mut sign = 1.0;
        for a in 0..3 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        sign * (term(i, j, k) + term(j, k, i) + term(k, i, j))
    })
}

/// `-½ r^jk C^i_jk`.
pub fn qg_divergence(p: &LieAlgebraPresentation, r: &RMatrix) -> Vec<f64> {
    let n = p.dim();
    (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += r.components[[j, k]] * p.structure[[i, j, k]];
                }
            }
            -0.5 * s
        })
        .collect()
}

/// `ad*_{[r,r](α,β)} γ` with `[r,r](α,β)^k = [r,r]^ijk α_i β_j`.
pub fn qg_curvature(p: &LieAlgebraPresentation, r: &RMatrix, alpha: &[f64], beta: &[f64], gamma: &[f64]) -> Vec<f64> {
    let n = p.dim();
    let rr = cybe_defect(p, r);
    let x: Vec<f64> = (0..n)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += rr[[i, j, k]] * alpha[i] * beta[j];
                }
            }
            s
        })
        .collect();
    p.coadjoint(&x, gamma)
}

/// `ad*_{rα} β - ad*_{rβ} α`.
pub fn koszul_left_invariant(p: &LieAlgebraPresentation, r: &RMatrix, alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let a = p.coadjoint(&r.apply(alpha), beta);
    let b = p.coadjoint(&r.apply(beta), alpha);
    a.iter().zip(&b).map(|(x, y)| x - y).collect()
}
