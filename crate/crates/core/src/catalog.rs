//! Built-in example scenes and Lie-algebra presentations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{DomainDocument, Scene, SceneDocument};
use crate::liealg::{self, LieAlgebraPresentation, RMatrix};
use crate::report::{Check, Document, Subject};

pub const NAMES: [&str; 6] =
    ["flat-torus", "fuzzy-sphere", "podles-sphere", "su2-dual", "sl2-drinfeld-jimbo", "sl2-triangular"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub check: Check,
    pub expected: Expected,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub subject: Subject,
    pub expectations: Vec<Expectation>,
}

impl CatalogEntry {
    /// The config document a user would write for this entry.
    pub fn document(&self) -> Document {
        self.subject.to_document()
    }
}

pub fn list() -> &'static [&'static str] {
    &NAMES
}

fn diag(n: usize, entry: &str) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { entry.to_string() } else { "0".to_string() }).collect()).collect()
}

fn planar_bivector(entry: &str) -> Vec<Vec<String>> {
    vec![vec!["0".into(), entry.into()], vec![format!("-({entry})"), "0".into()]]
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn flat_torus_document(theta: f64) -> SceneDocument {
    SceneDocument {
        name: "flat-torus".into(),
        coordinates: vec!["x".into(), "y".into()],
        params: params(&[("theta", theta)]),
        metric: diag(2, "1"),
        poisson: planar_bivector("theta"),
        domain: DomainDocument { lower: vec![0.0; 2], upper: vec![2.0 * PI; 2], exclude: None },
        orientation: 1,
    }
}

/// Round unit sphere in stereographic coordinates.
const SPHERE_METRIC: &str = "4/(u^2 + v^2 + 1)^2";

pub fn fuzzy_sphere_document(h0: f64) -> SceneDocument {
    SceneDocument {
        name: "fuzzy-sphere".into(),
        coordinates: vec!["u".into(), "v".into()],
        params: params(&[("h0", h0)]),
        metric: diag(2, SPHERE_METRIC),
        poisson: planar_bivector("h0/4*(u^2 + v^2 + 1)^2"),
        domain: DomainDocument { lower: vec![-2.0; 2], upper: vec![2.0; 2], exclude: None },
        orientation: 1,
    }
}

pub fn podles_sphere_document(c: f64) -> SceneDocument {
    SceneDocument {
        name: "podles-sphere".into(),
        coordinates: vec!["u".into(), "v".into()],
        params: params(&[("c", c)]),
        metric: diag(2, SPHERE_METRIC),
        poisson: planar_bivector("c/2*(u^2 + v^2 + 1)"),
        domain: DomainDocument { lower: vec![-2.0; 2], upper: vec![2.0; 2], exclude: None },
        orientation: 1,
    }
}

pub fn su2_dual_document() -> SceneDocument {
    let coords: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let domain =
        DomainDocument { lower: vec![-1.0; 3], upper: vec![1.0; 3], exclude: Some("0.01 - (x^2 + y^2 + z^2)".into()) };
    liealg::linear_poisson_document(&liealg::su2(), "su2-dual", &coords, domain).expect("su(2) has three coordinates")
}

fn scene(doc: SceneDocument) -> Scene {
    Scene::from_document(&doc).expect("catalog scenes are valid")
}

/// Flat torus `[0, 2π]²` with constant `π^xy = θ`.
pub fn flat_torus(theta: f64) -> Scene {
    scene(flat_torus_document(theta))
}

/// Round sphere with `π⌟ε = h0` constant.
pub fn fuzzy_sphere(h0: f64) -> Scene {
    scene(fuzzy_sphere_document(h0))
}

/// Round sphere with `π⌟ε = 2c/(1 + u² + v²)`.
pub fn podles_sphere(c: f64) -> Scene {
    scene(podles_sphere_document(c))
}

/// The linear Poisson structure on su(2)*, with a small ball around the
/// origin excluded.
pub fn su2_dual() -> Scene {
    scene(su2_dual_document())
}

fn expect(check: Check, expected: Expected, note: &'static str) -> Expectation {
    Expectation { check, expected, note }
}

pub fn load_example(name: &str) -> Result<CatalogEntry> {
    use Check::*;
    use Expected::*;
    let entry = match name {
        "flat-torus" => CatalogEntry {
            name: "flat-torus",
            summary: "flat 2-torus with a constant bivector",
            subject: Subject::Scene(flat_torus(1.0)),
            expectations: vec![
                expect(Jacobi, Pass, "constant bivector"),
                expect(Divergence, Pass, "∇π = 0"),
                expect(Torsion, Pass, "self-test"),
                expect(MetricCompat, Pass, "self-test"),
                expect(Curvature, Pass, "D = ∇_# is flat"),
                expect(GprimeFlat, Pass, "g' = θ^-2 δ"),
            ],
        },
        "fuzzy-sphere" => CatalogEntry {
            name: "fuzzy-sphere",
            summary: "round 2-sphere with the rotation-invariant symplectic form",
            subject: Subject::Scene(fuzzy_sphere(1.0)),
            expectations: vec![
                expect(Jacobi, Pass, "any bivector in two dimensions"),
                expect(Divergence, Pass, "π⌟ε constant"),
                expect(Torsion, Pass, "self-test"),
                expect(MetricCompat, Pass, "self-test"),
                expect(Curvature, Fail, "g' is a curved metric on the sphere"),
                expect(GprimeFlat, Fail, "g' = h0^-2 g is round"),
            ],
        },
        "podles-sphere" => CatalogEntry {
            name: "podles-sphere",
            summary: "round 2-sphere with the bivector of the standard Podleś sphere, c = 2",
            subject: Subject::Scene(podles_sphere(2.0)),
            expectations: vec![
                expect(Jacobi, Pass, "any bivector in two dimensions"),
                expect(Divergence, Fail, "π⌟ε = 2c/(1 + u² + v²) is not constant"),
                expect(Torsion, Pass, "self-test"),
                expect(MetricCompat, Pass, "self-test"),
                expect(Curvature, Pass, "g' = h^-2 g is flat"),
                expect(GprimeFlat, Pass, "g' = h^-2 g is flat"),
            ],
        },
        "su2-dual" => CatalogEntry {
            name: "su2-dual",
            summary: "linear Poisson structure on su(2)* with the flat invariant metric",
            subject: Subject::Scene(su2_dual()),
            expectations: vec![
                expect(Jacobi, Pass, "Jacobi identity of su(2)"),
                expect(Divergence, Pass, "C^ij_j = 0"),
                expect(Torsion, Pass, "self-test"),
                expect(MetricCompat, Pass, "self-test"),
                expect(Curvature, Fail, "K(α,β)γ = -¼[[α,β],γ]"),
                expect(GprimeFlat, Skipped, "odd dimension: π is never invertible"),
            ],
        },
        "sl2-drinfeld-jimbo" => CatalogEntry {
            name: "sl2-drinfeld-jimbo",
            summary: "sl(2) with the Drinfel'd-Jimbo r-matrix E∧F",
            subject: Subject::LieAlgebra {
                name: "sl2-drinfeld-jimbo".into(),
                presentation: liealg::sl2(),
                r: Some(dj_r()),
            },
            expectations: vec![
                expect(Jacobi, Pass, "sl(2) structure constants"),
                expect(Cybe, Fail, "E∧F is not triangular"),
                expect(QgDivergence, Fail, "-½ r^jk C^i_jk = -H"),
            ],
        },
        "sl2-triangular" => CatalogEntry {
            name: "sl2-triangular",
            summary: "sl(2) with the triangular r-matrix H∧E",
            subject: Subject::LieAlgebra {
                name: "sl2-triangular".into(),
                presentation: liealg::sl2(),
                r: Some(triangular_r()),
            },
            expectations: vec![
                expect(Jacobi, Pass, "sl(2) structure constants"),
                expect(Cybe, Pass, "[r,r] = 0"),
                expect(QgDivergence, Fail, "-½ r^jk C^i_jk = -2E"),
            ],
        },
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(entry)
}

/// `E∧F` in sl(2).
pub fn dj_r() -> RMatrix {
    RMatrix::wedge(3, liealg::E, liealg::F, 1.0).expect("indices in range")
}

/// `H∧E` in sl(2).
pub fn triangular_r() -> RMatrix {
    RMatrix::wedge(3, liealg::H, liealg::E, 1.0).expect("indices in range")
}

/// The sl(2) presentation of the catalog.
pub fn sl2() -> LieAlgebraPresentation {
    liealg::sl2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::jacobi_defect;

    #[test]
    fn every_entry_loads() {
        for name in list() {
            let e = load_example(name).unwrap();
            assert_eq!(e.name, *name);
            assert!(!e.expectations.is_empty());
        }
        assert_eq!(load_example("klein-bottle").unwrap_err(), Error::UnknownExample("klein-bottle".into()));
    }

    #[test]
    fn scenes_validate_on_default_grid() {
        for name in list() {
            if let Subject::Scene(s) = load_example(name).unwrap().subject {
                let pts = s.grid(&[9]).unwrap();
                s.validate_at(&pts).unwrap();
                for p in &pts {
                    assert!(jacobi_defect(&s, p).unwrap().max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn su2_excludes_origin() {
        let s = su2_dual();
        assert!(s.is_excluded(&[0.0; 3]).unwrap());
        assert!(!s.is_excluded(&[0.1, 0.1, 0.0]).unwrap());
        assert_eq!(s.grid(&[9]).unwrap().len(), 9 * 9 * 9 - 1);
    }

    #[test]
    fn podles_constant_at_origin() {
        use crate::expr::Expr;
        let s = podles_sphere(2.0);
        let e = Expr::parse("2*c/(u*u + v*v + 1)", s.coordinates(), &["c".to_string()]).unwrap();
        assert_eq!(e.eval_jet(&[0.0, 0.0], s.params()).unwrap().value(), 4.0);
    }
}
