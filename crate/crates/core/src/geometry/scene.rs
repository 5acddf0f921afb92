use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Params};
use crate::tensor::Tensor;

/// Nondegeneracy threshold on `|det g|`.
pub const NONDEGENERACY_TOL: f64 = 1e-12;

/// Tolerance for the symmetry checks of the metric and Poisson components.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Serialized form of a scene; this is the `"kind": "scene"` config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub name: String,
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Covariant metric components `g_ij` as expressions.
    pub metric: Vec<Vec<String>>,
    /// Contravariant Poisson components `π^ij` as expressions.
    pub poisson: Vec<Vec<String>>,
    pub domain: DomainDocument,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
}

fn default_orientation() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDocument {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Points where this evaluates `> 0` are skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclude: Option<String>,
}

/// Axis-aligned sample box with an optional exclusion predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub exclude: Option<Expr>,
}

/// A chart carrying a metric and a Poisson bivector, both given by expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    name: String,
    coords: Vec<String>,
    params: Params,
    metric: Tensor<Expr>,
    poisson: Tensor<Expr>,
    domain: SampleDomain,
    orientation: i8,
}

impl Scene {
    /// Parses every expression and checks the structural invariants that do
    /// not need a sample point. Pointwise checks live in [`Scene::validate_at`].
    pub fn from_document(doc: &SceneDocument) -> Result<Scene> {
        let n = doc.coordinates.len();
        if n == 0 {
            return Err(Error::InvalidScene("at least one coordinate is required".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in doc.coordinates.iter().chain(doc.params.keys()) {
            if Func::from_name(name).is_some() {
                return Err(Error::InvalidScene(format!("`{name}` is reserved for a function")));
            }
            if !is_identifier(name) {
                return Err(Error::InvalidScene(format!("`{name}` is not a valid identifier")));
            }
            if !seen.insert(name) {
                return Err(Error::InvalidScene(format!("`{name}` is declared twice")));
            }
        }
        if doc.orientation != 1 && doc.orientation != -1 {
            return Err(Error::InvalidScene("orientation must be +1 or -1".into()));
        }
        let params: Vec<String> = doc.params.keys().cloned().collect();
        let parse_matrix = |what: &str, rows: &[Vec<String>]| -> Result<Tensor<Expr>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidScene(format!("{what} must be a {n}x{n} array")));
            }
            Tensor::try_from_fn(n, 2, |ij| Expr::parse(&rows[ij[0]][ij[1]], &doc.coordinates, &params))
        };
        let metric = parse_matrix("metric", &doc.metric)?;
        let poisson = parse_matrix("poisson", &doc.poisson)?;
        let d = &doc.domain;
        if d.lower.len() != n || d.upper.len() != n {
            return Err(Error::InvalidScene(format!("domain bounds must have {n} entries")));
        }
        if d.lower.iter().zip(&d.upper).any(|(lo, hi)| lo > hi || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::InvalidScene("domain needs finite bounds with lower <= upper".into()));
        }
        let exclude = d.exclude.as_deref().map(|s| Expr::parse(s, &doc.coordinates, &params)).transpose()?;
        Ok(Scene {
            name: doc.name.clone(),
            coords: doc.coordinates.clone(),
            params: doc.params.clone(),
            metric,
            poisson,
            domain: SampleDomain { lower: d.lower.clone(), upper: d.upper.clone(), exclude },
            orientation: doc.orientation,
        })
    }

    /// Document with every expression in canonical printed form.
    pub fn to_document(&self) -> SceneDocument {
        let rows = |t: &Tensor<Expr>| -> Vec<Vec<String>> {
            (0..self.dim()).map(|i| (0..self.dim()).map(|j| t[[i, j]].to_string()).collect()).collect()
        };
        SceneDocument {
            name: self.name.clone(),
            coordinates: self.coords.clone(),
            params: self.params.clone(),
            metric: rows(&self.metric),
            poisson: rows(&self.poisson),
            domain: DomainDocument {
                lower: self.domain.lower.clone(),
                upper: self.domain.upper.clone(),
                exclude: self.domain.exclude.as_ref().map(|e| e.to_string()),
            },
            orientation: self.orientation,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn metric(&self) -> &Tensor<Expr> {
        &self.metric
    }

    pub fn poisson(&self) -> &Tensor<Expr> {
        &self.poisson
    }

    pub fn domain(&self) -> &SampleDomain {
        &self.domain
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Same scene with one parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Scene> {
        if !self.params.contains_key(name) {
            return Err(Error::UnknownParameter(name.to_string()));
        }
        let mut s = self.clone();
        s.params.insert(name.to_string(), value);
        Ok(s)
    }

    /// Same scene with every Poisson component multiplied by `lambda`.
    pub fn with_scaled_poisson(&self, lambda: f64) -> Scene {
        let mut s = self.clone();
        s.poisson = self.poisson.map(|e| {
            crate::expr::Expr::Binary(crate::expr::BinOp::Mul, Box::new(Expr::Num(lambda)), Box::new(e.clone()))
        });
        s
    }

    /// Parses an expression in this scene's scope.
    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        let params: Vec<String> = self.params.keys().cloned().collect();
        Expr::parse(text, &self.coords, &params)
    }

    pub fn is_excluded(&self, point: &[f64]) -> Result<bool> {
        match &self.domain.exclude {
            Some(e) => Ok(e.eval_real(point, &self.params)? > 0.0),
            None => Ok(false),
        }
    }

    pub(crate) fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: point.len() });
        }
        if self.is_excluded(point)? {
            return Err(Error::ExcludedPoint);
        }
        Ok(())
    }

    /// Lexicographic grid over the sample box (first axis slowest),
    /// dropping excluded points. `counts` holds one entry per axis, or a
    /// single entry applied to all axes.
    pub fn grid(&self, counts: &[usize]) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        let counts: Vec<usize> = match counts.len() {
            1 => vec![counts[0]; n],
            k if k == n => counts.to_vec(),
            k => return Err(Error::Config(format!("grid has {k} axes, scene has {n}"))),
        };
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::Config("grid counts must be at least 2 per axis".into()));
        }
        let axes: Vec<Vec<f64>> = (0..n)
            .map(|a| {
                let (lo, hi) = (self.domain.lower[a], self.domain.upper[a]);
                let m = counts[a] - 1;
                (0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64).collect()
            })
            .collect();
        let total: usize = counts.iter().product();
        let mut points = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let p: Vec<f64> = (0..n).map(|a| axes[a][idx[a]]).collect();
            if !self.is_excluded(&p)? {
                points.push(p);
            }
            for a in (0..n).rev() {
                idx[a] += 1;
                if idx[a] < counts[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(points)
    }

    /// Checks metric symmetry, Poisson antisymmetry and nondegeneracy of
    /// the metric at each point.
    pub fn validate_at(&self, points: &[Vec<f64>]) -> Result<()> {
        let n = self.dim();
        for p in points {
            self.check_point(p)?;
            let g = Tensor::try_from_fn(n, 2, |ij| self.metric[ij].eval_real(p, &self.params))?;
            let pi = Tensor::try_from_fn(n, 2, |ij| self.poisson[ij].eval_real(p, &self.params))?;
            for i in 0..n {
                if pi[[i, i]].abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidScene(format!("poisson[{i}][{i}] is nonzero at {p:?}")));
                }
                for j in (i + 1)..n {
                    if self.metric[[i, j]] != self.metric[[j, i]] && (g[[i, j]] - g[[j, i]]).abs() > SYMMETRY_TOL {
                        return Err(Error::InvalidScene(format!("metric is not symmetric in ({i},{j}) at {p:?}")));
                    }
                    if (pi[[i, j]] + pi[[j, i]]).abs() > SYMMETRY_TOL {
                        return Err(Error::InvalidScene(format!("poisson is not antisymmetric in ({i},{j}) at {p:?}")));
                    }
                }
            }
            let (_, det) = crate::linalg::invert(&g)?;
            if det.abs() <= NONDEGENERACY_TOL {
                return Err(Error::SingularMetric { det });
            }
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
