use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Scene, SceneDocument};
use crate::liealg::{LieAlgebraDocument, LieAlgebraPresentation, RMatrix};

/// Default sample count per axis.
pub const DEFAULT_GRID: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Jacobi,
    Divergence,
    Torsion,
    MetricCompat,
    Curvature,
    GprimeFlat,
    Cybe,
    QgDivergence,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Jacobi,
        Check::Divergence,
        Check::Torsion,
        Check::MetricCompat,
        Check::Curvature,
        Check::GprimeFlat,
        Check::Cybe,
        Check::QgDivergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Jacobi => "jacobi",
            Check::Divergence => "divergence",
            Check::Torsion => "torsion",
            Check::MetricCompat => "metric_compat",
            Check::Curvature => "curvature",
            Check::GprimeFlat => "gprime_flat",
            Check::Cybe => "cybe",
            Check::QgDivergence => "qg_divergence",
        }
    }

    /// Self-tests of the construction get a tighter default than obstructions.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Jacobi | Check::Torsion | Check::MetricCompat => 1e-8,
            _ => 1e-6,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Config(format!("unknown check `{s}`")))
    }
}

/// What a report is about.
#[derive(Debug, Clone)]
pub enum Subject {
    Scene(Scene),
    LieAlgebra { name: String, presentation: LieAlgebraPresentation, r: Option<RMatrix> },
}

impl Subject {
    pub fn name(&self) -> String {
        match self {
            Subject::Scene(s) => s.name().to_string(),
            Subject::LieAlgebra { name, .. } => name.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Subject::Scene(_) => "scene",
            Subject::LieAlgebra { .. } => "lie_algebra",
        }
    }

    pub fn default_checks(&self) -> Vec<Check> {
        use Check::*;
        match self {
            Subject::Scene(_) => vec![Jacobi, Divergence, Torsion, MetricCompat, Curvature, GprimeFlat],
            Subject::LieAlgebra { .. } => vec![Jacobi, Cybe, QgDivergence],
        }
    }

    pub fn to_document(&self) -> Document {
        match self {
            Subject::Scene(s) => Document::Scene(s.to_document()),
            Subject::LieAlgebra { name, presentation, r } => {
                Document::LieAlgebra(presentation.to_document(name, r.as_ref()))
            }
        }
    }
}

/// A config document body, tagged by `kind`.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Scene(SceneDocument),
    LieAlgebra(LieAlgebraDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Scene(_) => "scene",
            Document::LieAlgebra(_) => "lie_algebra",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Document::Scene(d) => &d.name,
            Document::LieAlgebra(d) => &d.name,
        }
    }

    /// Builds and structurally validates the subject.
    pub fn to_subject(&self) -> Result<Subject> {
        Ok(match self {
            Document::Scene(d) => Subject::Scene(Scene::from_document(d)?),
            Document::LieAlgebra(d) => {
                let (presentation, r) = LieAlgebraPresentation::from_document(d)?;
                Subject::LieAlgebra { name: d.name.clone(), presentation, r }
            }
        })
    }

    fn to_value(&self) -> serde_json::Value {
        let mut v = match self {
            Document::Scene(d) => serde_json::to_value(d),
            Document::LieAlgebra(d) => serde_json::to_value(d),
        }
        .expect("documents serialize");
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), self.kind().into());
        if let serde_json::Value::Object(m) = &mut v {
            obj.append(m);
        }
        serde_json::Value::Object(obj)
    }
}

/// Optional `checks` section of a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enabled: Option<Vec<Check>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<Check, f64>,
}

/// A parsed config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub document: Document,
    pub checks: CheckSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
        let obj = value.as_object_mut().ok_or_else(|| Error::Config("top level must be an object".into()))?;
        let kind = obj.remove("kind").ok_or_else(|| Error::Config("missing `kind`".into()))?;
        let checks = match obj.remove("checks") {
            Some(c) => serde_json::from_value(c).map_err(|e| Error::Config(format!("checks: {e}")))?,
            None => CheckSection::default(),
        };
        let document = match kind.as_str() {
            Some("scene") => {
                Document::Scene(serde_json::from_value(value).map_err(|e| Error::Config(format!("scene: {e}")))?)
            }
            Some("lie_algebra") => Document::LieAlgebra(
                serde_json::from_value(value).map_err(|e| Error::Config(format!("lie_algebra: {e}")))?,
            ),
            _ => return Err(Error::Config(format!("unknown kind {kind}"))),
        };
        Ok(ConfigFile { document, checks })
    }

    /// Pretty JSON, the form written by `export-example`.
    pub fn to_json(&self) -> String {
        let mut v = self.document.to_value();
        if self.checks != CheckSection::default() {
            v.as_object_mut()
                .expect("object")
                .insert("checks".into(), serde_json::to_value(&self.checks).expect("serializes"));
        }
        serde_json::to_string_pretty(&v).expect("serializes") + "\n"
    }
}

/// Hex SHA-256 of the subject's canonical form: expressions re-printed,
/// keys sorted, no whitespace, name left out.
pub fn digest(subject: &Subject) -> String {
    let mut v = subject.to_document().to_value();
    v.as_object_mut().expect("object").remove("name");
    let canonical = serde_json::to_string(&v).expect("serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub checks: Vec<Check>,
    /// One entry per axis, or a single entry for all axes.
    pub grid: Vec<usize>,
    pub tolerances: BTreeMap<Check, f64>,
    /// Explicit sample points replacing the grid.
    pub points: Option<Vec<Vec<f64>>>,
    /// Include the per-point table in JSON output.
    pub per_point: bool,
    /// Worker threads; 0 picks automatically.
    pub workers: usize,
}

impl CheckConfig {
    pub fn defaults_for(subject: &Subject) -> CheckConfig {
        CheckConfig {
            checks: subject.default_checks(),
            grid: vec![DEFAULT_GRID],
            tolerances: BTreeMap::new(),
            points: None,
            per_point: false,
            workers: 0,
        }
    }

    /// Applies a config file's `checks` section.
    pub fn with_section(mut self, s: &CheckSection) -> Result<CheckConfig> {
        if let Some(c) = &s.enabled {
            self.checks = c.clone();
        }
        if let Some(g) = &s.grid {
            self.grid = g.clone();
        }
        for (c, t) in &s.tolerances {
            self.set_tolerance(*c, *t)?;
        }
        Ok(self)
    }

    pub fn set_tolerance(&mut self, check: Check, value: f64) -> Result<()> {
        if value <= 0.0 || !value.is_finite() {
            return Err(Error::Config(format!("tolerance for {check} must be positive")));
        }
        self.tolerances.insert(check, value);
        Ok(())
    }

    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances.get(&check).copied().unwrap_or_else(|| check.default_tolerance())
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() || self.grid.iter().any(|&g| g < 2) {
            return Err(Error::Config("grid counts must be at least 2 per axis".into()));
        }
        Ok(())
    }
}

/// Parses a whitespace-separated points file; blank lines and `#` comments
/// are ignored.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| Error::Config(format!("line {}: bad number `{t}`", no + 1))))
            .collect::<Result<Vec<_>>>()?;
        out.push(p);
    }
    Ok(out)
}
