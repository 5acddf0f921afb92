//! Chart-level Riemannian geometry.

mod field;
pub mod metric;
pub mod scene;

pub(crate) use field::first_order;
pub use field::{eval_field, FieldSelector, PointEvaluation};
pub use metric::{
    christoffels, covariant_derivative, metric_inverse, riemann, riemann_tensor, volume_density, Christoffels,
    IndexKind, VolumeDensity,
};
pub use scene::{DomainDocument, SampleDomain, Scene, SceneDocument};
