//! Perturbation series of Riemannian invariants for metrics `g = ḡ + εg̿`.

pub mod appendix;
pub mod connes;
pub mod expr;
pub mod functional;
pub mod geometry;
pub mod jets;
pub mod matrix;
pub mod operators;
pub mod oracle;
pub mod report;
pub mod scene;
pub mod series;
pub mod verify;
