//! Numerical cross-checks of the exact forms on explicit maps.
//!
//! Four geometries are available: the circle and the Clifford torus on
//! periodic grids (Fourier differentiation, the full fourth-order operator),
//! and the 2-sphere inclusion and the Veronese surface (closed-form
//! polynomial derivatives with Gauss–Legendre × trapezoid quadrature, the
//! integrated second-order forms only).

// index loops mirror the tensor notation
#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod flat;
pub mod fourier;
pub mod identities;
pub mod sphere;
pub mod trig;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checks::{verify, Check, VerificationReport, VerifyOptions};
pub use flat::{DiscretizedSection, FlatCase, FlatGeometry};
pub use sphere::{SphereCase, SphereGeometry};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unsupported resolution: {0}")]
    Resolution(String),
    #[error("aliasing: band {band} on axis {axis} exceeds grid capacity {capacity}")]
    Aliasing { axis: usize, band: usize, capacity: usize },
    #[error("section constraint violated ({what}): residual {residual:e} at node {node}")]
    Constraint { what: String, residual: f64, node: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Exact(#[from] crate::error::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleTag {
    Normal,
    Tangent,
    Vertical,
    Mixed,
}

/// Any of the four explicit geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometryCase {
    CircleInclusion { n: u32 },
    TorusClifford,
    SphereInclusion { n: u32 },
    VeroneseSurface,
}

impl GeometryCase {
    pub fn slug(&self) -> String {
        match self {
            GeometryCase::CircleInclusion { n } => format!("circle-n{n}"),
            GeometryCase::TorusClifford => "torus".into(),
            GeometryCase::SphereInclusion { n } => format!("sphere-n{n}"),
            GeometryCase::VeroneseSurface => "veronese".into(),
        }
    }
}
