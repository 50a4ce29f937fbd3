//! Random geometric graph laboratory.
//!
//! Analytic limits for clique and chromatic numbers of random geometric
//! graphs, together with the sampling, exact graph algorithms and scan
//! statistics needed to compare them with simulations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod graphkit;
pub mod lab;
pub mod limits;
pub mod rgg;
pub mod scan;

pub use error::{Error, Result};
pub use geometry::{NormSpec, PackingInfo, PackingSource};
pub use graphkit::{ColouringMethod, ColouringResult, Graph};
pub use limits::{FunctionProfile, Intensity, RadialLevels, RegimeLabel};
pub use rgg::{DensityModel, GeometricGraph, PointCloud};
pub use scan::ScanResult;
