//! Data depth for unparameterized curves.
//!
//! A curve is scored by averaging a point-wise halfspace depth over points drawn
//! from its arc-length measure, against the pooled arc-length measures of a
//! reference sample. Exact point-depth kernels exist for dimensions 1 to 3, a
//! random-directions approximation for any dimension.
//!
//! Around the estimator sit a discrete Frechet distance, rigid registration,
//! depth-based clustering, DD-plots, a rank test, outlier partitioning,
//! closed-form reference values and simulation schemes.

pub mod analysis;
pub mod clustering;
pub mod curve;
pub mod depth;
pub mod distance;
pub mod error;
pub mod generators;
pub mod io;
pub mod oracles;
pub mod point_depth;
pub mod registration;
pub mod rng;
pub mod sampling;
pub mod svg;

pub use curve::Curve;
pub use depth::{curve_depth, curve_depth_against, depth_all, depth_all_with, DepthReport};
pub use distance::{curve_distance, curve_distance_matrix, curve_distance_with, DistanceOptions};
pub use error::{Error, Result};
pub use point_depth::{DepthConfig, Method};
pub use sampling::{build_reference, sample_on_curve, PointSample, ReferenceMeasure};
