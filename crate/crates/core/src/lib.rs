//! Degree-bounded minimum bottleneck spanning trees in 3-D Euclidean and rectilinear space.
//!
//! The crate covers the full workflow around the problem:
//!
//! - [`geometry`]: points, the L2 and L1 metrics, angles.
//! - [`spanning`]: Prim MSTs, rooted trees, stars.
//! - [`btsp`]: exact bottleneck TSP paths from a fixed start (bitmask DP).
//! - [`approx`]: the NKRY and PKRY edge-swap approximations and set-partition enumeration.
//! - [`oracle`]: exact solvers used as ground truth on small instances.
//! - [`starsearch`]: worst-case star objectives, a multistart search, and bundled reference
//!   configurations.
//! - [`gadget`]: grid-graph reduction instances and their distance-gap audits.
//! - [`io`]: JSON and CSV file formats.

pub mod approx;
pub mod btsp;
pub mod error;
pub mod gadget;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod spanning;
pub mod starsearch;

pub use error::{Error, Result};
pub use geometry::{angle_at, distance, DistanceTable, Distances, Metric, Point3, PointSet};
pub use spanning::{mst, Star, Tree};
