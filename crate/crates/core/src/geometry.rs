//! Points, metrics and distances in 3-D Euclidean (L2) and rectilinear (L1) space.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest point count for which a full distance table may be precomputed.
pub const MAX_TABLE_POINTS: usize = 4096;

/// Maximum vertex degree of any Euclidean MST in three dimensions (kissing number of the ball).
pub const EUCLIDEAN_MST_MAX_DEGREE: usize = 12;

/// Bounds on the smallest degree cap that always admits an MST in rectilinear 3-space.
pub const RECTILINEAR_MIN_DEGREE_BOUNDS: (usize, usize) = (13, 14);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    /// Norm of the vector under the given metric.
    pub fn norm(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Euclidean => self.l2_norm(),
            Metric::Rectilinear => self.l1_norm(),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Rectilinear,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Rectilinear => "rectilinear",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "e" | "l2" => Ok(Metric::Euclidean),
            "rectilinear" | "r" | "l1" | "manhattan" => Ok(Metric::Rectilinear),
            other => Err(Error::InvalidInput(format!("unknown metric `{other}`"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn distance(a: &Point3, b: &Point3, metric: Metric) -> f64 {
    (*a - *b).norm(metric)
}

/// Euclidean angle ABC at vertex `b`, in degrees.
///
/// The angle is always measured in L2 geometry, whatever metric the surrounding point set uses.
pub fn angle_at(b: &Point3, a: &Point3, c: &Point3) -> Result<f64> {
    if a == b || c == b {
        return Err(Error::Degenerate(format!(
            "angle at {b} is undefined when an arm has zero length"
        )));
    }
    let u = *a - *b;
    let v = *c - *b;
    // atan2 of |u x v| and u.v is accurate near 0 and 180 degrees, unlike acos.
    let angle = u.cross(&v).l2_norm().atan2(u.dot(&v));
    Ok(angle.to_degrees())
}

/// Anything that can report pairwise distances between indexed points.
pub trait Distances {
    fn len(&self) -> usize;

    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ordered, duplicate-free collection of points under a single metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point3>,
    metric: Metric,
}

impl PointSet {
    /// Validates that the set is nonempty, finite and has no coincident points.
    pub fn new(points: Vec<Point3>, metric: Metric) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set must contain at least one point".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} has a non-finite coordinate")));
        }
        // exact equality, sorted by bit pattern to stay O(n log n)
        let mut keyed: Vec<(u64, u64, u64, usize)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (canon_bits(p.x), canon_bits(p.y), canon_bits(p.z), i))
            .collect();
        keyed.sort_unstable();
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 && w[0].2 == w[1].2 {
                return Err(Error::InvalidInput(format!(
                    "points {} and {} coincide",
                    w[0].3.min(w[1].3),
                    w[0].3.max(w[1].3)
                )));
            }
        }
        Ok(PointSet { points, metric })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point3 {
        self.points[i]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Same coordinates, different metric.
    pub fn with_metric(&self, metric: Metric) -> PointSet {
        PointSet { points: self.points.clone(), metric }
    }

    pub fn distance_table(&self) -> Result<DistanceTable> {
        DistanceTable::new(self)
    }
}

// -0.0 and 0.0 are the same coordinate
fn canon_bits(v: f64) -> u64 {
    if v == 0.0 {
        0
    } else {
        v.to_bits()
    }
}

impl Distances for PointSet {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        distance(&self.points[i], &self.points[j], self.metric)
    }
}

/// Precomputed symmetric n x n distance table.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    d: Vec<f64>,
}

impl DistanceTable {
    pub fn new(ps: &PointSet) -> Result<Self> {
        let n = ps.len();
        if n > MAX_TABLE_POINTS {
            return Err(Error::CapExceeded {
                what: "distance table",
                size: n as u128,
                cap: MAX_TABLE_POINTS as u128,
                detail: "n x n table would be too large; use on-demand distances".into(),
            });
        }
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = ps.dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Ok(DistanceTable { n, d })
    }
}

impl Distances for DistanceTable {
    fn len(&self) -> usize {
        self.n
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

impl<D: Distances + ?Sized> Distances for &D {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        (**self).dist(i, j)
    }
}
