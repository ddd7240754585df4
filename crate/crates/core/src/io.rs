//! File formats: point sets (JSON and CSV), grid graphs, star fixtures, and numeric rounding for
//! reproducible output.
//!
//! Point JSON is `{"metric": "euclidean", "points": [[x, y, z], ...]}` with `metric` optional.
//! Point CSV has one `x,y,z` row per point and an optional header row.
//! Grid JSON is `{"vertices": [[x, y], ...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gadget::GridGraph;
use crate::geometry::{Metric, Point3, PointSet};

/// Significant digits kept by [`round_json`].
pub const OUTPUT_SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    pub points: Vec<[f64; 3]>,
}

impl PointFile {
    pub fn from_set(ps: &PointSet) -> Self {
        PointFile { metric: Some(ps.metric()), points: ps.points().iter().map(|p| p.to_array()).collect() }
    }

    /// Builds the point set; `metric` overrides the file's metric, which defaults to Euclidean.
    pub fn into_set(self, metric: Option<Metric>) -> Result<PointSet> {
        let m = metric.or(self.metric).unwrap_or(Metric::Euclidean);
        PointSet::new(self.points.into_iter().map(Point3::from).collect(), m)
    }
}

pub fn parse_points_json(text: &str, metric: Option<Metric>) -> Result<PointSet> {
    serde_json::from_str::<PointFile>(text)?.into_set(metric)
}

pub fn parse_points_csv(text: &str, metric: Metric) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "CSV row {} has {} fields, expected 3",
                row + 1,
                record.len()
            )));
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => points.push(Point3::new(v[0], v[1], v[2])),
            Err(_) if row == 0 => continue,
            Err(e) => return Err(Error::InvalidInput(format!("CSV row {}: {e}", row + 1))),
        }
    }
    PointSet::new(points, metric)
}

/// Chooses the parser from the file extension: `.csv` is CSV, anything else JSON.
pub fn parse_points(path: &str, text: &str, metric: Option<Metric>) -> Result<PointSet> {
    if path.to_ascii_lowercase().ends_with(".csv") {
        parse_points_csv(text, metric.unwrap_or(Metric::Euclidean))
    } else {
        parse_points_json(text, metric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub vertices: Vec<[i64; 2]>,
}

pub fn parse_grid_json(text: &str) -> Result<GridGraph> {
    let file: GridFile = serde_json::from_str(text)?;
    GridGraph::new(file.vertices.into_iter().map(|[x, y]| (x, y)).collect())
}

pub fn grid_to_json(g: &GridGraph) -> GridFile {
    GridFile { vertices: g.vertices().iter().map(|&(x, y)| [x, y]).collect() }
}

/// A star configuration with a reference value: children around a center at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub id: String,
    pub metric: Metric,
    /// `nkry` or `pkry:<k>`.
    pub objective: String,
    pub points: Vec<[f64; 3]>,
    pub paper_value: f64,
    pub paper_ref: String,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_length: Option<SideCheck>,
}

/// Child pairs expected to share a common distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideCheck {
    /// Zero-based child index pairs.
    pub edges: Vec<[usize; 2]>,
    pub value: f64,
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-3
}

pub fn parse_fixture_json(text: &str) -> Result<FixtureFile> {
    let f: FixtureFile = serde_json::from_str(text)?;
    if f.points.is_empty() {
        return Err(Error::InvalidInput(format!("fixture `{}` has no points", f.id)));
    }
    if !f.paper_value.is_finite() || !(f.tolerance.is_finite() && f.tolerance > 0.0) {
        return Err(Error::InvalidInput(format!("fixture `{}` has an invalid value or tolerance", f.id)));
    }
    if let Some(side) = &f.side_length {
        if side.edges.iter().flatten().any(|&i| i >= f.points.len()) {
            return Err(Error::InvalidInput(format!("fixture `{}` side check index out of range", f.id)));
        }
    }
    Ok(f)
}

/// Rounds `x` to `digits` significant digits (non-finite values pass through).
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Rounds every floating-point number in a JSON tree to [`OUTPUT_SIG_DIGITS`] significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x, OUTPUT_SIG_DIGITS)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes with rounded numbers and pretty printing, ending in a newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_points() {
        let ps = parse_points_json(r#"{"metric":"rectilinear","points":[[0,0,0],[1,2,3]]}"#, None).unwrap();
        assert_eq!(ps.metric(), Metric::Rectilinear);
        assert_eq!(ps.point(1), Point3::new(1.0, 2.0, 3.0));
        let e = parse_points_json(r#"{"points":[[0,0,0]]}"#, None).unwrap();
        assert_eq!(e.metric(), Metric::Euclidean);
        let o = parse_points_json(r#"{"metric":"rectilinear","points":[[0,0,0]]}"#, Some(Metric::Euclidean)).unwrap();
        assert_eq!(o.metric(), Metric::Euclidean);
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            r#"{"points":[]}"#,
            r#"{"points":[[0,0]]}"#,
            r#"{"points":[[0,0,0],[0,0,0]]}"#,
            r#"{"points":[[0,0,1e400]]}"#,
            r#"{"metric":"chebyshev","points":[[0,0,0]]}"#,
            r#"{"points":[[0,0,0]],"extra":1}"#,
            "",
        ] {
            assert!(parse_points_json(bad, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_points() {
        let ps = parse_points_csv("x,y,z\n0,0,0\n 1, 0.5 ,2\n# comment\n", Metric::Euclidean).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(parse_points_csv("0,0\n", Metric::Euclidean).is_err());
        assert!(parse_points_csv("0,0,0\n1,a,0\n", Metric::Euclidean).is_err());
        assert!(parse_points_csv("0,0,0\n1,inf,0\n", Metric::Euclidean).is_err());
        assert!(parse_points_csv("", Metric::Euclidean).is_err());
    }

    #[test]
    fn grid_json() {
        let g = parse_grid_json(r#"{"vertices":[[0,0],[1,0],[1,1]]}"#).unwrap();
        assert_eq!(g.len(), 3);
        assert!(parse_grid_json(r#"{"vertices":[[0,0],[2,0]]}"#).is_err());
        assert!(parse_grid_json(r#"{"vertices":[[0,0],[9223372036854775807,0]]}"#).is_err());
        assert_eq!(grid_to_json(&g).vertices, vec![[0, 0], [1, 0], [1, 1]]);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0, 12), 0.333333333333);
        assert_eq!(round_sig(2f64.sqrt() * 1e10, 3), 1.41e10);
        assert_eq!(round_sig(0.0, 12), 0.0);
        let mut v = serde_json::json!({"a": [0.1 + 0.2, 3], "b": {"c": 1.0000000000001}});
        round_json(&mut v);
        assert_eq!(v, serde_json::json!({"a": [0.3, 3], "b": {"c": 1.0}}));
    }
}
