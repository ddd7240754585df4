//! Bundled reference star configurations.

use serde::Serialize;

use super::{objective, ObjectiveKind, StarConfig, FIXTURE_SLACK};
use crate::error::{Error, Result};
use crate::geometry::{distance, Point3, PointSet};
use crate::io::{parse_fixture_json, parse_points_json, FixtureFile};

macro_rules! bundled {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../../fixtures/", $id, ".json")))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundled![
    "fig3-antipodal",
    "fig4-three",
    "fig4b-pyramid",
    "fig5-square-pyramid",
    "fig6-pentagonal-pyramid",
    "fig7-bipyramid",
    "table1-8pts",
    "table2-9pts",
    "table3-10pts",
    "table4-pkry-5-2",
    "table5-pkry-5-3",
    "table6-pkry-6-2",
    "table7-pkry-6-3",
    "table8-pkry-6-4",
    "table9-rect-8-6",
    "rect-13-octahedron",
    "rect-14-octahedron",
];

const FIGURE2: &str = include_str!("../../fixtures/points/fig2-equal-edges.json");

/// Identifiers of all bundled fixtures, in verification order.
pub fn fixture_ids() -> Vec<&'static str> {
    BUNDLED.iter().map(|(id, _)| *id).collect()
}

pub fn fixture(id: &str) -> Result<FixtureFile> {
    let (_, text) = BUNDLED.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::UnknownFixture(id.into()))?;
    parse_fixture_json(text)
}

/// Thirteen points whose MST has equal edges, a degree-4 node and collinear child pairs.
pub fn figure2_points() -> PointSet {
    parse_points_json(FIGURE2, None).expect("bundled point file is valid")
}

impl FixtureFile {
    pub fn kind(&self) -> Result<ObjectiveKind> {
        self.objective.parse()
    }

    pub fn config(&self) -> Result<StarConfig> {
        Ok(StarConfig {
            children: self.points.iter().map(|&p| Point3::from(p)).collect(),
            metric: self.metric,
            kind: self.kind()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureCheck {
    pub id: String,
    pub metric: String,
    pub objective: String,
    pub children: usize,
    pub recomputed: f64,
    pub paper_value: f64,
    pub tolerance: f64,
    pub max_radius_error: f64,
    pub min_separation: f64,
    /// Measured side lengths, when the fixture lists any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_lengths: Option<Vec<f64>>,
    pub pass: bool,
}

/// Recomputes the objective of a bundled fixture and compares it with its reference value.
pub fn verify_fixture(id: &str) -> Result<FixtureCheck> {
    verify_fixture_file(&fixture(id)?)
}

pub fn verify_fixture_file(f: &FixtureFile) -> Result<FixtureCheck> {
    let config = f.config()?;
    let recomputed = objective(&config)?;
    let max_radius_error = config.max_radius_error();
    let min_separation = config.min_separation();
    let mut pass = (recomputed - f.paper_value).abs() <= f.tolerance
        && max_radius_error <= FIXTURE_SLACK
        && min_separation >= 1.0 - FIXTURE_SLACK;
    let side_lengths = f.side_length.as_ref().map(|side| {
        let lengths: Vec<f64> = side
            .edges
            .iter()
            .map(|&[a, b]| distance(&config.children[a], &config.children[b], f.metric))
            .collect();
        pass &= lengths.iter().all(|l| (l - side.value).abs() <= side.tolerance);
        lengths
    });
    Ok(FixtureCheck {
        id: f.id.clone(),
        metric: f.metric.name().into(),
        objective: config.kind.to_string(),
        children: config.children.len(),
        recomputed,
        paper_value: f.paper_value,
        tolerance: f.tolerance,
        max_radius_error,
        min_separation,
        side_lengths,
        pass,
    })
}

pub fn verify_all() -> Result<Vec<FixtureCheck>> {
    fixture_ids().into_iter().map(verify_fixture).collect()
}
