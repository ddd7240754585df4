//! Reduction gadgets from Hamiltonian path in grid graphs to the degree-bounded bottleneck
//! spanning tree problem.
//!
//! Every grid vertex keeps its position in the `z = 0` plane and receives a lateral pseudo node
//! towards a missing neighbour, an upper pseudo node, and (for degree bound 5) a lower pseudo
//! node. Offsets depend only on the host colour. The only distances below 1 are host to own
//! pseudo node, the only distances equal to 1 are grid edges, and every other distance is at
//! least the variant's gap threshold.

pub mod grid;

use serde::Serialize;

pub use grid::{fixed_polyominoes, Color, GridGraph, DIRECTIONS};

use crate::error::{Error, Result};
use crate::geometry::{Distances, Metric, Point3, PointSet};
use crate::oracle::{degree_bounded_tree_weight_within, degree_bounded_tree_within, hamiltonian_path_exists};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Euclidean5,
    Euclidean4,
    Rectilinear5,
    Rectilinear4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Euclidean5, Variant::Euclidean4, Variant::Rectilinear5, Variant::Rectilinear4];

    pub fn metric(self) -> Metric {
        match self {
            Variant::Euclidean5 | Variant::Euclidean4 => Metric::Euclidean,
            Variant::Rectilinear5 | Variant::Rectilinear4 => Metric::Rectilinear,
        }
    }

    /// Degree bound of the target problem.
    pub fn degree_bound(self) -> usize {
        match self {
            Variant::Euclidean5 | Variant::Rectilinear5 => 5,
            Variant::Euclidean4 | Variant::Rectilinear4 => 4,
        }
    }

    pub fn has_lower(self) -> bool {
        self.degree_bound() == 5
    }

    /// Largest grid graph for which [`equivalence_check`] stays within the oracle caps.
    pub fn max_equivalence_vertices(self) -> usize {
        if self.has_lower() {
            4
        } else {
            5
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Euclidean5 => "e5",
            Variant::Euclidean4 => "e4",
            Variant::Rectilinear5 => "r5",
            Variant::Rectilinear4 => "r4",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.short_name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parameter(format!("unknown gadget variant `{s}` (expected e5, e4, r5 or r4)")))
    }
}

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Euclidean offsets tuned so the smallest gap distance is about 1.0009.
    Cor35,
    /// Rectilinear offsets 2/5, 1/5, 4/5, 1 - 0.01.
    Thm36,
    /// Interior Euclidean offsets for Euclidean variants, `Thm36` for rectilinear ones.
    Default,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cor35" => Ok(Preset::Cor35),
            "thm36" => Ok(Preset::Thm36),
            "default" => Ok(Preset::Default),
            _ => Err(Error::Parameter(format!("unknown preset `{s}` (expected cor35, thm36 or default)"))),
        }
    }
}

/// Pseudo-node offsets. Lateral offsets are `eps_black`/`eps_white`, vertical offsets
/// `eps_up_black`/`eps_up_white`; `delta_gap` is the rectilinear slack and 0 for Euclidean variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GadgetParams {
    pub eps_black: f64,
    pub eps_white: f64,
    pub eps_up_black: f64,
    pub eps_up_white: f64,
    pub delta_gap: f64,
    pub variant: Variant,
}

pub const COR35_EPS: f64 = 0.292249;
pub const RECT_MAX_DELTA_GAP: f64 = 0.01;

impl GadgetParams {
    pub fn euclidean(variant: Variant, eps_black: f64, eps_white: f64, eps_up_black: f64, eps_up_white: f64) -> Result<Self> {
        let p = GadgetParams { eps_black, eps_white, eps_up_black, eps_up_white, delta_gap: 0.0, variant };
        p.validate()?;
        Ok(p)
    }

    pub fn rectilinear(variant: Variant, delta_gap: f64) -> Result<Self> {
        let p = GadgetParams {
            eps_black: 0.4,
            eps_white: 0.2,
            eps_up_black: 0.8,
            eps_up_white: 1.0 - delta_gap,
            delta_gap,
            variant,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn preset(variant: Variant, preset: Preset) -> Result<Self> {
        match (variant.metric(), preset) {
            (Metric::Euclidean, Preset::Cor35) => {
                let e = COR35_EPS;
                GadgetParams::euclidean(variant, e, e / 2.0, (2.0 - e * e) / 2.0, 0.9999999)
            }
            (Metric::Euclidean, Preset::Default) => GadgetParams::euclidean(variant, 0.29, 0.145, 0.958, 0.99),
            (Metric::Rectilinear, Preset::Thm36 | Preset::Default) => {
                GadgetParams::rectilinear(variant, RECT_MAX_DELTA_GAP)
            }
            (metric, preset) => Err(Error::Parameter(format!(
                "preset {preset:?} does not apply to the {metric} variant {}",
                variant.short_name()
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        let vals = [self.eps_black, self.eps_white, self.eps_up_black, self.eps_up_white, self.delta_gap];
        if vals.iter().any(|v| !v.is_finite()) {
            return bad("gadget parameters must be finite".into());
        }
        match self.variant.metric() {
            Metric::Euclidean => {
                let (e, d, eu, du) = (self.eps_black, self.eps_white, self.eps_up_black, self.eps_up_white);
                let lateral_max = (2.0 - 2f64.sqrt()) / 2.0;
                if !(0.0 < d && d < e && e < lateral_max) {
                    return bad(format!("need 0 < eps_white < eps_black < {lateral_max:.6}, got {d} and {e}"));
                }
                if !((1.0 - e * e).sqrt() < eu && eu < 1.0) {
                    return bad(format!("eps_up_black {eu} must lie in (sqrt(1 - eps_black^2), 1)"));
                }
                if !((1.0 - d * d).sqrt() < du && du < 1.0) {
                    return bad(format!("eps_up_white {du} must lie in (sqrt(1 - eps_white^2), 1)"));
                }
                if du <= eu {
                    return bad(format!("eps_up_white {du} must exceed eps_up_black {eu}"));
                }
                let floor = (2f64.sqrt() - 0.5).sqrt();
                if eu <= floor || du <= floor {
                    return bad(format!("vertical offsets must exceed {floor:.6}"));
                }
                if self.delta_gap != 0.0 {
                    return bad("delta_gap applies to rectilinear variants only".into());
                }
            }
            Metric::Rectilinear => {
                let g = self.delta_gap;
                if !(0.0 < g && g <= RECT_MAX_DELTA_GAP) {
                    return bad(format!("delta_gap {g} must lie in (0, {RECT_MAX_DELTA_GAP}]"));
                }
                if self.eps_black != 0.4
                    || self.eps_white != 0.2
                    || self.eps_up_black != 0.8
                    || self.eps_up_white != 1.0 - g
                {
                    return bad("rectilinear offsets are fixed at 2/5, 1/5, 4/5 and 1 - delta_gap".into());
                }
            }
        }
        Ok(())
    }

    pub fn lateral(&self, c: Color) -> f64 {
        match c {
            Color::Black => self.eps_black,
            Color::White => self.eps_white,
        }
    }

    pub fn vertical(&self, c: Color) -> f64 {
        match c {
            Color::Black => self.eps_up_black,
            Color::White => self.eps_up_white,
        }
    }

    /// Closed-form lower bounds on every distance class outside host-pseudo pairs and grid edges.
    pub fn closed_form_bounds(&self) -> Vec<(&'static str, f64)> {
        let (e, d, eu, du) = (self.eps_black, self.eps_white, self.eps_up_black, self.eps_up_white);
        match self.variant.metric() {
            Metric::Euclidean => vec![
                ("lateral-black/lateral-black", 2f64.sqrt() * (1.0 - e)),
                ("lateral-white/lateral-white", 2f64.sqrt() * (1.0 - d)),
                ("lateral-black/lateral-white", ((e - d).powi(2) + 1.0).sqrt()),
                ("lateral-white/host-black", (1.0 + d * d).sqrt()),
                ("lateral-black/vertical-black", (eu * eu + e * e).sqrt()),
                ("lateral-white/vertical-white", (du * du + d * d).sqrt()),
                ("vertical-black/vertical-white", ((du - eu).powi(2) + 1.0).sqrt()),
            ],
            Metric::Rectilinear => vec![
                ("lateral-black/lateral-black", 2.0 * (1.0 - e)),
                ("lateral-white/lateral-white", 2.0 * (1.0 - d)),
                ("lateral-black/lateral-white", (e - d) + 1.0),
                ("lateral-white/host-black", 1.0 + d),
                ("lateral-black/vertical-black", eu + e),
                ("lateral-white/vertical-white", du + d),
                ("vertical-black/vertical-white", (du - eu) + 1.0),
            ],
        }
    }

    /// Smallest closed-form bound: no inter-point distance lies in `(1, gap_threshold)`.
    pub fn gap_threshold(&self) -> f64 {
        self.closed_form_bounds().into_iter().map(|(_, v)| v).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Host,
    Lateral,
    Upper,
    Lower,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Host => "host",
            Role::Lateral => "lateral",
            Role::Upper => "upper",
            Role::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointTag {
    pub role: Role,
    /// Index of the grid vertex this point belongs to.
    pub host: usize,
    pub color: Color,
}

impl PointTag {
    fn label(&self) -> String {
        let color = match self.color {
            Color::Black => "black",
            Color::White => "white",
        };
        format!("{}-{color}", self.role.name())
    }
}

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub source: GridGraph,
    pub points: PointSet,
    pub params: GadgetParams,
    /// One tag per point; the first `source.len()` points are the hosts in grid order.
    pub tags: Vec<PointTag>,
}

impl GadgetInstance {
    pub fn count(&self, role: Role, color: Color) -> usize {
        self.tags.iter().filter(|t| t.role == role && t.color == color).count()
    }

    /// Total length of the tree formed by a Hamiltonian path of the grid plus every host-pseudo edge.
    pub fn weight_bound(&self) -> f64 {
        let p = &self.params;
        let n = self.source.len() as f64;
        let vertical = (self.count(Role::Upper, Color::Black) + self.count(Role::Lower, Color::Black)) as f64;
        let vertical_white = (self.count(Role::Upper, Color::White) + self.count(Role::Lower, Color::White)) as f64;
        (n - 1.0)
            + p.eps_black * self.count(Role::Lateral, Color::Black) as f64
            + p.eps_white * self.count(Role::Lateral, Color::White) as f64
            + p.eps_up_black * vertical
            + p.eps_up_white * vertical_white
    }
}

pub fn build_gadget(g: &GridGraph, p: &GadgetParams) -> Result<GadgetInstance> {
    p.validate()?;
    if let Some(i) = (0..g.len()).find(|&i| g.degree(i) > 3) {
        return Err(Error::InvalidInput(format!(
            "grid vertex {:?} has degree 4; the construction needs maximum degree 3",
            g.vertex(i)
        )));
    }
    let n = g.len();
    let mut points = Vec::with_capacity(n * 4);
    let mut tags = Vec::with_capacity(n * 4);
    for i in 0..n {
        let (x, y) = g.vertex(i);
        points.push(Point3::new(x as f64, y as f64, 0.0));
        tags.push(PointTag { role: Role::Host, host: i, color: g.color(i) });
    }
    for i in 0..n {
        let (x, y) = g.vertex(i);
        let color = g.color(i);
        let (dx, dy) = g.missing_direction(i).expect("degree at most 3");
        let e = p.lateral(color);
        points.push(Point3::new(x as f64 + e * dx as f64, y as f64 + e * dy as f64, 0.0));
        tags.push(PointTag { role: Role::Lateral, host: i, color });
        let up = p.vertical(color);
        points.push(Point3::new(x as f64, y as f64, up));
        tags.push(PointTag { role: Role::Upper, host: i, color });
        if p.variant.has_lower() {
            points.push(Point3::new(x as f64, y as f64, -up));
            tags.push(PointTag { role: Role::Lower, host: i, color });
        }
    }
    let points = PointSet::new(points, p.variant.metric())?;
    Ok(GadgetInstance { source: g.clone(), points, params: *p, tags })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMinimum {
    pub class: String,
    pub pairs: usize,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    /// Closed-form threshold for the parameters.
    pub threshold: f64,
    /// Smallest distance outside host-pseudo pairs and grid edges; `None` when no such pair exists.
    pub min_gap: Option<f64>,
    /// Largest host to own pseudo node distance.
    pub host_pseudo_max: Option<f64>,
    pub unit_edges: usize,
    pub classes: Vec<ClassMinimum>,
}

/// Tolerance for floating-point comparisons against 1 and the threshold.
const AUDIT_TOL: f64 = 1e-12;

/// Classifies every pairwise distance and fails if any falls into the forbidden interval.
pub fn audit_gaps(gi: &GadgetInstance) -> Result<GapReport> {
    let threshold = gi.params.gap_threshold();
    let n = gi.points.len();
    let mut host_pseudo_max: Option<f64> = None;
    let mut unit_edges = 0;
    let mut classes: std::collections::BTreeMap<String, (usize, f64)> = Default::default();
    let mut min_gap: Option<f64> = None;
    let fail = |i: usize, j: usize, d: f64, what: &str| {
        Err(Error::Audit(format!(
            "points {i} ({}) and {j} ({}) at distance {d}: {what}",
            gi.tags[i].label(),
            gi.tags[j].label()
        )))
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (gi.tags[i], gi.tags[j]);
            let d = gi.points.dist(i, j);
            let own_pseudo = a.host == b.host && (a.role == Role::Host) != (b.role == Role::Host);
            if own_pseudo {
                if d >= 1.0 {
                    return fail(i, j, d, "host to own pseudo node is not below 1");
                }
                host_pseudo_max = Some(host_pseudo_max.map_or(d, |m| m.max(d)));
                continue;
            }
            let grid_edge = a.role == Role::Host && b.role == Role::Host && {
                let (p, q) = (gi.source.vertex(a.host), gi.source.vertex(b.host));
                (p.0 - q.0).abs() + (p.1 - q.1).abs() == 1
            };
            if grid_edge {
                if (d - 1.0).abs() > AUDIT_TOL {
                    return fail(i, j, d, "grid edge is not of unit length");
                }
                unit_edges += 1;
                continue;
            }
            if d < threshold - AUDIT_TOL {
                return fail(i, j, d, &format!("distance below the gap threshold {threshold}"));
            }
            min_gap = Some(min_gap.map_or(d, |m| m.min(d)));
            let (la, lb) = (a.label(), b.label());
            let key = if la <= lb { format!("{la}/{lb}") } else { format!("{lb}/{la}") };
            let entry = classes.entry(key).or_insert((0, f64::INFINITY));
            entry.0 += 1;
            entry.1 = entry.1.min(d);
        }
    }
    Ok(GapReport {
        threshold,
        min_gap,
        host_pseudo_max,
        unit_edges,
        classes: classes.into_iter().map(|(class, (pairs, min))| ClassMinimum { class, pairs, min }).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub variant: Variant,
    pub grid_vertices: usize,
    pub hamiltonian_path: bool,
    /// A degree-bounded spanning tree with bottleneck at most 1 exists.
    pub bottleneck_feasible: bool,
    /// A degree-bounded spanning tree with total length at most `weight_bound` exists.
    pub weight_feasible: bool,
    pub weight_bound: f64,
    /// Total length of the bottleneck witness tree, when one exists.
    pub witness_weight: Option<f64>,
    pub agree: bool,
}

/// Tolerance used when comparing tree weights to the closed-form bound.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Runs both sides of the reduction on a small grid graph.
pub fn equivalence_check(g: &GridGraph, p: &GadgetParams) -> Result<EquivalenceReport> {
    let cap = p.variant.max_equivalence_vertices();
    if g.len() > cap {
        return Err(Error::CapExceeded {
            what: "gadget equivalence check",
            size: g.len() as u128,
            cap: cap as u128,
            detail: format!("variant {} supports at most {cap} grid vertices", p.variant.short_name()),
        });
    }
    let gi = build_gadget(g, p)?;
    let delta = p.variant.degree_bound();
    let hamiltonian_path = hamiltonian_path_exists(g)?.is_some();
    let (witness, _) = degree_bounded_tree_within(&gi.points, delta, 1.0)?;
    let witness_weight = witness.as_ref().map(|edges| edges.iter().map(|&(a, b)| gi.points.dist(a, b)).sum());
    let weight_bound = gi.weight_bound();
    let weight_feasible = degree_bounded_tree_weight_within(&gi.points, delta, weight_bound + WEIGHT_TOL)?.is_some();
    let bottleneck_feasible = witness.is_some();
    Ok(EquivalenceReport {
        variant: p.variant,
        grid_vertices: g.len(),
        hamiltonian_path,
        bottleneck_feasible,
        weight_feasible,
        weight_bound,
        witness_weight,
        agree: hamiltonian_path == bottleneck_feasible && hamiltonian_path == weight_feasible,
    })
}
