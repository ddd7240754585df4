use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// Unit steps in the order used to pick a lateral pseudo-node direction.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Finite connected vertex-induced subgraph of the integer lattice.
///
/// Two vertices are adjacent exactly when they are at unit distance. Black vertices are those
/// with even `x + y`, which is a proper 2-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    vertices: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), usize>,
}

impl GridGraph {
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("grid graph needs at least one vertex".into()));
        }
        // keep coordinates small enough that offsets and distances stay exact
        const LIMIT: i64 = 1 << 40;
        if vertices.iter().any(|&(x, y)| x.abs() > LIMIT || y.abs() > LIMIT) {
            return Err(Error::InvalidInput(format!("grid coordinates must lie within +-{LIMIT}")));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate grid vertex {v:?}")));
            }
        }
        let g = GridGraph { vertices, index };
        if !g.is_connected() {
            return Err(Error::InvalidInput("grid graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> (i64, i64) {
        self.vertices[i]
    }

    pub fn index_of(&self, v: (i64, i64)) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let (x, y) = self.vertices[i];
        DIRECTIONS.iter().filter_map(|&(dx, dy)| self.index_of((x + dx, y + dy))).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn color(&self, i: usize) -> Color {
        let (x, y) = self.vertices[i];
        if (x + y).rem_euclid(2) == 0 {
            Color::Black
        } else {
            Color::White
        }
    }

    /// Edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// First direction, in `DIRECTIONS` order, that does not lead to a grid neighbour.
    pub fn missing_direction(&self, i: usize) -> Option<(i64, i64)> {
        let (x, y) = self.vertices[i];
        DIRECTIONS.iter().copied().find(|&(dx, dy)| self.index_of((x + dx, y + dy)).is_none())
    }

    /// Translate so the minimum coordinates are zero and sort the vertices.
    pub fn normalized(&self) -> GridGraph {
        let mx = self.vertices.iter().map(|v| v.0).min().unwrap_or(0);
        let my = self.vertices.iter().map(|v| v.1).min().unwrap_or(0);
        let mut vs: Vec<(i64, i64)> = self.vertices.iter().map(|&(x, y)| (x - mx, y - my)).collect();
        vs.sort_unstable();
        GridGraph::new(vs).expect("translation preserves validity")
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.len()
    }
}

/// Every connected grid graph with `n` vertices, up to translation (fixed polyominoes).
///
/// Each graph is normalized; the output is sorted by vertex list.
pub fn fixed_polyominoes(n: usize) -> Vec<GridGraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<Vec<(i64, i64)>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for cells in &level {
            for &(x, y) in cells {
                for (dx, dy) in DIRECTIONS {
                    let c = (x + dx, y + dy);
                    if cells.contains(&c) {
                        continue;
                    }
                    let mut grown = cells.clone();
                    grown.push(c);
                    let mx = grown.iter().map(|v| v.0).min().unwrap_or(0);
                    let my = grown.iter().map(|v| v.1).min().unwrap_or(0);
                    let mut norm: Vec<(i64, i64)> = grown.iter().map(|&(a, b)| (a - mx, b - my)).collect();
                    norm.sort_unstable();
                    next.insert(norm);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|vs| GridGraph::new(vs).expect("grown cells are connected")).collect()
}
