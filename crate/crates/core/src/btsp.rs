//! Exact bottleneck TSP paths over small vertex sets.
//!
//! All dynamic programs run over distance *ranks* rather than raw lengths: the bottleneck of a
//! path is a max over edge lengths, so only the order of the distinct lengths matters. Ranks
//! fit in a byte for up to 21 vertices, which keeps the `2^k * k` tables small, and comparing
//! ranks is exact.

use crate::error::{Error, Result};
use crate::geometry::Distances;

/// Largest visit set accepted by the exact solvers.
pub const MAX_VISIT: usize = 20;

/// An optimal bottleneck path that starts at a fixed vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckPath {
    /// Point indices, beginning with the start vertex.
    pub order: Vec<usize>,
    /// Longest consecutive-pair distance along `order`.
    pub bottleneck_value: f64,
}

/// An ordering of a star's children minimizing the longest child-to-child link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildOrder {
    pub order: Vec<usize>,
    /// Longest link between consecutive children; 0 for a single child.
    pub link_bottleneck: f64,
}

/// Local rank table: vertex 0..k are the (sorted) visit vertices, vertex k is the start.
struct RankTable {
    k: usize,
    rank: Vec<u8>,
    values: Vec<f64>,
}

impl RankTable {
    fn new<D: Distances>(ps: &D, start: Option<usize>, visit: &[usize]) -> Self {
        let k = visit.len();
        let m = k + usize::from(start.is_some());
        let global = |i: usize| if i < k { visit[i] } else { start.unwrap() };
        let mut raw = vec![0.0; m * m];
        let mut values = Vec::with_capacity(m * m / 2 + 1);
        values.push(0.0);
        for i in 0..m {
            for j in (i + 1)..m {
                let d = ps.dist(global(i), global(j));
                raw[i * m + j] = d;
                raw[j * m + i] = d;
                values.push(d);
            }
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        let rank = raw
            .iter()
            .map(|d| values.binary_search_by(|v| v.total_cmp(d)).expect("value present") as u8)
            .collect();
        RankTable { k: m, rank, values }
    }

    fn r(&self, i: usize, j: usize) -> u8 {
        self.rank[i * self.k + j]
    }
}

fn validate<D: Distances>(ps: &D, start: Option<usize>, visit: &[usize]) -> Result<Vec<usize>> {
    if visit.is_empty() {
        return Err(Error::InvalidInput("visit set must not be empty".into()));
    }
    if visit.len() > MAX_VISIT {
        return Err(Error::CapExceeded {
            what: "bottleneck path visit set",
            size: visit.len() as u128,
            cap: MAX_VISIT as u128,
            detail: "exact search is exponential in the number of visited vertices".into(),
        });
    }
    let mut sorted = visit.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("visit set contains duplicates".into()));
    }
    let n = ps.len();
    if let Some(&bad) = sorted.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidInput(format!("visit index {bad} out of range")));
    }
    if let Some(s) = start {
        if s >= n {
            return Err(Error::InvalidInput(format!("start index {s} out of range")));
        }
        if sorted.binary_search(&s).is_ok() {
            return Err(Error::InvalidInput("start vertex must not be in the visit set".into()));
        }
    }
    Ok(sorted)
}

/// `tail[mask * k + last]`: least achievable max-rank for finishing the visit of every vertex
/// outside `mask`, when standing at `last` (which is in `mask`).
fn completion_table(t: &RankTable, k: usize) -> Vec<u8> {
    let full = (1usize << k) - 1;
    let mut tail = vec![u8::MAX; (full + 1) * k];
    for last in 0..k {
        tail[full * k + last] = 0;
    }
    for mask in (1..full).rev() {
        for last in 0..k {
            if mask & (1 << last) == 0 {
                continue;
            }
            let mut best = u8::MAX;
            let mut rest = full & !mask;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let v = t.r(last, u).max(tail[(mask | 1 << u) * k + u]);
                best = best.min(v);
            }
            tail[mask * k + last] = best;
        }
    }
    tail
}

/// Greedy lexicographically smallest completion achieving `target`, starting after `first`.
fn reconstruct(t: &RankTable, tail: &[u8], k: usize, first: usize, target: u8) -> Vec<usize> {
    let full = (1usize << k) - 1;
    let mut order = vec![first];
    let mut mask = 1usize << first;
    let mut cur = first;
    while mask != full {
        let next = (0..k)
            .filter(|&u| mask & (1 << u) == 0)
            .find(|&u| t.r(cur, u).max(tail[(mask | 1 << u) * k + u]) <= target)
            .expect("an optimal continuation exists");
        order.push(next);
        mask |= 1 << next;
        cur = next;
    }
    order
}

/// Optimal bottleneck TSP path starting at `start` and visiting every vertex of `visit`.
///
/// The (start, first) edge counts toward the bottleneck. Among optimal orders the
/// lexicographically smallest sequence of point indices is returned.
pub fn btsp_path<D: Distances>(ps: &D, start: usize, visit: &[usize]) -> Result<BottleneckPath> {
    let sorted = validate(ps, Some(start), visit)?;
    let k = sorted.len();
    let t = RankTable::new(ps, Some(start), &sorted);
    let tail = completion_table(&t, k);
    let first_cost = |u: usize| t.r(k, u).max(tail[(1 << u) * k + u]);
    let target = (0..k).map(first_cost).min().expect("nonempty");
    let first = (0..k).find(|&u| first_cost(u) <= target).expect("optimum attained");
    let local = reconstruct(&t, &tail, k, first, target);
    let mut order = Vec::with_capacity(k + 1);
    order.push(start);
    order.extend(local.into_iter().map(|i| sorted[i]));
    Ok(BottleneckPath { order, bottleneck_value: t.values[target as usize] })
}

/// Orders `children` so that the longest link between consecutive children is minimal.
///
/// The edge from the star center to the first child is *not* part of this objective.
pub fn btsp_order_children<D: Distances>(ps: &D, children: &[usize]) -> Result<ChildOrder> {
    let sorted = validate(ps, None, children)?;
    let k = sorted.len();
    let t = RankTable::new(ps, None, &sorted);
    let tail = completion_table(&t, k);
    let target = (0..k).map(|u| tail[(1 << u) * k + u]).min().expect("nonempty");
    let first = (0..k).find(|&u| tail[(1 << u) * k + u] <= target).expect("optimum attained");
    let local = reconstruct(&t, &tail, k, first, target);
    Ok(ChildOrder {
        order: local.into_iter().map(|i| sorted[i]).collect(),
        link_bottleneck: t.values[target as usize],
    })
}

/// Bottleneck of the optimal path from `start` through every nonempty subset of `items`.
///
/// Entry `mask` (bit `i` selects `items[i]`) holds `b_start(subset)`; entry 0 is unused (0.0).
/// One forward pass covers all subsets, so partition searches can look up block values.
pub fn subset_bottlenecks<D: Distances>(ps: &D, start: usize, items: &[usize]) -> Result<Vec<f64>> {
    validate(ps, Some(start), items)?;
    let k = items.len();
    let t = RankTable::new(ps, Some(start), items);
    let size = 1usize << k;
    // reach[mask * k + last]: least max-rank of a path start -> ... -> last covering exactly mask
    let mut reach = vec![u8::MAX; size * k];
    for u in 0..k {
        reach[(1 << u) * k + u] = t.r(k, u);
    }
    let mut out = vec![0.0; size];
    for mask in 1..size {
        let mut best = u8::MAX;
        let mut bits = mask;
        while bits != 0 {
            let last = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let here = reach[mask * k + last];
            if here == u8::MAX {
                continue;
            }
            best = best.min(here);
            let mut rest = (size - 1) & !mask;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let slot = &mut reach[(mask | 1 << u) * k + u];
                *slot = (*slot).min(here.max(t.r(last, u)));
            }
        }
        out[mask] = t.values[best as usize];
    }
    Ok(out)
}

/// Longest consecutive-pair distance along `order`.
pub fn path_bottleneck<D: Distances>(ps: &D, order: &[usize]) -> f64 {
    order.windows(2).map(|w| ps.dist(w[0], w[1])).fold(0.0, f64::max)
}
