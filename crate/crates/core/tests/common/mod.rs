//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use dmbst::gadget::grid::{GridGraph, DIRECTIONS};
use dmbst::{Metric, Point3, PointSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn metric() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::Euclidean), Just(Metric::Rectilinear)]
}

pub fn coords(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(prop::array::uniform3(0.0..1.0f64), n)
}

/// Point set from raw coordinates; `None` on duplicates so callers can `prop_assume!`.
pub fn point_set(raw: &[[f64; 3]], metric: Metric) -> Option<PointSet> {
    PointSet::new(raw.iter().map(|&p| Point3::from(p)).collect(), metric).ok()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, metric: Metric) -> PointSet {
    let pts = (0..n).map(|_| Point3::new(rng.random(), rng.random(), rng.random())).collect();
    PointSet::new(pts, metric).expect("continuous samples are distinct")
}

/// Connected grid graph with maximum degree at most 3, grown one cell at a time.
pub fn random_grid(rng: &mut ChaCha8Rng, n: usize) -> GridGraph {
    let mut cells = vec![(0i64, 0i64)];
    let degree = |cells: &[(i64, i64)], v: (i64, i64)| {
        DIRECTIONS.iter().filter(|d| cells.contains(&(v.0 + d.0, v.1 + d.1))).count()
    };
    while cells.len() < n {
        let base = cells[rng.random_range(0..cells.len())];
        let d = DIRECTIONS[rng.random_range(0..4)];
        let v = (base.0 + d.0, base.1 + d.1);
        if cells.contains(&v) {
            continue;
        }
        let mut next = cells.clone();
        next.push(v);
        if next.iter().all(|&c| degree(&next, c) <= 3) {
            cells = next;
        }
    }
    GridGraph::new(cells).expect("grown cells form a valid grid graph")
}

/// Every ordering of `items` by Heap's algorithm.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut a = items.to_vec();
    let mut out = vec![a.clone()];
    let mut c = vec![0; a.len()];
    let mut i = 0;
    while i < a.len() {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// True when `p` is on the boundary of the convex hull of `pts` (brute-force supporting planes).
pub fn on_hull_boundary(p: Point3, pts: &[Point3], tol: f64) -> bool {
    let m = pts.len();
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                let n = (pts[b] - pts[a]).cross(&(pts[c] - pts[a]));
                let len = n.l2_norm();
                if len < 1e-12 {
                    continue;
                }
                let side = |q: Point3| n.dot(&(q - pts[a])) / len;
                let (lo, hi) = pts.iter().fold((0f64, 0f64), |(lo, hi), &q| (lo.min(side(q)), hi.max(side(q))));
                if (lo >= -tol || hi <= tol) && side(p).abs() <= tol {
                    return true;
                }
            }
        }
    }
    // no supporting plane through `p` only happens for interior points or flat sets
    coplanar(pts)
}

fn coplanar(pts: &[Point3]) -> bool {
    let m = pts.len();
    if m <= 3 {
        return true;
    }
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                let n = (pts[b] - pts[a]).cross(&(pts[c] - pts[a]));
                if n.l2_norm() < 1e-12 {
                    continue;
                }
                let nn = n.l2_norm();
                return pts.iter().all(|&q| (n.dot(&(q - pts[a])) / nn).abs() < 1e-12);
            }
        }
    }
    true
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
