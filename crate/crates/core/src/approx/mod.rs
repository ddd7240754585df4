//! Edge-swap approximations for the degree-bounded bottleneck spanning tree problem.
//!
//! Both algorithms start from a rooted MST and walk it from the root down. At every node whose
//! child count reaches `delta - 1`, the root-child edges are replaced by short paths through the
//! children: a single path for [`nkry`], or one path per block of the best `k`-block partition
//! for [`pkry`]. Edges placed at a node are never revisited, so the local choices compose.

pub mod partition;

use serde::Serialize;

use crate::btsp::{btsp_order_children, btsp_path, subset_bottlenecks};
use crate::error::{Error, Result};
use crate::geometry::Distances;
use crate::spanning::{mst, Tree};

pub use partition::{check_partition_cap, partitions_into_k, stirling2, Partition, Partitions, MAX_PARTITIONS};

/// Edges swapped in at one node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapRecord {
    pub root: usize,
    /// Child-to-child edges that replaced root-child edges.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub tree: Tree,
    pub bottleneck_value: f64,
    /// `bottleneck_value / bottleneck(mst)`; 1 for a single point.
    pub ratio_vs_mst: f64,
    pub mst_bottleneck: f64,
    pub swap_log: Vec<SwapRecord>,
}

/// Objective used by [`nkry`] to order the children of a swapping node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildOrdering {
    /// Minimize the longest child-to-child link only.
    #[default]
    LinksOnly,
    /// Minimize over the whole path, including the edge from the node to its first child.
    IncludeRootEdge,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NkryOptions {
    pub ordering: ChildOrdering,
}

fn check_common<D: Distances>(ps: &D, delta: usize, root: usize) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::InvalidInput("point set is empty".into()));
    }
    if delta < 3 {
        return Err(Error::Parameter(format!(
            "degree bound {delta} is below 3; edge swaps cannot guarantee degree 2"
        )));
    }
    if root >= ps.len() {
        return Err(Error::InvalidInput(format!("root {root} out of range for {} points", ps.len())));
    }
    Ok(())
}

fn rooted_mst<D: Distances>(ps: &D, root: usize) -> Result<Tree> {
    mst(ps)?.reroot(root)
}

fn finish<D: Distances>(
    ps: &D,
    root: usize,
    mst_tree: &Tree,
    edges: Vec<(usize, usize)>,
    swap_log: Vec<SwapRecord>,
    delta: usize,
) -> Result<ApproxResult> {
    let tree = Tree::from_edges(root, &edges, ps)?;
    debug_assert!(tree.max_degree() <= delta, "degree bound violated");
    let (bottleneck_value, mst_bottleneck, ratio_vs_mst) = if ps.len() < 2 {
        (0.0, 0.0, 1.0)
    } else {
        let b = tree.bottleneck()?;
        let m = mst_tree.bottleneck()?;
        (b, m, b / m)
    };
    Ok(ApproxResult { tree, bottleneck_value, ratio_vs_mst, mst_bottleneck, swap_log })
}

/// Naive generalisation of the KRY edge swap with degree bound `delta`.
pub fn nkry<D: Distances>(ps: &D, delta: usize, root: usize) -> Result<ApproxResult> {
    nkry_with(ps, delta, root, NkryOptions::default())
}

pub fn nkry_with<D: Distances>(ps: &D, delta: usize, root: usize, opts: NkryOptions) -> Result<ApproxResult> {
    check_common(ps, delta, root)?;
    let base = rooted_mst(ps, root)?;
    let children = base.children();
    let mut edges = Vec::with_capacity(ps.len().saturating_sub(1));
    let mut log = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let kids = &children[v];
        if kids.is_empty() {
            continue;
        }
        let visit_order = if kids.len() + 1 >= delta {
            let order = match opts.ordering {
                ChildOrdering::LinksOnly => btsp_order_children(ps, kids)?.order,
                ChildOrdering::IncludeRootEdge => btsp_path(ps, v, kids)?.order[1..].to_vec(),
            };
            edges.push((v, order[0]));
            let swapped: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
            edges.extend_from_slice(&swapped);
            log.push(SwapRecord { root: v, edges: swapped });
            order
        } else {
            edges.extend(kids.iter().map(|&c| (v, c)));
            kids.clone()
        };
        stack.extend(visit_order.into_iter().rev());
    }
    finish(ps, root, &base, edges, log, delta)
}

/// Partition generalisation: children of a swapping node are split into exactly `k` blocks, and
/// each block is attached by its optimal bottleneck path from the node.
pub fn pkry<D: Distances>(ps: &D, delta: usize, k: usize, root: usize) -> Result<ApproxResult> {
    check_common(ps, delta, root)?;
    if k < 1 || k + 2 > delta {
        return Err(Error::Parameter(format!(
            "block count k = {k} must satisfy 1 <= k <= delta - 2 = {}",
            delta - 2
        )));
    }
    let base = rooted_mst(ps, root)?;
    let children = base.children();
    let mut edges = Vec::with_capacity(ps.len().saturating_sub(1));
    let mut log = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let kids = &children[v];
        if kids.is_empty() {
            continue;
        }
        if kids.len() + 1 >= delta {
            // trigger implies c >= delta - 1 >= k + 1
            assert!(kids.len() > k, "swap trigger with fewer children than blocks");
            let (_, blocks) = best_partition(ps, v, kids, k)?;
            let mut swapped = Vec::new();
            for block in &blocks {
                let path = btsp_path(ps, v, block)?;
                edges.push((v, path.order[1]));
                for w in path.order[1..].windows(2) {
                    edges.push((w[0], w[1]));
                    swapped.push((w[0], w[1]));
                }
            }
            log.push(SwapRecord { root: v, edges: swapped });
        } else {
            edges.extend(kids.iter().map(|&c| (v, c)));
        }
        stack.extend(kids.iter().rev());
    }
    finish(ps, root, &base, edges, log, delta)
}

/// Partition of `items` into exactly `k` blocks minimizing the largest block bottleneck path from
/// `center`. Ties go to the first partition in canonical order.
pub fn best_partition<D: Distances>(
    ps: &D,
    center: usize,
    items: &[usize],
    k: usize,
) -> Result<(f64, Vec<Vec<usize>>)> {
    check_partition_cap(items.len(), k)?;
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let table = subset_bottlenecks(ps, center, &sorted)?;
    let mut best_value = f64::INFINITY;
    let mut best_labels: Vec<usize> = Vec::new();
    let mut masks = vec![0usize; k];
    partitions_into_k(&sorted, k)?.for_each_labeling(|labels| {
        masks.iter_mut().for_each(|m| *m = 0);
        for (i, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << i;
        }
        let value = masks.iter().map(|&m| table[m]).fold(0.0, f64::max);
        if value < best_value {
            best_value = value;
            best_labels = labels.to_vec();
        }
    });
    let mut blocks = vec![Vec::new(); k];
    for (i, &l) in best_labels.iter().enumerate() {
        blocks[l].push(sorted[i]);
    }
    Ok((best_value, blocks))
}

/// Smallest achievable largest-block bottleneck over partitions into at most `k` blocks.
pub fn best_partition_value_at_most<D: Distances>(ps: &D, center: usize, items: &[usize], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("block count must be at least 1".into()));
    }
    let mut best = f64::INFINITY;
    for j in 1..=k.min(items.len()) {
        best = best.min(best_partition(ps, center, items, j)?.0);
    }
    Ok(best)
}
