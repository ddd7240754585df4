//! Exact solvers for small instances: degree-bounded bottleneck spanning trees, spanning-tree
//! enumeration, and Hamiltonian paths in grid graphs.

use std::collections::HashSet;

use crate::approx::nkry;
use crate::error::{Error, Result};
use crate::gadget::GridGraph;
use crate::geometry::Distances;
use crate::spanning::{mst, Tree};

/// Largest point set accepted by [`exact_dmbst`].
pub const MAX_EXACT_POINTS: usize = 14;
/// Largest point set accepted by [`degree_bounded_tree_within`].
pub const MAX_FEASIBILITY_POINTS: usize = 32;
/// Largest point set accepted by [`enumerate_spanning_trees`].
pub const MAX_ENUMERATION_POINTS: usize = 9;
/// Largest grid graph accepted by [`hamiltonian_path_exists`].
pub const MAX_HAMPATH_VERTICES: usize = 12;

/// Undirected edges as vertex index pairs.
pub type EdgeList = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub bottleneck_value: f64,
    pub witness_tree: Tree,
    /// Search nodes visited across all feasibility checks.
    pub node_count_explored: u64,
}

fn cap_error(what: &'static str, size: usize, cap: usize, detail: &str) -> Error {
    Error::CapExceeded { what, size: size as u128, cap: cap as u128, detail: detail.into() }
}

/// Decides whether a spanning tree of maximum degree `delta` exists using only edges of length at
/// most `threshold`, returning one as an edge list when it does.
///
/// The search grows the tree breadth-first from a fixed root: each expanded vertex picks its
/// set of children among the unattached vertices it can reach. Failed states are memoised on
/// (unattached set, open set), which fully determines feasibility since every open vertex other
/// than the root has the same residual capacity `delta - 1`.
pub fn degree_bounded_tree_within<D: Distances>(
    ps: &D,
    delta: usize,
    threshold: f64,
) -> Result<(Option<EdgeList>, u64)> {
    let n = ps.len();
    if n > MAX_FEASIBILITY_POINTS {
        return Err(cap_error(
            "degree-bounded feasibility",
            n,
            MAX_FEASIBILITY_POINTS,
            "backtracking over threshold-graph spanning trees is exponential",
        ));
    }
    if n == 0 {
        return Err(Error::InvalidInput("point set is empty".into()));
    }
    if delta < 1 {
        return Err(Error::Parameter("degree bound must be at least 1".into()));
    }
    if n == 1 {
        return Ok((Some(Vec::new()), 1));
    }
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if ps.dist(i, j) <= threshold {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    // a vertex of threshold degree 1 can be a leaf anywhere; start from the most constrained one
    let root = (0..n).min_by_key(|&i| (adj[i].count_ones(), i)).expect("nonempty");
    if adj[root] == 0 {
        return Ok((None, 1));
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut search = Search {
        adj: &adj,
        delta,
        root,
        failed: HashSet::new(),
        parent: vec![usize::MAX; n],
        nodes: 0,
    };
    let found = search.expand(all & !(1 << root), 1 << root);
    let nodes = search.nodes;
    if !found {
        return Ok((None, nodes));
    }
    let edges = (0..n).filter(|&v| v != root).map(|v| (search.parent[v], v)).collect();
    Ok((Some(edges), nodes))
}

struct Search<'a> {
    adj: &'a [u32],
    delta: usize,
    root: usize,
    failed: HashSet<(u32, u32)>,
    parent: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn capacity(&self, v: usize) -> usize {
        if v == self.root {
            self.delta
        } else {
            self.delta - 1
        }
    }

    /// Every remaining vertex must be reachable from an open vertex through remaining vertices.
    fn reachable(&self, remaining: u32, open: u32) -> bool {
        let mut frontier = 0u32;
        let mut bits = open;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if self.capacity(v) > 0 {
                frontier |= self.adj[v] & remaining;
            }
        }
        let mut seen = frontier;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & remaining & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == remaining
    }

    fn expand(&mut self, remaining: u32, open: u32) -> bool {
        self.nodes += 1;
        if remaining == 0 {
            return true;
        }
        if open == 0 || self.failed.contains(&(remaining, open)) || !self.reachable(remaining, open) {
            return false;
        }
        // expand the open vertex with the fewest candidate children
        let mut pick = usize::MAX;
        let mut pick_count = u32::MAX;
        let mut bits = open;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = (self.adj[v] & remaining).count_ones();
            if c < pick_count {
                pick = v;
                pick_count = c;
            }
        }
        let v = pick;
        let candidates = self.adj[v] & remaining;
        let cap = self.capacity(v);
        let rest_open = open & !(1 << v);
        // children that nobody else could ever adopt are forced
        let mut others = 0u32;
        let mut bits = rest_open;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            others |= self.adj[u];
        }
        let mut bits = remaining;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            others |= self.adj[u];
        }
        let forced = candidates & !others;
        if forced.count_ones() as usize > cap {
            self.failed.insert((remaining, open));
            return false;
        }
        let optional = candidates & !forced;
        let mut sub = optional;
        loop {
            let chosen = sub | forced;
            if chosen.count_ones() as usize <= cap {
                let mut bits = chosen;
                while bits != 0 {
                    let u = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    self.parent[u] = v;
                }
                if self.expand(remaining & !chosen, rest_open | chosen) {
                    return true;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & optional;
        }
        self.failed.insert((remaining, open));
        false
    }
}

/// Decides whether a spanning tree of maximum degree `delta` and total length at most `budget`
/// exists, returning one as an edge list when it does.
///
/// Branch and bound over edges in ascending length order; a branch is cut when the cheapest
/// possible completion already exceeds the budget. Intended for instances whose budget is tight,
/// where almost every exclusion is pruned immediately.
pub fn degree_bounded_tree_weight_within<D: Distances>(
    ps: &D,
    delta: usize,
    budget: f64,
) -> Result<Option<Vec<(usize, usize)>>> {
    let n = ps.len();
    if n > MAX_FEASIBILITY_POINTS {
        return Err(cap_error(
            "degree-bounded weight feasibility",
            n,
            MAX_FEASIBILITY_POINTS,
            "branch and bound over edge subsets is exponential",
        ));
    }
    if n == 0 {
        return Err(Error::InvalidInput("point set is empty".into()));
    }
    if delta < 1 {
        return Err(Error::Parameter("degree bound must be at least 1".into()));
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((ps.dist(i, j), i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut prefix = vec![0.0; edges.len() + 1];
    for (i, e) in edges.iter().enumerate() {
        prefix[i + 1] = prefix[i] + e.0;
    }

    struct State<'a> {
        edges: &'a [(f64, usize, usize)],
        prefix: &'a [f64],
        delta: usize,
        budget: f64,
        degree: Vec<usize>,
        chosen: Vec<(usize, usize)>,
    }

    fn component(label: &[usize], mut v: usize) -> usize {
        while label[v] != v {
            v = label[v];
        }
        v
    }

    fn go(st: &mut State<'_>, idx: usize, label: &mut Vec<usize>, weight: f64, needed: usize) -> bool {
        if needed == 0 {
            return true;
        }
        if idx + needed > st.edges.len() {
            return false;
        }
        if weight + (st.prefix[idx + needed] - st.prefix[idx]) > st.budget {
            return false;
        }
        let (len, a, b) = st.edges[idx];
        let (ra, rb) = (component(label, a), component(label, b));
        if ra != rb && st.degree[a] < st.delta && st.degree[b] < st.delta {
            let saved = label.clone();
            label[ra] = rb;
            st.degree[a] += 1;
            st.degree[b] += 1;
            st.chosen.push((a, b));
            if go(st, idx + 1, label, weight + len, needed - 1) {
                return true;
            }
            st.chosen.pop();
            st.degree[a] -= 1;
            st.degree[b] -= 1;
            *label = saved;
        }
        go(st, idx + 1, label, weight, needed)
    }

    let mut st = State {
        edges: &edges,
        prefix: &prefix,
        delta,
        budget,
        degree: vec![0; n],
        chosen: Vec::with_capacity(n - 1),
    };
    let mut label: Vec<usize> = (0..n).collect();
    Ok(if go(&mut st, 0, &mut label, 0.0, n - 1) { Some(st.chosen) } else { None })
}

/// Exact degree-bounded minimum bottleneck spanning tree for up to [`MAX_EXACT_POINTS`] points.
///
/// Binary search over the sorted distinct pairwise distances, bracketed below by the MST
/// bottleneck and above by the NKRY solution when `delta >= 3`.
pub fn exact_dmbst<D: Distances>(ps: &D, delta: usize) -> Result<ExactResult> {
    let n = ps.len();
    if n > MAX_EXACT_POINTS {
        return Err(cap_error(
            "exact degree-bounded MBST",
            n,
            MAX_EXACT_POINTS,
            "exhaustive search is exponential in the number of points",
        ));
    }
    if n < 2 {
        return Err(Error::InvalidInput("exact solver needs at least two points".into()));
    }
    if delta < 2 {
        return Err(Error::Parameter(format!("degree bound {delta} must be at least 2")));
    }
    let mut values: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(ps.dist(i, j));
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    let lower = mst(ps)?.bottleneck()?;
    let upper = if delta >= 3 { nkry(ps, delta, 0)?.bottleneck_value } else { values[values.len() - 1] };
    let position = |x: f64| values.partition_point(|&v| v < x);
    let (mut lo, mut hi) = (position(lower), position(upper));
    let mut nodes = 0u64;
    let mut witness = None;
    // invariant: values[hi] is feasible
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (found, explored) = degree_bounded_tree_within(ps, delta, values[mid])?;
        nodes += explored;
        match found {
            Some(edges) => {
                hi = mid;
                witness = Some(edges);
            }
            None => lo = mid + 1,
        }
    }
    let edges = match witness {
        Some(e) if position(tree_bottleneck(ps, &e)) == hi => e,
        _ => {
            let (found, explored) = degree_bounded_tree_within(ps, delta, values[hi])?;
            nodes += explored;
            found.ok_or_else(|| Error::Audit("upper bracket of the binary search is infeasible".into()))?
        }
    };
    let witness_tree = Tree::from_edges(0, &edges, ps)?;
    Ok(ExactResult {
        bottleneck_value: witness_tree.bottleneck()?,
        witness_tree,
        node_count_explored: nodes,
    })
}

fn tree_bottleneck<D: Distances>(ps: &D, edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(a, b)| ps.dist(a, b)).fold(0.0, f64::max)
}

/// All `n^(n-2)` labelled spanning trees of the complete graph, decoded from Prüfer sequences.
pub fn enumerate_spanning_trees<D: Distances>(ps: &D) -> Result<SpanningTrees<'_, D>> {
    let n = ps.len();
    if n > MAX_ENUMERATION_POINTS {
        return Err(cap_error(
            "spanning tree enumeration",
            n,
            MAX_ENUMERATION_POINTS,
            "there are n^(n-2) labelled trees",
        ));
    }
    if n == 0 {
        return Err(Error::InvalidInput("point set is empty".into()));
    }
    Ok(SpanningTrees { ps, seq: vec![0; n.saturating_sub(2)], done: false })
}

pub struct SpanningTrees<'a, D> {
    ps: &'a D,
    seq: Vec<usize>,
    done: bool,
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

impl<D: Distances> Iterator for SpanningTrees<'_, D> {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.done {
            return None;
        }
        let n = self.ps.len();
        let tree = if n == 1 {
            Tree::from_parents(0, vec![0], self.ps)
        } else {
            Tree::from_edges(0, &prufer_edges(&self.seq, n), self.ps)
        }
        .expect("Prüfer decoding yields a spanning tree");
        // odometer increment
        self.done = true;
        for digit in self.seq.iter_mut().rev() {
            *digit += 1;
            if *digit < n {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(tree)
    }
}

/// Exact Hamiltonian path search, returning a witness vertex sequence when one exists.
pub fn hamiltonian_path_exists(g: &GridGraph) -> Result<Option<Vec<(i64, i64)>>> {
    let n = g.len();
    if n > MAX_HAMPATH_VERTICES {
        return Err(cap_error(
            "Hamiltonian path search",
            n,
            MAX_HAMPATH_VERTICES,
            "backtracking is exponential in the number of vertices",
        ));
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| g.neighbors(i)).collect();
    fn extend(adj: &[Vec<usize>], path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if path.len() == adj.len() {
            return true;
        }
        let last = *path.last().expect("nonempty path");
        for &u in &adj[last] {
            if !used[u] {
                used[u] = true;
                path.push(u);
                if extend(adj, path, used) {
                    return true;
                }
                path.pop();
                used[u] = false;
            }
        }
        false
    }
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        let mut path = vec![start];
        if extend(&adj, &mut path, &mut used) {
            return Ok(Some(path.into_iter().map(|i| g.vertex(i)).collect()));
        }
    }
    Ok(None)
}
