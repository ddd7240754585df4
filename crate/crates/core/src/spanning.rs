//! Minimum spanning trees, rooted tree representation and star extraction.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Distances;

/// Spanning tree stored as parent pointers from a root.
///
/// `parent[root] == root` and `edge_length[root] == 0.0`. Every other node caches the
/// length of the edge to its parent.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    root: usize,
    parent: Vec<usize>,
    edge_length: Vec<f64>,
}

/// A center vertex and its children in a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub children: Vec<usize>,
}

impl Tree {
    /// Builds a tree from parent pointers, validating that it is a single rooted spanning tree.
    pub fn from_parents<D: Distances>(root: usize, parent: Vec<usize>, dist: &D) -> Result<Tree> {
        let n = parent.len();
        if n != dist.len() {
            return Err(Error::InvalidInput(format!(
                "parent array has {n} entries for {} points",
                dist.len()
            )));
        }
        if root >= n || parent[root] != root {
            return Err(Error::InvalidInput("root must be in range and be its own parent".into()));
        }
        if let Some(i) = parent.iter().position(|&p| p >= n) {
            return Err(Error::InvalidInput(format!("parent of node {i} is out of range")));
        }
        // every node must reach the root without revisiting
        let mut state = vec![0u8; n]; // 0 unknown, 1 on stack, 2 reaches root
        state[root] = 2;
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = parent[v];
            }
            if state[v] == 1 {
                return Err(Error::InvalidInput(format!("parent pointers contain a cycle through {v}")));
            }
            for u in path {
                state[u] = 2;
            }
        }
        let edge_length =
            (0..n).map(|i| if i == root { 0.0 } else { dist.dist(i, parent[i]) }).collect();
        Ok(Tree { root, parent, edge_length })
    }

    /// Builds a tree rooted at `root` from an undirected edge list over `dist.len()` points.
    pub fn from_edges<D: Distances>(root: usize, edges: &[(usize, usize)], dist: &D) -> Result<Tree> {
        let n = dist.len();
        if root >= n {
            return Err(Error::InvalidInput(format!("root {root} out of range for {n} points")));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidInput(format!(
                "a spanning tree on {n} points needs {} edges, got {}",
                n.saturating_sub(1),
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInput(format!("invalid edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if parent.contains(&usize::MAX) {
            return Err(Error::InvalidInput("edge list does not span all points".into()));
        }
        Tree::from_parents(root, parent, dist)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        (i != self.root).then(|| self.parent[i])
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn edge_length(&self, i: usize) -> Option<f64> {
        (i != self.root).then(|| self.edge_length[i])
    }

    /// Edges as `(parent, child, length)`, ordered by child index.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        (0..self.len())
            .filter(|&i| i != self.root)
            .map(|i| (self.parent[i], i, self.edge_length[i]))
            .collect()
    }

    /// Undirected edges normalised to `(min, max)` and sorted.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges().into_iter().map(|(p, c, _)| (p.min(c), p.max(c))).collect();
        e.sort_unstable();
        e
    }

    pub fn total_weight(&self) -> f64 {
        self.edge_length.iter().sum()
    }

    /// Child lists in index order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for i in 0..self.len() {
            if i != self.root {
                ch[self.parent[i]].push(i);
            }
        }
        ch
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for i in 0..self.len() {
            if i != self.root {
                deg[i] += 1;
                deg[self.parent[i]] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Length of the longest edge.
    pub fn bottleneck(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::InvalidInput("a single-node tree has no edges".into()));
        }
        Ok(self
            .edges()
            .into_iter()
            .map(|(_, _, l)| l)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Same edge set, rooted at `new_root`.
    pub fn reroot(&self, new_root: usize) -> Result<Tree> {
        if new_root >= self.len() {
            return Err(Error::InvalidInput(format!(
                "root {new_root} out of range for {} nodes",
                self.len()
            )));
        }
        let mut parent = self.parent.clone();
        let mut edge_length = self.edge_length.clone();
        // reverse pointers along the path new_root -> old root
        let mut prev = new_root;
        let mut prev_len = 0.0;
        let mut v = new_root;
        loop {
            let next = self.parent[v];
            let len = self.edge_length[v];
            parent[v] = prev;
            edge_length[v] = prev_len;
            if v == self.root {
                break;
            }
            prev = v;
            prev_len = len;
            v = next;
        }
        parent[new_root] = new_root;
        edge_length[new_root] = 0.0;
        Ok(Tree { root: new_root, parent, edge_length })
    }

    /// One star per internal node, in node-index order.
    pub fn stars(&self) -> Vec<Star> {
        self.children()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(center, children)| Star { center, children })
            .collect()
    }

    /// Preorder traversal from the root, children visited in index order.
    pub fn preorder(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(children[v].iter().rev());
        }
        order
    }
}

pub fn max_degree(t: &Tree) -> usize {
    t.max_degree()
}

pub fn bottleneck(t: &Tree) -> Result<f64> {
    t.bottleneck()
}

pub fn reroot(t: &Tree, new_root: usize) -> Result<Tree> {
    t.reroot(new_root)
}

pub fn stars_of(t: &Tree) -> Vec<Star> {
    t.stars()
}

/// Minimum spanning tree by Prim's algorithm with a full distance scan, rooted at 0.
///
/// Equal-length candidates are resolved by the smaller `(min index, max index)` pair, so the
/// result is the unique MST under the total order `(length, min, max)`.
pub fn mst<D: Distances>(ps: &D) -> Result<Tree> {
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidInput("cannot span an empty point set".into()));
    }
    type Key = (f64, usize, usize);
    fn better(a: &Key, b: &Key) -> bool {
        a.0 < b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
    }

    let mut in_tree = vec![false; n];
    let mut parent = vec![0usize; n];
    let mut best: Vec<Key> = vec![(f64::INFINITY, usize::MAX, usize::MAX); n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = (ps.dist(0, v), 0, v);
        parent[v] = 0;
    }
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if !in_tree[v] && pick.is_none_or(|p| better(&best[v], &best[p])) {
                pick = Some(v);
            }
        }
        let u = pick.expect("a vertex remains outside the tree");
        in_tree[u] = true;
        for v in 0..n {
            if !in_tree[v] {
                let cand = (ps.dist(u, v), u.min(v), u.max(v));
                if better(&cand, &best[v]) {
                    best[v] = cand;
                    parent[v] = u;
                }
            }
        }
    }
    parent[0] = 0;
    Tree::from_parents(0, parent, ps)
}

/// JSON form of a tree: `{"root", "edges": [[parent, child, length]], "bottleneck", "max_degree"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub bottleneck: Option<f64>,
    pub max_degree: usize,
}

impl From<&Tree> for TreeJson {
    fn from(t: &Tree) -> Self {
        TreeJson {
            root: t.root(),
            edges: t.edges(),
            bottleneck: t.bottleneck().ok(),
            max_degree: t.max_degree(),
        }
    }
}
