//! Set partitions into exactly `k` nonempty blocks, enumerated as restricted growth strings.

use crate::error::{Error, Result};

/// Partitions enumerated per node before the approximation refuses to continue.
pub const MAX_PARTITIONS: u128 = 10_000_000;

/// A set partition in canonical form: blocks ordered by their smallest element, each block sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

/// Stirling number of the second kind, saturating at `u128::MAX`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    if n == 0 {
        return 1;
    }
    // row-by-row recurrence S(i, j) = j S(i-1, j) + S(i-1, j-1)
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Iterator over all partitions of `items` into exactly `k` nonempty blocks.
///
/// Partitions are produced in lexicographic order of their restricted growth strings, which is
/// the same as canonical block order. Yields `S(items.len(), k)` partitions.
#[derive(Debug, Clone)]
pub struct Partitions {
    items: Vec<usize>,
    k: usize,
    labels: Vec<usize>,
    // prefix_max[i] = max(labels[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn first(items: Vec<usize>, k: usize) -> Self {
        let n = items.len();
        let mut p = Partitions {
            items,
            k,
            labels: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        };
        p.fill_from(1);
        p
    }

    /// Smallest completion of positions `from..` that still reaches `k` blocks.
    fn fill_from(&mut self, from: usize) {
        let n = self.labels.len();
        let mut m = if from == 0 { 0 } else { self.prefix_max[from - 1] };
        for i in from..n {
            let remaining = n - i;
            let needed = self.k - 1 - m;
            self.labels[i] = if remaining <= needed { m + 1 } else { 0 };
            m = m.max(self.labels[i]);
            self.prefix_max[i] = m;
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            let cap = (self.prefix_max[i - 1] + 1).min(self.k - 1);
            let next = self.labels[i] + 1;
            if next > cap {
                continue;
            }
            let m = self.prefix_max[i - 1].max(next);
            // positions after i must be able to introduce the missing labels
            if n - 1 - i < self.k - 1 - m {
                continue;
            }
            self.labels[i] = next;
            self.prefix_max[i] = m;
            self.fill_from(i + 1);
            return true;
        }
        false
    }

    fn current(&self) -> Partition {
        let mut blocks = vec![Vec::new(); self.k];
        for (&label, &item) in self.labels.iter().zip(&self.items) {
            blocks[label].push(item);
        }
        Partition { blocks }
    }

    /// Calls `f` with the block labels of every remaining partition, without allocating.
    ///
    /// Position `i` of the (sorted) items belongs to block `labels[i]`.
    pub fn for_each_labeling(mut self, mut f: impl FnMut(&[usize])) {
        if self.done {
            return;
        }
        loop {
            f(&self.labels);
            if !self.advance() {
                break;
            }
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.done = !self.advance();
        Some(out)
    }
}

/// All partitions of `items` into exactly `k` nonempty unordered blocks.
///
/// `items` is sorted first so that output blocks are in canonical form.
pub fn partitions_into_k(items: &[usize], k: usize) -> Result<Partitions> {
    if k == 0 || k > items.len() {
        return Err(Error::Parameter(format!(
            "cannot split {} items into {k} nonempty blocks",
            items.len()
        )));
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("partition items must be distinct".into()));
    }
    Ok(Partitions::first(sorted, k))
}

/// Fails with a size error naming the Stirling count when enumeration would exceed the cap.
pub fn check_partition_cap(n: usize, k: usize) -> Result<()> {
    let count = stirling2(n, k);
    if count > MAX_PARTITIONS {
        return Err(Error::CapExceeded {
            what: "partition enumeration",
            size: count,
            cap: MAX_PARTITIONS,
            detail: format!("S({n},{k}) = {count} partitions of {n} children into {k} blocks"),
        });
    }
    Ok(())
}
