//! Pruned depth-first search over self-avoiding walks from the origin.
//!
//! Two search trees are used. The full tree visits every self-avoiding
//! walk. The half-plane tree keeps only walks with `y(γ_k) ≥ 1` for
//! `k ≥ 1`, which every bridge satisfies; the end-is-highest condition is
//! then checked at the leaves.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{Occupancy, Step, Walk, DEFAULT_GRID_BUDGET, Y};

use super::EnumerationConfig;

/// Which search tree to walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tree {
    All,
    HalfPlane,
}

impl Tree {
    fn admits(self, depth: usize, y: i64) -> bool {
        match self {
            Tree::All => true,
            Tree::HalfPlane => depth == 0 || y >= 1,
        }
    }
}

fn occupancy_for(d: usize, n: usize) -> Occupancy {
    Occupancy::for_radius(&vec![0; d], n, DEFAULT_GRID_BUDGET)
}

/// Lexicographic stream of the self-avoiding walks of length `n` in one
/// search tree, optionally restricted to the subtree below a prefix.
pub(crate) struct WalkIter {
    d: usize,
    n: usize,
    tree: Tree,
    base: usize,
    occ: Occupancy,
    path: Vec<i64>,
    choice: Vec<usize>,
    done: bool,
}

impl WalkIter {
    pub(crate) fn new(d: usize, n: usize, tree: Tree) -> WalkIter {
        WalkIter::below_prefix(d, n, tree, &[])
    }

    /// Iterator over the leaves below `prefix`, which must itself be a
    /// node of `tree`.
    pub(crate) fn below_prefix(d: usize, n: usize, tree: Tree, prefix: &[Step]) -> WalkIter {
        assert!(prefix.len() <= n);
        let mut occ = occupancy_for(d, n);
        let mut path = vec![0; d];
        occ.insert(&path);
        for s in prefix {
            let start = path.len() - d;
            path.extend_from_within(start..);
            let last = path.len() - d;
            path[last + s.axis()] += s.sign();
            let fresh = occ.insert(&path[last..]);
            debug_assert!(fresh, "prefix is not self-avoiding");
        }
        WalkIter {
            d,
            n,
            tree,
            base: prefix.len(),
            occ,
            path,
            choice: vec![0],
            done: false,
        }
    }

    fn depth(&self) -> usize {
        self.path.len() / self.d - 1
    }

    fn pop(&mut self) {
        let last = self.path.len() - self.d;
        self.occ.remove(&self.path[last..]);
        self.path.truncate(last);
    }
}

impl Iterator for WalkIter {
    type Item = Walk;

    fn next(&mut self) -> Option<Walk> {
        if self.done {
            return None;
        }
        if self.base == self.n {
            self.done = true;
            return Some(Walk::from_flat(self.d, self.path.clone()));
        }
        let d = self.d;
        loop {
            let depth = self.depth();
            let k = depth - self.base;
            if self.choice[k] == 2 * d {
                if k == 0 {
                    self.done = true;
                    return None;
                }
                self.choice.pop();
                self.pop();
                continue;
            }
            let step = Step::from_index(self.choice[k]);
            self.choice[k] += 1;
            let start = self.path.len() - d;
            let mut q = self.path[start..].to_vec();
            q[step.axis()] += step.sign();
            if !self.tree.admits(depth + 1, q[Y]) || self.occ.contains(&q) {
                continue;
            }
            self.occ.insert(&q);
            self.path.extend_from_slice(&q);
            if depth + 1 == self.n {
                let walk = Walk::from_flat(d, self.path.clone());
                self.pop();
                return Some(walk);
            }
            self.choice.push(0);
        }
    }
}

/// All nodes of `tree` at exactly `depth`, in lexicographic order, as step
/// sequences.
pub(crate) fn prefixes(d: usize, depth: usize, tree: Tree) -> Vec<Vec<Step>> {
    WalkIter::new(d, depth, tree).map(|w| w.steps()).collect()
}

/// Per-depth tallies gathered by one search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    /// Nodes per depth: walks (full tree) or half-plane walks.
    pub nodes: Vec<u64>,
    /// Bridges per depth (half-plane tree only).
    pub bridges: Vec<u64>,
    /// Irreducible bridges per depth (half-plane tree only).
    pub irreducible: Vec<u64>,
}

impl Tally {
    fn zeros(n: usize) -> Tally {
        Tally {
            nodes: vec![0; n + 1],
            bridges: vec![0; n + 1],
            irreducible: vec![0; n + 1],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in [
            (&mut self.nodes, other.nodes),
            (&mut self.bridges, other.bridges),
            (&mut self.irreducible, other.irreducible),
        ] {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }

    pub(crate) fn to_big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }
}

struct Counter {
    d: usize,
    n: usize,
    tree: Tree,
    occ: Occupancy,
    pos: Vec<i64>,
    heights: Vec<i64>,
    prefix_max: Vec<i64>,
    tally: Tally,
}

impl Counter {
    fn new(d: usize, n: usize, tree: Tree, prefix: &[Step]) -> Counter {
        let mut c = Counter {
            d,
            n,
            tree,
            occ: occupancy_for(d, n),
            pos: vec![0; d],
            heights: vec![0],
            prefix_max: vec![0],
            tally: Tally::zeros(n),
        };
        c.occ.insert(&c.pos);
        for s in prefix {
            c.pos[s.axis()] += s.sign();
            c.occ.insert(&c.pos);
            let y = c.pos[Y];
            c.heights.push(y);
            let m = (*c.prefix_max.last().unwrap()).max(y);
            c.prefix_max.push(m);
        }
        c
    }

    fn record(&mut self) {
        let depth = self.heights.len() - 1;
        self.tally.nodes[depth] += 1;
        if self.tree == Tree::HalfPlane {
            let y = self.heights[depth];
            if y >= self.prefix_max[depth] {
                self.tally.bridges[depth] += 1;
                if depth >= 1 && !self.has_interior_renewal() {
                    self.tally.irreducible[depth] += 1;
                }
            }
        }
    }

    /// For a bridge on the current path: is some `0 < m < depth` a renewal
    /// index, i.e. `y_m` at least the prefix maximum and strictly below
    /// everything after it?
    fn has_interior_renewal(&self) -> bool {
        let depth = self.heights.len() - 1;
        let mut suffix_min = self.heights[depth];
        for m in (1..depth).rev() {
            let y = self.heights[m];
            if y < suffix_min && y >= self.prefix_max[m] {
                return true;
            }
            suffix_min = suffix_min.min(y);
        }
        false
    }

    fn run(&mut self) {
        self.record();
        let depth = self.heights.len() - 1;
        if depth == self.n {
            return;
        }
        for k in 0..2 * self.d {
            let step = Step::from_index(k);
            let (axis, sign) = (step.axis(), step.sign());
            self.pos[axis] += sign;
            if self.tree.admits(depth + 1, self.pos[Y]) && self.occ.insert(&self.pos) {
                let y = self.pos[Y];
                self.heights.push(y);
                self.prefix_max.push(self.prefix_max[depth].max(y));
                self.run();
                self.heights.pop();
                self.prefix_max.pop();
                self.occ.remove(&self.pos);
            }
            self.pos[axis] -= sign;
        }
    }
}

/// Tallies for every depth `0..=n` of `tree`, split into independent
/// subtrees at the configured depth.
pub(crate) fn tally(d: usize, n: usize, tree: Tree, cfg: &EnumerationConfig) -> Result<Tally> {
    let split = cfg.split_depth.min(n);
    let roots = prefixes(d, split, tree);

    // depths below the split are counted once, here
    let mut head = Tally::zeros(n);
    if split > 0 {
        let mut shallow = Counter::new(d, split - 1, tree, &[]);
        shallow.run();
        for depth in 0..split {
            head.nodes[depth] = shallow.tally.nodes[depth];
            head.bridges[depth] = shallow.tally.bridges[depth];
            head.irreducible[depth] = shallow.tally.irreducible[depth];
        }
    }

    let work = |prefix: &Vec<Step>| {
        let mut c = Counter::new(d, n, tree, prefix);
        c.run();
        c.tally
    };
    let body = cfg.install(|| {
        roots
            .par_iter()
            .map(work)
            .reduce(|| Tally::zeros(n), Tally::merge)
    })?;
    Ok(head.merge(body))
}

/// Every leaf of `tree` at depth `n`, in lexicographic order, gathered in
/// parallel over subtrees.
pub(crate) fn collect_parallel(
    d: usize,
    n: usize,
    tree: Tree,
    cfg: &EnumerationConfig,
    keep: impl Fn(&Walk) -> bool + Sync,
) -> Result<Vec<Walk>> {
    let split = cfg.split_depth.min(n);
    let roots = prefixes(d, split, tree);
    let chunks: Vec<Vec<Walk>> = cfg.install(|| {
        roots
            .par_iter()
            .map(|p| WalkIter::below_prefix(d, n, tree, p).filter(|w| keep(w)).collect())
            .collect()
    })?;
    Ok(chunks.into_iter().flatten().collect())
}
