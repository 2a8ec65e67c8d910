//! Exact enumeration and counting of walks, bridges and irreducible
//! bridges, together with the counting identities they satisfy.

mod audit;
mod counts;
mod dfs;
mod unfold;

pub use audit::{
    binom_ratio_check, distinct_partitions, hw_preimage_profile, mvmp_audit, MvmpAudit,
    PreimageProfile,
};
pub use counts::{
    build_counts_table, build_counts_table_with, connective_estimates, kesten_partial_sums,
    series_identity_check, ConnectiveEstimate, CountsTable, KestenAudit,
};
pub use unfold::hw_unfold;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lattice::{Bridge, SelfAvoidingWalk};
use crate::structure;

use dfs::{Tree, WalkIter};

/// Upper bound on the size of a search, measured as the number of leaves
/// of the non-reversing tree, `(2d - 1)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_leaves: f64,
}

impl Budget {
    /// Budget for counting searches.
    pub const COUNTING: Budget = Budget { max_leaves: 1e11 };
    /// Budget for searches that materialize or analyse every walk.
    pub const EXHAUSTIVE: Budget = Budget { max_leaves: 1e6 };

    /// Longest walk length allowed in dimension `d`.
    pub fn max_len(&self, d: usize) -> usize {
        let branch = (2 * d - 1) as f64;
        let mut n = 0;
        while branch.powi(n as i32 + 1) <= self.max_leaves {
            n += 1;
        }
        n
    }

    pub fn check(&self, n: usize, d: usize) -> Result<()> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let limit = self.max_len(d);
        if n > limit {
            return Err(Error::BudgetExceeded {
                requested: n,
                limit,
                dim: d,
            });
        }
        Ok(())
    }
}

/// How an enumeration is split and scheduled. Results never depend on it.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationConfig {
    /// Depth at which the search tree is cut into independent tasks.
    pub split_depth: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub budget: Budget,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            split_depth: 3,
            threads: None,
            budget: Budget::COUNTING,
        }
    }
}

impl EnumerationConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub(crate) fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> Result<R> {
        match self.threads {
            None => Ok(op()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
                Ok(pool.install(op))
            }
        }
    }
}

/// Number of self-avoiding walks of length `n` from the origin of `Z^d`.
pub fn count_saw(n: usize, d: usize) -> Result<BigUint> {
    count_saw_with(n, d, &EnumerationConfig::default())
}

pub fn count_saw_with(n: usize, d: usize, cfg: &EnumerationConfig) -> Result<BigUint> {
    cfg.budget.check(n, d)?;
    let t = dfs::tally(d, n, Tree::All, cfg)?;
    Ok(BigUint::from(t.nodes[n]))
}

/// Self-avoiding walks of length `n` from the origin, in lexicographic
/// step order.
pub fn enumerate_saw(n: usize, d: usize) -> Result<impl Iterator<Item = SelfAvoidingWalk>> {
    Budget::COUNTING.check(n, d)?;
    Ok(WalkIter::new(d, n, Tree::All).map(SelfAvoidingWalk::new_unchecked))
}

/// Bridges of length `n` from the origin, in lexicographic step order.
pub fn enumerate_sab(n: usize, d: usize) -> Result<impl Iterator<Item = Bridge>> {
    Budget::COUNTING.check(n, d)?;
    Ok(WalkIter::new(d, n, Tree::HalfPlane)
        .filter(|w| w.has_bridge_heights())
        .map(Bridge::new_unchecked))
}

/// Irreducible bridges of length `n ≥ 1` from the origin.
pub fn enumerate_isab(n: usize, d: usize) -> Result<impl Iterator<Item = Bridge>> {
    if n == 0 {
        return Err(Error::EmptyBridge);
    }
    Ok(enumerate_sab(n, d)?.filter(|b| structure::is_irreducible(b).unwrap_or(false)))
}

/// All self-avoiding walks of length `n`, gathered in parallel. The order
/// is the same lexicographic order as [`enumerate_saw`].
pub fn collect_saw(n: usize, d: usize, cfg: &EnumerationConfig) -> Result<Vec<SelfAvoidingWalk>> {
    cfg.budget.check(n, d)?;
    let walks = dfs::collect_parallel(d, n, Tree::All, cfg, |_| true)?;
    Ok(walks.into_iter().map(SelfAvoidingWalk::new_unchecked).collect())
}

/// All bridges of length `n`, gathered in parallel, in lexicographic order.
pub fn collect_sab(n: usize, d: usize, cfg: &EnumerationConfig) -> Result<Vec<Bridge>> {
    cfg.budget.check(n, d)?;
    let walks = dfs::collect_parallel(d, n, Tree::HalfPlane, cfg, |w| w.has_bridge_heights())?;
    Ok(walks.into_iter().map(Bridge::new_unchecked).collect())
}
