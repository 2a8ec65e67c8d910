//! Sampling from the irreducible-bridge law truncated at length `L`, and
//! statistics of the half-space walks built from it.
//!
//! Every sample `k` draws from its own ChaCha8 stream `k` under the master
//! seed, so results do not depend on how samples are spread over threads.

mod config;
mod stats;
mod stickbreak;

pub use config::ExperimentConfig;
pub use stats::{run_stats, Estimate, SampleStats};
pub use stickbreak::{stickbreak_experiment, StickbreakReport, Windows};

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::{collect_sab, count_saw_with, Budget, EnumerationConfig};
use crate::error::{Error, Result};
use crate::lattice::{Bridge, Walk, Y};
use crate::structure;

/// Leaf budget for the count behind the default `mu_hat`.
const MU_HAT_BUDGET: Budget = Budget { max_leaves: 1e8 };

/// The law `P(γ) ∝ mu_hat^{-|γ|}` on irreducible bridges of length at most
/// `L`, normalised by `Z_L = Σ_{k ≤ L} i_k mu_hat^{-k}`.
#[derive(Debug, Clone)]
pub struct TruncatedIsabLaw {
    pub l: usize,
    pub d: usize,
    pub mu_hat: f64,
    /// Irreducible bridges by increasing length, lexicographic within a length.
    pub support: Vec<Bridge>,
    pub weights: Vec<f64>,
    /// The normalising constant `Z_L`.
    pub z: f64,
    sampler: WeightedIndex<f64>,
}

/// `c_N^{1/N}` for the longest `N` within a modest counting budget; an
/// upper bound on the connective constant.
pub fn default_mu_hat(d: usize) -> Result<f64> {
    let n = MU_HAT_BUDGET.max_len(d);
    let cfg = EnumerationConfig {
        budget: MU_HAT_BUDGET,
        ..EnumerationConfig::default()
    };
    let c = count_saw_with(n, d, &cfg)?;
    let c: f64 = c.to_string().parse().expect("decimal count");
    Ok(c.powf(1.0 / n as f64))
}

pub fn build_truncated_law(l: usize, mu_hat: f64, d: usize) -> Result<TruncatedIsabLaw> {
    if l < 1 {
        return Err(Error::Precondition("truncation length L must be at least 1".into()));
    }
    if mu_hat.is_nan() || mu_hat <= 1.0 {
        return Err(Error::Precondition(format!("mu_hat must exceed 1, got {mu_hat}")));
    }
    let cfg = EnumerationConfig {
        budget: Budget::EXHAUSTIVE,
        ..EnumerationConfig::default()
    };
    cfg.budget.check(l, d)?;
    let mut support = Vec::new();
    for n in 1..=l {
        support.extend(
            collect_sab(n, d, &cfg)?
                .into_iter()
                .filter(|b| structure::is_irreducible(b).unwrap_or(false)),
        );
    }
    let raw: Vec<f64> = support.iter().map(|b| mu_hat.powi(-(b.len() as i32))).collect();
    let z: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / z).collect();
    let sampler = WeightedIndex::new(&weights)
        .map_err(|e| Error::Inconsistent(format!("block weights: {e}")))?;
    Ok(TruncatedIsabLaw {
        l,
        d,
        mu_hat,
        support,
        weights,
        z,
        sampler,
    })
}

impl TruncatedIsabLaw {
    /// `E_L|γ| = Σ k i_k mu_hat^{-k} / Z_L`.
    pub fn exact_mean_length(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| b.len() as f64 * w)
            .sum()
    }

    /// Support size at each length `1..=L`.
    pub fn counts_by_length(&self) -> Vec<usize> {
        let mut out = vec![0; self.l + 1];
        for b in &self.support {
            out[b.len()] += 1;
        }
        out
    }
}

/// The random stream of sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_block<'a, R: Rng + ?Sized>(law: &'a TruncatedIsabLaw, rng: &mut R) -> &'a Bridge {
    &law.support[law.sampler.sample(rng)]
}

/// Concatenation of `n_blocks` independent blocks from the origin, with
/// the block boundaries `r_0 = 0 < r_1 < … < r_{n_blocks}`.
pub fn sample_halfspace_walk<R: Rng + ?Sized>(
    law: &TruncatedIsabLaw,
    n_blocks: usize,
    rng: &mut R,
) -> Result<(Bridge, Vec<usize>)> {
    if n_blocks < 1 {
        return Err(Error::Precondition("n_blocks must be at least 1".into()));
    }
    let mut walk = Walk::trivial(law.d)?;
    let mut cuts = vec![0];
    for _ in 0..n_blocks {
        walk = walk.concat(sample_block(law, rng))?;
        cuts.push(walk.len());
    }
    let bridge = Bridge::new(walk)
        .map_err(|e| Error::Inconsistent(format!("concatenated blocks: {e}")))?;
    Ok((bridge, cuts))
}

/// Remove the first (north) edge and translate one unit south.
pub fn strip_first_edge(b: &Bridge) -> Walk {
    let mut south = vec![0; b.dim()];
    south[Y] = -1;
    b.subwalk(1, b.len()).translated(&south)
}

pub fn sample_pstar<R: Rng + ?Sized>(law: &TruncatedIsabLaw, rng: &mut R) -> Walk {
    strip_first_edge(sample_block(law, rng))
}

/// The exact truncated `P*` law: each block's stripped walk with the
/// block's weight. The trivial walk carries `mu_hat^{-1} / Z_L`.
pub fn pstar_table(law: &TruncatedIsabLaw) -> Vec<(Walk, f64)> {
    law.support
        .iter()
        .zip(&law.weights)
        .map(|(b, &w)| (strip_first_edge(b), w))
        .collect()
}

/// `ψ ↦ σ(ψ_{m-t} - ψ_m)`: run backwards, reflect in `y`, translate back
/// to the origin.
pub fn sigma(w: &Walk) -> Walk {
    let offset: Vec<i64> = w.at(w.len()).iter().map(|c| -c).collect();
    w.reversed().translated(&offset).reflect_across_height(0)
}

/// Entrywise comparison of the `P*` table with its image under [`sigma`].
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaAudit {
    pub entries: usize,
    /// Largest weight difference between an entry and its image.
    pub max_abs_diff: f64,
    /// Entries whose image is missing from the support.
    pub missing: usize,
}

impl SigmaAudit {
    pub fn holds(&self, tol: f64) -> bool {
        self.missing == 0 && self.max_abs_diff <= tol
    }
}

pub fn pstar_sigma_audit(law: &TruncatedIsabLaw) -> SigmaAudit {
    let table = pstar_table(law);
    let lookup: HashMap<&Walk, f64> = table.iter().map(|(w, p)| (w, *p)).collect();
    let mut audit = SigmaAudit {
        entries: table.len(),
        max_abs_diff: 0.0,
        missing: 0,
    };
    for (w, p) in &table {
        match lookup.get(&sigma(w)) {
            Some(q) => audit.max_abs_diff = audit.max_abs_diff.max((p - q).abs()),
            None => audit.missing += 1,
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_law() {
        let law = build_truncated_law(1, 3.0, 2).unwrap();
        assert_eq!(law.support.len(), 1);
        assert_eq!(law.weights, [1.0]);
        let mut rng = sample_rng(1, 0);
        let (w, cuts) = sample_halfspace_walk(&law, 5, &mut rng).unwrap();
        assert_eq!(w.to_string(), "+2,+2,+2,+2,+2");
        assert_eq!(cuts, [0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn length_two_weights() {
        let law = build_truncated_law(2, 3.0, 2).unwrap();
        let names: Vec<String> = law.support.iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["+2", "+2,+1", "+2,-1"]);
        let z = 1.0 / 3.0 + 2.0 / 9.0;
        let expected = [1.0 / 3.0 / z, 1.0 / 9.0 / z, 1.0 / 9.0 / z];
        for (w, e) in law.weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
        assert!((law.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((law.z - z).abs() < 1e-15);
        assert_eq!(law.counts_by_length(), [0, 1, 2]);
    }

    #[test]
    fn law_preconditions() {
        assert!(build_truncated_law(0, 3.0, 2).is_err());
        assert!(build_truncated_law(2, 1.0, 2).is_err());
        assert!(matches!(build_truncated_law(40, 3.0, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn stripping_examples() {
        let b = Bridge::parse("+2", 2).unwrap();
        assert_eq!(strip_first_edge(&b), Walk::trivial(2).unwrap());
        let b = Bridge::parse("+2,+1", 2).unwrap();
        let s = strip_first_edge(&b);
        assert_eq!(s.to_string(), "+1");
        assert_eq!(s.start().coords(), [0, 0]);
    }

    #[test]
    fn sigma_is_an_involution() {
        let w = Walk::parse("+1,+2,+2,-1,+2", 2).unwrap();
        let s = sigma(&w);
        assert_eq!(s.start().coords(), [0, 0]);
        assert_eq!(s.end().y(), w.end().y());
        assert_eq!(sigma(&s), w);
    }

    #[test]
    fn pstar_table_is_sigma_invariant() {
        for l in 1..=7 {
            let law = build_truncated_law(l, 2.7, 2).unwrap();
            let audit = pstar_sigma_audit(&law);
            assert!(audit.holds(1e-12), "L={l}: {audit:?}");
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let law = build_truncated_law(4, 2.7, 2).unwrap();
        let draw = |seed| {
            let mut rng = sample_rng(seed, 3);
            (0..20).map(|_| sample_block(&law, &mut rng).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
