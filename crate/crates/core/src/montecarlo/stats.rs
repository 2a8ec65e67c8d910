use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{sample_halfspace_walk, sample_rng, TruncatedIsabLaw};
use crate::enumerate::EnumerationConfig;
use crate::error::{Error, Result};
use crate::structure;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Estimate {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let stderr = if xs.len() < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        };
        Estimate { mean, stderr }
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Statistics over `n_samples` independent walks of `n_blocks` blocks each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub l: usize,
    pub d: usize,
    pub mu_hat: f64,
    pub seed: u64,
    pub n_blocks: usize,
    pub n_samples: usize,
    /// `r_n / n` per sample.
    pub mean_block_length: Estimate,
    /// `E_L|γ|` computed from the law.
    pub exact_mean_block_length: f64,
    /// Renewal indices in `(0, r_n]` per unit length.
    pub renewal_density: Estimate,
    /// Diamond indices in `(0, r_n]` per block.
    pub diamond_density: Estimate,
    pub width_over_height: Estimate,
    pub velocity_x: Estimate,
    pub velocity_y: Estimate,
    /// Samples failing a structural check (self-avoidance, bridge, block
    /// boundaries being renewal points).
    pub structural_failures: usize,
}

struct PerSample {
    block_length: f64,
    renewal_density: f64,
    diamond_density: f64,
    width_over_height: f64,
    vx: f64,
    vy: f64,
    ok: bool,
}

pub fn run_stats(
    law: &TruncatedIsabLaw,
    n_blocks: usize,
    n_samples: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SampleStats> {
    if n_samples < 1 {
        return Err(Error::Precondition("n_samples must be at least 1".into()));
    }
    if n_blocks < 1 {
        return Err(Error::Precondition("n_blocks must be at least 1".into()));
    }
    let cfg = EnumerationConfig {
        threads,
        ..EnumerationConfig::default()
    };
    let per: Vec<PerSample> = cfg.install(|| {
        (0..n_samples as u64)
            .into_par_iter()
            .map(|k| one_sample(law, n_blocks, &mut sample_rng(seed, k)))
            .collect::<Result<_>>()
    })??;
    let est = |f: fn(&PerSample) -> f64| Estimate::from_samples(&per.iter().map(f).collect::<Vec<_>>());
    Ok(SampleStats {
        l: law.l,
        d: law.d,
        mu_hat: law.mu_hat,
        seed,
        n_blocks,
        n_samples,
        mean_block_length: est(|p| p.block_length),
        exact_mean_block_length: law.exact_mean_length(),
        renewal_density: est(|p| p.renewal_density),
        diamond_density: est(|p| p.diamond_density),
        width_over_height: est(|p| p.width_over_height),
        velocity_x: est(|p| p.vx),
        velocity_y: est(|p| p.vy),
        structural_failures: per.iter().filter(|p| !p.ok).count(),
    })
}

fn one_sample(law: &TruncatedIsabLaw, n_blocks: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<PerSample> {
    let (walk, cuts) = sample_halfspace_walk(law, n_blocks, rng)?;
    let r_n = walk.len();
    let renewals = structure::renewal_points(&walk);
    let diamonds = structure::diamond_points(&walk);
    let ok = walk.is_self_avoiding()
        && walk.is_bridge()
        && cuts.iter().all(|c| renewals.binary_search(c).is_ok());
    let blocks = n_blocks as f64;
    let end = walk.end();
    Ok(PerSample {
        block_length: r_n as f64 / blocks,
        renewal_density: (renewals.len() - 1) as f64 / r_n as f64,
        diamond_density: diamonds.iter().filter(|&&i| i > 0).count() as f64 / blocks,
        width_over_height: walk.width() as f64 / end.y() as f64,
        vx: end.x() as f64 / blocks,
        vy: end.y() as f64 / blocks,
        ok,
    })
}

impl SampleStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    /// One row per estimated statistic: `statistic,mean,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,mean,stderr\n");
        for (name, e) in [
            ("mean_block_length", self.mean_block_length),
            ("renewal_density", self.renewal_density),
            ("diamond_density", self.diamond_density),
            ("width_over_height", self.width_over_height),
            ("velocity_x", self.velocity_x),
            ("velocity_y", self.velocity_y),
        ] {
            writeln!(out, "{name},{},{}", e.mean, e.stderr).unwrap();
        }
        writeln!(out, "exact_mean_block_length,{},0", self.exact_mean_block_length).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::build_truncated_law;

    #[test]
    fn straight_walk_statistics() {
        let law = build_truncated_law(1, 3.0, 2).unwrap();
        let s = run_stats(&law, 5, 10, 1, None).unwrap();
        assert_eq!(s.velocity_x, Estimate { mean: 0.0, stderr: 0.0 });
        assert_eq!(s.velocity_y, Estimate { mean: 1.0, stderr: 0.0 });
        assert_eq!(s.diamond_density.mean, 1.0);
        assert_eq!(s.renewal_density.mean, 1.0);
        assert_eq!(s.width_over_height.mean, 0.0);
        assert_eq!(s.structural_failures, 0);
    }

    #[test]
    fn estimate_basics() {
        let e = Estimate::from_samples(&[1.0, 3.0]);
        assert_eq!(e.mean, 2.0);
        assert!((e.stderr - 1.0).abs() < 1e-15);
        assert!(e.within(2.9, 1.0) && !e.within(3.1, 1.0));
        assert_eq!(Estimate::from_samples(&[4.0]).stderr, 0.0);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let law = build_truncated_law(5, 2.7, 2).unwrap();
        let one = run_stats(&law, 20, 200, 42, Some(1)).unwrap().to_json();
        let many = run_stats(&law, 20, 200, 42, Some(6)).unwrap().to_json();
        assert_eq!(one, many);
        assert!(run_stats(&law, 0, 10, 1, None).is_err());
        assert!(run_stats(&law, 3, 0, 1, None).is_err());
    }

    #[test]
    fn densities_lie_in_unit_interval() {
        let law = build_truncated_law(6, 2.7, 2).unwrap();
        let s = run_stats(&law, 30, 300, 5, None).unwrap();
        for e in [s.renewal_density, s.diamond_density] {
            assert!((0.0..=1.0).contains(&e.mean) && e.stderr >= 0.0);
        }
        assert!(s.to_csv().starts_with("statistic,mean,stderr\nmean_block_length,"));
    }
}
