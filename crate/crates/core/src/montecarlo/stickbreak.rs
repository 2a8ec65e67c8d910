use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{sample_halfspace_walk, sample_rng, TruncatedIsabLaw};
use crate::enumerate::EnumerationConfig;
use crate::error::{Error, Result};
use crate::lattice::Bridge;
use crate::structure;
use crate::surgery;

/// Index windows for the two diamond points, as fractions of the number
/// of diamond points `d_1 < d_2 < …` after the start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Windows {
    pub i: (f64, f64),
    pub j: (f64, f64),
}

impl Default for Windows {
    fn default() -> Self {
        Windows {
            i: (0.1, 0.2),
            j: (0.3, 0.4),
        }
    }
}

impl Windows {
    pub fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.i, self.j] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::Precondition(format!(
                    "window [{lo}, {hi}] is not inside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// 1-based diamond ranks in `[ceil(lo·m), floor(hi·m)]`, at least 1.
    fn ranks(window: (f64, f64), m: usize) -> Option<(usize, usize)> {
        let lo = ((window.0 * m as f64).ceil() as usize).max(1);
        let hi = (window.1 * m as f64).floor() as usize;
        (lo <= hi).then_some((lo, hi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StickbreakReport {
    pub n_samples: usize,
    pub applied: usize,
    /// Samples whose windows held no admissible pair.
    pub skipped: usize,
    pub self_avoiding_rate: f64,
    /// Every output is two steps longer than its input.
    pub all_length_plus_two: bool,
    /// Mean of output width minus input width.
    pub mean_width_inflation: f64,
    /// Every output is at least as wide as the number of diamond points in
    /// `(d_i, d_j]`.
    pub width_bound_holds: bool,
    pub bridge_outputs: usize,
    /// Mean change in the number of renewal points, over bridge outputs.
    pub mean_renewal_change: Option<f64>,
}

struct Outcome {
    self_avoiding: bool,
    length_plus_two: bool,
    width_inflation: f64,
    width_bound: bool,
    renewal_change: Option<f64>,
}

pub fn stickbreak_experiment(
    law: &TruncatedIsabLaw,
    n_blocks: usize,
    windows: Windows,
    n_samples: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<StickbreakReport> {
    windows.validate()?;
    let cfg = EnumerationConfig {
        threads,
        ..EnumerationConfig::default()
    };
    let outcomes: Vec<Option<Outcome>> = cfg.install(|| {
        (0..n_samples as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = sample_rng(seed, k);
                let (walk, _) = sample_halfspace_walk(law, n_blocks, &mut rng)?;
                Ok(one_surgery(&walk, windows, &mut rng))
            })
            .collect::<Result<_>>()
    })??;
    let done: Vec<&Outcome> = outcomes.iter().flatten().collect();
    let applied = done.len();
    let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let renewal_changes: Vec<f64> = done.iter().filter_map(|o| o.renewal_change).collect();
    Ok(StickbreakReport {
        n_samples,
        applied,
        skipped: n_samples - applied,
        self_avoiding_rate: mean(done.iter().map(|o| o.self_avoiding as u8 as f64).collect()).unwrap_or(0.0),
        all_length_plus_two: done.iter().all(|o| o.length_plus_two),
        mean_width_inflation: mean(done.iter().map(|o| o.width_inflation).collect()).unwrap_or(0.0),
        width_bound_holds: done.iter().all(|o| o.width_bound),
        bridge_outputs: renewal_changes.len(),
        mean_renewal_change: mean(renewal_changes),
    })
}

fn one_surgery<R: Rng>(walk: &Bridge, windows: Windows, rng: &mut R) -> Option<Outcome> {
    let diamonds: Vec<usize> = structure::diamond_points(walk)
        .into_iter()
        .filter(|&k| k > 0)
        .collect();
    let m = diamonds.len();
    let (ilo, ihi) = Windows::ranks(windows.i, m)?;
    let (jlo, jhi) = Windows::ranks(windows.j, m)?;
    let i = rng.random_range(ilo..=ihi);
    let j = rng.random_range(jlo..=jhi);
    if i >= j {
        return None;
    }
    let (di, dj) = (diamonds[i - 1], diamonds[j - 1]);
    let (self_avoiding, out) = match surgery::stickbreak(walk, di, dj) {
        Ok(out) => (true, out.into_walk()),
        Err(Error::NotSelfAvoiding { .. }) => (false, surgery::stickbreak_raw(walk, di, dj)),
        Err(_) => return None,
    };
    let renewal_change = out.is_bridge().then(|| {
        structure::renewal_indices(&out).len() as f64 - structure::renewal_points(walk).len() as f64
    });
    Some(Outcome {
        self_avoiding,
        length_plus_two: out.len() == walk.len() + 2,
        width_inflation: (out.width() - walk.width()) as f64,
        width_bound: out.width() >= (j - i) as i64,
        renewal_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::build_truncated_law;

    #[test]
    fn rank_windows() {
        assert_eq!(Windows::ranks((0.1, 0.2), 20), Some((2, 4)));
        assert_eq!(Windows::ranks((0.1, 0.2), 4), None);
        assert_eq!(Windows::ranks((0.0, 0.1), 10), Some((1, 1)));
    }

    #[test]
    fn surgery_on_sampled_walks() {
        let law = build_truncated_law(6, 2.7, 2).unwrap();
        let r = stickbreak_experiment(&law, 60, Windows::default(), 100, 3, None).unwrap();
        assert!(r.applied > 50, "{r:?}");
        assert_eq!(r.self_avoiding_rate, 1.0);
        assert!(r.all_length_plus_two && r.width_bound_holds);
        assert!(r.mean_width_inflation > 0.0);
    }

    #[test]
    fn bad_windows_rejected() {
        let law = build_truncated_law(2, 3.0, 2).unwrap();
        let w = Windows { i: (0.5, 0.2), j: (0.3, 0.4) };
        assert!(stickbreak_experiment(&law, 5, w, 1, 0, None).is_err());
    }
}
