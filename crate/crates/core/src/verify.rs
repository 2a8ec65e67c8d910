//! Exhaustive lemma suite over every bridge (and, where relevant, every
//! walk) up to a given length.

use std::fmt;

use num_integer::binomial;
use rayon::prelude::*;

use crate::enumerate::{
    collect_sab, collect_saw, distinct_partitions, hw_preimage_profile, hw_unfold, Budget,
    EnumerationConfig,
};
use crate::error::Result;
use crate::lattice::{Bridge, Walk};
use crate::structure::{self, naive};
use crate::surgery;

/// Lemmas that unfold twice per pair stop at this length.
pub const PAIRWISE_MAX_N: usize = 8;
/// Central-section bound used for the MultiUnf checks.
pub const SHORT_ZIGZAG: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaResult {
    pub name: &'static str,
    /// Number of walks the lemma was checked on.
    pub checked: usize,
    /// First failing walk and what went wrong.
    pub counterexample: Option<(Walk, String)>,
}

impl LemmaResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for LemmaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS  {} ({} walks)", self.name, self.checked),
            Some((w, why)) => write!(
                f,
                "FAIL  {} ({} walks) counterexample {}: {why}",
                self.name,
                self.checked,
                serde_json::to_string(w).expect("walk serializes")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub d: usize,
    pub max_n: usize,
    pub lemmas: Vec<LemmaResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(LemmaResult::passed)
    }

    pub fn first_failure(&self) -> Option<&LemmaResult> {
        self.lemmas.iter().find(|l| !l.passed())
    }
}

/// Deliberate bugs for exercising the failure path.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The fast diamond scan forgets the last index.
    DiamondScan,
}

type Check = fn(&Bridge, Option<Fault>) -> Option<String>;

struct BridgeLemma {
    name: &'static str,
    cap: usize,
    check: Check,
}

pub fn run_lemma_suite(max_n: usize, d: usize) -> Result<VerifyReport> {
    run_with_fault(max_n, d, None)
}

#[doc(hidden)]
pub fn run_with_fault(max_n: usize, d: usize, fault: Option<Fault>) -> Result<VerifyReport> {
    Budget::EXHAUSTIVE.check(max_n, d)?;
    let cfg = EnumerationConfig {
        budget: Budget::EXHAUSTIVE,
        ..EnumerationConfig::default()
    };
    let by_length: Vec<Vec<Bridge>> = (1..=max_n)
        .map(|n| collect_sab(n, d, &cfg))
        .collect::<Result<_>>()?;

    let mut lemmas: Vec<LemmaResult> = bridge_lemmas()
        .iter()
        .map(|lemma| {
            let mut checked = 0;
            let mut counterexample = None;
            for bridges in by_length.iter().take(lemma.cap.min(max_n)) {
                checked += bridges.len();
                counterexample = bridges
                    .par_iter()
                    .find_map_first(|b| (lemma.check)(b, fault).map(|why| (b.walk().clone(), why)));
                if counterexample.is_some() {
                    break;
                }
            }
            LemmaResult {
                name: lemma.name,
                checked,
                counterexample,
            }
        })
        .collect();

    lemmas.push(sab_stream_lemma(max_n, d, &by_length, &cfg)?);
    lemmas.push(hw_unfold_lemma(max_n, d, &cfg)?);
    lemmas.push(hw_preimage_lemma(max_n, d)?);
    Ok(VerifyReport { d, max_n, lemmas })
}

fn bridge_lemmas() -> Vec<BridgeLemma> {
    let all = usize::MAX;
    vec![
        BridgeLemma { name: "renewal scan agrees with the definition", cap: all, check: renewal_scan },
        BridgeLemma { name: "diamond scan agrees with the definition", cap: all, check: diamond_scan },
        BridgeLemma { name: "zigzag scan agrees with the definition", cap: all, check: zigzag_scan },
        BridgeLemma { name: "decomposition reassembles into irreducible blocks", cap: all, check: decomposition },
        BridgeLemma { name: "zigzag central sections are pairwise disjoint", cap: all, check: zigzags_disjoint },
        BridgeLemma { name: "zigzag (i,i) implies renewal at i", cap: all, check: trivial_zigzag_renewal },
        BridgeLemma { name: "unfold stays a bridge of equal length, end not lower", cap: all, check: unfold_closure },
        BridgeLemma { name: "unfold makes zig and zag renewal points", cap: all, check: unfold_renewals },
        BridgeLemma { name: "unfold removes two crossings per spanned level", cap: all, check: unfold_crossings },
        BridgeLemma { name: "unfold keeps the other zigzags", cap: PAIRWISE_MAX_N, check: unfold_keeps_zigzags },
        BridgeLemma { name: "unfolds commute", cap: PAIRWISE_MAX_N, check: unfold_commutes },
        BridgeLemma { name: "MultiUnf is one-to-one with binomial size", cap: all, check: multi_unfold_injective },
        BridgeLemma { name: "diamond points are renewal points", cap: all, check: diamond_in_renewal },
        BridgeLemma { name: "stickbreak is self-avoiding with length +2", cap: all, check: stickbreak_valid },
        BridgeLemma { name: "stickbreak is invertible from the inserted edges", cap: all, check: stickbreak_invertible },
        BridgeLemma { name: "stickbreak creates at most 3 x width renewals", cap: all, check: stickbreak_renewals },
        BridgeLemma { name: "single-crossing level implies renewal", cap: all, check: single_crossing_renewal },
        BridgeLemma { name: "level-class inclusion for v = 1/2", cap: all, check: |b, _| inclusion(b, 1, 2) },
        BridgeLemma { name: "level-class inclusion for v = 1/3", cap: all, check: |b, _| inclusion(b, 1, 3) },
    ]
}

fn fail_if(bad: bool, why: impl FnOnce() -> String) -> Option<String> {
    bad.then(why)
}

fn renewal_scan(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let (fast, slow) = (structure::renewal_points(b), naive::renewal_indices(b));
    fail_if(fast != slow, || format!("scan {fast:?}, definition {slow:?}"))
}

fn diamond_scan(b: &Bridge, fault: Option<Fault>) -> Option<String> {
    let mut fast = structure::diamond_points(b);
    if fault == Some(Fault::DiamondScan) {
        fast.pop();
    }
    let slow = naive::diamond_points(b);
    fail_if(fast != slow, || format!("scan {fast:?}, definition {slow:?}"))
}

fn zigzag_scan(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let (fast, slow) = (structure::zigzags(b), naive::zigzags(b));
    fail_if(fast != slow, || format!("scan {fast:?}, definition {slow:?}"))
}

fn decomposition(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let dec = structure::decompose(b).ok()?;
    if dec.reassemble(&b.start()).ok().as_ref() != Some(b.walk()) {
        return Some("blocks do not reassemble".into());
    }
    if dec.blocks.len() + 1 != structure::renewal_points(b).len() {
        return Some(format!("{} blocks for {} renewals", dec.blocks.len(), dec.cuts.len()));
    }
    dec.blocks
        .iter()
        .find(|blk| !structure::is_irreducible(blk).unwrap_or(false))
        .map(|blk| format!("block {blk} is reducible"))
}

fn zigzags_disjoint(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let zs = structure::zigzags(b);
    zs.windows(2)
        .find(|w| w[0].1 >= w[1].0)
        .map(|w| format!("{:?} and {:?} overlap", w[0], w[1]))
}

fn trivial_zigzag_renewal(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let renewals = structure::renewal_points(b);
    structure::zigzags(b)
        .into_iter()
        .find(|&(i, j)| i == j && !renewals.contains(&i))
        .map(|(i, _)| format!("({i},{i}) but {i} is not a renewal"))
}

fn unfold_closure(b: &Bridge, _: Option<Fault>) -> Option<String> {
    structure::zigzags(b).into_iter().find_map(|z| {
        let out = surgery::unfold(b, z).ok()?.into_walk();
        fail_if(
            !out.is_bridge() || out.len() != b.len() || out.end().y() < b.end().y(),
            || format!("unfold {z:?} gives {out}"),
        )
    })
}

fn unfold_renewals(b: &Bridge, _: Option<Fault>) -> Option<String> {
    structure::zigzags(b).into_iter().find_map(|(i, j)| {
        let out = surgery::unfold(b, (i, j)).ok()?;
        let r = structure::renewal_points(&out);
        fail_if(!(r.contains(&i) && r.contains(&j)), || {
            format!("unfold ({i},{j}) gives {out} with renewals {r:?}")
        })
    })
}

fn unfold_crossings(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let before = structure::level_profile(b);
    structure::zigzags(b).into_iter().filter(|&(i, j)| i < j).find_map(|(i, j)| {
        let out = surgery::unfold(b, (i, j)).ok()?;
        let after = structure::level_profile(&out);
        (b.y(j)..b.y(i)).find_map(|h| {
            let (was, now) = (before.get(&h).copied().unwrap_or(0), after.get(&h).copied().unwrap_or(0));
            fail_if(now + 2 > was, || format!("unfold ({i},{j}): level {h} has {now} crossings, was {was}"))
        })
    })
}

fn unfold_keeps_zigzags(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let zs = structure::zigzags(b);
    zs.iter().find_map(|&z| {
        let out = surgery::unfold(b, z).ok()?;
        let kept = structure::zigzags(&out);
        zs.iter()
            .find(|&&other| other != z && !kept.contains(&other))
            .map(|other| format!("unfold {z:?} loses {other:?}"))
    })
}

fn unfold_commutes(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let zs = structure::zigzags(b);
    for (k, &z1) in zs.iter().enumerate() {
        for &z2 in &zs[k + 1..] {
            let ab = surgery::unfold_set(b, &[z1, z2]);
            let ba = surgery::unfold_set(b, &[z2, z1]);
            if ab.is_err() || ab != ba {
                return Some(format!("{z1:?} and {z2:?} do not commute"));
            }
        }
    }
    None
}

fn multi_unfold_injective(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let short = surgery::short_zigzags(b, SHORT_ZIGZAG).len();
    (1..=short.min(2)).find_map(|k| {
        let mut outs: Vec<Walk> = surgery::multi_unfold(b, k, SHORT_ZIGZAG)
            .ok()?
            .map(Bridge::into_walk)
            .collect();
        let produced = outs.len();
        outs.sort_by_key(Walk::steps);
        outs.dedup();
        let expected = binomial(short, k);
        fail_if(produced != expected || outs.len() != produced, || {
            format!("k={k}: {produced} outputs, {} distinct, expected {expected}", outs.len())
        })
    })
}

fn diamond_in_renewal(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let r = structure::renewal_points(b);
    structure::diamond_points(b)
        .into_iter()
        .find(|i| !r.contains(i))
        .map(|i| format!("diamond {i} is not a renewal"))
}

fn diamond_pairs(b: &Bridge) -> Vec<(usize, usize)> {
    let ds = structure::diamond_points(b);
    let mut pairs = Vec::new();
    for (k, &di) in ds.iter().enumerate() {
        for &dj in &ds[k + 1..] {
            pairs.push((di, dj));
        }
    }
    pairs
}

fn stickbreak_valid(b: &Bridge, _: Option<Fault>) -> Option<String> {
    diamond_pairs(b).into_iter().find_map(|(di, dj)| match surgery::stickbreak(b, di, dj) {
        Err(e) => Some(format!("stickbreak ({di},{dj}): {e}")),
        Ok(out) => fail_if(out.len() != b.len() + 2, || format!("stickbreak ({di},{dj}) has length {}", out.len())),
    })
}

fn stickbreak_invertible(b: &Bridge, _: Option<Fault>) -> Option<String> {
    diamond_pairs(b).into_iter().find_map(|(di, dj)| {
        let out = surgery::stickbreak(b, di, dj).ok()?;
        let back = surgery::stickbreak_inverse(&out, di, dj + 1).ok();
        fail_if(back != Some((b.walk().clone(), di, dj)), || {
            format!("stickbreak ({di},{dj}) = {out} does not invert")
        })
    })
}

fn stickbreak_renewals(b: &Bridge, _: Option<Fault>) -> Option<String> {
    diamond_pairs(b).into_iter().find_map(|(di, dj)| {
        let out = surgery::stickbreak(b, di, dj).ok()?;
        let fresh = surgery::stickbreak_new_renewals(b, di, dj, &out);
        let width = b.subwalk(di, dj).width() as usize;
        fail_if(fresh > 3 * width, || {
            format!("stickbreak ({di},{dj}) creates {fresh} renewals over width {width}")
        })
    })
}

fn single_crossing_renewal(b: &Bridge, _: Option<Fault>) -> Option<String> {
    let r = structure::renewal_points(b);
    structure::single_crossings(b)
        .into_iter()
        .find(|i| !r.contains(i))
        .map(|i| format!("edge {i} crosses its level alone but {i} is not a renewal"))
}

/// `y_n ≥ v n ⇒ level_class(⌈2/v⌉) ≥ (v/2) n` with `v = num/den`.
fn inclusion(b: &Bridge, num: usize, den: usize) -> Option<String> {
    let n = b.len();
    let rise = b.end().y() - b.start().y();
    if (rise as usize) * den < num * n {
        return None;
    }
    let m = (2 * den).div_ceil(num);
    let class = structure::level_class(b, m);
    fail_if(class * 2 * den < num * n, || format!("level_class({m}) = {class}"))
}

fn sab_stream_lemma(
    max_n: usize,
    d: usize,
    by_length: &[Vec<Bridge>],
    cfg: &EnumerationConfig,
) -> Result<LemmaResult> {
    let mut checked = 0;
    for n in 1..=max_n {
        let walks = collect_saw(n, d, cfg)?;
        checked += walks.len();
        let filtered: Vec<&Walk> = walks.iter().filter(|w| w.is_bridge()).map(|w| w.walk()).collect();
        let direct: Vec<&Walk> = by_length[n - 1].iter().map(Bridge::walk).collect();
        if filtered != direct {
            let w = direct.iter().chain(&filtered).find(|w| !(direct.contains(w) && filtered.contains(w)));
            return Ok(LemmaResult {
                name: "bridge search equals filtered walk search",
                checked,
                counterexample: Some((
                    w.map_or_else(|| Walk::trivial(d).expect("valid dimension"), |w| (*w).clone()),
                    format!("n={n}: {} direct, {} filtered", direct.len(), filtered.len()),
                )),
            });
        }
    }
    Ok(LemmaResult {
        name: "bridge search equals filtered walk search",
        checked,
        counterexample: None,
    })
}

fn hw_unfold_lemma(max_n: usize, d: usize, cfg: &EnumerationConfig) -> Result<LemmaResult> {
    let mut checked = 0;
    let mut counterexample = None;
    for n in 1..=max_n {
        let walks = collect_saw(n, d, cfg)?;
        checked += walks.len();
        counterexample = walks.par_iter().find_map_first(|w| {
            let b = hw_unfold(w);
            let ok = b.walk().is_bridge() && b.len() == n && hw_unfold(b.as_saw()) == b;
            (!ok).then(|| (w.walk().clone(), format!("unfolds to {b}")))
        });
        if counterexample.is_some() {
            break;
        }
    }
    Ok(LemmaResult {
        name: "unfolding walks gives bridges and is idempotent",
        checked,
        counterexample,
    })
}

fn hw_preimage_lemma(max_n: usize, d: usize) -> Result<LemmaResult> {
    let mut checked = 0;
    for n in 1..=max_n {
        let p = hw_preimage_profile(n, d, true)?;
        checked += p.walks;
        let pd = distinct_partitions(n);
        if num_bigint::BigUint::from(p.max_multiplicity) > pd {
            return Ok(LemmaResult {
                name: "half-space unfolding has at most PD(n) preimages",
                checked,
                counterexample: Some((
                    p.worst.expect("nonempty profile"),
                    format!("{} preimages, PD({n}) = {pd}", p.max_multiplicity),
                )),
            });
        }
    }
    Ok(LemmaResult {
        name: "half-space unfolding has at most PD(n) preimages",
        checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn small_suite_passes() {
        let report = run_lemma_suite(6, 2).unwrap();
        for l in &report.lemmas {
            assert!(l.passed(), "{l}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let report = run_with_fault(4, 2, Some(Fault::DiamondScan)).unwrap();
        let bad = report.first_failure().unwrap();
        assert_eq!(bad.name, "diamond scan agrees with the definition");
        assert!(bad.to_string().starts_with("FAIL"));
        assert!(bad.to_string().contains("\"steps\":\"+2\""));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(run_lemma_suite(50, 2), Err(Error::BudgetExceeded { .. })));
    }
}
