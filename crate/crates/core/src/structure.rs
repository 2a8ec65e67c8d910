//! Renewal points, irreducible decomposition, diamond points, zigzags and
//! level crossings of a single walk.
//!
//! The exported functions use linear prefix/suffix extremum scans. The
//! [`naive`] module restates each definition literally; the two are
//! compared exhaustively by the test and verification suites.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Bridge, LatticePoint, SelfAvoidingWalk, Walk, Y};

/// Indices `i` such that both `γ[0, i]` and `γ[i, n]` are bridges.
///
/// For a bridge these are the `i` with `y_i` at least every earlier height
/// and strictly below every later one.
pub fn renewal_points(b: &Bridge) -> Vec<usize> {
    renewal_indices(b)
}

/// [`renewal_points`] for an arbitrary walk, which need not be a bridge.
pub fn renewal_indices(w: &Walk) -> Vec<usize> {
    let h = w.heights();
    let n = w.len();
    // suffix_min[k] = min h over [k, n]; suffix_max likewise
    let mut suffix_min = vec![i64::MAX; n + 2];
    let mut suffix_max = vec![i64::MIN; n + 2];
    for k in (0..=n).rev() {
        suffix_min[k] = suffix_min[k + 1].min(h[k]);
        suffix_max[k] = suffix_max[k + 1].max(h[k]);
    }
    let mut prefix_max = i64::MIN;
    let mut rest_min = i64::MAX; // min h over [1, i]
    let mut out = Vec::new();
    for i in 0..=n {
        prefix_max = prefix_max.max(h[i]);
        if i > 0 {
            rest_min = rest_min.min(h[i]);
        }
        let head = h[i] >= prefix_max && (i == 0 || h[0] < rest_min);
        let tail = h[i] < suffix_min[i + 1] && h[n] >= suffix_max[i];
        if head && tail {
            out.push(i);
        }
    }
    out
}

/// True iff the bridge has no renewal point besides its two ends.
pub fn is_irreducible(b: &Bridge) -> Result<bool> {
    if b.is_empty() {
        return Err(Error::EmptyBridge);
    }
    Ok(renewal_points(b).len() == 2)
}

/// The unique decomposition of a bridge into irreducible bridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Blocks translated to start at the origin, in order.
    pub blocks: Vec<Bridge>,
    /// Renewal indices of the input; block `k` spans `cuts[k]..=cuts[k+1]`.
    pub cuts: Vec<usize>,
}

impl Decomposition {
    /// Concatenates the blocks back together, starting at `start`.
    pub fn reassemble(&self, start: &LatticePoint) -> Result<Walk> {
        self.blocks
            .iter()
            .try_fold(Walk::trivial_at(start), |acc, b| acc.concat(b))
    }
}

pub fn decompose(b: &Bridge) -> Result<Decomposition> {
    if b.is_empty() {
        return Err(Error::EmptyBridge);
    }
    let cuts = renewal_points(b);
    let blocks = cuts
        .windows(2)
        .map(|w| Bridge::new_unchecked(b.subwalk(w[0], w[1]).to_origin()))
        .collect();
    Ok(Decomposition { blocks, cuts })
}

/// Indices `i` whose past lies in the lower quadrant and whose future lies
/// in the upper quadrant of the diagonal coordinates `x + y` and `y - x`
/// centred at `γ_i`, with every later point strictly higher than `γ_i`.
///
/// Only the first two coordinates enter. In two dimensions the strictness
/// follows from self-avoidance; from three on it rules out future points
/// that differ from `γ_i` only in the extra coordinates.
pub fn diamond_points(w: &Walk) -> Vec<usize> {
    let n = w.len();
    let s: Vec<i64> = (0..=n).map(|k| w.x(k) + w.y(k)).collect();
    let t: Vec<i64> = (0..=n).map(|k| w.y(k) - w.x(k)).collect();
    let mut future_ok = vec![false; n + 1];
    let (mut min_s, mut min_t, mut min_y) = (i64::MAX, i64::MAX, i64::MAX);
    for k in (0..=n).rev() {
        future_ok[k] = s[k] <= min_s && t[k] <= min_t && w.y(k) < min_y;
        min_s = min_s.min(s[k]);
        min_t = min_t.min(t[k]);
        min_y = min_y.min(w.y(k));
    }
    let (mut max_s, mut max_t) = (i64::MIN, i64::MIN);
    let mut out = Vec::new();
    for k in 0..=n {
        max_s = max_s.max(s[k]);
        max_t = max_t.max(t[k]);
        if future_ok[k] && s[k] >= max_s && t[k] >= max_t {
            out.push(k);
        }
    }
    out
}

/// All zigzags `(i, j)` of the bridge, sorted by `i`.
///
/// For each probe `j ≥ 1`, `i` is the last index in `[1, j]` attaining the
/// highest point, and the pair is kept when `j` is the last index in
/// `[i, n]` attaining the lowest point. Probes `j = 0` are excluded.
pub fn zigzags(b: &Bridge) -> Vec<(usize, usize)> {
    let n = b.len();
    if n == 0 {
        return Vec::new();
    }
    let h = b.heights();
    // last index attaining the minimum of h over [k, n]
    let mut last_argmin = vec![n; n + 1];
    for k in (0..n).rev() {
        let next = last_argmin[k + 1];
        last_argmin[k] = if h[k] < h[next] { k } else { next };
    }
    let mut out = Vec::new();
    let mut zig = 1;
    for j in 1..=n {
        if h[j] >= h[zig] {
            zig = j;
        }
        if last_argmin[zig] == j {
            out.push((zig, j));
        }
    }
    out.sort_unstable();
    out
}

/// North-south walk edges between heights `h` and `h + 1`, as
/// `(γ_i, γ_{i+1})` in walk order.
pub fn visiting_edge_set(w: &Walk, h: i64) -> Vec<(LatticePoint, LatticePoint)> {
    (0..w.len())
        .filter(|&i| {
            let (a, b) = (w.y(i), w.y(i + 1));
            a.min(b) == h && a != b
        })
        .map(|i| (w.point(i), w.point(i + 1)))
        .collect()
}

/// `h ↦ |V_{h,h+1}|` over the levels the walk crosses.
pub fn level_profile(w: &Walk) -> BTreeMap<i64, usize> {
    let mut levels = BTreeMap::new();
    for i in 0..w.len() {
        let (a, b) = (w.y(i), w.y(i + 1));
        if a != b {
            *levels.entry(a.min(b)).or_insert(0) += 1;
        }
    }
    levels
}

/// Number of levels `h` crossed at least once and at most `m` times.
pub fn level_class(w: &Walk, m: usize) -> usize {
    level_profile(w)
        .values()
        .filter(|&&c| (1..=m).contains(&c))
        .count()
}

/// Indices `i` whose edge `(γ_i, γ_{i+1})` is the only crossing of its level.
pub fn single_crossings(w: &Walk) -> Vec<usize> {
    let profile = level_profile(w);
    (0..w.len())
        .filter(|&i| {
            let (a, b) = (w.y(i), w.y(i + 1));
            a != b && profile[&a.min(b)] == 1
        })
        .collect()
}

/// Structural summary of one self-avoiding walk. Renewal points and
/// zigzags are present only for bridges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renewal: Option<Vec<usize>>,
    pub diamond: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zigzags: Option<Vec<(usize, usize)>>,
    pub levels: BTreeMap<i64, usize>,
}

pub fn analyze(w: &SelfAvoidingWalk) -> StructureReport {
    let bridge = Bridge::from_saw(w.clone()).ok();
    StructureReport {
        renewal: bridge.as_ref().map(renewal_points),
        diamond: diamond_points(w),
        zigzags: bridge.as_ref().map(zigzags),
        levels: level_profile(w),
    }
}

impl StructureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Literal transcriptions of the definitions, quadratic or worse.
pub mod naive {
    use super::*;

    pub fn renewal_indices(b: &Walk) -> Vec<usize> {
        (0..=b.len())
            .filter(|&i| b.subwalk(0, i).is_bridge() && b.subwalk(i, b.len()).is_bridge())
            .collect()
    }

    pub fn diamond_points(w: &Walk) -> Vec<usize> {
        let n = w.len();
        let s = |k: usize| w.x(k) + w.y(k);
        let t = |k: usize| w.y(k) - w.x(k);
        (0..=n)
            .filter(|&i| {
                (i..=n).all(|j| s(j) >= s(i) && t(j) >= t(i))
                    && (i + 1..=n).all(|j| w.y(j) > w.y(i))
                    && (0..=i).all(|j| s(j) <= s(i) && t(j) <= t(i))
            })
            .collect()
    }

    pub fn zigzags(b: &Bridge) -> Vec<(usize, usize)> {
        let n = b.len();
        let h = b.heights();
        let last_arg = |range: std::ops::RangeInclusive<usize>, better: &dyn Fn(i64, i64) -> bool| {
            let mut best = *range.start();
            for k in range {
                if !better(h[best], h[k]) {
                    best = k;
                }
            }
            best
        };
        let mut out = Vec::new();
        for j in 1..=n {
            for i in 0..=j {
                let zig = last_arg(1..=j, &|best, k| best > k);
                let zag = last_arg(i..=n, &|best, k| best < k);
                if zig == i && zag == j {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn level_profile(w: &Walk) -> BTreeMap<i64, usize> {
        let (lo, hi) = w.bounding_box();
        let mut out = BTreeMap::new();
        for h in lo[Y] - 1..=hi[Y] {
            let c = super::visiting_edge_set(w, h).len();
            if c > 0 {
                out.insert(h, c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_sab;

    fn bridge(s: &str) -> Bridge {
        Bridge::parse(s, 2).unwrap()
    }

    const ZZ: &str = "+2,+2,+1,-2,+1,+2,+2";

    #[test]
    fn renewal_examples() {
        assert_eq!(renewal_points(&bridge("+2,+2,+2")), [0, 1, 2, 3]);
        assert_eq!(renewal_points(&bridge("+2,+1,+2")), [0, 2, 3]);
        assert_eq!(renewal_points(&bridge("+2,+1")), [0, 2]);
        assert_eq!(renewal_points(&bridge("")), [0]);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&bridge("+2")).unwrap());
        assert!(!is_irreducible(&bridge("+2,+2")).unwrap());
        assert!(is_irreducible(&bridge("+2,+1,+1")).unwrap());
        assert_eq!(is_irreducible(&bridge("")), Err(Error::EmptyBridge));
    }

    #[test]
    fn decomposition_examples() {
        let blocks = |s: &str| -> Vec<String> {
            decompose(&bridge(s)).unwrap().blocks.iter().map(|b| b.to_string()).collect()
        };
        assert_eq!(blocks("+2,+2"), ["+2", "+2"]);
        assert_eq!(blocks("+2,+1,+2"), ["+2,+1", "+2"]);
        assert_eq!(blocks("+2,+1,+1"), ["+2,+1,+1"]);
        assert_eq!(decompose(&bridge("")), Err(Error::EmptyBridge));
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond_points(&bridge("+2,+2,+2")), [0, 1, 2, 3]);
        assert_eq!(diamond_points(&bridge("+2,+1,+2")), [0, 3]);
    }

    #[test]
    fn zigzag_examples() {
        let n = 5;
        let straight = bridge(&vec!["+2"; n].join(","));
        let expected: Vec<(usize, usize)> = (1..=n).map(|i| (i, i)).collect();
        assert_eq!(zigzags(&straight), expected);
        assert_eq!(zigzags(&bridge(ZZ)), [(3, 5), (6, 6), (7, 7)]);
        assert!(zigzags(&bridge("")).is_empty());
    }

    #[test]
    fn flat_extra_axis_is_not_a_diamond() {
        let b = Bridge::parse("+2,+3", 3).unwrap();
        assert_eq!(diamond_points(&b), [0, 2]);
        assert_eq!(renewal_points(&b), [0, 2]);
    }

    #[test]
    fn level_examples() {
        let nnn = bridge("+2,+2,+2");
        assert_eq!(visiting_edge_set(&nnn, 1).len(), 1);
        let nen = bridge("+2,+1,+2");
        let v = visiting_edge_set(&nen, 0);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].0.coords(), [0, 0]);
        assert_eq!(v[0].1.coords(), [0, 1]);
        assert!(visiting_edge_set(&nen, 7).is_empty());
        assert_eq!(level_class(&nnn, 1), 3);
        assert_eq!(level_class(&bridge(ZZ), 1), 2);
        assert_eq!(level_class(&bridge(ZZ), 3), 3);
        assert_eq!(level_profile(&bridge(ZZ)), BTreeMap::from([(0, 1), (1, 3), (2, 1)]));
    }

    #[test]
    fn report_json_layout() {
        let w = SelfAvoidingWalk::new(Walk::parse("+2", 2).unwrap()).unwrap();
        assert_eq!(
            analyze(&w).to_json(),
            r#"{"renewal":[0,1],"diamond":[0,1],"zigzags":[[1,1]],"levels":{"0":1}}"#
        );
        let hook = SelfAvoidingWalk::new(Walk::parse("+1,+2", 2).unwrap()).unwrap();
        let j = analyze(&hook).to_json();
        assert!(!j.contains("renewal") && !j.contains("zigzags") && j.contains("diamond"));
    }

    #[test]
    fn renewal_indices_of_general_walks() {
        for n in 0..=7 {
            for w in crate::enumerate::enumerate_saw(n, 2).unwrap() {
                assert_eq!(renewal_indices(&w), naive::renewal_indices(&w), "{w}");
            }
        }
    }

    #[test]
    fn fast_scans_match_definitions_up_to_seven() {
        for (d, max_n) in [(2, 7), (3, 4)] {
            for n in 0..=max_n {
                for b in enumerate_sab(n, d).unwrap() {
                    assert_eq!(renewal_points(&b), naive::renewal_indices(&b), "{b}");
                    assert_eq!(diamond_points(&b), naive::diamond_points(&b), "{b}");
                    assert_eq!(zigzags(&b), naive::zigzags(&b), "{b}");
                    assert_eq!(level_profile(&b), naive::level_profile(&b), "{b}");
                }
            }
        }
    }
}
