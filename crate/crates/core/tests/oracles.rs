//! Library results checked against small independent computations.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_rational::BigRational;
use sawkit::enumerate::{self, Budget, EnumerationConfig};
use sawkit::montecarlo;
use sawkit::{structure, surgery, Bridge, Walk};

/// All `(2d)^n` step strings as point lists, with no pruning.
fn all_paths(n: usize, d: usize) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for code in 0..(2 * d).pow(n as u32) {
        let mut c = code;
        let mut p = vec![0i64; d];
        let mut pts = vec![p.clone()];
        for _ in 0..n {
            let s = c % (2 * d);
            c /= 2 * d;
            p[s / 2] += if s % 2 == 0 { 1 } else { -1 };
            pts.push(p.clone());
        }
        out.push(pts);
    }
    out
}

fn avoiding(pts: &[Vec<i64>]) -> bool {
    pts.iter().collect::<HashSet<_>>().len() == pts.len()
}

fn bridge_heights(pts: &[Vec<i64>]) -> bool {
    let y: Vec<i64> = pts.iter().map(|p| p[1]).collect();
    let n = y.len() - 1;
    (1..=n).all(|k| y[0] < y[k] && y[k] <= y[n])
}

fn irreducible(pts: &[Vec<i64>]) -> bool {
    let n = pts.len() - 1;
    (1..n).all(|i| !(bridge_heights(&pts[..=i]) && bridge_heights(&pts[i..])))
}

/// `(c, b, i)` at one length by generate-and-filter.
fn naive_counts(n: usize, d: usize) -> (u64, u64, u64) {
    let (mut c, mut b, mut i) = (0, 0, 0);
    for pts in all_paths(n, d).iter().filter(|p| avoiding(p)) {
        c += 1;
        if n == 0 || bridge_heights(pts) {
            b += 1;
            if n > 0 && irreducible(pts) {
                i += 1;
            }
        }
    }
    (c, b, i)
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn counts_match_generate_and_filter() {
    for (d, max_n) in [(2, 9), (3, 5)] {
        let table = enumerate::build_counts_table(max_n, d).unwrap();
        for n in 0..=max_n {
            let (c, b, i) = naive_counts(n, d);
            assert_eq!(table.c[n], big(c), "c_{n} in d = {d}");
            assert_eq!(table.b[n], big(b), "b_{n} in d = {d}");
            if n > 0 {
                assert_eq!(table.i[n], Some(big(i)), "i_{n} in d = {d}");
            }
        }
    }
}

#[test]
fn short_rows_and_convolution() {
    let t = enumerate::build_counts_table(3, 2).unwrap();
    let row = |v: &[BigUint]| v.iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>();
    assert_eq!(row(&t.c), [1, 4, 12, 36]);
    assert_eq!(row(&t.b), [1, 1, 3, 7]);
    assert_eq!(t.i[0], None);
    let i = |k: usize| t.irreducible(k);
    assert_eq!(t.b[3], i(1) * &t.b[2] + i(2) * &t.b[1] + i(3));
}

#[test]
fn growth_ratios() {
    let t = enumerate::build_counts_table(14, 2).unwrap();
    let c = |n: usize| t.c[n].to_f64().unwrap();
    assert_eq!(t.c[10], big(44100));
    assert_eq!(t.c[11], big(120292));
    assert!((c(11) / c(10) - 120292.0 / 44100.0).abs() < 1e-15);
    assert!((c(11) / c(10) - 2.7277).abs() < 5e-5);
    // submultiplicativity: c_{2n} <= c_n^2
    for n in 1..=7 {
        assert!(t.c[2 * n] <= &t.c[n] * &t.c[n], "n = {n}");
        assert!(c(n).powf(1.0 / n as f64) >= c(2 * n).powf(0.5 / n as f64));
    }
}

#[test]
fn kesten_partial_sums_at_fourteen() {
    let t = enumerate::build_counts_table(14, 2).unwrap();
    let mu = t.c[14].to_f64().unwrap().powf(1.0 / 14.0);
    assert!((mu - 2.853_627_494_956_789).abs() < 1e-12);
    let audit = enumerate::kesten_partial_sums(&t, mu).unwrap();
    let by_hand: f64 = (1..=14)
        .map(|k| t.irreducible(k).to_f64().unwrap() * mu.powi(-(k as i32)))
        .sum();
    let last = *audit.partial_sums.last().unwrap();
    assert!((last - by_hand).abs() < 1e-12);
    assert!((last - 0.757_955_192_554_974_7).abs() < 1e-12);
    assert!(audit.is_strictly_increasing() && audit.all_below_one());
}

#[test]
fn distinct_partitions_by_subsets() {
    for n in 0..=20usize {
        let brute = (0u32..1 << n)
            .filter(|mask| (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).sum::<usize>() == n)
            .count();
        assert_eq!(enumerate::distinct_partitions(n), big(brute as u64), "PD({n})");
    }
}

#[test]
fn multi_unfold_on_length_eight() {
    let cfg = EnumerationConfig {
        budget: Budget::EXHAUSTIVE,
        ..EnumerationConfig::default()
    };
    let bridges = enumerate::collect_sab(8, 2, &cfg).unwrap();
    let all: HashSet<&Walk> = bridges.iter().map(|b| b.walk()).collect();
    let mut images = Vec::new();
    for b in &bridges {
        let short = surgery::short_zigzags(b, 3);
        if short.is_empty() {
            continue;
        }
        let outs: Vec<Walk> = surgery::multi_unfold(b, 1, 3).unwrap().map(|o| o.into_walk()).collect();
        assert_eq!(outs.len(), short.len());
        assert!(outs.iter().all(|o| all.contains(o)));
        images.push(outs);
    }
    assert!(!images.is_empty());

    // preimage sizes and the bound, computed here directly
    let mut preimages: HashMap<&Walk, usize> = HashMap::new();
    for outs in &images {
        for o in outs.iter().collect::<HashSet<_>>() {
            *preimages.entry(o).or_default() += 1;
        }
    }
    let max_pre = *preimages.values().max().unwrap();
    let min_img = images.iter().map(|o| o.iter().collect::<HashSet<_>>().len()).min().unwrap();
    let rhs = BigRational::new(BigInt::from(max_pre * bridges.len()), BigInt::from(min_img));
    let got = enumerate::mvmp_audit(&images, bridges.len()).unwrap();
    assert_eq!(got.lhs, images.len());
    assert_eq!((got.max_preimage, got.min_image), (max_pre, min_img));
    assert_eq!(got.rhs, rhs);
    assert!(got.holds && BigRational::from_integer(images.len().into()) <= rhs);
}

#[test]
fn binomial_ratio_by_cleared_products() {
    let binom = |n: u64, k: u64| -> BigUint {
        (0..k).fold(BigUint::from(1u32), |acc, j| acc * (n - j) / (j + 1))
    };
    for n1 in 1..=30u64 {
        for n2 in 1..=n1 {
            for m in 0..=n2 {
                // C(n1, m) n2^m against C(n2, m) (n1 - m)^m, cleared of denominators
                let lhs = BigInt::from(binom(n1, m)) * BigInt::from(n2).pow(m as u32);
                let rhs = BigInt::from(binom(n2, m)) * BigInt::from(n1 - m).pow(m as u32);
                assert!(lhs >= rhs, "{n1} {n2} {m}");
                assert!(enumerate::binom_ratio_check(n1, n2, m).unwrap());
            }
        }
    }
}

#[test]
fn block_frequencies_at_two() {
    let mu = 2.7;
    let law = montecarlo::build_truncated_law(2, mu, 2).unwrap();
    let steps: Vec<String> = law.support.iter().map(|b| b.to_string()).collect();
    assert_eq!(steps, ["+2", "+2,+1", "+2,-1"]);
    let z = 1.0 / mu + 2.0 / (mu * mu);
    assert!((law.z - z).abs() < 1e-15);
    let p = [1.0 / mu / z, 1.0 / (mu * mu) / z, 1.0 / (mu * mu) / z];

    let draws = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut hits = [0usize; 3];
    for _ in 0..draws {
        let b = montecarlo::sample_block(&law, &mut rng);
        hits[law.support.iter().position(|s| s == b).unwrap()] += 1;
    }
    for k in 0..3 {
        let f = hits[k] as f64 / draws as f64;
        let se = (p[k] * (1.0 - p[k]) / draws as f64).sqrt();
        assert!((f - p[k]).abs() <= 3.0 * se, "block {k}: {f} vs {}", p[k]);
    }
}

#[test]
fn pstar_strips_the_first_edge() {
    let ne = Bridge::parse("+2,+1", 2).unwrap();
    let e = montecarlo::strip_first_edge(&ne);
    assert_eq!(e, Walk::parse("+1", 2).unwrap());
    assert_eq!(e.start().coords(), [0, 0]);
    let n = Bridge::parse("+2", 2).unwrap();
    assert!(montecarlo::strip_first_edge(&n).is_empty());
}

#[test]
fn irreducible_blocks_match_filter() {
    // decomposition cuts agree with the brute-force renewal test
    let cfg = EnumerationConfig::default();
    for b in enumerate::collect_sab(7, 2, &cfg).unwrap() {
        let pts: Vec<Vec<i64>> = b.walk().points().map(|p| p.to_vec()).collect();
        assert_eq!(structure::is_irreducible(&b).unwrap(), irreducible(&pts), "{b}");
    }
}
