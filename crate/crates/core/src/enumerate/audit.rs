use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{collect_saw, hw_unfold, Budget, EnumerationConfig};
use crate::error::{Error, Result};
use crate::lattice::Walk;

/// Both sides of the multi-valued map inequality
/// `|A| ≤ max_b |f⁻¹(b)| / min_a |f(a)| · |B|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MvmpAudit {
    pub lhs: usize,
    pub max_preimage: usize,
    pub min_image: usize,
    pub codomain_size: usize,
    pub rhs: BigRational,
    pub holds: bool,
}

/// Audit a finite multi-valued map given as `images[a] = f(a)`.
///
/// Repeated entries within one image count once. `codomain_size` is `|B|`
/// and must be at least the number of distinct image points.
pub fn mvmp_audit<B: Eq + Hash>(images: &[Vec<B>], codomain_size: usize) -> Result<MvmpAudit> {
    let mut preimages: HashMap<&B, usize> = HashMap::new();
    let mut min_image = usize::MAX;
    for (a, image) in images.iter().enumerate() {
        let mut distinct: Vec<&B> = Vec::with_capacity(image.len());
        for b in image {
            if !distinct.contains(&b) {
                distinct.push(b);
            }
        }
        if distinct.is_empty() {
            return Err(Error::EmptyImage(a));
        }
        min_image = min_image.min(distinct.len());
        for b in distinct {
            *preimages.entry(b).or_default() += 1;
        }
    }
    if preimages.len() > codomain_size {
        return Err(Error::Precondition(format!(
            "{} distinct image points but |B| = {codomain_size}",
            preimages.len()
        )));
    }
    let max_preimage = preimages.values().copied().max().unwrap_or(0);
    let lhs = images.len();
    let rhs = if lhs == 0 {
        BigRational::from_integer(0.into())
    } else {
        BigRational::new(
            (max_preimage * codomain_size).into(),
            min_image.into(),
        )
    };
    let holds = BigRational::from_integer(lhs.into()) <= rhs;
    Ok(MvmpAudit {
        lhs,
        max_preimage,
        min_image: if lhs == 0 { 0 } else { min_image },
        codomain_size,
        rhs,
        holds,
    })
}

/// Exact check of `C(n1, m) / C(n2, m) ≥ ((n1 - m) / n2)^m` for
/// `n1 ≥ n2 ≥ m`.
pub fn binom_ratio_check(n1: u64, n2: u64, m: u64) -> Result<bool> {
    if !(n1 >= n2 && n2 >= m) {
        return Err(Error::Precondition(format!(
            "need n1 ≥ n2 ≥ m, got ({n1}, {n2}, {m})"
        )));
    }
    if m == 0 {
        return Ok(true);
    }
    let big = |x: u64| BigUint::from(x);
    let lhs = BigRational::new(
        binomial(big(n1), big(m)).into(),
        binomial(big(n2), big(m)).into(),
    );
    let base = BigRational::new((n1 - m).into(), n2.into());
    let rhs: BigRational = Pow::pow(base, m as u32);
    Ok(lhs >= rhs)
}

/// Number of partitions of `n` into distinct parts.
pub fn distinct_partitions(n: usize) -> BigUint {
    let mut ways = vec![BigUint::from(0u32); n + 1];
    ways[0] = BigUint::one();
    for part in 1..=n {
        for total in (part..=n).rev() {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    ways.swap_remove(n)
}

/// Preimage statistics of [`hw_unfold`] over walks of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageProfile {
    pub n: usize,
    pub walks: usize,
    pub images: usize,
    pub max_multiplicity: usize,
    /// A bridge attaining the maximum.
    pub worst: Option<Walk>,
}

/// Exhaustive preimage count of [`hw_unfold`] over `SAW_n`. With
/// `half_space_only`, only walks whose start is the unique lowest point
/// are fed to the map.
pub fn hw_preimage_profile(n: usize, d: usize, half_space_only: bool) -> Result<PreimageProfile> {
    let cfg = EnumerationConfig {
        budget: Budget::EXHAUSTIVE,
        ..EnumerationConfig::default()
    };
    let walks = collect_saw(n, d, &cfg)?;
    let mut counts: HashMap<Walk, usize> = HashMap::new();
    let mut fed = 0;
    for w in &walks {
        if half_space_only && (1..=n).any(|k| w.y(k) <= w.y(0)) {
            continue;
        }
        fed += 1;
        *counts.entry(hw_unfold(w).into_walk()).or_default() += 1;
    }
    let worst = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.steps().cmp(&a.0.steps())))
        .map(|(w, &m)| (w.clone(), m));
    Ok(PreimageProfile {
        n,
        walks: fed,
        images: counts.len(),
        max_multiplicity: worst.as_ref().map_or(0, |w| w.1),
        worst: worst.map(|w| w.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_constant_maps() {
        let identity: Vec<Vec<u8>> = (0..5).map(|a| vec![a]).collect();
        let a = mvmp_audit(&identity, 5).unwrap();
        assert_eq!((a.lhs, a.max_preimage, a.min_image), (5, 1, 1));
        assert_eq!(a.rhs, BigRational::from_integer(5.into()));
        assert!(a.holds);

        let constant = vec![vec!['b'], vec!['b'], vec!['b']];
        let a = mvmp_audit(&constant, 1).unwrap();
        assert_eq!(a.rhs, BigRational::from_integer(3.into()));
        assert!(a.holds);
    }

    #[test]
    fn mvmp_errors_and_multiplicity() {
        let with_empty: Vec<Vec<u8>> = vec![vec![1], vec![]];
        assert_eq!(mvmp_audit(&with_empty, 3), Err(Error::EmptyImage(1)));
        assert!(mvmp_audit(&[vec![1u8], vec![2]], 1).is_err());
        // duplicates inside an image count once
        let a = mvmp_audit(&[vec![1u8, 1, 2], vec![2, 3]], 3).unwrap();
        assert_eq!((a.max_preimage, a.min_image), (2, 2));
        assert_eq!(a.rhs, BigRational::from_integer(3.into()));
        let empty: Vec<Vec<u8>> = vec![];
        assert!(mvmp_audit(&empty, 0).unwrap().holds);
    }

    #[test]
    fn binom_ratio_edges() {
        assert!(binom_ratio_check(7, 4, 0).unwrap());
        assert!(binom_ratio_check(5, 5, 5).unwrap());
        assert!(binom_ratio_check(0, 0, 0).unwrap());
        assert!(binom_ratio_check(60, 31, 17).unwrap());
        assert!(binom_ratio_check(3, 4, 1).is_err());
        assert!(binom_ratio_check(4, 2, 3).is_err());
    }

    #[test]
    fn distinct_partition_numbers() {
        // brute force over subsets of {1..n}
        for n in 0..=16usize {
            let brute = (0u32..1 << n)
                .filter(|mask| (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).sum::<usize>() == n)
                .count();
            assert_eq!(distinct_partitions(n), BigUint::from(brute), "n={n}");
        }
    }
}
