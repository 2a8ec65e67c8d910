use std::collections::HashSet;

use proptest::prelude::*;
use sawkit::enumerate::hw_unfold;
use sawkit::montecarlo::sigma;
use sawkit::structure::{self, naive};
use sawkit::{surgery, Bridge, LatticePoint, SelfAvoidingWalk, Step, Walk};

/// Grows a self-avoiding walk from the origin, taking the first free
/// direction at or after each proposed one and stopping when trapped.
fn grow(d: usize, proposals: &[usize]) -> SelfAvoidingWalk {
    let mut at = vec![0i64; d];
    let mut seen = HashSet::from([at.clone()]);
    let mut steps = Vec::new();
    'outer: for &p in proposals {
        for k in 0..2 * d {
            let s = Step::from_index((p + k) % (2 * d));
            let mut next = at.clone();
            next[s.axis()] += s.sign();
            if seen.insert(next.clone()) {
                at = next;
                steps.push(s);
                continue 'outer;
            }
        }
        break;
    }
    SelfAvoidingWalk::new(Walk::from_steps(d, &steps).unwrap()).unwrap()
}

fn saw(d: usize, max_len: usize) -> impl Strategy<Value = SelfAvoidingWalk> {
    prop::collection::vec(0..2 * d, 0..=max_len).prop_map(move |p| grow(d, &p))
}

fn bridge(d: usize, max_len: usize) -> impl Strategy<Value = Bridge> {
    saw(d, max_len).prop_map(|w| hw_unfold(&w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trips(w in saw(3, 40)) {
        let back = Walk::parse(&w.to_string(), 3).unwrap();
        prop_assert_eq!(&back, w.walk());
    }

    #[test]
    fn hw_unfold_gives_a_bridge(w in saw(2, 60)) {
        let b = hw_unfold(&w);
        prop_assert!(b.is_bridge() && b.is_self_avoiding());
        prop_assert_eq!(b.len(), w.len());
        prop_assert_eq!(b.start(), w.start());
        prop_assert_eq!(hw_unfold(b.as_saw()), b);
    }

    #[test]
    fn hw_unfold_in_three_dimensions(w in saw(3, 40)) {
        let b = hw_unfold(&w);
        prop_assert!(b.is_bridge() && b.is_self_avoiding());
        prop_assert_eq!(b.len(), w.len());
    }

    #[test]
    fn structure_matches_naive(b in bridge(2, 40)) {
        prop_assert_eq!(structure::renewal_points(&b), naive::renewal_indices(&b));
        prop_assert_eq!(structure::diamond_points(&b), naive::diamond_points(&b));
        prop_assert_eq!(structure::zigzags(&b), naive::zigzags(&b));
        prop_assert_eq!(structure::level_profile(&b), naive::level_profile(&b));
    }

    #[test]
    fn diamonds_are_renewals(b in bridge(3, 30)) {
        let renewals = structure::renewal_points(&b);
        prop_assert!(structure::diamond_points(&b).iter().all(|k| renewals.contains(k)));
        prop_assert_eq!(renewals.first(), Some(&0));
        prop_assert_eq!(renewals.last(), Some(&b.len()));
    }

    #[test]
    fn decomposition_reassembles(b in bridge(2, 50)) {
        prop_assume!(!b.is_empty());
        let dec = structure::decompose(&b).unwrap();
        prop_assert_eq!(&dec.reassemble(&b.start()).unwrap(), b.walk());
        for block in &dec.blocks {
            prop_assert!(structure::is_irreducible(block).unwrap());
        }
        let total: usize = dec.blocks.iter().map(|x| x.len()).sum();
        prop_assert_eq!(total, b.len());
    }

    #[test]
    fn unfolding_raises_the_end(b in bridge(2, 40)) {
        for (i, j) in structure::zigzags(&b) {
            let out = surgery::unfold(&b, (i, j)).unwrap();
            prop_assert!(out.is_bridge() && out.is_self_avoiding());
            prop_assert_eq!(out.len(), b.len());
            prop_assert_eq!(out.subwalk(0, i), b.subwalk(0, i));
            let rise = 2 * (b.y(i) - b.y(j));
            prop_assert_eq!(out.end().y() - b.end().y(), rise);
            let renewals = structure::renewal_points(&out);
            prop_assert!(renewals.contains(&i) && renewals.contains(&j));
            let kept = structure::zigzags(&out);
            prop_assert!(structure::zigzags(&b).iter().filter(|&&z| z != (i, j)).all(|z| kept.contains(z)));
            for h in b.y(j)..b.y(i) {
                let before = structure::visiting_edge_set(&b, h).len();
                prop_assert!(structure::visiting_edge_set(&out, h).len() + 2 <= before);
            }
        }
    }

    #[test]
    fn multi_unfold_is_injective(b in bridge(2, 30), k in 1usize..=3) {
        if let Ok(outs) = surgery::multi_unfold(&b, k, 3) {
            let outs: Vec<Bridge> = outs.collect();
            let distinct: HashSet<&Bridge> = outs.iter().collect();
            prop_assert_eq!(distinct.len(), outs.len());
            prop_assert!(outs.iter().all(|o| o.is_bridge() && o.is_self_avoiding()));
        }
    }

    #[test]
    fn stickbreak_stays_self_avoiding(b in bridge(3, 30), pick in any::<(prop::sample::Index, prop::sample::Index)>()) {
        let diamonds = structure::diamond_points(&b);
        prop_assume!(diamonds.len() >= 2);
        let (x, y) = (pick.0.get(&diamonds), pick.1.get(&diamonds));
        prop_assume!(x != y);
        let (di, dj) = (*x.min(y), *x.max(y));
        let out = surgery::stickbreak(&b, di, dj).unwrap();
        prop_assert_eq!(out.len(), b.len() + 2);
        let fresh = surgery::stickbreak_new_renewals(&b, di, dj, &out);
        prop_assert!(fresh as i64 <= 3 * b.subwalk(di, dj).width());
        let (back, a, c) = surgery::stickbreak_inverse(&out, di, dj + 1).unwrap();
        prop_assert_eq!((&back, a, c), (b.walk(), di, dj));
    }

    #[test]
    fn sigma_is_an_involution(w in saw(2, 40)) {
        let s = sigma(&w);
        prop_assert_eq!(s.start(), LatticePoint::origin(2).unwrap());
        prop_assert_eq!(sigma(&s), w.to_origin());
    }
}
