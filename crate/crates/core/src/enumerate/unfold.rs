use crate::lattice::{Bridge, SelfAvoidingWalk, Walk, Y};

/// Hammersley–Welsh style unfolding of a self-avoiding walk into a bridge
/// of the same length, anchored at the same start point.
///
/// 1. A global lattice symmetry fixing `γ_0` turns the first step into
///    `+e_2`.
/// 2. On the walk after that first step, the prefix up to the first lowest
///    point is reflected through the level of that point until the
///    first point is a lowest one. The north step is then re-attached
///    below it, so the start becomes the unique lowest point.
/// 3. While the last highest point `γ_k` has `k < n`, the part after it is
///    reflected through its level.
///
/// Bridges are fixed points.
pub fn hw_unfold(w: &SelfAvoidingWalk) -> Bridge {
    if w.is_bridge() || w.is_empty() {
        return Bridge::new_unchecked(w.walk().clone());
    }
    let start = w.at(0).to_vec();
    let oriented = first_step_north(w.walk());
    let lifted = lift_start(&oriented);
    let unfolded = unfold_top(lifted);
    let offset: Vec<i64> = start.iter().zip(unfolded.at(0)).map(|(s, u)| s - u).collect();
    Bridge::new_unchecked(unfolded.translated(&offset))
}

fn first_step_north(w: &Walk) -> Walk {
    let first = w.step(0);
    let pivot = w.start();
    match (first.axis(), first.is_positive()) {
        (1, true) => w.clone(),
        (1, false) => w.reflect_across_y_level(&pivot),
        (0, true) => w.rotate_quarter_ccw(&pivot),
        (0, false) => w.rotate_quarter_cw(&pivot),
        (axis, positive) => {
            // exchange axis `axis` with y, then fix the sign
            let d = w.dim();
            let mut coords = Vec::with_capacity(d * (w.len() + 1));
            for p in w.points() {
                let mut q = p.to_vec();
                q.swap(axis, Y);
                coords.extend_from_slice(&q);
            }
            let swapped = Walk::from_flat(d, coords);
            if positive {
                swapped
            } else {
                swapped.reflect_across_y_level(&pivot)
            }
        }
    }
}

/// Input starts with a north step. Returns a walk of the same length
/// whose start is the unique lowest point.
fn lift_start(w: &Walk) -> Walk {
    let mut rest = w.subwalk(1, w.len());
    loop {
        let heights = rest.heights();
        let low = *heights.iter().min().unwrap();
        let p = heights.iter().position(|&y| y == low).unwrap();
        if p == 0 {
            break;
        }
        let head = rest.subwalk(0, p).reflect_across_height(low);
        rest = head.concat(&rest.subwalk(p, rest.len())).unwrap();
    }
    let mut below = rest.at(0).to_vec();
    below[Y] -= 1;
    let mut coords = below;
    for p in rest.points() {
        coords.extend_from_slice(p);
    }
    Walk::from_flat(w.dim(), coords)
}

/// Reflect the tail after the last highest point until the end is highest.
fn unfold_top(mut w: Walk) -> Walk {
    loop {
        let heights = w.heights();
        let top = *heights.iter().max().unwrap();
        let k = heights.iter().rposition(|&y| y == top).unwrap();
        if k == w.len() {
            return w;
        }
        let tail = w.subwalk(k, w.len()).reflect_across_height(top);
        w = w.subwalk(0, k).concat(&tail).unwrap();
    }
}
