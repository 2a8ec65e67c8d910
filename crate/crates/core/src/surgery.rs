//! Walk surgery: unfolding zigzags and breaking a bridge at two diamond
//! points.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Bridge, SelfAvoidingWalk, Step, Walk};
use crate::structure::{self, StructureReport};

/// `γ[0,i] ∘ R(γ[i,j]) ∘ γ[j,n]`, where `R` reflects through the level of
/// `γ_i`. The pair is checked against [`structure::zigzags`].
pub fn unfold(b: &Bridge, z: (usize, usize)) -> Result<Bridge> {
    if !structure::zigzags(b).contains(&z) {
        return Err(Error::NotZigzag(z.0, z.1));
    }
    Ok(unfold_unchecked(b, z))
}

fn unfold_unchecked(b: &Bridge, (i, j): (usize, usize)) -> Bridge {
    let middle = b.subwalk(i, j).reflect_across_height(b.y(i));
    let w = b
        .subwalk(0, i)
        .concat(&middle)
        .and_then(|w| w.concat(&b.subwalk(j, b.len())))
        .expect("same dimension");
    Bridge::new_unchecked(w)
}

/// Unfolds every zigzag of `zs` in turn. All of them must be zigzags of
/// the input; each remains one after the others are unfolded.
pub fn unfold_set(b: &Bridge, zs: &[(usize, usize)]) -> Result<Bridge> {
    let available = structure::zigzags(b);
    if let Some(&(i, j)) = zs.iter().find(|z| !available.contains(z)) {
        return Err(Error::NotZigzag(i, j));
    }
    let mut out = b.clone();
    for &z in zs {
        if !structure::zigzags(&out).contains(&z) {
            return Err(Error::Inconsistent(format!(
                "({}, {}) stopped being a zigzag of {out}",
                z.0, z.1
            )));
        }
        out = unfold_unchecked(&out, z);
    }
    Ok(out)
}

/// Zigzags `(i, j)` with `1 ≤ j - i ≤ max_central`. Pairs with `i = j`
/// unfold to the input itself and are left out.
pub fn short_zigzags(b: &Bridge, max_central: usize) -> Vec<(usize, usize)> {
    structure::zigzags(b)
        .into_iter()
        .filter(|&(i, j)| j > i && j - i <= max_central)
        .collect()
}

/// `Unf_Z(γ)` for every `k`-element set `Z` of short zigzags, in
/// lexicographic order of `Z`.
pub fn multi_unfold(
    b: &Bridge,
    k: usize,
    max_central: usize,
) -> Result<impl Iterator<Item = Bridge> + '_> {
    let short = short_zigzags(b, max_central);
    if short.len() < k {
        return Err(Error::TooFewShortZigzags {
            requested: k,
            available: short.len(),
        });
    }
    Ok(short.into_iter().combinations(k).map(move |zs| {
        zs.iter().fold(b.clone(), |acc, &z| unfold_unchecked(&acc, z))
    }))
}

/// Input and output of one [`unfold_set`] application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldRecord {
    pub input: Bridge,
    pub zigzag_set: Vec<(usize, usize)>,
    pub output: Bridge,
    /// Points of zig and zag of every unfolded pair, as output indices.
    pub generated_renewals: Vec<usize>,
}

pub fn unfold_record(b: &Bridge, zs: &[(usize, usize)]) -> Result<UnfoldRecord> {
    let output = unfold_set(b, zs)?;
    let mut generated_renewals: Vec<usize> = zs.iter().flat_map(|&(i, j)| [i, j]).collect();
    generated_renewals.sort_unstable();
    generated_renewals.dedup();
    Ok(UnfoldRecord {
        input: b.clone(),
        zigzag_set: zs.to_vec(),
        output,
        generated_renewals,
    })
}

/// `γ[0,d_i] ∘ e_1 ∘ ρ(γ[d_i,d_j]) ∘ e_1 ∘ γ[d_j,n]` with `ρ` the clockwise
/// quarter turn in the first two coordinates. `di < dj` must both be
/// diamond points of `b`.
pub fn stickbreak(b: &Bridge, di: usize, dj: usize) -> Result<SelfAvoidingWalk> {
    let diamonds = structure::diamond_points(b);
    for idx in [di, dj] {
        if !diamonds.contains(&idx) {
            return Err(Error::NotDiamond(idx));
        }
    }
    if di >= dj {
        return Err(Error::DiamondOrder(di, dj));
    }
    SelfAvoidingWalk::new(stickbreak_raw(b, di, dj))
}

/// The stickbreak construction without any validation of its inputs or
/// its output.
pub fn stickbreak_raw(w: &Walk, di: usize, dj: usize) -> Walk {
    let east = Walk::from_steps(w.dim(), &[Step::EAST]).expect("valid dimension");
    let middle = w.subwalk(di, dj).rotate_quarter_cw(&w.point(di));
    w.subwalk(0, di)
        .concat(&east)
        .and_then(|x| x.concat(&middle))
        .and_then(|x| x.concat(&east))
        .and_then(|x| x.concat(&w.subwalk(dj, w.len())))
        .expect("same dimension")
}

/// Undoes [`stickbreak`] given the indices `a < b` at which the two
/// inserted east edges start. Returns the original walk and its diamond
/// indices.
pub fn stickbreak_inverse(out: &Walk, a: usize, b: usize) -> Result<(Walk, usize, usize)> {
    if !(a < b && b < out.len()) {
        return Err(Error::Precondition(format!(
            "inserted edges at {a} and {b} do not fit a walk of length {}",
            out.len()
        )));
    }
    for k in [a, b] {
        if out.step(k) != Step::EAST {
            return Err(Error::Precondition(format!("step {k} is not +1")));
        }
    }
    let middle = out.subwalk(a + 1, b).rotate_quarter_ccw(&out.point(a + 1));
    let w = out
        .subwalk(0, a)
        .concat(&middle)
        .and_then(|w| w.concat(&out.subwalk(b + 1, out.len())))?;
    Ok((w, a, b - 1))
}

/// Newly created renewal indices inside the rotated span of a stickbreak:
/// output indices in `[di + 1, dj + 1]` that are renewal indices of the
/// output while the matching input index is not one of the input.
pub fn stickbreak_new_renewals(b: &Bridge, di: usize, dj: usize, out: &Walk) -> usize {
    let before = structure::renewal_points(b);
    structure::renewal_indices(out)
        .into_iter()
        .filter(|&k| k > di && k <= dj + 1 && !before.contains(&(k - 1)))
        .count()
}

/// Surgery trace: the input, the operation with its parameters, the output
/// and the structure of both walks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryTrace {
    pub input: Walk,
    pub operation: &'static str,
    pub parameters: Vec<usize>,
    pub output: Walk,
    pub input_report: StructureReport,
    pub output_report: StructureReport,
}

impl SurgeryTrace {
    pub fn unfold(b: &Bridge, z: (usize, usize)) -> Result<SurgeryTrace> {
        let out = unfold(b, z)?;
        Ok(Self::new(b, "unfold", vec![z.0, z.1], out.as_saw()))
    }

    pub fn stickbreak(b: &Bridge, di: usize, dj: usize) -> Result<SurgeryTrace> {
        let out = stickbreak(b, di, dj)?;
        Ok(Self::new(b, "stickbreak", vec![di, dj], &out))
    }

    fn new(b: &Bridge, operation: &'static str, parameters: Vec<usize>, out: &SelfAvoidingWalk) -> Self {
        SurgeryTrace {
            input: b.walk().clone(),
            operation,
            parameters,
            output: out.walk().clone(),
            input_report: structure::analyze(b.as_saw()),
            output_report: structure::analyze(out),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_sab;

    const ZZ: &str = "+2,+2,+1,-2,+1,+2,+2";

    fn bridge(s: &str) -> Bridge {
        Bridge::parse(s, 2).unwrap()
    }

    #[test]
    fn unfold_examples() {
        let b = bridge(ZZ);
        let out = unfold(&b, (3, 5)).unwrap();
        assert_eq!(out.to_string(), "+2,+2,+1,+2,+1,+2,+2");
        assert_eq!(out.end().y(), 5);
        assert_eq!(unfold(&b, (6, 6)).unwrap(), b);
        assert_eq!(unfold(&b, (2, 5)), Err(Error::NotZigzag(2, 5)));
    }

    #[test]
    fn unfold_set_examples() {
        let b = bridge(ZZ);
        assert_eq!(unfold_set(&b, &[]).unwrap(), b);
        assert_eq!(unfold_set(&b, &[(3, 5)]).unwrap(), unfold(&b, (3, 5)).unwrap());
        let r = unfold_record(&b, &[(3, 5)]).unwrap();
        assert_eq!(r.generated_renewals, [3, 5]);
        assert!(r.output.end().y() >= r.input.end().y());
    }

    #[test]
    fn multi_unfold_examples() {
        let b = bridge(ZZ);
        let zero: Vec<Bridge> = multi_unfold(&b, 0, 2).unwrap().collect();
        assert_eq!(zero, std::slice::from_ref(&b));
        let one: Vec<Bridge> = multi_unfold(&b, 1, 2).unwrap().collect();
        assert_eq!(one, [unfold(&b, (3, 5)).unwrap()]);
        assert!(matches!(
            multi_unfold(&b, 2, 2),
            Err(Error::TooFewShortZigzags { requested: 2, available: 1 })
        ));
    }

    #[test]
    fn stickbreak_examples() {
        let b = bridge("+2,+2,+2,+2");
        let out = stickbreak(&b, 1, 3).unwrap();
        assert_eq!(out.to_string(), "+2,+1,+1,+1,+1,+2");
        assert_eq!(stickbreak(&b, 3, 1), Err(Error::DiamondOrder(3, 1)));
        assert_eq!(stickbreak(&bridge("+2,+1,+2"), 1, 3), Err(Error::NotDiamond(1)));
        let (back, di, dj) = stickbreak_inverse(&out, 1, 4).unwrap();
        assert_eq!((back, di, dj), (b.walk().clone(), 1, 3));
        assert!(stickbreak_inverse(&out, 0, 4).is_err());
    }

    #[test]
    fn trace_json_fields() {
        let t = SurgeryTrace::unfold(&bridge(ZZ), (3, 5)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["operation"], "unfold");
        assert_eq!(v["parameters"], serde_json::json!([3, 5]));
        assert_eq!(v["output"]["steps"], "+2,+2,+1,+2,+1,+2,+2");
        assert!(v["output_report"]["renewal"].is_array());
    }

    #[test]
    fn unfold_commutes_up_to_seven() {
        for n in 1..=7 {
            for b in enumerate_sab(n, 2).unwrap() {
                for pair in structure::zigzags(&b).into_iter().combinations(2) {
                    let ab = unfold_set(&b, &[pair[0], pair[1]]).unwrap();
                    let ba = unfold_set(&b, &[pair[1], pair[0]]).unwrap();
                    assert_eq!(ab, ba, "{b}");
                }
            }
        }
    }
}
