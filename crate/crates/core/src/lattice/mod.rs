//! Lattice points, walks and the geometric operations on them.
//!
//! Coordinates are indexed from zero in code: axis 0 is the x (east)
//! coordinate and axis 1 the y (north) coordinate. The text format uses
//! one-based axis numbers, so `+2` is a step north.

mod occupancy;
mod text;

use std::fmt;
use std::ops::Deref;

pub use occupancy::{Occupancy, DEFAULT_GRID_BUDGET};
pub use text::WalkJson;

use crate::error::{Error, Result};

pub const X: usize = 0;
pub const Y: usize = 1;

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// A point of the integer lattice `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        check_dim(coords.len())?;
        Ok(LatticePoint { coords })
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn x(&self) -> i64 {
        self.coords[X]
    }

    pub fn y(&self) -> i64 {
        self.coords[Y]
    }
}

impl From<LatticePoint> for Vec<i64> {
    fn from(p: LatticePoint) -> Self {
        p.coords
    }
}

/// A unit step `±e_k`.
///
/// Steps are totally ordered as `+e_1 < -e_1 < +e_2 < -e_2 < ...`, which is
/// the order used by every enumerator in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    index: u8,
}

impl Step {
    pub const EAST: Step = Step { index: 0 };
    pub const WEST: Step = Step { index: 1 };
    pub const NORTH: Step = Step { index: 2 };
    pub const SOUTH: Step = Step { index: 3 };

    /// Step along zero-based `axis`, positive or negative.
    pub fn new(axis: usize, positive: bool) -> Step {
        assert!(axis < 128, "axis {axis} too large");
        Step {
            index: (2 * axis + usize::from(!positive)) as u8,
        }
    }

    /// The `k`-th step in enumeration order.
    pub fn from_index(k: usize) -> Step {
        Step::new(k / 2, k % 2 == 0)
    }

    /// All `2d` steps in enumeration order.
    pub fn all(d: usize) -> impl Iterator<Item = Step> {
        (0..2 * d).map(Step::from_index)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn axis(self) -> usize {
        self.index as usize / 2
    }

    pub fn is_positive(self) -> bool {
        self.index % 2 == 0
    }

    pub fn sign(self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn reverse(self) -> Step {
        Step {
            index: self.index ^ 1,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { '+' } else { '-' };
        write!(f, "{sign}{}", self.axis() + 1)
    }
}

/// A nearest-neighbour walk `γ_0, ..., γ_n` in `Z^d`.
///
/// Points are stored flat, `d` coordinates per point. Walks are immutable
/// values: every transform returns a new walk.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    dim: usize,
    coords: Vec<i64>,
}

impl Walk {
    /// The length-0 walk sitting at `start`.
    pub fn trivial_at(start: &LatticePoint) -> Walk {
        Walk {
            dim: start.dim(),
            coords: start.coords.clone(),
        }
    }

    /// The length-0 walk at the origin of `Z^d`.
    pub fn trivial(d: usize) -> Result<Walk> {
        Ok(Walk::trivial_at(&LatticePoint::origin(d)?))
    }

    pub fn from_points(points: &[LatticePoint]) -> Result<Walk> {
        let first = points
            .first()
            .ok_or_else(|| Error::Precondition("a walk has at least one point".into()))?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            coords.extend_from_slice(&p.coords);
        }
        let walk = Walk { dim, coords };
        for i in 0..walk.len() {
            if walk.step_between(i).is_none() {
                return Err(Error::NonUnitStep { index: i });
            }
        }
        Ok(walk)
    }

    /// Walk from the origin following `steps`.
    pub fn from_steps(d: usize, steps: &[Step]) -> Result<Walk> {
        Walk::from_steps_at(&LatticePoint::origin(d)?, steps)
    }

    pub fn from_steps_at(start: &LatticePoint, steps: &[Step]) -> Result<Walk> {
        let dim = start.dim();
        let mut coords = Vec::with_capacity(dim * (steps.len() + 1));
        coords.extend_from_slice(&start.coords);
        for s in steps {
            if s.axis() >= dim {
                return Err(Error::AxisOutOfRange {
                    token: s.to_string(),
                    axis: s.axis() + 1,
                    dim,
                });
            }
            let base = coords.len() - dim;
            coords.extend_from_within(base..base + dim);
            let last = coords.len() - dim;
            coords[last + s.axis()] += s.sign();
        }
        Ok(Walk { dim, coords })
    }

    /// Internal constructor for flat coordinates already known to be valid.
    pub(crate) fn from_flat(dim: usize, coords: Vec<i64>) -> Walk {
        debug_assert_eq!(coords.len() % dim, 0);
        Walk { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim - 1
    }

    /// True for the length-0 walk.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of `γ_i`.
    pub fn at(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> LatticePoint {
        LatticePoint {
            coords: self.at(i).to_vec(),
        }
    }

    pub fn points(&self) -> impl DoubleEndedIterator<Item = &[i64]> + ExactSizeIterator + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn x(&self, i: usize) -> i64 {
        self.coords[i * self.dim + X]
    }

    pub fn y(&self, i: usize) -> i64 {
        self.coords[i * self.dim + Y]
    }

    /// The y-coordinates of all points, in order.
    pub fn heights(&self) -> Vec<i64> {
        (0..=self.len()).map(|i| self.y(i)).collect()
    }

    pub fn start(&self) -> LatticePoint {
        self.point(0)
    }

    pub fn end(&self) -> LatticePoint {
        self.point(self.len())
    }

    fn step_between(&self, i: usize) -> Option<Step> {
        let (a, b) = (self.at(i), self.at(i + 1));
        let mut found = None;
        for k in 0..self.dim {
            match b[k] - a[k] {
                0 => {}
                1 | -1 if found.is_none() => found = Some(Step::new(k, b[k] > a[k])),
                _ => return None,
            }
        }
        found
    }

    /// The `i`-th step, from `γ_i` to `γ_{i+1}`.
    pub fn step(&self, i: usize) -> Step {
        self.step_between(i).expect("walk invariant: unit steps")
    }

    pub fn steps(&self) -> Vec<Step> {
        (0..self.len()).map(|i| self.step(i)).collect()
    }

    /// The sub-walk `γ[a, b]`, keeping its position in space.
    pub fn subwalk(&self, a: usize, b: usize) -> Walk {
        assert!(a <= b && b <= self.len(), "bad subwalk range [{a}, {b}]");
        Walk {
            dim: self.dim,
            coords: self.coords[a * self.dim..(b + 1) * self.dim].to_vec(),
        }
    }

    /// The same walk translated by `offset`.
    pub fn translated(&self, offset: &[i64]) -> Walk {
        assert_eq!(offset.len(), self.dim);
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| c + offset[k % self.dim])
            .collect();
        Walk {
            dim: self.dim,
            coords,
        }
    }

    /// Translate so that the walk starts at the origin.
    pub fn to_origin(&self) -> Walk {
        let offset: Vec<i64> = self.at(0).iter().map(|c| -c).collect();
        self.translated(&offset)
    }

    /// The walk traversed backwards.
    pub fn reversed(&self) -> Walk {
        let coords = self
            .points()
            .rev()
            .flat_map(|p| p.iter().copied())
            .collect();
        Walk {
            dim: self.dim,
            coords,
        }
    }

    /// Concatenation `self ∘ other`: `other` is translated so that its
    /// start lands on the end of `self`.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let end = self.at(self.len());
        let start = other.at(0);
        let mut coords = self.coords.clone();
        coords.reserve(other.len() * self.dim);
        for p in other.points().skip(1) {
            coords.extend((0..self.dim).map(|k| end[k] + p[k] - start[k]));
        }
        Ok(Walk {
            dim: self.dim,
            coords,
        })
    }

    /// Reflection through the hyperplane `{y = y(v)}`.
    pub fn reflect_across_y_level(&self, v: &LatticePoint) -> Walk {
        self.reflect_across_height(v.y())
    }

    pub(crate) fn reflect_across_height(&self, level: i64) -> Walk {
        let mut coords = self.coords.clone();
        for p in coords.chunks_exact_mut(self.dim) {
            p[Y] = 2 * level - p[Y];
        }
        Walk {
            dim: self.dim,
            coords,
        }
    }

    /// Clockwise quarter turn about `pivot` in every plane of fixed
    /// coordinates `3..d`.
    pub fn rotate_quarter_cw(&self, pivot: &LatticePoint) -> Walk {
        let (px, py) = (pivot.x(), pivot.y());
        let mut coords = self.coords.clone();
        for p in coords.chunks_exact_mut(self.dim) {
            let (x, y) = (p[X], p[Y]);
            p[X] = px + (y - py);
            p[Y] = py - (x - px);
        }
        Walk {
            dim: self.dim,
            coords,
        }
    }

    /// Counter-clockwise quarter turn about `pivot`; inverse of
    /// [`Walk::rotate_quarter_cw`].
    pub fn rotate_quarter_ccw(&self, pivot: &LatticePoint) -> Walk {
        let (px, py) = (pivot.x(), pivot.y());
        let mut coords = self.coords.clone();
        for p in coords.chunks_exact_mut(self.dim) {
            let (x, y) = (p[X], p[Y]);
            p[X] = px - (y - py);
            p[Y] = py + (x - px);
        }
        Walk {
            dim: self.dim,
            coords,
        }
    }

    /// Largest difference of x-coordinates along the walk.
    pub fn width(&self) -> i64 {
        self.spread(X)
    }

    /// Largest difference of y-coordinates along the walk.
    pub fn height_spread(&self) -> i64 {
        self.spread(Y)
    }

    fn spread(&self, axis: usize) -> i64 {
        let (lo, hi) = self.points().fold((i64::MAX, i64::MIN), |(lo, hi), p| {
            (lo.min(p[axis]), hi.max(p[axis]))
        });
        hi - lo
    }

    /// Bounding box `(lo, hi)` of the walk.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.at(0).to_vec();
        let mut hi = lo.clone();
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Index of the first repeated point, if any.
    pub fn first_revisit(&self) -> Option<usize> {
        let (lo, hi) = self.bounding_box();
        let mut occ = Occupancy::for_box(&lo, &hi, DEFAULT_GRID_BUDGET);
        self.points().position(|p| !occ.insert(p))
    }

    pub fn is_self_avoiding(&self) -> bool {
        self.first_revisit().is_none()
    }

    /// The two height conditions of a bridge: `γ_0` is the unique lowest
    /// point and `γ_n` is a highest point.
    pub fn has_bridge_heights(&self) -> bool {
        bridge_height_violation(self).is_none()
    }

    pub fn is_bridge(&self) -> bool {
        self.has_bridge_heights() && self.is_self_avoiding()
    }
}

fn bridge_height_violation(w: &Walk) -> Option<&'static str> {
    let y0 = w.y(0);
    let yn = w.y(w.len());
    for k in 1..=w.len() {
        if w.y(k) <= y0 {
            return Some("the start is not the unique lowest point");
        }
        if w.y(k) > yn {
            return Some("the end is not a highest point");
        }
    }
    None
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.step(i))?;
        }
        Ok(())
    }
}

/// A walk visiting no point twice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SelfAvoidingWalk(Walk);

impl SelfAvoidingWalk {
    pub fn new(walk: Walk) -> Result<Self> {
        match walk.first_revisit() {
            None => Ok(SelfAvoidingWalk(walk)),
            Some(index) => Err(Error::NotSelfAvoiding {
                point: walk.at(index).to_vec(),
                index,
            }),
        }
    }

    pub(crate) fn new_unchecked(walk: Walk) -> Self {
        debug_assert!(walk.is_self_avoiding());
        SelfAvoidingWalk(walk)
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn into_walk(self) -> Walk {
        self.0
    }

    pub fn is_bridge(&self) -> bool {
        self.0.has_bridge_heights()
    }
}

impl Deref for SelfAvoidingWalk {
    type Target = Walk;
    fn deref(&self) -> &Walk {
        &self.0
    }
}

impl TryFrom<Walk> for SelfAvoidingWalk {
    type Error = Error;
    fn try_from(w: Walk) -> Result<Self> {
        SelfAvoidingWalk::new(w)
    }
}

/// A self-avoiding walk whose start is the unique lowest point and whose
/// end is a highest point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bridge(SelfAvoidingWalk);

impl Bridge {
    pub fn new(walk: Walk) -> Result<Self> {
        Bridge::from_saw(SelfAvoidingWalk::new(walk)?)
    }

    pub fn from_saw(saw: SelfAvoidingWalk) -> Result<Self> {
        match bridge_height_violation(&saw) {
            None => Ok(Bridge(saw)),
            Some(why) => Err(Error::NotBridge(why)),
        }
    }

    pub(crate) fn new_unchecked(walk: Walk) -> Self {
        debug_assert!(walk.is_bridge(), "not a bridge: {walk}");
        Bridge(SelfAvoidingWalk(walk))
    }

    /// Parse a bridge from the step text format.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        Bridge::new(Walk::parse(text, d)?)
    }

    pub fn as_saw(&self) -> &SelfAvoidingWalk {
        &self.0
    }

    pub fn walk(&self) -> &Walk {
        &self.0 .0
    }

    pub fn into_walk(self) -> Walk {
        self.0 .0
    }
}

impl Deref for Bridge {
    type Target = Walk;
    fn deref(&self) -> &Walk {
        &self.0 .0
    }
}

impl TryFrom<Walk> for Bridge {
    type Error = Error;
    fn try_from(w: Walk) -> Result<Self> {
        Bridge::new(w)
    }
}

/// True iff all points of `w` are distinct.
pub fn is_self_avoiding(w: &Walk) -> bool {
    w.is_self_avoiding()
}

/// True iff the self-avoiding walk `w` satisfies both bridge conditions.
pub fn is_bridge(w: &SelfAvoidingWalk) -> bool {
    w.is_bridge()
}

/// `a ∘ b`.
pub fn concat(a: &Walk, b: &Walk) -> Result<Walk> {
    a.concat(b)
}

/// Maximum x-spread of `w`.
pub fn width(w: &Walk) -> i64 {
    w.width()
}

impl fmt::Display for SelfAvoidingWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for Bridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
