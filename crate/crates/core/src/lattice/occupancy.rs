use std::collections::HashSet;

/// Default cell budget for the bit-packed occupancy grid.
pub const DEFAULT_GRID_BUDGET: usize = 1 << 22;

/// Set of occupied lattice sites.
///
/// A bit-packed grid is used when the bounding box fits within the cell
/// budget, a hash set otherwise. Both answer the same queries.
#[derive(Debug, Clone)]
pub enum Occupancy {
    Grid(Grid),
    Hashed(HashSet<Vec<i64>>),
}

impl Occupancy {
    /// Occupancy structure able to hold every site in the box `[lo, hi]`.
    pub fn for_box(lo: &[i64], hi: &[i64], budget: usize) -> Self {
        match Grid::new(lo, hi, budget) {
            Some(grid) => Occupancy::Grid(grid),
            None => Occupancy::Hashed(HashSet::new()),
        }
    }

    /// Box centred on `center` with radius `radius` in every axis.
    pub fn for_radius(center: &[i64], radius: usize, budget: usize) -> Self {
        let r = radius as i64;
        let lo: Vec<i64> = center.iter().map(|c| c - r).collect();
        let hi: Vec<i64> = center.iter().map(|c| c + r).collect();
        Self::for_box(&lo, &hi, budget)
    }

    /// Marks `p` as occupied; returns `false` if it already was.
    pub fn insert(&mut self, p: &[i64]) -> bool {
        match self {
            Occupancy::Grid(g) => g.insert(p),
            Occupancy::Hashed(set) => set.insert(p.to_vec()),
        }
    }

    pub fn remove(&mut self, p: &[i64]) {
        match self {
            Occupancy::Grid(g) => g.remove(p),
            Occupancy::Hashed(set) => {
                set.remove(p);
            }
        }
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        match self {
            Occupancy::Grid(g) => g.contains(p),
            Occupancy::Hashed(set) => set.contains(p),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, Occupancy::Grid(_))
    }
}

/// Bit-packed occupancy over an axis-aligned box.
#[derive(Debug, Clone)]
pub struct Grid {
    lo: Vec<i64>,
    extent: Vec<usize>,
    strides: Vec<usize>,
    bits: Vec<u64>,
}

impl Grid {
    fn new(lo: &[i64], hi: &[i64], budget: usize) -> Option<Self> {
        let mut extent = Vec::with_capacity(lo.len());
        let mut cells: usize = 1;
        for (l, h) in lo.iter().zip(hi) {
            let e = usize::try_from(h - l + 1).ok()?;
            cells = cells.checked_mul(e)?;
            extent.push(e);
        }
        if cells > budget {
            return None;
        }
        let mut strides = vec![1; extent.len()];
        for k in 1..extent.len() {
            strides[k] = strides[k - 1] * extent[k - 1];
        }
        Some(Grid {
            lo: lo.to_vec(),
            extent,
            strides,
            bits: vec![0; cells.div_ceil(64)],
        })
    }

    fn index(&self, p: &[i64]) -> usize {
        let mut idx = 0;
        for (k, &c) in p.iter().enumerate() {
            let off = c - self.lo[k];
            assert!(
                off >= 0 && (off as usize) < self.extent[k],
                "point {p:?} outside occupancy box"
            );
            idx += off as usize * self.strides[k];
        }
        idx
    }

    fn insert(&mut self, p: &[i64]) -> bool {
        let i = self.index(p);
        let (word, bit) = (i / 64, 1u64 << (i % 64));
        let fresh = self.bits[word] & bit == 0;
        self.bits[word] |= bit;
        fresh
    }

    fn remove(&mut self, p: &[i64]) {
        let i = self.index(p);
        self.bits[i / 64] &= !(1u64 << (i % 64));
    }

    fn contains(&self, p: &[i64]) -> bool {
        let i = self.index(p);
        self.bits[i / 64] & (1u64 << (i % 64)) != 0
    }
}
