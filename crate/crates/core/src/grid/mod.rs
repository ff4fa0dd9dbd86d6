//! Complete grid graphs `G_{n,m}`, closed neighborhoods, domination and loss.
//!
//! Vertices are `(i, j)` with `i` the column in `1..=n` and `j` the row in
//! `1..=m`; `(1, 1)` is the bottom-left corner.

mod brute;
mod profile;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use brute::{gamma_bruteforce, gamma_bruteforce_with_limit};
pub use profile::{gamma_profile_dp, gamma_profile_dp_with_limit, gamma_profile_sweep};

/// Default ceiling on `n * m` for exhaustive search.
pub const DEFAULT_BRUTE_LIMIT: usize = 30;
/// Default ceiling on `min(n, m)` for the profile DP.
pub const DEFAULT_PROFILE_WIDTH: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct GridDims {
    /// Number of columns.
    pub n: u32,
    /// Number of rows.
    pub m: u32,
}

#[derive(Deserialize)]
struct RawDims {
    n: u32,
    m: u32,
}

impl TryFrom<RawDims> for GridDims {
    type Error = Error;

    fn try_from(raw: RawDims) -> Result<Self> {
        GridDims::new(raw.n, raw.m)
    }
}

impl GridDims {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::input(format!("grid {n}x{m} has an empty side")));
        }
        Ok(GridDims { n, m })
    }

    pub fn len(&self) -> usize {
        self.n as usize * self.m as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn transpose(&self) -> GridDims {
        GridDims {
            n: self.m,
            m: self.n,
        }
    }

    /// The same grid with `n <= m`.
    pub fn normalized(&self) -> GridDims {
        if self.n <= self.m {
            *self
        } else {
            self.transpose()
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.n).contains(&v.i) && (1..=self.m).contains(&v.j)
    }

    pub fn index(&self, v: Vertex) -> usize {
        debug_assert!(self.contains(v));
        (v.j as usize - 1) * self.n as usize + (v.i as usize - 1)
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        let n = self.n as usize;
        Vertex::new((index % n) as u32 + 1, (index / n) as u32 + 1)
    }

    /// All vertices in index order (row by row, bottom to top).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.len()).map(move |idx| self.vertex(idx))
    }

    /// Grid neighbors of `v` (open neighborhood), in the order left, right,
    /// down, up.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let Vertex { i, j } = v;
        [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ]
        .into_iter()
        .map(|(i, j)| Vertex::new(i, j))
        .filter(move |&u| self.contains(u))
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub i: u32,
    pub j: u32,
}

impl Vertex {
    pub const fn new(i: u32, j: u32) -> Self {
        Vertex { i, j }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl From<(u32, u32)> for Vertex {
    fn from((i, j): (u32, u32)) -> Self {
        Vertex::new(i, j)
    }
}

/// A set of vertices of one grid, stored as a bitset over
/// `(j - 1) * n + (i - 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dims: GridDims,
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(dims: GridDims) -> Self {
        VertexSet {
            dims,
            bits: FixedBitSet::with_capacity(dims.len()),
        }
    }

    pub fn full(dims: GridDims) -> Self {
        let mut set = VertexSet::new(dims);
        set.bits.insert_range(..);
        set
    }

    pub fn from_vertices<I>(dims: GridDims, vertices: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<Vertex>,
    {
        let mut set = VertexSet::new(dims);
        for v in vertices {
            set.insert(v.into())?;
        }
        Ok(set)
    }

    pub(crate) fn from_bits(dims: GridDims, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), dims.len());
        VertexSet { dims, bits }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    /// Inserts `v`; returns whether it was newly added.
    pub fn insert(&mut self, v: Vertex) -> Result<bool> {
        if !self.dims.contains(v) {
            return Err(Error::input(format!(
                "vertex {v} outside grid {}",
                self.dims
            )));
        }
        let idx = self.dims.index(v);
        Ok(!self.bits.put(idx))
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        if !self.dims.contains(v) {
            return false;
        }
        let idx = self.dims.index(v);
        let was = self.bits.contains(idx);
        self.bits.set(idx, false);
        was
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.dims.contains(v) && self.bits.contains(self.dims.index(v))
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones().map(|idx| self.dims.vertex(idx))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.dims, other.dims, "sets from different grids");
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet::from_bits(self.dims, bits)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.dims, other.dims, "sets from different grids");
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet::from_bits(self.dims, bits)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.dims, other.dims, "sets from different grids");
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet::from_bits(self.dims, bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// `N[S]`, the union of the closed neighborhoods of the members.
    pub fn closed_neighborhood(&self) -> VertexSet {
        let mut out = self.bits.clone();
        let n = self.dims.n as usize;
        let len = self.dims.len();
        for idx in self.bits.ones() {
            let i = idx % n;
            if i > 0 {
                out.insert(idx - 1);
            }
            if i + 1 < n {
                out.insert(idx + 1);
            }
            if idx >= n {
                out.insert(idx - n);
            }
            if idx + n < len {
                out.insert(idx + n);
            }
        }
        VertexSet::from_bits(self.dims, out)
    }

    pub fn is_dominating(&self) -> bool {
        self.closed_neighborhood().bits.is_full()
    }

    /// `5|S| - |N[S]|`.
    pub fn loss(&self) -> u64 {
        5 * self.len() as u64 - self.closed_neighborhood().len() as u64
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet[{}]", self.dims)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `N[v]` inside `dims`.
pub fn closed_neighborhood(dims: GridDims, v: Vertex) -> Result<VertexSet> {
    if !dims.contains(v) {
        return Err(Error::input(format!("vertex {v} outside grid {dims}")));
    }
    let mut set = VertexSet::new(dims);
    set.insert(v)?;
    Ok(set.closed_neighborhood())
}

pub fn closed_neighborhood_of_set(set: &VertexSet) -> VertexSet {
    set.closed_neighborhood()
}

pub fn is_dominating(set: &VertexSet) -> bool {
    set.is_dominating()
}

pub fn loss(set: &VertexSet) -> u64 {
    set.loss()
}

/// Ceilings for the exact solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `n * m` handed to exhaustive search.
    pub brute_cells: usize,
    /// Largest `min(n, m)` handed to the profile DP.
    pub profile_width: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            brute_cells: DEFAULT_BRUTE_LIMIT,
            profile_width: DEFAULT_PROFILE_WIDTH,
        }
    }
}

/// An exact domination number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GammaValue(pub u32);

impl GammaValue {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(n: u32, m: u32) -> GridDims {
        GridDims::new(n, m).unwrap()
    }

    fn set(d: GridDims, vs: &[(u32, u32)]) -> VertexSet {
        VertexSet::from_vertices(d, vs.iter().copied()).unwrap()
    }

    #[test]
    fn neighborhood_of_interior_corner_and_singleton() {
        let d = dims(3, 3);
        let inner = closed_neighborhood(d, Vertex::new(2, 2)).unwrap();
        assert_eq!(inner, set(d, &[(2, 2), (1, 2), (3, 2), (2, 1), (2, 3)]));
        let corner = closed_neighborhood(d, Vertex::new(1, 1)).unwrap();
        assert_eq!(corner, set(d, &[(1, 1), (2, 1), (1, 2)]));
        let one = dims(1, 1);
        assert_eq!(
            closed_neighborhood(one, Vertex::new(1, 1)).unwrap(),
            set(one, &[(1, 1)])
        );
    }

    #[test]
    fn out_of_bounds_vertex_is_rejected() {
        assert!(matches!(
            closed_neighborhood(dims(3, 3), Vertex::new(4, 1)),
            Err(Error::Input(_))
        ));
        assert!(closed_neighborhood(dims(3, 3), Vertex::new(0, 1)).is_err());
        assert!(VertexSet::new(dims(2, 2))
            .insert(Vertex::new(1, 3))
            .is_err());
        assert!(GridDims::new(0, 4).is_err());
    }

    #[test]
    fn set_neighborhoods() {
        let d = dims(2, 2);
        assert_eq!(
            set(d, &[(1, 1)]).closed_neighborhood(),
            set(d, &[(1, 1), (2, 1), (1, 2)])
        );
        assert!(VertexSet::new(dims(5, 5)).closed_neighborhood().is_empty());
        assert_eq!(
            set(d, &[(1, 1), (2, 2)]).closed_neighborhood(),
            VertexSet::full(d)
        );
    }

    #[test]
    fn domination_checks() {
        let d = dims(3, 3);
        assert!(!set(d, &[(2, 2)]).is_dominating());
        assert!(set(dims(1, 1), &[(1, 1)]).is_dominating());
        assert!(set(d, &[(2, 2), (1, 1), (3, 1), (1, 3), (3, 3)]).is_dominating());
    }

    #[test]
    fn loss_values() {
        let d = dims(3, 3);
        assert_eq!(set(d, &[(2, 2)]).loss(), 0);
        assert_eq!(set(d, &[(1, 1)]).loss(), 2);
        assert_eq!(VertexSet::new(d).loss(), 0);
    }

    #[test]
    fn index_round_trip() {
        let d = dims(4, 7);
        for (idx, v) in d.vertices().enumerate() {
            assert_eq!(d.index(v), idx);
        }
        assert_eq!(d.vertex(0), Vertex::new(1, 1));
        assert_eq!(d.vertex(4), Vertex::new(1, 2));
    }

    #[test]
    fn neighbors_respect_the_boundary() {
        let d = dims(3, 2);
        let ns: Vec<_> = d.neighbors(Vertex::new(1, 1)).collect();
        assert_eq!(ns, vec![Vertex::new(2, 1), Vertex::new(1, 2)]);
        assert_eq!(d.neighbors(Vertex::new(2, 2)).count(), 3);
    }
}
