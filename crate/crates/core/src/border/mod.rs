//! The border of a grid and its decomposition into four congruent pieces.
//!
//! A piece `P_p(k)` is the set
//! `([k] x {k+2}) ∪ ([k+1] x {k+1}) ∪ ([p] x [k])` of the quadrant
//! `{i >= 1, j >= 1}`. Its input vertices are `[k] x {k+2}`, its output
//! vertices are `{p} x [k]`. Losses and labels of subsets of a piece are
//! taken in the quadrant: the left and bottom sides are grid boundaries,
//! the top and right are open.
//!
//! A piece of extent `p` is represented inside the grid
//! `(p + 1) x (k + 3)`, which holds every quadrant neighbor of the piece.

mod frontier;
mod oracle;
mod transfer;

use std::fmt;

use crate::grid::{GridDims, Vertex, VertexSet};
use crate::words::{Word, DOMINATED, IN_SET, UNDOMINATED};
use crate::{Error, Result};

pub use frontier::{compute_c_base, piece_matrix, FrontierStats};
pub use oracle::{oracle_c, oracle_c_with_limit, DEFAULT_ORACLE_LIMIT};
pub use transfer::{build_t, delta_bookkeeping, evolve_c, transition_cost, TransitionRule};

/// Largest supported border width.
pub const MAX_K: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BorderPiece {
    k: u32,
    p: u32,
}

impl BorderPiece {
    pub fn new(k: u32, p: u32) -> Result<Self> {
        check_k(k)?;
        if p < k + 2 {
            return Err(Error::input(format!(
                "piece extent {p} is below k + 2 = {}",
                k + 2
            )));
        }
        Ok(BorderPiece { k, p })
    }

    /// The square piece `P_{k+2}(k)`.
    pub fn base(k: u32) -> Result<Self> {
        BorderPiece::new(k, k + 2)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The same width, one column longer.
    pub fn extended(&self) -> BorderPiece {
        BorderPiece {
            k: self.k,
            p: self.p + 1,
        }
    }

    pub fn len(&self) -> usize {
        (self.k + (self.k + 1) + self.p * self.k) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let Vertex { i, j } = v;
        let k = self.k;
        i >= 1
            && j >= 1
            && ((j <= k && i <= self.p) || (j == k + 1 && i <= k + 1) || (j == k + 2 && i <= k))
    }

    /// Cells in lexicographic order: by column, then by row.
    pub fn cells(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.len());
        for i in 1..=self.p {
            for j in 1..=self.k + 2 {
                let v = Vertex::new(i, j);
                if self.contains(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// `[k] x {k+2}`, in letter order.
    pub fn input_vertices(&self) -> Vec<Vertex> {
        (1..=self.k).map(|i| Vertex::new(i, self.k + 2)).collect()
    }

    /// `{p} x [k]`, in letter order.
    pub fn output_vertices(&self) -> Vec<Vertex> {
        (1..=self.k).map(|j| Vertex::new(self.p, j)).collect()
    }

    /// The finite window of the quadrant that holds the piece and all its
    /// neighbors.
    pub fn ambient_dims(&self) -> GridDims {
        GridDims {
            n: self.p + 1,
            m: self.k + 3,
        }
    }

    pub fn cell_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.ambient_dims(), self.cells())
            .expect("cells lie in the ambient window")
    }

    /// Whether `v` and all of its quadrant neighbors lie in the piece.
    pub fn is_internal(&self, v: Vertex) -> bool {
        self.contains(v) && quadrant_neighbors(v).all(|u| self.contains(u))
    }

    /// `I(P)`.
    pub fn internal_cells(&self) -> Vec<Vertex> {
        self.cells()
            .into_iter()
            .filter(|&v| self.is_internal(v))
            .collect()
    }
}

impl fmt::Display for BorderPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}(k={})", self.p, self.k)
    }
}

pub(crate) fn check_k(k: u32) -> Result<()> {
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::input(format!(
            "border width k = {k} is outside 1..={MAX_K}"
        )));
    }
    Ok(())
}

/// Neighbors of `v` in the quadrant `{i >= 1, j >= 1}`: left, right, down, up.
pub fn quadrant_neighbors(v: Vertex) -> impl Iterator<Item = Vertex> {
    let Vertex { i, j } = v;
    [
        (i > 1).then(|| Vertex::new(i - 1, j)),
        Some(Vertex::new(i + 1, j)),
        (j > 1).then(|| Vertex::new(i, j - 1)),
        Some(Vertex::new(i, j + 1)),
    ]
    .into_iter()
    .flatten()
}

/// `I(S)` with `S` read as a subset of the quadrant: the members whose
/// quadrant closed neighborhood lies in `S`. Cells on the top row or right
/// column of `S`'s grid have a neighbor beyond it, so they are never
/// internal.
pub fn internal_vertices(s: &VertexSet) -> VertexSet {
    let dims = s.dims();
    let mut out = VertexSet::new(dims);
    for v in s.iter() {
        if quadrant_neighbors(v).all(|u| dims.contains(u) && s.contains(u)) {
            out.insert(v).expect("member of the same grid");
        }
    }
    out
}

/// `phi_S(v)`: 0 in `S`, 1 adjacent to `S`, 2 otherwise.
pub fn label(s: &VertexSet, v: Vertex) -> u8 {
    if s.contains(v) {
        IN_SET
    } else if quadrant_neighbors(v).any(|u| s.contains(u)) {
        DOMINATED
    } else {
        UNDOMINATED
    }
}

/// Input and output words of `s`, a subset of `piece` given in the piece's
/// ambient window.
pub fn piece_words(piece: &BorderPiece, s: &VertexSet) -> Result<(Word, Word)> {
    check_piece_subset(piece, s)?;
    let read = |cells: Vec<Vertex>| {
        let letters: Vec<u8> = cells.into_iter().map(|v| label(s, v)).collect();
        Word::from_letters(&letters)
    };
    Ok((
        read(piece.input_vertices())?,
        read(piece.output_vertices())?,
    ))
}

fn check_piece_subset(piece: &BorderPiece, s: &VertexSet) -> Result<()> {
    if s.dims() != piece.ambient_dims() {
        return Err(Error::input(format!(
            "set lives in a {} grid, {piece} needs {}",
            s.dims(),
            piece.ambient_dims()
        )));
    }
    if let Some(v) = s.iter().find(|&v| !piece.contains(v)) {
        return Err(Error::input(format!("{v} is not a cell of {piece}")));
    }
    Ok(())
}

/// The quarter turn `(i, j) -> (j, n - i + 1)` from `G_{n,m}` to `G_{m,n}`.
pub fn rotate(dims: GridDims, v: Vertex) -> Result<Vertex> {
    if !dims.contains(v) {
        return Err(Error::input(format!("{v} is outside {dims}")));
    }
    Ok(Vertex::new(v.j, dims.n - v.i + 1))
}

/// Which side of the grid a piece covers. Going around the border,
/// the output of each piece faces the input of the next:
/// `Q -> P -> O -> R -> Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceSide {
    /// Bottom, running left to right.
    P,
    /// Left, running top to bottom.
    Q,
    /// Top, running right to left.
    R,
    /// Right, running bottom to top.
    O,
}

impl PieceSide {
    pub const ALL: [PieceSide; 4] = [PieceSide::P, PieceSide::Q, PieceSide::R, PieceSide::O];

    /// The side whose input faces this side's output.
    pub fn successor(self) -> PieceSide {
        match self {
            PieceSide::Q => PieceSide::P,
            PieceSide::P => PieceSide::O,
            PieceSide::O => PieceSide::R,
            PieceSide::R => PieceSide::Q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BorderGeometry {
    pub dims: GridDims,
    pub k: u32,
}

impl BorderGeometry {
    pub fn new(dims: GridDims, k: u32) -> Result<Self> {
        check_k(k)?;
        let need = 2 * (k + 2);
        if dims.n < need || dims.m < need {
            return Err(Error::input(format!(
                "grid {dims} is too small for k = {k}: both sides need at least {need}"
            )));
        }
        Ok(BorderGeometry { dims, k })
    }

    /// `B_{n,m}`: the width-`k` frame plus the four cells diagonally inside
    /// its corners.
    pub fn contains(&self, v: Vertex) -> bool {
        let (n, m, k) = (self.dims.n, self.dims.m, self.k);
        if !self.dims.contains(v) {
            return false;
        }
        let Vertex { i, j } = v;
        i <= k
            || j <= k
            || i > n - k
            || j > m - k
            || ((i == k + 1 || i == n - k) && (j == k + 1 || j == m - k))
    }

    pub fn border(&self) -> VertexSet {
        let dims = self.dims;
        VertexSet::from_vertices(dims, dims.vertices().filter(|&v| self.contains(v)))
            .expect("border lies in the grid")
    }

    pub fn internal(&self) -> VertexSet {
        let b = self.border();
        let mut out = VertexSet::new(self.dims);
        for v in b.iter() {
            if self.dims.neighbors(v).all(|u| b.contains(u)) {
                out.insert(v).expect("same grid");
            }
        }
        out
    }
}

/// A piece together with its embedding into the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlacedPiece {
    pub side: PieceSide,
    pub piece: BorderPiece,
    dims: GridDims,
}

impl PlacedPiece {
    /// Piece frame to grid.
    pub fn place(&self, v: Vertex) -> Vertex {
        let GridDims { n, m } = self.dims;
        match self.side {
            PieceSide::P => v,
            PieceSide::Q => Vertex::new(v.j, m - v.i + 1),
            PieceSide::R => Vertex::new(n - v.i + 1, m - v.j + 1),
            PieceSide::O => Vertex::new(n - v.j + 1, v.i),
        }
    }

    /// Grid to piece frame; the inverse of [`PlacedPiece::place`].
    pub fn unplace(&self, v: Vertex) -> Vertex {
        let GridDims { n, m } = self.dims;
        match self.side {
            PieceSide::P => v,
            PieceSide::Q => Vertex::new(m - v.j + 1, v.i),
            PieceSide::R => Vertex::new(n - v.i + 1, m - v.j + 1),
            PieceSide::O => Vertex::new(v.j, n - v.i + 1),
        }
    }

    /// The image of the piece in the grid.
    pub fn cells(&self) -> VertexSet {
        VertexSet::from_vertices(
            self.dims,
            self.piece.cells().into_iter().map(|v| self.place(v)),
        )
        .expect("placed pieces stay inside the grid")
    }

    /// `D ∩ piece`, pulled back to the piece's ambient window.
    pub fn pull_back(&self, d: &VertexSet) -> Result<VertexSet> {
        if d.dims() != self.dims {
            return Err(Error::input(format!(
                "set lives in {}, expected {}",
                d.dims(),
                self.dims
            )));
        }
        let frame = self.piece.ambient_dims();
        let cells = self
            .piece
            .cells()
            .into_iter()
            .filter(|&v| d.contains(self.place(v)));
        VertexSet::from_vertices(frame, cells)
    }
}

/// The four pieces `P_{n-(k+2)}`, `Q_{m-(k+2)}`, `R_{n-(k+2)}`,
/// `O_{m-(k+2)}` whose images partition `B_{n,m}`.
pub fn decompose_border(geom: &BorderGeometry) -> Result<[PlacedPiece; 4]> {
    let BorderGeometry { dims, k } = *geom;
    let long = BorderPiece::new(k, dims.n - (k + 2))?;
    let tall = BorderPiece::new(k, dims.m - (k + 2))?;
    let make = |side, piece| PlacedPiece { side, piece, dims };
    Ok([
        make(PieceSide::P, long),
        make(PieceSide::Q, tall),
        make(PieceSide::R, long),
        make(PieceSide::O, tall),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dims: GridDims, cells: &[(u32, u32)]) -> VertexSet {
        VertexSet::from_vertices(dims, cells.iter().map(|&c| Vertex::from(c))).unwrap()
    }

    #[test]
    fn piece_shape() {
        let p = BorderPiece::new(10, 19).unwrap();
        assert_eq!(p.len(), 10 + 11 + 190);
        assert_eq!(p.cells().len(), p.len());
        assert_eq!(BorderPiece::base(10).unwrap().len(), 141);
        assert!(p.contains(Vertex::new(11, 11)));
        assert!(!p.contains(Vertex::new(12, 11)));
        assert!(p.contains(Vertex::new(10, 12)));
        assert!(!p.contains(Vertex::new(11, 12)));
        assert!(BorderPiece::new(3, 4).is_err());
        assert!(BorderPiece::new(0, 4).is_err());
        assert!(BorderPiece::new(11, 20).is_err());
    }

    #[test]
    fn base_piece_is_symmetric() {
        for k in 1..=6 {
            let p = BorderPiece::base(k).unwrap();
            for v in p.cells() {
                assert!(p.contains(Vertex::new(v.j, v.i)), "{v}");
            }
        }
    }

    #[test]
    fn internal_cells_of_base_piece() {
        // k = 3: everything except the right column, the row above the
        // strip beyond column 4, and the input row.
        let p = BorderPiece::base(3).unwrap();
        let internal = p.internal_cells();
        let mut expected = Vec::new();
        for i in 1..=4u32 {
            for j in 1..=4u32 {
                if j < 4 || i < 4 {
                    expected.push(Vertex::new(i, j));
                }
            }
        }
        assert_eq!(internal, expected);
        let via_set = internal_vertices(&p.cell_set());
        assert_eq!(via_set.iter().collect::<Vec<_>>().len(), expected.len());
        assert!(expected.iter().all(|&v| via_set.contains(v)));
    }

    #[test]
    fn internal_vertices_examples() {
        let dims = GridDims::new(6, 6).unwrap();
        assert!(internal_vertices(&set(dims, &[(3, 3)])).is_empty());
        let block: Vec<(u32, u32)> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        let inner = internal_vertices(&set(dims, &block));
        assert_eq!(inner, set(dims, &[(1, 1), (2, 1), (1, 2), (2, 2)]));
    }

    #[test]
    fn words_of_simple_sets() {
        let piece = BorderPiece::new(3, 5).unwrap();
        let dims = piece.ambient_dims();
        let (win, wout) = piece_words(&piece, &VertexSet::new(dims)).unwrap();
        assert_eq!(
            (win.to_string(), wout.to_string()),
            ("222".into(), "222".into())
        );
        let (_, wout) = piece_words(&piece, &set(dims, &[(5, 1), (5, 2), (5, 3)])).unwrap();
        assert_eq!(wout.to_string(), "000");
        let (win, wout) = piece_words(&piece, &set(dims, &[(5, 2)])).unwrap();
        assert_eq!(wout.to_string(), "101");
        assert_eq!(win.to_string(), "222");
        // (2,4) sits below the middle input cell only.
        let (win, _) = piece_words(&piece, &set(dims, &[(2, 4)])).unwrap();
        assert_eq!(win.to_string(), "212");
        assert!(piece_words(&piece, &set(dims, &[(6, 1)])).is_err());
        assert!(piece_words(&piece, &VertexSet::new(GridDims::new(3, 3).unwrap())).is_err());
    }

    #[test]
    fn rotation_has_order_four() {
        let dims = GridDims::new(5, 8).unwrap();
        for v in dims.vertices() {
            let mut d = dims;
            let mut u = v;
            for _ in 0..4 {
                u = rotate(d, u).unwrap();
                d = d.transpose();
                assert!(d.contains(u));
            }
            assert_eq!(u, v);
        }
        assert!(rotate(dims, Vertex::new(6, 1)).is_err());
    }

    #[test]
    fn decomposition_partitions_the_border() {
        for (k, n, m) in [
            (3, 10, 10),
            (3, 10, 13),
            (2, 8, 11),
            (1, 6, 6),
            (10, 30, 40),
            (4, 12, 25),
        ] {
            let geom = BorderGeometry::new(GridDims::new(n, m).unwrap(), k).unwrap();
            let pieces = decompose_border(&geom).unwrap();
            let border = geom.border();
            let mut union = VertexSet::new(geom.dims);
            let mut total = 0;
            for placed in &pieces {
                let cells = placed.cells();
                assert!(cells.is_disjoint(&union), "{:?} overlaps", placed.side);
                total += cells.len();
                union = union.union(&cells);
                for v in placed.piece.cells() {
                    assert_eq!(placed.unplace(placed.place(v)), v);
                }
            }
            assert_eq!(union, border, "k={k} {n}x{m}");
            assert_eq!(total, border.len());
        }
    }

    #[test]
    fn full_scale_extents() {
        let geom = BorderGeometry::new(GridDims::new(30, 40).unwrap(), 10).unwrap();
        let extents: Vec<u32> = decompose_border(&geom)
            .unwrap()
            .iter()
            .map(|p| p.piece.p())
            .collect();
        assert_eq!(extents, vec![18, 28, 18, 28]);
    }

    #[test]
    fn interfaces_face_each_other() {
        let geom = BorderGeometry::new(GridDims::new(11, 13).unwrap(), 3).unwrap();
        let pieces = decompose_border(&geom).unwrap();
        let find = |side| *pieces.iter().find(|p| p.side == side).unwrap();
        for side in PieceSide::ALL {
            let from = find(side);
            let to = find(side.successor());
            let outs = from.piece.output_vertices();
            let ins = to.piece.input_vertices();
            for (o, i) in outs.iter().zip(&ins) {
                let (a, b) = (from.place(*o), to.place(*i));
                assert_eq!(
                    a.i.abs_diff(b.i) + a.j.abs_diff(b.j),
                    1,
                    "{side:?}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn geometry_rejects_small_grids() {
        assert!(BorderGeometry::new(GridDims::new(9, 10).unwrap(), 3).is_err());
        assert!(BorderGeometry::new(GridDims::new(10, 10).unwrap(), 0).is_err());
    }
}
