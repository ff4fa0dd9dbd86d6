//! Square matrices over the `(min, +)` semiring on `N ∪ {+inf}`.
//!
//! `+inf` is stored as `u32::MAX`; every addition saturates, so
//! `x + inf = inf` falls out of `u32::saturating_add` as long as finite
//! entries stay well below `u32::MAX / 2`.

mod fold;
pub mod tmx;

use std::fmt;
use std::ops::Add;

use rayon::prelude::*;

use crate::{Error, Result};

pub use fold::{
    detect_eventual_period, detect_eventual_shift, fold_min_shifted, shift_between, EventualShift,
    ShiftedMinFold,
};

/// The `+inf` sentinel.
pub const INF: u32 = u32::MAX;

/// Right operands sparser than this are multiplied through per-row lists of
/// their finite entries.
pub const SPARSE_DENSITY: f64 = 0.25;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropicalValue(u32);

impl TropicalValue {
    pub const INFINITY: TropicalValue = TropicalValue(INF);
    pub const ZERO: TropicalValue = TropicalValue(0);

    pub fn finite(value: u32) -> Self {
        assert!(value != INF, "finite tropical value collides with +inf");
        TropicalValue(value)
    }

    pub fn from_raw(raw: u32) -> Self {
        TropicalValue(raw)
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0 != INF
    }

    pub fn get(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl Add for TropicalValue {
    type Output = TropicalValue;

    fn add(self, rhs: TropicalValue) -> TropicalValue {
        TropicalValue(self.0.saturating_add(rhs.0))
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(v) => v.fmt(f),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TropicalMatrix {
    dim: usize,
    data: Vec<u32>,
}

impl TropicalMatrix {
    /// The all-`+inf` matrix, the additive identity.
    pub fn infinite(dim: usize) -> Self {
        TropicalMatrix {
            dim,
            data: vec![INF; dim * dim],
        }
    }

    /// `0` on the diagonal, `+inf` elsewhere.
    pub fn identity(dim: usize) -> Self {
        let mut m = TropicalMatrix::infinite(dim);
        for i in 0..dim {
            m.set(i, i, 0);
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::input(format!(
                "{} entries do not form a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(TropicalMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("rows of unequal length"));
        }
        Ok(TropicalMatrix {
            dim,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u32> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.dim + c]
    }

    pub fn value(&self, r: usize, c: usize) -> TropicalValue {
        TropicalValue(self.get(r, c))
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.dim + c] = v;
    }

    /// Lowers an entry to `v` if `v` is smaller.
    #[inline]
    pub fn relax(&mut self, r: usize, c: usize, v: u32) {
        let slot = &mut self.data[r * self.dim + c];
        if v < *slot {
            *slot = v;
        }
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn transpose(&self) -> TropicalMatrix {
        let mut t = TropicalMatrix::infinite(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| (r + 1..self.dim).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn finite_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != INF).count()
    }

    /// Fraction of finite entries.
    pub fn finite_density(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.finite_count() as f64 / self.data.len() as f64
    }

    pub fn min_entry(&self) -> TropicalValue {
        TropicalValue(self.data.iter().copied().min().unwrap_or(INF))
    }

    /// Entrywise `<=` (with `+inf` largest).
    pub fn le(&self, other: &TropicalMatrix) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Entrywise minimum.
    pub fn min_with(&mut self, other: &TropicalMatrix) -> Result<()> {
        check_dims(self, other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a).min(b);
        }
        Ok(())
    }

    /// Rows as lists of `(column, value)` for the finite entries.
    pub fn sparse_rows(&self) -> SparseRows {
        let mut offsets = Vec::with_capacity(self.dim + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for r in 0..self.dim {
            entries.extend(
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != INF)
                    .map(|(c, &v)| (c as u32, v)),
            );
            offsets.push(entries.len());
        }
        SparseRows { offsets, entries }
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TropicalMatrix({}x{})", self.dim, self.dim)?;
        if self.dim > 24 {
            return Ok(());
        }
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| self.value(r, c).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Compressed rows of the finite entries of a matrix.
#[derive(Clone, Debug)]
pub struct SparseRows {
    offsets: Vec<usize>,
    entries: Vec<(u32, u32)>,
}

impl SparseRows {
    pub fn row(&self, r: usize) -> &[(u32, u32)] {
        &self.entries[self.offsets[r]..self.offsets[r + 1]]
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

fn check_dims(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

/// `A ⊗ B` with `C[i,j] = min_k A[i,k] + B[k,j]`.
///
/// Output rows are computed in parallel. When `B` is sparse the inner loop
/// walks only its finite entries.
pub fn min_plus_product(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<TropicalMatrix> {
    check_dims(a, b)?;
    if b.finite_density() < SPARSE_DENSITY {
        let rows = b.sparse_rows();
        Ok(min_plus_product_sparse(a, &rows))
    } else {
        Ok(min_plus_product_dense(a, b))
    }
}

/// `A ⊗ B` with `B` given by its finite entries, for repeated products
/// against a fixed sparse matrix.
pub fn min_plus_product_sparse(a: &TropicalMatrix, b: &SparseRows) -> TropicalMatrix {
    let dim = a.dim;
    assert_eq!(
        b.offsets.len(),
        dim + 1,
        "sparse operand has the wrong dimension"
    );
    let mut out = TropicalMatrix::infinite(dim);
    out.data
        .par_chunks_mut(dim.max(1))
        .enumerate()
        .for_each(|(i, out_row)| {
            for (k, &aik) in a.row(i).iter().enumerate() {
                if aik == INF {
                    continue;
                }
                for &(j, bkj) in b.row(k) {
                    let v = aik.saturating_add(bkj);
                    let slot = &mut out_row[j as usize];
                    if v < *slot {
                        *slot = v;
                    }
                }
            }
        });
    out
}

fn min_plus_product_dense(a: &TropicalMatrix, b: &TropicalMatrix) -> TropicalMatrix {
    const BLOCK: usize = 256;
    let dim = a.dim;
    let mut out = TropicalMatrix::infinite(dim);
    out.data
        .par_chunks_mut(dim.max(1))
        .enumerate()
        .for_each(|(i, out_row)| {
            let a_row = a.row(i);
            // Block over output columns so the slice of `out_row` stays in L1
            // while rows of `b` stream past.
            for j0 in (0..dim).step_by(BLOCK) {
                let j1 = (j0 + BLOCK).min(dim);
                let out_block = &mut out_row[j0..j1];
                for (k, &aik) in a_row.iter().enumerate() {
                    if aik == INF {
                        continue;
                    }
                    let b_block = &b.data[k * dim + j0..k * dim + j1];
                    for (slot, &bkj) in out_block.iter_mut().zip(b_block) {
                        *slot = (*slot).min(aik.saturating_add(bkj));
                    }
                }
            }
        });
    out
}

/// Adds `c` to every finite entry. Fails if an entry would leave
/// `0..u32::MAX`.
pub fn shift(a: &TropicalMatrix, c: i64) -> Result<TropicalMatrix> {
    let mut data = Vec::with_capacity(a.data.len());
    for &v in &a.data {
        if v == INF {
            data.push(INF);
            continue;
        }
        let shifted = v as i64 + c;
        if shifted < 0 || shifted >= INF as i64 {
            return Err(Error::input(format!(
                "shifting {v} by {c} leaves the unsigned range"
            )));
        }
        data.push(shifted as u32);
    }
    Ok(TropicalMatrix { dim: a.dim, data })
}

/// `min_{w1..w4} Mn[w1,w2] + Mm[w2,w3] + Mn[w3,w4] + Mm[w4,w1]`, evaluated as
/// `min_{w1,w3} A'[w1,w3] + A'[w3,w1]` with `A' = Mn ⊗ Mm`.
pub fn quadruple_min(mn: &TropicalMatrix, mm: &TropicalMatrix) -> Result<TropicalValue> {
    let a = min_plus_product(mn, mm)?;
    let dim = a.dim;
    let best = (0..dim)
        .into_par_iter()
        .map(|r| {
            (r..dim)
                .map(|c| a.get(r, c).saturating_add(a.get(c, r)))
                .min()
                .unwrap_or(INF)
        })
        .min()
        .unwrap_or(INF);
    Ok(TropicalValue(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Straight triple loop, the reference for every product variant.
    fn reference_product(a: &TropicalMatrix, b: &TropicalMatrix) -> TropicalMatrix {
        let n = a.dim();
        let mut out = TropicalMatrix::infinite(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y) = (a.get(i, k), b.get(k, j));
                    if x != INF && y != INF {
                        out.relax(i, j, x + y);
                    }
                }
            }
        }
        out
    }

    fn reference_quadruple(mn: &TropicalMatrix, mm: &TropicalMatrix) -> u32 {
        let n = mn.dim();
        let mut best = INF;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let terms = [mn.get(a, b), mm.get(b, c), mn.get(c, d), mm.get(d, a)];
                        if terms.iter().all(|&t| t != INF) {
                            best = best.min(terms.iter().sum());
                        }
                    }
                }
            }
        }
        best
    }

    fn matrix(dim: usize, inf_weight: u32) -> impl Strategy<Value = TropicalMatrix> {
        proptest::collection::vec(
            prop_oneof![inf_weight => Just(INF), 4 => 0u32..50],
            dim * dim,
        )
        .prop_map(move |data| TropicalMatrix::from_vec(dim, data).unwrap())
    }

    #[test]
    fn identity_and_infinite_products() {
        let b = TropicalMatrix::from_rows(&[vec![1, INF, 3], vec![0, 2, INF], vec![INF, 5, 4]])
            .unwrap();
        let id = TropicalMatrix::identity(3);
        assert_eq!(min_plus_product(&id, &b).unwrap(), b);
        assert_eq!(min_plus_product(&b, &id).unwrap(), b);
        let inf = TropicalMatrix::infinite(3);
        assert_eq!(min_plus_product(&inf, &b).unwrap(), inf);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = TropicalMatrix::identity(2);
        let b = TropicalMatrix::identity(3);
        assert!(matches!(
            min_plus_product(&a, &b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(quadruple_min(&a, &b).is_err());
    }

    #[test]
    fn shift_examples() {
        let a = TropicalMatrix::from_rows(&[vec![1, INF], vec![0, 7]]).unwrap();
        assert_eq!(shift(&a, 0).unwrap(), a);
        let inf = TropicalMatrix::infinite(4);
        assert_eq!(shift(&inf, 5).unwrap(), inf);
        assert!(shift(&a, -1).is_err());
        assert_eq!(shift(&shift(&a, 3).unwrap(), -3).unwrap(), a);
    }

    #[test]
    fn quadruple_min_of_identity_is_zero() {
        let id = TropicalMatrix::identity(5);
        assert_eq!(quadruple_min(&id, &id).unwrap(), TropicalValue::ZERO);
        let inf = TropicalMatrix::infinite(5);
        assert_eq!(quadruple_min(&inf, &id).unwrap(), TropicalValue::INFINITY);
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let dense =
            TropicalMatrix::from_vec(40, (0..1600).map(|x| (x * 7919 % 97) as u32).collect())
                .unwrap();
        let mut sparse = TropicalMatrix::infinite(40);
        for r in 0..40 {
            sparse.set(r, (r * 3) % 40, r as u32);
            sparse.set(r, (r * 7 + 1) % 40, 2);
        }
        assert!(sparse.finite_density() < SPARSE_DENSITY);
        assert_eq!(
            min_plus_product(&dense, &sparse).unwrap(),
            reference_product(&dense, &sparse)
        );
        assert_eq!(
            min_plus_product(&sparse, &dense).unwrap(),
            reference_product(&sparse, &dense)
        );
    }

    proptest! {
        #[test]
        fn product_matches_triple_loop(a in matrix(5, 2), b in matrix(5, 2)) {
            prop_assert_eq!(min_plus_product(&a, &b).unwrap(), reference_product(&a, &b));
        }

        #[test]
        fn sparse_operand_matches_triple_loop(a in matrix(7, 1), b in matrix(7, 12)) {
            prop_assert_eq!(min_plus_product(&a, &b).unwrap(), reference_product(&a, &b));
        }

        #[test]
        fn associativity(a in matrix(6, 2), b in matrix(6, 2), c in matrix(6, 2)) {
            let left = min_plus_product(&min_plus_product(&a, &b).unwrap(), &c).unwrap();
            let right = min_plus_product(&a, &min_plus_product(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn shift_law(a in matrix(4, 2), b in matrix(4, 2), c in 0i64..=10) {
            let lhs = min_plus_product(&shift(&a, c).unwrap(), &b).unwrap();
            let rhs = shift(&min_plus_product(&a, &b).unwrap(), c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn monotone_in_left_operand(a in matrix(5, 2), b in matrix(5, 2), bump in matrix(5, 3)) {
            // a2 >= a entrywise
            let mut a2 = a.clone();
            for (x, &d) in a2.data.iter_mut().zip(&bump.data) {
                *x = if d == INF { INF } else { x.saturating_add(d) };
            }
            prop_assert!(a.le(&a2));
            let lo = min_plus_product(&a, &b).unwrap();
            let hi = min_plus_product(&a2, &b).unwrap();
            prop_assert!(lo.le(&hi));
        }

        #[test]
        fn quadruple_min_matches_four_loops(dim in 1usize..=9, seed in any::<u64>()) {
            let gen = |salt: u64| {
                let data = (0..dim * dim)
                    .map(|x| {
                        let h = (x as u64 ^ salt).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
                        if h % 5 == 0 { INF } else { (h % 40) as u32 }
                    })
                    .collect();
                TropicalMatrix::from_vec(dim, data).unwrap()
            };
            let (mn, mm) = (gen(seed), gen(seed.wrapping_add(1)));
            prop_assert_eq!(quadruple_min(&mn, &mm).unwrap().raw(), reference_quadruple(&mn, &mm));
        }
    }
}
