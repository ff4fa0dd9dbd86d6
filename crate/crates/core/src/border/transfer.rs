//! The one-column transition `T` with `C_{p+1} = C_p ⊗ T`.

use rayon::prelude::*;

use super::{check_k, label, piece_words, BorderPiece};
use crate::grid::VertexSet;
use crate::tropical::{min_plus_product_sparse, TropicalMatrix, INF};
use crate::words::{Word, WordTable, DOMINATED, IN_SET, UNDOMINATED};
use crate::{Error, Result};

/// How the cost of a legal transition counts the cells of column `p` that
/// the new column dominates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionRule {
    /// Counts `{i : w[i] = 2, w'[i] = 0}`. Row `k` of column `p` is not
    /// internal, so `w[k] = 2` may survive under `w'[k] != 0`; only cells
    /// that actually get covered are counted.
    Exact,
    /// Counts every `2` of `w`. Differs from [`TransitionRule::Exact`] by
    /// one exactly when `w[k] = 2` and `w'[k] != 0`.
    AsPublished,
}

/// `T[w, w']` as a signed cost, or `None` for `+inf`.
///
/// Letters are 1-based in the comments below; index `k` is the row next to
/// the grid interior.
pub fn transition_cost(w: Word, w2: Word, rule: TransitionRule) -> Option<i64> {
    let k = w.len();
    if w2.len() != k || k == 0 {
        return None;
    }
    for i in 0..k {
        let (a, b) = (w.letter(i), w2.letter(i));
        // A chosen cell at column p dominates its right neighbor.
        if a == IN_SET && b == UNDOMINATED {
            return None;
        }
        // Rows 1..k-1 of column p are internal once column p+1 exists; a 2
        // there must be covered from column p+1.
        if i + 1 < k && a == UNDOMINATED && b != IN_SET {
            return None;
        }
        // A 1 in column p+1 needs a chosen neighbor: left, below or above
        // (column p+2 is not part of the piece).
        if b == DOMINATED && a != IN_SET {
            let below = i > 0 && w2.letter(i - 1) == IN_SET;
            let above = i + 1 < k && w2.letter(i + 1) == IN_SET;
            if !below && !above {
                return None;
            }
        }
    }
    let zeros2 = w2.count(IN_SET) as i64;
    let ones2 = w2.count(DOMINATED) as i64;
    let zeros = w.count(IN_SET) as i64;
    let covered_in_p = match rule {
        TransitionRule::Exact => (0..k)
            .filter(|&i| w.letter(i) == UNDOMINATED && w2.letter(i) == IN_SET)
            .count() as i64,
        TransitionRule::AsPublished => w.count(UNDOMINATED) as i64,
    };
    let corner = (w2.letter(k - 1) == IN_SET) as i64;
    Some(3 * zeros2 - covered_in_p - ones2 + zeros - corner)
}

/// `T` for width `k` under [`TransitionRule::Exact`].
pub fn build_t(k: u32) -> Result<TropicalMatrix> {
    check_k(k)?;
    let table = WordTable::new(k as usize)?;
    let dim = table.len();
    let words = table.words();
    let mut data = vec![INF; dim * dim];
    data.par_chunks_mut(dim)
        .enumerate()
        .try_for_each(|(r, row)| {
            for (c, slot) in row.iter_mut().enumerate() {
                if let Some(cost) = transition_cost(words[r], words[c], TransitionRule::Exact) {
                    if cost < 0 {
                        return Err(Error::input(format!(
                            "negative transition {} -> {}",
                            words[r], words[c]
                        )));
                    }
                    *slot = cost as u32;
                }
            }
            Ok(())
        })?;
    TropicalMatrix::from_vec(dim, data)
}

/// `C ⊗ T^steps`.
pub fn evolve_c(c: &TropicalMatrix, t: &TropicalMatrix, steps: usize) -> Result<TropicalMatrix> {
    if c.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: t.dim(),
        });
    }
    let rows = t.sparse_rows();
    let mut cur = c.clone();
    for _ in 0..steps {
        cur = min_plus_product_sparse(&cur, &rows);
    }
    Ok(cur)
}

/// `loss(S_next) - loss(S_prev)` computed directly, for a set on
/// `piece_next` and its restriction to `piece_prev`.
pub fn delta_bookkeeping(
    s_prev: &VertexSet,
    s_next: &VertexSet,
    piece_prev: &BorderPiece,
    piece_next: &BorderPiece,
) -> Result<i64> {
    if piece_next.k() != piece_prev.k() || piece_next.p() != piece_prev.p() + 1 {
        return Err(Error::input(format!(
            "{piece_next} does not extend {piece_prev} by one column"
        )));
    }
    // Both calls validate that the sets live on their pieces.
    piece_words(piece_prev, s_prev)?;
    piece_words(piece_next, s_next)?;
    let restricted: Vec<_> = s_next.iter().filter(|&v| piece_prev.contains(v)).collect();
    if restricted.len() != s_prev.len() || !restricted.iter().all(|&v| s_prev.contains(v)) {
        return Err(Error::input("S_prev is not the restriction of S_next"));
    }
    if let Some(v) = piece_next
        .internal_cells()
        .into_iter()
        .find(|&v| label(s_next, v) == UNDOMINATED)
    {
        return Err(Error::input(format!(
            "S_next leaves internal cell {v} undominated"
        )));
    }
    // The ambient windows contain every neighbor of the pieces, so grid
    // loss there is quadrant loss.
    Ok(s_next.loss() as i64 - s_prev.loss() as i64)
}
