//! Exhaustive `C_p`: every subset of the piece, pruned only when an internal
//! cell whose neighborhood is fully decided is left undominated.

use rayon::prelude::*;

use super::{quadrant_neighbors, BorderPiece};
use crate::tropical::TropicalMatrix;
use crate::words::{Word, WordTable, DOMINATED, IN_SET, UNDOMINATED};
use crate::{Error, Result};

/// Default ceiling on the number of piece cells.
pub const DEFAULT_ORACLE_LIMIT: usize = 24;

/// Decisions fixed up front to split the search into parallel tasks.
const SPLIT_DEPTH: usize = 8;

pub fn oracle_c(k: u32, p: u32) -> Result<TropicalMatrix> {
    oracle_c_with_limit(k, p, DEFAULT_ORACLE_LIMIT)
}

struct Search {
    /// Closed quadrant neighborhood of each cell, over ambient-window bits.
    cover: Vec<u64>,
    /// Ambient bit of each cell.
    bit: Vec<u64>,
    /// `must[d]`: internal cells whose neighborhood is decided once the
    /// first `d` cells are.
    must: Vec<u64>,
    inputs: Vec<u64>,
    outputs: Vec<u64>,
    table: WordTable,
}

pub fn oracle_c_with_limit(k: u32, p: u32, limit: usize) -> Result<TropicalMatrix> {
    let piece = BorderPiece::new(k, p)?;
    if piece.len() > limit {
        return Err(Error::Size {
            what: "oracle piece cells",
            actual: piece.len(),
            limit,
        });
    }
    let dims = piece.ambient_dims();
    if dims.len() > 64 {
        return Err(Error::Size {
            what: "oracle ambient window",
            actual: dims.len(),
            limit: 64,
        });
    }
    let cells = piece.cells();
    let bit_of = |v| 1u64 << dims.index(v);
    let position = |v| cells.iter().position(|&c| c == v);
    let mut must = vec![0u64; cells.len() + 1];
    for (idx, &v) in cells.iter().enumerate() {
        if piece.is_internal(v) {
            let last = quadrant_neighbors(v)
                .filter_map(position)
                .fold(idx, usize::max);
            must[last + 1] |= bit_of(v);
        }
    }
    let search = Search {
        cover: cells
            .iter()
            .map(|&v| quadrant_neighbors(v).fold(bit_of(v), |acc, u| acc | bit_of(u)))
            .collect(),
        bit: cells.iter().map(|&v| bit_of(v)).collect(),
        must,
        inputs: piece.input_vertices().into_iter().map(bit_of).collect(),
        outputs: piece.output_vertices().into_iter().map(bit_of).collect(),
        table: WordTable::new(k as usize)?,
    };

    let split = SPLIT_DEPTH.min(cells.len());
    let dim = search.table.len();
    let result = (0u64..1 << split)
        .into_par_iter()
        .fold(
            || TropicalMatrix::infinite(dim),
            |mut acc, prefix| {
                let (mut chosen, mut covered, mut count) = (0u64, 0u64, 0u32);
                for d in 0..split {
                    if prefix >> d & 1 == 1 {
                        chosen |= search.bit[d];
                        covered |= search.cover[d];
                        count += 1;
                    }
                    if search.must[d + 1] & !covered != 0 {
                        return acc;
                    }
                }
                search.descend(split, chosen, covered, count, &mut acc);
                acc
            },
        )
        .reduce(
            || TropicalMatrix::infinite(dim),
            |mut a, b| {
                a.min_with(&b).expect("same dimension");
                a
            },
        );
    Ok(result)
}

impl Search {
    fn descend(&self, d: usize, chosen: u64, covered: u64, count: u32, acc: &mut TropicalMatrix) {
        if d == self.bit.len() {
            let w_in = self.word(&self.inputs, chosen, covered);
            let w_out = self.word(&self.outputs, chosen, covered);
            let loss = 5 * count - covered.count_ones();
            acc.relax(self.table.rank(w_in), self.table.rank(w_out), loss);
            return;
        }
        let next = self.must[d + 1];
        if next & !covered == 0 {
            self.descend(d + 1, chosen, covered, count, acc);
        }
        let covered_in = covered | self.cover[d];
        if next & !covered_in == 0 {
            self.descend(d + 1, chosen | self.bit[d], covered_in, count + 1, acc);
        }
    }

    fn word(&self, cells: &[u64], chosen: u64, covered: u64) -> Word {
        let letters: Vec<u8> = cells
            .iter()
            .map(|&b| {
                if chosen & b != 0 {
                    IN_SET
                } else if covered & b != 0 {
                    DOMINATED
                } else {
                    UNDOMINATED
                }
            })
            .collect();
        Word::from_letters(&letters).expect("labels of adjacent cells never clash")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_entries_by_hand() {
        let c = oracle_c(1, 3).unwrap();
        assert_eq!(c.get(2, 2), 2);
        assert_eq!(c.get(0, 0), 5);
    }

    #[test]
    fn k2_p4_dimension() {
        assert_eq!(oracle_c(2, 4).unwrap().dim(), 7);
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            oracle_c(3, 6),
            Err(Error::Size {
                actual: 25,
                limit: 24,
                ..
            })
        ));
        assert!(oracle_c_with_limit(3, 6, 25).is_ok());
    }
}
