use fixedbitset::FixedBitSet;

use super::{GammaValue, GridDims, VertexSet, DEFAULT_BRUTE_LIMIT};
use crate::{Error, Result};

/// Exhaustive minimum dominating set with the default ceiling of
/// [`DEFAULT_BRUTE_LIMIT`] vertices.
pub fn gamma_bruteforce(dims: GridDims) -> Result<(GammaValue, VertexSet)> {
    gamma_bruteforce_with_limit(dims, DEFAULT_BRUTE_LIMIT)
}

/// Exhaustive minimum dominating set. Subsets are visited by increasing size,
/// so the first dominating one is a minimum witness.
///
/// The search works on 64-bit masks; `limit` is capped at 64.
pub fn gamma_bruteforce_with_limit(
    dims: GridDims,
    limit: usize,
) -> Result<(GammaValue, VertexSet)> {
    let cells = dims.len();
    let limit = limit.min(64);
    if cells > limit {
        return Err(Error::Size {
            what: "grid vertex count",
            actual: cells,
            limit,
        });
    }

    let full = if cells == 64 {
        u64::MAX
    } else {
        (1u64 << cells) - 1
    };
    let cover: Vec<u64> = (0..cells)
        .map(|idx| {
            let v = dims.vertex(idx);
            dims.neighbors(v)
                .fold(1u64 << idx, |acc, u| acc | 1u64 << dims.index(u))
        })
        .collect();

    for size in 1..=cells {
        if let Some(mask) = first_cover_of_size(&cover, full, size) {
            let mut bits = FixedBitSet::with_capacity(cells);
            for idx in 0..cells {
                if mask >> idx & 1 == 1 {
                    bits.insert(idx);
                }
            }
            let witness = VertexSet::from_bits(dims, bits);
            debug_assert!(witness.is_dominating());
            return Ok((GammaValue(size as u32), witness));
        }
    }
    unreachable!("the full vertex set dominates")
}

/// First `size`-subset (in increasing mask order) whose neighborhoods cover
/// `full`.
fn first_cover_of_size(cover: &[u64], full: u64, size: usize) -> Option<u64> {
    let cells = cover.len();
    // Cheap counting bound: every vertex covers at most 5 cells.
    if 5 * size < cells {
        return None;
    }
    let mut mask: u64 = if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    };
    loop {
        let mut covered = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            covered |= cover[idx];
            rest &= rest - 1;
        }
        if covered == full {
            return Some(mask);
        }
        // Gosper's hack: next mask with the same popcount.
        let low = mask & mask.wrapping_neg();
        let ripple = mask.wrapping_add(low);
        if ripple == 0 {
            return None;
        }
        let ones = ((mask ^ ripple) >> 2) / low;
        mask = ripple | ones;
        if cells < 64 && mask >> cells != 0 {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(n: u32, m: u32) -> u32 {
        gamma_bruteforce(GridDims::new(n, m).unwrap())
            .unwrap()
            .0
            .get()
    }

    #[test]
    fn small_values() {
        assert_eq!(gamma(1, 1), 1);
        assert_eq!(gamma(2, 2), 2);
        assert_eq!(gamma(1, 3), 1);
        assert_eq!(gamma(3, 3), 3);
        assert_eq!(gamma(1, 4), 2);
    }

    #[test]
    fn two_by_two_matches_subset_count() {
        // Direct scan of all 16 subsets of the 2x2 grid.
        let d = GridDims::new(2, 2).unwrap();
        let best = (0u32..16)
            .filter(|mask| {
                let set = VertexSet::from_vertices(
                    d,
                    (0..4)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| d.vertex(b as usize)),
                )
                .unwrap();
                set.is_dominating()
            })
            .map(|mask| mask.count_ones())
            .min()
            .unwrap();
        assert_eq!(best, 2);
        assert_eq!(gamma(2, 2), best);
    }

    #[test]
    fn witness_dominates_and_has_size_gamma() {
        for (n, m) in [(2, 5), (3, 4), (4, 4), (5, 6)] {
            let (g, w) = gamma_bruteforce(GridDims::new(n, m).unwrap()).unwrap();
            assert!(w.is_dominating());
            assert_eq!(w.len() as u32, g.get());
        }
    }

    #[test]
    fn limit_is_enforced() {
        let d = GridDims::new(6, 6).unwrap();
        assert!(matches!(
            gamma_bruteforce(d),
            Err(Error::Size { actual: 36, .. })
        ));
        assert!(gamma_bruteforce_with_limit(GridDims::new(2, 20).unwrap(), 40).is_ok());
    }
}
