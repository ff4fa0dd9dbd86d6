//! Broken-profile DP for `gamma(G_{n,m})`.
//!
//! The grid is swept column by column along its long side; inside a column
//! the cells are decided bottom to top. The state is the labelling of the
//! `w` frontier cells with the letters of [`crate::words`]: `0` in the set,
//! `1` dominated, `2` not yet dominated. Between columns the state is exactly
//! the word of the last column. A cell leaves the frontier when its right
//! neighbor is decided, and must not carry a `2` at that point.

use super::{GammaValue, GridDims, DEFAULT_PROFILE_WIDTH};
use crate::words::{DOMINATED, IN_SET, UNDOMINATED};
use crate::{Error, Result};

const INF: u16 = u16::MAX;

/// Hard ceiling on the frontier width: the dense tables have `3^w` entries.
const MAX_WIDTH: usize = 16;

pub fn gamma_profile_dp(dims: GridDims) -> Result<GammaValue> {
    gamma_profile_dp_with_limit(dims, DEFAULT_PROFILE_WIDTH)
}

pub fn gamma_profile_dp_with_limit(dims: GridDims, width_limit: usize) -> Result<GammaValue> {
    let d = dims.normalized();
    let sweep = gamma_profile_sweep(d.n, d.m, width_limit)?;
    Ok(sweep[d.m as usize - 1])
}

/// `gamma(G_{width,len})` for every `len` in `1..=max_len`, from one sweep.
pub fn gamma_profile_sweep(
    width: u32,
    max_len: u32,
    width_limit: usize,
) -> Result<Vec<GammaValue>> {
    let w = width as usize;
    if width == 0 || max_len == 0 {
        return Err(Error::input("profile DP needs a non-empty grid"));
    }
    let limit = width_limit.min(MAX_WIDTH);
    if w > limit {
        return Err(Error::Size {
            what: "profile width",
            actual: w,
            limit,
        });
    }
    if w * max_len as usize >= INF as usize {
        return Err(Error::Size {
            what: "profile grid size",
            actual: w * max_len as usize,
            limit: INF as usize - 1,
        });
    }

    let pow3: Vec<usize> = (0..=w).map(|r| 3usize.pow(r as u32)).collect();
    let states = pow3[w];
    // States whose word has no `2`: every cell of the column is dominated.
    let finished: Vec<usize> = (0..1usize << w)
        .map(|bits| (0..w).filter(|r| bits >> r & 1 == 1).map(|r| pow3[r]).sum())
        .collect();

    let mut cur = vec![INF; states];
    let mut next = vec![INF; states];
    // A virtual column 0 of dominated, non-member cells.
    let all_dominated: usize = (0..w).map(|r| DOMINATED as usize * pow3[r]).sum();
    cur[all_dominated] = 0;

    let mut out = Vec::with_capacity(max_len as usize);
    for _col in 0..max_len {
        for r in 0..w {
            next.fill(INF);
            step_cell(&cur, &mut next, &pow3, w, r);
            std::mem::swap(&mut cur, &mut next);
        }
        let best = finished.iter().map(|&s| cur[s]).min().unwrap_or(INF);
        debug_assert!(best != INF);
        out.push(GammaValue(best as u32));
    }
    Ok(out)
}

/// Decides the cell at row `r` of the current column. Digit `r` of the state
/// holds its left neighbor on entry and the cell itself on exit; digit
/// `r - 1` is the cell below, already in the current column.
fn step_cell(cur: &[u16], next: &mut [u16], pow3: &[usize], w: usize, r: usize) {
    let p = pow3[r];
    let highs = pow3[w - r - 1];
    let (q, lows, belows): (usize, usize, &[u8]) = if r == 0 {
        (0, 1, &[DOMINATED])
    } else {
        (pow3[r - 1], pow3[r - 1], &[IN_SET, DOMINATED, UNDOMINATED])
    };

    for hi in 0..highs {
        let hi_base = hi * p * 3;
        for left in [IN_SET, DOMINATED, UNDOMINATED] {
            for &below in belows {
                let base =
                    hi_base + left as usize * p + if r == 0 { 0 } else { below as usize * q };
                let cleared = base - left as usize * p;
                let out_label = if left == IN_SET || below == IN_SET {
                    DOMINATED
                } else {
                    UNDOMINATED
                };
                let in_below_fix = if r > 0 && below == UNDOMINATED { q } else { 0 };
                for lo in 0..lows {
                    let cost = cur[base + lo];
                    if cost == INF {
                        continue;
                    }
                    // Leave the cell out: the left neighbor must already be
                    // dominated since this was its last undecided neighbor.
                    if left != UNDOMINATED {
                        let t = cleared + out_label as usize * p + lo;
                        if cost < next[t] {
                            next[t] = cost;
                        }
                    }
                    // Put the cell in: it dominates its left and lower
                    // neighbors; the lower one turns from 2 to 1.
                    let t = cleared - in_below_fix + lo;
                    if cost + 1 < next[t] {
                        next[t] = cost + 1;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gamma_bruteforce;

    fn gamma(n: u32, m: u32) -> u32 {
        gamma_profile_dp(GridDims::new(n, m).unwrap())
            .unwrap()
            .get()
    }

    #[test]
    fn table_values() {
        assert_eq!(gamma(4, 5), 6);
        assert_eq!(gamma(5, 7), 9);
        assert_eq!(gamma(3, 3), 3);
        assert_eq!(gamma(1, 1), 1);
        assert_eq!(gamma(7, 4), gamma(4, 7));
    }

    #[test]
    fn agrees_with_bruteforce_on_small_grids() {
        for n in 1..=5u32 {
            for m in n..=(30 / n).min(8) {
                let d = GridDims::new(n, m).unwrap();
                let (g, _) = gamma_bruteforce(d).unwrap();
                assert_eq!(gamma_profile_dp(d).unwrap(), g, "{d}");
            }
        }
    }

    #[test]
    fn sweep_matches_single_runs() {
        let sweep = gamma_profile_sweep(4, 10, 12).unwrap();
        for (idx, g) in sweep.iter().enumerate() {
            assert_eq!(g.get(), gamma(4, idx as u32 + 1));
        }
    }

    #[test]
    fn width_limit_is_enforced() {
        let d = GridDims::new(13, 13).unwrap();
        assert!(matches!(
            gamma_profile_dp(d),
            Err(Error::Size { actual: 13, .. })
        ));
        // The long side is unconstrained.
        assert!(gamma_profile_dp(GridDims::new(2, 200).unwrap()).is_ok());
    }
}
