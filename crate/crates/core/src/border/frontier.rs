//! `C_p` of a single piece by dynamic programming over a moving frontier.
//!
//! Cells are decided one at a time in lexicographic order. A state is the
//! current label of every live cell: `0` chosen, `1` dominated by a chosen
//! cell, `2` not dominated so far. A cell stays live while one of its
//! neighbors, or a piece neighbor of one of its outside neighbors, is still
//! undecided; input and output cells stay live to the end. Internal cells
//! are checked to be dominated when they leave the frontier, which is also
//! the first moment their label is final.
//!
//! Labels are packed two bits per live cell into a `u64`.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{quadrant_neighbors, BorderPiece};
use crate::grid::Vertex;
use crate::tropical::TropicalMatrix;
use crate::words::{Word, WordTable};
use crate::{Error, Result};

const EVEN: u64 = 0x5555_5555_5555_5555;
const NEVER: usize = usize::MAX;
/// Live cells plus the cell being decided must fit in 64 bits.
const MAX_LIVE: usize = 31;
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrontierStats {
    pub cells: usize,
    /// Largest number of live cells between two steps.
    pub max_frontier: usize,
    pub max_states: usize,
}

/// How to tell whether one cell of `N[x]` is already dominated.
#[derive(Clone, Copy, Debug)]
enum Target {
    /// A decided cell: dominated iff its label is not 2.
    Label(usize),
    /// An undecided or outside cell: dominated iff one of these slots
    /// (an even-bit mask) holds a chosen cell.
    Dominators(u64),
}

#[derive(Debug)]
struct StepPlan {
    old_len: usize,
    targets: Vec<Target>,
    /// Decided neighbors of `x`, as an even-bit slot mask.
    decided_nbrs: u64,
    /// Positions of the extended state (live cells, then `x`) that survive.
    keep: Vec<u8>,
    /// Extended positions that leave now and must be dominated.
    must_dominate: u64,
}

struct Plan {
    steps: Vec<StepPlan>,
    input_slots: Vec<usize>,
    output_slots: Vec<usize>,
    max_frontier: usize,
}

fn plan(piece: &BorderPiece) -> Result<Plan> {
    let cells = piece.cells();
    let dims = piece.ambient_dims();
    let mut order = vec![NEVER; dims.len()];
    for (idx, &v) in cells.iter().enumerate() {
        order[dims.index(v)] = idx;
    }
    let ord = |v: Vertex| order[dims.index(v)];
    let in_piece = |v: Vertex| piece.contains(v);
    let piece_nbrs = |v: Vertex| quadrant_neighbors(v).filter(move |&u| in_piece(u));

    let pinned: Vec<bool> = {
        let mut pinned = vec![false; cells.len()];
        for v in piece
            .input_vertices()
            .into_iter()
            .chain(piece.output_vertices())
        {
            pinned[ord(v)] = true;
        }
        pinned
    };
    let drop_step: Vec<usize> = cells
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            if pinned[idx] {
                return NEVER;
            }
            let mut last = idx;
            for u in quadrant_neighbors(c) {
                if in_piece(u) {
                    last = last.max(ord(u));
                } else {
                    last = piece_nbrs(u).map(ord).fold(last, usize::max);
                }
            }
            last
        })
        .collect();

    let mut live: Vec<usize> = Vec::new();
    let mut steps = Vec::with_capacity(cells.len());
    let mut max_frontier = 0;
    for (s, &x) in cells.iter().enumerate() {
        let slot_of = |live: &[usize], v: Vertex| -> usize {
            let o = ord(v);
            live.iter()
                .position(|&c| c == o)
                .expect("decided neighbors of undecided cells are live")
        };
        let dominators = |live: &[usize], v: Vertex| -> u64 {
            piece_nbrs(v)
                .filter(|&u| ord(u) < s)
                .map(|u| 1u64 << (2 * slot_of(live, u)))
                .fold(0, |a, b| a | b)
        };
        let decided_nbrs = dominators(&live, x);
        let mut targets = vec![Target::Dominators(decided_nbrs)];
        for u in quadrant_neighbors(x) {
            if in_piece(u) && ord(u) < s {
                targets.push(Target::Label(slot_of(&live, u)));
            } else {
                targets.push(Target::Dominators(dominators(&live, u)));
            }
        }

        let mut extended = live.clone();
        extended.push(s);
        let mut keep = Vec::new();
        let mut must_dominate = 0u64;
        let mut next_live = Vec::new();
        for (pos, &c) in extended.iter().enumerate() {
            if drop_step[c] == s {
                if piece.is_internal(cells[c]) {
                    must_dominate |= 1 << (2 * pos);
                }
            } else {
                keep.push(pos as u8);
                next_live.push(c);
            }
        }
        if extended.len() > MAX_LIVE {
            return Err(Error::Size {
                what: "frontier",
                actual: extended.len(),
                limit: MAX_LIVE,
            });
        }
        steps.push(StepPlan {
            old_len: live.len(),
            targets,
            decided_nbrs,
            keep,
            must_dominate,
        });
        max_frontier = max_frontier.max(next_live.len());
        live = next_live;
    }

    let slot = |v: Vertex| {
        live.iter()
            .position(|&c| c == ord(v))
            .expect("interface cells stay live")
    };
    Ok(Plan {
        input_slots: piece.input_vertices().into_iter().map(slot).collect(),
        output_slots: piece.output_vertices().into_iter().map(slot).collect(),
        steps,
        max_frontier,
    })
}

#[inline]
fn zeros(s: u64) -> u64 {
    !(s | s >> 1) & EVEN
}

#[inline]
fn twos(s: u64) -> u64 {
    (s >> 1) & !s & EVEN
}

#[inline]
fn relax(map: &mut FxHashMap<u64, u32>, key: u64, cost: u32) {
    map.entry(key)
        .and_modify(|c| *c = (*c).min(cost))
        .or_insert(cost);
}

fn advance(step: &StepPlan, state: u64, cost: u32, out: &mut FxHashMap<u64, u32>) {
    let z = zeros(state);
    let t = twos(state);
    let x_shift = 2 * step.old_len;

    let finish = |ext: u64, cost: u32, out: &mut FxHashMap<u64, u32>| {
        if twos(ext) & step.must_dominate != 0 {
            return;
        }
        let mut packed = 0u64;
        for (new_pos, &old_pos) in step.keep.iter().enumerate() {
            packed |= (ext >> (2 * old_pos as u32) & 3) << (2 * new_pos);
        }
        relax(out, packed, cost);
    };

    // x not chosen.
    let x_label: u64 = if z & step.decided_nbrs != 0 { 1 } else { 2 };
    finish(state | x_label << x_shift, cost, out);

    // x chosen.
    let mut fresh = 0u32;
    for target in &step.targets {
        let dominated = match *target {
            Target::Label(slot) => t >> (2 * slot) & 1 == 0,
            Target::Dominators(mask) => z & mask != 0,
        };
        fresh += !dominated as u32;
    }
    let promote = t & step.decided_nbrs;
    let chosen = (state & !(promote << 1)) | promote;
    finish(chosen, cost + 5 - fresh, out);
}

/// `C_p` for `piece`: minimum quadrant loss of a subset dominating `I(P)`,
/// by input and output word.
pub fn piece_matrix(piece: &BorderPiece) -> Result<(TropicalMatrix, FrontierStats)> {
    let plan = plan(piece)?;
    let mut states: FxHashMap<u64, u32> = FxHashMap::default();
    states.insert(0, 0);
    let mut max_states = 1;
    for (idx, step) in plan.steps.iter().enumerate() {
        states = if states.len() >= PAR_THRESHOLD {
            let items: Vec<(u64, u32)> = states.into_iter().collect();
            items
                .par_chunks(4096)
                .map(|chunk| {
                    let mut local = FxHashMap::default();
                    for &(s, c) in chunk {
                        advance(step, s, c, &mut local);
                    }
                    local
                })
                .reduce(FxHashMap::default, |mut a, b| {
                    if a.len() < b.len() {
                        return merge(b, a);
                    }
                    for (s, c) in b {
                        relax(&mut a, s, c);
                    }
                    a
                })
        } else {
            let mut next = FxHashMap::default();
            for (&s, &c) in &states {
                advance(step, s, c, &mut next);
            }
            next
        };
        max_states = max_states.max(states.len());
        log::trace!(
            "{piece}: step {idx}/{} has {} states",
            plan.steps.len(),
            states.len()
        );
    }

    let table = WordTable::new(piece.k() as usize)?;
    let mut c = TropicalMatrix::infinite(table.len());
    let read = |state: u64, slots: &[usize]| {
        let letters: Vec<u8> = slots
            .iter()
            .map(|&slot| (state >> (2 * slot) & 3) as u8)
            .collect();
        Word::from_letters(&letters).expect("labels of adjacent cells never clash")
    };
    for (&state, &cost) in &states {
        let w_in = read(state, &plan.input_slots);
        let w_out = read(state, &plan.output_slots);
        c.relax(table.rank(w_in), table.rank(w_out), cost);
    }
    let stats = FrontierStats {
        cells: piece.len(),
        max_frontier: plan.max_frontier,
        max_states,
    };
    Ok((c, stats))
}

fn merge(mut a: FxHashMap<u64, u32>, b: FxHashMap<u64, u32>) -> FxHashMap<u64, u32> {
    for (s, c) in b {
        relax(&mut a, s, c);
    }
    a
}

/// `C_{k+2}`, the matrix of the square base piece.
pub fn compute_c_base(k: u32) -> Result<TropicalMatrix> {
    let piece = BorderPiece::base(k)?;
    Ok(piece_matrix(&piece)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frontier_stays_within_two_k_plus_one() {
        for k in 1..=10 {
            let piece = BorderPiece::base(k).unwrap();
            let plan = plan(&piece).unwrap();
            assert!(
                plan.max_frontier <= 2 * k as usize + 1,
                "k={k}: {}",
                plan.max_frontier
            );
        }
    }

    #[test]
    fn base_matrix_is_symmetric() {
        for k in 1..=4 {
            let c = compute_c_base(k).unwrap();
            assert!(c.is_symmetric(), "k={k}");
        }
    }

    #[test]
    fn k1_entries_by_hand() {
        // P_3(1) = {(1,1),(2,1),(3,1),(1,2),(2,2),(1,3)}, input (1,3),
        // output (3,1), internal cells (1,1),(2,1),(1,2).
        let c = compute_c_base(1).unwrap();
        assert_eq!(c.dim(), 3);
        // Both interfaces undominated: {(1,1)} alone, covering 3 cells.
        assert_eq!(c.get(2, 2), 2);
        // Both interfaces chosen, plus (2,1) or (1,2): 15 - 10.
        assert_eq!(c.get(0, 0), 5);
    }
}
