//! Dominating sets of size at most `floor((n+2)(m+2)/5) - 4`.
//!
//! Each candidate starts from a diagonal pattern `(i + s*j) mod 5 = c`
//! (`s` is 2 or 3), gets its undominated vertices repaired greedily and its
//! redundant vertices pruned, and is then improved by exact re-optimization
//! of small windows. Two seeds are tried per pattern: the pattern restricted
//! to the grid, and the pattern on the grid grown by one on every side with
//! the outer ring pushed inward.

use super::closed::chang_formula;
use crate::grid::{GridDims, Vertex, VertexSet};
use crate::{Error, Result};

/// Window side used by the local search.
const WINDOW: u32 = 6;
/// Window stride.
const STRIDE: u32 = 3;
/// Local-search sweeps per candidate.
const MAX_SWEEPS: usize = 8;

/// A dominating set of `dims` with at most `floor((n+2)(m+2)/5) - 4`
/// vertices, verified before it is returned.
pub fn construct_dominating_set(dims: GridDims) -> Result<VertexSet> {
    if dims.n.min(dims.m) < 8 {
        return Err(Error::input(format!(
            "construction needs both sides >= 8, got {dims}"
        )));
    }
    let bound = chang_formula(dims);
    let mut best: Option<VertexSet> = None;
    for seed in seeds(dims) {
        let mut cover = Cover::new(dims);
        for v in seed {
            cover.add(v);
        }
        cover.repair();
        cover.prune();
        if (cover.size() as i64) > bound {
            cover.local_search();
        }
        let set = cover.to_set();
        if !set.is_dominating() {
            return Err(Error::input(format!(
                "constructed set for {dims} is not dominating"
            )));
        }
        if best.as_ref().map_or(true, |b| set.len() < b.len()) {
            best = Some(set);
        }
        if best.as_ref().is_some_and(|b| b.len() as i64 <= bound) {
            break;
        }
    }
    let best = best.expect("there is always a seed");
    if best.len() as i64 > bound {
        return Err(Error::Construction {
            n: dims.n,
            m: dims.m,
            best: best.len(),
            bound,
        });
    }
    Ok(best)
}

/// Any dominating set: greedy repair from nothing, then pruning. No size
/// guarantee; used where [`construct_dominating_set`] does not apply.
pub fn greedy_dominating_set(dims: GridDims) -> VertexSet {
    let mut cover = Cover::new(dims);
    cover.repair();
    cover.prune();
    cover.to_set()
}

/// Seed vertex lists in the order they are tried.
fn seeds(dims: GridDims) -> Vec<Vec<Vertex>> {
    let GridDims { n, m } = dims;
    let mut out = Vec::new();
    for slope in [2u32, 3] {
        for c in 0..5 {
            let on = |i: u32, j: u32| (i + slope * j) % 5 == c;
            let inner: Vec<Vertex> = (1..=n)
                .flat_map(|i| (1..=m).map(move |j| (i, j)))
                .filter(|&(i, j)| on(i, j))
                .map(Vertex::from)
                .collect();
            // Outer-ring vertices dominate only their inward neighbor, so
            // moving them there keeps every grid vertex dominated.
            let mut pushed: Vec<Vertex> = (0..=n + 1)
                .flat_map(|i| (0..=m + 1).map(move |j| (i, j)))
                .filter(|&(i, j)| on(i, j))
                .filter(|&(i, j)| !((i == 0 || i == n + 1) && (j == 0 || j == m + 1)))
                .map(|(i, j)| Vertex::new(i.clamp(1, n), j.clamp(1, m)))
                .collect();
            pushed.sort();
            pushed.dedup();
            out.push(pushed);
            out.push(inner);
        }
    }
    out
}

/// A vertex set with domination counts, plus insertion order for pruning.
struct Cover {
    dims: GridDims,
    chosen: Vec<bool>,
    count: Vec<u8>,
    order: Vec<Vertex>,
}

impl Cover {
    fn new(dims: GridDims) -> Self {
        Cover {
            dims,
            chosen: vec![false; dims.len()],
            count: vec![0; dims.len()],
            order: Vec::new(),
        }
    }

    fn closed(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(v).chain(self.dims.neighbors(v))
    }

    fn add(&mut self, v: Vertex) {
        let idx = self.dims.index(v);
        if self.chosen[idx] {
            return;
        }
        self.chosen[idx] = true;
        self.order.push(v);
        let dims = self.dims;
        for u in std::iter::once(v).chain(dims.neighbors(v)) {
            self.count[dims.index(u)] += 1;
        }
    }

    fn remove(&mut self, v: Vertex) {
        let idx = self.dims.index(v);
        if !self.chosen[idx] {
            return;
        }
        self.chosen[idx] = false;
        self.order.retain(|&u| u != v);
        let dims = self.dims;
        for u in std::iter::once(v).chain(dims.neighbors(v)) {
            self.count[dims.index(u)] -= 1;
        }
    }

    fn size(&self) -> usize {
        self.order.len()
    }

    fn dominated(&self, v: Vertex) -> bool {
        self.count[self.dims.index(v)] > 0
    }

    /// Scan undominated vertices in lexicographic order; for each, add the
    /// vertex of its closed neighborhood covering the most undominated
    /// vertices, the lexicographically smallest on ties.
    fn repair(&mut self) {
        let mut vertices: Vec<Vertex> = self.dims.vertices().collect();
        vertices.sort();
        for v in vertices {
            if self.dominated(v) {
                continue;
            }
            let mut options: Vec<Vertex> = self.closed(v).collect();
            options.sort();
            let gain = |u: Vertex| self.closed(u).filter(|&x| !self.dominated(x)).count();
            let pick = options
                .iter()
                .copied()
                .max_by_key(|&u| (gain(u), std::cmp::Reverse(u)))
                .expect("closed neighborhoods are non-empty");
            self.add(pick);
        }
    }

    /// Drop vertices in reverse insertion order while domination holds.
    fn prune(&mut self) {
        let order = self.order.clone();
        for &v in order.iter().rev() {
            if self.closed(v).all(|u| self.count[self.dims.index(u)] >= 2) {
                self.remove(v);
            }
        }
    }

    /// Replace the part of the set inside each window by a smallest set
    /// that keeps everything dominated, until a sweep changes nothing.
    fn local_search(&mut self) {
        let GridDims { n, m } = self.dims;
        let starts = |len: u32| -> Vec<u32> {
            if len <= WINDOW {
                return vec![1];
            }
            let mut s: Vec<u32> = (1..=len - WINDOW + 1).step_by(STRIDE as usize).collect();
            if *s.last().unwrap() != len - WINDOW + 1 {
                s.push(len - WINDOW + 1);
            }
            s
        };
        let (xs, ys) = (starts(n), starts(m));
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for &i0 in &xs {
                for &j0 in &ys {
                    improved |= self.reoptimize(i0, j0);
                }
            }
            if !improved {
                break;
            }
        }
    }

    fn reoptimize(&mut self, i0: u32, j0: u32) -> bool {
        let dims = self.dims;
        let i1 = (i0 + WINDOW - 1).min(dims.n);
        let j1 = (j0 + WINDOW - 1).min(dims.m);
        let inside = |v: Vertex| (i0..=i1).contains(&v.i) && (j0..=j1).contains(&v.j);
        let window: Vec<Vertex> = (i0..=i1)
            .flat_map(|i| (j0..=j1).map(move |j| Vertex::new(i, j)))
            .collect();
        let current: Vec<Vertex> = window
            .iter()
            .copied()
            .filter(|&v| self.chosen[dims.index(v)])
            .collect();

        // Vertices whose domination depends on the window, with the count of
        // their dominators outside it.
        let mut required: Vec<Vertex> = Vec::new();
        for &v in &window {
            for u in self.closed(v) {
                let inner = self
                    .closed(u)
                    .filter(|&x| inside(x) && self.chosen[dims.index(x)])
                    .count();
                if self.count[dims.index(u)] as usize == inner && !required.contains(&u) {
                    required.push(u);
                }
            }
        }
        if required.len() > 128 {
            return false;
        }
        let bit = |u: Vertex| required.iter().position(|&r| r == u).map(|p| 1u128 << p);
        let covers: Vec<u128> = window
            .iter()
            .map(|&v| self.closed(v).filter_map(bit).fold(0, |a, b| a | b))
            .collect();
        let all = if required.len() == 128 {
            u128::MAX
        } else {
            (1u128 << required.len()) - 1
        };
        let mut search = WindowSearch {
            covers: &covers,
            best: current.len(),
            found: None,
            stack: Vec::new(),
        };
        search.run(all);
        let Some(found) = search.found else {
            return false;
        };
        for v in current {
            self.remove(v);
        }
        for idx in found {
            self.add(window[idx]);
        }
        true
    }

    fn to_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.dims, self.order.iter().copied())
            .expect("vertices lie in the grid")
    }
}

/// Branch and bound for a smallest cover of a bitmask by window cells.
struct WindowSearch<'a> {
    covers: &'a [u128],
    /// Size to beat.
    best: usize,
    found: Option<Vec<usize>>,
    stack: Vec<usize>,
}

impl WindowSearch<'_> {
    fn run(&mut self, uncovered: u128) {
        if uncovered == 0 {
            if self.stack.len() < self.best {
                self.best = self.stack.len();
                self.found = Some(self.stack.clone());
            }
            return;
        }
        // Each cell covers at most five vertices.
        let need = (uncovered.count_ones() as usize).div_ceil(5);
        if self.stack.len() + need >= self.best {
            return;
        }
        let target = 1u128 << uncovered.trailing_zeros();
        for idx in 0..self.covers.len() {
            if self.covers[idx] & target != 0 {
                self.stack.push(idx);
                self.run(uncovered & !self.covers[idx]);
                self.stack.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sides_are_rejected() {
        assert!(construct_dominating_set(GridDims::new(7, 20).unwrap()).is_err());
    }

    #[test]
    fn meets_the_bound_on_documented_sizes() {
        for (n, m, bound) in [(8, 8, 16), (16, 20, 75), (24, 24, 131)] {
            let dims = GridDims::new(n, m).unwrap();
            let d = construct_dominating_set(dims).unwrap();
            assert!(d.is_dominating());
            assert!(d.len() as i64 <= bound, "{dims}: {}", d.len());
        }
    }

    #[test]
    fn deterministic() {
        let dims = GridDims::new(11, 13).unwrap();
        assert_eq!(
            construct_dominating_set(dims).unwrap(),
            construct_dominating_set(dims).unwrap()
        );
    }

    #[test]
    fn window_search_finds_a_smaller_cover() {
        // Three cells, each covering one bit, versus one covering all.
        let covers = [0b001, 0b010, 0b100, 0b111];
        let mut s = WindowSearch {
            covers: &covers,
            best: 3,
            found: None,
            stack: Vec::new(),
        };
        s.run(0b111);
        assert_eq!(s.found, Some(vec![3]));
    }
}
