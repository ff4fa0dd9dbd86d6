//! Eventual-shift detection on matrix sequences and the shifted-minimum fold.

use std::collections::VecDeque;

use super::{TropicalMatrix, INF};
use crate::{Error, Result};

/// Where a sequence `A_0, A_1, ...` becomes periodic up to a shift:
/// `A_{t+period} = A_t + constant` for `t = index`, and hence for every
/// later `t` when the sequence is generated by a fixed step map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventualShift {
    pub index: usize,
    pub period: usize,
    pub constant: i64,
}

/// `Some(c)` when `b = a + c` entrywise with identical `+inf` placement.
/// Two all-`+inf` matrices give `Some(0)`.
pub fn shift_between(a: &TropicalMatrix, b: &TropicalMatrix) -> Option<i64> {
    if a.dim() != b.dim() {
        return None;
    }
    let mut constant = None;
    for (&x, &y) in a.data().iter().zip(b.data()) {
        match (x == INF, y == INF) {
            (true, true) => {}
            (false, false) => {
                let d = y as i64 - x as i64;
                match constant {
                    None => constant = Some(d),
                    Some(c) if c != d => return None,
                    Some(_) => {}
                }
            }
            _ => return None,
        }
    }
    Some(constant.unwrap_or(0))
}

/// Number of entries disagreeing with the most common difference, and that
/// difference. Used for convergence diagnostics only.
fn diff_stats(a: &TropicalMatrix, b: &TropicalMatrix) -> (usize, Option<i64>) {
    let mut counts = rustc_hash::FxHashMap::<Option<i64>, usize>::default();
    for (&x, &y) in a.data().iter().zip(b.data()) {
        let key = match (x == INF, y == INF) {
            (true, true) => continue,
            (false, false) => Some(y as i64 - x as i64),
            _ => None,
        };
        *counts.entry(key).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    let best = counts
        .iter()
        .filter(|(k, _)| k.is_some())
        .max_by_key(|(k, &v)| (v, std::cmp::Reverse(**k)))
        .map(|(&k, &v)| (k, v));
    match best {
        Some((c, v)) => (total - v, c),
        None => (total, None),
    }
}

/// Iterates `A_{t+1} = step(A_t)` from `A_0 = start` and returns the first
/// `t` with `A_{t+1} = A_t + c`.
///
/// `observe(t, A_t)` sees every matrix produced, including the final
/// `A_{t+1}`. At most `max_iters` steps are taken.
pub fn detect_eventual_shift<S, O>(
    start: TropicalMatrix,
    max_iters: usize,
    step: S,
    observe: O,
) -> Result<EventualShift>
where
    S: FnMut(&TropicalMatrix) -> Result<TropicalMatrix>,
    O: FnMut(usize, &TropicalMatrix) -> Result<()>,
{
    detect_eventual_period(start, max_iters, 1, step, observe)
}

/// Like [`detect_eventual_shift`], but also accepts `A_{t+d} = A_t + c` for
/// periods `d <= max_period`; the smallest `t + d` wins, then the smallest `d`.
pub fn detect_eventual_period<S, O>(
    start: TropicalMatrix,
    max_iters: usize,
    max_period: usize,
    mut step: S,
    mut observe: O,
) -> Result<EventualShift>
where
    S: FnMut(&TropicalMatrix) -> Result<TropicalMatrix>,
    O: FnMut(usize, &TropicalMatrix) -> Result<()>,
{
    if max_period == 0 {
        return Err(Error::input("period bound must be positive"));
    }
    let dim = start.dim();
    observe(0, &start)?;
    let mut window: VecDeque<TropicalMatrix> = VecDeque::with_capacity(max_period + 1);
    window.push_back(start);
    let mut last = (0, None);
    for t in 1..=max_iters {
        let next = step(window.back().expect("window is never empty"))?;
        if next.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: next.dim(),
            });
        }
        observe(t, &next)?;
        // window[j] holds A_{t - len + j}
        let len = window.len();
        for d in 1..=len {
            if let Some(constant) = shift_between(&window[len - d], &next) {
                return Ok(EventualShift {
                    index: t - d,
                    period: d,
                    constant,
                });
            }
        }
        last = diff_stats(&window[len - 1], &next);
        if window.len() == max_period {
            window.pop_front();
        }
        window.push_back(next);
    }
    Err(Error::Convergence {
        iters: max_iters,
        mismatched: last.0,
        last_constant: last.1,
    })
}

/// Online entrywise minimum of `d * A_t - c * t` over a sequence
/// `A_0, A_1, ...`, i.e. the shifted-minimum fold with slope `c / d`,
/// scaled by `d` to stay in integers. Accumulates in `i64`, so terms may go
/// negative.
#[derive(Clone, Debug)]
pub struct ShiftedMinFold {
    constant: i64,
    period: i64,
    terms: usize,
    dim: usize,
    acc: Vec<i64>,
}

/// Marks `+inf` in the signed accumulator.
const ACC_INF: i64 = i64::MAX;

impl ShiftedMinFold {
    /// Slope `constant / period`.
    pub fn new(constant: i64, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::input("fold period must be positive"));
        }
        Ok(ShiftedMinFold {
            constant,
            period: period as i64,
            terms: 0,
            dim: 0,
            acc: Vec::new(),
        })
    }

    /// Slope 1, no scaling.
    pub fn unit() -> Self {
        ShiftedMinFold::new(1, 1).expect("period 1 is valid")
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn push(&mut self, m: &TropicalMatrix) -> Result<()> {
        if self.terms == 0 {
            self.dim = m.dim();
            self.acc = vec![ACC_INF; self.dim * self.dim];
        } else if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: m.dim(),
            });
        }
        let offset = self.constant * self.terms as i64;
        for (slot, &v) in self.acc.iter_mut().zip(m.data()) {
            if v != INF {
                *slot = (*slot).min(self.period * v as i64 - offset);
            }
        }
        self.terms += 1;
        Ok(())
    }

    /// Smallest finite entry of the fold, if any.
    pub fn min_value(&self) -> Option<i64> {
        self.acc.iter().copied().filter(|&v| v != ACC_INF).min()
    }

    /// The fold plus `bias`, as an unsigned matrix. Fails on an empty
    /// sequence or when an entry plus `bias` leaves the unsigned range.
    pub fn finish_biased(&self, bias: i64) -> Result<TropicalMatrix> {
        if self.terms == 0 {
            return Err(Error::input("cannot fold an empty sequence"));
        }
        let data = self
            .acc
            .iter()
            .map(|&v| {
                if v == ACC_INF {
                    return Ok(INF);
                }
                let b = v + bias;
                if b < 0 || b >= INF as i64 {
                    Err(Error::input(format!(
                        "folded entry {v} with bias {bias} is out of range"
                    )))
                } else {
                    Ok(b as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        TropicalMatrix::from_vec(self.dim, data)
    }

    /// The fold, which must be entrywise non-negative.
    pub fn finish(&self) -> Result<TropicalMatrix> {
        self.finish_biased(0)
    }
}

/// `min_t (sequence[t] - t)` entrywise.
pub fn fold_min_shifted(sequence: &[TropicalMatrix]) -> Result<TropicalMatrix> {
    let mut fold = ShiftedMinFold::unit();
    for m in sequence {
        fold.push(m)?;
    }
    fold.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{min_plus_product, shift};

    fn sample() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[vec![3, INF, 1], vec![0, 2, 5], vec![INF, 4, 4]]).unwrap()
    }

    #[test]
    fn identity_step_is_caught_immediately() {
        let s = detect_eventual_shift(sample(), 5, |a| Ok(a.clone()), |_, _| Ok(())).unwrap();
        assert_eq!(
            s,
            EventualShift {
                index: 0,
                period: 1,
                constant: 0
            }
        );
    }

    #[test]
    fn unit_shift_step() {
        let s = detect_eventual_shift(sample(), 5, |a| shift(a, 1), |_, _| Ok(())).unwrap();
        assert_eq!(
            s,
            EventualShift {
                index: 0,
                period: 1,
                constant: 1
            }
        );
    }

    #[test]
    fn observe_sees_every_matrix() {
        // Powers of a cycle-plus-chord matrix settle after a few steps.
        let step =
            TropicalMatrix::from_rows(&[vec![INF, 1, INF], vec![INF, INF, 1], vec![1, 3, INF]])
                .unwrap();
        let mut seen = Vec::new();
        let s = detect_eventual_period(
            TropicalMatrix::identity(3),
            50,
            4,
            |a| min_plus_product(a, &step),
            |t, _| {
                seen.push(t);
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(seen, (0..=s.index + s.period).collect::<Vec<_>>());
        assert!(s.constant > 0);
    }

    #[test]
    fn non_converging_sequence_reports_statistics() {
        let mut grow = 0u32;
        let err = detect_eventual_shift(
            TropicalMatrix::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap(),
            4,
            |a| {
                grow += 1;
                let mut b = a.clone();
                b.set(0, 0, a.get(0, 0) + grow);
                Ok(b)
            },
            |_, _| Ok(()),
        )
        .unwrap_err();
        match err {
            Error::Convergence {
                iters,
                mismatched,
                last_constant,
            } => {
                assert_eq!(iters, 4);
                assert_eq!(mismatched, 1);
                assert_eq!(last_constant, Some(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn period_two_sequence() {
        // Two entries grow by 2 on alternate steps: A_{t+2} = A_t + 2, but
        // no single step is a uniform shift.
        let start = TropicalMatrix::from_rows(&[vec![0, 0], vec![INF, 3]]).unwrap();
        let mut t = 0;
        let step = |m: &TropicalMatrix| {
            t += 1;
            let mut next = m.clone();
            let (r, c) = if t % 2 == 1 { (0, 0) } else { (0, 1) };
            next.set(r, c, m.get(r, c) + 2);
            next.set(1, 1, m.get(1, 1) + 1);
            Ok(next)
        };
        let s = detect_eventual_period(start.clone(), 10, 2, step, |_, _| Ok(())).unwrap();
        assert_eq!(
            s,
            EventualShift {
                index: 0,
                period: 2,
                constant: 2
            }
        );
        let mut t = 0;
        let step = |m: &TropicalMatrix| {
            t += 1;
            let mut next = m.clone();
            let (r, c) = if t % 2 == 1 { (0, 0) } else { (0, 1) };
            next.set(r, c, m.get(r, c) + 2);
            next.set(1, 1, m.get(1, 1) + 1);
            Ok(next)
        };
        assert!(detect_eventual_shift(start, 10, step, |_, _| Ok(())).is_err());
    }

    #[test]
    fn fold_examples() {
        let a = sample();
        assert_eq!(fold_min_shifted(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(
            fold_min_shifted(&[a.clone(), shift(&a, 1).unwrap()]).unwrap(),
            a
        );
        assert!(fold_min_shifted(&[]).is_err());
    }

    #[test]
    fn fold_goes_negative_only_with_bias() {
        let a = TropicalMatrix::from_rows(&[vec![0, 1], vec![INF, 0]]).unwrap();
        let mut fold = ShiftedMinFold::unit();
        fold.push(&a).unwrap();
        fold.push(&a).unwrap();
        assert_eq!(fold.min_value(), Some(-1));
        assert!(fold.finish().is_err());
        let biased = fold.finish_biased(1).unwrap();
        assert_eq!(
            biased,
            TropicalMatrix::from_rows(&[vec![0, 1], vec![INF, 0]]).unwrap()
        );
    }

    #[test]
    fn scaled_fold_uses_rational_slope() {
        // Slope 1/2: terms 2*A_t - t.
        let mut fold = ShiftedMinFold::new(1, 2).unwrap();
        for v in [4, 4, 5, 5, 6] {
            fold.push(&TropicalMatrix::from_rows(&[vec![v]]).unwrap())
                .unwrap();
        }
        // min(8, 7, 8, 7, 8)
        assert_eq!(fold.finish().unwrap().get(0, 0), 7);
    }
}
