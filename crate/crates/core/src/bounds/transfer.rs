//! The transfer-matrix lower bound on the loss of a minimum dominating set.
//!
//! With `K = k + 2`, `M_p = L ⊗ C_p` is iterated as `M_{p+1} = M_p ⊗ T`
//! from `p = K` until `M_{p+d} = M_p + c` for some period `d`. From then on
//! `d * M_{K+t} - c * t` is periodic in `t`, so its entrywise minimum `M'`
//! over one full run of the sequence satisfies
//! `d * M_{K+t} >= M' + c * t` for every `t >= 0`. Gluing the four border
//! pieces of an `n x m` grid then gives
//! `d * loss >= quadruple_min(M', M') + c * (2(n - 2K) + 2(m - 2K))`.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::border::{build_t, check_k, compute_c_base};
use crate::grid::GridDims;
use crate::store::{MatrixKey, MatrixStore};
use crate::tropical::tmx::MatrixTag;
use crate::tropical::{
    detect_eventual_period, min_plus_product, min_plus_product_sparse, quadruple_min,
};
use crate::tropical::{EventualShift, ShiftedMinFold, TropicalMatrix};
use crate::words::WordTable;
use crate::{Error, Result};

/// Default step budget for shift detection.
pub const DEFAULT_MAX_ITERS: usize = 256;
/// Default ceiling on the detected period.
pub const DEFAULT_MAX_PERIOD: usize = 16;
/// Memory the detection window may use before the period bound is lowered.
const WINDOW_BUDGET: usize = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub max_iters: usize,
    /// `None` picks [`DEFAULT_MAX_PERIOD`], lowered so that the window of
    /// recent matrices fits in about a gigabyte.
    pub max_period: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_iters: DEFAULT_MAX_ITERS,
            max_period: None,
        }
    }
}

impl PipelineOptions {
    fn period_bound(&self, dim: usize) -> usize {
        self.max_period.unwrap_or_else(|| {
            let bytes = dim * dim * 4;
            (WINDOW_BUDGET / bytes.max(1)).clamp(1, DEFAULT_MAX_PERIOD)
        })
    }
}

/// Everything the bound needs from one width `k`, independent of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub k: u32,
    pub dim: usize,
    /// Piece extent the iteration starts from, `k + 2`.
    pub base_p: u32,
    /// Steps from `base_p` to the first matrix of the periodic regime.
    pub shift_index: usize,
    pub period: usize,
    pub constant: i64,
    /// Added to every entry of the stored `M'` to keep it unsigned.
    pub bias: i64,
    /// `quadruple_min(M', M')` without the bias, scaled by `period`.
    #[serde(rename = "B")]
    pub b: i64,
    /// Finite density of `T`.
    pub t_density: f64,
}

impl PipelineSummary {
    /// Piece extent where the shift fires.
    pub fn p_star(&self) -> u32 {
        self.base_p + self.shift_index as u32
    }

    /// The loss bound for `dims`, never below zero.
    pub fn bound_loss(&self, dims: GridDims) -> Result<i64> {
        let base = 2 * self.base_p;
        if dims.n < base || dims.m < base {
            return Err(Error::input(format!(
                "grid {dims} is too small for width {}: both sides must be >= {base}",
                self.k
            )));
        }
        let extra = 2 * (dims.n - base) as i64 + 2 * (dims.m - base) as i64;
        let scaled = self.b + self.constant * extra;
        let d = self.period as i64;
        Ok(((scaled + d - 1).div_euclid(d)).max(0))
    }

    pub fn report(&self, dims: GridDims) -> Result<LowerBoundReport> {
        let bound_loss = self.bound_loss(dims)?;
        let cells = dims.len() as i64;
        Ok(LowerBoundReport {
            k: self.k,
            n: dims.n,
            m: dims.m,
            b: self.b,
            p_star: self.p_star(),
            shift_constant: self.constant,
            period: self.period,
            bound_loss,
            bound_gamma: (cells + bound_loss + 4).div_euclid(5),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    #[serde(rename = "B")]
    pub b: i64,
    pub p_star: u32,
    pub shift_constant: i64,
    pub period: usize,
    pub bound_loss: i64,
    /// `ceil((n*m + bound_loss) / 5)`.
    pub bound_gamma: i64,
}

/// Progress events, one per iteration step.
#[derive(Clone, Copy, Debug)]
pub enum Progress {
    Stage(&'static str),
    Step { p: u32, min_entry: Option<u32> },
    Shift(EventualShift),
}

fn sidecar_path(store: &MatrixStore, k: u32) -> Option<PathBuf> {
    store.dir().map(|d| d.join(format!("k{k}-pipeline.json")))
}

fn load_sidecar(store: &MatrixStore, k: u32) -> Result<Option<PipelineSummary>> {
    let Some(path) = sidecar_path(store, k) else {
        return Ok(None);
    };
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let summary: PipelineSummary = serde_json::from_str(&text).map_err(|e| Error::Corrupt {
        path: path.clone(),
        reason: e.to_string(),
    })?;
    if summary.k != k {
        return Err(Error::Corrupt {
            path,
            reason: format!("summary is for k={}", summary.k),
        });
    }
    Ok(Some(summary))
}

fn save_sidecar(store: &MatrixStore, summary: &PipelineSummary) -> Result<()> {
    let (Some(dir), Some(path)) = (store.dir(), sidecar_path(store, summary.k)) else {
        return Ok(());
    };
    let json = serde_json::to_vec_pretty(summary).map_err(|e| Error::input(e.to_string()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, &json)?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// `C_K`, `T` and `L` for width `k`, through the cache.
pub fn base_matrices(
    k: u32,
    store: &MatrixStore,
) -> Result<(TropicalMatrix, TropicalMatrix, TropicalMatrix)> {
    check_k(k)?;
    let base_p = k + 2;
    let (c, _) = store.get_or_compute(MatrixKey::new(k, MatrixTag::C, base_p)?, || {
        compute_c_base(k)
    })?;
    let (t, _) = store.get_or_compute(MatrixKey::new(k, MatrixTag::T, 0)?, || build_t(k))?;
    let (l, _) = store.get_or_compute(MatrixKey::new(k, MatrixTag::L, 0)?, || {
        Ok(WordTable::new(k as usize)?.build_l())
    })?;
    Ok((c, t, l))
}

/// Runs (or loads) the width-`k` pipeline.
pub fn run_pipeline(
    k: u32,
    store: &MatrixStore,
    options: PipelineOptions,
    progress: &mut dyn FnMut(Progress),
) -> Result<PipelineSummary> {
    check_k(k)?;
    if let Some(summary) = load_sidecar(store, k)? {
        log::info!("cache hit: k{k} pipeline summary");
        return Ok(summary);
    }
    let base_p = k + 2;
    progress(Progress::Stage("base matrices"));
    let (c, t, l) = base_matrices(k, store)?;
    let dim = c.dim();
    let t_rows = t.sparse_rows();
    let m0 = min_plus_product(&l, &c)?;

    // The fold needs the slope, which is known only after detection, so the
    // sequence is kept while it is small and replayed otherwise.
    progress(Progress::Stage("shift detection"));
    let max_period = options.period_bound(dim);
    let mut history: Vec<TropicalMatrix> = Vec::new();
    let mut keep_history = true;
    let shift = detect_eventual_period(
        m0,
        options.max_iters,
        max_period,
        |a| Ok(min_plus_product_sparse(a, &t_rows)),
        |step, a| {
            progress(Progress::Step {
                p: base_p + step as u32,
                min_entry: a.min_entry().get(),
            });
            if keep_history {
                history.push(a.clone());
                if history.len() * dim * dim * 4 > 4 * WINDOW_BUDGET {
                    keep_history = false;
                    history.clear();
                }
            }
            Ok(())
        },
    )?;
    progress(Progress::Shift(shift));

    let last = shift.index + shift.period;
    let mut fold = ShiftedMinFold::new(shift.constant, shift.period)?;
    if keep_history {
        for m in &history[..=last] {
            fold.push(m)?;
        }
    } else {
        // Too large to keep: replay the sequence.
        progress(Progress::Stage("folding"));
        let mut cur = min_plus_product(&l, &c)?;
        fold.push(&cur)?;
        for _ in 0..last {
            cur = min_plus_product_sparse(&cur, &t_rows);
            fold.push(&cur)?;
        }
    }
    drop(history);
    let bias = (-fold.min_value().unwrap_or(0)).max(0);
    let folded = fold.finish_biased(bias)?;
    store.save(&MatrixKey::new(k, MatrixTag::Folded, base_p)?, &folded)?;

    progress(Progress::Stage("quadruple minimum"));
    let q = quadruple_min(&folded, &folded)?
        .get()
        .ok_or_else(|| Error::input(format!("no finite border configuration at k={k}")))?;
    let summary = PipelineSummary {
        k,
        dim,
        base_p,
        shift_index: shift.index,
        period: shift.period,
        constant: shift.constant,
        bias,
        b: q as i64 - 4 * bias,
        t_density: t.finite_density(),
    };
    save_sidecar(store, &summary)?;
    Ok(summary)
}

pub fn transfer_lower_bound(
    dims: GridDims,
    k: u32,
    store: &MatrixStore,
) -> Result<LowerBoundReport> {
    check_k(k)?;
    let base = 2 * (k + 2);
    if dims.n < base || dims.m < base {
        return Err(Error::input(format!(
            "grid {dims} is too small for width {k}: both sides must be >= {base}"
        )));
    }
    run_pipeline(k, store, PipelineOptions::default(), &mut |_| {})?.report(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(b: i64, constant: i64, period: usize) -> PipelineSummary {
        PipelineSummary {
            k: 10,
            dim: 8119,
            base_p: 12,
            shift_index: 113,
            period,
            constant,
            bias: 0,
            b,
            t_density: 0.045,
        }
    }

    #[test]
    fn unit_slope_reduces_to_the_linear_form() {
        // B = 76 at k = 10 gives 2(n+m) - 20 and the closed form.
        let s = summary(76, 1, 1);
        assert_eq!(s.p_star(), 125);
        for (n, m) in [(24, 24), (24, 31), (50, 100)] {
            let dims = GridDims::new(n, m).unwrap();
            let r = s.report(dims).unwrap();
            assert_eq!(r.bound_loss, 2 * (n + m) as i64 - 20);
            assert_eq!(r.bound_gamma, crate::bounds::chang_formula(dims));
        }
        assert_eq!(
            s.report(GridDims::new(24, 24).unwrap())
                .unwrap()
                .bound_gamma,
            131
        );
    }

    #[test]
    fn scaled_bound_rounds_up_and_clamps() {
        let s = PipelineSummary {
            k: 2,
            base_p: 4,
            ..summary(-3, 1, 4)
        };
        let dims = GridDims::new(8, 9).unwrap();
        // (-3 + 1 * 2) / 4 rounds up to 0.
        assert_eq!(s.bound_loss(dims).unwrap(), 0);
        let s = PipelineSummary { b: -30, ..s };
        assert_eq!(s.bound_loss(dims).unwrap(), 0);
        assert!(s.bound_loss(GridDims::new(7, 9).unwrap()).is_err());
    }

    #[test]
    fn small_widths_run_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatrixStore::open(dir.path()).unwrap();
        let mut steps = 0;
        let a = run_pipeline(2, &store, PipelineOptions::default(), &mut |p| {
            if let Progress::Step { .. } = p {
                steps += 1;
            }
        })
        .unwrap();
        assert!(steps > a.shift_index);
        let b = run_pipeline(2, &store, PipelineOptions::default(), &mut |_| {
            panic!("cached")
        })
        .unwrap();
        assert_eq!(a, b);
        fs::write(dir.path().join("k2-pipeline.json"), b"{").unwrap();
        assert!(matches!(
            run_pipeline(2, &store, PipelineOptions::default(), &mut |_| {}),
            Err(Error::Corrupt { .. })
        ));
    }
}
