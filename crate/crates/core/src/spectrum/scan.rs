//! Sign-change scan with dip subdivision.

use crate::error::{Error, Result};
use crate::numerics::{refine_root, Bracket};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScanParams {
    pub step: f64,
    pub rel_tol: f64,
    pub noise_floor: f64,
    pub dip_depth: u32,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct ScanOutcome {
    pub roots: Vec<f64>,
    pub noise_rejected: u64,
}

/// All sign changes of `f` on `[lo, hi]`, refined.
///
/// A grid point where `|f|` has a strict local minimum without a sign change
/// on either side is a possible pair of close roots; the two neighbouring
/// cells are rescanned sixteen times finer, up to `dip_depth` levels. Sign
/// changes where `|f|` stays below `noise_floor` times the largest `|f|` on
/// the coarse grid are counted as noise instead of roots.
pub(crate) fn scan_zeros<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, p: &ScanParams) -> ScanOutcome {
    let mut out = ScanOutcome::default();
    if !(hi > lo) {
        return out;
    }
    let cells = ((hi - lo) / p.step).ceil().max(1.0) as usize;
    let (xs, vs) = grid(f, lo, hi, cells);
    let scale = vs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    scan_grid(f, &xs, &vs, p.dip_depth, p, p.noise_floor * scale, &mut out);
    out.roots.sort_by(f64::total_cmp);
    out.roots.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * p.rel_tol * a.abs());
    out
}

fn grid<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, cells: usize) -> (Vec<f64>, Vec<f64>) {
    let xs: Vec<f64> = (0..=cells).map(|i| lo + (hi - lo) * i as f64 / cells as f64).collect();
    let vs = xs.iter().map(|&x| f(x)).collect();
    (xs, vs)
}

fn scan_grid<F: Fn(f64) -> f64>(
    f: &F,
    xs: &[f64],
    vs: &[f64],
    depth: u32,
    p: &ScanParams,
    floor: f64,
    out: &mut ScanOutcome,
) {
    let cells = xs.len() - 1;
    let changes = |i: usize| vs[i] * vs[i + 1] < 0.0 || vs[i + 1] == 0.0;

    for i in 0..cells {
        if !changes(i) {
            continue;
        }
        if vs[i].abs().max(vs[i + 1].abs()) < floor {
            out.noise_rejected += 1;
            continue;
        }
        if vs[i + 1] == 0.0 {
            out.roots.push(xs[i + 1]);
            continue;
        }
        let bracket = Bracket::new(xs[i], xs[i + 1]).expect("grid is increasing");
        if let Ok(x) = refine_root(f, bracket, p.rel_tol * xs[i + 1]) {
            out.roots.push(x);
        }
    }

    if depth == 0 {
        return;
    }
    for i in 1..cells {
        let dip = vs[i].abs() < vs[i - 1].abs() && vs[i].abs() < vs[i + 1].abs();
        if dip && !changes(i - 1) && !changes(i) && vs[i] != 0.0 {
            let (sx, sv) = grid(f, xs[i - 1], xs[i + 1], 16);
            scan_grid(f, &sx, &sv, depth - 1, p, floor, out);
        }
    }
}

/// Runs `per_order` for `m = 0, 1, 2, …` in parallel batches and stops once
/// two consecutive orders `m ≥ 1` come back empty. Results are in order of
/// `m` and exclude the trailing empty orders.
pub(crate) fn sweep_orders<T, F, E>(max_order: u32, per_order: F, is_empty: E) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u32) -> T + Sync,
    E: Fn(&T) -> bool,
{
    let batch = (2 * rayon::current_num_threads()).max(8) as u32;
    let mut out = Vec::new();
    let mut empty_run = 0;
    let mut start = 0u32;
    loop {
        if start > max_order {
            return Err(Error::Budget(format!("angular order sweep exceeded {max_order}")));
        }
        let end = start.saturating_add(batch).min(max_order + 1);
        let results: Vec<T> = (start..end).into_par_iter().map(&per_order).collect();
        for (m, r) in (start..end).zip(results) {
            if is_empty(&r) && m >= 1 {
                empty_run += 1;
                if empty_run == 2 {
                    out.truncate(out.len() - 1);
                    return Ok(out);
                }
            } else {
                empty_run = 0;
            }
            out.push(r);
        }
        start = end;
    }
}
