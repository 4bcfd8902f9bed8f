//! Deterministic parallel simulation.
//!
//! Paths are cut into fixed-size chunks that do not depend on the thread
//! count. Every path has its own random stream, and chunks are merged in
//! path order, so the output is identical under any schedule.

use std::ops::Range;

use rayon::prelude::*;

use levyruin_core::firstpassage::RiskModel;
use levyruin_core::montecarlo::{simulate_range, simulate_range_multi, FirstPassageRecord, SimConfig};
use levyruin_core::rwalk::{simulate_walk_range, IncrementModel, WalkRecord};
use levyruin_core::Result;

/// Paths per work unit.
pub const CHUNK: u64 = 512;

fn chunks(range: Range<u64>) -> Vec<Range<u64>> {
    (range.start..range.end)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(range.end))
        .collect()
}

/// Records of paths `0..cfg.n_paths`.
pub fn simulate(model: &RiskModel, cfg: &SimConfig) -> Result<Vec<FirstPassageRecord>> {
    simulate_paths(model, cfg, 0..cfg.n_paths)
}

pub fn simulate_paths(model: &RiskModel, cfg: &SimConfig, range: Range<u64>) -> Result<Vec<FirstPassageRecord>> {
    let parts = chunks(range)
        .into_par_iter()
        .map(|r| simulate_range(model, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Per-barrier records of paths `0..cfg.n_paths`.
pub fn simulate_multi(model: &RiskModel, cfg: &SimConfig, barriers: &[f64]) -> Result<Vec<Vec<FirstPassageRecord>>> {
    let parts = chunks(0..cfg.n_paths)
        .into_par_iter()
        .map(|r| simulate_range_multi(model, cfg, barriers, r))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Vec<FirstPassageRecord>> = barriers.iter().map(|_| Vec::new()).collect();
    for part in parts {
        for (slot, recs) in out.iter_mut().zip(part) {
            slot.extend(recs);
        }
    }
    Ok(out)
}

/// Simulate paths in order until `ruined` of them have passed the barrier,
/// or `max_paths` have run. Returns the records up to and including the
/// path of the last counted ruin.
pub fn simulate_until_ruined(
    model: &RiskModel,
    cfg: &SimConfig,
    ruined: usize,
    max_paths: u64,
) -> Result<Vec<FirstPassageRecord>> {
    let batch = 64 * CHUNK;
    let mut out = Vec::new();
    let mut count = 0;
    let mut start = 0;
    while start < max_paths {
        let end = (start + batch).min(max_paths);
        for r in simulate_paths(model, cfg, start..end)? {
            out.push(r);
            if r.ruined() {
                count += 1;
                if count == ruined {
                    return Ok(out);
                }
            }
        }
        start = end;
    }
    Ok(out)
}

/// Random-walk passages of walks `0..paths`.
pub fn simulate_walks(model: &IncrementModel, x: f64, paths: u64, seed: u64, max_steps: u64) -> Vec<WalkRecord> {
    chunks(0..paths)
        .into_par_iter()
        .map(|r| simulate_walk_range(model, x, r, seed, max_steps))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
