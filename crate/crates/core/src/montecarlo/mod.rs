//! Event-driven simulation of `X = S¹ + S² − ct` and its first passage over a
//! barrier.
//!
//! The three components `P¹, P², P³` run as independent exponential clocks.
//! Each path draws from its own ChaCha stream keyed by `(seed, path)`, so a
//! path's record never depends on which worker simulated it or in what order.

mod estimate;
mod sampler;

pub use estimate::{
    asymptotic_rows, cause_fractions, cause_given_ruin, censoring_bias, estimate_asymptotics, gpd_sup_distance,
    gpd_tail, ks_p_value, ks_statistic, ruin_fraction, scale_function, tail_index, AsymptoticRow, Proportion,
    LOW_CONFIDENCE_RUINS,
};
pub use sampler::{sample_common_jump, JumpSampler};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::JumpClass;
use crate::firstpassage::{Mode, RiskModel};
use crate::{Error, Result};
use sampler::exponential;

/// The random stream of one path.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_paths: u64,
    pub barrier: f64,
    /// Time after which an unfinished path is censored; `None` picks
    /// `50/(c − μ_S)·max(x, 1)` with drift and no cap without.
    pub horizon: Option<f64>,
}

impl SimConfig {
    pub fn new(seed: u64, n_paths: u64, barrier: f64) -> Self {
        Self {
            seed,
            n_paths,
            barrier,
            horizon: None,
        }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::Validation("n_paths must be positive".into()));
        }
        if !(self.barrier >= 0.0 && self.barrier.is_finite()) {
            return Err(Error::Parameter {
                name: "barrier",
                value: self.barrier,
            });
        }
        match self.horizon {
            Some(h) if !(h > 0.0) => Err(Error::Parameter {
                name: "horizon",
                value: h,
            }),
            _ => Ok(()),
        }
    }

    /// The censoring time used at barrier `x`.
    pub fn horizon_for(&self, model: &RiskModel, x: f64) -> f64 {
        match (self.horizon, model.mode()) {
            (Some(h), _) => h,
            (None, Mode::CompoundPoisson) => f64::INFINITY,
            (None, Mode::NegativeDrift) => {
                let gap = model.drift() - model.decomposition().mean_sum();
                50.0 / gap * x.max(1.0)
            }
        }
    }
}

/// One simulated first passage over the barrier `x`.
///
/// For a censored path `tau` is the horizon, `u = 0`, `k = 0`, and `v`, `y`
/// are measured at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPassageRecord {
    pub tau: f64,
    /// `Ḡ_{τ−}`, the last time before `τ` at which `X` sat at its running maximum.
    pub g_prev: f64,
    /// Overshoot `X_τ − x`.
    pub u: f64,
    /// Undershoot `x − X_{τ−}`.
    pub v: f64,
    /// `x − X̄_{τ−}`.
    pub y: f64,
    pub k: u8,
    /// Always `false`: a spectrally positive process cannot creep upward.
    pub crept: bool,
    pub censored: bool,
}

impl FirstPassageRecord {
    pub fn ruined(&self) -> bool {
        !self.censored
    }

    pub fn cause(&self) -> Option<JumpClass> {
        JumpClass::from_index(self.k as usize).ok()
    }
}

/// Simulate one path until it has passed every barrier in `barriers`
/// (increasing) or run past each barrier's horizon. Returns one record per
/// barrier.
pub fn simulate_path(
    model: &RiskModel,
    sampler: &JumpSampler,
    barriers: &[f64],
    horizons: &[f64],
    seed: u64,
    path: u64,
) -> Result<Vec<FirstPassageRecord>> {
    let mut rng = path_rng(seed, path);
    let c = model.drift();
    let cpp = model.mode() == Mode::CompoundPoisson;
    let rates = JumpClass::ALL.map(|k| sampler.intensity(k));
    let mut next = rates.map(|r| {
        if r > 0.0 {
            exponential(&mut rng, r)
        } else {
            f64::INFINITY
        }
    });
    let last_horizon = horizons.iter().fold(0.0f64, |a, &b| a.max(b));

    let mut out = Vec::with_capacity(barriers.len());
    let (mut t, mut level, mut max, mut g) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut pending = 0;
    // Censor barriers whose horizon ends before time `until`.
    let censor =
        |out: &mut Vec<FirstPassageRecord>, pending: &mut usize, until: f64, t: f64, level: f64, max: f64, g: f64| {
            while *pending < barriers.len() && horizons[*pending] < until {
                let x = barriers[*pending];
                let h = horizons[*pending];
                let at = level - c * (h - t);
                out.push(FirstPassageRecord {
                    tau: h,
                    g_prev: g,
                    u: 0.0,
                    v: x - at,
                    y: x - max,
                    k: 0,
                    crept: false,
                    censored: true,
                });
                *pending += 1;
            }
        };
    while pending < barriers.len() {
        let (i, &when) = next
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("three clocks");
        if when == f64::INFINITY {
            return Err(Error::Validation("no jump clock is running".into()));
        }
        censor(&mut out, &mut pending, when, t, level, max, g);
        if pending == barriers.len() || when > last_horizon {
            break;
        }
        let k = JumpClass::ALL[i];
        let (a, b) = sampler.sample(k, &mut rng)?;
        next[i] = when + exponential(&mut rng, rates[i]);
        let before = level - c * (when - t);
        let after = before + (a + b);
        while pending < barriers.len() && after > barriers[pending] {
            let x = barriers[pending];
            out.push(FirstPassageRecord {
                tau: when,
                g_prev: if cpp { when } else { g },
                u: after - x,
                v: x - before,
                y: x - max,
                k: k.index() as u8,
                crept: false,
                censored: false,
            });
            pending += 1;
        }
        t = when;
        level = after;
        if level > max {
            max = level;
            g = t;
        }
    }
    censor(&mut out, &mut pending, f64::INFINITY, t, level, max, g);
    Ok(out)
}

/// Records of paths `range` at the single barrier of `cfg`. Concatenating
/// the results of consecutive ranges reproduces the full run exactly.
pub fn simulate_range(model: &RiskModel, cfg: &SimConfig, range: Range<u64>) -> Result<Vec<FirstPassageRecord>> {
    cfg.validate()?;
    let sampler = JumpSampler::new(model.decomposition())?;
    let barriers = [cfg.barrier];
    let horizons = [cfg.horizon_for(model, cfg.barrier)];
    let mut out = Vec::with_capacity((range.end - range.start) as usize);
    for p in range {
        out.extend(simulate_path(model, &sampler, &barriers, &horizons, cfg.seed, p)?);
    }
    Ok(out)
}

/// Records at several increasing barriers from the same paths.
pub fn simulate_range_multi(
    model: &RiskModel,
    cfg: &SimConfig,
    barriers: &[f64],
    range: Range<u64>,
) -> Result<Vec<Vec<FirstPassageRecord>>> {
    cfg.validate()?;
    check_increasing(barriers)?;
    let sampler = JumpSampler::new(model.decomposition())?;
    let horizons: Vec<f64> = barriers.iter().map(|&x| cfg.horizon_for(model, x)).collect();
    let mut out: Vec<Vec<FirstPassageRecord>> = barriers.iter().map(|_| Vec::new()).collect();
    for p in range {
        let recs = simulate_path(model, &sampler, barriers, &horizons, cfg.seed, p)?;
        for (slot, r) in out.iter_mut().zip(recs) {
            slot.push(r);
        }
    }
    Ok(out)
}

pub(crate) fn check_increasing(barriers: &[f64]) -> Result<()> {
    if barriers.is_empty() {
        return Err(Error::Validation("at least one barrier is required".into()));
    }
    for w in barriers.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Validation(format!(
                "barriers must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    for &x in barriers {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Parameter {
                name: "barrier",
                value: x,
            });
        }
    }
    Ok(())
}

/// The outcome of [`simulate_first_passage`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub records: Vec<FirstPassageRecord>,
    pub warnings: Vec<String>,
}

/// Simulate `cfg.n_paths` paths in path order.
pub fn simulate_first_passage(model: &RiskModel, cfg: &SimConfig) -> Result<SimOutput> {
    let records = simulate_range(model, cfg, 0..cfg.n_paths)?;
    let warnings = horizon_warnings(model, cfg, &records);
    Ok(SimOutput { records, warnings })
}

/// Flags runs whose censoring bias is not small against the sampling error of
/// the ruin estimate. Uses the distance of censored paths below the barrier:
/// a path still within `(c − μ_S)·H/10` of it was not clearly drifting away.
pub fn horizon_warnings(model: &RiskModel, cfg: &SimConfig, records: &[FirstPassageRecord]) -> Vec<String> {
    let mut out = Vec::new();
    let n = records.len() as f64;
    let censored = records.iter().filter(|r| r.censored).count();
    if censored == 0 || n == 0.0 {
        return out;
    }
    let h = cfg.horizon_for(model, cfg.barrier);
    let near = match model.mode() {
        Mode::CompoundPoisson => censored,
        Mode::NegativeDrift => {
            let gap = model.drift() - model.decomposition().mean_sum();
            records.iter().filter(|r| r.censored && r.v < 0.1 * gap * h).count()
        }
    };
    let ruin = ruin_fraction(records);
    if near as f64 / n > ruin.se.max(1.0 / n) {
        out.push(format!(
            "horizon {h} too small for the requested sample size: {near} of {censored} censored paths are still near the barrier"
        ));
    }
    out
}

/// Inter-arrival times of each component clock over the first `n_jumps`
/// jumps of a path, keyed like [`simulate_path`].
pub fn clock_gaps(model: &RiskModel, seed: u64, n_jumps: usize) -> Result<[Vec<f64>; 3]> {
    let sampler = JumpSampler::new(model.decomposition())?;
    let mut rng = path_rng(seed, 0);
    let rates = JumpClass::ALL.map(|k| sampler.intensity(k));
    let mut next = rates.map(|r| {
        if r > 0.0 {
            exponential(&mut rng, r)
        } else {
            f64::INFINITY
        }
    });
    let mut last = [0.0f64; 3];
    let mut gaps = [Vec::new(), Vec::new(), Vec::new()];
    for _ in 0..n_jumps {
        let (i, &when) = next
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("three clocks");
        if when == f64::INFINITY {
            break;
        }
        sampler.sample(JumpClass::ALL[i], &mut rng)?;
        gaps[i].push(when - last[i]);
        last[i] = when;
        next[i] = when + exponential(&mut rng, rates[i]);
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests;
