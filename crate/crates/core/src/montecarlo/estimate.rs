use alloc::vec::Vec;

use num_traits::Float;

use super::{check_increasing, simulate_range_multi, FirstPassageRecord, SimConfig};
use crate::decompose::{JumpClass, JumpDecomposition};
use crate::firstpassage::{GridConfig, Mode, RiskModel};
use crate::margins::MarginalTail;
use crate::quad::Estimate;
use crate::{Error, Result};

/// Fewer ruin events than this flag an asymptotics row as low-confidence.
pub const LOW_CONFIDENCE_RUINS: u64 = 100;

/// A binomial proportion with its standard error `√(p(1−p)/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub estimate: f64,
    pub se: f64,
    pub n: u64,
}

impl Proportion {
    pub fn from_counts(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Self {
                estimate: f64::NAN,
                se: f64::NAN,
                n,
            };
        }
        let p = hits as f64 / n as f64;
        Self {
            estimate: p,
            se: (p * (1.0 - p) / n as f64).sqrt(),
            n,
        }
    }

    /// `|p̂ − p| / se`, with a zero standard error replaced by `1/n`.
    pub fn z_score(&self, p: f64) -> f64 {
        let se = if self.se > 0.0 { self.se } else { 1.0 / self.n as f64 };
        (self.estimate - p).abs() / se
    }
}

pub fn ruin_fraction(records: &[FirstPassageRecord]) -> Proportion {
    let hits = records.iter().filter(|r| r.ruined()).count() as u64;
    Proportion::from_counts(hits, records.len() as u64)
}

/// `ℙ̂(τ < ∞, cause = k)` for `k = 1, 2, 3`.
pub fn cause_fractions(records: &[FirstPassageRecord]) -> [Proportion; 3] {
    let n = records.len() as u64;
    [1u8, 2, 3].map(|k| Proportion::from_counts(records.iter().filter(|r| r.ruined() && r.k == k).count() as u64, n))
}

/// `ℙ̂(cause = k | τ < ∞)`.
pub fn cause_given_ruin(records: &[FirstPassageRecord]) -> [Proportion; 3] {
    let ruined = records.iter().filter(|r| r.ruined()).count() as u64;
    [1u8, 2, 3]
        .map(|k| Proportion::from_counts(records.iter().filter(|r| r.ruined() && r.k == k).count() as u64, ruined))
}

/// `sup_w |F̂_n(w) − F(w)|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s: Vec<f64> = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &w) in s.iter().enumerate() {
        let f = cdf(w);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic Kolmogorov p-value of the statistic `d` on `n` samples, with
/// the Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let term = (-2.0 * j * j * lambda * lambda).exp();
        sum += if j as u32 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `(1 + w/α)^{−α}`.
pub fn gpd_tail(w: f64, alpha: f64) -> f64 {
    (1.0 + w.max(0.0) / alpha).powf(-alpha)
}

/// Sup-distance between the empirical d.f. of `samples` and `1 − gpd_tail`.
pub fn gpd_sup_distance(samples: &[f64], alpha: f64) -> f64 {
    ks_statistic(samples, |w| 1.0 - gpd_tail(w, alpha))
}

/// `a(x) = ∫_x^∞ Π̄_S / Π̄_S(x)`, taken as an equality at finite `x`.
pub fn scale_function(dec: &JumpDecomposition, x: f64) -> Result<Estimate> {
    let (mut num, mut den) = (Estimate::ZERO, Estimate::ZERO);
    for k in JumpClass::ALL {
        num = num + dec.integrated_tail_pk(k, x)?;
        den = den + dec.tail_pk_at(k, x)?;
    }
    if !(den.value > 0.0) {
        return Err(Error::Domain {
            op: "scale function beyond the jump support",
            value: x,
        });
    }
    let a = num.value / den.value;
    Ok(Estimate::new(
        a,
        a * (num.error / num.value.abs() + den.error / den.value),
    ))
}

/// Expected ruin the horizon cut off: `(1/n)·Σ_{censored} ψ(v_i)` by the strong
/// Markov property at the horizon, with `ψ` from a coarse passage table.
pub fn censoring_bias(model: &RiskModel, records: &[FirstPassageRecord]) -> Result<Estimate> {
    let n = records.len() as f64;
    let censored: Vec<f64> = records.iter().filter(|r| r.censored).map(|r| r.v).collect();
    if censored.is_empty() || n == 0.0 {
        return Ok(Estimate::ZERO);
    }
    if model.mode() == Mode::CompoundPoisson {
        return Ok(Estimate::exact(censored.len() as f64 / n));
    }
    let v_max = censored.iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    let coarse = model.clone().with_grid(GridConfig {
        cells: 1024,
        ..*model.grid()
    })?;
    let table = coarse.passage_table(v_max)?;
    let mut total = Estimate::ZERO;
    for v in censored {
        total = total + table.ruin_prob(v.max(0.0))?;
    }
    Ok(Estimate::new(total.value / n, total.error / n))
}

/// One barrier of [`estimate_asymptotics`].
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRow {
    pub barrier: f64,
    pub paths: u64,
    pub ruined: u64,
    pub censored: u64,
    pub ruin: Proportion,
    /// `ℙ̂(cause = k | τ < ∞)`.
    pub cause: [Proportion; 3],
    /// `a(x)`.
    pub scale: Estimate,
    /// Tail index `α` of the reference curve `(1 + w/α)^{−α}`.
    pub alpha: f64,
    /// Sup-distance of the scaled-overshoot d.f. to the reference curve.
    pub sup_distance: f64,
    /// `(X_τ − x)/a(x)` over ruined paths, sorted.
    pub scaled_overshoot: Vec<f64>,
    pub low_confidence: bool,
}

/// The smallest Pareto index among the margins; the sum's tail is regularly
/// varying with this index.
pub fn tail_index(dec: &JumpDecomposition) -> Result<f64> {
    let index = |m: &MarginalTail| match *m {
        MarginalTail::ParetoCpp { alpha, .. } => Some(alpha),
        _ => None,
    };
    match (index(dec.margin1()), index(dec.margin2())) {
        (Some(a), Some(b)) if a.min(b) > 1.0 => Ok(a.min(b)),
        _ => Err(Error::Validation(
            "asymptotics need Pareto margins with tail index α > 1".into(),
        )),
    }
}

/// Tabulate conditional cause probabilities and the scaled overshoot at each
/// barrier from per-barrier records of the same paths.
pub fn asymptotic_rows(
    model: &RiskModel,
    barriers: &[f64],
    records: &[Vec<FirstPassageRecord>],
) -> Result<Vec<AsymptoticRow>> {
    check_increasing(barriers)?;
    let alpha = tail_index(model.decomposition())?;
    let mut rows = Vec::with_capacity(barriers.len());
    for (&x, recs) in barriers.iter().zip(records) {
        let scale = scale_function(model.decomposition(), x)?;
        let mut scaled: Vec<f64> = recs.iter().filter(|r| r.ruined()).map(|r| r.u / scale.value).collect();
        scaled.sort_by(f64::total_cmp);
        let ruined = scaled.len() as u64;
        rows.push(AsymptoticRow {
            barrier: x,
            paths: recs.len() as u64,
            ruined,
            censored: recs.iter().filter(|r| r.censored).count() as u64,
            ruin: ruin_fraction(recs),
            cause: cause_given_ruin(recs),
            scale,
            alpha,
            sup_distance: if scaled.is_empty() {
                f64::NAN
            } else {
                gpd_sup_distance(&scaled, alpha)
            },
            scaled_overshoot: scaled,
            low_confidence: ruined < LOW_CONFIDENCE_RUINS,
        });
    }
    Ok(rows)
}

/// Simulate `cfg.n_paths` paths once and read off every barrier from them.
pub fn estimate_asymptotics(model: &RiskModel, cfg: &SimConfig, barriers: &[f64]) -> Result<Vec<AsymptoticRow>> {
    tail_index(model.decomposition())?;
    let records = simulate_range_multi(model, cfg, barriers, 0..cfg.n_paths)?;
    asymptotic_rows(model, barriers, &records)
}
