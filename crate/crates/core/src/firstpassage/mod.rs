//! First-passage laws of `X = S − ct` over a barrier `x ≥ 0`.
//!
//! Two model classes are exact:
//!
//! * `c > 0` with net profit `μ_S < c`: the ladder heights of `X` have the
//!   integrated-tail law `F_H(dz) = Π̄_S(z)dz/μ_S`, the ruin probability is the
//!   geometric compound `(1 − ρ)Σ_{n≥1} ρⁿ F̄_H^{n*}(x)` with `ρ = μ_S/c`, and
//!   the overshoot, undershoot, undershoot of the previous maximum and cause
//!   have the joint law `Π_{P^k}(du + v) dv (1/c) Σ_{n≥0} ρⁿ F_H^{n*}(x − dy)`.
//! * `c = 0` with finite total intensity `λ`: the passage time, overshoot,
//!   undershoot and cause have the joint law
//!   `Π_{P^k}(du + v) Σ_{n≥0} ((λs)ⁿ/n!) e^{−λs} ds F^{n*}(x − dv)`.
//!
//! Both are evaluated on a lattice whose cell boundaries include the barrier.

mod ladder;
mod space;
mod triple;

pub use ladder::{LadderHeightDF, PassageTable};
pub use space::{SpaceDensity, SpaceLaw};
pub use triple::TripleLaw;

use crate::decompose::{JumpClass, JumpDecomposition};
use crate::quad::Estimate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Lattice cells below the barrier; the step is `x/(cells + ½)`.
    pub cells: usize,
    /// Bound on the mass dropped by truncating geometric and renewal series.
    pub series_tol: f64,
    /// Node spacing of the integrated-tail table used for arbitrary arguments.
    pub far_step: f64,
    /// Length of that table beyond the barrier.
    pub reach: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cells: 4096,
            series_tol: 1e-10,
            far_step: 5e-3,
            reach: 40.0,
        }
    }
}

impl GridConfig {
    fn validate(&self) -> Result<()> {
        if self.cells < 4 {
            return Err(Error::Parameter {
                name: "cells",
                value: self.cells as f64,
            });
        }
        if !(self.series_tol > 0.0 && self.series_tol < 1.0) {
            return Err(Error::Parameter {
                name: "series_tol",
                value: self.series_tol,
            });
        }
        if !(self.far_step > 0.0 && self.far_step.is_finite()) {
            return Err(Error::Parameter {
                name: "far_step",
                value: self.far_step,
            });
        }
        if !(self.reach >= 0.0 && self.reach.is_finite()) {
            return Err(Error::Parameter {
                name: "reach",
                value: self.reach,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `c = 0`: a pure compound Poisson sum.
    CompoundPoisson,
    /// `c > 0` under the net profit condition.
    NegativeDrift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskModel {
    drift: f64,
    dec: JumpDecomposition,
    grid: GridConfig,
}

impl RiskModel {
    /// `c = 0` needs finite total jump intensity, `c > 0` needs `μ_S < c`.
    pub fn new(drift: f64, dec: JumpDecomposition) -> Result<Self> {
        if !(drift >= 0.0 && drift.is_finite()) {
            return Err(Error::Parameter {
                name: "drift",
                value: drift,
            });
        }
        if drift == 0.0 {
            dec.lambda_sum()?;
        } else {
            let mu = dec.mean_sum();
            if !mu.is_finite() {
                return Err(Error::Validation(
                    "net profit condition needs a finite mean jump rate μ_S, which diverges".into(),
                ));
            }
            if mu >= drift {
                return Err(Error::Validation(alloc::format!(
                    "net profit condition μ_S < c violated: μ_S = {mu}, c = {drift}"
                )));
            }
        }
        Ok(Self {
            drift,
            dec,
            grid: GridConfig::default(),
        })
    }

    pub fn with_grid(mut self, grid: GridConfig) -> Result<Self> {
        grid.validate()?;
        self.grid = grid;
        Ok(self)
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn decomposition(&self) -> &JumpDecomposition {
        &self.dec
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn mode(&self) -> Mode {
        if self.drift == 0.0 {
            Mode::CompoundPoisson
        } else {
            Mode::NegativeDrift
        }
    }

    /// `ρ = μ_S/c`.
    pub fn rho(&self) -> Result<f64> {
        self.require(Mode::NegativeDrift)?;
        Ok(self.dec.mean_sum() / self.drift)
    }

    fn require(&self, mode: Mode) -> Result<()> {
        if self.mode() == mode {
            Ok(())
        } else {
            Err(Error::Validation(alloc::format!("operation needs {mode:?} mode")))
        }
    }

    pub fn passage_table(&self, x_max: f64) -> Result<PassageTable> {
        self.require(Mode::NegativeDrift)?;
        PassageTable::build(self, x_max)
    }

    pub fn ladder_height_df(&self, x_max: f64) -> Result<LadderHeightDF> {
        self.require(Mode::NegativeDrift)?;
        LadderHeightDF::build(self, x_max)
    }

    /// `ℙ(τ_x⁺ < ∞)`; `μ_S/c` exactly at `x = 0`.
    pub fn ruin_prob(&self, x: f64) -> Result<Estimate> {
        check_barrier(x)?;
        if x == 0.0 {
            return Ok(Estimate::new(self.rho()?, 0.0));
        }
        self.passage_table(x)?.ruin_prob(x)
    }

    /// `ℙ(τ_x⁺ < ∞, ΔX_{τ_x⁺} = ΔP^k_{τ_x⁺})`; `μ_{P^k}/c` at `x = 0`.
    pub fn cause_prob(&self, x: f64, k: JumpClass) -> Result<Estimate> {
        check_barrier(x)?;
        if x == 0.0 {
            self.require(Mode::NegativeDrift)?;
            return Ok(self.dec.mean_pk(k)?.scale(1.0 / self.drift));
        }
        self.passage_table(x)?.cause_prob(x, k)
    }

    pub fn space_law(&self, x: f64) -> Result<SpaceLaw> {
        self.require(Mode::NegativeDrift)?;
        SpaceLaw::build(self, x)
    }

    pub fn triple_law(&self, x: f64) -> Result<TripleLaw> {
        self.require(Mode::CompoundPoisson)?;
        TripleLaw::build(self, x)
    }
}

fn check_barrier(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "barrier",
            value: x,
        })
    }
}
