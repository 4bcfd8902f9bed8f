use alloc::vec::Vec;

use num_traits::Float;

use super::ladder::{class_tables, LatticeLaw};
use super::{check_barrier, RiskModel};
use crate::decompose::{JumpClass, JumpDecomposition};
use crate::lattice::TailTable;
use crate::{Error, Result};

/// Joint law of overshoot `u`, undershoot `v`, undershoot of the previous
/// maximum `y` and cause `k` at a fixed barrier `x`, on the ruin event.
///
/// The `y`-marginal has an atom at `y = x` (no ladder step before passage)
/// and a lattice density on `[0, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceLaw {
    x: f64,
    drift: f64,
    h: f64,
    /// Ladder-compound cell masses; cell `w` sits at `y = x − wh`.
    compound: Vec<f64>,
    ruin: f64,
    cause: [f64; 3],
    far: [TailTable; 3],
    dec: JumpDecomposition,
}

/// `atom` is a density in `(u, v)` carried by `y = x`; `continuous` is a
/// density in `(u, v, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceDensity {
    pub continuous: f64,
    pub atom: f64,
}

impl SpaceLaw {
    pub(super) fn build(model: &RiskModel, x: f64) -> Result<Self> {
        check_barrier(x)?;
        let dec = model.decomposition().clone();
        let grid = model.grid();
        let far_nodes = ((x + grid.reach) / grid.far_step).ceil() as usize + 1;
        let far = class_tables(&dec, grid.far_step, far_nodes)?;
        let means = [0, 1, 2].map(|k| far[k].integral_node(0));
        let c = model.drift();
        if x == 0.0 {
            let rho = means.iter().sum::<f64>() / c;
            return Ok(Self {
                x,
                drift: c,
                h: 0.0,
                compound: Vec::new(),
                ruin: rho,
                cause: means.map(|m| m / c),
                far,
                dec,
            });
        }
        let n = grid.cells;
        let h = x / (n as f64 + 0.5);
        let tables = class_tables(&dec, 0.5 * h, 2 * n + 1)?;
        let integrals = [0, 1, 2].map(|k| (0..=n).map(|j| tables[k].integral_node(2 * j + 1)).collect::<Vec<_>>());
        let law = LatticeLaw::new(integrals, means, h, c, grid.series_tol)?;
        Ok(Self {
            x,
            drift: c,
            h,
            ruin: law.ruin[n + 1],
            cause: [0, 1, 2].map(|k| law.cause[k][n + 1]),
            compound: law.compound,
            far,
            dec,
        })
    }

    pub fn barrier(&self) -> f64 {
        self.x
    }

    pub fn ruin_prob(&self) -> f64 {
        self.ruin
    }

    pub fn cause_prob(&self, k: JumpClass) -> f64 {
        self.cause[k.index() - 1]
    }

    /// `I_k(t) = ∫_t^∞ Π̄_{P^k}`.
    pub fn integrated_tail(&self, k: JumpClass, t: f64) -> Result<f64> {
        if t == f64::INFINITY {
            return Ok(0.0);
        }
        match self.far[k.index() - 1].integral_at(t) {
            Some(v) => Ok(v),
            None => Ok(self.dec.integrated_tail_pk(k, t)?.value),
        }
    }

    /// `∫∫_{[u0,u1]×[max(v0,y),v1]} Π_{P^k}(du + v) dv`.
    fn strip(&self, k: JumpClass, u: (f64, f64), v: (f64, f64), y: f64) -> Result<f64> {
        let va = v.0.max(y);
        if va >= v.1 {
            return Ok(0.0);
        }
        let i = |t: f64| self.integrated_tail(k, t);
        let lower = i(u.0 + va)? - i(u.0 + v.1)?;
        let upper = if u.1 == f64::INFINITY {
            0.0
        } else {
            i(u.1 + va)? - i(u.1 + v.1)?
        };
        Ok((lower - upper).max(0.0))
    }

    /// `ℙ(u ∈ [u0, u1], v ∈ [v0, v1], cause k, τ_x⁺ < ∞)`; upper ends may be `∞`.
    pub fn rect_prob(&self, k: JumpClass, u: (f64, f64), v: (f64, f64)) -> Result<f64> {
        if !(u.0 >= 0.0 && u.0 <= u.1 && v.0 >= 0.0 && v.0 <= v.1) {
            return Err(Error::Domain {
                op: "rect_prob bounds",
                value: if u.0 <= u.1 { v.0 } else { u.0 },
            });
        }
        let mut total = self.strip(k, u, v, self.x)?;
        for (w, m) in self.compound.iter().enumerate() {
            if *m > 0.0 {
                let y = self.x - w as f64 * self.h;
                total += m * self.strip(k, u, v, y)?;
            }
        }
        Ok(total / self.drift)
    }

    /// The joint density at `(u, v, y, k)`; zero off the support
    /// `u > 0, 0 ≤ y ≤ x, v ≥ y`.
    pub fn density(&self, u: f64, v: f64, y: f64, k: JumpClass) -> Result<SpaceDensity> {
        let zero = SpaceDensity {
            continuous: 0.0,
            atom: 0.0,
        };
        if !(u > 0.0 && y >= 0.0 && y <= self.x && v >= y) {
            return Ok(zero);
        }
        let jump = self.dec.density_pk(k, u + v)?.value / self.drift;
        if y == self.x {
            return Ok(SpaceDensity {
                continuous: 0.0,
                atom: jump,
            });
        }
        let w = ((self.x - y) / self.h).round() as usize;
        let mass = self.compound.get(w).copied().unwrap_or(0.0);
        Ok(SpaceDensity {
            continuous: jump * mass / self.h,
            atom: 0.0,
        })
    }
}
