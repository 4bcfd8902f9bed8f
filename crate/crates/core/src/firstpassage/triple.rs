use alloc::vec::Vec;

use super::{check_barrier, RiskModel};
use crate::decompose::{JumpClass, JumpDecomposition};
use crate::lattice::{cell_masses, erlang_cdf, renewal, Renewal};
use crate::Result;

/// Joint law of passage time, overshoot, undershoot and cause for a pure
/// compound Poisson sum (`c = 0`) at barrier `x`.
///
/// The pre-passage position `X_{τ−}` is a renewal point of the jump d.f.
/// `F = Π_S/λ`. With exactly `n` jumps before passage the time is
/// `Gamma(n + 1, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleLaw {
    x: f64,
    lambda: f64,
    h: f64,
    /// `weights[k][w]`: probability of cause `k` with `X_{τ−}` in lattice cell `w`.
    weights: [Vec<f64>; 3],
    /// Mass of `X_{τ−} = 0` exactly, per cause (no jump before passage).
    atom: [f64; 3],
    renewal: Renewal,
    dec: JumpDecomposition,
}

impl TripleLaw {
    pub(super) fn build(model: &RiskModel, x: f64) -> Result<Self> {
        check_barrier(x)?;
        let dec = model.decomposition().clone();
        let lambda = dec.lambda_sum()?;
        if x == 0.0 {
            return Ok(Self {
                x,
                lambda,
                h: 0.0,
                weights: [Vec::new(), Vec::new(), Vec::new()],
                atom: JumpClass::ALL.map(|k| dec.intensity(k) / lambda),
                renewal: Renewal {
                    measure: Vec::new(),
                    count_probs: alloc::vec![1.0],
                    remainder: 0.0,
                },
                dec,
            });
        }
        let n = model.grid().cells;
        let h = x / (n as f64 + 0.5);
        let mut tails = [Vec::new(), Vec::new(), Vec::new()];
        for (k, t) in JumpClass::ALL.iter().zip(tails.iter_mut()) {
            *t = (0..=n)
                .map(|j| dec.tail_pk_at(*k, (j as f64 + 0.5) * h).map(|e| e.value))
                .collect::<Result<Vec<f64>>>()?;
        }
        let sum: Vec<f64> = (0..=n).map(|j| tails.iter().map(|t| t[j]).sum()).collect();
        let p = cell_masses(&sum, lambda);
        let tol = model.grid().series_tol;
        let renewal = renewal(&p, tol, 100_000)?;
        // X_{τ−} in cell w gives undershoot x − wh = b_{n−w}.
        let weights = [0, 1, 2].map(|k| {
            (0..=n)
                .map(|w| renewal.measure[w] * tails[k][n - w] / lambda)
                .collect::<Vec<_>>()
        });
        let atom = [0, 1, 2].map(|k| tails[k][n] / lambda);
        Ok(Self {
            x,
            lambda,
            h,
            weights,
            atom,
            renewal,
            dec,
        })
    }

    pub fn barrier(&self) -> f64 {
        self.x
    }

    pub fn total_intensity(&self) -> f64 {
        self.lambda
    }

    /// `ℙ(ΔX_{τ_x⁺} = ΔP^k_{τ_x⁺})`.
    pub fn cause_prob(&self, k: JumpClass) -> f64 {
        let i = k.index() - 1;
        if self.x == 0.0 {
            self.atom[i]
        } else {
            self.weights[i].iter().sum()
        }
    }

    /// `ℙ(τ_x⁺ ≤ t)`, a mixture of `Gamma(n + 1, λ)` laws.
    pub fn time_cdf(&self, t: f64) -> f64 {
        self.renewal
            .count_probs
            .iter()
            .enumerate()
            .map(|(n, q)| q * erlang_cdf(n, self.lambda, t))
            .sum()
    }

    /// Probability that more jumps than tracked stay below the barrier.
    pub fn series_remainder(&self) -> f64 {
        self.renewal.remainder
    }

    /// `ℙ(x − X_{τ_x⁺−} ≤ v, cause k)`, spreading each lattice cell uniformly.
    pub fn undershoot_cdf(&self, v: f64, k: JumpClass) -> f64 {
        let i = k.index() - 1;
        if self.x == 0.0 {
            return if v >= 0.0 { self.atom[i] } else { 0.0 };
        }
        let n = self.weights[i].len() - 1;
        let mut total = if v >= self.x { self.atom[i] } else { 0.0 };
        for (w, &m) in self.weights[i].iter().enumerate() {
            let m = if w == 0 { m - self.atom[i] } else { m };
            // Cell w of X_{τ−} maps to undershoots [(n − w)h, (n − w + 1)h],
            // clipped to [nh, x] for w = 0.
            let lo = (n - w) as f64 * self.h;
            let hi = if w == 0 { self.x } else { lo + self.h };
            let frac = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
            total += m * frac;
        }
        total
    }

    /// `ℙ(X_{τ_x⁺} − x > u, cause k)` for `u ≥ 0`.
    pub fn overshoot_tail(&self, u: f64, k: JumpClass) -> Result<f64> {
        if self.x == 0.0 {
            return Ok(self.dec.tail_pk_at(k, u)?.value / self.lambda);
        }
        let n = self.renewal.measure.len() - 1;
        let mut total = 0.0;
        for (w, &r) in self.renewal.measure.iter().enumerate() {
            if r > 0.0 {
                let v = (n - w) as f64 * self.h + 0.5 * self.h;
                total += r * self.dec.tail_pk_at(k, u + v)?.value;
            }
        }
        Ok(total / self.lambda)
    }
}
