use alloc::vec::Vec;

use super::{check_barrier, RiskModel};
use crate::decompose::{JumpClass, JumpDecomposition};
use crate::lattice::{cell_masses, curvature_bound, geometric_compound, interpolate, TailTable};
use crate::quad::Estimate;
use crate::{Error, Result};

/// One integrated-tail table per jump class, all on the same nodes.
pub(super) fn class_tables(dec: &JumpDecomposition, step: f64, nodes: usize) -> Result<[TailTable; 3]> {
    let table = |k: JumpClass| -> Result<TailTable> {
        let mean = dec.mean_pk(k)?.value;
        TailTable::build(|t| dec.tail_pk_at(k, t), mean, step, nodes)
    };
    Ok([
        table(JumpClass::Single1)?,
        table(JumpClass::Single2)?,
        table(JumpClass::Common)?,
    ])
}

/// Ruin and cause probabilities at the boundaries of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct LatticeLaw {
    /// `0` followed by the cell boundaries.
    pub knots: Vec<f64>,
    pub ruin: Vec<f64>,
    pub cause: [Vec<f64>; 3],
    /// `Σ_{n≥1} ρⁿ` times the lattice law of `F_H^{n*}`, by cell.
    pub compound: Vec<f64>,
    pub terms: usize,
    pub remainder: f64,
}

impl LatticeLaw {
    /// `integrals[k][j]` is `I_k(b_j) = ∫_{b_j}^∞ Π̄_{P^k}`; `h` the lattice step.
    pub fn new(integrals: [Vec<f64>; 3], means: [f64; 3], h: f64, drift: f64, tol: f64) -> Result<Self> {
        let mu: f64 = means.iter().sum();
        let rho = mu / drift;
        let n = integrals[0].len();
        let sum: Vec<f64> = (0..n).map(|j| integrals.iter().map(|i| i[j]).sum()).collect();
        let p = cell_masses(&sum, mu);
        let g = geometric_compound(&p, rho, tol)?;
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(0.0);
        knots.extend((0..n).map(|j| (j as f64 + 0.5) * h));
        let mut ruin = Vec::with_capacity(n + 1);
        ruin.push(rho);
        let mut acc = 0.0;
        for v in &g.sum {
            acc += v;
            ruin.push((rho - g.remainder - (1.0 - rho) * acc).max(0.0));
        }
        let cause = [0, 1, 2].map(|k| {
            let ik = &integrals[k];
            let mut out = Vec::with_capacity(n + 1);
            out.push(means[k] / drift);
            for j in 0..n {
                let conv: f64 = (0..=j).map(|w| ik[j - w] * g.sum[w]).sum();
                out.push((ik[j] + conv) / drift);
            }
            out
        });
        Ok(Self {
            knots,
            ruin,
            cause,
            compound: g.sum,
            terms: g.terms,
            remainder: g.remainder,
        })
    }
}

/// Ruin and cause probabilities for every barrier in `[0, x_max]`.
///
/// Values are computed at the lattice boundaries and linearly interpolated in
/// between. The reported error is the Richardson estimate `|ψ_h − ψ_{2h}|/3`,
/// a curvature term `h²|ψ''|/8`, the dropped series mass and the accumulated
/// quadrature error.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageTable {
    x_max: f64,
    h: f64,
    fine: LatticeLaw,
    coarse: LatticeLaw,
    quad_error: f64,
}

impl PassageTable {
    pub(super) fn build(model: &RiskModel, x_max: f64) -> Result<Self> {
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(Error::Domain {
                op: "passage table extent",
                value: x_max,
            });
        }
        let dec = model.decomposition();
        let n = model.grid().cells;
        let h = x_max / (n as f64 + 0.5);
        // Nodes at multiples of h/2: fine boundaries (j + ½)h are odd nodes,
        // coarse boundaries (2j + 1)h are nodes 4j + 2.
        let nodes = 2 * n + 4;
        let tables = class_tables(dec, 0.5 * h, nodes)?;
        let means = [0, 1, 2].map(|k| tables[k].integral_node(0));
        let fine_idx: Vec<usize> = (0..=n).map(|j| 2 * j + 1).collect();
        let m = n.div_ceil(2);
        let coarse_idx: Vec<usize> = (0..=m).map(|j| 4 * j + 2).collect();
        let pick =
            |idx: &[usize]| [0, 1, 2].map(|k| idx.iter().map(|&i| tables[k].integral_node(i)).collect::<Vec<_>>());
        let tol = model.grid().series_tol;
        let fine = LatticeLaw::new(pick(&fine_idx), means, h, model.drift(), tol)?;
        let coarse = LatticeLaw::new(pick(&coarse_idx), means, 2.0 * h, model.drift(), tol)?;
        let quad_error = tables.iter().map(|t| t.error()).sum::<f64>() / model.drift();
        Ok(Self {
            x_max,
            h,
            fine,
            coarse,
            quad_error,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Number of terms kept in the geometric series.
    pub fn series_terms(&self) -> usize {
        self.fine.terms
    }

    /// `ρ^{N+1}`, the mass the truncated series leaves out.
    pub fn series_remainder(&self) -> f64 {
        self.fine.remainder
    }

    fn lookup(&self, x: f64, pick: impl Fn(&LatticeLaw) -> &Vec<f64>) -> Result<Estimate> {
        check_barrier(x)?;
        if x > self.x_max * (1.0 + 1e-12) {
            return Err(Error::Domain {
                op: "barrier beyond passage table",
                value: x,
            });
        }
        let f = interpolate(&self.fine.knots, pick(&self.fine), x);
        if x == 0.0 {
            return Ok(Estimate::new(f, 0.0));
        }
        let c = interpolate(&self.coarse.knots, pick(&self.coarse), x);
        // Coarse knots sit at fine midpoints, where the knot offset and the
        // interpolation error cancel, so Richardson alone misses the curvature term.
        let curv = curvature_bound(&self.fine.knots, pick(&self.fine), x);
        Ok(Estimate::new(
            f,
            (f - c).abs() / 3.0 + curv + self.fine.remainder + self.quad_error,
        ))
    }

    pub fn ruin_prob(&self, x: f64) -> Result<Estimate> {
        self.lookup(x, |l| &l.ruin)
    }

    pub fn cause_prob(&self, x: f64, k: JumpClass) -> Result<Estimate> {
        self.lookup(x, |l| &l.cause[k.index() - 1])
    }

    /// Boundaries of the fine lattice, with `0` prepended.
    pub fn knots(&self) -> &[f64] {
        &self.fine.knots
    }
}

/// `F_H(z) = 1 − ∫_z^∞ Π̄_S/μ_S` tabulated on `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderHeightDF {
    h: f64,
    masses: Vec<f64>,
    table: [TailTable; 3],
    mean: f64,
}

impl LadderHeightDF {
    pub(super) fn build(model: &RiskModel, x_max: f64) -> Result<Self> {
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(Error::Domain {
                op: "ladder height grid extent",
                value: x_max,
            });
        }
        let n = model.grid().cells;
        let h = x_max / (n as f64 + 0.5);
        let table = class_tables(model.decomposition(), 0.5 * h, 2 * n + 1)?;
        let mean: f64 = table.iter().map(|t| t.integral_node(0)).sum();
        let tails: Vec<f64> = (0..=n)
            .map(|j| table.iter().map(|t| t.integral_node(2 * j + 1)).sum())
            .collect();
        Ok(Self {
            h,
            masses: cell_masses(&tails, mean),
            table,
            mean,
        })
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Lattice cell masses; cell `j` covers `[(j − ½)h, (j + ½)h]`.
    pub fn cell_masses(&self) -> &[f64] {
        &self.masses
    }

    /// `F_H(z)` for `0 ≤ z ≤ x_max`.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(Error::Domain {
                op: "ladder height cdf",
                value: z,
            });
        }
        let mut tail = 0.0;
        for t in &self.table {
            tail += t.integral_at(z).ok_or(Error::Domain {
                op: "ladder height cdf beyond grid",
                value: z,
            })?;
        }
        Ok(1.0 - tail / self.mean)
    }

    /// Mass on the grid plus the tabulated remainder `Π̄_H(x_max)/μ_S`.
    pub fn mass(&self) -> f64 {
        let last = 2 * (self.masses.len() - 1) + 1;
        let rest: f64 = self.table.iter().map(|t| t.integral_node(last)).sum();
        self.masses.iter().sum::<f64>() + rest / self.mean
    }
}
