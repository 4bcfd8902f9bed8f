//! Discretized distributions on a uniform lattice.
//!
//! A lattice with step `h` carries cell masses `p_j` for the cells
//! `[(j − ½)h, (j + ½)h]`, with cell `0` being `[0, h/2]`. Cell `j` is
//! represented by the point `jh`, so sums of lattice variables stay on the
//! lattice and their distribution functions are unambiguous at the cell
//! boundaries `b_j = (j + ½)h`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::quad::Estimate;
use crate::{Error, Result};

/// A nonincreasing tail `f` and its integrated tail `I(t) = ∫_t^∞ f`, tabulated
/// at the nodes `t_j = j·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailTable {
    step: f64,
    tail: Vec<f64>,
    integral: Vec<f64>,
    error: f64,
}

impl TailTable {
    /// Tabulate on `nodes + 1` nodes. `total` is `I(0)`; the integral is
    /// accumulated from it by composite Simpson panels `[t_j, t_{j+1}]`, so
    /// `f` is also evaluated at the panel midpoints.
    pub fn build<F>(mut f: F, total: f64, step: f64, nodes: usize) -> Result<Self>
    where
        F: FnMut(f64) -> Result<Estimate>,
    {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Parameter {
                name: "step",
                value: step,
            });
        }
        if !total.is_finite() {
            return Err(Error::Validation("integrated tail must be finite".into()));
        }
        let mut tail = Vec::with_capacity(nodes + 1);
        let mut integral = Vec::with_capacity(nodes + 1);
        let first = f(0.0)?;
        let mut error = 0.0;
        tail.push(first.value);
        integral.push(total);
        let mut prev = first;
        for j in 0..nodes {
            let mid = f((j as f64 + 0.5) * step)?;
            let next = f((j + 1) as f64 * step)?;
            let area = step / 6.0 * (prev.value + 4.0 * mid.value + next.value);
            error += step / 6.0 * (prev.error + 4.0 * mid.error + next.error);
            integral.push((integral[j] - area).max(0.0));
            tail.push(next.value);
            prev = next;
        }
        Ok(Self {
            step,
            tail,
            integral,
            error,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Index of the last node.
    pub fn nodes(&self) -> usize {
        self.tail.len() - 1
    }

    pub fn end(&self) -> f64 {
        self.nodes() as f64 * self.step
    }

    pub fn tail_node(&self, j: usize) -> f64 {
        self.tail[j]
    }

    pub fn integral_node(&self, j: usize) -> f64 {
        self.integral[j]
    }

    /// Accumulated quadrature error of the tail evaluations.
    pub fn error(&self) -> f64 {
        self.error
    }

    /// `I(t)` by cubic Hermite interpolation with slopes `−f`; `None` beyond
    /// the last node.
    pub fn integral_at(&self, t: f64) -> Option<f64> {
        if t <= 0.0 {
            return Some(self.integral[0]);
        }
        let r = t / self.step;
        let j = r.floor() as usize;
        if j >= self.nodes() {
            return (j == self.nodes() && r == j as f64).then(|| self.integral[j]);
        }
        let s = r - j as f64;
        let (y0, y1) = (self.integral[j], self.integral[j + 1]);
        let (m0, m1) = (-self.tail[j] * self.step, -self.tail[j + 1] * self.step);
        let s2 = s * s;
        let s3 = s2 * s;
        let v =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        Some(v.max(0.0))
    }
}

/// Cell masses from a tail `G` given at the boundaries `b_0, b_1, …`:
/// `p_0 = (total − G(b_0))/total`, `p_j = (G(b_{j−1}) − G(b_j))/total`.
pub fn cell_masses(tail_at_boundaries: &[f64], total: f64) -> Vec<f64> {
    let mut prev = total;
    tail_at_boundaries
        .iter()
        .map(|&g| {
            let p = ((prev - g) / total).max(0.0);
            prev = g;
            p
        })
        .collect()
}

/// `(a ⊛ b)_i = Σ_{j ≤ i} a_j b_{i−j}`, truncated to `a.len()` cells.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (j, &aj) in a.iter().enumerate() {
        if aj == 0.0 {
            continue;
        }
        for (o, &bk) in out[j..].iter_mut().zip(b.iter()) {
            *o += aj * bk;
        }
    }
    out
}

/// `Σ_{n=1}^{N} ρⁿ p^{n*}` with `N` the first index where the geometric
/// remainder `ρ^{N+1}/(1 − ρ)` drops below `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricCompound {
    pub sum: Vec<f64>,
    pub terms: usize,
    /// `ρ^{N+1}`, the mass the truncated series leaves out.
    pub remainder: f64,
}

pub fn geometric_compound(p: &[f64], rho: f64, tol: f64) -> Result<GeometricCompound> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Parameter {
            name: "rho",
            value: rho,
        });
    }
    let mut sum = vec![0.0; p.len()];
    if rho == 0.0 {
        return Ok(GeometricCompound {
            sum,
            terms: 0,
            remainder: 0.0,
        });
    }
    let mut power = p.to_vec();
    let mut weight = rho;
    let mut terms = 0;
    loop {
        terms += 1;
        for (s, q) in sum.iter_mut().zip(&power) {
            *s += weight * q;
        }
        weight *= rho;
        if weight / (1.0 - rho) < tol {
            break;
        }
        power = convolve(&power, p);
    }
    Ok(GeometricCompound {
        sum,
        terms,
        remainder: weight,
    })
}

/// The renewal measure `δ₀ + Σ_{n≥1} p^{n*}` of a proper lattice law, with the
/// probabilities `q_n = P(exactly n steps stay within the lattice)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Renewal {
    pub measure: Vec<f64>,
    pub count_probs: Vec<f64>,
    /// Probability that more than `count_probs.len() − 1` steps stay inside.
    pub remainder: f64,
}

pub fn renewal(p: &[f64], tol: f64, max_terms: usize) -> Result<Renewal> {
    let mut measure = vec![0.0; p.len()];
    measure[0] = 1.0;
    let mut count_probs = Vec::new();
    let mut inside_prev = 1.0;
    let mut power = p.to_vec();
    for _ in 0..max_terms {
        let inside: f64 = power.iter().sum();
        count_probs.push((inside_prev - inside).max(0.0));
        if inside < tol {
            return Ok(Renewal {
                measure,
                count_probs,
                remainder: inside,
            });
        }
        for (m, q) in measure.iter_mut().zip(&power) {
            *m += q;
        }
        inside_prev = inside;
        power = convolve(&power, p);
    }
    Err(Error::Validation(alloc::format!(
        "renewal series did not reach {tol:e} within {max_terms} terms"
    )))
}

/// `P(Gamma(n+1, rate) ≤ t) = 1 − Σ_{j≤n} e^{−rate·t}(rate·t)^j/j!`.
pub fn erlang_cdf(n: usize, rate: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let m = rate * t;
    let mut log_term = -m;
    let mut survival = log_term.exp();
    for j in 1..=n {
        log_term += m.ln() - (j as f64).ln();
        survival += log_term.exp();
    }
    (1.0 - survival).clamp(0.0, 1.0)
}

/// `Δ²·|f''|/8` on the knot interval containing `t`, with `|f''|` from the
/// second divided differences around it plus a 50% margin for its variation
/// across the stencil. This bounds linear interpolation between exact knot
/// values, and equally a midpoint-type offset of the knot values themselves.
pub fn curvature_bound(knots: &[f64], values: &[f64], t: f64) -> f64 {
    let i = knots.partition_point(|&k| k <= t).clamp(1, knots.len() - 1);
    let (x0, x1) = (knots[i - 1], knots[i]);
    let second = |j: usize| -> f64 {
        let (a, b, c) = (knots[j - 1], knots[j], knots[j + 1]);
        let d1 = (values[j] - values[j - 1]) / (b - a);
        let d2 = (values[j + 1] - values[j]) / (c - b);
        2.0 * (d2 - d1).abs() / (c - a)
    };
    let mut curv = 0.0f64;
    for j in [i - 1, i] {
        if j >= 1 && j + 1 < knots.len() {
            curv = curv.max(second(j));
        }
    }
    0.1875 * (x1 - x0) * (x1 - x0) * curv
}

/// Linear interpolation through `(knots[i], values[i])`, `knots` increasing.
/// Outside the knots the end values are returned.
pub fn interpolate(knots: &[f64], values: &[f64], t: f64) -> f64 {
    let i = knots.partition_point(|&k| k <= t);
    if i == 0 {
        return values[0];
    }
    if i == knots.len() {
        return values[i - 1];
    }
    let (x0, x1) = (knots[i - 1], knots[i]);
    let w = (t - x0) / (x1 - x0);
    values[i - 1] + w * (values[i] - values[i - 1])
}
