//! Sums of two random walks whose increments `(ξ¹, ξ²)` are coupled by a
//! distributional copula, `ℙ(ξ¹ ≤ x, ξ² ≤ y) = C(F₁(x), F₂(y))`.
//!
//! A step of `Z = Z¹ + Z²` falls in one of the sign classes `P³` (both
//! increments positive), `P⁴` (`ξ¹ > 0 ≥ ξ²`), `P⁵` (`ξ² > 0 ≥ ξ¹`) or the
//! class where neither is positive, whose mass is `C(F₁(0), F₂(0))`. For
//! positive increments every step is a strict ladder step, so the potential
//! measure of `j` ladder steps is `F_{P³}^{j*}` and the passage law over `x`
//! factorizes into `F_{P³}(du + v) F_{P³}^{j*}(x − dv)`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::lattice::{convolve, renewal, Renewal};
use crate::montecarlo::path_rng;
use crate::quad::{integrate, integrate_to_infinity, Estimate, QuadConfig};
use crate::roots::bisect;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistCopula {
    Independence,
    Comonotone,
    ClaytonDist { theta: f64 },
}

impl DistCopula {
    pub fn clayton(theta: f64) -> Result<Self> {
        let c = DistCopula::ClaytonDist { theta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistCopula::ClaytonDist { theta } if !(theta > 0.0 && theta.is_finite()) => Err(Error::Parameter {
                name: "theta",
                value: theta,
            }),
            _ => Ok(()),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            DistCopula::Independence => "independence",
            DistCopula::Comonotone => "comonotone",
            DistCopula::ClaytonDist { .. } => "clayton",
        }
    }

    /// `C(u, v)` on `[0, 1]²`.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        match *self {
            DistCopula::Independence => u * v,
            DistCopula::Comonotone => u.min(v),
            DistCopula::ClaytonDist { theta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
                }
            }
        }
    }

    /// `∂C/∂u = ℙ(V ≤ v | U = u)`; the comonotone copula has the step `1{u < v}`.
    pub fn du(&self, u: f64, v: f64) -> f64 {
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        match *self {
            DistCopula::Independence => v,
            DistCopula::Comonotone => {
                if u < v {
                    1.0
                } else {
                    0.0
                }
            }
            DistCopula::ClaytonDist { theta } => {
                if v == 0.0 {
                    return 0.0;
                }
                // u^{−θ−1}(u^{−θ} + v^{−θ} − 1)^{−1/θ−1}, rewritten to stay finite at u = 0.
                (1.0 + (v.powf(-theta) - 1.0) * u.powf(theta)).powf(-(1.0 + theta) / theta)
            }
        }
    }

    /// `∂C/∂v`; all families are exchangeable.
    pub fn dv(&self, u: f64, v: f64) -> f64 {
        self.du(v, u)
    }

    /// Survival copula `C̃(u, v) = u + v − 1 + C(1 − u, 1 − v)`.
    pub fn survival(&self, u: f64, v: f64) -> f64 {
        u + v - 1.0 + self.cdf(1.0 - u, 1.0 - v)
    }

    /// `∂C̃/∂u = 1 − ∂C/∂u(1 − u, 1 − v)`.
    pub fn survival_du(&self, u: f64, v: f64) -> f64 {
        1.0 - self.du(1.0 - u, 1.0 - v)
    }

    /// `v` with `∂C/∂u(u, v) = q`: the conditional quantile used for sampling.
    pub fn conditional_quantile(&self, u: f64, q: f64) -> f64 {
        match *self {
            DistCopula::Independence => q,
            DistCopula::Comonotone => u,
            DistCopula::ClaytonDist { theta } => {
                let a = q.powf(-theta / (1.0 + theta)) - 1.0;
                (a * u.powf(-theta) + 1.0).powf(-1.0 / theta)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginLaw {
    Exponential { rate: f64 },
    Normal { mean: f64, sd: f64 },
}

/// A one-dimensional increment law, optionally with an atom at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistMargin {
    pub law: MarginLaw,
    pub zero_atom: f64,
}

impl DistMargin {
    pub fn exponential(rate: f64) -> Result<Self> {
        Self::checked(MarginLaw::Exponential { rate }, 0.0)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::checked(MarginLaw::Normal { mean, sd }, 0.0)
    }

    /// Mix in an atom at zero of mass `p`.
    pub fn with_zero_atom(self, p: f64) -> Result<Self> {
        Self::checked(self.law, p)
    }

    fn checked(law: MarginLaw, zero_atom: f64) -> Result<Self> {
        let m = Self { law, zero_atom };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self.law {
            MarginLaw::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                return Err(Error::Parameter {
                    name: "rate",
                    value: rate,
                })
            }
            MarginLaw::Normal { mean, sd } => {
                if !mean.is_finite() {
                    return Err(Error::Parameter {
                        name: "mean",
                        value: mean,
                    });
                }
                if !(sd > 0.0 && sd.is_finite()) {
                    return Err(Error::Parameter { name: "sd", value: sd });
                }
            }
            _ => {}
        }
        if !(0.0..1.0).contains(&self.zero_atom) {
            return Err(Error::Parameter {
                name: "zero_atom",
                value: self.zero_atom,
            });
        }
        Ok(())
    }

    pub fn positive_support(&self) -> bool {
        matches!(self.law, MarginLaw::Exponential { .. })
    }

    fn law_cdf(&self, x: f64) -> f64 {
        match self.law {
            MarginLaw::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            MarginLaw::Normal { mean, sd } => normal_cdf((x - mean) / sd),
        }
    }

    fn law_density(&self, x: f64) -> f64 {
        match self.law {
            MarginLaw::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            MarginLaw::Normal { mean, sd } => {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * core::f64::consts::PI).sqrt())
            }
        }
    }

    fn law_quantile(&self, t: f64) -> f64 {
        match self.law {
            MarginLaw::Exponential { rate } => -(-t).ln_1p() / rate,
            MarginLaw::Normal { mean, sd } => mean + sd * normal_quantile(t),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let atom = if x >= 0.0 { self.zero_atom } else { 0.0 };
        atom + (1.0 - self.zero_atom) * self.law_cdf(x)
    }

    /// Density of the absolutely continuous part.
    pub fn density(&self, x: f64) -> f64 {
        (1.0 - self.zero_atom) * self.law_density(x)
    }

    /// Generalized inverse `inf{x : F(x) ≥ t}`.
    pub fn quantile(&self, t: f64) -> f64 {
        let p = self.zero_atom;
        let below = (1.0 - p) * self.law_cdf(0.0);
        if t <= below {
            self.law_quantile(t / (1.0 - p))
        } else if t <= below + p {
            0.0
        } else {
            self.law_quantile((t - p) / (1.0 - p))
        }
    }

    fn require_continuous(&self) -> Result<()> {
        if self.zero_atom == 0.0 {
            Ok(())
        } else {
            Err(Error::Validation(
                "increment class laws need absolutely continuous margins; atoms at zero are simulation-only".into(),
            ))
        }
    }
}

/// `Φ(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / core::f64::consts::SQRT_2)
}

/// `Φ⁻¹(t)`: rational initial guess refined by one Halley step.
pub fn normal_quantile(t: f64) -> f64 {
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if t >= 1.0 {
        return f64::INFINITY;
    }
    #[allow(clippy::excessive_precision)]
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const LOW: f64 = 0.02425;
    let tail = |q: f64| {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    let x = if t < LOW {
        tail(t)
    } else if t > 1.0 - LOW {
        -tail(1.0 - t)
    } else {
        let q = t - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    let e = normal_cdf(x) - t;
    let u = e * (2.0 * core::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IncrementClass {
    /// `P³`: `ξ¹ > 0, ξ² > 0`.
    BothUp,
    /// `P⁴`: `ξ¹ > 0 ≥ ξ²`.
    UpDown,
    /// `P⁵`: `ξ² > 0 ≥ ξ¹`.
    DownUp,
}

impl IncrementClass {
    pub const ALL: [IncrementClass; 3] = [IncrementClass::BothUp, IncrementClass::UpDown, IncrementClass::DownUp];

    /// `3`, `4` or `5`.
    pub fn index(self) -> usize {
        match self {
            IncrementClass::BothUp => 3,
            IncrementClass::UpDown => 4,
            IncrementClass::DownUp => 5,
        }
    }
}

/// A copula with its two margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementModel {
    pub copula: DistCopula,
    pub f1: DistMargin,
    pub f2: DistMargin,
}

const RW_QUAD: QuadConfig = QuadConfig {
    abs_tol: 1e-13,
    rel_tol: 1e-11,
    max_subdivisions: 2000,
};

impl IncrementModel {
    pub fn new(copula: DistCopula, f1: DistMargin, f2: DistMargin) -> Result<Self> {
        copula.validate()?;
        f1.validate()?;
        f2.validate()?;
        Ok(Self { copula, f1, f2 })
    }

    /// `C(F₁(0), F₂(0))`, the probability that neither increment is positive.
    pub fn negative_mass(&self) -> f64 {
        self.copula.cdf(self.f1.cdf(0.0), self.f2.cdf(0.0))
    }

    /// Total mass of a sign class.
    pub fn class_mass(&self, class: IncrementClass) -> f64 {
        let (a, b) = (self.f1.cdf(0.0), self.f2.cdf(0.0));
        let both = self.negative_mass();
        match class {
            IncrementClass::BothUp => 1.0 - a - b + both,
            IncrementClass::UpDown => b - both,
            IncrementClass::DownUp => a - both,
        }
    }

    /// `F_{P^k}(z) = ℙ(class k, ξ¹ + ξ² ≤ z)` for `z > 0`.
    pub fn class_cdf(&self, class: IncrementClass, z: f64) -> Result<Estimate> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::Domain {
                op: "class_cdf",
                value: z,
            });
        }
        self.f1.require_continuous()?;
        self.f2.require_continuous()?;
        if self.copula == DistCopula::Comonotone {
            return self.comonotone_class_cdf(class, z);
        }
        let (c, f1, f2) = (self.copula, self.f1, self.f2);
        let (a, b) = (f1.cdf(0.0), f2.cdf(0.0));
        match class {
            IncrementClass::BothUp => integrate(
                |x| (c.du(f1.cdf(x), f2.cdf(z - x)) - c.du(f1.cdf(x), b)) * f1.density(x),
                0.0,
                z,
                &RW_QUAD,
            ),
            IncrementClass::UpDown => {
                if b == 0.0 {
                    return Ok(Estimate::ZERO);
                }
                integrate_to_infinity(
                    |t| (c.dv(f1.cdf(z + t), f2.cdf(-t)) - c.dv(a, f2.cdf(-t))) * f2.density(-t),
                    0.0,
                    &[],
                    1.0,
                    |t| f2.cdf(-t),
                    1e-16,
                    &RW_QUAD,
                )
            }
            IncrementClass::DownUp => {
                if a == 0.0 {
                    return Ok(Estimate::ZERO);
                }
                integrate_to_infinity(
                    |t| (c.du(f1.cdf(-t), f2.cdf(z + t)) - c.du(f1.cdf(-t), b)) * f1.density(-t),
                    0.0,
                    &[],
                    1.0,
                    |t| f1.cdf(-t),
                    1e-16,
                    &RW_QUAD,
                )
            }
        }
    }

    /// With `ξⁱ = Fᵢ⁻¹(U)` the sum `s(U)` is increasing in `U` and each class is
    /// an interval of `U`.
    fn comonotone_class_cdf(&self, class: IncrementClass, z: f64) -> Result<Estimate> {
        let (a, b) = (self.f1.cdf(0.0), self.f2.cdf(0.0));
        let (lo, hi) = match class {
            IncrementClass::BothUp => (a.max(b), 1.0),
            IncrementClass::UpDown => (a, b),
            IncrementClass::DownUp => (b, a),
        };
        if lo >= hi {
            return Ok(Estimate::ZERO);
        }
        let s = |u: f64| self.f1.quantile(u) + self.f2.quantile(u);
        if s(lo) >= z {
            return Ok(Estimate::ZERO);
        }
        if hi < 1.0 && s(hi) <= z {
            return Ok(Estimate::new(hi - lo, 4.0 * f64::EPSILON));
        }
        // Bisect on the survival scale so that tails near u = 1 keep precision.
        let r = bisect(|q| z - s(1.0 - q), 1.0 - hi, 1.0 - lo, 1e-16, "comonotone class cdf")?;
        Ok(Estimate::new(1.0 - r - lo, 1e-15))
    }

    /// `F̄_Z(z) = ℙ(ξ¹ + ξ² > z)` through the survival copula,
    /// `∫ ∂C̃/∂u(F̄₁(x), F̄₂(z − x)) F₁(dx)`.
    pub fn sum_tail(&self, z: f64) -> Result<Estimate> {
        self.f1.require_continuous()?;
        self.f2.require_continuous()?;
        let (c, f1, f2) = (self.copula, self.f1, self.f2);
        if c == DistCopula::Comonotone {
            return Err(Error::UnsupportedFamily {
                op: "sum_tail",
                family: c.family(),
            });
        }
        let g = |x: f64| c.survival_du(1.0 - f1.cdf(x), 1.0 - f2.cdf(z - x)) * f1.density(x);
        let upper = integrate_to_infinity(g, z, &[], 1.0, |x| 1.0 - f1.cdf(x), 1e-16, &RW_QUAD)?;
        let mid = integrate(g, 0.0, z, &RW_QUAD)?;
        let lower = if f1.positive_support() {
            Estimate::ZERO
        } else {
            integrate_to_infinity(|t| g(-t), 0.0, &[], 1.0, |t| f1.cdf(-t), 1e-16, &RW_QUAD)?
        };
        Ok(upper + mid + lower)
    }
}

/// `F_{P^k}` tabulated on a grid of positive points.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementDF {
    pub class: IncrementClass,
    pub grid: Vec<f64>,
    pub values: Vec<Estimate>,
    pub mass: f64,
}

pub fn increment_class_df(model: &IncrementModel, class: IncrementClass, grid: &[f64]) -> Result<IncrementDF> {
    let values = grid
        .iter()
        .map(|&z| model.class_cdf(class, z))
        .collect::<Result<Vec<_>>>()?;
    Ok(IncrementDF {
        class,
        grid: grid.to_vec(),
        values,
        mass: model.class_mass(class),
    })
}

/// Passage law of `Z` over `x ≥ 0` for positive increments.
///
/// Every step is a ladder step, so the number of steps before passage is
/// `j = Ḡ`, `i = 0`, and the undershoot equals the undershoot of the
/// previous maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct RwQuintuple {
    model: IncrementModel,
    x: f64,
    h: f64,
    /// `F̄_{P³}` at the undershoot `b_{n−w}` for lattice cell `w` of `Z_{T−1}`.
    step_tail: Vec<f64>,
    /// `powers[j][w]`: lattice law of `F_{P³}^{j*}`, `j ≥ 1`.
    powers: Vec<Vec<f64>>,
    renewal: Renewal,
}

impl RwQuintuple {
    pub fn new(model: IncrementModel, x: f64, cells: usize, tol: f64) -> Result<Self> {
        if !(model.f1.positive_support() && model.f2.positive_support()) {
            return Err(Error::Validation(
                "the random-walk passage law needs positive increments for both walks".into(),
            ));
        }
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain {
                op: "barrier",
                value: x,
            });
        }
        if x == 0.0 {
            return Ok(Self {
                model,
                x,
                h: 0.0,
                step_tail: Vec::new(),
                powers: Vec::new(),
                renewal: Renewal {
                    measure: Vec::new(),
                    count_probs: alloc::vec![1.0],
                    remainder: 0.0,
                },
            });
        }
        let h = x / (cells as f64 + 0.5);
        let cdf = (0..=cells)
            .map(|j| {
                model
                    .class_cdf(IncrementClass::BothUp, (j as f64 + 0.5) * h)
                    .map(|e| e.value)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Vec::with_capacity(cells + 1);
        let mut prev = 0.0;
        for &f in &cdf {
            p.push((f - prev).max(0.0));
            prev = f;
        }
        let step_tail: Vec<f64> = (0..=cells).map(|w| 1.0 - cdf[cells - w]).collect();
        let renewal = renewal(&p, tol, 100_000)?;
        let mut powers = Vec::with_capacity(renewal.count_probs.len());
        let mut power = p.clone();
        for _ in 1..renewal.count_probs.len() {
            let next = convolve(&power, &p);
            powers.push(core::mem::replace(&mut power, next));
        }
        Ok(Self {
            model,
            x,
            h,
            step_tail,
            powers,
            renewal,
        })
    }

    pub fn barrier(&self) -> f64 {
        self.x
    }

    /// Largest tracked `j`.
    pub fn max_steps(&self) -> usize {
        self.renewal.count_probs.len() - 1
    }

    /// Mass beyond the tracked steps.
    pub fn remainder(&self) -> f64 {
        self.renewal.remainder
    }

    /// `ℙ(Ḡ = j) = ℙ(T_x⁺ = j + 1)`.
    pub fn step_prob(&self, j: usize) -> f64 {
        self.renewal.count_probs.get(j).copied().unwrap_or(0.0)
    }

    /// `ℙ(Ḡ = j, x − Z_{T−1} ≤ v)`, spreading lattice cells uniformly.
    pub fn joint_cdf(&self, j: usize, v: f64) -> f64 {
        if j == 0 {
            return if v >= self.x { self.step_prob(0) } else { 0.0 };
        }
        let Some(power) = self.powers.get(j - 1) else {
            return 0.0;
        };
        let n = power.len() - 1;
        power
            .iter()
            .enumerate()
            .map(|(w, &m)| {
                let lo = (n - w) as f64 * self.h;
                let hi = if w == 0 { self.x } else { lo + self.h };
                m * self.step_tail[w] * ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
            })
            .sum()
    }

    /// `ℙ(x − Z_{T−1} ≤ v)`.
    pub fn undershoot_cdf(&self, v: f64) -> f64 {
        (0..=self.max_steps()).map(|j| self.joint_cdf(j, v)).sum()
    }

    /// `ℙ(Z_T − x ≤ u)`.
    pub fn overshoot_cdf(&self, u: f64) -> Result<f64> {
        let f = |z: f64| -> Result<f64> {
            if z <= 0.0 {
                Ok(0.0)
            } else {
                Ok(self.model.class_cdf(IncrementClass::BothUp, z)?.value)
            }
        };
        if self.x == 0.0 {
            return f(u);
        }
        let n = self.step_tail.len() - 1;
        let mut total = 0.0;
        for (w, &r) in self.renewal.measure.iter().enumerate() {
            if r > 0.0 {
                let v = (n - w) as f64 * self.h + 0.5 * self.h;
                total += r * (f(u + v)? - f(v)?);
            }
        }
        Ok(total)
    }
}

/// One simulated passage of the random walk `Z` over `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkRecord {
    /// `T − 1 − Ḡ`.
    pub i: u64,
    /// `Ḡ`, the index of the previous maximum.
    pub j: u64,
    pub u: f64,
    pub v: f64,
    pub y: f64,
    /// `1`…`5`; `1` and `2` only occur with atoms at zero.
    pub class: u8,
    pub censored: bool,
}

/// Simulate `paths` walks until `Z_n > x` or `max_steps` steps.
pub fn simulate_walk(model: &IncrementModel, x: f64, paths: u64, seed: u64, max_steps: u64) -> Vec<WalkRecord> {
    simulate_walk_range(model, x, 0..paths, seed, max_steps)
}

/// Walks `range` of [`simulate_walk`]; each walk has its own random stream.
pub fn simulate_walk_range(
    model: &IncrementModel,
    x: f64,
    range: core::ops::Range<u64>,
    seed: u64,
    max_steps: u64,
) -> Vec<WalkRecord> {
    range.map(|p| simulate_one(model, x, seed, p, max_steps)).collect()
}

pub fn sample_increment<R: Rng>(model: &IncrementModel, rng: &mut R) -> (f64, f64) {
    let u: f64 = rng.random();
    let q: f64 = rng.random();
    let v = model.copula.conditional_quantile(u, q);
    (model.f1.quantile(u), model.f2.quantile(v))
}

fn simulate_one(model: &IncrementModel, x: f64, seed: u64, path: u64, max_steps: u64) -> WalkRecord {
    let mut rng = path_rng(seed, path);
    let (mut z, mut max, mut g) = (0.0f64, 0.0f64, 0u64);
    for n in 1..=max_steps {
        let (a, b) = sample_increment(model, &mut rng);
        let next = z + a + b;
        if next > x {
            let class = match (a > 0.0, b > 0.0) {
                (true, true) => 3,
                (true, false) if b < 0.0 => 4,
                (false, true) if a < 0.0 => 5,
                (true, false) => 1,
                _ => 2,
            };
            return WalkRecord {
                i: n - 1 - g,
                j: g,
                u: next - x,
                v: x - z,
                y: x - max,
                class,
                censored: false,
            };
        }
        z = next;
        if z >= max {
            max = z;
            g = n;
        }
    }
    WalkRecord {
        i: 0,
        j: g,
        u: 0.0,
        v: x - z,
        y: x - max,
        class: 0,
        censored: true,
    }
}
