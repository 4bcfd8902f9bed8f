//! One-sided marginal tail integrals `Π̄(x) = Π((x, ∞))`.

use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginalTail {
    /// Compound Poisson with `lambda` jumps per unit time of size `Expo(rate)`.
    ExpoCpp { lambda: f64, rate: f64 },
    /// Compound Poisson with Pareto sizes: `Π̄(x) = λ·min(1, (xm/x)^α)`.
    ParetoCpp { lambda: f64, alpha: f64, xm: f64 },
    /// Infinite-activity tail `scale·x^{−β}`, `β ∈ (0, 1)`.
    StableLike { beta: f64, scale: f64 },
}

impl MarginalTail {
    pub fn expo(lambda: f64, rate: f64) -> Result<Self> {
        let m = MarginalTail::ExpoCpp { lambda, rate };
        m.validate()?;
        Ok(m)
    }

    pub fn pareto(lambda: f64, alpha: f64, xm: f64) -> Result<Self> {
        let m = MarginalTail::ParetoCpp { lambda, alpha, xm };
        m.validate()?;
        Ok(m)
    }

    pub fn stable_like(beta: f64, scale: f64) -> Result<Self> {
        let m = MarginalTail::StableLike { beta, scale };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter { name, value })
            }
        };
        match *self {
            MarginalTail::ExpoCpp { lambda, rate } => {
                positive("lambda", lambda)?;
                positive("rate", rate)
            }
            MarginalTail::ParetoCpp { lambda, alpha, xm } => {
                positive("lambda", lambda)?;
                positive("alpha", alpha)?;
                positive("xm", xm)
            }
            MarginalTail::StableLike { beta, scale } => {
                if !(beta > 0.0 && beta < 1.0) {
                    return Err(Error::Parameter {
                        name: "beta",
                        value: beta,
                    });
                }
                positive("scale", scale)
            }
        }
    }

    /// `Π̄(x)` for `x > 0`.
    pub fn tail(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain { op: "tail", value: x });
        }
        Ok(self.tail_at(x))
    }

    /// `Π̄(x)`, with `x ≤ 0` read as the right limit at `0`, i.e. the mass.
    pub fn tail_at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.mass();
        }
        match *self {
            MarginalTail::ExpoCpp { lambda, rate } => lambda * (-rate * x).exp(),
            MarginalTail::ParetoCpp { lambda, alpha, xm } => {
                if x <= xm {
                    lambda
                } else {
                    lambda * (alpha * (xm.ln() - x.ln())).exp()
                }
            }
            MarginalTail::StableLike { beta, scale } => scale * (-beta * x.ln()).exp(),
        }
    }

    /// Lévy density `π(x) = −Π̄'(x)` for `x > 0`.
    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            MarginalTail::ExpoCpp { rate, .. } => rate * self.tail_at(x),
            MarginalTail::ParetoCpp { alpha, xm, .. } => {
                if x <= xm {
                    0.0
                } else {
                    alpha * self.tail_at(x) / x
                }
            }
            MarginalTail::StableLike { beta, .. } => beta * self.tail_at(x) / x,
        }
    }

    /// Total intensity `lim_{x↓0} Π̄(x)`.
    pub fn mass(&self) -> f64 {
        match *self {
            MarginalTail::ExpoCpp { lambda, .. } | MarginalTail::ParetoCpp { lambda, .. } => lambda,
            MarginalTail::StableLike { .. } => f64::INFINITY,
        }
    }

    /// `∫₀^∞ Π̄(x) dx`, `+∞` when divergent.
    pub fn mean(&self) -> f64 {
        match *self {
            MarginalTail::ExpoCpp { lambda, rate } => lambda / rate,
            MarginalTail::ParetoCpp { lambda, alpha, xm } => {
                if alpha > 1.0 {
                    lambda * alpha * xm / (alpha - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            MarginalTail::StableLike { .. } => f64::INFINITY,
        }
    }

    /// `∫_x^∞ Π̄(t) dt` for `x ≥ 0`, `+∞` when divergent.
    pub fn integrated_tail(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match *self {
            MarginalTail::ExpoCpp { rate, .. } => self.tail_at(x) / rate,
            MarginalTail::ParetoCpp { lambda, alpha, xm } => {
                if alpha <= 1.0 {
                    return f64::INFINITY;
                }
                let beyond = |t: f64| lambda * (alpha * (xm.ln() - t.ln())).exp() * t / (alpha - 1.0);
                if x < xm {
                    lambda * (xm - x) + beyond(xm)
                } else {
                    beyond(x)
                }
            }
            MarginalTail::StableLike { .. } => f64::INFINITY,
        }
    }

    /// The point `x` with `Π̄(x) = p`, for `0 < p < mass`.
    pub fn inverse_tail(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < self.mass()) {
            return Err(Error::Domain {
                op: "inverse_tail",
                value: p,
            });
        }
        Ok(match *self {
            MarginalTail::ExpoCpp { lambda, rate } => (lambda.ln() - p.ln()) / rate,
            MarginalTail::ParetoCpp { lambda, alpha, xm } => xm * ((lambda.ln() - p.ln()) / alpha).exp(),
            MarginalTail::StableLike { beta, scale } => ((scale.ln() - p.ln()) / beta).exp(),
        })
    }

    /// Left end of the support of the jump law (`xm` for Pareto, else `0`).
    pub fn support_start(&self) -> f64 {
        match *self {
            MarginalTail::ParetoCpp { xm, .. } => xm,
            _ => 0.0,
        }
    }

    /// A length scale of the jump law, used to seed integration break points.
    pub fn scale(&self) -> f64 {
        match *self {
            MarginalTail::ExpoCpp { rate, .. } => 1.0 / rate,
            MarginalTail::ParetoCpp { xm, .. } => xm,
            MarginalTail::StableLike { .. } => 1.0,
        }
    }
}
