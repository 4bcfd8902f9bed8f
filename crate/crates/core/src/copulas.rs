//! Two-dimensional Lévy copulas.
//!
//! A Lévy copula `Ĉ` couples the marginal tail integrals of a bivariate Lévy
//! measure into its joint tail integral. Four families are provided, evaluated
//! on `(−∞, ∞]²` with `f64::INFINITY` standing for `∞`. Infinite arguments are
//! resolved through the analytic limit; no arithmetic is ever done on `∞`.

use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyCopula {
    /// `Ĉ(u, v) = u·1{v=∞} + v·1{u=∞}`: no common jumps.
    Independence,
    /// `Ĉ(u, v) = min(|u|, |v|)` on the sign-concordant set, `0` elsewhere.
    CompleteDependence,
    /// `(|u|^{−θ} + |v|^{−θ})^{−1/θ}`, weighted by `η` on concordant and by
    /// `−(1−η)` on discordant quadrants.
    Clayton { eta: f64, theta: f64 },
    /// `|uv| / (|u| + |v| + ζ)`, with the same quadrant weights as Clayton.
    NonhomArchimedean { eta: f64, zeta: f64 },
}

/// A partial derivative, flagged when taken at the diagonal kink of
/// [`LevyCopula::CompleteDependence`] (where the right limit is returned).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partial {
    pub value: f64,
    pub at_kink: bool,
}

impl LevyCopula {
    pub fn clayton(eta: f64, theta: f64) -> Result<Self> {
        let c = LevyCopula::Clayton { eta, theta };
        c.validate()?;
        Ok(c)
    }

    pub fn nonhom(eta: f64, zeta: f64) -> Result<Self> {
        let c = LevyCopula::NonhomArchimedean { eta, zeta };
        c.validate()?;
        Ok(c)
    }

    pub fn family(&self) -> &'static str {
        match self {
            LevyCopula::Independence => "Independence",
            LevyCopula::CompleteDependence => "CompleteDependence",
            LevyCopula::Clayton { .. } => "Clayton",
            LevyCopula::NonhomArchimedean { .. } => "NonhomArchimedean",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LevyCopula::Independence | LevyCopula::CompleteDependence => Ok(()),
            LevyCopula::Clayton { eta, theta } => {
                check_eta(eta, true)?;
                if !(theta > 0.0 && theta.is_finite()) {
                    return Err(Error::Parameter {
                        name: "theta",
                        value: theta,
                    });
                }
                Ok(())
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                check_eta(eta, false)?;
                if !(zeta > 0.0 && zeta.is_finite()) {
                    return Err(Error::Parameter {
                        name: "zeta",
                        value: zeta,
                    });
                }
                Ok(())
            }
        }
    }

    /// Weight on the concordant quadrants; `1` for the parameter-free families.
    pub fn eta(&self) -> f64 {
        match *self {
            LevyCopula::Clayton { eta, .. } | LevyCopula::NonhomArchimedean { eta, .. } => eta,
            _ => 1.0,
        }
    }

    /// Whether the family has a continuous mixed second derivative off the axes.
    pub fn is_smooth(&self) -> bool {
        matches!(self, LevyCopula::Clayton { .. } | LevyCopula::NonhomArchimedean { .. })
    }

    /// `Ĉ(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        check_arg(u, "copula eval")?;
        check_arg(v, "copula eval")?;
        Ok(self.value(u, v))
    }

    /// `lim Ĉ(u', v')` as `(u', v') ↑ (u, v)`; differs from `eval` only for
    /// [`LevyCopula::Independence`] at an infinite argument, where the left
    /// limit is `0`.
    pub fn left_limit(&self, u: f64, v: f64) -> f64 {
        if *self == LevyCopula::Independence {
            return 0.0;
        }
        self.value(u, v)
    }

    pub(crate) fn value(&self, u: f64, v: f64) -> f64 {
        if u == 0.0 || v == 0.0 {
            return 0.0;
        }
        let (au, av) = (u.abs(), v.abs());
        let concordant = (u > 0.0) == (v > 0.0);
        match *self {
            LevyCopula::Independence => {
                if v == f64::INFINITY {
                    u
                } else if u == f64::INFINITY {
                    v
                } else {
                    0.0
                }
            }
            LevyCopula::CompleteDependence => {
                if concordant {
                    au.min(av) * u.signum() * v.signum()
                } else {
                    0.0
                }
            }
            LevyCopula::Clayton { eta, theta } => {
                let w = quadrant_weight(eta, concordant);
                w * clayton_core(au, av, theta)
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                let w = quadrant_weight(eta, concordant);
                w * nonhom_core(au, av, zeta)
            }
        }
    }

    /// `∂Ĉ/∂u` at `u > 0`, `v ∈ [−∞, ∞]`.
    pub fn partial_u(&self, u: f64, v: f64) -> Result<Partial> {
        self.validate()?;
        check_arg(v, "copula partial")?;
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Domain {
                op: "copula partial",
                value: u,
            });
        }
        let at_kink = *self == LevyCopula::CompleteDependence && u == v;
        Ok(Partial {
            value: self.du(u, v),
            at_kink,
        })
    }

    /// `∂Ĉ/∂v`; every family here is exchangeable, so this is `partial_u(v, u)`.
    pub fn partial_v(&self, u: f64, v: f64) -> Result<Partial> {
        self.partial_u(v, u)
    }

    /// Unchecked `∂Ĉ/∂u` for `u > 0` finite.
    pub(crate) fn du(&self, u: f64, v: f64) -> f64 {
        if v == 0.0 {
            return 0.0;
        }
        let concordant = v > 0.0;
        let av = v.abs();
        match *self {
            LevyCopula::Independence => {
                if v == f64::INFINITY {
                    1.0
                } else {
                    0.0
                }
            }
            LevyCopula::CompleteDependence => {
                if concordant && u < av {
                    1.0
                } else {
                    0.0
                }
            }
            LevyCopula::Clayton { eta, theta } => {
                let w = quadrant_weight(eta, concordant);
                if av == f64::INFINITY {
                    return w;
                }
                // (1 + (u/v)^θ)^{−(1+θ)/θ}
                let r = theta * (u.ln() - av.ln());
                w * (-(1.0 + theta) / theta * ln1p_exp(r)).exp()
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                let w = quadrant_weight(eta, concordant);
                if av == f64::INFINITY {
                    return w;
                }
                let s = u + av + zeta;
                w * (av / s) * ((av + zeta) / s)
            }
        }
    }

    /// `u − lim_{v'↑v} Ĉ(u, v')` for `u > 0` finite and `v ∈ (0, ∞]`, computed
    /// without cancellation. This is the single-jump part of a margin with tail
    /// value `u` when the other margin has total mass `v`.
    pub(crate) fn complement_u(&self, u: f64, v: f64) -> f64 {
        match *self {
            LevyCopula::Independence => u,
            LevyCopula::CompleteDependence => (u - v).max(0.0),
            LevyCopula::Clayton { eta, theta } => {
                if v == f64::INFINITY {
                    return (1.0 - eta) * u;
                }
                let r = (theta * (u.ln() - v.ln())).exp();
                // 1 − (1 + r)^{−1/θ}
                let frac = -(-r.ln_1p() / theta).exp_m1();
                u * (1.0 - eta) + eta * u * frac
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                if v == f64::INFINITY {
                    return (1.0 - eta) * u;
                }
                u * (1.0 - eta) + eta * u * (u + zeta) / (u + v + zeta)
            }
        }
    }

    /// Mixed second derivative `∂²Ĉ/∂u∂v`, nonnegative on every quadrant.
    pub fn density_uv(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !self.is_smooth() {
            return Err(Error::UnsupportedFamily {
                op: "density_uv",
                family: self.family(),
            });
        }
        for x in [u, v] {
            if !(x != 0.0 && x.is_finite()) {
                return Err(Error::Domain {
                    op: "copula density",
                    value: x,
                });
            }
        }
        Ok(self.duv(u, v))
    }

    pub(crate) fn duv(&self, u: f64, v: f64) -> f64 {
        let concordant = (u > 0.0) == (v > 0.0);
        let (au, av) = (u.abs(), v.abs());
        match *self {
            LevyCopula::Clayton { eta, theta } => {
                let w = if concordant { eta } else { 1.0 - eta };
                let (lo, hi) = if au < av { (au, av) } else { (av, au) };
                let l = -theta * lo.ln() + ln1p_exp(theta * (lo.ln() - hi.ln()));
                let ln_d = (1.0 + theta).ln() + (-1.0 / theta - 2.0) * l - (theta + 1.0) * (au.ln() + av.ln());
                w * ln_d.exp()
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                let w = if concordant { eta } else { 1.0 - eta };
                let s = au + av + zeta;
                w * (au * av + (au + zeta) * (av + zeta)) / (s * s * s)
            }
            _ => 0.0,
        }
    }

    /// Solve `Ĉ(u, v) = p` for `u` on the positive quadrant, where a closed form
    /// exists. Requires `0 < p < Ĉ(∞, v)`.
    pub fn solve_eval_for_u(&self, p: f64, v: f64) -> Option<f64> {
        match *self {
            LevyCopula::CompleteDependence => Some(p),
            LevyCopula::Clayton { eta, theta } => {
                let q = p / eta;
                if v == f64::INFINITY {
                    return Some(q);
                }
                // u^{−θ} = q^{−θ} − v^{−θ} = q^{−θ}(1 − (q/v)^θ)
                let t = (theta * (q.ln() - v.ln())).exp();
                Some(q * (-(-t).ln_1p() / theta).exp())
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                let q = p / eta;
                if v == f64::INFINITY {
                    return Some(q);
                }
                Some(q * (v + zeta) / (v - q))
            }
            LevyCopula::Independence => None,
        }
    }

    /// Solve `∂Ĉ/∂u(u, v) = q` for `v > 0`, where a closed form exists.
    /// Requires `0 < q < η`.
    pub fn solve_partial_u_for_v(&self, u: f64, q: f64) -> Option<f64> {
        match *self {
            LevyCopula::Clayton { eta, theta } => {
                // (1 + (u/v)^θ)^{−(1+θ)/θ} = q/η
                let t = q / eta;
                let s = (-theta / (1.0 + theta) * t.ln()).exp_m1();
                Some(u * (-s.ln() / theta).exp())
            }
            LevyCopula::NonhomArchimedean { eta, zeta } => {
                // (1−t)v² + (ζ − 2t(u+ζ))v − t(u+ζ)² = 0
                let t = q / eta;
                let a = 1.0 - t;
                let b = zeta - 2.0 * t * (u + zeta);
                let c = -t * (u + zeta) * (u + zeta);
                let disc = (b * b - 4.0 * a * c).sqrt();
                // Cancellation-free form of the positive root.
                Some(if b >= 0.0 {
                    2.0 * (-c) / (b + disc)
                } else {
                    (disc - b) / (2.0 * a)
                })
            }
            _ => None,
        }
    }
}

fn check_eta(eta: f64, closed_below: bool) -> Result<()> {
    let ok = if closed_below {
        (0.0..=1.0).contains(&eta)
    } else {
        eta > 0.0 && eta <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "eta",
            value: eta,
        })
    }
}

fn check_arg(x: f64, op: &'static str) -> Result<()> {
    if x.is_nan() || x == f64::NEG_INFINITY {
        Err(Error::Domain { op, value: x })
    } else {
        Ok(())
    }
}

fn quadrant_weight(eta: f64, concordant: bool) -> f64 {
    if concordant {
        eta
    } else {
        -(1.0 - eta)
    }
}

/// `ln(1 + e^r)` without overflow.
fn ln1p_exp(r: f64) -> f64 {
    if r > 35.0 {
        r + (-r).exp()
    } else {
        r.exp().ln_1p()
    }
}

/// `(a^{−θ} + b^{−θ})^{−1/θ}` for `a, b > 0`, either possibly infinite.
fn clayton_core(a: f64, b: f64, theta: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return lo;
    }
    let r = (theta * (lo.ln() - hi.ln())).exp();
    lo * (-r.ln_1p() / theta).exp()
}

/// `ab / (a + b + ζ)` for `a, b > 0`, either possibly infinite.
fn nonhom_core(a: f64, b: f64, zeta: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return lo;
    }
    lo * (hi / (lo + hi + zeta))
}
