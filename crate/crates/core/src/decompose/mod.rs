//! Single-jump and common-jump components of `S = S¹ + S²`.
//!
//! With spectrally positive margins the jumps of the sum split into three
//! independent classes: `P¹` (only `S¹` jumps), `P²` (only `S²` jumps) and `P³`
//! (both jump together, the jump of the sum being `x₁ + x₂`).

pub mod closed_form;
mod mixed;

pub use mixed::{tail_p45, MixedClass, TwoSidedMargins};

use num_traits::Float;

use crate::copulas::LevyCopula;
use crate::margins::MarginalTail;
use crate::quad::{integrate_to_infinity, integrate_with_points, Estimate, QuadConfig};
use crate::roots::bisect;
use crate::{Error, Result};
use closed_form::Special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JumpClass {
    /// `P¹`: jumps of the first component alone.
    Single1,
    /// `P²`: jumps of the second component alone.
    Single2,
    /// `P³`: simultaneous jumps.
    Common,
}

impl JumpClass {
    pub const ALL: [JumpClass; 3] = [JumpClass::Single1, JumpClass::Single2, JumpClass::Common];

    /// `1`, `2` or `3`.
    pub fn index(self) -> usize {
        match self {
            JumpClass::Single1 => 1,
            JumpClass::Single2 => 2,
            JumpClass::Common => 3,
        }
    }

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1 => Ok(JumpClass::Single1),
            2 => Ok(JumpClass::Single2),
            3 => Ok(JumpClass::Common),
            _ => Err(Error::Domain {
                op: "jump class index",
                value: k as f64,
            }),
        }
    }
}

/// Tolerances for the one-dimensional mean integrals, which feed exact-sum
/// identities and are cheap.
const MEAN_QUAD: QuadConfig = QuadConfig {
    abs_tol: 1e-14,
    rel_tol: 1e-13,
    max_subdivisions: 4000,
};

#[derive(Debug, Clone, PartialEq)]
pub struct JumpDecomposition {
    copula: LevyCopula,
    margin1: MarginalTail,
    margin2: MarginalTail,
    quad: QuadConfig,
    intensity: [f64; 3],
    special: Option<Special>,
}

impl JumpDecomposition {
    /// Couple two spectrally positive margins. Copulas with a concordance weight
    /// `η < 1` would put mass on opposite-sign jumps and are rejected here.
    pub fn new(copula: LevyCopula, margin1: MarginalTail, margin2: MarginalTail) -> Result<Self> {
        copula.validate()?;
        margin1.validate()?;
        margin2.validate()?;
        if copula.eta() != 1.0 {
            return Err(Error::Parameter {
                name: "eta",
                value: copula.eta(),
            });
        }
        let (l1, l2) = (margin1.mass(), margin2.mass());
        let common = copula.left_limit(l1, l2);
        let single = |own: f64, other: f64| {
            if own.is_finite() {
                copula.complement_u(own, other)
            } else if other == f64::INFINITY && copula != LevyCopula::Independence {
                0.0
            } else {
                f64::INFINITY
            }
        };
        Ok(Self {
            copula,
            margin1,
            margin2,
            quad: QuadConfig::default(),
            intensity: [single(l1, l2), single(l2, l1), common],
            special: Special::detect(&copula, &margin1, &margin2),
        })
    }

    pub fn with_quad_config(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn copula(&self) -> &LevyCopula {
        &self.copula
    }

    pub fn margin1(&self) -> &MarginalTail {
        &self.margin1
    }

    pub fn margin2(&self) -> &MarginalTail {
        &self.margin2
    }

    pub fn quad_config(&self) -> &QuadConfig {
        &self.quad
    }

    /// `λ_{P^k} = lim_{z↓0} Π̄_{P^k}(z)`.
    pub fn intensity(&self, k: JumpClass) -> f64 {
        self.intensity[k.index() - 1]
    }

    /// `λ = λ₁ + λ₂ − Ĉ(λ₁, λ₂)`, the jump intensity of the sum.
    pub fn lambda_sum(&self) -> Result<f64> {
        let l = self.intensity.iter().sum::<f64>();
        if l.is_finite() {
            Ok(l)
        } else {
            Err(Error::Validation("the sum process has infinite jump intensity".into()))
        }
    }

    /// `μ_S = μ₁ + μ₂`.
    pub fn mean_sum(&self) -> f64 {
        self.margin1.mean() + self.margin2.mean()
    }

    /// Whether a validated closed form is used for some components.
    pub fn uses_closed_form(&self) -> bool {
        self.special.is_some()
    }

    /// `Π̄_{P^k}(z)` for `z > 0`.
    pub fn tail_pk(&self, k: JumpClass, z: f64) -> Result<Estimate> {
        check_z(z)?;
        if let Some(s) = self.special {
            let v = match k {
                JumpClass::Common => s.common(&self.margin1, z),
                _ => s.single(z),
            };
            if let Some(v) = v {
                return Ok(Estimate::exact(v));
            }
        }
        self.tail_pk_general(k, z)
    }

    /// `Π̄_{P^k}(z)` without closed-form dispatch.
    pub fn tail_pk_general(&self, k: JumpClass, z: f64) -> Result<Estimate> {
        check_z(z)?;
        match k {
            JumpClass::Single1 => Ok(Estimate::exact(
                self.copula.complement_u(self.margin1.tail_at(z), self.margin2.mass()),
            )),
            JumpClass::Single2 => Ok(Estimate::exact(
                self.copula.complement_u(self.margin2.tail_at(z), self.margin1.mass()),
            )),
            JumpClass::Common => match self.copula {
                LevyCopula::Independence => Ok(Estimate::ZERO),
                LevyCopula::CompleteDependence => self.comonotone_common_tail(z),
                _ => self.common_tail_quadrature(z),
            },
        }
    }

    /// `Π̄_S(z) = Σ_k Π̄_{P^k}(z)`.
    pub fn tail_sum(&self, z: f64) -> Result<Estimate> {
        let mut total = Estimate::ZERO;
        for k in JumpClass::ALL {
            total = total + self.tail_pk(k, z)?;
        }
        Ok(total)
    }

    /// `Π̄_S` at `z`, reading `z ≤ 0` as the right limit (the total intensity).
    pub fn tail_sum_at(&self, z: f64) -> Result<Estimate> {
        if z > 0.0 {
            self.tail_sum(z)
        } else {
            Ok(Estimate::exact(self.lambda_sum()?))
        }
    }

    /// `Π̄_{P^k}` at `z`, reading `z ≤ 0` as the right limit `λ_{P^k}`.
    pub fn tail_pk_at(&self, k: JumpClass, z: f64) -> Result<Estimate> {
        if z > 0.0 {
            self.tail_pk(k, z)
        } else {
            Ok(Estimate::exact(self.intensity(k)))
        }
    }

    /// Lévy density `π_{P^k}(z) = −dΠ̄_{P^k}/dz`.
    pub fn density_pk(&self, k: JumpClass, z: f64) -> Result<Estimate> {
        check_z(z)?;
        let c = &self.copula;
        match k {
            JumpClass::Single1 | JumpClass::Single2 => {
                let (own, other) = if k == JumpClass::Single1 {
                    (&self.margin1, &self.margin2)
                } else {
                    (&self.margin2, &self.margin1)
                };
                let dens = own.density(z);
                if *c == LevyCopula::Independence {
                    return Ok(Estimate::exact(dens));
                }
                Ok(Estimate::exact(dens * (1.0 - c.du(own.tail_at(z), other.mass()))))
            }
            JumpClass::Common => match c {
                LevyCopula::Independence => Ok(Estimate::ZERO),
                LevyCopula::CompleteDependence => {
                    let t = self.comonotone_common_tail(z)?.value;
                    let m = self.margin1.mass().min(self.margin2.mass());
                    if t >= m {
                        return Ok(Estimate::ZERO);
                    }
                    let x1 = inverse_clamped(&self.margin1, t);
                    let x2 = inverse_clamped(&self.margin2, t);
                    let (p1, p2) = (self.margin1.density(x1), self.margin2.density(x2));
                    if p1 == 0.0 || p2 == 0.0 {
                        return Ok(Estimate::ZERO);
                    }
                    Ok(Estimate::new(1.0 / (1.0 / p1 + 1.0 / p2), 1e-12 * (p1 + p2)))
                }
                _ => {
                    let (m1, m2) = (&self.margin1, &self.margin2);
                    let (s1, s2) = (m1.support_start(), m2.support_start());
                    if s1 + s2 >= z {
                        return Ok(Estimate::ZERO);
                    }
                    integrate_with_points(
                        |x| c.duv(m1.tail_at(x), m2.tail_at(z - x)) * m1.density(x) * m2.density(z - x),
                        s1,
                        z - s2,
                        &[],
                        &self.quad,
                    )
                }
            },
        }
    }

    /// `Π̄_S`-density, `π_S = Σ_k π_{P^k}`.
    pub fn density_sum(&self, z: f64) -> Result<Estimate> {
        let mut total = Estimate::ZERO;
        for k in JumpClass::ALL {
            total = total + self.density_pk(k, z)?;
        }
        Ok(total)
    }

    /// `μ_{P^k} = ∫₀^∞ Π̄_{P^k}(z) dz`, `+∞` when divergent.
    ///
    /// The common part is computed coordinate-wise,
    /// `μ_{P³} = ∫ Ĉ(Π̄₁(x), λ₂) dx + ∫ Ĉ(λ₁, Π̄₂(y)) dy`, and the single parts
    /// as `μ_i` minus the matching coordinate integral, so that the three means
    /// add up to `μ_S` to rounding.
    pub fn mean_pk(&self, k: JumpClass) -> Result<Estimate> {
        match k {
            JumpClass::Common => {
                if self.copula == LevyCopula::Independence {
                    return Ok(Estimate::ZERO);
                }
                let a1 = self.coordinate_mean(&self.margin1, &self.margin2)?;
                let a2 = self.coordinate_mean(&self.margin2, &self.margin1)?;
                Ok(a1 + a2)
            }
            JumpClass::Single1 => self.single_mean(&self.margin1, &self.margin2),
            JumpClass::Single2 => self.single_mean(&self.margin2, &self.margin1),
        }
    }

    /// `∫_z^∞ Π̄_{P^k}(t) dt` for `z ≥ 0`, `+∞` when divergent.
    pub fn integrated_tail_pk(&self, k: JumpClass, z: f64) -> Result<Estimate> {
        if !(z >= 0.0) {
            return Err(Error::Domain {
                op: "integrated_tail_pk",
                value: z,
            });
        }
        let bound = |x: f64| self.margin1.integrated_tail(x) + self.margin2.integrated_tail(x);
        if !bound(z).is_finite() {
            return Ok(Estimate::new(f64::INFINITY, 0.0));
        }
        let (s1, s2) = (self.margin1.support_start(), self.margin2.support_start());
        let mut err = None;
        let est = integrate_to_infinity(
            |t| match self.tail_pk_at(k, t) {
                Ok(e) => e.value,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            z,
            &[s1, s2, s1 + s2],
            self.margin1.scale().min(self.margin2.scale()),
            bound,
            1e-2 * self.quad.abs_tol,
            &self.quad,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(est),
        }
    }

    fn coordinate_mean(&self, own: &MarginalTail, other: &MarginalTail) -> Result<Estimate> {
        if !own.mean().is_finite() {
            return Ok(Estimate::new(f64::INFINITY, 0.0));
        }
        let lim = other.mass();
        let c = &self.copula;
        integrate_to_infinity(
            |x| c.left_limit(own.tail_at(x), lim),
            0.0,
            &[own.support_start()],
            own.scale(),
            |x| own.integrated_tail(x),
            1e-3 * MEAN_QUAD.abs_tol,
            &MEAN_QUAD,
        )
    }

    fn single_mean(&self, own: &MarginalTail, other: &MarginalTail) -> Result<Estimate> {
        let c = &self.copula;
        let lim = other.mass();
        if own.mean().is_finite() {
            let a = self.coordinate_mean(own, other)?;
            return Ok(Estimate::new(own.mean() - a.value, a.error));
        }
        // Divergent margin mean: decide convergence of the single part per family.
        match *c {
            _ if lim == f64::INFINITY && *c != LevyCopula::Independence => Ok(Estimate::ZERO),
            LevyCopula::Independence | LevyCopula::NonhomArchimedean { .. } => Ok(Estimate::new(f64::INFINITY, 0.0)),
            LevyCopula::CompleteDependence => {
                if own.mass() <= lim {
                    return Ok(Estimate::ZERO);
                }
                let end = own.inverse_tail(lim)?;
                integrate_with_points(
                    |x| (own.tail_at(x) - lim).max(0.0),
                    0.0,
                    end,
                    &[own.support_start()],
                    &MEAN_QUAD,
                )
            }
            LevyCopula::Clayton { theta, .. } => {
                // u − Ĉ(u, λ) ≤ u^{1+θ}/(θλ^θ); margins with divergent mean have power tails.
                let (k, p) = match *own {
                    MarginalTail::ParetoCpp { lambda, alpha, xm } => (lambda * xm.powf(alpha), alpha),
                    MarginalTail::StableLike { beta, scale } => (scale, beta),
                    MarginalTail::ExpoCpp { .. } => unreachable!("exponential margins have finite mean"),
                };
                let q = p * (1.0 + theta);
                if q <= 1.0 {
                    return Ok(Estimate::new(f64::INFINITY, 0.0));
                }
                let scale = k.powf(1.0 + theta) / (theta * lim.powf(theta) * (q - 1.0));
                integrate_to_infinity(
                    |x| c.complement_u(own.tail_at(x), lim),
                    0.0,
                    &[own.support_start()],
                    own.scale(),
                    |x| scale * x.powf(1.0 - q),
                    1e-3 * MEAN_QUAD.abs_tol,
                    &MEAN_QUAD,
                )
            }
        }
    }

    /// Common-jump tail by quadrature of
    /// `∫₀^∞ ∂₁Ĉ(Π̄₁(x), Π̄₂((z−x)∨0)) Π₁(dx)`, split at the kink `x = z`.
    fn common_tail_quadrature(&self, z: f64) -> Result<Estimate> {
        let (m1, m2, c) = (&self.margin1, &self.margin2, &self.copula);
        let half = QuadConfig {
            abs_tol: 0.5 * self.quad.abs_tol,
            ..self.quad
        };
        let s1 = m1.support_start();
        let inner = if s1 < z {
            integrate_with_points(
                |x| c.du(m1.tail_at(x), m2.tail_at(z - x)) * m1.density(x),
                s1,
                z,
                &[z - m2.support_start()],
                &half,
            )?
        } else {
            Estimate::ZERO
        };
        let lim2 = m2.mass();
        let start = s1.max(z);
        let reference = if m1.mass().is_finite() {
            m1.mass()
        } else {
            m1.tail_at(start)
        };
        let outer = integrate_to_infinity(
            |x| c.du(m1.tail_at(x), lim2) * m1.density(x),
            start,
            &[],
            m1.scale(),
            |x| m1.tail_at(x),
            1e-16 * reference,
            &half,
        )?;
        Ok(inner + outer)
    }

    /// Complete dependence: common jumps are `(Π̄₁⁻¹(t), Π̄₂⁻¹(t))` for
    /// `t ∈ (0, min(λ₁, λ₂))` under Lebesgue measure, so the tail at `z` is the
    /// solution `t*` of `Π̄₁⁻¹(t) + Π̄₂⁻¹(t) = z`, capped at `min(λ₁, λ₂)`.
    fn comonotone_common_tail(&self, z: f64) -> Result<Estimate> {
        let (m1, m2) = (&self.margin1, &self.margin2);
        if let Some(Special::CompleteDependenceEqual) = self.special {
            return Ok(Estimate::exact(m1.tail_at(0.5 * z)));
        }
        let m = m1.mass().min(m2.mass());
        let g = |t: f64| inverse_clamped(m1, t) + inverse_clamped(m2, t);
        let mut hi = if m.is_finite() { m } else { 1.0 };
        if m.is_finite() {
            if g(m) >= z {
                return Ok(Estimate::exact(m));
            }
        } else {
            while g(hi) > z {
                hi *= 2.0;
            }
        }
        let mut lo = 0.5 * hi;
        while g(lo) <= z {
            lo *= 0.5;
        }
        let t = bisect(
            |s| g(s.exp()) - z,
            lo.ln(),
            hi.ln(),
            1e-15,
            "complete-dependence common tail",
        )?
        .exp();
        Ok(Estimate::new(t, 1e-14 * t))
    }
}

/// `Π̄⁻¹(t)`, with `t ≥ mass` mapped to the left end of the support.
pub(crate) fn inverse_clamped(m: &MarginalTail, t: f64) -> f64 {
    if t >= m.mass() {
        m.support_start()
    } else {
        m.inverse_tail(t).unwrap_or(m.support_start())
    }
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && !z.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "tail at z",
            value: z,
        })
    }
}

#[cfg(test)]
mod tests;
