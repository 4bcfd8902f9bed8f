use num_traits::Float;
use rand::Rng;

use crate::copulas::LevyCopula;
use crate::decompose::{inverse_clamped, JumpClass, JumpDecomposition};
use crate::roots::newton_bracketed;
use crate::{Error, Result};

/// Draws jump sizes of the three compound Poisson components `P¹, P², P³`.
///
/// Every draw inverts a tail integral: the marginal tail of the first
/// coordinate, then the conditional tail of the second given the first.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSampler {
    dec: JumpDecomposition,
    intensity: [f64; 3],
    /// Total masses `λ₁`, `λ₂` of the margins.
    mass: [f64; 2],
}

impl JumpSampler {
    pub fn new(dec: &JumpDecomposition) -> Result<Self> {
        dec.lambda_sum()?;
        let mass = [dec.margin1().mass(), dec.margin2().mass()];
        if !(mass[0].is_finite() && mass[1].is_finite()) {
            return Err(Error::Validation("simulation needs finite marginal intensities".into()));
        }
        Ok(Self {
            dec: dec.clone(),
            intensity: JumpClass::ALL.map(|k| dec.intensity(k)),
            mass,
        })
    }

    pub fn decomposition(&self) -> &JumpDecomposition {
        &self.dec
    }

    /// `λ_{P^k}`.
    pub fn intensity(&self, k: JumpClass) -> f64 {
        self.intensity[k.index() - 1]
    }

    /// The jump of `(S¹, S²)` for an event of class `k`.
    pub fn sample<R: Rng>(&self, k: JumpClass, rng: &mut R) -> Result<(f64, f64)> {
        match k {
            JumpClass::Single1 => Ok((self.single(0, uniform_open(rng))?, 0.0)),
            JumpClass::Single2 => Ok((0.0, self.single(1, uniform_open(rng))?)),
            JumpClass::Common => self.common(uniform_open(rng), uniform_open(rng)),
        }
    }

    /// Size of a jump of `P^{i+1}`: solves `Π̄_{P^{i+1}}(z) = q·λ_{P^{i+1}}`.
    fn single(&self, i: usize, q: f64) -> Result<f64> {
        let copula = self.dec.copula();
        let other = self.mass[1 - i];
        let own = self.mass[i];
        let p = q * self.intensity[i];
        // Tail value t of the own margin with complement_u(t, other) = p.
        let t = match *copula {
            LevyCopula::Independence => p,
            LevyCopula::CompleteDependence => p + other,
            LevyCopula::NonhomArchimedean { zeta, .. } => {
                // t(t + ζ) = p(t + other + ζ)
                let b = zeta - p;
                let c = p * (other + zeta);
                let disc = (b * b + 4.0 * c).sqrt();
                if b >= 0.0 {
                    2.0 * c / (b + disc)
                } else {
                    0.5 * (disc - b)
                }
            }
            LevyCopula::Clayton { .. } => newton_bracketed(
                |t| (copula.complement_u(t, other) - p, 1.0 - copula.du(t, other)),
                p,
                own,
                1e-14 * own,
                "single-jump inverse",
            )?,
        };
        let margin = if i == 0 { self.dec.margin1() } else { self.dec.margin2() };
        Ok(inverse_clamped(margin, t.min(own)))
    }

    fn common(&self, q1: f64, q2: f64) -> Result<(f64, f64)> {
        let copula = self.dec.copula();
        let (m1, m2) = (self.dec.margin1(), self.dec.margin2());
        let lambda3 = self.intensity[2];
        if lambda3 <= 0.0 {
            return Err(Error::Validation("the copula has no common jumps".into()));
        }
        if *copula == LevyCopula::CompleteDependence {
            let t = q1 * lambda3;
            return Ok((inverse_clamped(m1, t), inverse_clamped(m2, t)));
        }
        let op = "common-jump inverse";
        let t = copula
            .solve_eval_for_u(q1 * lambda3, self.mass[1])
            .ok_or(Error::UnsupportedFamily {
                op,
                family: copula.family(),
            })?;
        let t = t.min(self.mass[0]);
        let target = q2 * copula.du(t, self.mass[1]);
        let s = copula
            .solve_partial_u_for_v(t, target)
            .ok_or(Error::UnsupportedFamily {
                op,
                family: copula.family(),
            })?;
        if !(t > 0.0 && s > 0.0) {
            return Err(Error::Domain { op, value: t.min(s) });
        }
        Ok((inverse_clamped(m1, t), inverse_clamped(m2, s.min(self.mass[1]))))
    }
}

/// Uniform on `(0, 1]`.
pub(crate) fn uniform_open<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// `Expo(rate)` by inversion.
pub(crate) fn exponential<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    -uniform_open(rng).ln() / rate
}

/// One common jump `(x₁, x₂)` of `P³`.
pub fn sample_common_jump<R: Rng>(dec: &JumpDecomposition, rng: &mut R) -> Result<(f64, f64)> {
    JumpSampler::new(dec)?.sample(JumpClass::Common, rng)
}
