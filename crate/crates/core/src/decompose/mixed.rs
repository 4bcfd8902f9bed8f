//! Opposite-sign common jumps `P⁴` and `P⁵` for two-sided compound Poisson margins.

use crate::copulas::LevyCopula;
use crate::margins::MarginalTail;
use crate::quad::{integrate_to_infinity, Estimate, QuadConfig};
use crate::{Error, Result};

/// Positive and negative jump parts of both components. A negative part's
/// tail is `Π̄⁻(y) = Π((−∞, −y])` for `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedMargins {
    pub pos1: MarginalTail,
    pub neg1: Option<MarginalTail>,
    pub pos2: MarginalTail,
    pub neg2: Option<MarginalTail>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedClass {
    /// `P⁴`: `S¹` jumps up while `S²` jumps down.
    UpDown,
    /// `P⁵`: `S¹` jumps down while `S²` jumps up.
    DownUp,
}

/// `Π̄_{P⁴}(z)` or `Π̄_{P⁵}(z)`: the rate of opposite-sign common jumps whose
/// sum exceeds `z > 0`.
///
/// For `P⁴` this is `∫_z^∞ [∂₁Ĉ(Π̄₁(x), v)]_{v=−λ₂⁻}^{v=−Π̄₂⁻(x−z)} Π₁(dx)`; an
/// absent negative part contributes nothing.
pub fn tail_p45(
    margins: &TwoSidedMargins,
    copula: &LevyCopula,
    class: MixedClass,
    z: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    copula.validate()?;
    if !(z > 0.0) {
        return Err(Error::Domain {
            op: "tail_p45",
            value: z,
        });
    }
    let sides = [Some(margins.pos1), margins.neg1, Some(margins.pos2), margins.neg2];
    for m in sides.iter().flatten() {
        m.validate()?;
        if !m.mass().is_finite() {
            return Err(Error::Validation(
                "opposite-sign common jumps need finite-intensity margins".into(),
            ));
        }
    }
    match copula {
        LevyCopula::CompleteDependence => {
            return Err(Error::UnsupportedFamily {
                op: "tail_p45",
                family: copula.family(),
            })
        }
        LevyCopula::Independence => return Ok(Estimate::ZERO),
        _ => {}
    }
    let (up, down) = match class {
        MixedClass::UpDown => (margins.pos1, margins.neg2),
        MixedClass::DownUp => (margins.pos2, margins.neg1),
    };
    let Some(down) = down else {
        return Ok(Estimate::ZERO);
    };
    if copula.eta() == 1.0 {
        return Ok(Estimate::ZERO);
    }
    // Every family here is exchangeable, so ∂₂Ĉ(u, v) = ∂₁Ĉ(v, u) and both
    // classes share one integrand.
    let floor_v = -down.mass();
    integrate_to_infinity(
        |x| {
            let u = up.tail_at(x);
            let v = -down.tail_at(x - z);
            (copula.du(u, v) - copula.du(u, floor_v)) * up.density(x)
        },
        z.max(up.support_start()),
        &[z + down.support_start(), up.support_start()],
        up.scale(),
        |x| up.tail_at(x),
        1e-16 * up.mass(),
        cfg,
    )
}
