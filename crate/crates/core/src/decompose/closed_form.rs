//! Explicit tail integrals for special copula/margin pairs.
//!
//! Each form is cross-checked against adaptive quadrature in the test suite.
//! Only forms whose [`Status`] is [`Status::Validated`] are dispatched by
//! [`super::JumpDecomposition`]; the others are kept for reference.

use num_traits::Float;

use crate::copulas::LevyCopula;
use crate::margins::MarginalTail;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Agrees with quadrature to `1e−7` relative on the test grid.
    Validated,
    /// Disagrees with quadrature; never dispatched.
    Discrepancy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInfo {
    pub name: &'static str,
    pub status: Status,
    pub note: &'static str,
}

pub const REGISTRY: &[ClosedFormInfo] = &[
    ClosedFormInfo {
        name: "clayton_theta1_expo",
        status: Status::Validated,
        note: "Clayton θ=1, equal exponential margins: arctan form of the sum tail",
    },
    ClosedFormInfo {
        name: "clayton_theta1_expo_simplified",
        status: Status::Discrepancy,
        note: "rational part (3+2e^{−az}+e^{az})/((e^{az}+1)(e^{−az}+1)) reduces to \
               (1+2e^{−az})/(1+e^{−az}), missing the factor e^{−az} of the arctan form",
    },
    ClosedFormInfo {
        name: "nonhom_expo",
        status: Status::Validated,
        note: "nonhomogeneous copula, unit-intensity exponential margins, ζ > 2: log form",
    },
    ClosedFormInfo {
        name: "nonhom_std_pareto",
        status: Status::Validated,
        note: "nonhomogeneous copula, standard Pareto margins: single-jump tail for z > 1, \
               common-jump tail for z > 2",
    },
    ClosedFormInfo {
        name: "complete_dependence_equal",
        status: Status::Validated,
        note: "complete dependence, identical margins: common-jump tail Π̄(z/2)",
    },
];

pub fn status(name: &str) -> Option<Status> {
    REGISTRY.iter().find(|c| c.name == name).map(|c| c.status)
}

/// Single-jump tail, Clayton θ = 1, margins `λe^{−ax}`.
pub fn clayton_theta1_expo_single(z: f64, lambda: f64, a: f64) -> f64 {
    let u = (-a * z).exp();
    lambda * u * u / (1.0 + u)
}

/// Common-jump tail, Clayton θ = 1, margins `λe^{−ax}`.
pub fn clayton_theta1_expo_common(z: f64, lambda: f64, a: f64) -> f64 {
    let u = (-a * z).exp();
    lambda * (u / (1.0 + u) + arctan_term(z, a))
}

/// Sum tail, Clayton θ = 1, margins `e^{−ax}`, in the form
/// `e^{−az}(2/(e^{az}+1) + 1/(e^{−az}+1)) + ½e^{−az/2}(arctan e^{az/2} − arctan e^{−az/2})`.
pub fn clayton_theta1_expo_sum(z: f64, a: f64) -> f64 {
    let e = (-a * z).exp();
    e * (2.0 / (1.0 / e + 1.0) + 1.0 / (e + 1.0)) + arctan_term(z, a)
}

/// The same sum tail with the rational part replaced by
/// `(3 + 2e^{−az} + e^{az})/((e^{az}+1)(e^{−az}+1))`. Not an identity.
pub fn clayton_theta1_expo_sum_simplified(z: f64, a: f64) -> f64 {
    let w = (a * z).exp();
    (3.0 + 2.0 / w + w) / ((w + 1.0) * (1.0 / w + 1.0)) + arctan_term(z, a)
}

fn arctan_term(z: f64, a: f64) -> f64 {
    let h = (-0.5 * a * z).exp();
    // arctan(1/h) − arctan(h) = π/2 − 2·arctan(h)
    0.5 * h * (core::f64::consts::FRAC_PI_2 - 2.0 * h.atan())
}

/// Single-jump tail, nonhomogeneous copula, margins `λ₁e^{−ax}` and total
/// intensity `λ₂` on the other side.
pub fn nonhom_single(u: f64, lambda_other: f64, zeta: f64) -> f64 {
    u * (u + zeta) / (u + lambda_other + zeta)
}

/// Common-jump tail, nonhomogeneous copula, margins `e^{−ax}`, valid for
/// `ζ² > 4e^{−az}`.
pub fn nonhom_expo_common(z: f64, a: f64, zeta: f64) -> f64 {
    let e = (-a * z).exp();
    let r = (zeta * zeta - 4.0 * e).sqrt();
    let d = 4.0 * e - zeta * zeta;
    let first = e * zeta * (1.0 - e) / (d * (1.0 + zeta + e));
    let log = ((2.0 + zeta - r) * (2.0 * e + zeta + r) / ((2.0 + zeta + r) * (2.0 * e + zeta - r))).ln();
    let second = e * (2.0 * e - zeta * zeta) / (d * r) * log;
    let tail = 1.0 / (1.0 + (a * z).exp() * (1.0 + zeta));
    first + second + tail
}

/// Sum tail for the nonhomogeneous copula with margins `e^{−ax}`, `ζ > 2`.
pub fn nonhom_expo_sum(z: f64, a: f64, zeta: f64) -> f64 {
    let u = (-a * z).exp();
    2.0 * nonhom_single(u, 1.0, zeta) + nonhom_expo_common(z, a, zeta)
}

/// Single-jump tail, nonhomogeneous copula, margins `x^{−1}` on `x ≥ 1`, for `z > 1`.
pub fn nonhom_std_pareto_single(z: f64, zeta: f64) -> f64 {
    (zeta + 1.0 / z) / (1.0 + z * (1.0 + zeta))
}

/// Common-jump tail, nonhomogeneous copula, margins `x^{−1}` on `x ≥ 1`, for `z > 2`.
pub fn nonhom_std_pareto_common(z: f64, zeta: f64) -> f64 {
    let zz = z * zeta;
    let r = (zz * (4.0 + zz)).sqrt();
    let first = (2.0 * z * z * zeta + 6.0 * z - 2.0 * zz - 4.0) / ((4.0 + zz) * (-zeta + zz + z) * z);
    let ratio = ((zz - 2.0 * zeta + r) / (zz - 2.0 * zeta - r)).abs();
    first + 2.0 * (2.0 + zz) / ((4.0 + zz) * z * r) * ratio.ln()
}

/// The dispatchable special cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Special {
    ClaytonTheta1Expo { lambda: f64, rate: f64 },
    NonhomExpo { rate: f64, zeta: f64 },
    NonhomStdPareto { zeta: f64 },
    CompleteDependenceEqual,
}

impl Special {
    pub(crate) fn detect(c: &LevyCopula, m1: &MarginalTail, m2: &MarginalTail) -> Option<Special> {
        let found = match (*c, *m1, *m2) {
            (
                LevyCopula::Clayton { eta, theta },
                MarginalTail::ExpoCpp { lambda, rate },
                MarginalTail::ExpoCpp { lambda: l2, rate: r2 },
            ) if eta == 1.0 && theta == 1.0 && lambda == l2 && rate == r2 => {
                Some((Special::ClaytonTheta1Expo { lambda, rate }, "clayton_theta1_expo"))
            }
            (
                LevyCopula::NonhomArchimedean { eta, zeta },
                MarginalTail::ExpoCpp { lambda, rate },
                MarginalTail::ExpoCpp { lambda: l2, rate: r2 },
            ) if eta == 1.0 && zeta > 2.0 && lambda == 1.0 && l2 == 1.0 && rate == r2 => {
                Some((Special::NonhomExpo { rate, zeta }, "nonhom_expo"))
            }
            (LevyCopula::NonhomArchimedean { eta, zeta }, p1, p2)
                if eta == 1.0 && is_std_pareto(&p1) && is_std_pareto(&p2) =>
            {
                Some((Special::NonhomStdPareto { zeta }, "nonhom_std_pareto"))
            }
            (LevyCopula::CompleteDependence, a, b) if a == b => {
                Some((Special::CompleteDependenceEqual, "complete_dependence_equal"))
            }
            _ => None,
        };
        found.and_then(|(s, name)| (status(name) == Some(Status::Validated)).then_some(s))
    }

    /// Single-jump tail at `z`, if this case has a closed form there.
    pub(crate) fn single(&self, z: f64) -> Option<f64> {
        match *self {
            Special::ClaytonTheta1Expo { lambda, rate } => Some(clayton_theta1_expo_single(z, lambda, rate)),
            Special::NonhomExpo { rate, zeta } => Some(nonhom_single((-rate * z).exp(), 1.0, zeta)),
            Special::NonhomStdPareto { zeta } => (z > 1.0).then(|| nonhom_std_pareto_single(z, zeta)),
            Special::CompleteDependenceEqual => Some(0.0),
        }
    }

    /// Common-jump tail at `z`, if this case has a closed form there.
    pub(crate) fn common(&self, m1: &MarginalTail, z: f64) -> Option<f64> {
        match *self {
            Special::ClaytonTheta1Expo { lambda, rate } => Some(clayton_theta1_expo_common(z, lambda, rate)),
            Special::NonhomExpo { rate, zeta } => Some(nonhom_expo_common(z, rate, zeta)),
            Special::NonhomStdPareto { zeta } => (z > 2.0).then(|| nonhom_std_pareto_common(z, zeta)),
            Special::CompleteDependenceEqual => Some(m1.tail_at(0.5 * z)),
        }
    }
}

fn is_std_pareto(m: &MarginalTail) -> bool {
    matches!(*m, MarginalTail::ParetoCpp { lambda, alpha, xm } if lambda == 1.0 && alpha == 1.0 && xm == 1.0)
}
