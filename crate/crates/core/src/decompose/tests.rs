use super::closed_form::{self, Status};
use super::*;
use crate::quad::integrate;
use alloc::vec::Vec;
use approx::assert_relative_eq;

const Z_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0];

fn tight() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_subdivisions: 4000,
    }
}

fn expo(l: f64, a: f64) -> MarginalTail {
    MarginalTail::expo(l, a).unwrap()
}

fn dec(c: LevyCopula, m1: MarginalTail, m2: MarginalTail) -> JumpDecomposition {
    JumpDecomposition::new(c, m1, m2).unwrap().with_quad_config(tight())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `∫∫_{x+y>z, x,y>0} ∂²Ĉ(Π̄₁(x), Π̄₂(y)) Π₁(dx) Π₂(dy)` by nested quadrature.
fn common_tail_2d(d: &JumpDecomposition, z: f64) -> f64 {
    let (m1, m2, c) = (*d.margin1(), *d.margin2(), *d.copula());
    let cfg = QuadConfig {
        abs_tol: 1e-16,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
    };
    let inner = |x: f64| {
        let y0 = (z - x).max(0.0);
        integrate_to_infinity(
            |y| c.duv(m1.tail_at(x), m2.tail_at(y)) * m2.density(y),
            y0,
            &[],
            1.0,
            |y| m2.tail_at(y),
            1e-18,
            &cfg,
        )
        .unwrap()
        .value
            * m1.density(x)
    };
    let a = integrate(inner, 0.0, z, &cfg).unwrap().value;
    let b = integrate_to_infinity(inner, z, &[], 1.0, |x| m1.tail_at(x), 1e-18, &cfg)
        .unwrap()
        .value;
    a + b
}

#[test]
fn independence_has_no_common_jumps() {
    let d = dec(LevyCopula::Independence, expo(1.0, 1.0), expo(2.0, 0.5));
    for z in Z_GRID {
        assert_eq!(d.tail_pk(JumpClass::Common, z).unwrap().value, 0.0);
        let s = d.tail_sum(z).unwrap().value;
        assert_relative_eq!(s, (-z).exp() + 2.0 * (-0.5 * z).exp(), max_relative = 1e-15);
    }
    assert_eq!(d.intensity(JumpClass::Common), 0.0);
}

#[test]
fn complete_dependence_equal_margins() {
    let d = dec(LevyCopula::CompleteDependence, expo(1.0, 1.3), expo(1.0, 1.3));
    for z in Z_GRID {
        assert_eq!(d.tail_pk(JumpClass::Single1, z).unwrap().value, 0.0);
        assert_eq!(d.tail_pk(JumpClass::Single2, z).unwrap().value, 0.0);
        let t = d.tail_pk(JumpClass::Common, z).unwrap().value;
        assert_relative_eq!(t, (-1.3 * z / 2.0).exp(), max_relative = 1e-15);
    }
}

#[test]
fn complete_dependence_unequal_margins_solves_for_level() {
    // Π̄₁⁻¹(t) + Π̄₂⁻¹(t) = ln(1/t) + 2 ln(2/t) = z.
    let d = dec(LevyCopula::CompleteDependence, expo(1.0, 1.0), expo(2.0, 0.5));
    for z in Z_GRID {
        let expect = if z <= 2.0 * 2f64.ln() {
            1.0
        } else {
            (-(z - 2.0 * 2f64.ln()) / 3.0).exp()
        };
        assert_relative_eq!(
            d.tail_pk(JumpClass::Common, z).unwrap().value,
            expect,
            max_relative = 1e-12
        );
        let p1 = d.tail_pk(JumpClass::Single1, z).unwrap().value;
        assert_eq!(p1, 0.0);
        let p2 = d.tail_pk(JumpClass::Single2, z).unwrap().value;
        assert_relative_eq!(p2, (2.0 * (-0.5 * z).exp() - 1.0).max(0.0), epsilon = 1e-15);
    }
}

#[test]
fn nonhom_single_tail_examples() {
    let d = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    assert_relative_eq!(
        d.tail_pk(JumpClass::Single1, 1e-14).unwrap().value,
        0.8,
        max_relative = 1e-12
    );
    assert_relative_eq!(d.intensity(JumpClass::Single1), 0.8, max_relative = 1e-15);
    for z in Z_GRID {
        let e = (-z).exp();
        let expect = e * (e + 3.0) / (e + 1.0 + 3.0);
        assert_relative_eq!(
            d.tail_pk(JumpClass::Single1, z).unwrap().value,
            expect,
            max_relative = 1e-14
        );
    }
    let p = MarginalTail::pareto(1.0, 1.0, 1.0).unwrap();
    let d = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), p, p);
    for z in [1.5, 2.0, 7.0] {
        let expect = (3.0 + 1.0 / z) / (1.0 + z * 4.0);
        assert_relative_eq!(
            d.tail_pk_general(JumpClass::Single2, z).unwrap().value,
            expect,
            max_relative = 1e-14
        );
    }
}

#[test]
fn common_tail_matches_two_dimensional_quadrature() {
    for c in [
        LevyCopula::clayton(1.0, 2.0).unwrap(),
        LevyCopula::clayton(1.0, 0.7).unwrap(),
    ] {
        let d = dec(c, expo(1.0, 1.0), expo(1.5, 0.8));
        for z in [0.5, 2.0, 5.0] {
            let q = d.tail_pk(JumpClass::Common, z).unwrap();
            let oracle = common_tail_2d(&d, z);
            assert!(rel(q.value, oracle) < 1e-7, "z={z}: {} vs {oracle}", q.value);
        }
    }
}

#[test]
fn closed_forms_agree_with_quadrature() {
    let cl = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    let nh = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    let p = MarginalTail::pareto(1.0, 1.0, 1.0).unwrap();
    let np = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), p, p);
    let sum_general = |d: &JumpDecomposition, z: f64| {
        JumpClass::ALL
            .iter()
            .map(|k| d.tail_pk_general(*k, z).unwrap().value)
            .sum::<f64>()
    };
    for z in Z_GRID {
        assert!(rel(closed_form::clayton_theta1_expo_sum(z, 1.0), sum_general(&cl, z)) < 1e-7);
        assert!(rel(closed_form::nonhom_expo_sum(z, 1.0, 3.0), sum_general(&nh, z)) < 1e-7);
        if z > 1.0 {
            let q = np.tail_pk_general(JumpClass::Single1, z).unwrap().value;
            assert!(rel(closed_form::nonhom_std_pareto_single(z, 3.0), q) < 1e-7);
        }
        if z > 2.0 {
            let q = np.tail_pk_general(JumpClass::Common, z).unwrap().value;
            assert!(rel(closed_form::nonhom_std_pareto_common(z, 3.0), q) < 1e-7);
        }
        let simplified = closed_form::clayton_theta1_expo_sum_simplified(z, 1.0);
        assert!(rel(simplified, sum_general(&cl, z)) > 1e-2);
    }
    assert_eq!(
        closed_form::status("clayton_theta1_expo_simplified"),
        Some(Status::Discrepancy)
    );
    assert!(cl.uses_closed_form() && nh.uses_closed_form() && np.uses_closed_form());
}

#[test]
fn closed_form_dispatch_is_consistent_with_general_route() {
    let d = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(2.0, 0.5), expo(2.0, 0.5));
    for z in Z_GRID {
        for k in JumpClass::ALL {
            let a = d.tail_pk(k, z).unwrap().value;
            let b = d.tail_pk_general(k, z).unwrap().value;
            assert!(rel(a, b) < 1e-9, "k={k:?} z={z}");
        }
    }
}

#[test]
fn total_intensity_examples() {
    let d = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    assert_relative_eq!(d.lambda_sum().unwrap(), 1.5, max_relative = 1e-15);
    let d = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    assert_relative_eq!(d.lambda_sum().unwrap(), 1.8, max_relative = 1e-15);
}

fn assorted() -> [JumpDecomposition; 6] {
    [
        dec(LevyCopula::clayton(1.0, 0.5).unwrap(), expo(1.0, 1.0), expo(2.0, 3.0)),
        dec(LevyCopula::clayton(1.0, 5.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0)),
        dec(LevyCopula::nonhom(1.0, 1.0).unwrap(), expo(1.0, 2.0), expo(0.5, 1.0)),
        dec(
            LevyCopula::clayton(1.0, 2.0).unwrap(),
            MarginalTail::pareto(1.0, 2.0, 1.0).unwrap(),
            MarginalTail::pareto(1.0, 2.0, 1.0).unwrap(),
        ),
        dec(LevyCopula::CompleteDependence, expo(1.0, 1.0), expo(2.0, 0.5)),
        dec(
            LevyCopula::Independence,
            expo(1.0, 1.0),
            MarginalTail::pareto(0.5, 3.0, 0.5).unwrap(),
        ),
    ]
}

#[test]
fn means_add_up_and_match_direct_quadrature() {
    for d in assorted() {
        let mut sum = 0.0;
        for k in JumpClass::ALL {
            let m = d.mean_pk(k).unwrap().value;
            let direct = d.integrated_tail_pk(k, 0.0).unwrap().value;
            assert!(
                (m - direct).abs() <= 1e-7 * d.mean_sum(),
                "{} k={k:?}: {m} vs {direct}",
                d.copula().family()
            );
            sum += m;
        }
        assert!(rel(sum, d.mean_sum()) < 1e-12);
    }
}

#[test]
fn tail_sum_at_zero_recovers_total_intensity() {
    for d in assorted() {
        let s = d.tail_sum(1e-11).unwrap().value;
        assert!((s - d.lambda_sum().unwrap()).abs() < 1e-8, "{}", d.copula().family());
    }
}

#[test]
fn component_tails_are_nonincreasing_and_nonnegative() {
    for d in assorted() {
        for k in JumpClass::ALL {
            let mut prev = f64::INFINITY;
            for i in 1..120 {
                let z = 0.1 * i as f64;
                let t = d.tail_pk(k, z).unwrap();
                assert!(t.value >= -t.error);
                assert!(t.value <= prev + t.error + 1e-12, "{k:?} at {z}");
                prev = t.value;
            }
        }
    }
}

#[test]
fn single_jump_ratios_at_large_z() {
    let cl = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    let r = cl.tail_pk(JumpClass::Single1, 20.0).unwrap().value / (-20.0f64).exp();
    assert!(r < 0.01);
    let nh = dec(LevyCopula::nonhom(1.0, 3.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    let r = nh.tail_pk(JumpClass::Single1, 20.0).unwrap().value / (-20.0f64).exp();
    assert!((r - 0.75).abs() < 0.01);
}

#[test]
fn clayton_single_tails_decrease_in_theta() {
    let thetas = [0.3, 0.5, 1.0, 2.0, 5.0, 10.0];
    for z in Z_GRID {
        let vals: Vec<f64> = thetas
            .iter()
            .map(|t| {
                dec(LevyCopula::clayton(1.0, *t).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0))
                    .tail_pk(JumpClass::Single1, z)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[0] >= w[1]), "{vals:?}");
    }
}

#[test]
fn infinite_activity_partner_removes_single_jumps() {
    let s = MarginalTail::stable_like(0.5, 1.0).unwrap();
    let d = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), s);
    assert_eq!(d.tail_pk(JumpClass::Single1, 0.7).unwrap().value, 0.0);
    assert_eq!(d.intensity(JumpClass::Single1), 0.0);
    assert_eq!(d.intensity(JumpClass::Single2), f64::INFINITY);
    assert!(d.lambda_sum().is_err());
    let d = dec(LevyCopula::Independence, expo(1.0, 1.0), s);
    assert_eq!(d.tail_pk(JumpClass::Single1, 0.7).unwrap().value, (-0.7f64).exp());
    // Common jumps with an infinite-activity partner: every S¹ jump is common.
    let d = dec(LevyCopula::clayton(1.0, 1.0).unwrap(), expo(1.0, 1.0), s);
    let t = d.tail_pk(JumpClass::Common, 2.0).unwrap();
    assert!(t.value > (-2.0f64).exp() && t.value < 1.0);
}

#[test]
fn densities_match_finite_differences() {
    for d in assorted() {
        for k in JumpClass::ALL {
            for z in [0.3, 1.7, 4.0] {
                let h = 1e-4;
                let fd = (d.tail_pk(k, z - h).unwrap().value - d.tail_pk(k, z + h).unwrap().value) / (2.0 * h);
                let an = d.density_pk(k, z).unwrap().value;
                assert!(
                    (an - fd).abs() < 1e-6 * (1.0 + an.abs()),
                    "{} {k:?} z={z}: {an} vs {fd}",
                    d.copula().family()
                );
            }
        }
    }
}

#[test]
fn rejects_discordant_weight_for_spectrally_positive_use() {
    let r = JumpDecomposition::new(LevyCopula::clayton(0.5, 1.0).unwrap(), expo(1.0, 1.0), expo(1.0, 1.0));
    assert!(matches!(r, Err(Error::Parameter { name: "eta", .. })));
    let d = dec(LevyCopula::Independence, expo(1.0, 1.0), expo(1.0, 1.0));
    assert!(d.tail_pk(JumpClass::Single1, 0.0).is_err());
    assert!(d.tail_pk(JumpClass::Single1, -1.0).is_err());
}

mod mixed_classes {
    use super::*;

    fn two_sided(neg: bool) -> TwoSidedMargins {
        TwoSidedMargins {
            pos1: expo(1.0, 1.0),
            neg1: neg.then(|| expo(0.8, 1.5)),
            pos2: expo(1.0, 1.0),
            neg2: neg.then(|| expo(0.8, 1.5)),
        }
    }

    #[test]
    fn concordant_only_copulas_give_zero() {
        let m = two_sided(true);
        for c in [
            LevyCopula::clayton(1.0, 1.0).unwrap(),
            LevyCopula::nonhom(1.0, 2.0).unwrap(),
            LevyCopula::Independence,
        ] {
            for class in [MixedClass::UpDown, MixedClass::DownUp] {
                assert_eq!(tail_p45(&m, &c, class, 0.5, &tight()).unwrap().value, 0.0);
            }
        }
        let c = LevyCopula::clayton(0.3, 1.0).unwrap();
        assert_eq!(
            tail_p45(&two_sided(false), &c, MixedClass::UpDown, 0.5, &tight())
                .unwrap()
                .value,
            0.0
        );
        assert!(matches!(
            tail_p45(&m, &LevyCopula::CompleteDependence, MixedClass::UpDown, 0.5, &tight()),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn symmetric_margins_give_equal_classes() {
        let m = two_sided(true);
        let c = LevyCopula::clayton(0.0, 1.0).unwrap();
        for z in [0.1, 1.0, 3.0] {
            let a = tail_p45(&m, &c, MixedClass::UpDown, z, &tight()).unwrap().value;
            let b = tail_p45(&m, &c, MixedClass::DownUp, z, &tight()).unwrap().value;
            assert!(a > 0.0);
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn matches_two_dimensional_quadrature() {
        let m = TwoSidedMargins {
            pos1: expo(1.0, 1.0),
            neg1: None,
            pos2: expo(1.2, 0.7),
            neg2: Some(expo(0.8, 1.5)),
        };
        let cfg = QuadConfig {
            abs_tol: 1e-16,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
        };
        for c in [
            LevyCopula::clayton(0.5, 1.0).unwrap(),
            LevyCopula::nonhom(0.4, 2.0).unwrap(),
        ] {
            let (up, down) = (m.pos1, m.neg2.unwrap());
            for z in [0.2, 1.0, 2.5] {
                // Joint density on x > 0, y < 0 is ∂²Ĉ(Π̄₁(x), −Π̄₂⁻(−y)) π₁(x) π₂⁻(−y).
                let inner = |x: f64| {
                    integrate(
                        |w| c.duv(up.tail_at(x), -down.tail_at(w)) * down.density(w),
                        0.0,
                        x - z,
                        &cfg,
                    )
                    .unwrap()
                    .value
                        * up.density(x)
                };
                let oracle = integrate_to_infinity(inner, z, &[], 1.0, |x| up.tail_at(x), 1e-18, &cfg)
                    .unwrap()
                    .value;
                let v = tail_p45(&m, &c, MixedClass::UpDown, z, &tight()).unwrap().value;
                assert!(rel(v, oracle) < 1e-6, "{} z={z}: {v} vs {oracle}", c.family());
            }
        }
    }
}
