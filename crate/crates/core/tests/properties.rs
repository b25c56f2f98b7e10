use morse_engine::carnot::{carnot_cycle_sum, carnot_efficiency, verify_reversibility};
use morse_engine::otto::{otto_closed, otto_cycle_sum, ClosedInputs};
use morse_engine::spectrum::{bound_spectrum, potential_minimum, potential_value};
use morse_engine::specfun::{erf, erfc, erfi, erfi_scaled};
use morse_engine::thermo::{entropy_closed, thermal_state, ThermalState};
use morse_engine::{CarnotSpec, MorseModel, OttoProtocol, OttoSpec, Regime, ThermalEnvironment, Units};
use proptest::prelude::*;

fn units(mu: f64) -> Units {
    Units {
        mu,
        ..Units::default()
    }
}

/// Models with at least one bound level: `lambda q` stays above 1.
fn model() -> impl Strategy<Value = MorseModel> {
    (1.0..40.0f64, 0.3..3.0f64, 0.2..1.0f64, 50.0..2000.0f64)
        .prop_filter_map("no bound level", |(d, a, q, mu)| {
            MorseModel::with_units(d, a, q, &units(mu)).ok()
        })
}

fn baths() -> impl Strategy<Value = (ThermalEnvironment, ThermalEnvironment)> {
    (0.2..20.0f64, 0.05..1.0f64).prop_map(|(th, ratio)| {
        (
            ThermalEnvironment::at(th).unwrap(),
            ThermalEnvironment::at(th * ratio).unwrap(),
        )
    })
}

fn otto() -> impl Strategy<Value = OttoSpec> {
    (model(), baths(), 0..3usize, 0.5..1.5f64).prop_filter_map(
        "invalid stroke",
        |(m, (h, c), kind, f)| {
            let protocol = match kind {
                0 => OttoProtocol::ChangingWidth {
                    alpha_h: m.alpha(),
                    alpha_c: m.alpha() * f,
                },
                1 => OttoProtocol::ChangingDeformation {
                    q_h: m.q(),
                    q_c: (m.q() * f).min(1.0),
                },
                _ => OttoProtocol::ChangingDissociation {
                    d_h: m.d_e(),
                    d_c: m.d_e() * f,
                },
            };
            OttoSpec::new(protocol, m, h, c).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn erf_and_erfc_are_complementary(x in -6.0..6.0f64) {
        let (e, c) = (erf(x).unwrap(), erfc(x).unwrap());
        prop_assert!((e + c - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert_eq!(erf(-x).unwrap(), -e);
    }

    #[test]
    fn erfi_is_odd_and_matches_its_scaled_form(x in 0.0..25.0f64) {
        let v = erfi(x).unwrap();
        prop_assert_eq!(erfi(-x).unwrap(), -v);
        let rebuilt = erfi_scaled(x).unwrap() * (x * x).exp();
        prop_assert!((rebuilt - v).abs() <= 1e-13 * v.abs().max(1e-300));
    }

    #[test]
    fn potential_minimum_is_the_lowest_point(m in model(), dx in -0.3..0.3f64) {
        let (x0, v0) = potential_minimum(&m);
        prop_assert!((potential_value(&m, x0).unwrap() - v0).abs() <= 1e-12 * v0.abs());
        let shift = dx / m.xi();
        prop_assert!(potential_value(&m, x0 + shift).unwrap() >= v0 - 1e-12 * v0.abs());
    }

    #[test]
    fn bound_levels_are_negative_ascending_and_compress(m in model()) {
        let s = bound_spectrum(&m);
        let e = s.levels();
        prop_assert!(!e.is_empty());
        prop_assert!(e.iter().all(|&x| x < 0.0 && x >= -m.d_e() * m.q() * m.q()));
        let scale = m.energy_scale();
        for w in e.windows(2) {
            prop_assert!(w[1] > w[0]);
        }
        for w in e.windows(3) {
            // E_{n+1} - E_n shrinks by exactly 2 xi^2 p per step.
            let d = (w[1] - w[0]) - (w[2] - w[1]);
            prop_assert!((d - 2.0 * scale).abs() <= 1e-9 * m.d_e());
        }
    }

    #[test]
    fn occupations_are_normalized_and_gibbs_consistent(m in model(), t in 0.05..50.0f64) {
        let env = ThermalEnvironment::at(t).unwrap();
        let s = thermal_state(&m, &env);
        let total: f64 = s.occupations.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        // S = beta U + ln Z
        let gibbs = env.beta() * s.internal_energy + s.log_partition;
        prop_assert!((s.entropy - gibbs).abs() <= 1e-9 * (1.0 + gibbs.abs()));
        prop_assert!(s.entropy >= -1e-15 && s.entropy <= (s.occupations.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn work_and_heat_split_the_energy_change(m in model(), t in 0.1..20.0f64) {
        // Width step at fixed occupations plus temperature step at fixed
        // spectrum; the cross term is second order.
        let step = 1e-5;
        let Ok(m2) = m.with_alpha(m.alpha() * (1.0 + step)) else { return Ok(()); };
        let (e1, e2) = (bound_spectrum(&m).levels().to_vec(), bound_spectrum(&m2).levels().to_vec());
        prop_assume!(e1.len() == e2.len());
        let s1 = ThermalState::from_levels(&e1, 1.0 / t);
        let s2 = ThermalState::from_levels(&e2, 1.0 / (t * (1.0 + step)));
        let du_work: f64 = s1.occupations.iter().zip(e1.iter().zip(&e2)).map(|(p, (a, b))| p * (b - a)).sum();
        let du_heat: f64 = e1.iter().zip(s1.occupations.iter().zip(&s2.occupations)).map(|(e, (p, q))| e * (q - p)).sum();
        let du = s2.internal_energy - s1.internal_energy;
        let first_order = du_work.abs() + du_heat.abs();
        prop_assume!(first_order > 1e-9 * s1.internal_energy.abs());
        prop_assert!((du_work + du_heat - du).abs() <= 1e-3 * first_order, "{du_work} + {du_heat} vs {du}");
    }

    #[test]
    fn entropy_grows_with_temperature(m in model(), t in 0.05..20.0f64) {
        let s = |t: f64| thermal_state(&m, &ThermalEnvironment::at(t).unwrap()).entropy;
        prop_assert!(s(1.1 * t) >= s(t) - 1e-12);
    }

    #[test]
    fn closed_entropy_is_finite_for_deep_wells(m in model(), t in 0.05..50.0f64) {
        let env = ThermalEnvironment::at(t).unwrap();
        prop_assert!(entropy_closed(&m, &env).unwrap().is_finite());
    }

    #[test]
    fn otto_sum_obeys_the_first_and_second_law(spec in otto()) {
        let r = otto_cycle_sum(&spec).unwrap();
        let scale = r.q_hot.abs().max(r.q_cold.abs()).max(1e-300);
        prop_assert!((r.work - (r.q_hot + r.q_cold)).abs() <= 1e-12 * scale);
        if r.regime == Regime::Engine {
            let bound = 1.0 - spec.cold.temperature() / spec.hot.temperature();
            prop_assert!(r.efficiency.unwrap() <= bound + 1e-9);
        }
    }

    #[test]
    fn collapsed_protocol_produces_no_work(spec in otto()) {
        let same = OttoSpec { protocol: spec.protocol.collapsed(), ..spec };
        let r = otto_cycle_sum(&same).unwrap();
        prop_assert!(r.work.abs() <= 1e-12 * r.q_hot.abs().max(1e-300));
    }

    #[test]
    fn closed_otto_closes(spec in otto()) {
        let Ok(inputs) = ClosedInputs::from_spec(&spec) else { return Ok(()); };
        if let Ok(c) = otto_closed(&inputs) {
            if c.work.re.is_finite() && c.q_hot.re.is_finite() {
                let scale = c.work.re.abs().max(c.q_hot.re.abs()).max(c.q_cold.re.abs());
                prop_assert!(c.closure_gap() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn strict_carnot_is_reversible(m in model(), (h, c) in baths()) {
        let Ok(spec) = CarnotSpec::strict(&m, m.alpha(), h, c) else { return Ok(()); };
        let ratio = c.temperature() / h.temperature();
        let report = verify_reversibility(&spec.model_hot, &spec.model_cold, ratio, 1e-12).unwrap();
        prop_assert!(report.passed, "{:?}", report);
        // Equal level gaps in units of k_B T give equal entropies.
        let s_b = thermal_state(&spec.model_hot, &h).entropy;
        let s_d = thermal_state(&spec.model_cold, &c).entropy;
        prop_assert!((s_b - s_d).abs() <= 1e-10 * s_b.max(s_d).max(1e-300));
        let r = carnot_cycle_sum(&spec);
        let scale = (h.temperature() - c.temperature()) * s_b.max(s_d);
        prop_assert!(r.work.abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn carnot_efficiency_is_the_bath_bound(m in model(), (h, c) in baths(), f in 0.3..1.0f64) {
        let spec = CarnotSpec::paper(&m, m.alpha(), m.alpha() * f, h, c);
        if let Ok(spec) = spec {
            let expected = 1.0 - c.temperature() / h.temperature();
            prop_assert!((carnot_efficiency(&spec) - expected).abs() <= 1e-15);
        }
    }

    #[test]
    fn undeformed_limit_is_continuous(d in 2.0..30.0f64, a in 0.5..2.5f64) {
        let u = units(500.0);
        let at = |q: f64| bound_spectrum(&MorseModel::with_units(d, a, q, &u).unwrap()).levels().to_vec();
        let (near, exact) = (at(1.0 - 1e-12), at(1.0));
        prop_assert_eq!(near.len(), exact.len());
        // Relative to the well depth: a level just below threshold has a tiny
        // energy whose own relative change is ill-conditioned.
        for (x, y) in near.iter().zip(&exact) {
            prop_assert!((x - y).abs() <= 1e-9 * d);
        }
    }
}

#[test]
fn thermal_state_survives_extreme_beta() {
    let m = MorseModel::new(200.0, 0.1, 1.0).unwrap();
    let s = ThermalState::from_levels(bound_spectrum(&m).levels(), 1e6);
    assert!(s.log_partition.is_finite());
    assert!((s.occupations[0] - 1.0).abs() < 1e-12);
    assert!(s.entropy.abs() < 1e-12);
}

#[test]
fn erfi_is_smooth_across_its_method_switch() {
    // Successive samples on [5, 10] follow exp(x^2)/x growth with no jump.
    let h = 1e-4;
    let mut x: f64 = 5.0;
    while x < 10.0 {
        let (a, b) = (erfi_scaled(x).unwrap(), erfi_scaled(x + h).unwrap());
        // d/dx of exp(-x^2) erfi(x) is 2/sqrt(pi) - 2x exp(-x^2) erfi(x), bounded by 2 here.
        assert!((b - a).abs() <= 2.0 * h, "jump at {x}: {a} -> {b}");
        let mid = erfi_scaled(x + 0.5 * h).unwrap();
        assert!((mid - 0.5 * (a + b)).abs() <= 1e-9, "curvature spike at {x}");
        x += h;
    }
}
