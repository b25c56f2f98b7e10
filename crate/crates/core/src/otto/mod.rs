//! Quantum Otto cycle with two fixed Hamiltonians.
//!
//! The hot stroke thermalises the hot model at `T_h` (point B), the cold
//! stroke thermalises the cold model at `T_c` (point D), and the adiabats
//! carry occupations level by level. Only levels bound in both models take
//! part; occupations are renormalised over that common range.

mod closed;

pub use closed::{
    lambda_set, lambda_set_from, otto_closed, otto_cold_heat_closed, otto_efficiency_closed,
    otto_hot_heat_closed, otto_work_closed, ClosedEfficiency, ClosedInputs, ClosedOtto, LambdaSet,
};

use serde::{Deserialize, Serialize};

use crate::cycle::{CycleResult, Diagnostics};
use crate::error::{Error, Result};
use crate::spectrum::{bound_spectrum, MorseModel};
use crate::thermo::{ThermalEnvironment, ThermalState};

/// Which model parameter differs between the two strokes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OttoProtocol {
    ChangingWidth { alpha_h: f64, alpha_c: f64 },
    ChangingDeformation { q_h: f64, q_c: f64 },
    ChangingDissociation { d_h: f64, d_c: f64 },
}

impl OttoProtocol {
    /// Same protocol with both strokes at the hot value.
    pub fn collapsed(&self) -> Self {
        match *self {
            OttoProtocol::ChangingWidth { alpha_h, .. } => OttoProtocol::ChangingWidth {
                alpha_h,
                alpha_c: alpha_h,
            },
            OttoProtocol::ChangingDeformation { q_h, .. } => {
                OttoProtocol::ChangingDeformation { q_h, q_c: q_h }
            }
            OttoProtocol::ChangingDissociation { d_h, .. } => {
                OttoProtocol::ChangingDissociation { d_h, d_c: d_h }
            }
        }
    }
}

/// A protocol applied to a baseline model between two baths.
///
/// The baseline supplies every parameter the protocol does not drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttoSpec {
    pub protocol: OttoProtocol,
    pub baseline: MorseModel,
    pub hot: ThermalEnvironment,
    pub cold: ThermalEnvironment,
}

impl OttoSpec {
    pub fn new(
        protocol: OttoProtocol,
        baseline: MorseModel,
        hot: ThermalEnvironment,
        cold: ThermalEnvironment,
    ) -> Result<Self> {
        if hot.temperature() < cold.temperature() {
            return Err(Error::invalid(
                "T_h",
                hot.temperature(),
                format!("must not be below T_c = {}", cold.temperature()),
            ));
        }
        if hot.k_b() != cold.k_b() {
            return Err(Error::invalid("kB", cold.k_b(), "baths must share k_B"));
        }
        let spec = OttoSpec {
            protocol,
            baseline,
            hot,
            cold,
        };
        otto_endpoints(&spec)?;
        Ok(spec)
    }
}

/// Hot-stroke and cold-stroke models.
pub fn otto_endpoints(spec: &OttoSpec) -> Result<(MorseModel, MorseModel)> {
    let b = &spec.baseline;
    match spec.protocol {
        OttoProtocol::ChangingWidth { alpha_h, alpha_c } => Ok((
            b.with_alpha(alpha_h).map_err(|e| e.named("alpha_h"))?,
            b.with_alpha(alpha_c).map_err(|e| e.named("alpha_c"))?,
        )),
        OttoProtocol::ChangingDeformation { q_h, q_c } => Ok((
            b.with_q(q_h).map_err(|e| e.named("q_h"))?,
            b.with_q(q_c).map_err(|e| e.named("q_c"))?,
        )),
        OttoProtocol::ChangingDissociation { d_h, d_c } => Ok((
            b.with_d_e(d_h).map_err(|e| e.named("D_h"))?,
            b.with_d_e(d_c).map_err(|e| e.named("D_c"))?,
        )),
    }
}

/// Otto cycle from the level sums.
///
/// `Q_h = sum E^h (P_B - P_D)`, `Q_c = sum E^c (P_D - P_B)` and
/// `W = sum (E^h - E^c)(P_B - P_D)` over `n <= min(n_max,h, n_max,c)`.
pub fn otto_cycle_sum(spec: &OttoSpec) -> Result<CycleResult> {
    let (hot_model, cold_model) = otto_endpoints(spec)?;
    let hot_levels = bound_spectrum(&hot_model);
    let cold_levels = bound_spectrum(&cold_model);
    let common = hot_levels.len().min(cold_levels.len());
    let e_h = &hot_levels.levels()[..common];
    let e_c = &cold_levels.levels()[..common];

    let p_b = ThermalState::from_levels(e_h, spec.hot.beta()).occupations;
    let p_d = ThermalState::from_levels(e_c, spec.cold.beta()).occupations;

    let mut q_hot = 0.0;
    let mut q_cold = 0.0;
    let mut work = 0.0;
    for n in 0..common {
        let dp = p_b[n] - p_d[n];
        q_hot += e_h[n] * dp;
        q_cold -= e_c[n] * dp;
        work += (e_h[n] - e_c[n]) * dp;
    }

    let kept = |levels: &[f64], beta: f64| -> f64 {
        let full = ThermalState::from_levels(levels, beta).occupations;
        1.0 - full[..common].iter().sum::<f64>()
    };
    let truncated_mass = kept(hot_levels.levels(), spec.hot.beta())
        .max(kept(cold_levels.levels(), spec.cold.beta()))
        .max(0.0);

    Ok(CycleResult::with_work(
        q_hot,
        q_cold,
        work,
        Diagnostics {
            truncated_mass,
            imag_residue: 0.0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::Regime;

    fn baths(t_h: f64, t_c: f64) -> (ThermalEnvironment, ThermalEnvironment) {
        (
            ThermalEnvironment::at(t_h).unwrap(),
            ThermalEnvironment::at(t_c).unwrap(),
        )
    }

    #[test]
    fn endpoints_differ_in_one_parameter() {
        let base = MorseModel::new(10.0, 1.0, 1.0).unwrap();
        let (h, c) = baths(10.0, 2.0);
        let cases = [
            OttoProtocol::ChangingWidth {
                alpha_h: 2.236,
                alpha_c: 1.0,
            },
            OttoProtocol::ChangingDeformation { q_h: 1.0, q_c: 0.8 },
            OttoProtocol::ChangingDissociation { d_h: 10.0, d_c: 5.0 },
        ];
        for protocol in cases {
            let spec = OttoSpec::new(protocol, base, h, c).unwrap();
            let (mh, mc) = otto_endpoints(&spec).unwrap();
            let differing = [mh.alpha() != mc.alpha(), mh.q() != mc.q(), mh.d_e() != mc.d_e()];
            assert_eq!(differing.iter().filter(|&&d| d).count(), 1, "{protocol:?}");
        }
    }

    #[test]
    fn endpoint_errors_name_the_parameter() {
        let base = MorseModel::new(10.0, 1.0, 1.0).unwrap();
        let (h, c) = baths(10.0, 2.0);
        let protocol = OttoProtocol::ChangingDeformation { q_h: 1.0, q_c: 0.1 };
        let bad_base = MorseModel::new(0.2, 1.0, 1.0).unwrap();
        match OttoSpec::new(protocol, bad_base, h, c) {
            Err(Error::Endpoint { parameter, .. }) => assert_eq!(parameter, "q_c"),
            other => panic!("expected endpoint error, got {other:?}"),
        }
        let protocol = OttoProtocol::ChangingDeformation { q_h: 1.0, q_c: 0.5 };
        assert!(OttoSpec::new(protocol, base, h, c).is_ok());
    }

    #[test]
    fn two_level_desk_case() {
        let base = MorseModel::new(8.0, 2.0, 1.0).unwrap();
        let (h, c) = baths(10.0, 2.0);
        let protocol = OttoProtocol::ChangingWidth {
            alpha_h: 2.0,
            alpha_c: 1.0,
        };
        let spec = OttoSpec::new(protocol, base, h, c).unwrap();
        let r = otto_cycle_sum(&spec).unwrap();
        let p_b = 1.0 / (1.0 + (-0.4f64).exp());
        let p_d = 1.0 / (1.0 + (-1.5f64).exp());
        let hand = ((-4.5 + 6.125) - (-0.5 + 3.125)) * (p_b - p_d);
        assert!((r.work - hand).abs() <= 1e-12);
        assert!((r.work - (r.q_hot + r.q_cold)).abs() <= 1e-12);
        assert!(r.diagnostics.truncated_mass > 0.0);
    }

    #[test]
    fn collapsed_protocols_do_no_work() {
        let base = MorseModel::new(30.0, 1.0, 0.9).unwrap();
        let (h, c) = baths(10.0, 2.0);
        for protocol in [
            OttoProtocol::ChangingWidth {
                alpha_h: 1.3,
                alpha_c: 1.3,
            },
            OttoProtocol::ChangingDeformation { q_h: 0.9, q_c: 0.9 },
            OttoProtocol::ChangingDissociation { d_h: 30.0, d_c: 30.0 },
        ] {
            let r = otto_cycle_sum(&OttoSpec::new(protocol, base, h, c).unwrap()).unwrap();
            assert_eq!(r.work, 0.0);
            assert!((r.q_hot + r.q_cold).abs() <= 1e-12 * r.q_hot.abs());
            assert_eq!(r.regime, Regime::Degenerate);
        }
        let (h, c) = baths(4.0, 4.0);
        let protocol = OttoProtocol::ChangingWidth {
            alpha_h: 1.3,
            alpha_c: 1.3,
        };
        let r = otto_cycle_sum(&OttoSpec::new(protocol, base, h, c).unwrap()).unwrap();
        assert_eq!((r.q_hot, r.q_cold, r.work), (0.0, 0.0, 0.0));
    }
}
