//! Canonical ensemble of one model at one temperature.
//!
//! The level sum is authoritative. The closed forms replace the sum over `n`
//! by an integral over `[0, lambda q - 1/2]` and are accurate only for deep
//! wells at temperatures well above the level spacing.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectrum::{bound_spectrum, positive, MorseModel, EXP_LIMIT};
use crate::specfun::{erfc_formal, erfi, erfi_scaled, principal_sqrt, ComplexValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment {
    t: f64,
    k_b: f64,
}

impl ThermalEnvironment {
    pub fn new(t: f64, k_b: f64) -> Result<Self> {
        positive("T", t)?;
        positive("kB", k_b)?;
        Ok(ThermalEnvironment { t, k_b })
    }

    /// Bath at temperature `t` with `k_B = 1`.
    pub fn at(t: f64) -> Result<Self> {
        Self::new(t, 1.0)
    }

    pub fn temperature(&self) -> f64 {
        self.t
    }
    pub fn k_b(&self) -> f64 {
        self.k_b
    }
    pub fn beta(&self) -> f64 {
        1.0 / (self.k_b * self.t)
    }
}

/// Boltzmann distribution over a finite set of levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub beta: f64,
    /// `ln Z`; kept in log form so deep wells at low temperature stay finite.
    pub log_partition: f64,
    pub occupations: Vec<f64>,
    pub internal_energy: f64,
    /// Entropy in units of `k_B`.
    pub entropy: f64,
}

impl ThermalState {
    /// Distribution over `levels` (ascending) at inverse temperature `beta`.
    pub fn from_levels(levels: &[f64], beta: f64) -> Self {
        let e0 = levels[0];
        let reduced: Vec<f64> = levels.iter().map(|&e| -beta * (e - e0)).collect();
        let sum: f64 = reduced.iter().map(|r| r.exp()).sum();
        let ln_sum = sum.ln();
        let mut occupations = Vec::with_capacity(levels.len());
        let mut internal_energy = 0.0;
        let mut entropy = 0.0;
        for (&e, &r) in levels.iter().zip(&reduced) {
            let ln_p = r - ln_sum;
            let p = ln_p.exp();
            occupations.push(p);
            internal_energy += p * e;
            entropy -= p * ln_p;
        }
        ThermalState {
            beta,
            log_partition: -beta * e0 + ln_sum,
            occupations,
            internal_energy,
            entropy,
        }
    }

    /// `Z`, which overflows to infinity once `ln Z` exceeds the double range.
    pub fn partition(&self) -> f64 {
        self.log_partition.exp()
    }
}

/// `a = sqrt(beta xi^2 p)` and `u = (lambda q - 1/2) a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedVariables {
    pub a: f64,
    pub u: f64,
}

impl ReducedVariables {
    pub fn new(model: &MorseModel, env: &ThermalEnvironment) -> Self {
        let a = (env.beta() * model.energy_scale()).sqrt();
        ReducedVariables {
            a,
            u: (model.kappa() - 0.5) * a,
        }
    }
}

/// `sum_n exp(-beta E_n)` over the bound levels.
pub fn partition_sum(model: &MorseModel, env: &ThermalEnvironment) -> Result<f64> {
    let spectrum = bound_spectrum(model);
    let beta = env.beta();
    let state = ThermalState::from_levels(spectrum.levels(), beta);
    if state.log_partition > EXP_LIMIT {
        return Err(Error::range(
            "beta*|E_0|",
            beta * spectrum.ground().abs(),
            EXP_LIMIT,
        ));
    }
    Ok(state.partition())
}

/// Occupations, internal energy and entropy from the level sum.
pub fn thermal_state(model: &MorseModel, env: &ThermalEnvironment) -> ThermalState {
    ThermalState::from_levels(bound_spectrum(model).levels(), env.beta())
}

/// Continuum partition value `sqrt(pi) erfi(u) / (2a)`.
pub fn partition_closed(model: &MorseModel, env: &ThermalEnvironment) -> Result<f64> {
    let r = ReducedVariables::new(model, env);
    Ok(PI.sqrt() * erfi(r.u)? / (2.0 * r.a))
}

/// Logarithm of [`partition_closed`], finite for every valid input.
pub fn ln_partition_closed(model: &MorseModel, env: &ThermalEnvironment) -> Result<f64> {
    let r = ReducedVariables::new(model, env);
    Ok((PI.sqrt() / (2.0 * r.a)).ln() + r.u * r.u + erfi_scaled(r.u)?.ln())
}

/// Complex value of `sqrt(pi) erfc(g) / (2 sqrt(beta xi^2 (-p)))` with
/// `g = (1 - 2 lambda q) sqrt(beta xi^2 (-p)) / 2` on the principal branch.
///
/// Its real part is [`partition_closed`]; the imaginary part is `-sqrt(pi)/(2a)`.
pub fn partition_formal(model: &MorseModel, env: &ThermalEnvironment) -> Result<ComplexValue> {
    let root = principal_sqrt(-env.beta() * model.energy_scale());
    let gamma1 = root * (0.5 * (1.0 - 2.0 * model.kappa()));
    Ok(erfc_formal(gamma1)? * PI.sqrt() / (root * 2.0))
}

/// Continuum internal energy `-d ln Z / d beta`.
pub fn internal_energy_closed(model: &MorseModel, env: &ThermalEnvironment) -> Result<f64> {
    let r = ReducedVariables::new(model, env);
    Ok((0.5 - r.u / (PI.sqrt() * erfi_scaled(r.u)?)) / env.beta())
}

/// Continuum entropy `ln Z + 1/2 - u exp(u^2) / (sqrt(pi) erfi(u))` in units of `k_B`.
pub fn entropy_closed(model: &MorseModel, env: &ThermalEnvironment) -> Result<f64> {
    let r = ReducedVariables::new(model, env);
    let ln_z = ln_partition_closed(model, env)?;
    Ok(ln_z + 0.5 - r.u / (PI.sqrt() * erfi_scaled(r.u)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> MorseModel {
        MorseModel::new(8.0, 2.0, 1.0).unwrap()
    }

    fn unit_bath() -> ThermalEnvironment {
        ThermalEnvironment::at(1.0).unwrap()
    }

    #[test]
    fn partition_sum_examples() {
        let z = partition_sum(&two_level(), &unit_bath()).unwrap();
        let hand = 4.5f64.exp() + 0.5f64.exp();
        assert!((z - hand).abs() < 1e-12 * hand);
        assert!((hand - 91.6661).abs() < 1e-3);
        let hot = ThermalEnvironment::at(1e12).unwrap();
        assert!((partition_sum(&two_level(), &hot).unwrap() - 2.0).abs() < 1e-9);
        let cold = ThermalEnvironment::at(1e-3).unwrap();
        assert!(partition_sum(&two_level(), &cold).unwrap_err().is_range());
        let s = thermal_state(&two_level(), &cold);
        assert!((s.log_partition - 4500.0).abs() < 1e-9);
    }

    #[test]
    fn thermal_state_examples() {
        let s = thermal_state(&two_level(), &unit_bath());
        let p0 = 1.0 / (1.0 + (-4.0f64).exp());
        assert!((s.occupations[0] - p0).abs() < 1e-15);
        assert!((s.occupations[0] - 0.98201).abs() < 1e-5);
        assert!((s.occupations[1] - 0.01799).abs() < 1e-5);
        let u = p0 * -4.5 + (1.0 - p0) * -0.5;
        assert!((s.internal_energy - u).abs() < 1e-14);
        assert!((s.internal_energy + 4.4280).abs() < 1e-4);
        let frozen = thermal_state(&two_level(), &ThermalEnvironment::at(1e-3).unwrap());
        assert_eq!(frozen.occupations[0], 1.0);
        assert!(frozen.entropy.abs() < 1e-300);
    }

    #[test]
    fn closed_partition_examples() {
        let m = two_level();
        let env = unit_bath();
        let r = ReducedVariables::new(&m, &env);
        assert!((r.a - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.u - 1.5 * 2f64.sqrt()).abs() < 1e-15);
        // erfi(2.1213203435596424) from its Maclaurin series
        let mut oracle = 0.0;
        let mut fact = 1.0;
        for k in 0..80 {
            if k > 0 {
                fact *= k as f64;
            }
            oracle += r.u.powi(2 * k + 1) / (fact * (2 * k + 1) as f64);
        }
        oracle *= 2.0 / PI.sqrt();
        let expected = PI.sqrt() * oracle / (2.0 * r.a);
        let z = partition_closed(&m, &env).unwrap();
        assert!((z - expected).abs() < 1e-9 * expected);
        assert!((ln_partition_closed(&m, &env).unwrap() - z.ln()).abs() < 1e-12);
    }

    #[test]
    fn closed_partition_high_temperature_limit() {
        let m = two_level();
        let env = ThermalEnvironment::at(1e10).unwrap();
        let z = partition_closed(&m, &env).unwrap();
        assert!((z - 1.5).abs() < 1e-8);
    }

    #[test]
    fn formal_partition_splits_into_closed_value_and_residue() {
        let m = MorseModel::new(20.0, 1.0, 0.9).unwrap();
        let env = ThermalEnvironment::at(3.0).unwrap();
        let f = partition_formal(&m, &env).unwrap();
        let r = ReducedVariables::new(&m, &env);
        assert!((f.re - partition_closed(&m, &env).unwrap()).abs() < 1e-12 * f.re);
        assert!((f.im + PI.sqrt() / (2.0 * r.a)).abs() < 1e-12);
    }

    #[test]
    fn closed_entropy_is_ln_z_plus_beta_u() {
        let m = MorseModel::new(50.0, 0.5, 0.8).unwrap();
        let env = ThermalEnvironment::at(4.0).unwrap();
        let beta = env.beta();
        let h = 1e-5 * beta;
        let ln_z = |b: f64| ln_partition_closed(&m, &ThermalEnvironment::at(1.0 / b).unwrap()).unwrap();
        let u = -(ln_z(beta + h) - ln_z(beta - h)) / (2.0 * h);
        let expected = ln_z(beta) + beta * u;
        let s = entropy_closed(&m, &env).unwrap();
        assert!((s - expected).abs() < 1e-6 * expected.abs());
        let u_closed = internal_energy_closed(&m, &env).unwrap();
        assert!((u_closed - u).abs() < 1e-6 * u.abs());
    }

    #[test]
    fn closed_entropy_survives_large_u() {
        // u = 20 at a = 1: kappa = 20.5, xi^2 p beta = 1
        let m = MorseModel::new(420.25 * 0.5, 1.0, 1.0).unwrap();
        let env = ThermalEnvironment::at(0.5).unwrap();
        let r = ReducedVariables::new(&m, &env);
        assert!((r.u - 20.0).abs() < 1e-12);
        let s = entropy_closed(&m, &env).unwrap();
        let s_scaled = 1.0 / (20.0 * PI.sqrt()) * (1.0 + 1.0 / 800.0 + 3.0 / 640000.0 + 15.0 / 512e6);
        let expected = (PI.sqrt() / 2.0).ln() + 400.0 + s_scaled.ln() + 0.5 - 20.0 / (PI.sqrt() * s_scaled);
        assert!(s.is_finite());
        assert!((s - expected).abs() < 1e-6);
    }

    #[test]
    fn dense_regime_agreement() {
        let m = MorseModel::new(200.0, 0.1, 1.0).unwrap();
        let env = ThermalEnvironment::at(50.0).unwrap();
        let z_sum = partition_sum(&m, &env).unwrap();
        let z_closed = partition_closed(&m, &env).unwrap();
        assert!((z_closed - z_sum).abs() / z_sum <= 0.05);
        let s_sum = thermal_state(&m, &env).entropy;
        let s_closed = entropy_closed(&m, &env).unwrap();
        assert!((s_closed - s_sum).abs() / s_sum <= 0.05);
    }

    #[test]
    fn environment_validation() {
        assert!(ThermalEnvironment::new(0.0, 1.0).is_err());
        assert!(ThermalEnvironment::new(1.0, -1.0).is_err());
        assert_eq!(ThermalEnvironment::new(2.0, 0.5).unwrap().beta(), 1.0);
    }
}
