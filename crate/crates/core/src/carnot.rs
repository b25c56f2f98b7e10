//! Quantum Carnot cycle between two baths.
//!
//! The working medium sits in the hot model at `T_h` (point B) and in the
//! cold model at `T_c` (point D). Adiabats conserve entropy, so the whole
//! cycle is fixed by `dS = S(B) - S(D)`:
//! `Q_h = k T_h dS`, `Q_c = -k T_c dS`, `W = k (T_h - T_c) dS`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cycle::{CycleResult, Diagnostics, Regime};
use crate::error::{Error, Result};
use crate::specfun::erfi_scaled;
use crate::spectrum::{bound_spectrum, MorseModel};
use crate::thermo::{entropy_closed, thermal_state, ReducedVariables, ThermalEnvironment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarnotMode {
    /// `D_e` shared by both models; only `alpha` changes.
    #[default]
    Paper,
    /// `D_e` scaled by `T_c/T_h` together with `alpha^2`, keeping `lambda` fixed.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarnotSpec {
    pub hot: ThermalEnvironment,
    pub cold: ThermalEnvironment,
    pub model_hot: MorseModel,
    pub model_cold: MorseModel,
    pub mode: CarnotMode,
}

fn check_baths(hot: &ThermalEnvironment, cold: &ThermalEnvironment) -> Result<()> {
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
    Ok(())
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

impl CarnotSpec {
    /// Validate a pair of models against the rules of `mode`.
    pub fn new(
        model_hot: MorseModel,
        model_cold: MorseModel,
        hot: ThermalEnvironment,
        cold: ThermalEnvironment,
        mode: CarnotMode,
    ) -> Result<Self> {
        check_baths(&hot, &cold)?;
        if model_hot.q() != model_cold.q() {
            return Err(Error::Incompatible("hot and cold models must share q".into()));
        }
        if model_hot.units() != model_cold.units() {
            return Err(Error::Incompatible(
                "hot and cold models must share hbar, mu and r_e".into(),
            ));
        }
        let ratio = cold.temperature() / hot.temperature();
        match mode {
            CarnotMode::Paper if model_hot.d_e() != model_cold.d_e() => {
                return Err(Error::Incompatible(
                    "paper mode keeps D_e fixed across the adiabats".into(),
                ))
            }
            CarnotMode::Strict if relative_gap(model_cold.d_e(), model_hot.d_e() * ratio) > 1e-12 => {
                return Err(Error::Incompatible(
                    "strict mode requires D_e,cold = D_e,hot * T_c / T_h".into(),
                ))
            }
            _ => {}
        }
        Ok(CarnotSpec {
            hot,
            cold,
            model_hot,
            model_cold,
            mode,
        })
    }

    /// Fixed `D_e`; the hot and cold models use `alpha_h` and `alpha_c`.
    pub fn paper(
        base: &MorseModel,
        alpha_h: f64,
        alpha_c: f64,
        hot: ThermalEnvironment,
        cold: ThermalEnvironment,
    ) -> Result<Self> {
        let model_hot = base.with_alpha(alpha_h).map_err(|e| e.named("alpha_h"))?;
        let model_cold = base.with_alpha(alpha_c).map_err(|e| e.named("alpha_c"))?;
        Self::new(model_hot, model_cold, hot, cold, CarnotMode::Paper)
    }

    /// Hot model `base` at `alpha_h`; the cold model follows from the
    /// reversibility condition with `D_e` co-scaled.
    pub fn strict(
        base: &MorseModel,
        alpha_h: f64,
        hot: ThermalEnvironment,
        cold: ThermalEnvironment,
    ) -> Result<Self> {
        check_baths(&hot, &cold)?;
        let ratio = cold.temperature() / hot.temperature();
        let model_hot = base.with_alpha(alpha_h).map_err(|e| e.named("alpha_h"))?;
        let alpha_c = reversibility_alpha(alpha_h, hot.temperature(), cold.temperature());
        let model_cold = MorseModel::with_units(base.d_e() * ratio, alpha_c, base.q(), &base.units())
            .map_err(|e| e.named("alpha_c"))?;
        Self::new(model_hot, model_cold, hot, cold, CarnotMode::Strict)
    }
}

/// `alpha_C = alpha_B sqrt(T_c / T_h)`.
pub fn reversibility_alpha(alpha_b: f64, t_h: f64, t_c: f64) -> f64 {
    alpha_b * (t_c / t_h).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReversibilityReport {
    /// Largest relative deviation of `E_n(C) - E_m(C)` from `ratio (E_n(B) - E_m(B))`.
    pub max_deviation: f64,
    pub pairs: usize,
    pub passed: bool,
}

/// Compare level gaps of the two models over every pair of common levels.
pub fn verify_reversibility(
    model_b: &MorseModel,
    model_c: &MorseModel,
    ratio: f64,
    tol: f64,
) -> Result<ReversibilityReport> {
    if model_b.q() != model_c.q() {
        return Err(Error::Incompatible("models must share q".into()));
    }
    let b = bound_spectrum(model_b);
    let c = bound_spectrum(model_c);
    let common = b.len().min(c.len());
    if common < 2 {
        return Err(Error::Incompatible(format!(
            "only {common} common bound level(s); at least two are needed to form a gap"
        )));
    }
    let (eb, ec) = (b.levels(), c.levels());
    let mut max_deviation: f64 = 0.0;
    let mut pairs = 0;
    for n in 0..common {
        for m in 0..n {
            let expected = ratio * (eb[n] - eb[m]);
            let actual = ec[n] - ec[m];
            max_deviation = max_deviation.max((actual - expected).abs() / expected.abs());
            pairs += 1;
        }
    }
    Ok(ReversibilityReport {
        max_deviation,
        pairs,
        passed: max_deviation <= tol,
    })
}

fn degenerate_entropy(ds: f64, s_hot: f64, s_cold: f64) -> bool {
    ds.abs() <= 1e-12 * s_hot.abs().max(s_cold.abs()).max(1.0)
}

fn assemble(spec: &CarnotSpec, ds: f64, work: f64, degenerate: bool, imag_residue: f64) -> CycleResult {
    let k = spec.hot.k_b();
    let q_hot = k * spec.hot.temperature() * ds;
    let q_cold = -k * spec.cold.temperature() * ds;
    let mut result = CycleResult::with_work(
        q_hot,
        q_cold,
        work,
        Diagnostics {
            truncated_mass: 0.0,
            imag_residue,
        },
    );
    if degenerate {
        result.regime = Regime::Degenerate;
    }
    result
}

/// Carnot cycle from level-sum entropies.
pub fn carnot_cycle_sum(spec: &CarnotSpec) -> CycleResult {
    let s_b = thermal_state(&spec.model_hot, &spec.hot).entropy;
    let s_d = thermal_state(&spec.model_cold, &spec.cold).entropy;
    let ds = s_b - s_d;
    let work = spec.hot.k_b() * (spec.hot.temperature() - spec.cold.temperature()) * ds;
    assemble(spec, ds, work, degenerate_entropy(ds, s_b, s_d), 0.0)
}

struct ClosedWork {
    real: f64,
    residue: f64,
}

/// Work from the erfc/gamma expression, reduced to the real axis term by term.
///
/// With `erfc(g_1) = exp(u^2) D`, `D = exp(-u^2) + i erfi_scaled(u)`, the
/// formal value is `k (T_h - T_c) [L_h - L_c]` where
/// `L = u^2 + ln D - ln(i a) - i u / (sqrt(pi) D)`. The real-domain reduction
/// drops the `exp(-u^2)` term of `D`.
fn closed_work(spec: &CarnotSpec) -> Result<ClosedWork> {
    let side = |model: &MorseModel, env: &ThermalEnvironment, name: &'static str| -> Result<(f64, Complex64)> {
        let r = ReducedVariables::new(model, env);
        let s = erfi_scaled(r.u).map_err(|e| e.named(name))?;
        let real = r.u * r.u + s.ln() - r.a.ln() - r.u / (PI.sqrt() * s);
        let d = Complex64::new((-r.u * r.u).exp(), s);
        let ia = Complex64::new(0.0, r.a);
        let formal = r.u * r.u + d.ln() - ia.ln() - Complex64::new(0.0, r.u) / (d * PI.sqrt());
        Ok((real, formal))
    };
    let (real_h, formal_h) = side(&spec.model_hot, &spec.hot, "u_h")?;
    let (real_c, formal_c) = side(&spec.model_cold, &spec.cold, "u_c")?;
    let prefactor = spec.hot.k_b() * (spec.hot.temperature() - spec.cold.temperature());
    Ok(ClosedWork {
        real: prefactor * (real_h - real_c),
        residue: (prefactor * (formal_h - formal_c)).im.abs(),
    })
}

/// Closed-form Carnot work.
pub fn carnot_work_closed(spec: &CarnotSpec) -> Result<f64> {
    Ok(closed_work(spec)?.real)
}

/// Carnot cycle from closed-form entropies. The work is evaluated from the
/// combined expression, independently of the heats.
pub fn carnot_cycle_closed(spec: &CarnotSpec) -> Result<CycleResult> {
    let s_b = entropy_closed(&spec.model_hot, &spec.hot).map_err(|e| e.named("u_h"))?;
    let s_d = entropy_closed(&spec.model_cold, &spec.cold).map_err(|e| e.named("u_c"))?;
    let ds = s_b - s_d;
    let work = closed_work(spec)?;
    Ok(assemble(spec, ds, work.real, degenerate_entropy(ds, s_b, s_d), work.residue))
}

/// `1 - T_c / T_h`.
pub fn carnot_efficiency(spec: &CarnotSpec) -> f64 {
    1.0 - spec.cold.temperature() / spec.hot.temperature()
}
