//! Oracle suites behind the `verify` command.
//!
//! Hard checks are invariants the library guarantees; one failing makes the
//! run fail. Soft checks measure how far the continuum closed forms drift from
//! the level sums, or test qualitative trends the model is not guaranteed to
//! show. They are reported and never fatal.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::carnot::{
    carnot_cycle_closed, carnot_cycle_sum, carnot_efficiency, reversibility_alpha,
    verify_reversibility, CarnotSpec,
};
use crate::error::{Error, Result};
use crate::otto::{
    lambda_set_from, otto_closed, otto_cycle_sum, otto_endpoints, ClosedInputs, LambdaSet,
    OttoProtocol, OttoSpec,
};
use crate::specfun::{erf, erfc, erfc_formal, erfi, erfi_scaled, principal_sqrt};
use crate::spectrum::{
    bound_spectrum, fd_schrodinger_oracle, potential_minimum, MorseModel, Units,
};
use crate::sweep::presets::{preset, Figure, Preset};
use crate::sweep::{evaluate_point, Method, PointParams};
use crate::thermo::{
    entropy_closed, partition_closed, partition_sum, thermal_state, ThermalEnvironment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Specfun,
    Spectrum,
    Thermo,
    Cycles,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Specfun, Level::Spectrum, Level::Thermo, Level::Cycles];

    pub fn name(&self) -> &'static str {
        match self {
            Level::Specfun => "specfun",
            Level::Spectrum => "spectrum",
            Level::Thermo => "thermo",
            Level::Cycles => "cycles",
        }
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Level::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Config {
                path: "level".into(),
                message: format!("unknown level `{s}`; expected specfun, spectrum, thermo or cycles"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Hard,
    Soft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub level: Level,
    pub name: String,
    pub severity: Severity,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// True when every hard check passed.
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| c.severity == Severity::Hard && !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match (c.passed, c.severity) {
                (true, _) => "PASS",
                (false, Severity::Hard) => "FAIL",
                (false, Severity::Soft) => "WARN",
            };
            let kind = match c.severity {
                Severity::Hard => "hard",
                Severity::Soft => "soft",
            };
            writeln!(f, "{status} [{}/{kind}] {}: {}", c.level.name(), c.name, c.detail)?;
        }
        Ok(())
    }
}

struct Suite {
    level: Level,
    checks: Vec<Check>,
}

impl Suite {
    fn new(level: Level) -> Self {
        Suite {
            level,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, severity: Severity, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            level: self.level,
            name: name.to_string(),
            severity,
            passed,
            detail,
        });
    }

    fn hard(&mut self, name: &str, passed: bool, detail: String) {
        self.push(Severity::Hard, name, passed, detail);
    }

    fn soft(&mut self, name: &str, passed: bool, detail: String) {
        self.push(Severity::Soft, name, passed, detail);
    }

    /// Record an evaluation error as a failed check.
    fn fallible(&mut self, severity: Severity, name: &str, run: impl FnOnce() -> Result<(bool, String)>) {
        match run() {
            Ok((passed, detail)) => self.push(severity, name, passed, detail),
            Err(e) => self.push(severity, name, false, format!("evaluation failed: {e}")),
        }
    }
}

/// Run one level, or every level when `level` is `None`.
pub fn verify(level: Option<Level>) -> Report {
    let levels: Vec<Level> = match level {
        Some(l) => vec![l],
        None => Level::ALL.to_vec(),
    };
    let mut report = Report::default();
    for l in levels {
        let checks = match l {
            Level::Specfun => specfun_suite(),
            Level::Spectrum => spectrum_suite(),
            Level::Thermo => thermo_suite(),
            Level::Cycles => cycles_suite(),
        };
        report.checks.extend(checks);
    }
    report
}

// ---------------------------------------------------------------- specfun

/// `erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^k x^(2k+1) / (2k+1)!!`; every term is
/// positive, so the sum has no cancellation for any `x`.
pub fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    while term.abs() > 1e-17 * sum.abs() {
        k += 1.0;
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// `erfi(x) = 2/sqrt(pi) sum x^(2k+1) / (k! (2k+1))`, summed until the terms
/// stop contributing.
pub fn erfi_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= x2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}

fn specfun_suite() -> Vec<Check> {
    let mut s = Suite::new(Level::Specfun);
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let xs: Vec<f64> = (0..1000).map(|_| rng.gen_range(-6.0..6.0)).collect();

    s.fallible(Severity::Hard, "erf_series_oracle", || {
        let mut worst: f64 = 0.0;
        for &x in &xs {
            worst = worst.max((erf(x)? - erf_series(x)).abs());
        }
        Ok((worst <= 1e-12, format!("max |erf - series| = {worst:.2e} on 1000 points in [-6, 6] (tol 1e-12)")))
    });

    s.fallible(Severity::Hard, "erfc_complement", || {
        let mut worst: f64 = 0.0;
        for &x in &xs {
            worst = worst.max((erf(x)? + erfc(x)? - 1.0).abs());
        }
        Ok((worst <= 1e-14, format!("max |erf + erfc - 1| = {worst:.2e} (tol 1e-14)")))
    });

    s.fallible(Severity::Hard, "erfc_reflection", || {
        let mut worst: f64 = 0.0;
        for &x in &xs {
            worst = worst.max((erfc(x)? + erfc(-x)? - 2.0).abs());
        }
        Ok((worst <= 1e-14, format!("max |erfc(x) + erfc(-x) - 2| = {worst:.2e} (tol 1e-14)")))
    });

    s.fallible(Severity::Hard, "erfi_series_oracle", || {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let x = -10.0 + 20.0 * (i as f64 + 0.5) / 1000.0;
            let oracle = erfi_series(x);
            worst = worst.max(((erfi(x)? - oracle) / oracle).abs());
        }
        Ok((worst <= 1e-10, format!("max relative error {worst:.2e} on [-10, 10], across the series/asymptotic crossover (tol 1e-10)")))
    });

    s.fallible(Severity::Hard, "erfi_scaled_consistency", || {
        let mut worst: f64 = 0.0;
        for i in 1..=1000 {
            let x = 26.0 * i as f64 / 1000.0;
            let direct = erfi(x)?;
            worst = worst.max(((erfi_scaled(x)? * (x * x).exp() - direct) / direct).abs());
        }
        Ok((worst <= 1e-9, format!("max relative gap {worst:.2e} between erfi_scaled*exp(x^2) and erfi on (0, 26] (tol 1e-9)")))
    });

    s.fallible(Severity::Hard, "erfc_formal_axes", || {
        let mut worst: f64 = 0.0;
        for &x in xs.iter().take(200) {
            let z = erfc_formal(Complex64::new(x, 0.0))?;
            worst = worst.max((z - erfc(x)?).norm());
            let y = x.abs().min(5.0);
            let z = erfc_formal(Complex64::new(0.0, y))?;
            worst = worst.max((z - Complex64::new(1.0, -erfi_series(y))).norm() / erfi_series(y).max(1.0));
        }
        Ok((worst <= 1e-12, format!("max deviation {worst:.2e} on the real and imaginary axes (tol 1e-12)")))
    });

    s.checks
}

// ---------------------------------------------------------------- spectrum

/// Domain and grid on which the finite-difference oracle resolves every
/// bound level of `model`: the left wall sits where the repulsive term is
/// about `e^8` times the well depth, the right wall thirty decay lengths of
/// the least bound level past the minimum.
pub fn fd_setup(model: &MorseModel) -> (f64, f64, usize) {
    let (x0, _) = potential_minimum(model);
    let top = *bound_spectrum(model).levels().last().expect("at least one level");
    let decay = (model.p() / top.abs()).sqrt();
    let x_min = x0 - 4.0 / model.xi();
    let x_max = x0 + 30.0 * decay;
    let points = (((x_max - x_min) / 0.003).ceil() as usize).max(4000);
    (x_min, x_max, points)
}

/// Models used by the spectrum oracle, in unit `hbar = mu = r_e = 1`.
pub const FD_MODELS: [(f64, f64, f64); 6] = [
    (8.0, 2.0, 1.0),
    (8.0, 2.0, 0.75),
    (8.0, 2.0, 0.5),
    (32.0, 2.0, 0.5),
    (32.0, 2.0, 0.75),
    (12.5, 1.0, 1.0),
];

/// Label plus (max gap, negative FD eigenvalues, bound levels).
type FdOutcome = (String, Result<(f64, usize, usize)>);

fn spectrum_suite() -> Vec<Check> {
    let mut s = Suite::new(Level::Spectrum);
    let results: Vec<FdOutcome> = FD_MODELS
        .par_iter()
        .map(|&(d, a, q)| {
            let label = format!("D_e={d}, alpha={a}, q={q}");
            let run = || -> Result<(f64, usize, usize)> {
                let model = MorseModel::new(d, a, q)?;
                let (lo, hi, n) = fd_setup(&model);
                let fd = fd_schrodinger_oracle(&model, lo, hi, n)?;
                let exact = bound_spectrum(&model);
                let worst = exact
                    .levels()
                    .iter()
                    .zip(&fd.energies)
                    .map(|(e, f)| (e - f).abs())
                    .fold(0.0, f64::max);
                Ok((worst, fd.energies.len(), exact.len()))
            };
            (label, run())
        })
        .collect();
    for (label, r) in results {
        s.fallible(Severity::Hard, &format!("fd_oracle[{label}]"), || {
            let (worst, n_fd, n_exact) = r?;
            Ok((
                worst <= 1e-3 && n_fd == n_exact,
                format!("max |E_analytic - E_fd| = {worst:.2e} (tol 1e-3); {n_fd} negative FD eigenvalues vs n_max+1 = {n_exact}"),
            ))
        });
    }

    s.fallible(Severity::Hard, "spacing_identity", || {
        let m = MorseModel::new(200.0, 0.5, 1.0)?;
        let e = bound_spectrum(&m);
        let scale = m.xi() * m.xi() * m.p();
        let mut worst: f64 = 0.0;
        for n in 0..e.len() - 1 {
            let want = scale * (2.0 * m.lambda() - 2.0 * n as f64 - 2.0);
            worst = worst.max(((e.levels()[n + 1] - e.levels()[n]) - want).abs() / want.abs());
        }
        Ok((worst <= 1e-10, format!("E_(n+1) - E_n = xi^2 p (2 lambda - 2n - 2) to {worst:.2e} over {} levels", e.len())))
    });
    s.checks
}

// ---------------------------------------------------------------- thermo

fn thermo_suite() -> Vec<Check> {
    let mut s = Suite::new(Level::Thermo);
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut worst_norm: f64 = 0.0;
    let mut worst_gibbs: f64 = 0.0;
    let mut draws = 0;
    while draws < 200 {
        let d = rng.gen_range(1.0..200.0);
        let a = rng.gen_range(0.05..3.0);
        let q = rng.gen_range(0.1..1.0);
        let t = rng.gen_range(0.1..50.0);
        let Ok(m) = MorseModel::new(d, a, q) else { continue };
        let env = ThermalEnvironment::at(t).expect("positive temperature");
        let st = thermal_state(&m, &env);
        worst_norm = worst_norm.max((st.occupations.iter().sum::<f64>() - 1.0).abs());
        let gibbs = st.log_partition + st.beta * st.internal_energy;
        worst_gibbs = worst_gibbs.max((st.entropy - gibbs).abs() / st.entropy.abs().max(1.0));
        draws += 1;
    }
    s.hard("normalization", worst_norm <= 1e-12, format!("max |sum P_n - 1| = {worst_norm:.2e} over 200 draws (tol 1e-12)"));
    s.hard("gibbs_identity", worst_gibbs <= 1e-10, format!("max |S - ln Z - beta U| = {worst_gibbs:.2e} (tol 1e-10)"));

    s.fallible(Severity::Hard, "closed_entropy_derivative", || {
        let m = MorseModel::new(60.0, 0.4, 0.9)?;
        let env = ThermalEnvironment::at(3.0)?;
        let beta = env.beta();
        let h = 1e-5 * beta;
        let ln_z = |b: f64| -> Result<f64> { Ok(partition_closed(&m, &ThermalEnvironment::at(1.0 / b)?)?.ln()) };
        let u = -(ln_z(beta + h)? - ln_z(beta - h)?) / (2.0 * h);
        let want = ln_z(beta)? + beta * u;
        let got = entropy_closed(&m, &env)?;
        let gap = ((got - want) / want).abs();
        Ok((gap <= 1e-6, format!("closed S vs ln Z + beta U by finite difference: relative gap {gap:.2e} (tol 1e-6)")))
    });

    s.fallible(Severity::Hard, "dense_regime_partition", || {
        let m = MorseModel::new(200.0, 0.1, 1.0)?;
        let env = ThermalEnvironment::at(50.0)?;
        let (c, z) = (partition_closed(&m, &env)?, partition_sum(&m, &env)?);
        let gap = ((c - z) / z).abs();
        Ok((gap <= 0.05, format!("Z closed {c:.6} vs sum {z:.6}: relative gap {gap:.3e} (tol 5%)")))
    });

    s.fallible(Severity::Hard, "dense_regime_entropy", || {
        let m = MorseModel::new(200.0, 0.1, 1.0)?;
        let env = ThermalEnvironment::at(50.0)?;
        let (c, st) = (entropy_closed(&m, &env)?, thermal_state(&m, &env));
        let gap = ((c - st.entropy) / st.entropy).abs();
        Ok((gap <= 0.05, format!("S closed {c:.6} vs sum {:.6}: relative gap {gap:.3e} (tol 5%)", st.entropy)))
    });

    s.fallible(Severity::Soft, "shallow_well_partition", || {
        let m = MorseModel::new(8.0, 2.0, 1.0)?;
        let env = ThermalEnvironment::at(1.0)?;
        let (c, z) = (partition_closed(&m, &env)?, partition_sum(&m, &env)?);
        let gap = ((c - z) / z).abs();
        Ok((gap <= 0.05, format!("two-level model: Z closed {c:.4} vs sum {z:.4}, relative gap {gap:.3e}; the continuum form does not apply here")))
    });
    s.checks
}

// ---------------------------------------------------------------- cycles

/// Independent transcription of the Otto closed-form parameters,
/// written from the symbols `lambda`, `q`, `xi`, `beta`, `p` of each stroke
/// rather than from the combined `kappa` inputs.
pub fn lambda_set_transcribed(
    hot: &MorseModel,
    cold: &MorseModel,
    beta_h: f64,
    beta_c: f64,
) -> Result<LambdaSet> {
    type C = Complex64;
    let c = |x: f64| C::new(x, 0.0);
    let p = hot.p();
    let (xi_h, xi_c) = (hot.xi(), cold.xi());
    let (lq_h, lq_c) = (hot.lambda() * hot.q(), cold.lambda() * cold.q());
    let sqrt_pi = PI.sqrt();
    let sqrt_p = principal_sqrt(p);
    let diff2 = (lq_c - lq_h).powi(2);

    let root_h = principal_sqrt(beta_h * xi_h.powi(2) * (-p));
    let root_c = principal_sqrt(beta_c * xi_c.powi(2) * (-p));
    let gamma1_h = c(0.5 * (1.0 - 2.0 * lq_h)) * root_h;
    let gamma1_c = c(0.5 * (1.0 - 2.0 * lq_c)) * root_c;
    let erfc_gh = erfc_formal(gamma1_h)?;
    let erfc_gc = erfc_formal(gamma1_c)?;

    let l1c = 0.25 * beta_c * xi_c.powi(2) * p * (1.0 - 2.0 * lq_c).powi(2);
    let l1h = 0.25 * beta_h * xi_h.powi(2) * p * (1.0 - 2.0 * lq_h).powi(2);
    let l2ch = xi_h.powi(2) * p * (2.0 * (lq_c - 2.0 * lq_h) + 1.0);
    let l2hc = xi_c.powi(2) * p * (2.0 * (lq_h - 2.0 * lq_c) + 1.0);
    let l3 = 2.0 * beta_h * xi_h.powi(2) * p * diff2 + 1.0;
    let l4 = xi_c.powi(2) * (2.0 * p * diff2 - 1.0 / (beta_h * xi_h.powi(2)));
    let l5 = 2.0 * beta_c * xi_c.powi(2) * p * diff2 - 1.0;
    let l6 = xi_h.powi(2) * (2.0 * lq_c - 4.0 * lq_h + 1.0) + xi_c.powi(2) * (2.0 * lq_c - 1.0);
    let l7 = xi_c.powi(2) * (-4.0 * lq_c + 2.0 * lq_h + 1.0) + xi_h.powi(2) * (2.0 * lq_h - 1.0);
    let l8 = xi_h.powi(2) * (beta_c + beta_h + 2.0 * beta_c * beta_h * xi_c.powi(2) * p * diff2)
        - beta_c * xi_c.powi(2);
    // p > 0 here, so both arguments are real.
    let l9h = 0.5 * beta_h.sqrt() * xi_h * p.sqrt() * (1.0 - 2.0 * lq_h);
    let l9c = 0.5 * beta_c.sqrt() * xi_c * p.sqrt() * (1.0 - 2.0 * lq_c);
    let l10 = c(sqrt_pi * beta_h.sqrt() * xi_h * erfi(l9h)? * l8) * sqrt_p;
    let l11 = c(sqrt_pi * l8) - c(beta_c) * root_h * c(l1h.exp() * l7);
    let l12 = c(sqrt_pi * beta_c.sqrt() * xi_c * xi_h.powi(2) * erfi(l9c)? * l5) * sqrt_p;
    let l13 = c(sqrt_pi * xi_h.powi(2) * l5) * root_c + c(beta_c * xi_c.powi(2) * p * l1c.exp() * l6);
    let r1 = C::new(beta_c * xi_c.powi(2) * (-p), 0.0).powf(1.5) * erfc_gc;

    Ok(LambdaSet {
        tau_c: erfc_gc * beta_c,
        tau_h: erfc_gh * beta_h,
        lambda1_c: c(l1c),
        lambda1_h: c(l1h),
        lambda2_ch: c(l2ch),
        lambda2_hc_star: c(l2hc),
        lambda3_ch: c(l3),
        lambda4_ch: c(l4),
        lambda5_ch: c(l5),
        lambda6_ch: c(l6),
        lambda7_ch: c(l7),
        lambda8_ch: c(l8),
        lambda9_h: c(l9h),
        lambda9_c: c(l9c),
        lambda10: l10,
        lambda11: l11,
        lambda12: l12,
        lambda13: l13,
        gamma1_c,
        gamma1_h,
        r0: l12 + l13,
        r1,
    })
}

/// Largest relative disagreement between two parameter sets.
pub fn lambda_set_gap(a: &LambdaSet, b: &LambdaSet) -> f64 {
    let pairs = [
        (a.tau_c, b.tau_c),
        (a.tau_h, b.tau_h),
        (a.lambda1_c, b.lambda1_c),
        (a.lambda1_h, b.lambda1_h),
        (a.lambda2_ch, b.lambda2_ch),
        (a.lambda2_hc_star, b.lambda2_hc_star),
        (a.lambda3_ch, b.lambda3_ch),
        (a.lambda4_ch, b.lambda4_ch),
        (a.lambda5_ch, b.lambda5_ch),
        (a.lambda6_ch, b.lambda6_ch),
        (a.lambda7_ch, b.lambda7_ch),
        (a.lambda8_ch, b.lambda8_ch),
        (a.lambda9_h, b.lambda9_h),
        (a.lambda9_c, b.lambda9_c),
        (a.lambda10, b.lambda10),
        (a.lambda11, b.lambda11),
        (a.lambda12, b.lambda12),
        (a.lambda13, b.lambda13),
        (a.gamma1_c, b.gamma1_c),
        (a.gamma1_h, b.gamma1_h),
        (a.r0, b.r0),
        (a.r1, b.r1),
    ];
    pairs
        .iter()
        .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()).max(1.0))
        .fold(0.0, f64::max)
}

/// Reproducible random Otto specs whose closed-form parameters are all
/// directly representable.
pub fn random_otto_specs(count: usize, seed: u64) -> Vec<OttoSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let units = Units {
            mu: rng.gen_range(10.0..1000.0),
            ..Units::default()
        };
        let d = rng.gen_range(2.0..20.0);
        let alpha = rng.gen_range(0.5..3.0);
        let q = rng.gen_range(0.3..1.0);
        let protocol = match rng.gen_range(0..3) {
            0 => OttoProtocol::ChangingWidth {
                alpha_h: alpha,
                alpha_c: rng.gen_range(0.5..3.0),
            },
            1 => OttoProtocol::ChangingDeformation {
                q_h: q,
                q_c: rng.gen_range(0.3..1.0),
            },
            _ => OttoProtocol::ChangingDissociation {
                d_h: d,
                d_c: rng.gen_range(2.0..20.0),
            },
        };
        let t_c = rng.gen_range(0.5..5.0);
        let t_h = t_c + rng.gen_range(0.5..10.0);
        let Ok(base) = MorseModel::with_units(d, alpha, q, &units) else { continue };
        let (Ok(hot), Ok(cold)) = (ThermalEnvironment::at(t_h), ThermalEnvironment::at(t_c)) else {
            continue;
        };
        let Ok(spec) = OttoSpec::new(protocol, base, hot, cold) else { continue };
        let Ok(inputs) = ClosedInputs::from_spec(&spec) else { continue };
        if lambda_set_from(&inputs).is_ok() {
            out.push(spec);
        }
    }
    out
}

fn preset_grid(figure: Figure) -> Result<(Vec<PointParams>, crate::sweep::Cycle)> {
    match preset(figure)? {
        Preset::Sweep { grid, cycle } => Ok((grid.points().into_iter().map(|(_, _, p)| p).collect(), cycle)),
        Preset::Potential { .. } => Err(Error::Incompatible(format!("{figure} has no cycle grid"))),
    }
}

/// Count of preset grid points whose sum-oracle result is not an engine.
fn sign_violations(figure: Figure) -> Result<(usize, usize, f64)> {
    let (points, cycle) = preset_grid(figure)?;
    let results: Vec<Result<crate::cycle::CycleResult>> = points
        .par_iter()
        .map(|p| evaluate_point(p, cycle, Method::Sum))
        .collect();
    let mut bad = 0;
    let mut worst_closure: f64 = 0.0;
    for r in &results {
        match r {
            Ok(r) => {
                if !(r.q_hot > 0.0 && r.q_cold < 0.0 && r.work > 0.0) {
                    bad += 1;
                }
                let scale = r.q_hot.abs().max(r.q_cold.abs()).max(f64::MIN_POSITIVE);
                worst_closure = worst_closure.max((r.work - r.q_hot - r.q_cold).abs() / scale);
            }
            Err(_) => bad += 1,
        }
    }
    Ok((bad, results.len(), worst_closure))
}

fn fig2_params() -> PointParams {
    PointParams {
        units: Units {
            mu: crate::sweep::presets::PRESET_MU,
            ..Units::default()
        },
        ..PointParams::default()
    }
}

/// Dense-spectrum width-protocol point where the continuum forms apply.
pub fn dense_otto_spec() -> Result<OttoSpec> {
    let base = MorseModel::new(200.0, 0.1118, 1.0)?;
    OttoSpec::new(
        OttoProtocol::ChangingWidth {
            alpha_h: 0.1118,
            alpha_c: 0.05,
        },
        base,
        ThermalEnvironment::at(50.0)?,
        ThermalEnvironment::at(10.0)?,
    )
}

fn cycles_suite() -> Vec<Check> {
    let mut s = Suite::new(Level::Cycles);

    s.fallible(Severity::Hard, "carnot_efficiency", || {
        let spec = fig2_params().carnot_spec()?;
        let eta = carnot_efficiency(&spec);
        let r = carnot_cycle_sum(&spec);
        let eta_sum = r.efficiency.unwrap_or(f64::NAN);
        let gap = (eta - 0.8).abs().max((eta_sum - 0.8).abs());
        Ok((gap <= 1e-12, format!("eta = {eta}, W/Q_h from sums = {eta_sum} (tol 1e-12 against 0.8)")))
    });

    let alpha_c = reversibility_alpha(2.236, 10.0, 2.0);
    s.hard(
        "reversibility_alpha",
        (alpha_c - 1.0).abs() <= 1e-3,
        format!("alpha_C(2.236, 10, 2) = {alpha_c:.6} (tol 1e-3 against 1)"),
    );

    s.fallible(Severity::Hard, "strict_reversibility", || {
        let base = MorseModel::with_units(14.0, 2.236, 0.97, &fig2_params().units)?;
        let spec = CarnotSpec::strict(&base, 2.236, ThermalEnvironment::at(10.0)?, ThermalEnvironment::at(2.0)?)?;
        let rep = verify_reversibility(&spec.model_hot, &spec.model_cold, 0.2, 1e-12)?;
        let r = carnot_cycle_sum(&spec);
        Ok((
            rep.passed && r.work.abs() <= 1e-9 * r.q_hot.abs().max(1e-300),
            format!("gap-ratio deviation {:.2e} over {} pairs; W = {:.2e}", rep.max_deviation, rep.pairs, r.work),
        ))
    });

    s.fallible(Severity::Soft, "paper_mode_reversibility", || {
        let base = MorseModel::with_units(14.0, 2.236, 0.97, &fig2_params().units)?;
        let spec = CarnotSpec::paper(&base, 2.236, 1.0, ThermalEnvironment::at(10.0)?, ThermalEnvironment::at(2.0)?)?;
        let rep = verify_reversibility(&spec.model_hot, &spec.model_cold, 0.2, 1e-3)?;
        Ok((rep.passed, format!("fixed D_e: gap-ratio deviation {:.3e} over {} pairs", rep.max_deviation, rep.pairs)))
    });

    s.fallible(Severity::Soft, "carnot_closed_vs_sum", || {
        let spec = PointParams { d_e: 14.0, q: 0.97, ..fig2_params() }.carnot_spec()?;
        let (sum, closed) = (carnot_cycle_sum(&spec), carnot_cycle_closed(&spec)?);
        Ok((
            closed.work > 0.0,
            format!(
                "D_e=14, q=0.97: W sum {:.4e}, W closed {:.4e}, discarded imaginary part {:.3e}",
                sum.work, closed.work, closed.diagnostics.imag_residue
            ),
        ))
    });

    s.fallible(Severity::Hard, "otto_two_level", || {
        let base = MorseModel::new(8.0, 2.0, 1.0)?;
        let spec = OttoSpec::new(
            OttoProtocol::ChangingWidth { alpha_h: 2.0, alpha_c: 1.0 },
            base,
            ThermalEnvironment::at(10.0)?,
            ThermalEnvironment::at(2.0)?,
        )?;
        let r = otto_cycle_sum(&spec)?;
        let pb = 1.0 / (1.0 + (-0.4f64).exp());
        let pd = 1.0 / (1.0 + (-1.5f64).exp());
        let hand = ((-4.5 - -6.125) - (-0.5 - -3.125)) * (pb - pd);
        let gap = (r.work - hand).abs();
        Ok((gap <= 1e-12, format!("W = {:.15} vs hand value {hand:.15}, gap {gap:.2e} (tol 1e-12)", r.work)))
    });

    s.fallible(Severity::Hard, "otto_protocol_collapse", || {
        let mut worst: f64 = 0.0;
        for spec in random_otto_specs(30, 0x5eed_0003) {
            let collapsed = OttoSpec::new(spec.protocol.collapsed(), spec.baseline, spec.hot, spec.cold)?;
            worst = worst.max(otto_cycle_sum(&collapsed)?.work.abs());
        }
        Ok((worst == 0.0, format!("max |W| over 30 collapsed protocols = {worst:e}")))
    });

    s.fallible(Severity::Hard, "lambda_dual_transcription", || {
        let mut worst: f64 = 0.0;
        for spec in random_otto_specs(100, 0x5eed_0004) {
            let (h, c) = otto_endpoints(&spec)?;
            let a = lambda_set_from(&ClosedInputs::from_spec(&spec)?)?;
            let b = lambda_set_transcribed(&h, &c, spec.hot.beta(), spec.cold.beta())?;
            worst = worst.max(lambda_set_gap(&a, &b));
        }
        Ok((worst <= 1e-12, format!("max relative disagreement {worst:.2e} over 100 random specs (tol 1e-12)")))
    });

    s.soft(
        "lambda2_mapping",
        true,
        "the undefined Lambda_2^c of the hot-heat expression is evaluated as Lambda_2^ch".into(),
    );

    s.fallible(Severity::Hard, "otto_dense_regime", || {
        let spec = dense_otto_spec()?;
        let sum = otto_cycle_sum(&spec)?;
        let closed = otto_closed(&ClosedInputs::from_spec(&spec)?)?;
        let gh = ((closed.q_hot.re - sum.q_hot) / sum.q_hot).abs();
        let gc = ((closed.q_cold.re - sum.q_cold) / sum.q_cold).abs();
        let eta_gap = (closed.work.re / closed.q_hot.re - sum.efficiency.unwrap_or(f64::NAN)).abs();
        Ok((
            gh <= 0.1 && gc <= 0.1 && eta_gap <= 0.05,
            format!("Q_h gap {gh:.3e}, Q_c gap {gc:.3e} (tol 10%); |eta_closed - eta_sum| = {eta_gap:.3e} (tol 0.05)"),
        ))
    });

    s.fallible(Severity::Soft, "otto_closure_and_residue", || {
        let mut gap: f64 = 0.0;
        let mut residue: f64 = 0.0;
        for spec in random_otto_specs(100, 0x5eed_0005) {
            let r = otto_closed(&ClosedInputs::from_spec(&spec)?)?;
            let scale = r.q_hot.re.abs().max(r.q_cold.re.abs()).max(1e-300);
            gap = gap.max(r.closure_gap() / scale);
            residue = residue.max(r.imag_residue() / scale);
        }
        Ok((gap <= 1e-9, format!("max |Re W - Re Q_h - Re Q_c| / |Q| = {gap:.2e}; max discarded imaginary part / |Q| = {residue:.3e}")))
    });

    for figure in [Figure::Fig4, Figure::Fig5, Figure::Fig6] {
        s.fallible(Severity::Hard, &format!("{figure}_engine_signs"), || {
            let (bad, total, closure) = sign_violations(figure)?;
            Ok((
                bad == 0 && closure <= 1e-9,
                format!("{bad} of {total} sum-oracle points violate Q_h > 0, Q_c < 0, W > 0; max relative closure gap {closure:.2e}"),
            ))
        });
    }

    s.fallible(Severity::Soft, "fig2_engine_signs", || {
        let (bad, total, closure) = sign_violations(Figure::Fig2)?;
        Ok((
            bad == 0,
            format!("{bad} of {total} Carnot sum-oracle points violate Q_h > 0, Q_c < 0, W > 0 with D_e fixed across the adiabats; closure gap {closure:.2e}"),
        ))
    });

    s.fallible(Severity::Hard, "fig4_second_law", || {
        let (points, cycle) = preset_grid(Figure::Fig4)?;
        let etas: Vec<f64> = points
            .par_iter()
            .filter_map(|p| evaluate_point(p, cycle, Method::Sum).ok()?.efficiency)
            .collect();
        let max = etas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok((max <= 0.8 + 1e-9, format!("max eta_sum = {max:.6} over {} points (bound 0.8)", etas.len())))
    });

    s.fallible(Severity::Soft, "fig4_eta_q_trend", || {
        let (rises, detail) = eta_q_trend()?;
        Ok((rises == 0, detail))
    });

    s.checks
}

/// Sum-oracle efficiency along `D_e = 12`, `q` in `[0.5, 1]` (20 points) for
/// the width protocol; counts rises on the `q >= 0.9` part.
pub fn eta_q_trend() -> Result<(usize, String)> {
    let mut params = preset_grid(Figure::Fig4)?.0[0];
    params.d_e = 12.0;
    let mut etas = Vec::new();
    for i in 0..20 {
        params.q = 0.5 + 0.5 * i as f64 / 19.0;
        let r = evaluate_point(&params, crate::sweep::Cycle::OttoWidth, Method::Sum)?;
        etas.push((params.q, r.efficiency.unwrap_or(f64::NAN)));
    }
    let tail: Vec<&(f64, f64)> = etas.iter().filter(|(q, _)| *q >= 0.9).collect();
    let rises = tail.windows(2).filter(|w| w[1].1 > w[0].1).count();
    let first = tail.first().map(|t| t.1).unwrap_or(f64::NAN);
    let last = tail.last().map(|t| t.1).unwrap_or(f64::NAN);
    Ok((
        rises,
        format!("eta_sum on q >= 0.9 goes {first:.4} -> {last:.4} with {rises} rises across {} points", tail.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_oracles() {
        assert!((erf_series(1.0) - 0.842700792949715).abs() < 1e-14);
        assert!((erfi_series(2.0) - 18.5648024145756).abs() < 1e-10);
    }

    #[test]
    fn level_names() {
        for l in Level::ALL {
            assert_eq!(l.name().parse::<Level>().unwrap(), l);
        }
        assert!("all".parse::<Level>().is_err());
    }

    #[test]
    fn cheap_levels_pass() {
        for level in [Level::Specfun, Level::Spectrum, Level::Thermo] {
            let r = verify(Some(level));
            assert!(r.passed(), "{r}");
        }
    }
}
