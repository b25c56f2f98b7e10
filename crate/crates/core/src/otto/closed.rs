//! Continuum closed forms for the Otto heats and work.
//!
//! The expressions involve `sqrt(beta xi^2 (-p))`, which is imaginary for a
//! physical model, next to real `erfi` terms. They are evaluated in complex
//! arithmetic on the principal branch and the real parts are reported, with
//! the largest discarded imaginary part as a diagnostic.
//!
//! Only the products `kappa = lambda q` enter, so the same expressions cover
//! all three protocols.
//!
//! For `p > 0` the factors `exp(Lambda_1)`, `erfi(Lambda_9)` and
//! `erfc(gamma_1)` can overflow separately; they only ever appear as ratios,
//! which are formed from `erfi_scaled`:
//! with `u = (kappa - 1/2) a` and `D = exp(-u^2) + i erfi_scaled(u)`,
//! `erfc(gamma_1) = exp(u^2) D`, `exp(Lambda_1)/erfc(gamma_1) = 1/D`
//! and `erfi(Lambda_9)/erfc(gamma_1) = -erfi_scaled(u)/D`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{otto_endpoints, OttoSpec};
use crate::error::{Error, Result};
use crate::specfun::{erfc_formal, erfi_formal, erfi_scaled, principal_sqrt, ERFI_MAX_ARG};
use crate::spectrum::EXP_LIMIT;

type C = Complex64;

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Scalars the closed forms depend on.
///
/// `p` may be negative, which turns the continuum integrals into convergent
/// Gaussian integrals; this is used to validate the expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedInputs {
    pub xi_h: f64,
    pub xi_c: f64,
    pub kappa_h: f64,
    pub kappa_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub p: f64,
}

impl ClosedInputs {
    pub fn from_spec(spec: &OttoSpec) -> Result<Self> {
        let (h, c) = otto_endpoints(spec)?;
        Ok(ClosedInputs {
            xi_h: h.xi(),
            xi_c: c.xi(),
            kappa_h: h.kappa(),
            kappa_c: c.kappa(),
            beta_h: spec.hot.beta(),
            beta_c: spec.cold.beta(),
            p: h.p(),
        })
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("xi_h", self.xi_h),
            ("xi_c", self.xi_c),
            ("beta_h", self.beta_h),
            ("beta_c", self.beta_c),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, v, "must be finite and positive"));
            }
        }
        for (name, v) in [("kappa_h", self.kappa_h), ("kappa_c", self.kappa_c)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, v, "must be finite"));
            }
        }
        if !(self.p.is_finite() && self.p != 0.0) {
            return Err(Error::invalid("p", self.p, "must be finite and nonzero"));
        }
        Ok(())
    }
}

/// Every intermediate of the closed forms, evaluated directly.
///
/// Direct evaluation needs `exp(Lambda_1)` and `erfi(Lambda_9)` to be
/// representable; [`lambda_set_from`] fails with a range error otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSet {
    pub tau_c: C,
    pub tau_h: C,
    pub lambda1_c: C,
    pub lambda1_h: C,
    pub lambda2_ch: C,
    pub lambda2_hc_star: C,
    pub lambda3_ch: C,
    pub lambda4_ch: C,
    pub lambda5_ch: C,
    pub lambda6_ch: C,
    pub lambda7_ch: C,
    pub lambda8_ch: C,
    pub lambda9_h: C,
    pub lambda9_c: C,
    pub lambda10: C,
    pub lambda11: C,
    pub lambda12: C,
    pub lambda13: C,
    pub gamma1_c: C,
    pub gamma1_h: C,
    pub r0: C,
    pub r1: C,
}

/// Terms that need no special functions.
struct Algebraic {
    lambda1_h: f64,
    lambda1_c: f64,
    lambda2_ch: f64,
    lambda2_hc_star: f64,
    lambda3_ch: f64,
    lambda4_ch: f64,
    lambda5_ch: f64,
    lambda6_ch: f64,
    lambda7_ch: f64,
    lambda8_ch: f64,
}

impl Algebraic {
    fn new(i: &ClosedInputs) -> Self {
        let (xh2, xc2) = (i.xi_h * i.xi_h, i.xi_c * i.xi_c);
        let (kh, kc, p) = (i.kappa_h, i.kappa_c, i.p);
        let (bh, bc) = (i.beta_h, i.beta_c);
        let dk2 = (kc - kh) * (kc - kh);
        Algebraic {
            lambda1_h: 0.25 * bh * xh2 * p * (1.0 - 2.0 * kh).powi(2),
            lambda1_c: 0.25 * bc * xc2 * p * (1.0 - 2.0 * kc).powi(2),
            lambda2_ch: xh2 * p * (2.0 * (kc - 2.0 * kh) + 1.0),
            lambda2_hc_star: xc2 * p * (2.0 * (kh - 2.0 * kc) + 1.0),
            lambda3_ch: 2.0 * bh * xh2 * p * dk2 + 1.0,
            lambda4_ch: xc2 * (2.0 * p * dk2 - 1.0 / (bh * xh2)),
            lambda5_ch: 2.0 * bc * xc2 * p * dk2 - 1.0,
            lambda6_ch: xh2 * (2.0 * kc - 4.0 * kh + 1.0) + xc2 * (2.0 * kc - 1.0),
            lambda7_ch: xc2 * (-4.0 * kc + 2.0 * kh + 1.0) + xh2 * (2.0 * kh - 1.0),
            lambda8_ch: xh2 * (bc + bh + 2.0 * bc * bh * xc2 * p * dk2) - bc * xc2,
        }
    }
}

/// Per-stroke factors. `exp_ratio = exp(Lambda_1)/erfc(gamma_1)`,
/// `inv_erfc = 1/erfc(gamma_1)`, `erfi_ratio = erfi(Lambda_9)/erfc(gamma_1)`.
struct Stroke {
    root: C,
    gamma1: C,
    exp_ratio: C,
    inv_erfc: C,
    erfi_ratio: C,
}

impl Stroke {
    fn new(xi: f64, kappa: f64, beta: f64, p: f64, name: &'static str) -> Result<Self> {
        let root = principal_sqrt(-beta * xi * xi * p);
        let gamma1 = root * (0.5 * (1.0 - 2.0 * kappa));
        if p > 0.0 {
            let a = (beta * xi * xi * p).sqrt();
            let u = (kappa - 0.5) * a;
            let s = erfi_scaled(u.abs()).map_err(|e| e.named(name))?.copysign(u);
            let damp = (-u * u).exp();
            let d = C::new(damp, s);
            return Ok(Stroke {
                root,
                gamma1,
                exp_ratio: d.inv(),
                inv_erfc: re(damp) / d,
                erfi_ratio: re(-s) / d,
            });
        }
        let lambda1 = 0.25 * beta * xi * xi * p * (1.0 - 2.0 * kappa).powi(2);
        let erfc = erfc_formal(gamma1).map_err(|e| e.named(name))?;
        if erfc.norm() == 0.0 {
            return Err(Error::range(name, gamma1.re, ERFI_MAX_ARG));
        }
        let lambda9 = principal_sqrt(p) * (0.5 * beta.sqrt() * xi * (1.0 - 2.0 * kappa));
        let erfi9 = erfi_formal(lambda9).map_err(|e| e.named(name))?;
        Ok(Stroke {
            root,
            gamma1,
            exp_ratio: re(lambda1.exp()) / erfc,
            inv_erfc: erfc.inv(),
            erfi_ratio: erfi9 / erfc,
        })
    }
}

/// Every closed-form intermediate, evaluated directly.
pub fn lambda_set(spec: &OttoSpec) -> Result<LambdaSet> {
    lambda_set_from(&ClosedInputs::from_spec(spec)?)
}

pub fn lambda_set_from(inputs: &ClosedInputs) -> Result<LambdaSet> {
    inputs.validate()?;
    let i = inputs;
    let alg = Algebraic::new(i);
    let sqrt_pi = PI.sqrt();
    let sqrt_p = principal_sqrt(i.p);
    let root_h = principal_sqrt(-i.beta_h * i.xi_h * i.xi_h * i.p);
    let root_c = principal_sqrt(-i.beta_c * i.xi_c * i.xi_c * i.p);
    let gamma1_h = root_h * (0.5 * (1.0 - 2.0 * i.kappa_h));
    let gamma1_c = root_c * (0.5 * (1.0 - 2.0 * i.kappa_c));

    for (name, v) in [("Lambda1_h", alg.lambda1_h), ("Lambda1_c", alg.lambda1_c)] {
        if v > EXP_LIMIT {
            return Err(Error::range(name, v, EXP_LIMIT));
        }
    }
    let exp1_h = re(alg.lambda1_h.exp());
    let exp1_c = re(alg.lambda1_c.exp());
    let erfc_h = erfc_formal(gamma1_h).map_err(|e| e.named("gamma1_h"))?;
    let erfc_c = erfc_formal(gamma1_c).map_err(|e| e.named("gamma1_c"))?;

    let lambda9_h = sqrt_p * (0.5 * i.beta_h.sqrt() * i.xi_h * (1.0 - 2.0 * i.kappa_h));
    let lambda9_c = sqrt_p * (0.5 * i.beta_c.sqrt() * i.xi_c * (1.0 - 2.0 * i.kappa_c));
    let erfi9_h = erfi_formal(lambda9_h).map_err(|e| e.named("Lambda9_h"))?;
    let erfi9_c = erfi_formal(lambda9_c).map_err(|e| e.named("Lambda9_c"))?;

    let l8 = re(alg.lambda8_ch);
    let l5 = re(alg.lambda5_ch);
    let xh2 = i.xi_h * i.xi_h;
    let xc2 = i.xi_c * i.xi_c;
    let lambda10 = sqrt_p * erfi9_h * l8 * (sqrt_pi * i.beta_h.sqrt() * i.xi_h);
    let lambda11 = l8 * sqrt_pi - root_h * exp1_h * alg.lambda7_ch * i.beta_c;
    let lambda12 = sqrt_p * erfi9_c * l5 * (sqrt_pi * i.beta_c.sqrt() * i.xi_c * xh2);
    let lambda13 = root_c * l5 * (sqrt_pi * xh2) + exp1_c * (i.beta_c * xc2 * i.p * alg.lambda6_ch);

    Ok(LambdaSet {
        tau_c: erfc_c * i.beta_c,
        tau_h: erfc_h * i.beta_h,
        lambda1_c: re(alg.lambda1_c),
        lambda1_h: re(alg.lambda1_h),
        lambda2_ch: re(alg.lambda2_ch),
        lambda2_hc_star: re(alg.lambda2_hc_star),
        lambda3_ch: re(alg.lambda3_ch),
        lambda4_ch: re(alg.lambda4_ch),
        lambda5_ch: l5,
        lambda6_ch: re(alg.lambda6_ch),
        lambda7_ch: re(alg.lambda7_ch),
        lambda8_ch: l8,
        lambda9_h,
        lambda9_c,
        lambda10,
        lambda11,
        lambda12,
        lambda13,
        gamma1_c,
        gamma1_h,
        r0: lambda12 + lambda13,
        r1: root_c * root_c * root_c * erfc_c,
    })
}

/// Complex closed-form heats and work with their real-part summaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedOtto {
    pub q_hot: C,
    pub q_cold: C,
    pub work: C,
}

impl ClosedOtto {
    /// Largest imaginary part discarded by taking real parts.
    pub fn imag_residue(&self) -> f64 {
        self.q_hot.im.abs().max(self.q_cold.im.abs()).max(self.work.im.abs())
    }

    /// `|Re W - (Re Q_h + Re Q_c)|`.
    pub fn closure_gap(&self) -> f64 {
        (self.work.re - self.q_hot.re - self.q_cold.re).abs()
    }
}

/// Heats and work from the closed forms, overflow-safe for `p > 0`.
pub fn otto_closed(inputs: &ClosedInputs) -> Result<ClosedOtto> {
    inputs.validate()?;
    let i = inputs;
    let alg = Algebraic::new(i);
    let sqrt_pi = PI.sqrt();
    let h = Stroke::new(i.xi_h, i.kappa_h, i.beta_h, i.p, "u_h")?;
    let c = Stroke::new(i.xi_c, i.kappa_c, i.beta_c, i.p, "u_c")?;
    let xh2 = i.xi_h * i.xi_h;
    let xc2 = i.xi_c * i.xi_c;
    let sqrt_p = principal_sqrt(i.p);

    let q_hot = h.gamma1 * h.exp_ratio / (sqrt_pi * i.beta_h)
        + re(alg.lambda3_ch / (2.0 * i.beta_h) - xh2 / (2.0 * i.beta_c * xc2))
        + c.exp_ratio * alg.lambda2_ch / (c.root * 2.0 * sqrt_pi);

    let q_cold = c.gamma1 * c.exp_ratio / (sqrt_pi * i.beta_c)
        + h.exp_ratio * alg.lambda2_hc_star / (h.root * 2.0 * sqrt_pi)
        + re(1.0 / (2.0 * i.beta_c) + alg.lambda4_ch / 2.0);

    // Lambda_10..13 multiplied by the matching 1/erfc(gamma_1)
    let l10 = sqrt_p * h.erfi_ratio * (sqrt_pi * i.beta_h.sqrt() * i.xi_h * alg.lambda8_ch);
    let l11 = h.inv_erfc * (sqrt_pi * alg.lambda8_ch) - h.root * h.exp_ratio * (i.beta_c * alg.lambda7_ch);
    let l12 = sqrt_p * c.erfi_ratio * (sqrt_pi * i.beta_c.sqrt() * i.xi_c * xh2 * alg.lambda5_ch);
    let l13 = c.root * c.inv_erfc * (sqrt_pi * xh2 * alg.lambda5_ch)
        + c.exp_ratio * (i.beta_c * xc2 * i.p * alg.lambda6_ch);
    let hot_part = (l10 / h.root + l11) / (i.beta_c * i.beta_h * xh2);
    let cold_part = (l12 + l13) * i.p / (c.root * c.root * c.root);
    let work = (hot_part - cold_part) / (2.0 * sqrt_pi);

    for (name, v) in [("Q_h", q_hot), ("Q_c", q_cold), ("W", work)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::range(name, f64::INFINITY, f64::MAX));
        }
    }
    Ok(ClosedOtto {
        q_hot,
        q_cold,
        work,
    })
}

pub fn otto_hot_heat_closed(spec: &OttoSpec) -> Result<C> {
    Ok(otto_closed(&ClosedInputs::from_spec(spec)?)?.q_hot)
}

pub fn otto_cold_heat_closed(spec: &OttoSpec) -> Result<C> {
    Ok(otto_closed(&ClosedInputs::from_spec(spec)?)?.q_cold)
}

pub fn otto_work_closed(spec: &OttoSpec) -> Result<C> {
    Ok(otto_closed(&ClosedInputs::from_spec(spec)?)?.work)
}

/// Closed-form efficiency, both as the real part of the complex ratio
/// `W / Q_h` and as the ratio of real parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedEfficiency {
    /// `Re(W / Q_h)`; `None` unless `Re Q_h > 0`.
    pub formula: Option<f64>,
    /// `Re W / Re Q_h`; `None` unless `Re Q_h > 0`.
    pub ratio: Option<f64>,
}

pub fn otto_efficiency_closed(spec: &OttoSpec) -> Result<ClosedEfficiency> {
    let r = otto_closed(&ClosedInputs::from_spec(spec)?)?;
    if r.q_hot.re > 0.0 {
        Ok(ClosedEfficiency {
            formula: Some((r.work / r.q_hot).re),
            ratio: Some(r.work.re / r.q_hot.re),
        })
    } else {
        Ok(ClosedEfficiency {
            formula: None,
            ratio: None,
        })
    }
}
