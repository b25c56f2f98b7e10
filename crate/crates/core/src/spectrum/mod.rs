//! The q-deformed Morse oscillator `V(x) = D_e (exp(-2 xi x) - 2 q exp(-xi x))`
//! and its bound spectrum `E_n = -xi^2 p (lambda q - n - 1/2)^2`.
//!
//! Levels with `lambda q - n - 1/2 = 0` sit exactly at the dissociation
//! threshold and are not counted as bound.

mod fd;

pub use fd::{fd_schrodinger_oracle, FdSpectrum};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent accepted by `f64::exp` without overflow.
pub(crate) const EXP_LIMIT: f64 = 709.0;

/// Most bound levels a model may hold; bounds the memory of a level sum.
pub const MAX_LEVELS: f64 = 1e7;

/// Unit system for the model and the baths. Every field defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Units {
    pub hbar: f64,
    pub mu: f64,
    #[serde(rename = "re")]
    pub r_e: f64,
    #[serde(rename = "kB")]
    pub k_b: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units {
            hbar: 1.0,
            mu: 1.0,
            r_e: 1.0,
            k_b: 1.0,
        }
    }
}

impl Units {
    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("mu", self.mu)?;
        positive("re", self.r_e)?;
        positive("kB", self.k_b).map(|_| ())
    }
}

pub(crate) fn positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(field, value, "must be finite and positive"))
    }
}

/// A validated q-deformed Morse model. Immutable; derived scales are cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseModel {
    d_e: f64,
    alpha: f64,
    q: f64,
    r_e: f64,
    mu: f64,
    hbar: f64,
    xi: f64,
    p: f64,
    lambda: f64,
}

impl MorseModel {
    /// Model in units with `hbar = mu = r_e = 1`.
    pub fn new(d_e: f64, alpha: f64, q: f64) -> Result<Self> {
        Self::with_units(d_e, alpha, q, &Units::default())
    }

    pub fn with_units(d_e: f64, alpha: f64, q: f64, units: &Units) -> Result<Self> {
        units.validate()?;
        positive("D_e", d_e)?;
        positive("alpha", alpha)?;
        if !(q.is_finite() && q > 0.0 && q <= 1.0) {
            return Err(Error::invalid("q", q, "must lie in (0, 1]"));
        }
        let xi = alpha * units.r_e;
        let p = units.hbar * units.hbar / (2.0 * units.mu * units.r_e * units.r_e);
        let lambda = (d_e / (xi * xi * p)).sqrt();
        let excess = lambda * q - 0.5;
        if excess.is_nan() || excess <= 0.0 {
            return Err(Error::NoBoundLevel { excess });
        }
        if excess > MAX_LEVELS {
            return Err(Error::range("lambda q", lambda * q, MAX_LEVELS));
        }
        Ok(MorseModel {
            d_e,
            alpha,
            q,
            r_e: units.r_e,
            mu: units.mu,
            hbar: units.hbar,
            xi,
            p,
            lambda,
        })
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_units(self.d_e, alpha, self.q, &self.units())
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::with_units(self.d_e, self.alpha, q, &self.units())
    }

    pub fn with_d_e(&self, d_e: f64) -> Result<Self> {
        Self::with_units(d_e, self.alpha, self.q, &self.units())
    }

    /// Units of this model; `k_b` is reported as 1 since the model does not carry it.
    pub fn units(&self) -> Units {
        Units {
            hbar: self.hbar,
            mu: self.mu,
            r_e: self.r_e,
            k_b: 1.0,
        }
    }

    pub fn d_e(&self) -> f64 {
        self.d_e
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn r_e(&self) -> f64 {
        self.r_e
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    /// `xi = alpha r_e`.
    pub fn xi(&self) -> f64 {
        self.xi
    }
    /// `p = hbar^2 / (2 mu r_e^2)`.
    pub fn p(&self) -> f64 {
        self.p
    }
    /// `lambda = sqrt(D_e / (xi^2 p))`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    /// `lambda q`, the only combination of `lambda` and `q` the spectrum depends on.
    pub fn kappa(&self) -> f64 {
        self.lambda * self.q
    }
    /// `xi^2 p`, the spectral energy scale.
    pub fn energy_scale(&self) -> f64 {
        self.xi * self.xi * self.p
    }
}

/// Ordered bound levels `E_0 < ... < E_{n_max}`, all strictly negative.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpectrum {
    levels: Vec<f64>,
}

impl BoundSpectrum {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }
    pub fn len(&self) -> usize {
        self.levels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
    pub fn ground(&self) -> f64 {
        self.levels[0]
    }
}

pub fn potential_value(model: &MorseModel, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            function: "potential_value",
            value: x,
            reason: "displacement must be finite",
        });
    }
    let exponent = -2.0 * model.xi * x;
    if exponent > EXP_LIMIT {
        return Err(Error::range("potential exponent -2 xi x", exponent, EXP_LIMIT));
    }
    let e1 = (-model.xi * x).exp();
    Ok(model.d_e * (e1 * e1 - 2.0 * model.q * e1))
}

/// Location `-ln(q)/xi` and depth `-D_e q^2` of the well.
///
/// At the minimum `exp(-xi x0) = q`, so the well moves to positive `x` as `q`
/// drops below 1.
pub fn potential_minimum(model: &MorseModel) -> (f64, f64) {
    (-model.q.ln() / model.xi, -model.d_e * model.q * model.q)
}

/// Taylor coefficients of the potential about `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicExpansion {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// `2 xi^2 D_e`, the spring constant of the undeformed well.
    pub k_spring: f64,
}

pub fn harmonic_expansion(model: &MorseModel) -> HarmonicExpansion {
    let (d, q, xi) = (model.d_e, model.q, model.xi);
    HarmonicExpansion {
        c0: d * (1.0 - 2.0 * q),
        c1: 2.0 * xi * d * (q - 1.0),
        c2: xi * xi * d * (2.0 - q),
        k_spring: 2.0 * xi * xi * d,
    }
}

/// Highest bound quantum number, `ceil(lambda q - 1/2) - 1`.
pub fn n_max(model: &MorseModel) -> usize {
    let c = model.kappa() - 0.5;
    // c > 0 by construction, so the ceiling is at least 1
    (c.ceil() as usize).saturating_sub(1)
}

pub fn eigenvalue(model: &MorseModel, n: usize) -> Result<f64> {
    let top = n_max(model);
    if n > top {
        return Err(Error::LevelOutOfBounds { n, n_max: top });
    }
    Ok(level(model, n))
}

fn level(model: &MorseModel, n: usize) -> f64 {
    let c = model.kappa() - n as f64 - 0.5;
    -model.energy_scale() * c * c
}

pub fn bound_spectrum(model: &MorseModel) -> BoundSpectrum {
    BoundSpectrum {
        levels: (0..=n_max(model)).map(|n| level(model, n)).collect(),
    }
}
