//! Built-in figure configurations.
//!
//! Every sweep preset is a 50 x 50 grid at `T_h = 10`, `T_c = 2` with reduced
//! mass 500. With unit mass the kinetic scale `hbar^2 / (2 mu r_e^2)` is so
//! large that most grid points hold no bound level at all.

use std::fmt;
use std::str::FromStr;

use super::{Axis, Cycle, Param, PointParams, SweepGrid};
use crate::error::{Error, Result};
use crate::spectrum::{potential_value, MorseModel, Units};

pub const PRESET_MU: f64 = 500.0;
pub const PRESET_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            "fig6" => Ok(Figure::Fig6),
            _ => Err(Error::Config {
                path: "figure".into(),
                message: format!("unknown figure `{s}`; expected fig1..fig6"),
            }),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Figure::Fig1 => 1,
            Figure::Fig2 => 2,
            Figure::Fig3 => 3,
            Figure::Fig4 => 4,
            Figure::Fig5 => 5,
            Figure::Fig6 => 6,
        };
        write!(f, "fig{n}")
    }
}

/// What a figure preset produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// Potential curves `V(x)` for several `q`.
    Potential {
        d_e: f64,
        alpha: f64,
        qs: Vec<f64>,
        x_min: f64,
        x_max: f64,
        samples: usize,
    },
    Sweep { grid: SweepGrid, cycle: Cycle },
}

fn preset_params() -> PointParams {
    PointParams {
        units: Units {
            mu: PRESET_MU,
            ..Units::default()
        },
        ..PointParams::default()
    }
}

fn sweep(cycle: Cycle, axis1: Axis, axis2: Axis, fixed: PointParams) -> Result<Preset> {
    let grid = SweepGrid::new(axis1, axis2, fixed)?;
    grid.check_cycle(cycle)?;
    Ok(Preset::Sweep { grid, cycle })
}

pub fn preset(figure: Figure) -> Result<Preset> {
    let de = Axis::new(Param::DE, 5.0, 15.0, PRESET_STEPS);
    let q = Axis::new(Param::Q, 0.1, 1.0, PRESET_STEPS);
    let alpha = Axis::new(Param::Alpha, 1.0, 3.0, PRESET_STEPS);
    let mut fixed = preset_params();
    match figure {
        Figure::Fig1 => Ok(Preset::Potential {
            d_e: 10.0,
            alpha: 2.0,
            qs: vec![0.4, 0.5, 1.0],
            x_min: -0.5,
            x_max: 3.0,
            samples: 351,
        }),
        Figure::Fig2 => {
            fixed.alpha_h = 2.236;
            fixed.alpha_c = 1.0;
            sweep(Cycle::Carnot, de, q, fixed)
        }
        Figure::Fig3 => Err(Error::Config {
            path: "figure".into(),
            message: "fig3 is a schematic of the Otto cycle and has no data".into(),
        }),
        Figure::Fig4 => {
            fixed.alpha_h = 2.236;
            fixed.alpha_c = 1.0;
            sweep(Cycle::OttoWidth, de, q, fixed)
        }
        Figure::Fig5 => {
            fixed.q_h = 1.0;
            fixed.q_c = 0.8;
            sweep(Cycle::OttoDeform, de, alpha, fixed)
        }
        Figure::Fig6 => {
            fixed.d_h = 10.0;
            fixed.d_c = 5.0;
            sweep(Cycle::OttoDissoc, alpha, q, fixed)
        }
    }
}

/// One sample of a potential curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub q: f64,
    pub x: f64,
    pub v: f64,
}

/// Samples for [`Preset::Potential`], grouped by `q` in the order given.
pub fn potential_curves(
    d_e: f64,
    alpha: f64,
    qs: &[f64],
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<Vec<PotentialSample>> {
    let axis = Axis::new(Param::Q, x_min, x_max, samples);
    axis.validate("x")?;
    let xs = axis.values();
    let mut out = Vec::with_capacity(qs.len() * samples);
    for &q in qs {
        let model = MorseModel::new(d_e, alpha, q)?;
        for &x in &xs {
            out.push(PotentialSample {
                q,
                x,
                v: potential_value(&model, x)?,
            });
        }
    }
    Ok(out)
}
