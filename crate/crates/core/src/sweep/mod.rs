//! Single-point evaluation and two-dimensional parameter sweeps.
//!
//! Grid points are evaluated in parallel and collected in row-major order
//! (`axis1` outer, `axis2` inner), so output does not depend on the thread
//! count.

mod config;
pub mod presets;

pub use config::Config;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carnot::{carnot_cycle_closed, carnot_cycle_sum, CarnotMode, CarnotSpec};
use crate::cycle::{CycleResult, Diagnostics};
use crate::error::{Error, Result};
use crate::otto::{otto_closed, otto_cycle_sum, ClosedInputs, OttoProtocol, OttoSpec};
use crate::spectrum::{MorseModel, Units};
use crate::thermo::ThermalEnvironment;

/// Sweepable parameter names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "D_e")]
    DE,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "T_h")]
    Th,
    #[serde(rename = "T_c")]
    Tc,
    #[serde(rename = "alpha_h")]
    AlphaH,
    #[serde(rename = "alpha_c")]
    AlphaC,
    #[serde(rename = "q_h")]
    QH,
    #[serde(rename = "q_c")]
    QC,
    #[serde(rename = "D_h")]
    DH,
    #[serde(rename = "D_c")]
    DC,
}

impl Param {
    pub const ALL: [Param; 11] = [
        Param::DE,
        Param::Alpha,
        Param::Q,
        Param::Th,
        Param::Tc,
        Param::AlphaH,
        Param::AlphaC,
        Param::QH,
        Param::QC,
        Param::DH,
        Param::DC,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Param::DE => "D_e",
            Param::Alpha => "alpha",
            Param::Q => "q",
            Param::Th => "T_h",
            Param::Tc => "T_c",
            Param::AlphaH => "alpha_h",
            Param::AlphaC => "alpha_c",
            Param::QH => "q_h",
            Param::QC => "q_c",
            Param::DH => "D_h",
            Param::DC => "D_c",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Incompatible(format!("unknown parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cycle {
    Carnot,
    OttoWidth,
    OttoDeform,
    OttoDissoc,
}

impl Cycle {
    pub fn name(&self) -> &'static str {
        match self {
            Cycle::Carnot => "carnot",
            Cycle::OttoWidth => "otto-width",
            Cycle::OttoDeform => "otto-deform",
            Cycle::OttoDissoc => "otto-dissoc",
        }
    }

    /// Parameters this cycle reads; anything else on a sweep axis is an error.
    pub fn axes(&self) -> &'static [Param] {
        use Param::*;
        match self {
            Cycle::Carnot | Cycle::OttoWidth => &[DE, Q, AlphaH, AlphaC, Th, Tc],
            Cycle::OttoDeform => &[DE, Alpha, QH, QC, Th, Tc],
            Cycle::OttoDissoc => &[Alpha, Q, DH, DC, Th, Tc],
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cycle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Cycle::Carnot, Cycle::OttoWidth, Cycle::OttoDeform, Cycle::OttoDissoc]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Incompatible(format!("unknown cycle `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sum,
    Closed,
    Both,
}

impl Method {
    fn tags(&self) -> &'static [Method] {
        match self {
            Method::Sum => &[Method::Sum],
            Method::Closed => &[Method::Closed],
            Method::Both => &[Method::Sum, Method::Closed],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Sum => "sum",
            Method::Closed => "closed",
            Method::Both => "both",
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Method::Sum),
            "closed" => Ok(Method::Closed),
            "both" => Ok(Method::Both),
            _ => Err(Error::Incompatible(format!("unknown method `{s}`"))),
        }
    }
}

/// Every parameter a single cycle evaluation may read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub d_e: f64,
    pub alpha: f64,
    pub q: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub alpha_h: f64,
    pub alpha_c: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub d_h: f64,
    pub d_c: f64,
    pub units: Units,
    pub carnot_mode: CarnotMode,
}

impl Default for PointParams {
    fn default() -> Self {
        PointParams {
            d_e: 10.0,
            alpha: 2.0,
            q: 1.0,
            t_h: 10.0,
            t_c: 2.0,
            alpha_h: 2.236,
            alpha_c: 1.0,
            q_h: 1.0,
            q_c: 0.8,
            d_h: 10.0,
            d_c: 5.0,
            units: Units::default(),
            carnot_mode: CarnotMode::Paper,
        }
    }
}

impl PointParams {
    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::DE => self.d_e,
            Param::Alpha => self.alpha,
            Param::Q => self.q,
            Param::Th => self.t_h,
            Param::Tc => self.t_c,
            Param::AlphaH => self.alpha_h,
            Param::AlphaC => self.alpha_c,
            Param::QH => self.q_h,
            Param::QC => self.q_c,
            Param::DH => self.d_h,
            Param::DC => self.d_c,
        }
    }

    pub fn set(&mut self, p: Param, value: f64) {
        let slot = match p {
            Param::DE => &mut self.d_e,
            Param::Alpha => &mut self.alpha,
            Param::Q => &mut self.q,
            Param::Th => &mut self.t_h,
            Param::Tc => &mut self.t_c,
            Param::AlphaH => &mut self.alpha_h,
            Param::AlphaC => &mut self.alpha_c,
            Param::QH => &mut self.q_h,
            Param::QC => &mut self.q_c,
            Param::DH => &mut self.d_h,
            Param::DC => &mut self.d_c,
        };
        *slot = value;
    }

    fn baths(&self) -> Result<(ThermalEnvironment, ThermalEnvironment)> {
        Ok((
            ThermalEnvironment::new(self.t_h, self.units.k_b).map_err(|e| e.named("T_h"))?,
            ThermalEnvironment::new(self.t_c, self.units.k_b).map_err(|e| e.named("T_c"))?,
        ))
    }

    pub fn carnot_spec(&self) -> Result<CarnotSpec> {
        let (hot, cold) = self.baths()?;
        let base = MorseModel::with_units(self.d_e, self.alpha_h, self.q, &self.units)
            .map_err(|e| e.named("alpha_h"))?;
        match self.carnot_mode {
            CarnotMode::Paper => CarnotSpec::paper(&base, self.alpha_h, self.alpha_c, hot, cold),
            CarnotMode::Strict => CarnotSpec::strict(&base, self.alpha_h, hot, cold),
        }
    }

    /// Otto spec for `cycle`; fails for [`Cycle::Carnot`].
    pub fn otto_spec(&self, cycle: Cycle) -> Result<OttoSpec> {
        let (hot, cold) = self.baths()?;
        let (protocol, base, hot_name) = match cycle {
            Cycle::OttoWidth => (
                OttoProtocol::ChangingWidth {
                    alpha_h: self.alpha_h,
                    alpha_c: self.alpha_c,
                },
                MorseModel::with_units(self.d_e, self.alpha_h, self.q, &self.units),
                "alpha_h",
            ),
            Cycle::OttoDeform => (
                OttoProtocol::ChangingDeformation {
                    q_h: self.q_h,
                    q_c: self.q_c,
                },
                MorseModel::with_units(self.d_e, self.alpha, self.q_h, &self.units),
                "q_h",
            ),
            Cycle::OttoDissoc => (
                OttoProtocol::ChangingDissociation {
                    d_h: self.d_h,
                    d_c: self.d_c,
                },
                MorseModel::with_units(self.d_h, self.alpha, self.q, &self.units),
                "D_h",
            ),
            Cycle::Carnot => {
                return Err(Error::Incompatible("carnot is not an Otto protocol".into()))
            }
        };
        OttoSpec::new(protocol, base.map_err(|e| e.named(hot_name))?, hot, cold)
    }
}

/// Evaluate `cycle` at one point with a single method (`Sum` or `Closed`).
pub fn evaluate_point(params: &PointParams, cycle: Cycle, method: Method) -> Result<CycleResult> {
    match (cycle, method) {
        (_, Method::Both) => Err(Error::Incompatible(
            "evaluate_point takes a single method".into(),
        )),
        (Cycle::Carnot, Method::Sum) => Ok(carnot_cycle_sum(&params.carnot_spec()?)),
        (Cycle::Carnot, Method::Closed) => carnot_cycle_closed(&params.carnot_spec()?),
        (otto, Method::Sum) => otto_cycle_sum(&params.otto_spec(otto)?),
        (otto, Method::Closed) => {
            let r = otto_closed(&ClosedInputs::from_spec(&params.otto_spec(otto)?)?)?;
            Ok(CycleResult::with_work(
                r.q_hot.re,
                r.q_cold.re,
                r.work.re,
                Diagnostics {
                    truncated_mass: 0.0,
                    imag_residue: r.imag_residue(),
                },
            ))
        }
    }
}

/// Both evaluations of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub sum: Result<CycleResult>,
    pub closed: Result<CycleResult>,
}

pub fn run_point(params: &PointParams, cycle: Cycle) -> PointReport {
    PointReport {
        sum: evaluate_point(params, cycle, Method::Sum),
        closed: evaluate_point(params, cycle, Method::Closed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, steps: usize) -> Self {
        Axis {
            param,
            min,
            max,
            steps,
        }
    }

    /// `steps` evenly spaced values with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * (i as f64 / last)
                }
            })
            .collect()
    }

    fn validate(&self, label: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config {
                path: format!("grid.{label}.steps"),
                message: format!("must be at least 2, got {}", self.steps),
            });
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config {
                path: format!("grid.{label}"),
                message: format!("need finite min < max, got [{}, {}]", self.min, self.max),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    pub fixed: PointParams,
}

impl SweepGrid {
    pub fn new(axis1: Axis, axis2: Axis, fixed: PointParams) -> Result<Self> {
        axis1.validate("axis1")?;
        axis2.validate("axis2")?;
        if axis1.param == axis2.param {
            return Err(Error::Config {
                path: "grid.axis2.param".into(),
                message: format!("repeats axis1 parameter {}", axis1.param),
            });
        }
        Ok(SweepGrid {
            axis1,
            axis2,
            fixed,
        })
    }

    /// Fail unless both axes are parameters `cycle` actually reads.
    pub fn check_cycle(&self, cycle: Cycle) -> Result<()> {
        for axis in [&self.axis1, &self.axis2] {
            if !cycle.axes().contains(&axis.param) {
                return Err(Error::Incompatible(format!(
                    "axis {} has no effect on cycle {}; allowed: {}",
                    axis.param,
                    cycle,
                    cycle.axes().iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axis1.steps * self.axis2.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order.
    pub fn points(&self) -> Vec<(f64, f64, PointParams)> {
        let v2 = self.axis2.values();
        self.axis1
            .values()
            .into_iter()
            .flat_map(|a| {
                v2.iter().map(move |&b| {
                    let mut p = self.fixed;
                    p.set(self.axis1.param, a);
                    p.set(self.axis2.param, b);
                    (a, b, p)
                })
            })
            .collect()
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub axis1: f64,
    pub axis2: f64,
    #[serde(rename = "Qh")]
    pub q_hot: f64,
    #[serde(rename = "Qc")]
    pub q_cold: f64,
    #[serde(rename = "W")]
    pub work: f64,
    pub eta: f64,
    pub regime: String,
    pub method: String,
    pub imag_residue: f64,
    pub trunc_mass: f64,
    /// Reason for every `nan` in the row; empty when all fields are finite.
    pub diagnostic: String,
}

impl OutputRecord {
    fn from_result(axis1: f64, axis2: f64, method: Method, result: Result<CycleResult>) -> Self {
        match result {
            Ok(r) => OutputRecord {
                axis1,
                axis2,
                q_hot: r.q_hot,
                q_cold: r.q_cold,
                work: r.work,
                eta: r.efficiency.unwrap_or(f64::NAN),
                regime: r.regime.as_str().to_string(),
                method: method.name().to_string(),
                imag_residue: r.diagnostics.imag_residue,
                trunc_mass: r.diagnostics.truncated_mass,
                diagnostic: if r.efficiency.is_none() {
                    "eta undefined: Q_h <= 0".to_string()
                } else {
                    String::new()
                },
            },
            Err(e) => OutputRecord {
                axis1,
                axis2,
                q_hot: f64::NAN,
                q_cold: f64::NAN,
                work: f64::NAN,
                eta: f64::NAN,
                regime: "invalid".to_string(),
                method: method.name().to_string(),
                imag_residue: f64::NAN,
                trunc_mass: f64::NAN,
                diagnostic: e.to_string(),
            },
        }
    }

    fn numbers(&self) -> [f64; 8] {
        [
            self.axis1,
            self.axis2,
            self.q_hot,
            self.q_cold,
            self.work,
            self.eta,
            self.imag_residue,
            self.trunc_mass,
        ]
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "axis1",
    "axis2",
    "Qh",
    "Qc",
    "W",
    "eta",
    "regime",
    "method",
    "imag_residue",
    "trunc_mass",
    "diagnostic",
];

/// Evaluate every grid point with every method in `method`.
///
/// Points where a model has no bound level or a special function leaves its
/// range become `nan` rows with the reason in `diagnostic`.
pub fn run_sweep(grid: &SweepGrid, cycle: Cycle, method: Method) -> Result<Vec<OutputRecord>> {
    grid.check_cycle(cycle)?;
    let points = grid.points();
    let rows: Vec<Vec<OutputRecord>> = points
        .par_iter()
        .map(|(a, b, params)| {
            method
                .tags()
                .iter()
                .map(|&m| OutputRecord::from_result(*a, *b, m, evaluate_point(params, cycle, m)))
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn write_csv<W: Write>(records: &[OutputRecord], out: W) -> std::io::Result<()> {
    // Surface the underlying I/O error so callers can see its kind.
    let unwrap_io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(unwrap_io)?;
    for r in records {
        let n = r.numbers();
        let mut row: Vec<String> = n[..6].iter().map(|&x| format_number(x)).collect();
        row.push(r.regime.clone());
        row.push(r.method.clone());
        row.extend(n[6..].iter().map(|&x| format_number(x)));
        row.push(r.diagnostic.clone());
        w.write_record(&row).map_err(unwrap_io)?;
    }
    w.flush()
}

/// JSON array of records; non-finite numbers become `null`.
pub fn write_json<W: Write>(records: &[OutputRecord], mut out: W) -> std::io::Result<()> {
    let num = |x: f64| {
        if x.is_finite() {
            serde_json::json!(x)
        } else {
            serde_json::Value::Null
        }
    };
    let rows: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "axis1": num(r.axis1),
                "axis2": num(r.axis2),
                "Qh": num(r.q_hot),
                "Qc": num(r.q_cold),
                "W": num(r.work),
                "eta": num(r.eta),
                "regime": r.regime,
                "method": r.method,
                "imag_residue": num(r.imag_residue),
                "trunc_mass": num(r.trunc_mass),
                "diagnostic": r.diagnostic,
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::Regime;

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        assert!("beta".parse::<Param>().is_err());
        assert_eq!("otto-dissoc".parse::<Cycle>().unwrap(), Cycle::OttoDissoc);
        assert_eq!("both".parse::<Method>().unwrap(), Method::Both);
    }

    #[test]
    fn axis_values_hit_both_ends() {
        let a = Axis::new(Param::Q, 0.1, 1.0, 50);
        let v = a.values();
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[49], 1.0);
    }

    #[test]
    fn grid_validation() {
        let p = PointParams::default();
        assert!(SweepGrid::new(Axis::new(Param::DE, 5.0, 15.0, 1), Axis::new(Param::Q, 0.1, 1.0, 3), p).is_err());
        assert!(SweepGrid::new(Axis::new(Param::DE, 5.0, 5.0, 3), Axis::new(Param::Q, 0.1, 1.0, 3), p).is_err());
        assert!(SweepGrid::new(Axis::new(Param::Q, 0.2, 1.0, 3), Axis::new(Param::Q, 0.1, 1.0, 3), p).is_err());
        let g = SweepGrid::new(Axis::new(Param::QH, 0.5, 1.0, 3), Axis::new(Param::QC, 0.5, 1.0, 3), p).unwrap();
        assert!(g.check_cycle(Cycle::OttoWidth).is_err());
        assert!(g.check_cycle(Cycle::OttoDeform).is_ok());
    }

    #[test]
    fn degenerate_width_protocol_point() {
        let mut p = PointParams::default();
        p.alpha_c = p.alpha_h;
        let r = evaluate_point(&p, Cycle::OttoWidth, Method::Sum).unwrap();
        assert_eq!(r.work, 0.0);
        assert_eq!(r.regime, Regime::Degenerate);
    }

    #[test]
    fn trivial_degenerate_sweep() {
        let mut fixed = PointParams::default();
        fixed.q_c = fixed.q_h;
        let grid = SweepGrid::new(
            Axis::new(Param::DE, 8.0, 12.0, 2),
            Axis::new(Param::Alpha, 1.0, 2.0, 2),
            fixed,
        )
        .unwrap();
        let rows = run_sweep(&grid, Cycle::OttoDeform, Method::Sum).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.work == 0.0));
    }

    #[test]
    fn invalid_points_carry_a_reason() {
        let grid = SweepGrid::new(
            Axis::new(Param::DE, 0.01, 10.0, 2),
            Axis::new(Param::Q, 0.1, 1.0, 2),
            PointParams::default(),
        )
        .unwrap();
        let rows = run_sweep(&grid, Cycle::OttoWidth, Method::Both).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].method, "sum");
        assert_eq!(rows[1].method, "closed");
        for r in &rows {
            if r.numbers().iter().any(|x| x.is_nan()) {
                assert!(!r.diagnostic.is_empty(), "{r:?}");
            }
        }
        assert!(rows[0].work.is_nan());
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("axis1,axis2,Qh,Qc,W,eta,regime,method,imag_residue,trunc_mass,diagnostic\n"));
        assert!(text.contains("nan"));
        let mut buf = Vec::new();
        write_json(&rows, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(parsed[0]["W"].is_null());
    }
}
