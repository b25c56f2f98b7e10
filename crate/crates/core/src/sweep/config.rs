use serde::Deserialize;

use super::{Axis, PointParams, SweepGrid};
use crate::carnot::CarnotMode;
use crate::error::{Error, Result};
use crate::spectrum::Units;

/// A run configuration read from one JSON document.
///
/// Every section and field is optional and falls back to the defaults in
/// [`PointParams`]. Unknown fields are rejected with their JSON path.
///
/// ```json
/// {
///   "units":  { "hbar": 1, "mu": 500, "re": 1, "kB": 1 },
///   "model":  { "De": 10, "alpha": 2, "q": 1 },
///   "baths":  { "Th": 10, "Tc": 2 },
///   "carnot": { "alpha_h": 2.236, "alpha_c": 1, "mode": "paper" },
///   "otto":   { "alpha_h": 2.236, "alpha_c": 1, "q_h": 1, "q_c": 0.8, "D_h": 10, "D_c": 5 },
///   "grid":   { "axis1": { "param": "D_e", "min": 5, "max": 15, "steps": 50 },
///               "axis2": { "param": "q", "min": 0.1, "max": 1, "steps": 50 } }
/// }
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub units: Units,
    pub model: ModelSection,
    pub baths: BathSection,
    pub carnot: CarnotSection,
    pub otto: OttoSection,
    pub grid: Option<GridSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    #[serde(rename = "De")]
    pub d_e: Option<f64>,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathSection {
    #[serde(rename = "Th")]
    pub t_h: Option<f64>,
    #[serde(rename = "Tc")]
    pub t_c: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarnotSection {
    pub alpha_h: Option<f64>,
    pub alpha_c: Option<f64>,
    pub mode: CarnotMode,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OttoSection {
    pub alpha_h: Option<f64>,
    pub alpha_c: Option<f64>,
    pub q_h: Option<f64>,
    pub q_c: Option<f64>,
    #[serde(rename = "D_h")]
    pub d_h: Option<f64>,
    #[serde(rename = "D_c")]
    pub d_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub axis1: Axis,
    pub axis2: Axis,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config {
                path: if path.is_empty() { ".".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        config.units.validate().map_err(|e| Error::Config {
            path: "units".into(),
            message: e.to_string(),
        })?;
        Ok(config)
    }

    /// Point parameters with every configured field applied.
    ///
    /// `carnot` and `otto` both set `alpha_h`/`alpha_c`; the Carnot section is
    /// applied last, so a config meant for one cycle should fill only its own
    /// section.
    pub fn point_params(&self) -> PointParams {
        let mut p = PointParams {
            units: self.units,
            carnot_mode: self.carnot.mode,
            ..PointParams::default()
        };
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.d_e, self.model.d_e);
        set(&mut p.alpha, self.model.alpha);
        set(&mut p.q, self.model.q);
        set(&mut p.t_h, self.baths.t_h);
        set(&mut p.t_c, self.baths.t_c);
        set(&mut p.alpha_h, self.otto.alpha_h);
        set(&mut p.alpha_c, self.otto.alpha_c);
        set(&mut p.q_h, self.otto.q_h);
        set(&mut p.q_c, self.otto.q_c);
        set(&mut p.d_h, self.otto.d_h);
        set(&mut p.d_c, self.otto.d_c);
        set(&mut p.alpha_h, self.carnot.alpha_h);
        set(&mut p.alpha_c, self.carnot.alpha_c);
        p
    }

    /// The sweep grid, or a config error when the document has none.
    pub fn sweep_grid(&self) -> Result<SweepGrid> {
        let g = self.grid.as_ref().ok_or_else(|| Error::Config {
            path: "grid".into(),
            message: "a sweep needs a grid section".into(),
        })?;
        SweepGrid::new(g.axis1, g.axis2, self.point_params())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Param;

    #[test]
    fn empty_document_gives_defaults() {
        let c = Config::from_json("{}").unwrap();
        assert_eq!(c.point_params(), PointParams::default());
        assert!(c.sweep_grid().is_err());
    }

    #[test]
    fn full_document() {
        let c = Config::from_json(
            r#"{"units":{"mu":500},"model":{"De":12,"q":0.9},"baths":{"Th":8,"Tc":1},
                "carnot":{"mode":"strict"},
                "grid":{"axis1":{"param":"D_e","min":5,"max":15,"steps":3},
                        "axis2":{"param":"q","min":0.5,"max":1,"steps":2}}}"#,
        )
        .unwrap();
        let p = c.point_params();
        assert_eq!((p.d_e, p.q, p.t_h, p.t_c, p.units.mu), (12.0, 0.9, 8.0, 1.0, 500.0));
        assert_eq!(p.carnot_mode, CarnotMode::Strict);
        let g = c.sweep_grid().unwrap();
        assert_eq!(g.axis1.param, Param::DE);
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn errors_carry_the_field_path() {
        let cases = [
            (r#"{"model":{"De":"ten"}}"#, "model.De"),
            (r#"{"baths":{"Tx":1}}"#, "baths"),
            (r#"{"grid":{"axis1":{"param":"beta","min":0,"max":1,"steps":2},"axis2":{"param":"q","min":0,"max":1,"steps":2}}}"#, "grid.axis1.param"),
            (r#"{"units":{"mu":-1}}"#, "units"),
        ];
        for (text, want) in cases {
            match Config::from_json(text) {
                Err(Error::Config { path, .. }) => assert!(path.starts_with(want), "{path} vs {want}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
