//! Shared result type for Carnot and Otto evaluations.

use std::fmt;

use serde::Serialize;

/// Operating regime read off the signs of the heats and the work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `Q_h > 0, Q_c < 0, W > 0`.
    Engine,
    /// `Q_h < 0, Q_c > 0, W < 0`.
    Refrigerator,
    /// `Q_h < 0, Q_c < 0, W < 0`.
    Heater,
    /// `Q_h > 0, Q_c < 0, W < 0`.
    Accelerator,
    /// Work vanishes to rounding.
    Degenerate,
    Unclassified,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Heater => "heater",
            Regime::Accelerator => "accelerator",
            Regime::Degenerate => "degenerate",
            Regime::Unclassified => "unclassified",
        }
    }

    /// Classify from the signs of `q_hot`, `q_cold` and `work`.
    pub fn classify(q_hot: f64, q_cold: f64, work: f64) -> Regime {
        let scale = q_hot.abs().max(q_cold.abs());
        if work.abs() <= 1e-12 * scale || scale == 0.0 {
            return Regime::Degenerate;
        }
        match (q_hot > 0.0, q_cold > 0.0, work > 0.0) {
            (true, false, true) if q_cold < 0.0 => Regime::Engine,
            (false, true, false) if q_hot < 0.0 => Regime::Refrigerator,
            (false, false, false) if q_hot < 0.0 && q_cold < 0.0 => Regime::Heater,
            (true, false, false) if q_cold < 0.0 => Regime::Accelerator,
            _ => Regime::Unclassified,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Side information attached to a cycle evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Thermal probability outside the common level range of the two strokes.
    pub truncated_mass: f64,
    /// Largest magnitude of the imaginary parts discarded by a closed form.
    pub imag_residue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleResult {
    pub q_hot: f64,
    pub q_cold: f64,
    pub work: f64,
    /// `W / Q_h`, defined only when heat flows in from the hot bath.
    pub efficiency: Option<f64>,
    pub regime: Regime,
    pub diagnostics: Diagnostics,
}

impl CycleResult {
    /// Result with `W = Q_h + Q_c`, efficiency and regime derived from the heats.
    pub fn from_heats(q_hot: f64, q_cold: f64, diagnostics: Diagnostics) -> Self {
        let work = q_hot + q_cold;
        Self::with_work(q_hot, q_cold, work, diagnostics)
    }

    /// Result whose work was evaluated separately from the heats.
    pub fn with_work(q_hot: f64, q_cold: f64, work: f64, diagnostics: Diagnostics) -> Self {
        CycleResult {
            q_hot,
            q_cold,
            work,
            efficiency: (q_hot > 0.0).then(|| work / q_hot),
            regime: Regime::classify(q_hot, q_cold, work),
            diagnostics,
        }
    }

    pub fn is_engine(&self) -> bool {
        self.regime == Regime::Engine
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_patterns() {
        assert_eq!(Regime::classify(3.0, -1.0, 2.0), Regime::Engine);
        assert_eq!(Regime::classify(-3.0, 1.0, -2.0), Regime::Refrigerator);
        assert_eq!(Regime::classify(-3.0, -1.0, -4.0), Regime::Heater);
        assert_eq!(Regime::classify(1.0, -3.0, -2.0), Regime::Accelerator);
        assert_eq!(Regime::classify(1.0, -1.0, 0.0), Regime::Degenerate);
        assert_eq!(Regime::classify(0.0, 0.0, 0.0), Regime::Degenerate);
        assert_eq!(Regime::classify(1.0, 1.0, 2.0), Regime::Unclassified);
    }

    #[test]
    fn efficiency_only_with_heat_input() {
        let r = CycleResult::from_heats(10.0, -2.0, Diagnostics::default());
        assert_eq!(r.work, 8.0);
        assert_eq!(r.efficiency, Some(0.8));
        assert!(r.is_engine());
        let r = CycleResult::from_heats(-1.0, 3.0, Diagnostics::default());
        assert_eq!(r.efficiency, None);
    }
}
