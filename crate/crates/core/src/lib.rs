//! Quantum Carnot and Otto heat engines whose working medium is a
//! q-deformed Morse oscillator.
//!
//! Every thermodynamic quantity has two evaluations: a sum over the bound
//! levels, which is exact for the model, and a continuum closed form built
//! from `erfc`/`erfi`. The sums are authoritative; the closed forms are
//! checked against them.

pub mod carnot;
pub mod cycle;
pub mod error;
pub mod otto;
pub mod specfun;
pub mod spectrum;
pub mod sweep;
pub mod thermo;
pub mod verify;

pub use carnot::{CarnotMode, CarnotSpec};
pub use cycle::{CycleResult, Diagnostics, Regime};
pub use error::{Error, Result};
pub use otto::{OttoProtocol, OttoSpec};
pub use specfun::ComplexValue;
pub use spectrum::{BoundSpectrum, MorseModel, Units};
pub use sweep::{Cycle, Method, OutputRecord, Param, PointParams, SweepGrid};
pub use thermo::{ThermalEnvironment, ThermalState};
