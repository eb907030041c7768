//! RCS diversity under plane-wave and non-divergent OAM illumination.
//!
//! - [`scene`]: point-scatterer targets and the two-sphere layout
//! - [`beam`]: plane and OAM beams, gain patterns, wavefront mode estimation
//! - [`antenna`]: arc waveguide radius for a given equivalent mode
//! - [`scattering`]: plane-wave, general and closed-form RCS ratios
//! - [`analysis`]: angle sweeps and diversity metrics
//! - [`measurement`]: radar-equation reduction of turntable sweeps

pub mod analysis;
pub mod antenna;
pub mod beam;
pub mod error;
pub mod measurement;
pub mod scattering;
pub mod scene;
pub mod textio;

pub use analysis::{AngleGrid, CurveUnit, DiversityReport, RcsCurve};
pub use beam::{Beam, GainPattern, OamBeam, PlaneWaveBeam, WavefrontSample};
pub use error::{Error, Result};
pub use measurement::{EchoSweep, LinkBudget, MeasurementConfig};
pub use scattering::{EchoField, RcsRatio};
pub use scene::{RcsProfile, ScattererPoint, TargetModel, TwoSphereLayout, Vec3};
