//! Turntable measurement reduction.
//!
//! Received power is turned into RCS with the monostatic radar equation
//!
//! ```text
//! σ = P_r·(4π)³·R⁴ / (P_t·G_t·G_r·λ²)
//! ```
//!
//! Powers and gains cross the API in dBm/dB and are converted to linear
//! exactly once, inside [`rcs_from_link_budget`] and
//! [`predicted_received_power`].
//!
//! The nominal chamber settings (28 dBm transmit, 20 dBm receive, 16 dB
//! antennas at 8.5 m) give σ ≈ 1.15×10⁶ m² when taken as one link budget,
//! far above what two 0.2 m spheres can return. They are equipment
//! settings rather than a consistent budget; the equation is applied as is.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{CurveUnit, RcsCurve};
use crate::error::{Error, Result};
use crate::textio;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub pt_dbm: f64,
    pub pr_dbm: f64,
    pub gt_db: f64,
    pub gr_db: f64,
    pub range_m: f64,
    pub wavelength_m: f64,
}

/// A link budget without the received power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmitBudget {
    pub pt_dbm: f64,
    pub gt_db: f64,
    pub gr_db: f64,
    pub range_m: f64,
    pub wavelength_m: f64,
}

impl LinkBudget {
    pub fn transmit(&self) -> TransmitBudget {
        TransmitBudget {
            pt_dbm: self.pt_dbm,
            gt_db: self.gt_db,
            gr_db: self.gr_db,
            range_m: self.range_m,
            wavelength_m: self.wavelength_m,
        }
    }
}

impl TransmitBudget {
    pub fn with_received(&self, pr_dbm: f64) -> LinkBudget {
        LinkBudget {
            pt_dbm: self.pt_dbm,
            pr_dbm,
            gt_db: self.gt_db,
            gr_db: self.gr_db,
            range_m: self.range_m,
            wavelength_m: self.wavelength_m,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.range_m.is_finite() && self.range_m > 0.0) {
            return Err(Error::invalid(format!("range must be positive, got {}", self.range_m)));
        }
        if !(self.wavelength_m.is_finite() && self.wavelength_m > 0.0) {
            return Err(Error::invalid(format!(
                "wavelength must be positive, got {}",
                self.wavelength_m
            )));
        }
        if ![self.pt_dbm, self.gt_db, self.gr_db].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("powers and gains must be finite"));
        }
        Ok(())
    }

    /// `(4π)³·R⁴ / (P_t·G_t·G_r·λ²)` with `P_t` in mW.
    fn geometry_factor(&self) -> f64 {
        let four_pi = 4.0 * PI;
        let pt = db_to_linear(self.pt_dbm);
        let gains = db_to_linear(self.gt_db) * db_to_linear(self.gr_db);
        four_pi.powi(3) * self.range_m.powi(4) / (pt * gains * self.wavelength_m.powi(2))
    }
}

/// RCS in m² from a measured link budget.
pub fn rcs_from_link_budget(budget: &LinkBudget) -> Result<f64> {
    let tx = budget.transmit();
    tx.validate()?;
    if !budget.pr_dbm.is_finite() {
        return Err(Error::invalid("received power must be finite"));
    }
    Ok(db_to_linear(budget.pr_dbm) * tx.geometry_factor())
}

/// Received power in dBm for a target of RCS `sigma`. Zero RCS gives
/// `-inf` dBm.
pub fn predicted_received_power(sigma: f64, budget: &TransmitBudget) -> Result<f64> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::NegativeRcs(sigma));
    }
    budget.validate()?;
    if sigma == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(10.0 * (sigma / budget.geometry_factor()).log10())
}

fn default_freq_ghz() -> f64 {
    10.0
}
fn default_range_m() -> f64 {
    8.5
}
fn default_gain_db() -> f64 {
    16.0
}
fn default_pt_dbm() -> f64 {
    28.0
}
fn default_pr_dbm() -> f64 {
    20.0
}
fn default_height_m() -> f64 {
    1.5
}
fn default_sphere_radius_m() -> f64 {
    0.2
}
fn default_sphere_spacing_m() -> f64 {
    0.4
}
fn default_rotation() -> f64 {
    1.0
}

/// Chamber configuration. Every key is optional in JSON and defaults to the
/// reference two-sphere experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    #[serde(default = "default_freq_ghz")]
    pub freq_ghz: f64,
    #[serde(default = "default_range_m")]
    pub range_m: f64,
    #[serde(default = "default_gain_db")]
    pub gt_db: f64,
    #[serde(default = "default_gain_db")]
    pub gr_db: f64,
    #[serde(default = "default_pt_dbm")]
    pub pt_dbm: f64,
    /// Nominal receive level; sweeps carry their own.
    #[serde(default = "default_pr_dbm")]
    pub pr_dbm: f64,
    #[serde(default = "default_height_m")]
    pub height_m: f64,
    #[serde(default = "default_sphere_radius_m")]
    pub sphere_radius_m: f64,
    #[serde(default = "default_sphere_spacing_m")]
    pub sphere_spacing_m: f64,
    #[serde(default = "default_rotation")]
    pub rotation_rad_per_min: f64,
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self {
            freq_ghz: default_freq_ghz(),
            range_m: default_range_m(),
            gt_db: default_gain_db(),
            gr_db: default_gain_db(),
            pt_dbm: default_pt_dbm(),
            pr_dbm: default_pr_dbm(),
            height_m: default_height_m(),
            sphere_radius_m: default_sphere_radius_m(),
            sphere_spacing_m: default_sphere_spacing_m(),
            rotation_rad_per_min: default_rotation(),
        }
    }
}

impl MeasurementConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("freq_ghz", self.freq_ghz),
            ("range_m", self.range_m),
            ("height_m", self.height_m),
            ("sphere_radius_m", self.sphere_radius_m),
            ("sphere_spacing_m", self.sphere_spacing_m),
            ("rotation_rad_per_min", self.rotation_rad_per_min),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("gt_db", self.gt_db),
            ("gr_db", self.gr_db),
            ("pt_dbm", self.pt_dbm),
            ("pr_dbm", self.pr_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// `c/f`.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / (self.freq_ghz * 1e9)
    }

    pub fn transmit_budget(&self) -> TransmitBudget {
        TransmitBudget {
            pt_dbm: self.pt_dbm,
            gt_db: self.gt_db,
            gr_db: self.gr_db,
            range_m: self.range_m,
            wavelength_m: self.wavelength_m(),
        }
    }

    pub fn link_budget(&self) -> LinkBudget {
        self.transmit_budget().with_received(self.pr_dbm)
    }

    pub fn from_json_str(text: &str, source_name: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Format {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|e| Error::Format {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&textio::read_to_string(path)?, &path.display().to_string())
    }
}

/// Received power over a full turntable revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoSweep {
    samples: Vec<(f64, f64)>,
    pub label: String,
}

impl EchoSweep {
    pub fn new(samples: Vec<(f64, f64)>, label: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("echo sweep has no samples"));
        }
        for (i, &(a, p)) in samples.iter().enumerate() {
            if !(0.0..360.0).contains(&a) || !p.is_finite() {
                return Err(Error::invalid(format!("bad sample ({a}°, {p} dBm)")));
            }
            if i > 0 && a <= samples[i - 1].0 {
                return Err(Error::invalid("echo sweep angles must be strictly increasing"));
            }
        }
        Ok(Self {
            samples,
            label: label.into(),
        })
    }

    /// `(angle °, received dBm)` pairs.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn shifted(&self, offset_db: f64) -> EchoSweep {
        EchoSweep {
            samples: self.samples.iter().map(|&(a, p)| (a, p + offset_db)).collect(),
            label: self.label.clone(),
        }
    }

    fn as_db_curve(&self) -> Result<RcsCurve> {
        let (a, v) = self.samples.iter().copied().unzip();
        RcsCurve::new(a, v, self.label.clone(), CurveUnit::Dbsm)
    }
}

/// Parses `angle_deg,p_r_dbm` rows.
pub fn parse_echo_sweep_csv(text: &str, source_name: &str) -> Result<EchoSweep> {
    let (_, rows) = textio::read_rows(text, source_name, &["angle_deg", "p_r_dbm"], &[])?;
    if rows.is_empty() {
        return Err(Error::Format {
            source_name: source_name.to_string(),
            message: "echo sweep has no samples".into(),
        });
    }
    let mut samples = Vec::with_capacity(rows.len());
    for row in &rows {
        samples.push((
            row.number(source_name, 0, "angle_deg")?,
            row.number(source_name, 1, "p_r_dbm")?,
        ));
    }
    let angles: Vec<f64> = samples.iter().map(|s| s.0).collect();
    textio::check_angle_column(source_name, &rows, &angles)?;
    EchoSweep::new(samples, source_name)
}

pub fn load_echo_sweep(path: &Path) -> Result<EchoSweep> {
    let mut sweep = parse_echo_sweep_csv(&textio::read_to_string(path)?, &path.display().to_string())?;
    sweep.label = path
        .file_stem()
        .map_or_else(|| "sweep".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(sweep)
}

/// Applies the radar equation at every angle; result in dBsm.
pub fn reduce_sweep_to_rcs(sweep: &EchoSweep, cfg: &MeasurementConfig) -> Result<RcsCurve> {
    cfg.validate()?;
    let tx = cfg.transmit_budget();
    let mut angles = Vec::with_capacity(sweep.len());
    let mut values = Vec::with_capacity(sweep.len());
    for &(a, pr) in &sweep.samples {
        let sigma = rcs_from_link_budget(&tx.with_received(pr))?;
        angles.push(a);
        values.push(10.0 * sigma.log10());
    }
    RcsCurve::new(angles, values, sweep.label.clone(), CurveUnit::Dbsm)
}

/// Brings every curve to the first curve's level at `ref_angle_deg`
/// (additively in dB, multiplicatively in linear units). Angles are never
/// shifted.
pub fn align_at_reference(curves: &[RcsCurve], ref_angle_deg: f64) -> Result<Vec<RcsCurve>> {
    let Some(first) = curves.first() else {
        return Ok(Vec::new());
    };
    if let Some(bad) = curves.iter().find(|c| c.unit.is_db() != first.unit.is_db()) {
        return Err(Error::invalid(format!(
            "cannot align `{}` ({:?}) with `{}` ({:?})",
            bad.label, bad.unit, first.label, first.unit
        )));
    }
    let target = first.value_at(ref_angle_deg)?;
    curves.iter().map(|c| c.shifted_to(ref_angle_deg, target)).collect()
}

/// Same alignment applied to raw sweeps in dBm.
pub fn align_sweeps_at_reference(sweeps: &[EchoSweep], ref_angle_deg: f64) -> Result<Vec<EchoSweep>> {
    let Some(first) = sweeps.first() else {
        return Ok(Vec::new());
    };
    let target = first.as_db_curve()?.value_at(ref_angle_deg)?;
    sweeps
        .iter()
        .map(|s| Ok(s.shifted(target - s.as_db_curve()?.value_at(ref_angle_deg)?)))
        .collect()
}
