//! Angle sweeps and RCS-diversity metrics.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::Beam;
use crate::error::{Error, Result};
use crate::scattering::{anisotropic_oam_rcs, oam_rcs_ratio, plane_two_sphere_ratio, two_sphere_oam_ratio};
use crate::scene::{TargetModel, TwoSphereLayout};
use crate::textio::format_sig9;

/// Default sweep resolution, 0.1°.
pub const DEFAULT_GRID_POINTS: usize = 3600;

/// Default peak threshold as a fraction of the curve maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.5;

/// Angles closer than this (degrees) are treated as the same grid point.
const GRID_SNAP_DEG: f64 = 1e-9;

/// `n` evenly spaced observation angles over `[0°, 360°)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleGrid {
    points: usize,
}

impl AngleGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid(format!(
                "angle grid needs at least 2 points, got {points}"
            )));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degrees(&self, i: usize) -> f64 {
        i as f64 * 360.0 / self.points as f64
    }

    pub fn radians(&self, i: usize) -> f64 {
        i as f64 * TAU / self.points as f64
    }

    pub fn all_degrees(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.degrees(i)).collect()
    }
}

impl Default for AngleGrid {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveUnit {
    /// σ/σ0
    Ratio,
    SquareMeters,
    Dbsm,
}

impl CurveUnit {
    pub fn is_db(self) -> bool {
        self == CurveUnit::Dbsm
    }
}

/// RCS sampled over observation angle.
#[derive(Debug, Clone, PartialEq)]
pub struct RcsCurve {
    angles_deg: Vec<f64>,
    values: Vec<f64>,
    pub label: String,
    pub unit: CurveUnit,
}

impl RcsCurve {
    pub fn new(angles_deg: Vec<f64>, values: Vec<f64>, label: impl Into<String>, unit: CurveUnit) -> Result<Self> {
        if angles_deg.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} angles but {} values",
                angles_deg.len(),
                values.len()
            )));
        }
        if angles_deg.len() < 2 {
            return Err(Error::invalid("a curve needs at least 2 points"));
        }
        if angles_deg.iter().any(|a| !(0.0..360.0).contains(a)) || angles_deg.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "curve angles must be strictly increasing within [0, 360)",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("curve values must be finite"));
        }
        if !unit.is_db() && values.iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("linear RCS values must be non-negative"));
        }
        Ok(Self {
            angles_deg,
            values,
            label: label.into(),
            unit,
        })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn same_grid(&self, other: &RcsCurve) -> bool {
        self.angles_deg.len() == other.angles_deg.len()
            && self
                .angles_deg
                .iter()
                .zip(&other.angles_deg)
                .all(|(a, b)| (a - b).abs() <= GRID_SNAP_DEG)
    }

    /// Largest gap between consecutive samples, not counting the wrap.
    fn max_step(&self) -> f64 {
        self.angles_deg.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    fn wraps(&self) -> bool {
        let gap = 360.0 - self.angles_deg[self.len() - 1] + self.angles_deg[0];
        gap <= self.max_step() * (1.0 + 1e-9)
    }

    /// Value at `angle_deg`, linearly interpolated. The wrap segment across
    /// 0°/360° is used only when the curve covers the full circle evenly
    /// enough (wrap gap no larger than the largest interior step).
    pub fn value_at(&self, angle_deg: f64) -> Result<f64> {
        if !angle_deg.is_finite() {
            return Err(Error::OutsideGrid(angle_deg));
        }
        let x = angle_deg.rem_euclid(360.0);
        let a = &self.angles_deg;
        let n = a.len();
        let hi = a.partition_point(|&v| v <= x);
        // bracketing samples, the wrap segment shifted by ±360°
        let (lo, up) = match hi {
            0 => ((a[n - 1] - 360.0, n - 1), (a[0], 0)),
            h if h == n => ((a[n - 1], n - 1), (a[0] + 360.0, 0)),
            h => ((a[h - 1], h - 1), (a[h], h)),
        };
        if (x - lo.0).abs() <= GRID_SNAP_DEG {
            return Ok(self.values[lo.1]);
        }
        if (up.0 - x).abs() <= GRID_SNAP_DEG {
            return Ok(self.values[up.1]);
        }
        if (hi == 0 || hi == n) && !self.wraps() {
            return Err(Error::OutsideGrid(angle_deg));
        }
        let (v0, v1) = (self.values[lo.1], self.values[up.1]);
        Ok(v0 + (x - lo.0) / (up.0 - lo.0) * (v1 - v0))
    }

    /// Scales the curve so its value at `angle_deg` becomes `target`:
    /// additive for dB curves, multiplicative otherwise.
    pub fn shifted_to(&self, angle_deg: f64, target: f64) -> Result<RcsCurve> {
        let at = self.value_at(angle_deg)?;
        let values = if self.unit.is_db() {
            let offset = target - at;
            self.values.iter().map(|v| v + offset).collect()
        } else {
            if at <= 0.0 {
                return Err(Error::invalid(format!(
                    "curve `{}` is zero at {angle_deg}°, cannot scale it",
                    self.label
                )));
            }
            let scale = target / at;
            self.values.iter().map(|v| v * scale).collect()
        };
        Ok(RcsCurve {
            angles_deg: self.angles_deg.clone(),
            values,
            label: self.label.clone(),
            unit: self.unit,
        })
    }

    /// `angle_deg,<column>` CSV with 9 significant digits.
    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("angle_deg,{column}\n");
        for (a, v) in self.angles_deg.iter().zip(&self.values) {
            out.push_str(&format_sig9(*a));
            out.push(',');
            out.push_str(&format_sig9(*v));
            out.push('\n');
        }
        out
    }
}

/// `angle_deg,<label1>,<label2>,…` for curves sharing one grid.
pub fn curves_to_csv(curves: &[RcsCurve]) -> Result<String> {
    let first = curves.first().ok_or_else(|| Error::invalid("no curves to write"))?;
    check_grids(curves)?;
    let mut out = String::from("angle_deg");
    for c in curves {
        out.push(',');
        out.push_str(&c.label);
    }
    out.push('\n');
    for (i, a) in first.angles_deg.iter().enumerate() {
        out.push_str(&format_sig9(*a));
        for c in curves {
            out.push(',');
            out.push_str(&format_sig9(c.values[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

fn check_grids(curves: &[RcsCurve]) -> Result<()> {
    if let Some(first) = curves.first() {
        if let Some(bad) = curves.iter().find(|c| !first.same_grid(c)) {
            return Err(Error::GridMismatch(format!("`{}` and `{}`", first.label, bad.label)));
        }
    }
    Ok(())
}

fn collect_sweep<F>(grid: AngleGrid, label: String, unit: CurveUnit, eval: F) -> Result<RcsCurve>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            eval(grid.radians(i)).map_err(|e| Error::AtAngle {
                angle_deg: grid.degrees(i),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    RcsCurve::new(grid.all_degrees(), values, label, unit)
}

/// Two-sphere ratio over the grid: the plane-wave form for plane beams, the
/// gain-cancelled closed form for OAM beams.
pub fn sweep_two_sphere(layout: &TwoSphereLayout, beam: &Beam, grid: AngleGrid) -> Result<RcsCurve> {
    layout.validate()?;
    let (d, y0) = (layout.spacing, layout.standoff);
    match beam {
        Beam::Plane(p) => {
            let k = p.wavenumber;
            collect_sweep(grid, beam.label(), CurveUnit::Ratio, |phi| {
                Ok(plane_two_sphere_ratio(k, d, phi).value())
            })
        }
        Beam::Oam(o) => {
            let (mode, k, kz) = (o.mode, o.wavenumber, o.axial_wavenumber);
            collect_sweep(grid, beam.label(), CurveUnit::Ratio, |phi| {
                Ok(two_sphere_oam_ratio(mode, k, kz, d, y0, phi).value())
            })
        }
    }
}

/// Sweep of an arbitrary target: `target_at(φ)` gives the cloud at each
/// turntable angle. Targets made of identical isotropic scatterers yield the
/// σ/σ0 ratio; anything else yields absolute RCS in m².
pub fn sweep_general<F>(target_at: F, beam: &Beam, grid: AngleGrid) -> Result<RcsCurve>
where
    F: Fn(f64) -> Result<TargetModel> + Sync,
{
    let oam = beam.as_oam();
    let probe = target_at(0.0)?;
    let unit = if probe.uniform_sigma().is_some() {
        CurveUnit::Ratio
    } else {
        CurveUnit::SquareMeters
    };
    collect_sweep(grid, beam.label(), unit, |phi| {
        let target = target_at(phi)?;
        match unit {
            CurveUnit::Ratio => Ok(oam_rcs_ratio(&target, &oam)?.value()),
            _ => anisotropic_oam_rcs(&target, &oam, phi),
        }
    })
}

/// Turntable sweep: rotates `target` rigidly about its centroid.
pub fn sweep_rotating(target: &TargetModel, beam: &Beam, grid: AngleGrid) -> Result<RcsCurve> {
    sweep_general(|phi| Ok(target.rotated_about_centroid(phi)), beam, grid)
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    (sum / n as f64).sqrt()
}

/// `RMS(a − b) / RMS(a)` on a shared grid.
pub fn curve_distance(a: &RcsCurve, b: &RcsCurve) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch(format!("`{}` and `{}`", a.label, b.label)));
    }
    let norm = rms(a.values.iter().copied());
    if norm == 0.0 {
        return Err(Error::invalid(format!(
            "reference curve `{}` is identically zero",
            a.label
        )));
    }
    Ok(rms(a.values.iter().zip(&b.values).map(|(x, y)| x - y)) / norm)
}

/// Angles of local maxima at or above `prominence·max`, treating the grid as
/// periodic. The first sample of a flat-topped peak is reported.
pub fn peak_angles(curve: &RcsCurve, prominence: f64) -> Result<Vec<f64>> {
    if !(prominence > 0.0 && prominence < 1.0) {
        return Err(Error::invalid(format!(
            "prominence must lie in (0, 1), got {prominence}"
        )));
    }
    let v = &curve.values;
    let n = v.len();
    let threshold = prominence * curve.max();
    let periodic = curve.wraps();
    let mut peaks = Vec::new();
    for i in 0..n {
        let (prev, next) = match (i, periodic) {
            (0, true) => (v[n - 1], v[1]),
            (j, true) if j == n - 1 => (v[j - 1], v[0]),
            (0, false) => continue,
            (j, false) if j == n - 1 => continue,
            (j, _) => (v[j - 1], v[j + 1]),
        };
        if v[i] > prev && v[i] >= next && v[i] >= threshold {
            peaks.push(curve.angles_deg[i]);
        }
    }
    Ok(peaks)
}

/// `max_φ |f(180° − φ) − f(φ)| / max f`; zero for curves symmetric about 90°.
pub fn mirror_asymmetry(curve: &RcsCurve) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (a, v) in curve.angles_deg.iter().zip(&curve.values) {
        let mirrored = curve.value_at((180.0 - a).rem_euclid(360.0))?;
        worst = worst.max((mirrored - v).abs());
    }
    let m = curve.max();
    Ok(if m > 0.0 { worst / m } else { worst })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    pub labels: Vec<String>,
    /// `d[i][j] = RMS(c_i − c_j) / RMS(c_0)`; row 0 equals
    /// `curve_distance(c_0, c_j)`.
    pub distance_matrix: Vec<Vec<f64>>,
    pub distance_to_reference: Vec<f64>,
    pub peak_angles_deg: Vec<Vec<f64>>,
    /// Index of the strongest curve at each grid angle (ties go to the lowest index).
    pub best_curve_index: Vec<usize>,
    pub mirror_asymmetry: Vec<f64>,
    pub prominence: f64,
}

/// Cross-curve diversity metrics. The first curve is the reference (usually
/// the plane-wave curve).
pub fn diversity_report(curves: &[RcsCurve], prominence: f64) -> Result<DiversityReport> {
    if curves.len() < 2 {
        return Err(Error::invalid("diversity report needs at least two curves"));
    }
    check_grids(curves)?;
    let reference = &curves[0];
    let norm = rms(reference.values.iter().copied());
    if norm == 0.0 {
        return Err(Error::invalid(format!(
            "reference curve `{}` is identically zero",
            reference.label
        )));
    }
    let m = curves.len();
    let mut distance_matrix = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = rms(curves[i].values.iter().zip(&curves[j].values).map(|(x, y)| x - y)) / norm;
            distance_matrix[i][j] = d;
            distance_matrix[j][i] = d;
        }
    }
    let best_curve_index = (0..reference.len())
        .map(|k| {
            let mut best = 0;
            for (i, c) in curves.iter().enumerate() {
                if c.values[k] > curves[best].values[k] {
                    best = i;
                }
            }
            best
        })
        .collect();
    Ok(DiversityReport {
        labels: curves.iter().map(|c| c.label.clone()).collect(),
        distance_to_reference: distance_matrix[0].clone(),
        distance_matrix,
        peak_angles_deg: curves
            .iter()
            .map(|c| peak_angles(c, prominence))
            .collect::<Result<_>>()?,
        best_curve_index,
        mirror_asymmetry: curves.iter().map(mirror_asymmetry).collect::<Result<_>>()?,
        prominence,
    })
}
