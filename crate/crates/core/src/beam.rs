//! Illuminating fields: plane waves and non-divergent OAM pencil beams.
//!
//! An OAM beam here is characterized only by what the echo model consumes:
//! a real gain pattern and the helical azimuthal phase `ℓ·atan2(y, x)`
//! about the beam (z) axis. Inside the main lobe the wavefront phase is
//! linear in observation angle with slope ℓ, which is what
//! [`estimate_mode_from_wavefront`] recovers from measured cuts.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::Vec3;
use crate::textio;

/// Tilt of the partial-arc antenna used in the turntable measurements.
pub const TILT_PRESET_DEG: f64 = 18.0;

/// Boresight gain of the measurement antennas, dB.
pub const DEFAULT_BORESIGHT_GAIN_DB: f64 = 16.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Real-valued radiation gain `g(θ, φ)` with θ the azimuth about z and φ
/// the polar angle from +z.
#[derive(Debug, Clone, PartialEq)]
pub enum GainPattern {
    Uniform(f64),
    /// `G0·exp(-4 ln2·(Δ/HPBW)²)` where Δ is the angle between the look
    /// direction and `boresight`; equals `G0/2` at half the beamwidth off axis.
    GaussianLobe {
        boresight_gain: f64,
        half_power_beamwidth: f64,
        boresight: Vec3,
    },
    /// `(polar angle rad, linear gain, phase rad)` cut, strictly increasing
    /// in angle. Gain is interpolated linearly in the polar angle and held
    /// constant beyond either end.
    Tabulated(Vec<(f64, f64, f64)>),
}

impl GainPattern {
    pub fn uniform(gain: f64) -> Result<Self> {
        check_gain(gain)?;
        Ok(GainPattern::Uniform(gain))
    }

    pub fn gaussian_lobe(boresight_gain: f64, half_power_beamwidth: f64, boresight: Vec3) -> Result<Self> {
        check_gain(boresight_gain)?;
        if !(half_power_beamwidth > 0.0 && half_power_beamwidth < PI) {
            return Err(Error::invalid(format!(
                "beamwidth must lie in (0, π), got {half_power_beamwidth}"
            )));
        }
        let n = boresight.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid("boresight direction must be a non-zero finite vector"));
        }
        Ok(GainPattern::GaussianLobe {
            boresight_gain,
            half_power_beamwidth,
            boresight: Vec3::new(boresight.x / n, boresight.y / n, boresight.z / n),
        })
    }

    pub fn tabulated(samples: Vec<(f64, f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("tabulated gain pattern needs at least one sample"));
        }
        for (i, &(angle, gain, phase)) in samples.iter().enumerate() {
            if !angle.is_finite() || !phase.is_finite() {
                return Err(Error::invalid("gain pattern angles and phases must be finite"));
            }
            check_gain(gain)?;
            if i > 0 && angle <= samples[i - 1].0 {
                return Err(Error::invalid("gain pattern angles must be strictly increasing"));
            }
        }
        Ok(GainPattern::Tabulated(samples))
    }

    /// Default analytic main lobe: 16 dB on the +z axis.
    pub fn default_lobe(half_power_beamwidth: f64) -> Result<Self> {
        Self::gaussian_lobe(
            db_to_linear(DEFAULT_BORESIGHT_GAIN_DB),
            half_power_beamwidth,
            Vec3::new(0.0, 0.0, 1.0),
        )
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, GainPattern::Uniform(_))
    }
}

fn check_gain(g: f64) -> Result<()> {
    if g.is_finite() && g > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("gain must be positive and finite, got {g}")))
    }
}

/// Linear gain at azimuth `theta` and polar angle `phi`.
pub fn gain_at(pattern: &GainPattern, theta: f64, phi: f64) -> f64 {
    match pattern {
        GainPattern::Uniform(g) => *g,
        GainPattern::GaussianLobe {
            boresight_gain,
            half_power_beamwidth,
            boresight,
        } => {
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            let look = Vec3::new(sp * ct, sp * st, cp);
            let off = look.dot(boresight).clamp(-1.0, 1.0).acos();
            let u = off / half_power_beamwidth;
            boresight_gain * (-4.0 * std::f64::consts::LN_2 * u * u).exp()
        }
        GainPattern::Tabulated(samples) => clamped_lerp(samples, phi, |s| s.1),
    }
}

/// Tabulated pattern phase at polar angle `phi`; zero for analytic patterns.
pub fn pattern_phase_at(pattern: &GainPattern, phi: f64) -> f64 {
    match pattern {
        GainPattern::Tabulated(samples) => clamped_lerp(samples, phi, |s| s.2),
        _ => 0.0,
    }
}

fn clamped_lerp(samples: &[(f64, f64, f64)], x: f64, pick: impl Fn(&(f64, f64, f64)) -> f64) -> f64 {
    let first = &samples[0];
    let last = &samples[samples.len() - 1];
    if x <= first.0 {
        return pick(first);
    }
    if x >= last.0 {
        return pick(last);
    }
    let hi = samples.partition_point(|s| s.0 <= x);
    let (a, b) = (&samples[hi - 1], &samples[hi]);
    if x == a.0 {
        return pick(a);
    }
    let t = (x - a.0) / (b.0 - a.0);
    pick(a) + t * (pick(b) - pick(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveBeam {
    pub wavenumber: f64,
}

impl PlaneWaveBeam {
    pub fn new(wavenumber: f64) -> Result<Self> {
        check_wavenumber(wavenumber)?;
        Ok(Self { wavenumber })
    }

    pub fn from_wavelength(wavelength: f64) -> Result<Self> {
        Self::new(2.0 * PI / wavelength)
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("wavenumber must be positive, got {k}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OamBeam {
    pub mode: i32,
    pub wavenumber: f64,
    pub axial_wavenumber: f64,
    pub gain: GainPattern,
}

impl OamBeam {
    /// Mode `mode` with `k_z = k` and unit uniform gain.
    pub fn new(mode: i32, wavenumber: f64) -> Result<Self> {
        Self::with_axial(mode, wavenumber, wavenumber, GainPattern::Uniform(1.0))
    }

    pub fn with_axial(mode: i32, wavenumber: f64, axial_wavenumber: f64, gain: GainPattern) -> Result<Self> {
        check_wavenumber(wavenumber)?;
        if !(axial_wavenumber.is_finite() && axial_wavenumber.abs() <= wavenumber) {
            return Err(Error::invalid(format!(
                "axial wavenumber {axial_wavenumber} exceeds k = {wavenumber}"
            )));
        }
        Ok(Self {
            mode,
            wavenumber,
            axial_wavenumber,
            gain,
        })
    }

    /// `k_z = k·cos(tilt)`.
    pub fn tilted(mode: i32, wavenumber: f64, tilt_deg: f64, gain: GainPattern) -> Result<Self> {
        Self::with_axial(mode, wavenumber, wavenumber * tilt_deg.to_radians().cos(), gain)
    }

    pub fn from_plane(plane: &PlaneWaveBeam) -> Self {
        Self {
            mode: 0,
            wavenumber: plane.wavenumber,
            axial_wavenumber: plane.wavenumber,
            gain: GainPattern::Uniform(1.0),
        }
    }
}

/// Either illumination, as consumed by sweeps.
#[derive(Debug, Clone, PartialEq)]
pub enum Beam {
    Plane(PlaneWaveBeam),
    Oam(OamBeam),
}

impl Beam {
    pub fn wavenumber(&self) -> f64 {
        match self {
            Beam::Plane(p) => p.wavenumber,
            Beam::Oam(o) => o.wavenumber,
        }
    }

    pub fn as_oam(&self) -> OamBeam {
        match self {
            Beam::Plane(p) => OamBeam::from_plane(p),
            Beam::Oam(o) => o.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Beam::Plane(_) => "plane".to_string(),
            Beam::Oam(o) => format!("oam_l{}", o.mode),
        }
    }
}

/// `ℓ·atan2(y, x)`: the helical phase angle of mode ℓ at `p`. Undefined on
/// the beam axis.
pub fn helical_phase(beam: &OamBeam, p: &Vec3) -> Result<f64> {
    Ok(f64::from(beam.mode) * p.azimuth()?)
}

/// A main-lobe wavefront sample, degrees throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefrontSample {
    pub angle_deg: f64,
    /// Unwrapped phase.
    pub phase_deg: f64,
    pub amplitude_db: Option<f64>,
}

impl WavefrontSample {
    pub fn new(angle_deg: f64, phase_deg: f64) -> Self {
        Self {
            angle_deg,
            phase_deg,
            amplitude_db: None,
        }
    }
}

/// Noiseless linear main-lobe wavefront of mode `mode`: `n` samples evenly
/// spread over `center ± width/2`, phase `mode·(angle − center)`.
pub fn synth_main_lobe_wavefront(mode: i32, center_deg: f64, width_deg: f64, n: usize) -> Result<Vec<WavefrontSample>> {
    if n < 2 {
        return Err(Error::invalid("wavefront needs at least two samples"));
    }
    if !(width_deg.is_finite() && width_deg > 0.0) {
        return Err(Error::invalid(format!("width must be positive, got {width_deg}")));
    }
    let start = center_deg - 0.5 * width_deg;
    let step = width_deg / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let offset = i as f64 * step - 0.5 * width_deg;
            WavefrontSample::new(start + i as f64 * step, f64::from(mode) * offset)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeEstimate {
    /// Least-squares phase slope, degrees of phase per degree of angle.
    pub mode: f64,
    /// RMS residual of the linear fit, degrees.
    pub residual_deg: f64,
}

/// Equivalent OAM mode from the least-squares slope of unwrapped phase
/// versus angle. With two samples this is Δphase/Δangle.
pub fn estimate_mode_from_wavefront(samples: &[WavefrontSample]) -> Result<ModeEstimate> {
    if samples.len() < 2 {
        return Err(Error::invalid("need at least two wavefront samples"));
    }
    if samples
        .iter()
        .any(|s| !s.angle_deg.is_finite() || !s.phase_deg.is_finite())
    {
        return Err(Error::invalid("wavefront samples must be finite"));
    }
    let n = samples.len() as f64;
    let mean_a = samples.iter().map(|s| s.angle_deg).sum::<f64>() / n;
    let mean_p = samples.iter().map(|s| s.phase_deg).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for s in samples {
        let dx = s.angle_deg - mean_a;
        sxx += dx * dx;
        sxy += dx * (s.phase_deg - mean_p);
    }
    if sxx == 0.0 || samples.iter().all(|s| s.angle_deg == samples[0].angle_deg) {
        return Err(Error::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let sse: f64 = samples
        .iter()
        .map(|s| {
            let r = s.phase_deg - (mean_p + slope * (s.angle_deg - mean_a));
            r * r
        })
        .sum();
    Ok(ModeEstimate {
        mode: slope,
        residual_deg: (sse / n).sqrt(),
    })
}

/// Parses `angle_deg,phase_deg` rows.
pub fn parse_wavefront_csv(text: &str, source_name: &str) -> Result<Vec<WavefrontSample>> {
    let (_, rows) = textio::read_rows(text, source_name, &["angle_deg", "phase_deg"], &[])?;
    rows.iter()
        .map(|row| {
            Ok(WavefrontSample::new(
                row.number(source_name, 0, "angle_deg")?,
                row.number(source_name, 1, "phase_deg")?,
            ))
        })
        .collect()
}

pub fn load_wavefront_csv(path: &Path) -> Result<Vec<WavefrontSample>> {
    parse_wavefront_csv(&textio::read_to_string(path)?, &path.display().to_string())
}

/// Parses a gain cut `angle_deg,gain_dbi,phase_deg` into a tabulated
/// pattern (angles become polar angles in radians, gain linear).
pub fn parse_gain_pattern_csv(text: &str, source_name: &str) -> Result<GainPattern> {
    let (_, rows) = textio::read_rows(text, source_name, &["angle_deg", "gain_dbi", "phase_deg"], &[])?;
    let mut samples: Vec<(f64, f64, f64)> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let angle = row.number(source_name, 0, "angle_deg")?;
        let gain_dbi = row.number(source_name, 1, "gain_dbi")?;
        let phase = row.number(source_name, 2, "phase_deg")?;
        if i > 0 && angle <= samples[i - 1].0 {
            return Err(row.parse_error(source_name, "angles must be strictly increasing"));
        }
        let gain = db_to_linear(gain_dbi);
        if gain <= 0.0 || !gain.is_finite() {
            return Err(row.parse_error(source_name, format!("gain {gain_dbi} dBi out of range")));
        }
        samples.push((angle, gain, phase));
    }
    let samples = samples
        .into_iter()
        .map(|(a, g, p)| (a.to_radians(), g, p.to_radians()))
        .collect::<Vec<_>>();
    GainPattern::tabulated(samples).map_err(|e| Error::Format {
        source_name: source_name.to_string(),
        message: e.to_string(),
    })
}

pub fn load_gain_pattern_csv(path: &Path) -> Result<GainPattern> {
    parse_gain_pattern_csv(&textio::read_to_string(path)?, &path.display().to_string())
}
