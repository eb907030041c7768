//! Arc leaky-wave waveguide dimensions for a target equivalent OAM mode.
//!
//! A TE₁₀ rectangular guide bent into an arc of effective radius
//! `a = r + s_w/2` radiates an equivalent mode `|ℓₑ| = 2πa/λ_g`, with
//! `λ_g = λ0/√(1 − (λ0/2s_w)²)`. That expression is the usual TE₁₀ guided
//! wavelength (cutoff `2·s_w`), although it is sometimes labelled the cutoff
//! wavelength; the formula is what matters here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard WR-90 (X band) wide side, meters.
pub const DEFAULT_WIDE_SIDE_M: f64 = 0.02286;

/// Standard WR-90 narrow side, meters.
pub const DEFAULT_NARROW_SIDE_M: f64 = 0.01016;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

/// `λ0/√(1 − (λ0/(2·s_w))²)`.
pub fn guided_wavelength(wavelength: f64, wide_side: f64) -> Result<f64> {
    check_positive("wavelength", wavelength)?;
    check_positive("wide side", wide_side)?;
    let ratio = wavelength / (2.0 * wide_side);
    if ratio >= 1.0 {
        return Err(Error::BelowCutoff {
            wavelength_m: wavelength,
            wide_side_m: wide_side,
        });
    }
    Ok(wavelength / (1.0 - ratio * ratio).sqrt())
}

/// `|ℓₑ| = (r + s_w/2)·π·√((2/λ0)² − (1/s_w)²)`.
pub fn equivalent_mode(radius: f64, wide_side: f64, wavelength: f64) -> Result<f64> {
    check_positive("radius", radius)?;
    guided_wavelength(wavelength, wide_side)?;
    let a = radius + 0.5 * wide_side;
    let root = ((2.0 / wavelength).powi(2) - (1.0 / wide_side).powi(2)).sqrt();
    Ok(a * PI * root)
}

/// Arc radius `r = ℓ·λ_g/(2π) − s_w/2` realizing mode `mode`.
pub fn design_radius(mode: f64, wide_side: f64, wavelength: f64) -> Result<f64> {
    check_positive("mode", mode)?;
    let lambda_g = guided_wavelength(wavelength, wide_side)?;
    let r = mode * lambda_g / (2.0 * PI) - 0.5 * wide_side;
    if r <= 0.0 {
        return Err(Error::UnrealizableMode { mode });
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideSpec {
    pub wide_side: f64,
    /// Descriptive only; no formula uses it.
    pub narrow_side: f64,
    pub radius: f64,
    pub wavelength: f64,
}

impl WaveguideSpec {
    pub fn new(wide_side: f64, narrow_side: f64, radius: f64, wavelength: f64) -> Result<Self> {
        check_positive("narrow side", narrow_side)?;
        check_positive("radius", radius)?;
        guided_wavelength(wavelength, wide_side)?;
        Ok(Self {
            wide_side,
            narrow_side,
            radius,
            wavelength,
        })
    }

    /// Guide dimensioned for `mode` at `wavelength`.
    pub fn for_mode(mode: f64, wide_side: f64, narrow_side: f64, wavelength: f64) -> Result<Self> {
        let radius = design_radius(mode, wide_side, wavelength)?;
        Self::new(wide_side, narrow_side, radius, wavelength)
    }

    pub fn guided_wavelength(&self) -> f64 {
        guided_wavelength(self.wavelength, self.wide_side).expect("validated at construction")
    }

    pub fn effective_radius(&self) -> f64 {
        self.radius + 0.5 * self.wide_side
    }

    pub fn equivalent_mode(&self) -> f64 {
        equivalent_mode(self.radius, self.wide_side, self.wavelength).expect("validated at construction")
    }
}

/// One row of the design table, lengths in millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub mode: f64,
    pub lambda_g_mm: f64,
    pub a_mm: f64,
    pub r_mm: f64,
}

pub fn design_row(mode: f64, wide_side: f64, wavelength: f64) -> Result<DesignRow> {
    let spec = WaveguideSpec::for_mode(mode, wide_side, DEFAULT_NARROW_SIDE_M, wavelength)?;
    Ok(DesignRow {
        mode,
        lambda_g_mm: spec.guided_wavelength() * 1e3,
        a_mm: spec.effective_radius() * 1e3,
        r_mm: spec.radius * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const L0: f64 = 0.03;
    const SW: f64 = DEFAULT_WIDE_SIDE_M;

    // 40-digit mpmath evaluations
    const LAMBDA_G: f64 = 0.039_755_379_445_961_67;
    const R23: f64 = 0.134_097_098_526_330_9;

    #[test]
    fn guided_wavelength_value() {
        assert_relative_eq!(guided_wavelength(L0, SW).unwrap(), LAMBDA_G, max_relative = 1e-14);
    }

    #[test]
    fn guided_wavelength_approaches_free_space() {
        let mut prev = f64::INFINITY;
        for i in 1..20 {
            let sw = 0.02 * 2f64.powi(i);
            let lg = guided_wavelength(L0, sw).unwrap();
            assert!(lg > L0 && lg < prev);
            prev = lg;
        }
        assert!(prev - L0 < 1e-12);
    }

    #[test]
    fn cutoff_boundary() {
        let err = guided_wavelength(L0, 0.015).unwrap_err();
        assert!(err.to_string().starts_with("mode below cutoff"));
        assert!(equivalent_mode(0.1, 0.01, L0).is_err());
        assert!(design_radius(23.0, 0.015, L0).is_err());
    }

    #[test]
    fn design_radius_value() {
        assert_relative_eq!(design_radius(23.0, SW, L0).unwrap(), R23, max_relative = 1e-13);
        assert_abs_diff_eq!(equivalent_mode(0.134097, SW, L0).unwrap(), 23.0, epsilon = 1e-3);
    }

    #[test]
    fn round_trip_fabricated_modes() {
        for mode in [23.0, 30.0, 35.0, 45.0] {
            let r = design_radius(mode, SW, L0).unwrap();
            assert!((equivalent_mode(r, SW, L0).unwrap() - mode).abs() < 1e-9);
        }
    }

    #[test]
    fn linear_in_effective_radius() {
        let r = 0.1;
        let a = r + SW / 2.0;
        let r2 = 2.0 * a - SW / 2.0;
        assert_relative_eq!(
            equivalent_mode(r2, SW, L0).unwrap(),
            2.0 * equivalent_mode(r, SW, L0).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn tiny_mode_is_unrealizable() {
        assert!(matches!(
            design_radius(0.5, SW, L0),
            Err(Error::UnrealizableMode { .. })
        ));
        assert!(design_radius(0.0, SW, L0).is_err());
        assert!(design_radius(-3.0, SW, L0).is_err());
    }

    #[test]
    fn spec_accessors() {
        let s = WaveguideSpec::for_mode(35.0, SW, DEFAULT_NARROW_SIDE_M, L0).unwrap();
        assert_abs_diff_eq!(s.equivalent_mode(), 35.0, epsilon = 1e-9);
        assert!(WaveguideSpec::new(SW, 0.0, 0.1, L0).is_err());
        let row = design_row(23.0, SW, L0).unwrap();
        assert_abs_diff_eq!(row.r_mm, 134.097, epsilon = 1e-3);
        assert_abs_diff_eq!(row.a_mm - row.r_mm, 11.43, epsilon = 1e-9);
    }
}
