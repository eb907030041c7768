//! Point-scatterer targets.
//!
//! A target is a cloud of isotropic (or angle-dependent) point scatterers in
//! a Cartesian frame whose z axis is the beam axis. The canonical target is a
//! pair of identical spheres spaced `D` apart, standing off `y0` from the beam
//! axis and rotated about a vertical axis through their midpoint.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textio::{self, format_sig9};

/// A point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &Vec3) -> f64 {
        (*self - *other).norm()
    }

    /// Azimuth about the z axis, `atan2(y, x)`.
    pub fn azimuth(&self) -> Result<f64> {
        if self.x == 0.0 && self.y == 0.0 {
            return Err(Error::OnAxis);
        }
        Ok(self.y.atan2(self.x))
    }

    /// Polar angle from the +z axis.
    pub fn polar(&self) -> f64 {
        self.x.hypot(self.y).atan2(self.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

/// Backscatter RCS of a single scatterer as a function of orientation angle.
#[derive(Debug, Clone, PartialEq)]
pub enum RcsProfile {
    /// Isotropic scatterer, σ in m².
    Constant(f64),
    /// `(angle rad, σ m²)` samples, angles strictly increasing in `[0, 2π)`.
    /// Evaluated by periodic piecewise-linear interpolation.
    Tabulated(Vec<(f64, f64)>),
}

impl RcsProfile {
    pub fn constant(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::NegativeRcs(sigma));
        }
        Ok(RcsProfile::Constant(sigma))
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("tabulated RCS profile needs at least one sample"));
        }
        for (i, &(angle, sigma)) in samples.iter().enumerate() {
            if !(0.0..TAU).contains(&angle) {
                return Err(Error::invalid(format!("profile angle {angle} rad outside [0, 2π)")));
            }
            if i > 0 && angle <= samples[i - 1].0 {
                return Err(Error::invalid("profile angles must be strictly increasing"));
            }
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::NegativeRcs(sigma));
            }
        }
        Ok(RcsProfile::Tabulated(samples))
    }

    /// σ at orientation `phi` (radians, any real value).
    pub fn eval(&self, phi: f64) -> f64 {
        match self {
            RcsProfile::Constant(s) => *s,
            RcsProfile::Tabulated(samples) => periodic_lerp(samples, phi.rem_euclid(TAU)),
        }
    }
}

/// Linear interpolation on a periodic table; `x` already reduced to `[0, 2π)`.
fn periodic_lerp(samples: &[(f64, f64)], x: f64) -> f64 {
    let n = samples.len();
    if n == 1 {
        return samples[0].1;
    }
    // first index with angle > x
    let hi = samples.partition_point(|&(a, _)| a <= x);
    let (lo_pt, hi_pt) = if hi == 0 {
        let (a, v) = samples[n - 1];
        ((a - TAU, v), samples[0])
    } else if hi == n {
        let (a, v) = samples[0];
        (samples[n - 1], (a + TAU, v))
    } else {
        (samples[hi - 1], samples[hi])
    };
    if x == lo_pt.0 {
        return lo_pt.1;
    }
    let t = (x - lo_pt.0) / (hi_pt.0 - lo_pt.0);
    lo_pt.1 + t * (hi_pt.1 - lo_pt.1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScattererPoint {
    pub position: Vec3,
    pub base_rcs: RcsProfile,
}

impl ScattererPoint {
    pub fn isotropic(position: Vec3, sigma: f64) -> Result<Self> {
        Ok(Self {
            position,
            base_rcs: RcsProfile::constant(sigma)?,
        })
    }
}

/// A "simple" complex target: N ≥ 1 scatterers within one range gate.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetModel {
    scatterers: Vec<ScattererPoint>,
    pub label: String,
}

impl TargetModel {
    pub fn new(scatterers: Vec<ScattererPoint>, label: impl Into<String>) -> Result<Self> {
        if scatterers.is_empty() {
            return Err(Error::EmptyTarget);
        }
        if let Some(bad) = scatterers.iter().find(|s| !s.position.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite scatterer position {:?}",
                bad.position
            )));
        }
        Ok(Self {
            scatterers,
            label: label.into(),
        })
    }

    pub fn scatterers(&self) -> &[ScattererPoint] {
        &self.scatterers
    }

    pub fn len(&self) -> usize {
        self.scatterers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scatterers.is_empty()
    }

    pub fn centroid(&self) -> Vec3 {
        let n = self.scatterers.len() as f64;
        let sum = self
            .scatterers
            .iter()
            .fold(Vec3::new(0.0, 0.0, 0.0), |acc, s| acc + s.position);
        Vec3::new(sum.x / n, sum.y / n, sum.z / n)
    }

    /// `Some(σ)` when every scatterer is isotropic with the same σ.
    pub fn uniform_sigma(&self) -> Option<f64> {
        let first = match self.scatterers[0].base_rcs {
            RcsProfile::Constant(s) => s,
            RcsProfile::Tabulated(_) => return None,
        };
        self.scatterers
            .iter()
            .all(|s| s.base_rcs == RcsProfile::Constant(first))
            .then_some(first)
    }

    /// Turntable rotation: turns the cloud rigidly by `phi` about the axis
    /// through its centroid parallel to y. The sense matches the two-sphere
    /// layout, so a pair along +z at `phi = 0` ends up at
    /// `two_sphere_positions(.., phi)`.
    pub fn rotated_about_centroid(&self, phi: f64) -> TargetModel {
        let c = self.centroid();
        let (s, co) = phi.rem_euclid(TAU).sin_cos();
        let scatterers = self
            .scatterers
            .iter()
            .map(|sc| {
                let d = sc.position - c;
                let position = Vec3::new(c.x + d.x * co - d.z * s, sc.position.y, c.z + d.x * s + d.z * co);
                ScattererPoint {
                    position,
                    base_rcs: sc.base_rcs.clone(),
                }
            })
            .collect();
        TargetModel {
            scatterers,
            label: self.label.clone(),
        }
    }
}

/// Two identical spheres spaced `spacing` apart, centered at `(0, standoff, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSphereLayout {
    pub spacing: f64,
    pub standoff: f64,
    pub sphere_rcs: f64,
}

impl TwoSphereLayout {
    pub fn new(spacing: f64, standoff: f64, sphere_rcs: f64) -> Result<Self> {
        let layout = Self {
            spacing,
            standoff,
            sphere_rcs,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("spacing", self.spacing),
            ("standoff", self.standoff),
            ("sphere RCS", self.sphere_rcs),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Sphere centers at rotation angle `phi` (angle between the sphere axis and z):
/// `[-D/2·sinφ, y0, D/2·cosφ]` and `[D/2·sinφ, y0, -D/2·cosφ]`.
pub fn two_sphere_positions(layout: &TwoSphereLayout, phi: f64) -> (Vec3, Vec3) {
    let half = 0.5 * layout.spacing;
    let (s, c) = phi.rem_euclid(TAU).sin_cos();
    (
        Vec3::new(-half * s, layout.standoff, half * c),
        Vec3::new(half * s, layout.standoff, -half * c),
    )
}

pub fn build_two_sphere_target(layout: &TwoSphereLayout, phi: f64) -> Result<TargetModel> {
    layout.validate()?;
    let (p1, p2) = two_sphere_positions(layout, phi);
    TargetModel::new(
        vec![
            ScattererPoint::isotropic(p1, layout.sphere_rcs)?,
            ScattererPoint::isotropic(p2, layout.sphere_rcs)?,
        ],
        "two-sphere",
    )
}

const TARGET_COLUMNS: [&str; 4] = ["x_m", "y_m", "z_m", "sigma_m2"];
const PROFILE_COLUMNS: [&str; 2] = ["angle_deg", "sigma_m2"];

/// Parses a target CSV (`x_m,y_m,z_m,sigma_m2[,profile_file]`).
///
/// `resolve_profile` is called with the `profile_file` text of rows that
/// reference one; `sigma_m2` may then be left empty. When both are given the
/// profile wins.
pub fn parse_target_csv<F>(text: &str, source_name: &str, mut resolve_profile: F) -> Result<TargetModel>
where
    F: FnMut(&str) -> Result<RcsProfile>,
{
    let (columns, rows) = textio::read_rows(text, source_name, &TARGET_COLUMNS, &["profile_file"])?;
    if rows.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let mut scatterers = Vec::with_capacity(rows.len());
    for row in &rows {
        let x = row.number(source_name, 0, "x_m")?;
        let y = row.number(source_name, 1, "y_m")?;
        let z = row.number(source_name, 2, "z_m")?;
        let profile_ref = if columns == 5 { row.fields[4].as_str() } else { "" };
        let base_rcs = if profile_ref.is_empty() {
            let sigma = row.number(source_name, 3, "sigma_m2")?;
            RcsProfile::constant(sigma).map_err(|e| row.parse_error(source_name, e.to_string()))?
        } else {
            if !row.fields[3].is_empty() {
                let sigma = row.number(source_name, 3, "sigma_m2")?;
                if sigma < 0.0 {
                    return Err(row.parse_error(source_name, Error::NegativeRcs(sigma).to_string()));
                }
            }
            resolve_profile(profile_ref).map_err(|e| row.parse_error(source_name, e.to_string()))?
        };
        scatterers.push(ScattererPoint {
            position: Vec3::new(x, y, z),
            base_rcs,
        });
    }
    TargetModel::new(scatterers, source_name)
}

/// Parses a profile CSV (`angle_deg,sigma_m2`), angles in `[0, 360)`.
pub fn parse_profile_csv(text: &str, source_name: &str) -> Result<RcsProfile> {
    let (_, rows) = textio::read_rows(text, source_name, &PROFILE_COLUMNS, &[])?;
    if rows.is_empty() {
        return Err(Error::Format {
            source_name: source_name.to_string(),
            message: "profile has no samples".into(),
        });
    }
    let mut angles = Vec::with_capacity(rows.len());
    let mut samples = Vec::with_capacity(rows.len());
    for row in &rows {
        let a = row.number(source_name, 0, "angle_deg")?;
        let s = row.number(source_name, 1, "sigma_m2")?;
        if s < 0.0 {
            return Err(row.parse_error(source_name, Error::NegativeRcs(s).to_string()));
        }
        angles.push(a);
        samples.push((a.to_radians(), s));
    }
    textio::check_angle_column(source_name, &rows, &angles)?;
    // to_radians of the largest double below 360 can round to 2π
    for (s, row) in samples.iter_mut().zip(&rows) {
        if s.0 >= TAU {
            return Err(row.parse_error(source_name, "angle rounds to 360°"));
        }
    }
    RcsProfile::tabulated(samples)
}

/// Loads a target CSV; `profile_file` paths are resolved relative to the
/// target file's directory.
pub fn load_target_csv(path: &Path) -> Result<TargetModel> {
    let text = textio::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut target = parse_target_csv(&text, &path.display().to_string(), |name| {
        let p = base.join(name);
        let t = textio::read_to_string(&p)?;
        parse_profile_csv(&t, &p.display().to_string())
    })?;
    target.label = path
        .file_stem()
        .map_or_else(|| "target".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(target)
}

/// Writes a target CSV. Tabulated profiles go to sibling files named
/// `<stem>_profile_<row>.csv`.
pub fn save_target_csv(target: &TargetModel, path: &Path) -> Result<()> {
    let has_profiles = target
        .scatterers
        .iter()
        .any(|s| matches!(s.base_rcs, RcsProfile::Tabulated(_)));
    let stem = path
        .file_stem()
        .map_or_else(|| "target".to_string(), |s| s.to_string_lossy().into_owned());
    let dir = path.parent().unwrap_or(Path::new("."));

    let mut out = TARGET_COLUMNS.join(",");
    if has_profiles {
        out.push_str(",profile_file");
    }
    out.push('\n');
    for (i, s) in target.scatterers.iter().enumerate() {
        let p = s.position;
        let fields = [format_sig9(p.x), format_sig9(p.y), format_sig9(p.z)];
        out.push_str(&fields.join(","));
        match &s.base_rcs {
            RcsProfile::Constant(sigma) => {
                out.push(',');
                out.push_str(&format_sig9(*sigma));
                if has_profiles {
                    out.push(',');
                }
            }
            RcsProfile::Tabulated(samples) => {
                let name = format!("{stem}_profile_{}.csv", i + 1);
                let mut table = PROFILE_COLUMNS.join(",");
                table.push('\n');
                for &(a, sigma) in samples {
                    table.push_str(&format!("{},{}\n", format_sig9(a.to_degrees()), format_sig9(sigma)));
                }
                textio::write_string(&dir.join(&name), &table)?;
                out.push_str(",,");
                out.push_str(&name);
            }
        }
        out.push('\n');
    }
    textio::write_string(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn reference_layout() -> TwoSphereLayout {
        TwoSphereLayout::new(0.4, 8.5, 1.0).unwrap()
    }

    #[test]
    fn positions_at_zero_and_quarter_turn() {
        let (a, b) = two_sphere_positions(&reference_layout(), 0.0);
        assert_eq!(a, Vec3::new(-0.0, 8.5, 0.2));
        assert_eq!(b, Vec3::new(0.0, 8.5, -0.2));

        let (a, b) = two_sphere_positions(&reference_layout(), FRAC_PI_2);
        assert_abs_diff_eq!(a.x, -0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(a.z, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.x, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn two_sphere_target_construction() {
        let t = build_two_sphere_target(&reference_layout(), 0.0).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.scatterers().iter().all(|s| s.base_rcs == RcsProfile::Constant(1.0)));
        assert_eq!(t.uniform_sigma(), Some(1.0));

        let a = build_two_sphere_target(&reference_layout(), 1.1).unwrap();
        let b = build_two_sphere_target(&reference_layout(), 1.1 + TAU).unwrap();
        for (p, q) in a.scatterers().iter().zip(b.scatterers()) {
            assert!(p.position.distance(&q.position) < 1e-15);
        }
    }

    #[test]
    fn layout_rejects_non_positive() {
        assert!(TwoSphereLayout::new(0.0, 8.5, 1.0).is_err());
        assert!(TwoSphereLayout::new(0.4, -1.0, 1.0).is_err());
        assert!(TwoSphereLayout::new(0.4, 8.5, 0.0).is_err());
        // reference layout: spacing 0.4 m with 0.2 m radius spheres
        assert!(TwoSphereLayout::new(0.4, 8.5, PI * 0.2 * 0.2).is_ok());
    }

    #[test]
    fn rotation_reproduces_two_sphere_layout() {
        let base = build_two_sphere_target(&reference_layout(), 0.0).unwrap();
        for &phi in &[0.3, 1.0, 2.5, 4.0, 6.0] {
            let rotated = base.rotated_about_centroid(phi);
            let (p1, p2) = two_sphere_positions(&reference_layout(), phi);
            assert!(rotated.scatterers()[0].position.distance(&p1) < 1e-15);
            assert!(rotated.scatterers()[1].position.distance(&p2) < 1e-15);
        }
    }

    #[test]
    fn tabulated_profile_interpolates_and_wraps() {
        let p = RcsProfile::tabulated(vec![(0.0, 1.0), (PI, 3.0)]).unwrap();
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(PI), 3.0);
        assert_abs_diff_eq!(p.eval(FRAC_PI_2), 2.0, epsilon = 1e-15);
        // wrap segment from π back to 2π ≡ 0
        assert_abs_diff_eq!(p.eval(1.5 * PI), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.eval(-FRAC_PI_2), 2.0, epsilon = 1e-15);
        assert!(RcsProfile::tabulated(vec![(1.0, 1.0), (0.5, 1.0)]).is_err());
        assert!(RcsProfile::tabulated(vec![(0.0, -1.0)]).is_err());
        assert!(RcsProfile::tabulated(vec![(TAU, 1.0)]).is_err());
    }

    fn no_profiles(_: &str) -> Result<RcsProfile> {
        Err(Error::invalid("no profiles"))
    }

    #[test]
    fn parse_two_rows() {
        let csv = "x_m,y_m,z_m,sigma_m2\n0,8.5,0.2,1\n0,8.5,-0.2,1\n";
        let t = parse_target_csv(csv, "t.csv", no_profiles).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.scatterers()[1].position, Vec3::new(0.0, 8.5, -0.2));
    }

    #[test]
    fn parse_empty_target() {
        let err = parse_target_csv("x_m,y_m,z_m,sigma_m2\n", "t.csv", no_profiles).unwrap_err();
        assert_eq!(err.to_string(), "target must contain at least one scatterer");
    }

    #[test]
    fn parse_negative_sigma_names_row() {
        let csv = "x_m,y_m,z_m,sigma_m2\n0,1,0,1\n0,1,0,-1\n";
        let err = parse_target_csv(csv, "t.csv", no_profiles).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("negative RCS"), "{msg}");
    }

    #[test]
    fn parse_malformed_row() {
        let csv = "x_m,y_m,z_m,sigma_m2\n0,1,0,1\n0,abc,0,1\n";
        let err = parse_target_csv(csv, "t.csv", no_profiles).unwrap_err();
        assert!(err.to_string().contains("line 3"));
        let csv = "x_m,y_m,z_m,sigma_m2\n0,1,0\n";
        assert!(parse_target_csv(csv, "t.csv", no_profiles).is_err());
    }

    #[test]
    fn parse_profile_reference() {
        let csv = "x_m,y_m,z_m,sigma_m2,profile_file\n0,1,0,,p.csv\n1,1,0,2,\n";
        let t = parse_target_csv(csv, "t.csv", |name| {
            assert_eq!(name, "p.csv");
            parse_profile_csv("angle_deg,sigma_m2\n0,1\n180,3\n", name)
        })
        .unwrap();
        assert_abs_diff_eq!(t.scatterers()[0].base_rcs.eval(FRAC_PI_2), 2.0, epsilon = 1e-12);
        assert_eq!(t.scatterers()[1].base_rcs, RcsProfile::Constant(2.0));
    }

    #[test]
    fn profile_rejects_360() {
        let err = parse_profile_csv("angle_deg,sigma_m2\n0,1\n360,1\n", "p.csv").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn missing_file() {
        let err = load_target_csv(Path::new("/nonexistent/target.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
