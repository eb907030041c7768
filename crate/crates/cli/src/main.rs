use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use oam_rcs::analysis::{
    curves_to_csv, diversity_report, sweep_rotating, sweep_two_sphere, DEFAULT_GRID_POINTS, DEFAULT_PROMINENCE,
};
use oam_rcs::antenna::{design_row, DEFAULT_WIDE_SIDE_M};
use oam_rcs::beam::{estimate_mode_from_wavefront, load_gain_pattern_csv, load_wavefront_csv};
use oam_rcs::measurement::{align_at_reference, load_echo_sweep, reduce_sweep_to_rcs, SPEED_OF_LIGHT};
use oam_rcs::scene::load_target_csv;
use oam_rcs::{AngleGrid, Beam, GainPattern, MeasurementConfig, OamBeam, PlaneWaveBeam, RcsCurve, TwoSphereLayout};

macro_rules! config_help {
    () => {
        "\
CONFIG FILE (--config, JSON object, every key optional):
  freq_ghz 10.0, range_m 8.5, gt_db 16.0, gr_db 16.0, pt_dbm 28.0,
  height_m 1.5, sphere_radius_m 0.2, sphere_spacing_m 0.4,
  pr_dbm 20.0, rotation_rad_per_min 1.0
  Unknown keys are rejected. Command-line flags override file values."
    };
}

#[derive(Parser, Debug)]
#[command(
    name = "oam-rcs",
    version,
    about = "RCS curves of point-scatterer targets under plane-wave and OAM illumination",
    after_help = config_help!()
)]
struct Cli {
    /// Chamber configuration file (JSON); see CONFIG FILE below
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (output directory for `compare`); stdout when omitted
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Emit JSON instead of a text table (design, compare, estimate-mode)
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arc waveguide dimensions for an equivalent OAM mode
    #[command(after_help = concat!("\
OUTPUT:
  text: header `mode lambda_g_mm a_mm r_mm`, one row, 3 decimals
  --json: {\"mode\", \"lambda_g_mm\", \"a_mm\", \"r_mm\"}
  a is the effective arc radius r + s_w/2; frequency defaults to freq_ghz from --config.\n\n", config_help!()))]
    Design(DesignArgs),

    /// RCS curve over a full turntable revolution
    #[command(after_help = concat!("\
INPUT FILES:
  target CSV:   x_m,y_m,z_m,sigma_m2[,profile_file]
                profile_file is a CSV `angle_deg,sigma_m2` relative to the target file;
                sigma_m2 may be blank when a profile is given
  gain pattern: angle_deg,gain_dbi,phase_deg (angle is the polar angle off the beam axis)
OUTPUT:
  CSV `angle_deg,value`, 9 significant digits, angles i*360/n.
  value is sigma/sigma0 for two-sphere and uniform-sigma targets, m^2 otherwise.
  Two-sphere defaults: spacing sphere_spacing_m, standoff range_m, from --config.\n\n", config_help!()))]
    Sweep(SweepArgs),

    /// Plane-wave curve against OAM curves of several modes, with a diversity report
    #[command(after_help = concat!("\
OUTPUT (--out DIR, required):
  DIR/curves.csv   angle_deg,plane,oam_l<m1>,oam_l<m2>,...
  DIR/report.json  {labels, distance_matrix, distance_to_reference, peak_angles_deg,
                    best_curve_index, mirror_asymmetry, prominence}
  distance_matrix[i][j] = RMS(c_i - c_j) / RMS(plane); best_curve_index holds, per grid
  angle, the index into labels of the largest curve. --json also prints the report.\n\n", config_help!()))]
    Compare(CompareArgs),

    /// Reduce received-power sweeps to RCS in dBsm with the radar equation
    #[command(after_help = concat!("\
INPUT FILES:
  echo sweep CSV: angle_deg,p_r_dbm (angles strictly increasing in [0, 360))
OUTPUT:
  one sweep:   CSV `angle_deg,rcs_dbsm`
  several:     CSV `angle_deg,<file stem 1>,<file stem 2>,...` (shared angle grid required)
  Link budget from --config; defaults to the reference chamber when omitted.\n\n", config_help!()))]
    Reduce(ReduceArgs),

    /// Equivalent OAM mode from the main-lobe phase slope
    #[command(
        name = "estimate-mode",
        after_help = concat!("\
INPUT FILES:
  wavefront CSV: angle_deg,phase_deg (phase unwrapped, degrees)
OUTPUT:
  text: header `mode residual_deg`, one row, 3 decimals
  --json: {\"mode\", \"residual_deg\"}\n\n",
            config_help!()
        )
    )]
    EstimateMode(EstimateArgs),
}

#[derive(Args, Debug)]
struct DesignArgs {
    /// Target equivalent OAM mode (positive)
    #[arg(long, allow_negative_numbers = true)]
    mode: f64,
    #[command(flatten)]
    band: BandArgs,
    /// Waveguide wide side in mm
    #[arg(long, default_value_t = DEFAULT_WIDE_SIDE_M * 1e3)]
    wide_side_mm: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TargetKind {
    TwoSphere,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BeamKind {
    Plane,
    Oam,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Target geometry
    #[arg(long, value_enum)]
    target: TargetKind,
    /// Target CSV (required with --target csv)
    #[arg(long, value_name = "PATH")]
    target_file: Option<PathBuf>,
    /// Illumination
    #[arg(long, value_enum)]
    beam: BeamKind,
    /// OAM mode (required with --beam oam, rejected with --beam plane)
    #[arg(long, allow_negative_numbers = true)]
    mode: Option<i32>,
    /// Number of grid points over 360 degrees
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Beam tilt in degrees, sets k_z = k cos(tilt) (OAM only)
    #[arg(long, allow_negative_numbers = true)]
    tilt_deg: Option<f64>,
    /// Tabulated gain pattern CSV (OAM beam on a CSV target only)
    #[arg(long, value_name = "PATH")]
    gain_pattern: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BandArgs {
    /// Frequency in GHz, converted with c = 299792458 m/s [default: freq_ghz from --config, else 10]
    #[arg(long)]
    freq_ghz: Option<f64>,
    /// Free-space wavelength in mm, instead of --freq-ghz
    #[arg(long, conflicts_with = "freq_ghz")]
    wavelength_mm: Option<f64>,
}

impl BandArgs {
    fn wavelength_m(&self, chamber: &MeasurementConfig) -> Result<f64> {
        if let Some(mm) = self.wavelength_mm {
            return Ok(positive("--wavelength-mm", mm)? * 1e-3);
        }
        let f = positive("--freq-ghz", self.freq_ghz.unwrap_or(chamber.freq_ghz))?;
        Ok(SPEED_OF_LIGHT / (f * 1e9))
    }

    fn wavenumber(&self, chamber: &MeasurementConfig) -> Result<f64> {
        Ok(2.0 * std::f64::consts::PI / self.wavelength_m(chamber)?)
    }
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[command(flatten)]
    band: BandArgs,
    /// Two-sphere spacing D in m [default: sphere_spacing_m from --config, else 0.4]
    #[arg(long)]
    spacing_m: Option<f64>,
    /// Two-sphere standoff y0 in m [default: range_m from --config, else 8.5]
    #[arg(long)]
    standoff_m: Option<f64>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Comma-separated OAM modes, e.g. 1,2,3,5
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    modes: Vec<i32>,
    /// Number of grid points over 360 degrees
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Peak threshold as a fraction of each curve's maximum
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    prominence: f64,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Echo sweep CSV; repeat for several sweeps
    #[arg(long = "sweep", value_name = "PATH", required = true)]
    sweeps: Vec<PathBuf>,
    /// Shift every curve so its value at this angle (degrees) matches the first curve's
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    align_at: Option<f64>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Wavefront CSV
    #[arg(long, value_name = "PATH")]
    wavefront: PathBuf,
}

/// Global settings after merging the config file.
struct RunConfig {
    chamber: MeasurementConfig,
    out: Option<PathBuf>,
    json: bool,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<Self> {
        let chamber = match &cli.config {
            Some(path) => MeasurementConfig::load(path)?,
            None => MeasurementConfig::default(),
        };
        Ok(Self {
            chamber,
            out: cli.out.clone(),
            json: cli.json,
        })
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).context("writing to stdout")?;
                stdout.flush().context("writing to stdout")
            }
        }
    }

    fn reject_json(&self, command: &str) -> Result<()> {
        if self.json {
            bail!("--json is not supported by {command}");
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        bail!("{name} must be positive, got {v}");
    }
    Ok(v)
}

fn two_sphere_layout(g: &GeometryArgs, chamber: &MeasurementConfig) -> Result<TwoSphereLayout> {
    let spacing = positive("--spacing-m", g.spacing_m.unwrap_or(chamber.sphere_spacing_m))?;
    let standoff = positive("--standoff-m", g.standoff_m.unwrap_or(chamber.range_m))?;
    Ok(TwoSphereLayout::new(spacing, standoff, 1.0)?)
}

fn cmd_design(args: &DesignArgs, run: &RunConfig) -> Result<()> {
    let wavelength = args.band.wavelength_m(&run.chamber)?;
    let wide_side = positive("--wide-side-mm", args.wide_side_mm)? * 1e-3;
    let row = design_row(args.mode, wide_side, wavelength)?;
    let text = if run.json {
        serde_json::to_string(&row)? + "\n"
    } else {
        format!(
            "mode lambda_g_mm a_mm r_mm\n{:.3} {:.3} {:.3} {:.3}\n",
            row.mode, row.lambda_g_mm, row.a_mm, row.r_mm
        )
    };
    run.emit(&text)
}

fn sweep_beam(args: &SweepArgs, k: f64, gain: GainPattern) -> Result<Beam> {
    Ok(match args.beam {
        BeamKind::Plane => Beam::Plane(PlaneWaveBeam::new(k)?),
        BeamKind::Oam => {
            let mode = args.mode.context("--beam oam requires --mode")?;
            Beam::Oam(OamBeam::tilted(mode, k, args.tilt_deg.unwrap_or(0.0), gain)?)
        }
    })
}

fn cmd_sweep(args: &SweepArgs, run: &RunConfig) -> Result<()> {
    run.reject_json("sweep")?;
    if args.beam == BeamKind::Plane {
        for (set, flag) in [
            (args.mode.is_some(), "--mode"),
            (args.tilt_deg.is_some(), "--tilt-deg"),
            (args.gain_pattern.is_some(), "--gain-pattern"),
        ] {
            if set {
                bail!("{flag} is only valid with --beam oam");
            }
        }
    }
    if let Some(t) = args.tilt_deg {
        if !(t.is_finite() && (-90.0..=90.0).contains(&t)) {
            bail!("--tilt-deg must lie in [-90, 90], got {t}");
        }
    }
    let k = args.geometry.band.wavenumber(&run.chamber)?;
    let grid = AngleGrid::new(args.grid)?;
    let curve = match args.target {
        TargetKind::TwoSphere => {
            if args.target_file.is_some() {
                bail!("--target-file is only valid with --target csv");
            }
            if args.gain_pattern.is_some() {
                bail!("--gain-pattern needs --target csv; two-sphere gains cancel in the ratio");
            }
            let layout = two_sphere_layout(&args.geometry, &run.chamber)?;
            let beam = sweep_beam(args, k, GainPattern::Uniform(1.0))?;
            sweep_two_sphere(&layout, &beam, grid)?
        }
        TargetKind::Csv => {
            if args.geometry.spacing_m.is_some() || args.geometry.standoff_m.is_some() {
                bail!("--spacing-m and --standoff-m are only valid with --target two-sphere");
            }
            let path = args
                .target_file
                .as_ref()
                .context("--target csv requires --target-file")?;
            let gain = match &args.gain_pattern {
                Some(p) => load_gain_pattern_csv(p)?,
                None => GainPattern::Uniform(1.0),
            };
            let beam = sweep_beam(args, k, gain)?;
            let target = load_target_csv(path)?;
            sweep_rotating(&target, &beam, grid)?
        }
    };
    run.emit(&curve.to_csv("value"))
}

fn cmd_compare(args: &CompareArgs, run: &RunConfig) -> Result<()> {
    let dir = run.out.as_ref().context("compare requires --out DIR")?;
    for (i, m) in args.modes.iter().enumerate() {
        if args.modes[..i].contains(m) {
            bail!("mode {m} listed twice in --modes");
        }
    }
    if !(args.prominence.is_finite() && (0.0..=1.0).contains(&args.prominence)) {
        bail!("--prominence must lie in [0, 1], got {}", args.prominence);
    }
    let k = args.geometry.band.wavenumber(&run.chamber)?;
    let layout = two_sphere_layout(&args.geometry, &run.chamber)?;
    let grid = AngleGrid::new(args.grid)?;
    let mut curves = vec![sweep_two_sphere(&layout, &Beam::Plane(PlaneWaveBeam::new(k)?), grid)?];
    for &m in &args.modes {
        curves.push(sweep_two_sphere(&layout, &Beam::Oam(OamBeam::new(m, k)?), grid)?);
    }
    let report = diversity_report(&curves, args.prominence)?;
    let report_json = serde_json::to_string_pretty(&report)? + "\n";
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write_file(&dir.join("curves.csv"), &curves_to_csv(&curves)?)?;
    write_file(&dir.join("report.json"), &report_json)?;
    if run.json {
        print!("{report_json}");
    }
    Ok(())
}

fn cmd_reduce(args: &ReduceArgs, run: &RunConfig) -> Result<()> {
    run.reject_json("reduce")?;
    if let Some(a) = args.align_at {
        if !a.is_finite() {
            bail!("--align-at must be finite");
        }
    }
    let sweeps = args
        .sweeps
        .iter()
        .map(|p| load_echo_sweep(p))
        .collect::<oam_rcs::Result<Vec<_>>>()?;
    for (i, s) in sweeps.iter().enumerate() {
        if s.label.contains([',', '"', '\n', '\r']) {
            bail!(
                "sweep label `{}` cannot be used as a CSV column; rename the file",
                s.label
            );
        }
        if sweeps.len() > 1 && sweeps[..i].iter().any(|o| o.label == s.label) {
            bail!("two sweeps share the column name `{}`; rename one file", s.label);
        }
    }
    let mut curves: Vec<RcsCurve> = sweeps
        .iter()
        .map(|s| reduce_sweep_to_rcs(s, &run.chamber))
        .collect::<oam_rcs::Result<_>>()?;
    if let Some(a) = args.align_at {
        curves = align_at_reference(&curves, a)?;
    }
    let text = match curves.as_slice() {
        [single] => single.to_csv("rcs_dbsm"),
        many => curves_to_csv(many)?,
    };
    run.emit(&text)
}

fn cmd_estimate_mode(args: &EstimateArgs, run: &RunConfig) -> Result<()> {
    let samples = load_wavefront_csv(&args.wavefront)?;
    let est = estimate_mode_from_wavefront(&samples)?;
    let text = if run.json {
        serde_json::to_string(&est)? + "\n"
    } else {
        // avoid printing -0.000
        let tidy = |v: f64| if format!("{v:.3}") == "-0.000" { 0.0 } else { v };
        format!(
            "mode residual_deg\n{:.3} {:.3}\n",
            tidy(est.mode),
            tidy(est.residual_deg)
        )
    };
    run.emit(&text)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::resolve(cli)?;
    match &cli.command {
        Command::Design(a) => cmd_design(a, &cfg),
        Command::Sweep(a) => cmd_sweep(a, &cfg),
        Command::Compare(a) => cmd_compare(a, &cfg),
        Command::Reduce(a) => cmd_reduce(a, &cfg),
        Command::EstimateMode(a) => cmd_estimate_mode(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help, --version
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if e.kind() == clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("error: a subcommand is required; see --help");
            } else {
                let rendered = e.render().to_string();
                eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            }
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace(['\n', '\r'], " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
