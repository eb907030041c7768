#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_oam-rcs")
}

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn run<S: AsRef<str>>(args: &[S]) -> Output {
    Command::new(bin())
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .expect("binary runs")
}

/// One frozen CLI invocation. `golden` names a file, or a directory when
/// `files` is non-empty.
pub struct GoldenCase {
    pub golden: &'static str,
    pub args: Vec<String>,
    pub files: &'static [&'static str],
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        GoldenCase {
            golden: "design_l23.json",
            args: args(&["design", "--mode", "23", "--wavelength-mm", "30", "--json"]),
            files: &[],
        },
        GoldenCase {
            golden: "design_l23.txt",
            args: args(&["design", "--mode", "23", "--wavelength-mm", "30"]),
            files: &[],
        },
        GoldenCase {
            golden: "sweep_plane_g36.csv",
            args: args(&[
                "sweep",
                "--target",
                "two-sphere",
                "--beam",
                "plane",
                "--grid",
                "36",
                "--wavelength-mm",
                "30",
            ]),
            files: &[],
        },
        GoldenCase {
            golden: "sweep_oam_l23_g36.csv",
            args: args(&[
                "sweep",
                "--target",
                "two-sphere",
                "--beam",
                "oam",
                "--mode",
                "23",
                "--grid",
                "36",
                "--wavelength-mm",
                "30",
            ]),
            files: &[],
        },
        GoldenCase {
            golden: "sweep_csv_target_g24.csv",
            args: vec![
                "sweep".into(),
                "--target".into(),
                "csv".into(),
                "--target-file".into(),
                data("three_point.csv"),
                "--beam".into(),
                "oam".into(),
                "--mode".into(),
                "3".into(),
                "--grid".into(),
                "24".into(),
                "--gain-pattern".into(),
                data("lobe_gain.csv"),
                "--tilt-deg".into(),
                "18".into(),
            ],
            files: &[],
        },
        GoldenCase {
            golden: "compare_g36",
            args: args(&["compare", "--modes", "1,2,3,5", "--grid", "36", "--wavelength-mm", "30"]),
            files: &["curves.csv", "report.json"],
        },
        GoldenCase {
            golden: "reduce_single.csv",
            args: vec![
                "reduce".into(),
                "--sweep".into(),
                data("sweep_plane.csv"),
                "--config".into(),
                data("chamber.json"),
            ],
            files: &[],
        },
        GoldenCase {
            golden: "reduce_aligned.csv",
            args: vec![
                "reduce".into(),
                "--sweep".into(),
                data("sweep_plane.csv"),
                "--sweep".into(),
                data("sweep_oam_l23.csv"),
                "--align-at".into(),
                "90".into(),
            ],
            files: &[],
        },
        GoldenCase {
            golden: "estimate_l23.json",
            args: vec![
                "estimate-mode".into(),
                "--wavefront".into(),
                data("wavefront_l23.csv"),
                "--json".into(),
            ],
            files: &[],
        },
    ]
}

/// Runs `case` writing into `scratch` and compares every output byte for
/// byte with the checked-in golden copy.
pub fn check_golden(case: &GoldenCase, scratch: &Path) -> Result<(), String> {
    let out = scratch.join(case.golden);
    let mut argv = case.args.clone();
    argv.push("--out".into());
    argv.push(out.display().to_string());
    let output = run(&argv);
    if !output.status.success() {
        return Err(format!(
            "{}: exit {:?}: {}",
            case.golden,
            output.status.code(),
            String::from_utf8_lossy(&output.stderr).trim()
        ));
    }
    let pairs: Vec<(PathBuf, PathBuf)> = if case.files.is_empty() {
        vec![(out, golden_path(case.golden))]
    } else {
        case.files
            .iter()
            .map(|f| (out.join(f), golden_path(case.golden).join(f)))
            .collect()
    };
    for (actual, expected) in pairs {
        let a = std::fs::read(&actual).map_err(|e| format!("{}: {e}", actual.display()))?;
        let b = std::fs::read(&expected).map_err(|e| format!("{}: {e}", expected.display()))?;
        if a != b {
            return Err(format!(
                "{} differs from golden {}",
                actual.display(),
                expected.display()
            ));
        }
    }
    Ok(())
}
