#![allow(dead_code)]

use std::path::PathBuf;

use axisym::special::Dimension;

pub fn dim(d: f64) -> Dimension {
    Dimension::new(d).unwrap()
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Reads a comma-separated table of numbers or `p/q` fractions, skipping `#` lines.
pub fn read_table(name: &str) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(',')
                .map(|f| match f.trim().split_once('/') {
                    Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
                    None => f.trim().parse().unwrap(),
                })
                .collect()
        })
        .collect()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Documented example invocations: golden file name, arguments, exit code.
pub const EXAMPLES: &[(&str, &[&str], i32)] = &[
    (
        "weights_basic.csv",
        &["weights", "--design", "basic", "--order", "2", "--dim", "3"],
        0,
    ),
    (
        "weights_maxre.csv",
        &["weights", "--design", "maxre", "--order", "3", "--dim", "2"],
        0,
    ),
    (
        "weights_inphase.json",
        &[
            "weights", "--design", "inphase", "--order", "1", "--dim", "3", "--format", "json",
        ],
        0,
    ),
    (
        "weights_maxflat.csv",
        &[
            "weights", "--design", "maxflat", "--flat-l", "1", "--order", "3", "--dim", "2.5",
            "--norm", "g1",
        ],
        0,
    ),
    (
        "weights_cap.csv",
        &[
            "weights",
            "--design",
            "cap",
            "--cap-angle-deg",
            "40",
            "--order",
            "4",
            "--dim",
            "3",
        ],
        0,
    ),
    (
        "metrics_d3.csv",
        &[
            "metrics",
            "--design",
            "basic,maxre,supercard,inphase",
            "--orders",
            "1..5",
            "--dim",
            "3",
        ],
        0,
    ),
    (
        "metrics_supercard_d2.json",
        &[
            "metrics",
            "--design",
            "supercard",
            "--orders",
            "1..5",
            "--dim",
            "2",
            "--format",
            "json",
        ],
        0,
    ),
    (
        "pattern_inphase.csv",
        &[
            "pattern",
            "--design",
            "inphase",
            "--order",
            "1",
            "--dim",
            "3",
            "--samples",
            "7",
        ],
        0,
    ),
    (
        "tdesign_icosahedron.csv",
        &["tdesign", "--builtin", "icosahedron", "--t", "5"],
        0,
    ),
    (
        "tdesign_cube.csv",
        &["tdesign", "--builtin", "cube", "--t", "4"],
        1,
    ),
    (
        "tdesign_circle.json",
        &["tdesign", "--circle", "8", "--t", "7", "--format", "json"],
        0,
    ),
];

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn run_cli(args: &[&str]) -> Run {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_axisym"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}
