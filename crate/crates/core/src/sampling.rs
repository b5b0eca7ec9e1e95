//! Direction sets on the circle and the sphere, t-design verification and
//! discrete (node-sum) versions of the pattern metrics.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::designs::WeightVector;
use crate::error::{Error, Result};
use crate::special::{self, Dimension};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_7de5;

/// Random orientations per degree when the caller does not say otherwise.
pub const DEFAULT_TRIALS: usize = 64;

/// Node sums below this deviation count as exact.
pub const TDESIGN_TOL: f64 = 1e-9;

/// Rows whose norm is off by less than this are rescaled on load.
const LOAD_NORM_TOL: f64 = 1e-6;

/// Minimum angular separation between two distinct nodes.
const DUPLICATE_ANGLE: f64 = 1e-9;

/// Unit direction vectors in 2 or 3 dimensions; 2D nodes keep `z = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    ambient: usize,
    nodes: Vec<[f64; 3]>,
    pub label: String,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Angle between two vectors, accurate also for nearly parallel ones.
pub fn angle_between(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm(&cross(a, b)).atan2(dot(a, b))
}

impl NodeSet {
    /// Validates unit norms (within `1e-12`) and distinctness.
    pub fn new(ambient: usize, nodes: Vec<[f64; 3]>, label: impl Into<String>) -> Result<Self> {
        if ambient != 2 && ambient != 3 {
            return Err(Error::InvalidArgument(format!(
                "node sets live in 2 or 3 dimensions, got {ambient}"
            )));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("node set is empty".into()));
        }
        for (i, v) in nodes.iter().enumerate() {
            if (norm(v) - 1.0).abs() > 1e-12 || (ambient == 2 && v[2] != 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "node {i} is not a unit vector"
                )));
            }
        }
        if let Some((i, j)) = find_duplicate(&nodes) {
            return Err(Error::InvalidArgument(format!(
                "nodes {i} and {j} coincide"
            )));
        }
        Ok(NodeSet {
            ambient,
            nodes,
            label: label.into(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the orthogonal matrix `r` (row-major) to every node.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> NodeSet {
        let nodes = self
            .nodes
            .iter()
            .map(|v| [dot(&r[0], v), dot(&r[1], v), dot(&r[2], v)])
            .collect();
        NodeSet {
            ambient: self.ambient,
            nodes,
            label: self.label.clone(),
        }
    }

    fn dimension(&self) -> Dimension {
        Dimension::new(self.ambient as f64).expect("ambient dimension is 2 or 3")
    }
}

fn find_duplicate(nodes: &[[f64; 3]]) -> Option<(usize, usize)> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if angle_between(&nodes[i], &nodes[j]) <= DUPLICATE_ANGLE {
                return Some((i, j));
            }
        }
    }
    None
}

/// `L` equiangular directions `offset + 2 pi l / L` on the circle.
pub fn circle_nodes(count: usize, offset_rad: f64) -> Result<NodeSet> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "a ring needs at least one node".into(),
        ));
    }
    let nodes = (0..count)
        .map(|l| {
            let phi = offset_rad + 2.0 * PI * l as f64 / count as f64;
            [phi.cos(), phi.sin(), 0.0]
        })
        .collect();
    NodeSet::new(2, nodes, format!("circle-{count}"))
}

/// The five regular polyhedra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Platonic {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl Platonic {
    pub const ALL: [Platonic; 5] = [
        Platonic::Tetrahedron,
        Platonic::Octahedron,
        Platonic::Cube,
        Platonic::Icosahedron,
        Platonic::Dodecahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Platonic::Tetrahedron => "tetrahedron",
            Platonic::Octahedron => "octahedron",
            Platonic::Cube => "cube",
            Platonic::Icosahedron => "icosahedron",
            Platonic::Dodecahedron => "dodecahedron",
        }
    }

    /// Design strength of the vertex set.
    pub fn strength(self) -> usize {
        match self {
            Platonic::Tetrahedron => 2,
            Platonic::Octahedron | Platonic::Cube => 3,
            Platonic::Icosahedron | Platonic::Dodecahedron => 5,
        }
    }
}

impl fmt::Display for Platonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Platonic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Platonic::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown polyhedron '{s}'")))
    }
}

/// Vertices of a regular polyhedron, scaled to the unit sphere.
pub fn platonic(solid: Platonic) -> NodeSet {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let signs = [1.0, -1.0];
    let mut raw: Vec<[f64; 3]> = Vec::new();
    match solid {
        Platonic::Tetrahedron => {
            raw.extend([
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ]);
        }
        Platonic::Octahedron => {
            for s in signs {
                raw.extend([[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]]);
            }
        }
        Platonic::Cube => {
            for x in signs {
                for y in signs {
                    for z in signs {
                        raw.push([x, y, z]);
                    }
                }
            }
        }
        Platonic::Icosahedron => {
            for s in signs {
                for t in signs {
                    raw.extend([[0.0, s, t * phi], [s, t * phi, 0.0], [t * phi, 0.0, s]]);
                }
            }
        }
        Platonic::Dodecahedron => {
            for x in signs {
                for y in signs {
                    for z in signs {
                        raw.push([x, y, z]);
                    }
                }
            }
            for s in signs {
                for t in signs {
                    raw.extend([
                        [0.0, s / phi, t * phi],
                        [s / phi, t * phi, 0.0],
                        [t * phi, 0.0, s / phi],
                    ]);
                }
            }
        }
    }
    let nodes = raw
        .into_iter()
        .map(|v| {
            let r = norm(&v);
            [v[0] / r, v[1] / r, v[2] / r]
        })
        .collect();
    NodeSet::new(3, nodes, solid.name()).expect("polyhedron vertices are distinct unit vectors")
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn unit_row(path: &Path, line: usize, v: [f64; 3]) -> Result<[f64; 3]> {
    let r = norm(&v);
    if !r.is_finite() || (r - 1.0).abs() >= LOAD_NORM_TOL {
        return Err(Error::Norm {
            path: path.to_path_buf(),
            line,
            norm: r,
        });
    }
    Ok(v.map(|c| c / r))
}

/// Reads a node file.
///
/// Lines starting with `#` and blank lines are skipped; fields are separated by
/// commas or whitespace. In 3D a row is `x,y,z` or `azimuth_deg,zenith_deg`;
/// in 2D a row is `azimuth_deg` or `x,y`. Cartesian rows whose norm is off by
/// less than `1e-6` are rescaled, larger deviations are rejected.
pub fn load_nodes(path: &Path, ambient: usize) -> Result<NodeSet> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut nodes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = if line.contains(',') {
            line.split(',').map(|f| f.trim().parse()).collect()
        } else {
            line.split_whitespace().map(str::parse).collect()
        };
        let fields = parsed.map_err(|e| parse_error(path, line_no, format!("bad number: {e}")))?;
        let v = match (ambient, fields.as_slice()) {
            (3, &[x, y, z]) => unit_row(path, line_no, [x, y, z])?,
            (2, &[x, y]) => unit_row(path, line_no, [x, y, 0.0])?,
            (3, &[az, zen]) => {
                let (az, zen) = (az.to_radians(), zen.to_radians());
                [zen.sin() * az.cos(), zen.sin() * az.sin(), zen.cos()]
            }
            (2, &[az]) => {
                let az = az.to_radians();
                [az.cos(), az.sin(), 0.0]
            }
            _ => {
                return Err(parse_error(
                    path,
                    line_no,
                    format!(
                        "{} columns do not describe a {ambient}D direction",
                        fields.len()
                    ),
                ))
            }
        };
        nodes.push(v);
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if nodes.is_empty() {
        return Err(parse_error(path, 0, "file contains no nodes"));
    }
    if let Some((i, j)) = find_duplicate(&nodes) {
        return Err(parse_error(path, 0, format!("nodes {i} and {j} coincide")));
    }
    NodeSet::new(ambient, nodes, label)
}

/// Outcome of a t-design check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TDesignReport {
    pub t_claimed: usize,
    pub max_abs_error: f64,
    /// Worst deviation for degrees `1 ..= t_claimed`.
    pub per_degree_errors: Vec<f64>,
    pub passed: bool,
}

fn random_direction(rng: &mut ChaCha8Rng, ambient: usize) -> [f64; 3] {
    if ambient == 2 {
        let phi = rng.random_range(0.0..2.0 * PI);
        return [phi.cos(), phi.sin(), 0.0];
    }
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let r = norm(&v);
        if r > 1e-8 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

/// Uniformly distributed rotation of 3-space (a random unit quaternion).
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let r = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / r);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// [`tdesign_check_seeded`] with [`DEFAULT_SEED`].
pub fn tdesign_check(nodes: &NodeSet, t: usize, trials: usize) -> TDesignReport {
    tdesign_check_seeded(nodes, t, trials, DEFAULT_SEED)
}

/// Compares `S_{D-1} / L * sum_l P_n(s . theta_l)` with its exact integral, zero
/// for `n >= 1`, for every degree `1 <= n <= t` and `trials` random directions `s`.
pub fn tdesign_check_seeded(nodes: &NodeSet, t: usize, trials: usize, seed: u64) -> TDesignReport {
    let dim = nodes.dimension();
    let scale = special::surface_area(dim) / nodes.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions: Vec<[f64; 3]> = (0..trials.max(1))
        .map(|_| random_direction(&mut rng, nodes.ambient))
        .collect();
    let mut per_degree = vec![0.0f64; t];
    let mut p = vec![0.0; t + 1];
    for s in &directions {
        let mut sums = vec![0.0; t + 1];
        for v in &nodes.nodes {
            special::fill_sequence(dot(s, v).clamp(-1.0, 1.0), dim.d(), &mut p);
            for (acc, pn) in sums.iter_mut().zip(&p) {
                *acc += pn;
            }
        }
        for n in 1..=t {
            per_degree[n - 1] = per_degree[n - 1].max((scale * sums[n]).abs());
        }
    }
    let max_abs_error = per_degree.iter().copied().fold(0.0, f64::max);
    TDesignReport {
        t_claimed: t,
        max_abs_error,
        per_degree_errors: per_degree,
        passed: max_abs_error < TDESIGN_TOL,
    }
}

/// Node-sum metrics of a pattern aimed at `aim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteMetrics {
    pub p: f64,
    pub e: f64,
    /// `None` when the node sum of `g` vanishes.
    pub r_v: Option<f64>,
    pub r_e: f64,
    /// Angle between the velocity vector and `aim` in radians.
    pub misaim_v: Option<f64>,
    /// Angle between the energy vector and `aim` in radians.
    pub misaim_e: f64,
}

/// `P = S / L sum g_l`, `E = S / L sum g_l^2` and the lengths and directions of
/// `r_V = sum g_l theta_l / sum g_l` and `r_E = sum g_l^2 theta_l / sum g_l^2`,
/// with `g_l = g(aim . theta_l)`.
pub fn discrete_metrics(
    w: &WeightVector,
    nodes: &NodeSet,
    aim: [f64; 3],
) -> Result<DiscreteMetrics> {
    if w.dim.d() != nodes.ambient as f64 {
        return Err(Error::InvalidArgument(format!(
            "pattern designed for D={} sampled on {}D nodes",
            w.dim.d(),
            nodes.ambient
        )));
    }
    let r = norm(&aim);
    if !(r > 0.0) || (nodes.ambient == 2 && aim[2] != 0.0) {
        return Err(Error::InvalidArgument(
            "aim must be a nonzero in-plane vector".into(),
        ));
    }
    let aim = [aim[0] / r, aim[1] / r, aim[2] / r];
    let order = w.order();
    let norms = special::norm_squared_seq(order, w.dim);
    let sub = special::sub_surface_area(w.dim);
    let mut p = vec![0.0; order + 1];
    let (mut s1, mut s2) = (0.0, 0.0);
    let (mut v1, mut v2) = ([0.0; 3], [0.0; 3]);
    for node in &nodes.nodes {
        special::fill_sequence(dot(&aim, node).clamp(-1.0, 1.0), w.dim.d(), &mut p);
        let g: f64 = w
            .weights
            .iter()
            .zip(&p)
            .zip(&norms)
            .map(|((a, p), n)| a * p / n)
            .sum::<f64>()
            / sub;
        s1 += g;
        s2 += g * g;
        for k in 0..3 {
            v1[k] += g * node[k];
            v2[k] += g * g * node[k];
        }
    }
    let scale = special::surface_area(w.dim) / nodes.len() as f64;
    let (r_v, misaim_v) = if s1 != 0.0 {
        let v = v1.map(|c| c / s1);
        (Some(norm(&v)), Some(angle_between(&v, &aim)))
    } else {
        (None, None)
    };
    let v = v2.map(|c| c / s2);
    Ok(DiscreteMetrics {
        p: scale * s1,
        e: scale * s2,
        r_v,
        r_e: norm(&v),
        misaim_v,
        misaim_e: angle_between(&v, &aim),
    })
}
