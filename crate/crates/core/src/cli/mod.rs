//! Command-line front end: weights, metric tables, pattern samples and
//! t-design reports as CSV or JSON.
//!
//! Exit codes: 0 success, 1 t-design check failed, 2 invalid arguments or a
//! failed computation, 3 I/O or parse errors.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::designs::{self, Design, Normalization, WeightVector};
use crate::error::Error;
use crate::metrics;
use crate::sampling::{self, NodeSet, Platonic};
use crate::special::Dimension;

pub use output::{format_number, Cell, Envelope, Format};

/// Floor of the dB column in pattern output.
pub const DB_FLOOR: f64 = -120.0;

#[derive(Debug, Parser)]
#[command(
    name = "axisym",
    version,
    about = "Axisymmetric beam-pattern weights, metrics and t-design checks"
)]
pub struct Cli {
    /// Space dimension D (real, >= 2).
    #[arg(long, global = true, default_value_t = 3.0)]
    pub dim: f64,

    /// Order N.
    #[arg(long, global = true, default_value_t = 1)]
    pub order: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; `-` or `stdout` writes to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for the random orientations of `tdesign`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the order weights a_0 .. a_N of one design.
    Weights {
        #[arg(long, value_enum)]
        design: DesignName,
        #[command(flatten)]
        params: DesignParams,
    },
    /// Tabulate Q, velocity/energy spread angles and FBR.
    Metrics {
        /// Comma-separated design names.
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            required_unless_present = "weights_file"
        )]
        design: Vec<DesignName>,
        /// Order range `A..B` (inclusive) or a single order; defaults to --order.
        #[arg(long)]
        orders: Option<String>,
        /// CSV file with one weight vector a_0,..,a_N per row.
        #[arg(long, conflicts_with = "design")]
        weights_file: Option<PathBuf>,
        #[command(flatten)]
        params: DesignParams,
    },
    /// Sample the pattern uniformly in angle over [0, 180] degrees.
    Pattern {
        #[arg(long, value_enum)]
        design: DesignName,
        #[arg(long, default_value_t = 181)]
        samples: usize,
        #[command(flatten)]
        params: DesignParams,
    },
    /// Check that a node set integrates axisymmetric harmonics up to degree t.
    Tdesign {
        #[command(flatten)]
        source: NodeSource,
        /// Claimed design strength
        #[arg(long)]
        t: usize,
        /// Number of random orientations of the test axis
        #[arg(long, default_value_t = sampling::DEFAULT_TRIALS)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignName {
    Basic,
    #[value(name = "maxre")]
    MaxRe,
    Supercard,
    SupercardApprox,
    Inphase,
    #[value(name = "maxflat")]
    MaxFlat,
    Cap,
    CapTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    A0,
    G1,
    Raw,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::A0 => Normalization::A0Unity,
            NormArg::G1 => Normalization::G1Unity,
            NormArg::Raw => Normalization::Raw,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct DesignParams {
    /// Flatness order L of the max-flat design (0 <= L <= N-1).
    #[arg(long)]
    pub flat_l: Option<usize>,
    /// Cap threshold x0 = cos(half-angle).
    #[arg(long, conflicts_with = "cap_angle_deg")]
    pub cap_x0: Option<f64>,
    /// Cap half-angle in degrees.
    #[arg(long)]
    pub cap_angle_deg: Option<f64>,
    /// Loudspeaker spacing in degrees for the trapezoidal cap.
    #[arg(long)]
    pub spacing_deg: Option<f64>,
    /// Rescale the weights; default keeps the design's own normalization.
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct NodeSource {
    /// tetrahedron, octahedron, cube, icosahedron or dodecahedron.
    #[arg(long)]
    pub builtin: Option<Platonic>,
    /// Equiangular ring with this many nodes.
    #[arg(long)]
    pub circle: Option<usize>,
    /// Node file; read as 2D when --dim is 2, otherwise 3D.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

impl DesignParams {
    fn resolve(&self, name: DesignName) -> Result<Design, Error> {
        Ok(match name {
            DesignName::Basic => Design::Basic,
            DesignName::MaxRe => Design::MaxRe,
            DesignName::Supercard => Design::Supercardioid,
            DesignName::SupercardApprox => Design::SupercardioidApprox,
            DesignName::Inphase => Design::Inphase,
            DesignName::MaxFlat => Design::MaxFlat {
                l: self
                    .flat_l
                    .ok_or_else(|| invalid("maxflat needs --flat-l"))?,
            },
            DesignName::Cap => {
                let x0 = match (self.cap_x0, self.cap_angle_deg) {
                    (Some(x0), _) => x0,
                    (None, Some(deg)) => deg.to_radians().cos(),
                    (None, None) => return Err(invalid("cap needs --cap-x0 or --cap-angle-deg")),
                };
                Design::Cap { x0 }
            }
            DesignName::CapTrapezoid => Design::CapTrapezoid {
                spacing_deg: self
                    .spacing_deg
                    .ok_or_else(|| invalid("cap-trapezoid needs --spacing-deg"))?,
            },
        })
    }

    fn provenance(&self, design: &Design, env: &mut Envelope) {
        match *design {
            Design::MaxFlat { l } => env.provenance("flat_l", Cell::Int(l as i64)),
            Design::Cap { x0 } => env.provenance("cap_x0", Cell::Num(x0)),
            Design::CapTrapezoid { spacing_deg } => {
                env.provenance("spacing_deg", Cell::Num(spacing_deg))
            }
            _ => {}
        }
    }
}

struct Ctx<'a> {
    dim: Dimension,
    order: usize,
    seed: Option<u64>,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn generate(
        &mut self,
        design: &Design,
        order: usize,
        norm: Option<NormArg>,
    ) -> Result<WeightVector, Error> {
        let w = if let Design::SupercardioidApprox = design {
            let (w, warning) = designs::supercardioid_approx(order, self.dim);
            if let Some(warning) = warning {
                let _ = writeln!(self.stderr, "warning: {warning}");
            }
            w
        } else {
            design.generate(order, self.dim)?
        };
        match norm {
            Some(n) => w.normalized(n.into()),
            None => Ok(w),
        }
    }
}

fn base_envelope(command: &str, dim: Dimension) -> Envelope {
    let mut env = Envelope::new();
    env.provenance(
        "tool",
        Cell::Text(format!("axisym {}", env!("CARGO_PKG_VERSION"))),
    );
    env.provenance("command", Cell::Text(command.into()));
    env.provenance("dim", Cell::Num(dim.d()));
    env
}

fn cmd_weights(ctx: &mut Ctx, name: DesignName, params: &DesignParams) -> Result<Envelope, Error> {
    let design = params.resolve(name)?;
    let mut env = base_envelope("weights", ctx.dim);
    env.provenance("design", Cell::Text(design.name().into()));
    env.provenance("order", Cell::Int(ctx.order as i64));
    params.provenance(&design, &mut env);

    let w = if let Design::MaxRe = design {
        let s = designs::max_re(ctx.order, ctx.dim)?;
        env.value("r_e_max", Cell::Num(s.r_e_max));
        match params.norm {
            Some(n) => s.weights.normalized(n.into())?,
            None => s.weights,
        }
    } else {
        ctx.generate(&design, ctx.order, params.norm)?
    };
    env.provenance("normalization", Cell::Text(w.normalization.as_str().into()));
    env.columns(&["n", "a_n"]);
    for (n, a) in w.weights.iter().enumerate() {
        env.row(vec![Cell::Int(n as i64), Cell::Num(*a)]);
    }
    Ok(env)
}

/// Parses `A..B`, `A..=B`, `A-B` or a single order.
pub fn parse_order_range(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || {
        invalid(format!(
            "cannot read order range '{s}' (expected A..B or N)"
        ))
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b.trim_start_matches('='))?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let n = num(s)?;
        (n, n)
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn angle_deg(r: Option<f64>) -> Cell {
    match r {
        Some(r) if (-1.0..=1.0).contains(&r) => Cell::Num(r.acos().to_degrees()),
        _ => Cell::Null,
    }
}

fn metric_row(label: &str, w: &WeightVector) -> Result<Vec<Cell>, Error> {
    let m = metrics::compute_metrics(w)?;
    Ok(vec![
        Cell::Text(label.into()),
        Cell::Int(w.order() as i64),
        Cell::Num(m.p),
        Cell::Num(m.e),
        Cell::Num(m.q),
        m.r_v.map_or(Cell::Null, Cell::Num),
        Cell::Num(m.r_e),
        Cell::Num(m.fbr),
        angle_deg(m.r_v),
        angle_deg(Some(m.r_e)),
        Cell::Num(10.0 * m.fbr.log10()),
    ])
}

const METRIC_COLUMNS: [&str; 11] = [
    "design",
    "order",
    "p",
    "e",
    "q",
    "r_v",
    "r_e",
    "fbr",
    "r_v_angle_deg",
    "r_e_angle_deg",
    "fbr_db",
];

/// One weight vector per non-comment row.
pub fn read_weights_file(path: &Path, dim: Dimension) -> Result<Vec<(usize, WeightVector)>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let weights = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("bad weight: {e}"),
            })?;
        out.push((idx + 1, WeightVector::new(dim, weights, Normalization::Raw)));
    }
    if out.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "file contains no weight vectors".into(),
        });
    }
    Ok(out)
}

fn cmd_metrics(
    ctx: &mut Ctx,
    names: &[DesignName],
    orders: Option<&str>,
    weights_file: Option<&Path>,
    params: &DesignParams,
) -> Result<Envelope, Error> {
    let mut env = base_envelope("metrics", ctx.dim);
    env.columns(&METRIC_COLUMNS);
    if let Some(path) = weights_file {
        env.provenance("weights_file", Cell::Text(path.display().to_string()));
        for (line, w) in read_weights_file(path, ctx.dim)? {
            env.row(metric_row(&format!("line{line}"), &w)?);
        }
        return Ok(env);
    }
    let orders = match orders {
        Some(s) => parse_order_range(s)?,
        None => vec![ctx.order],
    };
    let designs = names
        .iter()
        .map(|n| params.resolve(*n))
        .collect::<Result<Vec<_>, _>>()?;
    let list: Vec<&str> = designs.iter().map(|d| d.name()).collect();
    env.provenance("design", Cell::Text(list.join(",")));
    env.provenance(
        "orders",
        Cell::Text(format!("{}..{}", orders[0], orders[orders.len() - 1])),
    );
    for design in &designs {
        params.provenance(design, &mut env);
    }
    if let Some(n) = params.norm {
        env.provenance(
            "normalization",
            Cell::Text(Normalization::from(n).as_str().into()),
        );
    }
    for design in &designs {
        for &n in &orders {
            let w = ctx.generate(design, n, params.norm)?;
            env.row(metric_row(design.name(), &w)?);
        }
    }
    Ok(env)
}

fn cmd_pattern(
    ctx: &mut Ctx,
    name: DesignName,
    samples: usize,
    params: &DesignParams,
) -> Result<Envelope, Error> {
    if samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let design = params.resolve(name)?;
    let w = ctx.generate(&design, ctx.order, params.norm)?;
    let mut env = base_envelope("pattern", ctx.dim);
    env.provenance("design", Cell::Text(design.name().into()));
    env.provenance("order", Cell::Int(ctx.order as i64));
    params.provenance(&design, &mut env);
    env.provenance("normalization", Cell::Text(w.normalization.as_str().into()));
    env.columns(&["phi_deg", "x", "g", "db"]);
    let g1 = metrics::eval_pattern(&w, 1.0)?;
    for l in 0..samples {
        let phi_deg = 180.0 * l as f64 / (samples - 1) as f64;
        // exact values where the angle is a multiple of 90 degrees
        let x = match 2 * l {
            0 => 1.0,
            k if k == samples - 1 => 0.0,
            k if k == 2 * (samples - 1) => -1.0,
            _ => phi_deg.to_radians().cos(),
        };
        let g = metrics::eval_pattern(&w, x)?;
        let db = if g1 == 0.0 {
            Cell::Null
        } else {
            let ratio = (g / g1).abs();
            Cell::Num(if ratio > 0.0 {
                (20.0 * ratio.log10()).max(DB_FLOOR)
            } else {
                DB_FLOOR
            })
        };
        env.row(vec![Cell::Num(phi_deg), Cell::Num(x), Cell::Num(g), db]);
    }
    Ok(env)
}

fn cmd_tdesign(
    ctx: &mut Ctx,
    source: &NodeSource,
    t: usize,
    trials: usize,
) -> Result<(Envelope, bool), Error> {
    if trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let nodes: NodeSet = match (source.builtin, source.circle, &source.nodes) {
        (Some(p), _, _) => sampling::platonic(p),
        (_, Some(l), _) => sampling::circle_nodes(l, 0.0)?,
        (_, _, Some(path)) => {
            let ambient = if ctx.dim.d() == 2.0 { 2 } else { 3 };
            sampling::load_nodes(path, ambient)?
        }
        _ => return Err(invalid("one of --builtin, --circle or --nodes is required")),
    };
    let seed = ctx.seed.unwrap_or(sampling::DEFAULT_SEED);
    let report = sampling::tdesign_check_seeded(&nodes, t, trials, seed);

    let mut env = Envelope::new();
    env.provenance(
        "tool",
        Cell::Text(format!("axisym {}", env!("CARGO_PKG_VERSION"))),
    );
    env.provenance("command", Cell::Text("tdesign".into()));
    env.provenance("dim", Cell::Int(nodes.ambient() as i64));
    env.provenance("nodes", Cell::Text(nodes.label.clone()));
    env.provenance("count", Cell::Int(nodes.len() as i64));
    env.provenance("trials", Cell::Int(trials as i64));
    env.provenance("seed", Cell::UInt(seed));
    env.value("t_claimed", Cell::Int(t as i64));
    env.value("max_abs_error", Cell::Num(report.max_abs_error));
    env.value("passed", Cell::Bool(report.passed));
    env.columns(&["degree", "max_abs_error"]);
    for (k, e) in report.per_degree_errors.iter().enumerate() {
        env.row(vec![Cell::Int(k as i64 + 1), Cell::Num(*e)]);
    }
    Ok((env, report.passed))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::Norm { .. } => 3,
        _ => 2,
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(Envelope, bool), Error> {
    let dim = Dimension::new(cli.dim)?;
    let mut ctx = Ctx {
        dim,
        order: cli.order,
        seed: cli.seed,
        stderr,
    };
    match &cli.command {
        Command::Weights { design, params } => Ok((cmd_weights(&mut ctx, *design, params)?, true)),
        Command::Metrics {
            design,
            orders,
            weights_file,
            params,
        } => Ok((
            cmd_metrics(
                &mut ctx,
                design,
                orders.as_deref(),
                weights_file.as_deref(),
                params,
            )?,
            true,
        )),
        Command::Pattern {
            design,
            samples,
            params,
        } => Ok((cmd_pattern(&mut ctx, *design, *samples, params)?, true)),
        Command::Tdesign { source, t, trials } => cmd_tdesign(&mut ctx, source, *t, *trials),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let (env, passed) = match execute(&cli, stderr) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = env.render(cli.format);
    let written = match cli.out.as_deref() {
        Some(p) if p != Path::new("-") && p != Path::new("stdout") => std::fs::write(p, &text)
            .map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            }),
        _ => stdout
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 3;
    }
    if passed {
        0
    } else {
        1
    }
}
