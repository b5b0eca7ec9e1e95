//! Order weights `a_0 .. a_N` for axisymmetric beam patterns
//! `g(x) = 1 / S_{D-2} * sum_n a_n / N_n^2 * P_n(x)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature;
use crate::special::{self, Dimension};

/// How a weight vector is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `a_0 = 1`.
    A0Unity,
    /// On-axis value `g(1) = 1`.
    G1Unity,
    /// As produced by the generator.
    Raw,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::A0Unity => "a0",
            Normalization::G1Unity => "g1",
            Normalization::Raw => "raw",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a0" => Ok(Normalization::A0Unity),
            "g1" => Ok(Normalization::G1Unity),
            "raw" => Ok(Normalization::Raw),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization '{other}' (expected a0, g1 or raw)"
            ))),
        }
    }
}

/// Weights `a_0 .. a_N` together with the dimension they were designed for.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub dim: Dimension,
    pub weights: Vec<f64>,
    pub normalization: Normalization,
}

impl WeightVector {
    pub fn new(dim: Dimension, weights: Vec<f64>, normalization: Normalization) -> Self {
        assert!(!weights.is_empty(), "a weight vector holds at least a_0");
        WeightVector {
            dim,
            weights,
            normalization,
        }
    }

    pub fn order(&self) -> usize {
        self.weights.len() - 1
    }

    /// On-axis value `g(1) = 1 / S_{D-2} * sum_n a_n / N_n^2`.
    pub fn g_at_one(&self) -> f64 {
        let norms = special::norm_squared_seq(self.order(), self.dim);
        let s: f64 = self.weights.iter().zip(&norms).map(|(a, n)| a / n).sum();
        s / special::sub_surface_area(self.dim)
    }

    fn scaled(&self, factor: f64, normalization: Normalization) -> WeightVector {
        WeightVector {
            dim: self.dim,
            weights: self.weights.iter().map(|a| a * factor).collect(),
            normalization,
        }
    }

    pub fn to_a0_unity(&self) -> Result<WeightVector> {
        let a0 = self.weights[0];
        if a0 == 0.0 {
            return Err(Error::ZeroPressure);
        }
        let mut out = self.scaled(1.0 / a0, Normalization::A0Unity);
        out.weights[0] = 1.0;
        Ok(out)
    }

    pub fn to_g1_unity(&self) -> Result<WeightVector> {
        let g1 = self.g_at_one();
        if g1 == 0.0 {
            return Err(Error::InvalidArgument(
                "on-axis value g(1) is zero, cannot normalize".into(),
            ));
        }
        Ok(self.scaled(1.0 / g1, Normalization::G1Unity))
    }

    /// Rescales to `target`; `Raw` keeps the values and only relabels.
    pub fn normalized(&self, target: Normalization) -> Result<WeightVector> {
        match target {
            Normalization::A0Unity => self.to_a0_unity(),
            Normalization::G1Unity => self.to_g1_unity(),
            Normalization::Raw => Ok(WeightVector {
                normalization: Normalization::Raw,
                ..self.clone()
            }),
        }
    }
}

/// Basic (maximum directivity) weights, all ones.
pub fn basic(order: usize, dim: Dimension) -> WeightVector {
    WeightVector::new(dim, vec![1.0; order + 1], Normalization::A0Unity)
}

/// Result of the max-rE construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxReSolution {
    pub weights: WeightVector,
    /// Largest root of `P_{N+1}`, equal to the achieved `r_E`.
    pub r_e_max: f64,
    pub iterations: usize,
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_STEP_TOL: f64 = 1e-15;

/// Max-rE weights `a_n = P_n(r)`, `r` the largest root of `P_{N+1}`.
///
/// Newton from `cos(137.9 deg / (N + 1.51))` (`D >= 2.5`) or `cos(pi / (2N + 2))`.
/// The result is accepted only if no sign change of `P_{N+1}` lies above it;
/// otherwise the first sign change scanned down from `x = 1` is bisected.
pub fn max_re(order: usize, dim: Dimension) -> Result<MaxReSolution> {
    let (r, iterations) = largest_root(order + 1, dim)?;
    let weights = special::eval_sequence(r, order, dim)?.values;
    Ok(MaxReSolution {
        weights: WeightVector::new(dim, weights, Normalization::A0Unity),
        r_e_max: r,
        iterations,
    })
}

fn initial_guess(degree: usize, dim: Dimension) -> f64 {
    let n = (degree - 1) as f64;
    if dim.d() >= 2.5 {
        (137.9f64.to_radians() / (n + 1.51)).cos()
    } else {
        (std::f64::consts::PI / (2.0 * (n + 1.0))).cos()
    }
}

/// First sign change of `P_degree(cos phi)` scanned from `phi = 0`, as an x-bracket `(lo, hi)`.
fn bracket_largest_root(degree: usize, dim: Dimension) -> Result<(f64, f64)> {
    let step = std::f64::consts::PI / (8.0 * (degree as f64 + dim.d()));
    let p = |x: f64| special::sequence_unchecked(x, degree, dim)[degree];
    let mut hi = 1.0;
    let mut k = 1;
    loop {
        let phi = (k as f64 * step).min(std::f64::consts::PI);
        let lo = phi.cos();
        if p(lo) <= 0.0 {
            return Ok((lo, hi));
        }
        if phi >= std::f64::consts::PI {
            return Err(Error::NoConvergence { iterations: k });
        }
        hi = lo;
        k += 1;
    }
}

fn largest_root(degree: usize, dim: Dimension) -> Result<(f64, usize)> {
    if degree == 1 {
        return Ok((0.0, 0));
    }
    let eval = |x: f64| special::sequence_unchecked(x, degree, dim)[degree];
    let (lo, hi) = bracket_largest_root(degree, dim)?;

    let mut x = initial_guess(degree, dim);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=NEWTON_MAX_ITER {
        iterations = it;
        let dx = eval(x) / special::derivative_unchecked(x, degree, dim);
        x -= dx;
        if !x.is_finite() || x <= -1.0 || x >= 1.0 {
            break;
        }
        if dx.abs() < NEWTON_STEP_TOL {
            converged = true;
            break;
        }
    }
    if converged && x >= lo && x <= hi {
        return Ok((x, iterations));
    }

    // Bisection on the verified bracket; P(lo) <= 0 < P(hi).
    let (mut a, mut b) = (lo, hi);
    let mut steps = 0;
    while b - a > 1e-16 && steps < 200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if eval(m) <= 0.0 {
            a = m;
        } else {
            b = m;
        }
        steps += 1;
    }
    let r = if eval(a).abs() <= eval(b).abs() { a } else { b };
    Ok((r, iterations + steps))
}

/// Maximum front-to-back energy ratio weights.
///
/// Maximizes `a^T G_f a / a^T G_b a` through the Cholesky reduction
/// `C = L^-1 G_f L^-T` (`G_b = L L^T`) and cyclic Jacobi on `C`.
pub fn supercardioid(order: usize, dim: Dimension) -> Result<WeightVector> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "supercardioid needs order N >= 1".into(),
        ));
    }
    let front = quadrature::gram_front(order, dim);
    let back = front.back();
    let l = linalg::cholesky(&back.entries).ok_or_else(|| {
        Error::DegenerateProblem("back-half Gram matrix is not positive definite".into())
    })?;
    let size = order + 1;
    // M = L^-1 G_f, then C = L^-1 M^T.
    let cols: Vec<Vec<f64>> = (0..size)
        .map(|j| {
            let col: Vec<f64> = front.entries.iter().map(|row| row[j]).collect();
            linalg::solve_lower(&l, &col)
        })
        .collect();
    let mut c: linalg::Matrix = (0..size)
        .map(|j| {
            let row: Vec<f64> = cols.iter().map(|col| col[j]).collect();
            linalg::solve_lower(&l, &row)
        })
        .collect();
    for i in 0..size {
        for j in 0..i {
            let s = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = s;
            c[j][i] = s;
        }
    }
    let eig = linalg::jacobi_eigen(&c, 1e-13, 100)
        .ok_or_else(|| Error::DegenerateProblem("Jacobi iteration did not converge".into()))?;
    let y = eig.vector(eig.argmax());
    let mut a = linalg::solve_lower_transposed(&l, &y);
    let raw = WeightVector::new(dim, a.clone(), Normalization::Raw);
    if raw.g_at_one() < 0.0 {
        a.iter_mut().for_each(|v| *v = -*v);
    }
    WeightVector::new(dim, a, Normalization::Raw).to_a0_unity()
}

/// The fitted exponent of the supercardioid approximation was validated only
/// for `1 <= N <= 10` and `2 <= D <= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeWarning {
    pub order: usize,
    pub dim: f64,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "supercardioid approximation used outside its fitted range (N={}, D={}; fitted for 1<=N<=10, 2<=D<=3)",
            self.order, self.dim
        )
    }
}

/// Exponent of the inphase-power approximation of the supercardioid.
pub fn supercardioid_exponent(order: usize, dim: Dimension) -> f64 {
    let n = order as f64;
    let d = dim.d();
    (0.73 * n + 0.67 * d - 1.11) / (n + 1.11 * d - 1.5)
}

/// Supercardioid approximation `a_n = (inphase a_n)^beta`.
pub fn supercardioid_approx(order: usize, dim: Dimension) -> (WeightVector, Option<RangeWarning>) {
    let beta = supercardioid_exponent(order, dim);
    let weights = inphase(order, dim)
        .weights
        .iter()
        .map(|a| a.powf(beta))
        .collect();
    let in_range = (1..=10).contains(&order) && (2.0..=3.0).contains(&dim.d());
    let warning = (!in_range).then_some(RangeWarning {
        order,
        dim: dim.d(),
    });
    (
        WeightVector::new(dim, weights, Normalization::A0Unity),
        warning,
    )
}

/// Inphase weights `a_n = N! Gamma(N + D - 1) / ((N - n)! Gamma(N + n + D - 1))`,
/// pattern proportional to `(1 + x)^N`.
///
/// The factorial ratio is accumulated as `a_n = a_{n-1} (N - n + 1) / (N + n + D - 2)`;
/// every factor is below one, so nothing overflows and small orders come out exact.
pub fn inphase(order: usize, dim: Dimension) -> WeightVector {
    let n_big = order as f64;
    let d = dim.d();
    let mut weights = Vec::with_capacity(order + 1);
    let mut a = 1.0;
    weights.push(a);
    for n in 1..=order {
        let nf = n as f64;
        a *= (n_big - nf + 1.0) / (n_big + nf + d - 2.0);
        weights.push(a);
    }
    WeightVector::new(dim, weights, Normalization::A0Unity)
}

/// Inphase weights from log-Gamma differences; reference for [`inphase`].
pub fn inphase_log_gamma(order: usize, dim: Dimension) -> Vec<f64> {
    let n_big = order as f64;
    let d = dim.d();
    let head = ln_gamma(n_big + 1.0) + ln_gamma(n_big + d - 1.0);
    (0..=order)
        .map(|n| {
            let nf = n as f64;
            (head - ln_gamma(n_big - nf + 1.0) - ln_gamma(n_big + nf + d - 1.0)).exp()
        })
        .collect()
}

/// Max-flat weights: `N = L + M + 1` with the pattern derivative proportional
/// to `(1 - x)^L (1 + x)^M`, so `g(-1) = 0`; normalized to `g(1) = 1`.
///
/// Forward recursion from `a_1 = 1` with `dN = L - M`:
/// `a_{n+1} = -((N - n + 1)(n - 1) a_{n-1} + 2 dN (n + alpha) a_n) / ((N + n + 2 alpha + 1)(n + 2 alpha + 1))`.
pub fn maxflat(order: usize, flat_l: usize, dim: Dimension) -> Result<WeightVector> {
    if order == 0 || flat_l >= order {
        return Err(Error::InvalidFlatness { order, l: flat_l });
    }
    let alpha = dim.alpha();
    let m_zeros = order - flat_l - 1;
    let delta = flat_l as f64 - m_zeros as f64;
    let nb = order as f64;
    let mut a = vec![0.0; order + 1];
    a[1] = 1.0;
    for n in 1..order {
        let nf = n as f64;
        a[n + 1] = -((nb - nf + 1.0) * (nf - 1.0) * a[n - 1] + 2.0 * delta * (nf + alpha) * a[n])
            / ((nb + nf + 2.0 * alpha + 1.0) * (nf + 2.0 * alpha + 1.0));
    }
    let norms = special::norm_squared_seq(order, dim);
    let alternating: f64 = (1..=order)
        .map(|n| if n % 2 == 0 { a[n] } else { -a[n] } / norms[n])
        .sum();
    a[0] = -norms[0] * alternating;
    let b: f64 = norms[0]
        * (1..=order)
            .filter(|n| n % 2 == 1)
            .map(|n| 2.0 * a[n] / norms[n])
            .sum::<f64>();
    a.iter_mut().for_each(|v| *v /= b);
    WeightVector::new(dim, a, Normalization::Raw).to_g1_unity()
}

/// `int_{x0}^{1} w(x) dx`.
fn cap_pressure(x0: f64, dim: Dimension) -> f64 {
    if dim.d() == 2.0 {
        x0.acos()
    } else if dim.d() == 3.0 {
        1.0 - x0
    } else {
        quadrature::integrate_axisym_interval(|_| 1.0, x0, 1.0, dim, 0)
    }
}

/// Spherical cap `x >= x0`: `a_n = int_{x0}^{1} P_n w dx`, so that
/// `sum_n a_n / N_n^2 P_n(x)` approximates the indicator of the cap.
pub fn cap(order: usize, x0: f64, dim: Dimension) -> Result<WeightVector> {
    if !(x0 > -1.0 && x0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cap threshold x0={x0} must lie strictly inside (-1, 1)"
        )));
    }
    let alpha = dim.alpha();
    let p = special::sequence_unchecked(x0, order + 1, dim);
    let w = special::weight(x0, dim);
    let mut a = Vec::with_capacity(order + 1);
    a.push(cap_pressure(x0, dim));
    for n in 1..=order {
        let nf = n as f64;
        a.push(w / (2.0 * nf + 2.0 * alpha) * (p[n - 1] - p[n + 1]));
    }
    Ok(WeightVector::new(dim, a, Normalization::Raw))
}

const TRAPEZOID_WIDE: f64 = 1.375;
const TRAPEZOID_NARROW: f64 = 0.75;

/// Trapezoidal panning window: product of two cap weight sequences with
/// half-angles `1.375 s / 2` and `0.75 s / 2`, `s` the loudspeaker spacing.
pub fn cap_trapezoid(order: usize, spacing_deg: f64, dim: Dimension) -> Result<WeightVector> {
    if !(spacing_deg > 0.0 && spacing_deg < 180.0 / TRAPEZOID_WIDE) {
        return Err(Error::InvalidArgument(format!(
            "spacing {spacing_deg} deg must lie in (0, {:.4})",
            180.0 / TRAPEZOID_WIDE
        )));
    }
    let half = spacing_deg.to_radians() / 2.0;
    let wide = cap(order, (TRAPEZOID_WIDE * half).cos(), dim)?;
    let narrow = cap(order, (TRAPEZOID_NARROW * half).cos(), dim)?;
    let a = wide
        .weights
        .iter()
        .zip(&narrow.weights)
        .map(|(x, y)| x * y)
        .collect();
    Ok(WeightVector::new(dim, a, Normalization::Raw))
}

/// Design selector used by the command line and the sweeps in the tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Design {
    Basic,
    MaxRe,
    Supercardioid,
    SupercardioidApprox,
    Inphase,
    MaxFlat { l: usize },
    Cap { x0: f64 },
    CapTrapezoid { spacing_deg: f64 },
}

impl Design {
    pub fn name(&self) -> &'static str {
        match self {
            Design::Basic => "basic",
            Design::MaxRe => "maxre",
            Design::Supercardioid => "supercard",
            Design::SupercardioidApprox => "supercard-approx",
            Design::Inphase => "inphase",
            Design::MaxFlat { .. } => "maxflat",
            Design::Cap { .. } => "cap",
            Design::CapTrapezoid { .. } => "cap-trapezoid",
        }
    }

    /// Weights in the design's natural normalization.
    pub fn generate(&self, order: usize, dim: Dimension) -> Result<WeightVector> {
        match *self {
            Design::Basic => Ok(basic(order, dim)),
            Design::MaxRe => Ok(max_re(order, dim)?.weights),
            Design::Supercardioid => supercardioid(order, dim),
            Design::SupercardioidApprox => Ok(supercardioid_approx(order, dim).0),
            Design::Inphase => Ok(inphase(order, dim)),
            Design::MaxFlat { l } => maxflat(order, l, dim),
            Design::Cap { x0 } => cap(order, x0, dim),
            Design::CapTrapezoid { spacing_deg } => cap_trapezoid(order, spacing_deg, dim),
        }
    }
}
