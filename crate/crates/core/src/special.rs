//! Ultraspherical polynomials standardized to `P_n(1) = 1`.
//!
//! For a real space dimension `D >= 2` with `alpha = (D - 2) / 2` the polynomials
//! are orthogonal on `[-1, 1]` under the weight `w(x) = (1 - x^2)^((D - 3) / 2)`.
//! `D = 2` yields the Chebyshev polynomials `T_n`, `D = 3` the Legendre
//! polynomials. Gegenbauer's `C_n^(alpha)` differ only by the constant factor
//! `(2 alpha)^(rising n) / n!`; that standardization is not exposed here.
//!
//! Formulas that contain `1 / (2 alpha)` or rising factorials of `2 alpha` are
//! evaluated through their `alpha -> 0` limits, so `D = 2` needs no special branch.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Slack allowed on `|x| <= 1` before an argument is rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Distance from `x = +-1` below which [`derivative`] switches to the endpoint formula.
const ENDPOINT_BAND: f64 = 1e-8;

/// Below this separation [`cd_kernel`] sums directly instead of using the quotient.
const CD_CROSSOVER: f64 = 1e-6;

/// Space dimension `D >= 2`; `alpha = (D - 2) / 2` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(into = "f64")]
pub struct Dimension(f64);

impl Dimension {
    pub fn new(d: f64) -> Result<Self> {
        if !d.is_finite() || d < 2.0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Dimension(d))
    }

    pub fn d(self) -> f64 {
        self.0
    }

    pub fn alpha(self) -> f64 {
        (self.0 - 2.0) / 2.0
    }

    /// True when `D` is an integer, i.e. the weight is a plain trigonometric factor.
    pub fn is_integral(self) -> bool {
        self.0.fract() == 0.0
    }
}

impl From<Dimension> for f64 {
    fn from(dim: Dimension) -> f64 {
        dim.0
    }
}

/// Surface of the unit sphere embedded in `d`-dimensional space, `2 pi^(d/2) / Gamma(d/2)`.
fn unit_sphere_surface(d: f64) -> f64 {
    2.0 * PI.powf(d / 2.0) / gamma(d / 2.0)
}

/// `S_{D-1}`: surface of the unit sphere in `D` dimensions.
pub fn surface_area(dim: Dimension) -> f64 {
    unit_sphere_surface(dim.d())
}

/// `S_{D-2}`: surface of the next lower-dimensional unit sphere (`2` for `D = 2`).
pub fn sub_surface_area(dim: Dimension) -> f64 {
    unit_sphere_surface(dim.d() - 1.0)
}

/// Values `P_0(x) .. P_N(x)` at a single argument.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySequence {
    pub dim: Dimension,
    pub x: f64,
    pub values: Vec<f64>,
}

impl PolySequence {
    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }
}

/// Clamps tiny overshoot of `|x| <= 1`, rejects anything further out.
pub(crate) fn check_unit_interval(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain { x });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Fills `out[0..=n]` with `P_n(x)` using the three-term recurrence
/// `P_{n+1} = ((2n + D - 2) x P_n - n P_{n-1}) / (n + D - 2)`.
pub(crate) fn fill_sequence(x: f64, d: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = x;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + d - 2.0) * x * out[n] - nf * out[n - 1]) / (nf + d - 2.0);
    }
}

pub(crate) fn sequence_unchecked(x: f64, max_degree: usize, dim: Dimension) -> Vec<f64> {
    let mut values = vec![0.0; max_degree + 1];
    fill_sequence(x, dim.d(), &mut values);
    values
}

/// `P_n(x)` for `n = 0 ..= max_degree`.
pub fn eval_sequence(x: f64, max_degree: usize, dim: Dimension) -> Result<PolySequence> {
    let x = check_unit_interval(x)?;
    Ok(PolySequence {
        dim,
        x,
        values: sequence_unchecked(x, max_degree, dim),
    })
}

/// Single value `P_n(x)`.
pub fn eval(x: f64, n: usize, dim: Dimension) -> Result<f64> {
    Ok(eval_sequence(x, n, dim)?.values[n])
}

/// Power-series coefficients `c_0 .. c_n` of `P_n(x) = sum_k c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffList {
    pub degree: usize,
    pub dim: Dimension,
    pub coeffs: Vec<f64>,
}

impl CoeffList {
    /// Horner evaluation of the power series.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Coefficients from the Frobenius recurrence
/// `c_{k+2} = -(n - k)(n + k + 2 alpha) / ((k + 1)(k + 2)) c_k`,
/// run downward from the leading term and scaled so that `sum_k c_k = P_n(1) = 1`.
pub fn power_series_coeffs(n: usize, dim: Dimension) -> CoeffList {
    let alpha = dim.alpha();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut k = n;
    while k >= 2 {
        let lower = k - 2;
        let lf = lower as f64;
        let nf = n as f64;
        coeffs[lower] =
            -(lf + 1.0) * (lf + 2.0) * coeffs[k] / ((nf - lf) * (nf + lf + 2.0 * alpha));
        k -= 2;
    }
    let at_one: f64 = coeffs.iter().sum();
    for c in &mut coeffs {
        *c /= at_one;
    }
    CoeffList {
        degree: n,
        dim,
        coeffs,
    }
}

/// Recurrence coefficient of `x P_{n-1} = beta_n P_n + (1 - beta_n) P_{n-2}`,
/// `beta_n = (n - 1 + 2 alpha) / (2 (n - 1 + alpha))`, with `beta_1 = 1`.
pub fn beta_coeff(n: usize, dim: Dimension) -> f64 {
    assert!(n >= 1, "beta_n is defined for n >= 1");
    if n == 1 {
        return 1.0;
    }
    let alpha = dim.alpha();
    let m = (n - 1) as f64;
    (m + 2.0 * alpha) / (2.0 * (m + alpha))
}

/// `N_0^2 = S_{D-1} / S_{D-2} = int_{-1}^{1} w(x) dx`.
pub fn norm_squared_zero(dim: Dimension) -> f64 {
    surface_area(dim) / sub_surface_area(dim)
}

/// Squared norms `N_0^2 .. N_N^2` via `N_n^2 = (1 - beta_{n+1}) / beta_n N_{n-1}^2`.
pub fn norm_squared_seq(max_degree: usize, dim: Dimension) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_degree + 1);
    let mut current = norm_squared_zero(dim);
    out.push(current);
    for n in 1..=max_degree {
        current *= (1.0 - beta_coeff(n + 1, dim)) / beta_coeff(n, dim);
        out.push(current);
    }
    out
}

/// `N_n^2 = int_{-1}^{1} P_n(x)^2 w(x) dx`.
pub fn norm_squared(n: usize, dim: Dimension) -> f64 {
    norm_squared_seq(n, dim)[n]
}

/// Gamma-function form of the squared norm,
/// `n! Gamma(D - 1) / ((2n + D - 2) Gamma(n + D - 2)) * S_{D-1} / S_{D-2}`.
///
/// The `Gamma(D - 1)` factor is what reconciles the closed form with the
/// product recurrence for `D` other than 2 and 3.
pub fn norm_squared_closed_form(n: usize, dim: Dimension) -> f64 {
    let zero = norm_squared_zero(dim);
    if n == 0 {
        return zero;
    }
    let d = dim.d();
    let nf = n as f64;
    let log_ratio = ln_gamma(nf + 1.0) + ln_gamma(d - 1.0) - ln_gamma(nf + d - 2.0);
    log_ratio.exp() / (2.0 * nf + d - 2.0) * zero
}

/// `P_n'(1) = n (n + D - 2) / (D - 1)`.
pub fn derivative_at_one(n: usize, dim: Dimension) -> f64 {
    let nf = n as f64;
    nf * (nf + dim.d() - 2.0) / (dim.d() - 1.0)
}

/// `P_n'(x)`.
///
/// Interior points use `2 (n + alpha)(1 - x^2) P_n' = n (n + 2 alpha)(P_{n-1} - P_{n+1})`;
/// within `1e-8` of an endpoint the closed value at `x = +-1` is returned.
pub fn derivative(x: f64, n: usize, dim: Dimension) -> Result<f64> {
    let x = check_unit_interval(x)?;
    Ok(derivative_unchecked(x, n, dim))
}

pub(crate) fn derivative_unchecked(x: f64, n: usize, dim: Dimension) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if x >= 1.0 - ENDPOINT_BAND {
        return derivative_at_one(n, dim);
    }
    if x <= -1.0 + ENDPOINT_BAND {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        return sign * derivative_at_one(n, dim);
    }
    let p = sequence_unchecked(x, n + 1, dim);
    let alpha = dim.alpha();
    let nf = n as f64;
    nf * (nf + 2.0 * alpha) * (p[n - 1] - p[n + 1]) / (2.0 * (nf + alpha) * (1.0 - x * x))
}

/// `P_n(0)`: zero for odd `n`, else `(-1)^m (2m)! (alpha)^(rising m) / (m! (2 alpha)^(rising 2m))`.
pub fn value_at_zero(n: usize, dim: Dimension) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    if m == 0 {
        return 1.0;
    }
    let alpha = dim.alpha();
    // The leading factors alpha / (2 alpha) cancel to 1/2, which is the alpha -> 0 limit too.
    let mut value = 0.5;
    let mut up = 1..m;
    let mut fact = (m + 1)..=(2 * m);
    for j in 1..(2 * m) {
        value /= 2.0 * alpha + j as f64;
        if let Some(k) = fact.next() {
            value *= k as f64;
        }
        if let Some(k) = up.next() {
            value *= alpha + k as f64;
        }
    }
    for k in fact {
        value *= k as f64;
    }
    if m % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Christoffel-Darboux kernel `sum_{n=0}^{N} P_n(x) P_n(x0) / N_n^2`.
///
/// Uses the closed quotient
/// `beta_{N+1} (P_{N+1}(x) P_N(x0) - P_N(x) P_{N+1}(x0)) / ((x - x0) N_N^2)`
/// unless the arguments are closer than `1e-6`, where the direct sum is used.
pub fn cd_kernel(x: f64, x0: f64, max_degree: usize, dim: Dimension) -> Result<f64> {
    let x = check_unit_interval(x)?;
    let x0 = check_unit_interval(x0)?;
    if (x - x0).abs() > CD_CROSSOVER {
        Ok(cd_kernel_closed(x, x0, max_degree, dim))
    } else {
        Ok(cd_kernel_sum(x, x0, max_degree, dim))
    }
}

pub(crate) fn cd_kernel_sum(x: f64, x0: f64, max_degree: usize, dim: Dimension) -> f64 {
    let px = sequence_unchecked(x, max_degree, dim);
    let py = sequence_unchecked(x0, max_degree, dim);
    let norms = norm_squared_seq(max_degree, dim);
    px.iter()
        .zip(&py)
        .zip(&norms)
        .map(|((a, b), nn)| a * b / nn)
        .sum()
}

pub(crate) fn cd_kernel_closed(x: f64, x0: f64, max_degree: usize, dim: Dimension) -> f64 {
    let n = max_degree;
    let px = sequence_unchecked(x, n + 1, dim);
    let py = sequence_unchecked(x0, n + 1, dim);
    let beta = beta_coeff(n + 1, dim);
    beta * (px[n + 1] * py[n] - px[n] * py[n + 1]) / ((x - x0) * norm_squared(n, dim))
}

/// Axisymmetric integration weight `w(x) = (1 - x^2)^((D - 3) / 2)`.
pub fn weight(x: f64, dim: Dimension) -> f64 {
    (1.0 - x * x).powf((dim.d() - 3.0) / 2.0)
}
