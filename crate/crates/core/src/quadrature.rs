//! Numerical integration over the axisymmetric measure `w(x) dx`,
//! `w(x) = (1 - x^2)^((D - 3) / 2)`.
//!
//! Integrals are taken in the polar angle, `x = cos(phi)`, where the measure
//! becomes `sin(phi)^(D - 2) dphi` and the `D = 2` endpoint singularity of `w`
//! disappears. Integer `D` uses a plain Gauss-Legendre rule in `phi`. For
//! fractional `D` the factor `sin(phi)^(D - 2)` has a branch point at the poles,
//! so the angular interval is split at its midpoint and each half is graded
//! towards its outer end with `u -> u^4`, which restores spectral convergence.

use std::f64::consts::PI;

use crate::dd::Dd;
use crate::special::{self, Dimension};

/// Smallest Gauss-Legendre rule ever used.
const MIN_POINTS: usize = 64;

/// Grading exponent for the fractional-dimension rule.
const GRADING: i32 = 4;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Roots of the Legendre polynomial by Newton iteration from Tricomi-type
/// initial guesses; exact for polynomials of degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// A quadrature rule `sum_i w_i f(x_i) ~ int_lo^hi f(x) w(x) dx`.
#[derive(Debug, Clone)]
pub struct AxisymRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisymRule {
    /// Rule for the full interval `[-1, 1]`.
    pub fn new(dim: Dimension, degree_hint: usize) -> Self {
        Self::on_interval(-1.0, 1.0, dim, degree_hint)
    }

    /// Rule for `[lo, hi]` with `-1 <= lo < hi <= 1`.
    pub fn on_interval(lo: f64, hi: f64, dim: Dimension, degree_hint: usize) -> Self {
        let n = point_count(dim, degree_hint);
        // Angular limits: x = hi maps to the smaller angle.
        let phi_a = hi.clamp(-1.0, 1.0).acos();
        let phi_b = lo.clamp(-1.0, 1.0).acos();
        let power = dim.d() - 2.0;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut push = |phi: f64, jac: f64| {
            nodes.push(phi.cos());
            weights.push(jac * phi.sin().abs().powf(power));
        };
        if dim.is_integral() {
            let (t, w) = gauss_legendre(n);
            let half = 0.5 * (phi_b - phi_a);
            let mid = 0.5 * (phi_b + phi_a);
            for (ti, wi) in t.iter().zip(&w) {
                push(mid + half * ti, half * wi);
            }
        } else {
            let (t, w) = gauss_legendre(n * GRADING as usize / 2);
            let mid = 0.5 * (phi_a + phi_b);
            let p = GRADING as f64;
            // Each half: phi = end + (mid - end) u^p, u in [0, 1].
            for &end in &[phi_a, phi_b] {
                let span = mid - end;
                for (ti, wi) in t.iter().zip(&w) {
                    let u = 0.5 * (ti + 1.0);
                    let phi = end + span * u.powi(GRADING);
                    let jac = 0.5 * wi * (span * p * u.powi(GRADING - 1)).abs();
                    push(phi, jac);
                }
            }
        }
        AxisymRule { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn point_count(dim: Dimension, degree_hint: usize) -> usize {
    MIN_POINTS.max(degree_hint + dim.d().ceil() as usize + 16)
}

/// `int_{-1}^{1} f(x) w(x) dx`; `degree_hint` is the polynomial degree of `f` if known.
pub fn integrate_axisym<F: Fn(f64) -> f64>(f: F, dim: Dimension, degree_hint: usize) -> f64 {
    AxisymRule::new(dim, degree_hint).integrate(f)
}

/// `int_lo^hi f(x) w(x) dx`.
pub fn integrate_axisym_interval<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    dim: Dimension,
    degree_hint: usize,
) -> f64 {
    AxisymRule::on_interval(lo, hi, dim, degree_hint).integrate(f)
}

/// Expansion coefficients `gamma_n = (1 / N_n^2) int f P_n w dx`, `n = 0 ..= N`.
pub fn transform_coeffs<F: Fn(f64) -> f64>(f: F, max_degree: usize, dim: Dimension) -> Vec<f64> {
    let rule = AxisymRule::new(dim, 2 * max_degree + 64);
    let norms = special::norm_squared_seq(max_degree, dim);
    let mut acc = vec![0.0; max_degree + 1];
    let mut p = vec![0.0; max_degree + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        special::fill_sequence(x, dim.d(), &mut p);
        let fx = w * f(x);
        for (a, pn) in acc.iter_mut().zip(&p) {
            *a += fx * pn;
        }
    }
    acc.iter().zip(&norms).map(|(a, n)| a / n).collect()
}

/// Gram matrix of `P_n / N_n^2` over the front half `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub order: usize,
    pub dim: Dimension,
    pub entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    /// Counterpart over `[-1, 0]`: `b_nm = (-1)^(n+m) g_nm`.
    pub fn back(&self) -> GramMatrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .map(|(m, &g)| if (n + m) % 2 == 0 { g } else { -g })
                    .collect()
            })
            .collect();
        GramMatrix {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    /// `a^T G a`.
    pub fn quadratic_form(&self, a: &[f64]) -> f64 {
        assert_eq!(
            a.len(),
            self.order + 1,
            "weight length must match the Gram order"
        );
        self.entries
            .iter()
            .zip(a)
            .map(|(row, &an)| an * row.iter().zip(a).map(|(g, am)| g * am).sum::<f64>())
            .sum()
    }
}

/// Front Gram matrix by quadrature; same-parity off-diagonal entries are exactly zero.
pub fn gram_front(order: usize, dim: Dimension) -> GramMatrix {
    let rule = AxisymRule::on_interval(0.0, 1.0, dim, 2 * order);
    let norms = special::norm_squared_seq(order, dim);
    let size = order + 1;
    let mut entries = vec![vec![0.0; size]; size];
    let mut p = vec![0.0; size];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        special::fill_sequence(x, dim.d(), &mut p);
        for n in 0..size {
            let wn = w * p[n] / norms[n];
            for m in n..size {
                if m == n || (n + m) % 2 == 1 {
                    entries[n][m] += wn * p[m] / norms[m];
                }
            }
        }
    }
    for n in 0..size {
        for m in 0..n {
            entries[n][m] = entries[m][n];
        }
    }
    GramMatrix {
        order,
        dim,
        entries,
    }
}

/// `N_0^2 = sqrt(pi) Gamma(alpha + 1/2) / Gamma(alpha + 1)` in double-double.
///
/// The Gamma ratio is shifted up by the exact product
/// `prod_k (alpha + k + 1) / (alpha + k + 1/2)` until `y = alpha + K + 1/4 >= 1000`,
/// where `Gamma(y + 1/4) / Gamma(y + 3/4) = y^(-1/2) (1 - 1/(64 y^2) + 21/(8192 y^4) - 671/(524288 y^6) + ...)`.
fn norm_squared_zero_dd(dim: Dimension) -> Dd {
    let alpha = dim.alpha();
    let shift = (1000.0 - alpha).max(0.0).ceil() as usize;
    let mut prod = Dd::ONE;
    for k in 0..shift {
        let k = k as f64;
        prod = prod * (Dd::from_f64(alpha) + (k + 1.0)) / (Dd::from_f64(alpha) + (k + 0.5));
    }
    let y = Dd::from_f64(alpha) + shift as f64 + 0.25;
    let inv2 = Dd::ONE / (y * y);
    let series = Dd::ONE
        + inv2 * (-1.0 / 64.0)
        + inv2 * inv2 * (21.0 / 8192.0)
        + inv2 * inv2 * inv2 * (-671.0 / 524288.0);
    let ratio = series / y.sqrt();
    Dd::PI.sqrt() * ratio * prod
}

/// Closed-form half-interval Gram data in double-double: the squared norms
/// `N_n^2` and the entries over `[0, 1]`.
///
/// Off-diagonal entries come from the Sturm-Liouville identity
/// `(l_n - l_m) int_0^1 P_n P_m w dx = P_n'(0) P_m(0) - P_m'(0) P_n(0)`, `l_n = n (n + D - 2)`;
/// the diagonal is `1 / (2 N_n^2)`.
struct ClosedGram {
    entries: Vec<Vec<Dd>>,
}

fn closed_gram(order: usize, dim: Dimension) -> ClosedGram {
    let size = order + 1;
    let alpha = Dd::from_f64(dim.alpha());
    let two_alpha = alpha * 2.0;
    // P_n(0): P_{n+1}(0) = -n P_{n-1}(0) / (n + 2 alpha); one extra degree for the slopes.
    let mut value = vec![Dd::ZERO; size + 1];
    value[0] = Dd::ONE;
    for n in 1..size {
        let nf = n as f64;
        value[n + 1] = -(value[n - 1] * nf) / (two_alpha + nf);
    }
    // P_n'(0) for odd n: n (n + 2 alpha) (P_{n-1}(0) - P_{n+1}(0)) / (2 (n + alpha)).
    let slope: Vec<Dd> = (0..size)
        .map(|n| {
            if n % 2 == 0 {
                return Dd::ZERO;
            }
            let nf = n as f64;
            (two_alpha + nf) * nf * (value[n - 1] - value[n + 1]) / ((alpha + nf) * 2.0)
        })
        .collect();
    // N_n^2 = N_0^2 prod (1 - beta_{k+1}) / beta_k with beta_k = (k - 1 + 2 alpha) / (2 (k - 1 + alpha)).
    let beta = |k: usize| {
        if k == 1 {
            Dd::ONE
        } else {
            let m = (k - 1) as f64;
            (two_alpha + m) / ((alpha + m) * 2.0)
        }
    };
    let mut norms = vec![norm_squared_zero_dd(dim); size];
    for n in 1..size {
        norms[n] = norms[n - 1] * (Dd::ONE - beta(n + 1)) / beta(n);
    }
    let lambda = |n: usize| Dd::from_f64(n as f64) * (two_alpha + n as f64);
    let mut entries = vec![vec![Dd::ZERO; size]; size];
    for n in 0..size {
        entries[n][n] = Dd::ONE / (norms[n] * 2.0);
        for m in 0..n {
            if (n + m) % 2 == 1 {
                let integral =
                    (slope[n] * value[m] - slope[m] * value[n]) / (lambda(n) - lambda(m));
                let g = integral / (norms[n] * norms[m]);
                entries[n][m] = g;
                entries[m][n] = g;
            }
        }
    }
    ClosedGram { entries }
}

/// Front Gram matrix from the closed form (see [`half_energies`]).
pub fn gram_front_closed(order: usize, dim: Dimension) -> GramMatrix {
    let entries = closed_gram(order, dim)
        .entries
        .iter()
        .map(|row| row.iter().map(|g| g.to_f64()).collect())
        .collect();
    GramMatrix {
        order,
        dim,
        entries,
    }
}

fn energies_dd(a: &[f64], dim: Dimension) -> (Dd, Dd) {
    let order = a.len() - 1;
    let g = closed_gram(order, dim);
    let mut diag = Dd::ZERO;
    let mut odd = Dd::ZERO;
    for n in 0..=order {
        let an = Dd::from_f64(a[n]);
        diag = diag + an * an * g.entries[n][n];
        for m in 0..n {
            if (n + m) % 2 == 1 {
                odd = odd + an * a[m] * g.entries[n][m] * 2.0;
            }
        }
    }
    (diag + odd, diag - odd)
}

/// Front and back energies `a^T G_f a` and `a^T G_b a`.
///
/// For highly directional patterns the back energy is many orders of magnitude
/// below the individual terms of the quadratic form, so the closed-form
/// entries and the form itself are evaluated in double-double arithmetic.
pub fn half_energies(a: &[f64], dim: Dimension) -> (f64, f64) {
    let (front, back) = energies_dd(a, dim);
    (front.to_f64(), back.to_f64())
}

/// `(a^T G_f a) / (a^T G_b a)`, see [`half_energies`].
pub fn front_back_ratio(a: &[f64], dim: Dimension) -> f64 {
    let (front, back) = energies_dd(a, dim);
    (front / back).to_f64()
}
