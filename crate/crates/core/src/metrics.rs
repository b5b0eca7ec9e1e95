//! Pattern evaluation and the metric suite: loudness `P`, energy `E`,
//! directivity factor `Q`, velocity and energy vector lengths `rV`, `rE`, and
//! the front-to-back energy ratio `FBR`.
//!
//! Weights are real; all designs in this crate produce real `a_n`.

use serde::Serialize;

use crate::designs::WeightVector;
use crate::error::{Error, Result};
use crate::quadrature::{self, AxisymRule};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternMetrics {
    pub p: f64,
    pub e: f64,
    pub q: f64,
    /// `None` when `a_0 = 0`: the velocity vector is undefined.
    pub r_v: Option<f64>,
    pub r_e: f64,
    pub fbr: f64,
}

/// `g(x) = 1 / S_{D-2} * sum_n a_n / N_n^2 * P_n(x)`.
pub fn eval_pattern(w: &WeightVector, x: f64) -> Result<f64> {
    let p = special::eval_sequence(x, w.order(), w.dim)?;
    Ok(pattern_from_values(
        w,
        &p.values,
        &special::norm_squared_seq(w.order(), w.dim),
    ))
}

fn pattern_from_values(w: &WeightVector, p: &[f64], norms: &[f64]) -> f64 {
    let s: f64 = w
        .weights
        .iter()
        .zip(p)
        .zip(norms)
        .map(|((a, p), n)| a * p / n)
        .sum();
    s / special::sub_surface_area(w.dim)
}

fn require_nonzero(w: &WeightVector) -> Result<()> {
    if w.weights.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidArgument(
            "weight vector is identically zero".into(),
        ));
    }
    Ok(())
}

/// Metrics from closed-form sums over the weights; FBR from the closed-form
/// half-interval Gram matrices.
pub fn compute_metrics(w: &WeightVector) -> Result<PatternMetrics> {
    require_nonzero(w)?;
    let dim = w.dim;
    let order = w.order();
    let a = &w.weights;
    let norms = special::norm_squared_seq(order, dim);
    let sub = special::sub_surface_area(dim);

    let energy_sum: f64 = a.iter().zip(&norms).map(|(a, n)| a * a / n).sum();
    let e = energy_sum / sub;
    let g1 = w.g_at_one();
    let q = special::surface_area(dim) * g1 * g1 / e;

    let r_v = if a[0] == 0.0 {
        None
    } else {
        Some(a.get(1).copied().unwrap_or(0.0) / a[0])
    };
    let cross: f64 = (0..order)
        .map(|n| 2.0 * special::beta_coeff(n + 1, dim) * a[n] * a[n + 1] / norms[n])
        .sum();
    let r_e = cross / energy_sum;

    let fbr = quadrature::front_back_ratio(a, dim);

    Ok(PatternMetrics {
        p: a[0],
        e,
        q,
        r_v,
        r_e,
        fbr,
    })
}

/// The same metrics by direct integration of `g`, `g^2`, `g x` and `g^2 x`.
pub fn compute_metrics_numeric(w: &WeightVector) -> Result<PatternMetrics> {
    require_nonzero(w)?;
    let dim = w.dim;
    let order = w.order();
    let norms = special::norm_squared_seq(order, dim);
    let sub = special::sub_surface_area(dim);
    let hint = 2 * order + 1;

    let mut buf = vec![0.0; order + 1];
    let mut g = |x: f64| {
        special::fill_sequence(x, dim.d(), &mut buf);
        pattern_from_values(w, &buf, &norms)
    };
    let mut moments = |rule: &AxisymRule| {
        let mut m = [0.0; 4];
        for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let v = g(x);
            m[0] += wt * v;
            m[1] += wt * v * v;
            m[2] += wt * v * x;
            m[3] += wt * v * v * x;
        }
        m
    };
    let full = moments(&AxisymRule::new(dim, hint));
    let front = moments(&AxisymRule::on_interval(0.0, 1.0, dim, hint));
    let back = moments(&AxisymRule::on_interval(-1.0, 0.0, dim, hint));

    let p = sub * full[0];
    let e = sub * full[1];
    let g1 = eval_pattern(w, 1.0)?;
    let q = special::surface_area(dim) * g1 * g1 / e;
    let r_v = (p != 0.0).then(|| sub * full[2] / p);
    let r_e = sub * full[3] / e;
    let fbr = front[1] / back[1];
    Ok(PatternMetrics {
        p,
        e,
        q,
        r_v,
        r_e,
        fbr,
    })
}
