mod common;

use axisym::special::{self, power_series_coeffs};
use common::{dim, read_table, rel_err};

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `T_n(x) = n/2 sum_k (-1)^k (n-k-1)! / (k! (n-2k)!) (2x)^{n-2k}`.
fn chebyshev_closed(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    if n == 0 {
        c[0] = 1.0;
        return c;
    }
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let m = (n - k) as f64;
        c[n - 2 * k] = sign * n as f64 / m
            * binomial((n - k) as u64, k as u64)
            * 2f64.powi((n - 2 * k) as i32 - 1);
    }
    c
}

/// Rodrigues-derived `P_n(x) = 2^-n sum_k (-1)^k (2n-2k)! / (k! (n-k)! (n-2k)!) x^{n-2k}`.
fn legendre_closed(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[n - 2 * k] = sign * factorial((2 * n - 2 * k) as u64)
            / (2f64.powi(n as i32)
                * factorial(k as u64)
                * factorial((n - k) as u64)
                * factorial((n - 2 * k) as u64));
    }
    c
}

fn check_table(name: &str, d: f64, closed: fn(usize) -> Vec<f64>) {
    let table = read_table(name);
    assert_eq!(table.len(), 10);
    for (n, row) in table.iter().enumerate() {
        let oracle = closed(n);
        let got = power_series_coeffs(n, dim(d));
        assert_eq!(got.coeffs.len(), n + 1);
        for (k, &want) in row.iter().enumerate() {
            let o = oracle.get(k).copied().unwrap_or(0.0);
            assert!(
                rel_err(o, want) < 1e-14,
                "{name} fixture n={n} k={k}: {o} vs {want}"
            );
            let g = got.coeffs.get(k).copied().unwrap_or(0.0);
            assert!(
                rel_err(g, want) < 1e-12,
                "{name} n={n} k={k}: {g} vs {want}"
            );
        }
    }
}

#[test]
fn chebyshev_table() {
    check_table("chebyshev.csv", 2.0, chebyshev_closed);
}

#[test]
fn legendre_table() {
    check_table("legendre.csv", 3.0, legendre_closed);
}

#[test]
fn coefficients_agree_with_recurrence() {
    for d in [2.0, 2.5, 3.0, 4.0, 7.3] {
        for n in 0..=12 {
            let c = power_series_coeffs(n, dim(d));
            for i in 0..=20 {
                let x = -1.0 + 0.1 * i as f64;
                let p = special::eval(x, n, dim(d)).unwrap();
                assert!((c.eval(x) - p).abs() < 1e-11, "D={d} n={n} x={x}");
            }
        }
    }
}
