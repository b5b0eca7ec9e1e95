//! Small dense symmetric linear algebra: Cholesky factorization and the cyclic
//! Jacobi eigenvalue method. Matrices are row-major `Vec<Vec<f64>>`; sizes here
//! never exceed a few dozen.

pub type Matrix = Vec<Vec<f64>>;

/// Lower-triangular `L` with `A = L L^T`, or `None` if `A` is not positive definite.
pub fn cholesky(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if !(d > 0.0) {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn solve_lower(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    y
}

/// Solves `L^T x = y` for lower-triangular `L`.
pub fn solve_lower_transposed(l: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    x
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `k` (i.e. `vectors[i][k]` over `i`) belongs to `values[k]`.
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.iter().map(|row| row[k]).collect()
    }

    /// Index of the largest eigenvalue.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        best
    }
}

fn frobenius(a: &Matrix) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn off_diagonal(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi rotations until the off-diagonal norm drops below
/// `rel_tol * ||A||_F`. Returns `None` if `max_sweeps` is exhausted.
pub fn jacobi_eigen(a: &Matrix, rel_tol: f64, max_sweeps: usize) -> Option<SymmetricEigen> {
    let n = a.len();
    let mut a = a.clone();
    let mut v: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = frobenius(&a);
    let target = rel_tol * scale;
    for sweep in 0..=max_sweeps {
        if off_diagonal(&a) <= target {
            return Some(SymmetricEigen {
                values: (0..n).map(|i| a[i][i]).collect(),
                vectors: v,
                sweeps: sweep,
            });
        }
        if sweep == max_sweeps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(a: &Matrix, x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = vec![
            vec![4.0, 2.0, 0.4],
            vec![2.0, 5.0, 1.0],
            vec![0.4, 1.0, 3.0],
        ];
        let l = cholesky(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| l[i][k] * l[j][k]).sum();
                assert!((s - a[i][j]).abs() < 1e-14);
            }
        }
        let b = [1.0, -2.0, 0.5];
        let x = solve_lower_transposed(&l, &solve_lower(&l, &b));
        for (got, want) in mat_vec(&a, &x).iter().zip(&b) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(cholesky(&vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_none());
    }

    #[test]
    fn jacobi_known_spectrum() {
        // eigenvalues of [[2, 1], [1, 2]] are 1 and 3
        let e = jacobi_eigen(&vec![vec![2.0, 1.0], vec![1.0, 2.0]], 1e-15, 50).unwrap();
        let k = e.argmax();
        assert!((e.values[k] - 3.0).abs() < 1e-14);
        let v = e.vector(k);
        assert!((v[0] - v[1]).abs() < 1e-14);
    }

    #[test]
    fn jacobi_eigenpairs_satisfy_definition() {
        let a = vec![
            vec![1.0, 0.5, 0.2, 0.0],
            vec![0.5, -2.0, 0.3, 0.1],
            vec![0.2, 0.3, 3.0, -0.7],
            vec![0.0, 0.1, -0.7, 0.4],
        ];
        let e = jacobi_eigen(&a, 1e-14, 50).unwrap();
        for k in 0..4 {
            let v = e.vector(k);
            let av = mat_vec(&a, &v);
            for i in 0..4 {
                assert!((av[i] - e.values[k] * v[i]).abs() < 1e-12);
            }
        }
    }
}
