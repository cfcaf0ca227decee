//! Small dense linear algebra over f64: cyclic Jacobi eigendecomposition for
//! symmetric matrices, used to compute second singular values of inclusion
//! graphs. Deterministic sweep order, tolerance driven.
#![allow(clippy::needless_range_loop)]

/// Eigenvalues of a symmetric matrix, descending, by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[Vec<f64>], tol: f64) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < tol {
            break;
        }
        assert!(sweep < 199, "jacobi failed to converge");
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < tol / (n as f64 * n as f64) {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Singular values of an arbitrary matrix, descending: sqrt of the
/// eigenvalues of AᵀA (or AAᵀ, whichever is smaller).
pub fn singular_values(a: &[Vec<f64>], tol: f64) -> Vec<f64> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (n, gram): (usize, Vec<Vec<f64>>) = if cols <= rows {
        let mut g = vec![vec![0.0; cols]; cols];
        for (i, gi) in g.iter_mut().enumerate() {
            for j in 0..cols {
                gi[j] = (0..rows).map(|k| a[k][i] * a[k][j]).sum();
            }
        }
        (cols, g)
    } else {
        let mut g = vec![vec![0.0; rows]; rows];
        for (i, gi) in g.iter_mut().enumerate() {
            for j in 0..rows {
                gi[j] = (0..cols).map(|k| a[i][k] * a[j][k]).sum();
            }
        }
        (rows, g)
    };
    let _ = n;
    symmetric_eigenvalues(&gram, tol)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diag_and_rotation() {
        let a = vec![vec![3.0, 0.0], vec![0.0, 1.0]];
        let e = symmetric_eigenvalues(&a, 1e-12);
        assert!((e[0] - 3.0).abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
        // symmetric 2x2 with known spectrum {3, 1}
        let b = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let e = symmetric_eigenvalues(&b, 1e-12);
        assert!((e[0] - 3.0).abs() < 1e-10);
        assert!((e[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn singular_values_of_rank_one() {
        // outer product u v^T has a single nonzero singular value |u||v|
        let u = [1.0, 2.0, 2.0];
        let v = [3.0, 4.0];
        let a: Vec<Vec<f64>> = u.iter().map(|x| v.iter().map(|y| x * y).collect()).collect();
        let s = singular_values(&a, 1e-12);
        assert!((s[0] - 15.0).abs() < 1e-9);
        assert!(s[1].abs() < 1e-9);
    }
}
