//! Small dense helpers shared by the fitting routines.

/// Solve the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` for a (numerically) singular matrix.
#[allow(clippy::needless_range_loop)]
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least-squares coefficients of `y ≈ Σ c_k x^k` for `k < degree + 1`.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    let m = degree + 1;
    if xs.len() < m {
        return None;
    }
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let pows: Vec<f64> = (0..m).map(|k| x.powi(k as i32)).collect();
        for r in 0..m {
            aty[r] += pows[r] * y;
            for c in 0..m {
                ata[r][c] += pows[r] * pows[c];
            }
        }
    }
    solve_dense(ata, aty)
}

/// Eigenvalues of the symmetric matrix `[[a, b], [b, c]]`, ascending.
pub fn sym2_eigen(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (mean - rad, mean + rad)
}
