//! Geometric check of a step size: is `x + τ(B - εI)x` inside the symmetrized
//! convex hull of the trajectory `e^{tB}x`? Test-scale only (d ≤ 3).

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, Matrix, DEFAULT_EIGEN_TOL};

/// `min cᵀx` subject to `Ax = b`, `x ≥ 0`, by a two-phase tableau simplex with
/// Bland's rule. Returns `None` when infeasible or unbounded.
pub fn lp_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    let rows = a.len();
    let cols = c.len();
    let width = cols + rows + 1;
    let mut t = vec![vec![0.0; width]; rows + 1];
    for i in 0..rows {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[i][j] = flip * a[i][j];
        }
        t[i][cols + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    let scale = 1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let eps = 1e-11 * scale;

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![0.0; width];
    for v in cost.iter_mut().skip(cols).take(rows) {
        *v = 1.0;
    }
    set_objective(&mut t, &basis, &cost);
    if !run(&mut t, &mut basis, cols + rows, eps) {
        return None;
    }
    if -t[rows][width - 1] > 1e-9 * scale {
        return None;
    }
    for i in 0..rows {
        if basis[i] >= cols {
            if let Some(j) = (0..cols).find(|&j| t[i][j].abs() > 1e-9) {
                pivot(&mut t, i, j);
                basis[i] = j;
            }
        }
    }

    // Phase 2 on the original columns; artificials stay out.
    let mut cost = vec![0.0; width];
    cost[..cols].copy_from_slice(c);
    for v in cost.iter_mut().skip(cols).take(rows) {
        *v = f64::INFINITY;
    }
    set_objective(&mut t, &basis, &cost);
    if !run(&mut t, &mut basis, cols, eps) {
        return None;
    }
    Some(-t[rows][width - 1])
}

fn set_objective(t: &mut [Vec<f64>], basis: &[usize], cost: &[f64]) {
    let rows = basis.len();
    let width = t[0].len();
    for j in 0..width {
        t[rows][j] = if j + 1 == width || cost[j].is_infinite() {
            0.0
        } else {
            cost[j]
        };
    }
    for (i, &bj) in basis.iter().enumerate() {
        let cb = if cost[bj].is_infinite() {
            0.0
        } else {
            cost[bj]
        };
        if cb != 0.0 {
            let (head, tail) = t.split_at_mut(rows);
            for (o, v) in tail[0].iter_mut().zip(&head[i]) {
                *o -= cb * v;
            }
        }
    }
}

fn pivot(t: &mut [Vec<f64>], r: usize, c: usize) {
    let p = t[r][c];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i != r {
            let f = ti[c];
            if f != 0.0 {
                for (v, rv) in ti.iter_mut().zip(&row) {
                    *v -= f * rv;
                }
            }
        }
    }
}

/// Simplex iterations over entering columns `0..limit`. False when unbounded.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], limit: usize, eps: f64) -> bool {
    let rows = basis.len();
    let last = t[0].len() - 1;
    for _ in 0..100_000 {
        let Some(enter) = (0..limit).find(|&j| t[rows][j] < -1e-12) else {
            return true;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][enter] > eps * 1e-3 {
                let ratio = t[i][last] / t[i][enter];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot(t, r, enter);
        basis[r] = enter;
    }
    true
}

/// Checks `x + τ(B - εI)x ∈ co{±e^{tB}x}` with the curve sampled at `samples` points.
pub fn hull_membership_check(
    b: &Matrix,
    x: &[f64],
    tau: f64,
    eps: f64,
    samples: usize,
) -> Result<bool> {
    let d = b.dim();
    if d > 3 {
        return Err(Error::Unsupported("hull check is limited to d <= 3".into()));
    }
    if x.len() != d {
        return Err(Error::Shape(
            "vector length differs from matrix size".into(),
        ));
    }
    let spec = eigenvalues(b, DEFAULT_EIGEN_TOL)?;
    let eig = spec.real_eigenvalues()?;
    if spec.spectral_abscissa >= 0.0 {
        return Err(Error::Domain("B must have a negative spectrum".into()));
    }
    let slowest = eig.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
    let t_end = 40.0 / slowest;
    let n = samples.max(2);

    let bx = b.apply(x);
    let y: Vec<f64> = (0..d).map(|i| x[i] + tau * (bx[i] - eps * x[i])).collect();

    let mut a = vec![Vec::with_capacity(2 * n); d];
    for k in 0..n {
        let t = t_end * (k as f64 / (n - 1) as f64).powi(2);
        let e = (b.inner() * t).exp();
        let v = Matrix::from_inner(e).apply(x);
        for i in 0..d {
            a[i].push(v[i]);
        }
    }
    for row in a.iter_mut() {
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        row.extend(neg);
    }
    let cost = vec![1.0; 2 * n];
    Ok(match lp_min(&a, &y, &cost) {
        Some(v) => v <= 1.0 + 1e-9,
        None => false,
    })
}
