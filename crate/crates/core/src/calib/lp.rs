//! Small dense solvers for the interval equations: Lawson-Hanson
//! non-negative least squares and a two-phase simplex with Bland's rule.

use nalgebra::{DMatrix, DVector};

const EPS: f64 = 1e-12;

fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-13)
        .expect("svd computed with both factors")
}

/// `argmin ||A x - b||` over `x >= 0`, with the residual norm.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * (1.0 + a.amax() * b.amax()) * n.max(1) as f64;
    for _ in 0..3 * n + 3 {
        let w = a.tr_mul(&(b - a * &x));
        let next = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]).then(j.cmp(&i)));
        let Some(j) = next else { break };
        passive[j] = true;
        for _ in 0..3 * n + 3 {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            if idx.is_empty() {
                break;
            }
            let sub = a.select_columns(&idx);
            let s_p = lstsq(&sub, b);
            if s_p.iter().all(|&v| v > EPS) {
                x.fill(0.0);
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = s_p[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &i) in idx.iter().enumerate() {
                if s_p[k] <= EPS {
                    let denom = x[i] - s_p[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += alpha * (s_p[k] - x[i]);
                if x[i] <= EPS {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    let r = (a * &x - b).norm();
    (x, r)
}

/// Minimizes `c . x` subject to `A x = b`, `x >= 0`. `None` when infeasible
/// or unbounded.
pub fn simplex_min(c: &[f64], a: &DMatrix<f64>, b: &[f64]) -> Option<DVector<f64>> {
    let (m, n) = a.shape();
    // Tableau columns: n originals, m artificials, rhs.
    let width = n + m + 1;
    let mut t = DMatrix::<f64>::zeros(m, width);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = sign * a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, width - 1)] = sign * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    run_simplex(&mut t, &mut basis, &phase1, n + m)?;
    let infeas: f64 = basis
        .iter()
        .enumerate()
        .filter(|&(_, &bj)| bj >= n)
        .map(|(i, _)| t[(i, width - 1)])
        .sum();
    let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if infeas > 1e-9 * scale {
        return None;
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[(i, j)].abs() > 1e-9) {
                pivot(&mut t, i, j);
                basis[i] = j;
            }
        }
    }
    let mut cost: Vec<f64> = c.to_vec();
    cost.extend(std::iter::repeat_n(0.0, m));
    // Artificials may not re-enter in phase two.
    run_simplex(&mut t, &mut basis, &cost, n)?;
    let mut x = DVector::zeros(n);
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[(i, width - 1)].max(0.0);
        }
    }
    Some(x)
}

fn pivot(t: &mut DMatrix<f64>, row: usize, col: usize) {
    let p = t[(row, col)];
    let r = t.row(row) / p;
    t.set_row(row, &r);
    for i in 0..t.nrows() {
        if i != row {
            let f = t[(i, col)];
            if f != 0.0 {
                let updated = t.row(i) - r.clone() * f;
                t.set_row(i, &updated);
            }
        }
    }
}

/// Bland's rule; columns at or beyond `allowed` never enter.
fn run_simplex(
    t: &mut DMatrix<f64>,
    basis: &mut [usize],
    cost: &[f64],
    allowed: usize,
) -> Option<()> {
    let (m, width) = t.shape();
    let rhs = width - 1;
    for _ in 0..10_000 {
        let reduced = |j: usize, t: &DMatrix<f64>| -> f64 {
            cost[j] - (0..m).map(|i| cost[basis[i]] * t[(i, j)]).sum::<f64>()
        };
        let Some(enter) = (0..allowed).find(|&j| !basis.contains(&j) && reduced(j, t) < -1e-10)
        else {
            return Some(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[(i, enter)];
            if a > 1e-12 {
                let ratio = t[(i, rhs)] / a;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (row, _) = leave?;
        pivot(t, row, enter);
        basis[row] = enter;
    }
    None
}
