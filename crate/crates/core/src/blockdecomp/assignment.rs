use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy};
use crate::scalar::Real;

/// Above this size the exhaustive search gives way to the Hungarian method.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// A permutation `σ` (as `σ[col] = row`) maximizing `Σ log|s_{σ(i) i}|`.
///
/// Fails with [`Error::NoValidPermutation`] when the best diagonal still has a
/// factor at or below `rank_tol·‖s‖_F`.
pub fn nonzero_diagonal_permutation<T: Real>(s: &ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> Result<Vec<usize>> {
    s.ensure_square()?;
    let k = s.n();
    let logs: Vec<Vec<f64>> =
        (0..k).map(|r| (0..k).map(|c| log_abs(s[(r, c)].norm().as_f64())).collect()).collect();
    let sigma = if k <= EXHAUSTIVE_LIMIT { exhaustive(&logs) } else { hungarian(&logs) };
    let floor = pol.rank_tol * s.frobenius_norm();
    if (0..k).any(|c| s[(sigma[c], c)].norm() <= floor) {
        return Err(Error::NoValidPermutation);
    }
    Ok(sigma)
}

fn log_abs(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Sum of `w[σ[c]][c]`.
pub fn assignment_score(w: &[Vec<f64>], sigma: &[usize]) -> f64 {
    sigma.iter().enumerate().map(|(c, &r)| w[r][c]).sum()
}

/// Depth-first search over all permutations, returning the best-scoring one
/// (the lexicographically first among ties).
pub fn exhaustive(w: &[Vec<f64>]) -> Vec<usize> {
    fn go(w: &[Vec<f64>], col: usize, used: &mut [bool], cur: &mut Vec<usize>, acc: f64, best: &mut (f64, Vec<usize>)) {
        let k = w.len();
        if col == k {
            if acc > best.0 || best.1.is_empty() {
                *best = (acc, cur.clone());
            }
            return;
        }
        for r in 0..k {
            if !used[r] {
                used[r] = true;
                cur.push(r);
                go(w, col + 1, used, cur, acc + w[r][col], best);
                cur.pop();
                used[r] = false;
            }
        }
    }
    let k = w.len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    go(w, 0, &mut vec![false; k], &mut Vec::with_capacity(k), 0.0, &mut best);
    best.1
}

/// Maximum-weight perfect matching by the Hungarian method (O(k³)).
pub fn hungarian(w: &[Vec<f64>]) -> Vec<usize> {
    let k = w.len();
    // Minimise cost = -weight; -inf weights become a large finite cost.
    let big = 1e12;
    let cost = |r: usize, c: usize| if w[r][c].is_finite() { -w[r][c] } else { big };
    let inf = f64::INFINITY;
    let mut u = vec![0.0; k + 1];
    let mut v = vec![0.0; k + 1];
    // p[c] = row matched to column c (1-based, 0 = none).
    let mut p = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=k {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=k).map(|c| p[c] - 1).collect()
}
