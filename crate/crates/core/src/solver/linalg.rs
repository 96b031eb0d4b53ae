//! Sparse symmetric matrices and Jacobi-preconditioned conjugate gradients.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Compressed sparse row matrix with a fixed pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Pattern from (row, col) pairs; duplicates are merged.
    pub fn from_pattern(n: usize, mut entries: Vec<(usize, usize)>) -> Self {
        entries.sort_unstable();
        entries.dedup();
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col: Vec<usize> = entries.iter().map(|e| e.1).collect();
        let nnz = col.len();
        Csr {
            n,
            row_ptr,
            col,
            val: vec![0.0; nnz],
        }
    }

    /// Position of entry (r, c) in `val`.
    pub fn index(&self, r: usize, c: usize) -> Option<usize> {
        let row = &self.col[self.row_ptr[r]..self.row_ptr[r + 1]];
        row.binary_search(&c).ok().map(|k| self.row_ptr[r] + k)
    }

    pub fn clear(&mut self) {
        self.val.iter_mut().for_each(|v| *v = 0.0);
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            *yr = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.index(r, r).map_or(0.0, |k| self.val[k]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` for symmetric positive definite `A`, starting from `x`.
/// Stops when ‖r‖₂ ≤ rel_tol·‖b‖₂ or ‖r‖₂ ≤ abs_tol.
pub fn pcg(a: &Csr, b: &[f64], x: &mut [f64], rel_tol: f64, abs_tol: f64, max_iter: usize) -> CgOutcome {
    let n = a.n;
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = vec![0.0; n];
    a.mul(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let target = (rel_tol * dot(b, b).sqrt()).max(abs_tol);
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut res = dot(&r, &r).sqrt();
    let mut it = 0;
    while res > target && it < max_iter {
        a.mul(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = dot(&r, &r).sqrt();
        it += 1;
    }
    CgOutcome {
        iterations: it,
        residual: res,
        converged: res <= target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_system() {
        let n = 50;
        let mut pat = Vec::new();
        for i in 0..n {
            pat.push((i, i));
            if i > 0 {
                pat.push((i, i - 1));
                pat.push((i - 1, i));
            }
        }
        let mut a = Csr::from_pattern(n, pat);
        for i in 0..n {
            let k = a.index(i, i).unwrap();
            a.val[k] = 2.0 + i as f64 * 0.01;
            if i > 0 {
                let k = a.index(i, i - 1).unwrap();
                a.val[k] = -1.0;
                let k = a.index(i - 1, i).unwrap();
                a.val[k] = -1.0;
            }
        }
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; n];
        a.mul(&xs, &mut b);
        let mut x = vec![0.0; n];
        let out = pcg(&a, &b, &mut x, 1e-14, 0.0, 1000);
        assert!(out.converged);
        for i in 0..n {
            assert!((x[i] - xs[i]).abs() < 1e-10);
        }
    }
}
