//! Discrete variable-exponent energy and its minimization.
//!
//! E(u) = Σ_T |T|·a_T·(|∇u_T|² + ε²)^{p_T/2} / p_T with p_T = p(centroid).
//! a_T ≡ 1 gives the Dirichlet energy, a_T = p_T the capacity functional.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::linalg::{pcg, Csr};
use crate::exponent::ExponentField;
use crate::mesh::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Lagged-coefficient weighted Laplacian steps.
    Picard,
    /// Newton steps on the regularized energy.
    DampedNewton,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Gradient regularization; default 1e−8·diam of the mesh box.
    pub eps: Option<f64>,
    /// Absolute tolerance on the max nodal residual; default 1e−8·osc(g).
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub method: Method,
    /// Relative tolerance of the inner conjugate-gradient solves.
    pub cg_rel_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps: None,
            tol: None,
            max_iter: 10_000,
            method: Method::Picard,
            cg_rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub energy: f64,
    /// max over free nodes of |∫ a(|∇u|²+ε²)^{(p−2)/2}∇u·∇φ_i|.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub tol: f64,
    pub eps: f64,
    /// Energy before the first and after every accepted step.
    pub energy_history: Vec<f64>,
    /// Steps taken along the scaled gradient after a stalled main direction.
    pub fallback_steps: usize,
    pub method: Method,
}

/// Per-triangle data of the functional.
pub(crate) struct Functional<'a> {
    pub grid: &'a Grid,
    pub p: Vec<f64>,
    pub coef: Vec<f64>,
    pub eps2: f64,
}

impl<'a> Functional<'a> {
    pub fn new(grid: &'a Grid, p: &ExponentField, capacity: bool, eps: f64) -> Self {
        let pc: Vec<f64> = grid.cell_geom.iter().map(|g| p.eval(g.centroid)).collect();
        let coef = if capacity { pc.clone() } else { vec![1.0; pc.len()] };
        Functional {
            grid,
            p: pc,
            coef,
            eps2: eps * eps,
        }
    }

    #[inline]
    fn cell_grad(&self, t: usize, u: &[f64]) -> [f64; 2] {
        let c = self.grid.cells[t];
        self.grid.cell_geom[t].gradient([u[c[0]], u[c[1]], u[c[2]]])
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        let mut e = 0.0;
        for t in 0..self.grid.cells.len() {
            let g = self.cell_grad(t, u);
            let s = g[0] * g[0] + g[1] * g[1] + self.eps2;
            let p = self.p[t];
            e += self.grid.cell_geom[t].area * self.coef[t] * s.powf(0.5 * p) / p;
        }
        e
    }

    /// Full nodal gradient of the energy.
    pub fn gradient(&self, u: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for t in 0..self.grid.cells.len() {
            let g = self.cell_grad(t, u);
            let s = g[0] * g[0] + g[1] * g[1] + self.eps2;
            let geo = &self.grid.cell_geom[t];
            let w = geo.area * self.coef[t] * s.powf(0.5 * (self.p[t] - 2.0));
            for (k, &v) in self.grid.cells[t].iter().enumerate() {
                out[v] += w * (g[0] * geo.grads[k][0] + g[1] * geo.grads[k][1]);
            }
        }
    }
}

/// Free-node numbering and the stiffness pattern restricted to free nodes.
struct System {
    free: Vec<usize>,
    slot: Vec<[usize; 9]>,
    mat: Csr,
}

impl System {
    fn new(grid: &Grid, pinned: &[bool]) -> Self {
        let mut free = vec![usize::MAX; grid.len()];
        let mut nf = 0;
        for i in 0..grid.len() {
            if !pinned[i] {
                free[i] = nf;
                nf += 1;
            }
        }
        let mut pat = Vec::new();
        for c in &grid.cells {
            for &a in c {
                for &b in c {
                    if free[a] != usize::MAX && free[b] != usize::MAX {
                        pat.push((free[a], free[b]));
                    }
                }
            }
        }
        let mat = Csr::from_pattern(nf, pat);
        let slot = grid
            .cells
            .iter()
            .map(|c| {
                let mut s = [usize::MAX; 9];
                for (i, &a) in c.iter().enumerate() {
                    for (j, &b) in c.iter().enumerate() {
                        if free[a] != usize::MAX && free[b] != usize::MAX {
                            s[3 * i + j] = mat.index(free[a], free[b]).unwrap();
                        }
                    }
                }
                s
            })
            .collect();
        System { free, slot, mat }
    }

    fn assemble(&mut self, f: &Functional, u: &[f64], newton: bool) {
        self.mat.clear();
        for t in 0..f.grid.cells.len() {
            let g = f.cell_grad(t, u);
            let s = g[0] * g[0] + g[1] * g[1] + f.eps2;
            let geo = &f.grid.cell_geom[t];
            let p = f.p[t];
            let w = geo.area * f.coef[t] * s.powf(0.5 * (p - 2.0));
            let m = if newton {
                let c = (p - 2.0) / s;
                [
                    [w * (1.0 + c * g[0] * g[0]), w * c * g[0] * g[1]],
                    [w * c * g[0] * g[1], w * (1.0 + c * g[1] * g[1])],
                ]
            } else {
                [[w, 0.0], [0.0, w]]
            };
            for i in 0..3 {
                let gi = geo.grads[i];
                let mg = [m[0][0] * gi[0] + m[0][1] * gi[1], m[1][0] * gi[0] + m[1][1] * gi[1]];
                for j in 0..3 {
                    let k = self.slot[t][3 * i + j];
                    if k != usize::MAX {
                        let gj = geo.grads[j];
                        self.mat.val[k] += mg[0] * gj[0] + mg[1] * gj[1];
                    }
                }
            }
        }
    }
}

/// Minimizes `f` over nodal vectors agreeing with `u` at pinned nodes.
pub(crate) fn minimize(
    f: &Functional,
    pinned: &[bool],
    mut u: Vec<f64>,
    tol: f64,
    eps: f64,
    opts: &SolveOptions,
) -> (Vec<f64>, SolveReport) {
    let n = u.len();
    let mut sys = System::new(f.grid, pinned);
    let nf = sys.mat.n;
    let mut grad = vec![0.0; n];
    let mut gf = vec![0.0; nf];
    let mut d = vec![0.0; nf];
    let mut trial = u.clone();
    let mut energy = f.energy(&u);
    let mut history = vec![energy];
    let mut fallback_steps = 0;
    let mut iterations = 0;

    let residual = |grad: &[f64]| -> f64 {
        (0..n)
            .filter(|&i| !pinned[i])
            .map(|i| grad[i].abs())
            .fold(0.0, f64::max)
    };
    f.gradient(&u, &mut grad);
    let mut res = residual(&grad);

    // φ'(t) = ∇E(u + t d)·d on free nodes.
    let dphi = |t: f64, d: &[f64], u: &[f64], trial: &mut Vec<f64>, grad: &mut Vec<f64>, free: &[usize]| -> f64 {
        trial.copy_from_slice(u);
        for i in 0..n {
            if free[i] != usize::MAX {
                trial[i] += t * d[free[i]];
            }
        }
        f.gradient(trial, grad);
        (0..n)
            .filter(|&i| free[i] != usize::MAX)
            .map(|i| grad[i] * d[free[i]])
            .sum()
    };

    let mut use_fallback = false;
    while res > tol && iterations < opts.max_iter && nf > 0 {
        iterations += 1;
        for i in 0..n {
            if sys.free[i] != usize::MAX {
                gf[sys.free[i]] = -grad[i];
            }
        }
        sys.assemble(f, &u, opts.method == Method::DampedNewton);
        if use_fallback {
            let diag = sys.mat.diagonal();
            for k in 0..nf {
                d[k] = if diag[k] > 0.0 { gf[k] / diag[k] } else { gf[k] };
            }
            fallback_steps += 1;
        } else {
            d.iter_mut().for_each(|v| *v = 0.0);
            pcg(&sys.mat, &gf, &mut d, opts.cg_rel_tol, 0.01 * tol, 20_000);
        }
        let d0 = -gf.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        if !(d0 < 0.0) {
            if use_fallback {
                break;
            }
            use_fallback = true;
            iterations -= 1;
            continue;
        }
        let t = line_search(d0, |t| dphi(t, &d, &u, &mut trial, &mut grad, &sys.free));
        // Accept only steps that do not increase the energy beyond roundoff.
        let mut step = t;
        let mut accepted = false;
        for _ in 0..40 {
            trial.copy_from_slice(&u);
            for i in 0..n {
                if sys.free[i] != usize::MAX {
                    trial[i] += step * d[sys.free[i]];
                }
            }
            let e = f.energy(&trial);
            if e <= energy + 1e-13 * energy.abs() {
                energy = energy.min(e);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            if use_fallback {
                break;
            }
            use_fallback = true;
            iterations -= 1;
            continue;
        }
        core::mem::swap(&mut u, &mut trial);
        history.push(energy);
        f.gradient(&u, &mut grad);
        let new_res = residual(&grad);
        // A scaled-gradient step is only a rescue; return to the main method.
        use_fallback = false;
        res = new_res;
    }
    f.gradient(&u, &mut grad);
    res = residual(&grad);
    let report = SolveReport {
        energy: f.energy(&u),
        residual_norm: res,
        iterations,
        converged: res <= tol,
        tol,
        eps,
        energy_history: history,
        fallback_steps,
        method: opts.method,
    };
    (u, report)
}

/// Root of the convex line function's derivative: Illinois on a bracket.
fn line_search(d0: f64, mut dphi: impl FnMut(f64) -> f64) -> f64 {
    let target = 1e-3 * d0.abs();
    let (mut a, mut fa) = (0.0, d0);
    let (mut b, mut fb) = (1.0, dphi(1.0));
    if fb.abs() <= target {
        return 1.0;
    }
    if fb < 0.0 {
        // Still descending at t = 1: expand.
        let mut k = 0;
        while fb < 0.0 && k < 12 {
            a = b;
            fa = fb;
            b *= 2.0;
            fb = dphi(b);
            k += 1;
        }
        if fb < 0.0 {
            return b;
        }
    }
    let mut side = 0i8;
    let mut t = b;
    for _ in 0..60 {
        t = (a * fb - b * fa) / (fb - fa);
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let ft = dphi(t);
        if ft.abs() <= target {
            return t;
        }
        if ft > 0.0 {
            b = t;
            fb = ft;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = t;
            fa = ft;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        if (b - a) <= 1e-12 * b {
            break;
        }
    }
    t
}

/// Shares the grid and exposes the minimizer for Dirichlet-type problems.
pub(crate) fn run(
    grid: &Arc<Grid>,
    p: &ExponentField,
    capacity: bool,
    u0: Vec<f64>,
    pinned: &[bool],
    tol: f64,
    opts: &SolveOptions,
) -> (Vec<f64>, SolveReport) {
    let eps = opts.eps.unwrap_or(1e-8 * grid.bbox.diameter());
    let f = Functional::new(grid, p, capacity, eps);
    minimize(&f, pinned, u0, tol, eps, opts)
}
