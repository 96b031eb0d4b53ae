//! The p(x)-Laplace Dirichlet problem and related operators.

mod capacity;
mod energy;
pub mod linalg;
mod strong;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub use capacity::{relative_capacity, CapacityReport, CompactSet};
pub use energy::{Method, SolveOptions, SolveReport};
pub use strong::{strong_operator, Jet};

use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::mesh::{Grid, NodeKind, ScalarField};
use crate::point::Point;

/// Solves div(|∇u|^{p−2}∇u) = 0 with u = g on boundary and truncation nodes
/// and u = 0 on exterior nodes. The initial guess is g at every node.
pub fn solve_dirichlet(
    grid: &Arc<Grid>,
    p: &ExponentField,
    g: impl Fn(Point) -> f64,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    let u0: Vec<f64> = grid
        .nodes
        .iter()
        .zip(&grid.node_kind)
        .map(|(&x, &k)| if k == NodeKind::Exterior { 0.0 } else { g(x) })
        .collect();
    if let Some(i) = u0.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("boundary data not finite at node {i}")));
    }
    solve_with_initial(grid, p, u0, opts)
}

/// Same as [`solve_dirichlet`] with explicit nodal start values; pinned nodes
/// keep their values.
pub fn solve_with_initial(
    grid: &Arc<Grid>,
    p: &ExponentField,
    u0: Vec<f64>,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    if u0.len() != grid.len() {
        return Err(Error::GridMismatch(format!("{} values for {} nodes", u0.len(), grid.len())));
    }
    let pinned: Vec<bool> = (0..grid.len()).map(|i| grid.is_pinned(i)).collect();
    let tol = opts.tol.unwrap_or_else(|| default_tol(&u0, &pinned));
    let (u, report) = energy::run(grid, p, false, u0, &pinned, tol, opts);
    Ok((ScalarField::new(grid.clone(), u)?, report))
}

/// 1e−8 times the oscillation of the pinned data (guarded against zero).
pub fn default_tol(u0: &[f64], pinned: &[bool]) -> f64 {
    let (mut lo, mut hi, mut amax) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for (v, _) in u0.iter().zip(pinned).filter(|(_, &p)| p) {
        lo = lo.min(*v);
        hi = hi.max(*v);
        amax = amax.max(v.abs());
    }
    let osc = if hi >= lo { hi - lo } else { 0.0 };
    1e-8 * osc.max(1e-6 * amax).max(1e-300)
}

/// Flux |g|^{p−2}g, taken as 0 at g = 0.
#[inline]
pub(crate) fn flux(g: [f64; 2], p: f64) -> [f64; 2] {
    let m2 = g[0] * g[0] + g[1] * g[1];
    if m2 == 0.0 {
        return [0.0, 0.0];
    }
    let w = m2.powf(0.5 * (p - 2.0));
    [w * g[0], w * g[1]]
}

/// ∫|∇u|^{p−2}∇u·∇φ_i for every nodal hat φ_i (one-point quadrature).
pub fn nodal_residuals(u: &ScalarField, p: &ExponentField) -> Vec<f64> {
    let grid = &*u.grid;
    let mut out = alloc::vec![0.0; grid.len()];
    for (t, tri) in grid.cells.iter().enumerate() {
        let geo = &grid.cell_geom[t];
        let fl = flux(u.cell_gradient(t), p.eval(geo.centroid));
        for (k, &v) in tri.iter().enumerate() {
            out[v] += geo.area * (fl[0] * geo.grads[k][0] + fl[1] * geo.grads[k][1]);
        }
    }
    out
}

/// ∫|∇u|^{p−2}∇u·∇φ with no restriction on φ.
pub fn weak_pairing(u: &ScalarField, p: &ExponentField, phi: &ScalarField) -> Result<f64> {
    if !u.same_grid(phi) {
        return Err(Error::GridMismatch("u and φ live on different grids".into()));
    }
    let grid = &*u.grid;
    let mut s = 0.0;
    for t in 0..grid.cells.len() {
        let geo = &grid.cell_geom[t];
        let fl = flux(u.cell_gradient(t), p.eval(geo.centroid));
        let gp = phi.cell_gradient(t);
        s += geo.area * (fl[0] * gp[0] + fl[1] * gp[1]);
    }
    Ok(s)
}

/// Weak residual ∫|∇u|^{p−2}∇u·∇φ for a test function vanishing on ∂Ω.
/// Against φ ≥ 0, a value ≤ 0 indicates a subsolution.
pub fn weak_residual(u: &ScalarField, p: &ExponentField, phi: &ScalarField) -> Result<f64> {
    let grid = &*phi.grid;
    for i in 0..grid.len() {
        if matches!(grid.node_kind[i], NodeKind::Boundary | NodeKind::Truncation) && phi.values[i] != 0.0 {
            return Err(Error::TestFunctionOnBoundary(i));
        }
    }
    weak_pairing(u, p, phi)
}

/// Nodal hat function of node `i`.
pub fn hat(grid: &Arc<Grid>, i: usize) -> ScalarField {
    let mut f = ScalarField::zeros(grid.clone());
    f.values[i] = 1.0;
    f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    /// min over interior nodes of u − v.
    pub min_diff: f64,
    pub argmin: Option<usize>,
    pub tol: f64,
    pub violated: bool,
}

/// Reports min(u − v) over interior nodes; violation below −tol.
pub fn check_comparison(u: &ScalarField, v: &ScalarField, tol: f64) -> Result<ComparisonReport> {
    if !u.same_grid(v) {
        return Err(Error::GridMismatch("comparison needs a common grid".into()));
    }
    let mut min_diff = f64::INFINITY;
    let mut argmin = None;
    for i in 0..u.grid.len() {
        if u.grid.node_kind[i] != NodeKind::Interior {
            continue;
        }
        let d = u.values[i] - v.values[i];
        if d < min_diff {
            min_diff = d;
            argmin = Some(i);
        }
    }
    Ok(ComparisonReport {
        min_diff,
        argmin,
        tol,
        violated: min_diff < -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, DomainKind};
    use crate::mesh::build_grid;

    fn square(h: f64) -> Arc<Grid> {
        let sq = make_domain(DomainKind::Square { side: 1.0 }).unwrap();
        Arc::new(build_grid(&sq, h).unwrap())
    }

    #[test]
    fn linear_data_reproduced() {
        let g = square(1.0 / 16.0);
        let p = ExponentField::constant(2.0).unwrap();
        let (u, rep) = solve_dirichlet(&g, &p, |x| x[0], &SolveOptions::default()).unwrap();
        assert!(rep.converged);
        assert!(u.max_abs_diff(|x| x[0]) < 1e-12);
        assert!(rep.residual_norm <= 1e-12);
    }

    #[test]
    fn hat_residual_of_linear_field_vanishes() {
        let g = square(1.0 / 8.0);
        let p = ExponentField::constant(2.0).unwrap();
        let u = ScalarField::from_fn(g.clone(), |x| x[0]);
        let i = g.node_kind.iter().position(|k| *k == NodeKind::Interior).unwrap();
        assert!(weak_residual(&u, &p, &hat(&g, i)).unwrap().abs() < 1e-14);
        let b = g.node_kind.iter().position(|k| *k == NodeKind::Boundary).unwrap();
        assert!(matches!(
            weak_residual(&u, &p, &hat(&g, b)),
            Err(Error::TestFunctionOnBoundary(_))
        ));
    }

    #[test]
    fn comparison_linear_shift() {
        let g = square(1.0 / 8.0);
        let p = ExponentField::constant(2.0).unwrap();
        let o = SolveOptions::default();
        let (u1, _) = solve_dirichlet(&g, &p, |x| x[0] + 0.1, &o).unwrap();
        let (u2, _) = solve_dirichlet(&g, &p, |x| x[0], &o).unwrap();
        let r = check_comparison(&u1, &u2, 1e-8).unwrap();
        assert!((r.min_diff - 0.1).abs() < 1e-10);
        assert!(!r.violated);
    }
}
