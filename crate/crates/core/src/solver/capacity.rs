//! Relative p(·)-capacity of condensers (K, B(x, 2r)).

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::energy::{run, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::mesh::{build_grid_region, FillMode, Grid, NodeKind};
use crate::point::{dist, Aabb, Point};
use crate::geometry::Region;

/// Supported compact sets K ⊂ B(x, 2r).
#[derive(Debug, Clone, PartialEq)]
pub enum CompactSet {
    ClosedBall { center: Point, radius: f64 },
    /// (ℝ² ∖ Ω) ∩ B̄(center, radius) for the region Ω.
    ComplementInBall { region: Region, center: Point, radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    /// min ∫|∇u|^{p(x)} over u = 1 on K, u = 0 on ∂B(x, 2r).
    pub value: f64,
    /// Mesh nodes on ∂K carrying u = 1.
    pub k_nodes: usize,
    pub h: f64,
    pub solve: SolveReport,
}

/// Capacity of `k` relative to B(x, 2r) on a mesh of size `h`.
pub fn relative_capacity(
    k: &CompactSet,
    x: Point,
    r: f64,
    p: &ExponentField,
    h: f64,
    opts: &SolveOptions,
) -> Result<CapacityReport> {
    if !(r > 0.0 && h > 0.0) {
        return Err(Error::InvalidParameter(format!("need r > 0 and h > 0, got r = {r}, h = {h}")));
    }
    let outer = Region::Disk { center: x, radius: 2.0 * r };
    let region = match k {
        CompactSet::ClosedBall { center, radius } => {
            if dist(*center, x) + radius > 2.0 * r * (1.0 - 1e-12) {
                return Err(Error::Degenerate(format!(
                    "K = B̄({center:?}, {radius}) is not compactly inside B({x:?}, {})",
                    2.0 * r
                )));
            }
            if dist(*center, x) == 0.0 {
                Region::Annulus {
                    center: x,
                    inner: *radius,
                    outer: 2.0 * r,
                }
            } else {
                Region::Intersection(
                    Box::new(outer.clone()),
                    Box::new(Region::Complement(Box::new(Region::Disk {
                        center: *center,
                        radius: *radius,
                    }))),
                )
            }
        }
        CompactSet::ComplementInBall { region, center, radius } => Region::Intersection(
            Box::new(outer.clone()),
            Box::new(Region::Union(
                Box::new(region.clone()),
                Box::new(Region::Complement(Box::new(Region::Disk {
                    center: *center,
                    radius: *radius,
                }))),
            )),
        ),
    };
    let grid = Arc::new(build_grid_region(&region, Aabb::square(x, 2.0 * r), h, FillMode::DomainOnly)?);
    if grid.count(NodeKind::Interior) == 0 {
        return Err(Error::Degenerate("no free nodes between K and the outer sphere".into()));
    }
    let on_outer = |q: Point| (dist(q, x) - 2.0 * r).abs() <= 1e-9 * r;
    let mut u0 = Vec::with_capacity(grid.len());
    let mut k_nodes = 0;
    for (q, kind) in grid.nodes.iter().zip(&grid.node_kind) {
        u0.push(match kind {
            NodeKind::Interior => 0.5,
            _ if on_outer(*q) => 0.0,
            _ => {
                k_nodes += 1;
                1.0
            }
        });
    }
    if k_nodes < 4 {
        return Err(Error::Unresolved(format!("K resolved by {k_nodes} < 4 nodes")));
    }
    let pinned: Vec<bool> = (0..grid.len()).map(|i| grid.is_pinned(i)).collect();
    let tol = opts.tol.unwrap_or(1e-9);
    let (u, solve) = run(&grid, p, true, u0, &pinned, tol, opts);
    Ok(CapacityReport {
        value: dirichlet_p_integral(&grid, p, &u),
        k_nodes,
        h,
        solve,
    })
}

/// Σ |T|·|∇u_T|^{p_T}.
fn dirichlet_p_integral(grid: &Grid, p: &ExponentField, u: &[f64]) -> f64 {
    grid.cells
        .iter()
        .zip(&grid.cell_geom)
        .map(|(c, geo)| {
            let g = geo.gradient([u[c[0]], u[c[1]], u[c[2]]]);
            geo.area * g[0].hypot(g[1]).powf(p.eval(geo.centroid))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condenser_two_pi_over_log_two() {
        let p = ExponentField::constant(2.0).unwrap();
        let r = 0.5;
        let k = CompactSet::ClosedBall { center: [0.0, 0.0], radius: r };
        let c = relative_capacity(&k, [0.0, 0.0], r, &p, r / 32.0, &SolveOptions::default()).unwrap();
        let exact = core::f64::consts::TAU / core::f64::consts::LN_2;
        assert!((c.value - exact).abs() / exact < 0.05, "{}", c.value);
    }

    #[test]
    fn whole_ball_is_degenerate() {
        let p = ExponentField::constant(2.0).unwrap();
        let k = CompactSet::ClosedBall { center: [0.0, 0.0], radius: 1.0 };
        assert!(relative_capacity(&k, [0.0, 0.0], 0.5, &p, 0.05, &SolveOptions::default()).is_err());
    }
}
