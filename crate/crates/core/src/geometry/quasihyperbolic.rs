//! Quasihyperbolic distance by Dijkstra on an 8-connected lattice.
//!
//! Edge weights bound ∫ ds / d(γ(s), ∂Ω) along the edge from above using the
//! 1-Lipschitz property of the distance: with midpoint distance d and edge
//! length ℓ the weight is 2·log(d / (d − ℓ/2)). Path values are therefore
//! never below the quasihyperbolic length of the polyline they trace, hence
//! never below k_Ω, and converge to it as the lattice is refined.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
#[allow(unused_imports)]
use num_traits::Float;

use super::domain::Domain;
use crate::error::{Error, Result};
use crate::point::{dist, lerp, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic {
    /// Approximate k_Ω(x, y).
    pub length: f64,
    /// Polyline from x to y through lattice nodes.
    pub path: Vec<Point>,
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on cost, ties broken by node index for determinism.
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Upper bound of the quasihyperbolic length of the segment `a b`;
/// `None` when the Lipschitz bound does not keep the segment inside.
pub fn edge_weight(domain: &Domain, a: Point, b: Point) -> Option<f64> {
    let len = dist(a, b);
    if len == 0.0 {
        return Some(0.0);
    }
    let d = domain.signed_dist(lerp(a, b, 0.5));
    let half = 0.5 * len;
    if d <= half * (1.0 + 1e-9) {
        return None;
    }
    Some(2.0 * (d / (d - half)).ln())
}

/// k_Ω(x, y) on a lattice of spacing `grid_step`.
pub fn quasihyperbolic_distance(domain: &Domain, x: Point, y: Point, grid_step: f64) -> Result<f64> {
    Ok(quasihyperbolic_geodesic(domain, x, y, grid_step)?.length)
}

/// Discrete quasihyperbolic geodesic from `x` to `y`.
///
/// The lattice is anchored at the lexicographically smaller endpoint, so the
/// result does not depend on argument order.
pub fn quasihyperbolic_geodesic(domain: &Domain, x: Point, y: Point, grid_step: f64) -> Result<Geodesic> {
    if !(grid_step > 0.0) {
        return Err(Error::InvalidParameter(format!("grid_step {grid_step} must be positive")));
    }
    for p in [x, y] {
        let d = domain.signed_dist(p);
        if d <= grid_step {
            return Err(Error::OutsideRegion(format!(
                "{p:?} is outside Ω or within one grid step of ∂Ω (d = {d}, step = {grid_step})"
            )));
        }
    }
    if x == y {
        return Ok(Geodesic {
            length: 0.0,
            path: vec![x],
        });
    }
    let swapped = (y[0], y[1]) < (x[0], x[1]);
    let (a, b) = if swapped { (y, x) } else { (x, y) };

    let margin = dist(a, b) + domain.signed_dist(a).max(domain.signed_dist(b));
    let lo = [a[0].min(b[0]) - margin, a[1].min(b[1]) - margin];
    let hi = [a[0].max(b[0]) + margin, a[1].max(b[1]) + margin];
    // Lattice indices relative to the anchor `a`.
    let i0 = ((lo[0] - a[0]) / grid_step).floor() as i64;
    let i1 = ((hi[0] - a[0]) / grid_step).ceil() as i64;
    let j0 = ((lo[1] - a[1]) / grid_step).floor() as i64;
    let j1 = ((hi[1] - a[1]) / grid_step).ceil() as i64;
    let nx = (i1 - i0 + 1) as usize;
    let ny = (j1 - j0 + 1) as usize;
    let pos = |i: usize, j: usize| -> Point {
        [
            a[0] + (i as i64 + i0) as f64 * grid_step,
            a[1] + (j as i64 + j0) as f64 * grid_step,
        ]
    };
    let n_lattice = nx * ny;
    let inside: Vec<bool> = (0..n_lattice)
        .map(|k| domain.signed_dist(pos(k % nx, k / nx)) > 0.5 * grid_step)
        .collect();
    let start = ((-i0) as usize) + ((-j0) as usize) * nx;
    let target = n_lattice; // extra node for b

    // Lattice corners of the cell containing b.
    let fi = ((b[0] - a[0]) / grid_step).floor() as i64 - i0;
    let fj = ((b[1] - a[1]) / grid_step).floor() as i64 - j0;
    let mut b_links: Vec<(usize, f64)> = Vec::new();
    for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let (ii, jj) = (fi + di, fj + dj);
        if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
            continue;
        }
        let k = ii as usize + jj as usize * nx;
        if !inside[k] {
            continue;
        }
        if let Some(w) = edge_weight(domain, pos(ii as usize, jj as usize), b) {
            b_links.push((k, w));
        }
    }
    if b_links.is_empty() {
        return Err(Error::Unresolved(format!("endpoint {b:?} not connected to the lattice")));
    }

    let mut cost = vec![f64::INFINITY; n_lattice + 1];
    let mut prev = vec![usize::MAX; n_lattice + 1];
    let mut heap = BinaryHeap::new();
    cost[start] = 0.0;
    heap.push(State { cost: 0.0, node: start });
    const STEPS: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    while let Some(State { cost: c, node }) = heap.pop() {
        if c > cost[node] {
            continue;
        }
        if node == target {
            break;
        }
        let (i, j) = ((node % nx) as i64, (node / nx) as i64);
        let here = pos(i as usize, j as usize);
        let mut relax = |next: usize, w: f64, heap: &mut BinaryHeap<State>| {
            let nc = c + w;
            if nc < cost[next] {
                cost[next] = nc;
                prev[next] = node;
                heap.push(State { cost: nc, node: next });
            }
        };
        for (di, dj) in STEPS {
            let (ii, jj) = (i + di, j + dj);
            if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                continue;
            }
            let k = ii as usize + jj as usize * nx;
            if !inside[k] {
                continue;
            }
            if let Some(w) = edge_weight(domain, here, pos(ii as usize, jj as usize)) {
                relax(k, w, &mut heap);
            }
        }
        if let Some(&(_, w)) = b_links.iter().find(|(k, _)| *k == node) {
            relax(target, w, &mut heap);
        }
    }
    if !cost[target].is_finite() {
        return Err(Error::Unresolved("endpoints not connected at this grid step".into()));
    }
    let mut path = Vec::new();
    let mut node = target;
    while node != usize::MAX {
        path.push(if node == target { b } else { pos(node % nx, node / nx) });
        node = prev[node];
    }
    // Built backwards from b; that is already y -> x when swapped.
    if !swapped {
        path.reverse();
    }
    Ok(Geodesic {
        length: cost[target],
        path,
    })
}
