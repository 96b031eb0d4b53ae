//! Body-fitted P1 triangulations and nodal scalar fields.
//!
//! A uniform lattice over a box is cut into two triangles per cell. Lattice
//! nodes closer than 0.3·h to ∂Ω are moved onto their boundary projection;
//! triangles whose vertices straddle ∂Ω are clipped at edge roots of the
//! signed distance and fan-triangulated. With [`FillMode::WholeBox`] the
//! exterior part of the box is meshed too (used for zero extensions).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainKind, Region};
use crate::point::{cross, dist, lerp, Aabb, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    /// Free node strictly inside Ω.
    Interior,
    /// Node on ∂Ω (snapped or cut).
    Boundary,
    /// Node outside Ω (only with [`FillMode::WholeBox`]).
    Exterior,
    /// Node inside Ω on an artificial box edge; treated as Dirichlet.
    Truncation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillMode {
    DomainOnly,
    WholeBox,
}

/// Precomputed P1 geometry of one triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriGeom {
    pub area: f64,
    /// Gradients of the three barycentric basis functions.
    pub grads: [[f64; 2]; 3],
    pub centroid: Point,
}

impl TriGeom {
    fn new(a: Point, b: Point, c: Point) -> Self {
        let a2 = cross(a, b, c);
        let inv = 1.0 / a2;
        TriGeom {
            area: 0.5 * a2,
            grads: [
                [(b[1] - c[1]) * inv, (c[0] - b[0]) * inv],
                [(c[1] - a[1]) * inv, (a[0] - c[0]) * inv],
                [(a[1] - b[1]) * inv, (b[0] - a[0]) * inv],
            ],
            centroid: [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0],
        }
    }

    /// Gradient of the linear interpolant of nodal values `v`.
    #[inline]
    pub fn gradient(&self, v: [f64; 3]) -> [f64; 2] {
        [
            v[0] * self.grads[0][0] + v[1] * self.grads[1][0] + v[2] * self.grads[2][0],
            v[0] * self.grads[0][1] + v[1] * self.grads[1][1] + v[2] * self.grads[2][1],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nodes: Vec<Point>,
    pub node_kind: Vec<NodeKind>,
    /// Counter-clockwise triangles.
    pub cells: Vec<[usize; 3]>,
    pub cell_geom: Vec<TriGeom>,
    /// Whether the triangle lies in Ω (false for exterior fill).
    pub cell_in_domain: Vec<bool>,
    /// Nominal mesh size.
    pub h: f64,
    /// Lumped P1 mass over Ω-triangles: Σ area/3.
    pub quad_weights: Vec<f64>,
    pub bbox: Aabb,
    lattice: Lattice,
    cell_bins: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Lattice {
    lo: Point,
    hx: f64,
    hy: f64,
    nx: usize,
    ny: usize,
}

impl Lattice {
    fn pos(&self, i: usize, j: usize) -> Point {
        [self.lo[0] + i as f64 * self.hx, self.lo[1] + j as f64 * self.hy]
    }

    fn id(&self, i: usize, j: usize) -> usize {
        i + j * (self.nx + 1)
    }

    fn cell_of(&self, p: Point) -> (i64, i64) {
        (
            ((p[0] - self.lo[0]) / self.hx).floor() as i64,
            ((p[1] - self.lo[1]) / self.hy).floor() as i64,
        )
    }
}

/// Largest admissible mesh size for a built-in domain: r_b/4, or L/4 for the
/// square whose corners have no tangent balls.
pub fn max_mesh_size(domain: &Domain) -> f64 {
    match domain.kind {
        DomainKind::Square { side } => side / 4.0,
        _ => domain.regularity.r_ball / 4.0,
    }
}

/// Triangulates `domain` over its default box.
pub fn build_grid(domain: &Domain, h: f64) -> Result<Grid> {
    let limit = max_mesh_size(domain);
    if !(h > 0.0) || h > limit * (1.0 + 1e-12) || h >= 4.0 * limit {
        return Err(Error::MeshTooCoarse { h, limit });
    }
    build_grid_region(&domain.region, domain.bbox, h, FillMode::DomainOnly)
}

/// Triangulates `region ∩ bbox` (or the whole box with `WholeBox`).
pub fn build_grid_region(region: &Region, bbox: Aabb, h: f64, fill: FillMode) -> Result<Grid> {
    if !(h > 0.0) || !(bbox.width() > 0.0 && bbox.height() > 0.0) {
        return Err(Error::InvalidParameter(format!("invalid mesh size {h} or box {bbox:?}")));
    }
    let nx = (bbox.width() / h - 1e-9).ceil().max(1.0) as usize;
    let ny = (bbox.height() / h - 1e-9).ceil().max(1.0) as usize;
    let lat = Lattice {
        lo: bbox.lo,
        hx: bbox.width() / nx as f64,
        hy: bbox.height() / ny as f64,
        nx,
        ny,
    };
    let hmax = lat.hx.max(lat.hy);
    let snap = 0.3 * lat.hx.min(lat.hy);

    let n_lat = (nx + 1) * (ny + 1);
    let mut sd = vec![0.0; n_lat];
    let mut node_of = vec![usize::MAX; n_lat];
    let mut nodes = Vec::new();
    let mut node_kind = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let k = lat.id(i, j);
            let p = lat.pos(i, j);
            let s = region.sd(p);
            let on_box_edge = i == 0 || j == 0 || i == nx || j == ny;
            let (pos, kind, s) = if s.abs() < snap {
                (region.project(p), NodeKind::Boundary, 0.0)
            } else if s > 0.0 {
                (p, if on_box_edge { NodeKind::Truncation } else { NodeKind::Interior }, s)
            } else if fill == FillMode::WholeBox {
                (p, NodeKind::Exterior, s)
            } else {
                sd[k] = s;
                continue;
            };
            sd[k] = s;
            node_of[k] = nodes.len();
            nodes.push(pos);
            node_kind.push(kind);
        }
    }

    let mut cuts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut cells: Vec<[usize; 3]> = Vec::new();
    let mut cell_in_domain = Vec::new();
    let mut cell_lattice = Vec::new();
    let min_area = 1e-12 * hmax * hmax;

    for j in 0..ny {
        for i in 0..nx {
            let c = [lat.id(i, j), lat.id(i + 1, j), lat.id(i + 1, j + 1), lat.id(i, j + 1)];
            for tri in [[c[0], c[1], c[2]], [c[0], c[2], c[3]]] {
                let s = [sd[tri[0]], sd[tri[1]], sd[tri[2]]];
                let has_in = s.iter().any(|&v| v > 0.0);
                let has_out = s.iter().any(|&v| v < 0.0);
                let mut emit = |poly: &[usize], inside: bool, nodes: &Vec<Point>, cells: &mut Vec<[usize; 3]>| {
                    for t in 1..poly.len().saturating_sub(1) {
                        let (a, b, d) = (poly[0], poly[t], poly[t + 1]);
                        let area2 = cross(nodes[a], nodes[b], nodes[d]);
                        if area2.abs() <= 2.0 * min_area {
                            continue;
                        }
                        cells.push(if area2 > 0.0 { [a, b, d] } else { [a, d, b] });
                        cell_in_domain.push(inside);
                        cell_lattice.push(i + j * nx);
                    }
                };
                if has_in && has_out {
                    let mut inner: Vec<usize> = Vec::with_capacity(4);
                    let mut outer: Vec<usize> = Vec::with_capacity(4);
                    for e in 0..3 {
                        let (a, b) = (tri[e], tri[(e + 1) % 3]);
                        if s[e] >= 0.0 {
                            inner.push(node_of[a]);
                        }
                        if s[e] <= 0.0 && node_of[a] != usize::MAX {
                            outer.push(node_of[a]);
                        }
                        let sb = s[(e + 1) % 3];
                        if (s[e] > 0.0 && sb < 0.0) || (s[e] < 0.0 && sb > 0.0) {
                            let key = (a.min(b), a.max(b));
                            let id = *cuts.entry(key).or_insert_with(|| {
                                let p = edge_root(region, &lat, key);
                                nodes.push(p);
                                node_kind.push(NodeKind::Boundary);
                                nodes.len() - 1
                            });
                            inner.push(id);
                            outer.push(id);
                        }
                    }
                    emit(&inner, true, &nodes, &mut cells);
                    if fill == FillMode::WholeBox {
                        emit(&outer, false, &nodes, &mut cells);
                    }
                } else {
                    let ids = [node_of[tri[0]], node_of[tri[1]], node_of[tri[2]]];
                    let inside = if has_in {
                        true
                    } else if has_out {
                        false
                    } else {
                        // All three vertices on ∂Ω: decide by the centroid.
                        let g = [
                            (nodes[ids[0]][0] + nodes[ids[1]][0] + nodes[ids[2]][0]) / 3.0,
                            (nodes[ids[0]][1] + nodes[ids[1]][1] + nodes[ids[2]][1]) / 3.0,
                        ];
                        region.sd(g) > 0.0
                    };
                    if inside || fill == FillMode::WholeBox {
                        emit(&ids, inside, &nodes, &mut cells);
                    }
                }
            }
        }
    }
    Ok(finish(nodes, node_kind, cells, cell_in_domain, cell_lattice, hmax, bbox, lat))
}

/// Root of the signed distance on the lattice edge `key`, projected to ∂Ω.
fn edge_root(region: &Region, lat: &Lattice, key: (usize, usize)) -> Point {
    let w = lat.nx + 1;
    let a = lat.pos(key.0 % w, key.0 / w);
    let b = lat.pos(key.1 % w, key.1 / w);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let sa = region.sd(a);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (region.sd(lerp(a, b, mid)) > 0.0) == (sa > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    region.project(lerp(a, b, 0.5 * (lo + hi)))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    nodes: Vec<Point>,
    node_kind: Vec<NodeKind>,
    cells: Vec<[usize; 3]>,
    cell_in_domain: Vec<bool>,
    cell_lattice: Vec<usize>,
    h: f64,
    bbox: Aabb,
    lattice: Lattice,
) -> Grid {
    let cell_geom: Vec<TriGeom> = cells
        .iter()
        .map(|t| TriGeom::new(nodes[t[0]], nodes[t[1]], nodes[t[2]]))
        .collect();
    let mut quad_weights = vec![0.0; nodes.len()];
    for (t, g) in cells.iter().zip(&cell_geom).zip(&cell_in_domain).filter(|(_, &inside)| inside).map(|(x, _)| x) {
        for &v in t {
            quad_weights[v] += g.area / 3.0;
        }
    }
    let mut cell_bins = vec![Vec::new(); lattice.nx * lattice.ny];
    for (t, &c) in cell_lattice.iter().enumerate() {
        cell_bins[c].push(t as u32);
    }
    Grid {
        nodes,
        node_kind,
        cells,
        cell_geom,
        cell_in_domain,
        h,
        quad_weights,
        bbox,
        lattice,
        cell_bins,
    }
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Dirichlet-pinned nodes: everything except `Interior`.
    #[inline]
    pub fn is_pinned(&self, i: usize) -> bool {
        self.node_kind[i] != NodeKind::Interior
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.node_kind.iter().filter(|&&k| k == kind).count()
    }

    /// Area of the meshed part of Ω.
    pub fn domain_area(&self) -> f64 {
        self.quad_weights.iter().sum()
    }

    /// Triangle containing `p` with its barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let (ci, cj) = self.lattice.cell_of(p);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for dj in -1..=1 {
            for di in -1..=1 {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= self.lattice.nx as i64 || j >= self.lattice.ny as i64 {
                    continue;
                }
                for &t in &self.cell_bins[i as usize + j as usize * self.lattice.nx] {
                    let t = t as usize;
                    let [a, b, c] = self.cells[t];
                    let (a, b, c) = (self.nodes[a], self.nodes[b], self.nodes[c]);
                    let a2 = cross(a, b, c);
                    let l = [cross(p, b, c) / a2, cross(a, p, c) / a2, cross(a, b, p) / a2];
                    let worst = l[0].min(l[1]).min(l[2]);
                    if best.is_none_or(|(_, _, w)| worst > w) {
                        best = Some((t, l, worst));
                    }
                }
            }
        }
        match best {
            Some((t, l, w)) if w >= -1e-9 => Some((t, l)),
            _ => None,
        }
    }

    /// Nodes within the closed ball B̄(c, r).
    pub fn nodes_in_ball(&self, c: Point, r: f64) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, &p)| dist(p, c) <= r)
            .map(|(i, _)| i)
    }

    /// Triangles incident to each node.
    pub fn node_cells(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (t, tri) in self.cells.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }
}

/// Degree-4 symmetric rule on the reference triangle: (weight, barycentrics).
const QUAD4: [(f64, [f64; 3]); 6] = [
    (0.223_381_589_678_011, [0.108_103_018_168_070, 0.445_948_490_915_965, 0.445_948_490_915_965]),
    (0.223_381_589_678_011, [0.445_948_490_915_965, 0.108_103_018_168_070, 0.445_948_490_915_965]),
    (0.223_381_589_678_011, [0.445_948_490_915_965, 0.445_948_490_915_965, 0.108_103_018_168_070]),
    (0.109_951_743_655_322, [0.816_847_572_980_459, 0.091_576_213_509_771, 0.091_576_213_509_771]),
    (0.109_951_743_655_322, [0.091_576_213_509_771, 0.816_847_572_980_459, 0.091_576_213_509_771]),
    (0.109_951_743_655_322, [0.091_576_213_509_771, 0.091_576_213_509_771, 0.816_847_572_980_459]),
];

/// Nodal values on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(Point) -> f64) -> Self {
        let values = grid.nodes.iter().map(|&p| f(p)).collect();
        ScalarField { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        ScalarField {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn same_grid(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// P1 interpolation; `None` outside the mesh.
    pub fn eval_at(&self, p: Point) -> Option<f64> {
        let (t, l) = self.grid.locate(p)?;
        let c = self.grid.cells[t];
        Some(l[0] * self.values[c[0]] + l[1] * self.values[c[1]] + l[2] * self.values[c[2]])
    }

    /// Gradient on triangle `t`.
    pub fn cell_gradient(&self, t: usize) -> [f64; 2] {
        let c = self.grid.cells[t];
        self.grid.cell_geom[t].gradient([self.values[c[0]], self.values[c[1]], self.values[c[2]]])
    }

    /// (‖u_h − f‖_{L²(Ω_h)}, ‖f‖_{L²(Ω_h)}) with a degree-4 rule per triangle.
    pub fn l2_error(&self, f: impl Fn(Point) -> f64) -> (f64, f64) {
        let g = &*self.grid;
        let (mut err, mut nrm) = (0.0, 0.0);
        for (t, tri) in g.cells.iter().enumerate() {
            if !g.cell_in_domain[t] {
                continue;
            }
            let p = [g.nodes[tri[0]], g.nodes[tri[1]], g.nodes[tri[2]]];
            let v = [self.values[tri[0]], self.values[tri[1]], self.values[tri[2]]];
            for (w, l) in QUAD4 {
                let x = [
                    l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
                    l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
                ];
                let uh = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
                let fx = f(x);
                err += w * g.cell_geom[t].area * (uh - fx) * (uh - fx);
                nrm += w * g.cell_geom[t].area * fx * fx;
            }
        }
        (err.sqrt(), nrm.sqrt())
    }

    pub fn max_abs_diff(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.grid
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&p, &v)| (v - f(p)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, smoothed_l_shape};

    #[test]
    fn square_counts() {
        let sq = make_domain(DomainKind::Square { side: 1.0 }).unwrap();
        let g = build_grid(&sq, 0.25).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g.count(NodeKind::Interior), 9);
        assert_eq!(g.cells.len(), 32);
        assert!((g.domain_area() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_coarse_rejected() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        assert!(matches!(build_grid(&disk, 1.0), Err(Error::MeshTooCoarse { .. })));
    }

    #[test]
    fn disk_boundary_snapping() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let g = build_grid(&disk, 0.1).unwrap();
        for (p, k) in g.nodes.iter().zip(&g.node_kind) {
            if *k == NodeKind::Boundary {
                assert!((crate::point::norm(*p) - 1.0).abs() < 1e-10);
            } else {
                assert!(crate::point::norm(*p) < 1.0);
            }
        }
        assert!((g.domain_area() - core::f64::consts::PI).abs() / core::f64::consts::PI < 0.02);
        for geo in &g.cell_geom {
            assert!(geo.area > 0.0);
        }
    }

    #[test]
    fn area_of_l_shape_and_annulus() {
        let l = smoothed_l_shape(1.0).unwrap();
        let g = build_grid(&l, 0.01).unwrap();
        // Fillets at five convex and one reflex corner change the area by
        // (1 − π/4)ρ² each, removing at convex and adding at the reflex one.
        let rho: f64 = 0.1;
        let exact = 0.75 - 4.0 * (1.0 - core::f64::consts::FRAC_PI_4) * rho * rho;
        assert!((g.domain_area() - exact).abs() / exact < 0.02, "{}", g.domain_area());
        let ann = make_domain(DomainKind::Annulus { inner: 0.25, outer: 1.0 }).unwrap();
        let g = build_grid(&ann, 1.0 / 32.0).unwrap();
        let exact = core::f64::consts::PI * (1.0 - 0.0625);
        assert!((g.domain_area() - exact).abs() / exact < 0.02);
    }

    #[test]
    fn interpolation_reproduces_linears() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let g = Arc::new(build_grid(&disk, 0.05).unwrap());
        let f = ScalarField::from_fn(g, |p| 2.0 * p[0] - p[1] + 0.5);
        for q in [[0.1, 0.2], [-0.7, 0.3], [0.0, -0.95], [0.5, 0.5]] {
            let v = f.eval_at(q).unwrap();
            assert!((v - (2.0 * q[0] - q[1] + 0.5)).abs() < 1e-12);
        }
        assert!(f.eval_at([2.0, 0.0]).is_none());
        let (e, _) = f.l2_error(|p| 2.0 * p[0] - p[1] + 0.5);
        assert!(e < 1e-12);
    }

    #[test]
    fn whole_box_fill_covers_box() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let bbox = Aabb::new([-1.5, -1.5], [1.5, 1.5]);
        let g = build_grid_region(&disk.region, bbox, 0.1, FillMode::WholeBox).unwrap();
        let total: f64 = g.cell_geom.iter().map(|t| t.area).sum();
        assert!((total - 9.0).abs() < 1e-9);
        assert!(g.count(NodeKind::Exterior) > 0);
    }
}
