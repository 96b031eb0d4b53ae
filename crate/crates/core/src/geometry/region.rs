//! Signed-distance descriptions of planar regions (positive inside).

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::point::{add, cross, dist, dot, norm, normalize, scale, sub, Point};

/// One piece of a closed C¹ boundary curve, oriented counter-clockwise
/// (interior on the left).
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Segment { a: Point, b: Point },
    /// Arc of `radius` about `center` from angle `start` through signed `sweep`
    /// (positive sweep is counter-clockwise travel).
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Piece {
    /// Nearest point on the piece and the unit tangent there.
    fn nearest(&self, x: Point) -> (Point, Point) {
        match *self {
            Piece::Segment { a, b } => {
                let ab = sub(b, a);
                let len2 = dot(ab, ab);
                let t = (dot(sub(x, a), ab) / len2).clamp(0.0, 1.0);
                let tangent = scale(ab, 1.0 / len2.sqrt());
                (add(a, scale(ab, t)), tangent)
            }
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let rel = sub(x, center);
                let ang = rel[1].atan2(rel[0]);
                // Parameter along the sweep, in [0, |sweep|] when on the arc.
                let s = sweep.signum();
                let mut t = (ang - start) * s;
                t = num_traits::Euclid::rem_euclid(&t, &(2.0 * PI));
                let span = sweep.abs();
                let theta = if t <= span {
                    start + s * t
                } else {
                    // Off the arc: snap to the closer endpoint.
                    let end = start + sweep;
                    let pe = [center[0] + radius * end.cos(), center[1] + radius * end.sin()];
                    let ps = [center[0] + radius * start.cos(), center[1] + radius * start.sin()];
                    if dist(x, pe) < dist(x, ps) {
                        end
                    } else {
                        start
                    }
                };
                let u = [theta.cos(), theta.sin()];
                let p = add(center, scale(u, radius));
                let tangent = if s > 0.0 { [-u[1], u[0]] } else { [u[1], -u[0]] };
                (p, tangent)
            }
        }
    }
}

/// Closed curve made of segments and arcs, joined with matching tangents.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedPolygon {
    pub pieces: Vec<Piece>,
}

impl RoundedPolygon {
    /// Rounds every corner of a counter-clockwise polygon with fillets of
    /// radius `radius`. Convex corners get interior arcs, reflex corners get
    /// exterior arcs.
    pub fn from_polygon(vertices: &[Point], radius: f64) -> Self {
        let n = vertices.len();
        // Tangent points per vertex: (entry, exit, arc piece).
        let mut fillets = Vec::with_capacity(n);
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let v = vertices[i];
            let next = vertices[(i + 1) % n];
            let d_in = normalize(sub(v, prev)).expect("repeated vertex");
            let d_out = normalize(sub(next, v)).expect("repeated vertex");
            let turn = cross([0.0, 0.0], d_in, d_out).atan2(dot(d_in, d_out));
            let t = radius * (turn.abs() / 2.0).tan();
            let entry = sub(v, scale(d_in, t));
            let exit = add(v, scale(d_out, t));
            let left = [-d_in[1], d_in[0]];
            let center = if turn > 0.0 {
                add(entry, scale(left, radius))
            } else {
                sub(entry, scale(left, radius))
            };
            let rel = sub(entry, center);
            let start = rel[1].atan2(rel[0]);
            fillets.push((
                entry,
                exit,
                Piece::Arc {
                    center,
                    radius,
                    start,
                    sweep: turn,
                },
            ));
        }
        let mut pieces = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (_, exit, ref arc) = fillets[i];
            pieces.push(arc.clone());
            let (entry_next, _, _) = fillets[(i + 1) % n];
            if dist(exit, entry_next) > 0.0 {
                pieces.push(Piece::Segment {
                    a: exit,
                    b: entry_next,
                });
            }
        }
        RoundedPolygon { pieces }
    }

    fn nearest(&self, x: Point) -> (f64, Point, Point) {
        let mut best = (f64::INFINITY, x, [1.0, 0.0]);
        for piece in &self.pieces {
            let (p, t) = piece.nearest(x);
            let d = dist(x, p);
            if d < best.0 {
                best = (d, p, t);
            }
        }
        best
    }
}

/// A planar region described by its signed distance function.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Disk { center: Point, radius: f64 },
    Annulus { center: Point, inner: f64, outer: f64 },
    /// {0 < x₂ < height}.
    Slab { height: f64 },
    /// [lo, lo + side]².
    Square { lo: Point, side: f64 },
    Rounded(RoundedPolygon),
    Intersection(Box<Region>, Box<Region>),
    Union(Box<Region>, Box<Region>),
    Complement(Box<Region>),
}

impl Region {
    /// Signed distance to the boundary, positive inside. Exact for the
    /// primitives; for set operations it has the correct sign and zero set and
    /// is 1-Lipschitz.
    pub fn sd(&self, x: Point) -> f64 {
        match self {
            Region::Disk { center, radius } => radius - dist(x, *center),
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let r = dist(x, *center);
                (r - inner).min(outer - r)
            }
            Region::Slab { height } => x[1].min(height - x[1]),
            Region::Square { lo, side } => {
                let dx = [x[0] - lo[0], lo[0] + side - x[0]];
                let dy = [x[1] - lo[1], lo[1] + side - x[1]];
                let inside = dx[0].min(dx[1]).min(dy[0]).min(dy[1]);
                if inside >= 0.0 {
                    inside
                } else {
                    let ox = (-dx[0]).max(-dx[1]).max(0.0);
                    let oy = (-dy[0]).max(-dy[1]).max(0.0);
                    -ox.hypot(oy)
                }
            }
            Region::Rounded(poly) => {
                let (d, p, t) = poly.nearest(x);
                let inward = [-t[1], t[0]];
                if dot(sub(x, p), inward) >= 0.0 {
                    d
                } else {
                    -d
                }
            }
            Region::Intersection(a, b) => a.sd(x).min(b.sd(x)),
            Region::Union(a, b) => a.sd(x).max(b.sd(x)),
            Region::Complement(a) => -a.sd(x),
        }
    }

    /// Nearest boundary point.
    pub fn project(&self, x: Point) -> Point {
        match self {
            Region::Disk { center, radius } => {
                let u = normalize(sub(x, *center)).unwrap_or([1.0, 0.0]);
                add(*center, scale(u, *radius))
            }
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let u = normalize(sub(x, *center)).unwrap_or([1.0, 0.0]);
                let r = norm(sub(x, *center));
                let target = if (r - inner).abs() <= (outer - r).abs() {
                    *inner
                } else {
                    *outer
                };
                add(*center, scale(u, target))
            }
            Region::Slab { height } => {
                if (x[1]).abs() <= (height - x[1]).abs() {
                    [x[0], 0.0]
                } else {
                    [x[0], *height]
                }
            }
            Region::Square { lo, side } => {
                let hi = [lo[0] + side, lo[1] + side];
                if self.sd(x) >= 0.0 {
                    let cands = [
                        ([lo[0], x[1]], x[0] - lo[0]),
                        ([hi[0], x[1]], hi[0] - x[0]),
                        ([x[0], lo[1]], x[1] - lo[1]),
                        ([x[0], hi[1]], hi[1] - x[1]),
                    ];
                    cands
                        .iter()
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap()
                        .0
                } else {
                    [x[0].clamp(lo[0], hi[0]), x[1].clamp(lo[1], hi[1])]
                }
            }
            Region::Rounded(poly) => poly.nearest(x).1,
            _ => self.project_iterative(x),
        }
    }

    /// Gradient of the signed distance (unit length almost everywhere).
    pub fn grad(&self, x: Point) -> Point {
        match self {
            Region::Disk { center, .. } => {
                scale(normalize(sub(x, *center)).unwrap_or([1.0, 0.0]), -1.0)
            }
            Region::Slab { height } => {
                if x[1] <= height - x[1] {
                    [0.0, 1.0]
                } else {
                    [0.0, -1.0]
                }
            }
            _ => {
                let h = 1e-7 * (1.0 + norm(x));
                let gx = (self.sd([x[0] + h, x[1]]) - self.sd([x[0] - h, x[1]])) / (2.0 * h);
                let gy = (self.sd([x[0], x[1] + h]) - self.sd([x[0], x[1] - h])) / (2.0 * h);
                [gx, gy]
            }
        }
    }

    fn project_iterative(&self, x: Point) -> Point {
        // Step to the zero level set along the gradient; exact in one step
        // where a single primitive is active, refined otherwise.
        let mut p = x;
        for _ in 0..60 {
            let s = self.sd(p);
            if s.abs() < 1e-14 {
                break;
            }
            let active = self.active_primitive(p);
            let q = active.project(p);
            if dist(q, p) < 1e-15 {
                break;
            }
            p = q;
        }
        p
    }

    /// The primitive whose signed distance determines `sd(x)` for set operations.
    fn active_primitive(&self, x: Point) -> &Region {
        match self {
            Region::Intersection(a, b) => {
                if a.sd(x) <= b.sd(x) {
                    a.active_primitive(x)
                } else {
                    b.active_primitive(x)
                }
            }
            Region::Union(a, b) => {
                if a.sd(x) >= b.sd(x) {
                    a.active_primitive(x)
                } else {
                    b.active_primitive(x)
                }
            }
            Region::Complement(a) => a.active_primitive(x),
            other => other,
        }
    }

    pub fn contains(&self, x: Point) -> bool {
        self.sd(x) > 0.0
    }
}
