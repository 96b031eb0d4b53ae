//! Built-in planar domains with their regularity constants.

use alloc::boxed::Box;
use alloc::format;

use super::region::{Region, RoundedPolygon};
use crate::error::{Error, Result};
use crate::point::{add, dist, normalize, scale, Aabb, Point};

/// The built-in domain families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Disk of radius `radius` centered at the origin.
    Disk { radius: f64 },
    /// Annulus `inner < |x| < outer` centered at the origin.
    Annulus { inner: f64, outer: f64 },
    /// Slab `0 < x₂ < height`; a half-plane model near `x₂ = 0`.
    HalfPlaneSlab { height: f64 },
    /// Square `[0, side]²`.
    Square { side: f64 },
    /// `[0, side]²` minus the upper right quarter, all corners rounded with
    /// radius `corner`.
    SmoothedLShape { side: f64, corner: f64 },
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Disk { .. } => "disk",
            DomainKind::Annulus { .. } => "annulus",
            DomainKind::HalfPlaneSlab { .. } => "half-plane-slab",
            DomainKind::Square { .. } => "square",
            DomainKind::SmoothedLShape { .. } => "smoothed-L-shape",
        }
    }
}

/// How the uniform constant of a domain was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UniformConstant {
    Analytic(f64),
    Empirical(f64),
}

impl UniformConstant {
    pub fn value(&self) -> f64 {
        match *self {
            UniformConstant::Analytic(v) | UniformConstant::Empirical(v) => v,
        }
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self, UniformConstant::Empirical(_))
    }
}

/// Interior/exterior ball radii and NTA constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRegularity {
    pub r_interior: f64,
    /// `f64::INFINITY` for convex domains.
    pub r_exterior: f64,
    pub r_ball: f64,
    pub m_uniform: UniformConstant,
    pub r_nta: f64,
}

/// Uniform constant of the half-plane and of disks, realized by the
/// two-segment "tent" curve through the midpoint of x y moved inward by
/// |x − y|/2 (clamped at the center for disks). Each leg has length at most
/// |x − y| and, d being concave, d ≥ s·|x − y|/2 at parameter s along a leg,
/// so both uniformity ratios are at most 2.
pub const HALF_PLANE_UNIFORM_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub kind: DomainKind,
    pub region: Region,
    pub regularity: DomainRegularity,
    /// Default computational box.
    pub bbox: Aabb,
}

/// Builds one of the built-in domains.
pub fn make_domain(kind: DomainKind) -> Result<Domain> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
        }
    };
    let (region, regularity, bbox) = match kind {
        DomainKind::Disk { radius } => {
            positive("R", radius)?;
            (
                Region::Disk {
                    center: [0.0, 0.0],
                    radius,
                },
                DomainRegularity {
                    r_interior: radius,
                    r_exterior: f64::INFINITY,
                    r_ball: radius,
                    m_uniform: UniformConstant::Analytic(HALF_PLANE_UNIFORM_CONSTANT),
                    r_nta: radius,
                },
                Aabb::square([0.0, 0.0], radius),
            )
        }
        DomainKind::Annulus { inner, outer } => {
            positive("R1", inner)?;
            positive("R2", outer)?;
            if inner >= outer {
                return Err(Error::InvalidParameter(format!("annulus needs R1 < R2, got {inner} >= {outer}")));
            }
            let r_i = (outer - inner) / 2.0;
            (
                Region::Annulus {
                    center: [0.0, 0.0],
                    inner,
                    outer,
                },
                DomainRegularity {
                    r_interior: r_i,
                    r_exterior: inner,
                    r_ball: r_i.min(inner),
                    m_uniform: UniformConstant::Empirical(f64::NAN),
                    r_nta: r_i.min(inner),
                },
                Aabb::square([0.0, 0.0], outer),
            )
        }
        DomainKind::HalfPlaneSlab { height } => {
            positive("height", height)?;
            (
                Region::Slab { height },
                DomainRegularity {
                    r_interior: height / 2.0,
                    r_exterior: f64::INFINITY,
                    r_ball: height / 2.0,
                    m_uniform: UniformConstant::Analytic(HALF_PLANE_UNIFORM_CONSTANT),
                    r_nta: height / 2.0,
                },
                Aabb::new([-height, 0.0], [height, height]),
            )
        }
        DomainKind::Square { side } => {
            positive("L", side)?;
            (
                Region::Square {
                    lo: [0.0, 0.0],
                    side,
                },
                DomainRegularity {
                    // Corners admit no interior tangent ball.
                    r_interior: 0.0,
                    r_exterior: f64::INFINITY,
                    r_ball: 0.0,
                    m_uniform: UniformConstant::Empirical(f64::NAN),
                    r_nta: side / 2.0,
                },
                Aabb::new([0.0, 0.0], [side, side]),
            )
        }
        DomainKind::SmoothedLShape { side, corner } => {
            positive("L", side)?;
            positive("corner radius", corner)?;
            if corner > side / 4.0 {
                return Err(Error::InvalidParameter(format!(
                    "corner radius {corner} exceeds L/4 = {}",
                    side / 4.0
                )));
            }
            let h = side / 2.0;
            let verts = [
                [0.0, 0.0],
                [side, 0.0],
                [side, h],
                [h, h],
                [h, side],
                [0.0, side],
            ];
            (
                Region::Rounded(RoundedPolygon::from_polygon(&verts, corner)),
                DomainRegularity {
                    r_interior: corner,
                    r_exterior: corner,
                    r_ball: corner,
                    m_uniform: UniformConstant::Empirical(f64::NAN),
                    r_nta: corner,
                },
                Aabb::new([0.0, 0.0], [side, side]),
            )
        }
    };
    let mut domain = Domain {
        kind,
        region,
        regularity,
        bbox,
    };
    if domain.regularity.m_uniform.is_empirical() {
        let m = super::uniform::estimate_uniform_constant(&domain, 24, 0x5eed)?;
        domain.regularity.m_uniform = UniformConstant::Empirical(m);
    }
    Ok(domain)
}

/// Smoothed L-shape with the default corner radius 0.1·L.
pub fn smoothed_l_shape(side: f64) -> Result<Domain> {
    make_domain(DomainKind::SmoothedLShape {
        side,
        corner: 0.1 * side,
    })
}

impl Domain {
    #[inline]
    pub fn signed_dist(&self, x: Point) -> f64 {
        self.region.sd(x)
    }

    /// Distance to the boundary, d(x, ∂Ω).
    #[inline]
    pub fn dist_to_boundary(&self, x: Point) -> f64 {
        self.region.sd(x).abs()
    }

    #[inline]
    pub fn boundary_proj(&self, x: Point) -> Point {
        self.region.project(x)
    }

    pub fn contains(&self, x: Point) -> bool {
        self.region.sd(x) > 0.0
    }

    /// Inward unit normal at a boundary point.
    pub fn inward_normal(&self, w: Point) -> Point {
        let g = match self.kind {
            DomainKind::Disk { .. } | DomainKind::Annulus { .. } => {
                // Analytic: the radial direction, oriented by which circle w sits on.
                let u = normalize(w).unwrap_or([1.0, 0.0]);
                match self.kind {
                    DomainKind::Annulus { inner, outer } => {
                        let r = crate::point::norm(w);
                        if (r - inner).abs() < (outer - r).abs() {
                            u
                        } else {
                            scale(u, -1.0)
                        }
                    }
                    _ => scale(u, -1.0),
                }
            }
            _ => self.region.grad(w),
        };
        normalize(g).unwrap_or([0.0, 1.0])
    }

    /// The point A_r(w) = w + r·n(w) with d(A_r(w), ∂Ω) = |A_r(w) − w| = r.
    pub fn corkscrew(&self, w: Point, r: f64) -> Result<Point> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("corkscrew radius {r} must be positive")));
        }
        let limit = self.regularity.r_interior / 2.0;
        if r > limit {
            return Err(Error::NoCorkscrew { r, limit });
        }
        if self.signed_dist(w).abs() > 1e-9 {
            return Err(Error::OutsideRegion(format!(
                "corkscrew base {w:?} is not on the boundary (sd = {})",
                self.signed_dist(w)
            )));
        }
        let a = add(w, scale(self.inward_normal(w), r));
        let d = self.signed_dist(a);
        if (d - r).abs() > 1e-9 || (dist(a, w) - r).abs() > 1e-9 {
            return Err(Error::NoCorkscrew { r, limit });
        }
        Ok(a)
    }

    /// Domain `self ∩ other` for composite meshing (e.g. capacity condensers).
    pub fn region_intersection(&self, other: Region) -> Region {
        Region::Intersection(Box::new(self.region.clone()), Box::new(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_examples() {
        let d = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        assert_eq!(d.signed_dist([0.0, 0.0]), 1.0);
        assert_eq!(d.boundary_proj([0.5, 0.0]), [1.0, 0.0]);
        assert_eq!(d.regularity.r_interior, 1.0);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let w = [0.6, 0.8];
            let x = add(w, scale(d.inward_normal(w), t));
            assert!((d.signed_dist(x) - t).abs() < 1e-14);
        }
    }

    #[test]
    fn slab_signed_distance() {
        let d = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        assert!((d.signed_dist([0.3, 0.7]) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_radius_rejected() {
        assert!(make_domain(DomainKind::Disk { radius: 0.0 }).is_err());
        assert!(make_domain(DomainKind::Annulus { inner: 1.0, outer: 0.5 }).is_err());
    }

    #[test]
    fn corkscrew_examples() {
        let slab = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        let a = slab.corkscrew([0.0, 0.0], 0.1).unwrap();
        assert!((a[0]).abs() < 1e-15 && (a[1] - 0.1).abs() < 1e-15);
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let a = disk.corkscrew([1.0, 0.0], 0.2).unwrap();
        assert!((a[0] - 0.8).abs() < 1e-15 && a[1].abs() < 1e-15);
        assert!(matches!(
            disk.corkscrew([1.0, 0.0], 0.9),
            Err(Error::NoCorkscrew { .. })
        ));
    }

    #[test]
    fn corkscrew_satisfies_nta_inequality() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let m = disk.regularity.m_uniform.value();
        for k in 0..16 {
            let t = k as f64 * 0.39;
            let w = [t.cos(), t.sin()];
            for &r in &[0.01, 0.1, 0.3, 0.5] {
                let a = disk.corkscrew(w, r).unwrap();
                let d = dist(a, w);
                assert!(r / m < d && d <= r + 1e-12);
                assert!(disk.signed_dist(a) > r / m);
            }
        }
    }

    #[test]
    fn l_shape_regularity() {
        let d = smoothed_l_shape(1.0).unwrap();
        assert_eq!(d.regularity.r_ball, 0.1);
        let m = d.regularity.m_uniform;
        assert!(m.is_empirical() && m.value() >= 1.0 && m.value().is_finite());
    }
}
