//! Harnack chains along discrete quasihyperbolic geodesics.
//!
//! Starting at the endpoint nearer to ∂Ω, each ball has radius d(c, ∂Ω)/2
//! and the next center is the first point where the geodesic leaves the
//! current ball. A transition crosses at least ρ of arclength where d ≤ 3ρ,
//! so it costs at least 1/3 of quasihyperbolic length; hence N ≤ 3k + 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::domain::Domain;
use super::quasihyperbolic::quasihyperbolic_geodesic;
use crate::error::{Error, Result};
use crate::point::{dist, dot, sub, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainBall {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnackChain {
    pub balls: Vec<ChainBall>,
    pub count: usize,
    /// Computed quasihyperbolic distance between the endpoints.
    pub k: f64,
    /// Endpoint nearer to the boundary, and the other one.
    pub x: Point,
    pub y: Point,
    pub w: Point,
    pub r: f64,
    pub m_uniform: f64,
    /// Window constant used for the precondition; taken equal to M_Ω.
    pub m_prime: f64,
    /// 9M² + 3M·log(d(y)/d(x)).
    pub n_bound: f64,
}

impl HarnackChain {
    /// Consecutive balls intersect.
    pub fn consecutive_intersect(&self) -> bool {
        self.balls
            .windows(2)
            .all(|b| dist(b[0].center, b[1].center) < b[0].radius + b[1].radius)
    }

    /// Every doubled ball lies in Ω ∩ B(w, 4r).
    pub fn doubled_inside(&self, domain: &Domain) -> bool {
        self.balls.iter().all(|b| {
            2.0 * b.radius <= domain.signed_dist(b.center) * (1.0 + 1e-12)
                && dist(b.center, self.w) + 2.0 * b.radius <= 4.0 * self.r
        })
    }

    /// N ≤ 3k + 1 (the +1 accounts for the initial ball; x = y gives N = 1).
    pub fn count_within_k(&self) -> bool {
        (self.count as f64) <= 3.0 * self.k + 1.0 + 1e-9
    }

    /// N ≤ 9M² + 3M·log(d(y)/d(x)).
    pub fn within_n_est(&self) -> bool {
        (self.count as f64) <= self.n_bound
    }
}

/// Harnack chain joining `x` and `y` inside B(w, r/M′) ∩ Ω, lattice step
/// min(d(x), d(y))/10.
pub fn harnack_chain(domain: &Domain, w: Point, r: f64, x: Point, y: Point) -> Result<HarnackChain> {
    let step = domain.signed_dist(x).min(domain.signed_dist(y)) / 10.0;
    harnack_chain_with_step(domain, w, r, x, y, step)
}

pub fn harnack_chain_with_step(
    domain: &Domain,
    w: Point,
    r: f64,
    x: Point,
    y: Point,
    grid_step: f64,
) -> Result<HarnackChain> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("window radius {r} must be positive")));
    }
    if domain.signed_dist(w).abs() > 1e-9 {
        return Err(Error::OutsideRegion(format!("{w:?} is not on the boundary")));
    }
    let m = domain.regularity.m_uniform.value();
    let m_prime = m;
    for p in [x, y] {
        if !domain.contains(p) || dist(p, w) >= r / m_prime {
            return Err(Error::OutsideRegion(format!(
                "{p:?} not in B(w, r/M′) ∩ Ω with w = {w:?}, r = {r}, M′ = {m_prime}"
            )));
        }
    }
    let (x, y) = if domain.signed_dist(x) <= domain.signed_dist(y) {
        (x, y)
    } else {
        (y, x)
    };
    let (dx, dy) = (domain.signed_dist(x), domain.signed_dist(y));
    let n_bound = 9.0 * m * m + 3.0 * m * (dy / dx).ln();
    let geo = quasihyperbolic_geodesic(domain, x, y, grid_step)?;
    let balls = cover_path(domain, &geo.path);
    Ok(HarnackChain {
        count: balls.len(),
        balls,
        k: geo.length,
        x,
        y,
        w,
        r,
        m_uniform: m,
        m_prime,
        n_bound,
    })
}

fn cover_path(domain: &Domain, path: &[Point]) -> Vec<ChainBall> {
    let ball = |c: Point| ChainBall {
        center: c,
        radius: domain.signed_dist(c) / 2.0,
    };
    let mut balls = vec![ball(path[0])];
    let mut seg = 0usize;
    let mut pos = path[0];
    'outer: while seg + 1 < path.len() {
        let cur = *balls.last().unwrap();
        loop {
            let b = path[seg + 1];
            if dist(b, cur.center) >= cur.radius {
                // Exit through this segment: larger root of |pos + t e − c| = ρ.
                let e = sub(b, pos);
                let f = sub(pos, cur.center);
                let ee = dot(e, e);
                let fe = dot(f, e);
                let disc = (fe * fe - ee * (dot(f, f) - cur.radius * cur.radius)).max(0.0);
                let t = ((-fe + disc.sqrt()) / ee).clamp(0.0, 1.0);
                pos = [pos[0] + t * e[0], pos[1] + t * e[1]];
                balls.push(ball(pos));
                if t >= 1.0 {
                    seg += 1;
                }
                continue 'outer;
            }
            seg += 1;
            pos = b;
            if seg + 1 >= path.len() {
                break 'outer;
            }
        }
    }
    balls
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{make_domain, DomainKind};

    #[test]
    fn coincident_points_single_ball() {
        let slab = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        let c = harnack_chain(&slab, [0.0, 0.0], 1.0, [0.0, 0.2], [0.0, 0.2]).unwrap();
        assert_eq!(c.count, 1);
    }

    #[test]
    fn half_plane_vertical_example() {
        let slab = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        let c = harnack_chain(&slab, [0.0, 0.0], 1.0, [0.0, 0.05], [0.0, 0.4]).unwrap();
        assert!(c.consecutive_intersect());
        assert!(c.doubled_inside(&slab));
        assert!(c.count_within_k());
        assert!(c.within_n_est(), "N = {} bound = {}", c.count, c.n_bound);
        // Radii grow by 3/2 along the normal: 0.05·1.5^k reaches 0.4 after ~6 steps.
        assert!(c.count >= 5 && c.count <= 8, "N = {}", c.count);
    }

    #[test]
    fn swapped_arguments_same_chain() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let a = [0.9, 0.05];
        let b = [0.7, -0.1];
        let c1 = harnack_chain(&disk, [1.0, 0.0], 1.0, a, b).unwrap();
        let c2 = harnack_chain(&disk, [1.0, 0.0], 1.0, b, a).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn window_precondition() {
        let slab = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        assert!(harnack_chain(&slab, [0.0, 0.0], 1.0, [0.0, 0.05], [0.0, 0.9]).is_err());
        assert!(harnack_chain(&slab, [0.0, 0.1], 1.0, [0.0, 0.05], [0.0, 0.2]).is_err());
    }
}
