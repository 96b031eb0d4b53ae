//! Sampling estimates of the uniform-domain constant M_Ω.
//!
//! A curve γ from x to y is M-uniform when
//! `len(γ) ≤ M|x − y|` and `min(|x − z|, |y − z|) ≤ M d(z, ∂Ω)` for z ∈ γ.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domain::Domain;
use super::quasihyperbolic::quasihyperbolic_geodesic;
use crate::error::Result;
use crate::point::{dist, lerp, Point};

/// The two uniformity ratios of a polyline: (length / chord, cigar ratio).
///
/// The cigar ratio is evaluated at the vertices and at `refine` equally
/// spaced points on every segment.
pub fn uniformity_ratios(domain: &Domain, path: &[Point], refine: usize) -> (f64, f64) {
    let (Some(&x), Some(&y)) = (path.first(), path.last()) else {
        return (1.0, 0.0);
    };
    let chord = dist(x, y);
    let length: f64 = path.windows(2).map(|s| dist(s[0], s[1])).sum();
    let length_ratio = if chord > 0.0 { length / chord } else { 1.0 };
    let mut cigar = 0.0f64;
    for seg in path.windows(2) {
        for k in 0..=refine {
            let z = lerp(seg[0], seg[1], k as f64 / (refine.max(1)) as f64);
            let d = domain.signed_dist(z);
            let m = dist(x, z).min(dist(y, z));
            if m == 0.0 {
                continue;
            }
            cigar = cigar.max(if d > 0.0 { m / d } else { f64::INFINITY });
        }
    }
    (length_ratio, cigar)
}

/// Two-segment curve through the midpoint of `x y` displaced by `lift` along
/// the unit vector `dir`.
pub fn tent_curve(x: Point, y: Point, dir: Point, lift: f64) -> [Point; 3] {
    let m = lerp(x, y, 0.5);
    [x, [m[0] + lift * dir[0], m[1] + lift * dir[1]], y]
}

/// Empirical M_Ω from `pairs` random point pairs joined by discrete
/// quasihyperbolic geodesics. Deterministic in `seed`.
pub fn estimate_uniform_constant(domain: &Domain, pairs: usize, seed: u64) -> Result<f64> {
    let bbox = domain.bbox;
    let diam = bbox.diameter();
    let min_depth = diam / 40.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Point {
        loop {
            let p = [
                rng.gen_range(bbox.lo[0]..bbox.hi[0]),
                rng.gen_range(bbox.lo[1]..bbox.hi[1]),
            ];
            if domain.signed_dist(p) >= min_depth {
                return p;
            }
        }
    };
    let mut m = 1.0f64;
    let mut pts: Vec<(Point, Point)> = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let x = sample(&mut rng);
        let y = sample(&mut rng);
        pts.push((x, y));
    }
    for (x, y) in pts {
        let dmin = domain.signed_dist(x).min(domain.signed_dist(y));
        let step = (dmin / 3.0).min(diam / 80.0);
        let g = quasihyperbolic_geodesic(domain, x, y, step)?;
        let (len, cigar) = uniformity_ratios(domain, &g.path, 4);
        m = m.max(len).max(cigar);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{make_domain, DomainKind, HALF_PLANE_UNIFORM_CONSTANT};
    use crate::point::{normalize, sub};

    #[test]
    fn tent_in_half_plane_within_bound() {
        let slab = make_domain(DomainKind::HalfPlaneSlab { height: 100.0 }).unwrap();
        let x = [-0.5, 0.0];
        let y = [0.5, 0.0];
        let tent = tent_curve(x, y, [0.0, 1.0], 0.5);
        let (len, cigar) = uniformity_ratios(&slab, &tent, 2000);
        let sqrt2 = core::f64::consts::SQRT_2;
        assert!((len - sqrt2).abs() < 1e-12);
        assert!((cigar - sqrt2).abs() < 1e-9);
        assert!(len.max(cigar) <= HALF_PLANE_UNIFORM_CONSTANT);
    }

    #[test]
    fn disk_tent_toward_center_within_bound() {
        let disk = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
        let mut worst = 0.0f64;
        for i in 0..40 {
            for j in 0..40 {
                let ti = i as f64 * core::f64::consts::TAU / 40.0;
                let tj = j as f64 * core::f64::consts::TAU / 40.0 + 0.013;
                let ri = 0.999 - 0.3 * ((i * 7) % 11) as f64 / 11.0;
                let rj = 0.999 - 0.3 * ((j * 5) % 13) as f64 / 13.0;
                let x = [ri * ti.cos(), ri * ti.sin()];
                let y = [rj * tj.cos(), rj * tj.sin()];
                let chord = dist(x, y);
                if chord < 1e-9 {
                    continue;
                }
                let m = lerp(x, y, 0.5);
                let path = match normalize(sub([0.0, 0.0], m)) {
                    Some(dir) if crate::point::norm(m) > chord / 2.0 => tent_curve(x, y, dir, chord / 2.0),
                    // Lift would overshoot the center: bend through it.
                    _ => [x, [0.0, 0.0], y],
                };
                let (len, cigar) = uniformity_ratios(&disk, &path, 200);
                worst = worst.max(len).max(cigar);
            }
        }
        assert!(worst <= HALF_PLANE_UNIFORM_CONSTANT + 1e-9, "worst = {worst}");
    }

    #[test]
    fn empirical_estimates_are_moderate() {
        for kind in [
            DomainKind::Square { side: 1.0 },
            DomainKind::Annulus { inner: 0.25, outer: 1.0 },
        ] {
            let d = make_domain(kind).unwrap();
            let m = d.regularity.m_uniform.value();
            assert!(d.regularity.m_uniform.is_empirical());
            assert!((1.0..20.0).contains(&m), "{}: {m}", kind.name());
        }
    }
}
