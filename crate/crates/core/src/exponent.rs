//! Variable exponents p(·), the modular ∫|u|^{p(x)} and the Luxemburg norm.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mesh::ScalarField;
use crate::point::{dist, dot, Aabb, Point};

/// Box on which built-in exponents are checked unless another hull is given.
pub const REFERENCE_HULL: Aabb = Aabb {
    lo: [-2.0, -2.0],
    hi: [2.0, 2.0],
};

/// Built-in exponent families. All are defined on the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentKind {
    /// p(x) = p.
    Constant { p: f64 },
    /// p(x) = p0 + ⟨a, x⟩.
    Affine { p0: f64, a: Point },
    /// p(x) = base + amp · exp(−|x − center|² / width²).
    Bump {
        base: f64,
        amp: f64,
        center: Point,
        width: f64,
    },
}

/// A variable exponent together with its bounds and regularity constants on `hull`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentField {
    pub kind: ExponentKind,
    pub hull: Aabb,
    pub p_minus: f64,
    pub p_plus: f64,
    /// ‖∇p‖_∞ over the plane.
    pub lip_const: f64,
    /// Log-Hölder constant of 1/p on `hull` (upper bound derived from `lip_const`).
    pub clog: f64,
}

impl ExponentField {
    /// Builds a built-in exponent on the reference box [−2, 2]².
    pub fn new(kind: ExponentKind) -> Result<Self> {
        Self::with_hull(kind, REFERENCE_HULL)
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(ExponentKind::Constant { p })
    }

    pub fn affine(p0: f64, a: Point) -> Result<Self> {
        Self::new(ExponentKind::Affine { p0, a })
    }

    /// Builds a built-in exponent and computes p⁻, p⁺ on `hull`.
    ///
    /// Rejects parameters with p⁻ ≤ 1 (or non-finite values) on the hull.
    pub fn with_hull(kind: ExponentKind, hull: Aabb) -> Result<Self> {
        if !(hull.width() > 0.0 && hull.height() > 0.0) {
            return Err(Error::InvalidParameter(format!("degenerate hull {hull:?}")));
        }
        let (p_minus, p_plus, lip_const) = match kind {
            ExponentKind::Constant { p } => (p, p, 0.0),
            ExponentKind::Affine { p0, a } => {
                let vals = hull.corners().map(|c| p0 + dot(a, c));
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi, a[0].hypot(a[1]))
            }
            ExponentKind::Bump {
                base,
                amp,
                center,
                width,
            } => {
                if !(width > 0.0) {
                    return Err(Error::InvalidParameter(format!("bump width {width} must be positive")));
                }
                let near = (-(hull.distance(center) / width).powi(2)).exp();
                let far = (-(hull.max_distance(center) / width).powi(2)).exp();
                let (a, b) = (base + amp * near, base + amp * far);
                let lip = amp.abs() * 2.0.sqrt() / width * (-0.5f64).exp();
                (a.min(b), a.max(b), lip)
            }
        };
        if !(p_minus.is_finite() && p_plus.is_finite()) {
            return Err(Error::ExponentRange(format!("non-finite bounds [{p_minus}, {p_plus}]")));
        }
        if p_minus <= 1.0 {
            return Err(Error::ExponentRange(format!(
                "p⁻ = {p_minus} on {:?}..{:?}; need p⁻ > 1",
                hull.lo, hull.hi
            )));
        }
        let diam = hull.diameter();
        let clog = lip_const * diam * (core::f64::consts::E + 1.0 / diam).ln() / (p_minus * p_minus);
        Ok(ExponentField {
            kind,
            hull,
            p_minus,
            p_plus,
            lip_const,
            clog,
        })
    }

    /// Same exponent, bounds recomputed on another hull.
    pub fn rehull(&self, hull: Aabb) -> Result<Self> {
        Self::with_hull(self.kind, hull)
    }

    pub fn is_constant(&self) -> bool {
        self.lip_const == 0.0
    }

    #[inline]
    pub fn eval(&self, x: Point) -> f64 {
        match self.kind {
            ExponentKind::Constant { p } => p,
            ExponentKind::Affine { p0, a } => p0 + dot(a, x),
            ExponentKind::Bump {
                base,
                amp,
                center,
                width,
            } => {
                let d2 = (x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2);
                base + amp * (-d2 / (width * width)).exp()
            }
        }
    }

    #[inline]
    pub fn grad(&self, x: Point) -> Point {
        match self.kind {
            ExponentKind::Constant { .. } => [0.0, 0.0],
            ExponentKind::Affine { a, .. } => a,
            ExponentKind::Bump {
                amp, center, width, ..
            } => {
                let w2 = width * width;
                let d = [x[0] - center[0], x[1] - center[1]];
                let e = (-(d[0] * d[0] + d[1] * d[1]) / w2).exp();
                [-2.0 * amp * e * d[0] / w2, -2.0 * amp * e * d[1] / w2]
            }
        }
    }

    /// Exponent bounds over the closed ball B̄(center, radius), by sampling
    /// the boundary circle and the center (exact for affine and constant kinds,
    /// which attain extremes on the circle).
    pub fn bounds_on_ball(&self, center: Point, radius: f64) -> (f64, f64) {
        let mut lo = self.eval(center);
        let mut hi = lo;
        let n = 720;
        for k in 0..n {
            let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
            let v = self.eval([center[0] + radius * t.cos(), center[1] + radius * t.sin()]);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// ∑ wᵢ |uᵢ|^{pᵢ}: nodal quadrature of the modular.
pub fn modular_raw(values: &[f64], weights: &[f64], exps: &[f64]) -> f64 {
    values
        .iter()
        .zip(weights)
        .zip(exps)
        .filter(|((_, &w), _)| w > 0.0)
        .map(|((&u, &w), &p)| w * u.abs().powf(p))
        .sum()
}

/// Luxemburg norm for nodal data, by geometric bisection on μ ↦ ρ(u/μ).
pub fn luxemburg_raw(values: &[f64], weights: &[f64], exps: &[f64]) -> f64 {
    let rho = modular_raw(values, weights, exps);
    if rho == 0.0 {
        return 0.0;
    }
    let scaled = |mu: f64| {
        values
            .iter()
            .zip(weights)
            .zip(exps)
            .filter(|((_, &w), _)| w > 0.0)
            .map(|((&u, &w), &p)| w * (u.abs() / mu).powf(p))
            .sum::<f64>()
    };
    let mut lo = 1e-14;
    let mut hi = rho + 1.0;
    if scaled(lo) <= 1.0 {
        return lo;
    }
    while hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if scaled(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn exponent_values(u: &ScalarField, p: &ExponentField) -> Vec<f64> {
    u.grid.nodes.iter().map(|&x| p.eval(x)).collect()
}

/// Quadrature of ∫_Ω |u|^{p(x)} dx.
pub fn modular(u: &ScalarField, p: &ExponentField) -> f64 {
    modular_raw(&u.values, &u.grid.quad_weights, &exponent_values(u, p))
}

/// inf{μ > 0 : ρ(u/μ) ≤ 1}.
pub fn luxemburg_norm(u: &ScalarField, p: &ExponentField) -> f64 {
    luxemburg_raw(&u.values, &u.grid.quad_weights, &exponent_values(u, p))
}

/// Smallest L with |1/p(x) − 1/p(y)| ≤ L / log(e + 1/|x − y|) over the sample.
/// Coincident pairs are skipped.
pub fn check_log_holder(p: &ExponentField, pairs: &[(Point, Point)]) -> f64 {
    pairs
        .iter()
        .filter_map(|&(x, y)| {
            let d = dist(x, y);
            (d > 0.0).then(|| {
                (1.0 / p.eval(x) - 1.0 / p.eval(y)).abs() * (core::f64::consts::E + 1.0 / d).ln()
            })
        })
        .fold(0.0, f64::max)
}

/// Empirical constant c in (1/c) r^{−p(w)} ≤ r^{−p(x)} ≤ c r^{−p(w)} over `samples` ⊂ B(w, r).
pub fn holder_ball_constant(p: &ExponentField, w: Point, r: f64, samples: &[Point]) -> f64 {
    let pw = p.eval(w);
    samples
        .iter()
        .filter(|&&x| dist(x, w) <= r)
        .map(|&x| {
            let ratio = r.powf(-p.eval(x)) / r.powf(-pw);
            ratio.max(1.0 / ratio)
        })
        .fold(1.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_exponent_is_flat() {
        let p = ExponentField::constant(2.0).unwrap();
        assert_eq!(p.eval([0.3, -1.0]), 2.0);
        assert_eq!(p.grad([0.3, -1.0]), [0.0, 0.0]);
        assert_eq!(p.lip_const, 0.0);
        assert_eq!(p.clog, 0.0);
    }

    #[test]
    fn affine_bounds_at_corners() {
        let p = ExponentField::affine(3.0, [0.25, 0.0]).unwrap();
        assert_eq!(p.p_minus, 2.5);
        assert_eq!(p.p_plus, 3.5);
        assert_eq!(p.lip_const, 0.25);
    }

    #[test]
    fn affine_touching_one_is_rejected() {
        let err = ExponentField::affine(2.0, [0.5, 0.0]).unwrap_err();
        assert!(matches!(err, Error::ExponentRange(_)));
        // The same exponent is admissible on a smaller hull.
        let p = ExponentField::with_hull(
            ExponentKind::Affine { p0: 2.0, a: [0.5, 0.0] },
            Aabb::new([-1.0, -1.0], [1.0, 1.0]),
        )
        .unwrap();
        assert_eq!((p.p_minus, p.p_plus), (1.5, 2.5));
    }

    #[test]
    fn bump_gradient_matches_central_differences() {
        let p = ExponentField::new(ExponentKind::Bump {
            base: 2.0,
            amp: 0.5,
            center: [0.2, -0.1],
            width: 0.7,
        })
        .unwrap();
        for &x in &[[0.0, 0.0], [0.5, 0.3], [-1.0, 1.2]] {
            let g = p.grad(x);
            for (k, step) in [1e-2, 5e-3].iter().enumerate() {
                let fd = |i: usize| {
                    let mut a = x;
                    let mut b = x;
                    a[i] += step;
                    b[i] -= step;
                    (p.eval(a) - p.eval(b)) / (2.0 * step)
                };
                let err = (fd(0) - g[0]).abs().max((fd(1) - g[1]).abs());
                // O(h²): halving the step divides the error by about four.
                assert!(err < 2.0 * step * step * (1 + k) as f64, "err {err}");
            }
        }
    }

    #[test]
    fn bump_lipschitz_constant_is_sharp_upper_bound() {
        let p = ExponentField::new(ExponentKind::Bump {
            base: 2.0,
            amp: 0.5,
            center: [0.0, 0.0],
            width: 0.5,
        })
        .unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..400 {
            let x = [i as f64 * 0.005, 0.0];
            let g = p.grad(x);
            worst = worst.max(g[0].hypot(g[1]));
        }
        assert!(worst <= p.lip_const + 1e-12);
        assert!(worst >= 0.99 * p.lip_const);
    }

    #[test]
    fn log_holder_constant_zero_for_constant() {
        let p = ExponentField::constant(2.0).unwrap();
        let pairs = [([0.0, 0.0], [0.1, 0.0]), ([1.0, 1.0], [1.0, 1.0])];
        assert_eq!(check_log_holder(&p, &pairs), 0.0);
    }

    #[test]
    fn log_holder_constant_affine_is_direct_quotient() {
        let p = ExponentField::affine(2.0, [0.25, 0.0]).unwrap();
        let x = [0.0, 0.0];
        let y = [0.1, 0.0];
        let expected = (1.0 / 2.0 - 1.0 / 2.025f64).abs() * (core::f64::consts::E + 10.0).ln();
        let got = check_log_holder(&p, &[(x, y), (y, y)]);
        assert!((got - expected).abs() < 1e-15);
        assert!(got > 0.0 && got.is_finite());
        assert!(got <= p.clog);
    }

    #[test]
    fn holder_ball_constant_matches_exhaustive_max() {
        let p = ExponentField::affine(2.0, [0.25, 0.0]).unwrap();
        let w = [0.0, 0.0];
        let r = 0.1;
        let mut samples = Vec::new();
        for i in 0..=40 {
            for j in 0..=40 {
                samples.push([-r + i as f64 * r / 20.0, -r + j as f64 * r / 20.0]);
            }
        }
        let c = holder_ball_constant(&p, w, r, &samples);
        // Extreme |p(x) − p(w)| = 0.25·r on the ball.
        let expected = (0.25 * r * (1.0 / r).ln()).exp();
        assert!((c - expected).abs() < 1e-12, "{c} vs {expected}");
    }
}
