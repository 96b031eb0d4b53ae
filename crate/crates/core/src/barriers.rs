//! Radial barriers on annuli B(y, 2r) ∖ B̄(y, r) and their admissibility
//! thresholds.
//!
//! Wolanski type (Gaussian profile), with A = M/(e^{−μ} − e^{−4μ}):
//!   û = A(e^{−μ} − e^{−μ|x−y|²/r²}),  ǔ = A(e^{−μ|x−y|²/r²} − e^{−4μ}).
//! Bauman type (power profile), with A = M/(1 − 2^{−μ}):
//!   û = A[1 − (r/|x−y|)^μ],  ǔ = −2^{−μ}A[1 − (2r/|x−y|)^μ].
//! In both cases ǔ = M − û, so the sub families are exact sign mirrors.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::point::{dist, Point};
use crate::solver::{strong_operator, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    WolanskiSuper,
    WolanskiSub,
    BaumanSuper,
    BaumanSub,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::WolanskiSuper => "wolanski-super",
            Family::WolanskiSub => "wolanski-sub",
            Family::BaumanSuper => "bauman-super",
            Family::BaumanSub => "bauman-sub",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Family::WolanskiSuper,
            Family::WolanskiSub,
            Family::BaumanSuper,
            Family::BaumanSub,
        ]
        .into_iter()
        .find(|f| f.name() == s)
    }

    pub fn is_super(self) -> bool {
        matches!(self, Family::WolanskiSuper | Family::BaumanSuper)
    }

    pub fn is_wolanski(self) -> bool {
        matches!(self, Family::WolanskiSuper | Family::WolanskiSub)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub family: Family,
    pub center: Point,
    pub radius: f64,
    pub height: f64,
    pub mu: f64,
}

/// Value, gradient, Laplacian and ∞-Laplacian at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierEval {
    pub value: f64,
    pub grad: [f64; 2],
    pub laplacian: f64,
    pub infinity_laplacian: f64,
}

impl BarrierSpec {
    fn amplitude(&self) -> f64 {
        let mu = self.mu;
        if self.family.is_wolanski() {
            self.height / ((-mu).exp() - (-4.0 * mu).exp())
        } else {
            self.height / (1.0 - (-mu).exp2())
        }
    }

    /// Profile f(ρ) and its first two derivatives; valid on the closed annulus.
    pub fn profile(&self, rho: f64) -> (f64, f64, f64) {
        let (mu, r, a) = (self.mu, self.radius, self.amplitude());
        let (f, d1, d2) = if self.family.is_wolanski() {
            let q = rho * rho / (r * r);
            let e = (-mu * q).exp();
            let k = a * 2.0 * mu / (r * r) * e;
            (a * ((-mu).exp() - e), k * rho, k * (1.0 - 2.0 * mu * q))
        } else {
            let t = (r / rho).powf(mu);
            (a * (1.0 - t), a * mu * t / rho, -a * mu * (mu + 1.0) * t / (rho * rho))
        };
        if self.family.is_super() {
            (f, d1, d2)
        } else {
            (self.height - f, -d1, -d2)
        }
    }

    fn check_annulus(&self, x: Point) -> Result<f64> {
        let rho = dist(x, self.center);
        if !(rho > self.radius && rho < 2.0 * self.radius) {
            return Err(Error::OutsideRegion(format!(
                "{x:?} not in the open annulus r < |x − y| < 2r (|x − y| = {rho}, r = {})",
                self.radius
            )));
        }
        Ok(rho)
    }

    /// Jet in n dimensions, sampled in the plane through the center.
    pub fn jet(&self, x: Point, n: usize) -> Result<Jet> {
        let rho = self.check_annulus(x)?;
        let (f, d1, d2) = self.profile(rho);
        let e = [(x[0] - self.center[0]) / rho, (x[1] - self.center[1]) / rho];
        let t = d1 / rho;
        let hess = [
            [d2 * e[0] * e[0] + t * (1.0 - e[0] * e[0]), (d2 - t) * e[0] * e[1]],
            [(d2 - t) * e[0] * e[1], d2 * e[1] * e[1] + t * (1.0 - e[1] * e[1])],
        ];
        Ok(Jet {
            value: f,
            grad: [d1 * e[0], d1 * e[1]],
            hess,
            laplacian: d2 + (n as f64 - 1.0) * t,
        })
    }

    pub fn eval(&self, x: Point, n: usize) -> Result<BarrierEval> {
        let j = self.jet(x, n)?;
        Ok(BarrierEval {
            value: j.value,
            grad: j.grad,
            laplacian: j.laplacian,
            infinity_laplacian: j.infinity_laplacian(),
        })
    }

    /// Max deviation from the prescribed values on both spheres.
    pub fn boundary_error(&self) -> f64 {
        let (inner, outer) = if self.family.is_super() {
            (0.0, self.height)
        } else {
            (self.height, 0.0)
        };
        let e1 = (self.profile(self.radius).0 - inner).abs();
        let e2 = (self.profile(2.0 * self.radius).0 - outer).abs();
        e1.max(e2)
    }
}

/// min{(p⁻ − 1)/(4‖∇p‖∞), 1/4}.
pub fn wolanski_r_star(p: &ExponentField) -> f64 {
    wolanski_r_star_raw(p.p_minus, p.lip_const)
}

pub fn wolanski_r_star_raw(p_minus: f64, lip: f64) -> f64 {
    if lip > 0.0 {
        ((p_minus - 1.0) / (4.0 * lip)).min(0.25)
    } else {
        0.25
    }
}

/// Left side of the sufficient condition for μ:
/// 2rL(log(4/(1 − e^{−3μ})) + |log M| + |log r| + 4μ) − 2μ(p⁻ − 1) + n + p⁺ − 2.
pub fn wolanski_condition(p: &ExponentField, m: f64, r: f64, n: usize, mu: f64) -> f64 {
    let l = p.lip_const;
    2.0 * r * l * ((4.0 / (1.0 - (-3.0 * mu).exp())).ln() + m.ln().abs() + r.ln().abs() + 4.0 * mu)
        - 2.0 * mu * (p.p_minus - 1.0)
        + n as f64
        + p.p_plus
        - 2.0
}

/// Smallest μ ≥ 1 satisfying [`wolanski_condition`] ≤ 0, to 1e−6.
pub fn wolanski_mu_star(p: &ExponentField, m: f64, r: f64, n: usize) -> Result<f64> {
    if !(m > 0.0 && r > 0.0) {
        return Err(Error::InvalidParameter(format!("need M > 0 and r > 0, got M = {m}, r = {r}")));
    }
    let r_star = wolanski_r_star(p);
    if r > r_star {
        return Err(Error::AnnulusTooLarge { r, r_star });
    }
    let lhs = |mu: f64| wolanski_condition(p, m, r, n, mu);
    if lhs(1.0) <= 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while lhs(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Unresolved("no admissible μ below 1e12".into()));
        }
    }
    while hi - lo > 1e-7 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// (n − p⁻ + 1)/(p⁻ − 1).
pub fn bauman_mu_star(p_minus: f64, n: usize) -> f64 {
    (n as f64 - p_minus + 1.0) / (p_minus - 1.0)
}

/// Mμ/(2(2^μ − 1)).
pub fn bauman_r_double_star(m: f64, mu: f64) -> f64 {
    m * mu / (2.0 * (mu.exp2() - 1.0))
}

/// Largest r ≤ min{r**, 1/4} with r|log r| ≤ 1/(2L) and
/// r ≤ 1/(4L|log(2^{μ+1} r**)|), at μ = μ*.
pub fn bauman_r_star(p: &ExponentField, m: f64, n: usize) -> f64 {
    let mu = bauman_mu_star(p.p_minus, n).max(MU_FLOOR);
    bauman_r_star_at(p.lip_const, m, mu)
}

pub fn bauman_r_star_at(lip: f64, m: f64, mu: f64) -> f64 {
    let rss = bauman_r_double_star(m, mu);
    let mut r = rss.min(0.25);
    if lip > 0.0 {
        let bound = 1.0 / (2.0 * lip);
        // r|log r| increases on (0, 1/e]; find where it reaches the bound.
        let e_inv = (-1.0f64).exp();
        if bound < e_inv {
            let (mut lo, mut hi) = (0.0f64, e_inv);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid * mid.ln().abs() <= bound {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            r = r.min(lo);
        }
        let lg = ((mu + 1.0).exp2() * rss).ln().abs();
        if lg > 0.0 {
            r = r.min(1.0 / (4.0 * lip * lg));
        }
    }
    r
}

/// μ search floor shared by both families.
pub const MU_FLOOR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub family: Family,
    pub mu: f64,
    pub mu_star: f64,
    pub r: f64,
    pub r_star: f64,
    /// max of the operator for supersolutions, min for subsolutions.
    pub worst_sign: f64,
    pub samples: usize,
    /// −max of the left side of the printed sufficient inequality.
    pub slack: f64,
    pub boundary_error: f64,
    /// Largest |log|∇u|| over the samples and the Wolanski envelope.
    pub max_abs_log_grad: f64,
    pub log_envelope: Option<f64>,
    pub passed: bool,
    /// False when run in force mode outside the admissible region.
    pub guaranteed: bool,
    pub values: Vec<(Point, f64)>,
}

/// Admissibility thresholds (μ*, r*) for a family.
pub fn thresholds(family: Family, p: &ExponentField, m: f64, r: f64, n: usize) -> Result<(f64, f64)> {
    if family.is_wolanski() {
        let r_star = wolanski_r_star(p);
        let mu_star = if r <= r_star {
            wolanski_mu_star(p, m, r, n)?
        } else {
            f64::INFINITY
        };
        Ok((mu_star, r_star))
    } else {
        let mu_star = bauman_mu_star(p.p_minus, n).max(MU_FLOOR);
        Ok((mu_star, bauman_r_star_at(p.lip_const, m, mu_star)))
    }
}

/// Samples the normalized operator on a radial × angular grid with at least
/// `samples` points, 1e−6 relative margin from both spheres.
pub fn certify(spec: &BarrierSpec, p: &ExponentField, n: usize, samples: usize, force: bool) -> Result<Certification> {
    let (mu_star, r_star) = thresholds(spec.family, p, spec.height, spec.radius, n)?;
    let admissible = spec.mu >= mu_star * (1.0 - 1e-12) && spec.radius <= r_star;
    if !admissible && !force {
        return Err(Error::Inadmissible(format!(
            "{}: μ = {} (μ* = {mu_star}), r = {} (r* = {r_star})",
            spec.family.name(),
            spec.mu,
            spec.radius
        )));
    }
    let n_rad = (samples as f64).sqrt().ceil().max(2.0) as usize;
    let n_ang = samples.div_ceil(n_rad).max(1);
    let r = spec.radius;
    let (r0, r1) = (r * (1.0 + 1e-6), 2.0 * r * (1.0 - 1e-6));
    let l = p.lip_const;
    let mut worst = if spec.family.is_super() { f64::NEG_INFINITY } else { f64::INFINITY };
    let mut max_lhs = f64::NEG_INFINITY;
    let mut max_log = 0.0f64;
    let mut values = Vec::with_capacity(n_rad * n_ang);
    for i in 0..n_rad {
        let rho = r0 + (r1 - r0) * i as f64 / (n_rad - 1) as f64;
        for j in 0..n_ang {
            let th = core::f64::consts::TAU * j as f64 / n_ang as f64;
            let x = [spec.center[0] + rho * th.cos(), spec.center[1] + rho * th.sin()];
            let jet = spec.jet(x, n)?;
            let v = strong_operator(&jet, p, x)?;
            worst = if spec.family.is_super() { worst.max(v) } else { worst.min(v) };
            let lg = jet.grad_norm().ln().abs();
            max_log = max_log.max(lg);
            let lhs = if spec.family.is_wolanski() {
                2.0 * r * l * lg - 2.0 * spec.mu * (p.p_minus - 1.0) + n as f64 + p.p_plus - 2.0
            } else {
                l * rho * lg - spec.mu * (p.p_minus - 1.0) + n as f64 - p.p_minus
            };
            max_lhs = max_lhs.max(lhs);
            values.push((x, v));
        }
    }
    let log_envelope = spec.family.is_wolanski().then(|| {
        let mu = spec.mu;
        (4.0 / (1.0 - (-3.0 * mu).exp())).ln() + spec.height.ln().abs() + r.ln().abs() + mu.ln() + 3.0 * mu
    });
    let passed = if spec.family.is_super() { worst <= 1e-8 } else { worst >= -1e-8 };
    Ok(Certification {
        family: spec.family,
        mu: spec.mu,
        mu_star,
        r,
        r_star,
        worst_sign: worst,
        samples: values.len(),
        slack: -max_lhs,
        boundary_error: spec.boundary_error(),
        max_abs_log_grad: max_log,
        log_envelope,
        passed,
        guaranteed: admissible,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, mu: f64) -> BarrierSpec {
        BarrierSpec {
            family,
            center: [0.0, 0.0],
            radius: 0.1,
            height: 1.0,
            mu,
        }
    }

    #[test]
    fn boundary_values() {
        for f in [Family::WolanskiSuper, Family::WolanskiSub, Family::BaumanSuper, Family::BaumanSub] {
            for mu in [1.0, 2.5, 7.0] {
                assert!(spec(f, mu).boundary_error() <= 1e-12, "{f:?} {mu}");
            }
        }
    }

    #[test]
    fn bauman_value_example() {
        let s = BarrierSpec {
            family: Family::BaumanSuper,
            center: [0.0, 0.0],
            radius: 1.0,
            height: 1.0,
            mu: 1.0,
        };
        let v = s.eval([1.5, 0.0], 2).unwrap().value;
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(s.eval([0.5, 0.0], 2).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(wolanski_r_star_raw(2.0, 1.0), 0.25);
        assert_eq!(wolanski_r_star_raw(1.5, 5.0), 0.025);
        let c2 = ExponentField::constant(2.0).unwrap();
        let c3 = ExponentField::constant(3.0).unwrap();
        assert_eq!(wolanski_r_star(&c2), 0.25);
        assert_eq!(wolanski_mu_star(&c2, 1.0, 0.1, 2).unwrap(), 1.0);
        assert_eq!(wolanski_mu_star(&c3, 1.0, 0.1, 2).unwrap(), 1.0);
        assert_eq!(bauman_mu_star(2.0, 3), 2.0);
        assert_eq!(bauman_mu_star(2.0, 2), 1.0);
        assert_eq!(bauman_mu_star(1.5, 2), 3.0);
        assert_eq!(bauman_r_double_star(1.0, 2.0), 1.0 / 3.0);
        assert_eq!(bauman_r_double_star(1.0, 1.0), 0.5);
        assert_eq!(bauman_r_star_at(0.0, 1.0, 2.0), 0.25);
    }

    #[test]
    fn too_large_annulus() {
        let p = ExponentField::affine(3.0, [0.25, 0.0]).unwrap();
        assert!(matches!(
            wolanski_mu_star(&p, 1.0, 2.0, 2),
            Err(Error::AnnulusTooLarge { .. })
        ));
    }

    #[test]
    fn bauman_constant_p_closed_form() {
        let p = ExponentField::constant(2.0).unwrap();
        let s = spec(Family::BaumanSuper, 1.0);
        let x = [0.13, 0.05];
        let rho: f64 = x[0].hypot(x[1]);
        let a = 1.0 / (1.0 - 0.5);
        let expect = a * 1.0 * 0.1 * rho.powf(-3.0) * (2.0 - 1.0 - 2.0);
        let got = strong_operator(&s.jet(x, 2).unwrap(), &p, x).unwrap();
        assert!((got - expect).abs() < 1e-10 * expect.abs());
    }

    #[test]
    fn mirror_certification() {
        let p = ExponentField::with_hull(
            crate::exponent::ExponentKind::Affine { p0: 2.0, a: [0.5, 0.0] },
            crate::point::Aabb::new([-1.0, -1.0], [1.0, 1.0]),
        )
        .unwrap();
        let mu = wolanski_mu_star(&p, 1.0, 0.1, 2).unwrap();
        let up = certify(&spec(Family::WolanskiSuper, mu), &p, 2, 400, false).unwrap();
        let down = certify(&spec(Family::WolanskiSub, mu), &p, 2, 400, false).unwrap();
        assert!(up.passed && down.passed);
        assert_eq!(up.worst_sign, -down.worst_sign);
        for (a, b) in up.values.iter().zip(&down.values) {
            assert_eq!(a.1, -b.1);
        }
        assert!(certify(&spec(Family::WolanskiSuper, 0.5 * mu), &p, 2, 100, false).is_err());
        let forced = certify(&spec(Family::WolanskiSuper, 0.5 * mu), &p, 2, 100, true).unwrap();
        assert!(!forced.guaranteed);
    }
}
