//! The normalized strong form of the p(x)-Laplacian.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::point::Point;

/// Value and first two derivatives of a field at a point. `laplacian` is kept
/// separately so radial fields can carry the n-dimensional Laplacian while
/// being sampled in a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
    pub laplacian: f64,
}

impl Jet {
    /// Planar jet with Δ = trace of the Hessian.
    pub fn planar(value: f64, grad: [f64; 2], hess: [[f64; 2]; 2]) -> Self {
        Jet {
            value,
            grad,
            hess,
            laplacian: hess[0][0] + hess[1][1],
        }
    }

    /// Δ∞f = ⟨D²f ∇f, ∇f⟩.
    pub fn infinity_laplacian(&self) -> f64 {
        let g = self.grad;
        let h = self.hess;
        g[0] * (h[0][0] * g[0] + h[0][1] * g[1]) + g[1] * (h[1][0] * g[0] + h[1][1] * g[1])
    }

    pub fn grad_norm(&self) -> f64 {
        self.grad[0].hypot(self.grad[1])
    }
}

/// ⟨∇p, ∇f⟩·log|∇f| + (p − 2)·Δ∞f/|∇f|² + Δf at `x`.
///
/// Multiplying by |∇f|^{p−2} gives div(|∇f|^{p−2}∇f), so the signs agree.
pub fn strong_operator(f: &Jet, p: &ExponentField, x: Point) -> Result<f64> {
    let m = f.grad_norm();
    if !(m > 0.0) {
        return Err(Error::VanishingGradient);
    }
    let gp = p.grad(x);
    let drift = gp[0] * f.grad[0] + gp[1] * f.grad[1];
    Ok(drift * m.ln() + (p.eval(x) - 2.0) * f.infinity_laplacian() / (m * m) + f.laplacian)
}
