//! Named boundary-data families.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::point::Point;

/// Boundary data g. Solvers evaluate it at every node to build the initial
/// guess and at pinned nodes as Dirichlet values.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Constant(f64),
    /// a·x₁ + b·x₂ + c.
    Linear { a: f64, b: f64, c: f64 },
    /// x₁x₂.
    HarmonicProduct,
    /// x₁² − x₂².
    Quadratic,
    /// |x|^α.
    Radial { alpha: f64 },
    /// Positive bump in the angle, vanishing on |θ − θ₀| ≤ half_width and
    /// equal to scale·sin²(…) elsewhere; θ measured about the origin.
    VanishingArc { theta0: f64, half_width: f64, scale: f64 },
    /// Sum of a few random low-frequency trigonometric modes plus an offset.
    RandomSmooth { modes: Vec<(f64, f64, f64, f64)>, offset: f64 },
}

impl BoundaryData {
    pub fn eval(&self, x: Point) -> f64 {
        match self {
            BoundaryData::Constant(c) => *c,
            BoundaryData::Linear { a, b, c } => a * x[0] + b * x[1] + c,
            BoundaryData::HarmonicProduct => x[0] * x[1],
            BoundaryData::Quadratic => x[0] * x[0] - x[1] * x[1],
            BoundaryData::Radial { alpha } => x[0].hypot(x[1]).powf(*alpha),
            BoundaryData::VanishingArc {
                theta0,
                half_width,
                scale,
            } => {
                let theta = x[1].atan2(x[0]);
                let mut d = (theta - theta0).abs() % core::f64::consts::TAU;
                if d > core::f64::consts::PI {
                    d = core::f64::consts::TAU - d;
                }
                if d <= *half_width {
                    0.0
                } else {
                    // 0 at d = half_width, peak at d = π.
                    let s = (d - half_width) / (core::f64::consts::PI - half_width);
                    let v = (core::f64::consts::FRAC_PI_2 * s).sin();
                    scale * v * v
                }
            }
            BoundaryData::RandomSmooth { modes, offset } => {
                offset
                    + modes
                        .iter()
                        .map(|&(amp, kx, ky, ph)| amp * (kx * x[0] + ky * x[1] + ph).sin())
                        .sum::<f64>()
            }
        }
    }

    /// Random smooth data with `n_modes` modes, amplitude ≤ 1, frequencies ≤ 3.
    pub fn random_smooth(seed: u64, n_modes: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..n_modes)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0) / n_modes as f64,
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(0.0..core::f64::consts::TAU),
                )
            })
            .collect();
        BoundaryData::RandomSmooth { modes, offset: 0.0 }
    }

    /// Parses `name[:arg[:arg]]` as used on the command line:
    /// `const:c`, `linear:x1`, `linear:x2`, `harmonic:x1x2`, `quadratic`,
    /// `radial:alpha`, `vanishing-arc[:theta0[:half_width[:scale]]]`, `random-smooth:seed`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| bad(spec))?
                .parse::<f64>()
                .map_err(|_| bad(spec))
        };
        Ok(match parts[0] {
            "const" => BoundaryData::Constant(num(1)?),
            "linear" => match parts.get(1).copied() {
                Some("x1") | None => BoundaryData::Linear { a: 1.0, b: 0.0, c: 0.0 },
                Some("x2") => BoundaryData::Linear { a: 0.0, b: 1.0, c: 0.0 },
                _ => return Err(bad(spec)),
            },
            "harmonic" => BoundaryData::HarmonicProduct,
            "quadratic" => BoundaryData::Quadratic,
            "radial" => BoundaryData::Radial { alpha: num(1)? },
            "vanishing-arc" => BoundaryData::VanishingArc {
                theta0: if parts.len() > 1 { num(1)? } else { 0.0 },
                half_width: if parts.len() > 2 { num(2)? } else { core::f64::consts::FRAC_PI_2 },
                scale: if parts.len() > 3 { num(3)? } else { 1.0 },
            },
            "random-smooth" => BoundaryData::random_smooth(num(1)? as u64, 4),
            _ => return Err(bad(spec)),
        })
    }
}

fn bad(spec: &str) -> Error {
    Error::InvalidParameter(format!("unknown boundary data `{spec}`"))
}

/// Readable name of a data family (used in reports).
pub fn data_name(d: &BoundaryData) -> String {
    match d {
        BoundaryData::Constant(c) => format!("const:{c}"),
        BoundaryData::Linear { a, b, c } => format!("linear:{a},{b},{c}"),
        BoundaryData::HarmonicProduct => "harmonic:x1x2".into(),
        BoundaryData::Quadratic => "quadratic".into(),
        BoundaryData::Radial { alpha } => format!("radial:{alpha}"),
        BoundaryData::VanishingArc { theta0, half_width, scale } => format!("vanishing-arc:{theta0}:{half_width}:{scale}"),
        BoundaryData::RandomSmooth { modes, .. } => format!("random-smooth[{}]", modes.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_arc_profile() {
        let g = BoundaryData::parse("vanishing-arc").unwrap();
        assert_eq!(g.eval([1.0, 0.0]), 0.0);
        assert_eq!(g.eval([0.0, 1.0]), 0.0);
        assert!((g.eval([-1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(g.eval([-0.6, 0.8]) > 0.0);
    }

    #[test]
    fn parse_families() {
        assert_eq!(BoundaryData::parse("const:2").unwrap().eval([3.0, 4.0]), 2.0);
        assert_eq!(BoundaryData::parse("harmonic:x1x2").unwrap().eval([3.0, 4.0]), 12.0);
        assert!((BoundaryData::parse("radial:0.5").unwrap().eval([3.0, 4.0]) - 5f64.sqrt()).abs() < 1e-15);
        assert!(BoundaryData::parse("nope").is_err());
        assert_eq!(BoundaryData::random_smooth(7, 3), BoundaryData::random_smooth(7, 3));
    }
}
