//! Empirical uniform p(·)-fatness of the complement.

use alloc::format;

use super::domain::Domain;
use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::point::Point;
use crate::solver::{relative_capacity, CompactSet, SolveOptions};

/// cap((ℝ² ∖ Ω) ∩ B̄(x, r), B(x, 2r)) / cap(B̄(x, r), B(x, 2r)) on meshes of
/// size r/32. Exactly 1 when B̄(x, r) lies in the complement.
pub fn fatness_ratio(domain: &Domain, p: &ExponentField, x: Point, r: f64) -> Result<f64> {
    let sd = domain.signed_dist(x);
    if sd > 0.0 {
        return Err(Error::OutsideRegion(format!("{x:?} lies in Ω")));
    }
    if !(r > 0.0) || r > domain.regularity.r_nta {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must lie in (0, r_Ω = {}]",
            domain.regularity.r_nta
        )));
    }
    if sd <= -r {
        return Ok(1.0);
    }
    let h = r / 32.0;
    let opts = SolveOptions::default();
    let ball = CompactSet::ClosedBall { center: x, radius: r };
    let part = CompactSet::ComplementInBall {
        region: domain.region.clone(),
        center: x,
        radius: r,
    };
    let full = relative_capacity(&ball, x, r, p, h, &opts)?;
    let cut = relative_capacity(&part, x, r, p, h, &opts)?;
    Ok(cut.value / full.value)
}
