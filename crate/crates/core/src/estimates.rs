//! Empirical constants of Harnack, oscillation, Carleson and boundary
//! Harnack type, scanned from solved fields.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::fit::fit_loglog;
use crate::geometry::{Domain, HarnackChain};
use crate::mesh::{NodeKind, ScalarField};
use crate::point::{dist, Point};

/// Default window shrink factor c̃.
pub const DEFAULT_C_TILDE: f64 = 6.0;

/// Nodes of the field's grid inside Ω (not exterior).
fn domain_nodes(u: &ScalarField) -> impl Iterator<Item = (usize, Point)> + '_ {
    u.grid
        .nodes
        .iter()
        .enumerate()
        .filter(move |(i, _)| u.grid.node_kind[*i] != NodeKind::Exterior)
        .map(|(i, &p)| (i, p))
}

/// (sup, inf) of u over nodes of Ω in the closed ball.
fn sup_inf(u: &ScalarField, c: Point, r: f64) -> Option<(f64, f64)> {
    let mut out: Option<(f64, f64)> = None;
    for (i, p) in domain_nodes(u) {
        if dist(p, c) <= r * (1.0 + 1e-12) {
            let v = u.values[i];
            out = Some(match out {
                None => (v, v),
                Some((s, m)) => (s.max(v), m.min(v)),
            });
        }
    }
    out
}

/// sup_{B(c,r)} u / (inf_{B(c,r)} u + r): the smallest admissible Harnack
/// constant for this ball.
pub fn harnack_constant(u: &ScalarField, domain: &Domain, center: Point, r: f64) -> Result<f64> {
    if domain.signed_dist(center) < r {
        return Err(Error::OutsideRegion(format!("B({center:?}, {r}) exits Ω")));
    }
    let (s, m) = sup_inf(u, center, r).ok_or_else(|| Error::Unresolved("no nodes in the ball".into()))?;
    Ok(s / (m + r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainedHarnack {
    pub per_ball: Vec<f64>,
    /// max(1, max per-ball constant).
    pub c: f64,
    pub n: usize,
    pub u_x: f64,
    /// C^N (u(y) + r).
    pub bound: f64,
    pub holds: bool,
}

/// Checks u(x) ≤ C^N (u(y) + r) along a constructed chain, with C the
/// largest per-ball constant (floored at 1).
pub fn chained_harnack(u: &ScalarField, domain: &Domain, chain: &HarnackChain) -> Result<ChainedHarnack> {
    let mut per_ball = Vec::with_capacity(chain.count);
    for b in &chain.balls {
        per_ball.push(harnack_constant(u, domain, b.center, b.radius)?);
    }
    let c = per_ball.iter().copied().fold(1.0, f64::max);
    let ux = u.eval_at(chain.x).ok_or_else(|| Error::OutsideRegion("x outside mesh".into()))?;
    let uy = u.eval_at(chain.y).ok_or_else(|| Error::OutsideRegion("y outside mesh".into()))?;
    let bound = c.powi(chain.count as i32) * (uy + chain.r);
    Ok(ChainedHarnack {
        per_ball,
        c,
        n: chain.count,
        u_x: ux,
        bound,
        holds: ux <= bound,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub residual: f64,
    /// 0 < exponent ≤ 1.
    pub exponent_in_range: bool,
}

fn in_range(e: f64) -> bool {
    e > 0.0 && e <= 1.0 + 1e-9
}

fn levels_for(u: &ScalarField, r: f64, levels: usize) -> Result<Vec<f64>> {
    let h = u.grid.h;
    let radii: Vec<f64> = (1..=levels)
        .map(|k| r / (1u64 << k) as f64)
        .filter(|&rho| rho >= 4.0 * h)
        .collect();
    if radii.len() < 3 {
        return Err(Error::Unresolved(format!(
            "{} resolvable dyadic levels below r = {r} at h = {h}; need 3",
            radii.len()
        )));
    }
    Ok(radii)
}

/// Fit of sup_{B(w,ρ)∩Ω} u against ρ = r/2^k. The prefactor is the least c
/// with sup_ρ ≤ c(ρ/r)^β (sup_{B(w,r)} u + r) at every level.
pub fn oscillation_decay(u: &ScalarField, w: Point, r: f64, levels: usize) -> Result<DecayFit> {
    let radii = levels_for(u, r, levels)?;
    let top = sup_inf(u, w, r).ok_or_else(|| Error::Unresolved("empty window".into()))?.0;
    let values: Vec<f64> = radii
        .iter()
        .map(|&rho| sup_inf(u, w, rho).map_or(0.0, |s| s.0))
        .collect();
    envelope_fit(&radii, &values, r, top)
}

/// Interior variant: osc_{B(c,ρ)} u against ρ.
pub fn oscillation_decay_interior(u: &ScalarField, domain: &Domain, c: Point, r: f64, levels: usize) -> Result<DecayFit> {
    if domain.signed_dist(c) < r {
        return Err(Error::OutsideRegion(format!("B({c:?}, {r}) exits Ω")));
    }
    let radii = levels_for(u, r, levels)?;
    let osc = |rho: f64| sup_inf(u, c, rho).map_or(0.0, |(s, m)| s - m);
    let top = osc(r);
    let values: Vec<f64> = radii.iter().map(|&rho| osc(rho)).collect();
    envelope_fit(&radii, &values, r, top)
}

fn envelope_fit(radii: &[f64], values: &[f64], r: f64, top: f64) -> Result<DecayFit> {
    let fit = fit_loglog(radii, values).ok_or_else(|| Error::Degenerate("decay profile has no positive values".into()))?;
    let e = fit.exponent;
    let prefactor = radii
        .iter()
        .zip(values)
        .map(|(&rho, &v)| v / ((rho / r).powf(e) * (top + r)))
        .fold(0.0, f64::max);
    Ok(DecayFit {
        exponent: e,
        prefactor,
        radii: radii.to_vec(),
        values: values.to_vec(),
        residual: fit.residual,
        exponent_in_range: in_range(e),
    })
}

/// Smallest C with |u(x) − u(y)| ≤ C(|x − y|/r)^γ (sup_{B(w,2r)∩Ω} u + r)
/// over the given pairs (values by P1 interpolation).
pub fn holder_boundary_check(u: &ScalarField, w: Point, r: f64, pairs: &[(Point, Point)], gamma: f64) -> Result<DecayFit> {
    let top = sup_inf(u, w, 2.0 * r).ok_or_else(|| Error::Unresolved("empty window".into()))?.0;
    let mut c = 0.0f64;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for &(x, y) in pairs {
        let d = dist(x, y);
        if d == 0.0 {
            continue;
        }
        let (Some(ux), Some(uy)) = (u.eval_at(x), u.eval_at(y)) else {
            return Err(Error::OutsideRegion(format!("pair {x:?}, {y:?} outside the mesh")));
        };
        let diff = (ux - uy).abs();
        c = c.max(diff / ((d / r).powf(gamma) * (top + r)));
        radii.push(d);
        values.push(diff);
    }
    Ok(DecayFit {
        exponent: gamma,
        prefactor: c,
        radii,
        values,
        residual: 0.0,
        exponent_in_range: in_range(gamma),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonReport {
    pub ratio: f64,
    pub r_prime: f64,
    pub sup: f64,
    pub corkscrew: Point,
    pub corkscrew_value: f64,
}

/// sup_{Ω∩B(w,r′)} u / (u(A_{r′}(w)) + r′) with r′ = r/c′.
pub fn carleson_check(u: &ScalarField, domain: &Domain, w: Point, r: f64, c_prime: f64) -> Result<CarlesonReport> {
    let rp = r / c_prime;
    let a = domain.corkscrew(w, rp)?;
    let sup = sup_inf(u, w, rp).ok_or_else(|| Error::Unresolved("empty window".into()))?.0;
    let ua = u.eval_at(a).ok_or_else(|| Error::OutsideRegion("corkscrew point outside mesh".into()))?;
    Ok(CarlesonReport {
        ratio: sup / (ua + rp),
        r_prime: rp,
        sup,
        corkscrew: a,
        corkscrew_value: ua,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub lower: f64,
    pub upper: f64,
    pub window_center: Point,
    pub window_radius: f64,
    pub h: f64,
    pub nodes: usize,
}

/// Window nodes of Ω ∩ B(w, r/c̃) with d(x, ∂Ω) ≥ 2h.
fn window(u: &ScalarField, domain: &Domain, w: Point, r: f64, c_tilde: f64) -> Vec<(usize, f64)> {
    let rad = r / c_tilde;
    let h = u.grid.h;
    domain_nodes(u)
        .filter(|(_, p)| dist(*p, w) <= rad)
        .map(|(i, p)| (i, domain.signed_dist(p)))
        .filter(|&(_, d)| d >= 2.0 * h)
        .collect()
}

/// inf and sup of u(x)·r/d(x, ∂Ω) over the window.
pub fn boundary_decay(u: &ScalarField, domain: &Domain, w: Point, r: f64, c_tilde: f64) -> Result<RatioReport> {
    let nodes = window(u, domain, w, r, c_tilde);
    if nodes.is_empty() {
        return Err(Error::Unresolved(format!("no nodes with d ≥ 2h in B(w, r/c̃) = B({w:?}, {})", r / c_tilde)));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(i, d) in &nodes {
        let q = u.values[i] * r / d;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Ok(RatioReport {
        lower: lo,
        upper: hi,
        window_center: w,
        window_radius: r / c_tilde,
        h: u.grid.h,
        nodes: nodes.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryHarnackReport {
    pub ratio: RatioReport,
    /// sup over pairs of (u(x)/v(x))·(v(y)/u(y)) = upper/lower.
    pub four_point: f64,
}

/// inf and sup of u/v over the window, computed as the quotient of the two
/// boundary-decay ratios so that upper(u/v) ≤ sup(u r/d)/inf(v r/d) holds
/// in floating point.
pub fn boundary_harnack(
    u: &ScalarField,
    v: &ScalarField,
    domain: &Domain,
    w: Point,
    r: f64,
    c_tilde: f64,
) -> Result<BoundaryHarnackReport> {
    if !u.same_grid(v) {
        return Err(Error::GridMismatch("boundary Harnack needs a common grid".into()));
    }
    let nodes = window(u, domain, w, r, c_tilde);
    if nodes.is_empty() {
        return Err(Error::Unresolved("empty boundary Harnack window".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(i, d) in &nodes {
        if !(v.values[i] > 0.0) {
            return Err(Error::Degenerate(format!("v = {} ≤ 0 at node {i}", v.values[i])));
        }
        let q = (u.values[i] * r / d) / (v.values[i] * r / d);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Ok(BoundaryHarnackReport {
        ratio: RatioReport {
            lower: lo,
            upper: hi,
            window_center: w,
            window_radius: r / c_tilde,
            h: u.grid.h,
            nodes: nodes.len(),
        },
        four_point: hi / lo,
    })
}

/// Smallest λ with u(x) ≤ (d(a)/d(x))^λ (u(a) + r′) over window nodes
/// nearer to ∂Ω than the corkscrew point a = A_{r′}(w). Report-only.
pub fn harnack_to_boundary_exponent(u: &ScalarField, domain: &Domain, w: Point, r_prime: f64) -> Result<f64> {
    let a = domain.corkscrew(w, r_prime)?;
    let ua = u.eval_at(a).ok_or_else(|| Error::OutsideRegion("corkscrew point outside mesh".into()))?;
    let da = domain.signed_dist(a);
    let mut lambda = 0.0f64;
    for (i, p) in domain_nodes(u) {
        let d = domain.signed_dist(p);
        if dist(p, w) > 2.0 * r_prime || d >= da || d < 2.0 * u.grid.h {
            continue;
        }
        let q = u.values[i] / (ua + r_prime);
        if q > 1.0 {
            lambda = lambda.max(q.ln() / (da / d).ln());
        }
    }
    Ok(lambda)
}

/// Status of the oscillation lemma's hypothesis "p⁺ ≤ n or p⁻ > n".
pub fn oscillation_hypothesis(p: &ExponentField, n: usize) -> &'static str {
    let n = n as f64;
    if p.p_plus <= n {
        "p+ <= n"
    } else if p.p_minus > n {
        "p- > n"
    } else {
        "violated: p- <= n < p+"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, DomainKind};
    use crate::mesh::build_grid;
    use alloc::sync::Arc;

    fn slab_field(f: impl Fn(Point) -> f64) -> (Domain, ScalarField) {
        let d = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        let g = Arc::new(build_grid(&d, 1.0 / 80.0).unwrap());
        (d, ScalarField::from_fn(g, f))
    }

    #[test]
    fn harnack_examples() {
        let (d, u) = slab_field(|x| x[1]);
        let c = harnack_constant(&u, &d, [0.0, 0.5], 0.1).unwrap();
        assert!((c - 1.2).abs() < 1e-12, "{c}");
        let (d, u) = slab_field(|_| 3.0);
        assert!((harnack_constant(&u, &d, [0.0, 0.5], 0.1).unwrap() - 3.0 / 3.1).abs() < 1e-15);
        assert!(harnack_constant(&u, &d, [0.0, 0.05], 0.1).is_err());
    }

    #[test]
    fn linear_field_decay() {
        let (d, u) = slab_field(|x| x[1]);
        let f = oscillation_decay(&u, [0.0, 0.0], 0.5, 5).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.prefactor - 0.5).abs() < 1e-12);
        let c = carleson_check(&u, &d, [0.0, 0.0], 0.5, 2.0).unwrap();
        assert!((c.ratio - 0.5).abs() < 1e-12);
        let b = boundary_decay(&u, &d, [0.0, 0.0], 0.6, 6.0).unwrap();
        assert!((b.lower - 0.6).abs() < 1e-12 && (b.upper - 0.6).abs() < 1e-12);
        let pairs = [([0.0, 0.1], [0.0, 0.3]), ([0.1, 0.2], [0.1, 0.2])];
        let hb = holder_boundary_check(&u, [0.0, 0.0], 0.5, &pairs, 1.0).unwrap();
        assert!(hb.prefactor <= 1.0);
    }

    #[test]
    fn ratio_of_scaled_fields() {
        let (d, u) = slab_field(|x| x[1] * (1.0 + 0.3 * x[0]));
        let v = u.map(|x| 2.0 * x);
        let r = boundary_harnack(&u, &v, &d, [0.0, 0.0], 0.6, 6.0).unwrap();
        assert!((r.ratio.lower - 0.5).abs() < 1e-15 && (r.ratio.upper - 0.5).abs() < 1e-15);
        assert!((r.four_point - 1.0).abs() < 1e-15);
        assert!(boundary_harnack(&u, &u.map(|x| -x), &d, [0.0, 0.0], 0.6, 6.0).is_err());
    }
}
