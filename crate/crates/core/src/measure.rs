//! The Riesz measure of a zero-extended solution and its growth checks.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::geometry::Domain;
use crate::mesh::{build_grid_region, FillMode, Grid, NodeKind, ScalarField};
use crate::point::{dist, Aabb, Point};
use crate::solver::{nodal_residuals, solve_dirichlet, weak_pairing, SolveOptions, SolveReport};

/// Relative tolerance for "on the sphere ∂B(w,s)".
const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub node: usize,
    pub at: Point,
    pub mass: f64,
}

/// Discrete Riesz measure. Every free or boundary node of the window carries
/// an atom, so the discrete Riesz identity holds by construction; atoms off
/// ∂Ω are residuals of the solve and vanish up to its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureEstimate {
    pub atoms: Vec<Atom>,
    pub center: Point,
    pub radius: f64,
    pub total: f64,
    pub h: f64,
    /// Largest |residual| at free nodes of the window; zero for an exact
    /// discrete solution.
    pub interior_residual: f64,
}

impl MeasureEstimate {
    /// Weight of an atom at distance `d` in Δ(w, s): 1 inside, 1/2 on the
    /// sphere (atoms are nodal, so a boundary node on ∂B(w,s) carries half
    /// of its hat), 0 outside.
    fn weight(d: f64, s: f64) -> f64 {
        let tol = SPHERE_TOL * s.max(1e-300);
        if d < s - tol {
            1.0
        } else if d <= s + tol {
            0.5
        } else {
            0.0
        }
    }

    /// μ(Δ(w, s)).
    pub fn mass_in(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| Self::weight(dist(a.at, self.center), s) * a.mass)
            .sum()
    }

    /// μ(Δ(w, s₂) ∖ Δ(w, s₁)).
    pub fn mass_between(&self, s1: f64, s2: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let d = dist(a.at, self.center);
                (Self::weight(d, s2) - Self::weight(d, s1)) * a.mass
            })
            .sum()
    }

    pub fn min_atom(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).fold(f64::INFINITY, f64::min)
    }

    pub fn is_empty_measure(&self) -> bool {
        self.atoms.iter().all(|a| a.mass == 0.0)
    }
}

/// Solves the Dirichlet problem on a whole-box grid so that the solution is
/// the zero extension across ∂Ω inside `bbox`.
pub fn solve_extended(
    domain: &Domain,
    p: &ExponentField,
    g: impl Fn(Point) -> f64,
    bbox: Aabb,
    h: f64,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    let grid = Arc::new(build_grid_region(&domain.region, bbox, h, FillMode::WholeBox)?);
    solve_dirichlet(&grid, p, g, opts)
}

/// Atom at node z in B(w, r) = −∫|∇u|^{p−2}∇u·∇φ_z.
pub fn riesz_measure(u: &ScalarField, p: &ExponentField, w: Point, r: f64) -> Result<MeasureEstimate> {
    let grid: &Grid = &u.grid;
    for i in 0..grid.len() {
        if grid.node_kind[i] == NodeKind::Exterior && u.values[i] != 0.0 {
            return Err(Error::NotExtended(i, u.values[i]));
        }
    }
    if grid.count(NodeKind::Exterior) == 0 {
        return Err(Error::Precondition("field has no exterior nodes; solve on a whole-box grid".into()));
    }
    let res = nodal_residuals(u, p);
    let umax = u.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut atoms = Vec::new();
    let mut interior = 0.0f64;
    for i in grid.nodes_in_ball(w, r) {
        match grid.node_kind[i] {
            NodeKind::Boundary if u.values[i].abs() > 1e-12 * (1.0 + umax) => {
                return Err(Error::Precondition(format!("u = {} ≠ 0 at boundary node {i}", u.values[i])));
            }
            NodeKind::Truncation => {
                return Err(Error::Precondition(format!("window B({w:?}, {r}) reaches the grid box edge")));
            }
            NodeKind::Exterior => continue,
            NodeKind::Interior => interior = interior.max(res[i].abs()),
            NodeKind::Boundary => {}
        }
        atoms.push(Atom {
            node: i,
            at: grid.nodes[i],
            mass: -res[i],
        });
    }
    atoms.sort_by_key(|a| a.node);
    let total = atoms.iter().map(|a| a.mass).sum();
    Ok(MeasureEstimate {
        atoms,
        center: w,
        radius: r,
        total,
        h: grid.h,
        interior_residual: interior,
    })
}

/// |∫|∇u|^{p−2}∇u·∇ψ + Σ_z ψ(z)·atom(z)| for ψ supported in the window,
/// relative to the largest single term.
pub fn riesz_identity_defect(mu: &MeasureEstimate, u: &ScalarField, p: &ExponentField, psi: &ScalarField) -> Result<f64> {
    let grid = &psi.grid;
    for i in 0..grid.len() {
        if psi.values[i] != 0.0 && dist(grid.nodes[i], mu.center) > mu.radius {
            return Err(Error::Precondition(format!("ψ ≠ 0 at node {i} outside the window")));
        }
    }
    let lhs = weak_pairing(u, p, psi)?;
    let rhs: f64 = mu.atoms.iter().map(|a| psi.values[a.node] * a.mass).sum();
    Ok((lhs + rhs).abs())
}

/// Hypothesis flags carried by every bound report.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypotheses {
    pub items: Vec<(String, bool)>,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    pub fn status(&self) -> &'static str {
        if self.all_hold() {
            "in-hypothesis"
        } else {
            "out-of-hypothesis"
        }
    }
}

fn hyp(items: &[(&str, bool)]) -> Hypotheses {
    Hypotheses {
        items: items.iter().map(|(s, b)| (String::from(*s), *b)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Empirical constant LHS / (RHS without the constant).
    pub constant: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub measure: f64,
    pub sup: f64,
    pub hypotheses: Hypotheses,
    /// Set when the measure vanishes but u does not.
    pub violation: bool,
}

fn sup_over(u: &ScalarField, w: Point, s: f64) -> f64 {
    u.grid
        .nodes_in_ball(w, s)
        .filter(|&i| u.grid.node_kind[i] != NodeKind::Exterior)
        .map(|i| u.values[i])
        .fold(0.0, f64::max)
}

/// Atoms within 2h of the window edge are dropped from bound checks.
fn usable_radius(mu: &MeasureEstimate, s: f64) -> Result<()> {
    if s > mu.radius - 2.0 * mu.h {
        return Err(Error::Precondition(format!(
            "ball radius {s} reaches within 2h of the measure window {}",
            mu.radius
        )));
    }
    Ok(())
}

/// μ(Δ(w,r̄))^{p⁺/(p⁻(p⁻−1))} against r̄^{(n−p⁺)/(p⁻−1)} sup_{B(w,3r̄)∩Ω} u.
pub fn upper_bound_check(mu: &MeasureEstimate, u: &ScalarField, p: &ExponentField, n: usize, r_bar: f64) -> Result<BoundReport> {
    usable_radius(mu, r_bar)?;
    let (pm, pp, nf) = (p.p_minus, p.p_plus, n as f64);
    let m = mu.mass_in(r_bar);
    let sup = sup_over(u, mu.center, 3.0 * r_bar);
    let lhs = m.max(0.0).powf(pp / (pm * (pm - 1.0)));
    let rhs = r_bar.powf((nf - pp) / (pm - 1.0)) * sup;
    if !(rhs > 0.0) {
        return Err(Error::Degenerate("right-hand side vanishes".into()));
    }
    Ok(BoundReport {
        constant: lhs / rhs,
        lhs,
        rhs,
        measure: m,
        sup,
        hypotheses: hyp(&[("p+ < n", pp < nf), ("sup u < 1", sup < 1.0), ("r < 1", r_bar < 1.0)]),
        violation: false,
    })
}

/// sup_{B(w,r̃)∩Ω} u against r̃^{p⁺(p⁻−n)/((p⁺)²−p⁻)} μ(Δ(w,r))^{p⁻/((p⁺)²−p⁻)} + r̃,
/// with r the measure window minus the 2h margin.
pub fn lower_bound_check(mu: &MeasureEstimate, u: &ScalarField, p: &ExponentField, n: usize, r_tilde: f64) -> Result<BoundReport> {
    let r = mu.radius - 2.0 * mu.h;
    usable_radius(mu, r_tilde)?;
    let (pm, pp, nf) = (p.p_minus, p.p_plus, n as f64);
    let den = pp * pp - pm;
    let m = mu.mass_in(r);
    let sup = sup_over(u, mu.center, r_tilde);
    let rhs = r_tilde.powf(pp * (pm - nf) / den) * m.max(0.0).powf(pm / den) + r_tilde;
    Ok(BoundReport {
        constant: sup / rhs,
        lhs: sup,
        rhs,
        measure: m,
        sup,
        hypotheses: hyp(&[
            ("p- > 2", pm > 2.0),
            ("p+ < n", pp < nf),
            ("sup u < 1", sup_over(u, mu.center, 3.0 * r) < 1.0),
            ("r < 1", r < 1.0),
        ]),
        violation: m <= 0.0 && sup > 0.0,
    })
}

/// Radial cutoff: 1 on B(c, r), linear to 0 on ∂B(c, 2r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub center: Point,
    pub radius: f64,
}

impl Cutoff {
    pub fn value(&self, x: Point) -> f64 {
        let d = dist(x, self.center);
        (2.0 - d / self.radius).clamp(0.0, 1.0)
    }

    pub fn grad_norm(&self, x: Point) -> f64 {
        let d = dist(x, self.center);
        if d > self.radius && d < 2.0 * self.radius {
            1.0 / self.radius
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaccioppoliReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// 2^{p⁺}.
    pub reference_constant: f64,
}

/// ∫|∇u|^p η^{p⁺} against ∫|u|^p |∇η|^p, centroid quadrature per triangle.
pub fn caccioppoli_check(u: &ScalarField, p: &ExponentField, eta: Cutoff) -> Result<CaccioppoliReport> {
    let grid = &u.grid;
    let outer = 2.0 * eta.radius;
    let b = grid.bbox;
    let c = eta.center;
    if c[0] - outer < b.lo[0] || c[0] + outer > b.hi[0] || c[1] - outer < b.lo[1] || c[1] + outer > b.hi[1] {
        return Err(Error::Precondition(format!("cutoff support B({c:?}, {outer}) leaves the grid box")));
    }
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (t, tri) in grid.cells.iter().enumerate() {
        let geo = &grid.cell_geom[t];
        let x = geo.centroid;
        let pt = p.eval(x);
        let g = u.cell_gradient(t);
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        lhs += geo.area * gn.powf(pt) * eta.value(x).powf(p.p_plus);
        let ut = (u.values[tri[0]] + u.values[tri[1]] + u.values[tri[2]]) / 3.0;
        let gq = eta.grad_norm(x);
        if gq > 0.0 {
            rhs += geo.area * ut.abs().powf(pt) * gq.powf(pt);
        }
    }
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(CaccioppoliReport {
        lhs,
        rhs,
        ratio,
        reference_constant: 2f64.powf(p.p_plus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingExponents {
    pub alpha: f64,
    pub beta: f64,
}

/// α and β without checking 2 < p⁻ ≤ p⁺ < n.
pub fn doubling_exponents_unchecked(n: usize, p_minus: f64, p_plus: f64) -> DoublingExponents {
    let (nf, pm, pp) = (n as f64, p_minus, p_plus);
    let den = pp * pp - pm;
    DoublingExponents {
        // + 0.0 turns the −0 of p⁺ = p⁻ with a negative cofactor into +0.
        alpha: (pp - pm) * (pp * (nf - pp - pm) + nf) / ((pm - 1.0) * den) + 0.0,
        beta: (den - pp * (pm - nf)) / den,
    }
}

pub fn doubling_exponents(n: usize, p_minus: f64, p_plus: f64) -> Result<DoublingExponents> {
    let nf = n as f64;
    let mut bad = Vec::new();
    if !(2.0 < p_minus) {
        bad.push(format!("2 < p- fails (p- = {p_minus})"));
    }
    if !(p_minus <= p_plus) {
        bad.push(format!("p- <= p+ fails ({p_minus} > {p_plus})"));
    }
    if !(p_plus < nf) {
        bad.push(format!("p+ < n fails (p+ = {p_plus}, n = {n})"));
    }
    if !bad.is_empty() {
        return Err(Error::Precondition(bad.join("; ")));
    }
    Ok(doubling_exponents_unchecked(n, p_minus, p_plus))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    pub mass_s: f64,
    pub mass_2s: f64,
    /// μ(Δ(w,2s))/μ(Δ(w,s)); `None` for the empty measure.
    pub ratio: Option<f64>,
    pub constant: Option<f64>,
    pub exponents: DoublingExponents,
    pub hypotheses: Hypotheses,
    /// μ(Δ(w,s)) = 0 while μ(Δ(w,2s)) > 0.
    pub violation: bool,
}

/// Empirical c in μ(2s)^{p⁺/(p⁻(p⁻−1))} ≤ c s^α (μ(s)^{p⁻/((p⁺)²−p⁻)} + s^β).
pub fn doubling_check(mu: &MeasureEstimate, p: &ExponentField, n: usize, s: f64) -> Result<DoublingReport> {
    usable_radius(mu, 2.0 * s)?;
    let (pm, pp, nf) = (p.p_minus, p.p_plus, n as f64);
    let ex = doubling_exponents_unchecked(n, pm, pp);
    let m1 = mu.mass_in(s);
    let m2 = mu.mass_in(2.0 * s);
    let hypotheses = hyp(&[("2 < p-", 2.0 < pm), ("p+ < n", pp < nf)]);
    if m1 <= 0.0 && m2 <= 0.0 {
        return Ok(DoublingReport {
            mass_s: m1,
            mass_2s: m2,
            ratio: None,
            constant: None,
            exponents: ex,
            hypotheses,
            violation: false,
        });
    }
    let lhs = m2.max(0.0).powf(pp / (pm * (pm - 1.0)));
    let rhs = s.powf(ex.alpha) * (m1.max(0.0).powf(pm / (pp * pp - pm)) + s.powf(ex.beta));
    Ok(DoublingReport {
        mass_s: m1,
        mass_2s: m2,
        ratio: (m1 > 0.0).then(|| m2 / m1),
        constant: Some(lhs / rhs),
        exponents: ex,
        hypotheses,
        violation: m1 <= 0.0,
    })
}

/// Volume of the unit ball in ℝⁿ.
pub fn omega_n(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * omega_n(n - 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_domain, DomainKind};

    fn slab_solution(p: f64, a: f64, h: f64) -> (ExponentField, ScalarField) {
        let d = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
        let pf = ExponentField::constant(p).unwrap();
        let bbox = Aabb::new([-1.0, -0.5], [1.0, 1.0]);
        let grid = Arc::new(build_grid_region(&d.region, bbox, h, FillMode::WholeBox).unwrap());
        let u = ScalarField::from_fn(grid.clone(), |x| (a * x[1]).max(0.0));
        (pf, u)
    }

    #[test]
    fn arclength_measure() {
        let (p, u) = slab_solution(2.0, 1.0, 1.0 / 40.0);
        let mu = riesz_measure(&u, &p, [0.0, 0.0], 0.9).unwrap();
        for s in [0.1, 0.2, 0.4] {
            assert!((mu.mass_in(s) - 2.0 * s).abs() < 1e-9, "{}", mu.mass_in(s));
        }
        assert!(mu.min_atom() > -1e-10);
        assert!(mu.interior_residual < 1e-12);
    }

    #[test]
    fn flux_law() {
        for (a, pe) in [(1.0, 3.0), (2.0, 3.0)] {
            let (p, u) = slab_solution(pe, a, 1.0 / 40.0);
            let mu = riesz_measure(&u, &p, [0.0, 0.0], 0.9).unwrap();
            let want = a.powf(pe - 1.0) * 0.4;
            assert!((mu.mass_in(0.2) - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn not_extended_is_rejected() {
        let (p, u) = slab_solution(2.0, 1.0, 1.0 / 20.0);
        let v = u.map(|x| x + 1.0);
        assert!(matches!(riesz_measure(&v, &p, [0.0, 0.0], 0.5), Err(Error::NotExtended(..))));
    }

    #[test]
    fn exponent_formulas() {
        let e = doubling_exponents(4, 3.0, 3.0).unwrap();
        assert_eq!(e.alpha, 0.0);
        assert!((e.beta - 1.5).abs() < 1e-12);
        let e = doubling_exponents(5, 2.5, 3.0).unwrap();
        assert!(e.alpha > 0.0 && e.beta > 0.0 && e.alpha.is_finite());
        assert!(doubling_exponents(2, 3.0, 3.0).is_err());
        assert!((omega_n(2) - PI).abs() < 1e-15);
        assert!((omega_n(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn classical_doubling() {
        let (p, u) = slab_solution(2.0, 1.0, 1.0 / 40.0);
        let mu = riesz_measure(&u, &p, [0.0, 0.0], 0.9).unwrap();
        let d = doubling_check(&mu, &p, 2, 0.2).unwrap();
        assert!((d.ratio.unwrap() - 2.0).abs() < 1e-9);
        let z = u.map(|_| 0.0);
        let mu0 = riesz_measure(&z, &p, [0.0, 0.0], 0.9).unwrap();
        assert!(doubling_check(&mu0, &p, 2, 0.2).unwrap().ratio.is_none());
    }
}
