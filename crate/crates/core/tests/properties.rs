//! Property suites for the invariants of each module.

use std::sync::Arc;
use std::f64::consts::TAU;

use proptest::prelude::*;
use pxharm_core::barriers::{certify, BarrierSpec, Family};
use pxharm_core::data::BoundaryData;
use pxharm_core::estimates::{boundary_decay, boundary_harnack};
use pxharm_core::exponent::{luxemburg_norm, luxemburg_raw, modular, modular_raw, ExponentField, ExponentKind};
use pxharm_core::geometry::{harnack_chain, make_domain, quasihyperbolic_distance, Domain, DomainKind};
use pxharm_core::measure::{riesz_identity_defect, riesz_measure, solve_extended};
use pxharm_core::mesh::{build_grid, Grid, ScalarField};
use pxharm_core::point::{add, dist, scale, Aabb};
use pxharm_core::solver::{check_comparison, solve_dirichlet, strong_operator, SolveOptions};

fn disk() -> Domain {
    make_domain(DomainKind::Disk { radius: 1.0 }).unwrap()
}

fn slab() -> Domain {
    make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap()
}

fn square_grid(h: f64) -> Arc<Grid> {
    Arc::new(build_grid(&make_domain(DomainKind::Square { side: 1.0 }).unwrap(), h).unwrap())
}

/// affine(2, (0.5, 0)) checked on [−1, 1]², where p⁻ = 1.5.
fn affine() -> ExponentField {
    let hull = Aabb::new([-1.0, -1.0], [1.0, 1.0]);
    ExponentField::with_hull(ExponentKind::Affine { p0: 2.0, a: [0.5, 0.0] }, hull).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_ball_and_bracket(vals in prop::collection::vec(-3.0f64..3.0, 81), p0 in 1.9f64..4.0, ax in -0.4f64..0.4) {
        let grid = square_grid(1.0 / 8.0);
        let p = ExponentField::affine(p0, [ax, 0.0]).unwrap();
        let u = ScalarField::new(grid, vals).unwrap();
        let rho = modular(&u, &p);
        let norm = luxemburg_norm(&u, &p);
        if rho <= 1.0 {
            prop_assert!(norm <= 1.0 + 1e-9);
        }
        if rho > 0.0 {
            let a = rho.powf(1.0 / p.p_minus);
            let b = rho.powf(1.0 / p.p_plus);
            prop_assert!(norm >= a.min(b) * (1.0 - 1e-9));
            prop_assert!(norm <= a.max(b) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn constant_exponent_is_lebesgue(vals in prop::collection::vec(-2.0f64..2.0, 81), q in 1.1f64..6.0) {
        let grid = square_grid(1.0 / 8.0);
        let p = ExponentField::constant(q).unwrap();
        let u = ScalarField::new(grid, vals).unwrap();
        let lq = modular(&u, &p).powf(1.0 / q);
        prop_assert!((luxemburg_norm(&u, &p) - lq).abs() <= 1e-10 * lq.max(1e-300));
    }

    #[test]
    fn holder_inequality(
        f in prop::collection::vec(0.0f64..2.0, 30),
        g in prop::collection::vec(0.0f64..2.0, 30),
        exps in prop::collection::vec(1.2f64..5.0, 30),
        w in prop::collection::vec(0.01f64..0.1, 30),
    ) {
        let conj: Vec<f64> = exps.iter().map(|p| p / (p - 1.0)).collect();
        let lhs: f64 = f.iter().zip(&g).zip(&w).map(|((a, b), c)| a * b * c).sum();
        let rhs = 2.0 * luxemburg_raw(&f, &w, &exps) * luxemburg_raw(&g, &w, &conj);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
        prop_assert!(modular_raw(&f, &w, &exps) >= 0.0);
    }

    #[test]
    fn disk_normal_distance(theta in 0.0f64..TAU, t in 0.0f64..1.0) {
        let d = disk();
        let w = [theta.cos(), theta.sin()];
        let x = add(w, scale(d.inward_normal(w), t));
        prop_assert!((d.signed_dist(x) - t).abs() < 1e-12);
    }

    #[test]
    fn corkscrew_nta(theta in 0.0f64..TAU, r in 0.001f64..0.5) {
        let d = disk();
        let w = [theta.cos(), theta.sin()];
        let a = d.corkscrew(w, r).unwrap();
        let m = d.regularity.m_uniform.value();
        prop_assert!(r / m < dist(a, w) && dist(a, w) <= r * (1.0 + 1e-12));
        prop_assert!(d.signed_dist(a) > r / m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quasihyperbolic_metric(
        a in (-0.5f64..0.5, 0.2f64..0.8),
        b in (-0.5f64..0.5, 0.2f64..0.8),
        c in (-0.5f64..0.5, 0.2f64..0.8),
    ) {
        let d = slab();
        let (a, b, c) = ([a.0, a.1], [b.0, b.1], [c.0, c.1]);
        let step = 0.02;
        let ab = quasihyperbolic_distance(&d, a, b, step).unwrap();
        let ba = quasihyperbolic_distance(&d, b, a, step).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9);
        let ac = quasihyperbolic_distance(&d, a, c, step).unwrap();
        let cb = quasihyperbolic_distance(&d, c, b, step).unwrap();
        // Discretization slack: one lattice cell at each junction.
        prop_assert!(ab <= ac + cb + 0.05, "{ab} > {ac} + {cb}");
    }

    #[test]
    fn chains_satisfy_their_invariants(
        theta in 0.0f64..TAU, s in (0.1f64..0.95, 0.1f64..0.95), phi in (-1.0f64..1.0, -1.0f64..1.0)
    ) {
        let d = disk();
        let w = [theta.cos(), theta.sin()];
        let r = 0.8;
        let rad = r / d.regularity.m_uniform.value();
        let n = d.inward_normal(w);
        let t = [-n[1], n[0]];
        let pt = |depth: f64, side: f64| add(w, add(scale(n, depth * rad * 0.7), scale(t, side * rad * 0.5)));
        let (x, y) = (pt(s.0, phi.0), pt(s.1, phi.1));
        prop_assume!(dist(x, w) < rad && dist(y, w) < rad && d.contains(x) && d.contains(y));
        let c = harnack_chain(&d, w, r, x, y).unwrap();
        prop_assert!(c.consecutive_intersect());
        prop_assert!(c.doubled_inside(&d));
        prop_assert!(c.count_within_k());
        prop_assert!(c.within_n_est());
    }

    #[test]
    fn solver_descent_and_maximum_principle(seed in 0u64..1000) {
        let grid = square_grid(1.0 / 16.0);
        let g = BoundaryData::random_smooth(seed, 4);
        let p = affine();
        let (u, rep) = solve_dirichlet(&grid, &p, |x| g.eval(x), &SolveOptions::default()).unwrap();
        prop_assert!(rep.converged);
        prop_assert!(rep.energy_history.windows(2).all(|e| e[1] <= e[0] * (1.0 + 1e-12)));
        prop_assert!(rep.energy <= rep.energy_history[0]);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..grid.len() {
            if grid.is_pinned(i) {
                lo = lo.min(u.values[i]);
                hi = hi.max(u.values[i]);
            }
        }
        for i in 0..grid.len() {
            prop_assert!(u.values[i] >= lo - rep.tol && u.values[i] <= hi + rep.tol);
        }
    }

    #[test]
    fn comparison_of_ordered_data(seed in 0u64..1000, shift in 0.0f64..0.5) {
        let grid = square_grid(1.0 / 16.0);
        let g = BoundaryData::random_smooth(seed, 4);
        let p = affine();
        let opts = SolveOptions { tol: Some(1e-11), ..Default::default() };
        let (u1, _) = solve_dirichlet(&grid, &p, |x| g.eval(x) + shift, &opts).unwrap();
        let (u2, _) = solve_dirichlet(&grid, &p, |x| g.eval(x), &opts).unwrap();
        let rep = check_comparison(&u1, &u2, 1e-8).unwrap();
        prop_assert!(!rep.violated && rep.min_diff >= -1e-8);
    }

    #[test]
    fn barrier_derivatives_match_differences(
        family in 0usize..4, mu in 1.0f64..4.0, rho in 1.05f64..1.95, theta in 0.0f64..TAU
    ) {
        let family = [Family::WolanskiSuper, Family::WolanskiSub, Family::BaumanSuper, Family::BaumanSub][family];
        let spec = BarrierSpec { family, center: [0.3, -0.2], radius: 0.1, height: 1.0, mu };
        let x = add(spec.center, [0.1 * rho * theta.cos(), 0.1 * rho * theta.sin()]);
        let j = spec.jet(x, 2).unwrap();
        let h = 1e-3 * spec.radius;
        let f = |dx: f64, dy: f64| spec.jet(add(x, [dx, dy]), 2).unwrap().value;
        // Fourth-order central differences.
        let d1 = |e: [f64; 2]| {
            (-f(2.0 * h * e[0], 2.0 * h * e[1]) + 8.0 * f(h * e[0], h * e[1]) - 8.0 * f(-h * e[0], -h * e[1])
                + f(-2.0 * h * e[0], -2.0 * h * e[1])) / (12.0 * h)
        };
        let d2 = |e: [f64; 2]| {
            (-f(2.0 * h * e[0], 2.0 * h * e[1]) + 16.0 * f(h * e[0], h * e[1]) - 30.0 * f(0.0, 0.0)
                + 16.0 * f(-h * e[0], -h * e[1]) - f(-2.0 * h * e[0], -2.0 * h * e[1])) / (12.0 * h * h)
        };
        let scale_g = j.grad_norm().max(1e-3);
        prop_assert!((d1([1.0, 0.0]) - j.grad[0]).abs() <= 1e-6 * scale_g);
        prop_assert!((d1([0.0, 1.0]) - j.grad[1]).abs() <= 1e-6 * scale_g);
        let lap = d2([1.0, 0.0]) + d2([0.0, 1.0]);
        let scale_h = j.laplacian.abs().max(j.hess[0][0].abs()).max(1.0 / spec.radius);
        prop_assert!((lap - j.laplacian).abs() <= 1e-4 * scale_h, "{lap} vs {}", j.laplacian);
        let g = j.grad;
        let n = j.grad_norm();
        let e = [g[0] / n, g[1] / n];
        let inf_fd = d2(e) * n * n;
        prop_assert!((inf_fd - j.infinity_laplacian()).abs() <= 1e-4 * scale_h * n * n);
        prop_assert!(strong_operator(&j, &ExponentField::constant(2.0).unwrap(), x).is_ok());
    }

    #[test]
    fn admissibility_is_monotone_in_mu(q in 1.5f64..4.0, mu in 1.0f64..3.0, extra in 0.0f64..3.0, fam in 0usize..4) {
        let family = [Family::WolanskiSuper, Family::WolanskiSub, Family::BaumanSuper, Family::BaumanSub][fam];
        let p = ExponentField::constant(q).unwrap();
        let spec = |mu| BarrierSpec { family, center: [0.0, 0.0], radius: 0.1, height: 1.0, mu };
        let c1 = certify(&spec(mu), &p, 2, 400, true).unwrap();
        if c1.passed && c1.slack >= 0.0 {
            let c2 = certify(&spec(mu + extra), &p, 2, 400, true).unwrap();
            prop_assert!(c2.slack >= 0.0 && c2.passed);
        }
        if family.is_wolanski() {
            prop_assert!(c1.max_abs_log_grad <= c1.log_envelope.unwrap());
        }
    }
}

fn disk_fields(h: f64) -> (Domain, ScalarField, ScalarField) {
    let d = disk();
    let grid = Arc::new(build_grid(&d, h).unwrap());
    let p = ExponentField::affine(2.0, [0.3, 0.0]).unwrap();
    let g1 = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.6, scale: 1.0 };
    let g2 = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.4, scale: 2.0 };
    let (u, _) = solve_dirichlet(&grid, &p, |x| g1.eval(x), &SolveOptions::default()).unwrap();
    let (v, _) = solve_dirichlet(&grid, &p, |x| g2.eval(x), &SolveOptions::default()).unwrap();
    (d, u, v)
}

#[test]
fn ratio_reports_are_consistent() {
    let (d, u, v) = disk_fields(1.0 / 32.0);
    let w = [1.0, 0.0];
    for c_tilde in [2.0, 3.0, 4.0] {
        let du = boundary_decay(&u, &d, w, 0.8, c_tilde).unwrap();
        let dv = boundary_decay(&v, &d, w, 0.8, c_tilde).unwrap();
        let uv = boundary_harnack(&u, &v, &d, w, 0.8, c_tilde).unwrap();
        let vu = boundary_harnack(&v, &u, &d, w, 0.8, c_tilde).unwrap();
        assert!(uv.ratio.upper <= du.upper / dv.lower);
        assert!(uv.ratio.lower >= du.lower / dv.upper);
        assert!((vu.ratio.lower - 1.0 / uv.ratio.upper).abs() <= 1e-14 * vu.ratio.lower);
        assert!((vu.ratio.upper - 1.0 / uv.ratio.lower).abs() <= 1e-14 * vu.ratio.upper);
    }
    // Shrinking the window never widens the spread.
    let mut last = f64::INFINITY;
    for c_tilde in [2.0, 3.0, 4.0, 6.0] {
        let r = boundary_decay(&u, &d, w, 0.8, c_tilde).unwrap();
        assert!(r.upper - r.lower <= last);
        last = r.upper - r.lower;
    }
}

#[test]
fn measure_identity_additivity_and_sign() {
    let d = disk();
    let p = ExponentField::affine(2.0, [0.3, 0.0]).unwrap();
    let g = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.6, scale: 1.0 };
    let bbox = Aabb::square([0.0, 0.0], 1.25);
    let opts = SolveOptions { tol: Some(1e-12), ..Default::default() };
    let (u, rep) = solve_extended(&d, &p, |x| g.eval(x), bbox, 1.0 / 32.0, &opts).unwrap();
    assert!(rep.converged);
    let w = [1.0, 0.0];
    let mu = riesz_measure(&u, &p, w, 0.5).unwrap();
    assert!(mu.min_atom() >= -1e-10, "{}", mu.min_atom());
    assert!(mu.total > 0.0);
    for (s1, s2) in [(0.1, 0.2), (0.15, 0.4), (0.05, 0.3)] {
        let lhs = mu.mass_in(s1) + mu.mass_between(s1, s2);
        assert!((lhs - mu.mass_in(s2)).abs() <= 1e-14 * mu.total);
    }
    // Identity against a few test fields supported in the window.
    for k in 0..5 {
        let psi = ScalarField::from_fn(u.grid.clone(), |x| {
            let t = 1.0 - dist(x, w) / 0.45;
            if t > 0.0 { t * (1.0 + 0.3 * k as f64 * x[1]) } else { 0.0 }
        });
        assert!(riesz_identity_defect(&mu, &u, &p, &psi).unwrap() <= 1e-10);
    }
}
