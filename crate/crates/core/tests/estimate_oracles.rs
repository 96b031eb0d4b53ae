use std::sync::Arc;

use pxharm_core::data::BoundaryData;
use pxharm_core::estimates::{
    boundary_decay, boundary_harnack, carleson_check, harnack_to_boundary_exponent, oscillation_decay,
    holder_boundary_check,
};
use pxharm_core::exponent::ExponentField;
use pxharm_core::geometry::{make_domain, Domain, DomainKind};
use pxharm_core::measure::{caccioppoli_check, solve_extended, Cutoff};
use pxharm_core::mesh::{build_grid, ScalarField};
use pxharm_core::point::Aabb;
use pxharm_core::solver::{solve_dirichlet, SolveOptions};

fn drift(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn disk_pair(h: f64) -> (Domain, ScalarField, ScalarField) {
    let d = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
    let grid = Arc::new(build_grid(&d, h).unwrap());
    let p = ExponentField::affine(2.0, [0.3, 0.0]).unwrap();
    let g1 = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.6, scale: 1.0 };
    let g2 = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.4, scale: 2.0 };
    let (u, _) = solve_dirichlet(&grid, &p, |x| g1.eval(x), &SolveOptions::default()).unwrap();
    let (v, _) = solve_dirichlet(&grid, &p, |x| g2.eval(x), &SolveOptions::default()).unwrap();
    (d, u, v)
}

#[test]
fn disk_windows_are_refinement_stable() {
    let w = [1.0, 0.0];
    let (r, c_tilde) = (0.8, 6.0);
    let mut rows = Vec::new();
    for h in [1.0 / 48.0, 1.0 / 96.0] {
        let (d, u, v) = disk_pair(h);
        let du = boundary_decay(&u, &d, w, r, c_tilde).unwrap();
        let dv = boundary_decay(&v, &d, w, r, c_tilde).unwrap();
        let bh = boundary_harnack(&u, &v, &d, w, r, c_tilde).unwrap();
        let ca = carleson_check(&u, &d, w, r, 2.0).unwrap();
        let lam = harnack_to_boundary_exponent(&u, &d, w, 0.2).unwrap();
        eprintln!("h={h}: u [{}, {}] v [{}, {}] bh [{}, {}] carleson {} lambda {lam}", du.lower, du.upper, dv.lower, dv.upper, bh.ratio.lower, bh.ratio.upper, ca.ratio);
        assert!(du.lower > 0.0 && du.upper.is_finite() && dv.lower > 0.0 && dv.upper.is_finite());
        assert!(lam.is_finite());
        rows.push([du.lower, du.upper, dv.lower, dv.upper, bh.ratio.lower, bh.ratio.upper, ca.ratio]);
    }
    for (k, (a, b)) in rows[0].iter().zip(&rows[1]).enumerate() {
        let dr = drift(*a, *b);
        eprintln!("drift {k}: {dr}");
        assert!(dr <= 0.2);
    }
}

#[test]
fn linear_half_plane_field_decays_at_rate_one() {
    let d = make_domain(DomainKind::HalfPlaneSlab { height: 2.0 }).unwrap();
    let grid = Arc::new(build_grid(&d, 1.0 / 64.0).unwrap());
    let p = ExponentField::constant(2.0).unwrap();
    let (u, rep) = solve_dirichlet(&grid, &p, |x| x[1], &SolveOptions::default()).unwrap();
    assert!(rep.converged);
    let w = [0.0, 0.0];
    let fit = oscillation_decay(&u, w, 0.5, 5).unwrap();
    assert!((fit.exponent - 1.0).abs() <= 0.02, "{fit:?}");
    assert!(fit.prefactor <= 1.05);
    let pairs: Vec<_> = (1..10).map(|k| ([0.02 * k as f64, 0.03 * k as f64], [0.0, 0.3])).collect();
    let hb = holder_boundary_check(&u, w, 0.5, &pairs, 1.0).unwrap();
    assert!(hb.prefactor <= 1.05, "{hb:?}");
    let c = carleson_check(&u, &d, w, 0.5, 2.0).unwrap();
    assert!((c.ratio - 0.5).abs() <= 0.01);
}

#[test]
fn caccioppoli_ratio_is_stable() {
    let d = make_domain(DomainKind::Disk { radius: 1.0 }).unwrap();
    let p = ExponentField::affine(2.0, [0.3, 0.0]).unwrap();
    let g = BoundaryData::VanishingArc { theta0: 0.0, half_width: 0.6, scale: 1.0 };
    let eta = Cutoff { center: [1.0, 0.0], radius: 0.2 };
    let mut ratios = Vec::new();
    for h in [1.0 / 32.0, 1.0 / 64.0] {
        let (u, _) = solve_extended(&d, &p, |x| g.eval(x), Aabb::square([0.0, 0.0], 1.5), h, &SolveOptions::default()).unwrap();
        let rep = caccioppoli_check(&u, &p, eta).unwrap();
        eprintln!("caccioppoli h={h}: {rep:?}");
        assert!(rep.ratio.is_finite() && rep.ratio <= rep.reference_constant);
        ratios.push(rep.ratio);
    }
    assert!(drift(ratios[0], ratios[1]) <= 0.2);
}
