//! Config execution: one solve per (problem, data) pair, shared across that
//! problem's checks; records are merged in config order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pxharm_core::barriers::{bauman_r_star, certify, thresholds, wolanski_r_star, BarrierSpec, Family};
use pxharm_core::data::BoundaryData;
use pxharm_core::estimates::{self, oscillation_hypothesis};
use pxharm_core::exponent::ExponentField;
use pxharm_core::geometry::{fatness_ratio, harnack_chain, quasihyperbolic_distance, Domain};
use pxharm_core::measure::{self, Cutoff, Hypotheses};
use pxharm_core::mesh::{build_grid, build_grid_region, FillMode, Grid, ScalarField};
use pxharm_core::point::{dist, Aabb, Point};
use pxharm_core::solver::{check_comparison, relative_capacity, solve_dirichlet, CompactSet, SolveOptions, SolveReport};

use crate::config::{to_aabb, FieldCheck, Problem, RunConfig, StandaloneCheck};
use crate::csv;
use crate::parse;
use crate::plot;
use crate::report::{Record, Report};

/// Files produced by a run, relative to the output directory.
pub type Outputs = Vec<(String, String)>;

pub struct Solved {
    pub domain: Domain,
    pub p: ExponentField,
    pub grid: Arc<Grid>,
    pub fields: BTreeMap<String, (ScalarField, SolveReport)>,
}

pub fn solve_options(pr: &Problem) -> Result<SolveOptions> {
    let mut o = SolveOptions::default();
    if let Some(m) = &pr.method {
        o.method = parse::method(m)?;
    }
    o.tol = pr.tol;
    Ok(o)
}

pub fn solve_problem(pr: &Problem) -> Result<Solved> {
    let domain = pr.domain()?;
    let p = parse::exponent(&pr.exponent, pr.hull(&domain))?;
    let grid = Arc::new(match pr.extend {
        Some(b) => build_grid_region(&domain.region, to_aabb(b), pr.h, FillMode::WholeBox)?,
        None => build_grid(&domain, pr.h)?,
    });
    let opts = solve_options(pr)?;
    let specs = pr.data_specs();
    let solved: Vec<(String, (ScalarField, SolveReport))> = specs
        .par_iter()
        .map(|s| -> Result<_> {
            let g = BoundaryData::parse(s)?;
            let out = solve_dirichlet(&grid, &p, |x| g.eval(x), &opts)?;
            Ok((s.clone(), out))
        })
        .collect::<Result<_>>()?;
    Ok(Solved {
        domain,
        p,
        grid,
        fields: solved.into_iter().collect(),
    })
}

fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn hyp_status(h: &Hypotheses) -> String {
    let failed: Vec<&str> = h.items.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect();
    if failed.is_empty() {
        "in-hypothesis".into()
    } else {
        format!("out-of-hypothesis: {}", failed.join(", "))
    }
}

fn ball_condition(d: &Domain) -> String {
    if d.regularity.r_ball > 0.0 {
        "in-hypothesis".into()
    } else {
        "out-of-hypothesis: no uniform ball condition".into()
    }
}

/// Pairs in B(w, r) at depth ≥ h, for Hölder checks.
fn sample_pairs(d: &Domain, w: Point, r: f64, h: f64, n: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = || loop {
        let p = [w[0] + rng.gen_range(-r..r), w[1] + rng.gen_range(-r..r)];
        if dist(p, w) < r && d.signed_dist(p) > h {
            return p;
        }
    };
    (0..n).map(|_| (pick(), pick())).collect()
}

fn problem_records(cfg: &RunConfig, pr: &Problem, s: &Solved, files: &mut Outputs) -> Vec<Record> {
    let mut out = Vec::new();
    let h = pr.h;
    let (u, rep) = &s.fields[&pr.data];
    let stem = file_stem(&pr.id);

    let mut r = Record::new("solve", "dirichlet-solver")
        .problem(&pr.id)
        .h(h)
        .hypothesis("in-hypothesis")
        .with("data", &pr.data)
        .with("nodes", s.grid.len())
        .with("cells", s.grid.cells.len())
        .with("energy", rep.energy)
        .with("residual", rep.residual_norm)
        .with("tol", rep.tol)
        .with("iterations", rep.iterations)
        .with("fallback_steps", rep.fallback_steps)
        .with("method", parse::method_name(rep.method))
        .with("p_minus", s.p.p_minus)
        .with("p_plus", s.p.p_plus);
    r.assert(rep.converged, "solver did not reach tolerance");
    if let Some(e) = &pr.exact {
        if let Ok(g) = BoundaryData::parse(e) {
            // Exterior nodes of a whole-box grid carry the zero extension.
            let exact = |x: Point| if s.domain.contains(x) || s.domain.signed_dist(x) == 0.0 { g.eval(x) } else { 0.0 };
            let err = u.max_abs_diff(exact);
            let (l2, norm) = u.l2_error(exact);
            r.set("max_error", err);
            r.set("relative_l2_error", l2 / norm);
            if let Some(m) = pr.max_error {
                r.assert(err <= m, "max error above bound");
            }
        }
    }
    out.push(r);
    if pr.write_field {
        for (name, (f, _)) in &s.fields {
            let base = format!("field_{stem}_{}", file_stem(name));
            let text = csv::field_csv(f);
            if cfg.svg {
                if let Ok(svg) = plot::plot_csv(&text) {
                    files.push((format!("{base}.svg"), svg));
                }
            }
            files.push((format!("{base}.csv"), text));
        }
    }

    for (i, c) in pr.checks.iter().enumerate() {
        let rec = field_check(cfg, pr, s, u, c, i, files)
            .unwrap_or_else(|e| Record::failed(c.name(), "check-error", format!("{e:#}")))
            .problem(&pr.id)
            .h(h);
        out.push(rec);
    }
    out
}

fn field_check(
    cfg: &RunConfig,
    pr: &Problem,
    s: &Solved,
    u: &ScalarField,
    c: &FieldCheck,
    index: usize,
    files: &mut Outputs,
) -> Result<Record> {
    let d = &s.domain;
    let p = &s.p;
    let stem = format!("{}_{index}", file_stem(&pr.id));
    let other = |name: &str| -> &ScalarField { &s.fields[name].0 };
    Ok(match c {
        FieldCheck::Harnack { center, r } => {
            let k = estimates::harnack_constant(u, d, *center, *r)?;
            Record::new(c.name(), "interior-harnack")
                .window(*center, *r)
                .hypothesis("in-hypothesis")
                .with("constant", k)
        }
        FieldCheck::Oscillation { w, r, levels } | FieldCheck::OscillationInterior { center: w, r, levels } => {
            let interior = matches!(c, FieldCheck::OscillationInterior { .. });
            let fit = if interior {
                estimates::oscillation_decay_interior(u, d, *w, *r, *levels)?
            } else {
                estimates::oscillation_decay(u, *w, *r, *levels)?
            };
            let text = csv::profile_csv(&fit.radii, &fit.values);
            if cfg.svg {
                files.push((format!("profile_{stem}.svg"), plot::plot_csv(&text)?));
            }
            files.push((format!("profile_{stem}.csv"), text));
            let tag = if interior { "interior-oscillation-decay" } else { "boundary-oscillation-decay" };
            Record::new(c.name(), tag)
                .window(*w, *r)
                .hypothesis(if interior {
                    "in-hypothesis".to_string()
                } else {
                    match oscillation_hypothesis(p, 2) {
                        s if s.starts_with("violated") => format!("out-of-hypothesis: {}", &s[10..]),
                        s => format!("in-hypothesis ({s})"),
                    }
                })
                .with("exponent", fit.exponent)
                .with("prefactor", fit.prefactor)
                .with("residual", fit.residual)
                .with("exponent_in_range", fit.exponent_in_range)
                .with("radii", &fit.radii)
                .with("values", &fit.values)
        }
        FieldCheck::Holder { w, r, gamma, pairs } => {
            let ps = sample_pairs(d, *w, *r, pr.h, *pairs, cfg.seed ^ index as u64);
            let fit = estimates::holder_boundary_check(u, *w, *r, &ps, *gamma)?;
            Record::new(c.name(), "boundary-holder")
                .window(*w, 2.0 * r)
                .hypothesis(ball_condition(d))
                .with("gamma", gamma)
                .with("constant", fit.prefactor)
                .with("pairs", fit.radii.len())
        }
        FieldCheck::Carleson { w, r, c_prime } => {
            let rep = estimates::carleson_check(u, d, *w, *r, *c_prime)?;
            Record::new(c.name(), "carleson-estimate")
                .window(*w, rep.r_prime)
                .hypothesis(ball_condition(d))
                .with("ratio", rep.ratio)
                .with("sup", rep.sup)
                .with("corkscrew", rep.corkscrew)
                .with("corkscrew_value", rep.corkscrew_value)
        }
        FieldCheck::BoundaryDecay { w, r, c_tilde } => {
            let rep = estimates::boundary_decay(u, d, *w, *r, *c_tilde)?;
            let mut rec = Record::new(c.name(), "boundary-decay")
                .window(*w, rep.window_radius)
                .hypothesis(ball_condition(d))
                .with("lower", rep.lower)
                .with("upper", rep.upper)
                .with("nodes", rep.nodes);
            rec.assert(rep.lower > 0.0 && rep.upper.is_finite(), "ratio bounds not in (0, ∞)");
            rec
        }
        FieldCheck::BoundaryHarnack { w, r, c_tilde, other: o } => {
            let rep = estimates::boundary_harnack(u, other(o), d, *w, *r, *c_tilde)?;
            let mut rec = Record::new(c.name(), "boundary-harnack")
                .window(*w, rep.ratio.window_radius)
                .hypothesis(ball_condition(d))
                .with("other", o)
                .with("lower", rep.ratio.lower)
                .with("upper", rep.ratio.upper)
                .with("four_point", rep.four_point);
            rec.assert(rep.ratio.lower > 0.0 && rep.ratio.upper.is_finite(), "ratio bounds not in (0, ∞)");
            rec
        }
        FieldCheck::HarnackToBoundary { w, r_prime } => {
            let lam = estimates::harnack_to_boundary_exponent(u, d, *w, *r_prime)?;
            Record::new(c.name(), "harnack-to-boundary")
                .window(*w, 2.0 * r_prime)
                .hypothesis("in-hypothesis")
                .with("lambda", lam)
        }
        FieldCheck::Comparison { other: o } => {
            let rep = check_comparison(u, other(o), 1e-8)?;
            let mut rec = Record::new(c.name(), "comparison-principle")
                .hypothesis("in-hypothesis")
                .with("other", o)
                .with("min_diff", rep.min_diff)
                .with("argmin", rep.argmin);
            rec.assert(!rep.violated, "u − v < −tol somewhere");
            rec
        }
        FieldCheck::RieszMeasure { w, r, radii } => {
            let mu = measure::riesz_measure(u, p, *w, *r)?;
            let psi = ScalarField::from_fn(u.grid.clone(), |x| (1.0 - dist(x, *w) / r).max(0.0) * 0.999);
            let defect = measure::riesz_identity_defect(&mu, u, p, &psi)?;
            let masses: Vec<f64> = radii.iter().map(|&s| mu.mass_in(s)).collect();
            files.push((format!("measure_{stem}.csv"), csv::measure_csv(&mu)));
            let mut rec = Record::new(c.name(), "riesz-measure")
                .window(*w, *r)
                .hypothesis("in-hypothesis")
                .with("total", mu.total)
                .with("min_atom", mu.min_atom())
                .with("radii", radii)
                .with("masses", &masses)
                .with("identity_defect", defect)
                .with("interior_residual", mu.interior_residual);
            rec.assert(mu.min_atom() >= -1e-10, "negative atom");
            rec.assert(defect <= 1e-10, "discrete Riesz identity defect above 1e-10");
            rec
        }
        FieldCheck::UpperBound { w, r, r_bar } => {
            let mu = measure::riesz_measure(u, p, *w, *r)?;
            let rep = measure::upper_bound_check(&mu, u, p, 2, *r_bar)?;
            bound_record(c.name(), "measure-growth-upper", *w, *r, &rep)
        }
        FieldCheck::LowerBound { w, r, r_tilde } => {
            let mu = measure::riesz_measure(u, p, *w, *r)?;
            let rep = measure::lower_bound_check(&mu, u, p, 2, *r_tilde)?;
            bound_record(c.name(), "measure-growth-lower", *w, *r, &rep)
        }
        FieldCheck::Doubling { w, r, s: rad } => {
            let mu = measure::riesz_measure(u, p, *w, *r)?;
            let rep = measure::doubling_check(&mu, p, 2, *rad)?;
            let mut rec = Record::new(c.name(), "measure-doubling")
                .window(*w, *r)
                .hypothesis(hyp_status(&rep.hypotheses))
                .with("s", rad)
                .with("mass_s", rep.mass_s)
                .with("mass_2s", rep.mass_2s)
                .with("ratio", rep.ratio)
                .with("constant", rep.constant)
                .with("alpha", rep.exponents.alpha)
                .with("beta", rep.exponents.beta);
            if rep.ratio.is_none() && rep.constant.is_none() {
                rec.set("note", "empty measure");
            }
            rec.assert(!rep.violation, "μ(Δ(w,s)) = 0 while μ(Δ(w,2s)) > 0");
            rec
        }
        FieldCheck::Caccioppoli { center, radius } => {
            let rep = measure::caccioppoli_check(u, p, Cutoff { center: *center, radius: *radius })?;
            let mut rec = Record::new(c.name(), "caccioppoli")
                .window(*center, 2.0 * radius)
                .hypothesis("in-hypothesis")
                .with("lhs", rep.lhs)
                .with("rhs", rep.rhs)
                .with("ratio", rep.ratio)
                .with("reference_constant", rep.reference_constant);
            rec.assert(rep.ratio.is_finite(), "ratio not finite");
            rec
        }
    })
}

fn bound_record(name: &str, tag: &'static str, w: Point, r: f64, rep: &measure::BoundReport) -> Record {
    let mut rec = Record::new(name, tag)
        .window(w, r)
        .hypothesis(hyp_status(&rep.hypotheses))
        .with("constant", rep.constant)
        .with("lhs", rep.lhs)
        .with("rhs", rep.rhs)
        .with("measure", rep.measure)
        .with("sup", rep.sup);
    rec.assert(!rep.violation, "zero measure with nonzero supremum");
    rec
}

pub fn barrier_defaults(
    family: Family,
    p: &ExponentField,
    height: f64,
    r: Option<f64>,
    mu: Option<f64>,
) -> Result<(f64, f64)> {
    let r_star = if family.is_wolanski() {
        wolanski_r_star(p)
    } else {
        bauman_r_star(p, height, 2)
    };
    let r = r.unwrap_or(0.1f64.min(r_star));
    let mu = match mu {
        Some(m) => m,
        None => thresholds(family, p, height, r, 2)?.0,
    };
    Ok((r, mu))
}

fn standalone_record(c: &StandaloneCheck, index: usize, files: &mut Outputs) -> Result<Record> {
    Ok(match c {
        StandaloneCheck::Barrier {
            family,
            exponent,
            hull,
            center,
            r,
            height,
            mu,
            samples,
            force,
        } => {
            let fam = Family::parse(family).context("unknown family")?;
            let p = parse::exponent(exponent, hull.map(to_aabb).unwrap_or(Aabb::square(*center, 1.0)))?;
            let (r, mu) = barrier_defaults(fam, &p, *height, *r, *mu)?;
            let spec = BarrierSpec {
                family: fam,
                center: *center,
                radius: r,
                height: *height,
                mu,
            };
            let cert = certify(&spec, &p, 2, *samples, *force)?;
            files.push((format!("barrier_{index}.csv"), csv::samples_csv(&cert.values)));
            let mut rec = certification_record(&cert);
            rec.assert(cert.passed, "operator has the wrong sign at a sample");
            rec.assert(cert.boundary_error <= 1e-12, "boundary values off");
            rec
        }
        StandaloneCheck::Chain { domain, w, r, x, y } => {
            let d = parse::domain(domain)?;
            let ch = harnack_chain(&d, *w, *r, *x, *y)?;
            let mut rec = Record::new(c.name(), "harnack-chain")
                .window(*w, *r)
                .hypothesis(if d.regularity.m_uniform.is_empirical() {
                    "in-hypothesis (empirical uniform constant)"
                } else {
                    "in-hypothesis"
                })
                .with("count", ch.count)
                .with("k", ch.k)
                .with("n_bound", ch.n_bound)
                .with("m_uniform", ch.m_uniform);
            rec.assert(ch.consecutive_intersect(), "consecutive balls disjoint");
            rec.assert(ch.doubled_inside(&d), "doubled ball leaves Ω ∩ B(w, 4r)");
            rec.assert(ch.count_within_k(), "N > 3k + 1");
            rec.assert(ch.within_n_est(), "N exceeds 9M² + 3M log(d(y)/d(x))");
            rec
        }
        StandaloneCheck::Quasihyperbolic { domain, x, y, grid_step } => {
            let d = parse::domain(domain)?;
            let step = grid_step.unwrap_or(d.signed_dist(*x).min(d.signed_dist(*y)) / 10.0);
            let k = quasihyperbolic_distance(&d, *x, *y, step)?;
            let k_rev = quasihyperbolic_distance(&d, *y, *x, step)?;
            let mut rec = Record::new(c.name(), "quasihyperbolic-distance")
                .hypothesis("in-hypothesis")
                .with("k", k)
                .with("grid_step", step);
            rec.assert((k - k_rev).abs() <= 1e-9, "asymmetric distance");
            rec
        }
        StandaloneCheck::Capacity {
            exponent,
            center,
            r,
            k_center,
            k_radius,
            h,
        } => {
            let p = parse::exponent(exponent, Aabb::square(*center, 2.0 * r))?;
            let k = CompactSet::ClosedBall {
                center: *k_center,
                radius: *k_radius,
            };
            let rep = relative_capacity(&k, *center, *r, &p, *h, &SolveOptions::default())?;
            let mut rec = Record::new(c.name(), "relative-capacity")
                .window(*center, 2.0 * r)
                .h(*h)
                .hypothesis("in-hypothesis")
                .with("value", rep.value)
                .with("k_nodes", rep.k_nodes);
            rec.assert(rep.value.is_finite() && rep.value > 0.0 && rep.solve.converged, "capacity solve failed");
            rec
        }
        StandaloneCheck::Fatness { domain, exponent, x, r } => {
            let d = parse::domain(domain)?;
            let p = parse::exponent(exponent, Aabb::square(*x, 2.0 * r))?;
            let v = fatness_ratio(&d, &p, *x, *r)?;
            let mut rec = Record::new(c.name(), "uniform-fatness")
                .window(*x, *r)
                .hypothesis("in-hypothesis")
                .with("ratio", v);
            rec.assert(v > 0.0, "zero fatness ratio");
            rec
        }
        StandaloneCheck::DoublingExponents { n, p_minus, p_plus } => {
            let e = measure::doubling_exponents_unchecked(*n, *p_minus, *p_plus);
            let checked = measure::doubling_exponents(*n, *p_minus, *p_plus);
            let mut rec = Record::new(c.name(), "doubling-exponents")
                .hypothesis(match &checked {
                    Ok(_) => "in-hypothesis".to_string(),
                    Err(e) => format!("out-of-hypothesis: {e}"),
                })
                .with("alpha", e.alpha)
                .with("beta", e.beta);
            if p_minus == p_plus {
                rec.assert(e.alpha == 0.0, "α ≠ 0 at p⁺ = p⁻");
            }
            rec
        }
    })
}

pub fn certification_record(cert: &pxharm_core::barriers::Certification) -> Record {
    let tag = if cert.family.is_wolanski() { "barrier-wolanski" } else { "barrier-bauman" };
    Record::new("barrier", tag)
        .hypothesis(if cert.guaranteed {
            "in-hypothesis"
        } else {
            "out-of-hypothesis: forced outside (μ ≥ μ*, r ≤ r*)"
        })
        .with("family", cert.family.name())
        .with("mu", cert.mu)
        .with("mu_star", cert.mu_star)
        .with("r", cert.r)
        .with("r_star", cert.r_star)
        .with("worst_sign", cert.worst_sign)
        .with("samples", cert.samples)
        .with("slack", cert.slack)
        .with("boundary_error", cert.boundary_error)
        .with("max_abs_log_grad", cert.max_abs_log_grad)
        .with("log_envelope", cert.log_envelope)
}

/// Runs every problem and check; nothing is written.
pub fn execute(cfg: &RunConfig) -> Result<(Report, Outputs)> {
    cfg.validate()?;
    let solved: Vec<Result<Solved>> = cfg.problems.par_iter().map(solve_problem).collect();
    let per_problem: Vec<(Vec<Record>, Outputs)> = cfg
        .problems
        .par_iter()
        .zip(solved)
        .map(|(pr, s)| {
            let mut files = Vec::new();
            let recs = match s {
                Ok(s) => problem_records(cfg, pr, &s, &mut files),
                Err(e) => vec![Record::failed("solve", "dirichlet-solver", format!("{e:#}")).problem(&pr.id).h(pr.h)],
            };
            (recs, files)
        })
        .collect();
    let standalone: Vec<(Record, Outputs)> = cfg
        .checks
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut files = Vec::new();
            let rec = standalone_record(c, i, &mut files)
                .unwrap_or_else(|e| Record::failed(c.name(), "check-error", format!("{e:#}")));
            (rec, files)
        })
        .collect();
    let mut records = Vec::new();
    let mut files = Vec::new();
    for (r, f) in per_problem {
        records.extend(r);
        files.extend(f);
    }
    for (r, f) in standalone {
        records.push(r);
        files.extend(f);
    }
    Ok((Report::new(&cfg.name, cfg.seed, records), files))
}

/// Executes and writes `report.json` plus all CSV/SVG outputs.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let (report, files) = execute(cfg)?;
    write_outputs(&cfg.output_dir, &report, &files)?;
    Ok(report)
}

pub fn write_outputs(dir: &Path, report: &Report, files: &Outputs) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text).with_context(|| format!("writing {name}"))?;
    }
    let path = dir.join("report.json");
    std::fs::write(&path, report.to_json()).context("writing report.json")?;
    Ok(path)
}
