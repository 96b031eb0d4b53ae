//! Run configuration: a single JSON document describing problems to solve
//! and the checks to run on them.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use pxharm_core::barriers::Family;
use pxharm_core::data::BoundaryData;
use pxharm_core::geometry::Domain;
use pxharm_core::mesh::max_mesh_size;
use pxharm_core::point::{dist, Aabb, Point};

use crate::parse;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    /// Seed for randomized pair samples.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub svg: bool,
    #[serde(default)]
    pub problems: Vec<Problem>,
    /// Checks that need no solved field.
    #[serde(default)]
    pub checks: Vec<StandaloneCheck>,
}

fn default_output() -> PathBuf {
    PathBuf::from("pxharm-out")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub id: String,
    pub domain: String,
    pub exponent: String,
    /// Box `[lo1, lo2, hi1, hi2]` on which p⁻, p⁺ are taken; defaults to
    /// the domain's bounding box.
    #[serde(default)]
    pub hull: Option<[f64; 4]>,
    pub data: String,
    pub h: f64,
    /// Solve on the whole box `[lo1, lo2, hi1, hi2]` with u = 0 outside Ω.
    #[serde(default)]
    pub extend: Option<[f64; 4]>,
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    /// Analytic solution to compare against (a boundary-data spelling).
    #[serde(default)]
    pub exact: Option<String>,
    /// Hard bound on the nodal max error against `exact`.
    #[serde(default)]
    pub max_error: Option<f64>,
    #[serde(default = "yes")]
    pub write_field: bool,
    #[serde(default)]
    pub checks: Vec<FieldCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldCheck {
    Harnack { center: Point, r: f64 },
    Oscillation { w: Point, r: f64, levels: usize },
    OscillationInterior { center: Point, r: f64, levels: usize },
    Holder { w: Point, r: f64, gamma: f64, pairs: usize },
    Carleson { w: Point, r: f64, c_prime: f64 },
    BoundaryDecay { w: Point, r: f64, c_tilde: f64 },
    BoundaryHarnack { w: Point, r: f64, c_tilde: f64, other: String },
    HarnackToBoundary { w: Point, r_prime: f64 },
    /// Asserts u ≥ v where v solves the same problem with data `other`.
    Comparison { other: String },
    RieszMeasure { w: Point, r: f64, radii: Vec<f64> },
    UpperBound { w: Point, r: f64, r_bar: f64 },
    LowerBound { w: Point, r: f64, r_tilde: f64 },
    Doubling { w: Point, r: f64, s: f64 },
    Caccioppoli { center: Point, radius: f64 },
}

impl FieldCheck {
    pub fn name(&self) -> &'static str {
        match self {
            FieldCheck::Harnack { .. } => "harnack",
            FieldCheck::Oscillation { .. } => "oscillation",
            FieldCheck::OscillationInterior { .. } => "oscillation_interior",
            FieldCheck::Holder { .. } => "holder",
            FieldCheck::Carleson { .. } => "carleson",
            FieldCheck::BoundaryDecay { .. } => "boundary_decay",
            FieldCheck::BoundaryHarnack { .. } => "boundary_harnack",
            FieldCheck::HarnackToBoundary { .. } => "harnack_to_boundary",
            FieldCheck::Comparison { .. } => "comparison",
            FieldCheck::RieszMeasure { .. } => "riesz_measure",
            FieldCheck::UpperBound { .. } => "upper_bound",
            FieldCheck::LowerBound { .. } => "lower_bound",
            FieldCheck::Doubling { .. } => "doubling",
            FieldCheck::Caccioppoli { .. } => "caccioppoli",
        }
    }

    /// Extra boundary data this check needs solved on the same grid.
    pub fn other_data(&self) -> Option<&str> {
        match self {
            FieldCheck::BoundaryHarnack { other, .. } | FieldCheck::Comparison { other } => Some(other),
            _ => None,
        }
    }

    fn needs_extension(&self) -> bool {
        matches!(
            self,
            FieldCheck::RieszMeasure { .. }
                | FieldCheck::UpperBound { .. }
                | FieldCheck::LowerBound { .. }
                | FieldCheck::Doubling { .. }
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StandaloneCheck {
    Barrier {
        family: String,
        exponent: String,
        #[serde(default)]
        hull: Option<[f64; 4]>,
        #[serde(default)]
        center: Point,
        /// Inner radius; defaults to min(0.1, r*).
        #[serde(default)]
        r: Option<f64>,
        #[serde(default = "one")]
        height: f64,
        /// Defaults to μ*.
        #[serde(default)]
        mu: Option<f64>,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        force: bool,
    },
    Chain { domain: String, w: Point, r: f64, x: Point, y: Point },
    Quasihyperbolic {
        domain: String,
        x: Point,
        y: Point,
        #[serde(default)]
        grid_step: Option<f64>,
    },
    Capacity {
        exponent: String,
        center: Point,
        r: f64,
        k_center: Point,
        k_radius: f64,
        h: f64,
    },
    Fatness { domain: String, exponent: String, x: Point, r: f64 },
    DoublingExponents { n: usize, p_minus: f64, p_plus: f64 },
}

fn one() -> f64 {
    1.0
}

fn default_samples() -> usize {
    10_000
}

impl StandaloneCheck {
    pub fn name(&self) -> &'static str {
        match self {
            StandaloneCheck::Barrier { .. } => "barrier",
            StandaloneCheck::Chain { .. } => "harnack_chain",
            StandaloneCheck::Quasihyperbolic { .. } => "quasihyperbolic",
            StandaloneCheck::Capacity { .. } => "capacity",
            StandaloneCheck::Fatness { .. } => "fatness",
            StandaloneCheck::DoublingExponents { .. } => "doubling_exponents",
        }
    }
}

pub fn to_aabb(b: [f64; 4]) -> Aabb {
    Aabb::new([b[0], b[1]], [b[2], b[3]])
}

impl Problem {
    pub fn domain(&self) -> Result<Domain> {
        parse::domain(&self.domain)
    }

    pub fn hull(&self, domain: &Domain) -> Aabb {
        self.hull.map(to_aabb).unwrap_or(domain.bbox)
    }

    /// Every data spelling this problem solves for, primary first, without
    /// duplicates.
    pub fn data_specs(&self) -> Vec<String> {
        let mut out = vec![self.data.clone()];
        for c in &self.checks {
            if let Some(o) = c.other_data() {
                if !out.iter().any(|d| d == o) {
                    out.push(o.to_string());
                }
            }
        }
        out
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    /// Rejects the plan before any solve if a check's window violates its
    /// preconditions.
    pub fn validate(&self) -> Result<()> {
        let mut ids = std::collections::BTreeSet::new();
        for pr in &self.problems {
            ensure!(ids.insert(pr.id.as_str()), "duplicate problem id `{}`", pr.id);
            validate_problem(pr).with_context(|| format!("problem `{}`", pr.id))?;
        }
        for (i, c) in self.checks.iter().enumerate() {
            validate_standalone(c).with_context(|| format!("check #{i} ({})", c.name()))?;
        }
        Ok(())
    }
}

fn on_boundary(d: &Domain, w: Point) -> Result<()> {
    ensure!(d.signed_dist(w).abs() <= 1e-9, "w = {w:?} is not on the boundary");
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    ensure!(v > 0.0 && v.is_finite(), "{name} = {v} must be positive");
    Ok(())
}

fn validate_problem(pr: &Problem) -> Result<()> {
    let d = pr.domain()?;
    parse::exponent(&pr.exponent, pr.hull(&d))?;
    for s in pr.data_specs() {
        BoundaryData::parse(&s)?;
    }
    if let Some(e) = &pr.exact {
        BoundaryData::parse(e)?;
    }
    if let Some(m) = &pr.method {
        parse::method(m)?;
    }
    positive("h", pr.h)?;
    let limit = max_mesh_size(&d);
    ensure!(pr.h <= limit, "h = {} exceeds the admissible mesh size {limit}", pr.h);
    let h = pr.h;
    let box_ = pr.extend.map(to_aabb).unwrap_or(d.bbox);
    let inside_box = |c: Point, rad: f64| {
        c[0] - rad >= box_.lo[0] && c[0] + rad <= box_.hi[0] && c[1] - rad >= box_.lo[1] && c[1] + rad <= box_.hi[1]
    };
    for c in &pr.checks {
        if c.needs_extension() {
            ensure!(pr.extend.is_some(), "{} needs `extend` (a whole-box solve)", c.name());
        }
        match c {
            FieldCheck::Harnack { center, r } => {
                positive("r", *r)?;
                ensure!(d.signed_dist(*center) >= *r, "B({center:?}, {r}) leaves Ω");
            }
            FieldCheck::Oscillation { w, r, levels } => {
                on_boundary(&d, *w)?;
                positive("r", *r)?;
                ensure!(*levels >= 3 && r / 8.0 >= 4.0 * h, "need three dyadic levels with ρ ≥ 4h");
            }
            FieldCheck::OscillationInterior { center, r, levels } => {
                ensure!(d.signed_dist(*center) >= *r, "B({center:?}, {r}) leaves Ω");
                ensure!(*levels >= 3 && r / 8.0 >= 4.0 * h, "need three dyadic levels with ρ ≥ 4h");
            }
            FieldCheck::Holder { w, r, gamma, pairs } => {
                on_boundary(&d, *w)?;
                positive("r", *r)?;
                ensure!(*gamma > 0.0 && *gamma <= 1.0, "γ must lie in (0, 1]");
                ensure!(*pairs > 0, "need at least one pair");
            }
            FieldCheck::Carleson { w, r, c_prime } => {
                on_boundary(&d, *w)?;
                ensure!(*c_prime >= 1.0, "c′ must be ≥ 1");
                let limit = d.regularity.r_interior / 2.0;
                ensure!(r / c_prime <= limit, "r/c′ = {} exceeds the corkscrew limit {limit}", r / c_prime);
            }
            FieldCheck::BoundaryDecay { w, r, c_tilde } | FieldCheck::BoundaryHarnack { w, r, c_tilde, .. } => {
                on_boundary(&d, *w)?;
                positive("r", *r)?;
                ensure!(*c_tilde >= 1.0, "c̃ must be ≥ 1");
                ensure!(r / c_tilde > 2.0 * h, "window r/c̃ = {} does not reach past 2h", r / c_tilde);
            }
            FieldCheck::HarnackToBoundary { w, r_prime } => {
                on_boundary(&d, *w)?;
                ensure!(*r_prime <= d.regularity.r_interior / 2.0, "r′ exceeds the corkscrew limit");
            }
            FieldCheck::Comparison { .. } => {}
            FieldCheck::RieszMeasure { w, r, radii } => {
                on_boundary(&d, *w)?;
                ensure!(inside_box(*w, *r + h), "window B(w, r) reaches the box edge");
                for s in radii {
                    ensure!(*s > 0.0 && *s <= *r, "radius {s} outside (0, r]");
                }
            }
            FieldCheck::UpperBound { w, r, r_bar } => {
                on_boundary(&d, *w)?;
                ensure!(inside_box(*w, *r + h), "window B(w, r) reaches the box edge");
                ensure!(*r_bar > 0.0 && *r_bar <= r - 2.0 * h, "r̄ must stay 2h inside the window");
            }
            FieldCheck::LowerBound { w, r, r_tilde } => {
                on_boundary(&d, *w)?;
                ensure!(inside_box(*w, *r + h), "window B(w, r) reaches the box edge");
                ensure!(*r_tilde > 0.0 && *r_tilde <= r - 2.0 * h, "r̃ must stay 2h inside the window");
            }
            FieldCheck::Doubling { w, r, s } => {
                on_boundary(&d, *w)?;
                ensure!(inside_box(*w, *r + h), "window B(w, r) reaches the box edge");
                ensure!(*s > 0.0 && 2.0 * s <= r - 2.0 * h, "2s must stay 2h inside the window");
            }
            FieldCheck::Caccioppoli { center, radius } => {
                positive("radius", *radius)?;
                ensure!(inside_box(*center, 2.0 * radius), "cutoff support leaves the grid box");
            }
        }
    }
    Ok(())
}

fn validate_standalone(c: &StandaloneCheck) -> Result<()> {
    match c {
        StandaloneCheck::Barrier {
            family,
            exponent,
            hull,
            r,
            height,
            samples,
            center,
            ..
        } => {
            if Family::parse(family).is_none() {
                bail!("unknown barrier family `{family}`");
            }
            let h = hull.map(to_aabb).unwrap_or(Aabb::square(*center, 1.0));
            parse::exponent(exponent, h)?;
            if let Some(r) = r {
                positive("r", *r)?;
            }
            positive("height", *height)?;
            ensure!(*samples > 0, "samples must be positive");
        }
        StandaloneCheck::Chain { domain, w, r, x, y } => {
            let d = parse::domain(domain)?;
            on_boundary(&d, *w)?;
            positive("r", *r)?;
            let m = d.regularity.m_uniform.value();
            for p in [x, y] {
                ensure!(d.contains(*p) && dist(*p, *w) < r / m, "{p:?} not in B(w, r/M′) ∩ Ω");
            }
        }
        StandaloneCheck::Quasihyperbolic { domain, x, y, grid_step } => {
            let d = parse::domain(domain)?;
            for p in [x, y] {
                ensure!(d.contains(*p), "{p:?} is not in Ω");
            }
            if let Some(s) = grid_step {
                positive("grid_step", *s)?;
            }
        }
        StandaloneCheck::Capacity {
            exponent,
            center,
            r,
            k_center,
            k_radius,
            h,
        } => {
            parse::exponent(exponent, Aabb::square(*center, 2.0 * r))?;
            positive("r", *r)?;
            positive("h", *h)?;
            positive("k_radius", *k_radius)?;
            ensure!(dist(*k_center, *center) + k_radius < 2.0 * r, "K is not inside B(x, 2r)");
        }
        StandaloneCheck::Fatness { domain, exponent, x, r } => {
            let d = parse::domain(domain)?;
            parse::exponent(exponent, Aabb::square(*x, 2.0 * r))?;
            ensure!(!d.contains(*x), "x must lie outside Ω");
            positive("r", *r)?;
        }
        StandaloneCheck::DoublingExponents { n, .. } => {
            ensure!(*n >= 1, "n must be positive");
        }
    }
    Ok(())
}
