//! Command-line spellings of domains, exponents and solver methods.

use anyhow::{anyhow, bail, Context, Result};
use pxharm_core::exponent::{ExponentField, ExponentKind};
use pxharm_core::geometry::{make_domain, Domain, DomainKind};
use pxharm_core::point::{Aabb, Point};
use pxharm_core::solver::Method;

fn num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .with_context(|| format!("`{s}` is not a number ({what})"))
}

fn pair(s: &str, what: &str) -> Result<Point> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 2 {
        bail!("`{s}` is not a pair `a,b` ({what})");
    }
    Ok([num(v[0], what)?, num(v[1], what)?])
}

/// `disk:R`, `annulus:R1:R2`, `half-plane-slab:H` (or `slab:H`), `square:L`,
/// `l-shape:L[:corner]`.
pub fn domain_kind(s: &str) -> Result<DomainKind> {
    let p: Vec<&str> = s.split(':').collect();
    let arg = |i: usize| -> Result<f64> {
        num(p.get(i).ok_or_else(|| anyhow!("domain `{s}` is missing a parameter"))?, "domain")
    };
    Ok(match p[0] {
        "disk" => DomainKind::Disk { radius: arg(1)? },
        "annulus" => DomainKind::Annulus {
            inner: arg(1)?,
            outer: arg(2)?,
        },
        "half-plane-slab" | "slab" => DomainKind::HalfPlaneSlab {
            height: if p.len() > 1 { arg(1)? } else { 2.0 },
        },
        "square" => DomainKind::Square { side: arg(1)? },
        "l-shape" | "smoothed-L-shape" => {
            let side = arg(1)?;
            DomainKind::SmoothedLShape {
                side,
                corner: if p.len() > 2 { arg(2)? } else { 0.1 * side },
            }
        }
        other => bail!("unknown domain `{other}`"),
    })
}

pub fn domain(s: &str) -> Result<Domain> {
    Ok(make_domain(domain_kind(s)?)?)
}

/// `const:p`, `affine:p0:a1,a2`, `bump:base:amp:c1,c2:width`.
pub fn exponent_kind(s: &str) -> Result<ExponentKind> {
    let p: Vec<&str> = s.split(':').collect();
    let get = |i: usize| -> Result<&str> { p.get(i).copied().ok_or_else(|| anyhow!("exponent `{s}` is incomplete")) };
    Ok(match p[0] {
        "const" => ExponentKind::Constant { p: num(get(1)?, "p")? },
        "affine" => ExponentKind::Affine {
            p0: num(get(1)?, "p0")?,
            a: pair(get(2)?, "gradient")?,
        },
        "bump" => ExponentKind::Bump {
            base: num(get(1)?, "base")?,
            amp: num(get(2)?, "amplitude")?,
            center: pair(get(3)?, "center")?,
            width: num(get(4)?, "width")?,
        },
        other => bail!("unknown exponent `{other}`"),
    })
}

pub fn exponent(s: &str, hull: Aabb) -> Result<ExponentField> {
    Ok(ExponentField::with_hull(exponent_kind(s)?, hull)?)
}

/// `lo1,lo2,hi1,hi2`.
pub fn hull(s: &str) -> Result<Aabb> {
    let v: Vec<f64> = s.split(',').map(|t| num(t, "hull")).collect::<Result<_>>()?;
    if v.len() != 4 {
        bail!("hull `{s}` needs four numbers lo1,lo2,hi1,hi2");
    }
    Ok(Aabb::new([v[0], v[1]], [v[2], v[3]]))
}

pub fn method(s: &str) -> Result<Method> {
    match s {
        "picard" => Ok(Method::Picard),
        "newton" | "damped-newton" => Ok(Method::DampedNewton),
        other => bail!("unknown method `{other}` (picard | newton)"),
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Picard => "picard",
        Method::DampedNewton => "newton",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spellings() {
        assert_eq!(domain_kind("disk:1").unwrap(), DomainKind::Disk { radius: 1.0 });
        assert!(matches!(domain_kind("annulus:0.25:1").unwrap(), DomainKind::Annulus { .. }));
        assert_eq!(
            exponent_kind("affine:2:0.5,0").unwrap(),
            ExponentKind::Affine { p0: 2.0, a: [0.5, 0.0] }
        );
        assert!(exponent_kind("affine:2").is_err());
        assert!(domain_kind("torus:1").is_err());
        assert_eq!(hull("-1,-1,1,1").unwrap(), Aabb::new([-1.0, -1.0], [1.0, 1.0]));
    }
}
