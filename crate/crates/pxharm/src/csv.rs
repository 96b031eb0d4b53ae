//! CSV exports: fields as `x,y,value`, measures as `x,y,atom`, decay
//! profiles as `rho,value`, barrier samples as `x,y,operator`.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};

use pxharm_core::measure::MeasureEstimate;
use pxharm_core::mesh::ScalarField;
use pxharm_core::point::Point;

/// Shortest round-trip formatting keeps exports byte-stable.
fn rows<'a>(header: &str, it: impl Iterator<Item = (&'a [f64], usize)>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for (vals, n) in it {
        for (k, v) in vals[..n].iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            write!(s, "{v:?}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn field_csv(u: &ScalarField) -> String {
    let data: Vec<[f64; 3]> = u
        .grid
        .nodes
        .iter()
        .zip(&u.values)
        .map(|(p, v)| [p[0], p[1], *v])
        .collect();
    rows("x,y,value", data.iter().map(|r| (&r[..], 3)))
}

pub fn measure_csv(mu: &MeasureEstimate) -> String {
    let data: Vec<[f64; 3]> = mu.atoms.iter().map(|a| [a.at[0], a.at[1], a.mass]).collect();
    rows("x,y,atom", data.iter().map(|r| (&r[..], 3)))
}

pub fn profile_csv(radii: &[f64], values: &[f64]) -> String {
    let data: Vec<[f64; 2]> = radii.iter().zip(values).map(|(r, v)| [*r, *v]).collect();
    rows("rho,value", data.iter().map(|r| (&r[..], 2)))
}

pub fn samples_csv(values: &[(Point, f64)]) -> String {
    let data: Vec<[f64; 3]> = values.iter().map(|(p, v)| [p[0], p[1], *v]).collect();
    rows("x,y,operator", data.iter().map(|r| (&r[..], 3)))
}

/// A parsed numeric CSV with its header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_table(text: &str) -> Result<Table> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = match lines.next() {
        Some(h) => h.split(',').map(|s| s.trim().to_string()).collect(),
        None => bail!("empty CSV: no header"),
    };
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("line {}: non-numeric entry", i + 2))?;
        if row.len() != header.len() {
            bail!("line {}: {} columns, header has {}", i + 2, row.len(), header.len());
        }
        out.push(row);
    }
    Ok(Table { header, rows: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = profile_csv(&[0.5, 0.25], &[1.0, 0.1]);
        assert_eq!(s, "rho,value\n0.5,1.0\n0.25,0.1\n");
        let t = read_table(&s).unwrap();
        assert_eq!(t.rows, vec![vec![0.5, 1.0], vec![0.25, 0.1]]);
        assert!(read_table("a,b\n1,x\n").is_err());
        assert!(read_table("a,b\n1\n").is_err());
        assert!(read_table("").is_err());
    }
}
