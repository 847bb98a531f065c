//! CSV export of a partner spheroid.
//!
//! Column order is fixed:
//! `kind,u,v,x,y,z,residual,in_s,excluded_extremity,director_residual`.
//! `kind` is `surface` for grid points and `extremity` for the two marked
//! major-axis endpoints (whose `u`, `v` are 0/π and 0).

use std::f64::consts::{PI, TAU};
use std::io::Write;

use abscomp::bloch2::{director_sphere_residual, ellipsoid_residual, in_s, spheroid_params, BlochPoint, StrictParam};
use abscomp::Tolerances;
use serde::Serialize;

use crate::error::CliResult;

pub const COLUMNS: [&str; 10] =
    ["kind", "u", "v", "x", "y", "z", "residual", "in_s", "excluded_extremity", "director_residual"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshRow {
    pub kind: &'static str,
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub residual: f64,
    pub in_s: bool,
    pub excluded_extremity: bool,
    pub director_residual: f64,
}

/// `rows × cols` surface samples at `u = π(i + ½)/rows`, `v = 2πj/cols`,
/// followed by the two extremities.
pub fn spheroid_mesh(a: &StrictParam, rows: usize, cols: usize, pol: &Tolerances) -> CliResult<Vec<MeshRow>> {
    let sp = spheroid_params(a)?;
    let row = |kind, u, v, pt: BlochPoint| MeshRow {
        kind,
        u,
        v,
        x: pt.x,
        y: pt.y,
        z: pt.z,
        residual: ellipsoid_residual(a, &pt),
        in_s: in_s(pt.to_matrix().matrix(), pol),
        excluded_extremity: sp.is_excluded(&pt),
        director_residual: director_sphere_residual(&pt),
    };
    let mut out = Vec::with_capacity(rows * cols + 2);
    for i in 0..rows {
        let u = PI * (i as f64 + 0.5) / rows as f64;
        for j in 0..cols {
            let v = TAU * j as f64 / cols as f64;
            out.push(row("surface", u, v, sp.surface_point(u, v)));
        }
    }
    out.push(row("extremity", 0.0, 0.0, sp.extremities.0));
    out.push(row("extremity", PI, 0.0, sp.extremities.1));
    Ok(out)
}

pub fn write_mesh<W: Write>(rows: &[MeshRow], sink: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses `UxV` (also accepts `U×V` and `U,V`).
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(['x', 'X', '×', ',']).collect();
    let [u, v] = parts.as_slice() else {
        return Err(format!("grid '{s}' is not of the form UxV"));
    };
    let parse = |t: &str| t.trim().parse::<usize>().ok().filter(|&k| k > 0);
    match (parse(u), parse(v)) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err(format!("grid '{s}' needs two positive integers")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("8x8"), Ok((8, 8)));
        assert_eq!(parse_grid("3×5"), Ok((3, 5)));
        assert!(parse_grid("0x4").is_err());
        assert!(parse_grid("8").is_err());
    }

    #[test]
    fn header_matches_column_list() {
        let a = StrictParam::new(0.5, Complex::new(0.25, 0.0)).unwrap();
        let rows = spheroid_mesh(&a, 2, 2, &Tolerances::default()).unwrap();
        let mut buf = Vec::new();
        write_mesh(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        assert_eq!(text.lines().count(), 1 + 4 + 2);
    }
}
