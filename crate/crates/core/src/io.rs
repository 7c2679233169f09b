//! CSV interchange for radial profiles and tensor-sampled functions.
//!
//! Profile CSV: header `r,value`, one row per node in increasing r, decimal
//! floating point, UTF-8, LF line endings. Tensor CSV: header
//! `r,node_index,value`, rows row-major in (r, node_index) against a
//! quadrature supplied by the caller.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, RadialProfile};
use crate::sphere::AngularQuadrature;
use crate::functions::TensorFunction;

fn parse_f64(field: &str, row: usize, name: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| {
        Error::domain(format!("row {row}: cannot parse {name} from '{}'", field.trim()))
    })
}

/// Read a `r,value` CSV into a piecewise-linear profile.
pub fn read_profile_csv(reader: impl BufRead) -> Result<RadialProfile> {
    let (nodes, values) = read_two_columns(reader)?;
    RadialProfile::linear(RadialGrid::from_nodes(nodes)?, values)
}

/// Read a `r,value` CSV into a piecewise-constant profile; the nodes are
/// taken as cell midpoints with boundaries halfway between them.
pub fn read_profile_csv_step(reader: impl BufRead) -> Result<RadialProfile> {
    let (nodes, values) = read_two_columns(reader)?;
    if nodes.len() < 2 {
        return Err(Error::domain("a step profile needs at least 2 rows"));
    }
    let n = nodes.len();
    let mut bounds = Vec::with_capacity(n + 1);
    bounds.push(((3.0 * nodes[0] - nodes[1]) / 2.0).max(0.0));
    for i in 1..n {
        bounds.push((nodes[i - 1] + nodes[i]) / 2.0);
    }
    bounds.push((3.0 * nodes[n - 1] - nodes[n - 2]) / 2.0);
    RadialProfile::step(bounds, values)
}

fn read_two_columns(reader: impl BufRead) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::domain(format!("row {}: {e}", idx + 1)))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            if line != "r,value" {
                return Err(Error::domain(format!(
                    "row 1: expected header 'r,value', found '{line}'"
                )));
            }
            continue;
        }
        let row = idx + 1;
        let mut fields = line.split(',');
        let (Some(rf), Some(vf), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::domain(format!("row {row}: expected 2 fields")));
        };
        let r = parse_f64(rf, row, "r")?;
        let v = parse_f64(vf, row, "value")?;
        if let Some(&prev) = nodes.last() {
            if r <= prev {
                return Err(Error::domain(format!(
                    "row {row}: r = {r} does not increase past {prev}"
                )));
            }
        }
        nodes.push(r);
        values.push(v);
    }
    if nodes.len() < 2 {
        return Err(Error::domain("profile CSV needs at least 2 data rows"));
    }
    Ok((nodes, values))
}

/// Write `r,value` rows with LF endings.
pub fn write_profile_csv(mut w: impl Write, radii: &[f64], values: &[f64]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::computation(format!("csv write: {e}"));
    writeln!(w, "r,value").map_err(io_err)?;
    for (r, v) in radii.iter().zip(values) {
        writeln!(w, "{r},{v}").map_err(io_err)?;
    }
    Ok(())
}

/// Read a `r,node_index,value` CSV into a tensor function over the given
/// quadrature. Rows must be row-major: for each radius, node indices
/// 0..K-1 in order.
pub fn read_tensor_csv(
    reader: impl BufRead,
    quadrature: &AngularQuadrature,
    p_hint: f64,
) -> Result<TensorFunction> {
    let k = quadrature.len();
    let mut nodes: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut col = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::domain(format!("row {}: {e}", idx + 1)))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            if line != "r,node_index,value" {
                return Err(Error::domain(format!(
                    "row 1: expected header 'r,node_index,value', found '{line}'"
                )));
            }
            continue;
        }
        let row = idx + 1;
        let mut fields = line.split(',');
        let (Some(rf), Some(kf), Some(vf), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::domain(format!("row {row}: expected 3 fields")));
        };
        let r = parse_f64(rf, row, "r")?;
        let ki: usize = kf.trim().parse().map_err(|_| {
            Error::domain(format!("row {row}: cannot parse node_index from '{}'", kf.trim()))
        })?;
        let v = parse_f64(vf, row, "value")?;
        if ki != col {
            return Err(Error::domain(format!(
                "row {row}: expected node_index {col} (row-major order), found {ki}"
            )));
        }
        if col == 0 {
            if let Some(&prev) = nodes.last() {
                if r <= prev {
                    return Err(Error::domain(format!(
                        "row {row}: r = {r} does not increase past {prev}"
                    )));
                }
            }
            nodes.push(r);
        } else if r != *nodes.last().unwrap() {
            return Err(Error::domain(format!(
                "row {row}: r = {r} changed mid-block (expected {})",
                nodes.last().unwrap()
            )));
        }
        values.push(v);
        col = (col + 1) % k;
    }
    if col != 0 {
        return Err(Error::domain(format!(
            "incomplete final block: expected {k} node_index rows per radius"
        )));
    }
    if nodes.len() < 2 {
        return Err(Error::domain("tensor CSV needs at least 2 radial blocks"));
    }
    let grid = RadialGrid::from_nodes(nodes)?;
    TensorFunction::new(grid, quadrature.clone(), values, p_hint)
}
