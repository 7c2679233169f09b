//! Decreasing rearrangement and distribution functions on the half-line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Interpolation, RadialProfile};

/// Default resampling resolution for rearrangements.
pub const DEFAULT_REARRANGEMENT_CELLS: usize = 1 << 17;

/// Level sets of |f|: `measures[i]` is the Lebesgue measure of
/// `{t > 0 : |f(t)| > levels[i]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurve {
    pub levels: Vec<f64>,
    pub measures: Vec<f64>,
}

/// Non-increasing rearrangement of |f| as a step profile on `m` equal cells
/// covering `[0, measure of the support hull]`.
///
/// |f| is resampled at the midpoints of `m` uniform cells spanning the
/// tightest interval that contains all nonzero values, then sorted in
/// descending order. For step inputs whose nonzero cells already fill that
/// hull with equal widths (and `m` equal to the cell count) this reproduces
/// the descending sort of the cell values exactly; otherwise the result is
/// equimeasurable with |f| up to one resampling cell.
pub fn decreasing_rearrangement(f: &RadialProfile, m: usize) -> Result<RadialProfile> {
    if m < 1 {
        return Err(Error::domain("rearrangement needs m >= 1 output cells"));
    }
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::computation("non-finite sample in rearrangement input"));
    }
    let m = m.max(2); // step profiles need at least two cells
    let Some((lo, hi)) = support_hull(f) else {
        // zero profile: keep the shape, all cells zero
        let bounds: Vec<f64> = (0..=m).map(|j| j as f64 / m as f64).collect();
        return RadialProfile::step(bounds, vec![0.0; m]);
    };
    let width = (hi - lo) / m as f64;
    let mut vals: Vec<f64> = (0..m)
        .map(|j| f.value_at(lo + (j as f64 + 0.5) * width).abs())
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let bounds: Vec<f64> = (0..=m).map(|j| j as f64 * width).collect();
    RadialProfile::step(bounds, vals)
}

/// Tightest interval containing every nonzero value of `f` (including the
/// ramps of a piecewise-linear profile). `None` for the zero profile.
fn support_hull(f: &RadialProfile) -> Option<(f64, f64)> {
    let first = f.values().iter().position(|&v| v != 0.0)?;
    let last = f.values().iter().rposition(|&v| v != 0.0).unwrap();
    match f.interpolation() {
        Interpolation::PiecewiseLinear => {
            let nodes = f.grid().nodes();
            let lo = if first == 0 { 0.0 } else { nodes[first - 1] };
            let hi = nodes[(last + 1).min(nodes.len() - 1)];
            Some((lo, hi))
        }
        Interpolation::PiecewiseConstant { bounds } => Some((bounds[first], bounds[last + 1])),
    }
}

/// Exact measures of the level sets `{|f| > tau}`, cell by cell. Levels must
/// be nonnegative and ascending.
pub fn distribution_function(f: &RadialProfile, levels: &[f64]) -> Result<DistributionCurve> {
    if levels.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::domain("levels must be finite and nonnegative"));
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("levels must be ascending"));
    }
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::computation("non-finite sample in distribution input"));
    }
    let measures = levels.iter().map(|&tau| measure_above(f, tau)).collect();
    Ok(DistributionCurve {
        levels: levels.to_vec(),
        measures,
    })
}

fn measure_above(f: &RadialProfile, tau: f64) -> f64 {
    match f.interpolation() {
        Interpolation::PiecewiseConstant { bounds } => {
            let mut acc = 0.0;
            for (i, v) in f.values().iter().enumerate() {
                if v.abs() > tau {
                    acc += bounds[i + 1] - bounds[i];
                }
            }
            acc
        }
        Interpolation::PiecewiseLinear => {
            let nodes = f.grid().nodes();
            let vals = f.values();
            // origin ramp from (0, 0) to the first node, then the grid cells
            let mut acc = linear_piece_above(0.0, nodes[0], 0.0, vals[0], tau);
            for i in 0..nodes.len() - 1 {
                acc += linear_piece_above(nodes[i], nodes[i + 1], vals[i], vals[i + 1], tau);
            }
            acc
        }
    }
}

/// Measure of `{r in [a, b] : |g(r)| > tau}` for g linear with g(a) = va,
/// g(b) = vb. Splits at the sign crossing so |g| is linear on each piece.
fn linear_piece_above(a: f64, b: f64, va: f64, vb: f64, tau: f64) -> f64 {
    if va < 0.0 && vb > 0.0 || va > 0.0 && vb < 0.0 {
        let cross = a + (b - a) * (va / (va - vb));
        return linear_piece_above(a, cross, va, 0.0, tau)
            + linear_piece_above(cross, b, 0.0, vb, tau);
    }
    let (ga, gb) = (va.abs(), vb.abs());
    if ga == gb {
        return if ga > tau { b - a } else { 0.0 };
    }
    // |g| is monotone linear from ga to gb; find where it crosses tau
    let t = (tau - ga) / (gb - ga);
    if gb > ga {
        if gb <= tau {
            0.0
        } else if ga > tau {
            b - a
        } else {
            (b - a) * (1.0 - t)
        }
    } else if ga <= tau {
        0.0
    } else if gb > tau {
        b - a
    } else {
        (b - a) * t
    }
}
