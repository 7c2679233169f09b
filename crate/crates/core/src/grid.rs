//! Discrete representation of functions of the radius r = |x| on (0, infinity).
//!
//! A [`RadialGrid`] carries strictly increasing positive sample radii together
//! with quadrature weights for integrals in dr. A [`RadialProfile`] attaches
//! sample values and an interpolation rule; piecewise-constant profiles own
//! their cell boundaries so that step functions integrate exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample radii with quadrature weights for `int_0^infty . dr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    cell_weights: Vec<f64>,
}

impl RadialGrid {
    /// Grid over explicit nodes with trapezoid weights. The weights sum to
    /// `r_max - r_min`; the integrand is treated as zero outside that span.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        validate_nodes(&nodes)?;
        let n = nodes.len();
        let mut w = vec![0.0; n];
        w[0] = (nodes[1] - nodes[0]) / 2.0;
        w[n - 1] = (nodes[n - 1] - nodes[n - 2]) / 2.0;
        for i in 1..n - 1 {
            w[i] = (nodes[i + 1] - nodes[i - 1]) / 2.0;
        }
        Ok(RadialGrid {
            nodes,
            cell_weights: w,
        })
    }

    /// Grid with caller-supplied positive weights (e.g. widths of
    /// piecewise-constant cells).
    pub fn with_weights(nodes: Vec<f64>, cell_weights: Vec<f64>) -> Result<Self> {
        validate_nodes(&nodes)?;
        if cell_weights.len() != nodes.len() {
            return Err(Error::domain(format!(
                "{} weights for {} nodes",
                cell_weights.len(),
                nodes.len()
            )));
        }
        if cell_weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::domain("cell weights must be positive and finite"));
        }
        Ok(RadialGrid {
            nodes,
            cell_weights,
        })
    }

    /// `n` geometrically spaced nodes from `r_min` to `r_max`, trapezoid
    /// weights in r (not in log r). This is the default discretization of
    /// (0, infinity): it resolves singular weights r^k near the origin while
    /// still covering several decades of tail.
    pub fn log_spaced(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min <= 0.0 || r_min >= r_max {
            return Err(Error::domain(format!(
                "log grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 2 {
            return Err(Error::domain(format!("log grid needs n >= 2, got {n}")));
        }
        let ratio = r_max / r_min;
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            nodes.push(r_min * ratio.powf(i as f64 / (n - 1) as f64));
        }
        // Pin the endpoints exactly; powf can be off by an ulp there.
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        RadialGrid::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_weights(&self) -> &[f64] {
        &self.cell_weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }
}

fn validate_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::domain("a radial grid needs at least 2 nodes"));
    }
    if nodes.iter().any(|r| !r.is_finite()) {
        return Err(Error::domain("grid nodes must be finite"));
    }
    if nodes[0] <= 0.0 {
        return Err(Error::domain(format!(
            "grid nodes must be positive, first node is {}",
            nodes[0]
        )));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("grid nodes must be strictly increasing"));
    }
    Ok(())
}

/// How a profile's samples extend to the continuum between nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Interpolation {
    /// Linear between consecutive nodes, linear to zero at the origin,
    /// zero beyond the last node.
    PiecewiseLinear,
    /// Constant on cells `[bounds[i], bounds[i+1])`; `bounds` has one more
    /// entry than the grid has nodes and each node lies inside its cell.
    PiecewiseConstant { bounds: Vec<f64> },
}

/// Sampled real function of the radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    grid: RadialGrid,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl RadialProfile {
    /// Piecewise-linear profile over `grid`.
    pub fn linear(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::computation("profile values must be finite"));
        }
        Ok(RadialProfile {
            grid,
            values,
            interpolation: Interpolation::PiecewiseLinear,
        })
    }

    /// Piecewise-constant profile with explicit cell boundaries. Nodes are
    /// placed at cell midpoints and quadrature weights are the cell widths,
    /// so integrals of step functions are exact.
    pub fn step(bounds: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if bounds.len() != values.len() + 1 {
            return Err(Error::domain(format!(
                "{} bounds for {} cells",
                bounds.len(),
                values.len()
            )));
        }
        if values.len() < 2 {
            return Err(Error::domain("a step profile needs at least 2 cells"));
        }
        if bounds.iter().any(|b| !b.is_finite()) || bounds[0] < 0.0 {
            return Err(Error::domain("cell bounds must be finite and nonnegative"));
        }
        if bounds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("cell bounds must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::computation("profile values must be finite"));
        }
        let nodes: Vec<f64> = bounds.windows(2).map(|b| (b[0] + b[1]) / 2.0).collect();
        let widths: Vec<f64> = bounds.windows(2).map(|b| b[1] - b[0]).collect();
        let grid = RadialGrid::with_weights(nodes, widths)?;
        Ok(RadialProfile {
            grid,
            values,
            interpolation: Interpolation::PiecewiseConstant { bounds },
        })
    }

    /// Sample a function at the grid nodes (piecewise-linear profile).
    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        RadialProfile::linear(grid, values)
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        let values = vec![0.0; grid.len()];
        RadialProfile {
            grid,
            values,
            interpolation: Interpolation::PiecewiseLinear,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> &Interpolation {
        &self.interpolation
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid and interpolation, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::domain(format!(
                "{} values for {} nodes",
                values.len(),
                self.values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::computation("profile values must be finite"));
        }
        Ok(RadialProfile {
            grid: self.grid.clone(),
            values,
            interpolation: self.interpolation.clone(),
        })
    }

    /// Same grid and interpolation, transformed values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::computation("mapped profile values must be finite"));
        }
        Ok(RadialProfile {
            grid: self.grid.clone(),
            values,
            interpolation: self.interpolation.clone(),
        })
    }

    /// Evaluate at radius `r`; zero outside the profile's extent.
    pub fn value_at(&self, r: f64) -> f64 {
        match &self.interpolation {
            Interpolation::PiecewiseLinear => {
                let nodes = self.grid.nodes();
                if r >= *nodes.last().unwrap() {
                    return if r == *nodes.last().unwrap() {
                        *self.values.last().unwrap()
                    } else {
                        0.0
                    };
                }
                if r <= nodes[0] {
                    if r < 0.0 {
                        return 0.0;
                    }
                    // linear from (0, 0) to the first node
                    return self.values[0] * (r / nodes[0]);
                }
                let i = match nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
                    Ok(i) => return self.values[i],
                    Err(i) => i - 1,
                };
                let t = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
                self.values[i] + t * (self.values[i + 1] - self.values[i])
            }
            Interpolation::PiecewiseConstant { bounds } => {
                if r < bounds[0] || r >= *bounds.last().unwrap() {
                    return 0.0;
                }
                let i = match bounds.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
                    Ok(i) => i.min(self.values.len() - 1),
                    Err(i) => i - 1,
                };
                self.values[i]
            }
        }
    }

    /// `(int |f|^p dr)^(1/p)` in plain dr measure on the half-line.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        let powed = self.map(|v| v.abs().powf(p))?;
        Ok(crate::calculus::weighted_integral(&powed, 0.0)?.powf(1.0 / p))
    }

}

/// True when two profiles share the same nodes (so values may be combined
/// index-wise).
pub fn same_grid(a: &RadialProfile, b: &RadialProfile) -> bool {
    a.grid().nodes() == b.grid().nodes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_geometric_spacing() {
        let g = RadialGrid::log_spaced(1.0, 4.0, 3).unwrap();
        assert_eq!(g.nodes(), &[1.0, 2.0, 4.0]);
    }

    #[test]
    fn log_grid_endpoints_exact() {
        let g = RadialGrid::log_spaced(1e-4, 1e4, 4096).unwrap();
        assert_eq!(g.len(), 4096);
        assert_eq!(g.r_min(), 1e-4);
        assert_eq!(g.r_max(), 1e4);
    }

    #[test]
    fn log_grid_rejects_bad_bounds() {
        assert!(RadialGrid::log_spaced(2.0, 1.0, 10).is_err());
        assert!(RadialGrid::log_spaced(0.0, 1.0, 10).is_err());
        assert!(RadialGrid::log_spaced(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_span() {
        let g = RadialGrid::log_spaced(1e-4, 1e4, 4096).unwrap();
        let sum: f64 = g.cell_weights().iter().sum();
        let span = g.r_max() - g.r_min();
        assert!((sum - span).abs() <= 1e-12 * span);
    }

    #[test]
    fn step_profile_midpoint_nodes() {
        let f = RadialProfile::step(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(f.grid().nodes(), &[0.5, 1.5, 2.5]);
        assert_eq!(f.grid().cell_weights(), &[1.0, 1.0, 1.0]);
        assert_eq!(f.value_at(1.999), 3.0);
        assert_eq!(f.value_at(2.0), 2.0);
        assert_eq!(f.value_at(3.5), 0.0);
    }

    #[test]
    fn linear_interpolation_with_origin_ramp() {
        let g = RadialGrid::from_nodes(vec![1.0, 2.0, 3.0]).unwrap();
        let f = RadialProfile::linear(g, vec![2.0, 4.0, 0.0]).unwrap();
        assert_eq!(f.value_at(1.5), 3.0);
        assert_eq!(f.value_at(0.5), 1.0); // ramp from (0,0)
        assert_eq!(f.value_at(4.0), 0.0);
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = RadialGrid::from_nodes(vec![1.0, 2.0]).unwrap();
        assert!(RadialProfile::linear(g, vec![f64::NAN, 0.0]).is_err());
    }
}
