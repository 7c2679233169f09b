//! Quadrature, running integrals, finite differences and one-sided running
//! maxima over radial profiles.

use crate::error::{Error, Result};
use crate::grid::{Interpolation, RadialProfile};

/// `int_0^infty r^k f(r) dr` by the profile's quadrature rule.
///
/// Piecewise-linear profiles use the grid's cell weights (trapezoid by
/// default) with the integrand treated as zero outside the grid span.
/// Piecewise-constant profiles integrate `r^k` exactly over every cell.
/// For `k < 0` the profile must vanish at the first node, otherwise the
/// zero-extension toward the origin would misrepresent a possibly divergent
/// integral.
pub fn weighted_integral(f: &RadialProfile, k: f64) -> Result<f64> {
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::computation("non-finite sample in integrand"));
    }
    if k < 0.0 && f.values()[0] != 0.0 {
        return Err(Error::precondition(format!(
            "integrand must vanish at the first node when k = {k} < 0, found {}",
            f.values()[0]
        )));
    }
    match f.interpolation() {
        Interpolation::PiecewiseLinear => {
            let nodes = f.grid().nodes();
            let weights = f.grid().cell_weights();
            let mut acc = 0.0;
            for i in 0..nodes.len() {
                acc += weights[i] * nodes[i].powf(k) * f.values()[i];
            }
            Ok(acc)
        }
        Interpolation::PiecewiseConstant { bounds } => {
            let mut acc = 0.0;
            for (i, v) in f.values().iter().enumerate() {
                acc += v * power_cell_integral(bounds[i], bounds[i + 1], k);
            }
            Ok(acc)
        }
    }
}

/// Exact `int_a^b r^k dr` (power rule; log for k = -1). For `a = 0` and
/// `k <= -1` the cell is skipped; callers guard that case via the vanishing
/// precondition above.
fn power_cell_integral(a: f64, b: f64, k: f64) -> f64 {
    if k == 0.0 {
        return b - a;
    }
    if a == 0.0 && k <= -1.0 {
        return 0.0;
    }
    if k == -1.0 {
        return (b / a).ln();
    }
    (b.powf(k + 1.0) - a.powf(k + 1.0)) / (k + 1.0)
}

/// Running integral `F(s) = int_0^s f(t) dt` sampled at the grid nodes.
///
/// The integrand is extended toward the origin by the profile's own rule:
/// linearly through `(0, 0)` for piecewise-linear profiles (so `F(r_0)` is
/// the half-cell triangle `r_0 f(r_0) / 2`), and by zero below the first
/// cell boundary for piecewise-constant ones. The output is tagged
/// piecewise-linear; it is exact at the nodes for step inputs.
pub fn cumulative_integral(f: &RadialProfile) -> Result<RadialProfile> {
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::computation("non-finite sample in integrand"));
    }
    let nodes = f.grid().nodes();
    let vals = f.values();
    let mut out = vec![0.0; nodes.len()];
    match f.interpolation() {
        Interpolation::PiecewiseLinear => {
            out[0] = nodes[0] * vals[0] / 2.0;
            for i in 1..nodes.len() {
                out[i] = out[i - 1] + (nodes[i] - nodes[i - 1]) * (vals[i] + vals[i - 1]) / 2.0;
            }
        }
        Interpolation::PiecewiseConstant { bounds } => {
            let mut full = 0.0;
            for i in 0..nodes.len() {
                out[i] = full + (nodes[i] - bounds[i]) * vals[i];
                full += (bounds[i + 1] - bounds[i]) * vals[i];
            }
        }
    }
    RadialProfile::linear(f.grid().clone(), out)
}

/// `int_0^r f(t) dt` at an arbitrary radius, consistent with
/// [`cumulative_integral`] at the nodes.
pub fn cumulative_at(f: &RadialProfile, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let nodes = f.grid().nodes();
    let vals = f.values();
    match f.interpolation() {
        Interpolation::PiecewiseLinear => {
            if r <= nodes[0] {
                return r * f.value_at(r) / 2.0;
            }
            let mut acc = nodes[0] * vals[0] / 2.0;
            for i in 1..nodes.len() {
                if r >= nodes[i] {
                    acc += (nodes[i] - nodes[i - 1]) * (vals[i] + vals[i - 1]) / 2.0;
                } else {
                    acc += (r - nodes[i - 1]) * (vals[i - 1] + f.value_at(r)) / 2.0;
                    return acc;
                }
            }
            acc
        }
        Interpolation::PiecewiseConstant { bounds } => {
            let mut acc = 0.0;
            for i in 0..vals.len() {
                if r >= bounds[i + 1] {
                    acc += (bounds[i + 1] - bounds[i]) * vals[i];
                } else {
                    if r > bounds[i] {
                        acc += (r - bounds[i]) * vals[i];
                    }
                    return acc;
                }
            }
            acc
        }
    }
}

/// Running maxima from the left and from the right:
/// `prefix[i] = max(values[0..=i])`, `suffix[i] = max(values[i..])`.
pub fn prefix_suffix_sup(values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if values.is_empty() {
        return Err(Error::domain("prefix/suffix maxima of an empty array"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::computation("NaN in prefix/suffix maxima input"));
    }
    let n = values.len();
    let mut prefix = vec![0.0; n];
    let mut suffix = vec![0.0; n];
    prefix[0] = values[0];
    for i in 1..n {
        prefix[i] = prefix[i - 1].max(values[i]);
    }
    suffix[n - 1] = values[n - 1];
    for i in (0..n - 1).rev() {
        suffix[i] = suffix[i + 1].max(values[i]);
    }
    Ok((prefix, suffix))
}

/// Finite-difference radial derivative: three-point second-order stencils at
/// interior nodes, one-sided three-point stencils at the endpoints. Exact for
/// affine samples on any grid.
pub fn radial_derivative(f: &RadialProfile) -> Result<RadialProfile> {
    if matches!(f.interpolation(), Interpolation::PiecewiseConstant { .. }) {
        return Err(Error::domain(
            "radial derivative of a piecewise-constant profile",
        ));
    }
    let nodes = f.grid().nodes();
    let vals = f.values();
    let n = nodes.len();
    if n < 3 {
        return Err(Error::domain(format!(
            "radial derivative needs at least 3 nodes, got {n}"
        )));
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        d[i] = -hp / (hm * (hm + hp)) * vals[i - 1]
            + (hp - hm) / (hm * hp) * vals[i]
            + hm / (hp * (hm + hp)) * vals[i + 1];
    }
    let (h0, h1) = (nodes[1] - nodes[0], nodes[2] - nodes[1]);
    d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * vals[0] + (h0 + h1) / (h0 * h1) * vals[1]
        - h0 / (h1 * (h0 + h1)) * vals[2];
    let (g0, g1) = (nodes[n - 1] - nodes[n - 2], nodes[n - 2] - nodes[n - 3]);
    d[n - 1] = (2.0 * g0 + g1) / (g0 * (g0 + g1)) * vals[n - 1]
        - (g0 + g1) / (g0 * g1) * vals[n - 2]
        + g0 / (g1 * (g0 + g1)) * vals[n - 3];
    RadialProfile::linear(f.grid().clone(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use approx::assert_relative_eq;

    fn uniform(a: f64, b: f64, n: usize) -> RadialGrid {
        let nodes: Vec<f64> = (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect();
        RadialGrid::from_nodes(nodes).unwrap()
    }

    #[test]
    fn unit_integral_on_fine_grid() {
        let g = uniform(1e-3, 1.0, 2001);
        let f = RadialProfile::from_fn(g, |_| 1.0).unwrap();
        let v = weighted_integral(&f, 0.0).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 2e-3);
    }

    #[test]
    fn trapezoid_exact_for_linear() {
        let g = uniform(1.0, 2.0, 11);
        let f = RadialProfile::from_fn(g, |r| r).unwrap();
        assert_relative_eq!(weighted_integral(&f, 0.0).unwrap(), 1.5, epsilon = 1e-14);
    }

    #[test]
    fn tent_squared_inverse_square_weight() {
        // int_1^3 tent(r)^2 / r^2 dr = (1.5 - 2 ln 2) + (2.5 - 6 ln 1.5)
        let g = RadialGrid::log_spaced(1e-4, 1e4, 4096).unwrap();
        let tent = RadialProfile::from_fn(g, |r| (1.0 - (r - 2.0).abs()).max(0.0)).unwrap();
        let sq = tent.map(|v| v * v).unwrap();
        let exact = 4.0 - 2.0 * 2f64.ln() - 6.0 * 1.5f64.ln();
        assert_relative_eq!(
            weighted_integral(&sq, -2.0).unwrap(),
            exact,
            max_relative = 1e-4
        );
        assert_relative_eq!(exact, 0.18091499, max_relative = 1e-7);
    }

    #[test]
    fn negative_weight_requires_vanishing_first_node() {
        let g = uniform(1.0, 2.0, 5);
        let f = RadialProfile::from_fn(g, |_| 1.0).unwrap();
        assert!(weighted_integral(&f, -2.0).is_err());
    }

    #[test]
    fn cumulative_of_unit_ramp() {
        let g = uniform(1e-3, 2.0, 4001);
        let f = RadialProfile::from_fn(g, |r| if r <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let cum = cumulative_integral(&f).unwrap();
        for (&r, &v) in g_pairs(&cum) {
            assert_relative_eq!(v, r.min(1.0), epsilon = 3e-3);
        }
        assert_eq!(cum.values()[0], 1e-3 * 1.0 / 2.0);
    }

    fn g_pairs(
        p: &RadialProfile,
    ) -> std::iter::Zip<std::slice::Iter<'_, f64>, std::slice::Iter<'_, f64>> {
        p.grid().nodes().iter().zip(p.values().iter())
    }

    #[test]
    fn cumulative_zero_is_zero() {
        let g = uniform(0.5, 2.0, 8);
        let f = RadialProfile::zeros(g);
        assert!(cumulative_integral(&f).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cumulative_exact_for_affine_integrand() {
        // f(t) = 2t on [0,1]: F(s) = s^2 exactly, the ghost triangle included.
        let g = uniform(0.01, 1.0, 100);
        let f = RadialProfile::from_fn(g, |r| 2.0 * r).unwrap();
        let cum = cumulative_integral(&f).unwrap();
        for (&r, &v) in g_pairs(&cum) {
            assert_relative_eq!(v, r * r, epsilon = 1e-12);
        }
    }

    #[test]
    fn cumulative_at_matches_nodes_and_interpolates() {
        let f = RadialProfile::step(vec![0.0, 1.0, 2.0, 3.0], vec![2.0, -1.0, 3.0]).unwrap();
        let cum = cumulative_integral(&f).unwrap();
        for (&r, &v) in g_pairs(&cum) {
            assert_eq!(cumulative_at(&f, r), v);
        }
        assert_eq!(cumulative_at(&f, 1.0), 2.0);
        assert_eq!(cumulative_at(&f, 2.5), 2.0 - 1.0 + 1.5);
        assert_eq!(cumulative_at(&f, 10.0), 4.0);
    }

    #[test]
    fn prefix_suffix_basic() {
        let (p, s) = prefix_suffix_sup(&[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(p, vec![1.0, 3.0, 3.0]);
        assert_eq!(s, vec![3.0, 3.0, 2.0]);
    }

    #[test]
    fn prefix_suffix_monotone_and_spike() {
        let (p, s) = prefix_suffix_sup(&[5.0, 4.0, 1.0]).unwrap();
        assert_eq!(p, vec![5.0, 5.0, 5.0]);
        assert_eq!(s, vec![5.0, 4.0, 1.0]);
        let (p, s) = prefix_suffix_sup(&[0.0, 0.0, 7.0, 0.0]).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 7.0, 7.0]);
        assert_eq!(s, vec![7.0, 7.0, 7.0, 0.0]);
    }

    #[test]
    fn prefix_suffix_rejects_empty_and_nan() {
        assert!(prefix_suffix_sup(&[]).is_err());
        assert!(prefix_suffix_sup(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn derivative_constant_and_linear() {
        let g = uniform(1.0, 2.0, 9);
        let c = RadialProfile::from_fn(g.clone(), |_| 3.0).unwrap();
        assert!(radial_derivative(&c)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v.abs() < 1e-13));
        let lin = RadialProfile::from_fn(g, |r| r).unwrap();
        for &v in radial_derivative(&lin).unwrap().values() {
            assert_relative_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_sqrt_on_log_grid() {
        let g = RadialGrid::log_spaced(1e-2, 1e2, 4096).unwrap();
        let f = RadialProfile::from_fn(g.clone(), |r| r.sqrt()).unwrap();
        let d = radial_derivative(&f).unwrap();
        let mut worst = 0.0f64;
        for i in 1..g.len() - 1 {
            let r = g.nodes()[i];
            let exact = 0.5 / r.sqrt();
            worst = worst.max(((d.values()[i] - exact) / exact).abs());
        }
        assert!(worst <= 1e-3, "max relative error {worst}");
    }

    #[test]
    fn derivative_needs_three_nodes() {
        let g = RadialGrid::from_nodes(vec![1.0, 2.0]).unwrap();
        let f = RadialProfile::from_fn(g, |r| r).unwrap();
        assert!(radial_derivative(&f).is_err());
    }
}
