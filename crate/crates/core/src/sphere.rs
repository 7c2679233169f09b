//! Geometry of the unit sphere S^{N-1}: exact surface areas and ball volumes
//! for any N >= 1, and angular quadrature for N in {1, 2, 3}.
//!
//! The N = 1 convention treats S^0 as the two points {-1, +1} with counting
//! measure, so omega_1 = 2 and every polar-coordinate identity holds
//! verbatim on the line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Surface area omega_N of S^{N-1} and volume v_N of the unit N-ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereGeometry {
    pub dim: u32,
    pub surface_area: f64,
    pub ball_volume: f64,
}

/// omega_N = 2 pi^{N/2} / Gamma(N/2) and v_N = omega_N / N, exactly.
pub fn sphere_geometry(dim: u32) -> Result<SphereGeometry> {
    if dim < 1 {
        return Err(Error::domain("sphere geometry needs N >= 1"));
    }
    let omega = 2.0 * PI.powf(dim as f64 / 2.0) / gamma_half(dim);
    Ok(SphereGeometry {
        dim,
        surface_area: omega,
        ball_volume: omega / dim as f64,
    })
}

/// Gamma(n/2) for integer n >= 1 by the half-integer recursion.
fn gamma_half(n: u32) -> f64 {
    let even = n.is_multiple_of(2);
    let mut acc = if even { 1.0 } else { PI.sqrt() };
    let mut k = if even { 2 } else { 1 };
    while k < n {
        // Gamma(x + 1) = x Gamma(x), climbing from Gamma(1) or Gamma(1/2)
        acc *= k as f64 / 2.0;
        k += 2;
    }
    acc
}

/// Nodes and weights realizing `int_{S^{N-1}} . dsigma` for N in {1, 2, 3}.
/// Nodes are unit vectors embedded in R^3 (unused components zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularQuadrature {
    pub dim: u32,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl AngularQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Build the angular rule.
///
/// N = 1: the two points with unit weights (exact). N = 2: `resolution`
/// equally spaced angles with weight 2 pi / resolution, exact for
/// trigonometric polynomials of degree < resolution. N = 3: Gauss-Legendre
/// in cos(theta) (resolution nodes) times a uniform rule in phi
/// (2 resolution nodes). Other dimensions are served by separable functions
/// with explicitly supplied angular moments.
pub fn build_angular_quadrature(dim: u32, resolution: usize) -> Result<AngularQuadrature> {
    if resolution < 1 {
        return Err(Error::domain("angular quadrature needs resolution >= 1"));
    }
    match dim {
        1 => Ok(AngularQuadrature {
            dim,
            nodes: vec![[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
            weights: vec![1.0, 1.0],
        }),
        2 => {
            let mut nodes = Vec::with_capacity(resolution);
            let w = 2.0 * PI / resolution as f64;
            for k in 0..resolution {
                let theta = 2.0 * PI * k as f64 / resolution as f64;
                nodes.push([theta.cos(), theta.sin(), 0.0]);
            }
            Ok(AngularQuadrature {
                dim,
                nodes,
                weights: vec![w; resolution],
            })
        }
        3 => {
            let (xs, ws) = gauss_legendre(resolution);
            let n_phi = 2 * resolution;
            let w_phi = 2.0 * PI / n_phi as f64;
            let mut nodes = Vec::with_capacity(resolution * n_phi);
            let mut weights = Vec::with_capacity(resolution * n_phi);
            for (x, wx) in xs.iter().zip(&ws) {
                let sin_theta = (1.0 - x * x).max(0.0).sqrt();
                for j in 0..n_phi {
                    let phi = 2.0 * PI * j as f64 / n_phi as f64;
                    nodes.push([sin_theta * phi.cos(), sin_theta * phi.sin(), *x]);
                    weights.push(wx * w_phi);
                }
            }
            Ok(AngularQuadrature { dim, nodes, weights })
        }
        other => Err(Error::domain(format!(
            "angular quadrature supports N in {{1, 2, 3}}, got N = {other}; \
             use a separable function with an explicit angular moment instead"
        ))),
    }
}

/// `sum_k w_k |g(sigma_k)|^p` for samples of g at the quadrature nodes.
pub fn angular_p_moment(values: &[f64], quadrature: &AngularQuadrature, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::domain(format!("angular moment needs p >= 1, got {p}")));
    }
    if values.len() != quadrature.len() {
        return Err(Error::domain(format!(
            "{} samples for {} quadrature nodes",
            values.len(),
            quadrature.len()
        )));
    }
    let mut acc = 0.0;
    for (v, w) in values.iter().zip(&quadrature.weights) {
        acc += w * v.abs().powf(p);
    }
    Ok(acc)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if !n.is_multiple_of(2) {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_dimension_closed_forms() {
        let s1 = sphere_geometry(1).unwrap();
        assert_eq!(s1.surface_area, 2.0);
        assert_eq!(s1.ball_volume, 2.0);
        let s2 = sphere_geometry(2).unwrap();
        assert_relative_eq!(s2.surface_area, 2.0 * PI, epsilon = 1e-15);
        assert_relative_eq!(s2.ball_volume, PI, epsilon = 1e-15);
        let s3 = sphere_geometry(3).unwrap();
        assert_relative_eq!(s3.surface_area, 4.0 * PI, epsilon = 1e-15);
        assert_relative_eq!(s3.ball_volume, 4.0 * PI / 3.0, epsilon = 1e-15);
        assert!(sphere_geometry(0).is_err());
    }

    #[test]
    fn surface_equals_dim_times_volume_up_to_ten() {
        for n in 1..=10 {
            let s = sphere_geometry(n).unwrap();
            assert_relative_eq!(
                s.surface_area,
                n as f64 * s.ball_volume,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn quadrature_total_weight_is_surface_area() {
        for (n, res) in [(1, 7), (2, 64), (3, 16)] {
            let q = build_angular_quadrature(n, res).unwrap();
            let omega = sphere_geometry(n).unwrap().surface_area;
            assert_relative_eq!(q.total_weight(), omega, max_relative = 1e-12);
        }
        assert!(build_angular_quadrature(4, 8).is_err());
    }

    #[test]
    fn nodes_are_unit_vectors() {
        for (n, res) in [(1, 1), (2, 33), (3, 9)] {
            let q = build_angular_quadrature(n, res).unwrap();
            for v in &q.nodes {
                let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                assert!((norm - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn second_moment_of_s2() {
        // int_{S^2} (sigma . e_z)^2 dsigma = 4 pi / 3
        let q = build_angular_quadrature(3, 16).unwrap();
        let vals: Vec<f64> = q.nodes.iter().map(|v| v[2]).collect();
        let m = angular_p_moment(&vals, &q, 2.0).unwrap();
        assert_relative_eq!(m, 4.0 * PI / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn constant_moments() {
        let q = build_angular_quadrature(2, 64).unwrap();
        let ones = vec![1.0; q.len()];
        assert_relative_eq!(
            angular_p_moment(&ones, &q, 3.0).unwrap(),
            2.0 * PI,
            max_relative = 1e-12
        );
        let zeros = vec![0.0; q.len()];
        assert_eq!(angular_p_moment(&zeros, &q, 2.0).unwrap(), 0.0);
        assert!(angular_p_moment(&ones[..3], &q, 2.0).is_err());
    }

    #[test]
    fn gauss_legendre_five_point() {
        let (x, w) = gauss_legendre(5);
        let x_ref = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let w_ref = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for i in 0..5 {
            assert_relative_eq!(x[i], x_ref[i], epsilon = 1e-14);
            assert_relative_eq!(w[i], w_ref[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn product_rule_refinement_converges() {
        // smooth non-polynomial integrand on S^2
        let exact = {
            // int exp(z) over S^2 = 2 pi int_{-1}^{1} e^z dz = 2 pi (e - 1/e)
            2.0 * PI * (1f64.exp() - (-1f64).exp())
        };
        let mut errs = Vec::new();
        for res in [4, 8, 16] {
            let q = build_angular_quadrature(3, res).unwrap();
            let vals: Vec<f64> = q.nodes.iter().map(|v| (v[2].exp()).sqrt()).collect();
            // p = 2 squares the samples back to exp(z)
            let m = angular_p_moment(&vals, &q, 2.0).unwrap();
            errs.push((m - exact).abs());
        }
        assert!(errs[1] <= errs[0] / 2.0 || errs[1] < 1e-12);
        assert!(errs[2] <= errs[1] / 2.0 || errs[2] < 1e-12);
    }
}
