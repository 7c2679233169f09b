//! Test-only oracle helpers, deliberately independent of the library's
//! evaluation path: straight-loop trapezoid sums, plain scans and analytic
//! derivatives.

#![allow(dead_code)]

pub fn log_nodes(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    let ratio = r_max / r_min;
    (0..n)
        .map(|i| r_min * ratio.powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Plain trapezoid of sampled values over the nodes.
pub fn trapezoid(nodes: &[f64], vals: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..nodes.len() {
        acc += (nodes[i] - nodes[i - 1]) * (vals[i] + vals[i - 1]) / 2.0;
    }
    acc
}

pub fn running_max(vals: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(vals.len());
    let mut m = f64::NEG_INFINITY;
    for &v in vals {
        m = m.max(v);
        out.push(m);
    }
    out
}

pub fn running_max_rev(vals: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; vals.len()];
    let mut m = f64::NEG_INFINITY;
    for i in (0..vals.len()).rev() {
        m = m.max(vals[i]);
        out[i] = m;
    }
    out
}

/// Dense-grid evaluation of the improved-Hardy quantities for a radial
/// factor with analytic derivative, on the window [r_min, r_max]:
/// prefix term, suffix term, classical lhs and the (un-multiplied) gradient
/// integral, all times the angular moment `m_p`.
pub struct ImprovedOracle {
    pub term1: f64,
    pub term2: f64,
    pub classical: f64,
    pub gradient: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn dense_improved_radial(
    r_min: f64,
    r_max: f64,
    n: usize,
    dim: u32,
    p: f64,
    m_p: f64,
    radial: impl Fn(f64) -> f64,
    radial_deriv: impl Fn(f64) -> f64,
) -> ImprovedOracle {
    let nodes = log_nodes(r_min, r_max, n);
    let e = dim as f64 - 1.0;
    let a: Vec<f64> = nodes.iter().map(|&r| m_p * radial(r).abs().powf(p)).collect();
    let ratios: Vec<f64> = nodes
        .iter()
        .zip(&a)
        .map(|(&r, &ai)| ai / r.powf(p))
        .collect();
    let prefix = running_max(&a);
    let suffix = running_max_rev(&ratios);

    let weighted = |vals: &[f64], extra: &dyn Fn(usize) -> f64| -> f64 {
        let samples: Vec<f64> = (0..n)
            .map(|i| nodes[i].powf(e) * vals[i] * extra(i))
            .collect();
        trapezoid(&nodes, &samples)
    };
    let term1 = weighted(&prefix, &|i| nodes[i].powf(-p));
    let term2 = weighted(&suffix, &|_| 1.0);
    let classical = weighted(&ratios, &|_| 1.0);
    let grad_samples: Vec<f64> = nodes
        .iter()
        .map(|&r| m_p * radial_deriv(r).abs().powf(p))
        .collect();
    let gradient = weighted(&grad_samples, &|_| 1.0);
    ImprovedOracle {
        term1,
        term2,
        classical,
        gradient,
    }
}

pub fn tent(r: f64) -> f64 {
    (1.0 - (r - 2.0f64).abs()).max(0.0)
}

/// Analytic tent slope (±1 inside the support; the isolated kink points do
/// not contribute to integrals).
pub fn tent_deriv(r: f64) -> f64 {
    if r > 1.0 && r < 2.0 {
        1.0
    } else if r > 2.0 && r < 3.0 {
        -1.0
    } else {
        0.0
    }
}

/// Angular p-moment of 1 + cos(k theta)/2 on S^1 by a 1024-point uniform
/// rule (exact for these trigonometric polynomials).
pub fn circle_moment(k: u32, p: f64) -> f64 {
    let n = 1024;
    let mut acc = 0.0;
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        acc += (1.0 + 0.5 * (k as f64 * theta).cos()).abs().powf(p);
    }
    acc * 2.0 * std::f64::consts::PI / n as f64
}
