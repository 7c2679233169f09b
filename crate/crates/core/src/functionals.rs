//! Evaluators returning (lhs, rhs) pairs for the Hardy-type inequalities:
//! the classical supercritical inequality, the min-kernel rearrangement
//! lemma, the weighted one-dimensional step, the prefix/suffix-improved
//! inequality, the radialisation lemmas and the uncertainty principles.

use serde::{Deserialize, Serialize};

use crate::calculus::{
    cumulative_at, cumulative_integral, prefix_suffix_sup, radial_derivative,
};
use crate::error::{Error, Result};
use crate::functions::{
    radial_directional_derivative, radialise, SeparableFunction, TensorFunction, TestFunction,
};
use crate::grid::{RadialGrid, RadialProfile};
use crate::rearrange::decreasing_rearrangement;
use crate::sphere::sphere_geometry;

/// The sharp constant |p / (N - p)|^p. Undefined in the critical case
/// p = N, where no such inequality exists.
pub fn hardy_constant(dim: u32, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("hardy constant needs p > 1, got {p}")));
    }
    if p == dim as f64 {
        return Err(Error::domain(format!(
            "p must differ from N: the critical case p = N = {dim} admits no such inequality"
        )));
    }
    Ok((p / (dim as f64 - p)).abs().powf(p))
}

fn require_supercritical(dim: u32, p: f64) -> Result<()> {
    if dim < 1 {
        return Err(Error::domain("dimension must satisfy N >= 1"));
    }
    if !(p.is_finite() && p > dim as f64) {
        return Err(Error::domain(format!(
            "p must exceed N: got N = {dim}, p = {p}"
        )));
    }
    Ok(())
}

/// Grid/quadrature sizes recorded with every evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub radial_nodes: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub angular_nodes: usize,
}

impl Discretization {
    fn radial(grid: &RadialGrid) -> Self {
        Discretization {
            radial_nodes: grid.len(),
            r_min: grid.r_min(),
            r_max: grid.r_max(),
            angular_nodes: 0,
        }
    }

    fn tensor(u: &TensorFunction) -> Self {
        let mut d = Discretization::radial(u.grid());
        d.angular_nodes = u.quadrature().len();
        d
    }
}

/// Both sides of one inequality instance. The multiplicative constant is
/// already folded into `rhs` and recorded separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityPair {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub label: String,
    pub discretization: Discretization,
}

/// Output of the improved inequalities: the sup-enhanced left-hand side
/// together with the plain Hardy left-hand side it dominates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovedHardyTriple {
    pub improved_lhs: f64,
    pub classical_lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub label: String,
    pub discretization: Discretization,
}

impl ImprovedHardyTriple {
    /// The improved inequality as a plain pair.
    pub fn as_pair(&self) -> InequalityPair {
        InequalityPair {
            lhs: self.improved_lhs,
            rhs: self.rhs,
            constant: self.constant,
            label: self.label.clone(),
            discretization: self.discretization.clone(),
        }
    }
}

/// `sum_i w_i r_i^(N-1) values_i`, the polar-coordinate radial quadrature.
/// Fixed summation order keeps results deterministic and preserves
/// term-by-term dominance between integrands.
fn radial_power_sum(grid: &RadialGrid, dim: u32, values: &[f64]) -> f64 {
    let nodes = grid.nodes();
    let weights = grid.cell_weights();
    let e = dim as i32 - 1;
    let mut acc = 0.0;
    for i in 0..nodes.len() {
        acc += weights[i] * nodes[i].powi(e) * values[i];
    }
    acc
}

/// Angular p-moments A(r_i) of a test function, with its grid and the
/// metadata of the evaluation.
fn p_moments(u: &TestFunction, dim: u32, p: f64) -> Result<(RadialGrid, Vec<f64>, Discretization)> {
    match u {
        TestFunction::Separable(s) => {
            if s.dim != dim {
                return Err(Error::domain(format!(
                    "function dimension {} does not match N = {dim}",
                    s.dim
                )));
            }
            let m = s.angular_p_moment;
            let a = s.radial.values().iter().map(|v| m * v.abs().powf(p)).collect();
            Ok((s.radial.grid().clone(), a, Discretization::radial(s.radial.grid())))
        }
        TestFunction::Tensor(t) => {
            if t.quadrature().dim != dim {
                return Err(Error::domain(format!(
                    "quadrature dimension {} does not match N = {dim}",
                    t.quadrature().dim
                )));
            }
            Ok((t.grid().clone(), t.angular_p_moments(p), Discretization::tensor(t)))
        }
    }
}

/// Angular p-moments of the radial directional derivative.
fn gradient_p_moments(u: &TestFunction, p: f64) -> Result<Vec<f64>> {
    match u {
        TestFunction::Separable(s) => {
            let d = radial_derivative(&s.radial)?;
            let m = s.angular_p_moment;
            Ok(d.values().iter().map(|v| m * v.abs().powf(p)).collect())
        }
        TestFunction::Tensor(t) => {
            let du = radial_directional_derivative(t)?;
            Ok(du.angular_p_moments(p))
        }
    }
}

/// Classical supercritical Hardy pair:
/// lhs = int |u|^p / |x|^p dx, rhs = C_{N,p} int |x/|x| . grad u|^p dx.
pub fn classical_hardy_pair(u: &TestFunction, dim: u32, p: f64) -> Result<InequalityPair> {
    require_supercritical(dim, p)?;
    let constant = hardy_constant(dim, p)?;
    let (grid, a, disc) = p_moments(u, dim, p)?;
    let ratios: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(&a)
        .map(|(r, ai)| ai / r.powf(p))
        .collect();
    let lhs = radial_power_sum(&grid, dim, &ratios);
    let grad = gradient_p_moments(u, p)?;
    let rhs = constant * radial_power_sum(&grid, dim, &grad);
    Ok(InequalityPair {
        lhs,
        rhs,
        constant,
        label: "classical-hardy".into(),
        discretization: disc,
    })
}

/// Admissible weight pair (g, h) for the min-kernel lemma: g >= 0, h > 0
/// non-decreasing with h(r)/r non-decreasing (equivalently
/// s h(r) <= r h(s) for r <= s).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPair {
    g: RadialProfile,
    h: RadialProfile,
}

impl WeightPair {
    pub fn new(g: RadialProfile, h: RadialProfile) -> Result<Self> {
        if g.grid().nodes() != h.grid().nodes() {
            return Err(Error::domain("weight pair profiles must share a grid"));
        }
        if let Some(i) = g.values().iter().position(|&v| v < 0.0) {
            return Err(Error::precondition(format!(
                "g must be nonnegative; g = {} at node {i} (r = {})",
                g.values()[i],
                g.grid().nodes()[i]
            )));
        }
        if let Some(i) = h.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::precondition(format!(
                "h must be strictly positive; h = {} at node {i} (r = {})",
                h.values()[i],
                h.grid().nodes()[i]
            )));
        }
        let scale = h.values().iter().cloned().fold(0.0, f64::max);
        for i in 1..h.len() {
            if h.values()[i] - h.values()[i - 1] < -1e-12 * scale {
                return Err(Error::precondition(format!(
                    "h must be non-decreasing; it decreases between nodes {} (h = {}) and {} (h = {})",
                    i - 1,
                    h.values()[i - 1],
                    i,
                    h.values()[i]
                )));
            }
        }
        let nodes = h.grid().nodes();
        let ratio: Vec<f64> = h.values().iter().zip(nodes).map(|(v, r)| v / r).collect();
        let rscale = ratio.iter().cloned().fold(0.0, f64::max);
        for i in 1..ratio.len() {
            if ratio[i] - ratio[i - 1] < -1e-12 * rscale {
                return Err(Error::precondition(format!(
                    "h(r)/r must be non-decreasing (s h(r) <= r h(s)); it decreases between \
                     nodes {} (r = {}, h/r = {}) and {} (r = {}, h/r = {})",
                    i - 1,
                    nodes[i - 1],
                    ratio[i - 1],
                    i,
                    nodes[i],
                    ratio[i]
                )));
            }
        }
        Ok(WeightPair { g, h })
    }

    pub fn g(&self) -> &RadialProfile {
        &self.g
    }

    pub fn h(&self) -> &RadialProfile {
        &self.h
    }
}

/// Min-kernel rearrangement pair:
/// lhs = int g(r) sup_s |min(1/h(r), 1/h(s)) int_0^s f|^p dr,
/// rhs = int g(r) |(1/h(r)) int_0^r f*|^p dr.
///
/// Because h is non-decreasing, min(1/h(r), 1/h(s)) = 1/h(max(r, s)), so the
/// grid supremum decomposes into a prefix maximum of |F| scaled by 1/h(r)
/// and a suffix maximum of |F|/h; the evaluation is a linear scan.
pub fn kernel_hardy_pair(f: &RadialProfile, weights: &WeightPair, p: f64) -> Result<InequalityPair> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("kernel pair needs p > 1, got {p}")));
    }
    if f.grid().nodes() != weights.g.grid().nodes() {
        return Err(Error::domain("f must share the weight pair's grid"));
    }
    let grid = f.grid();
    let cum = cumulative_integral(f)?;
    let abs_f: Vec<f64> = cum.values().iter().map(|v| v.abs()).collect();
    let h = weights.h.values();
    let (prefix, _) = prefix_suffix_sup(&abs_f)?;
    let over_h: Vec<f64> = abs_f.iter().zip(h).map(|(v, hi)| v / hi).collect();
    let (_, suffix) = prefix_suffix_sup(&over_h)?;

    let g = weights.g.values();
    let w = grid.cell_weights();
    let mut lhs = 0.0;
    for i in 0..grid.len() {
        let sup = (prefix[i] / h[i]).max(suffix[i]);
        lhs += g[i] * w[i] * sup.powf(p);
    }

    let m = (32 * grid.len()).clamp(1 << 14, 1 << 17);
    let f_star = decreasing_rearrangement(f, m)?;
    let mut rhs = 0.0;
    for i in 0..grid.len() {
        let fs = cumulative_at(&f_star, grid.nodes()[i]);
        rhs += g[i] * w[i] * (fs / h[i]).powf(p);
    }

    Ok(InequalityPair {
        lhs,
        rhs,
        constant: 1.0,
        label: "kernel-hardy".into(),
        discretization: Discretization::radial(grid),
    })
}

/// Weighted one-dimensional Hardy pair for nonnegative non-increasing phi:
/// lhs = int r^(N-p-1) (int_0^r phi)^p dr,
/// rhs = (p/(p-N))^p int r^(N-1) phi^p dr.
pub fn weighted_1d_hardy_pair(phi: &RadialProfile, dim: u32, p: f64) -> Result<InequalityPair> {
    require_supercritical(dim, p)?;
    if let Some(i) = phi.values().iter().position(|&v| v < 0.0) {
        return Err(Error::precondition(format!(
            "phi must be nonnegative; phi = {} at node {i}",
            phi.values()[i]
        )));
    }
    let scale = phi.values().iter().cloned().fold(0.0, f64::max);
    if let Some(i) = (1..phi.len()).find(|&i| phi.values()[i] - phi.values()[i - 1] > 1e-12 * scale)
    {
        return Err(Error::precondition(format!(
            "phi must be non-increasing; it increases between nodes {} and {}",
            i - 1,
            i
        )));
    }
    let constant = (p / (p - dim as f64)).powf(p);
    let cum = cumulative_integral(phi)?;
    // r^(N-p-1) F^p = r^(N-1) (F/r)^p keeps the integrand finite at the
    // first node even though N - p - 1 < 0.
    let ratio: Vec<f64> = cum
        .values()
        .iter()
        .zip(phi.grid().nodes())
        .map(|(v, r)| (v.abs() / r).powf(p))
        .collect();
    let lhs = crate::calculus::weighted_integral(
        &phi.with_values(ratio)?,
        dim as f64 - 1.0,
    )?;
    let powed = phi.map(|v| v.powf(p))?;
    let rhs = constant * crate::calculus::weighted_integral(&powed, dim as f64 - 1.0)?;
    Ok(InequalityPair {
        lhs,
        rhs,
        constant,
        label: "weighted-1d-hardy".into(),
        discretization: Discretization::radial(phi.grid()),
    })
}

/// Shared core of the improved inequalities. Given the angular p-moments
/// A(r_i), returns (prefix term, suffix term, classical lhs):
///   prefix term  = int r^(N-1-p) sup_{s <= r} A(s) dr,
///   suffix term  = int r^(N-1)  sup_{s >= r} A(s)/s^p dr,
///   classical    = int r^(N-1-p) A(r) dr.
/// The prefix array dominates A index-wise, so the prefix term dominates the
/// classical term summand by summand in floating point as well.
fn improved_terms(grid: &RadialGrid, a: &[f64], dim: u32, p: f64) -> Result<(f64, f64, f64)> {
    let nodes = grid.nodes();
    let (prefix, _) = prefix_suffix_sup(a)?;
    let mut point_ratio = vec![0.0; a.len()];
    let mut prefix_ratio = vec![0.0; a.len()];
    for i in 0..a.len() {
        let rp = nodes[i].powf(p);
        point_ratio[i] = a[i] / rp;
        prefix_ratio[i] = prefix[i] / rp;
    }
    let (_, suffix_ratio) = prefix_suffix_sup(&point_ratio)?;
    let term1 = radial_power_sum(grid, dim, &prefix_ratio);
    let term2 = radial_power_sum(grid, dim, &suffix_ratio);
    let classical = radial_power_sum(grid, dim, &point_ratio);
    Ok((term1, term2, classical))
}

fn improved_hardy_impl(u: &TestFunction, dim: u32, p: f64, label: &str) -> Result<ImprovedHardyTriple> {
    require_supercritical(dim, p)?;
    let constant = hardy_constant(dim, p)?;
    let (grid, a, disc) = p_moments(u, dim, p)?;
    let (term1, term2, classical_lhs) = improved_terms(&grid, &a, dim, p)?;
    let grad = gradient_p_moments(u, p)?;
    let rhs = constant * radial_power_sum(&grid, dim, &grad);
    Ok(ImprovedHardyTriple {
        improved_lhs: term1.max(term2),
        classical_lhs,
        rhs,
        constant,
        label: label.into(),
        discretization: disc,
    })
}

/// Improved Hardy inequality for radial functions: the left-hand side is the
/// larger of the prefix and suffix sup-integrals; it dominates the classical
/// left-hand side exactly at the discrete level.
pub fn improved_hardy_radial_pair(
    u: &SeparableFunction,
    dim: u32,
    p: f64,
) -> Result<ImprovedHardyTriple> {
    improved_hardy_impl(
        &TestFunction::Separable(u.clone()),
        dim,
        p,
        "improved-hardy-radial",
    )
}

/// Improved Hardy inequality for tensor-sampled u, via per-radius angular
/// p-moments.
pub fn improved_hardy_pair(u: &TensorFunction, dim: u32, p: f64) -> Result<ImprovedHardyTriple> {
    improved_hardy_impl(&TestFunction::Tensor(u.clone()), dim, p, "improved-hardy")
}

fn check_radial_weight(f: &RadialProfile, grid: &RadialGrid) -> Result<()> {
    if f.grid().nodes() != grid.nodes() {
        return Err(Error::domain("weight profile must share the function's grid"));
    }
    if let Some(i) = f.values().iter().position(|&v| v < 0.0) {
        return Err(Error::precondition(format!(
            "weight must be nonnegative; f = {} at node {i} (r = {})",
            f.values()[i],
            f.grid().nodes()[i]
        )));
    }
    Ok(())
}

/// Radialisation contraction: the weighted radial-derivative p-energy of the
/// radialisation u~ never exceeds that of u itself.
pub fn radialisation_contraction_pair(
    u: &TensorFunction,
    f: &RadialProfile,
    p: f64,
) -> Result<InequalityPair> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("contraction pair needs p > 1, got {p}")));
    }
    check_radial_weight(f, u.grid())?;
    let dim = u.quadrature().dim;
    let omega = sphere_geometry(dim)?.surface_area;
    let grid = u.grid();

    let ut = radialise(u, p)?;
    let dut = radial_derivative(&ut)?;
    let lhs_vals: Vec<f64> = dut
        .values()
        .iter()
        .zip(f.values())
        .map(|(d, fi)| omega * fi * d.abs().powf(p))
        .collect();
    let lhs = radial_power_sum(grid, dim, &lhs_vals);

    let du = radial_directional_derivative(u)?;
    let gm = du.angular_p_moments(p);
    let rhs_vals: Vec<f64> = gm.iter().zip(f.values()).map(|(g, fi)| fi * g).collect();
    let rhs = radial_power_sum(grid, dim, &rhs_vals);

    Ok(InequalityPair {
        lhs,
        rhs,
        constant: 1.0,
        label: "radialisation-contraction".into(),
        discretization: Discretization::tensor(u),
    })
}

/// Max/sup exchange: the larger of the two weighted sup-integrals of u is
/// bounded by the weighted integral of the pointwise max built from the
/// radialisation. Since omega_N u~^p equals the angular p-moment of u by
/// construction, both sides reduce to the same per-radius array A; what the
/// pair measures is exchanging the max with the integral.
pub fn sup_exchange_pair(
    u: &TensorFunction,
    f: &RadialProfile,
    p: f64,
) -> Result<InequalityPair> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::domain(format!("sup exchange needs p >= 1, got {p}")));
    }
    check_radial_weight(f, u.grid())?;
    let dim = u.quadrature().dim;
    let grid = u.grid();
    let a = u.angular_p_moments(p);
    let nodes = grid.nodes();
    let (prefix, _) = prefix_suffix_sup(&a)?;
    let mut point_ratio = vec![0.0; a.len()];
    let mut prefix_ratio = vec![0.0; a.len()];
    for i in 0..a.len() {
        let rp = nodes[i].powf(p);
        point_ratio[i] = a[i] / rp;
        prefix_ratio[i] = prefix[i] / rp;
    }
    let (_, suffix_ratio) = prefix_suffix_sup(&point_ratio)?;

    let weighted = |vals: &[f64]| -> Vec<f64> {
        vals.iter().zip(f.values()).map(|(v, fi)| fi * v).collect()
    };
    let t1 = radial_power_sum(grid, dim, &weighted(&prefix_ratio));
    let t2 = radial_power_sum(grid, dim, &weighted(&suffix_ratio));
    let pointwise_max: Vec<f64> = prefix_ratio
        .iter()
        .zip(&suffix_ratio)
        .map(|(a, b)| a.max(*b))
        .collect();
    let rhs = radial_power_sum(grid, dim, &weighted(&pointwise_max));

    Ok(InequalityPair {
        lhs: t1.max(t2),
        rhs,
        constant: 1.0,
        label: "sup-exchange".into(),
        discretization: Discretization::tensor(u),
    })
}

/// Which uncertainty statement to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UncertaintyVariant {
    /// Radial theorem; takes a separable function.
    Radial,
    /// Polar-coordinate theorem for general u; takes a tensor function.
    NonRadial,
}

/// The ball (prefix) or complement (suffix) branch of the statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UncertaintyBranch {
    Prefix,
    Suffix,
}

/// Outcome of an uncertainty evaluation: the prefix branch diverges for
/// every u that is not identically zero (the sup over balls stops decaying),
/// and is reported as unbounded rather than truncated to a grid-dependent
/// number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UncertaintyOutcome {
    Finite(InequalityPair),
    UnboundedBranch { label: String },
}

/// Heisenberg-Pauli-Weyl-type pair: mass term against the product of a
/// weighted sup-moment to the power (p-1)/p and the radial-gradient term to
/// the power 1/p.
pub fn uncertainty_pair(
    u: &TestFunction,
    dim: u32,
    p: f64,
    variant: UncertaintyVariant,
    branch: UncertaintyBranch,
) -> Result<UncertaintyOutcome> {
    require_supercritical(dim, p)?;
    match (variant, u) {
        (UncertaintyVariant::Radial, TestFunction::Separable(_)) => {}
        (UncertaintyVariant::NonRadial, TestFunction::Tensor(_)) => {}
        (UncertaintyVariant::Radial, _) => {
            return Err(Error::domain(
                "radial uncertainty variant takes a separable (radial) function",
            ))
        }
        (UncertaintyVariant::NonRadial, _) => {
            return Err(Error::domain(
                "non-radial uncertainty variant takes a tensor function",
            ))
        }
    }
    let constant = (p / (dim as f64 - p)).abs();
    let (grid, a, disc) = p_moments(u, dim, p)?;
    let label = match (variant, branch) {
        (UncertaintyVariant::Radial, UncertaintyBranch::Prefix) => "uncertainty-radial/prefix",
        (UncertaintyVariant::Radial, UncertaintyBranch::Suffix) => "uncertainty-radial/suffix",
        (UncertaintyVariant::NonRadial, UncertaintyBranch::Prefix) => "uncertainty/prefix",
        (UncertaintyVariant::NonRadial, UncertaintyBranch::Suffix) => "uncertainty/suffix",
    };

    match branch {
        UncertaintyBranch::Prefix => {
            let (prefix, _) = prefix_suffix_sup(&a)?;
            if *prefix.last().unwrap() > 0.0 {
                // sup over the ball equals max |u|^p for all large radii:
                // the integrand never decays and the branch diverges
                return Ok(UncertaintyOutcome::UnboundedBranch { label: label.into() });
            }
            Ok(UncertaintyOutcome::Finite(InequalityPair {
                lhs: 0.0,
                rhs: 0.0,
                constant,
                label: label.into(),
                discretization: disc,
            }))
        }
        UncertaintyBranch::Suffix => {
            let (_, suffix_a) = prefix_suffix_sup(&a)?;
            let lhs = radial_power_sum(&grid, dim, &suffix_a);
            let q = p / (p - 1.0);
            let weighted_a: Vec<f64> = grid
                .nodes()
                .iter()
                .zip(&a)
                .map(|(r, ai)| r.powf(q) * ai)
                .collect();
            let (_, suffix_w) = prefix_suffix_sup(&weighted_a)?;
            let moment = radial_power_sum(&grid, dim, &suffix_w);
            let grad = radial_power_sum(&grid, dim, &gradient_p_moments(u, p)?);
            let rhs = constant * moment.powf((p - 1.0) / p) * grad.powf(1.0 / p);
            Ok(UncertaintyOutcome::Finite(InequalityPair {
                lhs,
                rhs,
                constant,
                label: label.into(),
                discretization: disc,
            }))
        }
    }
}
