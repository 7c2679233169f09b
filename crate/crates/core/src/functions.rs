//! Test functions u on R^N \ {o}: parametric families, tensor-grid samples,
//! the radialisation operator and radial directional derivatives.

use serde::{Deserialize, Serialize};

use crate::calculus::radial_derivative;
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, RadialProfile};
use crate::sphere::{sphere_geometry, AngularQuadrature};

/// Samples u(r_i, sigma_k) on a radial x angular product grid, stored
/// row-major with the radius as the major index.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFunction {
    grid: RadialGrid,
    quadrature: AngularQuadrature,
    values: Vec<f64>,
    /// Exponent the function is intended to be measured with.
    pub p_hint: f64,
}

impl TensorFunction {
    pub fn new(
        grid: RadialGrid,
        quadrature: AngularQuadrature,
        values: Vec<f64>,
        p_hint: f64,
    ) -> Result<Self> {
        if values.len() != grid.len() * quadrature.len() {
            return Err(Error::domain(format!(
                "{} values for {} radial x {} angular nodes",
                values.len(),
                grid.len(),
                quadrature.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::computation("tensor function values must be finite"));
        }
        Ok(TensorFunction {
            grid,
            quadrature,
            values,
            p_hint,
        })
    }

    /// Lift a radial profile to the product grid: the same value on every
    /// angular node of each sphere.
    pub fn from_radial(
        profile: &RadialProfile,
        quadrature: AngularQuadrature,
        p_hint: f64,
    ) -> Result<Self> {
        let k = quadrature.len();
        let mut values = Vec::with_capacity(profile.len() * k);
        for &v in profile.values() {
            values.extend(std::iter::repeat_n(v, k));
        }
        TensorFunction::new(profile.grid().clone(), quadrature, values, p_hint)
    }

    /// Sample `u(r, sigma)` over the product grid.
    pub fn from_fn(
        grid: RadialGrid,
        quadrature: AngularQuadrature,
        p_hint: f64,
        u: impl Fn(f64, &[f64; 3]) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len() * quadrature.len());
        for &r in grid.nodes() {
            for sigma in &quadrature.nodes {
                values.push(u(r, sigma));
            }
        }
        TensorFunction::new(grid, quadrature, values, p_hint)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn quadrature(&self) -> &AngularQuadrature {
        &self.quadrature
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Samples at fixed radius index.
    pub fn radial_row(&self, i: usize) -> &[f64] {
        let k = self.quadrature.len();
        &self.values[i * k..(i + 1) * k]
    }

    /// `A(r_i) = sum_k w_k |u(r_i, sigma_k)|^p` for every radius.
    pub fn angular_p_moments(&self, p: f64) -> Vec<f64> {
        let weights = &self.quadrature.weights;
        (0..self.grid.len())
            .map(|i| {
                let row = self.radial_row(i);
                let mut acc = 0.0;
                for (v, w) in row.iter().zip(weights) {
                    acc += w * v.abs().powf(p);
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| lambda * v).collect();
        TensorFunction::new(
            self.grid.clone(),
            self.quadrature.clone(),
            values,
            self.p_hint,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// u(x) = R(r) G(sigma) represented by its radial factor and the angular
/// moment `M_p = int |G|^p dsigma`. Radial functions are the case G = 1 with
/// `M_p = omega_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableFunction {
    pub radial: RadialProfile,
    pub angular_p_moment: f64,
    pub dim: u32,
}

impl SeparableFunction {
    pub fn new(radial: RadialProfile, angular_p_moment: f64, dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::domain("separable function needs N >= 1"));
        }
        if !(angular_p_moment.is_finite() && angular_p_moment > 0.0) {
            return Err(Error::domain(format!(
                "angular p-moment must be positive, got {angular_p_moment}"
            )));
        }
        Ok(SeparableFunction {
            radial,
            angular_p_moment,
            dim,
        })
    }

    /// Radial function: G = 1, so the angular moment is the sphere area.
    pub fn radial(radial: RadialProfile, dim: u32) -> Result<Self> {
        let omega = sphere_geometry(dim)?.surface_area;
        SeparableFunction::new(radial, omega, dim)
    }
}

/// Either representation of a test function.
#[derive(Debug, Clone)]
pub enum TestFunction {
    Separable(SeparableFunction),
    Tensor(TensorFunction),
}

/// Parametric families used by the verification battery and the sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Two-branch power profile r^(a + eps) for r <= 1, r^(a - eps) for
    /// r > 1, with a = (p - N) / p. Evaluated as-is on the grid: the grid
    /// window is the truncation, so near-sharp quotients survive (any
    /// forced decay to zero at the window ends costs a derivative term that
    /// destroys them).
    HardyExtremal { eps: f64 },
    /// Piecewise-linear hat on [a, b], peak 1 at the midpoint.
    Tent { a: f64, b: f64 },
    /// exp(1 - 1/(1 - x^2)) with x = (r - center)/width; support
    /// [center - width, center + width].
    SmoothBump { center: f64, width: f64 },
    /// Radial factor times the modulated harmonic 1 + H_k(sigma)/2, where
    /// H_k is cos(k theta) for N = 2, the zonal Legendre P_k(cos theta) for
    /// N = 3 and sigma^k on S^0.
    AngularMix {
        radial: Box<FamilyKind>,
        harmonic: u32,
    },
}

/// A family together with the dimension and exponent it will be measured in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub dim: u32,
    pub p: f64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, dim: u32, p: f64) -> Result<Self> {
        let spec = FamilySpec { kind, dim, p };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::domain("family needs N >= 1"));
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            return Err(Error::domain(format!("family needs p > 1, got {}", self.p)));
        }
        validate_kind(&self.kind, self.dim, self.p)
    }

    pub fn describe(&self) -> String {
        describe_kind(&self.kind)
    }
}

fn validate_kind(kind: &FamilyKind, dim: u32, p: f64) -> Result<()> {
    match kind {
        FamilyKind::HardyExtremal { eps } => {
            let a = (p - dim as f64) / p;
            if a <= 0.0 {
                return Err(Error::domain(format!(
                    "hardy_extremal needs p > N, got N = {dim}, p = {p}"
                )));
            }
            if *eps <= 0.0 || *eps >= a {
                return Err(Error::domain(format!(
                    "hardy_extremal needs 0 < eps < (p - N)/p = {a}, got {eps}"
                )));
            }
        }
        FamilyKind::Tent { a, b } => {
            if !(0.0 < *a && a < b) {
                return Err(Error::domain(format!("tent needs 0 < a < b, got ({a}, {b})")));
            }
        }
        FamilyKind::SmoothBump { center, width } => {
            if !(*width > 0.0 && center - width > 0.0) {
                return Err(Error::domain(format!(
                    "smooth_bump needs width > 0 and center - width > 0, got ({center}, {width})"
                )));
            }
        }
        FamilyKind::AngularMix { radial, .. } => {
            if matches!(**radial, FamilyKind::AngularMix { .. }) {
                return Err(Error::domain("angular_mix cannot nest"));
            }
            validate_kind(radial, dim, p)?;
        }
    }
    Ok(())
}

fn describe_kind(kind: &FamilyKind) -> String {
    match kind {
        FamilyKind::HardyExtremal { eps } => format!("hardy_extremal(eps={eps})"),
        FamilyKind::Tent { a, b } => format!("tent({a},{b})"),
        FamilyKind::SmoothBump { center, width } => format!("bump({center},{width})"),
        FamilyKind::AngularMix { radial, harmonic } => {
            format!("{}*harmonic({harmonic})", describe_kind(radial))
        }
    }
}

/// Radial sample of a non-mixed family kind.
pub(crate) fn radial_value(kind: &FamilyKind, dim: u32, p: f64, r: f64) -> f64 {
    match kind {
        FamilyKind::HardyExtremal { eps } => {
            let a = (p - dim as f64) / p;
            if r <= 1.0 {
                r.powf(a + eps)
            } else {
                r.powf(a - eps)
            }
        }
        FamilyKind::Tent { a, b } => {
            let c = (a + b) / 2.0;
            let half = (b - a) / 2.0;
            (1.0 - (r - c).abs() / half).max(0.0)
        }
        FamilyKind::SmoothBump { center, width } => {
            let x = (r - center) / width;
            if x.abs() < 1.0 {
                (1.0 - 1.0 / (1.0 - x * x)).exp()
            } else {
                0.0
            }
        }
        FamilyKind::AngularMix { radial, .. } => radial_value(radial, dim, p, r),
    }
}

/// Angular factor of `angular_mix`: 1 + H_k(sigma)/2.
pub fn modulated_harmonic(dim: u32, harmonic: u32, sigma: &[f64; 3]) -> f64 {
    1.0 + 0.5 * harmonic_value(dim, harmonic, sigma)
}

pub(crate) fn harmonic_value(dim: u32, k: u32, sigma: &[f64; 3]) -> f64 {
    match dim {
        1 => sigma[0].powi(k as i32),
        2 => (k as f64 * sigma[1].atan2(sigma[0])).cos(),
        3 => legendre(k, sigma[2]),
        _ => 0.0,
    }
}

fn legendre(k: u32, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// Construct a family on a grid. Radial kinds come back separable (G = 1);
/// `angular_mix` needs a quadrature and comes back as a tensor function.
pub fn make_family(
    spec: &FamilySpec,
    grid: &RadialGrid,
    quadrature: Option<&AngularQuadrature>,
) -> Result<TestFunction> {
    spec.validate()?;
    check_support(&spec.kind, grid)?;
    match &spec.kind {
        FamilyKind::AngularMix { radial, harmonic } => {
            let quad = quadrature.ok_or_else(|| {
                Error::domain("angular_mix needs an angular quadrature")
            })?;
            if quad.dim != spec.dim {
                return Err(Error::domain(format!(
                    "quadrature dimension {} does not match N = {}",
                    quad.dim, spec.dim
                )));
            }
            let (kind, dim, p, k) = (radial.as_ref(), spec.dim, spec.p, *harmonic);
            let u = TensorFunction::from_fn(grid.clone(), quad.clone(), p, |r, sigma| {
                radial_value(kind, dim, p, r) * modulated_harmonic(dim, k, sigma)
            })?;
            Ok(TestFunction::Tensor(u))
        }
        kind => {
            let profile = RadialProfile::from_fn(grid.clone(), |r| {
                radial_value(kind, spec.dim, spec.p, r)
            })?;
            Ok(TestFunction::Separable(SeparableFunction::radial(
                profile, spec.dim,
            )?))
        }
    }
}

/// Compactly supported kinds must fit inside the grid span.
fn check_support(kind: &FamilyKind, grid: &RadialGrid) -> Result<()> {
    let support = match kind {
        FamilyKind::Tent { a, b } => Some((*a, *b)),
        FamilyKind::SmoothBump { center, width } => Some((center - width, center + width)),
        FamilyKind::AngularMix { radial, .. } => return check_support(radial, grid),
        FamilyKind::HardyExtremal { .. } => None,
    };
    if let Some((lo, hi)) = support {
        if lo < grid.r_min() || hi > grid.r_max() {
            return Err(Error::domain(format!(
                "family support [{lo}, {hi}] exceeds the grid span [{}, {}]; \
                 the grid must cover the support",
                grid.r_min(),
                grid.r_max()
            )));
        }
    }
    Ok(())
}

/// Radialisation: the radial profile
/// `u~(r) = ((1/omega_N) int_{S^{N-1}} |u(r sigma)|^p dsigma)^(1/p)`.
pub fn radialise(u: &TensorFunction, p: f64) -> Result<RadialProfile> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::domain(format!("radialisation needs p > 1, got {p}")));
    }
    let omega = sphere_geometry(u.quadrature().dim)?.surface_area;
    let moments = u.angular_p_moments(p);
    let values = moments.iter().map(|a| (a / omega).powf(1.0 / p)).collect();
    RadialProfile::linear(u.grid().clone(), values)
}

/// Finite-difference derivative along each ray: d/dr of u(r, sigma_k) at
/// fixed sigma_k.
pub fn radial_directional_derivative(u: &TensorFunction) -> Result<TensorFunction> {
    let n_r = u.grid().len();
    let n_a = u.quadrature().len();
    let mut out = vec![0.0; n_r * n_a];
    for k in 0..n_a {
        let column: Vec<f64> = (0..n_r).map(|i| u.values()[i * n_a + k]).collect();
        let profile = RadialProfile::linear(u.grid().clone(), column)?;
        let d = radial_derivative(&profile)?;
        for i in 0..n_r {
            out[i * n_a + k] = d.values()[i];
        }
    }
    TensorFunction::new(u.grid().clone(), u.quadrature().clone(), out, u.p_hint)
}
