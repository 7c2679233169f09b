//! Tolerance policy, inequality verdicts, sharpness sweeps and convergence
//! studies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{
    improved_hardy_radial_pair, Discretization, InequalityPair,
};
use crate::functions::{make_family, FamilyKind, FamilySpec, TestFunction};
use crate::grid::RadialGrid;

/// Slack applied when turning a continuum inequality into a discrete verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative slack on the right-hand side.
    pub rel: f64,
    /// Absolute slack, also the floor of the margin denominator.
    pub abs: f64,
    /// Re-evaluate at doubled radial resolution and require the margin not
    /// to degrade by more than `rel`.
    pub refinement_check: bool,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel: 1e-3,
            abs: 1e-12,
            refinement_check: false,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel >= 0.0 && self.abs >= 0.0) {
            return Err(Error::domain("tolerances must be nonnegative"));
        }
        Ok(())
    }

    /// Zero slack: the comparison must hold exactly in floating point.
    pub fn exact() -> Self {
        TolerancePolicy {
            rel: 0.0,
            abs: 0.0,
            refinement_check: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    UnboundedBranch,
}

/// A toleranced verdict on one inequality instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub key: String,
    pub label: String,
    pub verdict: Verdict,
    /// `(rhs - lhs) / max(rhs, abs)`; absent for unbounded branches.
    pub margin: Option<f64>,
    /// The evaluated pair; absent for unbounded branches.
    pub pair: Option<InequalityPair>,
    pub provenance: String,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::UnboundedBranch)
    }
}

/// Verdict for a finite pair: pass iff `lhs <= rhs (1 + rel) + abs`.
pub fn check(pair: &InequalityPair, policy: &TolerancePolicy) -> Result<InequalityReport> {
    policy.validate()?;
    if pair.lhs.is_nan() || pair.rhs.is_nan() {
        return Err(Error::computation(format!(
            "NaN in inequality pair '{}'",
            pair.label
        )));
    }
    let verdict = if pair.lhs <= pair.rhs * (1.0 + policy.rel) + policy.abs {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let margin = (pair.rhs - pair.lhs) / pair.rhs.max(policy.abs).max(f64::MIN_POSITIVE);
    Ok(InequalityReport {
        key: pair.label.clone(),
        label: pair.label.clone(),
        verdict,
        margin: Some(margin),
        pair: Some(pair.clone()),
        provenance: String::new(),
    })
}

/// One point of a sharpness sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    /// improved lhs divided by the gradient integral (rhs / constant).
    pub quotient: f64,
    /// `1 - quotient / constant`: distance to the sharp constant.
    pub margin: f64,
}

/// Quotients of the improved inequality along the near-extremal family,
/// approaching the sharp constant from below as eps decreases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSweep {
    pub dim: u32,
    pub p: f64,
    pub constant: f64,
    pub points: Vec<SweepPoint>,
    pub sup_quotient: f64,
    pub discretization: Discretization,
}

/// Evaluate the improved-Hardy quotient of `hardy_extremal(eps)` for each
/// eps. Every eps must lie in (0, (p - N)/p).
pub fn sharpness_sweep(
    dim: u32,
    p: f64,
    eps_values: &[f64],
    grid: &RadialGrid,
) -> Result<SharpnessSweep> {
    if eps_values.is_empty() {
        return Err(Error::domain("sharpness sweep needs at least one eps"));
    }
    let constant = crate::functionals::hardy_constant(dim, p)?;
    let mut points = Vec::with_capacity(eps_values.len());
    let mut sup_quotient = f64::NEG_INFINITY;
    let mut discretization = None;
    for &eps in eps_values {
        let spec = FamilySpec::new(FamilyKind::HardyExtremal { eps }, dim, p)?;
        let TestFunction::Separable(u) = make_family(&spec, grid, None)? else {
            unreachable!("hardy_extremal is radial")
        };
        let triple = improved_hardy_radial_pair(&u, dim, p)?;
        let quotient = triple.improved_lhs / (triple.rhs / triple.constant);
        sup_quotient = sup_quotient.max(quotient);
        points.push(SweepPoint {
            eps,
            quotient,
            margin: 1.0 - quotient / constant,
        });
        discretization = Some(triple.discretization);
    }
    Ok(SharpnessSweep {
        dim,
        p,
        constant,
        points,
        sup_quotient,
        discretization: discretization.unwrap(),
    })
}

/// One resolution level of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::Discretization;

    fn pair(lhs: f64, rhs: f64) -> InequalityPair {
        InequalityPair {
            lhs,
            rhs,
            constant: 1.0,
            label: "test".into(),
            discretization: Discretization {
                radial_nodes: 2,
                r_min: 1.0,
                r_max: 2.0,
                angular_nodes: 0,
            },
        }
    }

    #[test]
    fn verdict_and_margin() {
        let policy = TolerancePolicy::default();
        let r = check(&pair(2.0, 4.0), &policy).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.margin, Some(0.5));
    }

    #[test]
    fn slack_arithmetic() {
        let policy = TolerancePolicy::default();
        let r = check(&pair(4.004 + 1e-9, 4.0), &policy).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = check(&pair(4.0039, 4.0), &policy).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn zero_pair_passes_with_zero_margin() {
        let policy = TolerancePolicy::default();
        let r = check(&pair(0.0, 0.0), &policy).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.margin, Some(0.0));
    }

    #[test]
    fn nan_is_a_computation_error() {
        let policy = TolerancePolicy::default();
        assert!(check(&pair(f64::NAN, 1.0), &policy).is_err());
    }

    #[test]
    fn sweep_rejects_out_of_range_eps() {
        let grid = RadialGrid::log_spaced(1e-2, 1e2, 128).unwrap();
        assert!(sharpness_sweep(1, 2.0, &[0.7], &grid).is_err());
        assert!(sharpness_sweep(1, 2.0, &[], &grid).is_err());
    }

    #[test]
    fn sweep_quotient_near_closed_form() {
        let grid = RadialGrid::log_spaced(1e-4, 1e4, 4096).unwrap();
        let sweep = sharpness_sweep(1, 2.0, &[0.1], &grid).unwrap();
        let q = sweep.points[0].quotient;
        assert!((q - 4.0 / 1.04).abs() / (4.0 / 1.04) < 1e-2, "q = {q}");
        assert!(sweep.sup_quotient <= 4.0 * (1.0 + 1e-3));
    }
}
