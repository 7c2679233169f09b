//! Numerical testbed for supercritical Hardy-type inequalities on the
//! half-line and in R^N.
//!
//! The crate evaluates both sides of each inequality on discretized test
//! functions: the classical supercritical Hardy inequality, its
//! prefix/suffix-sup improvement, the min-kernel rearrangement lemma behind
//! it, the radialisation lemmas that lift the radial statement to general
//! functions, and the derived uncertainty principles. Quotient sweeps along
//! the near-extremal power family reproduce the sharp constant
//! |p/(N-p)|^p from below.
//!
//! Layout: [`grid`] and [`calculus`] hold the half-line discretization,
//! [`rearrange`] the decreasing rearrangement, [`sphere`] the angular
//! geometry and quadrature, [`functions`] the test-function families,
//! [`functionals`] the inequality evaluators, [`verify`] and [`battery`]
//! the verdict/battery machinery, [`golden`] the regression store and
//! [`io`] the CSV interchange.

pub mod battery;
pub mod calculus;
pub mod error;
pub mod functionals;
pub mod functions;
pub mod golden;
pub mod grid;
pub mod io;
pub mod rearrange;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
pub use functionals::{
    classical_hardy_pair, hardy_constant, improved_hardy_pair, improved_hardy_radial_pair,
    kernel_hardy_pair, radialisation_contraction_pair, sup_exchange_pair, uncertainty_pair,
    weighted_1d_hardy_pair, Discretization, ImprovedHardyTriple, InequalityPair,
    UncertaintyBranch, UncertaintyOutcome, UncertaintyVariant, WeightPair,
};
pub use functions::{
    make_family, radial_directional_derivative, radialise, FamilyKind, FamilySpec,
    SeparableFunction, TensorFunction, TestFunction,
};
pub use grid::{Interpolation, RadialGrid, RadialProfile};
pub use sphere::{
    angular_p_moment, build_angular_quadrature, sphere_geometry, AngularQuadrature,
    SphereGeometry,
};
pub use verify::{InequalityReport, SharpnessSweep, TolerancePolicy, Verdict};
