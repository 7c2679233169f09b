//! Shared setup for the evaluator benchmarks.

use hardylab_core::*;

pub fn default_grid(n: usize) -> RadialGrid {
    RadialGrid::log_spaced(1e-4, 1e4, n).unwrap()
}

pub fn tent_profile(n: usize) -> RadialProfile {
    RadialProfile::from_fn(default_grid(n), |r| (1.0 - (r - 2.0f64).abs()).max(0.0)).unwrap()
}

pub fn tent_tensor(dim: u32, n: usize, resolution: usize, p: f64) -> TensorFunction {
    let spec = FamilySpec::new(
        FamilyKind::AngularMix {
            radial: Box::new(FamilyKind::Tent { a: 1.0, b: 3.0 }),
            harmonic: 1,
        },
        dim,
        p,
    )
    .unwrap();
    let quad = build_angular_quadrature(dim, resolution).unwrap();
    match make_family(&spec, &default_grid(n), Some(&quad)).unwrap() {
        TestFunction::Tensor(t) => t,
        _ => unreachable!(),
    }
}
