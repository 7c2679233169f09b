//! Property tests for the structural invariants: rearrangement norm
//! preservation and idempotence, running-max identities, order reversal of
//! cumulative integrals, equimeasurability and homogeneity.

use hardylab_core::calculus::{cumulative_at, cumulative_integral, prefix_suffix_sup};
use hardylab_core::rearrange::{decreasing_rearrangement, distribution_function};
use hardylab_core::*;
use proptest::prelude::*;

fn step_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![(-5.0f64..5.0).prop_filter("nonzero", |v| v.abs() > 1e-3)],
        2..=32,
    )
}

fn pl_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 8..=64)
}

fn uniform_grid(n: usize) -> RadialGrid {
    let nodes: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 * 0.25).collect();
    RadialGrid::from_nodes(nodes).unwrap()
}

proptest! {
    /// Sorting equal cells preserves every discrete p-norm exactly and the
    /// output is the descending sort of |values|.
    #[test]
    fn rearrangement_preserves_step_norms(values in step_values(), p in 1.0f64..4.0) {
        let n = values.len();
        let bounds: Vec<f64> = (0..=n).map(|j| j as f64).collect();
        let f = RadialProfile::step(bounds, values.clone()).unwrap();
        let fs = decreasing_rearrangement(&f, n).unwrap();

        let mut sorted: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        prop_assert_eq!(fs.values(), &sorted[..]);

        let norm = |vals: &[f64]| -> f64 { vals.iter().map(|v| v.abs().powf(p)).sum() };
        let a = norm(f.values());
        let b = norm(fs.values());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300), "{} vs {}", a, b);
    }

    /// Rearranging twice changes nothing (piecewise-constant outputs are
    /// exact fixed points).
    #[test]
    fn rearrangement_is_idempotent(values in step_values()) {
        let n = values.len();
        let bounds: Vec<f64> = (0..=n).map(|j| j as f64).collect();
        let f = RadialProfile::step(bounds, values).unwrap();
        let fs = decreasing_rearrangement(&f, n).unwrap();
        let fss = decreasing_rearrangement(&fs, n).unwrap();
        prop_assert_eq!(fs.values(), fss.values());
    }

    /// prefix[i] = max(prefix[i-1], values[i]) and the p-th power commutes
    /// with both running maxima for nonnegative input.
    #[test]
    fn running_max_recurrence_and_power_exchange(
        values in prop::collection::vec(0.0f64..10.0, 1..=64),
        p in 1.0f64..4.0,
    ) {
        let (prefix, suffix) = prefix_suffix_sup(&values).unwrap();
        for i in 1..values.len() {
            prop_assert_eq!(prefix[i], prefix[i - 1].max(values[i]));
            prop_assert_eq!(suffix[i - 1], suffix[i].max(values[i - 1]));
        }
        let powered: Vec<f64> = values.iter().map(|v| v.powf(p)).collect();
        let (prefix_pow, suffix_pow) = prefix_suffix_sup(&powered).unwrap();
        for i in 0..values.len() {
            prop_assert!((prefix[i].powf(p) - prefix_pow[i]).abs() <= 1e-12 * prefix_pow[i].max(1e-300));
            prop_assert!((suffix[i].powf(p) - suffix_pow[i]).abs() <= 1e-12 * suffix_pow[i].max(1e-300));
        }
    }

    /// |int_0^s f| <= int_0^s f* at every node (order reversal), up to the
    /// rearrangement's resampling slack.
    #[test]
    fn cumulative_order_reversal(mut values in pl_values()) {
        values[0] = 0.0;
        let n = values.len();
        *values.last_mut().unwrap() = 0.0;
        let f = RadialProfile::linear(uniform_grid(n), values).unwrap();
        let fs = decreasing_rearrangement(&f, 1 << 15).unwrap();
        let cum = cumulative_integral(&f).unwrap();
        let scale: f64 = f.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
        let slack = 1e-3 * (1.0 + scale * 16.0);
        for (i, &s) in f.grid().nodes().iter().enumerate() {
            let lhs = cum.values()[i].abs();
            let rhs = cumulative_at(&fs, s);
            prop_assert!(lhs <= rhs + slack, "node {}: {} > {}", i, lhs, rhs);
        }
    }

    /// The level-set measures of f and f* agree within one resampling cell.
    #[test]
    fn equimeasurability(mut values in pl_values(), tau in 0.05f64..2.0) {
        values[0] = 0.0;
        let n = values.len();
        *values.last_mut().unwrap() = 0.0;
        let f = RadialProfile::linear(uniform_grid(n), values).unwrap();
        let m = 1 << 14;
        let fs = decreasing_rearrangement(&f, m).unwrap();
        let a = distribution_function(&f, &[tau]).unwrap().measures[0];
        let b = distribution_function(&fs, &[tau]).unwrap().measures[0];
        let cell = fs.grid().cell_weights()[0];
        // the piecewise-linear profile can hug the level tau over whole
        // cells, so allow one input cell as well as one resampling cell
        prop_assert!((a - b).abs() <= cell + 0.25 + 1e-9, "{} vs {}", a, b);
    }

    /// Every pair scales by |lambda|^p when u is scaled by lambda.
    #[test]
    fn classical_pair_p_homogeneity(lambda in -3.0f64..3.0, p in 1.26f64..3.0) {
        prop_assume!(lambda.abs() > 1e-2);
        let g = RadialGrid::log_spaced(1e-3, 1e3, 512).unwrap();
        let base = RadialProfile::from_fn(g, |r| (1.0 - (r - 2.0f64).abs()).max(0.0)).unwrap();
        let u1 = SeparableFunction::radial(base.clone(), 1).unwrap();
        let u2 = SeparableFunction::radial(base.map(|v| lambda * v).unwrap(), 1).unwrap();
        let a = classical_hardy_pair(&TestFunction::Separable(u1), 1, p).unwrap();
        let b = classical_hardy_pair(&TestFunction::Separable(u2), 1, p).unwrap();
        let factor = lambda.abs().powf(p);
        prop_assert!((b.lhs - factor * a.lhs).abs() <= 1e-12 * b.lhs.max(1e-300));
        prop_assert!((b.rhs - factor * a.rhs).abs() <= 1e-10 * b.rhs.max(1e-300));
    }
}
