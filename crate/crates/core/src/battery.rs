//! The default verification battery: every family crossed with every
//! applicable functional over N in {1, 2, 3} and p in {N + 1/2, N + 1,
//! 2N + 1}, plus seeded random inputs for the statistical criteria.
//!
//! Jobs are pure descriptions; evaluation is deterministic, so batches may
//! run in parallel and reports merge in job order regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{
    classical_hardy_pair, improved_hardy_pair, improved_hardy_radial_pair, kernel_hardy_pair,
    radialisation_contraction_pair, sup_exchange_pair, uncertainty_pair, weighted_1d_hardy_pair,
    InequalityPair, UncertaintyBranch, UncertaintyOutcome, UncertaintyVariant, WeightPair,
};
use crate::functions::{
    harmonic_value, make_family, radial_value, FamilyKind, FamilySpec, TensorFunction,
    TestFunction,
};
use crate::grid::{RadialGrid, RadialProfile};
use crate::rearrange::decreasing_rearrangement;
use crate::sphere::{build_angular_quadrature, AngularQuadrature};
use crate::verify::{check, ConvergenceRow, InequalityReport, TolerancePolicy, Verdict};

/// Functionals addressable by key (CLI theorem names).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalId {
    Classical,
    Kernel,
    Weighted1d,
    ImprovedRadial,
    Improved,
    RadialiseContraction,
    SupExchange,
    UncertaintyRadial,
    Uncertainty,
}

impl FunctionalId {
    pub const ALL: [FunctionalId; 9] = [
        FunctionalId::Classical,
        FunctionalId::Kernel,
        FunctionalId::Weighted1d,
        FunctionalId::ImprovedRadial,
        FunctionalId::Improved,
        FunctionalId::RadialiseContraction,
        FunctionalId::SupExchange,
        FunctionalId::UncertaintyRadial,
        FunctionalId::Uncertainty,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FunctionalId::Classical => "classical",
            FunctionalId::Kernel => "kernel",
            FunctionalId::Weighted1d => "weighted1d",
            FunctionalId::ImprovedRadial => "improved-radial",
            FunctionalId::Improved => "improved",
            FunctionalId::RadialiseContraction => "radialise-contraction",
            FunctionalId::SupExchange => "sup-exchange",
            FunctionalId::UncertaintyRadial => "uncertainty-radial",
            FunctionalId::Uncertainty => "uncertainty",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        FunctionalId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown theorem '{s}'; expected one of {}",
                    FunctionalId::ALL
                        .iter()
                        .map(|f| f.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }

    /// Whether the functional takes tensor-sampled (angular) input.
    pub fn needs_tensor(&self) -> bool {
        matches!(
            self,
            FunctionalId::Improved
                | FunctionalId::RadialiseContraction
                | FunctionalId::SupExchange
                | FunctionalId::Uncertainty
        )
    }
}

/// Radial grid parameters of a job; the grid is rebuilt per evaluation so
/// refinement can scale it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_min: 1e-4,
            r_max: 1e4,
            n: 4096,
        }
    }
}

impl GridSpec {
    pub fn build(&self, factor: usize) -> Result<RadialGrid> {
        RadialGrid::log_spaced(self.r_min, self.r_max, self.n * factor)
    }
}

/// One (function, functional) evaluation unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryJob {
    pub key: String,
    pub functional: FunctionalId,
    pub family: FamilySpec,
    pub grid: GridSpec,
    pub angular_resolution: usize,
}

/// A single checkable result produced by a job.
#[derive(Debug, Clone)]
pub struct EvaluatedItem {
    pub key: String,
    pub outcome: PairOutcome,
    /// Compare with zero tolerance (exact discrete dominance claims).
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub enum PairOutcome {
    Pair(InequalityPair),
    Unbounded { label: String },
}

impl BatteryJob {
    pub fn new(functional: FunctionalId, family: FamilySpec, grid: GridSpec, angular_resolution: usize) -> Self {
        let key = format!(
            "{}/{}/N{}/p{}",
            functional.as_str(),
            family.describe(),
            family.dim,
            family.p
        );
        BatteryJob {
            key,
            functional,
            family,
            grid,
            angular_resolution,
        }
    }

    fn build_function(&self, radial_factor: usize, angular_factor: usize) -> Result<TestFunction> {
        let grid = self.grid.build(radial_factor)?;
        let needs_quad = self.functional.needs_tensor()
            || matches!(self.family.kind, FamilyKind::AngularMix { .. });
        let quad = if needs_quad {
            Some(build_angular_quadrature(
                self.family.dim,
                self.angular_resolution * angular_factor,
            )?)
        } else {
            None
        };
        let u = make_family(&self.family, &grid, quad.as_ref())?;
        // tensor functionals accept radial families by lifting them to
        // constant angular samples
        if self.functional.needs_tensor() {
            if let TestFunction::Separable(s) = &u {
                let lifted =
                    TensorFunction::from_radial(&s.radial, quad.expect("quadrature built"), self.family.p)?;
                return Ok(TestFunction::Tensor(lifted));
            }
        }
        Ok(u)
    }

    /// Evaluate at `radial_factor` times the base radial resolution.
    pub fn evaluate(&self, radial_factor: usize) -> Result<Vec<EvaluatedItem>> {
        self.evaluate_scaled(radial_factor, 1)
    }

    fn evaluate_scaled(&self, radial_factor: usize, angular_factor: usize) -> Result<Vec<EvaluatedItem>> {
        let u = self.build_function(radial_factor, angular_factor)?;
        evaluate_functional(self.functional, &u, self.family.dim, self.family.p, &self.key)
    }
}

/// Evaluate one functional on an already-built test function. Triple-valued
/// functionals additionally emit the exact improvement-chain comparison;
/// uncertainty functionals emit both branches.
pub fn evaluate_functional(
    functional: FunctionalId,
    u: &TestFunction,
    dim: u32,
    p: f64,
    key: &str,
) -> Result<Vec<EvaluatedItem>> {
    let mut items = Vec::new();
    match functional {
        FunctionalId::Classical => {
            let pair = classical_hardy_pair(u, dim, p)?;
            items.push(EvaluatedItem {
                key: key.to_string(),
                outcome: PairOutcome::Pair(pair),
                exact: false,
            });
        }
        FunctionalId::ImprovedRadial | FunctionalId::Improved => {
            let triple = match (u, functional) {
                (TestFunction::Separable(s), FunctionalId::ImprovedRadial) => {
                    improved_hardy_radial_pair(s, dim, p)?
                }
                (TestFunction::Tensor(t), FunctionalId::Improved) => {
                    improved_hardy_pair(t, dim, p)?
                }
                _ => {
                    return Err(Error::domain(format!(
                        "functional {} does not accept this function representation",
                        functional.as_str()
                    )))
                }
            };
            items.push(EvaluatedItem {
                key: key.to_string(),
                outcome: PairOutcome::Pair(triple.as_pair()),
                exact: false,
            });
            // the sup-improved lhs dominates the plain one exactly
            items.push(EvaluatedItem {
                key: format!("{key}#improvement-chain"),
                outcome: PairOutcome::Pair(InequalityPair {
                    lhs: triple.classical_lhs,
                    rhs: triple.improved_lhs,
                    constant: 1.0,
                    label: format!("{}/chain", triple.label),
                    discretization: triple.discretization.clone(),
                }),
                exact: true,
            });
        }
        FunctionalId::Kernel => {
            let TestFunction::Separable(s) = u else {
                return Err(Error::domain("kernel functional takes a radial function"));
            };
            let f = &s.radial;
            let ones = f.map(|_| 1.0)?;
            let h = f.with_values(f.grid().nodes().to_vec())?;
            let weights = WeightPair::new(ones, h)?;
            let pair = kernel_hardy_pair(f, &weights, p)?;
            items.push(EvaluatedItem {
                key: key.to_string(),
                outcome: PairOutcome::Pair(pair),
                exact: false,
            });
        }
        FunctionalId::Weighted1d => {
            let TestFunction::Separable(s) = u else {
                return Err(Error::domain("weighted1d functional takes a radial function"));
            };
            let m = (8 * s.radial.len()).clamp(1 << 13, 1 << 17);
            let phi = decreasing_rearrangement(&s.radial, m)?;
            let pair = weighted_1d_hardy_pair(&phi, dim, p)?;
            items.push(EvaluatedItem {
                key: key.to_string(),
                outcome: PairOutcome::Pair(pair),
                exact: false,
            });
        }
        FunctionalId::RadialiseContraction | FunctionalId::SupExchange => {
            let TestFunction::Tensor(t) = u else {
                return Err(Error::domain("this functional takes a tensor function"));
            };
            let ones = RadialProfile::from_fn(t.grid().clone(), |_| 1.0)?;
            let pair = match functional {
                FunctionalId::RadialiseContraction => radialisation_contraction_pair(t, &ones, p)?,
                _ => sup_exchange_pair(t, &ones, p)?,
            };
            items.push(EvaluatedItem {
                key: key.to_string(),
                outcome: PairOutcome::Pair(pair),
                exact: false,
            });
        }
        FunctionalId::UncertaintyRadial | FunctionalId::Uncertainty => {
            let variant = match functional {
                FunctionalId::UncertaintyRadial => UncertaintyVariant::Radial,
                _ => UncertaintyVariant::NonRadial,
            };
            for branch in [UncertaintyBranch::Suffix, UncertaintyBranch::Prefix] {
                let suffix = match branch {
                    UncertaintyBranch::Suffix => "suffix",
                    UncertaintyBranch::Prefix => "prefix",
                };
                let outcome = match uncertainty_pair(u, dim, p, variant, branch)? {
                    UncertaintyOutcome::Finite(pair) => PairOutcome::Pair(pair),
                    UncertaintyOutcome::UnboundedBranch { label } => {
                        PairOutcome::Unbounded { label }
                    }
                };
                items.push(EvaluatedItem {
                    key: format!("{key}#{suffix}"),
                    outcome,
                    exact: false,
                });
            }
        }
    }
    Ok(items)
}

/// All (family x functional) jobs of the default battery.
///
/// The battery runs at twice the default radial resolution: the nodewise
/// suprema clip interior peaks at O(h), and 8192 nodes are needed for the
/// sup-term margins to be stable within the default tolerance under further
/// doubling.
pub fn default_battery() -> Vec<BatteryJob> {
    let mut jobs = Vec::new();
    let grid = GridSpec {
        n: 8192,
        ..GridSpec::default()
    };
    for dim in [1u32, 2, 3] {
        let nf = dim as f64;
        for p in [nf + 0.5, nf + 1.0, 2.0 * nf + 1.0] {
            let a = (p - nf) / p;
            let radial_kinds = [
                FamilyKind::Tent { a: 1.0, b: 3.0 },
                FamilyKind::SmoothBump {
                    center: 2.0,
                    width: 0.75,
                },
                FamilyKind::HardyExtremal { eps: 0.25 * a },
            ];
            let angular_res = match dim {
                1 => 1,
                2 => 32,
                _ => 8,
            };
            for kind in &radial_kinds {
                let spec = FamilySpec::new(kind.clone(), dim, p).expect("battery family");
                for functional in [
                    FunctionalId::Classical,
                    FunctionalId::ImprovedRadial,
                    FunctionalId::Kernel,
                    FunctionalId::Weighted1d,
                    FunctionalId::UncertaintyRadial,
                ] {
                    jobs.push(BatteryJob::new(functional, spec.clone(), grid, angular_res));
                }
            }
            // tensor families: compactly supported radial parts modulated by
            // a low-order harmonic
            for (kind, harmonic) in [
                (FamilyKind::Tent { a: 1.0, b: 3.0 }, 1u32),
                (
                    FamilyKind::SmoothBump {
                        center: 2.0,
                        width: 0.75,
                    },
                    2,
                ),
            ] {
                let spec = FamilySpec::new(
                    FamilyKind::AngularMix {
                        radial: Box::new(kind),
                        harmonic,
                    },
                    dim,
                    p,
                )
                .expect("battery family");
                for functional in [
                    FunctionalId::Classical,
                    FunctionalId::Improved,
                    FunctionalId::RadialiseContraction,
                    FunctionalId::SupExchange,
                    FunctionalId::Uncertainty,
                ] {
                    jobs.push(BatteryJob::new(functional, spec.clone(), grid, angular_res));
                }
            }
        }
    }
    jobs
}

/// Check one evaluated item under the policy (exact items use zero slack).
pub fn report_item(
    item: &EvaluatedItem,
    policy: &TolerancePolicy,
    provenance: &str,
) -> Result<InequalityReport> {
    match &item.outcome {
        PairOutcome::Pair(pair) => {
            let effective = if item.exact {
                TolerancePolicy::exact()
            } else {
                *policy
            };
            let mut report = check(pair, &effective)?;
            report.key = item.key.clone();
            report.provenance = provenance.to_string();
            Ok(report)
        }
        PairOutcome::Unbounded { label } => Ok(InequalityReport {
            key: item.key.clone(),
            label: label.clone(),
            verdict: Verdict::UnboundedBranch,
            margin: None,
            pair: None,
            provenance: provenance.to_string(),
        }),
    }
}

fn run_job(job: &BatteryJob, policy: &TolerancePolicy) -> Result<Vec<InequalityReport>> {
    let provenance = format!(
        "family {}; grid [{}, {}] x {}",
        job.family.describe(),
        job.grid.r_min,
        job.grid.r_max,
        job.grid.n
    );
    let items = job.evaluate(1)?;
    let mut reports: Vec<InequalityReport> = items
        .iter()
        .map(|item| report_item(item, policy, &provenance))
        .collect::<Result<_>>()?;
    if policy.refinement_check {
        let refined = job.evaluate(2)?;
        for (report, item) in reports.iter_mut().zip(&refined) {
            let PairOutcome::Pair(pair) = &item.outcome else {
                continue;
            };
            let refined_margin = (pair.rhs - pair.lhs) / pair.rhs.max(policy.abs).max(f64::MIN_POSITIVE);
            if let Some(m) = report.margin {
                if refined_margin < m - policy.rel {
                    report.verdict = Verdict::Fail;
                    report.provenance = format!(
                        "{provenance}; margin degraded under refinement: {m} -> {refined_margin}"
                    );
                }
            }
        }
    }
    Ok(reports)
}

/// Run jobs in parallel (bounded by `threads` when given, else by
/// `HARDYLAB_THREADS` falling back to the rayon default) and merge the
/// reports in job order.
pub fn run_battery(
    jobs: &[BatteryJob],
    policy: &TolerancePolicy,
    threads: Option<usize>,
) -> Result<Vec<InequalityReport>> {
    policy.validate()?;
    let threads = threads.or_else(|| {
        std::env::var("HARDYLAB_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    let run = || -> Result<Vec<Vec<InequalityReport>>> {
        jobs.par_iter().map(|job| run_job(job, policy)).collect()
    };
    let nested = match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::computation(format!("thread pool: {e}")))?
            .install(run),
        _ => run(),
    }?;
    Ok(nested.into_iter().flatten().collect())
}

/// Margin table under repeated doubling of radial (and, for tensor
/// functionals, angular) resolution.
pub fn convergence_study(job: &BatteryJob, levels: usize) -> Result<Vec<ConvergenceRow>> {
    if levels < 2 {
        return Err(Error::domain("convergence study needs at least 2 levels"));
    }
    let mut rows = Vec::with_capacity(levels);
    for level in 0..levels {
        let factor = 1 << level;
        let items = job.evaluate_scaled(factor, if job.functional.needs_tensor() { factor } else { 1 })?;
        let Some(first) = items.iter().find_map(|i| match &i.outcome {
            PairOutcome::Pair(p) => Some(p),
            _ => None,
        }) else {
            return Err(Error::domain("job produced no finite pair to study"));
        };
        rows.push(ConvergenceRow {
            radial_nodes: first.discretization.radial_nodes,
            angular_nodes: first.discretization.angular_nodes,
            lhs: first.lhs,
            rhs: first.rhs,
            margin: (first.rhs - first.lhs) / first.rhs.max(1e-12),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Seeded inputs for the statistical batteries.

/// Step profile on equal unit cells with values bounded away from zero
/// (so the rearrangement is exactly the descending sort of |values|).
pub fn seeded_step_profile(seed: u64, max_cells: usize) -> RadialProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = rng.gen_range(2..=max_cells.max(2));
    let values: Vec<f64> = (0..cells)
        .map(|_| {
            let mag = rng.gen_range(0.2..5.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let bounds: Vec<f64> = (0..=cells).map(|j| j as f64).collect();
    RadialProfile::step(bounds, values).expect("seeded step profile")
}

/// Seeded (f, (g, h), p) triple with admissible h: h = r times a positive
/// non-decreasing cumulative sum, so h and h(r)/r are both non-decreasing.
pub fn seeded_kernel_triple(seed: u64, max_nodes: usize) -> (RadialProfile, WeightPair, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6b65726e);
    let n = rng.gen_range(16..=max_nodes.max(16));
    let mut nodes = Vec::with_capacity(n);
    let mut r = rng.gen_range(0.02..0.2);
    for _ in 0..n {
        r += rng.gen_range(0.01..0.12);
        nodes.push(r);
    }
    let grid = RadialGrid::from_nodes(nodes.clone()).expect("seeded grid");

    let mut f_vals = vec![0.0; n];
    for _ in 0..4 {
        let c = rng.gen_range(nodes[1]..nodes[n - 2]);
        let width = rng.gen_range(0.2..1.5);
        let amp = rng.gen_range(-2.0..2.0);
        for (i, &ri) in nodes.iter().enumerate() {
            f_vals[i] += amp * (-((ri - c) / width).powi(2)).exp();
        }
    }
    f_vals[0] = 0.0;
    f_vals[n - 1] = 0.0;
    let f = RadialProfile::linear(grid.clone(), f_vals).expect("seeded f");

    let g_vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
    let g = RadialProfile::linear(grid.clone(), g_vals).expect("seeded g");
    let mut ratio = rng.gen_range(0.1..1.0);
    let h_vals: Vec<f64> = nodes
        .iter()
        .map(|&ri| {
            ratio += rng.gen_range(0.0..0.3);
            ri * ratio
        })
        .collect();
    let h = RadialProfile::linear(grid, h_vals).expect("seeded h");
    let weights = WeightPair::new(g, h).expect("seeded weights are admissible");
    let p = rng.gen_range(1.1..4.0);
    (f, weights, p)
}

fn bump(r: f64, center: f64, width: f64) -> f64 {
    let x = (r - center) / width;
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Smooth compactly supported tensor function: a few separable bump terms
/// with distinct harmonic modulations (non-radial in general).
pub fn seeded_tensor_function(
    seed: u64,
    grid: &RadialGrid,
    quad: &AngularQuadrature,
    p_hint: f64,
) -> TensorFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x74656e73);
    let dim = quad.dim;
    let terms: Vec<(f64, f64, f64, u32, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.5..2.0),
                rng.gen_range(1.4..4.0),
                rng.gen_range(0.3..1.0),
                rng.gen_range(1..4u32),
                rng.gen_range(-0.4..0.4),
            )
        })
        .collect();
    TensorFunction::from_fn(grid.clone(), quad.clone(), p_hint, |r, sigma| {
        terms
            .iter()
            .map(|&(amp, c, w, k, a)| amp * bump(r, c, w) * (1.0 + a * harmonic_value(dim, k, sigma)))
            .sum()
    })
    .expect("seeded tensor function")
}

/// Nonnegative radial tensor function (constant across the angular nodes).
pub fn seeded_radial_tensor_function(
    seed: u64,
    grid: &RadialGrid,
    quad: &AngularQuadrature,
    p_hint: f64,
) -> TensorFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x72616469);
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.5..2.0),
                rng.gen_range(1.4..4.0),
                rng.gen_range(0.3..1.0),
            )
        })
        .collect();
    TensorFunction::from_fn(grid.clone(), quad.clone(), p_hint, |r, _| {
        terms.iter().map(|&(amp, c, w)| amp * bump(r, c, w)).sum()
    })
    .expect("seeded radial tensor function")
}

/// Radial profile made of the same bump mixture (for hardy_extremal-free
/// radial checks and CLI seeding).
pub fn seeded_radial_profile(seed: u64, grid: &RadialGrid) -> RadialProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x70726f66);
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.5..2.0),
                rng.gen_range(1.4..4.0),
                rng.gen_range(0.3..1.0),
            )
        })
        .collect();
    RadialProfile::from_fn(grid.clone(), |r| {
        terms.iter().map(|&(amp, c, w)| amp * bump(r, c, w)).sum()
    })
    .expect("seeded radial profile")
}

/// Battery job for the `hardy_extremal` radial value helper; exposed for
/// tests that need raw family samples.
pub fn family_radial_sample(kind: &FamilyKind, dim: u32, p: f64, r: f64) -> f64 {
    radial_value(kind, dim, p, r)
}
