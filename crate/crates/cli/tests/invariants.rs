//! Solver invariants on the shipped example systems.

use std::path::{Path, PathBuf};

use starmeasure::config::RunConfig;
use starmeasure::fixpoint::solve;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

const SHIPPED: [&str; 4] = [
    "binary_beta.cfg",
    "single_half.cfg",
    "sym_pair_1d.cfg",
    "sym_pair_2d.cfg",
];

#[test]
fn convergence_distances_are_nonincreasing_after_burn_in() {
    for name in SHIPPED {
        let built = RunConfig::load(&configs_dir().join(name))
            .and_then(|c| c.build())
            .unwrap();
        let result = solve(&built.system, &built.solver).unwrap();
        assert!(result.converged, "{name} must converge");
        let distances: Vec<f64> = result.trace.steps.iter().map(|s| s.distance).collect();
        for (k, w) in distances.windows(2).enumerate().skip(3) {
            assert!(
                w[1] <= w[0] + 1e-15,
                "{name}: distance grew at step {k}: {} -> {}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn identical_configs_give_identical_traces_and_values() {
    for name in SHIPPED {
        let built = RunConfig::load(&configs_dir().join(name))
            .and_then(|c| c.build())
            .unwrap();
        let a = solve(&built.system, &built.solver).unwrap();
        let b = solve(&built.system, &built.solver).unwrap();
        assert_eq!(a.measure.values(), b.measure.values(), "{name} values");
        assert_eq!(a.trace.steps.len(), b.trace.steps.len(), "{name} trace length");
        for (x, y) in a.trace.steps.iter().zip(&b.trace.steps) {
            // Wall time is the one column allowed to differ.
            assert_eq!(x.step, y.step);
            assert_eq!(x.distance, y.distance, "{name} distance");
            assert_eq!(x.residual_sup, y.residual_sup, "{name} residual");
            assert_eq!(x.support, y.support, "{name} support");
            assert_eq!(x.nesting_violation, y.nesting_violation, "{name} nesting");
        }
    }
}
