//! The fixed-point solver: monotone iteration of the system operator from a
//! configurable seed, residual verification and multi-seed uniqueness
//! probing.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gifs::{attractor_set, psi, GifSystem};
use crate::measure::{hypograph_hausdorff, sup_distance, StarMeasure};
use crate::space::Space;

/// Where the iteration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStrategy {
    /// Indicator of the set-map attractor; from here the value sequence is
    /// pointwise nonincreasing.
    AttractorSupport,
    /// Indicator of the whole space.
    Full,
    /// Point mass at point index 0.
    DiracCorner,
}

impl std::fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SeedStrategy::AttractorSupport => "attractor_support",
            SeedStrategy::Full => "full",
            SeedStrategy::DiracCorner => "dirac_corner",
        };
        f.write_str(name)
    }
}

/// Distance used for the convergence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceMode {
    Sup,
    HypographHausdorff,
}

impl std::fmt::Display for ConvergenceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ConvergenceMode::Sup => "sup",
            ConvergenceMode::HypographHausdorff => "hypograph_hausdorff",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub seed: SeedStrategy,
    pub epsilon: f64,
    pub max_iter: usize,
    pub mode: ConvergenceMode,
    /// Level quantization for the hypograph distance; 256 matches the
    /// 8-bit render scale.
    pub q: u32,
}

impl SolverConfig {
    /// Defaults for a space: hypograph distance at `q = 256` with
    /// `epsilon` = one grid-cell diagonal + `1/q`.
    pub fn default_for(space: &Space) -> Self {
        let q = 256u32;
        Self {
            seed: SeedStrategy::AttractorSupport,
            epsilon: space.cell_diagonal() + 1.0 / q as f64,
            max_iter: 500,
            mode: ConvergenceMode::HypographHausdorff,
            q,
        }
    }

    fn distance(&self, a: &StarMeasure, b: &StarMeasure) -> Result<f64> {
        match self.mode {
            ConvergenceMode::Sup => sup_distance(a, b),
            ConvergenceMode::HypographHausdorff => hypograph_hausdorff(a, b, self.q),
        }
    }
}

/// One row of the iteration trace.
#[derive(Debug, Clone, Serialize)]
pub struct IterationStep {
    pub step: usize,
    /// Distance between successive iterates in the configured mode.
    pub distance: f64,
    /// Sup-mode distance between the same iterates, for diagnostics.
    pub residual_sup: f64,
    /// Support size of the new iterate (above the system support floor).
    pub support: usize,
    /// Largest pointwise increase from the previous iterate; zero for an
    /// exactly monotone run.
    pub nesting_violation: f64,
    pub wall_us: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<IterationStep>,
    pub warnings: Vec<String>,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    pub fn last_distance(&self) -> Option<f64> {
        self.steps.last().map(|s| s.distance)
    }

    pub fn max_nesting_violation(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.nesting_violation)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub measure: StarMeasure,
    pub trace: IterationTrace,
    pub converged: bool,
}

fn seed_measure(system: &GifSystem, strategy: SeedStrategy) -> Result<StarMeasure> {
    let space = system.space().clone();
    match strategy {
        SeedStrategy::Full => {
            let all: Vec<usize> = (0..space.len()).collect();
            StarMeasure::from_support(space, &all)
        }
        SeedStrategy::DiracCorner => StarMeasure::dirac(space, 0),
        SeedStrategy::AttractorSupport => {
            let max_iter = (2 * space.len()).max(64);
            let attractor = attractor_set(system, max_iter, 0.0)?;
            StarMeasure::from_support(space, &attractor)
        }
    }
}

/// Iterates the operator until successive iterates are within `epsilon` in
/// the configured mode. The returned measure satisfies
/// `distance(measure, psi(measure)) <= epsilon` by construction. When
/// `max_iter` runs out the last iterate and full trace come back with
/// `converged = false`.
pub fn solve(system: &GifSystem, cfg: &SolverConfig) -> Result<SolveResult> {
    let mut current = seed_measure(system, cfg.seed)?;
    let mut trace = IterationTrace::default();
    for step in 0..cfg.max_iter {
        let started = Instant::now();
        let next = psi(system, &current)?;
        let distance = cfg.distance(&current, &next)?;
        let residual_sup = sup_distance(&current, &next)?;
        let nesting_violation = current
            .values()
            .iter()
            .zip(next.values())
            .map(|(&a, &b)| (b - a).max(0.0))
            .fold(0.0, f64::max);
        trace.steps.push(IterationStep {
            step,
            distance,
            residual_sup,
            support: next.support(system.tau_supp()).len(),
            nesting_violation,
            wall_us: started.elapsed().as_micros() as u64,
        });
        if distance <= cfg.epsilon {
            // `current` verifies the residual bound against its own image.
            return Ok(SolveResult {
                measure: current,
                trace,
                converged: true,
            });
        }
        current = next;
    }
    Ok(SolveResult {
        measure: current,
        trace,
        converged: false,
    })
}

/// Distance between a measure and its image under the operator.
pub fn residual(
    system: &GifSystem,
    mu: &StarMeasure,
    mode: ConvergenceMode,
    q: u32,
) -> Result<f64> {
    let image = psi(system, mu)?;
    match mode {
        ConvergenceMode::Sup => sup_distance(mu, &image),
        ConvergenceMode::HypographHausdorff => hypograph_hausdorff(mu, &image, q),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub strategies: Vec<SeedStrategy>,
    pub iterations: Vec<usize>,
    /// Pairwise distances between the limits, in the configured mode.
    pub pairwise: Vec<f64>,
    pub max_pairwise: f64,
}

/// Runs the solver once per seed strategy and reports the worst pairwise
/// distance between the limits. At desk scale, agreement within `2 epsilon`
/// is the uniqueness signal. Fails if any run does not converge.
pub fn uniqueness_probe(
    system: &GifSystem,
    cfg: &SolverConfig,
    strategies: &[SeedStrategy],
) -> Result<UniquenessReport> {
    if strategies.len() < 2 {
        return Err(Error::Empty {
            what: "strategy list (need at least two)",
        });
    }
    let mut limits = Vec::with_capacity(strategies.len());
    let mut iterations = Vec::with_capacity(strategies.len());
    for &strategy in strategies {
        let run_cfg = SolverConfig {
            seed: strategy,
            ..cfg.clone()
        };
        let result = solve(system, &run_cfg)?;
        if !result.converged {
            return Err(Error::NoConvergence {
                iterations: result.trace.iterations(),
                last_distance: result.trace.last_distance().unwrap_or(f64::NAN),
            });
        }
        iterations.push(result.trace.iterations());
        limits.push(result.measure);
    }
    let mut pairwise = Vec::new();
    for i in 0..limits.len() {
        for j in (i + 1)..limits.len() {
            pairwise.push(cfg.distance(&limits[i], &limits[j])?);
        }
    }
    let max_pairwise = pairwise.iter().copied().fold(0.0, f64::max);
    Ok(UniquenessReport {
        strategies: strategies.to_vec(),
        iterations,
        pairwise,
        max_pairwise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gifs::{AffineMap, GifsMap};
    use crate::space::{GridMetric, GridSpace, PermGroup};
    use crate::tnorm::TNorm;
    use std::sync::Arc;

    fn interval(nodes: usize) -> Arc<Space> {
        Arc::new(Space::Grid(
            GridSpace::new(vec![[0.0, 1.0]], vec![nodes], GridMetric::Chebyshev).unwrap(),
        ))
    }

    fn map1(a: f64, b: f64) -> GifsMap {
        GifsMap::Affine(AffineMap {
            blocks: vec![vec![a]],
            offset: vec![b],
        })
    }

    fn halving_system(nodes: usize) -> GifSystem {
        GifSystem::new(
            interval(nodes),
            PermGroup::trivial(1),
            vec![map1(0.5, 0.0)],
            vec![1.0],
            TNorm::Minimum,
        )
        .unwrap()
    }

    #[test]
    fn single_halving_map_converges_to_point_mass_at_zero() {
        // Sup-mode stopping runs lattice-valued iterations all the way to
        // the exact fixed point.
        let sys = halving_system(129);
        let cfg = SolverConfig {
            mode: ConvergenceMode::Sup,
            epsilon: 1.0 / 256.0,
            ..SolverConfig::default_for(sys.space())
        };
        for seed in [
            SeedStrategy::Full,
            SeedStrategy::AttractorSupport,
            SeedStrategy::DiracCorner,
        ] {
            let run = SolverConfig { seed, ..cfg.clone() };
            let result = solve(&sys, &run).unwrap();
            assert!(result.converged, "seed {seed} did not converge");
            let expected = StarMeasure::dirac(sys.space().clone(), 0).unwrap();
            assert_eq!(
                sup_distance(&result.measure, &expected).unwrap(),
                0.0,
                "seed {seed} limit differs"
            );
        }
    }

    #[test]
    fn binary_system_reaches_the_exact_lattice_fixed_point() {
        // Maps x/2 and x/2 + 1/2 with weights (1, 1/2) under minimum: the
        // unique fixed point has value 1 at node 0 and 1/2 elsewhere. On
        // lattice values the iteration lands on it exactly, and sup-mode
        // stopping runs it all the way there.
        let space = interval(65);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::trivial(1),
            vec![map1(0.5, 0.0), map1(0.5, 0.5)],
            vec![1.0, 0.5],
            TNorm::Minimum,
        )
        .unwrap();
        let cfg = SolverConfig {
            mode: ConvergenceMode::Sup,
            epsilon: 1.0 / 256.0,
            ..SolverConfig::default_for(&space)
        };
        let result = solve(&sys, &cfg).unwrap();
        assert!(result.converged);
        assert_eq!(result.measure.value(0), 1.0);
        for x in 1..65 {
            assert_eq!(result.measure.value(x), 0.5, "node {x}");
        }
        // Exact fixed point: residual is exactly zero.
        assert_eq!(
            residual(&sys, &result.measure, ConvergenceMode::Sup, cfg.q).unwrap(),
            0.0
        );
        // Attractor seed makes the run exactly monotone.
        assert_eq!(result.trace.max_nesting_violation(), 0.0);
    }

    #[test]
    fn fixed_dirac_has_zero_residual() {
        let sys = halving_system(65);
        let d0 = StarMeasure::dirac(sys.space().clone(), 0).unwrap();
        assert_eq!(residual(&sys, &d0, ConvergenceMode::Sup, 256).unwrap(), 0.0);
        assert_eq!(
            residual(&sys, &d0, ConvergenceMode::HypographHausdorff, 256).unwrap(),
            0.0
        );
    }

    #[test]
    fn identity_system_has_zero_residual_everywhere() {
        let space = interval(17);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::trivial(1),
            vec![map1(1.0, 0.0)],
            vec![1.0],
            TNorm::Minimum,
        )
        .unwrap();
        let mut values = vec![0.25; 17];
        values[9] = 1.0;
        let mu = StarMeasure::new(space, values).unwrap();
        assert_eq!(residual(&sys, &mu, ConvergenceMode::Sup, 256).unwrap(), 0.0);
        assert_eq!(
            residual(&sys, &mu, ConvergenceMode::HypographHausdorff, 256).unwrap(),
            0.0
        );
    }

    #[test]
    fn uniqueness_probe_agrees_for_contractions() {
        let sys = halving_system(129);
        let cfg = SolverConfig {
            mode: ConvergenceMode::Sup,
            epsilon: 1.0 / 256.0,
            ..SolverConfig::default_for(sys.space())
        };
        let report = uniqueness_probe(
            &sys,
            &cfg,
            &[SeedStrategy::Full, SeedStrategy::DiracCorner],
        )
        .unwrap();
        assert_eq!(report.max_pairwise, 0.0);
    }

    #[test]
    fn uniqueness_probe_exposes_the_identity_system() {
        // Every measure is fixed by the identity map, so different seeds
        // stay far apart.
        let space = interval(33);
        let sys = GifSystem::new(
            space,
            PermGroup::trivial(1),
            vec![map1(1.0, 0.0)],
            vec![1.0],
            TNorm::Minimum,
        )
        .unwrap();
        let cfg = SolverConfig::default_for(sys.space());
        let report = uniqueness_probe(
            &sys,
            &cfg,
            &[SeedStrategy::Full, SeedStrategy::DiracCorner],
        )
        .unwrap();
        assert!(report.max_pairwise > 10.0 * cfg.epsilon);
    }

    #[test]
    fn probe_needs_two_strategies() {
        let sys = halving_system(17);
        let cfg = SolverConfig::default_for(sys.space());
        assert!(uniqueness_probe(&sys, &cfg, &[SeedStrategy::Full]).is_err());
    }
}
