//! Sampled contraction checking. The check estimates, per map, the worst
//! displacement ratio over pairs at least a threshold apart, for a ladder
//! of thresholds. It is a sampler, not a prover: a passing report means
//! "no violation found among the sampled pairs".

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::space::{sym_distance, Space};

use super::{GifSystem, GifsMap};

/// Number of ladder rungs; thresholds are `diam / 2^k` for `k = 1..=RUNGS`.
const RUNGS: u32 = 10;

#[derive(Debug, Clone, Serialize)]
pub struct LadderEntry {
    pub threshold: f64,
    /// Largest sampled ratio `d(g(x), g(y)) / d(x, y)` over pairs with
    /// `d(x, y) >= threshold`; zero when no pair reached the threshold.
    pub alpha: f64,
    pub pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapContraction {
    pub map_index: usize,
    pub ladder: Vec<LadderEntry>,
    pub contractive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub samples: usize,
    pub seed: u64,
    pub maps: Vec<MapContraction>,
    pub contractive: bool,
}

impl ContractionReport {
    pub fn max_alpha(&self) -> f64 {
        self.maps
            .iter()
            .flat_map(|m| m.ladder.iter())
            .map(|e| e.alpha)
            .fold(0.0, f64::max)
    }
}

/// Samples deterministic pseudo-random pairs of m-tuples and reports the
/// displacement ratio ladder per map. Grid maps are evaluated on raw
/// coordinates, without snapping, so the ratio reflects the map itself
/// rather than the discretization.
pub fn check_contraction(system: &GifSystem, samples: usize, seed: u64) -> ContractionReport {
    let space = system.space();
    let group = system.group();
    let m = system.arity();
    let n = space.len();
    let diam = space.diameter();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    // (dhat, ratio per map) for each usable sampled pair.
    let mut observations: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut out_a = vec![0.0f64; grid_dim(space)];
    let mut out_b = vec![0.0f64; grid_dim(space)];
    for _ in 0..samples {
        let a: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let b: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let dhat = sym_distance(space, group, &a, &b).expect("arity matches by construction");
        if dhat == 0.0 {
            continue;
        }
        let mut ratios = Vec::with_capacity(system.maps().len());
        for map in system.maps() {
            let dout = match (map, space.as_ref()) {
                (GifsMap::Affine(aff), Space::Grid(grid)) => {
                    aff.apply_into(grid, &a, &mut out_a);
                    aff.apply_into(grid, &b, &mut out_b);
                    grid.coord_distance(&out_a, &out_b)
                }
                (GifsMap::Table(t), Space::Table(_)) => {
                    space.distance(t.apply(n, &a), t.apply(n, &b))
                }
                _ => unreachable!("map kind checked against space kind on construction"),
            };
            ratios.push(dout / dhat);
        }
        observations.push((dhat, ratios));
    }

    let maps = (0..system.maps().len())
        .map(|map_index| {
            let mut ladder = Vec::with_capacity(RUNGS as usize);
            for k in 1..=RUNGS {
                let threshold = diam / f64::powi(2.0, k as i32);
                let mut alpha = 0.0f64;
                let mut pairs = 0usize;
                for (dhat, ratios) in &observations {
                    if *dhat >= threshold {
                        pairs += 1;
                        alpha = alpha.max(ratios[map_index]);
                    }
                }
                ladder.push(LadderEntry {
                    threshold,
                    alpha,
                    pairs,
                });
            }
            let any = ladder.iter().any(|e| e.pairs > 0);
            let contractive = diam == 0.0
                || (any && ladder.iter().all(|e| e.pairs == 0 || e.alpha < 1.0));
            MapContraction {
                map_index,
                ladder,
                contractive,
            }
        })
        .collect::<Vec<_>>();

    let contractive = maps.iter().all(|m| m.contractive);
    ContractionReport {
        samples,
        seed,
        maps,
        contractive,
    }
}

fn grid_dim(space: &Space) -> usize {
    match space {
        Space::Grid(g) => g.dim(),
        Space::Table(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gifs::AffineMap;
    use crate::space::{GridMetric, GridSpace, PermGroup};
    use crate::tnorm::TNorm;
    use std::sync::Arc;

    fn system_1d(a: f64, b: f64) -> GifSystem {
        let space = Arc::new(Space::Grid(
            GridSpace::new(vec![[0.0, 1.0]], vec![1025], GridMetric::Chebyshev).unwrap(),
        ));
        GifSystem::new(
            space,
            PermGroup::trivial(1),
            vec![GifsMap::Affine(AffineMap {
                blocks: vec![vec![a]],
                offset: vec![b],
            })],
            vec![1.0],
            TNorm::Minimum,
        )
        .unwrap()
    }

    #[test]
    fn halving_map_sits_at_one_half() {
        let report = check_contraction(&system_1d(0.5, 0.0), 512, 7);
        assert!(report.contractive);
        for entry in &report.maps[0].ladder {
            if entry.pairs > 0 {
                assert!((0.45..=0.55).contains(&entry.alpha), "alpha = {}", entry.alpha);
            }
        }
        assert!(report.maps[0].ladder.iter().any(|e| e.pairs > 0));
    }

    #[test]
    fn identity_is_flagged() {
        let report = check_contraction(&system_1d(1.0, 0.0), 512, 7);
        assert!(!report.contractive);
        assert!(report
            .maps[0]
            .ladder
            .iter()
            .any(|e| e.pairs > 0 && e.alpha >= 1.0));
    }

    #[test]
    fn symmetric_average_contracts_at_half() {
        let space = Arc::new(Space::Grid(
            GridSpace::new(vec![[0.0, 1.0]], vec![257], GridMetric::Chebyshev).unwrap(),
        ));
        let sys = GifSystem::new(
            space,
            PermGroup::symmetric(2).unwrap(),
            vec![GifsMap::Affine(AffineMap {
                blocks: vec![vec![0.25], vec![0.25]],
                offset: vec![0.0],
            })],
            vec![1.0],
            TNorm::Product,
        )
        .unwrap();
        let report = check_contraction(&sys, 512, 11);
        assert!(report.contractive);
        assert!(report.max_alpha() <= 0.5 + 1e-12);
    }

    #[test]
    fn alpha_is_nonincreasing_along_the_ladder() {
        for (a, b) in [(0.5, 0.0), (0.9, 0.05), (1.0, 0.0)] {
            let report = check_contraction(&system_1d(a, b), 256, 3);
            let ladder = &report.maps[0].ladder;
            // Thresholds shrink along the ladder, so alpha grows with the
            // index; reversed, alpha is nonincreasing in the threshold.
            for w in ladder.windows(2) {
                assert!(w[1].alpha >= w[0].alpha - 1e-15);
            }
        }
    }
}
