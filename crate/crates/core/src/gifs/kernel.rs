//! The fused measure-update kernel: enumerate orbit-representative tuples
//! over the support, fold the tensor value, map, snap, and accumulate by
//! pointwise maximum. The tensor power is never materialized, keeping
//! memory at `O(|X|)`.
//!
//! Work is partitioned over the first tuple slot. Each partition owns a
//! private accumulator and partitions merge by pointwise maximum, which is
//! exact and order-independent in floating point, so the result is
//! bit-identical for any worker count.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::measure::StarMeasure;
use crate::space::{for_each_canonical_tuple_from, PermGroup};

use super::GifSystem;

/// Applies the system operator to a measure: for every orbit representative
/// tuple with tensor value above the support floor and every map `i`, the
/// value `w_i * (u(x_1) * ... * u(x_m))` accumulates at the image point.
pub fn psi(system: &GifSystem, mu: &StarMeasure) -> Result<StarMeasure> {
    let space = system.space();
    if !std::sync::Arc::ptr_eq(space, mu.space()) && space.as_ref() != mu.space().as_ref() {
        return Err(Error::SpaceMismatch);
    }
    let support = mu.support(system.tau_supp());
    let values = accumulate(system, mu, &support, system.group())?;
    Ok(StarMeasure::from_raw(space.clone(), values))
}

/// Same operator, but enumerating the full tuple power instead of orbit
/// representatives. Group invariance of the maps and commutativity of the
/// norm make this agree with [`psi`]; it exists to test exactly that.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn psi_full_enumeration(system: &GifSystem, mu: &StarMeasure) -> Result<StarMeasure> {
    let support = mu.support(system.tau_supp());
    let trivial = PermGroup::trivial(system.arity());
    let values = accumulate(system, mu, &support, &trivial)?;
    Ok(StarMeasure::from_raw(system.space().clone(), values))
}

fn accumulate(
    system: &GifSystem,
    mu: &StarMeasure,
    support: &[usize],
    group: &PermGroup,
) -> Result<Vec<f64>> {
    let n = system.space().len();

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..support.len())
            .into_par_iter()
            .try_fold(
                || vec![0.0f64; n],
                |mut acc, first| -> Result<Vec<f64>> {
                    accumulate_from(system, mu, support, group, first, &mut acc)?;
                    Ok(acc)
                },
            )
            .try_reduce(
                || vec![0.0f64; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x = x.max(*y);
                    }
                    Ok(a)
                },
            )
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = vec![0.0f64; n];
        for first in 0..support.len() {
            accumulate_from(system, mu, support, group, first, &mut acc)?;
        }
        Ok(acc)
    }
}

fn accumulate_from(
    system: &GifSystem,
    mu: &StarMeasure,
    support: &[usize],
    group: &PermGroup,
    first: usize,
    acc: &mut [f64],
) -> Result<()> {
    let norm = system.norm();
    let weights = system.weights();
    let tau = system.tau_supp();
    let dim = match system.space().as_ref() {
        crate::space::Space::Grid(g) => g.dim(),
        crate::space::Space::Table(_) => 0,
    };
    let mut scratch = vec![0.0f64; dim];
    let mut first_err: Option<Error> = None;

    let _ = for_each_canonical_tuple_from(support, group, first, &mut |tuple| {
        let tensor = mu.sym_tensor_value(norm, tuple);
        if tensor <= tau {
            return ControlFlow::Continue(());
        }
        for (i, &w) in weights.iter().enumerate() {
            match system.apply_map(i, tuple, &mut scratch) {
                Ok(y) => {
                    let value = norm.eval(w, tensor);
                    if value > acc[y] {
                        acc[y] = value;
                    }
                }
                Err(e) => {
                    first_err = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    });

    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gifs::{AffineMap, GifsMap};
    use crate::space::{GridMetric, GridSpace, Space};
    use crate::tnorm::TNorm;
    use std::sync::Arc;

    fn interval(nodes: usize) -> Arc<Space> {
        Arc::new(Space::Grid(
            GridSpace::new(vec![[0.0, 1.0]], vec![nodes], GridMetric::Chebyshev).unwrap(),
        ))
    }

    fn affine(blocks: Vec<Vec<f64>>, offset: Vec<f64>) -> GifsMap {
        GifsMap::Affine(AffineMap { blocks, offset })
    }

    #[test]
    fn identity_system_fixes_every_measure() {
        let space = interval(9);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::trivial(1),
            vec![affine(vec![vec![1.0]], vec![0.0])],
            vec![1.0],
            TNorm::Minimum,
        )
        .unwrap();
        let mu = StarMeasure::new(
            space,
            vec![0.3, 1.0, 0.0, 0.25, 0.7, 0.1, 0.0, 0.9, 0.5],
        )
        .unwrap();
        let out = psi(&sys, &mu).unwrap();
        assert_eq!(out.values(), mu.values());
    }

    #[test]
    fn dirac_image_under_single_map() {
        // g(x, y) = (x + y)/4 with weight 1 sends the point mass at 0 to
        // the point mass at g(0, 0) = 0.
        let space = interval(9);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::symmetric(2).unwrap(),
            vec![affine(vec![vec![0.25], vec![0.25]], vec![0.0])],
            vec![1.0],
            TNorm::Product,
        )
        .unwrap();
        let d0 = StarMeasure::dirac(space.clone(), 0).unwrap();
        assert_eq!(psi(&sys, &d0).unwrap(), d0);

        // A single map with weight 1 sends dirac(x) to dirac(snap(g(x, x))).
        let d8 = StarMeasure::dirac(space.clone(), 8).unwrap();
        let out = psi(&sys, &d8).unwrap();
        assert_eq!(out, StarMeasure::dirac(space, 4).unwrap());
    }

    #[test]
    fn output_stays_normal() {
        let space = interval(17);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::trivial(1),
            vec![
                affine(vec![vec![0.5]], vec![0.0]),
                affine(vec![vec![0.5]], vec![0.5]),
            ],
            vec![1.0, 0.5],
            TNorm::Product,
        )
        .unwrap();
        let mut mu = StarMeasure::from_support(space.clone(), &(0..17).collect::<Vec<_>>()).unwrap();
        for _ in 0..5 {
            mu = psi(&sys, &mu).unwrap();
            assert_eq!(mu.values().iter().copied().fold(0.0f64, f64::max), 1.0);
        }
    }

    #[test]
    fn monotone_in_the_measure() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let space = interval(17);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::symmetric(2).unwrap(),
            vec![
                affine(vec![vec![0.25], vec![0.25]], vec![0.0]),
                affine(vec![vec![0.25], vec![0.25]], vec![0.5]),
            ],
            vec![1.0, 0.8],
            TNorm::Product,
        )
        .unwrap();
        for _ in 0..20 {
            let mut lo: Vec<f64> = (0..17).map(|_| rng.gen()).collect();
            lo[3] = 1.0;
            let mut hi: Vec<f64> = lo
                .iter()
                .map(|&v| v + rng.gen::<f64>() * (1.0 - v))
                .collect();
            hi[3] = 1.0;
            let mu = StarMeasure::new(space.clone(), lo).unwrap();
            let nu = StarMeasure::new(space.clone(), hi).unwrap();
            let pmu = psi(&sys, &mu).unwrap();
            let pnu = psi(&sys, &nu).unwrap();
            for (a, b) in pmu.values().iter().zip(pnu.values()) {
                assert!(a <= b, "psi broke pointwise monotonicity");
            }
        }
    }

    #[test]
    fn orbit_enumeration_matches_full_enumeration_bitwise() {
        // Dyadic map coefficients and measure values keep every product,
        // sum and tensor fold exact, so representative enumeration and
        // full-power enumeration must agree bit for bit.
        let space = interval(9);
        for norm in [TNorm::Product, TNorm::Minimum, TNorm::Lukasiewicz] {
            for group in [PermGroup::symmetric(2).unwrap(), PermGroup::symmetric(3).unwrap()] {
                let m = group.arity();
                let sys = GifSystem::new(
                    space.clone(),
                    group,
                    vec![
                        affine(vec![vec![0.125]; m], vec![0.0]),
                        affine(vec![vec![0.125]; m], vec![0.5]),
                    ],
                    vec![1.0, 0.5],
                    norm,
                )
                .unwrap();
                let mut values: Vec<f64> = (0..9).map(|i| ((i * 3) % 5) as f64 * 0.25).collect();
                values[2] = 1.0;
                let mu = StarMeasure::new(space.clone(), values).unwrap();
                let by_orbit = psi(&sys, &mu).unwrap();
                let by_full = psi_full_enumeration(&sys, &mu).unwrap();
                assert_eq!(by_orbit.values(), by_full.values());
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_change_bits() {
        let space = interval(65);
        let sys = GifSystem::new(
            space.clone(),
            PermGroup::symmetric(2).unwrap(),
            vec![
                affine(vec![vec![0.25], vec![0.25]], vec![0.0]),
                affine(vec![vec![0.25], vec![0.25]], vec![0.5]),
            ],
            vec![1.0, 0.7],
            TNorm::Product,
        )
        .unwrap();
        let mut values: Vec<f64> = (0..65).map(|i| 1.0 / (1.0 + i as f64)).collect();
        values[0] = 1.0;
        let mu = StarMeasure::new(space, values).unwrap();

        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| psi(&sys, &mu).unwrap())
        };
        let one = run(1);
        let eight = run(8);
        assert_eq!(one.values(), eight.values());
    }
}
