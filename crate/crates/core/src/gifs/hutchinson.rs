//! Set-level dynamics: one application of the set map
//! `A -> union_i g_i(orbit reps of A^m)` and the attractor iteration.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::space::{for_each_canonical_tuple_from, hausdorff};

use super::GifSystem;

/// One application of the set map: images of all orbit-representative
/// tuples drawn from `set`, under every map. The input must be sorted
/// ascending; the output is sorted ascending.
pub fn hutchinson_step(system: &GifSystem, set: &[usize]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::Empty { what: "point set" });
    }
    let n = system.space().len();

    let mask = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..set.len())
                .into_par_iter()
                .try_fold(
                    || vec![false; n],
                    |mut mask, first| -> Result<Vec<bool>> {
                        mark_from(system, set, first, &mut mask)?;
                        Ok(mask)
                    },
                )
                .try_reduce(
                    || vec![false; n],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(&b) {
                            *x |= *y;
                        }
                        Ok(a)
                    },
                )?
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut mask = vec![false; n];
            for first in 0..set.len() {
                mark_from(system, set, first, &mut mask)?;
            }
            mask
        }
    };
    Ok((0..n).filter(|&i| mask[i]).collect())
}

fn mark_from(system: &GifSystem, set: &[usize], first: usize, mask: &mut [bool]) -> Result<()> {
    let dim = match system.space().as_ref() {
        crate::space::Space::Grid(g) => g.dim(),
        crate::space::Space::Table(_) => 0,
    };
    let mut scratch = vec![0.0f64; dim];
    let mut first_err: Option<Error> = None;
    let _ = for_each_canonical_tuple_from(set, system.group(), first, &mut |tuple| {
        for i in 0..system.maps().len() {
            match system.apply_map(i, tuple, &mut scratch) {
                Ok(y) => mask[y] = true,
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

/// Iterates the set map from the full point set until two successive sets
/// are within `tol` in Hausdorff distance (equality when `tol` is zero).
/// Starting from the full set the iteration is nested decreasing, so on a
/// finite space it terminates exactly.
pub fn attractor_set(system: &GifSystem, max_iter: usize, tol: f64) -> Result<Vec<usize>> {
    let space = system.space();
    let mut current: Vec<usize> = (0..space.len()).collect();
    let mut last_distance = f64::INFINITY;
    for _ in 0..max_iter {
        let next = hutchinson_step(system, &current)?;
        if next == current {
            return Ok(next);
        }
        last_distance = hausdorff(space, &current, &next)?;
        if last_distance <= tol {
            return Ok(next);
        }
        current = next;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_distance,
    })
}
