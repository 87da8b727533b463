//! Symmetric powers of a space under a permutation group: canonical orbit
//! representatives, the quotient metric, and orbit-representative
//! enumeration used by the tuple kernels.

use std::sync::Arc;

use super::{PermGroup, Space};
use crate::error::{Error, Result};

/// The lexicographically minimal element of the orbit `{x . sigma}`.
/// Idempotent and constant on orbits.
pub fn orbit_rep(group: &PermGroup, tuple: &[usize]) -> Vec<usize> {
    debug_assert_eq!(group.arity(), tuple.len());
    let mut best: Option<&[u8]> = None;
    for sigma in group.elements() {
        if cmp_permuted(tuple, sigma, best) == std::cmp::Ordering::Less {
            best = Some(sigma);
        }
    }
    match best {
        Some(sigma) => sigma.iter().map(|&i| tuple[i as usize]).collect(),
        None => tuple.to_vec(),
    }
}

/// Compares `tuple . sigma` against `tuple . best` (identity when `best`
/// is `None`) lexicographically without materializing either.
fn cmp_permuted(tuple: &[usize], sigma: &[u8], best: Option<&[u8]>) -> std::cmp::Ordering {
    for i in 0..tuple.len() {
        let a = tuple[sigma[i] as usize];
        let b = match best {
            Some(t) => tuple[t[i] as usize],
            None => tuple[i],
        };
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Whether `tuple` is its own orbit representative.
pub fn is_canonical(group: &PermGroup, tuple: &[usize]) -> bool {
    group
        .elements()
        .iter()
        .all(|sigma| cmp_permuted(tuple, sigma, None) != std::cmp::Ordering::Less)
}

/// Quotient metric on orbits:
/// `min over sigma in G of max_i d(a_i, b_sigma(i))`.
pub fn sym_distance(space: &Space, group: &PermGroup, a: &[usize], b: &[usize]) -> Result<f64> {
    let m = group.arity();
    if a.len() != m || b.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            got: if a.len() != m { a.len() } else { b.len() },
        });
    }
    let mut best = f64::INFINITY;
    for sigma in group.elements() {
        let mut worst = 0.0f64;
        for i in 0..m {
            let d = space.distance(a[i], b[sigma[i] as usize]);
            if d > worst {
                worst = d;
            }
            if worst >= best {
                break;
            }
        }
        if worst < best {
            best = worst;
        }
    }
    Ok(best)
}

/// Sends an H-orbit to the G-orbit containing it. `H` must be a subgroup
/// of `G`; the map is nonexpanding for the quotient metrics.
pub fn project_orbit(h: &PermGroup, g: &PermGroup, tuple: &[usize]) -> Result<Vec<usize>> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    if tuple.len() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            got: tuple.len(),
        });
    }
    Ok(orbit_rep(g, tuple))
}

/// Calls `f` with every canonical m-tuple whose entries come from `points`
/// (which must be strictly increasing). For the full symmetric group this
/// enumerates nondecreasing tuples directly; for other groups tuples are
/// filtered by the canonicality test.
pub fn for_each_canonical_tuple<F: FnMut(&[usize])>(
    points: &[usize],
    group: &PermGroup,
    mut f: F,
) {
    let m = group.arity();
    let mut tuple = Vec::with_capacity(m);
    for first in 0..points.len() {
        let flow = descend(points, group, kind_of(group), first, &mut tuple, &mut |t| {
            f(t);
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return;
        }
    }
}

/// Enumeration restricted to tuples whose first entry is `points[first]`;
/// the parallel kernels split work on this coordinate. The callback can
/// stop the walk early by returning `ControlFlow::Break`.
pub(crate) fn for_each_canonical_tuple_from<F: FnMut(&[usize]) -> ControlFlow<()>>(
    points: &[usize],
    group: &PermGroup,
    first: usize,
    f: &mut F,
) -> ControlFlow<()> {
    let mut tuple = Vec::with_capacity(group.arity());
    descend(points, group, kind_of(group), first, &mut tuple, f)
}

use std::ops::ControlFlow;

#[derive(Clone, Copy, PartialEq)]
enum GroupKind {
    Trivial,
    FullSymmetric,
    General,
}

fn kind_of(group: &PermGroup) -> GroupKind {
    if group.is_trivial() {
        GroupKind::Trivial
    } else if group.is_full_symmetric() {
        GroupKind::FullSymmetric
    } else {
        GroupKind::General
    }
}

fn descend<F: FnMut(&[usize]) -> ControlFlow<()>>(
    points: &[usize],
    group: &PermGroup,
    kind: GroupKind,
    pos: usize,
    tuple: &mut Vec<usize>,
    f: &mut F,
) -> ControlFlow<()> {
    tuple.push(points[pos]);
    let flow = if tuple.len() == group.arity() {
        if kind != GroupKind::General || is_canonical(group, tuple) {
            f(tuple)
        } else {
            ControlFlow::Continue(())
        }
    } else {
        let start = if kind == GroupKind::FullSymmetric { pos } else { 0 };
        let mut flow = ControlFlow::Continue(());
        for next in start..points.len() {
            flow = descend(points, group, kind, next, tuple, f);
            if flow.is_break() {
                break;
            }
        }
        flow
    };
    tuple.pop();
    flow
}

/// A G-symmetric power view of a space: the set of canonical orbit
/// representatives of m-tuples, metrized by [`sym_distance`].
#[derive(Debug, Clone)]
pub struct SymPowerSpace {
    base: Arc<Space>,
    group: PermGroup,
}

impl SymPowerSpace {
    pub fn new(base: Arc<Space>, group: PermGroup) -> Self {
        Self { base, group }
    }

    pub fn base(&self) -> &Arc<Space> {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.group.arity()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn rep(&self, tuple: &[usize]) -> Vec<usize> {
        orbit_rep(&self.group, tuple)
    }

    pub fn distance(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        sym_distance(&self.base, &self.group, a, b)
    }

    /// All canonical representatives; intended for small spaces and tests.
    pub fn representatives(&self) -> Vec<Vec<usize>> {
        let points: Vec<usize> = (0..self.base.len()).collect();
        let mut out = Vec::new();
        for_each_canonical_tuple(&points, &self.group, |t| out.push(t.to_vec()));
        out
    }
}
