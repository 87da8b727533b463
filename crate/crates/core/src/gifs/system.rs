use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::DEFAULT_TAU_SUPP;
use crate::space::{GridSpace, PermGroup, Space, DEFAULT_TAU_BOX};

/// An affine map from m-tuples of grid points into the box:
/// `g(x_1, ..., x_m) = sum_j A_j x_j + b` with one `d x d` block per
/// tuple slot, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub blocks: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    /// Writes the image coordinates of a node tuple into `out`.
    #[inline]
    pub fn apply_into(&self, grid: &GridSpace, tuple: &[usize], out: &mut [f64]) {
        let d = grid.dim();
        out.copy_from_slice(&self.offset);
        for (block, &x) in self.blocks.iter().zip(tuple) {
            let coords = grid.coords(x);
            for r in 0..d {
                let row = &block[r * d..(r + 1) * d];
                let mut acc = 0.0;
                for (a, &c) in row.iter().zip(coords) {
                    acc += a * c;
                }
                out[r] += acc;
            }
        }
    }

    /// Exact interval bound of the image of the box power: per output
    /// coordinate, the affine form attains its extrema when each input
    /// coordinate sits at the matching box end.
    fn image_bounds(&self, grid: &GridSpace) -> Vec<[f64; 2]> {
        let d = grid.dim();
        let mut out: Vec<[f64; 2]> = self.offset.iter().map(|&b| [b, b]).collect();
        for block in &self.blocks {
            for r in 0..d {
                for c in 0..d {
                    let a = block[r * d + c];
                    let [lo, hi] = grid.bounds()[c];
                    let (t0, t1) = (a * lo, a * hi);
                    out[r][0] += t0.min(t1);
                    out[r][1] += t0.max(t1);
                }
            }
        }
        out
    }
}

/// A map defined by an explicit image table over all `n^m` tuples, in
/// row-major tuple order (first slot slowest). Only available on table
/// spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMap {
    pub images: Vec<usize>,
}

impl TableMap {
    #[inline]
    pub fn apply(&self, n: usize, tuple: &[usize]) -> usize {
        let mut index = 0usize;
        for &t in tuple {
            index = index * n + t;
        }
        self.images[index]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GifsMap {
    Affine(AffineMap),
    Table(TableMap),
}

/// A generalized iterated function system on a finite space: `n` maps from
/// G-orbits of m-tuples into the space, weights with maximum 1, and a
/// triangular norm.
#[derive(Debug, Clone)]
pub struct GifSystem {
    space: Arc<Space>,
    group: PermGroup,
    maps: Vec<GifsMap>,
    weights: Vec<f64>,
    norm: crate::tnorm::TNorm,
    tau_supp: f64,
    tau_box: f64,
}

impl GifSystem {
    /// Builds a system, rejecting structurally malformed input (dimension
    /// or arity mismatches, image indices out of range, map kinds that the
    /// space cannot evaluate). Semantic invariants are checked separately
    /// by [`GifSystem::validate`].
    pub fn new(
        space: Arc<Space>,
        group: PermGroup,
        maps: Vec<GifsMap>,
        weights: Vec<f64>,
        norm: crate::tnorm::TNorm,
    ) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Empty { what: "map list" });
        }
        if weights.len() != maps.len() {
            return Err(Error::ArityMismatch {
                expected: maps.len(),
                got: weights.len(),
            });
        }
        let m = group.arity();
        let n = space.len();
        for (i, map) in maps.iter().enumerate() {
            match (map, space.as_ref()) {
                (GifsMap::Affine(a), Space::Grid(grid)) => {
                    let d = grid.dim();
                    if a.blocks.len() != m {
                        return Err(Error::ArityMismatch {
                            expected: m,
                            got: a.blocks.len(),
                        });
                    }
                    if a.offset.len() != d || a.blocks.iter().any(|b| b.len() != d * d) {
                        return Err(Error::BadMetric {
                            reason: format!("map {i}: affine blocks must be {d}x{d} with a {d}-vector offset"),
                        });
                    }
                }
                (GifsMap::Table(t), Space::Table(_)) => {
                    let expected = n.checked_pow(m as u32).ok_or(Error::SizeCap {
                        what: format!("table map over {n}^{m} tuples"),
                    })?;
                    if t.images.len() != expected {
                        return Err(Error::ArityMismatch {
                            expected,
                            got: t.images.len(),
                        });
                    }
                    if let Some(&bad) = t.images.iter().find(|&&y| y >= n) {
                        return Err(Error::PointOutOfRange { index: bad, len: n });
                    }
                }
                (GifsMap::Affine(_), Space::Table(_)) => {
                    return Err(Error::BadMetric {
                        reason: format!("map {i}: affine maps need a grid space"),
                    })
                }
                (GifsMap::Table(_), Space::Grid(_)) => {
                    return Err(Error::BadMetric {
                        reason: format!("map {i}: table maps need a table space"),
                    })
                }
            }
        }
        Ok(Self {
            space,
            group,
            maps,
            weights,
            norm,
            tau_supp: DEFAULT_TAU_SUPP,
            tau_box: DEFAULT_TAU_BOX,
        })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.group.arity()
    }

    pub fn maps(&self) -> &[GifsMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn norm(&self) -> crate::tnorm::TNorm {
        self.norm
    }

    pub fn tau_supp(&self) -> f64 {
        self.tau_supp
    }

    pub fn set_tau_supp(&mut self, tau: f64) {
        self.tau_supp = tau;
    }

    /// Image point of one map applied to a node tuple; grids snap the raw
    /// affine image onto the lattice.
    #[inline]
    pub(crate) fn apply_map(
        &self,
        map_index: usize,
        tuple: &[usize],
        scratch: &mut [f64],
    ) -> Result<usize> {
        match (&self.maps[map_index], self.space.as_ref()) {
            (GifsMap::Affine(a), Space::Grid(grid)) => {
                a.apply_into(grid, tuple, scratch);
                grid.snap(scratch).map_err(|e| match e {
                    Error::OutOfBox { coords, tau_box } => Error::MapRange {
                        map_index,
                        tuple: tuple.to_vec(),
                        coords,
                        tau_box,
                    },
                    other => other,
                })
            }
            (GifsMap::Table(t), Space::Table(_)) => Ok(t.apply(self.space.len(), tuple)),
            _ => unreachable!("map kind checked against space kind on construction"),
        }
    }

    /// Checks the semantic invariants: weights lie in `[0,1]` with maximum
    /// exactly 1, every map is invariant under the group action on tuple
    /// slots, and every map sends the box power into the box (within
    /// `tau_box`; exact interval arithmetic for affine maps, exhaustive for
    /// table maps).
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for (i, &w) in self.weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&w) {
                issues.push(ValidationIssue::WeightOutOfRange { index: i, value: w });
            }
        }
        let max_w = self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max_w != 1.0 {
            issues.push(ValidationIssue::MaxWeightNotOne { max: max_w });
        }
        for (i, map) in self.maps.iter().enumerate() {
            match map {
                GifsMap::Affine(a) => {
                    // g(x . sigma) = g(x) for affine maps means the block
                    // list is constant on slot orbits: A_j = A_sigma(j),
                    // checked exactly.
                    'outer: for sigma in self.group.elements() {
                        for (j, block) in a.blocks.iter().enumerate() {
                            if a.blocks[sigma[j] as usize] != *block {
                                issues.push(ValidationIssue::NotGroupInvariant {
                                    map_index: i,
                                    sigma: sigma.iter().map(|&s| s as usize).collect(),
                                });
                                break 'outer;
                            }
                        }
                    }
                    if let Space::Grid(grid) = self.space.as_ref() {
                        let bounds = a.image_bounds(grid);
                        for (axis, (img, bx)) in bounds.iter().zip(grid.bounds()).enumerate() {
                            if img[0] < bx[0] - self.tau_box || img[1] > bx[1] + self.tau_box {
                                issues.push(ValidationIssue::MapLeavesBox {
                                    map_index: i,
                                    axis,
                                    image: *img,
                                    bounds: *bx,
                                });
                            }
                        }
                    }
                }
                GifsMap::Table(t) => {
                    let n = self.space.len();
                    let m = self.arity();
                    let total = n.pow(m as u32);
                    let mut tuple = vec![0usize; m];
                    'tuples: for mut ix in 0..total {
                        for slot in (0..m).rev() {
                            tuple[slot] = ix % n;
                            ix /= n;
                        }
                        let image = t.apply(n, &tuple);
                        for sigma in self.group.elements() {
                            let permuted: Vec<usize> =
                                sigma.iter().map(|&s| tuple[s as usize]).collect();
                            if t.apply(n, &permuted) != image {
                                issues.push(ValidationIssue::NotGroupInvariant {
                                    map_index: i,
                                    sigma: sigma.iter().map(|&s| s as usize).collect(),
                                });
                                break 'tuples;
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { issues }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    WeightOutOfRange { index: usize, value: f64 },
    MaxWeightNotOne { max: f64 },
    NotGroupInvariant { map_index: usize, sigma: Vec<usize> },
    MapLeavesBox {
        map_index: usize,
        axis: usize,
        image: [f64; 2],
        bounds: [f64; 2],
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::WeightOutOfRange { index, value } => {
                write!(f, "weight {index} = {value} is outside [0, 1]")
            }
            ValidationIssue::MaxWeightNotOne { max } => {
                write!(f, "max weight must equal 1, got {max}")
            }
            ValidationIssue::NotGroupInvariant { map_index, sigma } => {
                write!(f, "map {map_index} is not invariant under slot permutation {sigma:?}")
            }
            ValidationIssue::MapLeavesBox {
                map_index,
                axis,
                image,
                bounds,
            } => write!(
                f,
                "map {map_index} image on axis {axis} spans [{}, {}], outside box [{}, {}]",
                image[0], image[1], bounds[0], bounds[1]
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "ok")
        } else {
            for (i, issue) in self.issues.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "- {issue}")?;
            }
            Ok(())
        }
    }
}
