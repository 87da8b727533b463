//! Finite metric spaces: explicit tables, regular grids, permutation
//! groups, and symmetric-power views.

mod grid;
mod group;
mod sym;
mod table;

pub use grid::{GridMetric, GridSpace, DEFAULT_TAU_BOX};
pub use group::{PermGroup, GROUP_SIZE_CAP};
pub use sym::{
    for_each_canonical_tuple, is_canonical, orbit_rep, project_orbit, sym_distance, SymPowerSpace,
};
pub(crate) use sym::for_each_canonical_tuple_from;
pub use table::TableSpace;

use crate::error::{Error, Result};

/// A finite metric space the engine can compute on.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Grid(GridSpace),
    Table(TableSpace),
}

impl Space {
    pub fn len(&self) -> usize {
        match self {
            Space::Grid(g) => g.len(),
            Space::Table(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between two points by index. Callers must pass valid
    /// indices; see [`Space::try_distance`] for the checked variant.
    #[inline]
    pub fn distance(&self, p: usize, q: usize) -> f64 {
        match self {
            Space::Grid(g) => g.distance(p, q),
            Space::Table(t) => t.distance(p, q),
        }
    }

    pub fn try_distance(&self, p: usize, q: usize) -> Result<f64> {
        for index in [p, q] {
            if index >= self.len() {
                return Err(Error::PointOutOfRange {
                    index,
                    len: self.len(),
                });
            }
        }
        Ok(self.distance(p, q))
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Space::Grid(g) => g.diameter(),
            Space::Table(t) => t.diameter(),
        }
    }

    /// Spatial resolution limit: one grid cell diagonal, or the smallest
    /// positive distance of a table space.
    pub fn cell_diagonal(&self) -> f64 {
        match self {
            Space::Grid(g) => g.cell_diagonal(),
            Space::Table(t) => t.min_positive_distance(),
        }
    }

    pub fn as_grid(&self) -> Option<&GridSpace> {
        match self {
            Space::Grid(g) => Some(g),
            Space::Table(_) => None,
        }
    }

    /// Maximum metric on m-tuples: `max_i d(x_i, y_i)`.
    pub fn power_distance(&self, x: &[usize], y: &[usize]) -> Result<f64> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::ArityMismatch {
                expected: x.len().max(1),
                got: y.len(),
            });
        }
        let mut worst = 0.0f64;
        for (&p, &q) in x.iter().zip(y) {
            worst = worst.max(self.try_distance(p, q)?);
        }
        Ok(worst)
    }
}

/// Hausdorff distance between two nonempty point sets.
pub fn hausdorff(space: &Space, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty { what: "point set" });
    }
    Ok(directed_hausdorff(space, a, b).max(directed_hausdorff(space, b, a)))
}

fn directed_hausdorff(space: &Space, a: &[usize], b: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for &x in a {
        let mut nearest = f64::INFINITY;
        for &y in b {
            let d = space.distance(x, y);
            if d < nearest {
                nearest = d;
                if nearest <= worst {
                    break;
                }
            }
        }
        if nearest > worst {
            worst = nearest;
        }
    }
    worst
}
