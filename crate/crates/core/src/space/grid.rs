use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric used between grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMetric {
    Euclidean,
    Chebyshev,
}

/// A regular lattice of nodes over a closed box, with point identity by
/// node index. Axis 0 varies fastest in the flat index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpace {
    bounds: Vec<[f64; 2]>,
    resolution: Vec<usize>,
    metric: GridMetric,
    steps: Vec<f64>,
    strides: Vec<usize>,
    coords: Vec<f64>,
    tau_box: f64,
}

/// Tolerance by which the box is inflated when mapping raw coordinates
/// onto nodes.
pub const DEFAULT_TAU_BOX: f64 = 1e-9;

impl GridSpace {
    pub fn new(bounds: Vec<[f64; 2]>, resolution: Vec<usize>, metric: GridMetric) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Empty { what: "grid box" });
        }
        if bounds.len() != resolution.len() {
            return Err(Error::BadMetric {
                reason: format!(
                    "box has {} axes but resolution has {}",
                    bounds.len(),
                    resolution.len()
                ),
            });
        }
        for (axis, (b, &r)) in bounds.iter().zip(&resolution).enumerate() {
            if !b[0].is_finite() || !b[1].is_finite() || b[0] >= b[1] {
                return Err(Error::BadMetric {
                    reason: format!("axis {axis} box [{}, {}] is not a proper interval", b[0], b[1]),
                });
            }
            if r < 2 {
                return Err(Error::BadMetric {
                    reason: format!("axis {axis} needs at least 2 nodes, got {r}"),
                });
            }
        }
        let steps: Vec<f64> = bounds
            .iter()
            .zip(&resolution)
            .map(|(b, &r)| (b[1] - b[0]) / (r - 1) as f64)
            .collect();
        let mut strides = vec![1usize; resolution.len()];
        for axis in 1..resolution.len() {
            strides[axis] = strides[axis - 1] * resolution[axis - 1];
        }
        let len: usize = resolution.iter().product();
        let dim = bounds.len();
        let mut coords = vec![0.0; len * dim];
        for i in 0..len {
            let base = i * dim;
            let mut rem = i;
            for axis in 0..dim {
                let k = rem % resolution[axis];
                rem /= resolution[axis];
                coords[base + axis] = bounds[axis][0] + k as f64 * steps[axis];
            }
        }
        Ok(Self {
            bounds,
            resolution,
            metric,
            steps,
            strides,
            coords,
            tau_box: DEFAULT_TAU_BOX,
        })
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    pub fn metric(&self) -> GridMetric {
        self.metric
    }

    pub fn tau_box(&self) -> f64 {
        self.tau_box
    }

    /// Node coordinates as a slice of length `dim`.
    #[inline]
    pub fn coords(&self, index: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[index * d..(index + 1) * d]
    }

    /// Distance between two raw coordinate tuples under the grid metric.
    #[inline]
    pub fn coord_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.metric {
            GridMetric::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            GridMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }

    #[inline]
    pub fn distance(&self, p: usize, q: usize) -> f64 {
        self.coord_distance(self.coords(p), self.coords(q))
    }

    pub fn diameter(&self) -> f64 {
        let extents = self.bounds.iter().map(|b| b[1] - b[0]);
        match self.metric {
            GridMetric::Chebyshev => extents.fold(0.0, f64::max),
            GridMetric::Euclidean => extents.map(|e| e * e).sum::<f64>().sqrt(),
        }
    }

    /// Longest distance between neighbouring nodes, i.e. the diagonal of one
    /// grid cell under the grid metric.
    pub fn cell_diagonal(&self) -> f64 {
        match self.metric {
            GridMetric::Chebyshev => self.steps.iter().copied().fold(0.0, f64::max),
            GridMetric::Euclidean => self.steps.iter().map(|s| s * s).sum::<f64>().sqrt(),
        }
    }

    /// Nearest node to a raw coordinate tuple. Ties round toward the lower
    /// index on each axis. Coordinates may exceed the box by at most
    /// `tau_box`.
    pub fn snap(&self, point: &[f64]) -> Result<usize> {
        if point.len() != self.dim() {
            return Err(Error::ArityMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        let mut index = 0usize;
        for axis in 0..self.dim() {
            let [lo, hi] = self.bounds[axis];
            let x = point[axis];
            if !x.is_finite() || x < lo - self.tau_box || x > hi + self.tau_box {
                return Err(Error::OutOfBox {
                    coords: point.to_vec(),
                    tau_box: self.tau_box,
                });
            }
            let frac = ((x - lo) / self.steps[axis]).clamp(0.0, (self.resolution[axis] - 1) as f64);
            let base = frac.floor();
            let k = if frac - base <= 0.5 { base } else { base + 1.0 } as usize;
            index += self.strides[axis] * k.min(self.resolution[axis] - 1);
        }
        Ok(index)
    }
}
