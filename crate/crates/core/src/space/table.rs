use crate::error::{Error, Result};

/// A finite metric space given by an explicit distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSpace {
    n: usize,
    dist: Vec<f64>,
}

const METRIC_TOL: f64 = 1e-12;

impl TableSpace {
    /// Builds a space from a full `n x n` distance matrix. Symmetry, zero
    /// diagonal and the triangle inequality are verified up to 1e-12.
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Empty { what: "metric table" });
        }
        let mut dist = vec![0.0; n * n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadMetric {
                    reason: format!("row {i} has {} entries, expected {n}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::BadMetric {
                        reason: format!("d({i},{j}) = {v} is not a finite nonnegative number"),
                    });
                }
                dist[i * n + j] = v;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::BadMetric {
                    reason: format!("d({i},{i}) = {} is nonzero", dist[i * n + i]),
                });
            }
            for j in 0..i {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::BadMetric {
                        reason: format!("d({i},{j}) differs from d({j},{i})"),
                    });
                }
                if i != j && dist[i * n + j] == 0.0 {
                    return Err(Error::BadMetric {
                        reason: format!("d({i},{j}) = 0 for distinct points"),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i * n + j] > dist[i * n + k] + dist[k * n + j] + METRIC_TOL {
                        return Err(Error::BadMetric {
                            reason: format!("triangle inequality fails for ({i},{j},{k})"),
                        });
                    }
                }
            }
        }
        Ok(Self { n, dist })
    }

    /// Product of two point counts with the sup metric
    /// `d((x,y),(x',y')) = max(d_X(x,x'), d_Y(y,y'))`; the pair `(x, y)`
    /// flattens to `x * len(Y) + y`.
    pub fn product_sup(
        nx: usize,
        ny: usize,
        dx: impl Fn(usize, usize) -> f64,
        dy: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Empty { what: "product factor" });
        }
        let n = nx * ny;
        let mut dist = vec![0.0; n * n];
        for a in 0..n {
            let (x1, y1) = (a / ny, a % ny);
            for b in 0..n {
                let (x2, y2) = (b / ny, b % ny);
                dist[a * n + b] = dx(x1, x2).max(dy(y1, y2));
            }
        }
        Ok(Self { n, dist })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn distance(&self, p: usize, q: usize) -> f64 {
        self.dist[p * self.n + q]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest nonzero distance, used as the grid-cell analogue for
    /// table spaces. Zero for a single point.
    pub fn min_positive_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for &v in &self.dist {
            if v > 0.0 && v < best {
                best = v;
            }
        }
        if best.is_finite() {
            best
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_space() {
        let s = TableSpace::new(vec![vec![0.0]]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.diameter(), 0.0);
        assert_eq!(s.min_positive_distance(), 0.0);
    }

    #[test]
    fn accepts_a_valid_metric() {
        let s = TableSpace::new(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.distance(0, 2), 2.0);
        assert_eq!(s.diameter(), 2.0);
        assert_eq!(s.min_positive_distance(), 1.0);
    }

    #[test]
    fn rejects_broken_tables() {
        // asymmetric
        assert!(TableSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        // nonzero diagonal
        assert!(TableSpace::new(vec![vec![0.5, 1.0], vec![1.0, 0.0]]).is_err());
        // triangle violation: d(0,2) > d(0,1) + d(1,2)
        assert!(TableSpace::new(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .is_err());
    }

    #[test]
    fn product_takes_the_sup() {
        let d = |n: usize| move |i: usize, j: usize| ((i as f64) - (j as f64)).abs() / (n as f64);
        let p = TableSpace::product_sup(2, 3, d(1), d(1)).unwrap();
        assert_eq!(p.len(), 6);
        // (0,0) vs (1,2): max(1, 2) = 2
        assert_eq!(p.distance(0, 5), 2.0);
        assert_eq!(p.distance(2, 2), 0.0);
    }
}
