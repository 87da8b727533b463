//! Idempotent measures represented as normal `[0,1]`-valued functions on a
//! finite space, together with evaluation against test functions, lattice
//! operations, pushforwards, tensor values and distances.
//!
//! The function representation is canonical; hypographs are materialized
//! only for distance computation and invariant checks, which keeps storage
//! at `O(|X|)` instead of `O(|X| * q)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::Space;
use crate::tnorm::TNorm;

/// Values at or below this floor are treated as exactly zero by the
/// enumeration kernels. With the product norm values decay geometrically
/// and never reach zero; the floor bounds the work. Normality is
/// unaffected since the maximum stays 1.
pub const DEFAULT_TAU_SUPP: f64 = 1e-9;

/// A normal `[0,1]`-valued function `u` on a finite space: `max u = 1`.
/// On finite spaces upper semicontinuity is automatic.
#[derive(Debug, Clone, PartialEq)]
pub struct StarMeasure {
    space: Arc<Space>,
    values: Vec<f64>,
}

/// A `[0,1]`-valued function with no normality requirement; the result of
/// scaling a measure by a weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    space: Arc<Space>,
    values: Vec<f64>,
}

/// A `[0,1]`-valued test function.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    space: Arc<Space>,
    values: Vec<f64>,
}

fn check_values(space: &Arc<Space>, values: &[f64], what: &'static str) -> Result<()> {
    if values.len() != space.len() {
        return Err(Error::ArityMismatch {
            expected: space.len(),
            got: values.len(),
        });
    }
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain { what, value: v });
        }
    }
    Ok(())
}

fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl StarMeasure {
    /// Builds a measure, checking that values lie in `[0,1]` and that the
    /// maximum is exactly 1.
    pub fn new(space: Arc<Space>, values: Vec<f64>) -> Result<Self> {
        check_values(&space, &values, "measure value")?;
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max != 1.0 {
            return Err(Error::Domain {
                what: "measure maximum (normality requires max = 1)",
                value: max,
            });
        }
        Ok(Self { space, values })
    }

    /// Internal constructor for values the kernels have already proven
    /// normal.
    pub(crate) fn from_raw(space: Arc<Space>, values: Vec<f64>) -> Self {
        debug_assert!(values.iter().copied().fold(f64::NEG_INFINITY, f64::max) == 1.0);
        Self { space, values }
    }

    /// The point mass at `x`: value 1 at `x`, 0 elsewhere.
    pub fn dirac(space: Arc<Space>, x: usize) -> Result<Self> {
        if x >= space.len() {
            return Err(Error::PointOutOfRange {
                index: x,
                len: space.len(),
            });
        }
        let mut values = vec![0.0; space.len()];
        values[x] = 1.0;
        Ok(Self { space, values })
    }

    /// Indicator measure of a nonempty point set: 1 on the set, 0 off it.
    pub fn from_support(space: Arc<Space>, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Empty { what: "support set" });
        }
        let mut values = vec![0.0; space.len()];
        for &x in support {
            if x >= space.len() {
                return Err(Error::PointOutOfRange {
                    index: x,
                    len: space.len(),
                });
            }
            values[x] = 1.0;
        }
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    /// Indices with value strictly above `floor`.
    pub fn support(&self, floor: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i] > floor)
            .collect()
    }

    /// `max over x of phi(x) * u(x)` for the given norm.
    pub fn evaluate(&self, phi: &TestFunction, norm: TNorm) -> Result<f64> {
        if !same_space(&self.space, &phi.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&phi.values)
            .map(|(&u, &p)| norm.eval(p, u))
            .fold(0.0, f64::max))
    }

    /// Pointwise maximum; normality is preserved.
    pub fn join(&self, other: &StarMeasure) -> Result<StarMeasure> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a.max(b))
            .collect();
        Ok(StarMeasure::from_raw(self.space.clone(), values))
    }

    /// Pointwise `alpha * u(x)`; the maximum of the result is exactly
    /// `alpha`.
    pub fn scale(&self, alpha: f64, norm: TNorm) -> Result<WeightFunction> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain {
                what: "scale factor",
                value: alpha,
            });
        }
        Ok(WeightFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|&u| norm.eval(alpha, u)).collect(),
        })
    }

    /// Folded norm value `u(x_1) * ... * u(x_m)` of a tuple. Commutativity
    /// of the norm makes this constant on orbits of any permutation group.
    #[inline]
    pub fn sym_tensor_value(&self, norm: TNorm, tuple: &[usize]) -> f64 {
        let mut acc = 1.0;
        for &x in tuple {
            acc = norm.eval(acc, self.values[x]);
        }
        acc
    }

    /// Quantized hypograph `{(x, k/q) : k/q <= u(x)}`.
    pub fn hypograph(&self, q: u32) -> Hypograph {
        Hypograph {
            space: self.space.clone(),
            q,
            levels: self.values.iter().map(|&u| quantize_down(u, q)).collect(),
        }
    }

    pub fn as_weight(&self) -> WeightFunction {
        WeightFunction {
            space: self.space.clone(),
            values: self.values.clone(),
        }
    }
}

#[inline]
fn quantize_down(u: f64, q: u32) -> u32 {
    ((u * q as f64 + 1e-9).floor() as u32).min(q)
}

impl WeightFunction {
    pub fn new(space: Arc<Space>, values: Vec<f64>) -> Result<Self> {
        check_values(&space, &values, "weight value")?;
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Reinterprets as a measure, failing unless the maximum is exactly 1.
    pub fn into_measure(self) -> Result<StarMeasure> {
        StarMeasure::new(self.space, self.values)
    }
}

impl TestFunction {
    pub fn new(space: Arc<Space>, values: Vec<f64>) -> Result<Self> {
        check_values(&space, &values, "test function value")?;
        Ok(Self { space, values })
    }

    pub fn constant(space: Arc<Space>, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::Domain {
                what: "constant test function",
                value: c,
            });
        }
        let n = space.len();
        Ok(Self {
            space,
            values: vec![c; n],
        })
    }

    /// Indicator of a single point.
    pub fn indicator(space: Arc<Space>, x: usize) -> Result<Self> {
        if x >= space.len() {
            return Err(Error::PointOutOfRange {
                index: x,
                len: space.len(),
            });
        }
        let mut values = vec![0.0; space.len()];
        values[x] = 1.0;
        Ok(Self { space, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Pointwise `lambda * phi` under the norm.
    pub fn scaled(&self, lambda: f64, norm: TNorm) -> Result<TestFunction> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain {
                what: "test function scale",
                value: lambda,
            });
        }
        Ok(TestFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|&p| norm.eval(lambda, p)).collect(),
        })
    }

    /// Pointwise maximum of two test functions.
    pub fn join(&self, other: &TestFunction) -> Result<TestFunction> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(TestFunction {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        })
    }
}

/// Pushforward of a weight function along a point map into `codomain`:
/// `result(y) = max{ w(x) : f(x) = y }`, zero where the preimage is empty.
/// `f` is evaluated only on the support of `w` and returns a codomain point
/// index; range errors propagate.
pub fn pushforward<F>(w: &WeightFunction, codomain: Arc<Space>, mut f: F) -> Result<WeightFunction>
where
    F: FnMut(usize) -> Result<usize>,
{
    let mut values = vec![0.0f64; codomain.len()];
    for (x, &wx) in w.values.iter().enumerate() {
        if wx > 0.0 {
            let y = f(x)?;
            if y >= codomain.len() {
                return Err(Error::PointOutOfRange {
                    index: y,
                    len: codomain.len(),
                });
            }
            values[y] = values[y].max(wx);
        }
    }
    Ok(WeightFunction {
        space: codomain,
        values,
    })
}

/// Pushforward of a measure; every support point lands somewhere, so the
/// maximum value 1 is preserved and the result is again a measure.
pub fn pushforward_measure<F>(m: &StarMeasure, codomain: Arc<Space>, f: F) -> Result<StarMeasure>
where
    F: FnMut(usize) -> Result<usize>,
{
    let w = pushforward(&m.as_weight(), codomain, f)?;
    Ok(StarMeasure::from_raw(w.space, w.values))
}

/// Quantized hypograph of a measure: per point, the top lattice level
/// `k/q` lying under the graph. Saturation and the inclusion of the zero
/// level are implicit in the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypograph {
    space: Arc<Space>,
    q: u32,
    levels: Vec<u32>,
}

impl Hypograph {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Whether the pair `(x, k/q)` belongs to the hypograph.
    pub fn contains(&self, x: usize, k: u32) -> bool {
        x < self.levels.len() && k <= self.levels[x]
    }

    /// Checks the three defining conditions: some point reaches level 1,
    /// the zero level is everywhere, saturation holds. The last two are
    /// structural in this representation; the first is the check.
    pub fn meets_top_level(&self) -> bool {
        self.levels.contains(&self.q)
    }

    /// Measure with value `k/q` per point; inverts [`StarMeasure::hypograph`]
    /// up to `1/q` per point.
    pub fn to_measure(&self) -> Result<StarMeasure> {
        let qf = self.q as f64;
        StarMeasure::new(
            self.space.clone(),
            self.levels.iter().map(|&k| k as f64 / qf).collect(),
        )
    }
}

/// `max |u - v|`.
pub fn sup_distance(a: &StarMeasure, b: &StarMeasure) -> Result<f64> {
    if !same_space(&a.space, &b.space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Hausdorff distance between the two quantized hypographs inside
/// `X x [0,1]` with the sup metric `max(d(x,y), |s-t|)`.
pub fn hypograph_hausdorff(a: &StarMeasure, b: &StarMeasure, q: u32) -> Result<f64> {
    if !same_space(&a.space, &b.space) {
        return Err(Error::SpaceMismatch);
    }
    let la = a.hypograph(q);
    let lb = b.hypograph(q);
    Ok(hypograph_hausdorff_levels(
        &a.space,
        la.levels(),
        lb.levels(),
        q,
    ))
}

pub(crate) fn hypograph_hausdorff_levels(
    space: &Space,
    lu: &[u32],
    lv: &[u32],
    q: u32,
) -> f64 {
    directed_levels(space, lu, lv, q).max(directed_levels(space, lv, lu, q))
}

/// Directed Hausdorff from hyp(u) to hyp(v). For a point `(x, s)` the
/// nearest hypograph point under the sup metric is
/// `min over y of max(d(x,y), (s - v(y))_+)`, and the supremum over
/// `s <= u(x)` is attained at `s = u(x)`.
fn directed_levels(space: &Space, lu: &[u32], lv: &[u32], q: u32) -> f64 {
    let qf = q as f64;
    let nearest_for = |x: usize, worst: f64| -> f64 {
        let mut nearest = lu[x].saturating_sub(lv[x]) as f64 / qf;
        if nearest <= worst {
            return nearest;
        }
        for (y, &level) in lv.iter().enumerate() {
            if y == x {
                continue;
            }
            let d = space.distance(x, y);
            if d >= nearest {
                continue;
            }
            let gap = lu[x].saturating_sub(level) as f64 / qf;
            let reach = d.max(gap);
            if reach < nearest {
                nearest = reach;
                if nearest <= worst {
                    break;
                }
            }
        }
        nearest
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..lu.len())
            .into_par_iter()
            .fold(|| 0.0f64, |worst, x| worst.max(nearest_for(x, worst)))
            .reduce(|| 0.0, f64::max)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut worst = 0.0f64;
        for x in 0..lu.len() {
            worst = worst.max(nearest_for(x, worst));
        }
        worst
    }
}

/// Max deviation of the evaluations over a dictionary of test functions.
pub fn weakstar_distance(
    a: &StarMeasure,
    b: &StarMeasure,
    dictionary: &[TestFunction],
    norm: TNorm,
) -> Result<f64> {
    if dictionary.is_empty() {
        return Err(Error::Empty {
            what: "test function dictionary",
        });
    }
    let mut worst = 0.0f64;
    for phi in dictionary {
        let da = a.evaluate(phi, norm)?;
        let db = b.evaluate(phi, norm)?;
        worst = worst.max((da - db).abs());
    }
    Ok(worst)
}

/// Default diagnostic dictionary: every point indicator plus `extra`
/// seeded random fields.
pub fn weakstar_dictionary(space: &Arc<Space>, extra: usize, seed: u64) -> Vec<TestFunction> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut dict: Vec<TestFunction> = (0..space.len())
        .map(|x| TestFunction::indicator(space.clone(), x).expect("index in range"))
        .collect();
    for _ in 0..extra {
        let values: Vec<f64> = (0..space.len()).map(|_| rng.gen()).collect();
        dict.push(TestFunction::new(space.clone(), values).expect("values in range"));
    }
    dict
}
