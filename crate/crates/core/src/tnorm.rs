//! Triangular norms on the unit interval.
//!
//! A t-norm is a continuous, associative, commutative, monotone binary
//! operation on `[0, 1]` with unit 1. Three norms ship: product, minimum
//! and Łukasiewicz. The set is a closed enumeration so that exhaustive
//! lattice tests stay tractable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three supported triangular norms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    Product,
    #[default]
    #[serde(rename = "min")]
    Minimum,
    Lukasiewicz,
}

impl std::fmt::Display for TNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            TNorm::Product => "product",
            TNorm::Minimum => "min",
            TNorm::Lukasiewicz => "lukasiewicz",
        };
        f.write_str(name)
    }
}

impl TNorm {
    /// Applies the norm. Both operands must lie in `[0, 1]`; this is the
    /// unchecked fast path used by the enumeration kernels, which only feed
    /// it values that are already invariant-checked.
    #[inline]
    pub fn eval(self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a), "t-norm operand {a} out of range");
        debug_assert!((0.0..=1.0).contains(&b), "t-norm operand {b} out of range");
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.min(b),
            TNorm::Lukasiewicz => {
                // The unit cases short-circuit so that a * 1 = a holds
                // exactly; (a + 1) - 1 rounds for non-dyadic a.
                if a == 1.0 {
                    b
                } else if b == 1.0 {
                    a
                } else {
                    (a + b - 1.0).max(0.0)
                }
            }
        }
    }

    /// Domain-checked evaluation.
    pub fn try_eval(self, a: f64, b: f64) -> Result<f64> {
        check_unit("left operand", a)?;
        check_unit("right operand", b)?;
        Ok(self.eval(a, b))
    }

    /// Left fold of [`TNorm::eval`] over a nonempty list. Associativity makes
    /// the result independent of the fold order.
    pub fn fold(self, values: &[f64]) -> Result<f64> {
        let (&first, rest) = values
            .split_first()
            .ok_or(Error::Empty { what: "fold input" })?;
        check_unit("fold input", first)?;
        let mut acc = first;
        for &v in rest {
            check_unit("fold input", v)?;
            acc = self.eval(acc, v);
        }
        Ok(acc)
    }

    /// Samples deterministic pseudo-random triples and reports the worst
    /// violation of each t-norm axiom.
    pub fn verify_axioms(self, sample_count: usize, seed: u64) -> AxiomReport {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut report = AxiomReport {
            norm: self,
            samples: sample_count,
            ..AxiomReport::default()
        };
        for _ in 0..sample_count {
            let a: f64 = rng.gen();
            let b: f64 = rng.gen();
            let c: f64 = rng.gen();
            let comm = (self.eval(a, b) - self.eval(b, a)).abs();
            let assoc = (self.eval(self.eval(a, b), c) - self.eval(a, self.eval(b, c))).abs();
            let unit = (self.eval(a, 1.0) - a).abs();
            // a <= a' monotone pair taken from (a, c) ordered.
            let (lo, hi) = if a <= c { (a, c) } else { (c, a) };
            let mono = (self.eval(lo, b) - self.eval(hi, b)).max(0.0);
            report.max_commutativity = report.max_commutativity.max(comm);
            report.max_associativity = report.max_associativity.max(assoc);
            report.max_unit = report.max_unit.max(unit);
            report.max_monotonicity = report.max_monotonicity.max(mono);
        }
        report
    }

    /// Whether the norm maps the lattice `{0, 1/q, ..., 1}` into itself.
    /// Holds for minimum and Łukasiewicz, fails for product.
    pub fn is_lattice_closed(self) -> bool {
        !matches!(self, TNorm::Product)
    }
}

fn check_unit(what: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

/// Worst observed violation per axiom over a sampled set of triples.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    #[serde(skip)]
    pub norm: TNorm,
    pub samples: usize,
    pub max_commutativity: f64,
    pub max_associativity: f64,
    pub max_unit: f64,
    pub max_monotonicity: f64,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        self.max_commutativity
            .max(self.max_associativity)
            .max(self.max_unit)
            .max(self.max_monotonicity)
    }
}
