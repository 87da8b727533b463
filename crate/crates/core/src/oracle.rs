//! Exact finite-space laboratory. Everything here runs on integer lattice
//! levels `{0, 1, ..., q}` over spaces of a handful of points, builds the
//! monadic constructions literally (unit, flatten, tensor through the
//! flatten), and checks the structural laws exhaustively over declared
//! finite instance families. These checks anchor the fused kernel: the
//! kernel never calls into this module, and this module never calls the
//! kernel.
//!
//! The product norm does not preserve the level lattice, so it is excluded
//! from the lattice-exhaustive checks and covered instead by dyadic
//! floating-point spot checks on one- and two-point spaces, where every
//! product is exact.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{orbit_rep, PermGroup};
use crate::tnorm::TNorm;

/// Hard cap on the number of points of any space handled here, including
/// tensor-product results (3 points at power 3 gives 27).
pub const MAX_ORACLE_POINTS: usize = 32;

/// Hard cap on the level quantization of the lattice checks.
pub const MAX_ORACLE_Q: u32 = 8;

/// A t-norm acting on integer lattice levels `0..=q`. Only minimum and
/// Łukasiewicz preserve the lattice; the product norm is rejected.
#[derive(Debug, Clone, Copy)]
pub struct LatticeNorm {
    kind: TNorm,
    q: u32,
}

impl LatticeNorm {
    pub fn new(kind: TNorm, q: u32) -> Result<Self> {
        if !kind.is_lattice_closed() {
            return Err(Error::NotLatticeClosed { norm: "product" });
        }
        if q == 0 || q > MAX_ORACLE_Q {
            return Err(Error::SizeCap {
                what: format!("lattice quantization q = {q}"),
            });
        }
        Ok(Self { kind, q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> TNorm {
        self.kind
    }

    #[inline]
    pub fn and(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a <= self.q && b <= self.q);
        match self.kind {
            TNorm::Minimum => a.min(b),
            TNorm::Lukasiewicz => (a + b).saturating_sub(self.q),
            TNorm::Product => unreachable!("rejected on construction"),
        }
    }
}

/// A normal lattice-valued assignment on a tiny space: `max = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedMeasure {
    q: u32,
    values: Vec<u32>,
}

impl QuantizedMeasure {
    pub fn new(q: u32, values: Vec<u32>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_ORACLE_POINTS {
            return Err(Error::SizeCap {
                what: format!("quantized measure on {} points", values.len()),
            });
        }
        if values.iter().any(|&v| v > q) {
            return Err(Error::Domain {
                what: "lattice level above q",
                value: f64::from(*values.iter().max().unwrap()),
            });
        }
        if values.iter().max() != Some(&q) {
            return Err(Error::Domain {
                what: "quantized measure maximum (normality requires q)",
                value: f64::from(*values.iter().max().unwrap()),
            });
        }
        Ok(Self { q, values })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// All lattice functions on `n` points, in lexicographic order.
pub fn enumerate_functions(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (u64::from(q) + 1).pow(n as u32);
    for mut code in 0..total {
        let mut f = vec![0u32; n];
        for slot in (0..n).rev() {
            f[slot] = (code % (u64::from(q) + 1)) as u32;
            code /= u64::from(q) + 1;
        }
        out.push(f);
    }
    out
}

/// All normal lattice functions (maximum exactly `q`) on `n` points.
pub fn enumerate_normal_functions(n: usize, q: u32) -> Vec<Vec<u32>> {
    enumerate_functions(n, q)
        .into_iter()
        .filter(|f| f.iter().max() == Some(&q))
        .collect()
}

/// An element of the second-level measure model: a normal lattice
/// assignment on an explicit finite list of hypographs (each hypograph
/// given by its per-point top level, which must itself be normal).
#[derive(Debug, Clone)]
pub struct MetaMeasure {
    q: u32,
    hypographs: Vec<Vec<u32>>,
    values: Vec<u32>,
}

impl MetaMeasure {
    pub fn new(q: u32, hypographs: Vec<Vec<u32>>, values: Vec<u32>) -> Result<Self> {
        if hypographs.is_empty() || hypographs.len() != values.len() {
            return Err(Error::SizeCap {
                what: "meta measure needs matching nonempty hypograph and value lists".into(),
            });
        }
        let n = hypographs[0].len();
        for h in &hypographs {
            if h.len() != n || h.iter().any(|&v| v > q) || h.iter().max() != Some(&q) {
                return Err(Error::Domain {
                    what: "listed hypograph must be a normal lattice function",
                    value: q.into(),
                });
            }
        }
        if values.iter().any(|&v| v > q) || values.iter().max() != Some(&q) {
            return Err(Error::Domain {
                what: "meta measure values (normality requires max q)",
                value: q.into(),
            });
        }
        Ok(Self {
            q,
            hypographs,
            values,
        })
    }

    /// Unit at the meta level: full weight on a single hypograph.
    pub fn dirac_on(q: u32, hypograph: Vec<u32>) -> Result<Self> {
        Self::new(q, vec![hypograph], vec![q])
    }

    pub fn hypographs(&self) -> &[Vec<u32>] {
        &self.hypographs
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Flattens to a single hypograph:
    /// `result(x) = max over listed (A, s) of A(x) * s`. Assignments not
    /// listed carry level 0 and contribute nothing.
    pub fn flatten(&self, norm: &LatticeNorm) -> Result<Vec<u32>> {
        if norm.q() != self.q {
            return Err(Error::SizeCap {
                what: format!("norm lattice q = {} differs from meta q = {}", norm.q(), self.q),
            });
        }
        let n = self.hypographs[0].len();
        let mut out = vec![0u32; n];
        for (h, &s) in self.hypographs.iter().zip(&self.values) {
            for (o, &r) in out.iter_mut().zip(h) {
                *o = (*o).max(norm.and(r, s));
            }
        }
        Ok(out)
    }
}

/// The flatten of the measure monad on the finite model; see
/// [`MetaMeasure::flatten`].
pub fn zeta_bar(meta: &MetaMeasure, norm: &LatticeNorm) -> Result<Vec<u32>> {
    meta.flatten(norm)
}

/// Dirac hypograph: top level at `x`, zero elsewhere.
pub fn dirac_levels(n: usize, x: usize, q: u32) -> Vec<u32> {
    let mut levels = vec![0u32; n];
    levels[x] = q;
    levels
}

/// Tensor product through the monadic construction: for each point `x` of
/// the first factor, embed the second measure on the slice `{x} x Y`, weight
/// that hypograph by `mu(x)`, and flatten. The pair `(x, y)` flattens to
/// `x * len(Y) + y`.
pub fn monadic_tensor(
    mu: &QuantizedMeasure,
    nu: &QuantizedMeasure,
    norm: &LatticeNorm,
) -> Result<QuantizedMeasure> {
    if mu.q() != nu.q() || mu.q() != norm.q() {
        return Err(Error::SizeCap {
            what: "tensor factors and norm must share one lattice".into(),
        });
    }
    let (nx, ny) = (mu.len(), nu.len());
    if nx * ny > MAX_ORACLE_POINTS {
        return Err(Error::SizeCap {
            what: format!("tensor product on {nx} x {ny} points"),
        });
    }
    let q = mu.q();
    let mut hypographs = Vec::with_capacity(nx);
    for x in 0..nx {
        let mut slice = vec![0u32; nx * ny];
        for y in 0..ny {
            slice[x * ny + y] = nu.values()[y];
        }
        hypographs.push(slice);
    }
    let meta = MetaMeasure::new(q, hypographs, mu.values().to_vec())?;
    QuantizedMeasure::new(q, meta.flatten(norm)?)
}

/// Iterated tensor power `mu (x) ... (x) mu` (m factors), flattened over
/// `n^m` tuples with the first slot slowest.
pub fn tensor_power(mu: &QuantizedMeasure, m: usize, norm: &LatticeNorm) -> Result<QuantizedMeasure> {
    let mut acc = mu.clone();
    for _ in 1..m {
        acc = monadic_tensor(&acc, mu, norm)?;
    }
    Ok(acc)
}

/// Outcome of one exhaustive suite.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub name: &'static str,
    pub instances: usize,
    pub violations: usize,
}

impl LawReport {
    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

fn check_caps(n: usize, q: u32, cap_points: usize) -> Result<()> {
    if n == 0 || n > cap_points {
        return Err(Error::SizeCap {
            what: format!("oracle space of {n} points (cap {cap_points})"),
        });
    }
    if q == 0 || q > MAX_ORACLE_Q {
        return Err(Error::SizeCap {
            what: format!("oracle quantization q = {q} (cap {MAX_ORACLE_Q})"),
        });
    }
    Ok(())
}

/// Sparse normal assignments over an indexed family: every singleton at
/// full level, and every pair carrying levels `>= 1` whose maximum is the
/// top. This is the declared instance family for the associativity check;
/// the flatten is a pointwise max of per-entry terms, so any violation
/// already shows on a two-entry assignment.
fn sparse_assignments(count: usize, q: u32) -> Vec<Vec<(usize, u32)>> {
    let mut out = Vec::new();
    for i in 0..count {
        out.push(vec![(i, q)]);
    }
    for i in 0..count {
        for j in (i + 1)..count {
            for a in 1..=q {
                for b in 1..=q {
                    if a.max(b) == q {
                        out.push(vec![(i, a), (j, b)]);
                    }
                }
            }
        }
    }
    out
}

/// Flatten of a dense assignment over a hypograph family.
fn flatten_dense(family: &[Vec<u32>], assign: &[u32], norm: &LatticeNorm) -> Vec<u32> {
    let n = family[0].len();
    let mut out = vec![0u32; n];
    for (h, &s) in family.iter().zip(assign) {
        if s == 0 {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(h) {
            *o = (*o).max(norm.and(r, s));
        }
    }
    out
}

/// Exhaustive unit and associativity diagrams of the flatten on the
/// quantized model.
///
/// Units run over every normal function. Associativity runs over the
/// sparse two-level tower: middle-level elements are sparse normal
/// assignments over all of `M(X)`, outer elements are sparse normal
/// assignments over those.
pub fn check_monad_laws(n: usize, q: u32, kind: TNorm) -> Result<LawReport> {
    check_caps(n, q, 3)?;
    let norm = LatticeNorm::new(kind, q)?;
    let family1 = enumerate_normal_functions(n, q);
    // The tower is quadratic in the family size twice over; 20 base
    // functions already give ~4e5 associativity instances.
    if family1.len() > 20 {
        return Err(Error::SizeCap {
            what: format!(
                "monad law tower over {} normal functions (n = {n}, q = {q})",
                family1.len()
            ),
        });
    }
    let index1: HashMap<Vec<u32>, usize> = family1
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, f)| (f, i))
        .collect();

    let mut instances = 0usize;
    let mut violations = 0usize;

    // Left unit: flattening the meta unit on A returns A.
    // Right unit: mapping A through the point unit and flattening returns A.
    for a in &family1 {
        instances += 2;
        let left = MetaMeasure::dirac_on(q, a.clone())?.flatten(&norm)?;
        if &left != a {
            violations += 1;
        }
        let mut hyps = Vec::new();
        let mut vals = Vec::new();
        for (x, &level) in a.iter().enumerate() {
            hyps.push(dirac_levels(n, x, q));
            vals.push(level);
        }
        let right = flatten_dense(&hyps, &vals, &norm);
        if &right != a {
            violations += 1;
        }
    }

    // Associativity: flatten-after-mapped-flatten equals
    // flatten-after-outer-flatten on the sparse tower.
    let middle: Vec<Vec<(usize, u32)>> = sparse_assignments(family1.len(), q);
    let outer: Vec<Vec<(usize, u32)>> = sparse_assignments(middle.len(), q);
    for assignment in &outer {
        instances += 1;

        // Path one: flatten each middle element to a hypograph, then
        // flatten the induced assignment (combining duplicates by max).
        let mut combined: HashMap<usize, u32> = HashMap::new();
        for &(j, s) in assignment {
            let levels = flatten_dense(
                &sparse_family(&family1, &middle[j]),
                &sparse_values(&middle[j]),
                &norm,
            );
            let idx = *index1.get(&levels).expect("flatten of normal input is normal");
            let slot = combined.entry(idx).or_insert(0);
            *slot = (*slot).max(s);
        }
        let mut hyps = Vec::new();
        let mut vals = Vec::new();
        for (idx, s) in combined {
            hyps.push(family1[idx].clone());
            vals.push(s);
        }
        let path1 = flatten_dense(&hyps, &vals, &norm);

        // Path two: flatten the outer assignment down to a middle-level
        // dense assignment, then flatten that.
        let mut dense_mid = vec![0u32; family1.len()];
        for &(j, s) in assignment {
            for &(i, v) in &middle[j] {
                dense_mid[i] = dense_mid[i].max(norm.and(v, s));
            }
        }
        let path2 = flatten_dense(&family1, &dense_mid, &norm);

        if path1 != path2 {
            violations += 1;
        }
    }

    Ok(LawReport {
        name: "monad_laws",
        instances,
        violations,
    })
}

fn sparse_family(family1: &[Vec<u32>], entries: &[(usize, u32)]) -> Vec<Vec<u32>> {
    entries.iter().map(|&(i, _)| family1[i].clone()).collect()
}

fn sparse_values(entries: &[(usize, u32)]) -> Vec<u32> {
    entries.iter().map(|&(_, v)| v).collect()
}

/// Evaluation of a hypograph against a lattice test function:
/// `max over x and levels t <= A(x) of phi(x) * t`, which the monotone
/// norm collapses to `max over x of phi(x) * A(x)`.
fn eval_levels(levels: &[u32], phi: &[u32], norm: &LatticeNorm) -> u32 {
    levels
        .iter()
        .zip(phi)
        .map(|(&r, &p)| norm.and(p, r))
        .max()
        .unwrap_or(0)
}

/// Exhaustive checks of the evaluation/hypograph correspondence: the
/// function-to-hypograph round trip, evaluation turning unions into maxima,
/// and evaluation commuting with level scaling.
pub fn check_isomorphism(n: usize, q: u32, kind: TNorm) -> Result<LawReport> {
    check_caps(n, q, 3)?;
    let norm = LatticeNorm::new(kind, q)?;
    let normal = enumerate_normal_functions(n, q);
    let tests = enumerate_functions(n, q);

    let mut instances = 0usize;
    let mut violations = 0usize;

    // Round trip: function -> explicit (point, level) pair set -> function.
    for u in &normal {
        instances += 1;
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        for (x, &top) in u.iter().enumerate() {
            for t in 0..=top {
                pairs.push((x, t));
            }
        }
        let mut back = vec![0u32; n];
        for (x, t) in pairs {
            back[x] = back[x].max(t);
        }
        if &back != u {
            violations += 1;
        }
    }

    // Union law: eval(A union B) = eval(A) max eval(B) for all pairs and
    // all lattice test functions.
    for a in &normal {
        for b in &normal {
            let union: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect();
            for phi in &tests {
                instances += 1;
                let lhs = eval_levels(&union, phi, &norm);
                let rhs = eval_levels(a, phi, &norm).max(eval_levels(b, phi, &norm));
                if lhs != rhs {
                    violations += 1;
                }
            }
        }
    }

    // Scaling law: eval(t scaled into A) = t * eval(A). Scaled hypographs
    // of t < q are not normal, which the evaluation does not need.
    for a in &normal {
        for t in 0..=q {
            let scaled: Vec<u32> = a.iter().map(|&r| norm.and(r, t)).collect();
            for phi in &tests {
                instances += 1;
                let lhs = eval_levels(&scaled, phi, &norm);
                let rhs = norm.and(t, eval_levels(a, phi, &norm));
                if lhs != rhs {
                    violations += 1;
                }
            }
        }
    }

    Ok(LawReport {
        name: "isomorphism",
        instances,
        violations,
    })
}

/// Exhaustive equality of the monadic tensor against the pointwise norm
/// formula `result(x, y) = mu(x) * nu(y)`.
pub fn check_tensor_equivalence(n1: usize, n2: usize, q: u32, kind: TNorm) -> Result<LawReport> {
    check_caps(n1, q, 4)?;
    check_caps(n2, q, 4)?;
    let norm = LatticeNorm::new(kind, q)?;
    let left = enumerate_normal_functions(n1, q);
    let right = enumerate_normal_functions(n2, q);

    let mut instances = 0usize;
    let mut violations = 0usize;
    for u in &left {
        let mu = QuantizedMeasure::new(q, u.clone())?;
        for v in &right {
            let nu = QuantizedMeasure::new(q, v.clone())?;
            instances += 1;
            let monadic = monadic_tensor(&mu, &nu, &norm)?;
            let mut direct = vec![0u32; n1 * n2];
            for (x, &ux) in u.iter().enumerate() {
                for (y, &vy) in v.iter().enumerate() {
                    direct[x * n2 + y] = norm.and(ux, vy);
                }
            }
            if monadic.values() != direct.as_slice() {
                violations += 1;
            }
        }
    }
    Ok(LawReport {
        name: "tensor_equivalence",
        instances,
        violations,
    })
}

/// Dyadic floating-point spot checks of the tensor construction for the
/// product norm on one- and two-point spaces. Levels are quarters, so
/// every product is exact and equality is bitwise.
pub fn product_tensor_spot_checks() -> LawReport {
    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut instances = 0usize;
    let mut violations = 0usize;

    let normal_fns = |n: usize| -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let total = levels.len().pow(n as u32);
        for mut code in 0..total {
            let mut f = vec![0.0; n];
            for slot in (0..n).rev() {
                f[slot] = levels[code % levels.len()];
                code /= levels.len();
            }
            if f.iter().copied().fold(0.0, f64::max) == 1.0 {
                out.push(f);
            }
        }
        out
    };

    for n1 in 1..=2usize {
        for n2 in 1..=2usize {
            for u in normal_fns(n1) {
                for v in normal_fns(n2) {
                    instances += 1;
                    // Monadic route: weight each embedded slice by u(x)
                    // and flatten with max.
                    let mut monadic = vec![0.0f64; n1 * n2];
                    for (x, &ux) in u.iter().enumerate() {
                        for (y, &vy) in v.iter().enumerate() {
                            let term = vy * ux;
                            if term > monadic[x * n2 + y] {
                                monadic[x * n2 + y] = term;
                            }
                        }
                    }
                    let mut direct = vec![0.0f64; n1 * n2];
                    for (x, &ux) in u.iter().enumerate() {
                        for (y, &vy) in v.iter().enumerate() {
                            direct[x * n2 + y] = ux * vy;
                        }
                    }
                    if monadic != direct {
                        violations += 1;
                    }
                }
            }
        }
    }
    LawReport {
        name: "product_tensor_spot",
        instances,
        violations,
    }
}

/// Exhaustive check that pushing the m-fold tensor power to H-orbits and
/// then on to G-orbits agrees with pushing directly to G-orbits, for every
/// normal quantized measure.
pub fn check_projection_compat(
    n: usize,
    h: &PermGroup,
    g: &PermGroup,
    q: u32,
    kind: TNorm,
) -> Result<LawReport> {
    check_caps(n, q, 3)?;
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    let m = g.arity();
    if m > 3 {
        return Err(Error::SizeCap {
            what: format!("projection check arity m = {m}"),
        });
    }
    let norm = LatticeNorm::new(kind, q)?;
    let total = n.pow(m as u32);

    let mut instances = 0usize;
    let mut violations = 0usize;
    for u in enumerate_normal_functions(n, q) {
        instances += 1;
        let mu = QuantizedMeasure::new(q, u)?;
        let power = tensor_power(&mu, m, &norm)?;

        let mut via_h: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut direct: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut tuple = vec![0usize; m];
        for mut ix in 0..total {
            let flat = ix;
            for slot in (0..m).rev() {
                tuple[slot] = ix % n;
                ix /= n;
            }
            let value = power.values()[flat];
            let h_rep = orbit_rep(h, &tuple);
            let g_of_h = orbit_rep(g, &h_rep);
            let slot = via_h.entry(g_of_h).or_insert(0);
            *slot = (*slot).max(value);
            let g_rep = orbit_rep(g, &tuple);
            let slot = direct.entry(g_rep).or_insert(0);
            *slot = (*slot).max(value);
        }
        if via_h != direct {
            violations += 1;
        }
    }
    Ok(LawReport {
        name: "projection_compat",
        instances,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_norm_rejects_product() {
        assert!(LatticeNorm::new(TNorm::Product, 2).is_err());
        assert!(LatticeNorm::new(TNorm::Minimum, 2).is_ok());
        assert!(LatticeNorm::new(TNorm::Lukasiewicz, 2).is_ok());
    }

    #[test]
    fn lattice_ops_match_the_float_norms() {
        for kind in [TNorm::Minimum, TNorm::Lukasiewicz] {
            for q in [1u32, 2, 4, 8] {
                let norm = LatticeNorm::new(kind, q).unwrap();
                for a in 0..=q {
                    for b in 0..=q {
                        let exact = norm.and(a, b) as f64 / q as f64;
                        let float = kind.eval(a as f64 / q as f64, b as f64 / q as f64);
                        assert_eq!(exact, float, "{kind} q={q} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_functions(2, 2).len(), 9);
        assert_eq!(enumerate_normal_functions(2, 2).len(), 5);
        assert_eq!(enumerate_normal_functions(1, 4).len(), 1);
        assert_eq!(enumerate_normal_functions(3, 2).len(), 19);
    }

    #[test]
    fn flatten_unit_examples() {
        let q = 2;
        let norm = LatticeNorm::new(TNorm::Minimum, q).unwrap();
        // Dirac-on-hypograph flattens back to that hypograph.
        let a = vec![2u32, 1];
        let meta = MetaMeasure::dirac_on(q, a.clone()).unwrap();
        assert_eq!(meta.flatten(&norm).unwrap(), a);
        // Zero-valued entries contribute nothing.
        let b = vec![2u32, 2];
        let meta = MetaMeasure::new(q, vec![a.clone(), b], vec![2, 0]).unwrap();
        assert_eq!(meta.flatten(&norm).unwrap(), a);
        // One-point space, two hypographs at top levels 1 and 2 with meta
        // values 1 and 2: result level max(min(2,1), min(2,2)) = 2.
        let meta = MetaMeasure::new(q, vec![vec![2], vec![2]], vec![1, 2]).unwrap();
        assert_eq!(meta.flatten(&norm).unwrap(), vec![2]);
    }

    #[test]
    fn tensor_examples() {
        let q = 2;
        let norm = LatticeNorm::new(TNorm::Minimum, q).unwrap();
        // Point masses tensor to the point mass at the pair.
        let dx = QuantizedMeasure::new(q, vec![2, 0]).unwrap();
        let dy = QuantizedMeasure::new(q, vec![0, 2]).unwrap();
        let t = monadic_tensor(&dx, &dy, &norm).unwrap();
        assert_eq!(t.values(), &[0, 2, 0, 0]);
        // Tensor with the full measure keeps the first factor's values.
        let mu = QuantizedMeasure::new(q, vec![2, 1]).unwrap();
        let full = QuantizedMeasure::new(q, vec![2, 2]).unwrap();
        let t = monadic_tensor(&mu, &full, &norm).unwrap();
        assert_eq!(t.values(), &[2, 2, 1, 1]);
    }

    #[test]
    fn law_suites_are_clean_at_small_sizes() {
        for kind in [TNorm::Minimum, TNorm::Lukasiewicz] {
            for (n, q) in [(1usize, 1u32), (1, 2), (2, 2)] {
                let laws = check_monad_laws(n, q, kind).unwrap();
                assert!(laws.is_clean(), "{kind} laws at ({n},{q}): {laws:?}");
                assert!(laws.instances > 0);
                let iso = check_isomorphism(n, q, kind).unwrap();
                assert!(iso.is_clean(), "{kind} iso at ({n},{q}): {iso:?}");
            }
            let tensor = check_tensor_equivalence(2, 2, 2, kind).unwrap();
            assert!(tensor.is_clean());
            assert_eq!(tensor.instances, 25);
        }
    }

    #[test]
    fn projection_compat_examples() {
        let e2 = PermGroup::trivial(2);
        let s2 = PermGroup::symmetric(2).unwrap();
        for kind in [TNorm::Minimum, TNorm::Lukasiewicz] {
            // H = G is trivially compatible.
            let same = check_projection_compat(2, &s2, &s2, 2, kind).unwrap();
            assert!(same.is_clean());
            let proper = check_projection_compat(2, &e2, &s2, 2, kind).unwrap();
            assert!(proper.is_clean());
            assert_eq!(proper.instances, 5);
        }
        // H = {e}, G = S3 at q = 1.
        let e3 = PermGroup::trivial(3);
        let s3 = PermGroup::symmetric(3).unwrap();
        let r = check_projection_compat(2, &e3, &s3, 1, TNorm::Minimum).unwrap();
        assert!(r.is_clean());
        // Not a subgroup.
        assert!(matches!(
            check_projection_compat(2, &s2, &e2, 2, TNorm::Minimum),
            Err(Error::NotSubgroup)
        ));
    }

    #[test]
    fn product_spot_checks_are_clean() {
        let report = product_tensor_spot_checks();
        assert!(report.is_clean());
        assert_eq!(report.instances, 100);
    }

    #[test]
    fn size_caps_enforced() {
        assert!(check_monad_laws(4, 2, TNorm::Minimum).is_err());
        assert!(check_monad_laws(2, 16, TNorm::Minimum).is_err());
        let q = 1;
        let norm = LatticeNorm::new(TNorm::Minimum, q).unwrap();
        let big = QuantizedMeasure::new(q, vec![1; 8]).unwrap();
        let result = tensor_power(&big, 2, &norm);
        assert!(matches!(result, Err(Error::SizeCap { .. })));
    }
}
