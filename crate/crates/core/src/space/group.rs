use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest closure we are willing to compute (|S_6| = 720).
pub const GROUP_SIZE_CAP: usize = 720;

/// A permutation group on coordinate slots `{0, ..., m-1}`, stored as the
/// full element list. Elements are image vectors: `sigma[i]` is the image
/// of slot `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermGroup {
    arity: usize,
    elements: Vec<Vec<u8>>,
}

impl PermGroup {
    pub fn trivial(arity: usize) -> Self {
        Self {
            arity,
            elements: vec![identity(arity)],
        }
    }

    /// The full symmetric group; `arity` is capped at 6.
    pub fn symmetric(arity: usize) -> Result<Self> {
        let mut gens = Vec::new();
        for i in 0..arity.saturating_sub(1) {
            let mut p: Vec<usize> = (0..arity).collect();
            p.swap(i, i + 1);
            gens.push(p);
        }
        Self::from_generators(arity, &gens)
    }

    /// Cyclic group generated by the rotation `(1 2 ... m)`.
    pub fn cyclic(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Empty { what: "permutation arity" });
        }
        let rot: Vec<usize> = (0..arity).map(|i| (i + 1) % arity).collect();
        Self::from_generators(arity, &[rot])
    }

    /// Closure of a set of 0-based generator permutations.
    pub fn from_generators(arity: usize, generators: &[Vec<usize>]) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Empty { what: "permutation arity" });
        }
        let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
        set.insert(identity(arity));
        let mut frontier: Vec<Vec<u8>> = Vec::new();
        for g in generators {
            let p = validate_perm(arity, g)?;
            if set.insert(p.clone()) {
                frontier.push(p);
            }
        }
        while let Some(p) = frontier.pop() {
            let known: Vec<Vec<u8>> = set.iter().cloned().collect();
            for q in &known {
                for prod in [compose(&p, q), compose(q, &p)] {
                    if set.insert(prod.clone()) {
                        if set.len() > GROUP_SIZE_CAP {
                            return Err(Error::GroupTooLarge { cap: GROUP_SIZE_CAP });
                        }
                        frontier.push(prod);
                    }
                }
            }
        }
        Ok(Self {
            arity,
            elements: set.into_iter().collect(),
        })
    }

    /// Closure of 1-based generator permutations, as written in config files.
    pub fn from_generators_one_based(arity: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let shifted: Vec<Vec<usize>> = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&v| {
                        v.checked_sub(1).ok_or(Error::BadPermutation {
                            perm: g.clone(),
                            arity,
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        Self::from_generators(arity, &shifted)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in a deterministic (sorted) order; the identity comes first.
    pub fn elements(&self) -> &[Vec<u8>] {
        &self.elements
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Whether this is the full symmetric group on its arity.
    pub fn is_full_symmetric(&self) -> bool {
        self.order() == factorial(self.arity)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.arity == other.arity && self.elements.iter().all(|e| other.elements.contains(e))
    }

    pub fn contains(&self, perm: &[u8]) -> bool {
        self.elements.iter().any(|e| e == perm)
    }
}

fn identity(arity: usize) -> Vec<u8> {
    (0..arity as u8).collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn validate_perm(arity: usize, p: &[usize]) -> Result<Vec<u8>> {
    let bad = || Error::BadPermutation {
        perm: p.to_vec(),
        arity,
    };
    if p.len() != arity {
        return Err(bad());
    }
    let mut seen = vec![false; arity];
    for &v in p {
        if v >= arity || seen[v] {
            return Err(bad());
        }
        seen[v] = true;
    }
    Ok(p.iter().map(|&v| v as u8).collect())
}

/// `(p . q)(i) = p(q(i))`.
fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
    q.iter().map(|&i| p[i as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_from_generators() {
        let s2 = PermGroup::from_generators_one_based(2, &[vec![2, 1]]).unwrap();
        assert_eq!(s2.order(), 2);
        assert!(s2.is_full_symmetric());

        let s3 = PermGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);

        let c3 = PermGroup::cyclic(3).unwrap();
        assert_eq!(c3.order(), 3);
        assert!(c3.is_subgroup_of(&s3));
        assert!(!s3.is_subgroup_of(&c3));
    }

    #[test]
    fn closure_contains_inverses() {
        // A 4-cycle generator; the closure must contain its inverse.
        let c4 = PermGroup::from_generators(4, &[vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.contains(&[3, 0, 1, 2]));
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(PermGroup::from_generators(3, &[vec![0, 0, 1]]).is_err());
        assert!(PermGroup::from_generators(3, &[vec![0, 1]]).is_err());
        assert!(PermGroup::from_generators_one_based(2, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn size_cap_enforced() {
        assert!(PermGroup::symmetric(6).is_ok());
        assert!(matches!(
            PermGroup::symmetric(7),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn trivial_group() {
        let e = PermGroup::trivial(3);
        assert!(e.is_trivial());
        assert!(!e.is_full_symmetric());
        assert!(e.is_subgroup_of(&PermGroup::symmetric(3).unwrap()));
    }
}
