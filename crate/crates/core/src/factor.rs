//! Direct-product factorization of finite lattices into irreducible factors.
//!
//! A bounded lattice `L` splits as `[0,u] × [0,v]` exactly when some pair of
//! complements `u ∧ v = 0`, `u ∨ v = 1` makes `x ↦ (x ∧ u, x ∧ v)` a lattice
//! isomorphism. We search pairs in index order, verify each candidate split
//! in full, and recurse on both intervals. The resulting multiset of factors
//! is unique up to isomorphism, so grouping by isomorphism class is
//! well-defined.

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::iso::{automorphisms, find_isomorphism};
use crate::lattice::{interval, product, CoordinateMap, Element, FiniteLattice, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("partition is not compatible with join and meet at ({x}, {y})")]
    NotACongruence { x: String, y: String },
    #[error("partition has {got} entries, lattice has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("factor classes {0} and {1} are isomorphic")]
    DuplicateFactorClass(usize, usize),
}

/// A lattice congruence, stored as a block index per element. Block
/// indices are numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    lattice: Arc<FiniteLattice>,
    blocks: Vec<usize>,
}

fn canonical_blocks(raw: &[usize]) -> Vec<usize> {
    let mut seen: Vec<(usize, usize)> = Vec::new();
    raw.iter()
        .map(|&b| match seen.iter().find(|(r, _)| *r == b) {
            Some(&(_, c)) => c,
            None => {
                seen.push((b, seen.len()));
                seen.len() - 1
            }
        })
        .collect()
}

impl Congruence {
    /// Validates compatibility with join and meet.
    pub fn new(lattice: &Arc<FiniteLattice>, blocks: &[usize]) -> Result<Self, FactorError> {
        if blocks.len() != lattice.len() {
            return Err(FactorError::WrongLength { expected: lattice.len(), got: blocks.len() });
        }
        let blocks = canonical_blocks(blocks);
        // Equivalence relations are compatible iff they are compatible in
        // each argument separately.
        for x in lattice.elements() {
            for x2 in lattice.elements().filter(|&x2| x2 > x && blocks[x2] == blocks[x]) {
                for y in lattice.elements() {
                    if blocks[lattice.join(x, y)] != blocks[lattice.join(x2, y)]
                        || blocks[lattice.meet(x, y)] != blocks[lattice.meet(x2, y)]
                    {
                        return Err(FactorError::NotACongruence {
                            x: lattice.label(x).to_owned(),
                            y: lattice.label(x2).to_owned(),
                        });
                    }
                }
            }
        }
        Ok(Self { lattice: Arc::clone(lattice), blocks })
    }

    /// Δ, the equality relation.
    pub fn equality(lattice: &Arc<FiniteLattice>) -> Self {
        Self { lattice: Arc::clone(lattice), blocks: lattice.elements().collect() }
    }

    /// ∇, the complete relation.
    pub fn complete(lattice: &Arc<FiniteLattice>) -> Self {
        Self { lattice: Arc::clone(lattice), blocks: vec![0; lattice.len()] }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_of(&self, x: Element) -> usize {
        self.blocks[x]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: Element, y: Element) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_equality(&self) -> bool {
        self.block_count() == self.lattice.len()
    }

    pub fn is_complete(&self) -> bool {
        self.block_count() == 1
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let k = other.block_count();
        let raw: Vec<usize> = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * k + b).collect();
        Self { lattice: Arc::clone(&self.lattice), blocks: canonical_blocks(&raw) }
    }
}

/// `θ_L × θ_K` on `L × K`: `(a,b) ~ (c,d)` iff `a θ_L c` and `b θ_K d`.
pub fn congruence_product(theta_l: &Congruence, theta_k: &Congruence) -> Congruence {
    let coords = product(&[(*theta_l.lattice).clone(), (*theta_k.lattice).clone()]);
    let k = theta_k.block_count();
    let raw: Vec<usize> = coords
        .source()
        .elements()
        .map(|x| {
            let t = coords.encode(x);
            theta_l.block_of(t[0]) * k + theta_k.block_of(t[1])
        })
        .collect();
    let lattice = Arc::new(coords.source().clone());
    Congruence::new(&lattice, &raw).expect("products of congruences are congruences")
}

/// One isomorphism class of factors.
#[derive(Debug, Clone)]
pub struct FactorClass {
    /// First factor of the class in factor order.
    pub representative: FiniteLattice,
    /// `e_t`, the number of factors in the class.
    pub multiplicity: usize,
    /// Factor indices belonging to the class, ascending.
    pub members: Vec<usize>,
}

/// A lattice together with its decomposition into irreducible factors.
#[derive(Debug, Clone)]
pub struct Factorization {
    source: Arc<FiniteLattice>,
    coordinates: CoordinateMap,
    classes: Vec<FactorClass>,
    class_of: Vec<usize>,
    /// Isomorphism from each factor onto its class representative.
    to_representative: Vec<Vec<Element>>,
}

impl PartialEq for Factorization {
    fn eq(&self, other: &Self) -> bool {
        self.coordinates == other.coordinates
    }
}

impl Eq for Factorization {}

impl Factorization {
    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn factors(&self) -> &[FiniteLattice] {
        self.coordinates.factors()
    }

    pub fn factor_count(&self) -> usize {
        self.factors().len()
    }

    pub fn coordinates(&self) -> &CoordinateMap {
        &self.coordinates
    }

    pub fn classes(&self) -> &[FactorClass] {
        &self.classes
    }

    pub fn class_of(&self, t: usize) -> usize {
        self.class_of[t]
    }

    /// `(representative, multiplicity)` per isomorphism class.
    pub fn grouped(&self) -> Vec<(FiniteLattice, usize)> {
        self.classes.iter().map(|c| (c.representative.clone(), c.multiplicity)).collect()
    }

    /// An isomorphism from factor `s` onto factor `t`, when they are in the
    /// same class.
    pub fn factor_isomorphism(&self, s: usize, t: usize) -> Option<Vec<Element>> {
        if self.class_of[s] != self.class_of[t] {
            return None;
        }
        let to_rep = &self.to_representative[s];
        let from_rep = inverse_table(&self.to_representative[t]);
        Some(to_rep.iter().map(|&r| from_rep[r]).collect())
    }
}

fn inverse_table(table: &[Element]) -> Vec<Element> {
    let mut inv = vec![0; table.len()];
    for (x, &y) in table.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// First complementary pair `(u, v)` whose meet map is a product isomorphism.
fn find_split(l: &FiniteLattice) -> Option<(Element, Element)> {
    let n = l.len();
    let down: Vec<usize> = l.elements().map(|u| l.elements().filter(|&x| l.leq(x, u)).count()).collect();
    for u in l.elements().filter(|&u| u != l.bottom()) {
        for v in l.elements().filter(|&v| v != l.bottom()) {
            if l.meet(u, v) != l.bottom() || l.join(u, v) != l.top() || down[u] * down[v] != n {
                continue;
            }
            if splits(l, u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn splits(l: &FiniteLattice, u: Element, v: Element) -> bool {
    let n = l.len();
    let mut seen = vec![false; n * n];
    for x in l.elements() {
        let key = l.meet(x, u) * n + l.meet(x, v);
        if std::mem::replace(&mut seen[key], true) {
            return false;
        }
    }
    l.elements().all(|x| {
        l.elements().all(|y| {
            let j = l.join(x, y);
            l.meet(j, u) == l.join(l.meet(x, u), l.meet(y, u)) && l.meet(j, v) == l.join(l.meet(x, v), l.meet(y, v))
        })
    })
}

fn decompose(l: &FiniteLattice) -> (Vec<FiniteLattice>, Vec<Vec<Element>>) {
    if l.is_trivial() {
        return (Vec::new(), vec![Vec::new()]);
    }
    let Some((u, v)) = find_split(l) else {
        return (vec![l.clone()], l.elements().map(|x| vec![x]).collect());
    };
    let lower = |top: Element| -> Interval { interval(l, l.bottom(), top).expect("bottom is below everything") };
    let (iu, iv) = (lower(u), lower(v));
    let (mut factors, enc_u) = decompose(&iu.lattice);
    let (factors_v, enc_v) = decompose(&iv.lattice);
    factors.extend(factors_v);
    let encode = l
        .elements()
        .map(|x| {
            let pu = iu.position(l.meet(x, u)).expect("x ∧ u lies in [0,u]");
            let pv = iv.position(l.meet(x, v)).expect("x ∧ v lies in [0,v]");
            enc_u[pu].iter().chain(&enc_v[pv]).copied().collect()
        })
        .collect();
    (factors, encode)
}

/// Factors `l` into irreducible lattices. The trivial lattice has no factors.
pub fn factorize(l: &FiniteLattice) -> Factorization {
    let (factors, encode) = decompose(l);
    let coordinates =
        CoordinateMap::new(l.clone(), factors, encode).expect("each split was verified to be an isomorphism");

    let mut classes: Vec<FactorClass> = Vec::new();
    let mut class_of = Vec::new();
    let mut to_representative = Vec::new();
    for (t, f) in coordinates.factors().iter().enumerate() {
        let hit = classes
            .iter()
            .enumerate()
            .find_map(|(c, class)| find_isomorphism(f, &class.representative).map(|iso| (c, iso)));
        match hit {
            Some((c, iso)) => {
                classes[c].multiplicity += 1;
                classes[c].members.push(t);
                class_of.push(c);
                to_representative.push(iso);
            }
            None => {
                class_of.push(classes.len());
                to_representative.push(f.elements().collect());
                classes.push(FactorClass { representative: f.clone(), multiplicity: 1, members: vec![t] });
            }
        }
    }
    Factorization { source: Arc::new(l.clone()), coordinates, classes, class_of, to_representative }
}

pub fn is_irreducible(l: &FiniteLattice) -> bool {
    l.len() >= 2 && find_split(l).is_none()
}

/// Kernel of each coordinate projection.
pub fn factor_congruences(f: &Factorization) -> Vec<Congruence> {
    let c = f.coordinates();
    (0..f.factor_count())
        .map(|t| {
            let blocks: Vec<usize> = f.source.elements().map(|x| c.project(x, t)).collect();
            Congruence::new(&f.source, &blocks).expect("projection kernels are congruences")
        })
        .collect()
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).map(BigUint::from).product()
}

/// `∏ e_t! · |Aut(L_t)|^{e_t}` over pairwise non-isomorphic classes.
pub fn aut_count(grouped: &[(FiniteLattice, usize)]) -> Result<BigUint, FactorError> {
    for (i, (a, _)) in grouped.iter().enumerate() {
        for (j, (b, _)) in grouped.iter().enumerate().skip(i + 1) {
            if find_isomorphism(a, b).is_some() {
                return Err(FactorError::DuplicateFactorClass(i, j));
            }
        }
    }
    Ok(grouped.iter().map(|(l, e)| factorial(*e) * BigUint::from(automorphisms(l).len()).pow(*e as u32)).product())
}

/// `∏ (e_t·n)! · |Aut(L_t)|^{e_t·n}`, the number of invertible `n × n`
/// matrices over `Res(L)`.
pub fn count_invertible(f: &Factorization, n: usize) -> BigUint {
    f.classes()
        .iter()
        .map(|c| {
            let k = c.multiplicity * n;
            factorial(k) * BigUint::from(automorphisms(&c.representative).len()).pow(k as u32)
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::iso::are_isomorphic;

    fn lat(name: &str) -> FiniteLattice {
        catalog::lattice(name).unwrap()
    }

    #[test]
    fn square_splits_into_two_chains() {
        let f = factorize(&lat("square"));
        assert_eq!(f.factor_count(), 2);
        assert_eq!(f.classes().len(), 1);
        assert_eq!(f.classes()[0].multiplicity, 2);
        assert!(are_isomorphic(&f.classes()[0].representative, &lat("chain2")));
    }

    #[test]
    fn m3_is_irreducible() {
        let f = factorize(&lat("m3"));
        assert_eq!(f.factor_count(), 1);
        assert!(is_irreducible(&lat("m3")));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&lat("chain2")));
        assert!(!is_irreducible(&lat("square")));
        assert!(is_irreducible(&lat("chain4")));
        assert!(!is_irreducible(&FiniteLattice::trivial("0")));
    }

    #[test]
    fn trivial_has_no_factors() {
        let f = factorize(&FiniteLattice::trivial("0"));
        assert_eq!(f.factor_count(), 0);
        assert_eq!(aut_count(&f.grouped()).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn relabelled_product() {
        let p = product(&[lat("chain2"), lat("m3"), lat("m3")]);
        let n = p.source().len();
        let perm: Vec<usize> = (0..n).map(|x| (x * 7 + 3) % n).collect();
        let f = factorize(&p.source().permuted(&perm));
        let mut grouped: Vec<(usize, usize)> = f.grouped().iter().map(|(l, e)| (l.len(), *e)).collect();
        grouped.sort();
        assert_eq!(grouped, vec![(2, 1), (5, 2)]);
    }

    #[test]
    fn factor_congruences_of_square() {
        let f = factorize(&lat("square"));
        let cs = factor_congruences(&f);
        assert_eq!(cs.len(), 2);
        for c in &cs {
            assert_eq!(c.block_count(), 2);
        }
        assert!(cs[0].intersection(&cs[1]).is_equality());
        let single = factor_congruences(&factorize(&lat("n5")));
        assert_eq!(single.len(), 1);
        assert!(single[0].is_equality());
    }

    #[test]
    fn congruence_products() {
        let c2 = Arc::new(lat("chain2"));
        let m3 = Arc::new(lat("m3"));
        let dd = congruence_product(&Congruence::equality(&c2), &Congruence::equality(&m3));
        assert!(dd.is_equality());
        let nd = congruence_product(&Congruence::complete(&c2), &Congruence::equality(&m3));
        assert_eq!(nd.block_count(), 5);
        // (a, k) ~ (b, k') iff k = k'
        for x in 0..10 {
            for y in 0..10 {
                assert_eq!(nd.related(x, y), x % 5 == y % 5);
            }
        }
        let two = Congruence::new(&c2, &[0, 1]).unwrap();
        assert_eq!(congruence_product(&two, &two).block_count(), 4);
    }

    #[test]
    fn rejects_incompatible_partition() {
        // {0, a} | {b, 1} is fine on the square, {0, 1} | {a} | {b} is not
        let sq = Arc::new(lat("square"));
        assert!(Congruence::new(&sq, &[0, 0, 1, 1]).is_ok());
        assert!(matches!(Congruence::new(&sq, &[0, 1, 2, 0]), Err(FactorError::NotACongruence { .. })));
    }

    #[test]
    fn aut_counts() {
        assert_eq!(aut_count(&[(lat("chain2"), 2)]).unwrap(), BigUint::from(2u32));
        assert_eq!(aut_count(&[(lat("m3"), 1)]).unwrap(), BigUint::from(6u32));
        assert_eq!(aut_count(&[(lat("chain2"), 1), (lat("m3"), 2)]).unwrap(), BigUint::from(72u32));
        assert_eq!(
            aut_count(&[(lat("chain2"), 1), (FiniteLattice::chain(2), 1)]),
            Err(FactorError::DuplicateFactorClass(0, 1))
        );
    }

    #[test]
    fn invertible_counts() {
        let c2 = factorize(&lat("chain2"));
        assert_eq!(count_invertible(&c2, 3), BigUint::from(6u32));
        assert_eq!(count_invertible(&factorize(&lat("square")), 2), BigUint::from(24u32));
        assert_eq!(count_invertible(&factorize(&lat("m3")), 1), BigUint::from(6u32));
        assert_eq!(count_invertible(&factorize(&lat("m3")), 2), BigUint::from(72u32));
    }

    #[test]
    fn factor_isomorphisms_within_class() {
        let f = factorize(&lat("cube"));
        assert_eq!(f.factor_count(), 3);
        for s in 0..3 {
            for t in 0..3 {
                let iso = f.factor_isomorphism(s, t).unwrap();
                assert!(crate::iso::is_isomorphism(&f.factors()[s], &f.factors()[t], &iso));
            }
        }
    }
}
