//! Finite additively idempotent semirings with zero and one.
//!
//! Semirings are given by Cayley tables and validated exhaustively. Each one
//! embeds into the residuated maps of its natural-order lattice through
//! `r ↦ (x ↦ r·x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::resmap::{MapError, ResiduatedMap};

/// Default element cap for [`generate_simple_semiring`].
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    AdditionCommutative,
    AdditionAssociative,
    MultiplicationAssociative,
    LeftDistributive,
    RightDistributive,
    ZeroAdditiveNeutral,
    ZeroAbsorbing,
    OneNeutral,
    AdditiveIdempotence,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::AdditionCommutative => "commutativity of addition",
            Axiom::AdditionAssociative => "associativity of addition",
            Axiom::MultiplicationAssociative => "associativity of multiplication",
            Axiom::LeftDistributive => "left distributivity",
            Axiom::RightDistributive => "right distributivity",
            Axiom::ZeroAdditiveNeutral => "zero is additively neutral",
            Axiom::ZeroAbsorbing => "zero is multiplicatively absorbing",
            Axiom::OneNeutral => "one is multiplicatively neutral",
            Axiom::AdditiveIdempotence => "additive idempotence",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("axiom violated: {axiom}, witness {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<String> },
    #[error("malformed tables: {0}")]
    Malformed(String),
    #[error("closure exceeded {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("generated set has no multiplicative one")]
    NoOne,
    #[error("map is not in the image of the embedding")]
    NotInImage,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A validated finite semiring. Elements are indices `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemiring {
    labels: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteSemiring {
    /// Checks every axiom exhaustively (`O(n³)`).
    pub fn new(
        labels: Vec<String>,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self, SemiringError> {
        let n = labels.len();
        if n == 0 {
            return Err(SemiringError::Malformed("empty carrier".into()));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(SemiringError::Malformed(format!("tables must be {n} x {n}")));
        }
        if add.iter().chain(&mul).any(|&v| v >= n) || zero >= n || one >= n {
            return Err(SemiringError::Malformed("table entry out of range".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] {
                    return Err(SemiringError::Malformed(format!("duplicate label `{}`", labels[i])));
                }
            }
        }
        let r = Self { labels, add, mul, zero, one };
        r.check_axioms()?;
        Ok(r)
    }

    fn violation(&self, axiom: Axiom, witness: &[usize]) -> SemiringError {
        SemiringError::AxiomViolation { axiom, witness: witness.iter().map(|&x| self.labels[x].clone()).collect() }
    }

    fn check_axioms(&self) -> Result<(), SemiringError> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    return Err(self.violation(Axiom::AdditionCommutative, &[x, y]));
                }
            }
        }
        let triples = || (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))));
        if let Some((x, y, z)) = triples().find(|&(x, y, z)| self.add(self.add(x, y), z) != self.add(x, self.add(y, z)))
        {
            return Err(self.violation(Axiom::AdditionAssociative, &[x, y, z]));
        }
        if let Some((x, y, z)) = triples().find(|&(x, y, z)| self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)))
        {
            return Err(self.violation(Axiom::MultiplicationAssociative, &[x, y, z]));
        }
        if let Some((x, y, z)) =
            triples().find(|&(x, y, z)| self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)))
        {
            return Err(self.violation(Axiom::LeftDistributive, &[x, y, z]));
        }
        if let Some((x, y, z)) =
            triples().find(|&(x, y, z)| self.mul(self.add(x, y), z) != self.add(self.mul(x, z), self.mul(y, z)))
        {
            return Err(self.violation(Axiom::RightDistributive, &[x, y, z]));
        }
        if let Some(x) = (0..n).find(|&x| self.add(self.zero, x) != x) {
            return Err(self.violation(Axiom::ZeroAdditiveNeutral, &[x]));
        }
        if let Some(x) = (0..n).find(|&x| self.mul(self.zero, x) != self.zero || self.mul(x, self.zero) != self.zero) {
            return Err(self.violation(Axiom::ZeroAbsorbing, &[x]));
        }
        if let Some(x) = (0..n).find(|&x| self.mul(self.one, x) != x || self.mul(x, self.one) != x) {
            return Err(self.violation(Axiom::OneNeutral, &[x]));
        }
        if let Some(x) = (0..n).find(|&x| self.add(x, x) != x) {
            return Err(self.violation(Axiom::AdditiveIdempotence, &[x]));
        }
        Ok(())
    }

    /// The subsemiring of `Res(L)` formed by `maps`, which must be closed
    /// under both operations and contain the zero and identity maps.
    pub fn from_maps(lattice: &Arc<FiniteLattice>, maps: &[ResiduatedMap]) -> Result<Self, SemiringError> {
        let index: HashMap<&[usize], usize> = maps.iter().enumerate().map(|(i, m)| (m.values(), i)).collect();
        let find = |m: &ResiduatedMap| {
            index
                .get(m.values())
                .copied()
                .ok_or_else(|| SemiringError::Malformed(format!("set is not closed: {m} missing")))
        };
        let n = maps.len();
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                add[i * n + j] = find(&f.join(g)?)?;
                mul[i * n + j] = find(&f.compose(g)?)?;
            }
        }
        let zero = find(&ResiduatedMap::zero(lattice))?;
        let one = find(&ResiduatedMap::identity(lattice)).map_err(|_| SemiringError::NoOne)?;
        let labels = maps.iter().map(ToString::to_string).collect();
        Self::new(labels, add, mul, zero, one)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.len() + y]
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.len() + y]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Componentwise product semiring, elements in lexicographic order.
    pub fn product(&self, other: &Self) -> Self {
        let (n, m) = (self.len(), other.len());
        let pair = |k: usize| (k / m, k % m);
        let size = n * m;
        let labels = (0..size)
            .map(|k| {
                let (a, b) = pair(k);
                format!("({},{})", self.label(a), other.label(b))
            })
            .collect();
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let ((a, b), (c, d)) = (pair(x), pair(y));
                add[x * size + y] = self.add(a, c) * m + other.add(b, d);
                mul[x * size + y] = self.mul(a, c) * m + other.mul(b, d);
            }
        }
        Self::new(labels, add, mul, self.zero * m + other.zero, self.one * m + other.one)
            .expect("products of semirings are semirings")
    }

    /// Smallest congruence relating `a` and `b`, as a block index per element.
    pub fn principal_congruence(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, x: usize, y: usize| {
            let (rx, ry) = (find(parent, x), find(parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
                true
            } else {
                false
            }
        };
        union(&mut parent, a, b);
        loop {
            let mut changed = false;
            for x in 0..n {
                let rx = find(&mut parent, x);
                if rx == x {
                    continue;
                }
                for y in 0..n {
                    changed |= union(&mut parent, self.add(x, y), self.add(rx, y));
                    changed |= union(&mut parent, self.mul(x, y), self.mul(rx, y));
                    changed |= union(&mut parent, self.mul(y, x), self.mul(y, rx));
                }
            }
            if !changed {
                break;
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }

    /// Simple iff every principal congruence of two distinct elements is total.
    pub fn is_simple(&self) -> bool {
        (0..self.len()).all(|a| (a + 1..self.len()).all(|b| self.principal_congruence(a, b).iter().all(|&r| r == 0)))
    }
}

/// The lattice `x <= y :<=> x + y = y` on the carrier of `r`.
pub fn natural_order_lattice(r: &FiniteSemiring) -> Result<FiniteLattice, LatticeError> {
    let n = r.len();
    let leq = (0..n * n).map(|k| r.add(k / n, k % n) == k % n).collect();
    FiniteLattice::from_order(r.labels.clone(), leq)
}

/// The image of `r` in `Res(natural_order_lattice(r))` under `r ↦ T_r`.
#[derive(Debug, Clone)]
pub struct Embedding {
    lattice: Arc<FiniteLattice>,
    images: Vec<ResiduatedMap>,
    preimage: HashMap<Vec<usize>, usize>,
}

impl Embedding {
    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    /// `T_r`.
    pub fn image(&self, r: usize) -> &ResiduatedMap {
        &self.images[r]
    }

    pub fn images(&self) -> &[ResiduatedMap] {
        &self.images
    }
}

/// Left multiplication maps `T_r: x ↦ r·x` on the natural-order lattice.
pub fn embed(r: &FiniteSemiring) -> Result<Embedding, SemiringError> {
    let lattice = Arc::new(natural_order_lattice(r)?);
    let n = r.len();
    let images: Vec<ResiduatedMap> = (0..n)
        .map(|a| ResiduatedMap::new(&lattice, (0..n).map(|x| r.mul(a, x)).collect()))
        .collect::<Result<_, _>>()?;
    let preimage: HashMap<Vec<usize>, usize> =
        images.iter().enumerate().map(|(a, m)| (m.values().to_vec(), a)).collect();
    assert_eq!(preimage.len(), n, "T is injective whenever a one exists");
    Ok(Embedding { lattice, images, preimage })
}

/// The unique `r` with `T_r = f`, recovered as `f(1)`.
pub fn pullback_element(f: &ResiduatedMap, r: &FiniteSemiring, embedding: &Embedding) -> Result<usize, SemiringError> {
    if f.values().len() != r.len() {
        return Err(SemiringError::NotInImage);
    }
    let candidate = f.apply(r.one());
    match embedding.preimage.get(f.values()) {
        Some(&a) if a == candidate => Ok(a),
        _ => Err(SemiringError::NotInImage),
    }
}

/// A closed subset of `Res(L)` with its Cayley tables.
#[derive(Debug, Clone)]
pub struct GeneratedSemiring {
    pub lattice: Arc<FiniteLattice>,
    pub elements: Vec<ResiduatedMap>,
    /// `add[i * n + j]` indexes `elements[i] ∨ elements[j]`.
    pub add: Vec<usize>,
    /// `mul[i * n + j]` indexes `elements[i] ∘ elements[j]`.
    pub mul: Vec<usize>,
    pub zero: usize,
    pub one: Option<usize>,
}

impl GeneratedSemiring {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_semiring(&self) -> Result<FiniteSemiring, SemiringError> {
        let one = self.one.ok_or(SemiringError::NoOne)?;
        FiniteSemiring::new(
            self.elements.iter().map(ToString::to_string).collect(),
            self.add.clone(),
            self.mul.clone(),
            self.zero,
            one,
        )
    }
}

/// Closure of the zero map, all `e_{a,b}`, and `extras` under pointwise join
/// and composition.
pub fn generate_simple_semiring(
    lattice: &FiniteLattice,
    extras: &[ResiduatedMap],
    cap: usize,
) -> Result<GeneratedSemiring, SemiringError> {
    let l = Arc::new(lattice.clone());
    let mut elements: Vec<ResiduatedMap> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut insert = |m: ResiduatedMap, elements: &mut Vec<ResiduatedMap>| -> Result<usize, SemiringError> {
        if let Some(&i) = index.get(m.values()) {
            return Ok(i);
        }
        if elements.len() >= cap {
            return Err(SemiringError::ClosureTooLarge { cap });
        }
        index.insert(m.values().to_vec(), elements.len());
        elements.push(m);
        Ok(elements.len() - 1)
    };

    let zero = insert(ResiduatedMap::zero(&l), &mut elements)?;
    for a in l.elements() {
        for b in l.elements() {
            insert(ResiduatedMap::e_map(&l, a, b), &mut elements)?;
        }
    }
    for extra in extras {
        if extra.lattice().as_ref() != lattice {
            return Err(MapError::DomainMismatch.into());
        }
        insert(ResiduatedMap::new_unchecked(&l, extra.values().to_vec()), &mut elements)?;
    }

    let mut k = 0;
    while k < elements.len() {
        for j in 0..=k {
            let (f, g) = (elements[k].clone(), elements[j].clone());
            insert(f.join(&g)?, &mut elements)?;
            insert(f.compose(&g)?, &mut elements)?;
            insert(g.compose(&f)?, &mut elements)?;
        }
        k += 1;
    }

    let n = elements.len();
    let position: HashMap<&[usize], usize> = elements.iter().enumerate().map(|(i, m)| (m.values(), i)).collect();
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            add[i * n + j] = position[elements[i].join(&elements[j])?.values()];
            mul[i * n + j] = position[elements[i].compose(&elements[j])?.values()];
        }
    }
    let one = elements.iter().position(ResiduatedMap::is_identity);
    Ok(GeneratedSemiring { lattice: l, elements, add, mul, zero, one })
}
