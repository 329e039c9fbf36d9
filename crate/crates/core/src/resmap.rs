//! Residuated self-maps of a finite lattice and the semiring `(Res(L), ∨, ∘)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{Element, FiniteLattice};

/// Why a table fails to be residuated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Bottom is sent to the given element instead of bottom.
    Bottom { image: Element },
    /// `f(x ∨ y) != f(x) ∨ f(y)`.
    Join { x: Element, y: Element },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("value table has {got} entries, lattice has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("value {0} is not an element of the lattice")]
    OutOfRange(Element),
    #[error("map is not residuated: {0:?}")]
    NotResiduated(Violation),
    #[error("maps live on different lattices")]
    DomainMismatch,
    #[error("map is not invertible")]
    NotInvertible,
}

/// A join- and bottom-preserving map `L -> L`, stored as a value table.
#[derive(Clone)]
pub struct ResiduatedMap {
    lattice: Arc<FiniteLattice>,
    values: Vec<Element>,
}

pub(crate) fn same_lattice(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for ResiduatedMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && same_lattice(&self.lattice, &other.lattice)
    }
}

impl Eq for ResiduatedMap {}

impl Hash for ResiduatedMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl fmt::Debug for ResiduatedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ResiduatedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.values.iter().map(|&v| self.lattice.label(v)).collect();
        write!(f, "[{}]", labels.join(","))
    }
}

/// Checks the two residuation laws on a raw table.
pub(crate) fn check_residuated(l: &FiniteLattice, values: &[Element]) -> Result<(), MapError> {
    if values.len() != l.len() {
        return Err(MapError::WrongLength { expected: l.len(), got: values.len() });
    }
    if let Some(&v) = values.iter().find(|&&v| v >= l.len()) {
        return Err(MapError::OutOfRange(v));
    }
    if values[l.bottom()] != l.bottom() {
        return Err(MapError::NotResiduated(Violation::Bottom { image: values[l.bottom()] }));
    }
    for x in l.elements() {
        for y in x + 1..l.len() {
            if values[l.join(x, y)] != l.join(values[x], values[y]) {
                return Err(MapError::NotResiduated(Violation::Join { x, y }));
            }
        }
    }
    Ok(())
}

impl ResiduatedMap {
    /// Validates `values` as a residuated map on `lattice`.
    pub fn new(lattice: &Arc<FiniteLattice>, values: Vec<Element>) -> Result<Self, MapError> {
        check_residuated(lattice, &values)?;
        Ok(Self { lattice: Arc::clone(lattice), values })
    }

    pub(crate) fn new_unchecked(lattice: &Arc<FiniteLattice>, values: Vec<Element>) -> Self {
        debug_assert!(check_residuated(lattice, &values).is_ok());
        Self { lattice: Arc::clone(lattice), values }
    }

    /// The constant-bottom map.
    pub fn zero(lattice: &Arc<FiniteLattice>) -> Self {
        Self::new_unchecked(lattice, vec![lattice.bottom(); lattice.len()])
    }

    pub fn identity(lattice: &Arc<FiniteLattice>) -> Self {
        Self::new_unchecked(lattice, lattice.elements().collect())
    }

    /// `e_{a,b}`: bottom on the down-set of `a`, `b` everywhere else.
    pub fn e_map(lattice: &Arc<FiniteLattice>, a: Element, b: Element) -> Self {
        let values = lattice.elements().map(|x| if lattice.leq(x, a) { lattice.bottom() } else { b }).collect();
        Self::new_unchecked(lattice, values)
    }

    /// Extends an assignment on the join-irreducibles (in the order returned
    /// by [`FiniteLattice::join_irreducibles`]) by joins, then validates.
    pub fn from_join_irreducibles(lattice: &Arc<FiniteLattice>, images: &[Element]) -> Result<Self, MapError> {
        let irr = lattice.join_irreducibles();
        if images.len() != irr.len() {
            return Err(MapError::WrongLength { expected: irr.len(), got: images.len() });
        }
        let values = lattice
            .elements()
            .map(|x| lattice.join_all(irr.iter().zip(images).filter(|(&j, _)| lattice.leq(j, x)).map(|(_, &v)| v)))
            .collect();
        Self::new(lattice, values)
    }

    /// Every residuated map on `lattice`.
    ///
    /// Assigns images to join-irreducibles in rank order, pruning assignments
    /// that are not monotone, then extends by joins and keeps the valid ones.
    pub fn enumerate(lattice: &Arc<FiniteLattice>) -> Vec<Self> {
        let ranks = lattice.ranks();
        let mut irr = lattice.join_irreducibles();
        let canonical = irr.clone();
        irr.sort_by_key(|&j| (ranks[j], j));
        let slot: Vec<usize> = irr.iter().map(|j| canonical.iter().position(|c| c == j).unwrap()).collect();

        let mut out = Vec::new();
        let mut assigned = vec![0; irr.len()];
        fn rec(
            l: &Arc<FiniteLattice>,
            irr: &[Element],
            slot: &[usize],
            pos: usize,
            assigned: &mut Vec<Element>,
            out: &mut Vec<ResiduatedMap>,
        ) {
            if pos == irr.len() {
                let mut images = vec![0; irr.len()];
                for (k, &s) in slot.iter().enumerate() {
                    images[s] = assigned[k];
                }
                if let Ok(f) = ResiduatedMap::from_join_irreducibles(l, &images) {
                    out.push(f);
                }
                return;
            }
            for v in l.elements() {
                let monotone = (0..pos).all(|k| !l.leq(irr[k], irr[pos]) || l.leq(assigned[k], v));
                if monotone {
                    assigned[pos] = v;
                    rec(l, irr, slot, pos + 1, assigned, out);
                }
            }
        }
        rec(lattice, &irr, &slot, 0, &mut assigned, &mut out);
        out.sort_by(|a, b| a.values.cmp(&b.values));
        out
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == self.lattice.bottom())
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(x, &v)| x == v)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, MapError> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(MapError::DomainMismatch);
        }
        Ok(Self::new_unchecked(&self.lattice, other.values.iter().map(|&v| self.values[v]).collect()))
    }

    /// Pointwise join `x ↦ self(x) ∨ other(x)`.
    pub fn join(&self, other: &Self) -> Result<Self, MapError> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(MapError::DomainMismatch);
        }
        let l = &self.lattice;
        Ok(Self::new_unchecked(l, self.values.iter().zip(&other.values).map(|(&a, &b)| l.join(a, b)).collect()))
    }

    /// A residuated self-map is a lattice automorphism iff it is bijective.
    pub fn is_lattice_automorphism(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// The compositional inverse, found as `f^(k-1)` where `f^k = id`.
    pub fn invert(&self) -> Result<Self, MapError> {
        if !self.is_lattice_automorphism() {
            return Err(MapError::NotInvertible);
        }
        let mut prev = Self::identity(&self.lattice);
        let mut power = self.clone();
        while !power.is_identity() {
            prev = power.clone();
            power = self.compose(&power)?;
        }
        debug_assert_eq!(prev.values, table_inverse(&self.values));
        Ok(prev)
    }

    /// Least `k >= 1` with `f^k = id`, for automorphisms.
    pub fn order(&self) -> Option<usize> {
        if !self.is_lattice_automorphism() {
            return None;
        }
        let mut power = self.clone();
        let mut k = 1;
        while !power.is_identity() {
            power = self.compose(&power).ok()?;
            k += 1;
        }
        Some(k)
    }
}

fn table_inverse(values: &[Element]) -> Vec<Element> {
    let mut inv = vec![0; values.len()];
    for (x, &v) in values.iter().enumerate() {
        inv[v] = x;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn arc(name: &str) -> Arc<FiniteLattice> {
        Arc::new(catalog::lattice(name).unwrap())
    }

    #[test]
    fn make_map_examples() {
        let b2 = arc("square");
        assert!(ResiduatedMap::new(&b2, vec![0, 1, 2, 3]).is_ok());
        let c2 = arc("chain2");
        assert_eq!(
            ResiduatedMap::new(&c2, vec![1, 1]).unwrap_err(),
            MapError::NotResiduated(Violation::Bottom { image: 1 })
        );
        assert_eq!(
            ResiduatedMap::new(&b2, vec![0, 1, 2, 1]).unwrap_err(),
            MapError::NotResiduated(Violation::Join { x: 1, y: 2 })
        );
        assert!(matches!(ResiduatedMap::new(&b2, vec![0, 1]), Err(MapError::WrongLength { .. })));
    }

    #[test]
    fn e_maps() {
        let c2 = arc("chain2");
        assert_eq!(ResiduatedMap::e_map(&c2, 0, 1), ResiduatedMap::identity(&c2));
        let b2 = arc("square");
        for b in b2.elements() {
            assert!(ResiduatedMap::e_map(&b2, b2.top(), b).is_zero());
        }
        assert_eq!(ResiduatedMap::e_map(&b2, 1, 3).values(), &[0, 0, 3, 3]);
    }

    #[test]
    fn semiring_operations() {
        let b2 = arc("square");
        let f = ResiduatedMap::e_map(&b2, 1, 2);
        let id = ResiduatedMap::identity(&b2);
        let zero = ResiduatedMap::zero(&b2);
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(zero.join(&f).unwrap(), f);
        let c2 = arc("chain2");
        let id2 = ResiduatedMap::identity(&c2);
        assert_eq!(id2.join(&id2).unwrap(), id2);
        assert_eq!(id2.compose(&f), Err(MapError::DomainMismatch));
    }

    #[test]
    fn automorphism_and_inverse() {
        let b2 = arc("square");
        let swap = ResiduatedMap::new(&b2, vec![0, 2, 1, 3]).unwrap();
        assert!(swap.is_lattice_automorphism());
        assert!(!ResiduatedMap::zero(&b2).is_lattice_automorphism());
        assert_eq!(swap.invert().unwrap(), swap);
        assert_eq!(swap.order(), Some(2));
        let id = ResiduatedMap::identity(&b2);
        assert_eq!(id.invert().unwrap(), id);

        let m3 = arc("m3");
        let cycle = ResiduatedMap::new(&m3, vec![0, 2, 3, 1, 4]).unwrap();
        assert_eq!(cycle.order(), Some(3));
        assert_eq!(cycle.invert().unwrap(), cycle.compose(&cycle).unwrap());
        assert_eq!(ResiduatedMap::zero(&m3).invert(), Err(MapError::NotInvertible));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(ResiduatedMap::enumerate(&arc("chain2")).len(), 2);
        assert_eq!(ResiduatedMap::enumerate(&arc("chain3")).len(), 6);
        assert_eq!(ResiduatedMap::enumerate(&arc("square")).len(), 16);
        assert_eq!(ResiduatedMap::enumerate(&arc("chain4")).len(), 20);
        assert_eq!(ResiduatedMap::enumerate(&arc("m3")).len(), 50);
    }
}
