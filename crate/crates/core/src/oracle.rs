//! Brute-force ground truth.
//!
//! Nothing here uses factorizations or certificates. Invertibility is
//! bijectivity of the matrix action on the whole tuple space `L^n`, inverses
//! come from the order of that permutation, and congruences come from
//! enumerating every set partition.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Element, FiniteLattice};
use crate::matrix::ResMatrix;
use crate::resmap::{MapError, ResiduatedMap};
use crate::semiring::FiniteSemiring;

pub const DEFAULT_SPACE_CAP: usize = 1_000_000;
pub const MAX_ENUMERATION_LATTICE: usize = 8;
pub const MAX_CONGRUENCE_SEMIRING: usize = 10;
pub const DEFAULT_MATRIX_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("tuple space {base}^{arity} exceeds the cap of {cap}")]
    SpaceTooLarge { base: usize, arity: usize, cap: usize },
    #[error("lattice has {0} elements, enumeration is limited to {MAX_ENUMERATION_LATTICE}")]
    LatticeTooLarge(usize),
    #[error("semiring has {0} elements, congruence search is limited to {MAX_CONGRUENCE_SEMIRING}")]
    SemiringTooLarge(usize),
    #[error("{count} matrices exceed the cap of {cap}")]
    MatrixSpaceTooLarge { count: String, cap: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// All `|L|^n` tuples in lexicographic order (first coordinate most
/// significant).
#[derive(Debug, Clone)]
pub struct TupleSpace {
    lattice: Arc<FiniteLattice>,
    arity: usize,
    size: usize,
}

impl TupleSpace {
    pub fn new(lattice: &Arc<FiniteLattice>, arity: usize, cap: usize) -> Result<Self, OracleError> {
        let too_large = OracleError::SpaceTooLarge { base: lattice.len(), arity, cap };
        let size =
            u32::try_from(arity).ok().and_then(|a| lattice.len().checked_pow(a)).ok_or_else(|| too_large.clone())?;
        if size > cap {
            return Err(too_large);
        }
        Ok(Self { lattice: Arc::clone(lattice), arity, size })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuple(&self, mut index: usize) -> Vec<Element> {
        let base = self.lattice.len();
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = index % base;
            index /= base;
        }
        t
    }

    pub fn index(&self, tuple: &[Element]) -> usize {
        let base = self.lattice.len();
        tuple.iter().fold(0, |acc, &x| acc * base + x)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Element>> + '_ {
        (0..self.size).map(|k| self.tuple(k))
    }
}

fn image_index(m: &ResMatrix, space: &TupleSpace, x: &[Element]) -> usize {
    let l = m.lattice();
    let n = m.size();
    let mut k = 0;
    for i in 0..n {
        let mut acc = l.bottom();
        for (j, &xj) in x.iter().enumerate() {
            acc = l.join(acc, m.entry(i, j).values()[xj]);
        }
        k = k * l.len() + acc;
    }
    debug_assert!(k < space.len());
    k
}

/// The matrix action as a permutation-candidate table on tuple indices.
fn action_table(m: &ResMatrix, space: &TupleSpace) -> Vec<usize> {
    (0..space.len()).map(|k| image_index(m, space, &space.tuple(k))).collect()
}

pub fn oracle_is_invertible_with_cap(m: &ResMatrix, cap: usize) -> Result<bool, OracleError> {
    let space = TupleSpace::new(m.lattice(), m.size(), cap)?;
    let mut hit = vec![false; space.len()];
    for x in space.iter() {
        let y = image_index(m, &space, &x);
        if std::mem::replace(&mut hit[y], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the action of `m` on `L^n` is a bijection.
pub fn oracle_is_invertible(m: &ResMatrix) -> Result<bool, OracleError> {
    oracle_is_invertible_with_cap(m, DEFAULT_SPACE_CAP)
}

pub fn oracle_inverse_with_cap(m: &ResMatrix, cap: usize) -> Result<ResMatrix, OracleError> {
    let space = TupleSpace::new(m.lattice(), m.size(), cap)?;
    let phi = action_table(m, &space);
    let mut hit = vec![false; phi.len()];
    if phi.iter().any(|&y| std::mem::replace(&mut hit[y], true)) {
        return Err(OracleError::NotInvertible);
    }
    // φ^k = id for the least k; the inverse is φ^(k-1).
    let is_id = |p: &[usize]| p.iter().enumerate().all(|(k, &v)| k == v);
    let mut prev: Vec<usize> = (0..phi.len()).collect();
    let mut power = phi.clone();
    while !is_id(&power) {
        prev = power.clone();
        power = power.iter().map(|&k| phi[k]).collect();
    }
    let inverse = prev;

    let l = m.lattice();
    let n = m.size();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let values = l
                .elements()
                .map(|a| {
                    let mut x = vec![l.bottom(); n];
                    x[j] = a;
                    space.tuple(inverse[space.index(&x)])[i]
                })
                .collect();
            entries.push(ResiduatedMap::new(l, values)?);
        }
    }
    Ok(ResMatrix::new(l, n, entries).expect("entries share the lattice"))
}

/// Inverse read off from the inverse permutation of `L^n`.
pub fn oracle_inverse(m: &ResMatrix) -> Result<ResMatrix, OracleError> {
    oracle_inverse_with_cap(m, DEFAULT_SPACE_CAP)
}

/// Every residuated map, by assigning arbitrary images to the
/// join-irreducibles, extending by joins, and keeping the valid results.
pub fn oracle_enumerate_residuated(l: &Arc<FiniteLattice>) -> Result<Vec<ResiduatedMap>, OracleError> {
    if l.len() > MAX_ENUMERATION_LATTICE {
        return Err(OracleError::LatticeTooLarge(l.len()));
    }
    let irr = l.join_irreducibles();
    let combos = l.len().pow(irr.len() as u32);
    let mut out = Vec::new();
    let mut images = vec![0; irr.len()];
    for mut code in 0..combos {
        for slot in images.iter_mut() {
            *slot = code % l.len();
            code /= l.len();
        }
        let values: Vec<Element> = l
            .elements()
            .map(|x| {
                irr.iter().zip(&images).filter(|(&j, _)| l.leq(j, x)).fold(l.bottom(), |acc, (_, &v)| l.join(acc, v))
            })
            .collect();
        if let Ok(f) = ResiduatedMap::new(l, values) {
            out.push(f);
        }
    }
    out.sort_by(|a, b| a.values().cmp(b.values()));
    out.dedup();
    Ok(out)
}

/// Every partition of the carrier compatible with both operations, as
/// restricted-growth block vectors.
pub fn oracle_semiring_congruences(r: &FiniteSemiring) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = r.len();
    if n > MAX_CONGRUENCE_SEMIRING {
        return Err(OracleError::SemiringTooLarge(n));
    }
    let mut out = Vec::new();
    let mut blocks = vec![0; n];
    fn rec(r: &FiniteSemiring, pos: usize, max: usize, blocks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = blocks.len();
        if pos == n {
            let compatible = (0..n).all(|x| {
                (0..n).all(|x2| {
                    blocks[x] != blocks[x2]
                        || (0..n).all(|y| {
                            (0..n).all(|y2| {
                                blocks[y] != blocks[y2]
                                    || (blocks[r.add(x, y)] == blocks[r.add(x2, y2)]
                                        && blocks[r.mul(x, y)] == blocks[r.mul(x2, y2)])
                            })
                        })
                })
            });
            if compatible {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..=max {
            blocks[pos] = b;
            rec(r, pos + 1, max.max(b + 1), blocks, out);
        }
    }
    rec(r, 1, 1, &mut blocks, &mut out);
    Ok(out)
}

/// All `n × n` matrices with entries from a fixed list, indexed densely.
#[derive(Debug, Clone)]
pub struct MatrixSpace {
    lattice: Arc<FiniteLattice>,
    elements: Vec<ResiduatedMap>,
    n: usize,
    size: usize,
}

impl MatrixSpace {
    pub fn new(lattice: &Arc<FiniteLattice>, elements: Vec<ResiduatedMap>, n: usize) -> Option<Self> {
        let size = elements.len().checked_pow(u32::try_from(n * n).ok()?)?;
        Some(Self { lattice: Arc::clone(lattice), elements, n, size })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn matrix(&self, mut index: usize) -> ResMatrix {
        let base = self.elements.len();
        let mut entries = Vec::with_capacity(self.n * self.n);
        for _ in 0..self.n * self.n {
            entries.push(self.elements[index % base].clone());
            index /= base;
        }
        entries.reverse();
        ResMatrix::new(&self.lattice, self.n, entries).expect("entries share the lattice")
    }
}

/// Number of invertible `n × n` matrices over `Res(L)` by exhaustive search.
/// Runs on the current rayon pool.
pub fn oracle_count_invertible(l: &Arc<FiniteLattice>, n: usize, matrix_cap: usize) -> Result<usize, OracleError> {
    let maps = oracle_enumerate_residuated(l)?;
    TupleSpace::new(l, n, DEFAULT_SPACE_CAP)?;
    let too_large = || OracleError::MatrixSpaceTooLarge { count: format!("{}^{}", maps.len(), n * n), cap: matrix_cap };
    let space = MatrixSpace::new(l, maps.clone(), n).ok_or_else(too_large)?;
    if space.len() > matrix_cap {
        return Err(too_large());
    }
    (0..space.len())
        .into_par_iter()
        .map(|k| oracle_is_invertible(&space.matrix(k)).map(usize::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}
