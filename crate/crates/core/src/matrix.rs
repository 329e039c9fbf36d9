//! Square matrices over `Res(L)` and over abstract semirings.
//!
//! Invertibility is decided structurally. Let `L = L_0 × … × L_{T-1}` be the
//! irreducible factorization. For each output coordinate `(t, i)` (factor
//! `t` of row `i`) and input coordinate `(s, j)`, the component map
//! `π_t ∘ m_{i,j} ∘ ε_s : L_s → L_t` is computed. A matrix is invertible iff
//! every output coordinate has exactly one non-zero component, that
//! component is a lattice isomorphism, and the resulting assignment `σ` is a
//! permutation of the coordinates. Residuated maps are determined by their
//! values on the injections, so no evaluation on `L^n` is needed.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::factor::{factorize, is_irreducible, Factorization};
use crate::lattice::{Element, FiniteLattice};
use crate::resmap::{same_lattice, MapError, ResiduatedMap};
use crate::semiring::{embed, pullback_element, Embedding, FiniteSemiring, SemiringError};

pub use crate::factor::count_invertible;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrices have different shapes or lattices")]
    ShapeMismatch,
    #[error("matrix needs n*n = {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("matrix size must be at least 1")]
    Empty,
    #[error("entries live on different lattices")]
    DomainMismatch,
    #[error("factorization does not belong to the matrix lattice")]
    FactorizationMismatch,
    #[error("certificate does not match the matrix")]
    CertificateMismatch,
    #[error("lattice is not irreducible")]
    LatticeNotIrreducible,
    #[error("semiring element {0} out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

/// An `n × n` matrix with entries in `Res(L)`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ResMatrix {
    lattice: Arc<FiniteLattice>,
    n: usize,
    entries: Vec<ResiduatedMap>,
}

impl fmt::Debug for ResMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n)).finish()
    }
}

impl ResMatrix {
    pub fn new(lattice: &Arc<FiniteLattice>, n: usize, entries: Vec<ResiduatedMap>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n * n {
            return Err(MatrixError::WrongEntryCount { expected: n * n, got: entries.len() });
        }
        if entries.iter().any(|e| !same_lattice(e.lattice(), lattice)) {
            return Err(MatrixError::DomainMismatch);
        }
        Ok(Self { lattice: Arc::clone(lattice), n, entries })
    }

    pub fn identity(lattice: &Arc<FiniteLattice>, n: usize) -> Self {
        Self::permutation(lattice, &(0..n).collect::<Vec<_>>())
    }

    pub fn zero(lattice: &Arc<FiniteLattice>, n: usize) -> Self {
        Self { lattice: Arc::clone(lattice), n, entries: vec![ResiduatedMap::zero(lattice); n * n] }
    }

    /// Identity maps at `(i, perm[i])`, zero elsewhere.
    pub fn permutation(lattice: &Arc<FiniteLattice>, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(lattice, n);
        for (i, &j) in perm.iter().enumerate() {
            m.entries[i * n + j] = ResiduatedMap::identity(lattice);
        }
        m
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &ResiduatedMap {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[ResiduatedMap] {
        &self.entries
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.n != other.n || !same_lattice(&self.lattice, &other.lattice) {
            return Err(MatrixError::ShapeMismatch);
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ResiduatedMap::zero(&self.lattice);
                for k in 0..n {
                    acc = acc.join(&self.entry(i, k).compose(other.entry(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self { lattice: Arc::clone(&self.lattice), n, entries })
    }

    /// The tuple map `φ_M : L^n → L^n`.
    pub fn action(&self) -> MatrixAction<'_> {
        MatrixAction { matrix: self }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_identity()
                } else {
                    e.is_zero()
                }
            })
        })
    }
}

/// `φ_M : (x_j)_j ↦ (⋁_j m_{i,j}(x_j))_i`.
#[derive(Debug, Clone, Copy)]
pub struct MatrixAction<'a> {
    matrix: &'a ResMatrix,
}

impl MatrixAction<'_> {
    pub fn apply(&self, x: &[Element]) -> Vec<Element> {
        let m = self.matrix;
        assert_eq!(x.len(), m.n, "tuple arity must match the matrix size");
        (0..m.n).map(|i| m.lattice.join_all((0..m.n).map(|j| m.entry(i, j).apply(x[j])))).collect()
    }
}

pub fn phi_of_matrix(m: &ResMatrix) -> MatrixAction<'_> {
    m.action()
}

/// A coordinate of `L^n`: factor `factor` of row (or column) `row`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate {
    pub factor: usize,
    pub row: usize,
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.factor, self.row)
    }
}

/// Witness of invertibility.
///
/// `sigma` sends each output coordinate to the unique input coordinate it
/// depends on. `iso_maps[p]` is the isomorphism `φ_p : L_{p.factor} →
/// L_{σ⁻¹(p).factor}` applied to input coordinate `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibilityCertificate {
    factorization: Arc<Factorization>,
    n: usize,
    sigma: Vec<Coordinate>,
    sigma_inv: Vec<Coordinate>,
    iso_maps: Vec<Vec<Element>>,
}

impl InvertibilityCertificate {
    fn index(&self, c: Coordinate) -> usize {
        c.row * self.factorization.factor_count() + c.factor
    }

    fn coordinate(&self, k: usize) -> Coordinate {
        let t = self.factorization.factor_count();
        Coordinate { factor: k % t, row: k / t }
    }

    pub fn factorization(&self) -> &Arc<Factorization> {
        &self.factorization
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coordinates(&self) -> impl Iterator<Item = Coordinate> + '_ {
        (0..self.sigma.len()).map(|k| self.coordinate(k))
    }

    pub fn sigma(&self, c: Coordinate) -> Coordinate {
        self.sigma[self.index(c)]
    }

    pub fn sigma_inverse(&self, c: Coordinate) -> Coordinate {
        self.sigma_inv[self.index(c)]
    }

    /// `φ_p` for input coordinate `p`.
    pub fn iso_map(&self, p: Coordinate) -> &[Element] {
        &self.iso_maps[self.index(p)]
    }

    /// `σ` in cycle notation; fixed points are omitted and the identity
    /// prints as `()`.
    pub fn cycle_notation(&self) -> String {
        let mut seen = vec![false; self.sigma.len()];
        let mut out = String::new();
        for start in 0..self.sigma.len() {
            if seen[start] || self.sigma[start] == self.coordinate(start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(self.coordinate(k).to_string());
                k = self.index(self.sigma[k]);
            }
            out.push_str(&format!("({})", cycle.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// Decides invertibility of `m`, returning a certificate when invertible.
pub fn check_invertible(
    m: &ResMatrix,
    f: &Arc<Factorization>,
) -> Result<Option<InvertibilityCertificate>, MatrixError> {
    if !same_lattice(m.lattice(), f.source()) {
        return Err(MatrixError::FactorizationMismatch);
    }
    let coords = f.coordinates();
    let factors = f.factors();
    let t_count = factors.len();
    let n = m.size();
    let total = t_count * n;
    let coordinate = |k: usize| Coordinate { factor: k % t_count, row: k / t_count };

    let mut sigma = Vec::with_capacity(total);
    let mut iso_by_input: Vec<Option<Vec<Element>>> = vec![None; total];
    let mut component = Vec::new();
    for out in 0..total {
        let Coordinate { factor: t, row: i } = coordinate(out);
        let mut hit: Option<Coordinate> = None;
        for (input, slot) in iso_by_input.iter_mut().enumerate() {
            let Coordinate { factor: s, row: j } = coordinate(input);
            let entry = m.entry(i, j);
            component.clear();
            component.extend(factors[s].elements().map(|a| coords.project(entry.apply(coords.inject(s, a)), t)));
            if component.iter().all(|&v| v == factors[t].bottom()) {
                continue;
            }
            if hit.is_some() || factors[s].len() != factors[t].len() || !is_bijection(&component) {
                return Ok(None);
            }
            if slot.is_some() {
                // σ would not be injective
                return Ok(None);
            }
            hit = Some(Coordinate { factor: s, row: j });
            *slot = Some(component.clone());
        }
        match hit {
            Some(p) => sigma.push(p),
            None => return Ok(None),
        }
    }
    // σ is an injective map of a finite set into itself.
    let mut sigma_inv = vec![Coordinate { factor: 0, row: 0 }; total];
    for (k, p) in sigma.iter().enumerate() {
        sigma_inv[p.row * t_count + p.factor] = coordinate(k);
    }
    let iso_maps = iso_by_input.into_iter().map(|m| m.expect("σ is onto")).collect();
    Ok(Some(InvertibilityCertificate { factorization: Arc::clone(f), n, sigma, sigma_inv, iso_maps }))
}

fn is_bijection(values: &[Element]) -> bool {
    let mut seen = vec![false; values.len()];
    values.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// Assembles the inverse from a certificate: entry `b_{i,j}` sends factor
/// `s` of its argument to factor `t` through `φ_{(t,i)}⁻¹` when
/// `σ⁻¹(t,i) = (s,j)`, and is zero on all other factor pairs.
pub fn invert(m: &ResMatrix, cert: &InvertibilityCertificate) -> Result<ResMatrix, MatrixError> {
    if cert.n != m.size() || !same_lattice(m.lattice(), cert.factorization.source()) {
        return Err(MatrixError::CertificateMismatch);
    }
    let f = &cert.factorization;
    let coords = f.coordinates();
    let factors = f.factors();
    let lattice = m.lattice();
    let n = m.size();
    let inverse_iso: Vec<Vec<Element>> = cert
        .iso_maps
        .iter()
        .map(|phi| {
            let mut inv = vec![0; phi.len()];
            for (a, &b) in phi.iter().enumerate() {
                inv[b] = a;
            }
            inv
        })
        .collect();

    let mut entries = Vec::with_capacity(n * n);
    let mut tuple = vec![0; factors.len()];
    for i in 0..n {
        for j in 0..n {
            let values = lattice
                .elements()
                .map(|x| {
                    let arg = coords.encode(x);
                    for (t, slot) in tuple.iter_mut().enumerate() {
                        let here = Coordinate { factor: t, row: i };
                        let src = cert.sigma_inverse(here);
                        *slot = if src.row == j {
                            inverse_iso[cert.index(here)][arg[src.factor]]
                        } else {
                            factors[t].bottom()
                        };
                    }
                    coords.decode(&tuple)
                })
                .collect();
            entries.push(ResiduatedMap::new(lattice, values)?);
        }
    }
    ResMatrix::new(lattice, n, entries)
}

/// Exactly one non-zero entry per row and column, each an automorphism.
pub fn is_generalized_permutation(m: &ResMatrix) -> bool {
    let n = m.size();
    let mut col_used = vec![false; n];
    for i in 0..n {
        let mut nonzero = (0..n).filter(|&j| !m.entry(i, j).is_zero());
        let (Some(j), None) = (nonzero.next(), nonzero.next()) else {
            return false;
        };
        if std::mem::replace(&mut col_used[j], true) || !m.entry(i, j).is_lattice_automorphism() {
            return false;
        }
    }
    true
}

/// Over an irreducible lattice the invertible matrices are exactly the
/// generalized permutation matrices.
pub fn check_invertible_fast_irreducible(m: &ResMatrix) -> Result<bool, MatrixError> {
    if !is_irreducible(m.lattice()) {
        return Err(MatrixError::LatticeNotIrreducible);
    }
    Ok(is_generalized_permutation(m))
}

/// An `n × n` matrix over a finite semiring, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiringMatrix {
    semiring: Arc<FiniteSemiring>,
    n: usize,
    entries: Vec<usize>,
}

impl SemiringMatrix {
    pub fn new(semiring: &Arc<FiniteSemiring>, n: usize, entries: Vec<usize>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n * n {
            return Err(MatrixError::WrongEntryCount { expected: n * n, got: entries.len() });
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= semiring.len()) {
            return Err(MatrixError::OutOfRange(e));
        }
        Ok(Self { semiring: Arc::clone(semiring), n, entries })
    }

    pub fn identity(semiring: &Arc<FiniteSemiring>, n: usize) -> Self {
        let entries = (0..n * n).map(|k| if k / n == k % n { semiring.one() } else { semiring.zero() }).collect();
        Self { semiring: Arc::clone(semiring), n, entries }
    }

    /// `one` at `(i, perm[i])`, zero elsewhere.
    pub fn permutation(semiring: &Arc<FiniteSemiring>, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut entries = vec![semiring.zero(); n * n];
        for (i, &j) in perm.iter().enumerate() {
            entries[i * n + j] = semiring.one();
        }
        Self { semiring: Arc::clone(semiring), n, entries }
    }

    pub fn semiring(&self) -> &Arc<FiniteSemiring> {
        &self.semiring
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.n != other.n || self.semiring != other.semiring {
            return Err(MatrixError::ShapeMismatch);
        }
        let r = &self.semiring;
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).fold(r.zero(), |acc, l| r.add(acc, r.mul(self.entry(i, l), other.entry(l, j))))
            })
            .collect();
        Ok(Self { semiring: Arc::clone(r), n, entries })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.semiring, self.n)
    }

    /// The image of this matrix under the entrywise embedding `r ↦ T_r`.
    pub fn to_res_matrix(&self, embedding: &Embedding) -> ResMatrix {
        let entries = self.entries.iter().map(|&r| embedding.image(r).clone()).collect();
        ResMatrix::new(embedding.lattice(), self.n, entries).expect("embedding images share a lattice")
    }
}

/// Output of the semiring pipeline: embedding, factorization, certificate.
#[derive(Debug, Clone)]
pub struct SemiringInversion {
    pub embedding: Embedding,
    pub factorization: Arc<Factorization>,
    pub embedded: ResMatrix,
    pub certificate: Option<InvertibilityCertificate>,
    pub inverse: Option<SemiringMatrix>,
}

/// Embeds `a` into matrices over `Res(R, ≤)`, decides invertibility there,
/// and pulls the inverse back into `R`.
pub fn semiring_matrix_pipeline(a: &SemiringMatrix) -> Result<SemiringInversion, MatrixError> {
    let r = a.semiring();
    let embedding = embed(r)?;
    let factorization = Arc::new(factorize(embedding.lattice()));
    let embedded = a.to_res_matrix(&embedding);
    let certificate = check_invertible(&embedded, &factorization)?;
    let inverse = match &certificate {
        None => None,
        Some(cert) => {
            let b = invert(&embedded, cert)?;
            let entries =
                b.entries().iter().map(|e| pullback_element(e, r, &embedding)).collect::<Result<Vec<_>, _>>()?;
            Some(SemiringMatrix::new(r, a.size(), entries)?)
        }
    };
    Ok(SemiringInversion { embedding, factorization, embedded, certificate, inverse })
}

pub fn semiring_matrix_invert(a: &SemiringMatrix) -> Result<Option<SemiringMatrix>, MatrixError> {
    Ok(semiring_matrix_pipeline(a)?.inverse)
}
