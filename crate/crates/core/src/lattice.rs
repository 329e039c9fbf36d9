//! Finite lattices stored as dense order, join and meet tables.
//!
//! Elements are the indices `0..len()`. Labels only matter for I/O.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a lattice element.
pub type Element = usize;

/// Which bound failed to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Join => f.write_str("least upper bound"),
            Bound::Meet => f.write_str("greatest lower bound"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cover relation is cyclic through `{0}`")]
    CyclicCovers(String),
    #[error("relation is not a partial order: {0}")]
    NotAnOrder(String),
    #[error("not a lattice: `{x}` and `{y}` have no {bound}")]
    NotALattice { x: String, y: String, bound: Bound },
    #[error("`{lo}` is not below `{hi}`")]
    NotComparable { lo: String, hi: String },
    #[error("element index {0} is out of range")]
    OutOfRange(usize),
    #[error("coordinate map is not a lattice isomorphism: {0}")]
    BadCoordinates(String),
}

/// A finite lattice with precomputed tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    join: Vec<Element>,
    meet: Vec<Element>,
    bottom: Element,
    top: Element,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice").field("labels", &self.labels).field("covers", &self.covers()).finish()
    }
}

/// Builds a lattice from labels and a cover (or any generating) relation.
///
/// The order is the reflexive-transitive closure of `covers`; element `i` is
/// `labels[i]`.
pub fn build_lattice<S, P>(labels: &[S], covers: &[(P, P)]) -> Result<FiniteLattice, LatticeError>
where
    S: AsRef<str>,
    P: AsRef<str>,
{
    let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(LatticeError::DuplicateLabel(l.clone()));
        }
    }
    let n = labels.len();
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    let lookup = |s: &str| index.get(s).copied().ok_or_else(|| LatticeError::UnknownLabel(s.to_owned()));
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (lo, hi) in covers {
        let (lo, hi) = (lookup(lo.as_ref())?, lookup(hi.as_ref())?);
        if lo == hi {
            return Err(LatticeError::CyclicCovers(labels[lo].clone()));
        }
        leq[lo * n + hi] = true;
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i * n + j] && leq[j * n + i] {
                return Err(LatticeError::CyclicCovers(labels[i].clone()));
            }
        }
    }
    FiniteLattice::from_order(labels, leq)
}

impl FiniteLattice {
    /// Builds a lattice from a full order table (`leq[x * n + y]` is `x <= y`).
    pub fn from_order(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        assert_eq!(leq.len(), n * n, "order table must be n x n");
        for x in 0..n {
            if !leq[x * n + x] {
                return Err(LatticeError::NotAnOrder(format!("`{}` is not reflexive", labels[x])));
            }
            for y in 0..n {
                if x != y && leq[x * n + y] && leq[y * n + x] {
                    return Err(LatticeError::NotAnOrder(format!(
                        "`{}` and `{}` violate antisymmetry",
                        labels[x], labels[y]
                    )));
                }
                if leq[x * n + y] {
                    for z in 0..n {
                        if leq[y * n + z] && !leq[x * n + z] {
                            return Err(LatticeError::NotAnOrder(format!(
                                "`{}` <= `{}` <= `{}` is not transitive",
                                labels[x], labels[y], labels[z]
                            )));
                        }
                    }
                }
            }
        }

        let below: Vec<usize> = (0..n).map(|z| (0..n).filter(|&w| leq[w * n + z]).count()).collect();
        let above: Vec<usize> = (0..n).map(|z| (0..n).filter(|&w| leq[z * n + w]).count()).collect();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let j =
                    extremal_bound(n, |z| leq[x * n + z] && leq[y * n + z], |a, b| leq[a * n + b], &below).ok_or_else(
                        || LatticeError::NotALattice { x: labels[x].clone(), y: labels[y].clone(), bound: Bound::Join },
                    )?;
                let m =
                    extremal_bound(n, |z| leq[z * n + x] && leq[z * n + y], |a, b| leq[b * n + a], &above).ok_or_else(
                        || LatticeError::NotALattice { x: labels[x].clone(), y: labels[y].clone(), bound: Bound::Meet },
                    )?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b * n + x]));
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t]));
        // Joins of all pairs exist, so a finite lattice always has both bounds.
        let (bottom, top) = (bottom.expect("finite lattice has a bottom"), top.expect("finite lattice has a top"));
        Ok(Self { labels, leq, join, meet, bottom, top })
    }

    /// The one-element lattice.
    pub fn trivial(label: &str) -> Self {
        Self { labels: vec![label.to_owned()], leq: vec![true], join: vec![0], meet: vec![0], bottom: 0, top: 0 }
    }

    /// The `n`-element chain labelled `0..n`.
    pub fn chain(n: usize) -> Self {
        assert!(n > 0, "chain needs at least one element");
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        Self::from_order(labels, leq).expect("chains are lattices")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.len()
    }

    #[inline]
    pub fn leq(&self, x: Element, y: Element) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn lt(&self, x: Element, y: Element) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: Element, y: Element) -> Element {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet(&self, x: Element, y: Element) -> Element {
        self.meet[x * self.len() + y]
    }

    /// Join of a (possibly empty) family of elements.
    pub fn join_all<I: IntoIterator<Item = Element>>(&self, xs: I) -> Element {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    #[inline]
    pub fn bottom(&self) -> Element {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> Element {
        self.top
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    /// `x` is covered by `y`: `x < y` with nothing strictly in between.
    pub fn covered_by(&self, x: Element, y: Element) -> bool {
        self.lt(x, y) && !self.elements().any(|z| self.lt(x, z) && self.lt(z, y))
    }

    /// Hasse diagram edges, sorted by (lower, upper) index.
    pub fn covers(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if self.covered_by(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn upper_covers(&self, x: Element) -> Vec<Element> {
        self.elements().filter(|&y| self.covered_by(x, y)).collect()
    }

    pub fn lower_covers(&self, x: Element) -> Vec<Element> {
        self.elements().filter(|&y| self.covered_by(y, x)).collect()
    }

    /// Length of the longest chain from bottom to each element.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<Element> = self.elements().collect();
        // Sorting by down-set size gives a linear extension.
        order.sort_by_key(|&x| self.elements().filter(|&y| self.leq(y, x)).count());
        let mut rank = vec![0; self.len()];
        for &x in &order {
            rank[x] = self.elements().filter(|&y| self.lt(y, x)).map(|y| rank[y] + 1).max().unwrap_or(0);
        }
        rank
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.lower_covers(x).len() == 1).collect()
    }

    /// Same order with every element renamed.
    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        Self { labels, ..self.clone() }
    }

    /// Renumbers the elements: new index `perm[x]` holds the old element `x`.
    pub fn permuted(&self, perm: &[Element]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        let mut leq = vec![false; n * n];
        for x in 0..n {
            labels[perm[x]] = self.labels[x].clone();
            for y in 0..n {
                leq[perm[x] * n + perm[y]] = self.leq(x, y);
            }
        }
        Self::from_order(labels, leq).expect("renumbering preserves the lattice property")
    }

    /// Recomputes joins and meets from the order alone and compares them with
    /// the stored tables. Also checks the algebraic lattice laws.
    pub fn check_tables(&self) -> Result<(), String> {
        let rebuilt = Self::from_order(self.labels.clone(), self.leq.clone()).map_err(|e| e.to_string())?;
        if rebuilt.join != self.join || rebuilt.meet != self.meet {
            return Err("stored tables differ from the order".into());
        }
        for x in self.elements() {
            if !self.leq(self.bottom, x) || !self.leq(x, self.top) {
                return Err(format!("`{}` escapes the bounds", self.label(x)));
            }
            for y in self.elements() {
                if self.join(x, self.meet(x, y)) != x || self.meet(x, self.join(x, y)) != x {
                    return Err(format!("absorption fails at ({}, {})", self.label(x), self.label(y)));
                }
                for z in self.elements() {
                    if self.join(self.join(x, y), z) != self.join(x, self.join(y, z))
                        || self.meet(self.meet(x, y), z) != self.meet(x, self.meet(y, z))
                    {
                        return Err("associativity fails".into());
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_element(&self, x: Element) -> Result<(), LatticeError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(LatticeError::OutOfRange(x))
        }
    }
}

/// Finds the unique element of `candidates` below (per `le`) all other
/// candidates. The candidate with the smallest `rank_key` is the only one that
/// can qualify, so only it is verified.
fn extremal_bound(
    n: usize,
    candidate: impl Fn(Element) -> bool,
    le: impl Fn(Element, Element) -> bool,
    rank_key: &[usize],
) -> Option<Element> {
    let best = (0..n).filter(|&z| candidate(z)).min_by_key(|&z| rank_key[z])?;
    (0..n).filter(|&z| candidate(z)).all(|z| le(best, z)).then_some(best)
}

/// A lattice isomorphism between `source` and the product of `factors`.
///
/// `encode(x)[t]` is the `t`-th coordinate of `x`; `decode` inverts it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    source: FiniteLattice,
    factors: Vec<FiniteLattice>,
    encode: Vec<Vec<Element>>,
    decode: Vec<Element>,
    strides: Vec<usize>,
}

impl CoordinateMap {
    /// Validates that `encode` is a lattice isomorphism onto the product.
    pub fn new(
        source: FiniteLattice,
        factors: Vec<FiniteLattice>,
        encode: Vec<Vec<Element>>,
    ) -> Result<Self, LatticeError> {
        let strides = strides(&factors);
        let size: usize = factors.iter().map(FiniteLattice::len).product();
        if size != source.len() || encode.len() != source.len() {
            return Err(LatticeError::BadCoordinates(format!(
                "{} elements against a product of size {}",
                source.len(),
                size
            )));
        }
        let mut decode = vec![usize::MAX; size];
        for (x, tuple) in encode.iter().enumerate() {
            if tuple.len() != factors.len() || tuple.iter().zip(&factors).any(|(&a, f)| a >= f.len()) {
                return Err(LatticeError::BadCoordinates(format!("bad tuple for `{}`", source.label(x))));
            }
            let k = tuple_index(&strides, tuple);
            if decode[k] != usize::MAX {
                return Err(LatticeError::BadCoordinates("encoding is not injective".into()));
            }
            decode[k] = x;
        }
        let map = Self { source, factors, encode, decode, strides };
        for x in map.source.elements() {
            for y in map.source.elements() {
                let j = map.source.join(x, y);
                let m = map.source.meet(x, y);
                for (t, f) in map.factors.iter().enumerate() {
                    let (a, b) = (map.encode[x][t], map.encode[y][t]);
                    if map.encode[j][t] != f.join(a, b) || map.encode[m][t] != f.meet(a, b) {
                        return Err(LatticeError::BadCoordinates(format!(
                            "operations on ({}, {}) are not componentwise",
                            map.source.label(x),
                            map.source.label(y)
                        )));
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &FiniteLattice {
        &self.source
    }

    pub fn factors(&self) -> &[FiniteLattice] {
        &self.factors
    }

    pub fn encode(&self, x: Element) -> &[Element] {
        &self.encode[x]
    }

    pub fn decode(&self, tuple: &[Element]) -> Element {
        self.decode[tuple_index(&self.strides, tuple)]
    }

    /// π_t: the `t`-th coordinate of `x`.
    pub fn project(&self, x: Element, t: usize) -> Element {
        self.encode[x][t]
    }

    /// ε_t: the element with `a` in coordinate `t` and bottoms elsewhere.
    pub fn inject(&self, t: usize, a: Element) -> Element {
        let mut k = 0;
        for (s, f) in self.factors.iter().enumerate() {
            let c = if s == t { a } else { f.bottom() };
            k += c * self.strides[s];
        }
        self.decode[k]
    }
}

fn strides(factors: &[FiniteLattice]) -> Vec<usize> {
    let mut strides = vec![1; factors.len()];
    for t in (0..factors.len().saturating_sub(1)).rev() {
        strides[t] = strides[t + 1] * factors[t + 1].len();
    }
    strides
}

fn tuple_index(strides: &[usize], tuple: &[Element]) -> usize {
    tuple.iter().zip(strides).map(|(a, s)| a * s).sum()
}

/// Direct product with lexicographic element order (first factor most
/// significant). The empty product is the trivial lattice.
pub fn product(factors: &[FiniteLattice]) -> CoordinateMap {
    let sizes: Vec<usize> = factors.iter().map(FiniteLattice::len).collect();
    let size: usize = sizes.iter().product();
    let mut tuples = Vec::with_capacity(size);
    let mut current = vec![0; factors.len()];
    for _ in 0..size {
        tuples.push(current.clone());
        for t in (0..factors.len()).rev() {
            current[t] += 1;
            if current[t] < sizes[t] {
                break;
            }
            current[t] = 0;
        }
    }
    let labels = tuples
        .iter()
        .map(|tuple| match factors.len() {
            1 => factors[0].label(tuple[0]).to_owned(),
            _ => {
                let parts: Vec<&str> = tuple.iter().zip(factors).map(|(&a, f)| f.label(a)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let leq = (0..size * size)
        .map(|k| {
            let (x, y) = (&tuples[k / size], &tuples[k % size]);
            factors.iter().enumerate().all(|(t, f)| f.leq(x[t], y[t]))
        })
        .collect();
    let source = FiniteLattice::from_order(labels, leq).expect("products of lattices are lattices");
    let strides = strides(factors);
    CoordinateMap { source, factors: factors.to_vec(), decode: (0..size).collect(), encode: tuples, strides }
}

/// An interval `[lo, hi]` together with its embedding into the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lattice: FiniteLattice,
    /// `embedding[k]` is the parent element behind interval element `k`.
    pub embedding: Vec<Element>,
}

impl Interval {
    /// Position of a parent element inside the interval, if it lies there.
    pub fn position(&self, x: Element) -> Option<Element> {
        self.embedding.iter().position(|&e| e == x)
    }
}

/// The sublattice `{x : lo <= x <= hi}` with the induced order.
pub fn interval(l: &FiniteLattice, lo: Element, hi: Element) -> Result<Interval, LatticeError> {
    l.check_element(lo)?;
    l.check_element(hi)?;
    if !l.leq(lo, hi) {
        return Err(LatticeError::NotComparable { lo: l.label(lo).to_owned(), hi: l.label(hi).to_owned() });
    }
    let embedding: Vec<Element> = l.elements().filter(|&x| l.leq(lo, x) && l.leq(x, hi)).collect();
    let m = embedding.len();
    let labels = embedding.iter().map(|&x| l.label(x).to_owned()).collect();
    let leq = (0..m * m).map(|k| l.leq(embedding[k / m], embedding[k % m])).collect();
    let lattice = FiniteLattice::from_order(labels, leq).expect("intervals of lattices are lattices");
    Ok(Interval { lattice, embedding })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> FiniteLattice {
        build_lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap()
    }

    #[test]
    fn two_chain() {
        let l = build_lattice(&["0", "1"], &[("0", "1")]).unwrap();
        assert_eq!((l.bottom(), l.top()), (0, 1));
        assert_eq!(l, FiniteLattice::chain(2));
    }

    #[test]
    fn square_join() {
        let l = square();
        assert_eq!(l.join(1, 2), 3);
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        l.check_tables().unwrap();
    }

    #[test]
    fn missing_join_is_rejected() {
        let err = build_lattice(&["0", "a", "b", "c"], &[("0", "a"), ("0", "b"), ("a", "c")]).unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice { bound: Bound::Join, .. }), "{err}");
    }

    #[test]
    fn bad_cover_inputs() {
        assert_eq!(build_lattice(&["0", "0"], &[("0", "0")]).unwrap_err(), LatticeError::DuplicateLabel("0".into()));
        assert!(matches!(
            build_lattice(&["0", "a", "1"], &[("0", "a"), ("a", "1"), ("1", "a")]),
            Err(LatticeError::CyclicCovers(_))
        ));
        assert!(matches!(build_lattice(&["0", "1"], &[("0", "2")]), Err(LatticeError::UnknownLabel(_))));
        assert_eq!(build_lattice::<&str, &str>(&[], &[]).unwrap_err(), LatticeError::Empty);
    }

    #[test]
    fn products() {
        let c2 = FiniteLattice::chain(2);
        let p = product(&[c2.clone(), c2.clone()]);
        assert_eq!(p.source().len(), 4);
        assert_eq!(p.source().covers(), square().covers());
        let single = product(std::slice::from_ref(&c2));
        assert_eq!(single.source(), &c2);
        let empty = product(&[]);
        assert!(empty.source().is_trivial());
        assert_eq!(empty.decode(&[]), 0);
    }

    #[test]
    fn injections_and_projections() {
        let c3 = FiniteLattice::chain(3);
        let p = product(&[FiniteLattice::chain(2), c3]);
        let x = p.inject(1, 2);
        assert_eq!(p.encode(x), &[0, 2]);
        for x in p.source().elements() {
            let t: Vec<_> = (0..2).map(|t| p.project(x, t)).collect();
            assert_eq!(p.decode(&t), x);
        }
    }

    #[test]
    fn intervals() {
        let l = square();
        assert_eq!(interval(&l, 0, 3).unwrap().lattice, l);
        let atom = interval(&l, 0, 1).unwrap();
        assert_eq!(atom.lattice.len(), 2);
        assert_eq!(atom.embedding, vec![0, 1]);
        let c3 = FiniteLattice::chain(3);
        let upper = interval(&c3, 1, 2).unwrap();
        assert_eq!(upper.lattice.covers(), vec![(0, 1)]);
        assert!(matches!(interval(&l, 1, 2), Err(LatticeError::NotComparable { .. })));
    }

    #[test]
    fn ranks_and_irreducibles() {
        let l = square();
        assert_eq!(l.ranks(), vec![0, 1, 1, 2]);
        assert_eq!(l.join_irreducibles(), vec![1, 2]);
        assert_eq!(FiniteLattice::chain(4).join_irreducibles(), vec![1, 2, 3]);
    }

    #[test]
    fn coordinate_map_rejects_non_isomorphism() {
        let c2 = FiniteLattice::chain(2);
        let c4 = FiniteLattice::chain(4);
        let enc = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        assert!(CoordinateMap::new(c4, vec![c2.clone(), c2], enc).is_err());
    }
}
