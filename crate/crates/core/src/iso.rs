//! Lattice isomorphisms by backtracking.
//!
//! Elements of the source are assigned in rank order, and each non-bottom
//! element is mapped among the upper covers of the image of one of its lower
//! covers. Candidates must agree on a small invariant signature and on the
//! order relation with everything assigned so far. A bijection that preserves
//! and reflects the order is a lattice isomorphism.

use crate::lattice::{Element, FiniteLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    rank: usize,
    up_degree: usize,
    down_degree: usize,
    below: usize,
    above: usize,
}

fn signatures(l: &FiniteLattice) -> Vec<Signature> {
    let ranks = l.ranks();
    l.elements()
        .map(|x| Signature {
            rank: ranks[x],
            up_degree: l.upper_covers(x).len(),
            down_degree: l.lower_covers(x).len(),
            below: l.elements().filter(|&y| l.leq(y, x)).count(),
            above: l.elements().filter(|&y| l.leq(x, y)).count(),
        })
        .collect()
}

struct Search<'a> {
    src: &'a FiniteLattice,
    dst: &'a FiniteLattice,
    src_sig: Vec<Signature>,
    dst_sig: Vec<Signature>,
    order: Vec<Element>,
    anchor: Vec<Option<Element>>,
    dst_upper: Vec<Vec<Element>>,
    map: Vec<Element>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(src: &'a FiniteLattice, dst: &'a FiniteLattice) -> Option<Self> {
        if src.len() != dst.len() {
            return None;
        }
        let src_sig = signatures(src);
        let dst_sig = signatures(dst);
        let mut a = src_sig.clone();
        let mut b = dst_sig.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
        let ranks = src.ranks();
        let mut order: Vec<Element> = src.elements().collect();
        order.sort_by_key(|&x| (ranks[x], x));
        let anchor = src.elements().map(|x| src.lower_covers(x).first().copied()).collect();
        let dst_upper = dst.elements().map(|y| dst.upper_covers(y)).collect();
        Some(Self {
            src,
            dst,
            src_sig,
            dst_sig,
            order,
            anchor,
            dst_upper,
            map: vec![usize::MAX; src.len()],
            used: vec![false; dst.len()],
        })
    }

    fn consistent(&self, pos: usize, x: Element, y: Element) -> bool {
        if self.used[y] || self.src_sig[x] != self.dst_sig[y] {
            return false;
        }
        self.order[..pos].iter().all(|&z| {
            let w = self.map[z];
            self.src.leq(z, x) == self.dst.leq(w, y) && self.src.leq(x, z) == self.dst.leq(y, w)
        })
    }

    /// Depth-first search; `visit` returns `false` to stop.
    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[Element]) -> bool) -> bool {
        if pos == self.order.len() {
            return visit(&self.map);
        }
        let x = self.order[pos];
        let candidates: Vec<Element> = match self.anchor[x] {
            Some(c) => self.dst_upper[self.map[c]].clone(),
            None => self.dst.elements().collect(),
        };
        for y in candidates {
            if !self.consistent(pos, x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            let go_on = self.run(pos + 1, visit);
            self.used[y] = false;
            self.map[x] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// A lattice isomorphism `l -> k` as a table, if one exists.
///
/// Deterministic for fixed inputs.
pub fn find_isomorphism(l: &FiniteLattice, k: &FiniteLattice) -> Option<Vec<Element>> {
    let mut search = Search::new(l, k)?;
    let mut found = None;
    search.run(0, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn are_isomorphic(l: &FiniteLattice, k: &FiniteLattice) -> bool {
    find_isomorphism(l, k).is_some()
}

/// All automorphisms of `l`, identity first.
pub fn automorphisms(l: &FiniteLattice) -> Vec<Vec<Element>> {
    let mut all = Vec::new();
    if let Some(mut search) = Search::new(l, l) {
        search.run(0, &mut |m| {
            all.push(m.to_vec());
            true
        });
    }
    let id: Vec<Element> = l.elements().collect();
    let pos = all.iter().position(|m| *m == id).expect("identity is an automorphism");
    let identity = all.remove(pos);
    all.insert(0, identity);
    all
}

/// Whether `map` is a bijection `l -> k` preserving joins and meets.
pub fn is_isomorphism(l: &FiniteLattice, k: &FiniteLattice, map: &[Element]) -> bool {
    if l.len() != k.len() || map.len() != l.len() {
        return false;
    }
    let mut seen = vec![false; k.len()];
    for &y in map {
        if y >= k.len() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    l.elements().all(|x| {
        l.elements().all(|y| map[l.join(x, y)] == k.join(map[x], map[y]) && map[l.meet(x, y)] == k.meet(map[x], map[y]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::product;

    /// Brute force over all permutations, for cross-checking.
    fn brute_force_automorphisms(l: &FiniteLattice) -> usize {
        fn rec(l: &FiniteLattice, perm: &mut Vec<Element>, used: &mut Vec<bool>, count: &mut usize) {
            if perm.len() == l.len() {
                if is_isomorphism(l, l, perm) {
                    *count += 1;
                }
                return;
            }
            for y in l.elements() {
                if !used[y] {
                    used[y] = true;
                    perm.push(y);
                    rec(l, perm, used, count);
                    perm.pop();
                    used[y] = false;
                }
            }
        }
        let mut count = 0;
        rec(l, &mut Vec::new(), &mut vec![false; l.len()], &mut count);
        count
    }

    #[test]
    fn chain_has_only_identity() {
        let c2 = FiniteLattice::chain(2);
        assert_eq!(automorphisms(&c2), vec![vec![0, 1]]);
        assert_eq!(find_isomorphism(&c2, &c2), Some(vec![0, 1]));
    }

    #[test]
    fn small_automorphism_groups_match_brute_force() {
        for name in ["square", "m3", "n5", "chain4", "cube"] {
            let l = catalog::lattice(name).unwrap();
            let auts = automorphisms(&l);
            assert_eq!(auts.len(), brute_force_automorphisms(&l), "{name}");
            assert!(auts.iter().all(|a| is_isomorphism(&l, &l, a)));
        }
        assert_eq!(automorphisms(&catalog::lattice("m3").unwrap()).len(), 6);
        assert_eq!(automorphisms(&catalog::lattice("square").unwrap()).len(), 2);
    }

    #[test]
    fn chain2_times_m3() {
        let p = product(&[FiniteLattice::chain(2), catalog::lattice("m3").unwrap()]);
        assert_eq!(p.source().len(), 10);
        assert_eq!(automorphisms(p.source()).len(), 6);
    }

    #[test]
    fn square_is_not_a_chain() {
        assert_eq!(find_isomorphism(&catalog::lattice("square").unwrap(), &FiniteLattice::chain(4)), None);
    }

    #[test]
    fn relabelled_m3() {
        let m3 = catalog::lattice("m3").unwrap();
        let shuffled = m3.permuted(&[4, 2, 0, 3, 1]);
        let iso = find_isomorphism(&m3, &shuffled).unwrap();
        assert!(is_isomorphism(&m3, &shuffled, &iso));
        // atoms go to atoms
        for &img in &iso[1..4] {
            assert!(shuffled.covered_by(shuffled.bottom(), img));
        }
    }
}
