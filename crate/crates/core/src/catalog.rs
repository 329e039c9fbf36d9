//! Named builtin lattices and semirings.

use crate::lattice::{build_lattice, FiniteLattice};
use crate::resmap::ResiduatedMap;
use crate::semiring::{generate_simple_semiring, FiniteSemiring, DEFAULT_CLOSURE_CAP};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Lattice,
    Semiring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
}

pub const LATTICES: &[&str] = &["chain2", "chain3", "chain4", "chain5", "square", "cube", "m3", "n5"];
pub const SEMIRINGS: &[&str] = &["bool", "maxplus3", "simple3chain", "res3chain", "simplesquare"];

pub fn entries() -> Vec<CatalogEntry> {
    LATTICES
        .iter()
        .map(|&name| CatalogEntry { name, kind: EntryKind::Lattice })
        .chain(SEMIRINGS.iter().map(|&name| CatalogEntry { name, kind: EntryKind::Semiring }))
        .collect()
}

pub fn lattice(name: &str) -> Option<FiniteLattice> {
    let l = match name {
        "chain2" => Ok(FiniteLattice::chain(2)),
        "chain3" => Ok(FiniteLattice::chain(3)),
        "chain4" => Ok(FiniteLattice::chain(4)),
        "chain5" => Ok(FiniteLattice::chain(5)),
        "square" => build_lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
        "cube" => build_lattice(
            &["0", "a", "b", "c", "ab", "ac", "bc", "1"],
            &[
                ("0", "a"),
                ("0", "b"),
                ("0", "c"),
                ("a", "ab"),
                ("a", "ac"),
                ("b", "ab"),
                ("b", "bc"),
                ("c", "ac"),
                ("c", "bc"),
                ("ab", "1"),
                ("ac", "1"),
                ("bc", "1"),
            ],
        ),
        "m3" => build_lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        ),
        "n5" => {
            build_lattice(&["0", "a", "b", "c", "1"], &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")])
        }
        _ => return None,
    };
    Some(l.expect("builtin lattices are valid"))
}

/// The Boolean semiring: OR and AND on {0, 1}.
pub fn boolean() -> FiniteSemiring {
    FiniteSemiring::new(vec!["0".into(), "1".into()], vec![0, 1, 1, 1], vec![0, 0, 0, 1], 0, 1)
        .expect("Boolean semiring is valid")
}

/// Max-plus truncated at 2, with an adjoined `-inf` as zero.
pub fn maxplus3() -> FiniteSemiring {
    // index 0 is -inf, index k + 1 is the value k
    let labels = vec!["-inf".into(), "0".into(), "1".into(), "2".into()];
    let mut add = vec![0; 16];
    let mut mul = vec![0; 16];
    for x in 0..4 {
        for y in 0..4 {
            add[x * 4 + y] = x.max(y);
            mul[x * 4 + y] = if x == 0 || y == 0 { 0 } else { ((x - 1) + (y - 1)).min(2) + 1 };
        }
    }
    FiniteSemiring::new(labels, add, mul, 0, 1).expect("truncated max-plus is valid")
}

pub fn semiring(name: &str) -> Option<FiniteSemiring> {
    match name {
        "bool" => Some(boolean()),
        "maxplus3" => Some(maxplus3()),
        "simple3chain" => Some(closure_semiring("chain3")),
        "simplesquare" => Some(closure_semiring("square")),
        "res3chain" => {
            let l = Arc::new(FiniteLattice::chain(3));
            let maps = ResiduatedMap::enumerate(&l);
            Some(FiniteSemiring::from_maps(&l, &maps).expect("Res(L) is a semiring"))
        }
        _ => None,
    }
}

fn closure_semiring(lattice_name: &str) -> FiniteSemiring {
    let l = lattice(lattice_name).expect("builtin lattice");
    generate_simple_semiring(&l, &[], DEFAULT_CLOSURE_CAP)
        .expect("closure stays below the cap")
        .to_semiring()
        .expect("closure contains the identity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_loads() {
        for e in entries() {
            match e.kind {
                EntryKind::Lattice => assert!(lattice(e.name).is_some(), "{}", e.name),
                EntryKind::Semiring => assert!(semiring(e.name).is_some(), "{}", e.name),
            }
        }
        assert!(lattice("bool").is_none());
    }

    #[test]
    fn sizes() {
        let sizes: Vec<usize> = LATTICES.iter().map(|n| lattice(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![2, 3, 4, 5, 4, 8, 5, 5]);
        assert_eq!(semiring("res3chain").unwrap().len(), 6);
        assert_eq!(semiring("simple3chain").unwrap().len(), 6);
        assert_eq!(semiring("maxplus3").unwrap().len(), 4);
    }
}
