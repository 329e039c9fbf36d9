//! Uniform sampling of invertible matrices over `Res(L)`.
//!
//! An invertible matrix is the same thing as a permutation `σ` of the
//! coordinates `(t, i)` that respects isomorphism classes of factors, plus
//! one factor isomorphism per coordinate. Sampling both uniformly gives the
//! uniform distribution on invertible matrices.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factor::Factorization;
use crate::iso::automorphisms;
use crate::lattice::Element;
use crate::matrix::ResMatrix;
use crate::resmap::ResiduatedMap;

/// The generator behind every seeded command.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples an invertible `n × n` matrix over `Res(f.source())`.
pub fn random_invertible<R: Rng + ?Sized>(f: &Factorization, n: usize, rng: &mut R) -> ResMatrix {
    assert!(n > 0, "matrix size must be at least 1");
    let lattice = f.source();
    let coords = f.coordinates();
    let factors = f.factors();
    let t_count = factors.len();
    let auts: Vec<Vec<Vec<Element>>> = f.classes().iter().map(|c| automorphisms(&c.representative)).collect();

    // sigma[(t, i)] = (s, j), with factors t and s in the same class.
    let mut sigma = vec![(0, 0); t_count * n];
    for class in f.classes() {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| class.members.iter().map(move |&t| (t, i))).collect();
        let mut targets = slots.clone();
        targets.shuffle(rng);
        for (&(t, i), &target) in slots.iter().zip(&targets) {
            sigma[i * t_count + t] = target;
        }
    }

    // φ for output (t, i): L_s → L_t, an automorphism of L_s followed by a
    // fixed isomorphism onto L_t.
    let mut phi: Vec<Vec<Element>> = Vec::with_capacity(t_count * n);
    for (k, &(s, _)) in sigma.iter().enumerate() {
        let t = k % t_count;
        let class = f.class_of(t);
        let aut_rep = &auts[class][rng.gen_range(0..auts[class].len())];
        // conjugate the representative automorphism onto L_s, then map to L_t
        let s_to_rep = f.factor_isomorphism(s, class_member(f, class)).expect("same class");
        let rep_to_t = f.factor_isomorphism(class_member(f, class), t).expect("same class");
        phi.push(factors[s].elements().map(|a| rep_to_t[aut_rep[s_to_rep[a]]]).collect());
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut tuple = vec![0; t_count];
    for i in 0..n {
        for j in 0..n {
            let values = lattice
                .elements()
                .map(|x| {
                    let arg = coords.encode(x);
                    for (t, slot) in tuple.iter_mut().enumerate() {
                        let k = i * t_count + t;
                        let (s, src_row) = sigma[k];
                        *slot = if src_row == j { phi[k][arg[s]] } else { factors[t].bottom() };
                    }
                    coords.decode(&tuple)
                })
                .collect();
            entries.push(ResiduatedMap::new(lattice, values).expect("assembled from lattice isomorphisms"));
        }
    }
    ResMatrix::new(lattice, n, entries).expect("entries share the lattice")
}

fn class_member(f: &Factorization, class: usize) -> usize {
    f.classes()[class].members[0]
}

/// Convenience wrapper owning its factorization.
pub fn random_invertible_seeded(f: &Arc<Factorization>, n: usize, seed: u64) -> ResMatrix {
    random_invertible(f, n, &mut seeded_rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::factor::factorize;
    use crate::matrix::check_invertible;

    #[test]
    fn samples_are_invertible_and_deterministic() {
        for name in ["chain2", "square", "m3", "cube", "n5"] {
            let l = catalog::lattice(name).unwrap();
            let f = Arc::new(factorize(&l));
            for seed in 0..10 {
                let m = random_invertible_seeded(&f, 2, seed);
                assert!(check_invertible(&m, &f).unwrap().is_some(), "{name} seed {seed}");
                assert_eq!(m, random_invertible_seeded(&f, 2, seed));
            }
        }
    }

    #[test]
    fn reaches_every_invertible_1x1_over_square() {
        let f = Arc::new(factorize(&catalog::lattice("square").unwrap()));
        let mut rng = seeded_rng(7);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..64 {
            seen.insert(random_invertible(&f, 1, &mut rng).entry(0, 0).values().to_vec());
        }
        assert_eq!(seen.len(), 2);
    }
}
