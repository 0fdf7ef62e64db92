mod common;

use std::time::Instant;

use common::{naive_closure, naive_has_model, naive_satisfies};
use locus::catalog::{self, entries};
use locus::spectrum::{find_model, ModelSearch, SearchOptions};
use locus::structures::{closure, satisfies, ElementSet, FiniteStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pruned_search_matches_naive_enumeration() {
    let start = Instant::now();
    for e in entries() {
        if e.high_arity() {
            continue;
        }
        let phi = e.sentence().unwrap();
        for size in 0..=4 {
            let pruned = match find_model(&phi, size, &SearchOptions::default()).unwrap() {
                ModelSearch::Found(m) => {
                    assert!(naive_satisfies(&m.document(), &phi), "{} witness at {size}", e.id);
                    true
                }
                ModelSearch::Exhausted => false,
                ModelSearch::Unknown => panic!("{} undecided at {size}", e.id),
            };
            assert_eq!(pruned, naive_has_model(&phi, size), "{} at size {size}", e.id);
        }
    }
    eprintln!("naive comparison took {:?}", start.elapsed());
}

/// A 4-ary table has `m^(m^4)` interpretations, so the enumerator cannot run.
/// Every size is a member here, and a witness accepted by the tree-walking
/// evaluator is exactly what the enumerator would have found.
#[test]
fn high_arity_members_have_checked_witnesses() {
    let opts = SearchOptions { allow_high_arity: true, ..SearchOptions::default() };
    for e in entries().into_iter().filter(|e| e.high_arity()) {
        let phi = e.sentence().unwrap();
        for size in 0..=4 {
            let ModelSearch::Found(m) = find_model(&phi, size, &opts).unwrap() else {
                panic!("{} has no model at {size}", e.id);
            };
            assert!(naive_satisfies(&m.document(), &phi), "{} at {size}", e.id);
        }
    }
}

fn random_structure(phi: &locus::logic::UniversalSentence, size: usize, rng: &mut ChaCha8Rng) -> FiniteStructure {
    let mut m = FiniteStructure::new(phi.signature().clone(), size).unwrap();
    let sig = phi.signature().clone();
    for (f, sym) in sig.functions().iter().enumerate() {
        for_each(size, sym.arity, |t| m.set_function(f, t, rng.gen_range(0..size)));
    }
    for (r, sym) in sig.relations().iter().enumerate() {
        for_each(size, sym.arity, |t| m.set_relation(r, t, rng.gen_bool(0.5)));
    }
    for c in 0..sig.constants().len() {
        m.set_constant(c, rng.gen_range(0..size));
    }
    m
}

fn for_each(size: usize, arity: usize, mut visit: impl FnMut(&[usize])) {
    let total = size.pow(arity as u32);
    let mut t = vec![0; arity];
    for mut code in 0..total {
        for slot in t.iter_mut().rev() {
            *slot = code % size;
            code /= size;
        }
        visit(&t);
    }
}

#[test]
fn compiled_evaluation_matches_syntax_tree_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in entries() {
        let phi = e.sentence().unwrap();
        for size in 1..=4 {
            for _ in 0..40 {
                let m = random_structure(&phi, size, &mut rng);
                assert_eq!(satisfies(&m, &phi).unwrap(), naive_satisfies(&m.document(), &phi), "{}", e.id);
            }
        }
    }
}

#[test]
fn closure_matches_direct_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in ["example", "psi1", "nonlocal_pred", "mono3"] {
        let phi = catalog::sentence(id).unwrap();
        for size in 1..=6 {
            let m = random_structure(&phi, size, &mut rng);
            for bits in 0..1u64 << size {
                let x = ElementSet::from_bits(size, bits);
                let (cl, depth) = closure(&m, &x);
                let (ncl, ndepth) = naive_closure(&m.document(), phi.signature(), &x.to_vec());
                assert_eq!((cl.to_vec(), depth), (ncl, ndepth), "{id} {bits:b}");
            }
        }
    }
}
