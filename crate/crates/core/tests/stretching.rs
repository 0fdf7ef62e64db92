use itertools::Itertools;
use locus::catalog;
use locus::ordinals::Ordinal;
use locus::stretching::{verify_stretch, StretchPrefix, StretchVerdict, Stretcher};
use locus::structures::satisfies;

fn ords(s: &str) -> Vec<Ordinal> {
    s.split(',').map(|x| x.trim().parse().unwrap()).collect()
}

const SAME_SHAPE: [[&str; 3]; 3] = [
    ["0, 1", "0, w", "w*2, w^2 + 3"],
    ["5", "w", "w^3*2 + 1"],
    ["0, 1, 2", "1, w, w*2", "w, w^2, w^2 + 1"],
];

const NESTED: [(&str, &str); 3] = [("w", "0, w, w*2"), ("0, w*2", "0, w, w*2"), ("", "3")];

/// `e` commutes with functions and constants and preserves order and
/// relations.
fn is_embedding(small: &StretchPrefix, large: &StretchPrefix, e: &[usize]) -> bool {
    let (a, b) = (&small.structure, &large.structure);
    let sig = a.signature();
    let order = e.windows(2).all(|w| w[0] < w[1]);
    let funcs = sig.functions().iter().enumerate().all(|(f, sym)| {
        (0..sym.arity).map(|_| 0..a.size()).multi_cartesian_product().all(|args| {
            let mapped: Vec<usize> = args.iter().map(|&x| e[x]).collect();
            e[a.function_value(f, &args)] == b.function_value(f, &mapped)
        })
    });
    let rels = sig.relations().iter().enumerate().all(|(r, sym)| {
        (0..sym.arity).map(|_| 0..a.size()).multi_cartesian_product().all(|args| {
            let mapped: Vec<usize> = args.iter().map(|&x| e[x]).collect();
            a.relation_holds(r, &args) == b.relation_holds(r, &mapped)
        })
    });
    let consts = (0..sig.constants().len()).all(|c| e[a.constant_value(c)] == b.constant_value(c));
    order && funcs && rels && consts
}

#[test]
fn prefixes_are_coherent() {
    for id in ["order_only", "mono3"] {
        let fx = catalog::fixture(id).unwrap();
        let n_phi = fx.sentence.declared_steps().unwrap();
        let st = Stretcher::new(&fx.model, &fx.generators, n_phi).unwrap();
        for group in SAME_SHAPE {
            let ps: Vec<StretchPrefix> = group.iter().map(|s| st.prefix(&ords(s)).unwrap()).collect();
            assert!(ps.windows(2).all(|w| w[0].structure == w[1].structure), "{id} {group:?}");
        }
        for (small, large) in NESTED {
            let small = st.prefix(&if small.is_empty() { vec![] } else { ords(small) }).unwrap();
            let large = st.prefix(&ords(large)).unwrap();
            let e = st.embed(&small, &large).unwrap();
            assert!(is_embedding(&small, &large, &e), "{id}");
        }
    }
}

#[test]
fn full_budget_verification_and_mutation() {
    for id in ["order_only", "mono3"] {
        let fx = catalog::fixture(id).unwrap();
        let r = verify_stretch(&fx.sentence, &fx.model, &fx.generators, fx.generators.len()).unwrap();
        assert_eq!(r.verdict, StretchVerdict::VerifiedToBudget, "{id}");
    }
    let fx = catalog::fixture("mono3").unwrap();
    let mut bad = fx.model.clone();
    bad.set_function(0, &[3], 0);
    let r = verify_stretch(&fx.sentence, &bad, &fx.generators, 3).unwrap();
    assert_eq!(r.verdict, StretchVerdict::Refuted);
}

#[test]
fn monotonic_generators_give_monotone_prefixes() {
    let fx = catalog::fixture("mono3").unwrap();
    let st = Stretcher::new(&fx.model, &fx.generators, 1).unwrap();
    for s in ["0, 1, 2", "0, w, w + 1, w*2", "1, 2, w^2, w^2 + 5, w^3"] {
        let p = st.prefix(&ords(s)).unwrap();
        assert!(st.monotone_in(&p).unwrap(), "{s}");
        assert!(satisfies(&p.structure, &fx.sentence).unwrap(), "{s}");
    }
}
