use locus::catalog::{self, entries};
use locus::locality::{certify, LocalityOptions, Verdict};
use locus::spectrum::{finite_spectrum, SearchOptions};

#[test]
fn shipped_spectra_are_rederived() {
    for e in entries() {
        let Some(expected) = &e.expected_spectrum else { continue };
        let phi = e.sentence().unwrap();
        let opts = SearchOptions { allow_high_arity: e.high_arity(), ..SearchOptions::default() };
        let r = finite_spectrum(&e.id, &phi, expected.bound, &opts).unwrap();
        assert!(r.is_complete(), "{}", e.id);
        assert_eq!(r.members, expected.members, "{}", e.id);
    }
}

#[test]
fn declared_steps_hold_up_to_five() {
    let opts = LocalityOptions::default();
    for e in entries() {
        // every model up to size 5 is scanned; infeasible with a 4-ary f
        if e.high_arity() || e.id == "nonlocal_pred" {
            continue;
        }
        let phi = e.sentence().unwrap();
        let steps = e.declared_steps.unwrap();
        let r = certify(&e.id, &phi, steps, 5, &opts).unwrap();
        assert!(r.complete, "{}", e.id);
        assert_eq!(r.verdict, Verdict::Consistent, "{}: {:?}", e.id, r.depth_counterexample);
    }
}

#[test]
fn nonlocal_pred_depth_grows() {
    let phi = catalog::sentence("nonlocal_pred").unwrap();
    let opts = LocalityOptions::default();
    for bound in 2..=6 {
        let r = certify("nonlocal_pred", &phi, 1, bound, &opts).unwrap();
        assert_eq!(r.max_observed_depth, bound - 1, "bound {bound}");
    }
}
