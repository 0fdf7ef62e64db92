//! Reading partitions off models of `psi1 & psi2(n)`.

use itertools::Itertools;

use crate::catalog::psi12;
use crate::structures::{satisfies, FiniteStructure};

use super::{Partition, PartitionFamily, SchmerlError};

struct SegmentModel<'a> {
    m: &'a FiniteStructure,
    f: usize,
    /// `P^M` in increasing order.
    p: Vec<usize>,
}

impl<'a> SegmentModel<'a> {
    fn new(m: &'a FiniteStructure, n: usize) -> Result<Self, SchmerlError> {
        let psi = psi12(n)?;
        let sig = m.signature();
        if !psi.signature().is_subsignature_of(sig) {
            return Err(SchmerlError::Precondition(format!("signature lacks the symbols of psi1 & psi2({n})")));
        }
        if !satisfies(m, &psi)? {
            return Err(SchmerlError::Precondition(format!("model fails psi1 & psi2({n})")));
        }
        let f = sig.function_index("f").expect("checked above");
        let p = m.unary_extension(sig.relation_index("P").expect("checked above"));
        Ok(SegmentModel { m, f, p })
    }

    fn f(&self, nu: usize, ys: &[usize]) -> usize {
        let mut args = Vec::with_capacity(ys.len() + 1);
        args.push(nu);
        args.extend_from_slice(ys);
        self.m.function_value(self.f, &args)
    }
}

/// The family coded by `f` on `P^M`, re-indexed as `0..|P^M|`. The class
/// label of `ys` in `C_nu` is the element `f(nu, ys)` of `M`.
pub fn extract_partitions(m: &FiniteStructure, n: usize) -> Result<PartitionFamily, SchmerlError> {
    let sm = SegmentModel::new(m, n)?;
    let k = sm.p.len();
    let partitions = sm
        .p
        .iter()
        .map(|&nu| {
            Partition::from_fn(k, n + 2, |ys| {
                let ys: Vec<usize> = ys.iter().map(|&i| sm.p[i]).collect();
                sm.f(nu, &ys)
            })
        })
        .collect();
    PartitionFamily::new(partitions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Psi3Mode {
    /// `nu` ranges over the three least elements of each tuple, as in `psi3`.
    #[default]
    AsWritten,
    /// `nu` ranges over the whole tuple. Agrees with `AsWritten`: only the two
    /// least elements have tails holding two distinct `(n+2)`-subsets.
    Relaxed,
}

/// Direct evaluation of `psi3(n)`: every increasing `(n+5)`-tuple from `P^M`
/// has some `nu` whose later elements are split by `f(nu, -)`.
pub fn psi3_oracle(m: &FiniteStructure, n: usize, mode: Psi3Mode) -> Result<bool, SchmerlError> {
    let sm = SegmentModel::new(m, n)?;
    let candidates = match mode {
        Psi3Mode::AsWritten => 3,
        Psi3Mode::Relaxed => n + 5,
    };
    Ok(sm.p.iter().copied().combinations(n + 5).all(|x| {
        (0..candidates).any(|i| {
            let nu = x[i];
            x[i + 1..].iter().copied().combinations(n + 2).map(|ys| sm.f(nu, &ys)).unique().nth(1).is_some()
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_segment_model;

    #[test]
    fn constant_f_gives_single_classes() {
        let m = build_segment_model(&[2; 6], 1, |nu, _| nu - 1).unwrap();
        let fam = extract_partitions(&m, 1).unwrap();
        assert_eq!(fam.k(), 6);
        assert_eq!(fam.t(), 3);
        assert!((0..6).all(|nu| fam.class_count(nu) == 1));
        assert!(!psi3_oracle(&m, 1, Psi3Mode::AsWritten).unwrap());
    }

    #[test]
    fn small_p_is_vacuous() {
        let m = build_segment_model(&[2; 5], 1, |nu, _| nu - 1).unwrap();
        assert!(psi3_oracle(&m, 1, Psi3Mode::AsWritten).unwrap());
    }

    #[test]
    fn splitting_first_segment() {
        // P = {2,5,8,11,14,17}; only nu = 2 splits, by the least y
        let m = build_segment_model(&[3; 6], 1, |nu, ys| if nu == 2 && ys[0] == 5 { 0 } else { nu - 1 }).unwrap();
        let fam = extract_partitions(&m, 1).unwrap();
        assert_eq!(fam.class_count(0), 2);
        assert_eq!(fam.partition(0).class_of(&[1, 2, 3]), 0);
        assert_eq!(fam.partition(0).class_of(&[2, 3, 4]), 1);
        assert!(psi3_oracle(&m, 1, Psi3Mode::AsWritten).unwrap());
    }

    #[test]
    fn relaxed_mode_agrees() {
        // only x1 and x2 have tails holding two distinct (n+2)-subsets
        for lengths in [[3; 6], [2, 3, 2, 3, 2, 3], [3, 2, 2, 2, 2, 3]] {
            for split in 0..4 {
                let m = build_segment_model(&lengths, 1, |nu, ys| {
                    let p = crate::catalog::Segments::new(&lengths).unwrap();
                    if p.ends()[split] == nu && ys[0] == p.ends()[split + 1] && p.interior(nu).len() > 1 {
                        nu - 2
                    } else {
                        nu - 1
                    }
                })
                .unwrap();
                assert_eq!(
                    psi3_oracle(&m, 1, Psi3Mode::AsWritten).unwrap(),
                    psi3_oracle(&m, 1, Psi3Mode::Relaxed).unwrap()
                );
            }
        }
    }

    #[test]
    fn precondition_is_checked() {
        let mut m = build_segment_model(&[2; 4], 1, |nu, _| nu - 1).unwrap();
        m.set_function(0, &[0], 0);
        assert!(matches!(extract_partitions(&m, 1), Err(SchmerlError::Precondition(_))));
    }
}
