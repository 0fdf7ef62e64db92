use std::collections::HashMap;

use crate::logic::Signature;
use crate::structures::{for_each_tuple, FiniteStructure};

use super::CatalogError;

/// Consecutive segments of `0..size`. The last element of each segment is
/// its `I`-image and lies in `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segments {
    lengths: Vec<usize>,
    ends: Vec<usize>,
    owner: Vec<usize>,
}

impl Segments {
    pub fn new(lengths: &[usize]) -> Result<Self, CatalogError> {
        if let Some(pos) = lengths.iter().position(|&l| l == 0) {
            return Err(CatalogError::Parameter { what: "segment length", n: pos });
        }
        let mut ends = Vec::new();
        let mut owner = Vec::new();
        for (s, &len) in lengths.iter().enumerate() {
            owner.extend(std::iter::repeat(s).take(len));
            ends.push(owner.len() - 1);
        }
        Ok(Segments { lengths: lengths.to_vec(), ends, owner })
    }

    pub fn size(&self) -> usize {
        self.owner.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Last elements of the segments, in order: the extension of `P`.
    pub fn ends(&self) -> &[usize] {
        &self.ends
    }

    pub fn segment_of(&self, e: usize) -> usize {
        self.owner[e]
    }

    pub fn last(&self, e: usize) -> usize {
        self.ends[self.owner[e]]
    }

    /// Elements of the segment ending at `end`, except `end` itself.
    pub fn interior(&self, end: usize) -> std::ops::Range<usize> {
        let s = self.owner[end];
        end + 1 - self.lengths[s]..end
    }
}

/// `{<, I, P, f}` with `f` of arity `n + 3`, ordered as in `psi12(n)`.
pub fn segment_signature(n: usize) -> Signature {
    let mut sig = Signature::new();
    sig.add_function("I", 1).expect("fresh name");
    sig.add_function("f", n + 3).expect("fresh name");
    sig.add_relation("P", 1).expect("fresh name");
    sig
}

/// Builds the segment model for `lengths`. `f_spec(nu, ys)` is consulted for
/// each `nu` in `P` and each increasing `(n+2)`-tuple `ys` of `P`-elements,
/// and must return a non-last element of the segment of `nu`. Every other
/// argument tuple is first mapped through `I`; tuples whose images are not
/// increasing go to `I(nu)`.
pub fn build_segment_model(
    lengths: &[usize],
    n: usize,
    mut f_spec: impl FnMut(usize, &[usize]) -> usize,
) -> Result<FiniteStructure, CatalogError> {
    let seg = Segments::new(lengths)?;
    let size = seg.size();
    let sig = segment_signature(n);
    let (i_fn, f_fn, p_rel) = (0, 1, 0);
    let mut m = FiniteStructure::new(sig, size)?;
    for e in 0..size {
        m.set_function(i_fn, &[e], seg.last(e));
    }
    for &end in seg.ends() {
        m.set_relation(p_rel, &[end], true);
    }
    let mut chosen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut failure = None;
    for_each_tuple(size, n + 3, |args| {
        if failure.is_some() {
            return;
        }
        let images: Vec<usize> = args.iter().map(|&a| seg.last(a)).collect();
        let (nu, ys) = (images[0], &images[1..]);
        let value = if ys.windows(2).all(|w| w[0] < w[1]) {
            match chosen.get(&images) {
                Some(&v) => v,
                None => {
                    let v = f_spec(nu, ys);
                    let reason = if v >= size {
                        Some("outside the universe")
                    } else if seg.last(v) != nu {
                        Some("outside the segment of nu")
                    } else if v == nu {
                        Some("a P-element")
                    } else {
                        None
                    };
                    if let Some(reason) = reason {
                        failure = Some(CatalogError::SegmentSpec { nu, ys: ys.to_vec(), value: v, reason: reason.into() });
                        return;
                    }
                    chosen.insert(images.clone(), v);
                    v
                }
            }
        } else {
            nu
        };
        m.set_function(f_fn, args, value);
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(m),
    }
}
