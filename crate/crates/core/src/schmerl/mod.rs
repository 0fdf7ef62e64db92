//! Finite partition combinatorics for the property `P(n, alpha)`: every
//! family of partitions `C_nu` of the `t`-subsets of `k`, each with fewer
//! than `k` classes, has an increasing `X` of length `alpha` whose tail above
//! each `nu` in `X` is `C_nu`-homogeneous.

mod segments;

pub use segments::{extract_partitions, psi3_oracle, Psi3Mode};

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::catalog::CatalogError;
use crate::structures::StructureError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchmerlError {
    #[error("k = {k}, t = {t}: {reason}")]
    InfeasibleParameters { k: usize, t: usize, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of an increasing tuple.
fn rank(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(i, &s)| binomial(s, i + 1)).sum()
}

/// A partition of the `t`-subsets of `{0..k-1}`, as one label per subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    k: usize,
    t: usize,
    labels: Vec<usize>,
}

impl Partition {
    /// Labels indexed by colex rank.
    pub fn new(k: usize, t: usize, labels: Vec<usize>) -> Result<Self, SchmerlError> {
        let expected = binomial(k, t);
        if labels.len() != expected {
            return Err(SchmerlError::InvalidPartition(format!("{} labels for {expected} subsets", labels.len())));
        }
        Ok(Partition { k, t, labels })
    }

    pub fn from_fn(k: usize, t: usize, mut label: impl FnMut(&[usize]) -> usize) -> Self {
        let mut labels = vec![0; binomial(k, t)];
        for s in (0..k).combinations(t) {
            labels[rank(&s)] = label(&s);
        }
        Partition { k, t, labels }
    }

    pub fn single_class(k: usize, t: usize) -> Self {
        Partition { k, t, labels: vec![0; binomial(k, t)] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Label of an increasing `t`-tuple.
    pub fn class_of(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.t);
        self.labels[rank(subset)]
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().unique().count()
    }

    /// Classes as sorted lists of sorted tuples, ordered by their least tuple.
    pub fn classes(&self) -> Vec<Vec<Vec<usize>>> {
        let mut by_label: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for s in (0..self.k).combinations(self.t) {
            by_label.entry(self.class_of(&s)).or_default().push(s);
        }
        let mut out: Vec<Vec<Vec<usize>>> = by_label.into_values().collect();
        out.sort();
        out
    }

    pub fn from_classes(k: usize, t: usize, classes: &[Vec<Vec<usize>>]) -> Result<Self, SchmerlError> {
        let mut labels = vec![None; binomial(k, t)];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(SchmerlError::InvalidPartition("empty class".into()));
            }
            for s in class {
                if s.len() != t || !s.windows(2).all(|w| w[0] < w[1]) || s.last().is_some_and(|&x| x >= k) {
                    return Err(SchmerlError::InvalidPartition(format!("{s:?} is not an increasing {t}-tuple below {k}")));
                }
                let slot = &mut labels[rank(s)];
                if slot.is_some() {
                    return Err(SchmerlError::InvalidPartition(format!("{s:?} appears twice")));
                }
                *slot = Some(c);
            }
        }
        let labels = labels
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| SchmerlError::InvalidPartition("classes do not cover every subset".into()))?;
        Ok(Partition { k, t, labels })
    }

    /// All `t`-subsets of `y` lie in one class. Vacuous when `|y| <= t`.
    pub fn is_homogeneous(&self, y: &[usize]) -> bool {
        let mut y = y.to_vec();
        y.sort_unstable();
        y.dedup();
        y.iter().copied().combinations(self.t).map(|s| self.class_of(&s)).all_equal()
    }
}

pub fn is_homogeneous(y: &[usize], c: &Partition) -> bool {
    c.is_homogeneous(y)
}

/// One partition `C_nu` for each `nu < k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFamily {
    k: usize,
    t: usize,
    partitions: Vec<Partition>,
}

impl PartitionFamily {
    pub fn new(partitions: Vec<Partition>) -> Result<Self, SchmerlError> {
        let k = partitions.len();
        let t = partitions.first().map_or(1, |p| p.t);
        if partitions.iter().any(|p| p.k != k || p.t != t) {
            return Err(SchmerlError::InvalidPartition("every partition must share k and t".into()));
        }
        Ok(PartitionFamily { k, t, partitions })
    }

    pub fn single_class(k: usize, t: usize) -> Self {
        PartitionFamily { k, t, partitions: (0..k).map(|_| Partition::single_class(k, t)).collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn partition(&self, nu: usize) -> &Partition {
        &self.partitions[nu]
    }

    pub fn class_count(&self, nu: usize) -> usize {
        self.partitions[nu].class_count()
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyDocument {
    k: usize,
    t: usize,
    partitions: Vec<Vec<Vec<Vec<usize>>>>,
}

impl Serialize for PartitionFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FamilyDocument { k: self.k, t: self.t, partitions: self.partitions.iter().map(Partition::classes).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartitionFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = FamilyDocument::deserialize(d)?;
        if doc.partitions.len() != doc.k {
            return Err(serde::de::Error::custom(format!("expected {} partitions", doc.k)));
        }
        let partitions = doc
            .partitions
            .iter()
            .map(|classes| Partition::from_classes(doc.k, doc.t, classes))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(PartitionFamily { k: doc.k, t: doc.t, partitions })
    }
}

/// For every `nu` in `x`, the elements of `x` above `nu` form a
/// `C_nu`-homogeneous set. `x` must be strictly increasing and below `k`.
pub fn check_witness(x: &[usize], family: &PartitionFamily) -> bool {
    if !x.windows(2).all(|w| w[0] < w[1]) || x.last().is_some_and(|&e| e >= family.k) {
        return false;
    }
    x.iter().enumerate().all(|(i, &nu)| family.partitions[nu].is_homogeneous(&x[i + 1..]))
}

/// First increasing `alpha`-tuple that witnesses the property for `family`.
pub fn find_witness(family: &PartitionFamily, alpha: usize) -> Option<Vec<usize>> {
    (0..family.k).combinations(alpha).find(|x| check_witness(x, family))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PropertyVerdict {
    /// Every admissible family has a witness (exhaustive).
    Holds,
    Fails { counterexample: PartitionFamily },
    /// Random families all had witnesses; nothing is proved.
    NoCounterexampleFound { seed: u64, trials: usize },
}

impl PropertyVerdict {
    /// `Some` only for settled verdicts.
    pub fn holds(&self) -> Option<bool> {
        match self {
            PropertyVerdict::Holds => Some(true),
            PropertyVerdict::Fails { .. } => Some(false),
            PropertyVerdict::NoCounterexampleFound { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FalsifyOptions {
    pub seed: u64,
    pub trials: usize,
}

impl Default for FalsifyOptions {
    fn default() -> Self {
        FalsifyOptions { seed: 0, trials: 2000 }
    }
}

pub const EXHAUSTIVE_MAX_K: usize = 4;
pub const EXHAUSTIVE_MAX_T: usize = 2;
pub const SAMPLED_MAX_K: usize = 16;
pub const SAMPLED_MAX_T: usize = 4;

/// Restricted growth strings of length `len` using at most `limit` classes.
fn growth_strings(len: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, limit: usize, top: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in 0..=top.min(limit.saturating_sub(1)) {
            cur.push(c);
            go(len, limit, if c == top { top + 1 } else { top }, cur, out);
            cur.pop();
        }
    }
    if limit > 0 {
        go(len, limit, 0, &mut cur, &mut out);
    }
    out
}

/// Partitions of `{0..k-1}^t` with `class_count < k` that only distinguish
/// subsets lying above `nu`; the rest join class 0. Nothing else affects
/// whether a witness exists.
fn tail_partitions(k: usize, t: usize, nu: usize) -> Vec<Partition> {
    let tail: Vec<Vec<usize>> = (nu + 1..k).combinations(t).collect();
    growth_strings(tail.len(), k - 1)
        .into_iter()
        .map(|labels| {
            let mut p = Partition::single_class(k, t);
            for (s, l) in tail.iter().zip(labels) {
                p.labels[rank(s)] = l;
            }
            p
        })
        .collect()
}

fn random_family(k: usize, t: usize, rng: &mut ChaCha8Rng) -> PartitionFamily {
    let partitions = (0..k)
        .map(|_| {
            let classes = rng.gen_range(1..k);
            Partition::from_fn(k, t, |_| rng.gen_range(0..classes))
        })
        .collect();
    PartitionFamily { k, t, partitions }
}

/// Decide `P(t, alpha)` at base `k`. Exhaustive for `k <= 4, t <= 2`;
/// randomized falsification up to `k <= 16, t <= 4`.
pub fn holds_p(k: usize, t: usize, alpha: usize, opts: &FalsifyOptions) -> Result<PropertyVerdict, SchmerlError> {
    let infeasible = |reason: &str| Err(SchmerlError::InfeasibleParameters { k, t, reason: reason.into() });
    if k < 2 || t == 0 {
        return infeasible("need k >= 2 and t >= 1");
    }
    if k > SAMPLED_MAX_K || t > SAMPLED_MAX_T {
        return infeasible("outside the searchable range");
    }
    if alpha > k {
        return Ok(PropertyVerdict::Fails { counterexample: PartitionFamily::single_class(k, t) });
    }
    if k <= EXHAUSTIVE_MAX_K && t <= EXHAUSTIVE_MAX_T {
        let choices: Vec<Vec<Partition>> = (0..k).map(|nu| tail_partitions(k, t, nu)).collect();
        let failure = choices.iter().multi_cartesian_product().find_map(|ps| {
            let family = PartitionFamily { k, t, partitions: ps.into_iter().cloned().collect() };
            find_witness(&family, alpha).is_none().then_some(family)
        });
        return Ok(match failure {
            Some(counterexample) => PropertyVerdict::Fails { counterexample },
            None => PropertyVerdict::Holds,
        });
    }
    let failure = (0..opts.trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(trial as u64));
        let family = random_family(k, t, &mut rng);
        find_witness(&family, alpha).is_none().then_some(family)
    });
    Ok(match failure {
        Some(counterexample) => PropertyVerdict::Fails { counterexample },
        None => PropertyVerdict::NoCounterexampleFound { seed: opts.seed, trials: opts.trials },
    })
}

/// Every coloring of the pairs of `{0..k-1}` with `colors` colors has a
/// monochromatic set of size `target`. Exponential in `k^2`.
pub fn ramsey_sanity(k: usize, colors: usize, target: usize) -> bool {
    let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    let mut index = vec![vec![0; k]; k];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        index[a][b] = i;
    }
    let mut coloring = vec![0; pairs.len()];
    loop {
        let found = (0..k).combinations(target).any(|s| {
            s.iter().tuple_combinations().map(|(&a, &b)| coloring[index[a][b]]).all_equal()
        });
        if !found {
            return false;
        }
        let mut i = 0;
        loop {
            if i == coloring.len() {
                return true;
            }
            coloring[i] += 1;
            if coloring[i] < colors {
                break;
            }
            coloring[i] = 0;
            i += 1;
        }
    }
}
