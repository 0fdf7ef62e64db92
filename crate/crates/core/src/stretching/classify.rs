//! Indiscernibility and the operational flavor flags.

use itertools::Itertools;
use serde::Serialize;

use crate::structures::{closure, ElementSet, FiniteStructure};

use super::terms::{term_table, TermTable};
use super::StretchError;

/// Placeholder for a flavor with no decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Undetermined {
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub order_indiscernible: bool,
    pub monotonic: bool,
    pub special: bool,
    pub remarkable: bool,
    pub semi_monotonic: Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndiscernibleWitness {
    pub generators: Vec<usize>,
    pub flags: Flags,
}

/// Increasing position tuples of length `len`, with the generator tuples
/// they pick out.
fn subtuples(gens: &[usize], len: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let positions: Vec<Vec<usize>> = (0..gens.len()).combinations(len).collect();
    let tuples = positions.iter().map(|p| p.iter().map(|&i| gens[i]).collect()).collect();
    (positions, tuples)
}

struct Level {
    positions: Vec<Vec<usize>>,
    table: TermTable,
}

fn levels(m: &FiniteStructure, gens: &[usize], depth: usize) -> Result<Vec<Level>, StretchError> {
    (1..=gens.len())
        .map(|len| {
            let (positions, tuples) = subtuples(gens, len);
            Ok(Level { positions, table: term_table(m, len, depth, &tuples)? })
        })
        .collect()
}

fn constant_across<T: PartialEq>(mut values: impl Iterator<Item = T>) -> bool {
    values.all_equal()
}

fn level_indiscernible(m: &FiniteStructure, level: &Level) -> bool {
    let vals = &level.table.values;
    let count = level.positions.len();
    if count < 2 {
        return true;
    }
    let orders_agree = (0..vals.len()).tuple_combinations().all(|(a, b)| {
        constant_across((0..count).map(|j| vals[a][j].cmp(&vals[b][j])))
    });
    orders_agree
        && m.signature().relations().iter().enumerate().all(|(r, rel)| {
            (0..rel.arity).map(|_| 0..vals.len()).multi_cartesian_product().all(|ts| {
                constant_across((0..count).map(|j| {
                    let args: Vec<usize> = ts.iter().map(|&t| vals[t][j]).collect();
                    m.relation_holds(r, &args)
                }))
            })
        })
}

fn monotonic(level: &Level) -> bool {
    let pos = &level.positions;
    (0..pos.len()).cartesian_product(0..pos.len()).all(|(a, b)| {
        let below = pos[a].iter().zip(&pos[b]).all(|(x, y)| x <= y);
        !below || level.table.values.iter().all(|v| v[a] <= v[b])
    })
}

fn special(level: &Level, gens: &[usize]) -> bool {
    level.positions.iter().enumerate().all(|(j, p)| {
        let top = *p.last().expect("levels are nonempty");
        top + 1 == gens.len() || level.table.values.iter().all(|v| v[j] < gens[top + 1])
    })
}

fn remarkable(level: &Level, gens: &[usize]) -> bool {
    let len = level.positions[0].len();
    (0..len).all(|split| {
        let groups = (0..level.positions.len()).into_group_map_by(|&j| level.positions[j][..split].to_vec());
        groups.values().all(|group| {
            level.table.values.iter().all(|v| {
                let below_tail = group.iter().any(|&j| v[j] < gens[level.positions[j][split]]);
                !below_tail || group.iter().map(|&j| v[j]).all_equal()
            })
        })
    })
}

/// Every atomic formula in terms with at most `depth` applications has the
/// same truth value on all increasing subtuples of `gens` of each length.
pub fn order_indiscernible(m: &FiniteStructure, gens: &[usize], depth: usize) -> Result<bool, StretchError> {
    Ok(levels(m, gens, depth)?.iter().all(|l| level_indiscernible(m, l)))
}

/// Flags for terms with at most `n_phi + 1` applications.
pub fn classify(m: &FiniteStructure, gens: &[usize], n_phi: usize) -> Result<Flags, StretchError> {
    check_generators(m, gens)?;
    let ls = levels(m, gens, n_phi + 1)?;
    Ok(Flags {
        order_indiscernible: ls.iter().all(|l| level_indiscernible(m, l)),
        monotonic: ls.iter().all(monotonic),
        special: ls.iter().all(|l| special(l, gens)),
        remarkable: ls.iter().all(|l| remarkable(l, gens)),
        semi_monotonic: Undetermined::Unknown,
    })
}

pub(crate) fn check_generators(m: &FiniteStructure, gens: &[usize]) -> Result<(), StretchError> {
    if !gens.windows(2).all(|w| w[0] < w[1]) || gens.last().is_some_and(|&g| g >= m.size()) {
        return Err(StretchError::BadGenerators(format!("{gens:?} is not an increasing tuple of elements")));
    }
    Ok(())
}

pub fn generates(m: &FiniteStructure, gens: &[usize]) -> bool {
    let set = ElementSet::from_elements(m.size(), gens.iter().copied()).expect("generators are in range");
    closure(m, &set).0.len() == m.size()
}

/// Every increasing `n`-tuple that generates `m` and is order indiscernible
/// for terms with at most `n_phi + 1` applications.
pub fn find_indiscernibles(m: &FiniteStructure, n: usize, n_phi: usize) -> Result<Vec<IndiscernibleWitness>, StretchError> {
    let mut out = Vec::new();
    for gens in (0..m.size()).combinations(n) {
        if !generates(m, &gens) || !order_indiscernible(m, &gens, n_phi + 1)? {
            continue;
        }
        let flags = classify(m, &gens, n_phi)?;
        out.push(IndiscernibleWitness { generators: gens, flags });
    }
    Ok(out)
}
