//! Brute-force isomorphism test for small finite groups.
//!
//! A greedy generating set of the first group is mapped, one generator at a
//! time, onto elements of the same order in the second; after every choice
//! the partial map is propagated over the generated subgroup and rejected on
//! the first inconsistency. Search order is fixed, so the witness is
//! deterministic.

use serde::Serialize;
use thiserror::Error;

use crate::group::{validate_table, FiniteGroupTable, GroupDefect, GroupTableData};

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("invalid table: {0}")]
    InvalidTable(#[from] GroupDefect),
    #[error("order {0} exceeds the limit of {MAX_ORDER}")]
    SizeLimit(usize),
}

/// `map[a]` is the image of element `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

impl IsoWitness {
    /// Bijective and multiplicative on every pair.
    pub fn verify(&self, g1: &FiniteGroupTable, g2: &FiniteGroupTable) -> bool {
        let n = g1.order();
        if n != g2.order() || self.map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        (0..n).all(|a| (0..n).all(|b| self.map[g1.mul(a, b)] == g2.mul(self.map[a], self.map[b])))
    }
}

/// Greedy generating set in element order.
pub fn generators(g: &FiniteGroupTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; g.order()];
    inside[g.identity()] = true;
    for x in 0..g.order() {
        if !inside[x] {
            gens.push(x);
            for y in g.generated(&gens) {
                inside[y] = true;
            }
        }
    }
    gens
}

struct Search<'a> {
    g1: &'a FiniteGroupTable,
    g2: &'a FiniteGroupTable,
    gens: Vec<usize>,
    orders2: Vec<usize>,
}

impl Search<'_> {
    /// Extends the homomorphism determined by `images` over the subgroup
    /// generated by the first `images.len()` generators.
    fn propagate(&self, images: &[usize]) -> Option<Vec<Option<usize>>> {
        let n = self.g1.order();
        let mut map = vec![None; n];
        let mut used = vec![false; n];
        map[self.g1.identity()] = Some(self.g2.identity());
        used[self.g2.identity()] = true;
        let mut queue = vec![self.g1.identity()];
        let mut head = 0;
        while head < queue.len() {
            let y = queue[head];
            head += 1;
            let my = map[y].expect("queued elements are mapped");
            for (&g, &img) in self.gens.iter().zip(images) {
                let z = self.g1.mul(g, y);
                let w = self.g2.mul(img, my);
                match map[z] {
                    Some(existing) if existing != w => return None,
                    Some(_) => {}
                    None => {
                        if std::mem::replace(&mut used[w], true) {
                            return None;
                        }
                        map[z] = Some(w);
                        queue.push(z);
                    }
                }
            }
        }
        Some(map)
    }

    fn extend(&self, images: &mut Vec<usize>, prune: bool) -> Option<Vec<usize>> {
        if images.len() == self.gens.len() {
            let map = self.propagate(images)?;
            return map.into_iter().collect();
        }
        let target = self.g1.element_order(self.gens[images.len()]);
        for cand in 0..self.g2.order() {
            if prune && self.orders2[cand] != target {
                continue;
            }
            images.push(cand);
            if self.propagate(images).is_some() {
                if let Some(found) = self.extend(images, prune) {
                    return Some(found);
                }
            }
            images.pop();
        }
        None
    }
}

fn search(
    g1: &FiniteGroupTable,
    g2: &FiniteGroupTable,
    prune: bool,
) -> Result<Option<IsoWitness>, IsoError> {
    for g in [g1, g2] {
        if g.order() > MAX_ORDER {
            return Err(IsoError::SizeLimit(g.order()));
        }
    }
    if g1.order() != g2.order() {
        return Ok(None);
    }
    if prune && g1.order_profile() != g2.order_profile() {
        return Ok(None);
    }
    let s = Search {
        g1,
        g2,
        gens: generators(g1),
        orders2: (0..g2.order()).map(|a| g2.element_order(a)).collect(),
    };
    let found = s
        .extend(&mut Vec::new(), prune)
        .map(|map| IsoWitness { map });
    debug_assert!(found.as_ref().is_none_or(|w| w.verify(g1, g2)));
    Ok(found)
}

pub fn iso_check(
    g1: &FiniteGroupTable,
    g2: &FiniteGroupTable,
) -> Result<Option<IsoWitness>, IsoError> {
    search(g1, g2, true)
}

/// Same search without order-based pruning.
pub fn iso_check_unpruned(
    g1: &FiniteGroupTable,
    g2: &FiniteGroupTable,
) -> Result<Option<IsoWitness>, IsoError> {
    search(g1, g2, false)
}

/// Validates raw tables first.
pub fn iso_check_data(
    a: &GroupTableData,
    b: &GroupTableData,
) -> Result<Option<IsoWitness>, IsoError> {
    validate_table(a)?;
    validate_table(b)?;
    let g1 = FiniteGroupTable::new(a.clone())?;
    let g2 = FiniteGroupTable::new(b.clone())?;
    iso_check(&g1, &g2)
}

pub fn is_isomorphic(g1: &FiniteGroupTable, g2: &FiniteGroupTable) -> bool {
    matches!(iso_check(g1, g2), Ok(Some(_)))
}
