//! Finite bijections between sorts and parametrized families of them.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::finstance::AtomId;
use crate::role::Role;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortMismatch {
    #[error("cannot compose: inner map lands in {inner} but outer map starts at {outer}")]
    Compose { inner: Role, outer: Role },
    #[error("sort {role} has inconsistent sizes {left} and {right}")]
    Size {
        role: Role,
        left: usize,
        right: usize,
    },
}

/// A total bijection between two sorts, stored by element index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bijection {
    domain: Role,
    codomain: Role,
    map: Vec<usize>,
}

impl Bijection {
    /// `map[i]` is the image of the `i`-th element. Returns `None` unless
    /// `map` is a permutation of `0..map.len()`.
    pub fn new(domain: Role, codomain: Role, map: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(Self {
            domain,
            codomain,
            map,
        })
    }

    pub fn identity(role: Role, n: usize) -> Self {
        Self {
            domain: role,
            codomain: role,
            map: (0..n).collect(),
        }
    }

    pub fn domain(&self) -> Role {
        self.domain
    }

    pub fn codomain(&self) -> Role {
        self.codomain
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.map
    }

    pub fn into_mapping(self) -> Vec<usize> {
        self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Bijection {
            domain: self.codomain,
            codomain: self.domain,
            map: inv,
        }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Bijection) -> Result<Bijection, SortMismatch> {
        if inner.codomain != self.domain {
            return Err(SortMismatch::Compose {
                inner: inner.codomain,
                outer: self.domain,
            });
        }
        if inner.map.len() != self.map.len() {
            return Err(SortMismatch::Size {
                role: self.domain,
                left: inner.map.len(),
                right: self.map.len(),
            });
        }
        Ok(Bijection {
            domain: inner.domain,
            codomain: self.codomain,
            map: inner.map.iter().map(|&j| self.map[j]).collect(),
        })
    }
}

/// Functions `P(u, -)` indexed by the parameter `u`.
///
/// Members sharing a mapping are kept with their own parameters; germ
/// deduplication happens downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionFamily {
    pub name: &'static str,
    pub parameter: Role,
    pub domain: Role,
    pub codomain: Role,
    pub params: Vec<AtomId>,
    pub members: Vec<Bijection>,
}

/// Parameters sharing one extensional mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GermClass<P> {
    pub mapping: Vec<usize>,
    pub params: Vec<P>,
}

impl<P: Copy> GermClass<P> {
    /// Display name: the least parameter.
    pub fn representative(&self) -> P {
        self.params[0]
    }
}

/// Groups `(param, mapping)` pairs by mapping, in first-seen order.
pub fn germ_classes<'a, P, I>(members: I) -> Vec<GermClass<P>>
where
    P: Copy + 'a,
    I: IntoIterator<Item = (P, &'a [usize])>,
{
    let mut classes: Vec<GermClass<P>> = Vec::new();
    let mut index: HashMap<&'a [usize], usize> = HashMap::new();
    for (p, mapping) in members {
        match index.get(mapping) {
            Some(&c) => classes[c].params.push(p),
            None => {
                index.insert(mapping, classes.len());
                classes.push(GermClass {
                    mapping: mapping.to_vec(),
                    params: vec![p],
                });
            }
        }
    }
    classes
}

impl FunctionFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &Bijection {
        &self.members[i]
    }

    pub fn classes(&self) -> Vec<GermClass<AtomId>> {
        germ_classes(
            self.params
                .iter()
                .copied()
                .zip(self.members.iter().map(Bijection::mapping)),
        )
    }

    /// Mapping -> index of the first member realizing it.
    pub fn lookup(&self) -> HashMap<&[usize], usize> {
        let mut out = HashMap::new();
        for (i, m) in self.members.iter().enumerate() {
            out.entry(m.mapping()).or_insert(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let f = Bijection::new(Role::X2, Role::X3, vec![1, 2, 0]).unwrap();
        let g = Bijection::new(Role::X3, Role::X1, vec![0, 2, 1]).unwrap();
        let gf = g.after(&f).unwrap();
        assert_eq!(gf.mapping(), &[2, 1, 0]);
        assert_eq!((gf.domain(), gf.codomain()), (Role::X2, Role::X1));
        assert!(f.inverse().after(&f).unwrap().is_identity());
        assert!(matches!(f.after(&f), Err(SortMismatch::Compose { .. })));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Bijection::new(Role::X1, Role::X1, vec![0, 0]).is_none());
        assert!(Bijection::new(Role::X1, Role::X1, vec![0, 2]).is_none());
    }

    #[test]
    fn classes_keep_first_seen_order() {
        let a = [1usize, 0];
        let b = [0usize, 1];
        let classes = germ_classes([(5u32, &a[..]), (2, &b[..]), (7, &a[..])]);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].params, vec![5, 7]);
        assert_eq!(classes[1].representative(), 2);
    }
}
