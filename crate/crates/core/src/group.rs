//! Finite groups as explicit multiplication tables, and their actions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finstance::Sort;

/// Raw, unvalidated table as it appears in a `group` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTableData {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDefect {
    #[error("group has no elements")]
    Empty,
    #[error("table is not {order}x{order}")]
    Shape { order: usize },
    #[error("product {a}*{b}={value} is out of range")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("identity {identity} fails at {a}")]
    Identity { identity: usize, a: usize },
    #[error("element {a} has no inverse")]
    NoInverse { a: usize },
    #[error("({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

/// Closure, identity, inverse and associativity sweep.
#[allow(clippy::needless_range_loop)]
pub fn validate_table(data: &GroupTableData) -> Result<(), GroupDefect> {
    let n = data.elements.len();
    if n == 0 {
        return Err(GroupDefect::Empty);
    }
    if data.table.len() != n || data.table.iter().any(|r| r.len() != n) || data.identity >= n {
        return Err(GroupDefect::Shape { order: n });
    }
    let t = &data.table;
    for a in 0..n {
        for b in 0..n {
            if t[a][b] >= n {
                return Err(GroupDefect::NotClosed {
                    a,
                    b,
                    value: t[a][b],
                });
            }
        }
    }
    let e = data.identity;
    for a in 0..n {
        if t[e][a] != a || t[a][e] != a {
            return Err(GroupDefect::Identity { identity: e, a });
        }
    }
    for a in 0..n {
        if !(0..n).any(|b| t[a][b] == e && t[b][a] == e) {
            return Err(GroupDefect::NoInverse { a });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = t[a][b];
            for c in 0..n {
                if t[ab][c] != t[a][t[b][c]] {
                    return Err(GroupDefect::NotAssociative { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// A validated finite group. Elements are `0..order`; `labels` are for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("composition of {left} and {right} leaves the element set")]
pub struct ClosureEscape {
    pub left: usize,
    pub right: usize,
}

impl FiniteGroupTable {
    pub fn new(data: GroupTableData) -> Result<Self, GroupDefect> {
        validate_table(&data)?;
        let n = data.elements.len();
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| data.table[a][b] == data.identity)
                    .expect("validated")
            })
            .collect();
        Ok(Self {
            labels: data.elements,
            table: data.table,
            identity: data.identity,
            inverse,
        })
    }

    /// The group of permutations `perms` under composition, where the
    /// product `i * j` applies `perms[j]` first. Fails if the set is not
    /// closed.
    pub fn from_permutations(
        perms: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<Self, ClosureEscape> {
        let index: HashMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let n = perms.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let composed: Vec<usize> = perms[j].iter().map(|&x| perms[i][x]).collect();
                table[i][j] = *index
                    .get(composed.as_slice())
                    .ok_or(ClosureEscape { left: i, right: j })?;
            }
        }
        let identity = perms
            .iter()
            .position(|p| p.iter().enumerate().all(|(i, &x)| i == x))
            .ok_or(ClosureEscape { left: 0, right: 0 })?;
        Self::new(GroupTableData {
            elements: labels,
            table,
            identity,
        })
        .map_err(|_| ClosureEscape { left: 0, right: 0 })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(a, x);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        p.sort_unstable();
        p
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&a| inside[a]).collect()
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &h in subgroup {
            inside[h] = true;
        }
        (0..self.order()).all(|g| {
            subgroup
                .iter()
                .all(|&h| inside[self.mul(self.mul(g, h), self.inv(g))])
        })
    }

    pub fn to_data(&self) -> GroupTableData {
        GroupTableData {
            elements: self.labels.clone(),
            table: self.table.clone(),
            identity: self.identity,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionDefect {
    #[error("action table has the wrong shape")]
    Shape,
    #[error("element {g} does not act as a permutation")]
    NotPermutation { g: usize },
    #[error("identity moves point {x}")]
    Identity { x: usize },
    #[error("({g}*{h})·{x} != {g}·({h}·{x})")]
    Compatibility { g: usize, h: usize, x: usize },
}

/// `action[g][x]` is the index of `g·x` in `set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FiniteGroupTable,
    pub set: Sort,
    pub action: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(
        group: FiniteGroupTable,
        set: Sort,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, ActionDefect> {
        let a = Self { group, set, action };
        a.check_axioms()?;
        Ok(a)
    }

    /// Left multiplication on the group itself.
    pub fn regular(group: FiniteGroupTable) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| (0..n).map(|x| group.mul(g, x)).collect())
            .collect();
        let set = Sort::range("G", n).expect("nonempty group");
        Self { group, set, action }
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Identity acts trivially and `(g*h)·x = g·(h·x)` for every table entry.
    pub fn check_axioms(&self) -> Result<(), ActionDefect> {
        let n = self.group.order();
        let m = self.set.len();
        if self.action.len() != n || self.action.iter().any(|r| r.len() != m) {
            return Err(ActionDefect::Shape);
        }
        for (g, row) in self.action.iter().enumerate() {
            let mut seen = vec![false; m];
            for &y in row {
                if y >= m || std::mem::replace(&mut seen[y], true) {
                    return Err(ActionDefect::NotPermutation { g });
                }
            }
        }
        let e = self.group.identity();
        if let Some(x) = (0..m).find(|&x| self.apply(e, x) != x) {
            return Err(ActionDefect::Identity { x });
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for x in 0..m {
                    if self.apply(gh, x) != self.apply(g, self.apply(h, x)) {
                        return Err(ActionDefect::Compatibility { g, h, x });
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of `(g, h, x)` entries covered by [`check_axioms`](Self::check_axioms).
    pub fn axiom_checks(&self) -> u64 {
        let n = self.group.order() as u64;
        let m = self.set.len() as u64;
        n * n * m + m
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.set.len()];
        for row in &self.action {
            seen[row[x]] = true;
        }
        (0..self.set.len()).filter(|&y| seen[y]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.set.len()
    }

    /// Elements acting trivially.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.action[g].iter().enumerate().all(|(x, &y)| x == y))
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }
}
