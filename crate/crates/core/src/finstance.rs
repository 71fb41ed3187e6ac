//! Finite functional data behind a configuration.
//!
//! Each locus is a finite [`Sort`]; each definable function is an extensional
//! [`RelTable`] of triples `(u, v, w)` meaning `T(u, v) = w`. A table is valid
//! when every row `T(u, -)` is the graph of a bijection between its second and
//! third sorts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bijection::{Bijection, FunctionFamily};
use crate::role::Role;
use crate::sweep::{self, Strategy};

pub type AtomId = u32;
pub type Triple = (AtomId, AtomId, AtomId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("sort {0} is empty")]
    EmptySort(String),
    #[error("sort {sort} lists element {id} twice")]
    DuplicateElement { sort: String, id: AtomId },
    #[error("sort {0} is missing")]
    MissingSort(Role),
    #[error("table {0} is missing")]
    MissingTable(TableName),
    #[error("table {name} is invalid: {defect}")]
    InvalidTable {
        name: TableName,
        defect: TableDefect,
    },
    #[error("designated {role}={id} is not an element of its sort")]
    DesignatedOutOfSort { role: Role, id: AtomId },
}

/// An ordered finite set of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    name: String,
    elements: Vec<AtomId>,
    index: HashMap<AtomId, usize>,
}

impl Sort {
    /// Elements are stored in ascending order.
    pub fn new(name: impl Into<String>, mut elements: Vec<AtomId>) -> Result<Self, InstanceError> {
        let name = name.into();
        if elements.is_empty() {
            return Err(InstanceError::EmptySort(name));
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(InstanceError::DuplicateElement {
                sort: name,
                id: w[0],
            });
        }
        let index = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(Self {
            name,
            elements,
            index,
        })
    }

    /// The sort `{0, .., n-1}`.
    pub fn range(name: impl Into<String>, n: usize) -> Result<Self, InstanceError> {
        Self::new(name, (0..n as AtomId).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[AtomId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, id: AtomId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn id(&self, index: usize) -> AtomId {
        self.elements[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TableName {
    F,
    L,
    H,
    K,
    R,
    S,
}

impl TableName {
    pub const ALL: [TableName; 6] = [
        TableName::F,
        TableName::L,
        TableName::H,
        TableName::K,
        TableName::R,
        TableName::S,
    ];

    /// `(first argument, second argument, value)` sorts.
    pub fn signature(self) -> (Role, Role, Role) {
        use Role::*;
        match self {
            TableName::F => (A2, A1, A3),
            TableName::L => (A1, X2, X3),
            TableName::H => (A3, X2, X1),
            TableName::K => (A2, X3, X1),
            TableName::R => (A1, X4, X1),
            TableName::S => (A2, X2, X4),
        }
    }
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TableName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableName::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| format!("unknown table `{s}`"))
    }
}

/// First witness of a broken table invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableDefect {
    UnknownElement { triple: Triple, position: usize },
    NotFunctional { first: Triple, second: Triple },
    NotInjective { first: Triple, second: Triple },
    NotTotal { u: AtomId, v: AtomId },
    NotSurjective { u: AtomId, w: AtomId },
}

impl fmt::Display for TableDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableDefect::UnknownElement { triple, position } => {
                write!(
                    f,
                    "triple {triple:?} has an unknown element at position {position}"
                )
            }
            TableDefect::NotFunctional { first, second } => {
                write!(f, "{first:?} and {second:?} give two values")
            }
            TableDefect::NotInjective { first, second } => {
                write!(f, "{first:?} and {second:?} share a value")
            }
            TableDefect::NotTotal { u, v } => write!(f, "no value at ({u}, {v})"),
            TableDefect::NotSurjective { u, w } => write!(f, "row {u} never reaches {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelTable {
    pub name: TableName,
    pub triples: BTreeSet<Triple>,
}

impl RelTable {
    pub fn new(name: TableName, triples: impl IntoIterator<Item = Triple>) -> Self {
        Self {
            name,
            triples: triples.into_iter().collect(),
        }
    }

    /// The graph of `f` over the given sorts.
    pub fn from_fn(
        name: TableName,
        first: &Sort,
        second: &Sort,
        f: impl Fn(AtomId, AtomId) -> AtomId,
    ) -> Self {
        let mut triples = BTreeSet::new();
        for &u in first.elements() {
            for &v in second.elements() {
                triples.insert((u, v, f(u, v)));
            }
        }
        Self { name, triples }
    }
}

/// A validated table in index form: `rows[u][v] = w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseTable {
    pub name: TableName,
    pub rows: Vec<Vec<usize>>,
}

impl DenseTable {
    pub fn apply(&self, u: usize, v: usize) -> usize {
        self.rows[u][v]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub name: TableName,
    pub passed: bool,
    pub triples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<TableDefect>,
    /// Surjectivity of the projection onto each coordinate.
    pub projections_surjective: [bool; 3],
    /// Whether every pair of the second and third sorts occurs in some row.
    pub pairs_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub passed: bool,
    pub tables: Vec<TableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(TableName, TableDefect)>,
}

/// `(a2, a1, x2)` where an equation over the three free variables breaks,
/// with each side's value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationWitness {
    pub a2: AtomId,
    pub a1: AtomId,
    pub x2: AtomId,
    pub values: Vec<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub holds: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquationWitness>,
}

/// The families `𝓛, 𝓚, 𝓗` and, for abelian data, `𝓡, 𝓢`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Families {
    pub l: FunctionFamily,
    pub k: FunctionFamily,
    pub h: FunctionFamily,
    pub r: Option<FunctionFamily>,
    pub s: Option<FunctionFamily>,
}

/// Sorts for the seven roles, tables over them, and designated points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalInstance {
    sorts: BTreeMap<Role, Sort>,
    tables: BTreeMap<TableName, RelTable>,
    designated: BTreeMap<Role, AtomId>,
}

fn dense_table(
    first: &Sort,
    second: &Sort,
    third: &Sort,
    table: &RelTable,
) -> (Result<Vec<Vec<usize>>, TableDefect>, [bool; 3], bool) {
    let mut hit = [
        vec![false; first.len()],
        vec![false; second.len()],
        vec![false; third.len()],
    ];
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut by_row: Vec<Vec<(usize, usize, Triple)>> = vec![Vec::new(); first.len()];
    let mut unknown = None;
    for &t in &table.triples {
        let idx = [
            first.index_of(t.0),
            second.index_of(t.1),
            third.index_of(t.2),
        ];
        for (pos, i) in idx.iter().enumerate() {
            if let Some(i) = i {
                hit[pos][*i] = true;
            }
        }
        match idx {
            [Some(u), Some(v), Some(w)] => {
                by_row[u].push((v, w, t));
                pairs.insert((v, w));
            }
            _ => {
                if unknown.is_none() {
                    let position = idx.iter().position(Option::is_none).unwrap_or(0);
                    unknown = Some(TableDefect::UnknownElement {
                        triple: t,
                        position,
                    });
                }
            }
        }
    }
    let projections = [
        hit[0].iter().all(|&b| b),
        hit[1].iter().all(|&b| b),
        hit[2].iter().all(|&b| b),
    ];
    let pairs_complete = pairs.len() == second.len() * third.len();
    if let Some(defect) = unknown {
        return (Err(defect), projections, pairs_complete);
    }

    let mut rows = Vec::with_capacity(first.len());
    for (u, mut entries) in by_row.into_iter().enumerate() {
        entries.sort_unstable_by_key(|e| e.2);
        let mut image: Vec<Option<(usize, Triple)>> = vec![None; second.len()];
        let mut preimage: Vec<Option<Triple>> = vec![None; third.len()];
        for (v, w, t) in entries {
            if let Some((_, prev)) = image[v] {
                return (
                    Err(TableDefect::NotFunctional {
                        first: prev,
                        second: t,
                    }),
                    projections,
                    pairs_complete,
                );
            }
            if let Some(prev) = preimage[w] {
                return (
                    Err(TableDefect::NotInjective {
                        first: prev,
                        second: t,
                    }),
                    projections,
                    pairs_complete,
                );
            }
            image[v] = Some((w, t));
            preimage[w] = Some(t);
        }
        let uid = first.id(u);
        if let Some(v) = image.iter().position(Option::is_none) {
            return (
                Err(TableDefect::NotTotal {
                    u: uid,
                    v: second.id(v),
                }),
                projections,
                pairs_complete,
            );
        }
        if let Some(w) = preimage.iter().position(Option::is_none) {
            return (
                Err(TableDefect::NotSurjective {
                    u: uid,
                    w: third.id(w),
                }),
                projections,
                pairs_complete,
            );
        }
        rows.push(
            image
                .into_iter()
                .map(|e| e.map(|x| x.0).unwrap_or(0))
                .collect(),
        );
    }
    (Ok(rows), projections, pairs_complete)
}

impl FunctionalInstance {
    /// The six basic sorts are required; `x4` is required once `R` or `S` is
    /// present.
    pub fn new(
        sorts: BTreeMap<Role, Sort>,
        tables: BTreeMap<TableName, RelTable>,
        designated: BTreeMap<Role, AtomId>,
    ) -> Result<Self, InstanceError> {
        for role in Role::BASIC {
            if !sorts.contains_key(&role) {
                return Err(InstanceError::MissingSort(role));
            }
        }
        for name in tables.keys() {
            let (a, b, c) = name.signature();
            for role in [a, b, c] {
                if !sorts.contains_key(&role) {
                    return Err(InstanceError::MissingSort(role));
                }
            }
        }
        for (&role, &id) in &designated {
            let sort = sorts.get(&role).ok_or(InstanceError::MissingSort(role))?;
            if sort.index_of(id).is_none() {
                return Err(InstanceError::DesignatedOutOfSort { role, id });
            }
        }
        Ok(Self {
            sorts,
            tables,
            designated,
        })
    }

    pub fn sorts(&self) -> &BTreeMap<Role, Sort> {
        &self.sorts
    }

    pub fn sort(&self, role: Role) -> &Sort {
        // Presence of the basic sorts is checked in `new`; x4 callers check `has_sort`.
        &self.sorts[&role]
    }

    pub fn has_sort(&self, role: Role) -> bool {
        self.sorts.contains_key(&role)
    }

    pub fn tables(&self) -> &BTreeMap<TableName, RelTable> {
        &self.tables
    }

    pub fn table(&self, name: TableName) -> Option<&RelTable> {
        self.tables.get(&name)
    }

    pub fn designated(&self) -> &BTreeMap<Role, AtomId> {
        &self.designated
    }

    pub fn has_abelian_tables(&self) -> bool {
        self.tables.contains_key(&TableName::R) && self.tables.contains_key(&TableName::S)
    }

    /// Returns a copy with one table replaced (or added).
    pub fn with_table(&self, table: RelTable) -> Result<Self, InstanceError> {
        let mut tables = self.tables.clone();
        tables.insert(table.name, table);
        Self::new(self.sorts.clone(), tables, self.designated.clone())
    }

    fn sorts_of(&self, name: TableName) -> (&Sort, &Sort, &Sort) {
        let (a, b, c) = name.signature();
        (self.sort(a), self.sort(b), self.sort(c))
    }

    pub fn validate_tables(&self) -> ValidityReport {
        let mut tables = Vec::new();
        for (&name, table) in &self.tables {
            let (a, b, c) = self.sorts_of(name);
            let (rows, projections_surjective, pairs_complete) = dense_table(a, b, c, table);
            tables.push(TableReport {
                name,
                passed: rows.is_ok(),
                triples: table.triples.len(),
                defect: rows.err(),
                projections_surjective,
                pairs_complete,
            });
        }
        let first_failure = tables
            .iter()
            .find_map(|t| t.defect.clone().map(|d| (t.name, d)));
        ValidityReport {
            passed: first_failure.is_none(),
            tables,
            first_failure,
        }
    }

    pub fn dense(&self, name: TableName) -> Result<DenseTable, InstanceError> {
        let table = self.table(name).ok_or(InstanceError::MissingTable(name))?;
        let (a, b, c) = self.sorts_of(name);
        let rows = dense_table(a, b, c, table)
            .0
            .map_err(|defect| InstanceError::InvalidTable { name, defect })?;
        Ok(DenseTable { name, rows })
    }

    pub fn check_master_equation(&self) -> Result<EquationReport, InstanceError> {
        self.check_master_equation_with(Strategy::default())
    }

    /// `H(F(a2,a1), x2) = K(a2, L(a1,x2))` over every triple, reporting the
    /// lexicographically first failure.
    pub fn check_master_equation_with(
        &self,
        strategy: Strategy,
    ) -> Result<EquationReport, InstanceError> {
        let f = self.dense(TableName::F)?;
        let l = self.dense(TableName::L)?;
        let h = self.dense(TableName::H)?;
        let k = self.dense(TableName::K)?;
        let sides = |a2: usize, a1: usize, x2: usize| {
            let lhs = h.apply(f.apply(a2, a1), x2);
            let rhs = k.apply(a2, l.apply(a1, x2));
            vec![lhs, rhs]
        };
        Ok(self.sweep_equation(strategy, sides, Role::X1))
    }

    pub fn check_abelian_equation(&self) -> Result<EquationReport, InstanceError> {
        self.check_abelian_equation_with(Strategy::default())
    }

    /// `H(F(a2,a1), x2) = R(a1, S(a2,x2)) = K(a2, L(a1,x2))`.
    ///
    /// The middle term of the published identity is printed with an
    /// undeclared `G(a1, x2)`; it is read here as `L(a1, x2)`, matching the
    /// master equation.
    pub fn check_abelian_equation_with(
        &self,
        strategy: Strategy,
    ) -> Result<EquationReport, InstanceError> {
        let f = self.dense(TableName::F)?;
        let l = self.dense(TableName::L)?;
        let h = self.dense(TableName::H)?;
        let k = self.dense(TableName::K)?;
        let r = self.dense(TableName::R)?;
        let s = self.dense(TableName::S)?;
        let sides = |a2: usize, a1: usize, x2: usize| {
            vec![
                h.apply(f.apply(a2, a1), x2),
                r.apply(a1, s.apply(a2, x2)),
                k.apply(a2, l.apply(a1, x2)),
            ]
        };
        Ok(self.sweep_equation(strategy, sides, Role::X1))
    }

    fn sweep_equation<E>(&self, strategy: Strategy, sides: E, value_role: Role) -> EquationReport
    where
        E: Fn(usize, usize, usize) -> Vec<usize> + Sync + Send,
    {
        let (sa2, sa1, sx2) = (
            self.sort(Role::A2),
            self.sort(Role::A1),
            self.sort(Role::X2),
        );
        let n1 = sa1.len();
        let witness = sweep::find_first(strategy, sa2.len() * n1, |i| {
            let (a2, a1) = (i / n1, i % n1);
            (0..sx2.len()).find_map(|x2| {
                let vals = sides(a2, a1, x2);
                (!vals.windows(2).all(|w| w[0] == w[1])).then_some((a2, a1, x2, vals))
            })
        });
        let values = self.sort(value_role);
        EquationReport {
            holds: witness.is_none(),
            checked: (sa2.len() * n1 * sx2.len()) as u64,
            witness: witness.map(|(a2, a1, x2, vals)| EquationWitness {
                a2: sa2.id(a2),
                a1: sa1.id(a1),
                x2: sx2.id(x2),
                values: vals.into_iter().map(|v| values.id(v)).collect(),
            }),
        }
    }

    fn family(
        &self,
        name: TableName,
        label: &'static str,
    ) -> Result<FunctionFamily, InstanceError> {
        let dense = self.dense(name)?;
        let (param, domain, codomain) = name.signature();
        let members = dense
            .rows
            .into_iter()
            .map(|row| Bijection::new(domain, codomain, row).expect("validated row"))
            .collect();
        Ok(FunctionFamily {
            name: label,
            parameter: param,
            domain,
            codomain,
            params: self.sort(param).elements().to_vec(),
            members,
        })
    }

    /// `ℓ_u = L(u,-)`, `k_u = K(u,-)`, `h_u = H(u,-)` and, when present,
    /// `r_u = R(u,-)`, `s_u = S(u,-)`.
    pub fn extract_families(&self) -> Result<Families, InstanceError> {
        let optional = |name, label| {
            self.table(name)
                .is_some()
                .then(|| self.family(name, label))
                .transpose()
        };
        Ok(Families {
            l: self.family(TableName::L, "L")?,
            k: self.family(TableName::K, "K")?,
            h: self.family(TableName::H, "H")?,
            r: optional(TableName::R, "R")?,
            s: optional(TableName::S, "S")?,
        })
    }
}
