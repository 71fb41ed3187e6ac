//! Ground-truth instances from finite group actions.
//!
//! A transitive action of `G` on `X` yields the configuration
//! `(g1, g2, g2g1, g2g1·x, x, g1·x)`; its functional data is the multiplication
//! and the action itself. The same construction over `F_p^m` acting on itself
//! by translation gives matroid-level instances with `m = k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::configuration::ConfigPoints;
use crate::finstance::{AtomId, FunctionalInstance, InstanceError, RelTable, Sort, TableName};
use crate::group::{FiniteGroupTable, GroupAction, GroupTableData};
use crate::matroid::{is_prime, LinearMatroid};
use crate::role::Role;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown group or action spec `{0}`")]
    UnknownSpec(String),
    #[error("action is not transitive")]
    NotTransitive,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("subgroup generated by {0:?} is not normal")]
    NotNormal(Vec<String>),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A builtin group: `cyclic:n`, `dihedral:n` (order `2n`), `symmetric:n`
/// (`n <= 4`), `quaternion8`, `trivial`, or a direct product `A*B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl FromStr for GroupSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || GenError::UnknownSpec(s.to_string());
        if let Some((a, b)) = s.split_once('*') {
            return Ok(GroupSpec::Product(
                Box::new(a.parse()?),
                Box::new(b.parse()?),
            ));
        }
        if s == "quaternion8" {
            return Ok(GroupSpec::Quaternion8);
        }
        if s == "trivial" {
            return Ok(GroupSpec::Cyclic(1));
        }
        let (name, n) = s.split_once(':').ok_or_else(unknown)?;
        let n: usize = n.trim().parse().map_err(|_| unknown())?;
        match (name.trim(), n) {
            ("cyclic", 1..) => Ok(GroupSpec::Cyclic(n)),
            ("dihedral", 1..) => Ok(GroupSpec::Dihedral(n)),
            ("symmetric", 1..=4) => Ok(GroupSpec::Symmetric(n)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// `regular`, `natural`, `quotient:<labels>` (action on `G/N` for the normal
/// subgroup generated by the labels) or `cosets:<labels>` (left cosets of any
/// subgroup).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSpec {
    Regular,
    Natural,
    Quotient(Vec<String>),
    Cosets(Vec<String>),
}

impl FromStr for ActionSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let labels = |rest: &str| rest.split(',').map(|l| l.trim().to_string()).collect();
        match s.trim() {
            "regular" => Ok(ActionSpec::Regular),
            "natural" => Ok(ActionSpec::Natural),
            other => match other.split_once(':') {
                Some(("quotient", rest)) => Ok(ActionSpec::Quotient(labels(rest))),
                Some(("cosets", rest)) => Ok(ActionSpec::Cosets(labels(rest))),
                _ => Err(GenError::UnknownSpec(s.to_string())),
            },
        }
    }
}

fn table_from<T: Clone + PartialEq>(
    elements: Vec<T>,
    labels: Vec<String>,
    mul: impl Fn(&T, &T) -> T,
    identity: usize,
) -> FiniteGroupTable {
    let index = |x: &T| elements.iter().position(|e| e == x).expect("closed");
    let table = elements
        .iter()
        .map(|a| elements.iter().map(|b| index(&mul(a, b))).collect())
        .collect();
    FiniteGroupTable::new(GroupTableData {
        elements: labels,
        table,
        identity,
    })
    .expect("builtin tables are groups")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn builtin_group(spec: &GroupSpec) -> Result<FiniteGroupTable, GenError> {
    Ok(match spec {
        GroupSpec::Cyclic(n) => {
            let n = *n;
            table_from(
                (0..n).collect(),
                (0..n).map(|i| i.to_string()).collect(),
                |a, b| (a + b) % n,
                0,
            )
        }
        GroupSpec::Dihedral(n) => {
            // (i, f) is r^i s^f; s r = r^-1 s.
            let n = *n;
            let elements: Vec<(usize, bool)> = [false, true]
                .into_iter()
                .flat_map(|f| (0..n).map(move |i| (i, f)))
                .collect();
            let labels = elements
                .iter()
                .map(|&(i, f)| if f { format!("r{i}s") } else { format!("r{i}") })
                .collect();
            table_from(
                elements,
                labels,
                |&(i1, f1), &(i2, f2)| {
                    let i = if f1 { (i1 + n - i2) % n } else { (i1 + i2) % n };
                    (i, f1 ^ f2)
                },
                0,
            )
        }
        GroupSpec::Symmetric(n) => {
            let perms = permutations(*n);
            let labels = perms
                .iter()
                .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
                .collect();
            // (a*b)(x) = a(b(x))
            table_from(perms, labels, |a, b| b.iter().map(|&x| a[x]).collect(), 0)
        }
        GroupSpec::Quaternion8 => {
            // Units ±1, ±i, ±j, ±k as (sign, unit) with unit in {1, i, j, k}.
            let elements: Vec<(bool, usize)> =
                (0..4).flat_map(|u| [(false, u), (true, u)]).collect();
            let names = ["1", "i", "j", "k"];
            let labels = elements
                .iter()
                .map(|&(neg, u)| format!("{}{}", if neg { "-" } else { "" }, names[u]))
                .collect();
            // unit products: (sign flip, unit)
            let unit = |a: usize, b: usize| -> (bool, usize) {
                match (a, b) {
                    (0, x) | (x, 0) => (false, x),
                    (x, y) if x == y => (true, 0),
                    (1, 2) => (false, 3),
                    (2, 1) => (true, 3),
                    (2, 3) => (false, 1),
                    (3, 2) => (true, 1),
                    (3, 1) => (false, 2),
                    (1, 3) => (true, 2),
                    _ => unreachable!(),
                }
            };
            table_from(
                elements,
                labels,
                |&(na, a), &(nb, b)| {
                    let (flip, u) = unit(a, b);
                    (na ^ nb ^ flip, u)
                },
                0,
            )
        }
        GroupSpec::Product(a, b) => {
            let ga = builtin_group(a)?;
            let gb = builtin_group(b)?;
            direct_product(&ga, &gb)
        }
    })
}

pub fn direct_product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> FiniteGroupTable {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut labels = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("({},{})", a.label(i), b.label(j)));
        }
    }
    let table = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    FiniteGroupTable::new(GroupTableData {
        elements: labels,
        table,
        identity: a.identity() * nb + b.identity(),
    })
    .expect("products of groups are groups")
}

/// Left multiplication on the left cosets of `subgroup`, cosets ordered by
/// their least element.
pub fn coset_action(group: &FiniteGroupTable, subgroup: &[usize]) -> GroupAction {
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = 0;
    for g in 0..n {
        if coset_of[g] == usize::MAX {
            for &h in subgroup {
                coset_of[group.mul(g, h)] = cosets;
            }
            cosets += 1;
        }
    }
    let reps: Vec<usize> = (0..cosets)
        .map(|c| {
            coset_of
                .iter()
                .position(|&x| x == c)
                .expect("nonempty coset")
        })
        .collect();
    let action = (0..n)
        .map(|g| reps.iter().map(|&r| coset_of[group.mul(g, r)]).collect())
        .collect();
    GroupAction::new(
        group.clone(),
        Sort::range("G/H", cosets).expect("nonempty"),
        action,
    )
    .expect("coset actions satisfy the action axioms")
}

fn subgroup_from_labels(
    group: &FiniteGroupTable,
    labels: &[String],
) -> Result<Vec<usize>, GenError> {
    let gens = labels
        .iter()
        .map(|l| {
            group
                .index_of(l)
                .ok_or_else(|| GenError::UnknownSpec(format!("element `{l}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(group.generated(&gens))
}

fn natural_action(spec: &GroupSpec, group: FiniteGroupTable) -> Result<GroupAction, GenError> {
    match spec {
        GroupSpec::Cyclic(_) => Ok(GroupAction::regular(group)),
        GroupSpec::Symmetric(n) => {
            let perms = permutations(*n);
            let action = perms.clone();
            Ok(GroupAction::new(group, Sort::range("points", *n)?, action).expect("valid"))
        }
        GroupSpec::Dihedral(n) => {
            let n = *n;
            let action = (0..group.order())
                .map(|g| {
                    let (i, f) = (g % n, g >= n);
                    (0..n)
                        .map(|v| if f { (i + n - v) % n } else { (i + v) % n })
                        .collect()
                })
                .collect();
            Ok(GroupAction::new(group, Sort::range("vertices", n)?, action).expect("valid"))
        }
        _ => Err(GenError::UnknownSpec(format!("natural action of {spec}"))),
    }
}

pub fn builtin_action(group: &GroupSpec, action: &ActionSpec) -> Result<GroupAction, GenError> {
    let g = builtin_group(group)?;
    match action {
        ActionSpec::Regular => Ok(GroupAction::regular(g)),
        ActionSpec::Natural => natural_action(group, g),
        ActionSpec::Quotient(labels) => {
            let sub = subgroup_from_labels(&g, labels)?;
            if !g.is_normal(&sub) {
                return Err(GenError::NotNormal(labels.clone()));
            }
            Ok(coset_action(&g, &sub))
        }
        ActionSpec::Cosets(labels) => {
            let sub = subgroup_from_labels(&g, labels)?;
            Ok(coset_action(&g, &sub))
        }
    }
}

/// Designated points as group/set indices: `(a1, a2, x2)`. The remaining
/// points follow: `a3 = a2 a1`, `x3 = a1·x2`, `x1 = a3·x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Designation {
    pub a1: usize,
    pub a2: usize,
    pub x2: usize,
}

impl Designation {
    pub fn default_for(action: &GroupAction) -> Self {
        let e = action.group.identity();
        Self {
            a1: e,
            a2: e,
            x2: 0,
        }
    }
}

fn group_sorts(action: &GroupAction) -> Result<BTreeMap<Role, Sort>, InstanceError> {
    let n = action.group.order();
    let mut sorts = BTreeMap::new();
    for r in [Role::A1, Role::A2, Role::A3] {
        sorts.insert(r, Sort::range(r.as_str(), n)?);
    }
    for r in [Role::X1, Role::X2, Role::X3] {
        sorts.insert(r, Sort::new(r.as_str(), action.set.elements().to_vec())?);
    }
    Ok(sorts)
}

fn action_table(name: TableName, action: &GroupAction, sorts: &BTreeMap<Role, Sort>) -> RelTable {
    let (p, d, _) = name.signature();
    let set = &action.set;
    RelTable::from_fn(name, &sorts[&p], &sorts[&d], |g, x| {
        let xi = set.index_of(x).expect("set element");
        set.id(action.apply(g as usize, xi))
    })
}

fn designated_points(action: &GroupAction, d: Designation) -> BTreeMap<Role, AtomId> {
    let g = &action.group;
    let a3 = g.mul(d.a2, d.a1);
    let id = |x: usize| action.set.id(x);
    [
        (Role::A1, d.a1 as AtomId),
        (Role::A2, d.a2 as AtomId),
        (Role::A3, a3 as AtomId),
        (Role::X2, id(d.x2)),
        (Role::X3, id(action.apply(d.a1, d.x2))),
        (Role::X1, id(action.apply(a3, d.x2))),
    ]
    .into_iter()
    .collect()
}

/// `F(g2,g1) = g2g1`, `L(g1,x) = g1·x`, `H(g3,x) = g3·x`, `K(g2,y) = g2·y`.
pub fn gen_configuration(
    action: &GroupAction,
    designation: Option<Designation>,
) -> Result<FunctionalInstance, GenError> {
    if !action.is_transitive() {
        return Err(GenError::NotTransitive);
    }
    let d = designation.unwrap_or_else(|| Designation::default_for(action));
    let g = &action.group;
    if d.a1 >= g.order() || d.a2 >= g.order() || d.x2 >= action.set.len() {
        return Err(GenError::InvalidParams(
            "designated point out of range".into(),
        ));
    }
    let sorts = group_sorts(action)?;
    let mut tables = BTreeMap::new();
    tables.insert(
        TableName::F,
        RelTable::from_fn(
            TableName::F,
            &sorts[&Role::A2],
            &sorts[&Role::A1],
            |a, b| g.mul(a as usize, b as usize) as AtomId,
        ),
    );
    for name in [TableName::L, TableName::H, TableName::K] {
        tables.insert(name, action_table(name, action, &sorts));
    }
    Ok(FunctionalInstance::new(
        sorts,
        tables,
        designated_points(action, d),
    )?)
}

/// Adds `x4 = X`, `S(g2,x) = g2·x` and `R(g1,z) = g1·z`.
pub fn gen_abelian_extension(
    action: &GroupAction,
    designation: Option<Designation>,
) -> Result<FunctionalInstance, GenError> {
    if !action.group.is_abelian() {
        return Err(GenError::NotAbelian);
    }
    let base = gen_configuration(action, designation)?;
    let d = designation.unwrap_or_else(|| Designation::default_for(action));
    let mut sorts = base.sorts().clone();
    sorts.insert(Role::X4, Sort::new("x4", action.set.elements().to_vec())?);
    let mut tables = base.tables().clone();
    for name in [TableName::R, TableName::S] {
        tables.insert(name, action_table(name, action, &sorts));
    }
    let mut designated = base.designated().clone();
    designated.insert(Role::X4, action.set.id(action.apply(d.a2, d.x2)));
    Ok(FunctionalInstance::new(sorts, tables, designated)?)
}

/// Translation action of `F_p^m` on itself over the ambient space
/// `F_p^{3m} = g1 ⊕ g2 ⊕ x`.
pub fn gen_matroid_instance(p: u64, m: usize) -> Result<ConfigPoints, GenError> {
    if !is_prime(p) {
        return Err(GenError::InvalidParams(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(GenError::InvalidParams("m must be at least 1".into()));
    }
    let n = 3 * m;
    let block = |terms: &[usize]| -> Vec<Vec<u64>> {
        (0..m)
            .map(|i| {
                let mut v = vec![0u64; n];
                for &b in terms {
                    v[b * m + i] = 1;
                }
                v
            })
            .collect()
    };
    let points = [
        (Role::A1, block(&[0])),
        (Role::A2, block(&[1])),
        (Role::A3, block(&[0, 1])),
        (Role::X2, block(&[2])),
        (Role::X3, block(&[0, 2])),
        (Role::X1, block(&[0, 1, 2])),
        (Role::X4, block(&[1, 2])),
    ];
    let mut matroid =
        LinearMatroid::new(p, n).map_err(|e| GenError::InvalidParams(e.to_string()))?;
    let mut roles = BTreeMap::new();
    for (role, vs) in points {
        matroid
            .insert_point(role.as_str(), vs)
            .map_err(|e| GenError::InvalidParams(e.to_string()))?;
        roles.insert(role, role.as_str().to_string());
    }
    ConfigPoints::new(matroid, roles, vec![], m, m)
        .map_err(|e| GenError::InvalidParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parses_specs() {
        assert_eq!(spec("cyclic:5"), GroupSpec::Cyclic(5));
        assert_eq!(spec("cyclic:2*cyclic:4").to_string(), "cyclic:2*cyclic:4");
        assert!("symmetric:5".parse::<GroupSpec>().is_err());
        assert!("cyclic:0".parse::<GroupSpec>().is_err());
        assert!("alternating:4".parse::<GroupSpec>().is_err());
        assert_eq!(
            "quotient:2".parse::<ActionSpec>().unwrap(),
            ActionSpec::Quotient(vec!["2".into()])
        );
        assert!("orbit".parse::<ActionSpec>().is_err());
    }

    #[test]
    fn cyclic_table() {
        let g = builtin_group(&spec("cyclic:5")).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.mul(3, 4), 2);
    }

    #[test]
    fn symmetric_three_matches_composition() {
        let g = builtin_group(&spec("symmetric:3")).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // [1,0,2] ∘ [0,2,1] = [1,2,0]
        let a = g.index_of("102").unwrap();
        let b = g.index_of("021").unwrap();
        assert_eq!(g.label(g.mul(a, b)), "120");
        assert_eq!(g.order_profile(), vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let g = builtin_group(&GroupSpec::Quaternion8).unwrap();
        assert_eq!(g.order(), 8);
        let involutions: Vec<_> = (0..8).filter(|&a| g.element_order(a) == 2).collect();
        assert_eq!(involutions.len(), 1);
        assert_eq!(g.label(involutions[0]), "-1");
        let (i, j) = (g.index_of("i").unwrap(), g.index_of("j").unwrap());
        assert_eq!(g.label(g.mul(i, j)), "k");
        assert_eq!(g.label(g.mul(j, i)), "-k");
    }

    #[test]
    fn dihedral_relations() {
        let g = builtin_group(&spec("dihedral:5")).unwrap();
        assert_eq!(g.order(), 10);
        let r = g.index_of("r1").unwrap();
        let s = g.index_of("r0s").unwrap();
        assert_eq!(g.element_order(r), 5);
        assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
    }

    #[test]
    fn regular_configuration_is_valid() {
        for s in ["cyclic:5", "symmetric:3", "cyclic:1"] {
            let action = builtin_action(&spec(s), &ActionSpec::Regular).unwrap();
            let inst = gen_configuration(&action, None).unwrap();
            assert!(inst.validate_tables().passed, "{s}");
            assert!(inst.check_master_equation().unwrap().holds, "{s}");
        }
    }

    #[test]
    fn z5_configuration_is_translation() {
        let action = builtin_action(&spec("cyclic:5"), &ActionSpec::Regular).unwrap();
        let inst = gen_configuration(&action, None).unwrap();
        for t in TableName::ALL.iter().take(4) {
            for &(u, v, w) in &inst.table(*t).unwrap().triples {
                assert_eq!(w, (u + v) % 5);
            }
        }
        assert_eq!(inst.designated()[&Role::A3], 0);
    }

    #[test]
    fn sizes_of_s3_instance() {
        let action = builtin_action(&spec("symmetric:3"), &ActionSpec::Regular).unwrap();
        let inst = gen_configuration(&action, None).unwrap();
        assert!(Role::BASIC.iter().all(|r| inst.sort(*r).len() == 6));
        assert_eq!(inst.check_master_equation().unwrap().checked, 216);
    }

    #[test]
    fn abelian_extensions() {
        for s in ["cyclic:5", "cyclic:2*cyclic:2"] {
            let action = builtin_action(&spec(s), &ActionSpec::Regular).unwrap();
            let inst = gen_abelian_extension(&action, None).unwrap();
            assert!(inst.validate_tables().passed);
            assert!(inst.check_abelian_equation().unwrap().holds, "{s}");
        }
        let s3 = builtin_action(&spec("symmetric:3"), &ActionSpec::Regular).unwrap();
        assert_eq!(
            gen_abelian_extension(&s3, None).unwrap_err(),
            GenError::NotAbelian
        );
    }

    #[test]
    fn quotient_actions() {
        let a = builtin_action(&spec("cyclic:4"), &ActionSpec::Quotient(vec!["2".into()])).unwrap();
        assert_eq!(a.set.len(), 2);
        assert_eq!(a.kernel(), vec![0, 2]);
        let s3 = spec("symmetric:3");
        assert!(matches!(
            builtin_action(&s3, &ActionSpec::Quotient(vec!["102".into()])),
            Err(GenError::NotNormal(_))
        ));
        let cosets = builtin_action(&s3, &ActionSpec::Cosets(vec!["102".into()])).unwrap();
        assert_eq!(cosets.set.len(), 3);
        assert!(cosets.is_faithful());
    }

    #[test]
    fn non_transitive_rejected() {
        let g = builtin_group(&spec("cyclic:2")).unwrap();
        let set = Sort::range("pts", 3).unwrap();
        let action = GroupAction::new(g, set, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert_eq!(
            gen_configuration(&action, None).unwrap_err(),
            GenError::NotTransitive
        );
    }

    #[test]
    fn matroid_instance_examples() {
        for (p, m) in [(5, 1), (3, 2), (2, 1)] {
            let cfg = gen_matroid_instance(p, m).unwrap();
            assert!(cfg.validate_mk().unwrap().passed, "({p},{m})");
            assert!(cfg.validate_abelian_node().unwrap().passed, "({p},{m})");
            assert_eq!(cfg.m, cfg.k);
        }
        let cfg = gen_matroid_instance(5, 1).unwrap();
        assert_eq!(cfg.matroid.points()["x1"], vec![vec![1, 1, 1]]);
        assert_eq!(cfg.matroid.points()["x4"], vec![vec![0, 1, 1]]);
        assert!(gen_matroid_instance(4, 1).is_err());
        assert!(gen_matroid_instance(5, 0).is_err());
    }
}
