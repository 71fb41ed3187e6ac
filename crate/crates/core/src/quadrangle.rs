//! Four-place relations and their conversion to and from configurations.
//!
//! A tuple `(a1, a2, a3, a4)` of a group-derived relation reads
//! `a3 = g2g1·a4`: the first two coordinates are the group line, the last two
//! the point lines. Fixing two coordinates must leave a bijection between
//! the other two; the three closure axioms are then swept exhaustively.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::bijection::{germ_classes, GermClass};
use crate::finstance::{AtomId, FunctionalInstance, InstanceError, RelTable, Sort, TableName};
use crate::role::Role;
use crate::sweep::{self, Strategy};

pub type Quad = [AtomId; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("tuple {tuple:?} has element {} outside sort {}", tuple[*position], position + 1)]
    UnknownElement { tuple: Quad, position: usize },
    #[error(transparent)]
    Sort(#[from] InstanceError),
    #[error("fiber {pattern} over {fixed:?} is not a bijection")]
    FiberNotBijective {
        pattern: &'static str,
        fixed: [AtomId; 2],
    },
    #[error("axiom ({0}) fails")]
    AxiomFailure(&'static str),
    #[error("precondition failed: {0}")]
    PreconditionFailure(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRelation {
    sorts: [Sort; 4],
    tuples: BTreeSet<Quad>,
    abelian_claimed: bool,
}

impl QuadRelation {
    pub fn new(
        sorts: [Sort; 4],
        tuples: BTreeSet<Quad>,
        abelian_claimed: bool,
    ) -> Result<Self, QuadError> {
        for t in &tuples {
            if let Some(position) = (0..4).find(|&i| sorts[i].index_of(t[i]).is_none()) {
                return Err(QuadError::UnknownElement {
                    tuple: *t,
                    position,
                });
            }
        }
        Ok(Self {
            sorts,
            tuples,
            abelian_claimed,
        })
    }

    pub fn sorts(&self) -> &[Sort; 4] {
        &self.sorts
    }

    pub fn tuples(&self) -> &BTreeSet<Quad> {
        &self.tuples
    }

    pub fn abelian_claimed(&self) -> bool {
        self.abelian_claimed
    }

    fn indexed(&self) -> Vec<[usize; 4]> {
        self.tuples
            .iter()
            .map(|t| std::array::from_fn(|i| self.sorts[i].index_of(t[i]).expect("checked in new")))
            .collect()
    }

    fn ids(&self, t: [usize; 4]) -> Quad {
        std::array::from_fn(|i| self.sorts[i].id(t[i]))
    }
}

/// A fiber pattern: the two fixed coordinates, then source and target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pattern {
    name: &'static str,
    fixed: [usize; 2],
    free: [usize; 2],
}

const H_PATTERN: Pattern = Pattern {
    name: "12|34",
    fixed: [0, 1],
    free: [2, 3],
};
const K_PATTERN: Pattern = Pattern {
    name: "14|23",
    fixed: [0, 3],
    free: [1, 2],
};
const S_PATTERN: Pattern = Pattern {
    name: "13|24",
    fixed: [0, 2],
    free: [1, 3],
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub pattern: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[AtomId; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub holds: bool,
    pub checked: u64,
    /// Three tuples in the relation whose conclusion is missing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Quad; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Fibers and (i), (ii) hold, plus (iii) when abelian data is claimed.
    pub passed: bool,
    pub abelian: bool,
    pub fibers: Vec<FiberReport>,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn axiom(&self, id: &str) -> &AxiomResult {
        self.axioms
            .iter()
            .find(|a| a.axiom == id)
            .expect("known axiom")
    }
}

/// A fixed coordinate pair and the bijection it induces.
type Fiber = ((usize, usize), Vec<usize>);

/// `mapping[s]` for every fixed pair, in lexicographic pair order, or the
/// first pair whose fiber is not a bijection.
fn fibers(q: &QuadRelation, idx: &[[usize; 4]], p: Pattern) -> Result<Vec<Fiber>, [AtomId; 2]> {
    let [f0, f1] = p.fixed;
    let [src, dst] = p.free;
    let (n0, n1) = (q.sorts[f0].len(), q.sorts[f1].len());
    let (ns, nd) = (q.sorts[src].len(), q.sorts[dst].len());
    let mut maps: Vec<Vec<Option<usize>>> = vec![vec![None; ns]; n0 * n1];
    let mut bad = vec![ns != nd; n0 * n1];
    for t in idx {
        let slot = t[f0] * n1 + t[f1];
        match maps[slot][t[src]] {
            Some(_) => bad[slot] = true,
            None => maps[slot][t[src]] = Some(t[dst]),
        }
    }
    let mut out = Vec::with_capacity(n0 * n1);
    for (slot, m) in maps.into_iter().enumerate() {
        let fixed = [q.sorts[f0].id(slot / n1), q.sorts[f1].id(slot % n1)];
        if bad[slot] || m.iter().any(Option::is_none) {
            return Err(fixed);
        }
        let m: Vec<usize> = m.into_iter().map(|x| x.expect("total")).collect();
        let mut hit = vec![false; nd];
        for &y in &m {
            if std::mem::replace(&mut hit[y], true) {
                return Err(fixed);
            }
        }
        out.push(((slot / n1, slot % n1), m));
    }
    Ok(out)
}

struct Bitset {
    dims: [usize; 4],
    words: Vec<u64>,
}

impl Bitset {
    fn new(q: &QuadRelation, idx: &[[usize; 4]]) -> Self {
        let dims = std::array::from_fn(|i| q.sorts[i].len());
        let total: usize = dims.iter().product();
        let mut s = Self {
            dims,
            words: vec![0; total.div_ceil(64)],
        };
        for t in idx {
            let k = s.key(t);
            s.words[k / 64] |= 1 << (k % 64);
        }
        s
    }

    fn key(&self, t: &[usize; 4]) -> usize {
        ((t[0] * self.dims[1] + t[1]) * self.dims[2] + t[2]) * self.dims[3] + t[3]
    }

    fn contains(&self, t: &[usize; 4]) -> bool {
        let k = self.key(t);
        self.words[k / 64] >> (k % 64) & 1 == 1
    }
}

/// Axiom shape: `P2` agrees with `P1` on `share2`, `P3` agrees with `P1` on
/// `share3`; the conclusion takes the coordinates in `share3` from `P2` and
/// the rest from `P3`.
struct Axiom {
    id: &'static str,
    share2: [usize; 2],
    share3: [usize; 2],
}

const AXIOMS: [Axiom; 3] = [
    Axiom {
        id: "i",
        share2: [2, 3],
        share3: [0, 1],
    },
    Axiom {
        id: "ii",
        share2: [1, 2],
        share3: [0, 3],
    },
    Axiom {
        id: "iii",
        share2: [0, 2],
        share3: [1, 3],
    },
];

fn check_axiom(
    strategy: Strategy,
    idx: &[[usize; 4]],
    members: &Bitset,
    axiom: &Axiom,
) -> (u64, Option<[[usize; 4]; 3]>) {
    let group_by = |pair: [usize; 2]| {
        let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, t) in idx.iter().enumerate() {
            m.entry((t[pair[0]], t[pair[1]])).or_default().push(i);
        }
        m
    };
    let by2 = group_by(axiom.share2);
    let by3 = group_by(axiom.share3);
    let partners = |t: &[usize; 4], by: &HashMap<(usize, usize), Vec<usize>>, pair: [usize; 2]| {
        by.get(&(t[pair[0]], t[pair[1]])).map_or(0, Vec::len) as u64
    };
    let checked = idx
        .iter()
        .map(|t| partners(t, &by2, axiom.share2) * partners(t, &by3, axiom.share3))
        .sum();
    let witness = sweep::find_first(strategy, idx.len(), |i| {
        let p1 = &idx[i];
        let c2 = &by2[&(p1[axiom.share2[0]], p1[axiom.share2[1]])];
        let c3 = &by3[&(p1[axiom.share3[0]], p1[axiom.share3[1]])];
        c2.iter().find_map(|&j| {
            let p2 = &idx[j];
            c3.iter().find_map(|&k| {
                let p3 = &idx[k];
                let mut concl = *p3;
                for &c in &axiom.share3 {
                    concl[c] = p2[c];
                }
                (!members.contains(&concl)).then_some([*p1, *p2, *p3])
            })
        })
    });
    (checked, witness)
}

pub fn validate_quadrangle(q: &QuadRelation) -> AxiomReport {
    validate_quadrangle_with(q, Strategy::default())
}

pub fn validate_quadrangle_with(q: &QuadRelation, strategy: Strategy) -> AxiomReport {
    let idx = q.indexed();
    let fibers: Vec<FiberReport> = [H_PATTERN, K_PATTERN, S_PATTERN]
        .into_iter()
        .map(|p| {
            let witness = fibers(q, &idx, p).err();
            FiberReport {
                pattern: p.name,
                passed: witness.is_none(),
                witness,
            }
        })
        .collect();
    let members = Bitset::new(q, &idx);
    let axioms: Vec<AxiomResult> = AXIOMS
        .iter()
        .map(|a| {
            let (checked, witness) = check_axiom(strategy, &idx, &members, a);
            AxiomResult {
                axiom: a.id,
                holds: witness.is_none(),
                checked,
                witness: witness.map(|w| w.map(|t| q.ids(t))),
            }
        })
        .collect();
    let abelian = axioms[2].holds;
    AxiomReport {
        passed: fibers.iter().all(|f| f.passed)
            && axioms[0].holds
            && axioms[1].holds
            && (abelian || !q.abelian_claimed),
        abelian,
        fibers,
        axioms,
    }
}

/// Germ classes of the fiber functions, parametrized by the fixed pair.
/// Mappings are by sort index: `h: A3 → A4`, `k: A2 → A3`, `s: A2 → A4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadFunctions {
    pub h: Vec<GermClass<(AtomId, AtomId)>>,
    pub k: Vec<GermClass<(AtomId, AtomId)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<GermClass<(AtomId, AtomId)>>>,
}

fn classes_for(
    q: &QuadRelation,
    idx: &[[usize; 4]],
    p: Pattern,
) -> Result<Vec<GermClass<(AtomId, AtomId)>>, QuadError> {
    let fib = fibers(q, idx, p).map_err(|fixed| QuadError::FiberNotBijective {
        pattern: p.name,
        fixed,
    })?;
    let [f0, f1] = p.fixed;
    let params: Vec<(AtomId, AtomId)> = fib
        .iter()
        .map(|((u, v), _)| (q.sorts[f0].id(*u), q.sorts[f1].id(*v)))
        .collect();
    Ok(germ_classes(
        params
            .into_iter()
            .zip(fib.iter().map(|(_, m)| m.as_slice())),
    ))
}

pub fn extract_quad_functions(q: &QuadRelation) -> Result<QuadFunctions, QuadError> {
    let idx = q.indexed();
    let with_s = {
        let members = Bitset::new(q, &idx);
        check_axiom(Strategy::default(), &idx, &members, &AXIOMS[2])
            .1
            .is_none()
    };
    Ok(QuadFunctions {
        h: classes_for(q, &idx, H_PATTERN)?,
        k: classes_for(q, &idx, K_PATTERN)?,
        s: if with_s {
            Some(classes_for(q, &idx, S_PATTERN)?)
        } else {
            None
        },
    })
}

/// Maps each parameter pair to its class index.
fn class_index(classes: &[GermClass<(AtomId, AtomId)>]) -> HashMap<(AtomId, AtomId), usize> {
    classes
        .iter()
        .enumerate()
        .flat_map(|(c, class)| class.params.iter().map(move |&p| (p, c)))
        .collect()
}

/// Group line `a1, a2, [h_{a1a2}]`; point lines `a4, [k_{a1a4}], a3`; and,
/// when axiom (iii) holds, the node `[s_{a1a3}]`.
pub fn quad_to_config(q: &QuadRelation) -> Result<FunctionalInstance, QuadError> {
    let report = validate_quadrangle(q);
    if let Some(f) = report.fibers[..2].iter().find(|f| !f.passed) {
        let pattern = f.pattern;
        return Err(QuadError::FiberNotBijective {
            pattern,
            fixed: f.witness.expect("failing fiber has a witness"),
        });
    }
    for id in ["i", "ii"] {
        if !report.axiom(id).holds {
            return Err(QuadError::AxiomFailure(if id == "i" { "i" } else { "ii" }));
        }
    }
    let funcs = extract_quad_functions(q)?;
    let [s1, s2, s3, s4] = &q.sorts;
    let h_of = class_index(&funcs.h);
    let k_of = class_index(&funcs.k);

    let mut sorts = BTreeMap::new();
    sorts.insert(Role::A1, Sort::new("a1", s1.elements().to_vec())?);
    sorts.insert(Role::A2, Sort::new("a2", s2.elements().to_vec())?);
    sorts.insert(Role::A3, Sort::range("a3", funcs.h.len())?);
    sorts.insert(Role::X1, Sort::new("x1", s3.elements().to_vec())?);
    sorts.insert(Role::X2, Sort::new("x2", s4.elements().to_vec())?);
    sorts.insert(Role::X3, Sort::range("x3", funcs.k.len())?);

    let mut tables = BTreeMap::new();
    tables.insert(
        TableName::F,
        RelTable::from_fn(TableName::F, s2, s1, |a2, a1| h_of[&(a1, a2)] as AtomId),
    );
    tables.insert(
        TableName::L,
        RelTable::from_fn(TableName::L, s1, s4, |a1, a4| k_of[&(a1, a4)] as AtomId),
    );
    // [h] sends a3 to a4; H reads it backwards.
    let h_inv: Vec<Vec<usize>> = funcs
        .h
        .iter()
        .map(|c| {
            let mut inv = vec![0; c.mapping.len()];
            for (a3, &a4) in c.mapping.iter().enumerate() {
                inv[a4] = a3;
            }
            inv
        })
        .collect();
    tables.insert(
        TableName::H,
        RelTable::from_fn(TableName::H, &sorts[&Role::A3], s4, |h, a4| {
            s3.id(h_inv[h as usize][s4.index_of(a4).expect("sort element")])
        }),
    );
    tables.insert(
        TableName::K,
        RelTable::from_fn(TableName::K, s2, &sorts[&Role::X3], |a2, k| {
            s3.id(funcs.k[k as usize].mapping[s2.index_of(a2).expect("sort element")])
        }),
    );

    let least = *q
        .tuples
        .iter()
        .next()
        .ok_or_else(|| QuadError::PreconditionFailure("empty relation".into()))?;
    let mut designated: BTreeMap<Role, AtomId> = [
        (Role::A1, least[0]),
        (Role::A2, least[1]),
        (Role::A3, h_of[&(least[0], least[1])] as AtomId),
        (Role::X1, least[2]),
        (Role::X2, least[3]),
        (Role::X3, k_of[&(least[0], least[3])] as AtomId),
    ]
    .into_iter()
    .collect();

    if let Some(s_classes) = &funcs.s {
        let s_of = class_index(s_classes);
        // (a2, a4) lies on the graph of exactly one class.
        let mut through: HashMap<(AtomId, AtomId), usize> = HashMap::new();
        for (c, class) in s_classes.iter().enumerate() {
            for (a2, &a4) in class.mapping.iter().enumerate() {
                if through.insert((s2.id(a2), s4.id(a4)), c).is_some() {
                    return Err(QuadError::AxiomFailure("iii"));
                }
            }
        }
        let x4 = Sort::range("x4", s_classes.len())?;
        // R(a1, [s]) = a3 with [s_{a1a3}] = [s].
        let mut r = BTreeSet::new();
        for (&(a1, a3), &c) in &s_of {
            r.insert((a1, c as AtomId, a3));
        }
        let mut s = BTreeSet::new();
        for (&(a2, a4), &c) in &through {
            s.insert((a2, a4, c as AtomId));
        }
        tables.insert(TableName::R, RelTable::new(TableName::R, r));
        tables.insert(TableName::S, RelTable::new(TableName::S, s));
        sorts.insert(Role::X4, x4);
        designated.insert(Role::X4, s_of[&(least[0], least[2])] as AtomId);
    }
    Ok(FunctionalInstance::new(sorts, tables, designated)?)
}

/// `Q(a1, a2, x1, x2)` iff `H(F(a2,a1), x2) = x1`. Abelian data is claimed
/// when `R, S` are present and satisfy the abelian equation.
pub fn config_to_quad(inst: &FunctionalInstance) -> Result<QuadRelation, QuadError> {
    let report = inst.validate_tables();
    if let Some((name, defect)) = report.first_failure {
        return Err(QuadError::PreconditionFailure(format!(
            "table {name}: {defect}"
        )));
    }
    let eq = inst.check_master_equation()?;
    if !eq.holds {
        return Err(QuadError::PreconditionFailure(
            "master equation fails".into(),
        ));
    }
    let abelian_claimed = inst.has_abelian_tables() && inst.check_abelian_equation()?.holds;
    let f = inst.dense(TableName::F)?;
    let h = inst.dense(TableName::H)?;
    let (sa1, sa2, sx1, sx2) = (
        inst.sort(Role::A1),
        inst.sort(Role::A2),
        inst.sort(Role::X1),
        inst.sort(Role::X2),
    );
    let mut tuples = BTreeSet::new();
    for a2 in 0..sa2.len() {
        for a1 in 0..sa1.len() {
            let g = f.apply(a2, a1);
            for x2 in 0..sx2.len() {
                tuples.insert([sa1.id(a1), sa2.id(a2), sx1.id(h.apply(g, x2)), sx2.id(x2)]);
            }
        }
    }
    let rename = |s: &Sort, n: &str| Sort::new(n, s.elements().to_vec());
    QuadRelation::new(
        [
            rename(sa1, "a1")?,
            rename(sa2, "a2")?,
            rename(sx1, "a3")?,
            rename(sx2, "a4")?,
        ],
        tuples,
        abelian_claimed,
    )
}
