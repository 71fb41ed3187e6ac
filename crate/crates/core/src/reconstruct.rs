//! Recovering the group of a functional instance.
//!
//! `G` is the set of permutations `ℓ_a⁻¹ℓ_{a'}` of `Sx2`, deduplicated
//! extensionally. Closure of `𝓛, 𝓚, 𝓗` under the compositions that make
//! this a group is checked, not assumed.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::bijection::{germ_classes, Bijection, FunctionFamily, GermClass, SortMismatch};
use crate::finstance::{AtomId, Families, FunctionalInstance, InstanceError};
use crate::gpgen::{gen_configuration, Designation, GenError};
use crate::group::{ActionDefect, FiniteGroupTable, GroupAction};
use crate::role::Role;
use crate::sweep::{self, Strategy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    SortMismatch(#[from] SortMismatch),
    #[error("composition of germ classes {left} and {right} leaves the set of ℓ⁻¹ℓ' maps")]
    ClosureEscape { left: AtomId, right: AtomId },
    #[error("anchor {id} is not an element of sort {role}")]
    AnchorOutOfSort { role: Role, id: AtomId },
    #[error("instance has no designated {0} point")]
    MissingDesignated(Role),
    #[error("{0} is not an element of the reconstructed group")]
    NotInGroup(&'static str),
    #[error("designated points violate {0}")]
    DesignatedInconsistent(&'static str),
    #[error("reconstructed action: {0}")]
    Action(#[from] ActionDefect),
    #[error(transparent)]
    Generate(#[from] GenError),
}

/// Outcome of one exhaustive sweep. `witness` holds the parameters of the
/// first failing tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub holds: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<AtomId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureClause {
    pub clause: &'static str,
    pub statement: &'static str,
    #[serde(flatten)]
    pub report: SweepReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub passed: bool,
    pub clauses: Vec<ClosureClause>,
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&j| outer[j]).collect()
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn mappings(f: &FunctionFamily) -> HashSet<&[usize]> {
    f.members.iter().map(Bijection::mapping).collect()
}

/// Sweeps all `(first, second)` member pairs; `combine` returns the mapping
/// that must lie in `target`.
fn pair_sweep<C>(
    strategy: Strategy,
    first: &FunctionFamily,
    second: &FunctionFamily,
    target: &HashSet<&[usize]>,
    combine: C,
) -> SweepReport
where
    C: Fn(&[usize], &[usize]) -> Vec<usize> + Sync + Send,
{
    let n2 = second.len();
    let witness = sweep::find_first(strategy, first.len() * n2, |i| {
        let (u, v) = (i / n2, i % n2);
        let m = combine(first.member(u).mapping(), second.member(v).mapping());
        (!target.contains(m.as_slice())).then(|| vec![first.params[u], second.params[v]])
    });
    SweepReport {
        holds: witness.is_none(),
        checked: (first.len() * n2) as u64,
        witness,
    }
}

pub fn closure_check(families: &Families) -> Result<ClosureReport, SortMismatch> {
    closure_check_with(families, Strategy::default())
}

/// (i) `k∘ℓ ∈ 𝓗`; (ii) `k⁻¹∘h ∈ 𝓛`, i.e. some `ℓ` has `k∘ℓ = h`;
/// (iii) `h∘ℓ⁻¹ ∈ 𝓚`, i.e. some `k` has `k∘ℓ = h`.
pub fn closure_check_with(
    families: &Families,
    strategy: Strategy,
) -> Result<ClosureReport, SortMismatch> {
    let Families { l, k, h, .. } = families;
    if let (Some(l0), Some(k0), Some(h0)) =
        (l.members.first(), k.members.first(), h.members.first())
    {
        let kl = k0.after(l0)?;
        if (kl.domain(), kl.codomain()) != (h0.domain(), h0.codomain()) {
            return Err(SortMismatch::Compose {
                inner: h0.domain(),
                outer: kl.domain(),
            });
        }
        if kl.len() != h0.len() {
            return Err(SortMismatch::Size {
                role: h0.domain(),
                left: kl.len(),
                right: h0.len(),
            });
        }
    }
    let (ls, ks, hs) = (mappings(l), mappings(k), mappings(h));
    let clauses = vec![
        ClosureClause {
            clause: "i",
            statement: "k∘ℓ ∈ H",
            report: pair_sweep(strategy, k, l, &hs, compose),
        },
        ClosureClause {
            clause: "ii",
            statement: "k⁻¹∘h ∈ L",
            report: pair_sweep(strategy, h, k, &ls, |hm, km| compose(&invert(km), hm)),
        },
        ClosureClause {
            clause: "iii",
            statement: "h∘ℓ⁻¹ ∈ K",
            report: pair_sweep(strategy, l, h, &ks, |lm, hm| compose(hm, &invert(lm))),
        },
    ];
    Ok(ClosureReport {
        passed: clauses.iter().all(|c| c.report.holds),
        clauses,
    })
}

pub fn presentation_property(families: &Families) -> SweepReport {
    presentation_property_with(families, Strategy::default())
}

/// For all `ℓ1, ℓ2, ℓ3` some `ℓ4` has `ℓ1⁻¹ℓ2 = ℓ3⁻¹ℓ4`, i.e.
/// `ℓ3∘ℓ1⁻¹∘ℓ2 ∈ 𝓛`.
pub fn presentation_property_with(families: &Families, strategy: Strategy) -> SweepReport {
    let l = &families.l;
    let ls = mappings(l);
    let inverses: Vec<Vec<usize>> = l.members.iter().map(|m| invert(m.mapping())).collect();
    let n = l.len();
    let witness = sweep::find_first(strategy, n * n, |i| {
        let (a, b) = (i / n, i % n);
        let g = compose(&inverses[a], l.member(b).mapping());
        (0..n).find_map(|c| {
            let l4 = compose(l.member(c).mapping(), &g);
            (!ls.contains(l4.as_slice())).then(|| vec![l.params[a], l.params[b], l.params[c]])
        })
    });
    SweepReport {
        holds: witness.is_none(),
        checked: (n * n * n) as u64,
        witness,
    }
}

/// The reconstructed group with its action on `Sx2`. Element `i` of the
/// table is the germ class `classes[i]` of `ℓ_anchor⁻¹ℓ_{a'}`, whose
/// parameters are the `a'` realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub group: FiniteGroupTable,
    pub action: GroupAction,
    pub classes: Vec<GermClass<AtomId>>,
    pub anchor: AtomId,
}

impl Reconstruction {
    /// Index of the element acting on `Sx2` by `perm`.
    pub fn element(&self, perm: &[usize]) -> Option<usize> {
        self.classes.iter().position(|c| c.mapping == perm)
    }
}

pub fn build_group(
    inst: &FunctionalInstance,
    anchor: AtomId,
) -> Result<Reconstruction, ReconstructError> {
    let sa1 = inst.sort(Role::A1);
    let ai = sa1
        .index_of(anchor)
        .ok_or(ReconstructError::AnchorOutOfSort {
            role: Role::A1,
            id: anchor,
        })?;
    let l = inst.extract_families()?.l;
    let base_inv = l.member(ai).inverse();
    let perms = l
        .members
        .iter()
        .map(|m| base_inv.after(m).map(Bijection::into_mapping))
        .collect::<Result<Vec<_>, _>>()?;
    let classes = germ_classes(
        l.params
            .iter()
            .copied()
            .zip(perms.iter().map(Vec::as_slice)),
    );
    let class_perms: Vec<Vec<usize>> = classes.iter().map(|c| c.mapping.clone()).collect();
    let labels = classes
        .iter()
        .map(|c| c.representative().to_string())
        .collect();
    let group = FiniteGroupTable::from_permutations(&class_perms, labels).map_err(|e| {
        ReconstructError::ClosureEscape {
            left: classes[e.left].representative(),
            right: classes[e.right].representative(),
        }
    })?;
    let action = GroupAction::new(group.clone(), inst.sort(Role::X2).clone(), class_perms)?;
    Ok(Reconstruction {
        group,
        action,
        classes,
        anchor,
    })
}

pub fn check_transitivity(action: &GroupAction) -> bool {
    action.is_transitive()
}

pub fn ab_claim(h: &FunctionFamily) -> SweepReport {
    ab_claim_with(h, Strategy::default())
}

/// `h1 h2⁻¹ h3 = h3 h2⁻¹ h1` over all parameter triples.
pub fn ab_claim_with(h: &FunctionFamily, strategy: Strategy) -> SweepReport {
    let n = h.len();
    let inverses: Vec<Vec<usize>> = h.members.iter().map(|m| invert(m.mapping())).collect();
    let witness = sweep::find_first(strategy, n * n, |i| {
        let (a, b) = (i / n, i % n);
        let h1 = h.member(a).mapping();
        let h1_h2inv = compose(h1, &inverses[b]);
        (0..n).find_map(|c| {
            let h3 = h.member(c).mapping();
            let lhs = compose(&h1_h2inv, h3);
            let rhs = compose(&compose(h3, &inverses[b]), h1);
            (lhs != rhs).then(|| vec![h.params[a], h.params[b], h.params[c]])
        })
    });
    SweepReport {
        holds: witness.is_none(),
        checked: (n * n * n) as u64,
        witness,
    }
}

pub fn check_abelian(group: &FiniteGroupTable) -> bool {
    group.is_abelian()
}

/// The group configuration recovered from the designated points, with the
/// computed elements as table indices and points as `Sx2` indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub reconstruction: Reconstruction,
    pub g: [usize; 3],
    pub y: [usize; 3],
    pub instance: FunctionalInstance,
}

/// `g1 = ℓ_a⁻¹ℓ_{a1}`, `g2 = h_b⁻¹k_{a2}ℓ_a`, `g3 = g2g1`; `y2 = x2`,
/// `y3 = ℓ_a⁻¹(x3)`, `y1 = g3·y2 = h_b⁻¹(x1)`.
pub fn emit_g_configuration(
    inst: &FunctionalInstance,
    a: AtomId,
    b: AtomId,
) -> Result<Emission, ReconstructError> {
    let index = |role: Role, id: AtomId| {
        inst.sort(role)
            .index_of(id)
            .ok_or(ReconstructError::AnchorOutOfSort { role, id })
    };
    let ai = index(Role::A1, a)?;
    let bi = index(Role::A3, b)?;
    let point = |role: Role| -> Result<usize, ReconstructError> {
        let id = *inst
            .designated()
            .get(&role)
            .ok_or(ReconstructError::MissingDesignated(role))?;
        index(role, id)
    };
    let (a1, a2, x1, x2, x3) = (
        point(Role::A1)?,
        point(Role::A2)?,
        point(Role::X1)?,
        point(Role::X2)?,
        point(Role::X3)?,
    );

    let rc = build_group(inst, a)?;
    let fam = inst.extract_families()?;
    let la = fam.l.member(ai);
    let la_inv = la.inverse();
    let hb_inv = fam.h.member(bi).inverse();

    let g1_perm = la_inv.after(fam.l.member(a1))?.into_mapping();
    let g2_perm = hb_inv.after(&fam.k.member(a2).after(la)?)?.into_mapping();
    let g1 = rc
        .element(&g1_perm)
        .ok_or(ReconstructError::NotInGroup("g1"))?;
    let g2 = rc
        .element(&g2_perm)
        .ok_or(ReconstructError::NotInGroup("g2"))?;
    let g3 = rc.group.mul(g2, g1);

    let y2 = x2;
    let y3 = la_inv.apply(x3);
    let y1 = hb_inv.apply(x1);
    if rc.action.apply(g3, y2) != y1 {
        return Err(ReconstructError::DesignatedInconsistent("g3·y2 = y1"));
    }
    if rc.action.apply(g1, y2) != y3 {
        return Err(ReconstructError::DesignatedInconsistent("g1·y2 = y3"));
    }
    let instance = gen_configuration(
        &rc.action,
        Some(Designation {
            a1: g1,
            a2: g2,
            x2: y2,
        }),
    )?;
    Ok(Emission {
        reconstruction: rc,
        g: [g1, g2, g3],
        y: [y1, y2, y3],
        instance,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulnessReport {
    pub faithful: bool,
    pub classes: usize,
    /// `|Sa1| / classes` when every class has the same size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_size: Option<usize>,
    /// Class sizes, ascending.
    pub class_sizes: Vec<usize>,
}

/// Germ classes of `ℓ_u` over `Sa1`.
pub fn faithfulness_report(inst: &FunctionalInstance) -> Result<FaithfulnessReport, InstanceError> {
    let l = inst.extract_families()?.l;
    let classes = l.classes();
    let mut sizes: Vec<usize> = classes.iter().map(|c| c.params.len()).collect();
    sizes.sort_unstable();
    let uniform = sizes.windows(2).all(|w| w[0] == w[1]);
    Ok(FaithfulnessReport {
        faithful: sizes.iter().all(|&s| s == 1),
        classes: classes.len(),
        kernel_size: uniform.then(|| l.len() / classes.len().max(1)),
        class_sizes: sizes,
    })
}

/// Germ-class count of each family, keyed by family name.
pub fn class_counts(families: &Families) -> HashMap<&'static str, usize> {
    [
        Some(&families.l),
        Some(&families.k),
        Some(&families.h),
        families.r.as_ref(),
        families.s.as_ref(),
    ]
    .into_iter()
    .flatten()
    .map(|f| (f.name, f.classes().len()))
    .collect()
}
