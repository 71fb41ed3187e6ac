//! JSON file formats. Every file is an object whose `type` field selects the
//! body; field names are part of the format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configuration::{ConfigError, ConfigPoints};
use crate::finstance::{AtomId, FunctionalInstance, InstanceError, RelTable, Sort, TableName};
use crate::group::GroupTableData;
use crate::matroid::{LinearMatroid, MatroidError};
use crate::quadrangle::{Quad, QuadError, QuadRelation};
use crate::role::Role;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Quadrangle(#[from] QuadError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidConfigFile {
    pub p: u64,
    pub ambient: usize,
    pub points: BTreeMap<String, Vec<Vec<u64>>>,
    pub roles: BTreeMap<Role, String>,
    #[serde(default)]
    pub base: Vec<String>,
    pub m: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalInstanceFile {
    pub sorts: BTreeMap<Role, Vec<AtomId>>,
    pub tables: BTreeMap<TableName, Vec<[AtomId; 3]>>,
    #[serde(default)]
    pub designated: BTreeMap<Role, AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrangleFile {
    pub sorts: [Vec<AtomId>; 4],
    pub tuples: Vec<Quad>,
    #[serde(default)]
    pub abelian_claimed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceFile {
    MatroidConfig(MatroidConfigFile),
    FunctionalInstance(FunctionalInstanceFile),
    Quadrangle(QuadrangleFile),
    Group(GroupTableData),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("file types serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::MatroidConfig(_) => "matroid_config",
            InstanceFile::FunctionalInstance(_) => "functional_instance",
            InstanceFile::Quadrangle(_) => "quadrangle",
            InstanceFile::Group(_) => "group",
        }
    }
}

impl MatroidConfigFile {
    pub fn load(&self) -> Result<ConfigPoints, SchemaError> {
        let mut matroid = LinearMatroid::new(self.p, self.ambient)?;
        for (label, vectors) in &self.points {
            matroid.insert_point(label.clone(), vectors.clone())?;
        }
        Ok(ConfigPoints::new(
            matroid,
            self.roles.clone(),
            self.base.clone(),
            self.m,
            self.k,
        )?)
    }
}

impl From<&ConfigPoints> for MatroidConfigFile {
    fn from(c: &ConfigPoints) -> Self {
        Self {
            p: c.matroid.p(),
            ambient: c.matroid.ambient(),
            points: c.matroid.points().clone(),
            roles: c.roles.clone(),
            base: c.base.clone(),
            m: c.m,
            k: c.k,
        }
    }
}

impl FunctionalInstanceFile {
    pub fn load(&self) -> Result<FunctionalInstance, SchemaError> {
        let sorts = self
            .sorts
            .iter()
            .map(|(&r, ids)| Ok((r, Sort::new(r.as_str(), ids.clone())?)))
            .collect::<Result<BTreeMap<_, _>, InstanceError>>()?;
        let tables = self
            .tables
            .iter()
            .map(|(&t, rows)| (t, RelTable::new(t, rows.iter().map(|&[u, v, w]| (u, v, w)))))
            .collect();
        Ok(FunctionalInstance::new(
            sorts,
            tables,
            self.designated.clone(),
        )?)
    }
}

impl From<&FunctionalInstance> for FunctionalInstanceFile {
    fn from(inst: &FunctionalInstance) -> Self {
        Self {
            sorts: inst
                .sorts()
                .iter()
                .map(|(&r, s)| (r, s.elements().to_vec()))
                .collect(),
            tables: inst
                .tables()
                .iter()
                .map(|(&t, rel)| (t, rel.triples.iter().map(|&(u, v, w)| [u, v, w]).collect()))
                .collect(),
            designated: inst.designated().clone(),
        }
    }
}

impl QuadrangleFile {
    pub fn load(&self) -> Result<QuadRelation, SchemaError> {
        let names = ["a1", "a2", "a3", "a4"];
        let mut sorts = Vec::with_capacity(4);
        for (name, ids) in names.iter().zip(&self.sorts) {
            sorts.push(Sort::new(*name, ids.clone())?);
        }
        let sorts: [Sort; 4] = sorts.try_into().expect("four sorts");
        let tuples: BTreeSet<Quad> = self.tuples.iter().copied().collect();
        Ok(QuadRelation::new(sorts, tuples, self.abelian_claimed)?)
    }
}

impl From<&QuadRelation> for QuadrangleFile {
    fn from(q: &QuadRelation) -> Self {
        Self {
            sorts: std::array::from_fn(|i| q.sorts()[i].elements().to_vec()),
            tuples: q.tuples().iter().copied().collect(),
            abelian_claimed: q.abelian_claimed(),
        }
    }
}
