//! Rank clauses of an `(m,k)` homogeneous-space configuration and of its
//! abelian extension by a seventh node `x4`.
//!
//! Clauses are checked against the declared `m` and `k`; nothing is inferred.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{LinearMatroid, MatroidError};
use crate::role::Role;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("role {0} is not bound to a point")]
    IncompleteConfig(Role),
    #[error("declared m={m} is smaller than k={k}")]
    DimensionOrder { m: usize, k: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Six (or seven) roles bound to points of a matroid, plus the base and the
/// declared dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigPoints {
    pub matroid: LinearMatroid,
    pub roles: BTreeMap<Role, String>,
    pub base: Vec<String>,
    pub m: usize,
    pub k: usize,
}

/// One measured rank against its expected value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCheck {
    pub expr: String,
    pub expected: usize,
    pub measured: usize,
}

impl RankCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.measured
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<RankCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub passed: bool,
    pub clauses: Vec<ClauseResult>,
    /// First violated clause and the offending check.
    pub first_failure: Option<(String, RankCheck)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<ClauseReport>>,
}

impl ClauseReport {
    fn from_clauses(clauses: Vec<ClauseResult>, inner: Option<ClauseReport>) -> Self {
        let first_failure = clauses.iter().find_map(|c| {
            c.checks
                .iter()
                .find(|r| !r.passed())
                .map(|r| (c.id.clone(), r.clone()))
        });
        let inner_ok = inner.as_ref().is_none_or(|r| r.passed);
        let first_failure = first_failure.or_else(|| {
            inner
                .as_ref()
                .and_then(|r| r.first_failure.clone())
                .map(|(id, r)| (format!("permuted.{id}"), r))
        });
        ClauseReport {
            passed: clauses.iter().all(|c| c.passed) && inner_ok,
            clauses,
            first_failure,
            inner: inner.map(Box::new),
        }
    }

    pub fn clause(&self, id: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

struct Checker<'a> {
    matroid: &'a LinearMatroid,
    base: Vec<&'a str>,
}

impl Checker<'_> {
    fn dim(
        &self,
        tuple: &[(&str, &str)],
        over: &[(&str, &str)],
        expected: usize,
    ) -> Result<RankCheck, MatroidError> {
        let labels: Vec<&str> = tuple.iter().map(|t| t.1).collect();
        let mut base = self.base.clone();
        base.extend(over.iter().map(|t| t.1));
        let measured = self.matroid.dim(&labels, &base)?;
        let names: Vec<&str> = tuple.iter().map(|t| t.0).collect();
        let mut over_names: Vec<&str> = over.iter().map(|t| t.0).collect();
        over_names.push("A");
        Ok(RankCheck {
            expr: format!("dim({}/{})", names.join(","), over_names.join("")),
            expected,
            measured,
        })
    }
}

fn clause(id: &str, checks: Vec<RankCheck>) -> ClauseResult {
    ClauseResult {
        id: id.to_string(),
        passed: checks.iter().all(RankCheck::passed),
        checks,
    }
}

/// `points` are `(display name, matroid label)` pairs in the order
/// `a1 a2 a3 x1 x2 x3`.
fn mk_clauses(
    checker: &Checker<'_>,
    points: [(&str, &str); 6],
    m: usize,
    k: usize,
) -> Result<Vec<ClauseResult>, MatroidError> {
    let a = [points[0], points[1], points[2]];
    let x = [points[3], points[4], points[5]];
    let pairs = [(0, 1), (0, 2), (1, 2)];

    let mut c1 = Vec::new();
    for p in a {
        c1.push(checker.dim(&[p], &[], m)?);
    }
    for p in x {
        c1.push(checker.dim(&[p], &[], k)?);
    }

    let mut c2 = vec![checker.dim(&x, &[], 3 * k)?];
    for &(i, j) in &pairs {
        c2.push(checker.dim(&[a[i], a[j]], &[], 2 * m)?);
    }
    c2.push(checker.dim(&a, &[], 2 * m)?);

    // (x_i, x_j / a_t) with {i, j, t} = {1, 2, 3}
    let mut c3 = Vec::new();
    for &(i, j) in &pairs {
        let t = 3 - i - j;
        c3.push(checker.dim(&[x[i], x[j]], &[a[t]], k)?);
    }

    let mut c4 = Vec::new();
    for &(i, j) in &pairs {
        for xt in x {
            c4.push(checker.dim(&[a[i], a[j], xt], &[], 2 * m + k)?);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                c4.push(checker.dim(&[a[i], x[i], x[j]], &[], m + 2 * k)?);
            }
        }
    }

    // Co-linear triples: every a_i is closed over the other two; on the
    // point lines x_i and x_j are closed over each other and a_t.
    let mut col = Vec::new();
    for i in 0..3 {
        let others: Vec<_> = (0..3).filter(|&j| j != i).map(|j| a[j]).collect();
        col.push(checker.dim(&[a[i]], &others, 0)?);
    }
    for (xi, xj, at) in [(x[1], x[2], a[0]), (x[2], x[0], a[1]), (x[1], x[0], a[2])] {
        col.push(checker.dim(&[xi], &[xj, at], 0)?);
        col.push(checker.dim(&[xj], &[xi, at], 0)?);
    }

    Ok(vec![
        clause("i", c1),
        clause("ii", c2),
        clause("iii", c3),
        clause("iv", c4),
        clause("colinear", col),
    ])
}

impl ConfigPoints {
    pub fn new(
        matroid: LinearMatroid,
        roles: BTreeMap<Role, String>,
        base: Vec<String>,
        m: usize,
        k: usize,
    ) -> Result<Self, ConfigError> {
        if m < k {
            return Err(ConfigError::DimensionOrder { m, k });
        }
        for label in roles.values().chain(base.iter()) {
            if !matroid.contains(label) {
                return Err(MatroidError::UnknownPoint(label.clone()).into());
            }
        }
        Ok(Self {
            matroid,
            roles,
            base,
            m,
            k,
        })
    }

    fn label(&self, role: Role) -> Result<&str, ConfigError> {
        self.roles
            .get(&role)
            .map(String::as_str)
            .ok_or(ConfigError::IncompleteConfig(role))
    }

    fn checker(&self) -> Checker<'_> {
        Checker {
            matroid: &self.matroid,
            base: self.base.iter().map(String::as_str).collect(),
        }
    }

    fn named(&self, roles: [Role; 6]) -> Result<[(&'static str, &str); 6], ConfigError> {
        let mut out = [("", ""); 6];
        for (slot, role) in out.iter_mut().zip(roles) {
            *slot = (role.as_str(), self.label(role)?);
        }
        Ok(out)
    }

    /// Clauses (i)-(iv) plus co-linear closure for the six basic roles.
    pub fn validate_mk(&self) -> Result<ClauseReport, ConfigError> {
        let points = self.named(Role::BASIC)?;
        let clauses = mk_clauses(&self.checker(), points, self.m, self.k)?;
        Ok(ClauseReport::from_clauses(clauses, None))
    }

    /// The seventh node: `dim(x4/A) = k`, `x1,x4` inter-definable over `a1`,
    /// `x2,x4` inter-definable over `a2`, and the six points
    /// `a1 a2 a3 | x2 x1 x4` (in the roles `x1 x2 x3`) again form a
    /// configuration.
    pub fn validate_abelian_node(&self) -> Result<ClauseReport, ConfigError> {
        let x4 = self.label(Role::X4)?;
        let x1 = self.label(Role::X1)?;
        let x2 = self.label(Role::X2)?;
        let a1 = self.label(Role::A1)?;
        let a2 = self.label(Role::A2)?;
        let checker = self.checker();

        let node = vec![checker.dim(&[("x4", x4)], &[], self.k)?];
        let mut inter = Vec::new();
        for (p, q, over) in [
            (("x1", x1), ("x4", x4), ("a1", a1)),
            (("x2", x2), ("x4", x4), ("a2", a2)),
        ] {
            inter.push(checker.dim(&[p], &[q, over], 0)?);
            inter.push(checker.dim(&[q], &[p, over], 0)?);
        }

        let permuted = self.named([Role::A1, Role::A2, Role::A3, Role::X2, Role::X1, Role::X4])?;
        let inner = mk_clauses(&checker, permuted, self.m, self.k)?;
        let inner = ClauseReport::from_clauses(inner, None);
        Ok(ClauseReport::from_clauses(
            vec![clause("x4_dim", node), clause("x4_interdefinable", inter)],
            Some(inner),
        ))
    }

    /// Rebinds roles through `map` (old role -> new role).
    pub fn relabeled(&self, map: &BTreeMap<Role, Role>) -> ConfigPoints {
        let roles = self
            .roles
            .iter()
            .map(|(r, l)| (*map.get(r).unwrap_or(r), l.clone()))
            .collect();
        ConfigPoints {
            roles,
            ..self.clone()
        }
    }
}
