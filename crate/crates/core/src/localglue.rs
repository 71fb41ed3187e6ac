//! Completing an interval chunk of `(R, +)` to a group by wrap-around.
//!
//! On `[-a, a)` the operation `x ⊕ y` is `x + y`, shifted by `∓2a` when the
//! sum leaves the interval. Everything is exact rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gpgen::{builtin_group, GroupSpec};
use crate::group::{FiniteGroupTable, GroupTableData};
use crate::groupiso::is_isomorphic;
use crate::sweep::{self, Strategy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlueError {
    #[error("half-width {0} is not positive")]
    NonPositive(ExactRational),
    #[error("{x} is outside [-{a}, {a})")]
    OutOfDomain { x: String, a: String },
    #[error("grid denominator must be at least 2, got {0}")]
    InvalidGrid(u64),
    #[error("`{0}` is not a rational of the form n or n/d")]
    Parse(String),
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        Self(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 1)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl std::ops::Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl std::ops::Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = GlueError;

    /// Accepts `n` or `n/d` with integer `n`, `d`; decimals are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GlueError::Parse(s.to_string());
        let int = |t: &str| -> Result<BigInt, GlueError> {
            let t = t.trim();
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            t.parse().map_err(|_| err())
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (int(n)?, int(d)?),
            None => (int(s)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        Ok(Self(BigRational::new(num, den)))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The symmetric chunk `(-a, a)` where `x + y` is defined for `|x + y| < a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalChunk {
    half_width: ExactRational,
}

impl IntervalChunk {
    pub fn new(half_width: ExactRational) -> Result<Self, GlueError> {
        if !half_width.is_positive() {
            return Err(GlueError::NonPositive(half_width));
        }
        Ok(Self { half_width })
    }

    pub fn half_width(&self) -> &ExactRational {
        &self.half_width
    }

    /// The partial sum, when it stays inside the chunk.
    pub fn add(&self, x: &ExactRational, y: &ExactRational) -> Option<ExactRational> {
        let s = x + y;
        (s.abs() < self.half_width).then_some(s)
    }
}

/// `a_i / 2`, so that `(-a_j, a_j) + (-a_j, a_j)` fits in `(-a_i, a_i)`.
pub fn select_inner(a_i: &ExactRational) -> Result<ExactRational, GlueError> {
    let chunk = IntervalChunk::new(a_i.clone())?;
    Ok(ExactRational(&chunk.half_width.0 / BigInt::from(2)))
}

fn in_domain(x: &ExactRational, a: &ExactRational) -> bool {
    x >= &-a && x < a
}

pub fn oplus(
    x: &ExactRational,
    y: &ExactRational,
    a_j: &ExactRational,
) -> Result<ExactRational, GlueError> {
    if !a_j.is_positive() {
        return Err(GlueError::NonPositive(a_j.clone()));
    }
    for v in [x, y] {
        if !in_domain(v, a_j) {
            return Err(GlueError::OutOfDomain {
                x: v.to_string(),
                a: a_j.to_string(),
            });
        }
    }
    Ok(wrap(x, y, a_j))
}

fn wrap(x: &ExactRational, y: &ExactRational, a: &ExactRational) -> ExactRational {
    let s = x + y;
    let two_a = a + a;
    if &s >= a {
        &s - &two_a
    } else if s < -a {
        &s + &two_a
    } else {
        s
    }
}

/// Grid points `k / grid` in `[-a, a)`, ascending.
pub fn grid_points(a: &ExactRational, grid: u64) -> Result<Vec<ExactRational>, GlueError> {
    if grid < 2 {
        return Err(GlueError::InvalidGrid(grid));
    }
    if !a.is_positive() {
        return Err(GlueError::NonPositive(a.clone()));
    }
    let g = BigRational::from_integer(BigInt::from(grid));
    let lo = (-&a.0 * &g).ceil().to_integer();
    let hi = (&a.0 * &g).ceil().to_integer();
    let mut out = Vec::new();
    let mut k = lo;
    while k < hi {
        out.push(ExactRational(BigRational::new(
            k.clone(),
            BigInt::from(grid),
        )));
        k += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomSweep {
    pub holds: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ExactRational>>,
}

impl AxiomSweep {
    fn from(checked: usize, witness: Option<Vec<ExactRational>>) -> Self {
        Self {
            holds: witness.is_none(),
            checked: checked as u64,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub a: ExactRational,
    pub grid: u64,
    pub points: usize,
    /// `2a · grid` is an integer, so the grid is closed under `⊕`.
    pub closed: bool,
    pub range: AxiomSweep,
    pub identity: AxiomSweep,
    pub inverse: AxiomSweep,
    pub associativity: AxiomSweep,
    /// Whether the `⊕` table is isomorphic to the cyclic group of the same
    /// order; present only for closed grids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<bool>,
    #[serde(skip)]
    pub table: Option<FiniteGroupTable>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.range.holds
            && self.identity.holds
            && self.inverse.holds
            && self.associativity.holds
            && self.cyclic != Some(false)
    }
}

pub fn verify_group(a_j: &ExactRational, grid: u64) -> Result<GroupReport, GlueError> {
    verify_group_with(a_j, grid, Strategy::default())
}

/// Values the sweeps run on: rationals, or their numerators over a common
/// denominator when those fit in a machine word.
trait Coord: Clone + Ord + Send + Sync {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn zero() -> Self;
}

impl Coord for i64 {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn zero() -> Self {
        0
    }
}

impl Coord for ExactRational {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn zero() -> Self {
        ExactRational::zero()
    }
}

struct Grid<T> {
    pts: Vec<T>,
    a: T,
    two_a: T,
}

impl<T: Coord> Grid<T> {
    fn in_domain(&self, x: &T) -> bool {
        x >= &self.a.negated() && x < &self.a
    }

    fn wrap(&self, x: &T, y: &T) -> T {
        let s = x.plus(y);
        if s >= self.a {
            s.minus(&self.two_a)
        } else if s < self.a.negated() {
            s.plus(&self.two_a)
        } else {
            s
        }
    }

    fn sweeps(&self, strategy: Strategy) -> [(usize, Option<Vec<usize>>); 4] {
        let pts = &self.pts;
        let n = pts.len();
        let zero = T::zero();
        let range = sweep::find_first(strategy, n * n, |i| {
            (!self.in_domain(&self.wrap(&pts[i / n], &pts[i % n]))).then(|| vec![i / n, i % n])
        });
        let identity = (0..n)
            .find(|&i| self.wrap(&zero, &pts[i]) != pts[i] || self.wrap(&pts[i], &zero) != pts[i])
            .map(|i| vec![i]);
        // The inverse of x is -x, except that -a is its own inverse.
        let inverse = (0..n)
            .find(|&i| {
                let x = &pts[i];
                let inv = if *x == self.a.negated() {
                    x.clone()
                } else {
                    x.negated()
                };
                !self.in_domain(&inv) || self.wrap(x, &inv) != zero
            })
            .map(|i| vec![i]);
        let associativity = sweep::find_first(strategy, n * n, |i| {
            let (x, y) = (&pts[i / n], &pts[i % n]);
            let xy = self.wrap(x, y);
            (0..n).find_map(|k| {
                let z = &pts[k];
                (self.wrap(&xy, z) != self.wrap(x, &self.wrap(y, z))).then(|| vec![i / n, i % n, k])
            })
        });
        [
            (n * n, range),
            (n, identity),
            (n, inverse),
            (n * n * n, associativity),
        ]
    }

    fn table(&self) -> Option<Vec<Vec<usize>>> {
        let index = |v: &T| self.pts.binary_search(v).ok();
        self.pts
            .iter()
            .map(|x| self.pts.iter().map(|y| index(&self.wrap(x, y))).collect())
            .collect()
    }

    fn embedding(&self) -> (usize, Option<Vec<usize>>) {
        let n = self.pts.len();
        let mut checked = 0;
        let mut witness = None;
        for i in 0..n {
            for j in 0..n {
                let sum = self.pts[i].plus(&self.pts[j]);
                let inside = sum < self.a && sum > self.a.negated();
                if inside {
                    checked += 1;
                    if witness.is_none() && self.wrap(&self.pts[i], &self.pts[j]) != sum {
                        witness = Some(vec![i, j]);
                    }
                }
            }
        }
        (checked, witness)
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = std::mem::replace(&mut y, r);
    }
    a / x * b
}

enum AnyGrid {
    Word(Grid<i64>),
    Exact(Grid<ExactRational>),
}

/// Rescales to integer numerators when `4a` times the common denominator
/// stays well inside `i64`.
fn build_grid(a: &ExactRational, pts: &[ExactRational]) -> AnyGrid {
    let den = pts
        .iter()
        .chain(std::iter::once(a))
        .fold(BigInt::one(), |d, x| lcm(&d, x.0.denom()));
    let scale = |x: &ExactRational| -> Option<i64> {
        let v = (&x.0 * BigRational::from_integer(den.clone())).to_integer();
        i64::try_from(v).ok().filter(|v| v.unsigned_abs() < 1 << 60)
    };
    let word = scale(a).and_then(|sa| {
        let pts = pts.iter().map(scale).collect::<Option<Vec<_>>>()?;
        Some(Grid {
            pts,
            a: sa,
            two_a: 2 * sa,
        })
    });
    match word {
        Some(g) => AnyGrid::Word(g),
        None => AnyGrid::Exact(Grid {
            pts: pts.to_vec(),
            a: a.clone(),
            two_a: a + a,
        }),
    }
}

pub fn verify_group_with(
    a_j: &ExactRational,
    grid: u64,
    strategy: Strategy,
) -> Result<GroupReport, GlueError> {
    let pts = grid_points(a_j, grid)?;
    let n = pts.len();
    let closed = (&(a_j + a_j) * &ExactRational::integer(grid as i64)).is_integer();
    let g = build_grid(a_j, &pts);
    let (sweeps, table) = match &g {
        AnyGrid::Word(g) => (g.sweeps(strategy), closed.then(|| g.table()).flatten()),
        AnyGrid::Exact(g) => (g.sweeps(strategy), closed.then(|| g.table()).flatten()),
    };
    let points = |w: Option<Vec<usize>>| w.map(|w| w.into_iter().map(|i| pts[i].clone()).collect());
    let [range, identity, inverse, associativity] =
        sweeps.map(|(checked, w)| AxiomSweep::from(checked, points(w)));

    let table = table.and_then(|table| {
        FiniteGroupTable::new(GroupTableData {
            elements: pts.iter().map(ToString::to_string).collect(),
            table,
            identity: pts.binary_search(&ExactRational::zero()).ok()?,
        })
        .ok()
    });
    let cyclic = table.as_ref().map(|t| {
        builtin_group(&GroupSpec::Cyclic(t.order()))
            .map(|c| is_isomorphic(t, &c))
            .unwrap_or(false)
    });
    Ok(GroupReport {
        a: a_j.clone(),
        grid,
        points: n,
        closed,
        range,
        identity,
        inverse,
        associativity,
        cyclic,
        table,
    })
}

/// Sums inside the chunk, `|x + y| < a`, are left untouched by `⊕`.
pub fn verify_embedding(a_j: &ExactRational, grid: u64) -> Result<AxiomSweep, GlueError> {
    let pts = grid_points(a_j, grid)?;
    IntervalChunk::new(a_j.clone())?;
    let (checked, witness) = match build_grid(a_j, &pts) {
        AnyGrid::Word(g) => g.embedding(),
        AnyGrid::Exact(g) => g.embedding(),
    };
    Ok(AxiomSweep::from(
        checked,
        witness.map(|w| w.into_iter().map(|i| pts[i].clone()).collect()),
    ))
}
