//! Dimension calculus over a prime field.
//!
//! Each named point is a tuple of vectors in `F_p^n`; the closure of a set of
//! points is the linear span of all their vectors, so `dim(a/B)` is the rank
//! gained by adding `a` to `B`.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("invalid vector {vector:?}: {reason}")]
    InvalidVector { vector: Vec<u64>, reason: String },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn check_vector(p: u64, ambient: usize, v: &[u64]) -> Result<(), MatroidError> {
    if v.len() != ambient {
        return Err(MatroidError::InvalidVector {
            vector: v.to_vec(),
            reason: format!(
                "length {} differs from ambient dimension {ambient}",
                v.len()
            ),
        });
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= p) {
        return Err(MatroidError::InvalidVector {
            vector: v.to_vec(),
            reason: format!("entry {bad} outside [0, {p})"),
        });
    }
    Ok(())
}

/// Rank of the span of `vectors` in `F_p^ambient`, by row reduction mod `p`.
pub fn rank_mod_p(p: u64, ambient: usize, vectors: &[Vec<u64>]) -> Result<usize, MatroidError> {
    if !is_prime(p) {
        return Err(MatroidError::NotPrime(p));
    }
    for v in vectors {
        check_vector(p, ambient, v)?;
    }
    let mut rows: Vec<Vec<u64>> = vectors.to_vec();
    let mut rank = 0;
    for col in 0..ambient {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// Named points over `F_p^ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMatroid {
    p: u64,
    ambient: usize,
    points: BTreeMap<String, Vec<Vec<u64>>>,
}

impl LinearMatroid {
    pub fn new(p: u64, ambient: usize) -> Result<Self, MatroidError> {
        if !is_prime(p) {
            return Err(MatroidError::NotPrime(p));
        }
        Ok(Self {
            p,
            ambient,
            points: BTreeMap::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &BTreeMap<String, Vec<Vec<u64>>> {
        &self.points
    }

    pub fn contains(&self, label: &str) -> bool {
        self.points.contains_key(label)
    }

    pub fn insert_point(
        &mut self,
        label: impl Into<String>,
        vectors: Vec<Vec<u64>>,
    ) -> Result<(), MatroidError> {
        let label = label.into();
        if self.points.contains_key(&label) {
            return Err(MatroidError::DuplicateLabel(label));
        }
        for v in &vectors {
            check_vector(self.p, self.ambient, v)?;
        }
        self.points.insert(label, vectors);
        Ok(())
    }

    pub fn with_point(
        mut self,
        label: impl Into<String>,
        vectors: Vec<Vec<u64>>,
    ) -> Result<Self, MatroidError> {
        self.insert_point(label, vectors)?;
        Ok(self)
    }

    pub fn rank(&self, vectors: &[Vec<u64>]) -> Result<usize, MatroidError> {
        rank_mod_p(self.p, self.ambient, vectors)
    }

    fn collect<'a, I>(&self, labels: I, out: &mut Vec<Vec<u64>>) -> Result<(), MatroidError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        for label in labels {
            let vs = self
                .points
                .get(label)
                .ok_or_else(|| MatroidError::UnknownPoint(label.to_string()))?;
            out.extend(vs.iter().cloned());
        }
        Ok(())
    }

    /// Rank of the span of every vector carried by `labels`.
    pub fn rank_of(&self, labels: &[&str]) -> Result<usize, MatroidError> {
        let mut vs = Vec::new();
        self.collect(labels.iter().copied(), &mut vs)?;
        self.rank(&vs)
    }

    /// `dim(tuple / base)` where the tuple is the concatenation of several points.
    pub fn dim(&self, tuple: &[&str], base: &[&str]) -> Result<usize, MatroidError> {
        let mut vs = Vec::new();
        self.collect(base.iter().copied(), &mut vs)?;
        let below = self.rank(&vs)?;
        self.collect(tuple.iter().copied(), &mut vs)?;
        Ok(self.rank(&vs)? - below)
    }

    pub fn dim_over(&self, label: &str, base: &[&str]) -> Result<usize, MatroidError> {
        self.dim(&[label], base)
    }

    /// `A` is independent from `C` over `base` iff adding `C` to the base
    /// does not lower the dimension of `A`.
    pub fn independent(&self, a: &[&str], c: &[&str], base: &[&str]) -> Result<bool, MatroidError> {
        let extended: Vec<&str> = base.iter().chain(c.iter()).copied().collect();
        Ok(self.dim(a, &extended)? == self.dim(a, base)?)
    }

    /// Same span after adjoining either point to `base`.
    pub fn interdefinable(&self, a: &str, b: &str, base: &[&str]) -> Result<bool, MatroidError> {
        let with_a: Vec<&str> = base.iter().copied().chain([a]).collect();
        let with_b: Vec<&str> = base.iter().copied().chain([b]).collect();
        let with_both: Vec<&str> = base.iter().copied().chain([a, b]).collect();
        let ra = self.rank_of(&with_a)?;
        let rb = self.rank_of(&with_b)?;
        let rab = self.rank_of(&with_both)?;
        Ok(ra == rab && rb == rab)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vec<u64> {
        let mut v = vec![0; 3];
        v[i] = 1;
        v
    }

    fn add(a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % 5).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_p(5, 3, &[]).unwrap(), 0);
        assert_eq!(rank_mod_p(5, 3, &[e(0), e(1)]).unwrap(), 2);
        assert_eq!(
            rank_mod_p(5, 3, &[e(0), add(&e(0), &e(1)), e(1)]).unwrap(),
            2
        );
    }

    #[test]
    fn rank_rejects_bad_vectors() {
        assert!(matches!(
            rank_mod_p(5, 3, &[vec![1, 0]]),
            Err(MatroidError::InvalidVector { .. })
        ));
        assert!(matches!(
            rank_mod_p(5, 3, &[vec![5, 0, 0]]),
            Err(MatroidError::InvalidVector { .. })
        ));
        assert_eq!(rank_mod_p(4, 3, &[]), Err(MatroidError::NotPrime(4)));
    }

    #[test]
    fn rank_in_characteristic_two() {
        // e1+e2, e2+e3, e1+e3 are dependent over F_2 only.
        let vs = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_mod_p(2, 3, &vs).unwrap(), 2);
        assert_eq!(rank_mod_p(3, 3, &vs).unwrap(), 3);
    }

    fn sample() -> LinearMatroid {
        LinearMatroid::new(5, 3)
            .unwrap()
            .with_point("a1", vec![e(0)])
            .unwrap()
            .with_point("a2", vec![e(1)])
            .unwrap()
            .with_point("a3", vec![add(&e(0), &e(1))])
            .unwrap()
            .with_point("x2", vec![e(2)])
            .unwrap()
            .with_point("b", vec![vec![2, 0, 0]])
            .unwrap()
            .with_point("zero", vec![vec![0, 0, 0]])
            .unwrap()
    }

    #[test]
    fn dim_over_examples() {
        let m = sample();
        assert_eq!(m.dim_over("a1", &[]).unwrap(), 1);
        assert_eq!(m.dim_over("a3", &["a1", "a2"]).unwrap(), 0);
        assert_eq!(m.dim_over("x2", &["a1", "a2"]).unwrap(), 1);
        assert_eq!(m.dim_over("zero", &[]).unwrap(), 0);
        assert_eq!(
            m.dim_over("nope", &[]),
            Err(MatroidError::UnknownPoint("nope".into()))
        );
    }

    #[test]
    fn independence_examples() {
        let m = sample();
        assert!(m.independent(&["a1"], &["a2"], &[]).unwrap());
        assert!(!m.independent(&["a1"], &["a1"], &[]).unwrap());
        assert!(!m.independent(&["a3"], &["a1", "a2"], &[]).unwrap());
        assert!(m.independent(&["zero"], &["a1"], &[]).unwrap());
    }

    #[test]
    fn interdefinable_examples() {
        let m = sample();
        assert!(m.interdefinable("a1", "b", &[]).unwrap());
        assert!(!m.interdefinable("a1", "a2", &[]).unwrap());
        // a1 and a3 = e1+e2 agree over a2 = e2.
        assert!(m.interdefinable("a1", "a3", &["a2"]).unwrap());
    }

    #[test]
    fn duplicate_label_rejected() {
        let mut m = sample();
        assert_eq!(
            m.insert_point("a1", vec![e(0)]),
            Err(MatroidError::DuplicateLabel("a1".into()))
        );
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert_eq!(LinearMatroid::new(1, 3), Err(MatroidError::NotPrime(1)));
        assert_eq!(LinearMatroid::new(9, 3), Err(MatroidError::NotPrime(9)));
    }
}
