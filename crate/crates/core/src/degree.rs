//! Degrees in `ℕ^k` and degree differences in `ℤ^k`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// An element of `ℕ^k`.
///
/// `Ord` is the lexicographic order, used only for deterministic sorting.
/// The componentwise partial order is [`Degree::le`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree(coords)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    pub fn ones(k: usize) -> Self {
        Degree(vec![1; k])
    }

    /// `ε_i` (0-based `i`).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        Degree(v)
    }

    /// `n·(1,…,1)`.
    pub fn uniform(k: usize, n: u32) -> Self {
        Degree(vec![n; k])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Every coordinate is at least one.
    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, t: u32) -> Degree {
        Degree(self.0.iter().map(|a| a * t).collect())
    }

    /// `self − other` when `other ≤ self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if other.le(self) {
            Some(Degree(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// `self − other` as an element of `ℤ^k`.
    pub fn diff(&self, other: &Degree) -> Offset {
        Offset(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect(),
        )
    }

    /// The smallest `t` with `t·self ≥ target`. `self` must be strictly positive.
    pub fn multiple_covering(&self, target: &Degree) -> u32 {
        debug_assert!(self.is_strictly_positive());
        self.0
            .iter()
            .zip(&target.0)
            .map(|(&p, &n)| n.div_ceil(p))
            .max()
            .unwrap_or(0)
    }

    /// All degrees `n` with `0 ≤ n ≤ self`, ordered by total degree and then
    /// lexicographically.
    pub fn all_below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::with_capacity(self.rank())];
        for &b in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
            for prefix in &out {
                for c in 0..=b {
                    let mut v: Vec<u32> = prefix.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        let mut degs: Vec<Degree> = out.into_iter().map(Degree).collect();
        degs.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        degs
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An element of `ℤ^k`: a difference of two degrees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Offset(Vec<i64>);

impl Offset {
    pub fn new(coords: Vec<i64>) -> Self {
        Offset(coords)
    }

    pub fn zero(k: usize) -> Self {
        Offset(vec![0; k])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Positive part `c⁺`.
    pub fn pos(&self) -> Degree {
        Degree(self.0.iter().map(|&c| c.max(0) as u32).collect())
    }

    /// Negative part `c⁻`, so that `c = c⁺ − c⁻`.
    pub fn neg(&self) -> Degree {
        Degree(self.0.iter().map(|&c| (-c).max(0) as u32).collect())
    }

    /// `|c| = c⁺ + c⁻`.
    pub fn abs(&self) -> Degree {
        Degree(self.0.iter().map(|&c| c.unsigned_abs() as u32).collect())
    }

    pub fn negate(&self) -> Offset {
        Offset(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Offset) -> Offset {
        Offset(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `|c_i| ≤ bound_i` for every coordinate.
    pub fn within(&self, bound: &Degree) -> bool {
        self.0
            .iter()
            .zip(bound.coords())
            .all(|(&c, &b)| c.unsigned_abs() <= b as u64)
    }
}

impl fmt::Debug for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
