use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}`, stored by its images.
///
/// Displayed and parsed in 1-based cycle notation (`12`, `23`, `13`, `123`,
/// `132`, `e`). The associated matrix is `P[i][w(i)] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::domain(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, e.g. `[2, 1, 3]` for `(12)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::domain("1-based images must be positive"));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    /// Transposition of the 0-based indices `a` and `b` in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    /// The longest element `i -> n-1-i`.
    pub fn longest(n: usize) -> Self {
        Permutation { images: (0..n).rev().collect() }
    }

    /// Parses 1-based cycle notation in `S_n`: a single cycle such as `12`
    /// or `132`, or `e` / `id` for the identity.
    pub fn parse_cycle(n: usize, text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        if text.is_empty() || text == "e" || text == "id" {
            return Ok(Self::identity(n));
        }
        let cycle: Vec<usize> = text
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .filter(|&d| d >= 1 && d <= n)
                    .ok_or_else(|| Error::domain(format!("bad cycle `{text}` for S_{n}")))
            })
            .collect::<Result<_>>()?;
        let mut images: Vec<usize> = (0..n).collect();
        for (k, &from) in cycle.iter().enumerate() {
            images[from - 1] = cycle[(k + 1) % cycle.len()] - 1;
        }
        Self::new(images)
    }

    /// Every element of `S_n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Permutation>) {
            if prefix.len() == n {
                out.push(Permutation { images: prefix.clone() });
                return;
            }
            for i in 0..n {
                if !prefix.contains(&i) {
                    prefix.push(i);
                    extend(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(n), n, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Pairs `a < b` (0-based) with `w(a) > w(b)`, in lexicographic order.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    pub fn sign(&self) -> i8 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The unique inversion pair if `self` is a transposition.
    pub fn transposition_pair(&self) -> Option<(usize, usize)> {
        let moved: Vec<usize> = (0..self.len()).filter(|&i| self.images[i] != i).collect();
        match moved.as_slice() {
            [a, b] => Some((*a, *b)),
            _ => None,
        }
    }

    /// Moves the entry at position `i` to position `w(i)`.
    pub fn permute<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len());
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.images[i]] = x.clone();
        }
        out
    }

    /// 0/1 matrix with `P[i][w(i)] = 1`.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(self.images[i] == j)).collect())
            .collect()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, 1-based; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut done = vec![false; self.len()];
        for start in 0..self.len() {
            if done[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            while !done[i] {
                done[i] = true;
                write!(f, "{}", i + 1)?;
                i = self.images[i];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses a cycle in `S_3`.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_cycle(3, s)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}
