use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n x n` integer matrix of determinant one, `n ∈ {2, 3}`.
///
/// Serialized as a JSON array of rows of decimal strings, e.g.
/// `[["2","1"],["1","1"]]`, so entries never pass through a 64-bit integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct UnimodularMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl UnimodularMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = entries.len();
        if !(n == 2 || n == 3) {
            return Err(Error::domain(format!("dimension {n} not supported (need 2 or 3)")));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::domain("matrix is not square"));
        }
        let det = determinant(&entries);
        if !det.is_one() {
            return Err(Error::domain(format!("determinant is {det}, expected 1")));
        }
        Ok(UnimodularMatrix { entries })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
                .collect(),
        )
    }

    /// `I + k E_{ij}` for `i != j`.
    pub fn elementary(n: usize, i: usize, j: usize, k: i64) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::domain("elementary matrix needs distinct in-range indices"));
        }
        let mut m = Self::identity(n)?;
        m.entries[i][j] = BigInt::from(k);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.entries[i][k] * &other.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        UnimodularMatrix { entries }
    }

    /// Upper triangular, i.e. in the Borel subgroup (no big-cell part).
    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j].is_zero()))
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect(),
        }
    }

    /// Largest absolute entry, used to bound random test matrices.
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
    }
}

fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

impl TryFrom<Vec<Vec<String>>> for UnimodularMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<String>>) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|_| Error::domain(format!("`{s}` is not an integer")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl From<UnimodularMatrix> for Vec<Vec<String>> {
    fn from(m: UnimodularMatrix) -> Self {
        m.entries
            .iter()
            .map(|row| row.iter().map(BigInt::to_string).collect())
            .collect()
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// Square matrix over `Q`; entries are kept in lowest terms by `BigRational`.
///
/// Serialized as rows of strings such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct RationalMatrix {
    entries: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::domain("matrix is not square"));
        }
        Ok(RationalMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
                .collect(),
        }
    }

    pub fn diagonal(d: &[BigRational]) -> Self {
        let mut m = Self::identity(d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i][i] = x.clone();
        }
        m
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.entries[i][j]
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(BigRational::zero(), |acc, k| acc + &self.entries[i][k] * &other.entries[k][j])
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { entries }
    }

    /// Unit diagonal and zero strictly-lower part.
    pub fn is_upper_unitriangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| self.entries[i][i].is_one() && (0..i).all(|j| self.entries[i][j].is_zero()))
    }

    /// Exact equality with an integer matrix.
    pub fn equals_integer(&self, m: &UnimodularMatrix) -> bool {
        *self == m.to_rational()
    }

    /// Row `target += factor * row source`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigRational) {
        for j in 0..self.dim() {
            let delta = factor * &self.entries[source][j];
            self.entries[target][j] += delta;
        }
    }

    /// Column `target += factor * column source`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigRational) {
        for i in 0..self.dim() {
            let delta = factor * &self.entries[i][source];
            self.entries[i][target] += delta;
        }
    }
}

impl TryFrom<Vec<Vec<String>>> for RationalMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<String>>) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigRational>()
                            .map_err(|_| Error::domain(format!("`{s}` is not a rational")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl From<RationalMatrix> for Vec<Vec<String>> {
    fn from(m: RationalMatrix) -> Self {
        m.entries
            .iter()
            .map(|row| row.iter().map(BigRational::to_string).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_determinant_and_shape() {
        assert!(UnimodularMatrix::from_i64(&[[2, 0], [0, 1]]).is_err());
        assert!(UnimodularMatrix::from_i64(&[[1, 0, 0, 0]; 4]).is_err());
        assert!(UnimodularMatrix::from_i64(&[[1]]).is_err());
        assert!(UnimodularMatrix::from_i64(&[[0, -1], [1, 0]]).is_ok());
        assert!(UnimodularMatrix::from_i64(&[[1, 0, 0], [1, 1, 0], [1, 1, 1]]).is_ok());
    }

    #[test]
    fn json_strings() {
        let m: UnimodularMatrix = serde_json::from_str(r#"[["2","1"],["1","1"]]"#).unwrap();
        assert_eq!(m, UnimodularMatrix::from_i64(&[[2, 1], [1, 1]]).unwrap());
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[["2","1"],["1","1"]]"#);
        // determinant 2
        assert!(serde_json::from_str::<UnimodularMatrix>(r#"[["2","0"],["0","1"]]"#).is_err());
        let big = r#"[["100000000000000000000001","100000000000000000000000"],["1","1"]]"#;
        let m: UnimodularMatrix = serde_json::from_str(big).unwrap();
        assert_eq!(m.get(0, 0).to_string(), "100000000000000000000001");
    }

    #[test]
    fn rational_matrix_strings_are_lowest_terms() {
        let m: RationalMatrix = serde_json::from_str(r#"[["2/4","1"],["0","1"]]"#).unwrap();
        assert_eq!(m.get(0, 0).to_string(), "1/2");
        assert!(!m.is_upper_unitriangular());
        assert!(RationalMatrix::identity(3).is_upper_unitriangular());
    }
}
