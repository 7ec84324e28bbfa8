use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Permutation, RationalMatrix, UnimodularMatrix};
use crate::error::{Error, Result};

/// `g = u_left · diag(m_sign · a_diag) · P(w) · u_right` with the Borel
/// subgroup taken to be the upper-triangular matrices.
///
/// `P(w)` is the 0/1 matrix with `P[i][w(i)] = 1`, so the determinant
/// constraint reads `Π m_sign · Π a_diag · sgn(w) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruhatFactorization {
    pub u_left: RationalMatrix,
    #[serde(serialize_with = "ser_rationals")]
    pub a_diag: Vec<BigRational>,
    pub m_sign: Vec<i8>,
    pub w: Permutation,
    pub u_right: RationalMatrix,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(BigRational::to_string))
}

impl BruhatFactorization {
    /// Factorization of the identity in dimension `n`.
    pub fn identity(n: usize) -> Self {
        BruhatFactorization {
            u_left: RationalMatrix::identity(n),
            a_diag: vec![BigRational::one(); n],
            m_sign: vec![1; n],
            w: Permutation::identity(n),
            u_right: RationalMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.a_diag.len()
    }

    /// The signed middle diagonal `m_sign · a_diag`.
    pub fn middle_diagonal(&self) -> Vec<BigRational> {
        self.a_diag
            .iter()
            .zip(&self.m_sign)
            .map(|(a, &m)| if m < 0 { -a.clone() } else { a.clone() })
            .collect()
    }

    /// Checks every structural invariant except the recomposition identity.
    pub fn is_well_formed(&self) -> bool {
        let n = self.dim();
        let det = self.a_diag.iter().fold(BigRational::one(), |acc, a| acc * a)
            * BigRational::from_integer(BigInt::from(
                self.m_sign.iter().map(|&m| i64::from(m)).product::<i64>() * i64::from(self.w.sign()),
            ));
        self.u_left.dim() == n
            && self.u_right.dim() == n
            && self.m_sign.len() == n
            && self.w.len() == n
            && self.u_left.is_upper_unitriangular()
            && self.u_right.is_upper_unitriangular()
            && self.a_diag.iter().all(|a| a.is_positive())
            && self.m_sign.iter().all(|&m| m == 1 || m == -1)
            && det.is_one()
    }
}

/// Bruhat decomposition relative to the upper-triangular Borel subgroup.
///
/// Rows are processed bottom to top. The pivot of a row is its leftmost
/// nonzero entry in a column not yet claimed by a lower row. Every other
/// entry of the row is then cleared: entries in claimed columns left of the
/// pivot by adding a multiple of the (already reduced) lower pivot row, all
/// entries right of the pivot by adding a multiple of the pivot column. Row
/// operations therefore only occur at inversion positions of `w`, which
/// pins `u_left` to `U ∩ P(w) U⁻ P(w)⁻¹` and makes the factorization unique.
pub fn bruhat_decompose(g: &UnimodularMatrix) -> BruhatFactorization {
    let n = g.dim();
    let mut m = g.to_rational();
    let mut u_left = RationalMatrix::identity(n);
    let mut u_right = RationalMatrix::identity(n);
    let mut images = vec![0usize; n];
    // pivot_row[col] = the lower row whose pivot sits in `col`
    let mut pivot_row: Vec<Option<usize>> = vec![None; n];

    for row in (0..n).rev() {
        let col = (0..n)
            .find(|&j| pivot_row[j].is_none() && !m.get(row, j).is_zero())
            .expect("invertible matrix has a pivot in every row");
        let pivot = m.get(row, col).clone();

        for left in 0..col {
            let Some(lower) = pivot_row[left] else { continue };
            if m.get(row, left).is_zero() {
                continue;
            }
            let factor = m.get(row, left) / m.get(lower, left);
            // m <- (I - f E_{row,lower}) m, so u_left <- u_left (I + f E_{row,lower})
            m.add_row_multiple(row, lower, &-factor.clone());
            for i in 0..n {
                let delta = &factor * u_left.get(i, row);
                *u_left.get_mut(i, lower) += delta;
            }
        }
        for right in col + 1..n {
            if m.get(row, right).is_zero() {
                continue;
            }
            let factor = m.get(row, right) / &pivot;
            // m <- m (I - f E_{col,right}), so u_right <- (I + f E_{col,right}) u_right
            m.add_col_multiple(right, col, &-factor.clone());
            for j in 0..n {
                let delta = &factor * u_right.get(right, j);
                *u_right.get_mut(col, j) += delta;
            }
        }
        pivot_row[col] = Some(row);
        images[row] = col;
    }

    let w = Permutation::new(images).expect("pivot columns are distinct");
    let mut a_diag = Vec::with_capacity(n);
    let mut m_sign = Vec::with_capacity(n);
    for i in 0..n {
        let d = m.get(i, w.apply(i));
        a_diag.push(d.abs());
        m_sign.push(if d.is_negative() { -1 } else { 1 });
    }
    BruhatFactorization { u_left, a_diag, m_sign, w, u_right }
}

/// Exact product `u_left · diag(m_sign · a_diag) · P(w) · u_right`.
pub fn bruhat_recompose(f: &BruhatFactorization) -> RationalMatrix {
    let n = f.dim();
    let middle = f.middle_diagonal();
    let mut monomial = RationalMatrix::diagonal(&vec![BigRational::zero(); n]);
    for (i, d) in middle.into_iter().enumerate() {
        *monomial.get_mut(i, f.w.apply(i)) = d;
    }
    f.u_left.mul(&monomial).mul(&f.u_right)
}

/// The logarithm of the positive diagonal part of a Bruhat factorization,
/// a trace-zero vector in the Cartan subalgebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SojournVector {
    pub h: Vec<f64>,
    #[serde(serialize_with = "ser_rationals")]
    pub exact_a: Vec<BigRational>,
}

impl SojournVector {
    pub fn killing_norm(&self) -> Result<f64> {
        killing_norm(&self.h)
    }

    /// `Σ h_i`, zero up to rounding.
    pub fn trace_residual(&self) -> f64 {
        self.h.iter().sum()
    }
}

pub fn sojourn_vector(f: &BruhatFactorization) -> SojournVector {
    SojournVector {
        h: f.a_diag.iter().map(ln_rational).collect(),
        exact_a: f.a_diag.clone(),
    }
}

/// `sqrt(B(h, h))` for the Killing form `B = 2n · Trace` on `sl(n)`.
pub fn killing_norm(h: &[f64]) -> Result<f64> {
    let n = h.len();
    if !(n == 2 || n == 3) {
        return Err(Error::domain(format!("Killing norm needs dimension 2 or 3, got {n}")));
    }
    Ok((2.0 * n as f64 * h.iter().map(|x| x * x).sum::<f64>()).sqrt())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("bounded magnitude").ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = x >> shift;
        top.to_f64().expect("64-bit head").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn decompose(rows: &[&[i64]]) -> (UnimodularMatrix, BruhatFactorization) {
        let g = UnimodularMatrix::from_i64(rows).unwrap();
        let f = bruhat_decompose(&g);
        assert!(f.is_well_formed(), "{f:?}");
        assert!(bruhat_recompose(&f).equals_integer(&g));
        (g, f)
    }

    #[test]
    fn two_by_two_big_cell() {
        // closed form for c > 0: u2 = [[1, a/c], [0, 1]], a = diag(1/c, c), u1 = [[1, d/c], [0, 1]]
        let (_, f) = decompose(&[&[2, 1], &[1, 1]]);
        assert_eq!(f.u_left, RationalMatrix::from_i64(&[[1, 2], [0, 1]]).unwrap());
        assert_eq!(f.a_diag, vec![q(1, 1), q(1, 1)]);
        assert_eq!(f.m_sign, vec![-1, 1]);
        assert_eq!(f.w, Permutation::transposition(2, 0, 1));
        assert_eq!(f.u_right, RationalMatrix::from_i64(&[[1, 1], [0, 1]]).unwrap());

        let (_, f) = decompose(&[&[3, 5], &[7, 12]]);
        assert_eq!(f.u_left.get(0, 1), &q(3, 7));
        assert_eq!(f.u_right.get(0, 1), &q(12, 7));
        assert_eq!(f.a_diag, vec![q(1, 7), q(7, 1)]);
    }

    #[test]
    fn upper_triangular_is_identity_cell() {
        let (_, f) = decompose(&[&[1, 5], &[0, 1]]);
        assert!(f.w.is_identity());
        assert_eq!(f.u_left, RationalMatrix::identity(2));
        assert_eq!(f.a_diag, vec![q(1, 1), q(1, 1)]);
        assert_eq!(f.u_right, RationalMatrix::from_i64(&[[1, 5], [0, 1]]).unwrap());
    }

    #[test]
    fn lower_unitriangular_3x3_cells() {
        // the bottom-left 2x2 minor of the all-ones lower unitriangular matrix
        // vanishes, so it is not in the big cell
        let (_, f) = decompose(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        assert_eq!(f.w, Permutation::new(vec![1, 2, 0]).unwrap());
        assert_eq!(f.a_diag, vec![q(1, 1), q(1, 1), q(1, 1)]);

        let (_, f) = decompose(&[&[1, 0, 0], &[2, 1, 0], &[3, 5, 1]]);
        assert_eq!(f.w, Permutation::longest(3));
        // a = diag(1/minor_2, minor_2/minor_1, minor_1) with southwest minors 3 and 7
        assert_eq!(f.a_diag, vec![q(1, 7), q(7, 3), q(3, 1)]);
    }

    #[test]
    fn identity_recomposes_to_identity() {
        for n in [2, 3] {
            assert_eq!(bruhat_recompose(&BruhatFactorization::identity(n)), RationalMatrix::identity(n));
        }
    }

    #[test]
    fn sojourn_vectors() {
        let (_, f) = decompose(&[&[0, -1], &[1, 0]]);
        assert_eq!(sojourn_vector(&f).h, vec![0.0, 0.0]);

        let (_, f) = decompose(&[&[1, 0], &[2, 1]]);
        let v = sojourn_vector(&f);
        let ln2 = 2f64.ln();
        assert!((v.h[0] + ln2).abs() < 1e-12 && (v.h[1] - ln2).abs() < 1e-12);
        assert!(v.trace_residual().abs() < 1e-12);
        assert!((v.killing_norm().unwrap() - 2.0 * 2f64.sqrt() * ln2).abs() < 1e-12);

        let (_, f) = decompose(&[&[0, 0, -1], &[0, 1, 0], &[1, 0, 0]]);
        assert_eq!(sojourn_vector(&f).h, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn killing_norm_values() {
        assert!((killing_norm(&[1.0, 0.0, -1.0]).unwrap() - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(killing_norm(&[0.0; 3]).unwrap(), 0.0);
        assert!((killing_norm(&[0.25, 0.0, -0.25]).unwrap() - 0.866_025_403_784_438_6).abs() < 1e-12);
        assert!(killing_norm(&[1.0]).is_err());
        assert!(killing_norm(&[1.0, 0.0, 0.0, -1.0]).is_err());
    }

    #[test]
    fn huge_entries_log() {
        let big = BigInt::from(10).pow(400);
        let x = BigRational::new(big, BigInt::from(1));
        assert!((ln_rational(&x) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
