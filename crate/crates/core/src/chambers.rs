//! Root datum of `sl(3)`, Weyl chambers and the reduction-theory split of
//! `SL(3,Z)\SL(3,R)/SO(3)` into a compact core and three Siegel ends.
//!
//! The Cartan subalgebra `H` is `{h ∈ R³ : Σ h_i = 0}`; the Killing form
//! restricts to `6⟨h,k⟩`. The end of a standard parabolic `Q` is the
//! shifted chamber `β(h) > β(I_Q(rT))` with `T = (1/4, 0, -1/4)` and `I_Q`
//! the orthogonal projection onto the split component `a_Q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{self, Permutation};

const SUBSPACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartanVector {
    h: [f64; 3],
}

impl CartanVector {
    pub fn new(h: [f64; 3]) -> Result<Self> {
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("Cartan vector has non-finite entries"));
        }
        let trace: f64 = h.iter().sum();
        if trace.abs() > SUBSPACE_TOL {
            return Err(Error::domain(format!("Cartan vector must sum to zero, Σh = {trace:e}")));
        }
        Ok(CartanVector { h })
    }

    /// Projects onto `H` by subtracting the mean.
    pub fn centered(h: [f64; 3]) -> Result<Self> {
        let mean = h.iter().sum::<f64>() / 3.0;
        Self::new(h.map(|x| x - mean))
    }

    pub fn components(&self) -> [f64; 3] {
        self.h
    }

    pub fn scaled(&self, r: f64) -> Self {
        CartanVector { h: self.h.map(|x| r * x) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CartanVector { h: [0, 1, 2].map(|i| self.h[i] - other.h[i]) }
    }

    /// `B(h, k) = 6⟨h, k⟩`.
    pub fn killing(&self, other: &Self) -> f64 {
        6.0 * (0..3).map(|i| self.h[i] * other.h[i]).sum::<f64>()
    }

    pub fn killing_norm(&self) -> f64 {
        exactlin::killing_norm(&self.h).expect("rank-two Cartan vector")
    }
}

impl fmt::Display for CartanVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h[0], self.h[1], self.h[2])
    }
}

/// The root `α_ij(h) = h_i - h_j` (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn eval(&self, h: &CartanVector) -> f64 {
        h.h[self.i] - h.h[self.j]
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDatumA2 {
    pub roots: Vec<Root>,
    pub simple: [Root; 2],
}

impl Default for RootDatumA2 {
    fn default() -> Self {
        Self::new()
    }
}

impl RootDatumA2 {
    pub fn new() -> Self {
        let roots = (0..3)
            .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| Root { i, j }))
            .collect();
        RootDatumA2 { roots, simple: [Root { i: 0, j: 1 }, Root { i: 1, j: 2 }] }
    }

    pub fn positive(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    /// Half-sum of positive roots, `τ(h) = h_1 - h_3`.
    pub fn halfsum(&self, h: &CartanVector) -> f64 {
        h.h[0] - h.h[2]
    }
}

pub fn weyl_apply(w: &Permutation, h: &CartanVector) -> CartanVector {
    let v = w.permute(&h.h);
    CartanVector { h: [v[0], v[1], v[2]] }
}

/// `T = (1/4, 0, -1/4)`, the vector whose projections onto every `a_Q`
/// are dual to the half-sums `τ_Q`.
pub fn reference_t() -> CartanVector {
    CartanVector { h: [0.25, 0.0, -0.25] }
}

pub fn positive_chamber_contains(h: &CartanVector) -> bool {
    h.h[0] > h.h[1] && h.h[1] > h.h[2]
}

/// The two maximal standard parabolics and their one-dimensional split components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subspace {
    /// `H_1 = {(h, h, -2h)}`.
    J1,
    /// `H_2 = {(2h, -h, -h)}`.
    J2,
}

impl Subspace {
    fn direction(self) -> [f64; 3] {
        match self {
            Subspace::J1 => [1.0, 1.0, -2.0],
            Subspace::J2 => [2.0, -1.0, -1.0],
        }
    }

    /// Coordinate `t` of the orthogonal projection `t·direction` of `h`.
    pub fn project(self, h: &CartanVector) -> f64 {
        let d = self.direction();
        (0..3).map(|i| h.h[i] * d[i]).sum::<f64>() / 6.0
    }

    /// Coordinate of `h`, which must lie on the subspace.
    pub fn parameter(self, h: &CartanVector) -> Result<f64> {
        let t = self.project(h);
        let d = self.direction();
        let off = (0..3).map(|i| (h.h[i] - t * d[i]).abs()).fold(0.0, f64::max);
        if off > SUBSPACE_TOL * (1.0 + t.abs()) {
            return Err(Error::domain(format!("{h} is not on the subspace {self:?}")));
        }
        Ok(t)
    }
}

/// `τ_J` on its subspace: `3h` at `(h,h,-2h)` and at `(2h,-h,-h)`.
pub fn tau_j(j: Subspace, h: &CartanVector) -> Result<f64> {
    Ok(3.0 * j.parameter(h)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parabolic {
    P0,
    P1,
    P2,
}

impl std::str::FromStr for Parabolic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P0" | "p0" => Ok(Parabolic::P0),
            "P1" | "p1" => Ok(Parabolic::P1),
            "P2" | "p2" => Ok(Parabolic::P2),
            other => Err(Error::domain(format!("unknown parabolic '{other}'"))),
        }
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChamberQuery {
    pub parabolic: Parabolic,
    pub r: f64,
}

impl ChamberQuery {
    pub fn new(parabolic: Parabolic, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("shift r must be positive, got {r}")));
        }
        Ok(ChamberQuery { parabolic, r })
    }
}

/// How the rank-one ends are cut.
///
/// `Derived` evaluates `β(h) > β(I_Q(rT))` directly, which on both `H_1`
/// and `H_2` reads `8h > r`. `Literal` uses the printed inequalities
/// `12h + r > 0` for `P1` and `12h - r > 0` for `P2`. `P0` is the same in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChamberConvention {
    #[default]
    Derived,
    Literal,
}

fn rank_one_end(p: Parabolic, t: f64, r: f64, convention: ChamberConvention) -> bool {
    match (convention, p) {
        (ChamberConvention::Derived, _) => 8.0 * t > r,
        (ChamberConvention::Literal, Parabolic::P1) => 12.0 * t + r > 0.0,
        (ChamberConvention::Literal, _) => 12.0 * t - r > 0.0,
    }
}

fn p0_end(h: &CartanVector, r: f64) -> bool {
    h.h[0] > h.h[1] + r / 4.0 && h.h[1] > h.h[2] + r / 4.0
}

/// Membership in the shifted chamber `H_Q^+(rT)`. For `P1` and `P2`, `h`
/// must lie on `H_1` or `H_2`.
pub fn shifted_chamber_contains(q: &ChamberQuery, h: &CartanVector, convention: ChamberConvention) -> Result<bool> {
    match q.parabolic {
        Parabolic::P0 => Ok(p0_end(h, q.r)),
        Parabolic::P1 => Ok(rank_one_end(Parabolic::P1, Subspace::J1.parameter(h)?, q.r, convention)),
        Parabolic::P2 => Ok(rank_one_end(Parabolic::P2, Subspace::J2.parameter(h)?, q.r, convention)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Core,
    End(Parabolic),
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Core => write!(f, "Core"),
            Region::End(p) => write!(f, "End({p})"),
        }
    }
}

/// Assigns `h` to the first end containing it, checking `P0`, then `P1` and
/// `P2` on the Killing-orthogonal projections to `H_1`, `H_2`. Boundary
/// points belong to the core.
pub fn classify_point(h: &CartanVector, r: f64, convention: ChamberConvention) -> Result<Region> {
    ChamberQuery::new(Parabolic::P0, r)?;
    if p0_end(h, r) {
        return Ok(Region::End(Parabolic::P0));
    }
    for (p, j) in [(Parabolic::P1, Subspace::J1), (Parabolic::P2, Subspace::J2)] {
        if rank_one_end(p, j.project(h), r, convention) {
            return Ok(Region::End(p));
        }
    }
    Ok(Region::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: [f64; 3]) -> CartanVector {
        CartanVector::new(v).unwrap()
    }

    #[test]
    fn weyl_examples() {
        let x = h([1.0, 0.0, -1.0]);
        assert_eq!(weyl_apply(&"12".parse().unwrap(), &x), h([0.0, 1.0, -1.0]));
        assert_eq!(weyl_apply(&Permutation::identity(3), &x), x);
        assert_eq!(weyl_apply(&Permutation::longest(3), &x), h([-1.0, 0.0, 1.0]));
    }

    #[test]
    fn reference_vector() {
        let t = reference_t();
        assert_eq!(t.components(), [0.25, 0.0, -0.25]);
        assert_eq!(RootDatumA2::new().halfsum(&t), 0.5);
        assert!((t.killing_norm() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        // I_J(T) has coordinate 1/8 on both rank-one subspaces, so the ends cut at 8t > r
        assert_eq!(Subspace::J1.project(&t), 0.125);
        assert_eq!(Subspace::J2.project(&t), 0.125);
    }

    #[test]
    fn root_datum() {
        let d = RootDatumA2::new();
        assert_eq!(d.roots.len(), 6);
        assert_eq!(d.positive().count(), 3);
        for basis in [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]] {
            let x = h(basis);
            let sum: f64 = d.positive().map(|r| r.eval(&x)).sum();
            assert_eq!(d.halfsum(&x), sum / 2.0);
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_j(Subspace::J1, &h([2.0, 2.0, -4.0])).unwrap(), 6.0);
        assert_eq!(tau_j(Subspace::J2, &h([2.0, -1.0, -1.0])).unwrap(), 3.0);
        assert_eq!(tau_j(Subspace::J1, &h([0.0, 0.0, 0.0])).unwrap(), 0.0);
        assert!(tau_j(Subspace::J1, &h([1.0, 0.0, -1.0])).is_err());
    }

    #[test]
    fn shifted_chamber_examples() {
        use ChamberConvention::*;
        let p0 = ChamberQuery::new(Parabolic::P0, 4.0).unwrap();
        assert!(shifted_chamber_contains(&p0, &h([2.0, 0.0, -2.0]), Derived).unwrap());
        assert!(!shifted_chamber_contains(&p0, &h([0.0, 0.0, 0.0]), Derived).unwrap());
        let p1 = ChamberQuery::new(Parabolic::P1, 12.0).unwrap();
        assert!(shifted_chamber_contains(&p1, &h([1.0, 1.0, -2.0]), Literal).unwrap());
        assert!(!shifted_chamber_contains(&p1, &h([1.0, 1.0, -2.0]), Derived).unwrap());
        assert!(shifted_chamber_contains(&p1, &h([1.0, 0.0, -1.0]), Literal).is_err());
        assert!(ChamberQuery::new(Parabolic::P1, 0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let d = ChamberConvention::Derived;
        assert_eq!(classify_point(&h([2.0, 0.0, -2.0]), 4.0, d).unwrap(), Region::End(Parabolic::P0));
        assert_eq!(classify_point(&h([0.0, 0.0, 0.0]), 4.0, d).unwrap(), Region::Core);
        assert_eq!(classify_point(&h([3.0, 3.0, -6.0]), 12.0, d).unwrap(), Region::End(Parabolic::P1));
        assert_eq!(classify_point(&h([3.0, 3.0, -6.0]), 12.0, ChamberConvention::Literal).unwrap(), Region::End(Parabolic::P1));
        // tie: h_1 - h_2 = r/4 exactly
        assert_eq!(classify_point(&h([1.0, 0.0, -1.0]), 4.0, d).unwrap(), Region::Core);
        assert_eq!(Region::End(Parabolic::P2).to_string(), "End(P2)");
    }

    #[test]
    fn positive_chamber() {
        assert!(positive_chamber_contains(&h([1.0, 0.0, -1.0])));
        assert!(!positive_chamber_contains(&h([0.0, 0.0, 0.0])));
        assert!(!positive_chamber_contains(&h([1.0, 2.0, -3.0])));
    }
}
