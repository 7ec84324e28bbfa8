//! Rank-one and rank-two scattering matrices of `SL(2,Z)` and `SL(3,Z)`.
//!
//! `C(s) = Ω(2s-1)/Ω(2s)` and
//! `C(w,λ) = Π_{a<b, w(a)>w(b)} Ω(λ_a-λ_b)/Ω(1+λ_a-λ_b)`.
//! Only differences `λ_a - λ_b` enter, so spectral parameters are kept
//! trace-zero and the Weyl group acts by moving `λ_i` to slot `w(i)`.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::Permutation;
use crate::specfun::{self, check_finite, fmt_c, EvalOptions, RiemannZeta, ZetaEval};

/// Trace-zero spectral parameter `λ = (λ_1, λ_2, λ_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParameter3 {
    lambda: [Complex64; 3],
}

impl SpectralParameter3 {
    pub fn new(lambda: [Complex64; 3]) -> Result<Self> {
        for l in lambda {
            check_finite(l, "λ")?;
        }
        let trace: Complex64 = lambda.iter().sum();
        if trace.norm() > 1e-12 {
            return Err(Error::domain(format!("λ must have trace zero, Σλ = {}", fmt_c(trace))));
        }
        Ok(SpectralParameter3 { lambda })
    }

    /// Subtracts the mean, which leaves every `λ_a - λ_b` unchanged.
    pub fn centered(lambda: [Complex64; 3]) -> Result<Self> {
        let mean = lambda.iter().sum::<Complex64>() / 3.0;
        Self::new(lambda.map(|l| l - mean))
    }

    pub fn from_real(lambda: [f64; 3]) -> Result<Self> {
        Self::centered(lambda.map(|l| Complex64::new(l, 0.0)))
    }

    /// `λ = iη`, centered.
    pub fn imaginary(eta: [f64; 3]) -> Result<Self> {
        Self::centered(eta.map(|e| Complex64::new(0.0, e)))
    }

    pub fn components(&self) -> [Complex64; 3] {
        self.lambda
    }

    /// `λ_a - λ_b` for 0-based `a`, `b`.
    pub fn difference(&self, a: usize, b: usize) -> Complex64 {
        self.lambda[a] - self.lambda[b]
    }

    /// `w · λ`, with `(w·λ)_{w(i)} = λ_i`.
    pub fn permuted(&self, w: &Permutation) -> Self {
        let v = w.permute(&self.lambda);
        SpectralParameter3 { lambda: [v[0], v[1], v[2]] }
    }
}

/// A scattering-matrix value. `at_pole` marks values so large (`|C| >= 1e12`)
/// that the evaluation point is numerically on a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringValue {
    pub value: Complex64,
    pub at_pole: bool,
}

impl ScatteringValue {
    fn finite(value: Complex64, at: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Pole { function: "scattering matrix", at: fmt_c(at) });
        }
        Ok(ScatteringValue { value, at_pole: value.norm() >= 1e12 })
    }
}

/// Scattering-matrix evaluator over a chosen zeta implementation.
#[derive(Clone, Copy)]
pub struct Scattering<'z> {
    zeta: &'z dyn ZetaEval,
    opts: EvalOptions,
}

static STANDARD_ZETA: RiemannZeta = RiemannZeta;

impl Scattering<'static> {
    pub fn standard() -> Self {
        Scattering { zeta: &STANDARD_ZETA, opts: EvalOptions::default() }
    }
}

impl Default for Scattering<'static> {
    fn default() -> Self {
        Self::standard()
    }
}

impl<'z> Scattering<'z> {
    pub fn with_zeta(zeta: &'z dyn ZetaEval, opts: EvalOptions) -> Self {
        Scattering { zeta, opts }
    }

    pub fn options(&self) -> &EvalOptions {
        &self.opts
    }

    pub fn zeta(&self) -> &'z dyn ZetaEval {
        self.zeta
    }

    /// `Ω(x) / Ω(1+x)`, the factor contributed by one inversion.
    fn inversion_factor(&self, x: Complex64) -> Result<Complex64> {
        specfun::omega_ratio_with(self.zeta, x, x + 1.0, &self.opts)
    }

    /// `C(s) = Ω(2s-1) / Ω(2s)`.
    ///
    /// At `s = 1/2` both factors have poles (`Ω` at 0 and 1); the residues of
    /// `Ω` there are `-1` and `+1`, so the removable value is `C(1/2) = -1`,
    /// consistent with `C(s)C(1-s) = 1`.
    pub fn c_rank1(&self, s: Complex64) -> Result<ScatteringValue> {
        check_finite(s, "s")?;
        if s == Complex64::new(0.5, 0.0) {
            return Ok(ScatteringValue { value: Complex64::new(-1.0, 0.0), at_pole: false });
        }
        if s.im == 0.0 && (s.re == 0.0 || s.re == 1.0) {
            return Err(Error::Pole { function: "C(s)", at: fmt_c(s) });
        }
        let value = specfun::omega_ratio_with(self.zeta, 2.0 * s - 1.0, 2.0 * s, &self.opts)?;
        ScatteringValue::finite(value, s)
    }

    /// `C(w, λ)`: product over the inversions of `w` (1 for the identity).
    pub fn c_rank2(&self, w: &Permutation, lambda: &SpectralParameter3) -> Result<ScatteringValue> {
        if w.len() != 3 {
            return Err(Error::domain(format!("rank-two scattering needs w ∈ S_3, got degree {}", w.len())));
        }
        let mut value = Complex64::new(1.0, 0.0);
        for (a, b) in w.inversions() {
            let x = lambda.difference(a, b);
            let factor = self.inversion_factor(x).map_err(|e| match e {
                Error::Pole { .. } => Error::Pole {
                    function: "C(w,λ)",
                    at: format!("inversion ({},{}) with λ_a-λ_b = {}", a + 1, b + 1, fmt_c(x)),
                },
                other => other,
            })?;
            value *= factor;
        }
        ScatteringValue::finite(value, lambda.difference(0, 2))
    }

    /// `C(s̃)` with `s̃ = (λ_a - λ_b + 1)/2`, for `w` with a single inversion `(a, b)`.
    pub fn c_rank2_via_rank1(&self, w: &Permutation, lambda: &SpectralParameter3) -> Result<ScatteringValue> {
        let pair = single_inversion(w)?;
        self.c_rank1((lambda.difference(pair.0, pair.1) + 1.0) / 2.0)
    }

    /// `|C(w1 w2, λ) - C(w1, w2·λ) C(w2, λ)|` for a length-additive pair.
    pub fn cocycle_residual(&self, w1: &Permutation, w2: &Permutation, lambda: &SpectralParameter3) -> Result<f64> {
        let product = w1.compose(w2);
        if product.length() != w1.length() + w2.length() {
            return Err(Error::domain(format!(
                "ℓ({w1}·{w2}) = {} is not ℓ({w1}) + ℓ({w2}) = {}",
                product.length(),
                w1.length() + w2.length()
            )));
        }
        let lhs = self.c_rank2(&product, lambda)?.value;
        let rhs = self.c_rank2(w1, &lambda.permuted(w2))?.value * self.c_rank2(w2, lambda)?.value;
        Ok((lhs - rhs).norm())
    }

    /// Truncated constant term of `E(z, s)` against `y^s + C(s) y^{1-s}`.
    ///
    /// Each coprime pair `(c, d mod c)` contributes the unfolded `x`-integral
    /// `sqrt(π) Γ(s-1/2)/Γ(s) · c^{-2s} · y^{1-s}`; the sum over `c <= cmax` is
    /// compared with the prediction and `|a₀ - y^s - C(s) y^{1-s}|` returned.
    pub fn eisenstein_constant_term_check(&self, y: f64, s: Complex64, cmax: u32) -> Result<f64> {
        check_finite(s, "s")?;
        if s.re < 1.5 {
            return Err(Error::domain(format!("need Re s >= 1.5 for absolute convergence, got {}", fmt_c(s))));
        }
        if !(y >= 2.0 && y.is_finite()) {
            return Err(Error::domain(format!("need y >= 2, got {y}")));
        }
        if cmax < 50 {
            return Err(Error::domain(format!("need cmax >= 50, got {cmax}")));
        }
        let pairs = u64::from(cmax) * (u64::from(cmax) + 1) / 2;
        let budget = 100 * self.opts.max_terms as u64;
        if pairs > budget {
            return Err(Error::Budget { needed: pairs as usize, limit: budget as usize });
        }

        let horocyclic = specfun::f_factor(s)?;
        let ys = (s * y.ln()).exp();
        let y1s = ((1.0 - s) * y.ln()).exp();
        let per_c: Vec<Complex64> = (1..=cmax)
            .into_par_iter()
            .map(|c| {
                let coprime = (0..c).filter(|d| d.gcd(&c) == 1).count() as f64;
                coprime * (-2.0 * s * f64::from(c).ln()).exp()
            })
            .collect();
        // fixed summation order, smallest terms first
        let dirichlet: Complex64 = per_c.iter().rev().sum();
        let constant_term = ys + horocyclic * dirichlet * y1s;
        let predicted = ys + self.c_rank1(s)?.value * y1s;
        Ok((constant_term - predicted).norm())
    }
}

fn single_inversion(w: &Permutation) -> Result<(usize, usize)> {
    match w.inversions().as_slice() {
        [pair] if w.len() == 3 => Ok(*pair),
        _ => Err(Error::domain(format!("{w} is not a simple transposition of S_3"))),
    }
}

pub fn c_rank1(s: Complex64) -> Result<ScatteringValue> {
    Scattering::standard().c_rank1(s)
}

pub fn c_rank2(w: &Permutation, lambda: &SpectralParameter3) -> Result<ScatteringValue> {
    Scattering::standard().c_rank2(w, lambda)
}

pub fn c_rank2_via_rank1(w: &Permutation, lambda: &SpectralParameter3) -> Result<ScatteringValue> {
    Scattering::standard().c_rank2_via_rank1(w, lambda)
}

pub fn cocycle_residual(w1: &Permutation, w2: &Permutation, lambda: &SpectralParameter3) -> Result<f64> {
    Scattering::standard().cocycle_residual(w1, w2, lambda)
}

pub fn eisenstein_constant_term_check(y: f64, s: Complex64, cmax: u32) -> Result<f64> {
    Scattering::standard().eisenstein_constant_term_check(y, s, cmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w(cycle: &str) -> Permutation {
        cycle.parse().unwrap()
    }

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    #[test]
    fn rank1_values() {
        let v = c_rank1(c(2.0, 0.0)).unwrap();
        assert!((v.value - 45.0 * ZETA3 / PI.powi(3)).norm() < 1e-13);
        assert!(!v.at_pole);
        assert_eq!(c_rank1(c(0.5, 0.0)).unwrap().value, c(-1.0, 0.0));
        assert!((c_rank1(c(0.5, 30.0)).unwrap().value.norm() - 1.0).abs() < 1e-10);
        // 40-digit reference values
        assert!((c_rank1(c(0.5, 30.0)).unwrap().value - c(0.908_754_641_171_288_1, -0.417_330_806_614_660_8)).norm() < 1e-11);
        assert!((c_rank1(c(0.7, 2.0)).unwrap().value - c(0.801_615_816_042_038_6, -0.641_913_210_270_412)).norm() < 1e-12);
        assert!((c_rank1(c(0.5, 0.01)).unwrap().value - c(-0.999_236_831_860_815_4, -0.039_060_899_282_536_44)).norm() < 1e-12);
    }

    #[test]
    fn rank1_poles() {
        assert!(matches!(c_rank1(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(c_rank1(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn rank2_values() {
        let lam = SpectralParameter3::from_real([2.0, 0.0, -2.0]).unwrap();
        assert_eq!(c_rank2(&Permutation::identity(3), &lam).unwrap().value, c(1.0, 0.0));

        let lam12 = SpectralParameter3::from_real([1.0, -1.0, 0.0]).unwrap();
        let v = c_rank2(&w("12"), &lam12).unwrap().value;
        assert!((v.re - 2.736_865_555_240_411_8).abs() < 1e-13 && v.im.abs() < 1e-15);

        // w0: pairs (1,2), (1,3), (2,3) with arguments 2, 4, 2
        let v = c_rank2(&Permutation::longest(3), &lam).unwrap().value;
        assert!((v.re - 10.424_473_899_631_517).abs() < 1e-12);
    }

    #[test]
    fn rank2_pole_names_pair() {
        let lam = SpectralParameter3::from_real([1.0, 0.0, -1.0]).unwrap();
        // λ_1 - λ_2 = 1 is a pole of Ω
        match c_rank2(&w("12"), &lam) {
            Err(Error::Pole { at, .. }) => assert!(at.contains("(1,2)"), "{at}"),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn via_rank1() {
        let lam = SpectralParameter3::from_real([1.0, -1.0, 0.0]).unwrap();
        let direct = c_rank2_via_rank1(&w("12"), &lam).unwrap().value;
        assert!((direct - c_rank1(c(1.5, 0.0)).unwrap().value).norm() < 1e-15);

        let lam = SpectralParameter3::from_real([0.0, 2.0, -2.0]).unwrap();
        assert!((c_rank2_via_rank1(&w("23"), &lam).unwrap().value - c_rank1(c(2.5, 0.0)).unwrap().value).norm() < 1e-15);
        assert!((c_rank1(c(2.5, 0.0)).unwrap().value.re - 1.391_705_099_791_311_5).abs() < 1e-13);

        let lam = SpectralParameter3::imaginary([5.0, -5.0, 0.0]).unwrap();
        assert!((c_rank2_via_rank1(&w("12"), &lam).unwrap().value.norm() - 1.0).abs() < 1e-10);

        assert!(c_rank2_via_rank1(&w("13"), &lam).is_err());
        assert!(c_rank2_via_rank1(&w("123"), &lam).is_err());
        assert!(c_rank2_via_rank1(&Permutation::identity(3), &lam).is_err());
    }

    #[test]
    fn cocycle_examples() {
        let lam = SpectralParameter3::from_real([3.0, 1.0, -4.0]).unwrap();
        assert!(cocycle_residual(&w("12"), &Permutation::identity(3), &lam).unwrap() < 1e-12);
        assert!(cocycle_residual(&w("12"), &w("23"), &lam).unwrap() < 1e-10);
        assert!(cocycle_residual(&w("23"), &w("12"), &lam).unwrap() < 1e-10);
        assert!(cocycle_residual(&w("12"), &w("12"), &lam).is_err());
    }

    #[test]
    fn trace_zero_enforced() {
        assert!(SpectralParameter3::new([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        let lam = SpectralParameter3::centered([c(4.0, 1.0), c(2.0, 1.0), c(3.0, 1.0)]).unwrap();
        assert!((lam.difference(0, 1) - c(2.0, 0.0)).norm() < 1e-15);
        let moved = lam.permuted(&w("123"));
        assert_eq!(moved.components()[1], lam.components()[0]);
    }

    #[test]
    fn eisenstein_preconditions() {
        let s = c(2.0, 0.0);
        assert!(eisenstein_constant_term_check(1.0, s, 100).is_err());
        assert!(eisenstein_constant_term_check(3.0, c(1.2, 0.0), 100).is_err());
        assert!(eisenstein_constant_term_check(3.0, s, 10).is_err());
        assert!(matches!(eisenstein_constant_term_check(3.0, s, 200_000), Err(Error::Budget { .. })));
    }

    #[test]
    fn eisenstein_small_cut() {
        // tail Σ_{c>N} φ(c) c^{-4} (π/2) y^{-1} < N^{-2}
        let r = eisenstein_constant_term_check(3.0, c(3.0, 0.0), 1000).unwrap();
        assert!(r < 1e-6, "{r}");
        let r100 = eisenstein_constant_term_check(3.0, c(2.0, 0.0), 100).unwrap();
        assert!(r100 < 1e-4, "{r100}");
    }
}
