//! Complex special functions behind every scattering matrix: `Γ`, `ζ`, the
//! completed zeta `Ω(s) = π^{-s/2} Γ(s/2) ζ(s)` and the horocyclic integral
//! `F(σ) = ∫ (1+w²)^{-σ} dw`.
//!
//! Powers of `π` use the real logarithm `ln π`, so `π^{-s/2} = exp(-(s/2) ln π)`
//! has no branch ambiguity. Poles are reported as [`Error::Pole`] rather than
//! as infinities.

mod gamma;
mod quadrature;
mod zeta;

pub use gamma::{gamma, ln_gamma};
pub use quadrature::{f_factor_quadrature, integrate_gauss_kronrod};
pub use zeta::{zeta, RiemannZeta, ZetaEval};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Accuracy knobs shared by the series-based evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub target_abs_error: f64,
    pub max_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { target_abs_error: 1e-12, max_terms: 1_000_000 }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error >= 1e-15) {
            return Err(Error::domain(format!(
                "target_abs_error {} below the 1e-15 floor",
                self.target_abs_error
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::domain("max_terms must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_finite(s: Complex64, what: &str) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {s}")))
    }
}

pub(crate) fn fmt_c(s: Complex64) -> String {
    format!("{}{:+}i", s.re, s.im)
}

/// `Ω(s) = exp(log_prefactor) · zeta`, with the `π` and `Γ` parts kept in
/// log form so that ratios survive the `e^{-π|Im s|/4}` decay of `Γ(s/2)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OmegaParts {
    pub log_prefactor: Complex64,
    pub zeta: Complex64,
}

pub(crate) fn omega_parts(z: &dyn ZetaEval, s: Complex64, opts: &EvalOptions) -> Result<OmegaParts> {
    check_finite(s, "s")?;
    if s.im == 0.0 && (s.re == 0.0 || s.re == 1.0) {
        return Err(Error::Pole { function: "omega", at: fmt_c(s) });
    }
    // Ω(s) = Ω(1-s): route the far left half-plane and the trivial zeros
    // (where Γ(s/2) has poles) through the reflection.
    let trivial_zero = s.im == 0.0 && s.re < 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 0;
    if s.re < -2.0 || trivial_zero {
        return omega_parts(z, Complex64::new(1.0, 0.0) - s, opts);
    }
    let half = s / 2.0;
    Ok(OmegaParts {
        log_prefactor: -half * std::f64::consts::PI.ln() + ln_gamma(half)?,
        zeta: z.zeta(s, opts)?,
    })
}

/// Completed zeta `Ω(s) = π^{-s/2} Γ(s/2) ζ(s)`, symmetric under `s -> 1-s`.
pub fn omega(s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    omega_with(&RiemannZeta, s, opts)
}

/// [`omega`] with a caller-supplied zeta evaluator.
pub fn omega_with(z: &dyn ZetaEval, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let p = omega_parts(z, s, opts)?;
    Ok(p.log_prefactor.exp() * p.zeta)
}

/// `Ω(a) / Ω(b)` evaluated without forming either factor.
pub fn omega_ratio_with(z: &dyn ZetaEval, a: Complex64, b: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    let pa = omega_parts(z, a, opts)?;
    let pb = omega_parts(z, b, opts)?;
    if pb.zeta == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { function: "omega ratio", at: fmt_c(b) });
    }
    Ok((pa.log_prefactor - pb.log_prefactor).exp() * pa.zeta / pb.zeta)
}

/// `F(σ) = ∫_R (1+w²)^{-σ} dw = sqrt(π) Γ(σ-1/2) / Γ(σ)` for `Re σ > 1/2`.
pub fn f_factor(sigma: Complex64) -> Result<Complex64> {
    check_finite(sigma, "sigma")?;
    if sigma.re <= 0.5 {
        return Err(Error::Divergence(format!("∫(1+w²)^(-σ) dw needs Re σ > 1/2, got σ = {}", fmt_c(sigma))));
    }
    f_factor_continued(sigma)
}

/// Meromorphic continuation of [`f_factor`]; poles where `σ - 1/2` is a
/// nonpositive integer.
pub fn f_factor_continued(sigma: Complex64) -> Result<Complex64> {
    check_finite(sigma, "sigma")?;
    let log = 0.5 * std::f64::consts::PI.ln() + ln_gamma(sigma - 0.5)? - ln_gamma(sigma)?;
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn continued_f_factor() {
        // |Γ(ir)|² = π/(r sinh πr), |Γ(1/2+ir)|² = π/cosh πr
        for r in [0.3, 2.0, 40.0] {
            let f = f_factor_continued(c(0.5, r)).unwrap();
            assert!((f.norm_sqr() - PI / (r * (PI * r).tanh())).abs() < 1e-12 * f.norm_sqr());
        }
        assert!(matches!(f_factor_continued(c(0.5, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn omega_values() {
        let o = EvalOptions::default();
        assert!((omega(c(2.0, 0.0), &o).unwrap() - PI / 6.0).norm() < 1e-14);
        assert!((omega(c(4.0, 0.0), &o).unwrap() - PI * PI / 90.0).norm() < 1e-14);
        // 40-digit reference: π^{-3/2} Γ(3/2) ζ(3)
        assert!((omega(c(3.0, 0.0), &o).unwrap().re - 0.191_313_298_015_585_17).abs() < 1e-14);
        let v = omega(c(0.3, 4.0), &o).unwrap();
        assert!((v - c(-0.041_618_077_906_720_50, 0.005_710_742_986_754_864)).norm() < 1e-13);
    }

    #[test]
    fn omega_poles_and_trivial_zeros() {
        let o = EvalOptions::default();
        assert!(matches!(omega(c(0.0, 0.0), &o), Err(Error::Pole { .. })));
        assert!(matches!(omega(c(1.0, 0.0), &o), Err(Error::Pole { .. })));
        // Ω(-2) = Ω(3) although Γ(-1) is a pole
        let lhs = omega(c(-2.0, 0.0), &o).unwrap();
        let rhs = omega(c(3.0, 0.0), &o).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((omega(c(-5.5, 3.0), &o).unwrap() - omega(c(6.5, -3.0), &o).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn f_factor_closed_forms() {
        assert!((f_factor(c(1.0, 0.0)).unwrap() - PI).norm() < 1e-14);
        assert!((f_factor(c(2.0, 0.0)).unwrap() - PI / 2.0).norm() < 1e-14);
        assert!((f_factor(c(1.5, 0.0)).unwrap() - 2.0).norm() < 1e-14);
        assert!(matches!(f_factor(c(0.5, 1.0)), Err(Error::Divergence(_))));
    }

    #[test]
    fn options_floor() {
        assert!(EvalOptions { target_abs_error: 1e-16, max_terms: 10 }.validate().is_err());
        assert!(EvalOptions { target_abs_error: f64::NAN, max_terms: 10 }.validate().is_err());
        assert!(EvalOptions::default().validate().is_ok());
    }
}
