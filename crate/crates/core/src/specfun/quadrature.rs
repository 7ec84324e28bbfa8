use num_complex::Complex64;

use super::{check_finite, fmt_c};
use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand on
/// `[a, b]`, bisecting until the Kronrod–Gauss difference is below `tol`.
pub fn integrate_gauss_kronrod<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<Complex64> {
    fn recurse<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<Complex64> {
        let (value, err) = gk15(f, a, b);
        if err <= tol {
            return Ok(value);
        }
        if depth == 0 {
            return Err(Error::Budget { needed: usize::MAX, limit: 0 });
        }
        let mid = 0.5 * (a + b);
        Ok(recurse(f, a, mid, 0.5 * tol, depth - 1)? + recurse(f, mid, b, 0.5 * tol, depth - 1)?)
    }
    recurse(&f, a, b, tol, max_depth)
}

/// Quadrature route to `F(σ) = ∫_R (1+w²)^{-σ} dw`, independent of the Gamma
/// closed form.
///
/// `2 ∫_0^W` is integrated numerically; the tail `2 ∫_W^∞` uses the binomial
/// expansion `(1+w²)^{-σ} = Σ_k C(-σ,k) w^{-2σ-2k}`, which converges
/// geometrically for `W > 1`.
pub fn f_factor_quadrature(sigma: Complex64) -> Result<Complex64> {
    check_finite(sigma, "sigma")?;
    if sigma.re <= 0.5 {
        return Err(Error::Divergence(format!("∫(1+w²)^(-σ) dw needs Re σ > 1/2, got σ = {}", fmt_c(sigma))));
    }
    const CUT: f64 = 8.0;
    let body = integrate_gauss_kronrod(|w| (-sigma * (1.0 + w * w).ln()).exp(), 0.0, CUT, 1e-13, 30)?;

    let mut tail = Complex64::new(0.0, 0.0);
    let mut binom = Complex64::new(1.0, 0.0); // C(-σ, k)
    let ln_cut = CUT.ln();
    for k in 0..200 {
        let exponent = -2.0 * sigma - 2.0 * k as f64 + 1.0; // ∫_W^∞ w^{-2σ-2k} dw = W^{e} / (-e)
        let term = binom * (exponent * ln_cut).exp() / (-exponent);
        tail += term;
        if term.norm() < 1e-17 {
            break;
        }
        binom *= -(sigma + k as f64) / (k as f64 + 1.0);
    }
    Ok(2.0 * (body + tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_and_exponentials() {
        let v = integrate_gauss_kronrod(|x| Complex64::new(x * x, 0.0), 0.0, 3.0, 1e-14, 10).unwrap();
        assert!((v.re - 9.0).abs() < 1e-13);
        let v = integrate_gauss_kronrod(|x| Complex64::new(0.0, x).exp(), 0.0, PI, 1e-13, 20).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn quadrature_closed_forms() {
        assert!((f_factor_quadrature(Complex64::new(1.0, 0.0)).unwrap().re - PI).abs() < 1e-11);
        assert!((f_factor_quadrature(Complex64::new(2.0, 0.0)).unwrap().re - PI / 2.0).abs() < 1e-11);
        assert!((f_factor_quadrature(Complex64::new(1.5, 0.0)).unwrap().re - 2.0).abs() < 1e-11);
        assert!(f_factor_quadrature(Complex64::new(0.4, 0.0)).is_err());
    }
}
