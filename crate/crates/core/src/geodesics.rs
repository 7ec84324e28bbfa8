//! Scattering geodesics on the modular surface `SL(2,Z)\H`.
//!
//! A scattering geodesic leaves the cusp and returns to it. Classes are the
//! double cosets `Γ∞ \ γ / Γ∞` with `γ ∉ Γ∞`, labelled by `c > 0` and
//! `a mod c` coprime to `c`; the sojourn time of a class is `2 ln c`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{bruhat_decompose, sojourn_vector, UnimodularMatrix};
use crate::specfun::{self, check_finite, fmt_c, integrate_gauss_kronrod};
use SojournMode::{Hyperbolic, Killing};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicClass {
    pub c: u64,
    pub a_mod_c: u64,
    pub sojourn_time: f64,
}

impl GeodesicClass {
    pub fn new(c: u64, a: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::NoScatteringGeodesic("c = 0 lies in the cusp stabilizer".into()));
        }
        let a_mod_c = a.rem_euclid(c as i64) as u64;
        if a_mod_c.gcd(&c) != 1 {
            return Err(Error::domain(format!("gcd({a}, {c}) != 1")));
        }
        Ok(GeodesicClass { c, a_mod_c, sojourn_time: hyperbolic_sojourn(c) })
    }
}

fn hyperbolic_sojourn(c: u64) -> f64 {
    2.0 * (c as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnumerationRow {
    pub c: u64,
    pub multiplicity: u64,
    pub sojourn_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationTable {
    pub rows: Vec<EnumerationRow>,
    pub c_max: u64,
}

impl EnumerationTable {
    pub fn total_classes(&self) -> u64 {
        self.rows.iter().map(|r| r.multiplicity).sum()
    }
}

/// Classes `(c, a mod c)` for one `c`.
pub fn classes_with_denominator(c: u64) -> Vec<GeodesicClass> {
    (0..c)
        .filter(|a| a.gcd(&c) == 1)
        .map(|a| GeodesicClass { c, a_mod_c: a, sojourn_time: hyperbolic_sojourn(c) })
        .collect()
}

/// Counts the classes `(c, a mod c)` for every `c <= c_max`.
pub fn enumerate_classes(c_max: u64) -> Result<EnumerationTable> {
    if c_max == 0 {
        return Err(Error::domain("c_max must be at least 1"));
    }
    let rows = (1..=c_max)
        .into_par_iter()
        .map(|c| EnumerationRow {
            c,
            multiplicity: (0..c).filter(|a| a.gcd(&c) == 1).count() as u64,
            sojourn_time: hyperbolic_sojourn(c),
        })
        .collect();
    Ok(EnumerationTable { rows, c_max })
}

/// Independent class count: every `γ = [[a,b],[c,d]] ∈ SL(2,Z)` with
/// `0 < |c| <= c_max` and `|a|, |d| <= |c|`, reduced modulo `±1` and modulo
/// `Γ∞` on both sides, i.e. to `(c, a mod c, d mod c)` with `c > 0`.
/// Returns the number of distinct classes per `c`.
pub fn brute_force_class_counts(c_max: u64) -> BTreeMap<u64, u64> {
    let mut seen: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    let cm = c_max as i64;
    for c in (-cm..=cm).filter(|c| *c != 0) {
        for a in -c.abs()..=c.abs() {
            for d in -c.abs()..=c.abs() {
                // b = (ad - 1)/c must be an integer
                if (a * d - 1) % c != 0 {
                    continue;
                }
                let (a, c, d) = if c < 0 { (-a, -c, -d) } else { (a, c, d) };
                seen.insert((c, a.rem_euclid(c), d.rem_euclid(c)));
            }
        }
    }
    let mut counts = BTreeMap::new();
    for (c, _, _) in seen {
        *counts.entry(c as u64).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SojournMode {
    /// `2 ln|c|`, the hyperbolic-metric length the Dirichlet series uses.
    Hyperbolic,
    /// Killing norm of the Bruhat sojourn vector, `2√2 ln|c|` in rank one.
    Killing,
}

impl std::str::FromStr for SojournMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperbolic" => Ok(SojournMode::Hyperbolic),
            "killing" => Ok(SojournMode::Killing),
            other => Err(Error::domain(format!("unknown sojourn mode '{other}'"))),
        }
    }
}

/// Sojourn time read off the Bruhat middle factor `a = diag(1/|c|, |c|)`.
pub fn sojourn_time_from_matrix(g: &UnimodularMatrix, mode: SojournMode) -> Result<f64> {
    if g.dim() != 2 {
        return Err(Error::domain(format!("expected a 2x2 matrix, got {}x{}", g.dim(), g.dim())));
    }
    if g.get(1, 0).is_zero() {
        return Err(Error::NoScatteringGeodesic(format!("{g} is upper triangular")));
    }
    let h = sojourn_vector(&bruhat_decompose(g)).h;
    match mode {
        Hyperbolic => Ok((h[1] - h[0]).abs()),
        Killing => crate::exactlin::killing_norm(&h),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingTime {
    pub total: f64,
    pub normalized: f64,
}

/// Arclength of the geodesic from `∞` to `a/c` between the horocycle
/// `y = Y` and the image horoball `γ·{y > Y}`, by direct quadrature.
///
/// The image horocycle is rebuilt from three mapped points of `y = Y`
/// (in coordinates centered at `a/c`, where `γz - a/c = -1/(c(cz+d))`),
/// so its size and tangency point are not assumed.
pub fn horoball_crossing_time(c: u64, a: i64, y_cut: f64) -> Result<CrossingTime> {
    if c == 0 {
        return Err(Error::NoScatteringGeodesic("c = 0 lies in the cusp stabilizer".into()));
    }
    if !(y_cut >= 2.0 && y_cut.is_finite()) {
        return Err(Error::Geometry(format!("horoball height must be >= 2, got {y_cut}")));
    }
    let ci = c as i64;
    let (g, inv, _) = extended_gcd(a.rem_euclid(ci), ci);
    if g != 1 {
        return Err(Error::domain(format!("gcd({a}, {c}) != 1")));
    }
    let d = inv.rem_euclid(ci) as f64;
    let cf = c as f64;

    // three points of y = Y mapped by γ, relative to a/c
    let image = |x: f64| -> Complex64 {
        let z = Complex64::new(x, y_cut);
        -1.0 / (cf * (cf * z + d))
    };
    let base = -d / cf;
    let pts = [image(base - y_cut), image(base + 0.3 * y_cut), image(base + 2.0 * y_cut)];
    let (center, radius) = circumcircle(pts)?;

    // the image horocycle must be tangent to the real axis
    if (center.im - radius).abs() > 1e-9 * radius {
        return Err(Error::Geometry(format!("image horocycle is not tangent to R: center {}, radius {radius:e}", fmt_c(center))));
    }
    // vertical line x = a/c (x = 0 here) meets the circle at its top if centered there
    let dx = center.re;
    if dx.abs() > radius {
        return Err(Error::Geometry("geodesic misses the image horoball".into()));
    }
    let entry = center.im + (radius * radius - dx * dx).sqrt();
    if entry >= y_cut {
        return Err(Error::Geometry(format!("horoballs overlap: entry height {entry} >= {y_cut}")));
    }

    // ds = dy/y along x = const, integrated over geometric panels
    let mut total = 0.0;
    let mut lo = entry;
    while lo < y_cut {
        let hi = (lo * 8.0).min(y_cut);
        total += integrate_gauss_kronrod(|y| Complex64::new(1.0 / y, 0.0), lo, hi, 1e-14, 40)?.re;
        lo = hi;
    }
    Ok(CrossingTime { total, normalized: total - 2.0 * y_cut.ln() })
}

fn circumcircle(p: [Complex64; 3]) -> Result<(Complex64, f64)> {
    let (a, b, c) = (p[0], p[1], p[2]);
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d == 0.0 {
        return Err(Error::Geometry("degenerate horocycle image".into()));
    }
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let center = Complex64::new(ux, uy);
    Ok((center, (a - center).norm()))
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// `F(σ) Σ_T e^{-Tσ}` over the enumerated classes with `c <= c_max`.
pub fn guillemin_sum(sigma: Complex64, c_max: u64) -> Result<Complex64> {
    check_finite(sigma, "σ")?;
    if sigma.re <= 1.0 {
        return Err(Error::Divergence(format!("sojourn-time series needs Re σ > 1, got σ = {}", fmt_c(sigma))));
    }
    let table = enumerate_classes(c_max)?;
    let terms: Vec<Complex64> = table
        .rows
        .par_iter()
        .map(|row| row.multiplicity as f64 * (-row.sojourn_time * sigma).exp())
        .collect();
    let series: Complex64 = terms.iter().rev().sum();
    Ok(specfun::f_factor(sigma)? * series)
}
