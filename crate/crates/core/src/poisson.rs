//! Fourier analysis of `Φ(r) = C(1/2 + ir)` on the critical line.
//!
//! Formally `Φ(r) = F(1/2+ir) Σ_n φ(n) n^{-1-2ir}`, so the transform
//! `Φ̂(ζ) = ∫ Φ(r) e^{irζ} dr` is singular exactly at the sojourn times
//! `ζ = 2 ln n`. Numerically the singular support shows up as window-stable
//! peaks of a windowed FFT.
//!
//! `F(1/2+ir) ~ (ir)^{-1/2}` turns each sojourn time into a one-sided
//! singularity whose smoothed maximum sits about one bin past `T`. Dividing
//! the samples by `F` (a nonvanishing symbol, so the singular support is
//! unchanged) leaves `ζ(2ir)/ζ(1+2ir)`, whose transform is a sum of point
//! masses at `2 ln n` over a smooth background `~ e^{ζ/2}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Permutation;
use crate::scatmat::{Scattering, SpectralParameter3};
use crate::specfun::f_factor_continued;

/// Largest `r_max` for which sampled `Φ` keeps `|Φ| = 1` to 1e-8.
pub const R_MAX_LIMIT: f64 = 2000.0;
pub const MIN_COUNT: usize = 1 << 10;
/// Cut below which the `T = 0` peak of the `c = 1` class dominates.
pub const ZETA_CUT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Window {
    Gaussian { sigma: f64 },
    Hann,
    None,
}

impl Window {
    /// Gaussian with `σ = r_max/4`.
    pub fn default_gaussian(r_max: f64) -> Self {
        Window::Gaussian { sigma: r_max / 4.0 }
    }

    /// Weight at `r` for a grid on `[r_min, r_max]`.
    pub fn weight(&self, r: f64, r_min: f64, r_max: f64) -> f64 {
        match *self {
            Window::Gaussian { sigma } => {
                let x = (r - 0.5 * (r_min + r_max)) / sigma;
                (-0.5 * x * x).exp()
            }
            Window::Hann => {
                let t = (r - r_min) / (r_max - r_min);
                0.5 - 0.5 * (2.0 * PI * t).cos()
            }
            Window::None => 1.0,
        }
    }

    pub fn parse(name: &str, r_max: f64) -> Result<Self> {
        match name {
            "gaussian" => Ok(Self::default_gaussian(r_max)),
            "hann" => Ok(Window::Hann),
            "none" => Ok(Window::None),
            other => Err(Error::domain(format!("unknown window '{other}'"))),
        }
    }
}

/// Samples on the uniform grid `r_k = r_min + kΔr`, `k < count`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSamples {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
    pub values: Vec<Complex64>,
    pub window: Window,
    pub excluded_points: Vec<f64>,
    /// `max_k ||Φ(r_k)| - 1|`.
    pub unitarity_deviation: f64,
    /// Set once the samples have been divided by `F(1/2+ir)`.
    pub symbol_removed: bool,
}

impl SpectralSamples {
    /// Symmetric grid on `[-r_max, r_max]`. An even `count` puts `r = 0`
    /// halfway between the two central nodes.
    pub fn from_fn<F>(r_max: f64, count: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        check_grid(r_max, count)?;
        let dr = 2.0 * r_max / (count - 1) as f64;
        let values = (0..count)
            .into_par_iter()
            .map(|k| f(-r_max + k as f64 * dr))
            .collect::<Result<Vec<_>>>()?;
        let unitarity_deviation = values.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
        Ok(SpectralSamples {
            r_min: -r_max,
            r_max,
            count,
            values,
            window: Window::None,
            excluded_points: Vec::new(),
            unitarity_deviation,
            symbol_removed: false,
        })
    }

    /// Divides by `F(1/2+ir) = sqrt(π) Γ(ir)/Γ(1/2+ir)`, turning `Φ` into
    /// the critical-line Dirichlet part `ζ(2ir)/ζ(1+2ir)`.
    pub fn dirichlet_part(mut self) -> Result<Self> {
        if self.symbol_removed {
            return Ok(self);
        }
        let grid: Vec<f64> = self.grid().collect();
        for (v, r) in self.values.iter_mut().zip(grid) {
            *v /= f_factor_continued(Complex64::new(0.5, r))?;
        }
        self.symbol_removed = true;
        Ok(self)
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.count - 1) as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let dr = self.spacing();
        (0..self.count).map(move |k| self.r_min + k as f64 * dr)
    }
}

fn check_grid(r_max: f64, count: usize) -> Result<()> {
    if !(r_max > 0.0 && r_max <= R_MAX_LIMIT) {
        return Err(Error::domain(format!("r_max must lie in (0, {R_MAX_LIMIT}], got {r_max}")));
    }
    if count < MIN_COUNT || !count.is_power_of_two() {
        return Err(Error::domain(format!("count must be a power of two >= {MIN_COUNT}, got {count}")));
    }
    Ok(())
}

/// `Φ(r) = C(1/2 + ir)` sampled on `[-r_max, r_max]`.
pub fn sample_phi(r_max: f64, count: usize) -> Result<SpectralSamples> {
    sample_phi_with(&Scattering::standard(), r_max, count)
}

pub fn sample_phi_with(scattering: &Scattering<'_>, r_max: f64, count: usize) -> Result<SpectralSamples> {
    SpectralSamples::from_fn(r_max, count, |r| Ok(scattering.c_rank1(Complex64::new(0.5, r))?.value))
}

/// Transform on the dual grid `ζ_j = (j - N/2) Δζ`, `Δζ = 2π/(NΔr)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub zeta_min: f64,
    pub spacing: f64,
    pub values: Vec<Complex64>,
    /// Bin width `2π/(r_max - r_min)` of the source grid.
    pub resolution: f64,
}

impl Spectrum {
    pub fn zeta(&self, j: usize) -> f64 {
        self.zeta_min + j as f64 * self.spacing
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

/// `Φ̂(ζ_j) = Δr Σ_k w(r_k) Φ(r_k) e^{i r_k ζ_j}`.
pub fn windowed_fft(samples: &SpectralSamples) -> Spectrum {
    let n = samples.count;
    let dr = samples.spacing();
    let dz = 2.0 * PI / (n as f64 * dr);
    // e^{i r_k ζ_j} = e^{i r_min ζ_j} e^{2πi kj/N} (-1)^k
    let mut buf: Vec<Complex64> = samples
        .grid()
        .zip(&samples.values)
        .enumerate()
        .map(|(k, (r, v))| {
            let w = samples.window.weight(r, samples.r_min, samples.r_max);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            v * (w * sign)
        })
        .collect();
    let fft: Arc<dyn rustfft::Fft<f64>> = FftPlanner::new().plan_fft(n, FftDirection::Inverse);
    fft.process(&mut buf);
    let zeta_min = -((n / 2) as f64) * dz;
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let zeta = zeta_min + j as f64 * dz;
            v * Complex64::from_polar(dr, samples.r_min * zeta)
        })
        .collect();
    Spectrum { zeta_min, spacing: dz, values, resolution: 2.0 * PI / (samples.r_max - samples.r_min) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub location: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
    pub resolution: f64,
}

impl PeakReport {
    pub fn locations(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.location).collect()
    }
}

pub const DEFAULT_THRESHOLD: f64 = 5.0;
/// Half-width in `ζ` of the running median used as the background level.
pub const MEDIAN_HALF_WIDTH: f64 = 0.25;

/// Local maxima of `|Φ̂|` with `ζ > 0.25` above `threshold_ratio` times the
/// median magnitude within `±0.25` in `ζ`, refined by a parabola through the
/// three top bins. Maxima below `1e-9 · max|Φ̂|` are round-off.
pub fn detect_peaks(spectrum: &Spectrum, threshold_ratio: f64) -> Result<PeakReport> {
    if !(threshold_ratio > 0.0 && threshold_ratio.is_finite()) {
        return Err(Error::domain(format!("threshold ratio must be positive, got {threshold_ratio}")));
    }
    let mag = spectrum.magnitudes();
    let floor = mag.iter().copied().fold(0.0, f64::max) * 1e-9;
    let half = ((MEDIAN_HALF_WIDTH / spectrum.spacing).round() as usize).max(1);
    let local_median = |j: usize| {
        let mut window = mag[j.saturating_sub(half)..(j + half + 1).min(mag.len())].to_vec();
        let mid = window.len() / 2;
        *window.select_nth_unstable_by(mid, f64::total_cmp).1
    };

    let mut peaks = Vec::new();
    for j in 1..mag.len().saturating_sub(1) {
        let (l, m, r) = (mag[j - 1], mag[j], mag[j + 1]);
        if !(m > l && m >= r && m > floor && spectrum.zeta(j) > ZETA_CUT - spectrum.spacing) {
            continue;
        }
        if m <= threshold_ratio * local_median(j) {
            continue;
        }
        let curvature = l - 2.0 * m + r;
        let offset = if curvature < 0.0 { 0.5 * (l - r) / curvature } else { 0.0 };
        let location = spectrum.zeta(j) + offset * spectrum.spacing;
        if location > ZETA_CUT {
            peaks.push(Peak { location, magnitude: m - 0.25 * (l - r) * offset });
        }
    }
    Ok(PeakReport { peaks, resolution: spectrum.resolution })
}

/// `r = (η_a - η_b)/2` for the single inversion `(a, b)` of `w`.
pub fn sl3_reduce(w: &Permutation, eta: [f64; 3]) -> Result<f64> {
    let (a, b) = simple_pair(w)?;
    Ok(0.5 * (eta[a] - eta[b]))
}

/// `|C(w, iη) - Φ(r)|` with `r` from [`sl3_reduce`].
pub fn sl3_reduce_residual(w: &Permutation, eta: [f64; 3]) -> Result<f64> {
    let r = sl3_reduce(w, eta)?;
    let scattering = Scattering::standard();
    let lhs = scattering.c_rank2(w, &SpectralParameter3::imaginary(eta)?)?.value;
    let rhs = scattering.c_rank1(Complex64::new(0.5, r))?.value;
    Ok((lhs - rhs).norm())
}

fn simple_pair(w: &Permutation) -> Result<(usize, usize)> {
    match w.inversions().as_slice() {
        [pair] if w.len() == 3 => Ok(*pair),
        _ => Err(Error::domain(format!("{w} is not a simple transposition of S_3"))),
    }
}

/// Lifts one-variable sojourn peaks to the three-variable pattern:
/// `(T, T, 0)` for `(12)` and `(0, T, T)` for `(23)`.
pub fn sl3_pattern(w: &Permutation, report: &PeakReport) -> Result<Vec<[f64; 3]>> {
    let lift: fn(f64) -> [f64; 3] = match simple_pair(w)? {
        (0, 1) => |t| [t, t, 0.0],
        (1, 2) => |t| [0.0, t, t],
        _ => return Err(Error::domain(format!("unsupported permutation {w}"))),
    };
    Ok(report.peaks.iter().map(|p| lift(p.location)).collect())
}

/// Sample `Φ`, remove the `F` symbol, transform and detect peaks.
pub fn sojourn_peaks(r_max: f64, count: usize, window: Window, threshold_ratio: f64) -> Result<PeakReport> {
    sojourn_peaks_with(&Scattering::standard(), r_max, count, window, threshold_ratio)
}

pub fn sojourn_peaks_with(
    scattering: &Scattering<'_>,
    r_max: f64,
    count: usize,
    window: Window,
    threshold_ratio: f64,
) -> Result<PeakReport> {
    let samples = sample_phi_with(scattering, r_max, count)?.dirichlet_part()?.with_window(window);
    detect_peaks(&windowed_fft(&samples), threshold_ratio)
}

pub fn sl3_singular_support(w: &Permutation, r_max: f64, count: usize) -> Result<Vec<[f64; 3]>> {
    simple_pair(w)?;
    let report = sojourn_peaks(r_max, count, Window::default_gaussian(r_max), DEFAULT_THRESHOLD)?;
    sl3_pattern(w, &report)
}
