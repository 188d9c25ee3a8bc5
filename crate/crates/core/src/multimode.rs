//! Gaussian multi-mode states.
//!
//! Each particle starts in a Gaussian spread of wavenumbers with center `Λ`
//! and width `σ`. In position space the grating output is the central
//! plane-wave result modulated by `e^{-x²σ²/2}`; in momentum space it is
//! the comb `Σ_n b_n f(k - 2nk_L)` of shifted copies of the initial profile.
//! Overall constants of the Gaussian integrals are dropped in position space.

use num_complex::Complex64;

use crate::coefficients::{DiffractionCoefficients, Truncation};
use crate::error::Result;
use crate::spatial::{clamp_density, clamp_density_scaled};
use crate::types::{GaussianMode, GratingParams, Statistics};

/// `e^{-x²σ²/2} e^{iΛx} φ(x)`.
pub fn multimode_wavefunction_envelope(
    x: f64,
    mode: &GaussianMode,
    coeffs: &DiffractionCoefficients,
) -> Complex64 {
    let s = x * mode.width;
    (-0.5 * s * s).exp() * Complex64::from_polar(1.0, mode.center * x) * coeffs.phi(x)
}

/// `Φ(k) = Σ_n b_n f(k - 2nk_L)` with the unit-norm profile `f` of `mode`.
pub fn multimode_momentum_amplitude(
    k: f64,
    mode: &GaussianMode,
    coeffs: &DiffractionCoefficients,
) -> Complex64 {
    let two_kl = 2.0 * coeffs.grating().kl;
    coeffs
        .iter()
        .map(|(n, b)| b * mode.profile(k - n as f64 * two_kl))
        .sum()
}

/// `|Φ(k)|²`, cross terms between neighbouring peaks included. Integrates to `Σ|b_n|²`.
pub fn multimode_momentum_density(
    k: f64,
    mode: &GaussianMode,
    coeffs: &DiffractionCoefficients,
) -> f64 {
    multimode_momentum_amplitude(k, mode, coeffs).norm_sqr()
}

/// `Re(Φ_a*(k) Φ_b*(q) Φ_a(q) Φ_b(k))`, equal to the four-Gaussian sum
/// `Σ_{n,m,r,s} Re(b_n* b_m* b_r b_s) f_a(k-2nk_L) f_b(q-2mk_L) f_a(q-2rk_L) f_b(k-2sk_L)`.
pub fn multimode_exchange_term(
    k: f64,
    q: f64,
    a: &GaussianMode,
    b: &GaussianMode,
    coeffs: &DiffractionCoefficients,
) -> f64 {
    let at_k = multimode_momentum_amplitude(k, a, coeffs).conj()
        * multimode_momentum_amplitude(k, b, coeffs);
    let at_q = multimode_momentum_amplitude(q, b, coeffs).conj()
        * multimode_momentum_amplitude(q, a, coeffs);
    (at_k * at_q).re
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeModel {
    coeffs: DiffractionCoefficients,
    a: GaussianMode,
    b: GaussianMode,
}

impl MultimodeModel {
    pub fn new(
        grating: &GratingParams,
        truncation: Truncation,
        a: GaussianMode,
        b: GaussianMode,
    ) -> Result<Self> {
        Ok(MultimodeModel {
            coeffs: DiffractionCoefficients::new(grating, truncation)?,
            a,
            b,
        })
    }

    pub fn coefficients(&self) -> &DiffractionCoefficients {
        &self.coeffs
    }

    pub fn modes(&self) -> (GaussianMode, GaussianMode) {
        (self.a, self.b)
    }

    pub fn swapped(&self) -> Self {
        MultimodeModel {
            coeffs: self.coeffs.clone(),
            a: self.b,
            b: self.a,
        }
    }

    /// Joint spatial density
    /// `½e^{-x²σ²-y²μ²}P + ½e^{-y²σ²-x²μ²}P ± e^{-(x²+y²)(σ²+μ²)/2} P cos((x-y)(Λ-Υ))`
    /// with `P = |φ(x)|²|φ(y)|²`.
    ///
    /// Distinguishable pairs get the unsymmetrized product `e^{-x²σ²-y²μ²}P`
    /// without the ½, so bosons at `x = y` read exactly twice that value.
    pub fn joint_density(&self, x: f64, y: f64, stats: Statistics) -> Result<f64> {
        let (s2, m2) = (self.a.width * self.a.width, self.b.width * self.b.width);
        let p = self.coeffs.phi(x).norm_sqr() * self.coeffs.phi(y).norm_sqr();
        let direct = x * x * s2 + y * y * m2;
        let Some(sign) = stats.exchange_sign() else {
            return Ok((-direct).exp() * p);
        };
        let swapped = y * y * s2 + x * x * m2;
        let cross =
            (-(direct + swapped) / 2.0).exp() * ((x - y) * (self.a.center - self.b.center)).cos();
        clamp_density(p * (0.5 * (-direct).exp() + 0.5 * (-swapped).exp() + sign * cross))
    }

    pub fn exchange_term(&self, k: f64, q: f64) -> f64 {
        multimode_exchange_term(k, q, &self.a, &self.b, &self.coeffs)
    }

    /// Joint momentum density of one particle at `k` and the other at `q`:
    /// `|Φ_a(k)|²|Φ_b(q)|²` for distinguishable pairs, otherwise
    /// `½|Φ_a(k)Φ_b(q)|² + ½|Φ_a(q)Φ_b(k)|² ± exchange`.
    ///
    /// Narrow profiles make the terms of order `1/σ²`, so the rounding
    /// allowance for negative values scales with the direct part.
    pub fn joint_momentum_density(&self, k: f64, q: f64, stats: Statistics) -> Result<f64> {
        let ak = multimode_momentum_amplitude(k, &self.a, &self.coeffs);
        let bq = multimode_momentum_amplitude(q, &self.b, &self.coeffs);
        let Some(sign) = stats.exchange_sign() else {
            return Ok(ak.norm_sqr() * bq.norm_sqr());
        };
        let aq = multimode_momentum_amplitude(q, &self.a, &self.coeffs);
        let bk = multimode_momentum_amplitude(k, &self.b, &self.coeffs);
        let exchange = (ak.conj() * bk * (bq.conj() * aq)).re;
        let direct = 0.5 * ak.norm_sqr() * bq.norm_sqr() + 0.5 * aq.norm_sqr() * bk.norm_sqr();
        clamp_density_scaled(direct + sign * exchange, direct)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapRegime {
    WellSeparated,
    /// Peaks `2nk_L + Λ` and `2sk_L + Υ` coincide within the width, and so do
    /// `2mk_L + Υ` and `2rk_L + Λ`.
    Overlapping {
        ns: (i32, i32),
        mr: (i32, i32),
    },
}

fn witness(diff: i32, n_max: i32) -> (i32, i32) {
    let first = diff.signum() * diff.abs().min(n_max);
    (first, first - diff)
}

/// Whether exchange terms between the two Gaussian combs survive: some
/// `|2(n-s)k_L + Λ - Υ| ≤ σ` and some `|2(m-r)k_L - Λ + Υ| ≤ σ` with all
/// indices in `[-n_max, n_max]`. `σ` is the larger of the two widths.
pub fn classify_overlap(
    a: &GaussianMode,
    b: &GaussianMode,
    g: &GratingParams,
    n_max: usize,
) -> OverlapRegime {
    let sigma = a.width.max(b.width);
    let offset = a.center - b.center;
    let span = 2 * n_max as i32;
    let closest = |target: f64| {
        (-span..=span)
            .map(|d| (d, (2.0 * d as f64 * g.kl + target).abs()))
            .filter(|&(_, gap)| gap <= sigma)
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.abs().cmp(&y.0.abs())))
            .map(|(d, _)| d)
    };
    match (closest(offset), closest(-offset)) {
        (Some(ns), Some(mr)) => OverlapRegime::Overlapping {
            ns: witness(ns, n_max as i32),
            mr: witness(mr, n_max as i32),
        },
        _ => OverlapRegime::WellSeparated,
    }
}
