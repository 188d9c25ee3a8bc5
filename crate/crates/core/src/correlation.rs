//! Period-averaged pair correlation `C(η) = (1/d) ∫₀^d |Ψ(x, X, x+η, X)|² dx`.
//!
//! Two independent routes: adaptive quadrature of the joint density, and the
//! closed form
//! `C(η) = (1 ± cos((q₀-k₀)η)) · (D² + 2 Σ_𝒩 (-1)^{n+m+r+s} J_n J_m J_r J_s cos(2(r-s)k_L η))`
//! where `𝒩 = {m > n, s > r, m - n = ±(r - s)}` and `D = Σ_n J_n²` (unity
//! for a converged coefficient family).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::quad::{self, Options};
use crate::spatial::SpatialModel;
use crate::types::Statistics;

/// Absolute accuracy of [`correlation_quadrature`].
pub const QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationForm {
    Quadrature,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCurve {
    pub eta: Vec<f64>,
    pub values: Vec<f64>,
    pub form: CorrelationForm,
}

/// `C(η)` by adaptive Gauss-Kronrod quadrature over one optical period.
pub fn correlation_quadrature(model: &SpatialModel, eta: f64, stats: Statistics) -> Result<f64> {
    let d = model.grating().period();
    let opts = Options {
        abs_tol: 0.1 * QUADRATURE_TOL * d,
        ..Options::default()
    };
    let r = quad::integrate(
        |x| model.raw_density(x, x + eta, 0.0, 0.0, stats),
        0.0,
        d,
        &opts,
    )?;
    Ok(r.value / d)
}

/// Closed form with the constrained index sum collected once per model.
#[derive(Debug, Clone)]
pub struct ClosedCorrelation {
    diagonal: f64,
    /// `(s - r, Σ over 𝒩 with that separation)`.
    harmonics: Vec<(i32, f64)>,
    kl: f64,
    axial_offset: f64,
}

impl ClosedCorrelation {
    pub fn new(model: &SpatialModel) -> Self {
        let coeffs = model.coefficients();
        let nm = coeffs.n_max() as i32;
        let j = |n: i32| coeffs.bessel(n);
        let parity = |k: i32| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };

        let mut sums: BTreeMap<i32, f64> = BTreeMap::new();
        for n in -nm..=nm {
            for m in (n + 1)..=nm {
                for r in -nm..=nm {
                    // s > r together with m - n = ±(r - s) leaves s = r + (m - n).
                    let s = r + (m - n);
                    if s > nm {
                        break;
                    }
                    debug_assert!(s > r && (m - n == r - s || m - n == s - r));
                    let term = parity(n + m + r + s) * j(n) * j(m) * j(r) * j(s);
                    *sums.entry(s - r).or_insert(0.0) += term;
                }
            }
        }
        let d: f64 = coeffs.orders().map(|n| j(n) * j(n)).sum();
        let (a, b) = model.modes();
        ClosedCorrelation {
            diagonal: d * d,
            harmonics: sums.into_iter().collect(),
            kl: model.grating().kl,
            axial_offset: b.k0 - a.k0,
        }
    }

    /// Right-hand factor; depends only on `w` and `k_L` and has period `π/k_L`.
    pub fn grating_factor(&self, eta: f64) -> f64 {
        let two_kl_eta = 2.0 * self.kl * eta;
        self.diagonal
            + 2.0
                * self
                    .harmonics
                    .iter()
                    .map(|&(sep, amp)| amp * (sep as f64 * two_kl_eta).cos())
                    .sum::<f64>()
    }

    /// Left-hand factor `1 ± cos((q₀-k₀)η)`, or 1 for distinguishable pairs.
    pub fn exchange_factor(&self, eta: f64, stats: Statistics) -> f64 {
        match stats.exchange_sign() {
            None => 1.0,
            Some(sign) => 1.0 + sign * (self.axial_offset * eta).cos(),
        }
    }

    pub fn evaluate(&self, eta: f64, stats: Statistics) -> f64 {
        self.exchange_factor(eta, stats) * self.grating_factor(eta)
    }
}

pub fn correlation_closed(model: &SpatialModel, eta: f64, stats: Statistics) -> f64 {
    ClosedCorrelation::new(model).evaluate(eta, stats)
}

pub fn correlation_curve(
    model: &SpatialModel,
    etas: &[f64],
    stats: Statistics,
    form: CorrelationForm,
) -> Result<CorrelationCurve> {
    let values = match form {
        CorrelationForm::Closed => {
            let closed = ClosedCorrelation::new(model);
            etas.iter()
                .map(|&eta| closed.evaluate(eta, stats))
                .collect()
        }
        CorrelationForm::Quadrature => etas
            .par_iter()
            .map(|&eta| correlation_quadrature(model, eta, stats))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(CorrelationCurve {
        eta: etas.to_vec(),
        values,
        form,
    })
}
