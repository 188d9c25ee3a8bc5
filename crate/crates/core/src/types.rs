use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Standing-wave grating: interaction strength `w = V₀t/2ħ` and light wavenumber `k_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingParams {
    pub w: f64,
    pub kl: f64,
}

impl GratingParams {
    pub fn new(w: f64, kl: f64) -> Result<Self> {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "w must be finite and >= 0, got {w}"
            )));
        }
        if !kl.is_finite() || kl <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "k_L must be finite and > 0, got {kl}"
            )));
        }
        Ok(GratingParams { w, kl })
    }

    /// Spatial period `2π/k_L` of the optical field.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.kl
    }
}

/// Plane-wave initial state with wavenumbers along (`k0`) and across (`big_k0`) the grating axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleMode {
    pub k0: f64,
    pub big_k0: f64,
}

impl SingleMode {
    pub fn new(k0: f64, big_k0: f64) -> Result<Self> {
        if !k0.is_finite() || !big_k0.is_finite() {
            return Err(Error::InvalidParameter(
                "mode wavenumbers must be finite".into(),
            ));
        }
        Ok(SingleMode { k0, big_k0 })
    }
}

/// Gaussian distribution of initial wavenumbers: center `Λ`, width `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMode {
    pub center: f64,
    pub width: f64,
}

impl GaussianMode {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter("mode center must be finite".into()));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mode width must be > 0, got {width}"
            )));
        }
        Ok(GaussianMode { center, width })
    }

    /// Unit-L² momentum profile `π^{-1/4} σ^{-1/2} exp(-(k-Λ)²/2σ²)`.
    pub fn profile(&self, k: f64) -> f64 {
        let u = (k - self.center) / self.width;
        (-0.5 * u * u).exp() / (std::f64::consts::PI.sqrt() * self.width).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Distinguishable,
    Boson,
    Fermion,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [
        Statistics::Distinguishable,
        Statistics::Boson,
        Statistics::Fermion,
    ];

    /// +1 for bosons, -1 for fermions, `None` for distinguishable pairs.
    pub fn exchange_sign(self) -> Option<f64> {
        match self {
            Statistics::Distinguishable => None,
            Statistics::Boson => Some(1.0),
            Statistics::Fermion => Some(-1.0),
        }
    }

    pub fn is_identical(self) -> bool {
        self != Statistics::Distinguishable
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Distinguishable => "dis",
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dis" | "distinguishable" => Ok(Statistics::Distinguishable),
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistics '{other}'"
            ))),
        }
    }
}
