//! Joint spatial detection densities for plane-wave pairs.
//!
//! With `ψ(x, X) = e^{iK₀X} e^{ik₀x} φ(x)` for each particle, the joint
//! density is `|φ(x)|²|φ(y)|²` for distinguishable particles and
//! `|φ(x)|²|φ(y)|² (1 ± cos((K₀-Q₀)(X-Y) + (k₀-q₀)(x-y)))` for bosons (+)
//! and fermions (-).

use rayon::prelude::*;

use crate::coefficients::{DiffractionCoefficients, Truncation};
use crate::error::{Error, Result};
use crate::momentum;
use crate::types::{GratingParams, SingleMode, Statistics};

/// Densities in `[-NEGATIVE_CLAMP, 0)` are rounding noise and reported as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

pub(crate) fn clamp_density(value: f64) -> Result<f64> {
    clamp_density_scaled(value, 1.0)
}

/// As [`clamp_density`] with the tolerance multiplied by `max(1, scale)`,
/// for densities whose individual terms are much larger than one.
pub(crate) fn clamp_density_scaled(value: f64, scale: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_CLAMP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity { value })
    }
}

/// Density along a detector scan, `values[i]` taken at `grid[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPattern {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Factor already applied to `values`; divide by it to recover raw densities.
    pub normalization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialModel {
    coeffs: DiffractionCoefficients,
    a: SingleMode,
    b: SingleMode,
}

impl SpatialModel {
    pub fn new(
        grating: &GratingParams,
        truncation: Truncation,
        a: SingleMode,
        b: SingleMode,
    ) -> Result<Self> {
        Ok(Self::with_coefficients(
            DiffractionCoefficients::new(grating, truncation)?,
            a,
            b,
        ))
    }

    pub fn with_coefficients(
        coeffs: DiffractionCoefficients,
        a: SingleMode,
        b: SingleMode,
    ) -> Self {
        SpatialModel { coeffs, a, b }
    }

    pub fn coefficients(&self) -> &DiffractionCoefficients {
        &self.coeffs
    }

    pub fn grating(&self) -> &GratingParams {
        self.coeffs.grating()
    }

    pub fn modes(&self) -> (SingleMode, SingleMode) {
        (self.a, self.b)
    }

    /// The same pair with the particle labels exchanged.
    pub fn swapped(&self) -> Self {
        SpatialModel {
            coeffs: self.coeffs.clone(),
            a: self.b,
            b: self.a,
        }
    }

    pub fn phi_abs2(&self, x: f64) -> f64 {
        self.coeffs.phi(x).norm_sqr()
    }

    pub(crate) fn raw_density(
        &self,
        x: f64,
        y: f64,
        big_x: f64,
        big_y: f64,
        stats: Statistics,
    ) -> f64 {
        let direct = self.phi_abs2(x) * self.phi_abs2(y);
        match stats.exchange_sign() {
            None => direct,
            Some(sign) => {
                let phase = (self.a.big_k0 - self.b.big_k0) * (big_x - big_y)
                    + (self.a.k0 - self.b.k0) * (x - y);
                direct * (1.0 + sign * phase.cos())
            }
        }
    }

    /// Joint detection density at `(x, X)` and `(y, Y)`, unnormalized.
    pub fn joint_density(
        &self,
        x: f64,
        y: f64,
        big_x: f64,
        big_y: f64,
        stats: Statistics,
    ) -> Result<f64> {
        clamp_density(self.raw_density(x, y, big_x, big_y, stats))
    }

    /// Long-window mean over `x` of `|φ(x)|² cos((k₀-q₀)(x - y))`.
    ///
    /// Only Fourier components of `|φ|²` at `2jk_L = ±(k₀-q₀)` survive the
    /// average, so the result vanishes unless `(k₀-q₀)/2k_L` is an integer.
    pub fn cross_term_mean(&self, y_fixed: f64) -> f64 {
        let res = momentum::resonance(
            &self.a,
            &self.b,
            self.grating(),
            momentum::DEFAULT_RESONANCE_TOL,
        );
        match res.n {
            None => 0.0,
            Some(n) => {
                let delta = self.a.k0 - self.b.k0;
                let c = self.coeffs.fourier_coefficient(-n);
                (c * num_complex::Complex64::from_polar(1.0, delta * y_fixed)).re
            }
        }
    }

    /// Factor bringing the identical-particle density onto the
    /// distinguishable one's mean: `Σ|b_n|² / (Σ|b_n|² ± I)`.
    ///
    /// Exactly 1 for distinguishable pairs and whenever `I` vanishes. A
    /// density that is identically zero (fermions with `k₀ = q₀`) is left unscaled.
    pub fn normalization_constant(&self, y_fixed: f64, stats: Statistics) -> f64 {
        let Some(sign) = stats.exchange_sign() else {
            return 1.0;
        };
        let weight = self.coeffs.norm_sqr_sum();
        let denom = weight + sign * self.cross_term_mean(y_fixed);
        if denom <= NEGATIVE_CLAMP * weight {
            1.0
        } else {
            weight / denom
        }
    }

    /// Scan `x` over `grid` with the second detector at `y_fixed` and `X = Y`.
    ///
    /// Values are scaled so the long-window mean over `x` is one: the
    /// distinguishable baseline sits at 1 and identical-particle patterns
    /// carry the [`Self::normalization_constant`] correction.
    pub fn pattern_scan(
        &self,
        y_fixed: f64,
        grid: &[f64],
        stats: Statistics,
    ) -> Result<SpatialPattern> {
        validate_grid(grid)?;
        let baseline = self.phi_abs2(y_fixed) * self.coeffs.norm_sqr_sum();
        if baseline.is_nan() || baseline <= NEGATIVE_CLAMP {
            return Err(Error::Numerical(format!(
                "|φ(y)|² vanishes at y = {y_fixed}; pattern cannot be normalized"
            )));
        }
        let normalization = self.normalization_constant(y_fixed, stats) / baseline;
        let values = grid
            .par_iter()
            .map(|&x| {
                self.joint_density(x, y_fixed, 0.0, 0.0, stats)
                    .map(|v| v * normalization)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpatialPattern {
            grid: grid.to_vec(),
            values,
            normalization,
        })
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("scan grid is empty".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "scan grid contains non-finite positions".into(),
        ));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter(
            "scan grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}

/// `(max - min) / (max + min)` over the scanned values.
///
/// The scan should span at least two periods of its slowest oscillation for
/// the extrema to be representative.
pub fn visibility(pattern: &SpatialPattern) -> Result<f64> {
    let max = pattern
        .values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = pattern.values.iter().copied().fold(f64::INFINITY, f64::min);
    let total = max + min;
    if total.is_nan() || total <= 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    Ok((max - min) / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn model(w: f64, t: Truncation, k0: f64, q0: f64) -> SpatialModel {
        SpatialModel::new(
            &GratingParams::new(w, 1.0).unwrap(),
            t,
            SingleMode::new(k0, 0.0).unwrap(),
            SingleMode::new(q0, 0.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fermions_never_coincide() {
        let m = SpatialModel::new(
            &GratingParams::new(0.8, 1.0).unwrap(),
            Truncation::Auto,
            SingleMode::new(0.3, 1.1).unwrap(),
            SingleMode::new(-1.7, 0.4).unwrap(),
        )
        .unwrap();
        for x in [-2.0, 0.0, 0.37, 5.0] {
            assert_eq!(
                m.joint_density(x, x, 1.5, 1.5, Statistics::Fermion)
                    .unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn fermions_with_equal_axial_momenta_vanish() {
        let m = SpatialModel::new(
            &GratingParams::new(0.5, 1.0).unwrap(),
            Truncation::Fixed(2),
            SingleMode::new(0.6, 2.0).unwrap(),
            SingleMode::new(0.6, -1.0).unwrap(),
        )
        .unwrap();
        for (x, y) in [(0.0, 1.0), (-3.0, 2.2), (0.4, 0.41)] {
            assert_eq!(
                m.joint_density(x, y, 0.7, 0.7, Statistics::Fermion)
                    .unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn boson_coincidence_is_fourth_power() {
        let m = model(0.2, Truncation::Fixed(1), 0.9, -0.9);
        for x in [0.0, 0.3, 1.1] {
            let p = m.phi_abs2(x);
            let d = m.joint_density(x, x, 0.0, 0.0, Statistics::Boson).unwrap();
            assert!((d - 2.0 * p * p).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_strength_is_flat() {
        let m = model(0.0, Truncation::Auto, 0.9, -0.9);
        for x in [-1.0, 0.0, 2.0] {
            assert_eq!(
                m.joint_density(x, 0.5, 0.0, 0.0, Statistics::Distinguishable)
                    .unwrap(),
                1.0
            );
        }
        let grid = linspace(-5.0, 5.0, 101);
        let p = m
            .pattern_scan(0.0, &grid, Statistics::Distinguishable)
            .unwrap();
        assert_eq!(visibility(&p).unwrap(), 0.0);
    }

    #[test]
    fn normalization_constant_examples() {
        let m = model(0.2, Truncation::Auto, 0.9, -0.9);
        assert_eq!(
            m.normalization_constant(0.0, Statistics::Distinguishable),
            1.0
        );
        assert_eq!(m.cross_term_mean(0.0), 0.0);
        assert_eq!(m.normalization_constant(0.0, Statistics::Boson), 1.0);
        assert_eq!(m.normalization_constant(0.0, Statistics::Fermion), 1.0);
    }

    // The cross term and the exchange cosine share the period 10π when
    // k₀ - q₀ = 1.8 and k_L = 1, so one common period is an exact average.
    #[test]
    fn off_resonant_cross_term_averages_out() {
        for t in [Truncation::Auto, Truncation::Fixed(1)] {
            let m = model(0.2, t, 0.9, -0.9);
            let d = 10.0 * PI;
            let r = oracle::integrate(|x| m.phi_abs2(x) * (1.8 * x).cos(), 0.0, d, 1e-12);
            assert!((r.value / d).abs() < 1e-10);
            for stats in [Statistics::Boson, Statistics::Fermion] {
                let ident =
                    oracle::integrate(|x| m.raw_density(x, 0.0, 0.0, 0.0, stats), 0.0, d, 1e-12);
                let dis = oracle::integrate(
                    |x| m.raw_density(x, 0.0, 0.0, 0.0, Statistics::Distinguishable),
                    0.0,
                    d,
                    1e-12,
                );
                assert!(((ident.value - dis.value) / d).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn resonant_cross_term_matches_quadrature() {
        // k₀ - q₀ = 4 = 2·2·k_L picks the second Fourier component of |φ|².
        for t in [Truncation::Fixed(1), Truncation::Fixed(3), Truncation::Auto] {
            for w in [0.2, 1.5] {
                let m = model(w, t, 2.0, -2.0);
                for y in [0.0, 0.3] {
                    let d = 2.0 * PI;
                    let q =
                        oracle::integrate(|x| m.phi_abs2(x) * (4.0 * (x - y)).cos(), 0.0, d, 1e-13);
                    assert!((m.cross_term_mean(y) - q.value / d).abs() < 1e-11);
                }
            }
        }
        // first order: |φ|² = J₀² + 2J₁² + 2J₁² cos 4x, so I(0) = J₁(0.2)²
        let m = model(0.2, Truncation::Fixed(1), 2.0, -2.0);
        let j1 = m.coefficients().bessel(1);
        assert!((m.cross_term_mean(0.0) - j1 * j1).abs() < 1e-16);
        assert!(m.normalization_constant(0.0, Statistics::Boson) < 1.0);
        assert!(m.normalization_constant(0.0, Statistics::Fermion) > 1.0);
    }

    #[test]
    fn equal_momenta_fermions_are_left_unscaled() {
        let m = model(0.4, Truncation::Auto, 0.5, 0.5);
        assert_eq!(m.normalization_constant(0.0, Statistics::Fermion), 1.0);
        assert!((m.normalization_constant(0.0, Statistics::Boson) - 0.5).abs() < 1e-12);
        let grid = linspace(-3.0, 3.0, 31);
        let p = m.pattern_scan(0.0, &grid, Statistics::Fermion).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert_eq!(visibility(&p), Err(Error::UndefinedVisibility));
    }

    #[test]
    fn first_order_visibilities() {
        let m = model(0.2, Truncation::Fixed(1), 0.9, -0.9);
        let grid = linspace(-10.0, 10.0, 2001);
        let dis = m
            .pattern_scan(0.0, &grid, Statistics::Distinguishable)
            .unwrap();
        let v = visibility(&dis).unwrap();
        let j1 = m.coefficients().bessel(1);
        let j0 = m.coefficients().bessel(0);
        // |φ|² = J₀² + 2J₁² + 2J₁² cos 4x at first order
        let expected = 2.0 * j1 * j1 / (j0 * j0 + 2.0 * j1 * j1);
        // a 0.01 grid misses the extrema of cos 4x by up to 2e-4 of the amplitude
        assert!((v - expected).abs() < 2e-4 * expected);
        let on_extrema = linspace(0.0, 2.0 * PI, 17);
        let exact = m
            .pattern_scan(0.0, &on_extrema, Statistics::Distinguishable)
            .unwrap();
        assert!((visibility(&exact).unwrap() - expected).abs() < 1e-12);
        assert!((v - 0.02).abs() < 0.005);
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let p = m.pattern_scan(0.0, &grid, stats).unwrap();
            assert!((visibility(&p).unwrap() - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn converged_distinguishable_pattern_is_flat() {
        let m = model(0.2, Truncation::Auto, 0.9, -0.9);
        let grid = linspace(-10.0, 10.0, 401);
        let dis = m
            .pattern_scan(0.0, &grid, Statistics::Distinguishable)
            .unwrap();
        assert!(visibility(&dis).unwrap() < 1e-13);
    }

    #[test]
    fn grid_validation() {
        let m = model(0.2, Truncation::Auto, 0.9, -0.9);
        assert!(m.pattern_scan(0.0, &[], Statistics::Boson).is_err());
        assert!(m.pattern_scan(0.0, &[1.0, 1.0], Statistics::Boson).is_err());
        assert!(m
            .pattern_scan(0.0, &[0.0, f64::NAN], Statistics::Boson)
            .is_err());
    }

    #[test]
    fn clamp_policy() {
        assert_eq!(clamp_density(-5e-13).unwrap(), 0.0);
        assert!(matches!(
            clamp_density(-2e-12),
            Err(Error::NegativeDensity { .. })
        ));
    }

    proptest! {
        #[test]
        fn exchange_symmetry(
            w in 0.0f64..3.0, k0 in -3.0f64..3.0, q0 in -3.0f64..3.0,
            kk in -2.0f64..2.0, qq in -2.0f64..2.0,
            x in -10.0f64..10.0, y in -10.0f64..10.0,
            bx in -5.0f64..5.0, by in -5.0f64..5.0,
        ) {
            let m = SpatialModel::new(
                &GratingParams::new(w, 1.3).unwrap(),
                Truncation::Auto,
                SingleMode::new(k0, kk).unwrap(),
                SingleMode::new(q0, qq).unwrap(),
            ).unwrap();
            let s = m.swapped();
            for stats in Statistics::ALL {
                prop_assert_eq!(
                    m.joint_density(x, y, bx, by, stats).unwrap(),
                    s.joint_density(y, x, by, bx, stats).unwrap()
                );
            }
        }

        #[test]
        fn boson_fermion_complementarity(
            w in 0.0f64..3.0, k0 in -3.0f64..3.0, q0 in -3.0f64..3.0,
            x in -10.0f64..10.0, y in -10.0f64..10.0, nmax in 1usize..6,
        ) {
            let m = model(w, Truncation::Fixed(nmax), k0, q0);
            let b = m.joint_density(x, y, 0.0, 0.0, Statistics::Boson).unwrap();
            let f = m.joint_density(x, y, 0.0, 0.0, Statistics::Fermion).unwrap();
            let d = m.joint_density(x, y, 0.0, 0.0, Statistics::Distinguishable).unwrap();
            prop_assert!((b + f - 2.0 * d).abs() < 1e-12);
            let bb = m.joint_density(x, x, 0.0, 0.0, Statistics::Boson).unwrap();
            let dd = m.joint_density(x, x, 0.0, 0.0, Statistics::Distinguishable).unwrap();
            prop_assert!((bb - 2.0 * dd).abs() < 1e-12);
        }
    }
}
