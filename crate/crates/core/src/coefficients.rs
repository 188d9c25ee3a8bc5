//! Diffraction coefficients `b_n = iⁿ e^{-iw} J_n(-w)` and the grating
//! factor `φ(x) = Σ_n b_n e^{i 2 n k_L x}` they define.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun;
use crate::types::GratingParams;

/// How many diffraction orders to keep on each side of `n = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Smallest order whose Bessel magnitude drops below 1e-16 (at least 16).
    #[default]
    Auto,
    Fixed(usize),
}

impl Truncation {
    pub fn resolve(self, w: f64) -> Result<usize> {
        match self {
            Truncation::Auto => specfun::auto_truncation(w),
            Truncation::Fixed(0) => Err(Error::InvalidParameter("n_max must be >= 1".into())),
            Truncation::Fixed(n) => Ok(n),
        }
    }
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Truncation::Auto => f.write_str("auto"),
            Truncation::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Truncation::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Truncation::Fixed(n)),
            _ => Err(Error::InvalidParameter(format!(
                "n_max must be 'auto' or an integer >= 1, got '{s}'"
            ))),
        }
    }
}

#[inline]
fn i_pow(n: i32) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn parity(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Truncated family `{b_n}` for `n ∈ [-n_max, n_max]`, together with the
/// real Bessel values `J_n(w)` used by the closed-form expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionCoefficients {
    grating: GratingParams,
    n_max: usize,
    values: Vec<Complex64>,
    bessel: Vec<f64>,
}

impl DiffractionCoefficients {
    pub fn new(grating: &GratingParams, truncation: Truncation) -> Result<Self> {
        let w = grating.w;
        let n_max = truncation.resolve(w)?;
        let j_pos = specfun::bessel_j_family(n_max, w)?;
        let j_neg_arg = specfun::bessel_j_family(n_max, -w)?;
        let phase = Complex64::from_polar(1.0, -w);

        let span = 2 * n_max + 1;
        let mut values = Vec::with_capacity(span);
        let mut bessel = Vec::with_capacity(span);
        for n in -(n_max as i32)..=(n_max as i32) {
            let k = n.unsigned_abs() as usize;
            let sign = if n < 0 { parity(n) } else { 1.0 };
            let j_at_minus_w = sign * j_neg_arg[k];
            values.push(i_pow(n) * phase * j_at_minus_w);
            bessel.push(sign * j_pos[k]);
        }
        Ok(DiffractionCoefficients {
            grating: *grating,
            n_max,
            values,
            bessel,
        })
    }

    pub fn grating(&self) -> &GratingParams {
        &self.grating
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn contains(&self, n: i32) -> bool {
        n.unsigned_abs() as usize <= self.n_max
    }

    #[inline]
    fn index(&self, n: i32) -> Option<usize> {
        self.contains(n).then(|| (n + self.n_max as i32) as usize)
    }

    /// `b_n`, or zero outside the truncation range.
    pub fn get(&self, n: i32) -> Complex64 {
        self.index(n)
            .map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    /// `J_n(w)`, or zero outside the truncation range.
    pub fn bessel(&self, n: i32) -> f64 {
        self.index(n).map_or(0.0, |i| self.bessel[i])
    }

    pub fn orders(&self) -> impl Iterator<Item = i32> + '_ {
        -(self.n_max as i32)..=(self.n_max as i32)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.orders().zip(self.values.iter().copied())
    }

    /// `Σ_n |b_n|²` over the kept orders.
    pub fn norm_sqr_sum(&self) -> f64 {
        self.values.iter().map(|b| b.norm_sqr()).sum()
    }

    /// `φ(x) = Σ_n b_n e^{i 2 n k_L x}` by direct complex summation.
    pub fn phi(&self, x: f64) -> Complex64 {
        let two_kl_x = 2.0 * self.grating.kl * x;
        self.iter()
            .map(|(n, b)| b * Complex64::from_polar(1.0, n as f64 * two_kl_x))
            .sum()
    }

    /// `|φ(x)|²` in Bessel form:
    /// `Σ_n J_n² + Σ_{m>n} 2(-1)^{n+m} J_n J_m cos((m-n)(2k_L x + π/2))`.
    ///
    /// The leading term is `Σ_n J_n²` over the kept orders (unity for a
    /// converged family), so the identity with [`Self::phi`] holds at any
    /// truncation.
    pub fn phi_abs2_closed(&self, x: f64) -> f64 {
        let theta = 2.0 * self.grating.kl * x + FRAC_PI_2;
        let nm = self.n_max as i32;
        let mut diag = 0.0;
        let mut cross = 0.0;
        for n in -nm..=nm {
            let jn = self.bessel(n);
            diag += jn * jn;
            for m in (n + 1)..=nm {
                let jm = self.bessel(m);
                cross += 2.0 * parity(n + m) * jn * jm * ((m - n) as f64 * theta).cos();
            }
        }
        diag + cross
    }

    /// Fourier coefficient `c_j = Σ_n b_n* b_{n+j}` of `|φ(x)|² = Σ_j c_j e^{i 2 j k_L x}`.
    pub fn fourier_coefficient(&self, j: i32) -> Complex64 {
        self.iter().map(|(n, b)| b.conj() * self.get(n + j)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn coeffs(w: f64, t: Truncation) -> DiffractionCoefficients {
        DiffractionCoefficients::new(&GratingParams::new(w, 1.0).unwrap(), t).unwrap()
    }

    #[test]
    fn identity_evolution_at_zero_strength() {
        let c = coeffs(0.0, Truncation::Auto);
        assert_eq!(c.get(0), Complex64::new(1.0, 0.0));
        for n in c.orders().filter(|&n| n != 0) {
            assert_eq!(c.get(n).norm(), 0.0);
        }
        for x in [-3.0, 0.0, 0.7, 12.5] {
            assert_eq!(c.phi(x), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn first_order_weight_at_small_w() {
        let c = coeffs(0.2, Truncation::Auto);
        // J_1(0.2)^2
        assert!((c.get(1).norm_sqr() - 0.009_900_415_7).abs() < 1e-9);
        for n in 1..=c.n_max() as i32 {
            assert!((c.get(n).norm_sqr() - c.get(-n).norm_sqr()).abs() < 1e-18);
        }
    }

    #[test]
    fn normalized_when_converged() {
        for w in [0.0, 0.2, 1.0, 3.0, 10.0, 40.0] {
            let c = coeffs(w, Truncation::Auto);
            assert!((c.norm_sqr_sum() - 1.0).abs() < 1e-12, "w={w}");
        }
    }

    #[test]
    fn first_order_truncation_loses_weight() {
        let c = coeffs(0.2, Truncation::Fixed(1));
        let j0 = c.bessel(0);
        let j1 = c.bessel(1);
        assert!((c.norm_sqr_sum() - (j0 * j0 + 2.0 * j1 * j1)).abs() < 1e-15);
        assert!(1.0 - c.norm_sqr_sum() > 1e-5);
    }

    #[test]
    fn explicit_phase_convention() {
        let w = 0.7;
        let c = coeffs(w, Truncation::Fixed(4));
        for n in -4..=4 {
            let expected = Complex64::new(0.0, 1.0).powi(n)
                * Complex64::from_polar(1.0, -w)
                * specfun::bessel_j(n, -w).unwrap();
            assert!((c.get(n) - expected).norm() < 1e-15);
        }
        assert_eq!(c.get(5), Complex64::new(0.0, 0.0));
        assert_eq!(c.bessel(-5), 0.0);
    }

    #[test]
    fn phi_has_half_optical_period() {
        let c = coeffs(1.3, Truncation::Auto);
        for i in 0..50 {
            let x = -2.0 + 0.13 * i as f64;
            assert!((c.phi(x) - c.phi(x + PI)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        for t in [Truncation::Auto, Truncation::Fixed(1), Truncation::Fixed(3)] {
            for w in [0.2, 1.0, 2.5] {
                let c = coeffs(w, t);
                for i in 0..64 {
                    let x = -1.0 + 0.05 * i as f64;
                    let direct = c.phi(x).norm_sqr();
                    assert!((direct - c.phi_abs2_closed(x)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pure_phase_grating_has_flat_intensity() {
        let c = coeffs(0.9, Truncation::Auto);
        for i in 0..40 {
            let x = 0.1 * i as f64;
            assert!((c.phi(x).norm_sqr() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn truncation_parsing() {
        assert_eq!("auto".parse::<Truncation>().unwrap(), Truncation::Auto);
        assert_eq!("3".parse::<Truncation>().unwrap(), Truncation::Fixed(3));
        assert!("0".parse::<Truncation>().is_err());
        assert!("-1".parse::<Truncation>().is_err());
    }
}
