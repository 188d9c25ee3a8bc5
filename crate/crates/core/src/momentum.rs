//! Momentum-space detection probabilities for plane-wave pairs.
//!
//! After the grating a particle that entered with `k₀` is found at
//! `2nk_L + k₀` with probability `|b_n|²`. For two particles the joint
//! probability of `(2nk_L + k₀, 2mk_L + q₀)` is `|b_n b_m|²`, unless the
//! particles are identical and `N = (q₀ - k₀)/2k_L` is an integer: then the
//! history "`n-N` and `m+N` recoils" reaches the same final pair and the
//! probability becomes `P_N(n,m) = |b_n b_m|² ± Re(b_n* b_m* b_{m+N} b_{n-N})`.

use rayon::prelude::*;

use crate::coefficients::{DiffractionCoefficients, Truncation};
use crate::error::{Error, Result};
use crate::specfun::bessel_j;
use crate::types::{GratingParams, SingleMode, Statistics};

/// Resonance tolerance, in units of `2k_L`.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;

/// Table entries down to this value are treated as rounding noise.
pub const PROBABILITY_CLAMP: f64 = 1e-14;

/// One spectral line of a single particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumLine {
    pub n: i32,
    pub wavenumber: f64,
    pub amplitude: num_complex::Complex64,
}

/// Spectrum `{(2nk_L + k₀, b_n)}` of one particle.
pub fn momentum_lines(mode: &SingleMode, coeffs: &DiffractionCoefficients) -> Vec<MomentumLine> {
    let kl = coeffs.grating().kl;
    coeffs
        .iter()
        .map(|(n, amplitude)| MomentumLine {
            n,
            wavenumber: 2.0 * n as f64 * kl + mode.k0,
            amplitude,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// `N` when `(q₀ - k₀)/2k_L` is an integer within `tolerance`.
    pub n: Option<i32>,
    pub raw: f64,
    pub tolerance: f64,
}

pub fn resonance(a: &SingleMode, b: &SingleMode, g: &GratingParams, tol: f64) -> Resonance {
    let raw = (b.k0 - a.k0) / (2.0 * g.kl);
    let nearest = raw.round();
    let n =
        ((raw - nearest).abs() <= tol && nearest.abs() < i32::MAX as f64).then_some(nearest as i32);
    Resonance {
        n,
        raw,
        tolerance: tol,
    }
}

/// Product of four factors in a fixed order, so equal multisets give bitwise
/// equal results and the exchange term cancels exactly where it should.
fn ordered_product(mut f: [f64; 4]) -> f64 {
    f.sort_by(f64::total_cmp);
    f[0] * f[1] * f[2] * f[3]
}

/// `P(n,m) = J_n(w)² J_m(w)²`.
pub fn p_distinguishable(n: i32, m: i32, g: &GratingParams) -> Result<f64> {
    let jn = bessel_j(n, g.w)?;
    let jm = bessel_j(m, g.w)?;
    Ok(jn * jn * jm * jm)
}

/// `P_N(n,m)` for identical particles, as written (no clamping).
///
/// The phases of `b_n* b_m* b_{m+N} b_{n-N}` cancel, leaving the real
/// product `J_n J_m J_{m+N} J_{n-N}`. Off resonance the exchange term drops
/// out and the distinguishable value is returned.
pub fn p_identical(
    n: i32,
    m: i32,
    g: &GratingParams,
    res: &Resonance,
    stats: Statistics,
) -> Result<f64> {
    let sign = stats.exchange_sign().ok_or_else(|| {
        Error::Contract("p_identical called for distinguishable particles".into())
    })?;
    let Some(shift) = res.n else {
        return p_distinguishable(n, m, g);
    };
    let (jn, jm) = (bessel_j(n, g.w)?, bessel_j(m, g.w)?);
    let direct = ordered_product([jn, jn, jm, jm]);
    let exchange = ordered_product([jn, jm, bessel_j(m + shift, g.w)?, bessel_j(n - shift, g.w)?]);
    Ok(direct + sign * exchange)
}

/// Modulus squared of the symmetrized amplitude `(b_n b_m ± b_{n-N} b_{m+N})/√2`.
///
/// Differs from [`p_identical`] by using `½(|b_n b_m|² + |b_{n-N} b_{m+N}|²)`
/// for the direct part, which keeps it nonnegative for every `(n, m, N)`.
/// This is also the single-mode limit of the Gaussian-mode joint density
/// integrated over the peak at `(2nk_L + k₀, 2mk_L + q₀)`.
pub fn p_identical_symmetrized(
    n: i32,
    m: i32,
    g: &GratingParams,
    res: &Resonance,
    stats: Statistics,
) -> Result<f64> {
    let sign = stats.exchange_sign().ok_or_else(|| {
        Error::Contract("p_identical_symmetrized called for distinguishable particles".into())
    })?;
    let Some(shift) = res.n else {
        return p_distinguishable(n, m, g);
    };
    let (jn, jm) = (bessel_j(n, g.w)?, bessel_j(m, g.w)?);
    let (jr, js) = (bessel_j(m + shift, g.w)?, bessel_j(n - shift, g.w)?);
    let direct = ordered_product([jn, jn, jm, jm]);
    let partner = ordered_product([js, js, jr, jr]);
    let exchange = ordered_product([jn, jm, jr, js]);
    Ok(0.5 * (direct + partner) + sign * exchange)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub n: i32,
    pub m: i32,
    /// Final wavenumbers `(2nk_L + k₀, 2mk_L + q₀)`.
    pub k: f64,
    pub q: f64,
    pub probability: f64,
    /// Value before clamping at zero.
    pub unclamped: f64,
    pub resonant: bool,
    /// `b_{m+N}` or `b_{n-N}` fell outside the coefficient family and was taken as zero.
    pub truncated: bool,
    /// The formula went below `-PROBABILITY_CLAMP`; `probability` was set to zero.
    pub negative: bool,
}

/// Joint probabilities over `(n, m) ∈ [-R, R]²`, row-major in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMomentumTable {
    pub statistics: Statistics,
    pub resonance: Resonance,
    pub n_range: i32,
    pub entries: Vec<TableEntry>,
}

impl JointMomentumTable {
    pub fn get(&self, n: i32, m: i32) -> Option<&TableEntry> {
        let r = self.n_range;
        if n.abs() > r || m.abs() > r {
            return None;
        }
        let side = (2 * r + 1) as usize;
        self.entries.get((n + r) as usize * side + (m + r) as usize)
    }

    /// Sum of the clamped probabilities. Not renormalized: with the exchange
    /// term included the total need not be one.
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

/// Entry `(n, m)` holds the probability of final wavenumbers
/// `(2nk_L + k₀, 2mk_L + q₀)`; the detector-swapped pair is not listed separately.
pub fn joint_table(
    g: &GratingParams,
    truncation: Truncation,
    a: &SingleMode,
    b: &SingleMode,
    stats: Statistics,
    n_range: usize,
) -> Result<JointMomentumTable> {
    let coeffs = DiffractionCoefficients::new(g, truncation)?;
    let res = resonance(a, b, g, DEFAULT_RESONANCE_TOL);
    let r = n_range as i32;
    let pairs: Vec<(i32, i32)> = (-r..=r)
        .flat_map(|n| (-r..=r).map(move |m| (n, m)))
        .collect();

    let entries = pairs
        .par_iter()
        .map(|&(n, m)| {
            let bn = coeffs.get(n);
            let bm = coeffs.get(m);
            let direct = bn.norm_sqr() * bm.norm_sqr();
            let (unclamped, resonant, truncated) = match (stats.exchange_sign(), res.n) {
                (Some(sign), Some(shift)) => {
                    let truncated = !coeffs.contains(m + shift) || !coeffs.contains(n - shift);
                    let exchange =
                        (bn.conj() * bm.conj() * coeffs.get(m + shift) * coeffs.get(n - shift)).re;
                    (direct + sign * exchange, true, truncated)
                }
                _ => (direct, false, false),
            };
            let negative = unclamped < -PROBABILITY_CLAMP;
            TableEntry {
                n,
                m,
                k: 2.0 * n as f64 * g.kl + a.k0,
                q: 2.0 * m as f64 * g.kl + b.k0,
                probability: unclamped.max(0.0),
                unclamped,
                resonant,
                truncated,
                negative,
            }
        })
        .collect();

    Ok(JointMomentumTable {
        statistics: stats,
        resonance: res,
        n_range: r,
        entries,
    })
}
