//! Integer-order Bessel functions of the first kind.
//!
//! Whole families `J_0(w) ..= J_N(w)` are produced by Miller's backward
//! recurrence, normalized with `J_0² + 2 Σ_{k≥1} J_k² = 1`. The sign of the
//! normalization is taken from `J_0 + 2 Σ_k J_{2k} = 1`. Negative orders and
//! negative arguments are mapped through `J_{-n}(w) = (-1)ⁿ J_n(w)` and
//! `J_n(-w) = (-1)ⁿ J_n(w)`, applied after the magnitude computation so the
//! symmetries hold bit-for-bit.

use crate::error::{Error, Result};

/// Largest |w| accepted by the evaluators.
pub const MAX_ARGUMENT: f64 = 50.0;

/// Magnitude below which a family member counts as zero when choosing `n_max`.
pub const TRUNCATION_THRESHOLD: f64 = 1e-16;

/// Lower bound on automatically chosen truncation orders.
pub const MIN_AUTO_ORDER: usize = 16;

// Below this the recurrence ratios 2k/w overflow; the leading term is exact.
const TINY_ARGUMENT: f64 = 1e-100;
const RESCALE_AT: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: i32,
    pub argument: f64,
    pub value: f64,
}

impl BesselEval {
    pub fn compute(order: i32, argument: f64) -> Result<Self> {
        Ok(BesselEval {
            order,
            argument,
            value: bessel_j(order, argument)?,
        })
    }
}

fn check_argument(w: f64) -> Result<()> {
    if !w.is_finite() || w.abs() > MAX_ARGUMENT {
        return Err(Error::Range {
            argument: w,
            limit: MAX_ARGUMENT,
        });
    }
    Ok(())
}

#[inline]
fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `J_n(w)` for any integer order.
pub fn bessel_j(n: i32, w: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    let family = bessel_j_family(order, w)?;
    let value = family[order];
    Ok(if n < 0 { parity(order) * value } else { value })
}

/// `[J_0(w), J_1(w), ..., J_{n_max}(w)]`.
pub fn bessel_j_family(n_max: usize, w: f64) -> Result<Vec<f64>> {
    check_argument(w)?;
    let a = w.abs();
    let mut out = if a == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if a < TINY_ARGUMENT {
        leading_term_family(n_max, a)
    } else {
        miller_family(n_max, a)
    };
    if w < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            *v *= parity(k);
        }
    }
    Ok(out)
}

fn leading_term_family(n_max: usize, a: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut term = 1.0;
    out.push(term);
    for k in 1..=n_max {
        term *= 0.5 * a / k as f64;
        out.push(term);
    }
    out
}

fn start_order(n_max: usize, a: f64) -> usize {
    let m0 = n_max.max(a.ceil() as usize);
    let m = m0 + 40 + (10.0 * (m0 as f64).sqrt()) as usize;
    m + (m % 2)
}

fn miller_family(n_max: usize, a: f64) -> Vec<f64> {
    let top = start_order(n_max, a);
    let mut j = vec![0.0f64; top + 2];
    j[top] = 1.0;
    for k in (1..=top).rev() {
        j[k - 1] = (2.0 * k as f64 / a) * j[k] - j[k + 1];
        if j[k - 1].abs() > RESCALE_AT {
            for v in &mut j[k - 1..] {
                *v /= RESCALE_AT;
            }
        }
    }

    let mut sum_sq = 0.0;
    let mut even_sum = 0.0;
    for k in (1..=top).rev() {
        sum_sq += 2.0 * j[k] * j[k];
        if k % 2 == 0 {
            even_sum += 2.0 * j[k];
        }
    }
    sum_sq += j[0] * j[0];
    even_sum += j[0];

    let scale = even_sum.signum() / sum_sq.sqrt();
    j.truncate(n_max + 1);
    for v in &mut j {
        *v *= scale;
    }
    j
}

/// Smallest order `n ≥ |w|` with `|J_n(w)| < 1e-16`, but never below 16.
pub fn auto_truncation(w: f64) -> Result<usize> {
    check_argument(w)?;
    let a = w.abs();
    let first = a.ceil() as usize;
    let family = bessel_j_family(first + 120, a)?;
    let n = (first..family.len())
        .find(|&k| family[k].abs() < TRUNCATION_THRESHOLD)
        .ok_or_else(|| Error::Numerical(format!("no truncation order found for w = {w}")))?;
    Ok(n.max(MIN_AUTO_ORDER))
}
