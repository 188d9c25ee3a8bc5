//! Brute-force reference computations used to check the closed forms.
//!
//! Nothing here calls into the evaluation path of the other modules: the
//! Bessel values come from the power series, the coefficients are rebuilt
//! with plain complex arithmetic and integration is adaptive Simpson rather
//! than the Gauss-Kronrod rule in [`crate::quad`]. Speed is not a goal.

use num_complex::Complex64;

/// Result of an oracle integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Partial power series `Σ_{k<terms} (-1)^k (w/2)^{2k+|n|} / (k! (k+|n|)!)`,
/// with `J_{-n} = (-1)ⁿ J_n` applied afterwards.
///
/// Once `k > w/2` the terms alternate with decreasing magnitude, so the
/// truncation error is bounded by the first omitted term. Cancellation grows
/// like `e^{|w|}` relative to the result; keep `|w| ≲ 5` for 1e-15 accuracy.
pub fn bessel_series(n: i32, w: f64, terms: usize) -> f64 {
    let order = n.unsigned_abs();
    let half = 0.5 * w;
    let mut term = 1.0;
    for j in 1..=order {
        term *= half / j as f64;
    }
    let mut acc = Compensated::default();
    let q = half * half;
    for k in 0..terms {
        acc.add(term);
        let k1 = (k + 1) as f64;
        term *= -q / (k1 * (k1 + order as f64));
    }
    let value = acc.value();
    if n < 0 && order % 2 == 1 {
        -value
    } else {
        value
    }
}

/// `b_n = iⁿ e^{-iw} J_n(-w)` from the series.
pub fn coefficient(n: i32, w: f64) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(n) * Complex64::new(0.0, -w).exp() * bessel_series(n, -w, 80)
}

/// `φ(x)` by summing `b_n e^{i2nk_L x}` over `|n| ≤ n_max` with series coefficients.
pub fn phi_direct(x: f64, w: f64, kl: f64, n_max: i32) -> Complex64 {
    (-n_max..=n_max)
        .map(|n| coefficient(n, w) * Complex64::new(0.0, 2.0 * n as f64 * kl * x).exp())
        .sum()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

struct Simpson<'a, F> {
    f: &'a F,
    evaluations: usize,
    error: f64,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        self.evaluations += 2;
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth >= 4 && (delta.abs() <= 15.0 * tol || depth >= 48) {
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// The range is first cut into 32 panels and every panel is refined at least
/// four times, so periodic integrands cannot alias onto the initial nodes.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> QuadratureResult {
    const PANELS: usize = 32;
    let mut state = Simpson {
        f: &f,
        evaluations: 0,
        error: 0.0,
    };
    let h = (hi - lo) / PANELS as f64;
    let mut acc = Compensated::default();
    for p in 0..PANELS {
        let a = lo + p as f64 * h;
        let b = if p + 1 == PANELS { hi } else { a + h };
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        state.evaluations += 3;
        let whole = simpson(fa, fm, fb, b - a);
        acc.add(state.refine(a, b, fa, fm, fb, whole, tol / PANELS as f64, 0));
    }
    QuadratureResult {
        value: acc.value(),
        error_estimate: state.error,
        evaluations: state.evaluations,
    }
}

/// Gaussian mode `(center, width)` evolved through the grating, evaluated as a
/// discretized `k₀` integral of the exact plane-wave superposition
/// `∫ dk₀ f(k₀) Σ_n b_n e^{i(2nk_L + k₀)x}` with the unit-norm profile `f`.
///
/// Uses `k_grid` trapezoid nodes over `center ± 12·width` and orders `|n| ≤ 20`.
pub fn multimode_bruteforce(
    x: f64,
    center: f64,
    width: f64,
    w: f64,
    kl: f64,
    k_grid: usize,
) -> Complex64 {
    let grating: Complex64 = phi_direct(x, w, kl, 20);
    let lo = center - 12.0 * width;
    let hi = center + 12.0 * width;
    let step = (hi - lo) / (k_grid - 1) as f64;
    let norm = 1.0 / (std::f64::consts::PI.sqrt() * width).sqrt();
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for i in 0..k_grid {
        let k0 = lo + i as f64 * step;
        let weight = if i == 0 || i + 1 == k_grid { 0.5 } else { 1.0 };
        let u = (k0 - center) / width;
        let amp = weight * step * norm * (-0.5 * u * u).exp();
        re.add(amp * (k0 * x).cos());
        im.add(amp * (k0 * x).sin());
    }
    grating * Complex64::new(re.value(), im.value())
}
