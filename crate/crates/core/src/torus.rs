//! Periodic one-dimensional Poincaré inequality machinery.
//!
//! Functions on the `T`-torus are carried as finite Fourier coefficient
//! vectors. The fractional seminorm with the torus-distance kernel has an
//! exact mode-weight representation for trigonometric polynomials; a direct
//! quadrature of the double integral serves as the independent check, and
//! the Poincaré margin `[w]² − μₛ (2π/T)^{2s} ‖w‖²` is the tested contract
//! for functions vanishing at a point.

use crate::constants;
use crate::error::{Error, Result};
use crate::quad::{adaptive, int_one_minus_cos};
use rand::Rng;
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

/// Real periodic function given by Fourier coefficients `ŵ(n)`, |n| ≤ N.
///
/// Convention: `w(θ) = Σ_n ŵ(n) e^{2πinθ/T}` with `ŵ(−n) = conj(ŵ(n))`.
#[derive(Clone, Debug)]
pub struct TorusFunction {
    period: f64,
    /// coefficients for n = −N..=N, index n + N
    coeffs: Vec<Complex64>,
    n_max: usize,
}

impl TorusFunction {
    /// Build from coefficients for `n = -n_max..=n_max` (length `2n_max+1`).
    /// The negative-mode coefficients must conjugate-mirror the positive
    /// ones (real-valued function).
    pub fn new(period: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if period <= 0.0 {
            return Err(Error::NonpositivePeriod(period));
        }
        if coeffs.len() % 2 == 0 || coeffs.len() < 3 {
            return Err(Error::DimensionMismatch {
                expected: coeffs.len() / 2 * 2 + 3,
                got: coeffs.len(),
            });
        }
        let n_max = coeffs.len() / 2;
        let scale: f64 = coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1e-300);
        for n in 1..=n_max {
            let diff = (coeffs[n_max + n] - coeffs[n_max - n].conj()).norm();
            if diff > 1e-12 * scale {
                return Err(Error::Parse(
                    "coefficients do not describe a real-valued function".into(),
                ));
            }
        }
        if coeffs[n_max].im.abs() > 1e-12 * scale {
            return Err(Error::Parse("mean coefficient must be real".into()));
        }
        Ok(TorusFunction { period, coeffs, n_max })
    }

    /// Real trig polynomial `a0 + Σ (a_n cos + b_n sin)(2πnθ/T)`.
    pub fn from_real(period: f64, a0: f64, ab: &[(f64, f64)]) -> Result<Self> {
        let n_max = ab.len().max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n_max + 1];
        coeffs[n_max] = Complex64::new(a0, 0.0);
        for (i, &(a, b)) in ab.iter().enumerate() {
            let n = i + 1;
            coeffs[n_max + n] = Complex64::new(a / 2.0, -b / 2.0);
            coeffs[n_max - n] = Complex64::new(a / 2.0, b / 2.0);
        }
        Self::new(period, coeffs)
    }

    /// Random real trig polynomial of the given degree, standard-normal
    /// coefficients.
    pub fn random<R: Rng + ?Sized>(period: f64, degree: usize, rng: &mut R) -> Result<Self> {
        let normal = |rng: &mut R| {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
        };
        let ab: Vec<(f64, f64)> = (0..degree.max(1))
            .map(|_| (normal(rng), normal(rng)))
            .collect();
        let a0 = normal(rng);
        Self::from_real(period, a0, &ab)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `ŵ(n)`; zero outside the stored band.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let omega = 2.0 * PI / self.period;
        let mut acc = self.coeff(0).re;
        for n in 1..=self.n_max as i64 {
            let phase = Complex64::from_polar(1.0, omega * n as f64 * theta);
            acc += 2.0 * (self.coeff(n) * phase).re;
        }
        acc
    }

    /// `‖w‖²_{L²(0,T)} = T Σ |ŵ(n)|²` (Parseval).
    pub fn l2_norm_sq(&self) -> f64 {
        self.period * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Shift the mean so that `w(theta0) = 0`.
    pub fn vanishing_at(&self, theta0: f64) -> Self {
        let mut out = self.clone();
        let v = self.eval(theta0);
        out.coeffs[self.n_max] -= Complex64::new(v, 0.0);
        out
    }

    pub fn max_abs_on_grid(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| self.eval(i as f64 * self.period / samples as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Torus distance `|α|_{T} = min_k |α + kT|`, valued in `[0, T/2]`.
pub fn torus_norm(alpha: f64, period: f64) -> Result<f64> {
    if period <= 0.0 {
        return Err(Error::NonpositivePeriod(period));
    }
    let r = alpha.rem_euclid(period);
    Ok(r.min(period - r))
}

/// Extrema of `2|sin(α/2)| / |α|_{S¹}` over an α-grid of the given size.
pub fn chord_ratio_extrema(grid_size: usize) -> (f64, f64) {
    assert!(grid_size >= 16, "grid too small");
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for j in 1..=grid_size {
        let alpha = j as f64 * PI / grid_size as f64;
        let ratio = 2.0 * (alpha / 2.0).sin().abs() / alpha;
        min = min.min(ratio);
        max = max.max(ratio);
    }
    (min, max)
}

/// Mode weight `W_s(n) = 8π ∫₀^π (1 − cos(hn)) h^{-1-2s} dh`
/// `          = 8π n^{2s} ∫₀^{nπ} (1 − cos τ) τ^{-1-2s} dτ`.
pub fn mode_weight(s: f64, n: i64) -> Result<f64> {
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::OrderOutOfRange(s, 0.0, 1.0));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let na = n.unsigned_abs() as f64;
    Ok(8.0 * PI * na.powf(2.0 * s) * int_one_minus_cos(s, na * PI, 1e-10))
}

/// Exact seminorm `∬ |w(θ)−w(φ)|² / |θ−φ|_T^{1+2s}` via mode weights:
/// `(T/2π)^{1-2s} Σ_{n≠0} W_s(n) |ŵ(n)|²`.
///
/// ```
/// use fracmh::torus::{seminorm_fourier, seminorm_quadrature, TorusFunction};
///
/// let tau = 2.0 * std::f64::consts::PI;
/// let w = TorusFunction::from_real(tau, 0.0, &[(1.0, 0.0), (0.0, 0.5)])?;
/// let exact = seminorm_fourier(&w, 0.75)?;
/// let quad = seminorm_quadrature(&w, 0.75, 0)?;
/// assert!((exact - quad).abs() < 1e-3 * exact);
/// # Ok::<(), fracmh::Error>(())
/// ```
pub fn seminorm_fourier(w: &TorusFunction, s: f64) -> Result<f64> {
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::OrderOutOfRange(s, 0.0, 1.0));
    }
    let mut acc = 0.0;
    for n in 1..=w.n_max() as i64 {
        let weight = mode_weight(s, n)?;
        acc += weight * (w.coeff(n).norm_sqr() + w.coeff(-n).norm_sqr());
    }
    Ok((w.period / (2.0 * PI)).powf(1.0 - 2.0 * s) * acc)
}

/// Independent quadrature of the same double integral.
///
/// Writing `g(α) = ∫₀^{2π} |w̃(θ+α) − w̃(θ)|² dθ` for the 2π-rescaled
/// function, the double integral equals `2 ∫₀^π g(α) α^{-1-2s} dα`. The θ
/// integral is computed by the equispaced midpoint rule, which is exact
/// for trigonometric polynomials once the sample count exceeds twice the
/// integrand's degree; the singular α integral is split dyadically toward
/// 0 with an analytic `g(α) ≈ q α²` tail below the smallest panel.
pub fn seminorm_quadrature(w: &TorusFunction, s: f64, panels: usize) -> Result<f64> {
    if s <= 0.0 || s >= 1.0 {
        return Err(Error::OrderOutOfRange(s, 0.0, 1.0));
    }
    // `panels = 0` means automatic: enough samples for exactness on trig
    // polynomials of the function's degree
    let m = panels.max(8 * (w.n_max() + 1)).max(64);
    let t = w.period;
    // samples of w at θ_j = j T / m
    let samples: Vec<f64> = (0..m).map(|j| w.eval(j as f64 * t / m as f64)).collect();
    // g on the 2π-rescaled torus, evaluated at arbitrary α via fresh samples
    let g = |alpha: f64| -> f64 {
        let shift = alpha / (2.0 * PI) * t;
        let mut acc = 0.0;
        for j in 0..m {
            let theta = j as f64 * t / m as f64;
            let d = w.eval(theta + shift) - samples[j];
            acc += d * d;
        }
        acc * 2.0 * PI / m as f64
    };
    // dyadic split of ∫_ε^π g(α) α^{-1-2s} dα
    let mut total = 0.0;
    let mut hi = PI;
    let mut lo = PI / 2.0;
    let mut smallest_edge = PI;
    for _ in 0..60 {
        let piece = adaptive(&|a: f64| g(a) * a.powf(-1.0 - 2.0 * s), lo, hi, 1e-8);
        total += piece;
        smallest_edge = lo;
        if piece.abs() < 1e-10 * total.abs() && lo < 1e-6 {
            break;
        }
        hi = lo;
        lo /= 2.0;
        // stop while w(θ+α) − w(θ) still carries ~9 clean digits: below
        // this the difference cancels to roundoff noise the adaptive rule
        // cannot integrate, and the α² tail model is already exact to
        // O(α² n²) ≈ 1e-10 relative
        if lo < 1e-7 {
            break;
        }
    }
    // analytic tail: g(α) ≈ q α² below the smallest resolved edge
    let q = g(smallest_edge) / (smallest_edge * smallest_edge);
    total += q * smallest_edge.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    Ok(2.0 * total * (t / (2.0 * PI)).powf(1.0 - 2.0 * s))
}

/// Poincaré margin `[w]²_s − μₛ (2π/T)^{2s} ‖w‖²_{L²}` for `w` vanishing at
/// `theta0`; nonnegative (up to tolerance) by the periodic Poincaré
/// inequality.
pub fn poincare_margin(w: &TorusFunction, s: f64, theta0: f64) -> Result<f64> {
    if s <= 0.5 || s >= 1.0 {
        return Err(Error::OrderOutOfRange(s, 0.5, 1.0));
    }
    let value = w.eval(theta0).abs();
    let scale = w.max_abs_on_grid(64 * (w.n_max() + 1));
    if value > 1e-10 * scale.max(1e-300) {
        return Err(Error::HypothesisViolation {
            theta0,
            value,
            bound: 1e-10 * scale,
        });
    }
    let mu = constants::mu_s(s)?;
    let semi = seminorm_fourier(w, s)?;
    Ok(semi - mu * (2.0 * PI / w.period).powf(2.0 * s) * w.l2_norm_sq())
}

/// Translation `ŵ_h(n) = e^{i n (2π/T) h} ŵ(n)`.
pub fn translate(w: &TorusFunction, hshift: f64) -> TorusFunction {
    let omega = 2.0 * PI / w.period;
    let mut out = w.clone();
    for n in -(w.n_max() as i64)..=(w.n_max() as i64) {
        let idx = (n + w.n_max() as i64) as usize;
        out.coeffs[idx] = w.coeffs[idx] * Complex64::from_polar(1.0, omega * n as f64 * hshift);
    }
    out
}
