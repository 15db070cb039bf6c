//! Adaptive quadrature helpers.
//!
//! Everything here is plain one-dimensional machinery: an adaptive
//! Gauss-Legendre rule used throughout the crate, plus the singular
//! integral `∫₀ᵁ (1-cos τ) τ^(-1-2s) dτ` that the constants chain and the
//! torus mode weights both reduce to. The integrand has an integrable
//! singularity at the origin for s > 1/2, handled by subtracting the
//! leading `τ²/2` term and integrating it in closed form.

/// 10-point Gauss-Legendre nodes on [-1, 1] (positive half).
const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Single 10-point Gauss-Legendre panel on [a, b].
pub fn gauss10<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..5 {
        acc += GL10_W[i] * (f(c + d * GL10_X[i]) + f(c - d * GL10_X[i]));
    }
    acc * d
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss10(f, a, m);
    let right = gauss10(f, m, b);
    let refined = left + right;
    // floor the tolerance at the roundoff level of the *global* integral
    // (∫|f|): near a zero crossing the local value cancels to noise, and a
    // locally scaled floor would vanish with it, letting roundoff fail the
    // check and split every noise-band interval down to the depth cap
    let tol = tol.max(floor).max(1e-15 * refined.abs());
    if (refined - whole).abs() <= tol || depth >= 48 {
        return refined;
    }
    adapt(f, a, m, left, 0.5 * tol, floor, depth + 1)
        + adapt(f, m, b, right, 0.5 * tol, floor, depth + 1)
}

/// Adaptive Gauss-Legendre integration of `f` over [a, b] to relative
/// tolerance `rel_tol` (with a small absolute floor for near-zero results).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    adaptive_with_floor(f, a, b, rel_tol, 0.0)
}

/// Like [`adaptive`], but with an explicit absolute noise floor below which
/// panel discrepancies are accepted. Required whenever the integrand is a
/// near-cancelling combination of larger quantities: its roundoff noise is
/// set by the scale of those quantities, which only the caller knows, and
/// refining below that noise never converges.
pub fn adaptive_with_floor<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    noise_abs: f64,
) -> f64 {
    if a == b {
        return 0.0;
    }
    let first = gauss10(f, a, b);
    let floor = noise_abs.max(1e-15 * gauss10(&|x| f(x).abs(), a, b));
    let tol = rel_tol * first.abs().max(1e-300) + 1e-300;
    adapt(f, a, b, first, tol, floor, 0)
}

/// Adaptive integration with an absolute error budget.
pub fn adaptive_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let first = gauss10(f, a, b);
    let floor = 1e-15 * gauss10(&|x| f(x).abs(), a, b);
    adapt(f, a, b, first, abs_tol.max(1e-300), floor, 0)
}

/// `∫₀ᵁ (1 - cos τ) τ^(-1-2s) dτ` for 0 < s < 1, upper > 0.
///
/// On [0, min(1, upper)] the leading τ²/2 of `1 - cos τ` is subtracted and
/// integrated exactly; the remainder behaves like τ^(3-2s) at the origin
/// and is handled by the adaptive rule. The rest of the range is regular.
pub fn int_one_minus_cos(s: f64, upper: f64, rel_tol: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0, "s out of range");
    assert!(upper > 0.0);
    let split = upper.min(1.0);
    // ∫₀^split (τ²/2) τ^(-1-2s) dτ
    let leading = 0.5 * split.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let remainder = adaptive(
        &|t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            // 1 - cos t - t²/2 by its Taylor series: the direct form
            // cancels catastrophically and the resulting noise defeats the
            // adaptive error estimate. The nested factors are
            // (2k+1)(2k+2); relative error < 4e-15 up to t = 1, which
            // covers the whole singular piece.
            let r = if t < 1.0 {
                let t2 = t * t;
                -t2 * t2 / 24.0
                    * (1.0
                        - t2 / 30.0
                            * (1.0
                                - t2 / 56.0
                                    * (1.0
                                        - t2 / 90.0
                                            * (1.0 - t2 / 132.0 * (1.0 - t2 / 182.0 * (1.0 - t2 / 240.0))))))
            } else {
                1.0 - t.cos() - 0.5 * t * t
            };
            r * t.powf(-1.0 - 2.0 * s)
        },
        0.0,
        split,
        rel_tol,
    );
    let mut total = leading + remainder;
    if upper > 1.0 {
        total += adaptive(
            &|t: f64| (1.0 - t.cos()) * t.powf(-1.0 - 2.0 * s),
            1.0,
            upper,
            rel_tol,
        );
    }
    total
}
