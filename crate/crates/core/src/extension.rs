//! The Kelvin-inversion extension operator.
//!
//! A function on the unit disk is extended to a larger disk `B_R` by
//! reflecting through the unit circle: `ũ(x) = u(x/|x|²)` outside `B₁`.
//! The extension inflates the Gagliardo seminorm by at most `4R^{4N}` and
//! the `L²` norm by at most `2R^{2N}` (here `N = 2`); both bounds are
//! checked empirically on random smooth fields. The same sampled-field
//! machinery measures the subset-mean Poincaré ratio that calibrates the
//! dimensional constant `ℳ` fed to [`crate::constants::MsConfig`].

use crate::error::{Error, Result};
use crate::geometry::{DomainMask, Point};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Inversion with respect to the unit circle: `𝒦(x) = x/|x|²`.
///
/// ```
/// use fracmh::extension::kelvin;
/// use fracmh::geometry::Point;
///
/// let p = kelvin(Point::new(2.0, 0.0))?;
/// assert!((p.x - 0.5).abs() < 1e-15);
/// let back = kelvin(p)?;
/// assert!((back.x - 2.0).abs() < 1e-14);
/// # Ok::<(), fracmh::Error>(())
/// ```
pub fn kelvin(x: Point) -> Result<Point> {
    let n2 = x.x * x.x + x.y * x.y;
    if n2 == 0.0 {
        return Err(Error::OriginError);
    }
    Ok(Point::new(x.x / n2, x.y / n2))
}

/// A scalar field sampled on a uniform grid covering a disk.
#[derive(Clone, Debug)]
pub struct SampledField {
    center: Point,
    radius: f64,
    spacing: f64,
    /// grid is `n × n`, row-major, node `(i, j)` at
    /// `center + spacing·(i − (n−1)/2, j − (n−1)/2)`
    n: usize,
    values: Vec<f64>,
    inside: Vec<bool>,
}

impl SampledField {
    /// Sample `f` on a grid of `n × n` points covering `B_radius(center)`.
    pub fn sample<F: Fn(Point) -> f64>(
        center: Point,
        radius: f64,
        n: usize,
        f: F,
    ) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::NonpositiveScale(radius));
        }
        if n < 2 {
            return Err(Error::InvalidSpec(format!("grid needs n >= 2, got {n}")));
        }
        let spacing = 2.0 * radius / (n - 1) as f64;
        let mut values = vec![0.0; n * n];
        let mut inside = vec![false; n * n];
        let r2 = radius * radius;
        for j in 0..n {
            for i in 0..n {
                let p = Point::new(
                    center.x + spacing * (i as f64 - 0.5 * (n - 1) as f64),
                    center.y + spacing * (j as f64 - 0.5 * (n - 1) as f64),
                );
                if p.dist_sq(center) <= r2 {
                    values[j * n + i] = f(p);
                    inside[j * n + i] = true;
                }
            }
        }
        Ok(SampledField { center, radius, spacing, n, values, inside })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn point(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.center.x + self.spacing * (i as f64 - 0.5 * (self.n - 1) as f64),
            self.center.y + self.spacing * (j as f64 - 0.5 * (self.n - 1) as f64),
        )
    }

    /// Bilinear interpolation at `p` (must lie in the sampled disk). Grid
    /// corners outside the disk are dropped and the weights renormalized.
    pub fn interp(&self, p: Point) -> Result<f64> {
        if p.dist_sq(self.center) > self.radius * self.radius * (1.0 + 1e-12) {
            return Err(Error::PointOutsideDomain(p.x, p.y));
        }
        let fx = (p.x - self.center.x) / self.spacing + 0.5 * (self.n - 1) as f64;
        let fy = (p.y - self.center.y) / self.spacing + 0.5 * (self.n - 1) as f64;
        let i0 = (fx.floor() as isize).clamp(0, self.n as isize - 2) as usize;
        let j0 = (fy.floor() as isize).clamp(0, self.n as isize - 2) as usize;
        let tx = (fx - i0 as f64).clamp(0.0, 1.0);
        let ty = (fy - j0 as f64).clamp(0.0, 1.0);
        let corners = [
            (i0, j0, (1.0 - tx) * (1.0 - ty)),
            (i0 + 1, j0, tx * (1.0 - ty)),
            (i0, j0 + 1, (1.0 - tx) * ty),
            (i0 + 1, j0 + 1, tx * ty),
        ];
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for (i, j, w) in corners {
            if self.inside[j * self.n + i] {
                acc += w * self.values[j * self.n + i];
                wsum += w;
            }
        }
        if wsum > 0.0 {
            return Ok(acc / wsum);
        }
        // no inside corner (possible only within one cell of the rim):
        // fall back to the nearest inside sample
        let mut best = f64::INFINITY;
        let mut val = 0.0;
        for j in 0..self.n {
            for i in 0..self.n {
                if self.inside[j * self.n + i] {
                    let d = self.point(i, j).dist_sq(p);
                    if d < best {
                        best = d;
                        val = self.values[j * self.n + i];
                    }
                }
            }
        }
        Ok(val)
    }

    /// `‖u‖²_{L²}` by the midpoint rule over inside samples.
    pub fn l2_norm_sq(&self) -> f64 {
        let cell = self.spacing * self.spacing;
        self.values
            .iter()
            .zip(self.inside.iter())
            .filter(|(_, &m)| m)
            .map(|(v, _)| v * v * cell)
            .sum()
    }

    /// Gagliardo seminorm `[u]²_{W^{s,2}}` by a direct double sum over
    /// inside samples with diagonal exclusion.
    pub fn seminorm_sq(&self, s: f64) -> Result<f64> {
        if !(0.0 < s && s < 1.0) {
            return Err(Error::OrderOutOfRange(s, 0.0, 1.0));
        }
        let pts: Vec<(Point, f64)> = (0..self.n * self.n)
            .filter(|&k| self.inside[k])
            .map(|k| (self.point(k % self.n, k / self.n), self.values[k]))
            .collect();
        let cell2 = (self.spacing * self.spacing).powi(2);
        let p = 2.0 + 2.0 * s;
        let mut acc = 0.0;
        for a in 0..pts.len() {
            let (xa, ua) = pts[a];
            for &(xb, ub) in pts.iter().skip(a + 1) {
                let du = ua - ub;
                acc += du * du / xa.dist_sq(xb).powf(0.5 * p);
            }
        }
        Ok(2.0 * acc * cell2)
    }

    /// Mean of the samples lying inside both the field's disk and `e`.
    fn subset_mean(&self, e: &DomainMask) -> Result<(f64, usize)> {
        let mut acc = 0.0;
        let mut count = 0;
        for k in 0..self.n * self.n {
            if self.inside[k] && mask_contains(e, self.point(k % self.n, k / self.n)) {
                acc += self.values[k];
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::ZeroMeasureSubset);
        }
        Ok((acc / count as f64, count))
    }
}

/// Whether `p` falls in an occupied cell of `mask`.
fn mask_contains(mask: &DomainMask, p: Point) -> bool {
    let h = mask.h();
    let (x0, _, y0, _) = mask.bbox();
    let (nx, ny) = mask.dims();
    let ix = ((p.x - x0) / h).floor();
    let iy = ((p.y - y0) / h).floor();
    if ix < 0.0 || iy < 0.0 || ix >= nx as f64 || iy >= ny as f64 {
        return false;
    }
    mask.occupied(ix as usize, iy as usize)
}

/// Kelvin extension of a field on `B₁` to `B_R`, `R > 1`:
/// `ũ(x) = u(x)` inside `B₁`, `u(𝒦(x))` outside.
pub fn extend(u: &SampledField, big_r: f64, n: usize) -> Result<SampledField> {
    if (u.radius - 1.0).abs() > 1e-12 || u.center.dist_sq(Point::new(0.0, 0.0)) > 1e-24 {
        return Err(Error::InvalidSpec(
            "extension expects the base field on the unit disk at the origin".into(),
        ));
    }
    if big_r <= 1.0 {
        return Err(Error::RadiusTooSmall(big_r));
    }
    SampledField::sample(Point::new(0.0, 0.0), big_r, n, |p| {
        let q = if p.norm() <= 1.0 {
            p
        } else {
            kelvin(p).expect("|p| > 1 excludes the origin")
        };
        u.interp(q).expect("Kelvin image lies in the closed unit disk")
    })
}

/// Measured inflation factors of the extension, paired with their proved
/// ceilings `4R^{4N}` and `2R^{2N}` (`N = 2`).
#[derive(Clone, Copy, Debug)]
pub struct ExtensionRatios {
    pub seminorm_ratio: f64,
    pub seminorm_bound: f64,
    pub l2_ratio: f64,
    pub l2_bound: f64,
}

/// Compare the seminorm and `L²` growth of the Kelvin extension against the
/// bounds. `u` must live on the unit disk.
pub fn extension_bound_ratios(u: &SampledField, big_r: f64, s: f64) -> Result<ExtensionRatios> {
    let n_ext = ((u.n as f64 * big_r).ceil() as usize).max(u.n);
    let ext = extend(u, big_r, n_ext)?;
    let semi_in = u.seminorm_sq(s)?;
    if semi_in <= 0.0 {
        return Err(Error::ZeroSeminorm);
    }
    let semi_out = ext.seminorm_sq(s)?;
    let l2_in = u.l2_norm_sq();
    if l2_in <= 0.0 {
        return Err(Error::ZeroSeminorm);
    }
    let l2_out = ext.l2_norm_sq();
    let dim = 2.0;
    Ok(ExtensionRatios {
        seminorm_ratio: (semi_out / semi_in).sqrt(),
        seminorm_bound: 4.0 * big_r.powf(4.0 * dim),
        l2_ratio: (l2_out / l2_in).sqrt(),
        l2_bound: 2.0 * big_r.powf(2.0 * dim),
    })
}

/// Subset-mean Poincaré ratio
/// `‖u − ū_E‖²_{L²(B_R)} / ((1−s)(R²/|E|) R^{2s} [u]²_{W^{s,2}(B_R)})`.
/// Maximizing this over a test battery yields an empirical lower estimate
/// of the dimensional constant `ℳ`.
pub fn ms_poincare_empirical(u: &SampledField, e: &DomainMask, s: f64) -> Result<f64> {
    if !(0.0 < s && s < 1.0) {
        return Err(Error::OrderOutOfRange(s, 0.0, 1.0));
    }
    let (mean, count) = u.subset_mean(e)?;
    let e_area = count as f64 * u.spacing * u.spacing;
    let cell = u.spacing * u.spacing;
    let num: f64 = (0..u.n * u.n)
        .filter(|&k| u.inside[k])
        .map(|k| (u.values[k] - mean).powi(2) * cell)
        .sum();
    if num == 0.0 {
        return Ok(0.0);
    }
    let semi = u.seminorm_sq(s)?;
    if semi <= 0.0 {
        return Err(Error::ZeroSeminorm);
    }
    let big_r = u.radius;
    let denom = (1.0 - s) * (big_r * big_r / e_area) * big_r.powf(2.0 * s) * semi;
    Ok(num / denom)
}

/// A random smooth field: a small sum of Gaussian bumps with centers and
/// widths drawn from `rng`.
pub fn random_bump_field(
    radius: f64,
    n: usize,
    rng: &mut impl Rng,
) -> Result<SampledField> {
    let bumps: Vec<(Point, f64, f64)> = (0..4)
        .map(|_| {
            let c = Point::new(
                rng.gen_range(-0.7 * radius..0.7 * radius),
                rng.gen_range(-0.7 * radius..0.7 * radius),
            );
            let w = rng.gen_range(0.15 * radius..0.6 * radius);
            let a = rng.gen_range(-1.0..1.0);
            (c, w, a)
        })
        .collect();
    SampledField::sample(Point::new(0.0, 0.0), radius, n, |p| {
        bumps
            .iter()
            .map(|&(c, w, a)| a * (-p.dist_sq(c) / (w * w)).exp())
            .sum()
    })
}

/// Battery estimate of `ℳ`: maximum Poincaré ratio over `n_fields` random
/// bump fields and the given orders, with `E` a fixed subset of `B_R`.
pub fn ms_battery(
    big_r: f64,
    e: &DomainMask,
    s_values: &[f64],
    n_fields: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..n_fields {
        let u = random_bump_field(big_r, 33, &mut rng)?;
        for &s in s_values {
            best = best.max(ms_poincare_empirical(&u, e, s)?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, ShapeSpec};

    #[test]
    fn kelvin_fixed_points_and_examples() {
        let p = kelvin(Point::new(1.0, 0.0)).unwrap();
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        let p = kelvin(Point::new(2.0, 0.0)).unwrap();
        assert!((p.x - 0.5).abs() < 1e-15 && p.y.abs() < 1e-15);
        assert!(matches!(kelvin(Point::new(0.0, 0.0)), Err(Error::OriginError)));
    }

    #[test]
    fn kelvin_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            if x.norm() < 1e-3 {
                continue;
            }
            let y = kelvin(kelvin(x).unwrap()).unwrap();
            assert!(x.dist(y) < 1e-14 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn distance_inequalities_hold_pointwise() {
        // |𝒦(z) − 𝒦(w)| ≥ |z − w| and |x − 𝒦(w)| ≥ |x − w| inside B₁
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sample_b1 = |rng: &mut ChaCha8Rng| loop {
            let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if p.norm() < 1.0 && p.norm() > 1e-6 {
                return p;
            }
        };
        for _ in 0..1_000_000 {
            let z = sample_b1(&mut rng);
            let w = sample_b1(&mut rng);
            let kz = kelvin(z).unwrap();
            let kw = kelvin(w).unwrap();
            assert!(kz.dist(kw) >= z.dist(w) * (1.0 - 1e-12));
            assert!(z.dist(kw) >= z.dist(w) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn constant_extends_to_constant() {
        let u = SampledField::sample(Point::new(0.0, 0.0), 1.0, 33, |_| 2.5).unwrap();
        let ext = extend(&u, 2.0, 65).unwrap();
        for (v, &m) in ext.values.iter().zip(ext.inside.iter()) {
            if m {
                assert!((v - 2.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radial_field_inverts_radially() {
        // u(x) = |x| extends to 1/|x| outside the unit disk
        let u = SampledField::sample(Point::new(0.0, 0.0), 1.0, 129, |p| p.norm()).unwrap();
        let ext = extend(&u, 2.0, 257).unwrap();
        let probe = Point::new(1.6, 0.3);
        let got = ext.interp(probe).unwrap();
        let expected = 1.0 / probe.norm();
        assert!((got - expected).abs() < 0.01, "{got} vs {expected}");
    }

    #[test]
    fn constant_l2_ratio_is_r() {
        let u = SampledField::sample(Point::new(0.0, 0.0), 1.0, 65, |_| 1.0).unwrap();
        let ext = extend(&u, 2.0, 129).unwrap();
        let ratio = (ext.l2_norm_sq() / u.l2_norm_sq()).sqrt();
        assert!((ratio - 2.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn extension_ratios_respect_bounds() {
        let big_r = std::f64::consts::SQRT_2;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..10 {
            let u = random_bump_field(1.0, 33, &mut rng).unwrap();
            for s in [0.6, 0.75, 0.9] {
                let r = extension_bound_ratios(&u, big_r, s).unwrap();
                assert!((r.seminorm_bound - 64.0).abs() < 1e-10);
                assert!((r.l2_bound - 8.0).abs() < 1e-10);
                assert!(
                    r.seminorm_ratio <= r.seminorm_bound,
                    "trial {trial}, s = {s}: seminorm ratio {}",
                    r.seminorm_ratio
                );
                assert!(
                    r.l2_ratio <= r.l2_bound,
                    "trial {trial}, s = {s}: L2 ratio {}",
                    r.l2_ratio
                );
            }
        }
    }

    #[test]
    fn constant_field_rejected_in_ratio() {
        let u = SampledField::sample(Point::new(0.0, 0.0), 1.0, 17, |_| 1.0).unwrap();
        assert!(matches!(
            extension_bound_ratios(&u, 2.0, 0.75),
            Err(Error::ZeroSeminorm)
        ));
    }

    #[test]
    fn poincare_ratio_zero_for_constants() {
        let big_r = std::f64::consts::SQRT_2;
        let u = SampledField::sample(Point::new(0.0, 0.0), big_r, 33, |_| 3.0).unwrap();
        let e = rasterize(&ShapeSpec::Square { side: 1.0 }, 1.0 / 16.0).unwrap();
        assert_eq!(ms_poincare_empirical(&u, &e, 0.75).unwrap(), 0.0);
    }

    #[test]
    fn poincare_ratio_finite_for_linear_field() {
        let big_r = std::f64::consts::SQRT_2;
        let u = SampledField::sample(Point::new(0.0, 0.0), big_r, 33, |p| p.x).unwrap();
        let e = rasterize(&ShapeSpec::Square { side: 1.0 }, 1.0 / 16.0).unwrap();
        let ratio = ms_poincare_empirical(&u, &e, 0.75).unwrap();
        assert!(ratio.is_finite() && ratio > 0.0);
    }

    #[test]
    fn empty_subset_is_an_error() {
        let u = SampledField::sample(Point::new(0.0, 0.0), 1.0, 17, |p| p.x).unwrap();
        // a far-away subset shares no samples with B₁
        let e = rasterize(
            &ShapeSpec::Polygon {
                vertices: vec![
                    Point::new(10.0, 10.0),
                    Point::new(11.0, 10.0),
                    Point::new(11.0, 11.0),
                    Point::new(10.0, 11.0),
                ],
            },
            1.0 / 8.0,
        )
        .unwrap();
        assert!(matches!(
            u.subset_mean(&e),
            Err(Error::ZeroMeasureSubset)
        ));
    }

    #[test]
    fn battery_yields_positive_estimate() {
        let big_r = std::f64::consts::SQRT_2;
        // E: right half of B_R, as a rasterized polygon wedge
        let e = rasterize(
            &ShapeSpec::Polygon {
                vertices: vec![
                    Point::new(0.0, -1.3),
                    Point::new(1.3, -1.3),
                    Point::new(1.3, 1.3),
                    Point::new(0.0, 1.3),
                ],
            },
            1.0 / 16.0,
        )
        .unwrap();
        let m = ms_battery(big_r, &e, &[0.6, 0.75, 0.9], 25, 42).unwrap();
        assert!(m > 0.0 && m.is_finite(), "empirical M = {m}");
    }
}
