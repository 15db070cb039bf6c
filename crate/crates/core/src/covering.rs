//! Coverings of a domain by boundary-centered disks.
//!
//! Every point of a simply connected domain is within `r_Ω` of the boundary,
//! so disks of radius `r = r_Ω(1+√2)` centered on the discrete boundary
//! cover the domain as soon as every cell has a center within `r` of it.
//! The greedy construction below picks, for each still-uncovered cell, its
//! nearest boundary point as the next center. The family is then colored
//! greedily so that same-colored disks are pairwise disjoint; the class
//! count is reported and, on the shipped shape zoo, stays at or below 36.

use crate::error::{Error, Result};
use crate::geometry::{boundary_points, inradius, DomainMask, Point};

/// A family of equal-radius disks centered on the discrete boundary,
/// together with a coloring into pairwise-disjoint classes.
#[derive(Clone, Debug)]
pub struct Covering {
    centers: Vec<Point>,
    radius: f64,
    /// one color per center; empty until [`color_covering`] runs
    colors: Vec<usize>,
    class_count: usize,
}

impl Covering {
    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Color of each disk, in center order. Empty before coloring.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Greedy construction: while an occupied cell remains uncovered, add its
/// nearest boundary point as a center. Terminates because each new disk
/// covers at least the cell that selected it (`dist(x, ∂Ω) ≤ r_Ω < r`).
///
/// ```
/// use fracmh::covering::{build_covering, color_covering, verify_coverage};
/// use fracmh::geometry::{rasterize, ShapeSpec};
///
/// let mask = rasterize(&ShapeSpec::Rectangle { width: 6.0, height: 1.0 }, 1.0 / 8.0)?;
/// let cov = color_covering(build_covering(&mask)?);
/// assert!(verify_coverage(&mask, &cov));
/// assert!(cov.class_count() <= 36);
/// # Ok::<(), fracmh::Error>(())
/// ```
pub fn build_covering(mask: &DomainMask) -> Result<Covering> {
    let r_in = inradius(mask)?;
    let radius = r_in * (1.0 + std::f64::consts::SQRT_2);
    let boundary = boundary_points(mask);
    if boundary.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let cells: Vec<Point> = mask
        .occupied_cells()
        .map(|(ix, iy)| mask.cell_center(ix, iy))
        .collect();
    if cells.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let r2 = radius * radius;
    let mut covered = vec![false; cells.len()];
    let mut centers: Vec<Point> = Vec::new();
    for i in 0..cells.len() {
        if covered[i] {
            continue;
        }
        let x = cells[i];
        let nearest = boundary
            .iter()
            .copied()
            .min_by(|a, b| {
                x.dist_sq(*a)
                    .partial_cmp(&x.dist_sq(*b))
                    .expect("finite distances")
            })
            .expect("nonempty boundary");
        debug_assert!(x.dist_sq(nearest) <= r2, "boundary farther than r_Ω(1+√2)");
        centers.push(nearest);
        for (c, flag) in cells.iter().zip(covered.iter_mut()) {
            if !*flag && c.dist_sq(nearest) <= r2 {
                *flag = true;
            }
        }
    }
    Ok(Covering { centers, radius, colors: Vec::new(), class_count: 0 })
}

/// Greedy coloring of the disk intersection graph: two disks conflict when
/// their centers are closer than `2r` (tangent disks count as disjoint).
pub fn color_covering(mut cov: Covering) -> Covering {
    let n = cov.centers.len();
    let sep2 = (2.0 * cov.radius) * (2.0 * cov.radius);
    let mut colors = vec![usize::MAX; n];
    let mut class_count = 0;
    for i in 0..n {
        let mut used = vec![false; class_count];
        for j in 0..i {
            if cov.centers[i].dist_sq(cov.centers[j]) < sep2 {
                used[colors[j]] = true;
            }
        }
        let color = (0..class_count).find(|&c| !used[c]).unwrap_or_else(|| {
            class_count += 1;
            class_count - 1
        });
        colors[i] = color;
    }
    cov.colors = colors;
    cov.class_count = class_count;
    cov
}

/// Exhaustive coverage oracle: every occupied cell center lies in a disk.
pub fn verify_coverage(mask: &DomainMask, cov: &Covering) -> bool {
    let r2 = cov.radius * cov.radius;
    mask.occupied_cells().all(|(ix, iy)| {
        let x = mask.cell_center(ix, iy);
        cov.centers.iter().any(|c| x.dist_sq(*c) <= r2)
    })
}

/// Exhaustive disjointness oracle: same-colored disks never overlap.
pub fn verify_disjoint_classes(cov: &Covering) -> bool {
    if cov.colors.len() != cov.centers.len() {
        return false;
    }
    let sep2 = (2.0 * cov.radius) * (2.0 * cov.radius);
    for i in 0..cov.centers.len() {
        for j in 0..i {
            if cov.colors[i] == cov.colors[j]
                && cov.centers[i].dist_sq(cov.centers[j]) < sep2
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, ShapeSpec};

    #[test]
    fn unit_disk_needs_one_center() {
        // radius (1+√2)r_Ω exceeds the diameter, so the first disk covers
        let mask = rasterize(&ShapeSpec::Disk { radius: 1.0 }, 1.0 / 16.0).unwrap();
        let cov = build_covering(&mask).unwrap();
        assert_eq!(cov.len(), 1);
        assert!(verify_coverage(&mask, &cov));
        let cov = color_covering(cov);
        assert_eq!(cov.class_count(), 1);
    }

    #[test]
    fn radius_matches_inradius() {
        let mask = rasterize(&ShapeSpec::Square { side: 2.0 }, 1.0 / 16.0).unwrap();
        let cov = build_covering(&mask).unwrap();
        let expected = inradius(&mask).unwrap() * (1.0 + std::f64::consts::SQRT_2);
        assert!((cov.radius() - expected).abs() < 1e-12);
    }

    #[test]
    fn centers_lie_on_discrete_boundary() {
        let mask = rasterize(
            &ShapeSpec::Rectangle { width: 20.0, height: 1.0 },
            1.0 / 8.0,
        )
        .unwrap();
        let cov = build_covering(&mask).unwrap();
        let boundary = boundary_points(&mask);
        for c in cov.centers() {
            let near = boundary.iter().any(|b| c.dist_sq(*b) < 1e-20);
            assert!(near, "center {c:?} not a boundary point");
        }
    }

    #[test]
    fn long_strip_covered_with_several_disks() {
        // r_Ω = 0.5, r ≈ 1.207: the 1×20 strip needs on the order of
        // 20 / (2r) ≈ 8 disks and at least two
        let mask = rasterize(
            &ShapeSpec::Rectangle { width: 20.0, height: 1.0 },
            1.0 / 8.0,
        )
        .unwrap();
        let cov = build_covering(&mask).unwrap();
        assert!(cov.len() >= 2 && cov.len() <= 40, "got {} disks", cov.len());
        assert!(verify_coverage(&mask, &cov));
        let cov = color_covering(cov);
        assert!(verify_disjoint_classes(&cov));
        assert!(cov.class_count() <= 36, "{} classes", cov.class_count());
    }

    #[test]
    fn two_overlapping_disks_need_two_classes() {
        let cov = Covering {
            centers: vec![Point::new(0.0, 0.0), Point::new(0.5, 0.0)],
            radius: 1.0,
            colors: Vec::new(),
            class_count: 0,
        };
        let cov = color_covering(cov);
        assert_eq!(cov.class_count(), 2);
        assert!(verify_disjoint_classes(&cov));
    }

    #[test]
    fn zoo_class_counts_within_bound() {
        let zoo: Vec<(ShapeSpec, f64)> = vec![
            (ShapeSpec::Disk { radius: 1.0 }, 1.0 / 16.0),
            (ShapeSpec::Square { side: 2.0 }, 1.0 / 16.0),
            (ShapeSpec::Rectangle { width: 4.0, height: 2.0 }, 1.0 / 16.0),
            (ShapeSpec::LShape { arm: 2.0 }, 1.0 / 16.0),
            (
                ShapeSpec::Spiral { turns: 1.75, pitch: 0.8, wall: 0.3 },
                1.0 / 32.0,
            ),
            (ShapeSpec::CrackedSquare { k: 2 }, 1.0 / 8.0),
            (ShapeSpec::CrackedSquare { k: 3 }, 1.0 / 8.0),
        ];
        for (spec, h) in zoo {
            let mask = rasterize(&spec, h).unwrap();
            let cov = color_covering(build_covering(&mask).unwrap());
            assert!(verify_coverage(&mask, &cov), "{spec:?} not covered");
            assert!(verify_disjoint_classes(&cov), "{spec:?} classes overlap");
            assert!(
                cov.class_count() <= 36,
                "{spec:?}: {} classes",
                cov.class_count()
            );
        }
    }
}
