//! Planar domains as rasterized cell masks.
//!
//! A [`DomainMask`] is an axis-aligned grid of square cells of spacing `h`
//! together with a list of zero-width obstacle segments. Open sets are
//! represented by the union of occupied cells; slits (such as the cracks of
//! the cracked-square family) are carried as segments, not as removed
//! cells, so they do not perturb areas at first order in `h`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        (self.x - other.x).powi(2) + (self.y - other.y).powi(2)
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

/// A closed line segment, used for zero-width obstacles and polygon edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    /// Euclidean distance from `p` to the segment.
    pub fn dist_to_point(&self, p: Point) -> f64 {
        let dx = self.b.x - self.a.x;
        let dy = self.b.y - self.a.y;
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.a.dist(p);
        }
        let t = (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2).clamp(0.0, 1.0);
        p.dist(Point::new(self.a.x + t * dx, self.a.y + t * dy))
    }

    /// Proper or touching intersection with another segment.
    pub fn intersects(&self, other: &Segment) -> bool {
        fn orient(p: Point, q: Point, r: Point) -> f64 {
            (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
        }
        fn on_segment(p: Point, q: Point, r: Point) -> bool {
            r.x >= p.x.min(q.x) - 1e-12
                && r.x <= p.x.max(q.x) + 1e-12
                && r.y >= p.y.min(q.y) - 1e-12
                && r.y <= p.y.max(q.y) + 1e-12
        }
        let d1 = orient(self.a, self.b, other.a);
        let d2 = orient(self.a, self.b, other.b);
        let d3 = orient(other.a, other.b, self.a);
        let d4 = orient(other.a, other.b, self.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1.abs() < 1e-14 && on_segment(self.a, self.b, other.a))
            || (d2.abs() < 1e-14 && on_segment(self.a, self.b, other.b))
            || (d3.abs() < 1e-14 && on_segment(other.a, other.b, self.a))
            || (d4.abs() < 1e-14 && on_segment(other.a, other.b, self.b))
    }

    /// Does the segment meet the open axis-aligned rectangle?
    pub fn intersects_rect(&self, xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> bool {
        let inside = |p: Point| p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax;
        if inside(self.a) || inside(self.b) {
            return true;
        }
        let corners = [
            Point::new(xmin, ymin),
            Point::new(xmax, ymin),
            Point::new(xmax, ymax),
            Point::new(xmin, ymax),
        ];
        for i in 0..4 {
            let edge = Segment::new(corners[i], corners[(i + 1) % 4]);
            if self.intersects(&edge) {
                // A segment that only grazes a corner or runs exactly along
                // an edge does not enter the open rectangle; accept the
                // coarse test anyway, it errs on the safe (exclusion) side.
                return true;
            }
        }
        false
    }
}

/// Generator parameters for the shape zoo.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Disk { radius: f64 },
    Square { side: f64 },
    Rectangle { width: f64, height: f64 },
    /// Square of side `arm` with its open upper-right quadrant removed.
    LShape { arm: f64 },
    /// Disk of radius `outer` minus the closed disk of radius `inner`.
    Annulus { outer: f64, inner: f64 },
    /// Disk of radius `pitch * turns` minus an Archimedean spiral wall of
    /// the given width; a high-perimeter simply connected stress test.
    Spiral { turns: f64, pitch: f64, wall: f64 },
    /// The square (-k, k)^2 with zero-width slits on y = i for |x| >= 1.
    CrackedSquare { k: u32 },
    Polygon { vertices: Vec<Point> },
}

impl ShapeSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        match self {
            ShapeSpec::Disk { radius } if *radius <= 0.0 => bad("disk radius must be positive"),
            ShapeSpec::Square { side } if *side <= 0.0 => bad("square side must be positive"),
            ShapeSpec::Rectangle { width, height } if *width <= 0.0 || *height <= 0.0 => {
                bad("rectangle sides must be positive")
            }
            ShapeSpec::LShape { arm } if *arm <= 0.0 => bad("L-shape arm must be positive"),
            ShapeSpec::Annulus { outer, inner } if !(*inner > 0.0 && inner < outer) => {
                bad("annulus needs 0 < inner < outer")
            }
            ShapeSpec::Spiral { turns, pitch, wall }
                if !(*turns > 0.0 && *pitch > 0.0 && *wall > 0.0 && wall < pitch) =>
            {
                bad("spiral needs positive turns, pitch and 0 < wall < pitch")
            }
            ShapeSpec::CrackedSquare { k } if *k < 2 => bad("cracked square needs k >= 2"),
            ShapeSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return bad("polygon needs at least 3 vertices");
                }
                let n = vertices.len();
                for i in 0..n {
                    let ei = Segment::new(vertices[i], vertices[(i + 1) % n]);
                    for j in i + 1..n {
                        // skip edges sharing a vertex
                        if j == i || (j + 1) % n == i || (i + 1) % n == j {
                            continue;
                        }
                        let ej = Segment::new(vertices[j], vertices[(j + 1) % n]);
                        if ei.intersects(&ej) {
                            return bad("polygon is self-intersecting");
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Smallest geometric feature the rasterizer must resolve.
    pub fn feature_size(&self) -> f64 {
        match self {
            ShapeSpec::Disk { radius } => *radius,
            ShapeSpec::Square { side } => 0.5 * side,
            ShapeSpec::Rectangle { width, height } => 0.5 * width.min(*height),
            ShapeSpec::LShape { arm } => 0.5 * arm,
            ShapeSpec::Annulus { outer, inner } => inner.min(0.5 * (outer - inner)),
            ShapeSpec::Spiral { pitch, wall, .. } => wall.min(pitch - wall),
            // slit spacing is 1 for every k
            ShapeSpec::CrackedSquare { .. } => 1.0,
            ShapeSpec::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| vertices[i].dist(vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Bounding extent (xmin, xmax, ymin, ymax).
    fn extent(&self) -> (f64, f64, f64, f64) {
        match self {
            ShapeSpec::Disk { radius } => (-radius, *radius, -radius, *radius),
            ShapeSpec::Square { side } => (-side / 2.0, side / 2.0, -side / 2.0, side / 2.0),
            ShapeSpec::Rectangle { width, height } => {
                (-width / 2.0, width / 2.0, -height / 2.0, height / 2.0)
            }
            ShapeSpec::LShape { arm } => (-arm / 2.0, arm / 2.0, -arm / 2.0, arm / 2.0),
            ShapeSpec::Annulus { outer, .. } => (-outer, *outer, -outer, *outer),
            ShapeSpec::Spiral { turns, pitch, .. } => {
                let r = turns * pitch;
                (-r, r, -r, r)
            }
            ShapeSpec::CrackedSquare { k } => {
                let k = *k as f64;
                (-k, k, -k, k)
            }
            ShapeSpec::Polygon { vertices } => {
                let mut e = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    e.0 = e.0.min(v.x);
                    e.1 = e.1.max(v.x);
                    e.2 = e.2.min(v.y);
                    e.3 = e.3.max(v.y);
                }
                e
            }
        }
    }

    /// Membership test for the open set described by the spec.
    fn contains(&self, p: Point) -> bool {
        match self {
            ShapeSpec::Disk { radius } => p.norm() < *radius,
            ShapeSpec::Square { side } => p.x.abs() < side / 2.0 && p.y.abs() < side / 2.0,
            ShapeSpec::Rectangle { width, height } => {
                p.x.abs() < width / 2.0 && p.y.abs() < height / 2.0
            }
            ShapeSpec::LShape { arm } => {
                p.x.abs() < arm / 2.0 && p.y.abs() < arm / 2.0 && !(p.x > 0.0 && p.y > 0.0)
            }
            ShapeSpec::Annulus { outer, inner } => {
                let r = p.norm();
                r < *outer && r > *inner
            }
            ShapeSpec::Spiral { turns, pitch, wall } => {
                let r = p.norm();
                let r_out = turns * pitch;
                if r >= r_out {
                    return false;
                }
                // radial distance to the Archimedean wall centerline
                let theta = p.y.atan2(p.x).rem_euclid(2.0 * std::f64::consts::PI);
                let frac = theta / (2.0 * std::f64::consts::PI);
                let mut dist = f64::INFINITY;
                let mut k = 0.0;
                loop {
                    let rk = pitch * (frac + k);
                    dist = dist.min((r - rk).abs());
                    if rk > r_out + pitch {
                        break;
                    }
                    k += 1.0;
                }
                dist > wall / 2.0
            }
            ShapeSpec::CrackedSquare { k } => {
                let k = *k as f64;
                p.x.abs() < k && p.y.abs() < k
            }
            ShapeSpec::Polygon { vertices } => {
                // ray casting
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a.y > p.y) != (b.y > p.y) {
                        let t = (p.y - a.y) / (b.y - a.y);
                        if p.x < a.x + t * (b.x - a.x) {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    fn obstacle_segments(&self) -> Vec<Segment> {
        match self {
            ShapeSpec::CrackedSquare { k } => {
                let k = *k as i64;
                let mut segs = Vec::new();
                for i in -(k - 1)..=(k - 1) {
                    let y = i as f64;
                    segs.push(Segment::new(
                        Point::new(-(k as f64), y),
                        Point::new(-1.0, y),
                    ));
                    segs.push(Segment::new(Point::new(1.0, y), Point::new(k as f64, y)));
                }
                segs
            }
            _ => Vec::new(),
        }
    }
}

/// Rasterized planar domain.
#[derive(Clone, Debug)]
pub struct DomainMask {
    h: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    cells: Vec<bool>,
    segments: Vec<Segment>,
}

impl DomainMask {
    pub fn from_parts(
        h: f64,
        origin: Point,
        nx: usize,
        ny: usize,
        cells: Vec<bool>,
        segments: Vec<Segment>,
    ) -> Result<Self> {
        if h <= 0.0 {
            return Err(Error::InvalidSpec("grid spacing must be positive".into()));
        }
        if cells.len() != nx * ny || !cells.iter().any(|&c| c) {
            return Err(Error::EmptyDomain);
        }
        let mask = DomainMask { h, origin, nx, ny, cells, segments };
        let (xmin, xmax, ymin, ymax) = mask.bbox();
        for s in &mask.segments {
            for p in [s.a, s.b] {
                if p.x < xmin - 1e-9 || p.x > xmax + 1e-9 || p.y < ymin - 1e-9 || p.y > ymax + 1e-9
                {
                    return Err(Error::InvalidSpec(
                        "obstacle segment outside bounding box".into(),
                    ));
                }
            }
        }
        Ok(mask)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    #[inline]
    pub fn occupied(&self, ix: usize, iy: usize) -> bool {
        ix < self.nx && iy < self.ny && self.cells[iy * self.nx + ix]
    }

    #[inline]
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            self.origin.x + (ix as f64 + 0.5) * self.h,
            self.origin.y + (iy as f64 + 0.5) * self.h,
        )
    }

    /// Lattice corner (node) position.
    #[inline]
    pub fn node_pos(&self, ix: usize, iy: usize) -> Point {
        Point::new(self.origin.x + ix as f64 * self.h, self.origin.y + iy as f64 * self.h)
    }

    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        (
            self.origin.x,
            self.origin.x + self.nx as f64 * self.h,
            self.origin.y,
            self.origin.y + self.ny as f64 * self.h,
        )
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.nx;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(i, _)| (i % nx, i / nx))
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Area of the occupied region.
    pub fn area(&self) -> f64 {
        self.occupied_count() as f64 * self.h * self.h
    }

    /// Unoccupied cell centers that touch the occupied region (8-adjacency).
    fn boundary_cells(&self) -> Vec<Point> {
        let mut out = Vec::new();
        // one-cell ring outside the stored grid counts as unoccupied too
        for iy in -1..=(self.ny as i64) {
            for ix in -1..=(self.nx as i64) {
                let occ = ix >= 0
                    && iy >= 0
                    && self.occupied(ix as usize, iy as usize);
                if occ {
                    continue;
                }
                let mut touches = false;
                'n: for dy in -1..=1i64 {
                    for dx in -1..=1i64 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let jx = ix + dx;
                        let jy = iy + dy;
                        if jx >= 0 && jy >= 0 && self.occupied(jx as usize, jy as usize) {
                            touches = true;
                            break 'n;
                        }
                    }
                }
                if touches {
                    out.push(Point::new(
                        self.origin.x + (ix as f64 + 0.5) * self.h,
                        self.origin.y + (iy as f64 + 0.5) * self.h,
                    ));
                }
            }
        }
        out
    }

    /// Distance from a point to the discrete boundary
    /// (nearest unoccupied cell center or obstacle segment).
    fn boundary_distance(&self, p: Point, boundary: &[Point]) -> f64 {
        let mut d = f64::INFINITY;
        for q in boundary {
            let dd = p.dist(*q);
            if dd < d {
                d = dd;
            }
        }
        for s in &self.segments {
            let dd = s.dist_to_point(p);
            if dd < d {
                d = dd;
            }
        }
        d
    }
}

/// Rasterize a shape spec onto a grid of spacing `h`.
///
/// The grid is aligned so that lattice lines fall on integer multiples of
/// `h`, with a two-cell unoccupied margin around the shape.
///
/// ```
/// use fracmh::geometry::{inradius, rasterize, ShapeSpec};
///
/// let mask = rasterize(&ShapeSpec::Square { side: 2.0 }, 1.0 / 16.0)?;
/// assert!((mask.area() - 4.0).abs() < 1e-12);
/// assert!((inradius(&mask)? - 1.0).abs() < 0.1);
/// # Ok::<(), fracmh::Error>(())
/// ```
pub fn rasterize(spec: &ShapeSpec, h: f64) -> Result<DomainMask> {
    spec.validate()?;
    if h <= 0.0 {
        return Err(Error::InvalidSpec("grid spacing must be positive".into()));
    }
    let feature = spec.feature_size();
    if h > feature / 4.0 + 1e-12 {
        return Err(Error::FeatureTooFine { h, feature });
    }
    let (xmin, xmax, ymin, ymax) = spec.extent();
    let ix0 = (xmin / h).floor() as i64 - 2;
    let iy0 = (ymin / h).floor() as i64 - 2;
    let ix1 = (xmax / h).ceil() as i64 + 2;
    let iy1 = (ymax / h).ceil() as i64 + 2;
    let nx = (ix1 - ix0) as usize;
    let ny = (iy1 - iy0) as usize;
    let origin = Point::new(ix0 as f64 * h, iy0 as f64 * h);
    let mut cells = vec![false; nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let c = Point::new(
                origin.x + (ix as f64 + 0.5) * h,
                origin.y + (iy as f64 + 0.5) * h,
            );
            cells[iy * nx + ix] = spec.contains(c);
        }
    }
    DomainMask::from_parts(h, origin, nx, ny, cells, spec.obstacle_segments())
}

/// Largest distance from an occupied cell center to the discrete boundary.
///
/// Accurate to within `h * sqrt(2)` of the inradius of the represented set.
pub fn inradius(mask: &DomainMask) -> Result<f64> {
    if mask.occupied_count() == 0 {
        return Err(Error::EmptyDomain);
    }
    let boundary = mask.boundary_cells();
    let mut best: f64 = 0.0;
    for (ix, iy) in mask.occupied_cells() {
        let p = mask.cell_center(ix, iy);
        let d = mask.boundary_distance(p, &boundary);
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Discrete simple-connectivity test: the unoccupied region of the padded
/// bounding box (with obstacle segments blocking grid-graph edges) must be
/// a single 4-connected component.
pub fn is_simply_connected(mask: &DomainMask) -> Result<bool> {
    if mask.occupied_count() == 0 {
        return Err(Error::EmptyDomain);
    }
    let nx = mask.nx + 2;
    let ny = mask.ny + 2;
    // padded index -> unoccupied?
    let free = |ix: usize, iy: usize| -> bool {
        if ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1 {
            true
        } else {
            !mask.occupied(ix - 1, iy - 1)
        }
    };
    let center = |ix: usize, iy: usize| -> Point {
        Point::new(
            mask.origin.x + (ix as f64 - 1.0 + 0.5) * mask.h,
            mask.origin.y + (iy as f64 - 1.0 + 0.5) * mask.h,
        )
    };
    let blocked = |a: Point, b: Point| -> bool {
        let step = Segment::new(a, b);
        mask.segments.iter().any(|s| s.intersects(&step))
    };
    let mut seen = vec![false; nx * ny];
    let mut components = 0usize;
    let mut queue = std::collections::VecDeque::new();
    for start_iy in 0..ny {
        for start_ix in 0..nx {
            if !free(start_ix, start_iy) || seen[start_iy * nx + start_ix] {
                continue;
            }
            components += 1;
            if components > 1 {
                return Ok(false);
            }
            seen[start_iy * nx + start_ix] = true;
            queue.push_back((start_ix, start_iy));
            while let Some((ix, iy)) = queue.pop_front() {
                let p = center(ix, iy);
                let neighbors = [
                    (ix.wrapping_sub(1), iy),
                    (ix + 1, iy),
                    (ix, iy.wrapping_sub(1)),
                    (ix, iy + 1),
                ];
                for (jx, jy) in neighbors {
                    if jx >= nx || jy >= ny || !free(jx, jy) || seen[jy * nx + jx] {
                        continue;
                    }
                    if !mask.segments.is_empty() && blocked(p, center(jx, jy)) {
                        continue;
                    }
                    seen[jy * nx + jx] = true;
                    queue.push_back((jx, jy));
                }
            }
        }
    }
    Ok(components == 1)
}

/// Dilate all lengths by `t > 0`; occupancy is unchanged cell-for-cell.
pub fn scale(mask: &DomainMask, t: f64) -> Result<DomainMask> {
    if t <= 0.0 {
        return Err(Error::NonpositiveScale(t));
    }
    Ok(DomainMask {
        h: mask.h * t,
        origin: Point::new(mask.origin.x * t, mask.origin.y * t),
        nx: mask.nx,
        ny: mask.ny,
        cells: mask.cells.clone(),
        segments: mask
            .segments
            .iter()
            .map(|s| {
                Segment::new(
                    Point::new(s.a.x * t, s.a.y * t),
                    Point::new(s.b.x * t, s.b.y * t),
                )
            })
            .collect(),
    })
}

/// Discrete boundary sample: unoccupied cell centers 4-adjacent to occupied
/// cells, plus points sampled along obstacle segments at spacing <= h/2.
pub fn boundary_points(mask: &DomainMask) -> Vec<Point> {
    let mut out = Vec::new();
    for iy in -1..=(mask.ny as i64) {
        for ix in -1..=(mask.nx as i64) {
            let occ = ix >= 0 && iy >= 0 && mask.occupied(ix as usize, iy as usize);
            if occ {
                continue;
            }
            let touches = [(ix - 1, iy), (ix + 1, iy), (ix, iy - 1), (ix, iy + 1)]
                .iter()
                .any(|&(jx, jy)| jx >= 0 && jy >= 0 && mask.occupied(jx as usize, jy as usize));
            if touches {
                out.push(Point::new(
                    mask.origin.x + (ix as f64 + 0.5) * mask.h,
                    mask.origin.y + (iy as f64 + 0.5) * mask.h,
                ));
            }
        }
    }
    for s in &mask.segments {
        let len = s.a.dist(s.b);
        let n = (2.0 * len / mask.h).ceil().max(1.0) as usize;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            out.push(Point::new(
                s.a.x + t * (s.b.x - s.a.x),
                s.a.y + t * (s.b.y - s.a.y),
            ));
        }
    }
    out
}

/// Write a mask in the portable text format (header + 0/1 rows).
pub fn write_mask<W: Write>(mask: &DomainMask, mut w: W) -> Result<()> {
    writeln!(w, "fracmh-mask v1")?;
    writeln!(w, "h {:.17e}", mask.h)?;
    writeln!(w, "origin {:.17e} {:.17e}", mask.origin.x, mask.origin.y)?;
    writeln!(w, "dims {} {}", mask.nx, mask.ny)?;
    writeln!(w, "segments {}", mask.segments.len())?;
    for s in &mask.segments {
        writeln!(
            w,
            "seg {:.17e} {:.17e} {:.17e} {:.17e}",
            s.a.x, s.a.y, s.b.x, s.b.y
        )?;
    }
    for iy in 0..mask.ny {
        let row: String = (0..mask.nx)
            .map(|ix| if mask.occupied(ix, iy) { '1' } else { '0' })
            .collect();
        writeln!(w, "{row}")?;
    }
    Ok(())
}

/// Read a mask previously written by [`write_mask`].
pub fn read_mask<R: BufRead>(r: R) -> Result<DomainMask> {
    let mut lines = r.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of mask file".into()))?
            .map_err(Error::from)
    };
    let parse_err = |what: &str| Error::Parse(format!("bad {what} line in mask file"));
    if next()?.trim() != "fracmh-mask v1" {
        return Err(Error::Parse("missing mask header".into()));
    }
    let h_line = next()?;
    let h: f64 = h_line
        .strip_prefix("h ")
        .ok_or_else(|| parse_err("h"))?
        .trim()
        .parse()
        .map_err(|_| parse_err("h"))?;
    let o_line = next()?;
    let parts: Vec<f64> = o_line
        .strip_prefix("origin ")
        .ok_or_else(|| parse_err("origin"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err("origin")))
        .collect::<Result<_>>()?;
    if parts.len() != 2 {
        return Err(parse_err("origin"));
    }
    let d_line = next()?;
    let dims: Vec<usize> = d_line
        .strip_prefix("dims ")
        .ok_or_else(|| parse_err("dims"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err("dims")))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(parse_err("dims"));
    }
    let s_line = next()?;
    let nseg: usize = s_line
        .strip_prefix("segments ")
        .ok_or_else(|| parse_err("segments"))?
        .trim()
        .parse()
        .map_err(|_| parse_err("segments"))?;
    let mut segments = Vec::with_capacity(nseg);
    for _ in 0..nseg {
        let line = next()?;
        let nums: Vec<f64> = line
            .strip_prefix("seg ")
            .ok_or_else(|| parse_err("seg"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err("seg")))
            .collect::<Result<_>>()?;
        if nums.len() != 4 {
            return Err(parse_err("seg"));
        }
        segments.push(Segment::new(
            Point::new(nums[0], nums[1]),
            Point::new(nums[2], nums[3]),
        ));
    }
    let (nx, ny) = (dims[0], dims[1]);
    let mut cells = vec![false; nx * ny];
    for iy in 0..ny {
        let row = next()?;
        let row = row.trim();
        if row.len() != nx {
            return Err(parse_err("cell row"));
        }
        for (ix, ch) in row.chars().enumerate() {
            cells[iy * nx + ix] = ch == '1';
        }
    }
    DomainMask::from_parts(h, Point::new(parts[0], parts[1]), nx, ny, cells, segments)
}
