//! Eigensolvers for the discrete Rayleigh quotients.
//!
//! Both the fractional problem (stiffness from [`crate::nonlocal`], bilinear
//! mass) and the local reference problem (5-point finite differences) are
//! generalized symmetric eigenproblems `A v = λ B v` with `A` positive
//! definite. The smallest pair is found by inverse iteration; inner solves
//! use a direct Cholesky factorization for small systems and preconditioned
//! conjugate gradients above.

use crate::error::{Error, Result};
use crate::geometry::{DomainMask, Segment};
use crate::nonlocal::NonlocalSystem;
use nalgebra::{Cholesky, DMatrix, DVector};

/// Systems past this size skip the dense factorization path.
pub const DENSE_LIMIT: usize = 1600;

/// Result of an eigenvalue computation.
#[derive(Clone, Debug)]
pub struct EigenEstimate {
    /// smallest generalized eigenvalue (units 1/length^{2s}, or 1/length²
    /// for the local solver)
    pub lambda: f64,
    /// first eigenvector, unit B-norm, nonnegative mean
    pub eigenvector: Vec<f64>,
    /// `‖Av − λBv‖ / ‖Bv‖`
    pub residual: f64,
    pub h: f64,
    /// fractional order; `None` for the local solver
    pub s: Option<f64>,
    pub node_count: usize,
}

/// A symmetric-positive generalized pencil `(A, B)` exposed through
/// matrix-vector products.
pub trait SymmetricPencil {
    fn dim(&self) -> usize;
    fn apply_a(&self, v: &[f64]) -> Result<Vec<f64>>;
    fn apply_b(&self, v: &[f64]) -> Result<Vec<f64>>;
    /// Approximate `A⁻¹` used to precondition inner CG solves.
    fn precondition(&self, r: &[f64]) -> Result<Vec<f64>> {
        Ok(r.to_vec())
    }
    /// Solve `A x = rhs` to the given relative residual. The default runs
    /// preconditioned CG starting from `x0`.
    fn solve_a(&self, rhs: &[f64], x0: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
        pcg(self, rhs, x0, rel_tol, 50 * (self.dim() as f64).sqrt() as usize + 200)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Preconditioned conjugate gradients on `A x = b`.
fn pcg<P: SymmetricPencil + ?Sized>(
    p: &P,
    b: &[f64],
    x0: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let ax = p.apply_a(&x)?;
    let mut r: Vec<f64> = b.iter().zip(ax.iter()).map(|(bi, ai)| bi - ai).collect();
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    if norm(&r) <= rel_tol * bnorm {
        return Ok(x);
    }
    let mut z = p.precondition(&r)?;
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..max_iter {
        let ad = p.apply_a(&d)?;
        let alpha = rz / dot(&d, &ad);
        for i in 0..x.len() {
            x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        if norm(&r) <= rel_tol * bnorm {
            return Ok(x);
        }
        z = p.precondition(&r)?;
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..d.len() {
            d[i] = z[i] + beta * d[i];
        }
    }
    // inverse iteration tolerates inexact solves; return the best iterate
    Ok(x)
}

/// Smallest generalized eigenpair by inverse iteration with
/// B-normalization. `tol` is the relative eigenvalue-change tolerance.
pub fn smallest_eigenpair<P: SymmetricPencil + ?Sized>(
    pencil: &P,
    tol: f64,
    max_outer: usize,
) -> Result<(f64, Vec<f64>, f64)> {
    let n = pencil.dim();
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    let mut v = vec![1.0; n];
    let bnorm = |p: &P, w: &[f64]| -> Result<f64> { Ok(dot(w, &p.apply_b(w)?).sqrt()) };
    let nv = bnorm(pencil, &v)?;
    for x in v.iter_mut() {
        *x /= nv;
    }
    let mut lambda = dot(&v, &pencil.apply_a(&v)?);
    let mut x_guess = v.iter().map(|x| x / lambda).collect::<Vec<_>>();
    let mut cg_tol = 1e-6;
    for _ in 0..max_outer {
        let rhs = pencil.apply_b(&v)?;
        let w = pencil.solve_a(&rhs, &x_guess, cg_tol)?;
        let nw = bnorm(pencil, &w)?;
        if !(nw > 0.0) {
            return Err(Error::NoConvergence(max_outer));
        }
        let w: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let lambda_new = dot(&w, &pencil.apply_a(&w)?);
        let change = (lambda_new - lambda).abs() / lambda_new.abs().max(f64::MIN_POSITIVE);
        lambda = lambda_new;
        x_guess = w.iter().map(|x| x / lambda).collect();
        v = w;
        if change <= tol {
            // residual check on the converged pair
            let av = pencil.apply_a(&v)?;
            let bv = pencil.apply_b(&v)?;
            let res: Vec<f64> = av
                .iter()
                .zip(bv.iter())
                .map(|(a, b)| a - lambda * b)
                .collect();
            let residual = norm(&res) / norm(&bv).max(f64::MIN_POSITIVE);
            if residual <= 1e-4 * lambda.abs() {
                // sign fix: nonnegative mean
                if v.iter().sum::<f64>() < 0.0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
                return Ok((lambda, v, residual));
            }
        }
        cg_tol = (0.01 * change).clamp(1e-12, 1e-6);
    }
    Err(Error::NoConvergence(max_outer))
}

/// Dense pencil with a cached Cholesky factorization of `A`.
pub struct DensePencil {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl DensePencil {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
        }
        let chol = a.clone().cholesky().or_else(|| {
            // tiny diagonal lift for numerically semidefinite input
            let eps = 1e-12 * a.diagonal().amax();
            let mut shifted = a.clone();
            for i in 0..shifted.nrows() {
                shifted[(i, i)] += eps;
            }
            shifted.cholesky()
        });
        let chol = chol.ok_or(Error::NoConvergence(0))?;
        Ok(DensePencil { a, b, chol })
    }
}

impl SymmetricPencil for DensePencil {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply_a(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok((&self.a * DVector::from_column_slice(v)).as_slice().to_vec())
    }

    fn apply_b(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok((&self.b * DVector::from_column_slice(v)).as_slice().to_vec())
    }

    fn solve_a(&self, rhs: &[f64], _x0: &[f64], _rel_tol: f64) -> Result<Vec<f64>> {
        let mut x = DVector::from_column_slice(rhs);
        self.chol.solve_mut(&mut x);
        Ok(x.as_slice().to_vec())
    }
}

impl SymmetricPencil for NonlocalSystem {
    fn dim(&self) -> usize {
        self.node_count()
    }

    fn apply_a(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_stiffness(v)
    }

    fn apply_b(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_mass(v)
    }

    fn precondition(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.precondition_stiffness(r)
    }
}

/// Discrete fractional eigenvalue `λ̂₁ˢ(Ω)`: an upper bound of `λ₁ˢ(Ω)` by
/// conformity of the hat space, up to quadrature tolerance.
///
/// ```
/// use fracmh::geometry::{rasterize, ShapeSpec};
/// use fracmh::spectral::{lambda1_local, lambda1_s};
///
/// let mask = rasterize(&ShapeSpec::Square { side: 2.0 }, 1.0 / 8.0)?;
/// let local = lambda1_local(&mask)?;
/// let frac = lambda1_s(&mask, 0.75)?;
/// // both report residual-certified estimates
/// assert!(local.residual <= 1e-4 * local.lambda);
/// assert!(frac.residual <= 1e-4 * frac.lambda);
/// # Ok::<(), fracmh::Error>(())
/// ```
pub fn lambda1_s(mask: &DomainMask, s: f64) -> Result<EigenEstimate> {
    let sys = NonlocalSystem::assemble(mask, s)?;
    let n = sys.node_count();
    let (lambda, vector, residual) = if n <= DENSE_LIMIT {
        let (a, b) = sys.dense_matrices();
        let pencil = DensePencil::new(a, b)?;
        smallest_eigenpair(&pencil, 1e-9, 500)?
    } else {
        smallest_eigenpair(&sys, 1e-9, 500)?
    };
    Ok(EigenEstimate {
        lambda,
        eigenvector: vector,
        residual,
        h: mask.h(),
        s: Some(s),
        node_count: n,
    })
}

/// 5-point finite-difference Dirichlet Laplacian on occupied cell centers.
/// Obstacle segments block adjacency (the missing neighbor acts as a zero
/// Dirichlet ghost, matching `u = 0` on the slit).
pub struct LocalSystem {
    h: f64,
    cells: Vec<(usize, usize)>,
    /// for each unknown, the indices of its 4 in-domain neighbors
    /// (usize::MAX marks a Dirichlet ghost)
    neighbors: Vec<[usize; 4]>,
}

impl LocalSystem {
    pub fn build(mask: &DomainMask) -> Result<Self> {
        let (nx, ny) = mask.dims();
        let h = mask.h();
        let mut index = vec![usize::MAX; nx * ny];
        let mut cells = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                if mask.occupied(ix, iy) {
                    index[iy * nx + ix] = cells.len();
                    cells.push((ix, iy));
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::EmptyNodeSet(h));
        }
        let blocked = |a: (usize, usize), b: (usize, usize)| -> bool {
            if mask.segments().is_empty() {
                return false;
            }
            let pa = mask.cell_center(a.0, a.1);
            let pb = mask.cell_center(b.0, b.1);
            let step = Segment::new(pa, pb);
            mask.segments().iter().any(|seg| seg.intersects(&step))
        };
        let mut neighbors = Vec::with_capacity(cells.len());
        for &(ix, iy) in &cells {
            let mut nb = [usize::MAX; 4];
            let cand = [
                (ix.wrapping_sub(1), iy),
                (ix + 1, iy),
                (ix, iy.wrapping_sub(1)),
                (ix, iy + 1),
            ];
            for (k, &(jx, jy)) in cand.iter().enumerate() {
                if jx < nx && jy < ny && mask.occupied(jx, jy) && !blocked((ix, iy), (jx, jy)) {
                    nb[k] = index[jy * nx + jx];
                }
            }
            neighbors.push(nb);
        }
        Ok(LocalSystem { h, cells, neighbors })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }
}

impl SymmetricPencil for LocalSystem {
    fn dim(&self) -> usize {
        self.cells.len()
    }

    fn apply_a(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        let inv_h2 = 1.0 / (self.h * self.h);
        let mut out = vec![0.0; v.len()];
        for (i, nb) in self.neighbors.iter().enumerate() {
            let mut acc = 4.0 * v[i];
            for &j in nb {
                if j != usize::MAX {
                    acc -= v[j];
                }
            }
            out[i] = acc * inv_h2;
        }
        Ok(out)
    }

    fn apply_b(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(v.to_vec())
    }
}

/// Local Dirichlet eigenvalue `λ̂₁(Ω)` by finite differences.
pub fn lambda1_local(mask: &DomainMask) -> Result<EigenEstimate> {
    let sys = LocalSystem::build(mask)?;
    let (lambda, vector, residual) = smallest_eigenpair(&sys, 1e-9, 2000)?;
    Ok(EigenEstimate {
        lambda,
        eigenvector: vector,
        residual,
        h: mask.h(),
        s: None,
        node_count: sys.cell_count(),
    })
}

/// Bessel `J₀` by its power series (accurate for |x| ≲ 12).
fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..60 {
        term *= q / ((k * k) as f64);
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    acc
}

fn bessel_j1(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 0.5 * x;
    let mut acc = term;
    for k in 1..60 {
        term *= q / ((k * (k + 1)) as f64);
        acc += term;
    }
    acc
}

/// `λ₁(B₁) = j₀,₁²`: square of the first zero of `J₀`, by Newton iteration.
pub fn lambda1_disk_reference() -> f64 {
    let mut x: f64 = 2.4;
    for _ in 0..50 {
        let f = bessel_j0(x);
        let df = -bessel_j1(x);
        let step = f / df;
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x * x
}
