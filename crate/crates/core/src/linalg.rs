//! Dense complex linear algebra for very small matrices.
//!
//! Everything here is sized for two-qubit work: square problems never exceed
//! 4x4 (the Takagi solver internally uses an 8x8 real embedding), and
//! rectangular matrices only appear as mixing isometries. The eigensolver is
//! a cyclic complex Jacobi iteration, which is accurate and fast at this size.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest square dimension accepted by the public solvers.
pub const MAX_DIM: usize = 4;

/// Asymmetry accepted by [`herm_eig`] and [`takagi`] before rejecting input.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues in `[-CLAMP_TOL, 0)` are rounded up to zero by [`sqrt_psd`].
pub const CLAMP_TOL: f64 = 1e-10;

/// Eigenvalues below `-NEGATIVE_TOL` make [`sqrt_psd`] fail.
pub const NEGATIVE_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 60;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest |A_ij - conj(A_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest |A_ij - A_ji|.
    pub fn symmetric_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Largest |(A†A - I)_ij|: how far the columns are from orthonormal.
    pub fn isometry_deviation(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        let eye = Self::identity(self.cols);
        gram.sub(&eye).data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    fn check_small_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::BadShape {
                rows: self.rows,
                cols: self.cols,
                reason: "expected a square matrix",
            });
        }
        if self.rows == 0 || self.rows > MAX_DIM {
            return Err(Error::BadShape {
                rows: self.rows,
                cols: self.cols,
                reason: "dimension must be between 1 and 4",
            });
        }
        self.check_finite()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigendecomposition `H = Q diag(eigenvalues) Q†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEig {
    /// Descending; ties keep the order the solver produced them in.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `Q diag(f(λ)) Q†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * q[(j, k)].conj() * vals[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix of dimension 1 to 4.
///
/// The input is symmetrized before solving, so asymmetry up to
/// [`SYMMETRY_TOL`] is tolerated.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    h.check_small_square()?;
    let asymmetry = h.hermitian_deviation();
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NonHermitianInput { asymmetry });
    }
    Ok(jacobi_eigh(h.hermitian_part()))
}

/// Cyclic Jacobi on a Hermitian matrix of any (small) size.
///
/// Each rotation is `G = Φ R Φ†` where `Φ` removes the phase of the pivot and
/// `R` is the classical real Jacobi rotation.
pub(crate) fn jacobi_eigh(mut a: ComplexMatrix) -> HermitianEig {
    let n = a.rows;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off == 0.0 || off.sqrt() <= 1e-17 * scale {
            break;
        }

        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Late in the iteration, drop pivots that are below the
                // resolution of both diagonal entries.
                if sweep > 3 && app.abs() + 100.0 * g == app.abs() && aqq.abs() + 100.0 * g == aqq.abs()
                {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G_pp = G_qq = c, G_pq = s e^{iφ}, G_qp = -s e^{-iφ}
                let gpq = phase * s;
                let gqp = -phase.conj() * s;

                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * c;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * gqp.conj();
                    a[(q, k)] = apk * gpq.conj() + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep their original index order.
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn sqrt_psd(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(p)?;
    psd_sqrt_from_eig(&eig)
}

pub(crate) fn psd_sqrt_from_eig(eig: &HermitianEig) -> Result<ComplexMatrix> {
    if let Some(&lowest) = eig.eigenvalues.last() {
        if lowest < -NEGATIVE_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// Takagi (Autonne–Takagi) factorization `U τ Uᵀ = diag(singular_values)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TakagiFactorization {
    pub u: ComplexMatrix,
    /// Non-negative, descending.
    pub singular_values: Vec<f64>,
}

impl TakagiFactorization {
    pub fn dim(&self) -> usize {
        self.singular_values.len()
    }

    /// `U† D Ū`, which equals the factored matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.singular_values);
        self.u.adjoint().matmul(&d).matmul(&self.u.conj())
    }
}

/// Takagi factorization of a complex symmetric matrix of dimension 1 to 4.
///
/// Writing `τ = A + iB` with `A`, `B` real symmetric, a Takagi vector
/// `u = x + iy` with `τ ū = σ u` is exactly an eigenvector `(x; y)` of the
/// real symmetric matrix `[[A, B], [B, -A]]` with eigenvalue `σ`. Eigenvalues
/// of the embedding come in `±σ` pairs, and eigenvectors drawn from the
/// positive half map to orthonormal complex vectors even inside degenerate
/// eigenspaces, so no separate treatment of repeated singular values is
/// needed. Singular values at roundoff level are completed with an
/// orthonormal basis of the remaining space, which is the null space of `τ̄`.
pub fn takagi(tau: &ComplexMatrix) -> Result<TakagiFactorization> {
    tau.check_small_square()?;
    let asymmetry = tau.symmetric_deviation();
    if asymmetry > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let n = tau.rows;
    let sym = ComplexMatrix::from_fn(n, n, |i, j| (tau[(i, j)] + tau[(j, i)]) * 0.5);
    let scale = sym.frobenius_norm();

    let mut embed = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = sym[(i, j)];
            embed[(i, j)] = Complex64::new(z.re, 0.0);
            embed[(i + n, j + n)] = Complex64::new(-z.re, 0.0);
            embed[(i, j + n)] = Complex64::new(z.im, 0.0);
            embed[(i + n, j)] = Complex64::new(z.im, 0.0);
        }
    }
    let eig = jacobi_eigh(embed);

    let zero_tol = 64.0 * f64::EPSILON * scale;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        if eig.eigenvalues[k] <= zero_tol {
            break;
        }
        let u: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(eig.eigenvectors[(i, k)].re, eig.eigenvectors[(i + n, k)].re))
            .collect();
        if let Some(u) = orthonormalize_against(&basis, u) {
            basis.push(u);
        }
    }
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut u = vec![Complex64::new(0.0, 0.0); n];
        u[e] = Complex64::new(1.0, 0.0);
        if let Some(u) = orthonormalize_against(&basis, u) {
            basis.push(u);
        }
    }
    debug_assert_eq!(basis.len(), n);

    // Rows of U are the conjugated Takagi vectors.
    let mut u = ComplexMatrix::from_fn(n, n, |i, j| basis[i][j].conj());
    let d = u.matmul(&sym).matmul(&u.transpose());
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let dk = d[(k, k)];
        let mag = dk.norm();
        if mag > 0.0 {
            let rot = Complex64::from_polar(1.0, -0.5 * dk.arg());
            for j in 0..n {
                u[(k, j)] *= rot;
            }
        }
        values.push(mag);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let u = ComplexMatrix::from_fn(n, n, |i, j| u[(order[i], j)]);
    let singular_values = order.iter().map(|&k| values[k]).collect();
    Ok(TakagiFactorization { u, singular_values })
}

/// One pass of modified Gram–Schmidt, run twice for stability. Returns `None`
/// when `v` is (numerically) in the span of `basis`.
fn orthonormalize_against(basis: &[Vec<Complex64>], mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let initial = norm(&v);
    if initial == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let proj: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
    }
    let remaining = norm(&v);
    if remaining <= 1e-6 * initial {
        return None;
    }
    for vi in &mut v {
        *vi /= remaining;
    }
    Some(v)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
