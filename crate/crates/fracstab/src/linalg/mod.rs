//! Dense complex linear algebra kernels: matrices, LU, Hessenberg reduction,
//! the shifted-QR eigensolver, a one-sided Jacobi SVD, and a compressed
//! sparse-row container for the companion pencil.
//!
//! Everything is hand-rolled on top of `num_complex::Complex64`: the solver
//! pipeline needs one nonsymmetric dense eigensolver, triangular solves with
//! adjoints, and singular values of small matrices — a surface small enough
//! that carrying a full linear-algebra dependency is not worth the impedance
//! mismatch with the pencil's structured solves.

pub mod csr;
pub mod hessenberg;
pub mod lu;
pub mod qr_eig;
pub mod svd;

use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Principal argument in `(−π, π]`.
///
/// `f64::atan2` maps a negative-zero imaginary part on the negative real axis
/// to `−π`; this helper normalizes such inputs so that the branch convention
/// `arg ∈ (−π, π]` holds exactly.
pub fn principal_arg(z: C64) -> f64 {
    if z.im == 0.0 {
        // covers +0.0 and -0.0
        if z.re < 0.0 {
            std::f64::consts::PI
        } else {
            0.0
        }
    } else {
        z.im.atan2(z.re)
    }
}

/// Principal-branch power `z^β = |z|^β·exp(iβ·arg z)` with `arg z ∈ (−π, π]`,
/// extended by `0^β = 0` for `β > 0` and `0^0 = 1`.
pub fn principal_pow(z: C64, beta: f64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        return if beta == 0.0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    C64::from_polar(r.powf(beta), beta * principal_arg(z))
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from complex rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        CMat { rows: r, cols: c, data }
    }

    /// Builds a matrix from real rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMat::from_rows(&complex)
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

    /// Borrow of row `i` as a slice.
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Raw data in row-major order.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// True if every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matvec");
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise difference `self − other`.
    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Entrywise sum `self + other`.
    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-sum (infinity) norm.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// 2-norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Conjugated dot product `⟨a, b⟩ = Σ conj(a_i)·b_i`.
pub fn vec_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn principal_arg_branch_convention() {
        assert_eq!(principal_arg(C64::new(-1.0, 0.0)), PI);
        assert_eq!(principal_arg(C64::new(-1.0, -0.0)), PI); // -0 normalized
        assert_eq!(principal_arg(C64::new(1.0, 0.0)), 0.0);
        assert!((principal_arg(C64::new(0.0, 1.0)) - PI / 2.0).abs() < 1e-15);
        assert!((principal_arg(C64::new(0.0, -1.0)) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn principal_pow_square_root_of_minus_one() {
        // (-1)^{1/2} = i on the principal branch
        let z = principal_pow(C64::new(-1.0, 0.0), 0.5);
        assert!((z - C64::new(0.0, 1.0)).norm() < 1e-15);
        // 0^beta = 0 for beta > 0, 0^0 = 1
        assert_eq!(principal_pow(C64::new(0.0, 0.0), 0.3), C64::new(0.0, 0.0));
        assert_eq!(principal_pow(C64::new(0.0, 0.0), 0.0), C64::new(1.0, 0.0));
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = CMat::from_rows(&[
            vec![C64::new(1.0, 1.0), C64::new(2.0, 0.0)],
            vec![C64::new(0.0, -1.0), C64::new(3.0, 2.0)],
        ]);
        let id = CMat::identity(2);
        assert_eq!(a.mul(&id), a);
        let ah = a.adjoint();
        assert_eq!(ah[(0, 1)], C64::new(0.0, 1.0));
        assert_eq!(ah[(1, 0)], C64::new(2.0, 0.0));
        // (A^H)^H = A
        assert_eq!(ah.adjoint(), a);
    }

    #[test]
    fn norms() {
        let a = CMat::from_real_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]);
        assert!((a.frobenius_norm() - 5.0).abs() < 1e-15);
        assert!((a.inf_norm() - 4.0).abs() < 1e-15);
        assert!((a.max_abs() - 4.0).abs() < 1e-15);
    }
}
