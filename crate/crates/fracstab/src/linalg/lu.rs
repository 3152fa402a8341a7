//! LU factorization with partial pivoting for dense complex matrices,
//! including adjoint solves and a scaled determinant.

use super::{C64, CMat};
use crate::{Error, Result};

/// LU factorization `P·A = L·U` with partial (row) pivoting.
///
/// `ipiv[k]` records the row swapped with row `k` at elimination step `k`
/// (LAPACK convention). An optional pivot floor replaces tiny pivots with a
/// value of magnitude `pivot_floor` and matching phase — used when factoring
/// matrices that are intentionally (near-)singular, e.g. `p(μ)` at a computed
/// eigenvalue μ for inverse-iteration singular-value estimates.
pub struct Lu {
    lu: CMat,
    ipiv: Vec<usize>,
    swaps: usize,
    replaced_pivots: usize,
}

impl Lu {
    /// Factors `a`; fails on an exactly singular pivot column.
    pub fn factor(a: &CMat) -> Result<Lu> {
        Self::factor_impl(a, 0.0).and_then(|lu| {
            if lu.replaced_pivots > 0 {
                Err(Error::LinAlg("singular matrix in LU factorization".into()))
            } else {
                Ok(lu)
            }
        })
    }

    /// Factors `a`, replacing any pivot of modulus below `pivot_floor` by a
    /// same-phase value of modulus `pivot_floor`. Never fails for
    /// `pivot_floor > 0`; the number of replacements is recorded.
    pub fn factor_regularized(a: &CMat, pivot_floor: f64) -> Result<Lu> {
        assert!(pivot_floor > 0.0, "pivot floor must be positive");
        Self::factor_impl(a, pivot_floor)
    }

    fn factor_impl(a: &CMat, pivot_floor: f64) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::LinAlg("LU requires a square matrix".into()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut ipiv = vec![0usize; n];
        let mut swaps = 0usize;
        let mut replaced = 0usize;

        for k in 0..n {
            // pivot search in column k
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for r in k + 1..n {
                let v = lu[(r, k)].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            ipiv[k] = p;
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                swaps += 1;
            }
            let mut piv = lu[(k, k)];
            if piv.norm() <= pivot_floor {
                if pivot_floor == 0.0 && piv.norm() == 0.0 {
                    // exact breakdown; caller decides (factor() turns this
                    // into an error via replaced_pivots)
                    replaced += 1;
                    continue;
                }
                let phase = if piv.norm() == 0.0 { C64::new(1.0, 0.0) } else { piv / piv.norm() };
                piv = phase * C64::new(pivot_floor, 0.0);
                lu[(k, k)] = piv;
                replaced += 1;
            }
            for r in k + 1..n {
                let m = lu[(r, k)] / piv;
                lu[(r, k)] = m;
                if m != C64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(r, j)] -= m * u;
                    }
                }
            }
        }

        Ok(Lu { lu, ipiv, swaps, replaced_pivots: replaced })
    }

    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    /// Number of pivots that hit the floor during factorization.
    pub fn replaced_pivots(&self) -> usize {
        self.replaced_pivots
    }

    /// Determinant as `mantissa · 2^exp2` to avoid over/underflow; the
    /// mantissa modulus is kept within `[2^-512, 2^512]`.
    pub fn det_scaled(&self) -> (C64, i64) {
        let n = self.order();
        let sign = if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut man = C64::new(sign, 0.0);
        let mut exp2: i64 = 0;
        for k in 0..n {
            man *= self.lu[(k, k)];
            let m = man.norm();
            if m == 0.0 {
                return (C64::new(0.0, 0.0), 0);
            }
            let e = m.log2().round() as i64;
            if e.abs() > 512 {
                man *= 2f64.powi(-e as i32);
                exp2 += e;
            }
        }
        (man, exp2)
    }

    /// Determinant as a plain complex number (may over/underflow for large
    /// matrices; prefer [`Lu::det_scaled`] there).
    pub fn det(&self) -> C64 {
        let (man, exp2) = self.det_scaled();
        man * C64::new(2f64.powi(exp2 as i32), 0.0)
    }

    /// log2 of the determinant modulus, `-inf` for a zero determinant.
    pub fn det_log2_abs(&self) -> f64 {
        let (man, exp2) = self.det_scaled();
        if man.norm() == 0.0 {
            f64::NEG_INFINITY
        } else {
            man.norm().log2() + exp2 as f64
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // apply P
        for k in 0..n {
            let p = self.ipiv[k];
            if p != k {
                x.swap(k, p);
            }
        }
        // forward: L (unit lower)
        for i in 0..n {
            let mut acc = x[i];
            for (j, &xj) in x[..i].iter().enumerate() {
                acc -= self.lu[(i, j)] * xj;
            }
            x[i] = acc;
        }
        // backward: U
        for i in (0..n).rev() {
            let mut acc = x[i];
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                acc -= self.lu[(i, j)] * xj;
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^H x = b` using the same factorization:
    /// `A = P^{-1} L U ⇒ A^H = U^H L^H P`, so solve `U^H y = b` (lower
    /// triangular), `L^H z = y` (unit upper triangular), `x = P^{-1} z`.
    pub fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // forward: U^H is lower triangular with diagonal conj(u_kk)
        for i in 0..n {
            let mut acc = x[i];
            for (j, &xj) in x[..i].iter().enumerate() {
                acc -= self.lu[(j, i)].conj() * xj;
            }
            x[i] = acc / self.lu[(i, i)].conj();
        }
        // backward: L^H is unit upper triangular
        for i in (0..n).rev() {
            let mut acc = x[i];
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                acc -= self.lu[(j, i)].conj() * xj;
            }
            x[i] = acc;
        }
        // x = P^{-1} z: undo swaps in reverse order
        for k in (0..n).rev() {
            let p = self.ipiv[k];
            if p != k {
                x.swap(k, p);
            }
        }
        x
    }

    /// Solves `A^T x = b` via conjugation: `A^T x = b ⇔ A^H x̄ = b̄`.
    pub fn solve_transpose(&self, b: &[C64]) -> Vec<C64> {
        let conj_b: Vec<C64> = b.iter().map(|z| z.conj()).collect();
        self.solve_adjoint(&conj_b).into_iter().map(|z| z.conj()).collect()
    }

    /// Dense inverse (column-by-column solve).
    pub fn inverse(&self) -> CMat {
        let n = self.order();
        let mut out = CMat::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e);
            e[j] = C64::new(0.0, 0.0);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }
}
