//! Structured solves with the shifted companion matrix `M = Y - tau*X`.
//!
//! The block-companion layout makes `M` block bidiagonal apart from its first
//! block row, so a solve costs O(sigma*d) plus one dense d-by-d factorization
//! of `p(tau) = diag(tau^{q_k}) - A`, instead of O((sigma*d)^3) for a generic
//! sparse factorization. With `tau = 0` this solves with `Y` itself.

use crate::linalg::lu::Lu;
use crate::linalg::{C64, CMat};
use crate::pencil::Pencil;
use crate::{Error, Result};

pub struct ShiftedCompanionSolver {
    tau: C64,
    d: usize,
    sigma: usize,
    q: Vec<usize>,
    /// LU factorization of `p(tau) = diag(tau^{q_k}) - A`.
    lu: Lu,
}

fn p_at(pencil: &Pencil, tau: C64) -> CMat {
    let d = pencil.d;
    let mut p = pencil.a.scale(C64::new(-1.0, 0.0));
    for k in 0..d {
        p[(k, k)] += tau.powu(pencil.q[k] as u32);
    }
    p
}

impl ShiftedCompanionSolver {
    /// Factors `p(tau)`; fails if the shifted block is exactly singular.
    pub fn new(pencil: &Pencil, tau: C64) -> Result<Self> {
        let lu = Lu::factor(&p_at(pencil, tau)).map_err(|e| {
            Error::Eigensolver(format!(
                "factorization of the shifted companion block failed at tau = {tau}: {e}"
            ))
        })?;
        Ok(Self { tau, d: pencil.d, sigma: pencil.sigma, q: pencil.q.clone(), lu })
    }

    /// Like `new`, but replaces vanishing pivots by `pivot_floor` so the
    /// factorization always succeeds (used by the residual certificate, which
    /// deliberately shifts onto eigenvalues).
    pub fn new_regularized(pencil: &Pencil, tau: C64, pivot_floor: f64) -> Self {
        let lu = Lu::factor_regularized(&p_at(pencil, tau), pivot_floor)
            .expect("shifted block is square by construction");
        Self { tau, d: pencil.d, sigma: pencil.sigma, q: pencil.q.clone(), lu }
    }

    pub fn dim(&self) -> usize {
        self.sigma * self.d
    }

    /// Solves `(Y - tau*X) w = b`.
    ///
    /// Lower block rows give `w[i-1] = b[i] + tau*w[i]`; eliminating them
    /// reduces the first block row to a d-by-d solve with `p(tau)`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let (d, sigma, tau) = (self.d, self.sigma, self.tau);
        assert_eq!(b.len(), sigma * d);
        // particular part: u[sigma-1] = 0, u[i-1] = b[i] + tau*u[i]
        let mut u = vec![C64::new(0.0, 0.0); sigma * d];
        for i in (1..sigma).rev() {
            for k in 0..d {
                u[(i - 1) * d + k] = b[i * d + k] + tau * u[i * d + k];
            }
        }
        // first block row, with w expressed through the last block:
        // p(tau) * w_last = -(b[0] + coupling(u))
        let mut rhs = vec![C64::new(0.0, 0.0); d];
        for k in 0..d {
            let coupling = if self.q[k] == sigma {
                tau * u[k]
            } else {
                u[(sigma - 1 - self.q[k]) * d + k]
            };
            rhs[k] = -(b[k] + coupling);
        }
        let w_last = self.lu.solve(&rhs);
        let mut w = vec![C64::new(0.0, 0.0); sigma * d];
        w[(sigma - 1) * d..].copy_from_slice(&w_last);
        for i in (1..sigma).rev() {
            for k in 0..d {
                w[(i - 1) * d + k] = b[i * d + k] + tau * w[i * d + k];
            }
        }
        w
    }

    /// Solves `(Y - tau*X)^H v = c` (adjoint system), via the conjugated
    /// transposed recurrences.
    pub fn solve_adjoint(&self, c: &[C64]) -> Vec<C64> {
        let (d, sigma, tau) = (self.d, self.sigma, self.tau);
        assert_eq!(c.len(), sigma * d);
        let cb: Vec<C64> = c.iter().map(|z| z.conj()).collect();
        // accumulate the inhomogeneous part of z[i] (blocks 1..sigma-1):
        // g[1] = cb[0]; g[i+1] = cb[i] + tau*g[i]
        let mut g = vec![C64::new(0.0, 0.0); sigma * d];
        g[d..2 * d].copy_from_slice(&cb[..d]);
        for i in 1..sigma - 1 {
            for k in 0..d {
                g[(i + 1) * d + k] = cb[i * d + k] + tau * g[i * d + k];
            }
        }
        // closing row: p(tau)^T z0 = -(cb[sigma-1] + tau*g[sigma-1])
        let mut rhs = vec![C64::new(0.0, 0.0); d];
        for k in 0..d {
            rhs[k] = -(cb[(sigma - 1) * d + k] + tau * g[(sigma - 1) * d + k]);
        }
        let z0 = self.lu.solve_transpose(&rhs);
        let mut z = vec![C64::new(0.0, 0.0); sigma * d];
        z[..d].copy_from_slice(&z0);
        // z[1] = cb[0] + (B_{sigma-1} + tau*B_sigma) z0
        for k in 0..d {
            let mut v = cb[k];
            if self.q[k] == sigma - 1 {
                v += z0[k];
            }
            if self.q[k] == sigma {
                v += tau * z0[k];
            }
            z[d + k] = v;
        }
        // z[i+1] = cb[i] + tau*z[i] + B_{sigma-1-i} z0
        for i in 1..sigma - 1 {
            for k in 0..d {
                let mut v = cb[i * d + k] + tau * z[i * d + k];
                if self.q[k] == sigma - 1 - i {
                    v += z0[k];
                }
                z[(i + 1) * d + k] = v;
            }
        }
        z.iter().map(|v| v.conj()).collect()
    }
}
