//! Dense eigenvalue paths for the companion pencil.
//!
//! The reversed operator `W = Y^{-1} X` has `sigma*d - N` eigenvalues at 0
//! (the pencil's infinite eigenvalues) carried by Jordan chains that round
//! into spurious nonzeros under a plain dense eigensolve. For nonsingular `A`
//! we avoid them structurally: the coordinates below each component's
//! exponent height span an exactly invariant subspace on which `W` is a pure
//! shift, and compressing `W` onto the complementary N coordinates gives a
//! small matrix `W_cc` whose spectrum is exactly the nonzero part, i.e.
//! `theta = 1/mu` for the finite eigenvalues `mu`.
//!
//! For singular `A` (`Y` singular, shift required) the full-size shifted
//! operator is formed densely and the infinite group is separated by
//! magnitude with an explicit gap check.

use crate::linalg::lu::Lu;
use crate::linalg::{C64, CMat, qr_eig};
use crate::pencil::Pencil;
use crate::{Error, Result};

use super::companion::ShiftedCompanionSolver;

/// Builds the N-by-N compression of `W = Y^{-1} X` onto the non-nilpotent
/// coordinates. Requires `A` nonsingular.
///
/// Coordinates are grouped per component `l` as chains of length `q_l`
/// (offset `off[l]`). Within a chain the operator shifts; a chain head feeds
/// back through `A^{-1}` into every chain tail.
pub fn deflated_core(pencil: &Pencil) -> Result<CMat> {
    let d = pencil.d;
    let n: usize = pencil.q.iter().sum();
    debug_assert_eq!(n, pencil.n_finite);
    let ainv = Lu::factor(&pencil.a)
        .map_err(|e| Error::Eigensolver(format!("system matrix is singular: {e}")))?
        .inverse();
    let mut off = vec![0usize; d + 1];
    for l in 0..d {
        off[l + 1] = off[l] + pencil.q[l];
    }
    let mut wcc = CMat::zeros(n, n);
    for l in 0..d {
        for m in 0..pencil.q[l] {
            let col = off[l] + m;
            if m > 0 {
                wcc[(off[l] + m - 1, col)] = C64::new(1.0, 0.0);
            } else {
                for k in 0..d {
                    wcc[(off[k] + pencil.q[k] - 1, col)] = ainv[(k, l)];
                }
            }
        }
    }
    Ok(wcc)
}

/// Finite eigenvalues via the deflated core: `mu = 1/theta` over the whole
/// spectrum of the core. Requires `A` nonsingular.
pub fn finite_eigenvalues_core(pencil: &Pencil) -> Result<Vec<C64>> {
    let wcc = deflated_core(pencil)?;
    let theta = qr_eig::eigenvalues(&wcc)?;
    let mut mu = Vec::with_capacity(theta.len());
    for t in theta {
        if t.norm() == 0.0 {
            return Err(Error::Eigensolver(
                "deflated core produced a zero eigenvalue; the system matrix is numerically \
                 singular and must take the shifted path"
                    .into(),
            ));
        }
        mu.push(t.finv());
    }
    Ok(mu)
}

/// Dense full-size path: eigenvalues `eta` of `(Y - tau*X)^{-1} X`, with
/// `mu = tau + 1/eta` for the `N` dominant `eta` and the rest declared
/// infinite. Works for singular `A`; `tau` must make `p(tau)` invertible.
pub fn finite_eigenvalues_shifted_full(
    pencil: &Pencil,
    tau: C64,
) -> Result<(Vec<C64>, usize)> {
    let n = pencil.size();
    let solver = ShiftedCompanionSolver::new(pencil, tau)?;
    // assemble the operator column by column: column j = eta-op applied to e_j
    let mut op = CMat::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        let xe = pencil.x.matvec(&e);
        let col = solver.solve(&xe);
        for i in 0..n {
            op[(i, j)] = col[i];
        }
        e[j] = C64::new(0.0, 0.0);
    }
    let mut eta = qr_eig::eigenvalues(&op)?;
    eta.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let n_inf = n - pencil.n_finite;
    if n_inf > 0 && pencil.n_finite > 0 {
        let small = eta[n_inf - 1].norm();
        let large = eta[n_inf].norm();
        // negated form deliberately catches NaN magnitudes as well
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(large > 10.0 * small) {
            return Err(Error::Eigensolver(format!(
                "cannot separate the {} infinite eigenvalues from the {} finite ones: \
                 magnitude gap {:.3e} / {:.3e} is below the safety factor 10",
                n_inf, pencil.n_finite, large, small
            )));
        }
    }
    let mu = eta[n_inf..]
        .iter()
        .map(|&h| tau + h.finv())
        .collect();
    Ok((mu, n_inf))
}
