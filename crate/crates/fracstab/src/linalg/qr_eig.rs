//! Complex Schur decomposition via Hessenberg reduction and an implicit
//! single-shift QR iteration with Wilkinson shifts, plus reordering of the
//! Schur form by eigenvalue selection.

use super::{C64, CMat, hessenberg};
use crate::{Error, Result};

/// Schur decomposition `A = Q · T · Q^H` with `T` upper triangular.
pub struct Schur {
    pub t: CMat,
    /// Unitary factor; `None` unless requested.
    pub q: Option<CMat>,
    /// Total QR iterations spent.
    pub iterations: usize,
}

impl Schur {
    /// Diagonal of `T`: the eigenvalues, in Schur order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Givens rotation `[c, s; -conj(s), c]` (c real) with
/// `[c, s; -conj(s), c]·[a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let den = an.hypot(bn);
    (an / den, (a / an) * b.conj() / C64::new(den, 0.0))
}

/// Applies the rotation to rows `(k, k+1)` over columns `j0..j1`.
fn rotate_rows(m: &mut CMat, k: usize, c: f64, s: C64, j0: usize, j1: usize) {
    for j in j0..j1 {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = C64::new(c, 0.0) * x + s * y;
        m[(k + 1, j)] = -s.conj() * x + C64::new(c, 0.0) * y;
    }
}

/// Applies the conjugate-transposed rotation to columns `(k, k+1)` over rows
/// `i0..i1`.
fn rotate_cols(m: &mut CMat, k: usize, c: f64, s: C64, i0: usize, i1: usize) {
    for i in i0..i1 {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = C64::new(c, 0.0) * x + s.conj() * y;
        m[(i, k + 1)] = -s * x + C64::new(c, 0.0) * y;
    }
}

/// Computes the complex Schur form of `a`. Set `want_q` to accumulate the
/// unitary factor (needed for reordering / invariant subspaces).
pub fn schur(a: &CMat, want_q: bool) -> Result<Schur> {
    assert!(a.is_square(), "Schur form requires a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(Schur { t: CMat::zeros(0, 0), q: want_q.then(|| CMat::identity(0)), iterations: 0 });
    }
    let red = hessenberg::reduce(a, want_q);
    let mut h = red.h;
    let mut q = red.q;
    let norm_h = h.frobenius_norm();
    let eps = f64::EPSILON;

    let budget = 30 * n.max(1);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut iters_on_hi = 0usize;

    while hi > 0 {
        // deflation scan: zero negligible subdiagonal entries
        for k in (1..=hi).rev() {
            let mut tst = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            if tst == 0.0 {
                // the active region can be exactly nilpotent (graded zero
                // diagonal); fall back to the matrix scale so deflation
                // still triggers
                tst = norm_h;
            }
            if h[(k, k - 1)].norm() <= eps * tst {
                h[(k, k - 1)] = C64::new(0.0, 0.0);
            }
        }
        if h[(hi, hi - 1)] == C64::new(0.0, 0.0) {
            hi -= 1;
            iters_on_hi = 0;
            continue;
        }
        // unreduced window [lo, hi]
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)] != C64::new(0.0, 0.0) {
            lo -= 1;
        }

        total += 1;
        iters_on_hi += 1;
        if total > budget {
            return Err(Error::LinAlg(format!(
                "QR eigensolver failed to converge within {budget} iterations (n = {n})"
            )));
        }

        // shift selection
        let shift = if iters_on_hi.is_multiple_of(10) {
            // exceptional shift to break stagnation cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            // Wilkinson: eigenvalue of the trailing 2x2 closer to h[hi,hi]
            let a11 = h[(hi - 1, hi - 1)];
            let a12 = h[(hi - 1, hi)];
            let a21 = h[(hi, hi - 1)];
            let a22 = h[(hi, hi)];
            let tr = a11 + a22;
            let det = a11 * a22 - a12 * a21;
            let disc = (tr * tr - C64::new(4.0, 0.0) * det).sqrt();
            let l1 = (tr + disc) * C64::new(0.5, 0.0);
            let l2 = (tr - disc) * C64::new(0.5, 0.0);
            if (l1 - a22).norm() < (l2 - a22).norm() { l1 } else { l2 }
        };

        // implicit single-shift sweep over [lo, hi]
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let jstart = if k > lo { k - 1 } else { k };
            rotate_rows(&mut h, k, c, s, jstart, n);
            let iend = (k + 3).min(hi + 1);
            rotate_cols(&mut h, k, c, s, 0, iend);
            if let Some(qm) = q.as_mut() {
                rotate_cols(qm, k, c, s, 0, n);
            }
            if k > lo {
                // the bulge below the subdiagonal is annihilated by
                // construction; pin it to an exact zero
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }

    // T is upper triangular now; entries below the subdiagonal were kept at
    // exact zeros and every subdiagonal entry was zeroed by deflation
    Ok(Schur { t: h, q, iterations: total })
}

/// Eigenvalues of a general dense complex matrix.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    Ok(schur(a, false)?.eigenvalues())
}

/// Swaps the adjacent diagonal entries `t[k,k]` and `t[k+1,k+1]` of an upper
/// triangular `t` by a unitary similarity, updating `q` alongside.
fn swap_adjacent(t: &mut CMat, q: &mut Option<&mut CMat>, k: usize) {
    let n = t.rows();
    let t11 = t[(k, k)];
    let t12 = t[(k, k + 1)];
    let t22 = t[(k + 1, k + 1)];
    // eigenvector of [[t11, t12], [0, t22]] for t22 is [t12, t22 - t11]
    let (c, s) = givens(t12, t22 - t11);
    if c == 1.0 && s == C64::new(0.0, 0.0) && t12 == C64::new(0.0, 0.0) {
        // t11 == t22 and decoupled: swapping is a no-op
        return;
    }
    rotate_rows(t, k, c, s, k, n);
    rotate_cols(t, k, c, s, 0, k + 2);
    t[(k + 1, k)] = C64::new(0.0, 0.0);
    if let Some(qm) = q.as_mut() {
        rotate_cols(qm, k, c, s, 0, qm.rows());
    }
}

/// Reorders the Schur form in place so that the diagonal of `t` is sorted by
/// `key` in descending order, updating `q` alongside (pass `None` if the
/// unitary factor is not tracked). Selection-sort with adjacent swaps keeps
/// the triangular structure exact.
pub fn sort_schur_by_key_desc<F: Fn(C64) -> f64>(t: &mut CMat, mut q: Option<&mut CMat>, key: F) {
    let n = t.rows();
    for i in 0..n {
        let mut best = i;
        let mut best_key = key(t[(i, i)]);
        for j in i + 1..n {
            let kj = key(t[(j, j)]);
            if kj > best_key {
                best_key = kj;
                best = j;
            }
        }
        for k in (i..best).rev() {
            swap_adjacent(t, &mut q, k);
        }
    }
}
