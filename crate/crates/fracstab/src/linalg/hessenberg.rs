//! Householder reduction of a dense complex matrix to upper Hessenberg form.

use super::{C64, CMat};

/// Reduction `H = Q^H · A · Q` with `H` upper Hessenberg and `Q` unitary.
pub struct Hessenberg {
    pub h: CMat,
    /// Accumulated unitary transform; `None` unless requested.
    pub q: Option<CMat>,
}

/// Reduces `a` to upper Hessenberg form by Householder similarity
/// transformations, optionally accumulating the unitary factor.
pub fn reduce(a: &CMat, want_q: bool) -> Hessenberg {
    assert!(a.is_square(), "Hessenberg reduction requires a square matrix");
    let n = a.rows();
    let mut h = a.clone();
    let mut q = if want_q { Some(CMat::identity(n)) } else { None };

    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal
        let mut v = vec![C64::new(0.0, 0.0); n];
        let mut norm_x = 0.0f64;
        for i in k + 1..n {
            norm_x += h[(i, k)].norm_sqr();
        }
        norm_x = norm_x.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x1 = h[(k + 1, k)];
        let phase = if x1.norm() == 0.0 { C64::new(1.0, 0.0) } else { x1 / x1.norm() };
        let alpha = -phase * C64::new(norm_x, 0.0);
        let mut vnorm_sqr = 0.0f64;
        for i in k + 1..n {
            let vi = if i == k + 1 { h[(i, k)] - alpha } else { h[(i, k)] };
            v[i] = vi;
            vnorm_sqr += vi.norm_sqr();
        }
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // H ← P H with P = I − β v v^H (rows k+1.. of all columns)
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i].conj() * h[(i, j)];
            }
            dot *= beta;
            for i in k + 1..n {
                let vi = v[i];
                h[(i, j)] -= vi * dot;
            }
        }
        // H ← H P (columns k+1.. of all rows)
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += h[(i, j)] * v[j];
            }
            dot *= beta;
            for j in k + 1..n {
                h[(i, j)] -= dot * v[j].conj();
            }
        }
        // Q ← Q P
        if let Some(qm) = q.as_mut() {
            for i in 0..n {
                let mut dot = C64::new(0.0, 0.0);
                for j in k + 1..n {
                    dot += qm[(i, j)] * v[j];
                }
                dot *= beta;
                for j in k + 1..n {
                    qm[(i, j)] -= dot * v[j].conj();
                }
            }
        }
        // clean the annihilated entries
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }

    Hessenberg { h, q }
}
