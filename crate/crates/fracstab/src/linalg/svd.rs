//! Singular values of dense complex matrices via one-sided Jacobi
//! orthogonalization. Only the values are produced (no singular vectors),
//! which is all the callers need: smallest-singular-value certificates and
//! rank/conditioning probes.

use super::{C64, CMat};

/// All singular values of `a`, sorted in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Vec::new();
    }
    // one-sided Jacobi wants at least as many rows as columns
    let work = if m >= n { a.clone() } else { a.adjoint() };
    let (m, n) = (work.rows(), work.cols());
    // column-major copy for cache-friendly column ops
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)]).collect())
        .collect();

    let eps = f64::EPSILON;
    let max_sweeps = 40;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0f64;
                let mut beta = 0.0f64;
                let mut gamma = C64::new(0.0, 0.0);
                for (&ap, &aq) in cols[p].iter().zip(cols[q].iter()) {
                    alpha += ap.norm_sqr();
                    beta += aq.norm_sqr();
                    gamma += ap.conj() * aq;
                }
                let gnorm = gamma.norm();
                if gnorm <= eps * alpha.sqrt() * beta.sqrt() || gnorm == 0.0 {
                    continue;
                }
                rotated = true;
                // phase that makes the inner product real-positive
                let phase = gamma / gnorm;
                let tau = (beta - alpha) / (2.0 * gnorm);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (head, tail) = cols.split_at_mut(q);
                for (cp, cq) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let ap = *cp;
                    let aq_phased = *cq * phase.conj();
                    *cp = ap * c - aq_phased * s;
                    *cq = ap * s + aq_phased * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value of `a` (0 for an empty matrix).
pub fn sigma_min(a: &CMat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Largest singular value (spectral norm) of `a`.
pub fn sigma_max(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_singular_values() {
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = C64::new(-3.0, 0.0);
        a[(1, 1)] = C64::new(0.0, 2.0);
        a[(2, 2)] = C64::new(0.5, 0.0);
        let sv = singular_values(&a);
        assert!((sv[0] - 3.0).abs() < 1e-14);
        assert!((sv[1] - 2.0).abs() < 1e-14);
        assert!((sv[2] - 0.5).abs() < 1e-14);
        assert!((sigma_min(&a) - 0.5).abs() < 1e-14);
        assert!((sigma_max(&a) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_matrix_has_zero_sigma_min() {
        // second row is a multiple of the first
        let a = CMat::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(sigma_min(&a) < 1e-14);
        // nonzero singular value is the Frobenius norm here
        assert!((sigma_max(&a) - 25.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unitary_matrix_has_unit_singular_values() {
        let r = 0.3f64;
        let a = CMat::from_rows(&[
            vec![C64::new(r.cos(), 0.0), C64::new(0.0, r.sin())],
            vec![C64::new(0.0, r.sin()), C64::new(r.cos(), 0.0)],
        ]);
        for s in singular_values(&a) {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rectangular_and_adjoint_agree() {
        let a = CMat::from_real_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, -1.0, 1.0]]);
        let s1 = singular_values(&a);
        let s2 = singular_values(&a.adjoint());
        assert_eq!(s1.len(), 2);
        assert_eq!(s2.len(), 2);
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() < 1e-13);
        }
        // cross-check via the Gram matrix eigenvalue identity:
        // sum of squares equals the squared Frobenius norm
        let frob2: f64 = s1.iter().map(|s| s * s).sum();
        assert!((frob2 - a.frobenius_norm().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn complex_matrix_determinant_product_identity() {
        // |det A| equals the product of singular values for square A
        let a = CMat::from_rows(&[
            vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.3)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.25)],
        ]);
        let det = crate::linalg::lu::Lu::factor(&a).unwrap().det();
        let prod: f64 = singular_values(&a).iter().product();
        assert!((det.norm() - prod).abs() < 1e-12 * (1.0 + prod));
    }
}
