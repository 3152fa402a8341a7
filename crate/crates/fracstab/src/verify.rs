//! Independent cross-checks for the eigenvalue pipeline.
//!
//! `det(diag(mu^{q_k}) - A)` is a monic scalar polynomial of degree
//! `N = sum q_k` in `mu`. This module recovers its coefficients by
//! evaluating the determinant at roots of unity on a scaled circle and
//! inverting the DFT, then finds all polynomial roots with the
//! Aberth-Ehrlich iteration. Agreement between those roots and the pencil
//! eigenvalues certifies both computations against each other.

use crate::linalg::lu::Lu;
use crate::linalg::{C64, CMat, principal_pow};
use crate::orders::NormalizedOrders;
use crate::{Error, Result};

/// Evaluates the characteristic function
/// `chi(lambda) = det(diag(lambda^{alpha_k}) - A)` on the principal branch.
pub fn eval_chi(lambda: C64, alpha: &[f64], a: &CMat) -> C64 {
    assert_eq!(alpha.len(), a.rows(), "order/matrix dimension mismatch");
    let d = alpha.len();
    let mut m = a.scale(C64::new(-1.0, 0.0));
    for k in 0..d {
        m[(k, k)] += principal_pow(lambda, alpha[k]);
    }
    det_or_zero(&m)
}

/// Evaluates `p(mu) = det(diag(mu^{q_k}) - A)`, the single-variable
/// polynomial whose roots are the finite pencil eigenvalues.
pub fn eval_p_det(mu: C64, orders: &NormalizedOrders, a: &CMat) -> C64 {
    assert_eq!(orders.dim(), a.rows(), "order/matrix dimension mismatch");
    let d = orders.dim();
    let mut m = a.scale(C64::new(-1.0, 0.0));
    for k in 0..d {
        m[(k, k)] += mu.powu(orders.q[k] as u32);
    }
    det_or_zero(&m)
}

/// Determinant via LU; an exactly singular matrix yields exactly zero.
fn det_or_zero(m: &CMat) -> C64 {
    match Lu::factor(m) {
        Ok(lu) => lu.det(),
        Err(_) => C64::new(0.0, 0.0),
    }
}

/// A dense polynomial `c[0] + c[1] mu + ... + c[n] mu^n` with `c[n] = 1`.
#[derive(Debug, Clone)]
pub struct ScalarPolynomial {
    /// Coefficients in ascending degree order; the last entry is exactly 1.
    pub coeffs: Vec<C64>,
    /// `|c_N - 1|` before the leading coefficient was normalized away; a
    /// large value signals an ill-conditioned interpolation radius.
    pub leading_deviation: f64,
    /// The circle radius the interpolation nodes were placed on.
    pub radius: f64,
}

impl ScalarPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation of the derivative.
    pub fn eval_derivative(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in (1..self.coeffs.len()).rev() {
            acc = acc * z + self.coeffs[k] * C64::new(k as f64, 0.0);
        }
        acc
    }
}

/// Default interpolation radius `max(1, ||A||_F)^{1/sigma}`: comparable to
/// the outermost eigenvalue magnitude, so the determinant values stay well
/// scaled across the node circle.
pub fn default_interpolation_radius(orders: &NormalizedOrders, a: &CMat) -> f64 {
    a.frobenius_norm().max(1.0).powf(1.0 / orders.sigma as f64)
}

/// Recovers the coefficients of `p(mu) = det(diag(mu^{q_k}) - A)` by inverse
/// DFT over `N + 1` nodes on the circle of the given radius (the scaled
/// default when `None`).
///
/// The polynomial is monic by construction; the recovered leading
/// coefficient is forced back to exactly 1 and the deviation recorded. A
/// deviation above `1e-6` fails: the node circle is then too far from the
/// eigenvalue scale, and a different radius should be used.
pub fn interpolate_det_p(
    orders: &NormalizedOrders,
    a: &CMat,
    radius: Option<f64>,
) -> Result<ScalarPolynomial> {
    let n = orders.n_finite;
    let rho = radius.unwrap_or_else(|| default_interpolation_radius(orders, a));
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::Verify(format!(
            "interpolation radius must be positive and finite, got {rho}"
        )));
    }
    let nodes = n + 1;
    let mut values = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        values.push(eval_p_det(C64::from_polar(rho, angle), orders, a));
    }
    // c_k = rho^{-k} / (N+1) * sum_j values[j] * omega^{-jk}
    let mut coeffs = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j * k % nodes) as f64 / nodes as f64;
            acc += v * C64::from_polar(1.0, angle);
        }
        coeffs.push(acc / C64::new(nodes as f64 * rho.powi(k as i32), 0.0));
    }
    let leading_deviation = (coeffs[n] - C64::new(1.0, 0.0)).norm();
    if leading_deviation > 1e-6 {
        return Err(Error::Verify(format!(
            "interpolated leading coefficient deviates from 1 by {leading_deviation:.3e} \
             at radius {rho:.6}; rerun with a different interpolation radius"
        )));
    }
    // normalize so downstream root finding sees an exactly monic polynomial
    let lead = coeffs[n];
    for c in coeffs.iter_mut() {
        *c /= lead;
    }
    coeffs[n] = C64::new(1.0, 0.0);
    Ok(ScalarPolynomial {
        coeffs,
        leading_deviation,
        radius: rho,
    })
}

/// All roots of a monic polynomial by the Aberth-Ehrlich simultaneous
/// iteration, started on a circle enclosing every root.
pub fn polynomial_roots(p: &ScalarPolynomial) -> Result<Vec<C64>> {
    let n = p.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    // Start circle: the smaller of the Cauchy bound (1 + max |c_k|) and the
    // Fujiwara bound (2 max_k |c_{n-k}|^{1/k}). The Fujiwara bound stays
    // close to the actual root radius even when a single low-order
    // coefficient is huge, which keeps the first polynomial evaluations far
    // away from floating-point overflow.
    let cauchy = 1.0
        + p.coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut fujiwara = 0.0f64;
    for k in 1..=n {
        let mag = p.coeffs[n - k].norm();
        if mag > 0.0 {
            let m = if k == n { mag / 2.0 } else { mag };
            fujiwara = fujiwara.max(m.powf(1.0 / k as f64));
        }
    }
    let bound = (2.0 * fujiwara).min(cauchy).max(1e-3);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            // offset by half a step so no start point sits on a symmetry axis
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
            C64::from_polar(bound, angle)
        })
        .collect();
    let max_sweeps = 1000;
    for _ in 0..max_sweeps {
        let mut worst = 0.0f64;
        for i in 0..n {
            let pv = p.eval(z[i]);
            let dv = p.eval_derivative(z[i]);
            let dv_scale = dv.norm();
            let newton = if dv_scale > 0.0 {
                // scale both operands so the complex division cannot
                // overflow internally when |dv|^2 exceeds the float range
                (pv / dv_scale) / (dv / dv_scale)
            } else {
                // stationary point: nudge deterministically and retry later
                let nudge = C64::new(1e-6 * (1.0 + z[i].norm()), 1e-6);
                z[i] += nudge;
                worst = f64::INFINITY;
                continue;
            };
            let mut repulsion = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.finv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            worst = worst.max(rel);
        }
        if worst <= 1e-14 {
            return Ok(z);
        }
    }
    Err(Error::Verify(format!(
        "root iteration did not converge in {max_sweeps} sweeps for degree {n}"
    )))
}

/// Greedy closest-pair matching between two equally sized multisets,
/// returning the worst matched distance scaled by `1 / max(1, |value|)`.
///
/// For well-separated point sets (everything this tool compares) the greedy
/// matching coincides with the optimal one.
pub fn multiset_match_distance(xs: &[C64], ys: &[C64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Verify(format!(
            "cannot match multisets of different sizes ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    let mut used_x = vec![false; n];
    let mut used_y = vec![false; n];
    let mut worst = 0.0f64;
    for _ in 0..n {
        let mut best = f64::INFINITY;
        let mut pick = (0, 0);
        for i in 0..n {
            if used_x[i] {
                continue;
            }
            for j in 0..n {
                if used_y[j] {
                    continue;
                }
                let d = (xs[i] - ys[j]).norm();
                if d < best {
                    best = d;
                    pick = (i, j);
                }
            }
        }
        used_x[pick.0] = true;
        used_y[pick.1] = true;
        let scale = xs[pick.0].norm().max(ys[pick.1].norm()).max(1.0);
        worst = worst.max(best / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{normalize_orders, validate_order_spec};

    fn cubic_orders() -> NormalizedOrders {
        // q = (2, 1), sigma = 2, alpha = (1, 1/2)
        normalize_orders(&validate_order_spec(1.0, &[1, 1], &[1, 2]).unwrap()).unwrap()
    }

    fn cubic_matrix() -> CMat {
        CMat::from_real_rows(&[vec![0.0, 1.0], vec![-2.0, -2.0]])
    }

    #[test]
    fn chi_at_zero_is_signed_determinant() {
        let a = cubic_matrix();
        let chi0 = eval_chi(C64::new(0.0, 0.0), &[1.0, 0.5], &a);
        // chi(0) = det(-A) = (-1)^d det(A); here det(A) = 2, d = 2
        assert!((chi0 - C64::new(2.0, 0.0)).norm() < 1e-14, "chi(0) = {chi0}");
    }

    #[test]
    fn substitution_identity() {
        // chi(lambda) = p(mu) with mu = lambda^{alpha_tilde/sigma} on the
        // principal branch, for lambda off the branch cut
        let orders = cubic_orders();
        let a = cubic_matrix();
        let alpha = orders.alpha();
        for &lambda in &[
            C64::new(0.7, 0.3),
            C64::new(-0.2, 1.4),
            C64::new(2.0, -0.5),
            C64::new(0.01, 0.0),
        ] {
            let mu = principal_pow(lambda, orders.alpha_tilde / orders.sigma as f64);
            let chi = eval_chi(lambda, &alpha, &a);
            let p = eval_p_det(mu, &orders, &a);
            assert!(
                (chi - p).norm() <= 1e-10 * (1.0 + chi.norm()),
                "lambda {lambda}: chi {chi} vs p {p}"
            );
        }
    }

    #[test]
    fn interpolation_recovers_cubic_coefficients() {
        // det(diag(mu^2, mu) - A) = mu^3 + 2 mu^2 + 2 for the cubic system
        let orders = cubic_orders();
        let a = cubic_matrix();
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        assert_eq!(p.degree(), 3);
        let expect = [2.0, 0.0, 2.0, 1.0];
        for (k, &e) in expect.iter().enumerate() {
            assert!(
                (p.coeffs[k] - C64::new(e, 0.0)).norm() < 1e-10,
                "coeff {k}: {} vs {e}",
                p.coeffs[k]
            );
        }
        assert!(p.leading_deviation < 1e-10);
    }

    #[test]
    fn interpolation_negative_identity() {
        // A = -I, q = (2, 1): det(diag(mu^2, mu) + I) = mu^3 + mu^2 + mu + 1
        let orders = cubic_orders();
        let a = CMat::identity(2).scale(C64::new(-1.0, 0.0));
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        for (k, &e) in [1.0, 1.0, 1.0, 1.0].iter().enumerate() {
            assert!(
                (p.coeffs[k] - C64::new(e, 0.0)).norm() < 1e-12,
                "coeff {k} = {}",
                p.coeffs[k]
            );
        }
    }

    #[test]
    fn roots_of_negative_identity_polynomial() {
        // mu^3 + mu^2 + mu + 1 = (mu + 1)(mu^2 + 1): roots -1, +-i
        let orders = cubic_orders();
        let a = CMat::identity(2).scale(C64::new(-1.0, 0.0));
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        let roots = polynomial_roots(&p).unwrap();
        let expect = [C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
        let worst = multiset_match_distance(&roots, &expect).unwrap();
        assert!(worst < 1e-10, "worst root distance {worst}");
    }

    #[test]
    fn roots_match_pencil_eigenvalues_for_cubic() {
        let orders = cubic_orders();
        let a = cubic_matrix();
        let pencil = crate::pencil::build_pencil(
            &crate::pencil::build_matrix_polynomial(&orders, &a).unwrap(),
            &orders,
        );
        let eig =
            crate::eigensolver::finite_eigenvalues(&pencil, crate::eigensolver::Backend::Dense, 1e-9)
                .unwrap();
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        let roots = polynomial_roots(&p).unwrap();
        let worst = multiset_match_distance(&roots, &eig.mu).unwrap();
        assert!(worst < 1e-9, "oracle/pencil mismatch {worst}");
    }

    #[test]
    fn polynomial_evaluation_at_roots_is_small() {
        let orders = cubic_orders();
        let a = cubic_matrix();
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        for root in polynomial_roots(&p).unwrap() {
            assert!(p.eval(root).norm() < 1e-12);
        }
    }

    #[test]
    fn bad_radius_is_rejected() {
        let orders = cubic_orders();
        let a = cubic_matrix();
        // a circle twelve orders of magnitude below the eigenvalue scale
        // makes the Vandermonde system lose the leading coefficient entirely
        let err = interpolate_det_p(&orders, &a, Some(1e-12)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("radius"), "unexpected message: {msg}");
        assert!(interpolate_det_p(&orders, &a, Some(0.0)).is_err());
        assert!(interpolate_det_p(&orders, &a, Some(f64::NAN)).is_err());
    }

    #[test]
    fn mismatched_multisets_are_rejected() {
        let xs = [C64::new(1.0, 0.0)];
        assert!(multiset_match_distance(&xs, &[]).is_err());
    }

    #[test]
    fn matching_is_tight_for_permuted_sets() {
        let xs = [
            C64::new(1.0, 2.0),
            C64::new(-3.0, 0.5),
            C64::new(0.0, -7.0),
            C64::new(4.0, 4.0),
        ];
        let ys = [xs[2], xs[0], xs[3], xs[1]];
        assert!(multiset_match_distance(&xs, &ys).unwrap() < 1e-15);
    }

    #[test]
    fn complex_matrix_oracle_round_trip() {
        // complex entries exercise the full complex DFT path
        let orders = normalize_orders(&validate_order_spec(0.9, &[1, 2, 1], &[1, 3, 2]).unwrap())
            .unwrap();
        let a = CMat::from_rows(&[
            vec![C64::new(-1.0, 0.4), C64::new(0.3, -0.2), C64::new(0.0, 0.9)],
            vec![C64::new(0.5, 0.0), C64::new(-2.0, -0.3), C64::new(0.7, 0.1)],
            vec![C64::new(-0.6, 0.2), C64::new(0.1, 0.1), C64::new(-1.5, 0.5)],
        ]);
        let pencil = crate::pencil::build_pencil(
            &crate::pencil::build_matrix_polynomial(&orders, &a).unwrap(),
            &orders,
        );
        let eig =
            crate::eigensolver::finite_eigenvalues(&pencil, crate::eigensolver::Backend::Dense, 1e-8)
                .unwrap();
        let p = interpolate_det_p(&orders, &a, None).unwrap();
        let roots = polynomial_roots(&p).unwrap();
        let worst = multiset_match_distance(&roots, &eig.mu).unwrap();
        assert!(worst < 1e-8, "oracle/pencil mismatch {worst}");
    }
}
