//! Classification of the finite eigenvalues by angular sector, mapping of
//! the boundary-sector eigenvalues to zeros of the characteristic function
//! chi, and the stability verdict with safety margin epsilon.
//!
//! With `ats = alpha_tilde / sigma`, each finite eigenvalue `mu` falls into
//! exactly one bucket:
//!   - at_zero: |mu| <= zero_tol (happens only for singular systems),
//!   - right_half_plane: |arg mu| <= pi*ats/2 (chi has a zero in the closed
//!     right half-plane; unstable),
//!   - left_half_plane: pi*ats/2 < |arg mu| <= pi*ats (chi-zero in the open
//!     left half-plane; stable side),
//!   - no_chi_zero: |arg mu| > pi*ats (outside the image of the principal
//!     branch; no corresponding zero).
//!
//! The system is asymptotically stable iff every eigenvalue lands strictly
//! beyond the (pi/2 + epsilon)*ats angle and the system matrix is
//! nonsingular.

use crate::eigensolver::system_matrix_is_singular;
use crate::linalg::{C64, CMat, principal_arg, principal_pow};
use crate::orders::NormalizedOrders;
use crate::verify;

/// Index partition of the eigenvalue list by angular category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub at_zero: Vec<usize>,
    pub no_chi_zero: Vec<usize>,
    pub right_half_plane: Vec<usize>,
    pub left_half_plane: Vec<usize>,
}

impl Classification {
    pub fn total(&self) -> usize {
        self.at_zero.len()
            + self.no_chi_zero.len()
            + self.right_half_plane.len()
            + self.left_half_plane.len()
    }
}

/// Full analysis outcome for one system.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub orders: NormalizedOrders,
    pub classification: Classification,
    /// Zeros of chi: `lambda = mu^{sigma/alpha_tilde}` for every eigenvalue
    /// passing the inclusive boundary filter `|arg mu| <= pi*ats`.
    pub cf_zeros: Vec<C64>,
    /// `|chi(lambda)|` at each reported zero.
    pub chi_residuals: Vec<f64>,
    /// Pairs of indices into `cf_zeros` that coincide numerically (a zero on
    /// the negative real axis enters once from each conjugate boundary
    /// eigenvalue; kept faithfully and flagged here).
    pub boundary_duplicate_pairs: Vec<(usize, usize)>,
    pub a_singular: bool,
    pub epsilon: f64,
    pub stable: bool,
    /// Minimum of |arg mu| over all finite eigenvalues.
    pub min_arg_mu: f64,
    /// The tolerance used for the "mu = 0" bucket.
    pub zero_tolerance: f64,
}

/// Default tolerance under which an eigenvalue counts as zero, scaled to the
/// system: `1e-10 * (1 + ||A||_F)^{1/sigma}`.
pub fn default_zero_tolerance(a: &CMat, orders: &NormalizedOrders) -> f64 {
    1e-10 * (1.0 + a.frobenius_norm()).powf(1.0 / orders.sigma as f64)
}

/// Partitions eigenvalues into the angular categories.
pub fn classify(mu: &[C64], orders: &NormalizedOrders, zero_tol: f64) -> Classification {
    let ats = orders.ats();
    let half = std::f64::consts::PI * ats / 2.0;
    let full = std::f64::consts::PI * ats;
    let mut c = Classification {
        at_zero: vec![],
        no_chi_zero: vec![],
        right_half_plane: vec![],
        left_half_plane: vec![],
    };
    for (i, &m) in mu.iter().enumerate() {
        let a = principal_arg(m).abs();
        if m.norm() <= zero_tol {
            c.at_zero.push(i);
        } else if a <= half {
            c.right_half_plane.push(i);
        } else if a <= full {
            c.left_half_plane.push(i);
        } else {
            c.no_chi_zero.push(i);
        }
    }
    c
}

/// Maps eigenvalues through `lambda = mu^{sigma/alpha_tilde}`, keeping (in
/// order) exactly those that pass the inclusive filter
/// `|arg mu| <= pi * ats`.
pub fn zeros_of_chi(mu: &[C64], orders: &NormalizedOrders) -> Vec<C64> {
    let full = std::f64::consts::PI * orders.ats();
    let exponent = orders.sigma as f64 / orders.alpha_tilde;
    mu.iter()
        .filter(|m| principal_arg(**m).abs() <= full)
        .map(|&m| principal_pow(m, exponent))
        .collect()
}

/// Builds the verdict report. `zero_tol` overrides the scaled default when
/// given.
pub fn verdict(
    mu: &[C64],
    a: &CMat,
    orders: &NormalizedOrders,
    epsilon: f64,
    zero_tol: Option<f64>,
) -> StabilityReport {
    let zero_tolerance = zero_tol.unwrap_or_else(|| default_zero_tolerance(a, orders));
    let classification = classify(mu, orders, zero_tolerance);
    let a_singular = system_matrix_is_singular(a);
    let min_arg_mu = mu
        .iter()
        .map(|&m| principal_arg(m).abs())
        .fold(f64::INFINITY, f64::min);
    let ats = orders.ats();
    let threshold = (std::f64::consts::PI / 2.0 + epsilon) * ats;
    let stable = min_arg_mu > threshold && !a_singular;

    let cf_zeros = zeros_of_chi(mu, orders);
    let alpha = orders.alpha();
    let chi_residuals: Vec<f64> = cf_zeros
        .iter()
        .map(|&z| verify::eval_chi(z, &alpha, a).norm())
        .collect();
    let mut boundary_duplicate_pairs = vec![];
    for i in 0..cf_zeros.len() {
        for j in i + 1..cf_zeros.len() {
            if (cf_zeros[i] - cf_zeros[j]).norm() <= 1e-9 * (1.0 + cf_zeros[i].norm()) {
                boundary_duplicate_pairs.push((i, j));
            }
        }
    }

    StabilityReport {
        orders: orders.clone(),
        classification,
        cf_zeros,
        chi_residuals,
        boundary_duplicate_pairs,
        a_singular,
        epsilon,
        stable,
        min_arg_mu,
        zero_tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{normalize_orders, validate_order_spec};

    fn orders_2_1() -> NormalizedOrders {
        // alpha_tilde = 1, q = (2, 1), sigma = 2 => ats = 1/2
        normalize_orders(&validate_order_spec(1.0, &[1, 1], &[1, 2]).unwrap()).unwrap()
    }

    #[test]
    fn boundary_angles_are_inclusive() {
        let orders = orders_2_1();
        // |arg(+-i)| = pi/2 = pi*ats exactly: boundary of the stable side;
        // arg(-1) = pi > pi/2: no corresponding zero
        let mu = [C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0)];
        let c = classify(&mu, &orders, 1e-10);
        assert_eq!(c.left_half_plane, vec![0, 1]);
        assert_eq!(c.no_chi_zero, vec![2]);
        assert!(c.right_half_plane.is_empty());
        assert!(c.at_zero.is_empty());
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn zero_eigenvalue_bucket() {
        let orders = orders_2_1();
        let mu = [C64::new(0.0, 0.0), C64::new(1e-14, 0.0), C64::new(1.0, 0.0)];
        let c = classify(&mu, &orders, 1e-10);
        assert_eq!(c.at_zero, vec![0, 1]);
        // a positive real eigenvalue sits squarely in the right sector
        assert_eq!(c.right_half_plane, vec![2]);
    }

    #[test]
    fn half_sector_split() {
        let orders = orders_2_1(); // half threshold pi/4, full pi/2
        let inside = C64::from_polar(1.0, std::f64::consts::PI / 8.0);
        let between = C64::from_polar(1.0, 3.0 * std::f64::consts::PI / 8.0);
        let outside = C64::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0);
        let c = classify(&[inside, between, outside], &orders, 1e-12);
        assert_eq!(c.right_half_plane, vec![0]);
        assert_eq!(c.left_half_plane, vec![1]);
        assert_eq!(c.no_chi_zero, vec![2]);
    }

    #[test]
    fn chi_zero_mapping_squares_the_boundary_point() {
        let orders = orders_2_1();
        // mu = i passes the filter; lambda = i^2 = -1 on the principal branch
        let z = zeros_of_chi(&[C64::new(0.0, 1.0), C64::new(-1.0, 0.0)], &orders);
        assert_eq!(z.len(), 1);
        assert!((z[0] - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugate_boundary_pair_flagged_as_duplicate() {
        let orders = orders_2_1();
        let a = CMat::identity(2).scale(C64::new(-1.0, 0.0));
        let mu = [C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0)];
        let rep = verdict(&mu, &a, &orders, 0.0, None);
        // both +-i map to -1: kept twice, flagged once as a pair
        assert_eq!(rep.cf_zeros.len(), 2);
        assert_eq!(rep.boundary_duplicate_pairs, vec![(0, 1)]);
        // chi(-1) = 0 for A = -I with orders (1, 1/2)
        assert!(rep.chi_residuals.iter().all(|&r| r < 1e-12));
        // the duplicated zero sits at -1, far inside the stable region:
        // min |arg mu| = pi/2 clears the threshold pi/4
        assert!(rep.stable);
        assert!((rep.min_arg_mu - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn stable_diagonal_system() {
        // A = diag(-1, -2), orders (1, 1/2): zeros of chi are at lambda = -1
        // (from the first factor); (-2) has no principal square root, so the
        // second factor contributes nothing. All eigenvalues keep away from
        // the closed right sector.
        let orders = orders_2_1();
        let a = CMat::from_real_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
        let pencil = crate::pencil::build_pencil(
            &crate::pencil::build_matrix_polynomial(&orders, &a).unwrap(),
            &orders,
        );
        let eig =
            crate::eigensolver::finite_eigenvalues(&pencil, crate::eigensolver::Backend::Dense, 1e-9)
                .unwrap();
        let rep = verdict(&eig.mu, &a, &orders, 0.0, None);
        assert!(rep.stable, "min |arg mu| = {}", rep.min_arg_mu);
        assert!(!rep.a_singular);
        // the lone reported zero is lambda = -1
        assert_eq!(rep.cf_zeros.len(), 2, "boundary pair from mu = +-i");
        for z in &rep.cf_zeros {
            assert!((z - C64::new(-1.0, 0.0)).norm() < 1e-9, "zero {z}");
        }
    }

    #[test]
    fn epsilon_monotonicity() {
        let orders = orders_2_1();
        let a = CMat::from_real_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
        // eigenvalue with |arg mu| = 2.0 * (pi/2) * ats: stable at eps = 0,
        // unstable once (pi/2 + eps)*ats >= 2.0*(pi/2)*ats, i.e. eps >= pi/2
        let mu = [C64::from_polar(1.0, 1.0 * std::f64::consts::PI / 2.0)];
        let mut last_stable = true;
        for i in 0..20 {
            let eps = i as f64 * 0.1;
            let rep = verdict(&mu, &a, &orders, eps, None);
            if !last_stable {
                assert!(!rep.stable, "verdict must be monotone in epsilon");
            }
            last_stable = rep.stable;
        }
        assert!(!last_stable);
    }

    #[test]
    fn singular_matrix_is_never_stable() {
        let orders = orders_2_1();
        let a = CMat::zeros(2, 2);
        // even perfectly placed eigenvalues cannot rescue a singular system
        let mu = [C64::new(-1.0, 0.8)];
        let rep = verdict(&mu, &a, &orders, 0.0, None);
        assert!(rep.a_singular);
        assert!(!rep.stable);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn classification_is_a_partition(
                vals in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..40),
            ) {
                let orders = orders_2_1();
                let mu: Vec<C64> = vals.iter().map(|&(re, im)| C64::new(re, im)).collect();
                let c = classify(&mu, &orders, 1e-10);
                prop_assert_eq!(c.total(), mu.len());
                let mut seen = vec![false; mu.len()];
                for &i in c
                    .at_zero
                    .iter()
                    .chain(&c.no_chi_zero)
                    .chain(&c.right_half_plane)
                    .chain(&c.left_half_plane)
                {
                    prop_assert!(!seen[i], "index {} assigned twice", i);
                    seen[i] = true;
                }
                prop_assert!(seen.iter().all(|&s| s));
            }

            #[test]
            fn verdict_monotone_in_epsilon(
                re in -2.0f64..2.0,
                im in -2.0f64..2.0,
            ) {
                let orders = orders_2_1();
                let a = CMat::from_real_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
                let mu = [C64::new(re, im)];
                let mut prev = true;
                for i in 0..10 {
                    let eps = i as f64 * 0.2;
                    let rep = verdict(&mu, &a, &orders, eps, None);
                    if !prev {
                        prop_assert!(!rep.stable);
                    }
                    prev = rep.stable;
                }
            }
        }
    }
}
