//! Certified rational approximation of the order vector.
//!
//! Real orders are replaced by nearby rational multiples of a common base
//! order so that the companion-pencil machinery applies. The substitution is
//! certified: on an annulus that encloses every characteristic-function zero
//! of the original system, the pointwise perturbation `|z^{alpha_k} -
//! z^{alpha*_k}|` is bounded above by an explicit function of the order
//! deviation, and each per-component bound is pushed below the requested
//! safety margin epsilon.
//!
//! Approximations come from the Stern-Brocot tree, approached from below so
//! `alpha*_k <= alpha_k` componentwise. An input within `1e-9` of a simple
//! fraction is treated as that exact fraction ("snapping"): binary floating
//! point cannot distinguish the two at the scales this tool certifies, and
//! snapping preserves exactness for inputs that were meant to be rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::lu::Lu;
use crate::linalg::svd;
use crate::linalg::{C64, CMat, principal_pow};
use crate::orders::{OrderSpec, validate_order_spec};
use crate::{Error, Result};

/// Inputs within this distance of a Stern-Brocot fraction are treated as
/// exactly that fraction.
pub const SNAP_TOLERANCE: f64 = 1e-9;

/// Largest supported denominator cap (the tree walk is linear in the cap).
pub const MAX_DENOMINATOR_CAP: u64 = 100_000;

/// Annulus `rho1 <= |lambda| <= rho2` enclosing every zero of the
/// characteristic function, with `0 < rho1 < 1 < rho2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub rho1: f64,
    pub rho2: f64,
}

/// Result of a certified order rationalization.
#[derive(Debug, Clone)]
pub struct RationalApproximation {
    /// The rationalized orders in base-order/ratio form.
    pub alpha_star: OrderSpec,
    /// Exact values `alpha*_k` as rationals (for exact downstream checks).
    pub alpha_star_exact: Vec<BigRational>,
    /// Whether component `k` was snapped to a nearby simple fraction.
    pub snapped: Vec<bool>,
    /// The safety margin the bounds were certified against.
    pub epsilon: f64,
    /// The denominator cap in force during the tree walk.
    pub denominator_cap: u64,
    /// The annulus the certification holds on.
    pub annulus: Annulus,
    /// Per-component certified bounds on `sup |z^{alpha_k} - z^{alpha*_k}|`
    /// over the annulus; each is strictly below `epsilon`.
    pub sup_deviation_bounds: Vec<f64>,
}

/// Computes the zero-enclosing annulus for the system `(alpha, A)`.
///
/// Outer radius: `(1 + ||A||_inf)^{1/alpha_min}` (beyond it the diagonal
/// term dominates every row). Inner radius: `(1/(2 ||A^{-1}||_inf))^{1/alpha_min}`
/// capped strictly below 1 (inside it `A` dominates). A singular matrix has
/// a characteristic zero at the origin, so no annulus with positive inner
/// radius exists.
pub fn compute_annulus(alpha: &[f64], a: &CMat) -> Result<Annulus> {
    validate_alpha(alpha)?;
    if alpha.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "order vector has {} components but the matrix is {}x{}",
            alpha.len(),
            a.rows(),
            a.cols()
        )));
    }
    if crate::eigensolver::system_matrix_is_singular(a) {
        return Err(Error::Rationalize(
            "annulus is undefined for a singular system matrix: the zero eigenvalue \
             pins a characteristic zero at the origin"
                .into(),
        ));
    }
    let alpha_min = alpha.iter().cloned().fold(f64::INFINITY, f64::min);
    let exponent = 1.0 / alpha_min;
    let rho2 = (1.0 + a.inf_norm()).powf(exponent);
    let inv_norm = Lu::factor(a)
        .map_err(|_| {
            Error::Rationalize("annulus is undefined for a singular system matrix".into())
        })?
        .inverse()
        .inf_norm();
    let rho1 = (1.0 / (2.0 * inv_norm)).powf(exponent).min(1.0 - f64::EPSILON);
    debug_assert!(rho1 > 0.0 && rho1 < 1.0 && rho2 > 1.0);
    Ok(Annulus { rho1, rho2 })
}

/// Certified bound on `sup_{z in annulus} |z^{a} - z^{a - delta}|` for an
/// order perturbation of size `delta >= 0`:
/// `max(1, rho2) * (exp(delta * (max(|ln rho1|, ln rho2) + pi)) - 1)`.
pub fn deviation_bound(delta: f64, annulus: &Annulus) -> f64 {
    let max_log = (-annulus.rho1.ln()).max(annulus.rho2.ln());
    annulus.rho2.max(1.0) * (delta * (max_log + std::f64::consts::PI)).exp_m1()
}

/// Outcome of one Stern-Brocot tree walk.
struct Walk {
    num: u64,
    den: u64,
    /// The fraction equals the target (possibly after snapping).
    exact: bool,
    /// The accept callback fired for this fraction.
    accepted: bool,
}

/// Walks the Stern-Brocot tree toward `x` (expected in `[0, 1]`), tracking
/// the best approximation from below with denominator at most `cap`.
///
/// Visits improving lower approximations in order of increasing denominator
/// and returns the first one `accept` fires on. With `allow_snap`, a visited
/// fraction within [`SNAP_TOLERANCE`] of `x` (from either side) is returned
/// immediately as exact. If `x >= 1` the walk returns `1/1` right away.
/// When nothing is accepted the finest lower approximation within the cap is
/// returned with `accepted: false`.
fn walk_toward<F: FnMut(u64, u64) -> bool>(
    x: &BigRational,
    cap: u64,
    allow_snap: bool,
    mut accept: F,
) -> Walk {
    let one = BigRational::one();
    let snap = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    if *x >= one {
        let exact = *x == one;
        return Walk {
            num: 1,
            den: 1,
            exact,
            accepted: exact || accept(1, 1),
        };
    }
    let frac = |p: u64, q: u64| BigRational::new(BigInt::from(p), BigInt::from(q));
    if allow_snap && x <= &snap {
        // snaps to 0/1; the caller rejects a zero numerator
        return Walk {
            num: 0,
            den: 1,
            exact: true,
            accepted: true,
        };
    }
    if allow_snap && &one - x <= snap {
        return Walk {
            num: 1,
            den: 1,
            exact: true,
            accepted: true,
        };
    }
    let mut lo = (0u64, 1u64);
    let mut hi = (1u64, 1u64);
    loop {
        let (mn, md) = (lo.0 + hi.0, lo.1 + hi.1);
        if md > cap {
            return Walk {
                num: lo.0,
                den: lo.1,
                exact: false,
                accepted: false,
            };
        }
        let m = frac(mn, md);
        match m.cmp(x) {
            std::cmp::Ordering::Equal => {
                return Walk {
                    num: mn,
                    den: md,
                    exact: true,
                    accepted: true,
                };
            }
            std::cmp::Ordering::Less => {
                lo = (mn, md);
                if allow_snap && x - &m <= snap {
                    return Walk {
                        num: mn,
                        den: md,
                        exact: true,
                        accepted: true,
                    };
                }
                if accept(mn, md) {
                    return Walk {
                        num: mn,
                        den: md,
                        exact: false,
                        accepted: true,
                    };
                }
            }
            std::cmp::Ordering::Greater => {
                if allow_snap && &m - x <= snap {
                    return Walk {
                        num: mn,
                        den: md,
                        exact: true,
                        accepted: true,
                    };
                }
                hi = (mn, md);
            }
        }
    }
}

fn validate_alpha(alpha: &[f64]) -> Result<()> {
    if alpha.len() < 2 {
        return Err(Error::Rationalize(format!(
            "need at least two order components, got {}",
            alpha.len()
        )));
    }
    for (k, &a) in alpha.iter().enumerate() {
        if !(a.is_finite() && a > 0.0 && a <= 1.0) {
            return Err(Error::Rationalize(format!(
                "order component {k} must lie in (0, 1], got {a}"
            )));
        }
    }
    Ok(())
}

/// Reinterprets one input as an exact rational: snapped to a simple fraction
/// when one lies within [`SNAP_TOLERANCE`], the exact binary value otherwise.
fn snap_input(value: f64, cap: u64) -> (BigRational, bool) {
    let x = BigRational::from_float(value).expect("finite order value");
    let w = walk_toward(&x, cap, true, |_, _| false);
    if w.exact {
        (
            BigRational::new(BigInt::from(w.num), BigInt::from(w.den)),
            true,
        )
    } else {
        (x, false)
    }
}

/// Upper-rounded `f64` image of a nonnegative exact deviation.
fn delta_to_f64(delta: &BigRational) -> f64 {
    let d = delta.abs().to_f64().unwrap_or(f64::INFINITY);
    d * (1.0 + 1e-13) + f64::MIN_POSITIVE
}

/// Finds rational orders `alpha*` with `alpha*_k <= alpha_k` (modulo
/// snapping), ratio denominators at most `denominator_cap`, and certified
/// sup-deviation bounds below `epsilon` on the given annulus.
///
/// The base order is approximated as finely as the cap allows; each ratio is
/// then the coarsest fraction whose certified bound already beats epsilon,
/// so looser margins yield smaller common multiples downstream. Exact or
/// snapped hits take priority over coarseness, keeping rational inputs
/// unchanged regardless of epsilon.
pub fn rational_approximation(
    alpha: &[f64],
    epsilon: f64,
    denominator_cap: u64,
    annulus: &Annulus,
) -> Result<RationalApproximation> {
    validate_alpha(alpha)?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Rationalize(format!(
            "safety margin epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if denominator_cap == 0 || denominator_cap > MAX_DENOMINATOR_CAP {
        return Err(Error::Rationalize(format!(
            "denominator cap must lie in [1, {MAX_DENOMINATOR_CAP}], got {denominator_cap}"
        )));
    }
    if alpha.iter().all(|&a| a == alpha[0]) {
        return Err(Error::Rationalize(
            "orders are all equal; the equal-orders case is out of scope for this tool".into(),
        ));
    }
    let d = alpha.len();
    let xs: Vec<(BigRational, bool)> = alpha
        .iter()
        .map(|&a| snap_input(a, denominator_cap))
        .collect();
    let x_tilde = xs.iter().map(|(x, _)| x.clone()).max().expect("nonempty");

    // base order: finest approximation from below within the cap
    let wt = walk_toward(&x_tilde, denominator_cap, true, |_, _| false);
    if wt.num == 0 {
        return Err(Error::Rationalize(format!(
            "largest order {} is too small to represent with denominators up to {denominator_cap}",
            x_tilde.to_f64().unwrap_or(0.0)
        )));
    }
    let at_star = BigRational::new(BigInt::from(wt.num), BigInt::from(wt.den));

    let frac = |p: u64, q: u64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let exact_delta = |x_k: &BigRational, p: u64, q: u64| x_k - &at_star * frac(p, q);

    let mut ratios: Vec<(u64, u64)> = Vec::with_capacity(d);
    let mut snapped: Vec<bool> = Vec::with_capacity(d);
    let mut bounds: Vec<f64> = Vec::with_capacity(d);
    let mut failed = false;
    for (x_k, input_snapped) in &xs {
        let u_k = x_k / &at_star;
        // a snapped/exact hit keeps rational inputs unchanged for any epsilon
        let pass1 = walk_toward(&u_k, denominator_cap, true, |_, _| false);
        let chosen = if pass1.exact
            && pass1.num > 0
            && deviation_bound(delta_to_f64(&exact_delta(x_k, pass1.num, pass1.den)), annulus)
                < epsilon
        {
            pass1
        } else {
            // coarsest fraction from below whose certified bound beats epsilon
            walk_toward(&u_k, denominator_cap, false, |p, q| {
                deviation_bound(delta_to_f64(&exact_delta(x_k, p, q)), annulus) < epsilon
            })
        };
        if chosen.num == 0 {
            return Err(Error::Rationalize(format!(
                "order ratio {} is too small to represent with denominators up to {}",
                u_k.to_f64().unwrap_or(0.0),
                denominator_cap
            )));
        }
        if !chosen.accepted {
            failed = true;
        }
        let delta = exact_delta(x_k, chosen.num, chosen.den);
        let bound = if delta.is_zero() {
            0.0
        } else {
            deviation_bound(delta_to_f64(&delta), annulus)
        };
        ratios.push((chosen.num, chosen.den));
        snapped.push(*input_snapped || (chosen.exact && !delta.is_zero()));
        bounds.push(bound);
    }

    if failed {
        // report the best margin any cap-limited approximation could certify
        let mut smallest_achievable = 0.0f64;
        for (x_k, _) in &xs {
            let u_k = x_k / &at_star;
            let finest = walk_toward(&u_k, denominator_cap, false, |_, _| false);
            let best = if finest.num == 0 {
                f64::INFINITY
            } else {
                let delta = exact_delta(x_k, finest.num, finest.den);
                if delta.is_zero() {
                    0.0
                } else {
                    deviation_bound(delta_to_f64(&delta), annulus)
                }
            };
            smallest_achievable = smallest_achievable.max(best);
        }
        return Err(Error::Rationalize(format!(
            "cannot certify a sup-deviation bound below epsilon = {epsilon:.3e} with \
             denominators up to {denominator_cap}; smallest achievable bound is \
             {smallest_achievable:.6e}"
        )));
    }

    let r: Vec<i64> = ratios.iter().map(|&(p, _)| p as i64).collect();
    let s: Vec<i64> = ratios.iter().map(|&(_, q)| q as i64).collect();
    let at_star_f64 = at_star.to_f64().expect("base order fits in f64");
    let alpha_star = validate_order_spec(at_star_f64, &r, &s)?;
    let alpha_star_exact: Vec<BigRational> = ratios
        .iter()
        .map(|&(p, q)| &at_star * frac(p, q))
        .collect();
    debug_assert!(bounds.iter().all(|&b| b < epsilon));
    Ok(RationalApproximation {
        alpha_star,
        alpha_star_exact,
        snapped,
        epsilon,
        denominator_cap,
        annulus: *annulus,
        sup_deviation_bounds: bounds,
    })
}

/// Smallest singular value of `diag(z^{alpha*_k}) - A` at one point.
fn boundary_margin(t: f64, alpha_star: &[f64], a: &CMat) -> f64 {
    let z = C64::new(0.0, t);
    let d = alpha_star.len();
    let mut m = a.scale(C64::new(-1.0, 0.0));
    for k in 0..d {
        m[(k, k)] += principal_pow(z, alpha_star[k]);
    }
    svd::sigma_min(&m)
}

/// Samples the smallest singular value of `diag(z^{alpha*}) - A` along the
/// imaginary axis `z = i t`, over a symmetric logarithmic grid of
/// `grid_points` samples plus the origin and far-field points beyond the
/// annulus. Returns the sampled minimum; a strictly positive result at a
/// healthy margin indicates the rationalized system's boundary behaviour is
/// transversal, so the verdict is robust to the order substitution.
pub fn transversality_check(
    approx: &RationalApproximation,
    a: &CMat,
    grid_points: usize,
) -> Result<f64> {
    if grid_points == 0 {
        return Err(Error::Rationalize(
            "transversality grid is empty; need at least one sample point".into(),
        ));
    }
    if crate::eigensolver::system_matrix_is_singular(a) {
        return Err(Error::Rationalize(
            "transversality check requires a nonsingular system matrix".into(),
        ));
    }
    let alpha_star = approx.alpha_star.alpha();
    if alpha_star.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "order vector has {} components but the matrix is {}x{}",
            alpha_star.len(),
            a.rows(),
            a.cols()
        )));
    }
    let t_max = 2.0 * approx.annulus.rho2.powf(approx.alpha_star.alpha_tilde);
    let t_min = t_max * 1e-8;
    let half = grid_points.div_ceil(2);
    let mut min_margin = boundary_margin(0.0, &alpha_star, a);
    for j in 0..half {
        let t = if half == 1 {
            t_max
        } else {
            t_min * (t_max / t_min).powf(j as f64 / (half - 1) as f64)
        };
        min_margin = min_margin.min(boundary_margin(t, &alpha_star, a));
        min_margin = min_margin.min(boundary_margin(-t, &alpha_star, a));
    }
    // far-field samples where the diagonal term dominates
    min_margin = min_margin.min(boundary_margin(10.0 * t_max, &alpha_star, a));
    min_margin = min_margin.min(boundary_margin(-10.0 * t_max, &alpha_star, a));
    Ok(min_margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn neg_identity(d: usize) -> CMat {
        CMat::identity(d).scale(C64::new(-1.0, 0.0))
    }

    fn sqrt2_annulus() -> Annulus {
        compute_annulus(&[1.0, INV_SQRT2], &neg_identity(2)).unwrap()
    }

    #[test]
    fn annulus_for_negative_identity() {
        let ann = sqrt2_annulus();
        // rho1 = (1/2)^{sqrt 2}, rho2 = 2^{sqrt 2}
        assert!((ann.rho1 - 0.37521422724648174).abs() < 1e-14 * ann.rho1);
        assert!((ann.rho2 - 2.665144142690225).abs() < 1e-14 * ann.rho2);
    }

    #[test]
    fn annulus_rejects_singular_matrix() {
        let a = CMat::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let err = compute_annulus(&[1.0, 0.5], &a).unwrap_err();
        assert!(err.to_string().contains("singular"), "{err}");
    }

    #[test]
    fn exact_sixteenths_survive_any_epsilon() {
        // all orders are dyadic rationals with denominator 16: the walk hits
        // them exactly, so no epsilon forces any perturbation at all
        let alpha = [0.9375, 0.875, 0.8125]; // 15/16, 7/8, 13/16
        let annulus = compute_annulus(&alpha, &neg_identity(3)).unwrap();
        for eps in [1e-1, 1e-9, 1e-15] {
            let approx = rational_approximation(&alpha, eps, 1000, &annulus).unwrap();
            let frac = |p: i64, q: i64| {
                BigRational::new(num_bigint::BigInt::from(p), num_bigint::BigInt::from(q))
            };
            assert_eq!(approx.alpha_star_exact[0], frac(15, 16));
            assert_eq!(approx.alpha_star_exact[1], frac(7, 8));
            assert_eq!(approx.alpha_star_exact[2], frac(13, 16));
            assert!(approx.sup_deviation_bounds.iter().all(|&b| b == 0.0));
            let back = approx.alpha_star.alpha();
            for (k, &a) in alpha.iter().enumerate() {
                assert!((back[k] - a).abs() < 1e-15, "component {k}: {} vs {a}", back[k]);
            }
        }
    }

    #[test]
    fn loose_margin_picks_a_coarse_convergent() {
        // 1/sqrt(2): the lower convergents are 2/3, 7/10, 12/17, 41/58,
        // 70/99, ... and 70/99 is the first whose certified bound beats 1e-3
        let approx =
            rational_approximation(&[1.0, INV_SQRT2], 1e-3, 1000, &sqrt2_annulus()).unwrap();
        assert_eq!(approx.alpha_star.r, vec![1, 70]);
        assert_eq!(approx.alpha_star.s, vec![1, 99]);
        assert!(approx.sup_deviation_bounds[1] < 1e-3);
        assert!(approx.sup_deviation_bounds[1] > 1e-4, "bound should be near 4e-4");
        assert_eq!(approx.sup_deviation_bounds[0], 0.0);
    }

    #[test]
    fn tight_margin_walks_to_a_fine_convergent() {
        let approx =
            rational_approximation(&[1.0, INV_SQRT2], 2e-5, 1000, &sqrt2_annulus()).unwrap();
        assert_eq!(approx.alpha_star.r, vec![1, 408]);
        assert_eq!(approx.alpha_star.s, vec![1, 577]);
        // reference value from an independent implementation; the last digits
        // wobble with the platform's exp/log rounding
        let b = approx.sup_deviation_bounds[1];
        assert!(
            (b - 1.1665883267850647e-5).abs() < 1e-8 * b,
            "certified bound {b}"
        );
    }

    #[test]
    fn margin_below_cap_resolution_is_rejected() {
        let err = rational_approximation(&[1.0, INV_SQRT2], 1e-5, 1000, &sqrt2_annulus())
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("smallest achievable"), "{msg}");
        assert!(msg.contains("1.16"), "should name the 1.1666e-5 floor: {msg}");
    }

    #[test]
    fn deviations_shrink_monotonically_with_epsilon() {
        let x2 = BigRational::from_float(INV_SQRT2).unwrap();
        let mut last = None;
        for eps in [1e-2, 1e-3, 2e-5] {
            let approx =
                rational_approximation(&[1.0, INV_SQRT2], eps, 1000, &sqrt2_annulus()).unwrap();
            let delta = (&x2 - &approx.alpha_star_exact[1]).abs();
            if let Some(prev) = last {
                assert!(delta <= prev, "deviation must not grow as epsilon shrinks");
            }
            last = Some(delta);
        }
    }

    #[test]
    fn approximation_stays_below_the_input() {
        let alpha = [1.0, INV_SQRT2, 0.3141592653589793];
        let annulus = compute_annulus(&alpha, &neg_identity(3)).unwrap();
        let approx = rational_approximation(&alpha, 1e-3, 1000, &annulus).unwrap();
        for (k, &a) in alpha.iter().enumerate() {
            if !approx.snapped[k] {
                let x = BigRational::from_float(a).unwrap();
                assert!(
                    approx.alpha_star_exact[k] <= x,
                    "component {k} approximated from above"
                );
            }
        }
    }

    #[test]
    fn sampled_deviation_respects_certified_bound() {
        let alpha = [1.0, INV_SQRT2];
        let annulus = sqrt2_annulus();
        let approx = rational_approximation(&alpha, 1e-3, 1000, &annulus).unwrap();
        let star = approx.alpha_star.alpha();
        let mut worst = [0.0f64; 2];
        for i in 0..20 {
            let rho = annulus.rho1 * (annulus.rho2 / annulus.rho1).powf(i as f64 / 19.0);
            for j in 0..20 {
                let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (j as f64 + 1.0) / 20.0;
                let z = C64::from_polar(rho, theta);
                for (k, w) in worst.iter_mut().enumerate() {
                    let dev = (principal_pow(z, alpha[k]) - principal_pow(z, star[k])).norm();
                    *w = w.max(dev);
                }
            }
        }
        for (k, &w) in worst.iter().enumerate() {
            assert!(
                w <= approx.sup_deviation_bounds[k] + 1e-12,
                "component {k}: sampled {} vs certified {}",
                w,
                approx.sup_deviation_bounds[k]
            );
        }
    }

    #[test]
    fn near_rational_input_snaps() {
        let alpha = [1.0, 0.8999999999]; // within 1e-9 of 9/10
        let annulus = compute_annulus(&alpha, &neg_identity(2)).unwrap();
        let approx = rational_approximation(&alpha, 1e-3, 1000, &annulus).unwrap();
        assert!(approx.snapped[1]);
        let nine_tenths =
            BigRational::new(num_bigint::BigInt::from(9), num_bigint::BigInt::from(10));
        assert_eq!(approx.alpha_star_exact[1], nine_tenths);
        assert!(approx.sup_deviation_bounds[1] < 1e-8);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let ann = sqrt2_annulus();
        assert!(rational_approximation(&[1.0, 0.5], 0.0, 1000, &ann).is_err());
        assert!(rational_approximation(&[1.0, 0.5], -1.0, 1000, &ann).is_err());
        assert!(rational_approximation(&[1.0, 0.5], 1e-3, 0, &ann).is_err());
        assert!(
            rational_approximation(&[1.0, 0.5], 1e-3, MAX_DENOMINATOR_CAP + 1, &ann).is_err()
        );
        assert!(rational_approximation(&[0.5], 1e-3, 1000, &ann).is_err());
        assert!(rational_approximation(&[0.5, 0.5], 1e-3, 1000, &ann).is_err());
        assert!(rational_approximation(&[1.0, 1.5], 1e-3, 1000, &ann).is_err());
        assert!(rational_approximation(&[1.0, 0.0], 1e-3, 1000, &ann).is_err());
    }

    #[test]
    fn cap_too_small_to_certify() {
        // with denominators up to 2 the best lower approximation of
        // 1/sqrt(2) is 1/2; the resulting bound is enormous
        let err =
            rational_approximation(&[1.0, INV_SQRT2], 1e-3, 2, &sqrt2_annulus()).unwrap_err();
        assert!(err.to_string().contains("smallest achievable"), "{err}");
    }

    #[test]
    fn vanishing_order_ratio_is_rejected() {
        let alpha = [1.0, 1e-12];
        // the ratio snaps to zero, which no positive fraction represents
        let ann = Annulus { rho1: 0.5, rho2: 2.0 };
        let err = rational_approximation(&alpha, 1e-3, 1000, &ann).unwrap_err();
        assert!(err.to_string().contains("too small"), "{err}");
    }

    #[test]
    fn transversality_margin_for_stable_system() {
        let alpha = [0.9375, 0.875];
        let annulus = compute_annulus(&alpha, &neg_identity(2)).unwrap();
        let approx = rational_approximation(&alpha, 1e-3, 1000, &annulus).unwrap();
        let a = neg_identity(2);
        let margin = transversality_check(&approx, &a, 512).unwrap();
        // diag(z^alpha) + I never comes close to singular on the imaginary
        // axis: |i t|^alpha sits in the right half-plane sector
        assert!(margin > 0.5, "margin {margin}");
        assert!(transversality_check(&approx, &a, 0).is_err());
        let singular = CMat::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(transversality_check(&approx, &singular, 64).is_err());
    }

    #[test]
    fn deviation_bound_is_monotone_and_vanishes() {
        let ann = sqrt2_annulus();
        assert_eq!(deviation_bound(0.0, &ann), 0.0);
        let mut prev = 0.0;
        for i in 1..=10 {
            let b = deviation_bound(i as f64 * 1e-4, &ann);
            assert!(b > prev);
            prev = b;
        }
    }
}
