//! Exact rational arithmetic over the fractional-order vector: validation,
//! normalization to a common denominator `sigma`, and integer exponent
//! computation `q_k`.
//!
//! The order vector is `alpha_k = alpha_tilde * r_k / s_k` with reduced
//! positive fractions `r_k/s_k <= 1`, at least one ratio equal to 1, and not
//! all ratios equal (the equal-orders case is rejected: it calls for entirely
//! different, classical machinery).

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational representation of the order vector
/// `alpha = alpha_tilde * (r_k / s_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSpec {
    /// Maximal order, in (0, 1].
    pub alpha_tilde: f64,
    /// Ratio numerators (positive, coprime to the matching `s`).
    pub r: Vec<u64>,
    /// Ratio denominators (positive).
    pub s: Vec<u64>,
}

impl OrderSpec {
    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// The order vector as floating-point values.
    pub fn alpha(&self) -> Vec<f64> {
        self.r
            .iter()
            .zip(&self.s)
            .map(|(&r, &s)| self.alpha_tilde * (r as f64) / (s as f64))
            .collect()
    }
}

/// Orders after normalization to the common denominator `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedOrders {
    /// Least common multiple of all ratio denominators; at least 2.
    pub sigma: u64,
    /// Integer exponents `q_k = r_k * sigma / s_k`.
    pub q: Vec<u64>,
    /// Finite-eigenvalue count `N = sum(q_k)`.
    pub n_finite: usize,
    /// Maximal order, in (0, 1].
    pub alpha_tilde: f64,
}

impl NormalizedOrders {
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// The order vector reconstructed as `alpha_tilde * q_k / sigma`.
    pub fn alpha(&self) -> Vec<f64> {
        self.q
            .iter()
            .map(|&q| self.alpha_tilde * (q as f64) / (self.sigma as f64))
            .collect()
    }

    /// Angular threshold ratio `alpha_tilde / sigma` used by the eigenvalue
    /// classification.
    pub fn ats(&self) -> f64 {
        self.alpha_tilde / (self.sigma as f64)
    }
}

/// Validates raw `(alpha_tilde, r, s)` input and reduces the fractions.
pub fn validate_order_spec(alpha_tilde: f64, r: &[i64], s: &[i64]) -> Result<OrderSpec> {
    if r.len() != s.len() {
        return Err(Error::Orders(format!(
            "ratio vectors have mismatched lengths: {} numerators vs {} denominators",
            r.len(),
            s.len()
        )));
    }
    if r.len() < 2 {
        return Err(Error::Orders(format!(
            "need at least 2 components, got {}",
            r.len()
        )));
    }
    if !(alpha_tilde.is_finite() && alpha_tilde > 0.0 && alpha_tilde <= 1.0) {
        return Err(Error::Orders(format!(
            "alpha_tilde must lie in (0, 1], got {alpha_tilde}"
        )));
    }
    let mut red_r = Vec::with_capacity(r.len());
    let mut red_s = Vec::with_capacity(s.len());
    for (k, (&rk, &sk)) in r.iter().zip(s).enumerate() {
        if rk <= 0 || sk <= 0 {
            return Err(Error::Orders(format!(
                "component {}: ratio entries must be positive, got {rk}/{sk}",
                k + 1
            )));
        }
        let (rk, sk) = (rk as u64, sk as u64);
        let g = rk.gcd(&sk);
        let (rk, sk) = (rk / g, sk / g);
        if rk > sk {
            return Err(Error::Orders(format!(
                "component {}: ratio {rk}/{sk} exceeds 1 (each order must be at most alpha_tilde)",
                k + 1
            )));
        }
        red_r.push(rk);
        red_s.push(sk);
    }
    let all_equal = red_r
        .iter()
        .zip(&red_s)
        .all(|(&rk, &sk)| rk == red_r[0] && sk == red_s[0]);
    if all_equal {
        return Err(Error::Orders(
            "all order ratios are equal (equal-orders system); this tool handles only systems \
             with at least two distinct orders"
                .into(),
        ));
    }
    if !red_r.iter().zip(&red_s).any(|(&rk, &sk)| rk == sk) {
        return Err(Error::Orders(
            "the maximal ratio must equal 1: alpha_tilde must be attained by some component"
                .into(),
        ));
    }
    Ok(OrderSpec { alpha_tilde, r: red_r, s: red_s })
}

/// Parses decimal order strings exactly (numerator over a power of ten) and
/// derives `alpha_tilde` and the reduced ratios.
///
/// `denominator_cap` bounds the reduced ratio denominators; the default used
/// by the pipeline is 1000.
pub fn parse_decimal_orders(alpha: &[String], denominator_cap: u64) -> Result<OrderSpec> {
    if alpha.is_empty() {
        return Err(Error::Orders("order vector is empty".into()));
    }
    let mut exact: Vec<Ratio<BigUint>> = Vec::with_capacity(alpha.len());
    for (k, text) in alpha.iter().enumerate() {
        let v = parse_exact_decimal(text).map_err(|msg| {
            Error::Orders(format!("component {}: {msg} (input {text:?})", k + 1))
        })?;
        let one = Ratio::from_integer(BigUint::one());
        if v.is_zero() || v > one {
            return Err(Error::Orders(format!(
                "component {}: order {text} outside (0, 1]",
                k + 1
            )));
        }
        exact.push(v);
    }
    let alpha_tilde_exact = exact.iter().max().cloned().expect("nonempty");
    let mut r = Vec::with_capacity(exact.len());
    let mut s = Vec::with_capacity(exact.len());
    for (k, v) in exact.iter().enumerate() {
        let ratio = v / &alpha_tilde_exact; // reduced automatically
        let denom = ratio.denom();
        let denom_u64 = denom.to_u64().unwrap_or(u64::MAX);
        if denom_u64 > denominator_cap {
            return Err(Error::Orders(format!(
                "component {}: reduced ratio denominator {denom} exceeds the cap \
                 {denominator_cap}; replace the orders by a nearby rational approximation \
                 (see the rationalize API) or raise the cap",
                k + 1
            )));
        }
        r.push(ratio.numer().to_u64().expect("numer <= denom <= cap"));
        s.push(denom_u64);
    }
    let at = ratio_to_f64(&alpha_tilde_exact);
    validate_order_spec(
        at,
        &r.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        &s.iter().map(|&x| x as i64).collect::<Vec<_>>(),
    )
}

/// Exact decimal string -> rational (numerator / 10^p). No binary floating
/// point is involved, so `0.1` is exactly 1/10.
fn parse_exact_decimal(text: &str) -> std::result::Result<Ratio<BigUint>, String> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.starts_with('-') {
        return Err("order must be positive".into());
    }
    let (int_part, frac_part) = match t.split_once('.') {
        Some((i, f)) => (i, f),
        None => (t, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("not a decimal number".into());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err("not a plain decimal number (digits and one optional point only)".into());
    }
    let digits: String = format!("{int_part}{frac_part}");
    let numer = if digits.is_empty() {
        BigUint::zero()
    } else {
        digits.parse::<BigUint>().map_err(|e| e.to_string())?
    };
    let denom = BigUint::from(10u32).pow(frac_part.len() as u32);
    Ok(Ratio::new(numer, denom))
}

fn ratio_to_f64(v: &Ratio<BigUint>) -> f64 {
    let n = v.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = v.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Computes `sigma = lcm(s_k)`, the exponents `q_k = r_k * sigma / s_k`, and
/// the finite-eigenvalue count `N`.
pub fn normalize_orders(spec: &OrderSpec) -> Result<NormalizedOrders> {
    let mut sigma: u128 = 1;
    for &sk in &spec.s {
        let sk = sk as u128;
        let g = sigma.gcd(&sk);
        sigma = (sigma / g).checked_mul(sk).ok_or_else(|| {
            Error::Orders("common denominator sigma overflows 128-bit arithmetic".into())
        })?;
        if sigma > u64::MAX as u128 {
            return Err(Error::Orders(format!(
                "common denominator sigma = {sigma} exceeds the 64-bit budget; \
                 use smaller ratio denominators"
            )));
        }
    }
    let sigma = sigma as u64;
    debug_assert!(sigma >= 2, "validation rejects the equal-orders case, so sigma >= 2");
    let mut q = Vec::with_capacity(spec.dim());
    for (&rk, &sk) in spec.r.iter().zip(&spec.s) {
        let num = (rk as u128) * (sigma as u128);
        debug_assert_eq!(num % sk as u128, 0, "sigma is a multiple of every s_k");
        q.push((num / sk as u128) as u64);
    }
    let n_finite: u128 = q.iter().map(|&x| x as u128).sum();
    let bound = (sigma as u128) * (spec.dim() as u128);
    debug_assert!(
        n_finite < bound,
        "incommensurability guarantees N < sigma * d"
    );
    if n_finite > usize::MAX as u128 {
        return Err(Error::Orders("finite-eigenvalue count overflows usize".into()));
    }
    Ok(NormalizedOrders {
        sigma,
        q,
        n_finite: n_finite as usize,
        alpha_tilde: spec.alpha_tilde,
    })
}
