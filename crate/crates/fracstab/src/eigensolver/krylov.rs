//! Dominant-eigenvalue computation by a Krylov–Schur iteration (Arnoldi with
//! thick restarts through the ordered Schur form of the Rayleigh quotient).
//!
//! The operator is abstracted so the same code serves dense test operators
//! and the shift-inverted companion operator. Runs are deterministic: start
//! and continuation vectors come from a fixed-seed counter-based generator.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{Rng, SeedableRng};

use crate::linalg::{C64, CMat, qr_eig, vec_dot, vec_norm};
use crate::{Error, Result};

/// A linear operator on complex vectors.
pub trait LinOp {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[C64]) -> Vec<C64>;
}

impl LinOp for CMat {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matvec(v)
    }
}

pub struct KrylovOutcome {
    /// The `want` dominant eigenvalues, in descending modulus.
    pub values: Vec<C64>,
    /// Total operator applications performed.
    pub operator_applications: usize,
    /// Restart cycles used.
    pub restarts: usize,
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|_| {
            let re = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
            let im = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
            C64::new(re, im)
        })
        .collect();
    let nrm = vec_norm(&v);
    for z in &mut v {
        *z /= nrm;
    }
    v
}

/// Orthogonalizes `w` against `basis[..count]` twice (classical
/// Gram-Schmidt with reorthogonalization), accumulating coefficients into
/// `coeffs`. Returns the remaining norm.
fn orthogonalize(w: &mut [C64], basis: &[Vec<C64>], count: usize, mut coeffs: Option<&mut [C64]>) -> f64 {
    for _pass in 0..2 {
        for (i, b) in basis.iter().take(count).enumerate() {
            let c = vec_dot(b, w);
            if let Some(cs) = coeffs.as_deref_mut() {
                cs[i] += c;
            }
            for (wz, bz) in w.iter_mut().zip(b) {
                *wz -= c * bz;
            }
        }
    }
    vec_norm(w)
}

/// Computes the `want` dominant (largest-modulus) eigenvalues of `op`.
///
/// `subspace` bounds the Arnoldi basis size (clamped to `[want+2, dim]`);
/// convergence is declared when the Ritz residual estimates of the leading
/// `want` values drop below `rel_tol` relative to their magnitudes.
pub fn dominant_eigenvalues(
    op: &dyn LinOp,
    want: usize,
    subspace: usize,
    max_restarts: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<KrylovOutcome> {
    let n = op.dim();
    if want == 0 {
        return Ok(KrylovOutcome { values: vec![], operator_applications: 0, restarts: 0 });
    }
    if want > n {
        return Err(Error::Eigensolver(format!(
            "requested {want} eigenvalues from an operator of dimension {n}"
        )));
    }
    let m = subspace.clamp((want + 2).min(n), n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut v: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
    v.push(random_unit(&mut rng, n));
    let mut h = CMat::zeros(m + 1, m);
    let mut active = 0usize; // columns of h filled so far
    let mut applications = 0usize;

    for restart in 0..=max_restarts {
        // Arnoldi expansion from `active` to `m` columns
        let mut exhausted = false;
        while active < m && !exhausted {
            let j = active;
            let mut w = op.apply(&v[j]);
            applications += 1;
            let scale = vec_norm(&w);
            let mut coeffs = vec![C64::new(0.0, 0.0); j + 1];
            let beta = orthogonalize(&mut w, &v, j + 1, Some(&mut coeffs));
            for (i, c) in coeffs.iter().enumerate() {
                h[(i, j)] = *c;
            }
            if beta > 1e-13 * (scale + 1e-300) {
                h[(j + 1, j)] = C64::new(beta, 0.0);
                for z in &mut w {
                    *z /= beta;
                }
                v.truncate(j + 1);
                v.push(w);
            } else {
                // invariant subspace found: deflate and continue with a
                // fresh direction orthogonal to everything so far
                h[(j + 1, j)] = C64::new(0.0, 0.0);
                if j + 1 >= n {
                    exhausted = true;
                } else {
                    let mut fresh = None;
                    for _try in 0..5 {
                        let mut cand = random_unit(&mut rng, n);
                        let rem = orthogonalize(&mut cand, &v, j + 1, None);
                        if rem > 0.5 {
                            for z in &mut cand {
                                *z /= rem;
                            }
                            fresh = Some(cand);
                            break;
                        }
                    }
                    match fresh {
                        Some(f) => {
                            v.truncate(j + 1);
                            v.push(f);
                        }
                        None => exhausted = true,
                    }
                }
            }
            active += 1;
        }

        let k_eff = active;
        // Rayleigh matrix and the coupling (spike) row below it
        let mut rayleigh = CMat::zeros(k_eff, k_eff);
        for i in 0..k_eff {
            for jj in 0..k_eff {
                rayleigh[(i, jj)] = h[(i, jj)];
            }
        }
        let spike: Vec<C64> = if exhausted || v.len() <= k_eff {
            vec![C64::new(0.0, 0.0); k_eff]
        } else {
            (0..k_eff).map(|jj| h[(k_eff, jj)]).collect()
        };

        let mut schur = qr_eig::schur(&rayleigh, true)?;
        {
            let q = schur.q.as_mut().expect("schur with vectors");
            qr_eig::sort_schur_by_key_desc(&mut schur.t, Some(q), |z| z.norm());
        }
        let q = schur.q.as_ref().expect("schur with vectors");
        let theta: Vec<C64> = (0..k_eff).map(|i| schur.t[(i, i)]).collect();

        if want > k_eff {
            return Err(Error::Eigensolver(format!(
                "Krylov subspace collapsed to dimension {k_eff} before reaching the requested \
                 {want} eigenvalues"
            )));
        }
        let theta_scale = theta.first().map(|z| z.norm()).unwrap_or(0.0);
        let residual = |i: usize| -> f64 {
            let mut r = C64::new(0.0, 0.0);
            for jj in 0..k_eff {
                r += spike[jj] * q[(jj, i)];
            }
            r.norm()
        };
        let converged = (0..want)
            .all(|i| residual(i) <= rel_tol * (theta[i].norm().max(1e-3 * theta_scale) + 1e-300));

        if converged || exhausted {
            return Ok(KrylovOutcome {
                values: theta[..want].to_vec(),
                operator_applications: applications,
                restarts: restart,
            });
        }
        if restart == max_restarts {
            let worst = (0..want).map(residual).fold(0.0f64, f64::max);
            return Err(Error::Eigensolver(format!(
                "Krylov iteration did not converge within {max_restarts} restarts \
                 (worst Ritz residual {worst:.3e})"
            )));
        }

        // thick restart: keep the leading block of the ordered Schur form
        let keep = (want + 10).min(m - 1).max(want);
        let mut vnew: Vec<Vec<C64>> = Vec::with_capacity(keep + 1);
        for i in 0..keep {
            let mut acc = vec![C64::new(0.0, 0.0); n];
            for jj in 0..k_eff {
                let c = q[(jj, i)];
                if c != C64::new(0.0, 0.0) {
                    for (a, b) in acc.iter_mut().zip(&v[jj]) {
                        *a += c * b;
                    }
                }
            }
            vnew.push(acc);
        }
        vnew.push(v[k_eff].clone());
        v = vnew;
        let mut hnew = CMat::zeros(m + 1, m);
        for i in 0..keep {
            for jj in 0..keep {
                hnew[(i, jj)] = schur.t[(i, jj)];
            }
        }
        for jj in 0..keep {
            let mut s = C64::new(0.0, 0.0);
            for l in 0..k_eff {
                s += spike[l] * q[(l, jj)];
            }
            hnew[(keep, jj)] = s;
        }
        h = hnew;
        active = keep;
    }
    unreachable!("loop returns or errors at max_restarts");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_matrix(n: usize, seed: u64) -> CMat {
        // diagonal ramp plus a small random perturbation: well-separated
        // dominant eigenvalues
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = C64::new(0.1 * next(), 0.1 * next());
            }
            a[(i, i)] += C64::new((i + 1) as f64 / n as f64 * 5.0, 0.3 * next());
        }
        a
    }

    fn sorted_desc(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        v
    }

    #[test]
    fn finds_dominant_eigenvalues_full_subspace() {
        let a = ramp_matrix(24, 3);
        let full = sorted_desc(qr_eig::eigenvalues(&a).unwrap());
        let out = dominant_eigenvalues(&a, 5, 24, 100, 7, 1e-11).unwrap();
        for (got, expect) in out.values.iter().zip(&full) {
            assert!((got - expect).norm() < 1e-8, "{got} vs {expect}");
        }
    }

    #[test]
    fn finds_dominant_eigenvalues_with_restarts() {
        let a = ramp_matrix(60, 11);
        let full = sorted_desc(qr_eig::eigenvalues(&a).unwrap());
        let out = dominant_eigenvalues(&a, 5, 18, 200, 7, 1e-11).unwrap();
        assert!(out.restarts > 0, "subspace 18 of 60 must trigger restarts");
        for (got, expect) in out.values.iter().zip(&full) {
            assert!((got - expect).norm() < 1e-7, "{got} vs {expect}");
        }
    }

    #[test]
    fn handles_rank_deficient_operator() {
        // rank-3 operator: exactly three nonzero eigenvalues; the iteration
        // hits an invariant subspace and must deflate through it
        let n = 20;
        let mut a = CMat::zeros(n, n);
        a[(0, 0)] = C64::new(3.0, 0.0);
        a[(1, 1)] = C64::new(-2.0, 0.5);
        a[(2, 2)] = C64::new(1.0, -1.0);
        let out = dominant_eigenvalues(&a, 3, 9, 100, 5, 1e-11).unwrap();
        let got = sorted_desc(out.values);
        assert!((got[0] - C64::new(3.0, 0.0)).norm() < 1e-9);
        assert!((got[1] - C64::new(-2.0, 0.5)).norm() < 1e-9);
        assert!((got[2] - C64::new(1.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn deterministic_across_runs() {
        let a = ramp_matrix(30, 9);
        let r1 = dominant_eigenvalues(&a, 4, 12, 100, 42, 1e-11).unwrap();
        let r2 = dominant_eigenvalues(&a, 4, 12, 100, 42, 1e-11).unwrap();
        assert_eq!(r1.values, r2.values);
        assert_eq!(r1.operator_applications, r2.operator_applications);
    }

    #[test]
    fn rejects_impossible_requests() {
        let a = ramp_matrix(4, 1);
        assert!(dominant_eigenvalues(&a, 5, 4, 10, 1, 1e-11).is_err());
        let empty = dominant_eigenvalues(&a, 0, 4, 10, 1, 1e-11).unwrap();
        assert!(empty.values.is_empty());
    }
}
