//! Construction of the matrix polynomial `p(mu) = sum_j B_j mu^j` attached to
//! the normalized orders and of the block-companion pencil `(X, Y)` whose
//! finite generalized eigenvalues are exactly the roots of `det p`.
//!
//! Layout (block size d, degree sigma, total size sigma*d):
//!   X = blockdiag(B_sigma, I, ..., I)            (diagonal, 0/1 entries)
//!   Y = [ -B_{sigma-1}  -B_{sigma-2} ... -B_0 ]
//!       [      I                              ]
//!       [            ...                      ]
//!       [                  I            0     ]
//! with B_0 = -A and, for j >= 1, B_j diagonal 0/1 carrying the component
//! exponent pattern: entry (k,k) of B_{q_k} is 1.

use crate::linalg::{C64, CMat, csr::Csr};
use crate::orders::NormalizedOrders;
use crate::{Error, Result};

/// Coefficients `B_0 .. B_sigma` of the matrix polynomial.
#[derive(Debug, Clone)]
pub struct MatrixPolynomial {
    pub d: usize,
    pub sigma: usize,
    /// `b[j]` is the coefficient of `mu^j`; length `sigma + 1`.
    pub b: Vec<CMat>,
}

/// Sparse companion pencil `mu X v = Y v`.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub x: Csr,
    pub y: Csr,
    pub d: usize,
    pub sigma: usize,
    /// Number of finite eigenvalues, `N = sum(q_k)`.
    pub n_finite: usize,
    /// Component exponents `q_k`.
    pub q: Vec<usize>,
    /// The system matrix itself (dense), kept for factored solves and
    /// singularity diagnostics.
    pub a: CMat,
}

impl Pencil {
    /// Total pencil size `sigma * d`.
    pub fn size(&self) -> usize {
        self.sigma * self.d
    }
}

/// Builds the coefficients `B_j` from the exponents `q` and the system matrix.
pub fn build_matrix_polynomial(orders: &NormalizedOrders, a: &CMat) -> Result<MatrixPolynomial> {
    let d = orders.dim();
    if !a.is_square() || a.rows() != d {
        return Err(Error::Dimension(format!(
            "system matrix is {}x{} but the order vector has {} components",
            a.rows(),
            a.cols(),
            d
        )));
    }
    let sigma = orders.sigma as usize;
    let mut b = vec![CMat::zeros(d, d); sigma + 1];
    b[0] = a.scale(C64::new(-1.0, 0.0));
    for (k, &qk) in orders.q.iter().enumerate() {
        b[qk as usize][(k, k)] += C64::new(1.0, 0.0);
    }
    Ok(MatrixPolynomial { d, sigma, b })
}

/// Assembles the sparse block-companion pencil from the polynomial
/// coefficients.
pub fn build_pencil(mp: &MatrixPolynomial, orders: &NormalizedOrders) -> Pencil {
    let d = mp.d;
    let sigma = mp.sigma;
    let n = sigma * d;

    // X = blockdiag(B_sigma, I_{(sigma-1)d}): purely diagonal
    let mut xt = Vec::with_capacity(n);
    for k in 0..d {
        let v = mp.b[sigma][(k, k)];
        if v != C64::new(0.0, 0.0) {
            xt.push((k, k, v));
        }
    }
    for i in d..n {
        xt.push((i, i, C64::new(1.0, 0.0)));
    }
    let x = Csr::from_triplets(n, n, &xt);

    // Y: first block row holds -B_{sigma-1} ... -B_0, subdiagonal holds I_d
    let mut yt = Vec::new();
    for bc in 0..sigma {
        let bj = &mp.b[sigma - 1 - bc];
        for i in 0..d {
            for j in 0..d {
                let v = bj[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    yt.push((i, bc * d + j, -v));
                }
            }
        }
    }
    for blk in 0..sigma - 1 {
        for k in 0..d {
            yt.push(((blk + 1) * d + k, blk * d + k, C64::new(1.0, 0.0)));
        }
    }
    let y = Csr::from_triplets(n, n, &yt);

    Pencil {
        x,
        y,
        d,
        sigma,
        n_finite: orders.n_finite,
        q: orders.q.iter().map(|&v| v as usize).collect(),
        a: {
            // B_0 = -A, so recover A without keeping a second argument around
            mp.b[0].scale(C64::new(-1.0, 0.0))
        },
    }
}
