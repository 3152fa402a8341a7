//! Asymptotic stability analysis of incommensurate linear fractional-order
//! ODE systems `D^α x(t) = A x(t)` with component-wise Caputo orders
//! `α_k ∈ (0, 1]`.
//!
//! The system is asymptotically stable if and only if every zero of the
//! characteristic function `χ(λ) = det(diag(λ^{α_1}, …, λ^{α_d}) − A)`
//! (principal branch powers) lies in the open left half-plane. For rational
//! orders `α_k = α̃·r_k/s_k` the substitution `μ = λ^{α̃/σ}` with
//! `σ = lcm(s_k)` turns the zero-finding problem into a polynomial eigenvalue
//! problem for `p(μ) = diag(μ^{q_1}, …, μ^{q_d}) − A`, which is linearized as
//! a block-companion pencil `μXv = Yv` and solved by a dense or a restarted
//! Krylov eigensolver. Finite pencil eigenvalues are classified by angle,
//! mapped back to χ-zeros, and cross-validated against an independent
//! scalar-polynomial oracle and a time-domain simulator.
//!
//! Pipeline: [`orders`] → [`pencil`] → [`eigensolver`] → [`stability`], with
//! [`verify`] (scalar oracle), [`simulate`] (trajectory evidence) and
//! [`rationalize`] (rational approximation of irrational order vectors)
//! alongside. [`problem`], [`report`] and [`pipeline`] back the `fracstab`
//! command-line tool.

pub mod error;
pub mod linalg;
pub mod orders;
pub mod pencil;
pub mod eigensolver;
pub mod stability;
pub mod verify;
pub mod rationalize;
pub mod simulate;
pub mod problem;
pub mod report;
pub mod pipeline;

pub use error::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
