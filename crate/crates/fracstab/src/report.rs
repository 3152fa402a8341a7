//! Machine-readable and human-readable rendering of analysis results.
//!
//! The JSON report is a stable, deterministic projection of the analysis:
//! field order is fixed by the struct definitions and all values derive
//! deterministically from the input, so identical inputs produce
//! byte-identical reports. Complex numbers are encoded as `[re, im]` pairs.

use serde::Serialize;

use crate::linalg::C64;
use crate::pipeline::Analysis;
use crate::simulate::Trajectory;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrdersSection {
    pub alpha_tilde: f64,
    pub sigma: u64,
    pub q: Vec<u64>,
    pub alpha: Vec<f64>,
    pub n_finite: usize,
    pub pencil_size: usize,
    pub infinite_eigenvalues: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSection {
    pub backend: String,
    pub mu: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
    pub residual_tolerance: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CategoryCounts {
    pub at_zero: usize,
    pub no_chi_zero: usize,
    pub right_half_plane: usize,
    pub left_half_plane: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationSection {
    pub zero_tolerance: f64,
    pub counts: CategoryCounts,
    pub at_zero: Vec<usize>,
    pub no_chi_zero: Vec<usize>,
    pub right_half_plane: Vec<usize>,
    pub left_half_plane: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZerosSection {
    pub values: Vec<[f64; 2]>,
    pub chi_residuals: Vec<f64>,
    pub chi_tolerance: f64,
    pub boundary_duplicate_pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSection {
    pub stable: bool,
    pub epsilon: f64,
    pub a_singular: bool,
    pub min_arg_mu: f64,
    pub min_arg_mu_over_pi: f64,
    pub stability_threshold: f64,
}

/// The complete structured report for `check`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub orders: OrdersSection,
    pub eigenvalues: EigenSection,
    pub classification: ClassificationSection,
    pub chi_zeros: ZerosSection,
    pub verdict: VerdictSection,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
    }
}

/// Projects an analysis into the serializable report.
pub fn build_report(analysis: &Analysis) -> AnalysisReport {
    let orders = &analysis.orders;
    let st = &analysis.stability;
    let ats = orders.ats();
    AnalysisReport {
        tool: tool_info(),
        orders: OrdersSection {
            alpha_tilde: orders.alpha_tilde,
            sigma: orders.sigma,
            q: orders.q.clone(),
            alpha: orders.alpha(),
            n_finite: orders.n_finite,
            pencil_size: analysis.pencil_size,
            infinite_eigenvalues: analysis.infinite_count,
        },
        eigenvalues: EigenSection {
            backend: analysis.backend.to_string(),
            mu: analysis.eigen.mu.iter().copied().map(pair).collect(),
            residuals: analysis.eigen.residuals.clone(),
            residual_tolerance: analysis.residual_tol,
            iterations: analysis.eigen.iterations,
        },
        classification: ClassificationSection {
            zero_tolerance: st.zero_tolerance,
            counts: CategoryCounts {
                at_zero: st.classification.at_zero.len(),
                no_chi_zero: st.classification.no_chi_zero.len(),
                right_half_plane: st.classification.right_half_plane.len(),
                left_half_plane: st.classification.left_half_plane.len(),
            },
            at_zero: st.classification.at_zero.clone(),
            no_chi_zero: st.classification.no_chi_zero.clone(),
            right_half_plane: st.classification.right_half_plane.clone(),
            left_half_plane: st.classification.left_half_plane.clone(),
        },
        chi_zeros: ZerosSection {
            values: st.cf_zeros.iter().copied().map(pair).collect(),
            chi_residuals: st.chi_residuals.clone(),
            chi_tolerance: analysis.chi_tol,
            boundary_duplicate_pairs: st
                .boundary_duplicate_pairs
                .iter()
                .map(|&(i, j)| [i, j])
                .collect(),
        },
        verdict: VerdictSection {
            stable: st.stable,
            epsilon: st.epsilon,
            a_singular: st.a_singular,
            min_arg_mu: st.min_arg_mu,
            min_arg_mu_over_pi: st.min_arg_mu / std::f64::consts::PI,
            stability_threshold: (std::f64::consts::PI / 2.0 + st.epsilon) * ats,
        },
    }
}

/// Stable JSON rendering (pretty-printed, trailing newline).
pub fn render_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Formats a complex number like `-0.4364 + 0.5828i` with the given number
/// of decimal places.
pub fn format_complex(z: C64, decimals: usize) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!(
        "{re:.decimals$} {sign} {im:.decimals$}i",
        re = z.re,
        im = z.im.abs(),
    )
}

/// Human-readable one-system summary.
pub fn render_text(report: &AnalysisReport) -> String {
    let o = &report.orders;
    let c = &report.classification.counts;
    let v = &report.verdict;
    let mut out = String::new();
    out.push_str(&format!(
        "system: d = {}, sigma = {}, pencil size = {}, finite eigenvalues N = {}, \
         infinite = {}\n",
        o.q.len(),
        o.sigma,
        o.pencil_size,
        o.n_finite,
        o.infinite_eigenvalues
    ));
    out.push_str(&format!(
        "orders: alpha_tilde = {}, q = {:?}\n",
        o.alpha_tilde, o.q
    ));
    out.push_str(&format!(
        "eigensolver: backend = {}, iterations = {}, max residual = {:.3e}\n",
        report.eigenvalues.backend,
        report.eigenvalues.iterations,
        report
            .eigenvalues
            .residuals
            .iter()
            .fold(0.0f64, |m, &r| m.max(r)),
    ));
    out.push_str(&format!(
        "classes: no-chi-zero = {}, right-half-plane = {}, left-half-plane = {}, \
         at-zero = {}\n",
        c.no_chi_zero, c.right_half_plane, c.left_half_plane, c.at_zero
    ));
    out.push_str(&format!(
        "min |arg mu| = {:.6} ({:.4} pi), stability threshold = {:.6}\n",
        v.min_arg_mu, v.min_arg_mu_over_pi, v.stability_threshold
    ));
    out.push_str(&format!("chi zeros ({}):\n", report.chi_zeros.values.len()));
    for (z, r) in report
        .chi_zeros
        .values
        .iter()
        .zip(&report.chi_zeros.chi_residuals)
    {
        out.push_str(&format!(
            "  {}    |chi| = {:.2e}\n",
            format_complex(C64::new(z[0], z[1]), 4),
            r
        ));
    }
    if !report.chi_zeros.boundary_duplicate_pairs.is_empty() {
        out.push_str(&format!(
            "note: zero pairs {:?} coincide (boundary duplicates kept)\n",
            report.chi_zeros.boundary_duplicate_pairs
        ));
    }
    if v.a_singular {
        out.push_str("note: system matrix is singular\n");
    }
    out.push_str(&format!(
        "verdict: {} (epsilon = {})\n",
        if v.stable { "stable" } else { "unstable" },
        v.epsilon
    ));
    out
}

/// Zeros-only text rendering: one zero per line, four decimal places.
pub fn render_zeros_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    for z in &report.chi_zeros.values {
        out.push_str(&format_complex(C64::new(z[0], z[1]), 4));
        out.push('\n');
    }
    out
}

/// Zeros-only JSON rendering.
pub fn render_zeros_json(report: &AnalysisReport) -> String {
    #[derive(Serialize)]
    struct ZerosReport<'a> {
        tool: ToolInfo,
        stable: bool,
        chi_zeros: &'a ZerosSection,
    }
    let mut s = serde_json::to_string_pretty(&ZerosReport {
        tool: tool_info(),
        stable: report.verdict.stable,
        chi_zeros: &report.chi_zeros,
    })
    .expect("report serializes");
    s.push('\n');
    s
}

/// CSV rendering of a trajectory: header `t,x1,...,xd`, one row per grid
/// point, 17 significant digits per value.
pub fn render_csv(traj: &Trajectory) -> String {
    let d = traj.dim();
    let mut out = String::from("t");
    for k in 1..=d {
        out.push_str(&format!(",x{k}"));
    }
    out.push('\n');
    for (t, row) in traj.t.iter().zip(&traj.x) {
        out.push_str(&format!("{t:.16e}"));
        for v in row {
            out.push_str(&format!(",{v:.16e}"));
        }
        out.push('\n');
    }
    out
}
