//! Problem-file parsing.
//!
//! A problem file is a UTF-8 JSON object describing one system:
//!
//! ```json
//! {
//!   "alpha": ["0.9", "0.72", "0.54"],
//!   "A": [[0, 1, 0], [0, 0, 1], [-2, [-2, 0.5], -1]],
//!   "epsilon": 0.0,
//!   "backend": "dense",
//!   "simulate": {"x0": [1, 0, -2], "T": 100.0, "h": 0.1}
//! }
//! ```
//!
//! Orders come either as `alpha` (a vector of decimal strings; plain numbers
//! are accepted and read at their shortest decimal form) or as the explicit
//! triple `alpha_tilde`, `r`, `s` (base order and ratio
//! numerators/denominators). Exactly one encoding must be present. Matrix
//! entries are numbers (real) or two-element arrays `[re, im]` (complex).
//! All tolerance fields are optional and can also be set by command-line
//! flags, which take precedence.

use serde_json::Value;

use crate::eigensolver::Backend;
use crate::linalg::{C64, CMat};
use crate::{Error, Result};

/// The two accepted order encodings.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderInput {
    /// Decimal strings, e.g. `["0.9", "0.72"]`.
    Decimal(Vec<String>),
    /// Base order plus ratio fractions `alpha_k = alpha_tilde * r_k / s_k`.
    Explicit {
        alpha_tilde: f64,
        r: Vec<i64>,
        s: Vec<i64>,
    },
}

/// Optional time-domain simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateBlock {
    pub x0: Vec<f64>,
    pub t_end: f64,
    pub h: f64,
}

/// One parsed problem file.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub orders: OrderInput,
    pub a: CMat,
    pub epsilon: f64,
    pub backend: Option<Backend>,
    pub residual_tol: Option<f64>,
    pub chi_tol: Option<f64>,
    pub zero_tol: Option<f64>,
    pub denominator_cap: Option<u64>,
    pub simulate: Option<SimulateBlock>,
}

const KNOWN_FIELDS: &[&str] = &[
    "alpha",
    "alpha_tilde",
    "r",
    "s",
    "A",
    "epsilon",
    "backend",
    "residual_tol",
    "chi_tol",
    "zero_tol",
    "denominator_cap",
    "simulate",
];

fn err(msg: impl Into<String>) -> Error {
    Error::Problem(msg.into())
}

fn as_f64(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| err(format!("{ctx}: expected a number, got {v}")))
}

fn as_entry(v: &Value, row: usize, col: usize) -> Result<C64> {
    match v {
        Value::Number(_) => Ok(C64::new(as_f64(v, "matrix entry")?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = as_f64(&pair[0], &format!("field A, row {row}, entry {col}, real part"))?;
            let im = as_f64(
                &pair[1],
                &format!("field A, row {row}, entry {col}, imaginary part"),
            )?;
            Ok(C64::new(re, im))
        }
        other => Err(err(format!(
            "field A, row {row}, entry {col}: expected a number or a two-element [re, im] \
             array, got {other}"
        ))),
    }
}

fn parse_matrix(v: &Value) -> Result<CMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| err("field A: expected an array of rows"))?;
    if rows.is_empty() {
        return Err(err("field A: matrix must have at least one row"));
    }
    let d = rows.len();
    let mut data = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| err(format!("field A, row {i}: expected an array of entries")))?;
        if entries.len() != d {
            return Err(err(format!(
                "field A, row {i}: expected {d} entries for a square matrix, got {}",
                entries.len()
            )));
        }
        let mut out = Vec::with_capacity(d);
        for (j, e) in entries.iter().enumerate() {
            out.push(as_entry(e, i, j)?);
        }
        data.push(out);
    }
    Ok(CMat::from_rows(&data))
}

fn parse_orders(obj: &serde_json::Map<String, Value>) -> Result<OrderInput> {
    let has_alpha = obj.contains_key("alpha");
    let has_explicit =
        obj.contains_key("alpha_tilde") || obj.contains_key("r") || obj.contains_key("s");
    if has_alpha && has_explicit {
        return Err(err(
            "fields alpha and alpha_tilde/r/s are mutually exclusive; give exactly one \
             order encoding",
        ));
    }
    if has_alpha {
        let arr = obj["alpha"]
            .as_array()
            .ok_or_else(|| err("field alpha: expected an array"))?;
        let mut out = Vec::with_capacity(arr.len());
        for (k, v) in arr.iter().enumerate() {
            match v {
                Value::String(s) => out.push(s.clone()),
                // a plain number is read at its shortest decimal form
                Value::Number(n) => out.push(n.to_string()),
                other => {
                    return Err(err(format!(
                        "field alpha, entry {k}: expected a decimal string like \"0.9\", \
                         got {other}"
                    )));
                }
            }
        }
        return Ok(OrderInput::Decimal(out));
    }
    for name in ["alpha_tilde", "r", "s"] {
        if !obj.contains_key(name) {
            return Err(err(format!(
                "missing field {name}: orders need either alpha or all of alpha_tilde, r, s"
            )));
        }
    }
    let alpha_tilde = as_f64(&obj["alpha_tilde"], "field alpha_tilde")?;
    let int_list = |name: &str| -> Result<Vec<i64>> {
        let arr = obj[name]
            .as_array()
            .ok_or_else(|| err(format!("field {name}: expected an array of integers")))?;
        arr.iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_i64()
                    .ok_or_else(|| err(format!("field {name}, entry {k}: expected an integer")))
            })
            .collect()
    };
    Ok(OrderInput::Explicit {
        alpha_tilde,
        r: int_list("r")?,
        s: int_list("s")?,
    })
}

fn parse_simulate(v: &Value, dim: usize) -> Result<SimulateBlock> {
    let obj = v
        .as_object()
        .ok_or_else(|| err("field simulate: expected an object with x0, T, h"))?;
    for key in obj.keys() {
        if !["x0", "T", "h"].contains(&key.as_str()) {
            return Err(err(format!(
                "field simulate: unknown field {key} (expected x0, T, h)"
            )));
        }
    }
    let x0_val = obj
        .get("x0")
        .ok_or_else(|| err("field simulate: missing x0"))?;
    let arr = x0_val
        .as_array()
        .ok_or_else(|| err("field simulate.x0: expected an array of numbers"))?;
    let mut x0 = Vec::with_capacity(arr.len());
    for (k, v) in arr.iter().enumerate() {
        x0.push(as_f64(v, &format!("field simulate.x0, entry {k}"))?);
    }
    if x0.len() != dim {
        return Err(err(format!(
            "field simulate.x0: expected {dim} components to match the matrix, got {}",
            x0.len()
        )));
    }
    let t_end = as_f64(
        obj.get("T").ok_or_else(|| err("field simulate: missing T"))?,
        "field simulate.T",
    )?;
    let h = as_f64(
        obj.get("h").ok_or_else(|| err("field simulate: missing h"))?,
        "field simulate.h",
    )?;
    Ok(SimulateBlock { x0, t_end, h })
}

/// Parses a problem file, validating structure and cross-field dimensions.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| err(format!("invalid problem file: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| err("problem file must be a JSON object at the top level"))?;
    for key in obj.keys() {
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            return Err(err(format!(
                "unknown field {key}; expected one of {}",
                KNOWN_FIELDS.join(", ")
            )));
        }
    }
    let orders = parse_orders(obj)?;
    let a = parse_matrix(
        obj.get("A")
            .ok_or_else(|| err("missing field A: the system matrix is required"))?,
    )?;
    let d = a.rows();
    let order_len = match &orders {
        OrderInput::Decimal(list) => list.len(),
        OrderInput::Explicit { r, .. } => r.len(),
    };
    if order_len != d {
        return Err(err(format!(
            "orders have {order_len} components but A is {d}x{d}"
        )));
    }
    let epsilon = match obj.get("epsilon") {
        Some(v) => {
            let e = as_f64(v, "field epsilon")?;
            if !(e.is_finite() && e >= 0.0) {
                return Err(err(format!(
                    "field epsilon: must be a nonnegative finite number, got {e}"
                )));
            }
            e
        }
        None => 0.0,
    };
    let backend = match obj.get("backend") {
        Some(v) => {
            let name = v
                .as_str()
                .ok_or_else(|| err("field backend: expected \"dense\" or \"krylov\""))?;
            Some(
                name.parse::<Backend>()
                    .map_err(|e| err(format!("field backend: {e}")))?,
            )
        }
        None => None,
    };
    let opt_pos = |name: &str| -> Result<Option<f64>> {
        match obj.get(name) {
            Some(v) => {
                let t = as_f64(v, &format!("field {name}"))?;
                if !(t.is_finite() && t > 0.0) {
                    return Err(err(format!(
                        "field {name}: must be a positive finite number, got {t}"
                    )));
                }
                Ok(Some(t))
            }
            None => Ok(None),
        }
    };
    let residual_tol = opt_pos("residual_tol")?;
    let chi_tol = opt_pos("chi_tol")?;
    let zero_tol = opt_pos("zero_tol")?;
    let denominator_cap = match obj.get("denominator_cap") {
        Some(v) => Some(v.as_u64().ok_or_else(|| {
            err(format!(
                "field denominator_cap: expected a positive integer, got {v}"
            ))
        })?),
        None => None,
    };
    let simulate = match obj.get("simulate") {
        Some(v) => Some(parse_simulate(v, d)?),
        None => None,
    };
    Ok(ProblemFile {
        orders,
        a,
        epsilon,
        backend,
        residual_tol,
        chi_tol,
        zero_tol,
        denominator_cap,
        simulate,
    })
}
