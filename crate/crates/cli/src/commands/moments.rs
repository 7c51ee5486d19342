//! `bergkern moments`: tabulate I(alpha) for all |alpha| <= degree, by
//! closed form and/or quadrature, with an agreement column when both are
//! available.

use anyhow::{bail, Result};
use serde_json::json;

use bergkern::moments::{
    moment_quadrature, QuadratureOptions, DEFAULT_CLOSED_CHECK_TOL, DEFAULT_CUSTOM_TOL,
};
use bergkern::indices_up_to;

use crate::config::RunConfig;
use crate::output::{emit, full, CsvTable};

use super::{index_cell, resolve_target};

const MAX_DEGREE_BOUND: u32 = 200;

struct Row {
    alpha: bergkern::MultiIndex,
    log_closed: Option<f64>,
    log_quad: Option<f64>,
    quad_abs_err: Option<f64>,
    status: String,
}

impl Row {
    fn primary(&self) -> (f64, &'static str, f64) {
        match (self.log_closed, self.log_quad) {
            // closed forms are exact up to log-Gamma rounding; clamp the
            // linear error when the value itself overflows f64
            (Some(l), _) => (l, "closed_form", (1e-13 * l.exp()).min(f64::MAX)),
            (None, Some(q)) => (q, "quadrature", self.quad_abs_err.unwrap_or(f64::NAN)),
            (None, None) => (f64::NAN, "none", f64::NAN),
        }
    }

    fn agreement(&self) -> Option<f64> {
        match (self.log_closed, self.log_quad) {
            (Some(c), Some(q)) => {
                // relative discrepancy of the values, computed from the logs
                Some(((q - c).exp() - 1.0).abs())
            }
            _ => None,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let target = resolve_target(cfg)?;
    let degree = cfg.degree.unwrap_or(6);
    if degree > MAX_DEGREE_BOUND {
        bail!("degree bound {degree} exceeds the maximum {MAX_DEGREE_BOUND}");
    }
    let method = cfg
        .method
        .clone()
        .unwrap_or_else(|| {
            if target.family.is_some() {
                "both".into()
            } else {
                "quadrature".into()
            }
        })
        .to_lowercase();
    let want_closed = matches!(method.as_str(), "closed" | "both");
    let want_quad = matches!(method.as_str(), "quadrature" | "both");
    if !want_closed && !want_quad {
        bail!("unknown moments method '{method}' (closed | quadrature | both)");
    }
    if want_closed && target.family.is_none() {
        bail!("closed-form moments need --family");
    }
    let quad_tol = cfg.tol.unwrap_or(if target.family.is_some() {
        DEFAULT_CLOSED_CHECK_TOL
    } else {
        DEFAULT_CUSTOM_TOL
    });

    let arity = target.weight.arity();
    let opts = QuadratureOptions::default();
    let mut rows = Vec::new();
    for alpha in indices_up_to(arity, degree) {
        let log_closed = match (&target.family, want_closed) {
            (Some(f), true) => Some(f.log_moment(&alpha)?),
            _ => None,
        };
        let (log_quad, quad_abs_err, status) = if want_quad {
            match moment_quadrature(&target.shadow, &target.weight, &alpha, quad_tol, &opts) {
                Ok(q) => (Some(q.log_value), Some(q.abs_error), "ok".to_string()),
                Err(bergkern::Error::QuadratureBudget {
                    log_value,
                    rel_error,
                    ..
                }) => (
                    Some(log_value),
                    Some(rel_error * log_value.exp()),
                    "no_convergence".to_string(),
                ),
                Err(e) => return Err(e.into()),
            }
        } else {
            (None, None, "ok".to_string())
        };
        rows.push(Row {
            alpha,
            log_closed,
            log_quad,
            quad_abs_err,
            status,
        });
    }

    let format = cfg.format.clone().unwrap_or_else(|| "json".into());
    let content = match format.as_str() {
        "json" => render_json(&target, &rows)?,
        "csv" => render_csv(&rows),
        other => bail!("unknown format '{other}' (json | csv)"),
    };
    emit(cfg.out.as_deref(), &content)?;
    Ok(0)
}

fn render_json(target: &super::Target, rows: &[Row]) -> Result<String> {
    let entries: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let (log_value, method, abs_err) = row.primary();
            let mut e = json!({
                "alpha": row.alpha.entries(),
                "log_value": log_value,
                "method": method,
                "abs_error_estimate": abs_err,
            });
            let obj = e.as_object_mut().expect("entry is an object");
            if let Some(c) = row.log_closed {
                obj.insert("log_value_closed".into(), json!(c));
            }
            if let Some(q) = row.log_quad {
                obj.insert("log_value_quadrature".into(), json!(q));
            }
            if let Some(a) = row.agreement() {
                obj.insert("agreement_rel_discrepancy".into(), json!(a));
            }
            if row.status != "ok" {
                obj.insert("status".into(), json!(row.status));
            }
            e
        })
        .collect();
    let doc = json!({
        "weight": target.weight.describe(),
        "shadow": target.shadow.describe(),
        "entries": entries,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

fn render_csv(rows: &[Row]) -> String {
    let mut table = CsvTable::new(
        "moments-v1",
        &[
            "alpha",
            "log_value",
            "method",
            "abs_error_estimate",
            "log_closed",
            "log_quadrature",
            "rel_discrepancy",
            "status",
        ],
    );
    for row in rows {
        let (log_value, method, abs_err) = row.primary();
        table.push(vec![
            index_cell(&row.alpha),
            full(log_value),
            method.to_string(),
            full(abs_err),
            row.log_closed.map(full).unwrap_or_default(),
            row.log_quad.map(full).unwrap_or_default(),
            row.agreement().map(full).unwrap_or_default(),
            row.status.clone(),
        ]);
    }
    table.render()
}
