//! `bergkern compare`: closed-form vs quadrature moment columns for one
//! family, with per-index discrepancies. Exits 1 when any index disagrees
//! beyond tolerance.

use anyhow::{bail, Result};
use serde_json::json;

use bergkern::moments::{moment_quadrature, QuadratureOptions};
use bergkern::indices_up_to;

use crate::config::RunConfig;
use crate::output::{emit, full, CsvTable};

use super::{index_cell, resolve_target};

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let target = resolve_target(cfg)?;
    let family = match &target.family {
        Some(f) => f.clone(),
        None => bail!("compare needs --family: it checks closed forms against quadrature"),
    };
    let degree = cfg.degree.unwrap_or(6);
    let rel_tol = cfg.tol.unwrap_or(1e-7);
    let quad_tol = (rel_tol * 1e-2).max(2e-12);
    let opts = QuadratureOptions::default();

    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for alpha in indices_up_to(family.arity(), degree) {
        let log_closed = family.log_moment(&alpha)?;
        let (log_quad, converged) =
            match moment_quadrature(&target.shadow, &target.weight, &alpha, quad_tol, &opts) {
                Ok(q) => (q.log_value, true),
                Err(bergkern::Error::QuadratureBudget { log_value, .. }) => (log_value, false),
                Err(e) => return Err(e.into()),
            };
        let discrepancy = ((log_quad - log_closed).exp() - 1.0).abs();
        let pass = converged && discrepancy <= rel_tol;
        if !pass {
            failures += 1;
        }
        worst = worst.max(discrepancy);
        rows.push((alpha, log_closed, log_quad, discrepancy, pass, converged));
    }

    let format = cfg.format.clone().unwrap_or_else(|| "csv".into());
    let content = match format.as_str() {
        "csv" => {
            let mut table = CsvTable::new(
                "compare-v1",
                &[
                    "alpha",
                    "log_closed",
                    "log_quadrature",
                    "rel_discrepancy",
                    "pass",
                ],
            );
            for (alpha, c, q, d, pass, _) in &rows {
                table.push(vec![
                    index_cell(alpha),
                    full(*c),
                    full(*q),
                    full(*d),
                    pass.to_string(),
                ]);
            }
            table.render()
        }
        "json" => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|(alpha, c, q, d, pass, converged)| {
                    json!({
                        "alpha": alpha.entries(),
                        "log_closed": c,
                        "log_quadrature": q,
                        "rel_discrepancy": d,
                        "pass": pass,
                        "quadrature_converged": converged,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "target": target.label,
                    "rel_tol": rel_tol,
                    "worst_discrepancy": worst,
                    "entries": entries,
                }))?
            )
        }
        other => bail!("unknown format '{other}' (json | csv)"),
    };
    emit(cfg.out.as_deref(), &content)?;
    eprintln!(
        "compare: {} indices, worst relative discrepancy {:.3e}, {} failure(s)",
        rows.len(),
        worst,
        failures
    );
    Ok(if failures > 0 { 1 } else { 0 })
}
