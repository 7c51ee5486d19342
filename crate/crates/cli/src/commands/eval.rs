//! `bergkern eval`: evaluate kernels at point pairs from a file, reporting
//! the closed-form value (when a family is selected), the moment-series
//! value, and their discrepancy. Exterior points produce per-row error
//! records, not a failing exit.

use std::sync::Arc;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::json;

use bergkern::family::family_moment_table;
use bergkern::series::DEFAULT_MAX_DEGREE;
use bergkern::{ComplexPoint, MomentTable, SeriesKernel};

use crate::config::RunConfig;
use crate::output::{emit, full, CsvTable};
use crate::points::parse_points_file;

use super::resolve_target;

struct Row {
    index: usize,
    x: String,
    y: String,
    closed: Option<num_complex::Complex64>,
    series: Option<num_complex::Complex64>,
    truncation: Option<f64>,
    degree_used: Option<u32>,
    discrepancy: Option<f64>,
    status: String,
}

// coordinates as re;im inside one CSV cell (commas would split the cell)
fn point_cell(p: &ComplexPoint) -> String {
    p.coords()
        .iter()
        .map(|c| format!("{};{}", c.re, c.im))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let target = resolve_target(cfg)?;
    let points_path = cfg
        .points
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("eval needs --points FILE"))?;
    let arity = target.weight.arity();
    let pairs = parse_points_file(points_path, arity)?;
    let rel_tol = cfg.tol.unwrap_or(1e-10);
    let max_degree = cfg.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);

    let table = match &target.family {
        Some(f) => family_moment_table(f),
        None => MomentTable::with_quadrature(
            target.weight.clone(),
            target.shadow.clone(),
            cfg.tol.unwrap_or(bergkern::moments::DEFAULT_CUSTOM_TOL),
        )?,
    };
    let series = SeriesKernel::new(Arc::new(table), max_degree);

    let rows: Vec<Row> = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (x, y))| {
            let mut row = Row {
                index,
                x: point_cell(x),
                y: point_cell(y),
                closed: None,
                series: None,
                truncation: None,
                degree_used: None,
                discrepancy: None,
                status: "ok".into(),
            };
            if let Some(family) = &target.family {
                match family.eval(x, y, rel_tol) {
                    Ok(v) => {
                        row.closed = Some(v.value);
                        if !v.converged {
                            row.status = "closed_no_convergence".into();
                        }
                    }
                    Err(e) => {
                        row.status = format!("error: {e}");
                        return row;
                    }
                }
            }
            match series.eval(x, y, rel_tol) {
                Ok(v) => {
                    row.series = Some(v.value);
                    row.truncation = Some(v.truncation_estimate);
                    row.degree_used = Some(v.degree_used);
                    if !v.converged && row.status == "ok" {
                        row.status = "series_no_convergence".into();
                    }
                }
                Err(e) => {
                    row.status = format!("error: {e}");
                    return row;
                }
            }
            if let (Some(c), Some(s)) = (row.closed, row.series) {
                let scale = c.norm().max(s.norm()).max(1e-300);
                row.discrepancy = Some((c - s).norm() / scale);
            }
            row
        })
        .collect();

    let format = cfg.format.clone().unwrap_or_else(|| "csv".into());
    let content = match format.as_str() {
        "csv" => render_csv(&rows),
        "json" => render_json(&target.label, &rows)?,
        other => bail!("unknown format '{other}' (json | csv)"),
    };
    emit(cfg.out.as_deref(), &content)?;
    Ok(0)
}

fn render_csv(rows: &[Row]) -> String {
    let mut table = CsvTable::new(
        "eval-v1",
        &[
            "index",
            "x",
            "y",
            "closed_re",
            "closed_im",
            "series_re",
            "series_im",
            "rel_discrepancy",
            "series_truncation",
            "series_degree",
            "status",
        ],
    );
    for r in rows {
        table.push(vec![
            r.index.to_string(),
            r.x.clone(),
            r.y.clone(),
            r.closed.map(|v| full(v.re)).unwrap_or_default(),
            r.closed.map(|v| full(v.im)).unwrap_or_default(),
            r.series.map(|v| full(v.re)).unwrap_or_default(),
            r.series.map(|v| full(v.im)).unwrap_or_default(),
            r.discrepancy.map(full).unwrap_or_default(),
            r.truncation.map(full).unwrap_or_default(),
            r.degree_used.map(|d| d.to_string()).unwrap_or_default(),
            r.status.clone(),
        ]);
    }
    table.render()
}

fn render_json(label: &str, rows: &[Row]) -> Result<String> {
    let rows: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "x": r.x,
                "y": r.y,
                "closed": r.closed.map(|v| json!({"re": v.re, "im": v.im})),
                "series": r.series.map(|v| json!({"re": v.re, "im": v.im})),
                "rel_discrepancy": r.discrepancy,
                "series_truncation": r.truncation,
                "series_degree": r.degree_used,
                "status": r.status,
            })
        })
        .collect();
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&json!({"target": label, "rows": rows}))?
    ))
}
