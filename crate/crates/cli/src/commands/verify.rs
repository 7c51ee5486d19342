//! `bergkern verify`: run verification suites against a family and emit
//! reports as JSON lines or a CSV summary.
//!
//! Exit codes: 0 if every check passes, 1 if any fails, 3 if some are
//! inconclusive and none fail.

use anyhow::{bail, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use bergkern::verify::{
    check_orthogonality, check_parseval, check_reproducing, cross_validate_family,
    gram_psd_check, reports_to_jsonl, CheckStatus, Polynomial, Scheme, VerificationReport,
    DETERMINISTIC_TOL,
};
use bergkern::indices_up_to;

use crate::config::RunConfig;
use crate::output::{emit, full, CsvTable};

use super::resolve_target;

pub fn run(cfg: &RunConfig) -> Result<i32> {
    let target = resolve_target(cfg)?;
    let family = match &target.family {
        Some(f) => f.clone(),
        None => bail!("verification suites need --family (custom weights are quadrature-only)"),
    };

    let scheme_name = cfg
        .scheme
        .clone()
        .unwrap_or_else(|| "quadrature".into())
        .to_lowercase();
    let scheme = match scheme_name.as_str() {
        "quadrature" | "quad" => Scheme::quadrature(),
        "mc" | "monte_carlo" | "monte-carlo" => {
            let seed = match cfg.seed {
                Some(s) => s,
                None => bail!("the Monte-Carlo scheme requires --seed"),
            };
            Scheme::monte_carlo(cfg.samples.unwrap_or(100_000), seed)
        }
        other => bail!("unknown scheme '{other}' (quadrature | mc)"),
    };
    let seed = cfg.seed.unwrap_or(0);
    let suite = cfg
        .suite
        .clone()
        .unwrap_or_else(|| "all".into())
        .to_lowercase()
        .replace('-', "_");
    let slack = cfg.slack.unwrap_or(0.3);
    let arity = family.arity();

    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut stream = 0u64;
    let mut next_stream = || {
        stream += 1;
        stream
    };

    if suite == "cross_validate" || suite == "all" {
        let rel_tol = cfg.tol.unwrap_or(if family.name() == "veta" {
            1e-6
        } else {
            1e-7
        });
        let num_points = cfg.num_points.unwrap_or(10);
        let max_degree = cfg.max_degree.unwrap_or(120);
        reports.extend(cross_validate_family(
            &family, num_points, seed, rel_tol, slack, max_degree,
        )?);
    }

    if suite == "orthogonality" || suite == "all" {
        let indices = indices_up_to(arity, 2);
        for alpha in &indices {
            for beta in &indices {
                let s = scheme.with_stream(next_stream());
                reports.push(check_orthogonality(
                    &family,
                    alpha,
                    beta,
                    &s,
                    cfg.tol.unwrap_or(1e-7),
                )?);
            }
        }
    }

    if suite == "reproducing" || suite == "all" {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5eed);
        let z0 = family.sample_interior(slack, &mut rng);
        let mut functions: Vec<Polynomial> = indices_up_to(arity, 4)
            .iter()
            .map(|idx| Polynomial::monomial(idx, Complex64::ONE))
            .collect();
        for _ in 0..3 {
            functions.push(Polynomial::random_sparse(arity, 4, 3, &mut rng));
        }
        for f in &functions {
            let s = scheme.with_stream(next_stream());
            reports.push(check_reproducing(
                &family,
                family.as_ref(),
                f,
                &z0,
                &s,
                cfg.tol.unwrap_or(DETERMINISTIC_TOL),
            )?);
        }
    }

    if suite == "parseval" || suite == "all" {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xab5);
        for _ in 0..10 {
            let f = Polynomial::random_sparse(arity, 4, 4, &mut rng);
            let s = scheme.with_stream(next_stream());
            reports.push(check_parseval(&family, &f, &s, cfg.tol.unwrap_or(1e-6))?);
        }
    }

    if suite == "gram" || suite == "all" {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x6ea4);
        let points: Vec<_> = (0..8)
            .map(|_| family.sample_interior(slack.min(0.2), &mut rng))
            .collect();
        reports.push(gram_psd_check(
            family.as_ref(),
            &points,
            1e-8,
            &family.describe(),
        )?);
    }

    if reports.is_empty() {
        bail!(
            "unknown suite '{suite}' (cross_validate | orthogonality | reproducing | parseval | gram | all)"
        );
    }

    let format = cfg.format.clone().unwrap_or_else(|| "jsonl".into());
    let content = match format.as_str() {
        "jsonl" | "json" => reports_to_jsonl(&reports),
        "csv" => render_csv(&reports),
        other => bail!("unknown format '{other}' (jsonl | csv)"),
    };
    emit(cfg.out.as_deref(), &content)?;

    let any_fail = reports.iter().any(|r| r.status == CheckStatus::Fail);
    let any_inconclusive = reports
        .iter()
        .any(|r| r.status == CheckStatus::Inconclusive);
    Ok(if any_fail {
        1
    } else if any_inconclusive {
        3
    } else {
        0
    })
}

fn render_csv(reports: &[VerificationReport]) -> String {
    let mut table = CsvTable::new(
        "verify-v1",
        &[
            "check_name",
            "status",
            "measured",
            "expected",
            "tolerance",
            "samples_or_nodes",
            "rng_seed",
            "std_error",
            "target",
        ],
    );
    for r in reports {
        table.push(vec![
            r.check_name.clone(),
            format!("{:?}", r.status).to_lowercase(),
            full(r.measured),
            full(r.expected),
            full(r.tolerance),
            r.samples_or_nodes.to_string(),
            r.rng_seed.map(|s| s.to_string()).unwrap_or_default(),
            r.std_error.map(full).unwrap_or_default(),
            format!("\"{}\"", r.target.replace('"', "'")),
        ]);
    }
    table.render()
}
