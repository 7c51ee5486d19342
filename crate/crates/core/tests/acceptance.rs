//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Tolerances and runtime budgets are pinned in the constants below.
//!
//! Run with `cargo test --test acceptance` (add `-- --nocapture` to see the
//! per-criterion lines on success).

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use bergkern::family::{
    default_registry, parse_params, CnFamily, KernelEvaluator, KernelFamily, VEtaFamily,
};
use bergkern::moments::{
    moment_quadrature, veta_log_moment, QuadratureOptions,
};
use bergkern::sampling::{sample_unit_sphere, unit_sphere_area};
use bergkern::specfn::ln_gamma;
use bergkern::verify::{
    check_parseval, check_reproducing, cross_validate_family, gram_psd_check, CheckStatus,
    Polynomial, Scheme,
};
use bergkern::{
    indices_up_to, ComplexPoint, MomentTable, MultiIndex, RadialWeight, SeriesKernel,
    ShadowRegion,
};

// criterion 1
const FOCK_REDUCTION_REL: f64 = 1e-12;
const FOCK_REDUCTION_BUDGET_S: f64 = 1.0;
// criterion 2
const DISC_SERIES_REL: f64 = 1e-6;
const DISC_SERIES_BUDGET_S: f64 = 10.0;
// criterion 3
const DUAL_ROUTE_CN_REL: f64 = 1e-7;
const DUAL_ROUTE_DNM_REL: f64 = 1e-7;
const DUAL_ROUTE_VETA_REL: f64 = 1e-6;
const DUAL_ROUTE_SLACK: f64 = 0.3;
const DUAL_ROUTE_PAIRS: usize = 10;
const DUAL_ROUTE_BUDGET_S: f64 = 120.0;
// criterion 4
const MOMENT_AGREEMENT_REL: f64 = 1e-7;
const MOMENT_DEGREE: u32 = 6;
const MOMENT_BUDGET_S: f64 = 60.0;
// criterion 5
const SPHERE_MC_SAMPLES: u64 = 1_000_000;
// criterion 6
const REPRODUCING_DET_TOL: f64 = 1e-6;
const REPRODUCING_MC_SAMPLES: u64 = 1_000_000;
// criterion 7
const PARSEVAL_REL: f64 = 1e-6;
// criterion 8
const SYMMETRY_REL: f64 = 1e-11;
const GRAM_EPS_FACTOR: f64 = 1e-8;
// criterion 9
const TRIPLE_SERIES_TOL: f64 = 1e-6;
const TRIPLE_SERIES_DEGREE: u32 = 40;

fn sample_pair(
    family: &Arc<dyn KernelFamily>,
    slack: f64,
    rng: &mut ChaCha12Rng,
) -> (ComplexPoint, ComplexPoint) {
    (
        family.sample_interior(slack, rng),
        family.sample_interior(slack, rng),
    )
}

fn build(name: &str, params: &[&str]) -> Arc<dyn KernelFamily> {
    let p = parse_params(&params.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap();
    default_registry().build(name, &p).unwrap()
}

#[test]
fn criterion_01_fock_reduction() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for n in 1..=3usize {
        for mu1 in [0.5, 1.0, 2.0] {
            let family = CnFamily::new(n, mu1, 2.0).unwrap();
            for _ in 0..50 {
                let coords = |rng: &mut ChaCha12Rng| {
                    let v: Vec<Complex64> = (0..n)
                        .map(|_| {
                            Complex64::from_polar(
                                rng.random_range(0.0..1.0f64).sqrt() / (n as f64).sqrt(),
                                rng.random_range(0.0..2.0 * PI),
                            )
                        })
                        .collect();
                    ComplexPoint::new(v).unwrap()
                };
                let z = coords(&mut rng);
                let w = coords(&mut rng);
                let u = z.hermitian(&w).unwrap();
                // general-parameter term summation at mu2 = 2 ...
                let series = family.term_series_value(u, 1e-15);
                assert!(series.converged);
                // ... against the exponential reduction
                let exact = (mu1 / PI).powi(n as i32) * (mu1 * u).exp();
                let rel = (series.value - exact).norm() / exact.norm();
                worst = worst.max(rel);
                assert!(
                    rel <= FOCK_REDUCTION_REL,
                    "criterion 1: FAIL at n={n}, mu1={mu1}: rel = {rel:.3e}"
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < FOCK_REDUCTION_BUDGET_S,
        "criterion 1: FAIL runtime {elapsed:.2}s >= {FOCK_REDUCTION_BUDGET_S}s"
    );
    println!(
        "criterion 1 (Fock reduction, mu2=2): PASS  worst rel {worst:.3e} <= {FOCK_REDUCTION_REL:.0e}, {elapsed:.2}s"
    );
}

#[test]
fn criterion_02_unit_disc_quadrature_series() {
    let start = Instant::now();
    let table = MomentTable::with_quadrature(
        RadialWeight::one(1),
        ShadowRegion::ball(1, 1.0).unwrap(),
        1e-9,
    )
    .unwrap();
    let series = SeriesKernel::new(Arc::new(table), 120);
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut point = || {
            ComplexPoint::new(vec![Complex64::from_polar(
                0.7 * rng.random_range(0.0..1.0f64).sqrt(),
                rng.random_range(0.0..2.0 * PI),
            )])
            .unwrap()
        };
        let z = point();
        let w = point();
        let v = series.eval(&z, &w, 1e-10).unwrap();
        assert!(v.converged);
        let q = z.coords()[0] * w.coords()[0].conj();
        let expected = Complex64::ONE / (PI * (Complex64::ONE - q).powu(2));
        let rel = (v.value - expected).norm() / expected.norm();
        worst = worst.max(rel);
        assert!(
            rel <= DISC_SERIES_REL,
            "criterion 2: FAIL at z={z:?}, w={w:?}: rel = {rel:.3e}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < DISC_SERIES_BUDGET_S,
        "criterion 2: FAIL runtime {elapsed:.2}s >= {DISC_SERIES_BUDGET_S}s"
    );
    println!(
        "criterion 2 (classical unit-disc kernel): PASS  worst rel {worst:.3e} <= {DISC_SERIES_REL:.0e}, {elapsed:.2}s"
    );
}

#[test]
fn criterion_03_dual_route_per_family() {
    let start = Instant::now();
    let cases: Vec<(Arc<dyn KernelFamily>, f64)> = vec![
        (build("cn", &["n=2", "mu1=1", "mu2=1"]), DUAL_ROUTE_CN_REL),
        (build("cn", &["n=2", "mu1=1", "mu2=2"]), DUAL_ROUTE_CN_REL),
        (build("cn", &["n=2", "mu1=1", "mu2=3"]), DUAL_ROUTE_CN_REL),
        (
            build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0"]),
            DUAL_ROUTE_DNM_REL,
        ),
        (
            build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0.5"]),
            DUAL_ROUTE_DNM_REL,
        ),
        (
            build("dnm", &["n=2", "m=1", "mu1=1", "mu2=2", "eta=0"]),
            DUAL_ROUTE_DNM_REL,
        ),
        (
            build("dnm", &["n=2", "m=1", "mu1=1", "mu2=2", "eta=0.5"]),
            DUAL_ROUTE_DNM_REL,
        ),
        (
            build("veta", &["n=1", "m=1", "eta=1", "a=0"]),
            DUAL_ROUTE_VETA_REL,
        ),
        (
            build("veta", &["n=1", "m=1", "eta=1", "a=1"]),
            DUAL_ROUTE_VETA_REL,
        ),
    ];
    let mut lines = Vec::new();
    for (family, rel_tol) in &cases {
        let reports =
            cross_validate_family(family, DUAL_ROUTE_PAIRS, 303, *rel_tol, DUAL_ROUTE_SLACK, 120)
                .unwrap();
        let worst = reports
            .iter()
            .map(|r| r.measured)
            .fold(0.0f64, f64::max);
        for r in &reports {
            assert!(
                r.status == CheckStatus::Pass,
                "criterion 3: FAIL {}: {r:?}",
                family.describe()
            );
        }
        lines.push(format!("{}: worst {worst:.3e} <= {rel_tol:.0e}", family.describe()));
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < DUAL_ROUTE_BUDGET_S,
        "criterion 3: FAIL runtime {elapsed:.2}s >= {DUAL_ROUTE_BUDGET_S}s"
    );
    println!(
        "criterion 3 (dual-route agreement): PASS  {}; {elapsed:.2}s",
        lines.join("; ")
    );
}

#[test]
fn criterion_04_moments_closed_vs_quadrature() {
    let start = Instant::now();
    let settings: Vec<Arc<dyn KernelFamily>> = vec![
        build("cn", &["n=1", "mu1=1", "mu2=2"]),
        build("cn", &["n=2", "mu1=0.5", "mu2=1"]),
        build("cn", &["n=2", "mu1=2", "mu2=3"]),
        build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0"]),
        build("dnm", &["n=1", "m=1", "mu1=0.5", "mu2=1", "eta=0.5"]),
        build("dnm", &["n=1", "m=1", "mu1=1", "mu2=3", "eta=1.5"]),
        build("veta", &["n=1", "m=1", "eta=1", "a=0"]),
        build("veta", &["n=1", "m=1", "eta=1.5", "a=1"]),
        build("veta", &["n=1", "m=1", "eta=0.7", "a=0.5"]),
    ];
    let opts = QuadratureOptions::default();
    let mut worst_all = 0.0f64;
    for family in &settings {
        let weight = family.weight();
        let shadow = family.shadow();
        let mut worst = 0.0f64;
        for alpha in indices_up_to(family.arity(), MOMENT_DEGREE) {
            let closed = family.log_moment(&alpha).unwrap();
            let quad = moment_quadrature(&shadow, &weight, &alpha, 1e-9, &opts).unwrap();
            let rel = ((quad.log_value - closed).exp() - 1.0).abs();
            worst = worst.max(rel);
            assert!(
                rel <= MOMENT_AGREEMENT_REL,
                "criterion 4: FAIL {} at alpha = {alpha}: rel = {rel:.3e}",
                family.describe()
            );
        }
        worst_all = worst_all.max(worst);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < MOMENT_BUDGET_S,
        "criterion 4: FAIL runtime {elapsed:.2}s >= {MOMENT_BUDGET_S}s"
    );
    println!(
        "criterion 4 (moment closed-form vs quadrature, |alpha| <= {MOMENT_DEGREE}): PASS  worst rel {worst_all:.3e} <= {MOMENT_AGREEMENT_REL:.0e}, {elapsed:.2}s"
    );
}

#[test]
fn criterion_05_sphere_integral_against_mc() {
    let mut rng = ChaCha12Rng::seed_from_u64(505);
    let mut worst_sigmas = 0.0f64;
    for n in [2usize, 3] {
        let area = unit_sphere_area(n);
        for alpha in indices_up_to(n, 4) {
            let exponents: Vec<i32> = alpha
                .entries()
                .iter()
                .map(|&e| 2 * e as i32 + 1)
                .collect();
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..SPHERE_MC_SAMPLES {
                let x = sample_unit_sphere(n, &mut rng);
                let mut v = 1.0;
                for (xi, &p) in x.iter().zip(&exponents) {
                    v *= xi.abs().powi(p);
                }
                sum += v;
                sum_sq += v * v;
            }
            let nf = SPHERE_MC_SAMPLES as f64;
            let mean = sum / nf;
            let std_err = (((sum_sq / nf - mean * mean).max(0.0)) / nf).sqrt();
            let estimate = area * mean;
            let sigma = area * std_err;
            let closed = (std::f64::consts::LN_2 + alpha.log_factorial()
                - ln_gamma(alpha.degree() as f64 + n as f64))
            .exp();
            let deviation = (estimate - closed).abs();
            worst_sigmas = worst_sigmas.max(deviation / sigma);
            assert!(
                deviation <= 4.0 * sigma,
                "criterion 5: FAIL n={n}, alpha={alpha}: |{estimate:.6e} - {closed:.6e}| > 4 sigma = {:.3e}",
                4.0 * sigma
            );
        }
    }
    println!(
        "criterion 5 (sphere integral vs MC, 1e6 samples): PASS  worst deviation {worst_sigmas:.2} sigma < 4"
    );
}

#[test]
fn criterion_06_reproducing_property() {
    // deterministic radial-quadrature scheme on Fock n=1 and the unit disc
    let fock = build("cn", &["n=1", "mu1=1", "mu2=2"]);
    let disc = build("disc", &[]);
    let fock_z0 = ComplexPoint::from_pairs(&[(0.4, 0.25)]).unwrap();
    let disc_z0 = ComplexPoint::from_pairs(&[(0.35, -0.3)]).unwrap();
    let mut worst_det = 0.0f64;
    for (family, z0) in [(&fock, &fock_z0), (&disc, &disc_z0)] {
        for k in 0..=6u32 {
            let f = Polynomial::monomial(&MultiIndex::new(vec![k]).unwrap(), Complex64::ONE);
            let r = check_reproducing(
                family,
                family.as_ref(),
                &f,
                z0,
                &Scheme::quadrature(),
                REPRODUCING_DET_TOL,
            )
            .unwrap();
            worst_det = worst_det.max(r.measured);
            assert!(
                r.status == CheckStatus::Pass,
                "criterion 6: FAIL deterministic {}: {r:?}",
                family.describe()
            );
        }
    }

    // Monte-Carlo scheme on D_{1,1} within 4 sigma
    let dnm = build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0.5"]);
    let z0 = ComplexPoint::from_pairs(&[(0.3, 0.1), (0.0, 0.4)]).unwrap();
    let mut mc_sigmas = 0.0f64;
    for (stream, idx) in [(1u64, vec![0u32, 2]), (2, vec![1, 1]), (3, vec![0, 1])] {
        let f = Polynomial::monomial(&MultiIndex::new(idx).unwrap(), Complex64::ONE);
        let scheme = Scheme::monte_carlo(REPRODUCING_MC_SAMPLES, 606).with_stream(stream);
        let r = check_reproducing(&dnm, dnm.as_ref(), &f, &z0, &scheme, 0.0).unwrap();
        let sigma = r.std_error.expect("MC reports a standard error");
        mc_sigmas = mc_sigmas.max(r.measured / sigma);
        assert!(
            r.status == CheckStatus::Pass,
            "criterion 6: FAIL MC on D_11: {r:?}"
        );
    }
    println!(
        "criterion 6 (reproducing property): PASS  deterministic worst {worst_det:.3e} <= {REPRODUCING_DET_TOL:.0e}; MC worst {mc_sigmas:.2} sigma < 4"
    );
}

#[test]
fn criterion_07_parseval() {
    let families: Vec<Arc<dyn KernelFamily>> = vec![
        build("cn", &["n=1", "mu1=1", "mu2=2"]),
        build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0.5"]),
        build("veta", &["n=1", "m=1", "eta=1", "a=0"]),
    ];
    let mut rng = ChaCha12Rng::seed_from_u64(707);
    let mut worst_det = 0.0f64;
    let mut worst_mc = 0.0f64;
    for family in &families {
        for i in 0..10 {
            let f = Polynomial::random_sparse(family.arity(), 4, 4, &mut rng);
            // deterministic radial route
            let det = check_parseval(family, &f, &Scheme::quadrature(), PARSEVAL_REL).unwrap();
            worst_det = worst_det.max((det.measured - det.expected).abs() / det.expected.abs());
            assert!(
                det.status == CheckStatus::Pass,
                "criterion 7: FAIL deterministic {}: {det:?}",
                family.describe()
            );
            // Monte-Carlo within 4 sigma
            let scheme = Scheme::monte_carlo(200_000, 808).with_stream(i as u64 + 1);
            let mc = check_parseval(family, &f, &scheme, 0.0).unwrap();
            if mc.status == CheckStatus::Inconclusive {
                continue;
            }
            let sigma = mc.std_error.expect("MC reports sigma");
            worst_mc = worst_mc.max((mc.measured - mc.expected).abs() / sigma);
            assert!(
                mc.status == CheckStatus::Pass,
                "criterion 7: FAIL MC {}: {mc:?}",
                family.describe()
            );
        }
    }
    println!(
        "criterion 7 (Parseval): PASS  deterministic worst rel {worst_det:.3e} <= {PARSEVAL_REL:.0e}; MC worst {worst_mc:.2} sigma < 4"
    );
}

#[test]
fn criterion_08_symmetry_and_gram_psd() {
    let families: Vec<Arc<dyn KernelFamily>> = vec![
        build("cn", &["n=2", "mu1=1", "mu2=2"]),
        build("cn", &["n=1", "mu1=1", "mu2=1"]),
        build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0.5"]),
        build("veta", &["n=1", "m=1", "eta=1", "a=0.5"]),
        build("ball", &["n=2"]),
    ];
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let mut worst_sym = 0.0f64;
    for family in &families {
        for _ in 0..10 {
            let (x, y) = sample_pair(family, 0.3, &mut rng);
            let kxy = family.eval(&x, &y, 1e-13).unwrap().value;
            let kyx = family.eval(&y, &x, 1e-13).unwrap().value;
            let rel = (kxy - kyx.conj()).norm() / kxy.norm().max(1e-300);
            worst_sym = worst_sym.max(rel);
            assert!(
                rel <= SYMMETRY_REL,
                "criterion 8: FAIL symmetry {}: rel = {rel:.3e}",
                family.describe()
            );
        }
        let points: Vec<ComplexPoint> = (0..8)
            .map(|_| family.sample_interior(0.2, &mut rng))
            .collect();
        let gram = gram_psd_check(family.as_ref(), &points, GRAM_EPS_FACTOR, family.name())
            .unwrap();
        assert!(
            gram.status == CheckStatus::Pass,
            "criterion 8: FAIL gram {}: {gram:?}",
            family.describe()
        );
    }
    println!(
        "criterion 8 (Hermitian symmetry + Gram PSD): PASS  worst symmetry rel {worst_sym:.3e} <= {SYMMETRY_REL:.0e}"
    );
}

#[test]
fn criterion_09_veta_triple_series_oracle() {
    let eta = [1.0f64];
    for a in [0.0, 1.0] {
        let family = VEtaFamily::new(1, 1, eta.to_vec(), a).unwrap();
        // contraction-region point pairs: |e^{eta w conj(t)} z conj(s)| +
        // |<z', s'>| <= 0.5
        let pairs = [
            (
                ComplexPoint::from_pairs(&[(0.35, 0.1), (0.0, 0.3), (0.35, 0.0)]).unwrap(),
                ComplexPoint::from_pairs(&[(0.3, -0.05), (0.2, 0.2), (0.3, -0.1)]).unwrap(),
            ),
            (
                ComplexPoint::from_pairs(&[(0.25, 0.0), (0.25, -0.2), (0.0, 0.4)]).unwrap(),
                ComplexPoint::from_pairs(&[(0.2, 0.2), (0.3, 0.1), (0.2, 0.15)]).unwrap(),
            ),
            (
                ComplexPoint::from_pairs(&[(-0.3, 0.2), (0.1, 0.1), (0.25, 0.25)]).unwrap(),
                ComplexPoint::from_pairs(&[(0.25, 0.15), (-0.2, 0.25), (0.1, -0.3)]).unwrap(),
            ),
        ];
        for (x, y) in &pairs {
            let (xc, yc) = (x.coords(), y.coords());
            let wt = xc[2] * yc[2].conj();
            let contraction =
                ((eta[0] * wt).exp() * xc[0] * yc[0].conj()).norm() + (xc[1] * yc[1].conj()).norm();
            assert!(
                contraction <= 0.5,
                "test point escaped the contraction region: {contraction}"
            );

            // brute-force truncated triple series of I^{-1} terms
            let zeta = x.pair_products(y).unwrap();
            let mut series = Complex64::ZERO;
            for total in 0..=TRIPLE_SERIES_DEGREE {
                for alpha in 0..=total {
                    for beta in 0..=(total - alpha) {
                        let gamma = total - alpha - beta;
                        let log_i = veta_log_moment(
                            &MultiIndex::new(vec![alpha]).unwrap(),
                            &MultiIndex::new(vec![beta]).unwrap(),
                            gamma,
                            &eta,
                            a,
                        )
                        .unwrap();
                        let term = (-log_i).exp()
                            * zeta[0].powu(alpha)
                            * zeta[1].powu(beta)
                            * zeta[2].powu(gamma);
                        series += term;
                    }
                }
            }
            let closed = family.eval(x, y, 1e-13).unwrap().value;
            let rel = (closed - series).norm() / closed.norm();
            assert!(
                rel <= TRIPLE_SERIES_TOL,
                "criterion 9: FAIL a={a}: closed {closed:?} vs series {series:?}, rel {rel:.3e}"
            );
        }
    }

    // a = 0 structural identity: Gamma(1) = 1 leaves the unweighted form
    let family = VEtaFamily::new(1, 1, eta.to_vec(), 0.0).unwrap();
    let x = ComplexPoint::from_pairs(&[(0.3, 0.1), (0.2, -0.25), (0.3, 0.2)]).unwrap();
    let y = ComplexPoint::from_pairs(&[(0.25, -0.1), (0.15, 0.2), (0.25, -0.15)]).unwrap();
    let (xc, yc) = (x.coords(), y.coords());
    let wt = xc[2] * yc[2].conj();
    let zeta0 = (eta[0] * wt).exp() * xc[0] * yc[0].conj();
    let phi = Complex64::ONE - zeta0 - xc[1] * yc[1].conj();
    // n = m = 1: e^{|eta| w conj(t)} / pi^3 * (Gamma(4) eta_1 zeta / phi^4
    //            + |eta| Gamma(3) / phi^3)
    let unweighted = (eta[0] * wt).exp() / PI.powi(3)
        * (6.0 * eta[0] * zeta0 * phi.powf(-4.0) + eta[0] * 2.0 * phi.powf(-3.0));
    let closed = family.eval(&x, &y, 1e-13).unwrap().value;
    let rel = (closed - unweighted).norm() / closed.norm();
    assert!(
        rel <= 1e-12,
        "criterion 9: FAIL a=0 structural identity: rel = {rel:.3e}"
    );
    println!(
        "criterion 9 (V_eta triple-series oracle, degree <= {TRIPLE_SERIES_DEGREE}): PASS  tol {TRIPLE_SERIES_TOL:.0e}; a=0 identity rel {rel:.3e}"
    );
}

#[test]
fn criterion_10_mc_determinism() {
    // same seed => byte-identical serialized reports, for both MC check types
    let dnm = build("dnm", &["n=1", "m=1", "mu1=1", "mu2=2", "eta=0"]);
    let f = Polynomial::monomial(
        &MultiIndex::new(vec![1, 1]).unwrap(),
        Complex64::new(0.7, -0.2),
    );
    let scheme = Scheme::monte_carlo(50_000, 1010).with_stream(5);
    let a = check_parseval(&dnm, &f, &scheme, 1e-2).unwrap();
    let b = check_parseval(&dnm, &f, &scheme, 1e-2).unwrap();
    let ser_a = serde_json::to_string(&a).unwrap();
    let ser_b = serde_json::to_string(&b).unwrap();
    assert_eq!(ser_a, ser_b, "criterion 10: FAIL parseval reports differ");

    let z0 = ComplexPoint::from_pairs(&[(0.2, 0.2), (0.1, 0.0)]).unwrap();
    let g = Polynomial::monomial(&MultiIndex::new(vec![0, 1]).unwrap(), Complex64::ONE);
    let r1 = check_reproducing(&dnm, dnm.as_ref(), &g, &z0, &scheme, 1e-2).unwrap();
    let r2 = check_reproducing(&dnm, dnm.as_ref(), &g, &z0, &scheme, 1e-2).unwrap();
    assert_eq!(
        serde_json::to_string(&r1).unwrap(),
        serde_json::to_string(&r2).unwrap(),
        "criterion 10: FAIL reproducing reports differ"
    );
    println!("criterion 10 (MC determinism): PASS  byte-identical reports on rerun");
}
