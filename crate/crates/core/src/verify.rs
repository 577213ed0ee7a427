//! Reproduction battery: the twelve checks run by `verify --suite paper`.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dbar::{
    compose_solution, dbar_apply, first_non_orthogonal, integral_solution_eval, multiplier_solution,
    nn_dbar_reassemble, nn_form_solution, pullback_01, Form01, NNForm,
};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::exact::{gauss, rat, ExactScalar};
use crate::hs::{
    closed_form_norm_sq, disc_kernel_l2_bound, hs_partial_sum, kernel_l2_integral, pairwise_orthogonality,
    poisson_check, s1_image_norm_sq, Verdict, DEFAULT_RHO_SWEEP, DIVERGENCE_RHO_RATIO, TWO_PI,
};
use crate::poly::{HoloPoly, MultiIndex};
use crate::projection::bergman_project_quadrature;
use crate::quadrature::QuadratureSpec;

/// Samples per Monte Carlo run in the kernel square-integrability check.
pub const KERNEL_L2_SAMPLES: u64 = 10_000_000;
/// Seeds used for the disc estimate and its reproducibility check.
pub const KERNEL_L2_SEEDS: [u64; 2] = [7, 8];
/// Random forms per domain in the exactness check.
pub const RANDOM_FORMS: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
}

type Check = fn() -> Result<String>;

/// `(id, name, runtime limit, check)`.
pub const CRITERIA: [(u32, &str, Option<u64>, Check); 12] = [
    (1, "disc Hilbert-Schmidt norms", Some(5), disc_norms),
    (2, "disc Hilbert-Schmidt sum", None, disc_sum),
    (3, "bidisc norms and divergence", None, polydisc_norms),
    (4, "ball norms and divergence", None, ball_norms),
    (5, "pairwise orthogonality", None, orthogonality),
    (6, "dbar exactness on random forms", Some(30), exactness),
    (7, "integral representation", Some(120), representation),
    (8, "reproducing property", None, reproducing),
    (9, "Poisson identity", None, poisson),
    (10, "kernel square-integrability", None, kernel_l2),
    (11, "(n,n)-form solution", None, nn_forms),
    (12, "pullback identity", None, pullback),
];

fn fail(msg: String) -> Error {
    Error::Consistency(msg)
}

fn run_one(id: u32, name: &'static str, limit: Option<u64>, check: Check) -> CriterionOutcome {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(secs) = limit {
        if passed && elapsed > Duration::from_secs(secs) {
            passed = false;
            detail = format!("{detail}; exceeded {secs} s");
        }
    }
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

/// Runs the criteria whose ids are in `only` (all when empty).
pub fn run_suite(only: &[u32]) -> SuiteReport {
    let criteria: Vec<CriterionOutcome> = CRITERIA
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.0))
        .map(|&(id, name, limit, check)| run_one(id, name, limit, check))
        .collect();
    SuiteReport {
        suite: "paper",
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

fn disc_norms() -> Result<String> {
    for n in 0..=40u32 {
        let got = s1_image_norm_sq(Domain::Disc, &mi(&[n]), 0)?;
        let want = ExactScalar::new(rat(1, (n as i64 + 1) * (n as i64 + 2)), 0);
        if got != want {
            return Err(fail(format!("n={n}: {got} != {want}")));
        }
    }
    Ok("41 norms equal 1/((n+1)(n+2))".into())
}

fn disc_sum() -> Result<String> {
    let r = hs_partial_sum(Domain::Disc, 98)?;
    if r.partial_sum != ExactScalar::from_ratio(99, 100) {
        return Err(fail(format!("partial sum {}", r.partial_sum)));
    }
    match r.verdict {
        Verdict::ConvergentWithLimit { limit } if limit == ExactScalar::one() => {
            Ok("partial sum 99/100, limit 1".into())
        }
        v => Err(fail(format!("verdict {v:?}"))),
    }
}

fn box_norms_and_divergence(domain: Domain, threshold: i64) -> Result<String> {
    let mut count = 0;
    for alpha in MultiIndex::all_in_box(2, 30) {
        for j in 0..2 {
            let got = s1_image_norm_sq(domain, &alpha, j)?;
            let want = closed_form_norm_sq(domain, &alpha, j)?;
            if got != want {
                return Err(fail(format!("alpha={alpha}, j={j}: {got} != {want}")));
            }
            count += 1;
        }
    }
    let r = hs_partial_sum(domain, 50)?;
    if r.partial_sum.partial_cmp(&ExactScalar::new(rat(threshold, 1), 0)) != Some(std::cmp::Ordering::Greater) {
        return Err(fail(format!("partial sum {} does not exceed {threshold}", r.partial_sum)));
    }
    if r.verdict != Verdict::DivergentTrend {
        return Err(fail(format!("verdict {:?}", r.verdict)));
    }
    Ok(format!(
        "{count} norms match; partial sum at N=50 is {:.4} > {threshold}; divergent",
        r.partial_sum.to_f64()
    ))
}

fn polydisc_norms() -> Result<String> {
    box_norms_and_divergence(Domain::Polydisc2, 50)
}

fn ball_norms() -> Result<String> {
    box_norms_and_divergence(Domain::Ball2, 25)
}

fn orthogonality() -> Result<String> {
    let g = pairwise_orthogonality(Domain::Disc, 20)?;
    for (m, row) in g.iter().enumerate() {
        for (n, e) in row.iter().enumerate() {
            if m == n {
                let want = ExactScalar::new(rat(1, (n as i64 + 1) * (n as i64 + 2)), 0);
                let got = e.collapse().and_then(|c| c.as_real());
                if got.as_ref() != Some(&want) {
                    return Err(fail(format!("diagonal ({n},{n}) is {got:?}")));
                }
            } else if !e.is_zero() {
                return Err(fail(format!("entry ({m},{n}) is nonzero")));
            }
        }
    }
    Ok("21x21 Gram matrix exactly diagonal".into())
}

/// Random holomorphic polynomial with small Gaussian-rational coefficients.
pub fn random_holo(rng: &mut impl Rng, dim: usize, max_degree: u32) -> HoloPoly {
    let mut terms = Vec::new();
    for alpha in MultiIndex::all_up_to_degree(dim, max_degree) {
        if rng.random_bool(0.4) {
            let re = rat(rng.random_range(-6..=6), rng.random_range(1..=5));
            let im = rat(rng.random_range(-6..=6), rng.random_range(1..=5));
            terms.push((alpha, gauss(re, im)));
        }
    }
    HoloPoly::from_terms(dim, terms).expect("indices have the right dimension")
}

fn exactness() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for domain in Domain::ALL {
        for k in 0..RANDOM_FORMS {
            let coeffs = (0..domain.dim()).map(|_| random_holo(&mut rng, domain.dim(), 5)).collect();
            let g = Form01::new(domain, coeffs)?;
            let u = multiplier_solution(domain, &g)?;
            let back = dbar_apply(&u);
            if back.iter().zip(g.coefficients()).any(|(b, c)| *b != c.to_mixed()) {
                return Err(fail(format!("{domain} form {k}: dbar u != g")));
            }
            let bound = u.degree().unwrap_or(0) + 1;
            if let Some(alpha) = first_non_orthogonal(domain, &u, bound)? {
                return Err(fail(format!("{domain} form {k}: not orthogonal to z^{alpha}")));
            }
        }
    }
    Ok(format!("{RANDOM_FORMS} forms per domain solved exactly"))
}

/// Quadrature used for the integral representation on each domain, and the
/// largest coordinate modulus of the test points.
pub fn representation_settings(domain: Domain) -> (QuadratureSpec, f64) {
    match domain {
        Domain::Disc => (QuadratureSpec::polar(48, 256), 0.9),
        Domain::Polydisc2 | Domain::Ball2 => (QuadratureSpec::polar(24, 64), 0.6),
    }
}

/// Deterministic interior points: uniform in the disc of radius `r` per
/// coordinate, or in the ball of radius `r`.
pub fn test_points(domain: Domain, count: usize, r: f64, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z: Vec<Complex64> = (0..domain.dim())
            .map(|_| Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r)))
            .collect();
        let ok = match domain {
            Domain::Disc | Domain::Polydisc2 => z.iter().all(|c| c.norm() <= r),
            Domain::Ball2 => z.iter().map(|c| c.norm_sqr()).sum::<f64>() <= r * r,
        };
        if ok {
            out.push(z);
        }
    }
    out
}

fn representation_form(domain: Domain) -> Result<Form01> {
    let q = |re: i64, im: i64, d: i64| gauss(rat(re, d), rat(im, d));
    let coeffs = match domain {
        Domain::Disc => vec![HoloPoly::from_terms(
            1,
            [(mi(&[0]), q(1, 0, 1)), (mi(&[1]), q(-1, 1, 2)), (mi(&[3]), q(2, 0, 3))],
        )?],
        _ => vec![
            HoloPoly::from_terms(2, [(mi(&[0, 0]), q(1, 0, 1)), (mi(&[1, 1]), q(0, 3, 2))])?,
            HoloPoly::from_terms(2, [(mi(&[1, 0]), q(-2, 1, 3)), (mi(&[0, 2]), q(1, 0, 2))])?,
        ],
    };
    Form01::new(domain, coeffs)
}

fn representation() -> Result<String> {
    let mut worst: f64 = 0.0;
    for domain in Domain::ALL {
        let g = representation_form(domain)?;
        let u = multiplier_solution(domain, &g)?.to_float();
        let gf: Vec<_> = g.coefficients().iter().map(HoloPoly::to_float).collect();
        let (spec, r) = representation_settings(domain);
        for z in test_points(domain, 20, r, 77) {
            let integral = integral_solution_eval(domain, &gf, &z, &spec)?;
            let err = (integral - u.eval(&z)).norm();
            if err > 1e-5 {
                return Err(fail(format!("{domain} at {z:?}: difference {err:.3e}")));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("max difference {worst:.2e} over 60 points"))
}

fn reproducing() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = [0.0f64; 3];
    for (k, domain) in Domain::ALL.into_iter().enumerate() {
        let (spec, tol) = match domain {
            Domain::Disc => (QuadratureSpec::polar(32, 64), 1e-6),
            _ => (QuadratureSpec::polar(16, 32), 1e-5),
        };
        for _ in 0..5 {
            let f = random_holo(&mut rng, domain.dim(), 5).to_float();
            for z in test_points(domain, 4, 0.5, rng.random()) {
                let got = bergman_project_quadrature(domain, |w| f.eval(w), &z, &spec)?;
                let err = (got - f.eval(&z)).norm();
                if err > tol {
                    return Err(fail(format!("{domain} at {z:?}: error {err:.3e}")));
                }
                worst[k] = worst[k].max(err);
            }
        }
    }
    Ok(format!(
        "max errors disc {:.1e}, bidisc {:.1e}, ball {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn poisson() -> Result<String> {
    for rho in [0.1, 0.5, 0.9, 0.99] {
        let v = poisson_check(rho, 1.0, 4096)?;
        if (v - TWO_PI).abs() > 1e-8 {
            return Err(fail(format!("rho={rho}: {v}")));
        }
    }
    Ok("within 1e-8 of 2π for rho in {0.1, 0.5, 0.9, 0.99}".into())
}

fn kernel_l2() -> Result<String> {
    let bound = disc_kernel_l2_bound().to_f64();
    let disc: Vec<f64> = KERNEL_L2_SEEDS
        .iter()
        .map(|&seed| {
            let spec = QuadratureSpec::monte_carlo(KERNEL_L2_SAMPLES, seed);
            Ok(kernel_l2_integral(Domain::Disc, &spec, &[0.999])?[0].1.value.re)
        })
        .collect::<Result<_>>()?;
    if disc.iter().any(|&v| v > bound) {
        return Err(fail(format!("disc estimates {disc:?} exceed pi^4/6 = {bound}")));
    }
    let rel = (disc[0] - disc[1]).abs() / disc[0].max(disc[1]);
    if rel > 0.05 {
        return Err(fail(format!("disc seeds disagree by {:.1}%", 100.0 * rel)));
    }
    let mut detail = format!("disc {:.3}, {:.3} <= {bound:.4}", disc[0], disc[1]);
    for domain in [Domain::Polydisc2, Domain::Ball2] {
        let spec = QuadratureSpec::monte_carlo(KERNEL_L2_SAMPLES, KERNEL_L2_SEEDS[0]);
        let est = kernel_l2_integral(domain, &spec, &DEFAULT_RHO_SWEEP)?;
        let values: Vec<f64> = est.iter().map(|e| e.1.value.re).collect();
        for w in values.windows(2) {
            if w[1] < DIVERGENCE_RHO_RATIO * w[0] {
                return Err(fail(format!("{domain}: sweep {values:?} grows by less than {DIVERGENCE_RHO_RATIO}")));
            }
        }
        detail.push_str(&format!("; {domain} {values:.3?}"));
    }
    Ok(detail)
}

fn nn_forms() -> Result<String> {
    for domain in [Domain::Polydisc2, Domain::Ball2] {
        for alpha in [mi(&[0, 0]), mi(&[1, 0]), mi(&[1, 1])] {
            let density = HoloPoly::monomial(alpha.clone(), gauss(rat(1, 1), rat(0, 1)));
            let u = nn_form_solution(domain, &NNForm { density: density.clone() })?;
            for (j, uj) in u.iter().enumerate() {
                if let Some(beta) = first_non_orthogonal(domain, uj, alpha.degree() + 2)? {
                    return Err(fail(format!("{domain}, z^{alpha}: u_{} not orthogonal to z^{beta}", j + 1)));
                }
            }
            if nn_dbar_reassemble(&u) != density.to_mixed() {
                return Err(fail(format!("{domain}, z^{alpha}: reassembly differs")));
            }
        }
    }
    Ok("densities 1, z1, z1 z2 on bidisc and ball".into())
}

fn pullback() -> Result<String> {
    let z = HoloPoly::coordinate(1, 0);
    let maps = [z.clone(), z.pow(2), z.scale(&gauss(rat(1, 2), rat(1, 3)))];
    for (k, map) in maps.iter().enumerate() {
        for n in 0..=3 {
            let g = Form01::single(Domain::Disc, 0, z.pow(n))?;
            let u = multiplier_solution(Domain::Disc, &g)?;
            let lhs = dbar_apply(&compose_solution(&u, std::slice::from_ref(map))?);
            let rhs = pullback_01(std::slice::from_ref(map), &g)?;
            if lhs != rhs {
                return Err(fail(format!("map {k}, n={n}: dbar(u o F) != F*g")));
            }
        }
    }
    Ok("identity, z^2, cz with n <= 3".into())
}
