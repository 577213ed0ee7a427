//! Acceptance battery. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bergman_dbar::dbar::{
    basis_form_solution, compose_solution, dbar_apply, integral_solution_eval, multiplier_solution, nn_form_solution,
    Form01, NNForm,
};
use bergman_dbar::domains::{inner_product_mixed, norm_sq_scaled};
use bergman_dbar::exact::{gauss, gauss_real, rat};
use bergman_dbar::hs::{hs_partial_sum, kernel_l2_integral, pairwise_orthogonality, poisson_check, s1_image_norm_sq, Verdict};
use bergman_dbar::kernels::reproducing_check;
use bergman_dbar::{Domain, ExactScalar, HoloPoly, MixedPoly, MultiIndex, QuadratureSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

fn disc_oracle(n: u32) -> ExactScalar {
    q(1, (n as i64 + 1) * (n as i64 + 2))
}

fn ball_oracle(alpha: &MultiIndex, j: usize) -> ExactScalar {
    let other = alpha.get(1 - j) as i64;
    let t = alpha.degree() as i64;
    q(other + 2, (t + 2) * (t + 3))
}

fn rand_holo(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> HoloPoly {
    let mut terms = Vec::new();
    for alpha in MultiIndex::all_up_to_degree(dim, max_degree) {
        if rng.random_bool(0.5) {
            let c = gauss(rat(rng.random_range(-9..=9), rng.random_range(1..=7)), rat(rng.random_range(-9..=9), 3));
            terms.push((alpha, c));
        }
    }
    HoloPoly::from_terms(dim, terms).unwrap()
}

fn interior_points(rng: &mut ChaCha8Rng, domain: Domain, r: f64, count: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::new();
    while out.len() < count {
        // polar sampling, then rejection for the ball
        let z: Vec<Complex64> = (0..domain.dim())
            .map(|_| Complex64::from_polar(r * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
            .collect();
        if domain != Domain::Ball2 || z.iter().map(|c| c.norm_sqr()).sum::<f64>() <= r * r {
            out.push(z);
        }
    }
    out
}

fn orthogonal_to_holomorphic(domain: Domain, u: &MixedPoly, max_degree: u32) -> bool {
    MultiIndex::all_up_to_degree(domain.dim(), max_degree).into_iter().all(|g| {
        let e = HoloPoly::monomial(g, gauss_real(rat(1, 1))).to_mixed();
        inner_product_mixed(domain, u, &e).unwrap().is_zero()
    })
}

fn within(start: Instant, secs: u64) -> String {
    let t = start.elapsed();
    assert!(t < Duration::from_secs(secs), "took {t:.2?}, limit {secs} s");
    format!("{t:.2?}")
}

fn c1() -> String {
    let start = Instant::now();
    for n in 0..=40 {
        let image = basis_form_solution(Domain::Disc, &mi(&[n]), 0).unwrap();
        assert_eq!(norm_sq_scaled(Domain::Disc, &image).unwrap(), disc_oracle(n), "n = {n}");
    }
    format!("41 image norms exact in {}", within(start, 5))
}

fn c2() -> String {
    let r = hs_partial_sum(Domain::Disc, 98).unwrap();
    let oracle: ExactScalar = (0..=98).map(disc_oracle).sum();
    assert_eq!(oracle, q(99, 100));
    assert_eq!(r.partial_sum, oracle);
    assert_eq!(r.verdict, Verdict::ConvergentWithLimit { limit: ExactScalar::one() });
    "S(98) = 99/100, limit 1".into()
}

fn box_check(domain: Domain, oracle: impl Fn(&MultiIndex, usize) -> ExactScalar, threshold: i64) -> String {
    let mut count = 0;
    for alpha in MultiIndex::all_in_box(2, 30) {
        for j in 0..2 {
            assert_eq!(s1_image_norm_sq(domain, &alpha, j).unwrap(), oracle(&alpha, j), "{alpha}, j={j}");
            count += 1;
        }
    }
    let r = hs_partial_sum(domain, 50).unwrap();
    let expected: ExactScalar = MultiIndex::all_in_box(2, 50)
        .iter()
        .flat_map(|a| [oracle(a, 0), oracle(a, 1)])
        .sum();
    assert_eq!(r.partial_sum, expected);
    assert!(r.partial_sum > q(threshold, 1));
    assert_eq!(r.verdict, Verdict::DivergentTrend);
    format!("{count} norms exact; S(50) = {:.4} > {threshold}; divergent", r.partial_sum.to_f64())
}

fn c3() -> String {
    let s = box_check(Domain::Polydisc2, |a, j| disc_oracle(a.get(j)), 50);
    // Σ over the box of both coordinates: 2(N+1)(1 − 1/(N+2))
    assert_eq!(hs_partial_sum(Domain::Polydisc2, 50).unwrap().partial_sum, q(2 * 51 * 51, 52));
    s
}

fn c4() -> String {
    box_check(Domain::Ball2, ball_oracle, 25)
}

fn c5() -> String {
    let g = pairwise_orthogonality(Domain::Disc, 20).unwrap();
    assert_eq!(g.len(), 21);
    for (m, row) in g.iter().enumerate() {
        for (n, e) in row.iter().enumerate() {
            if m == n {
                let d = e.collapse().and_then(|c| c.as_real()).unwrap();
                assert_eq!(d, disc_oracle(n as u32));
            } else {
                assert!(e.is_zero(), "({m},{n})");
            }
        }
    }
    "21x21 Gram matrix exactly diagonal".into()
}

fn c6() -> String {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for domain in Domain::ALL {
        for _ in 0..100 {
            let coeffs: Vec<HoloPoly> = (0..domain.dim()).map(|_| rand_holo(&mut rng, domain.dim(), 5)).collect();
            let g = Form01::new(domain, coeffs.clone()).unwrap();
            let u = multiplier_solution(domain, &g).unwrap();
            for (j, c) in coeffs.iter().enumerate() {
                assert_eq!(u.d_dzbar(j), c.to_mixed());
            }
            assert!(orthogonal_to_holomorphic(domain, &u, 7));
        }
    }
    format!("300 random forms exact in {}", within(start, 30))
}

fn c7() -> String {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut worst: f64 = 0.0;
    for domain in Domain::ALL {
        let (spec, r) = match domain {
            Domain::Disc => (QuadratureSpec::polar(48, 256), 0.9),
            _ => (QuadratureSpec::polar(24, 64), 0.6),
        };
        let coeffs: Vec<HoloPoly> = (0..domain.dim()).map(|_| rand_holo(&mut rng, domain.dim(), 3)).collect();
        let u = multiplier_solution(domain, &Form01::new(domain, coeffs.clone()).unwrap())
            .unwrap()
            .to_float();
        let gf: Vec<_> = coeffs.iter().map(HoloPoly::to_float).collect();
        for z in interior_points(&mut rng, domain, r, 20) {
            let err = (integral_solution_eval(domain, &gf, &z, &spec).unwrap() - u.eval(&z)).norm();
            assert!(err <= 1e-5, "{domain} at {z:?}: {err:e}");
            worst = worst.max(err);
        }
    }
    format!("max |integral - multiplier| = {worst:.1e} in {}", within(start, 120))
}

fn c8() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut worst: f64 = 0.0;
    for domain in Domain::ALL {
        let (spec, tol) = match domain {
            Domain::Disc => (QuadratureSpec::polar(32, 64), 1e-6),
            _ => (QuadratureSpec::polar(16, 32), 1e-5),
        };
        for _ in 0..4 {
            let f = rand_holo(&mut rng, domain.dim(), 5);
            for z in interior_points(&mut rng, domain, 0.5, 5) {
                let res = reproducing_check(domain, &f, &z, &spec).unwrap().norm();
                assert!(res <= tol, "{domain}: residual {res:e}");
                worst = worst.max(res);
            }
        }
    }
    format!("max residual {worst:.1e}")
}

fn c9() -> String {
    for rho in [0.1, 0.5, 0.9, 0.99] {
        let v = poisson_check(rho, 0.3, 4096).unwrap();
        assert!((v - 2.0 * PI).abs() <= 1e-8, "rho={rho}: {v}");
    }
    "2π within 1e-8".into()
}

fn c10() -> String {
    // π²·Σ 1/(k+1)² → π⁴/6
    let series = PI * PI * (1..200_000).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>();
    let bound = PI.powi(4) / 6.0;
    assert!((series - bound).abs() < 1e-3);
    let est: Vec<f64> = [11, 12]
        .iter()
        .map(|&s| {
            kernel_l2_integral(Domain::Disc, &QuadratureSpec::monte_carlo(10_000_000, s), &[0.999]).unwrap()[0]
                .1
                .value
                .re
        })
        .collect();
    assert!(est.iter().all(|&v| v <= bound), "{est:?}");
    assert!((est[0] - est[1]).abs() <= 0.05 * est[0].max(est[1]));
    let mut detail = format!("disc {:.3}/{:.3} <= {bound:.4}", est[0], est[1]);
    for domain in [Domain::Polydisc2, Domain::Ball2] {
        let e = kernel_l2_integral(domain, &QuadratureSpec::monte_carlo(10_000_000, 13), &[0.9, 0.99, 0.999]).unwrap();
        let v: Vec<f64> = e.iter().map(|x| x.1.value.re).collect();
        assert!(v[1] >= 1.5 * v[0] && v[2] >= 1.5 * v[1], "{domain}: {v:?}");
        detail += &format!("; {domain} {v:.1?}");
    }
    detail
}

fn c11() -> String {
    for domain in [Domain::Polydisc2, Domain::Ball2] {
        for alpha in [mi(&[0, 0]), mi(&[1, 0]), mi(&[1, 1])] {
            let w = HoloPoly::monomial(alpha.clone(), gauss_real(rat(1, 1)));
            let u = nn_form_solution(domain, &NNForm { density: w.clone() }).unwrap();
            for uj in &u {
                assert!(orthogonal_to_holomorphic(domain, uj, alpha.degree() + 2));
            }
            // dz̄_j moves past n dz's and j−1 dz̄'s: sign (−1)^{n+j−1}, n = 2
            let sum = &u[0].d_dzbar(0) - &u[1].d_dzbar(1);
            assert_eq!(sum, w.to_mixed(), "{domain}, z^{alpha}");
        }
    }
    "perpendicular and reassembles to the density on bidisc and ball".into()
}

fn c12() -> String {
    let z = HoloPoly::coordinate(1, 0);
    let c = gauss(rat(1, 2), rat(-1, 3));
    for n in 0..=3u32 {
        let g = Form01::single(Domain::Disc, 0, z.pow(n)).unwrap();
        let u = multiplier_solution(Domain::Disc, &g).unwrap();
        // F = z^k: F*g = z^{kn} · k z̄^{k−1}
        for k in 1..=2u32 {
            let lhs = dbar_apply(&compose_solution(&u, &[z.pow(k)]).unwrap());
            let rhs = MixedPoly::term(mi(&[k * n]), mi(&[k - 1]), gauss_real(rat(k as i64, 1)));
            assert_eq!(lhs[0], rhs, "z^{k}, n={n}");
        }
        // F = cz: F*g = cⁿ zⁿ · c̄
        let lhs = dbar_apply(&compose_solution(&u, &[z.scale(&c)]).unwrap());
        let mut cn = gauss_real(rat(1, 1));
        for _ in 0..n {
            cn *= c.clone();
        }
        let rhs = MixedPoly::term(mi(&[n]), mi(&[0]), cn * c.conj());
        assert_eq!(lhs[0], rhs, "cz, n={n}");
    }
    "dbar(u o F) = F*g for identity, z^2, cz; n <= 3".into()
}

fn main() {
    let criteria: [(&str, fn() -> String); 12] = [
        ("disc HS norms from images", c1),
        ("disc HS partial sum", c2),
        ("bidisc norms and divergence", c3),
        ("ball norms and divergence", c4),
        ("pairwise orthogonality", c5),
        ("dbar exactness", c6),
        ("representation equivalence", c7),
        ("reproducing property", c8),
        ("Poisson identity", c9),
        ("kernel L2 bound and divergence", c10),
        ("(n,n)-form solution", c11),
        ("pullback identity", c12),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", k + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
