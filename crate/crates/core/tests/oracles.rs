use std::f64::consts::PI;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use bergman_dbar::dbar::{integral_solution_eval, multiplier_solution, nn_form_solution, pullback_01, Form01, NNForm};
use bergman_dbar::domains::{mixed_moment, orthonormal_basis_element};
use bergman_dbar::exact::{gauss_real, rat};
use bergman_dbar::expr::{parse_form, parse_symbol};
use bergman_dbar::hs::{pairwise_orthogonality, poisson_check};
use bergman_dbar::kernels::{basis_sum_kernel, bergman_kernel, reproducing_check};
use bergman_dbar::projection::{bergman_project_quadrature, project_zbar_monomial};
use bergman_dbar::quadrature::{integrate, integrate_product_domain};
use bergman_dbar::{Domain, ExactScalar, HoloPoly, MixedPoly, MultiIndex, QuadratureSpec};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

#[test]
fn ball_moment_against_monte_carlo() {
    let est = integrate(Domain::Ball2, |z| c(z[0].norm_sqr(), 0.0), &QuadratureSpec::monte_carlo(1_000_000, 42)).unwrap();
    let exact = mixed_moment(Domain::Ball2, &mi(&[1, 0]), &mi(&[1, 0])).unwrap();
    assert_eq!(exact, ExactScalar::new(rat(1, 6), 2));
    assert!((est.value.re - exact.to_f64()).abs() <= 3.0 * est.std_error);
    let vol = integrate(Domain::Ball2, |_| c(1.0, 0.0), &QuadratureSpec::monte_carlo(1_000_000, 42)).unwrap();
    assert!((vol.value.re - PI * PI / 2.0).abs() <= 3.0 * vol.std_error);
}

#[test]
fn product_domain_series_oracle() {
    let rho: f64 = 0.999;
    // ∫∫_{ρD×ρD} |1 − z w̄|⁻² = π² Σ_k ρ^{4k+4}/(k+1)²
    let series = PI * PI * (0..200_000).map(|k| rho.powi(4 * k + 4) / ((k + 1) as f64).powi(2)).sum::<f64>();
    let spec = QuadratureSpec::monte_carlo(10_000_000, 3).with_rho(rho);
    let est = integrate_product_domain(Domain::Disc, |z, w| c(1.0 / (c(1.0, 0.0) - z[0] * w[0].conj()).norm_sqr(), 0.0), &spec)
        .unwrap();
    assert!(
        (est.value.re - series).abs() <= 3.0 * est.std_error,
        "{} vs {series} (se {})",
        est.value.re,
        est.std_error
    );
    assert!(series < PI.powi(4) / 6.0);
}

#[test]
fn kernel_matches_truncated_basis_sum() {
    let points: [(Domain, Vec<Complex64>, Vec<Complex64>); 3] = [
        (Domain::Disc, vec![c(0.6, 0.0)], vec![c(0.1, -0.5)]),
        (Domain::Polydisc2, vec![c(0.5, 0.0), c(0.0, 0.0)], vec![c(0.3, 0.2), c(-0.6, 0.0)]),
        (Domain::Ball2, vec![c(0.4, 0.1), c(0.0, -0.3)], vec![c(-0.2, 0.2), c(0.1, 0.4)]),
    ];
    for (d, z, w) in points {
        let k = bergman_kernel(d, &z, &w).unwrap();
        let s = basis_sum_kernel(d, &z, &w, 60).unwrap();
        assert!((k - s).norm() / k.norm() <= 1e-6, "{d}");
    }
    let k = bergman_kernel(Domain::Polydisc2, &[c(0.5, 0.0), c(0.0, 0.0)], &[c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
    assert_relative_eq!(k.re, 16.0 / (9.0 * PI * PI), max_relative = 1e-14);
}

#[test]
fn reproducing_examples() {
    let fine = QuadratureSpec::polar(200, 200);
    let one = HoloPoly::one(1);
    assert!(reproducing_check(Domain::Disc, &one, &[c(0.3, 0.0)], &fine).unwrap().norm() <= 1e-8);
    let z5 = HoloPoly::coordinate(1, 0).pow(5);
    assert!(reproducing_check(Domain::Disc, &z5, &[c(0.0, 0.5)], &QuadratureSpec::polar(32, 64)).unwrap().norm() <= 1e-6);
    let z1z2 = &HoloPoly::coordinate(2, 0) * &HoloPoly::coordinate(2, 1);
    let r = reproducing_check(Domain::Ball2, &z1z2, &[c(0.3, 0.0), c(0.2, 0.0)], &QuadratureSpec::polar(16, 32)).unwrap();
    assert!(r.norm() <= 1e-5);
}

#[test]
fn projection_by_quadrature_matches_closed_form() {
    let spec = QuadratureSpec::polar(64, 128);
    let u3 = orthonormal_basis_element(Domain::Disc, &mi(&[3])).unwrap().to_float();
    let z = [c(0.4, 0.0)];
    let q = bergman_project_quadrature(Domain::Disc, |w| w[0].conj() * u3.eval(w), &z, &spec).unwrap();
    let closed = project_zbar_monomial(Domain::Disc, 0, &mi(&[3])).unwrap().to_float().eval(&z);
    // [9/(4π)]^{1/2} z² at z = 0.4
    assert_abs_diff_eq!(closed.re, (9.0 / (4.0 * PI)).sqrt() * 0.16, epsilon = 1e-14);
    assert!((q - closed).norm() <= 1e-6);
    let zbar = bergman_project_quadrature(Domain::Disc, |w| w[0].conj(), &[c(0.2, 0.0)], &spec).unwrap();
    assert!(zbar.norm() <= 1e-6);
}

#[test]
fn integral_representation_examples() {
    let spec = QuadratureSpec::polar(48, 256);
    let g = [orthonormal_basis_element(Domain::Disc, &mi(&[1])).unwrap().to_float()];
    let v = integral_solution_eval(Domain::Disc, &g, &[c(0.5, 0.0)], &spec).unwrap();
    assert_abs_diff_eq!(v.re, (2.0 / PI).sqrt() * 0.25 - 1.0 / (2.0 * PI).sqrt(), epsilon = 1e-6);
    assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-6);

    let e = orthonormal_basis_element(Domain::Ball2, &mi(&[1, 0])).unwrap();
    let form = Form01::new(Domain::Ball2, vec![e.body.clone(), HoloPoly::zero(2)]).unwrap();
    let exact = multiplier_solution(Domain::Ball2, &form).unwrap().to_float().scaled(e.scale_f64());
    let gf = [e.to_float(), HoloPoly::zero(2).to_float()];
    let z = [c(0.3, 0.0), c(0.1, 0.0)];
    let v = integral_solution_eval(Domain::Ball2, &gf, &z, &QuadratureSpec::polar(24, 64)).unwrap();
    assert!((v - exact.eval(&z)).norm() <= 1e-5);
}

#[test]
fn documented_solutions() {
    // S₁(u₂ dz̄) = √(3/π) z²z̄ − (2/√(3π)) z
    let u = parse_symbol(Domain::Disc, "u(2)").unwrap();
    let s = multiplier_solution(Domain::Disc, &Form01::single(Domain::Disc, 0, u.body.to_holo().unwrap()).unwrap()).unwrap();
    let f = s.to_float().scaled(u.scale_f64());
    let z = c(0.3, -0.2);
    let want = (3.0 / PI).sqrt() * z * z * z.conj() - 2.0 / (3.0 * PI).sqrt() * z;
    assert!((f.eval(&[z]) - want).norm() < 1e-14);

    let z1 = HoloPoly::coordinate(2, 0);
    let u = nn_form_solution(Domain::Polydisc2, &NNForm { density: z1.clone() }).unwrap();
    let half = gauss_real(rat(1, 2));
    let u1 = (&z1.to_mixed().mul_zbar(0) - &HoloPoly::constant(2, half.clone()).to_mixed()).scale(&half);
    let u2 = z1.to_mixed().mul_zbar(1).scale(&-half);
    assert_eq!(u, vec![u1, u2]);

    let sq = vec![HoloPoly::coordinate(1, 0).pow(2)];
    let pb = pullback_01(&sq, &Form01::single(Domain::Disc, 0, HoloPoly::one(1)).unwrap()).unwrap();
    assert_eq!(pb[0], MixedPoly::zbar(1, 0).scale(&gauss_real(rat(2, 1))));
}

#[test]
fn parsed_form_carries_normalization() {
    let f = parse_form(Domain::Disc, "u(3)").unwrap();
    assert_eq!(f.scale_sq, ExactScalar::new(rat(4, 1), -1));
    assert_eq!(f.body[0], HoloPoly::coordinate(1, 0).pow(3));
}

#[test]
fn poisson_and_gram_examples() {
    assert_abs_diff_eq!(poisson_check(0.5, 0.0, 512).unwrap(), 2.0 * PI, epsilon = 1e-10);
    assert_abs_diff_eq!(poisson_check(0.99, 1.0, 4096).unwrap(), 2.0 * PI, epsilon = 1e-8);
    assert_abs_diff_eq!(poisson_check(0.0, 0.0, 8).unwrap(), 2.0 * PI, epsilon = 1e-14);
    let g = pairwise_orthogonality(Domain::Disc, 5).unwrap();
    assert!(g[0][1].is_zero() && g[5][2].is_zero());
    assert_eq!(g[3][3].collapse().and_then(|x| x.as_real()), Some(ExactScalar::from_ratio(1, 20)));
}
