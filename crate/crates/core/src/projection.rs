//! The Bergman projection `P : L²(Ω) → A²(Ω)`.
//!
//! On a polynomial in `z, z̄` the projection is a finite moment sum: the
//! term `z^a z̄^b` is orthogonal to every `z^γ` except `γ = a − b`, so
//!
//! ```text
//! P(z^a z̄^b) = (‖z^a‖² / ‖z^{a−b}‖²) z^{a−b}   if a ≥ b componentwise, else 0.
//! ```

use num_complex::Complex64;

use crate::domains::{moment_ratio, Domain};
use crate::error::{Error, Result};
use crate::exact::{factorial, gauss_real, int, ExactScalar};
use crate::kernels::kernel_unchecked;
use crate::poly::{HoloPoly, MixedPoly, MultiIndex, Scaled};
use crate::quadrature::{integrate, QuadratureSpec};

pub fn bergman_project_exact(domain: Domain, f: &MixedPoly) -> Result<HoloPoly> {
    if f.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: f.dim(),
        });
    }
    let mut terms = Vec::new();
    for (k, c) in f.terms() {
        let Some(gamma) = k.alpha.checked_sub(&k.beta) else {
            continue;
        };
        let ratio = moment_ratio(domain, &k.alpha, &gamma)?;
        terms.push((gamma, c * gauss_real(ratio)));
    }
    HoloPoly::from_terms(domain.dim(), terms)
}

pub fn bergman_project_scaled(domain: Domain, f: &Scaled<MixedPoly>) -> Result<Scaled<HoloPoly>> {
    f.try_map(|body| bergman_project_exact(domain, body))
}

/// `P(z̄_j e_α)` from the closed forms:
///
/// * disc: `[n² / ((n+1)π)]^{1/2} z^{n−1}`
/// * bidisc: `[(n₁+1)(n₂+1)]^{1/2}/π · n_j/(n_j+1) · z^{α−e_j}`
/// * ball: `[(|α|+2)!]^{1/2} / (π (α!)^{1/2}) · n_j/(|α|+2) · z^{α−e_j}`
///
/// Zero when `α_j = 0`.
pub fn project_zbar_monomial(domain: Domain, j: usize, alpha: &MultiIndex) -> Result<Scaled<HoloPoly>> {
    domain.check_index(alpha)?;
    domain.check_coordinate(j)?;
    let dim = domain.dim();
    let nj = alpha.get(j) as i64;
    if nj == 0 {
        return Ok(Scaled::unscaled(HoloPoly::zero(dim)));
    }
    let lowered = alpha
        .checked_sub(&MultiIndex::unit(dim, j))
        .expect("positive exponent");
    let body = HoloPoly::monomial(lowered, gauss_real(int(1)));
    let scale_sq = match domain {
        Domain::Disc => ExactScalar::new(int(nj * nj) / int(nj + 1), -1),
        Domain::Polydisc2 => {
            let norm = ExactScalar::new(
                int((alpha.get(0) as i64 + 1) * (alpha.get(1) as i64 + 1)),
                -2,
            );
            let factor = int(nj) / int(nj + 1);
            norm.scale(&(&factor * &factor))
        }
        Domain::Ball2 => {
            let total = alpha.degree() + 2;
            let norm = ExactScalar::new(
                num_rational::BigRational::new(
                    factorial(total),
                    factorial(alpha.get(0)) * factorial(alpha.get(1)),
                ),
                -2,
            );
            let factor = int(nj) / int(total as i64);
            norm.scale(&(&factor * &factor))
        }
    };
    Ok(Scaled::new(scale_sq, body))
}

/// `∫_Ω B(z, w) f(w) dλ(w)` by quadrature.
pub fn bergman_project_quadrature<F>(domain: Domain, f: F, z: &[Complex64], spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    domain.check_point(z)?;
    let est = integrate(domain, |w| kernel_unchecked(domain, z, w) * f(w), spec)?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{inner_product_mixed, orthonormal_basis_element};
    use crate::exact::{rat, GaussRat};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn zbar_z_on_disc_projects_to_half() {
        let zzbar = HoloPoly::coordinate(1, 0).to_mixed().mul_zbar(0);
        let p = bergman_project_exact(Domain::Disc, &zzbar).unwrap();
        assert_eq!(p, HoloPoly::constant(1, gauss_real(rat(1, 2))));
    }

    #[test]
    fn zbar_alone_projects_to_zero() {
        assert!(bergman_project_exact(Domain::Disc, &MixedPoly::zbar(1, 0)).unwrap().is_zero());
    }

    #[test]
    fn holomorphic_input_is_fixed() {
        let h = &HoloPoly::coordinate(2, 0).pow(3) + &HoloPoly::constant(2, GaussRat::new(rat(1, 3), rat(2, 1)));
        for d in [Domain::Polydisc2, Domain::Ball2] {
            assert_eq!(bergman_project_exact(d, &h.to_mixed()).unwrap(), h);
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = project_zbar_monomial(Domain::Disc, 0, &mi(&[2])).unwrap();
        assert_eq!(p.scale_sq, ExactScalar::new(rat(4, 3), -1));
        assert_eq!(p.body, HoloPoly::coordinate(1, 0));
        assert!(project_zbar_monomial(Domain::Disc, 0, &mi(&[0])).unwrap().body.is_zero());
        // √24/(4π) z₂
        let p = project_zbar_monomial(Domain::Ball2, 0, &mi(&[1, 1])).unwrap();
        let want = Scaled::new(ExactScalar::new(rat(24, 16), -2), HoloPoly::coordinate(2, 1));
        assert!(p.exact_eq(&want));
    }

    #[test]
    fn closed_form_matches_moment_projection() {
        for domain in Domain::ALL {
            for alpha in MultiIndex::all_up_to_degree(domain.dim(), 20) {
                let e = orthonormal_basis_element(domain, &alpha).unwrap().to_mixed();
                for j in 0..domain.dim() {
                    let generic = bergman_project_scaled(domain, &e.map(|b| b.mul_zbar(j))).unwrap();
                    let closed = project_zbar_monomial(domain, j, &alpha).unwrap();
                    assert!(generic.exact_eq(&closed), "{domain} {alpha} j={j}");
                }
            }
        }
    }

    #[test]
    fn residual_is_orthogonal() {
        let f = &MixedPoly::term(mi(&[3, 1]), mi(&[1, 1]), GaussRat::new(rat(2, 5), rat(-1, 1)))
            + &MixedPoly::term(mi(&[0, 2]), mi(&[1, 0]), GaussRat::new(rat(1, 1), rat(0, 1)));
        for domain in [Domain::Polydisc2, Domain::Ball2] {
            let r = &f - &bergman_project_exact(domain, &f).unwrap().to_mixed();
            for a in MultiIndex::all_up_to_degree(2, 6) {
                let e = HoloPoly::monomial(a, GaussRat::new(rat(1, 1), rat(0, 1))).to_mixed();
                assert!(inner_product_mixed(domain, &r, &e).unwrap().is_zero());
            }
        }
    }
}
