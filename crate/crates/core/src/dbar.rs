//! The canonical solution operator `S₁` to `∂̄u = g` on `(0,1)`-forms with
//! holomorphic polynomial coefficients.
//!
//! For `g = Σ g_j dz̄_j` the function `v = Σ z̄_j g_j` solves `∂̄v = g`, and
//! the canonical (minimal, `⊥ A²`) solution is `v − P(v)`. The same function
//! is the integral `∫ B(z, w) Σ g_j(w)(z̄_j − w̄_j) dλ(w)`, which
//! [`integral_solution_eval`] evaluates by quadrature.

use num_complex::Complex64;

use crate::domains::{inner_product_mixed, orthonormal_basis_element, Domain};
use crate::error::{Error, Result};
use crate::exact::{gauss_real, rat};
use crate::kernels::kernel_unchecked;
use crate::poly::{FloatPoly, HoloPoly, MixedPoly, MultiIndex, Scaled};
use crate::projection::bergman_project_exact;
use crate::quadrature::{integrate, QuadratureSpec};

/// Degree cap for symbolic composition `g ∘ F`.
pub const COMPOSE_DEGREE_CAP: u32 = 64;

/// `g = Σ g_j dz̄_j` with holomorphic polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form01 {
    coefficients: Vec<HoloPoly>,
}

impl Form01 {
    pub fn new(domain: Domain, coefficients: Vec<HoloPoly>) -> Result<Self> {
        if coefficients.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: coefficients.len(),
            });
        }
        for c in &coefficients {
            if c.dim() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    got: c.dim(),
                });
            }
        }
        Ok(Self { coefficients })
    }

    pub fn zero(domain: Domain) -> Self {
        Self {
            coefficients: vec![HoloPoly::zero(domain.dim()); domain.dim()],
        }
    }

    /// `h dz̄_j`.
    pub fn single(domain: Domain, j: usize, h: HoloPoly) -> Result<Self> {
        domain.check_coordinate(j)?;
        let mut coefficients = vec![HoloPoly::zero(domain.dim()); domain.dim()];
        coefficients[j] = h;
        Self::new(domain, coefficients)
    }

    pub fn coefficients(&self) -> &[HoloPoly] {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn degree(&self) -> u32 {
        self.coefficients.iter().filter_map(HoloPoly::degree).max().unwrap_or(0)
    }
}

/// Holomorphic `(n,n)`-form `ω̃ dz₁∧…∧dz_n∧dz̄₁∧…∧dz̄_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NNForm {
    pub density: HoloPoly,
}

fn check_form(domain: Domain, g: &Form01) -> Result<()> {
    if g.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: g.dim(),
        });
    }
    Ok(())
}

/// `v = Σ z̄_j g_j`.
fn multiplier(domain: Domain, g: &Form01) -> MixedPoly {
    g.coefficients()
        .iter()
        .enumerate()
        .fold(MixedPoly::zero(domain.dim()), |acc, (j, gj)| &acc + &gj.to_mixed().mul_zbar(j))
}

/// `(I − P) f`.
pub fn orthogonal_part(domain: Domain, f: &MixedPoly) -> Result<MixedPoly> {
    Ok(f - &bergman_project_exact(domain, f)?.to_mixed())
}

/// `S₁(g) = v − P(v)` with `v = Σ z̄_j g_j`, exact. Verifies `∂̄u = g` and
/// `u ⊥ z^α` for every `|α| ≤ deg(g) + 2` before returning.
pub fn multiplier_solution(domain: Domain, g: &Form01) -> Result<MixedPoly> {
    check_form(domain, g)?;
    let u = orthogonal_part(domain, &multiplier(domain, g))?;
    let residual = dbar_apply(&u);
    for (j, (r, gj)) in residual.iter().zip(g.coefficients()).enumerate() {
        if *r != gj.to_mixed() {
            return Err(Error::Consistency(format!("dbar residual in coordinate {j}")));
        }
    }
    let bound = g.degree() + 2;
    if let Some(alpha) = first_non_orthogonal(domain, &u, bound)? {
        return Err(Error::Consistency(format!("solution not orthogonal to z^{alpha}")));
    }
    Ok(u)
}

/// First `z^α` with `|α| ≤ max_degree` that `u` fails to be orthogonal to.
pub fn first_non_orthogonal(domain: Domain, u: &MixedPoly, max_degree: u32) -> Result<Option<MultiIndex>> {
    for alpha in MultiIndex::all_up_to_degree(domain.dim(), max_degree) {
        let e = HoloPoly::monomial(alpha.clone(), gauss_real(rat(1, 1))).to_mixed();
        if !inner_product_mixed(domain, u, &e)?.is_zero() {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

/// `S₁(e_α dz̄_j)` for the orthonormal basis element `e_α`.
pub fn basis_form_solution(domain: Domain, alpha: &MultiIndex, j: usize) -> Result<Scaled<MixedPoly>> {
    domain.check_coordinate(j)?;
    let e = orthonormal_basis_element(domain, alpha)?;
    let form = Form01::single(domain, j, e.body.clone())?;
    let u = multiplier_solution(domain, &form)?;
    Ok(Scaled::new(e.scale_sq, u))
}

/// `S₁` applied to a form whose coefficients all share one radical factor.
pub fn multiplier_solution_scaled(domain: Domain, g: &Scaled<Form01>) -> Result<Scaled<MixedPoly>> {
    g.try_map(|body| multiplier_solution(domain, body))
}

/// `∫_Ω B(z, w) Σ g_j(w)(z̄_j − w̄_j) dλ(w)` by quadrature; `g` holds the
/// floating images of the coefficients.
pub fn integral_solution_eval(domain: Domain, g: &[FloatPoly], z: &[Complex64], spec: &QuadratureSpec) -> Result<Complex64> {
    domain.check_point(z)?;
    if g.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: g.len(),
        });
    }
    let est = integrate(
        domain,
        |w| {
            let pairing: Complex64 = g
                .iter()
                .enumerate()
                .map(|(j, gj)| gj.eval(w) * (z[j].conj() - w[j].conj()))
                .sum();
            kernel_unchecked(domain, z, w) * pairing
        },
        spec,
    )?;
    Ok(est.value)
}

/// `∂̄u = Σ_j (∂u/∂z̄_j) dz̄_j`, returned coefficient-wise.
pub fn dbar_apply(u: &MixedPoly) -> Vec<MixedPoly> {
    (0..u.dim()).map(|j| u.d_dzbar(j)).collect()
}

/// Sign of the permutation sorting `seq` into increasing order, or `None`
/// when an entry repeats (the wedge product vanishes).
fn wedge_sign(seq: &[usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            match seq[i].cmp(&seq[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(sign)
}

/// Sign `ε` with `dz̄_k ∧ dz₁∧…∧dz_n∧dz̄₁∧…[dz̄_j]…∧dz̄_n = ε · (top form)`.
/// 1-forms are numbered `dz_i ↦ i`, `dz̄_i ↦ n + i` (0-based).
pub fn wedge_insertion_sign(n: usize, k: usize, deleted: usize) -> Option<i64> {
    let mut seq = vec![n + k];
    seq.extend(0..n);
    seq.extend((0..n).filter(|&i| i != deleted).map(|i| n + i));
    wedge_sign(&seq)
}

/// Coefficient sign `(−1)^{n+j−1}` for the 1-based slot `j`.
fn slot_sign(n: usize, j: usize) -> i64 {
    if (n + j - 1).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Components `u_j = ((−1)^{n+j−1}/n)(z̄_j ω̃ − P(z̄_j ω̃))` of the canonical
/// solution to `∂̄u = ω` for a holomorphic `(n,n)`-form. Each `u_j` is
/// checked to be orthogonal to `A²`, and [`nn_dbar_reassemble`] must give
/// back `ω̃`.
pub fn nn_form_solution(domain: Domain, omega: &NNForm) -> Result<Vec<MixedPoly>> {
    let n = domain.dim();
    if omega.density.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: omega.density.dim(),
        });
    }
    let bound = omega.density.degree().unwrap_or(0) + 2;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let coef = gauss_real(rat(slot_sign(n, j + 1), n as i64));
        let uj = orthogonal_part(domain, &omega.density.to_mixed().mul_zbar(j))?.scale(&coef);
        if let Some(alpha) = first_non_orthogonal(domain, &uj, bound)? {
            return Err(Error::Consistency(format!("u_{} not orthogonal to z^{alpha}", j + 1)));
        }
        out.push(uj);
    }
    let back = nn_dbar_reassemble(&out);
    if back != omega.density.to_mixed() {
        return Err(Error::Consistency("dbar of (n,n-1)-form does not reproduce the density".into()));
    }
    Ok(out)
}

/// Coefficient of the top form in `∂̄u` for `u = Σ_j u_j (dz₁∧…∧dz_n∧dz̄₁∧…[dz̄_j]…∧dz̄_n)`:
/// `Σ_k Σ_j ε(k, j) ∂u_j/∂z̄_k`, where `ε` vanishes unless `k = j`.
pub fn nn_dbar_reassemble(components: &[MixedPoly]) -> MixedPoly {
    let n = components.len();
    let dim = components.first().map_or(0, MixedPoly::dim);
    let mut acc = MixedPoly::zero(dim);
    for k in 0..n {
        for (j, uj) in components.iter().enumerate() {
            if let Some(eps) = wedge_insertion_sign(n, k, j) {
                acc = &acc + &uj.d_dzbar(k).scale(&gauss_real(rat(eps, 1)));
            }
        }
    }
    acc
}

/// Pullback `F*g = Σ_j (Σ_l (g_l∘F) · conj(∂F_l/∂z_j)) dz̄_j` of a
/// holomorphic-coefficient form under a holomorphic polynomial map `F`.
/// The coefficients are generally not holomorphic.
pub fn pullback_01(map: &[HoloPoly], g: &Form01) -> Result<Vec<MixedPoly>> {
    let n = g.dim();
    if map.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: map.len() });
    }
    let composed = g
        .coefficients()
        .iter()
        .map(|gl| gl.compose(map, COMPOSE_DEGREE_CAP).map(|p| p.to_mixed()))
        .collect::<Result<Vec<_>>>()?;
    let dim = map.first().map_or(n, HoloPoly::dim);
    Ok((0..dim)
        .map(|j| {
            map.iter()
                .zip(&composed)
                .fold(MixedPoly::zero(dim), |acc, (fl, gl)| &acc + &(gl * &fl.d_dz(j).conj()))
        })
        .collect())
}

/// `u ∘ F` for a mixed polynomial `u`.
pub fn compose_solution(u: &MixedPoly, map: &[HoloPoly]) -> Result<MixedPoly> {
    u.compose(map, COMPOSE_DEGREE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ExactScalar, GaussRat};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn q(n: i64, d: i64) -> GaussRat {
        gauss_real(rat(n, d))
    }

    #[test]
    fn constant_basis_element_on_disc() {
        // S₁(u₀ dz̄) = z̄/√π
        let u = basis_form_solution(Domain::Disc, &mi(&[0]), 0).unwrap();
        let want = Scaled::new(ExactScalar::pi_power(-1), MixedPoly::zbar(1, 0));
        assert!(u.exact_eq(&want));
    }

    #[test]
    fn zero_form_has_zero_solution() {
        for d in Domain::ALL {
            assert!(multiplier_solution(d, &Form01::zero(d)).unwrap().is_zero());
        }
    }

    #[test]
    fn second_basis_element_on_disc() {
        // √(3/π) z² z̄ − (2/√(3π)) z
        let u = basis_form_solution(Domain::Disc, &mi(&[2]), 0).unwrap();
        let body = &MixedPoly::term(mi(&[2]), mi(&[1]), q(1, 1)) - &MixedPoly::term(mi(&[1]), mi(&[0]), q(2, 3));
        assert!(u.exact_eq(&Scaled::new(ExactScalar::new(rat(3, 1), -1), body)));
    }

    #[test]
    fn dbar_examples() {
        assert_eq!(dbar_apply(&MixedPoly::zbar(1, 0)), vec![HoloPoly::one(1).to_mixed()]);
        let u = MixedPoly::term(mi(&[2]), mi(&[1]), q(1, 1));
        assert_eq!(dbar_apply(&u), vec![HoloPoly::coordinate(1, 0).pow(2).to_mixed()]);
    }

    #[test]
    fn wedge_signs_match_alternating_pattern() {
        for n in 1..=4 {
            for j in 0..n {
                assert_eq!(wedge_insertion_sign(n, j, j), Some(slot_sign(n, j + 1)));
                for k in (0..n).filter(|&k| k != j) {
                    assert_eq!(wedge_insertion_sign(n, k, j), None);
                }
            }
        }
    }

    #[test]
    fn nn_form_examples() {
        // n = j = 1: (−1)^{n+j−1} = −1
        let u = nn_form_solution(Domain::Disc, &NNForm { density: HoloPoly::one(1) }).unwrap();
        assert_eq!(u, vec![MixedPoly::zbar(1, 0).scale(&q(-1, 1))]);

        let u = nn_form_solution(Domain::Ball2, &NNForm { density: HoloPoly::one(2) }).unwrap();
        assert_eq!(u[0], MixedPoly::zbar(2, 0).scale(&q(1, 2)));
        assert_eq!(u[1], MixedPoly::zbar(2, 1).scale(&q(-1, 2)));

        let z1 = HoloPoly::coordinate(2, 0);
        let u = nn_form_solution(Domain::Polydisc2, &NNForm { density: z1.clone() }).unwrap();
        let want1 = &MixedPoly::term(mi(&[1, 0]), mi(&[1, 0]), q(1, 2)) - &HoloPoly::constant(2, q(1, 4)).to_mixed();
        assert_eq!(u[0], want1);
        assert_eq!(u[1], MixedPoly::term(mi(&[1, 0]), mi(&[0, 1]), q(-1, 2)));
    }

    #[test]
    fn pullback_examples() {
        let z = HoloPoly::coordinate(1, 0);
        let g = Form01::new(Domain::Disc, vec![HoloPoly::one(1)]).unwrap();
        assert_eq!(pullback_01(std::slice::from_ref(&z), &g).unwrap(), vec![HoloPoly::one(1).to_mixed()]);
        // F(z) = z²: F*dz̄ = 2 z̄ dz̄
        let pb = pullback_01(&[z.pow(2)], &g).unwrap();
        assert_eq!(pb, vec![MixedPoly::zbar(1, 0).scale(&q(2, 1))]);
        assert!(!pb[0].is_holomorphic());
    }

    #[test]
    fn form_dimension_checked() {
        assert!(Form01::new(Domain::Ball2, vec![HoloPoly::one(2)]).is_err());
        assert!(Form01::single(Domain::Disc, 1, HoloPoly::one(1)).is_err());
    }
}
