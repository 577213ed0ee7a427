//! Bergman kernels of the model domains.
//!
//! * disc: `B(z, w) = 1 / (π (1 − z w̄)²)`
//! * bidisc: the product of two disc kernels
//! * ball in C²: `B(z, w) = 2 / (π² (1 − ⟨z, w⟩)³)`, `⟨z, w⟩ = z₁w̄₁ + z₂w̄₂`
//!
//! The ball constant is `n!/πⁿ` with exponent `n + 1` for `n = 2`; it equals
//! `1/vol(B²)` at the origin and matches the basis-sum expansion
//! `Σ e_α(z) conj(e_α(w))`, which the tests check independently.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domains::{orthonormal_basis_element, Domain};
use crate::error::{Error, Result};
use crate::poly::{HoloPoly, MultiIndex};
use crate::quadrature::{integrate, QuadratureSpec};

/// Smallest admissible `|1 − ⟨z, w⟩|` (per factor on the bidisc).
pub const NEAR_SINGULAR: f64 = 1e-14;

fn denominator_guard(d: Complex64) -> Result<Complex64> {
    if d.norm() < NEAR_SINGULAR {
        Err(Error::NearSingular(d.norm()))
    } else {
        Ok(d)
    }
}

fn disc_factor(z: Complex64, w: Complex64) -> Result<Complex64> {
    let d = denominator_guard(Complex64::new(1.0, 0.0) - z * w.conj())?;
    Ok(1.0 / (PI * d * d))
}

/// `B(z, w)` for interior points `z, w`.
pub fn bergman_kernel(domain: Domain, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    domain.check_point(z)?;
    domain.check_point(w)?;
    match domain {
        Domain::Disc => disc_factor(z[0], w[0]),
        Domain::Polydisc2 => Ok(disc_factor(z[0], w[0])? * disc_factor(z[1], w[1])?),
        Domain::Ball2 => {
            let inner = z[0] * w[0].conj() + z[1] * w[1].conj();
            let d = denominator_guard(Complex64::new(1.0, 0.0) - inner)?;
            Ok(2.0 / (PI * PI * d * d * d))
        }
    }
}

/// Truncated expansion `Σ_{|α| ≤ max_degree} e_α(z) conj(e_α(w))`.
pub fn basis_sum_kernel(domain: Domain, z: &[Complex64], w: &[Complex64], max_degree: u32) -> Result<Complex64> {
    domain.check_point(z)?;
    domain.check_point(w)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for alpha in MultiIndex::all_up_to_degree(domain.dim(), max_degree) {
        let e = orthonormal_basis_element(domain, &alpha)?.to_float();
        acc += e.eval(z) * e.eval(w).conj();
    }
    Ok(acc)
}

/// `∫_Ω B(z, w) f(w) dλ(w) − f(z)` for a holomorphic polynomial `f`.
pub fn reproducing_check(domain: Domain, f: &HoloPoly, z: &[Complex64], spec: &QuadratureSpec) -> Result<Complex64> {
    domain.check_point(z)?;
    if f.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: f.dim(),
        });
    }
    let ff = f.to_float();
    let est = integrate(domain, |w| kernel_unchecked(domain, z, w) * ff.eval(w), spec)?;
    Ok(est.value - ff.eval(z))
}

/// Kernel without membership checks, for quadrature inner loops whose nodes
/// are interior by construction. Returns NaN at a pole so the quadrature
/// layer reports the point.
pub(crate) fn kernel_unchecked(domain: Domain, z: &[Complex64], w: &[Complex64]) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match domain {
        Domain::Disc => {
            let d = one - z[0] * w[0].conj();
            1.0 / (PI * d * d)
        }
        Domain::Polydisc2 => {
            let d1 = one - z[0] * w[0].conj();
            let d2 = one - z[1] * w[1].conj();
            1.0 / (PI * PI * d1 * d1 * d2 * d2)
        }
        Domain::Ball2 => {
            let d = one - z[0] * w[0].conj() - z[1] * w[1].conj();
            2.0 / (PI * PI * d * d * d)
        }
    }
}
