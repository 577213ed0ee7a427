//! Model domains, monomial moments, orthonormal bases and exact inner
//! products.
//!
//! Every domain here is invariant under the torus action
//! `z_j ↦ e^{iθ_j} z_j`, so `∫ z^α z̄^β dλ` vanishes unless `α = β`. The
//! diagonal moments are:
//!
//! | domain | `‖z^α‖²` |
//! |---|---|
//! | unit disc `D` | `π / (n+1)` |
//! | bidisc `D^d` | `π^d / ∏ (α_j+1)` |
//! | unit ball `B^d` | `π^d α! / (|α|+d)!` |
//!
//! All of them carry the factor `π^dim`, so every exact inner product on a
//! fixed domain is a Gaussian rational times `π^dim`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, ExactComplex, ExactScalar, GaussRat};
use crate::poly::{HoloPoly, MixedPoly, MultiIndex, Scaled};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Unit disc in C.
    Disc,
    /// Unit bidisc `{|z_1| < 1, |z_2| < 1}` in C².
    Polydisc2,
    /// Unit ball `{|z_1|² + |z_2|² < 1}` in C².
    Ball2,
}

impl Domain {
    pub const ALL: [Domain; 3] = [Domain::Disc, Domain::Polydisc2, Domain::Ball2];

    pub fn dim(self) -> usize {
        match self {
            Domain::Disc => 1,
            Domain::Polydisc2 | Domain::Ball2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Disc => "disc",
            Domain::Polydisc2 => "polydisc2",
            Domain::Ball2 => "ball2",
        }
    }

    /// Lebesgue volume, exact.
    pub fn volume(self) -> ExactScalar {
        monomial_norm_sq(self, &MultiIndex::zero(self.dim())).expect("valid zero index")
    }

    /// Volume of the dilate `ρ·Ω`.
    pub fn volume_scaled(self, rho: f64) -> f64 {
        self.volume().to_f64() * rho.powi(2 * self.dim() as i32)
    }

    /// Strict membership in `ρ·Ω`.
    pub fn contains(self, z: &[Complex64], rho: f64) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Disc | Domain::Polydisc2 => z.iter().all(|c| c.norm() < rho),
            Domain::Ball2 => z.iter().map(Complex64::norm_sqr).sum::<f64>() < rho * rho,
        }
    }

    pub fn check_index(self, alpha: &MultiIndex) -> Result<()> {
        if alpha.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: alpha.dim(),
            })
        }
    }

    pub fn check_coordinate(self, j: usize) -> Result<()> {
        if j < self.dim() {
            Ok(())
        } else {
            Err(Error::CoordinateOutOfRange { index: j, dim: self.dim() })
        }
    }

    pub fn check_point(self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        if !self.contains(z, 1.0) {
            return Err(Error::OutsideDomain(z.iter().map(|c| (c.re, c.im)).collect()));
        }
        Ok(())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "disc" | "d" => Ok(Domain::Disc),
            "polydisc2" | "polydisc" | "bidisc" | "d2" => Ok(Domain::Polydisc2),
            "ball2" | "ball" | "b2" => Ok(Domain::Ball2),
            other => Err(Error::Parse(format!("unknown domain {other:?}"))),
        }
    }
}

fn big(n: u32) -> BigInt {
    BigInt::from(n)
}

/// `‖z^α‖² = ∫_Ω |z^α|² dλ`, exact.
pub fn monomial_norm_sq(domain: Domain, alpha: &MultiIndex) -> Result<ExactScalar> {
    domain.check_index(alpha)?;
    let d = domain.dim() as u32;
    let rational = match domain {
        Domain::Disc | Domain::Polydisc2 => {
            let den = alpha.entries().iter().fold(BigInt::one(), |acc, &a| acc * big(a + 1));
            BigRational::new(BigInt::one(), den)
        }
        Domain::Ball2 => {
            let num = alpha.entries().iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
            BigRational::new(num, factorial(alpha.degree() + d))
        }
    };
    Ok(ExactScalar::new(rational, d as i32))
}

/// `∫_Ω z^α z̄^β dλ`: zero off the diagonal, `‖z^α‖²` on it.
pub fn mixed_moment(domain: Domain, alpha: &MultiIndex, beta: &MultiIndex) -> Result<ExactScalar> {
    domain.check_index(alpha)?;
    domain.check_index(beta)?;
    if alpha != beta {
        return Ok(ExactScalar::zero());
    }
    monomial_norm_sq(domain, alpha)
}

/// The normalized monomial `e_α = z^α / ‖z^α‖`, stored as
/// `sqrt(1/‖z^α‖²) · z^α`.
pub fn orthonormal_basis_element(domain: Domain, alpha: &MultiIndex) -> Result<Scaled<HoloPoly>> {
    let n2 = monomial_norm_sq(domain, alpha)?;
    Ok(Scaled::new(n2.recip(), HoloPoly::monomial(alpha.clone(), GaussRat::one())))
}

/// `⟨f, g⟩ = ∫_Ω f ḡ dλ`, exact; the result carries `π^dim`.
pub fn inner_product_mixed(domain: Domain, f: &MixedPoly, g: &MixedPoly) -> Result<ExactComplex> {
    let dim = domain.dim();
    for p in [f, g] {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    // f ḡ = Σ c conj(d) z^{α+δ} z̄^{β+γ}; only α+δ = β+γ survives.
    let mut acc = GaussRat::zero();
    for (fk, c) in f.terms() {
        for (gk, d) in g.terms() {
            let a = &fk.alpha + &gk.beta;
            let b = &fk.beta + &gk.alpha;
            if a != b {
                continue;
            }
            let m = monomial_norm_sq(domain, &a)?;
            acc += (c * d.conj()).scale(m.rational().clone());
        }
    }
    Ok(ExactComplex::new(acc, dim as i32))
}

/// `⟨sqrt(a) p, sqrt(b) q⟩ = sqrt(ab) ⟨p, q⟩`, returned unevaluated.
pub fn inner_product_scaled(
    domain: Domain,
    f: &Scaled<MixedPoly>,
    g: &Scaled<MixedPoly>,
) -> Result<Scaled<ExactComplex>> {
    let ip = inner_product_mixed(domain, &f.body, &g.body)?;
    Ok(Scaled::new(&f.scale_sq * &g.scale_sq, ip))
}

/// `‖sqrt(a) p‖² = a ⟨p, p⟩`, exact and real.
pub fn norm_sq_scaled(domain: Domain, f: &Scaled<MixedPoly>) -> Result<ExactScalar> {
    let ip = inner_product_mixed(domain, &f.body, &f.body)?;
    let re = ip
        .as_real()
        .ok_or_else(|| Error::Consistency("squared norm has an imaginary part".into()))?;
    Ok(&f.scale_sq * &re)
}

impl Scaled<ExactComplex> {
    /// The exact value when `sqrt(scale_sq)` is rational up to a power of π.
    pub fn collapse(&self) -> Option<ExactComplex> {
        if self.body.is_zero() {
            return Some(ExactComplex::zero());
        }
        let root = self.scale_sq.exact_sqrt()?;
        Some(self.body.scale(&root))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        self.body.to_c64() * self.scale_f64()
    }
}

/// Ratio `‖z^α‖² / ‖z^γ‖²`; both moments carry the same power of π.
pub fn moment_ratio(domain: Domain, alpha: &MultiIndex, gamma: &MultiIndex) -> Result<BigRational> {
    let a = monomial_norm_sq(domain, alpha)?;
    let g = monomial_norm_sq(domain, gamma)?;
    Ok(a.rational() / g.rational())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn norm_examples() {
        assert_eq!(monomial_norm_sq(Domain::Disc, &mi(&[0])).unwrap(), ExactScalar::pi_power(1));
        assert_eq!(
            monomial_norm_sq(Domain::Polydisc2, &mi(&[1, 2])).unwrap(),
            ExactScalar::new(rat(1, 6), 2)
        );
        assert_eq!(
            monomial_norm_sq(Domain::Ball2, &mi(&[1, 1])).unwrap(),
            ExactScalar::new(rat(1, 24), 2)
        );
        assert_eq!(Domain::Ball2.volume(), ExactScalar::new(rat(1, 2), 2));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert_eq!(
            monomial_norm_sq(Domain::Disc, &mi(&[1, 1])),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
        assert!(mixed_moment(Domain::Ball2, &mi(&[1]), &mi(&[1, 0])).is_err());
    }

    #[test]
    fn moment_examples() {
        assert!(mixed_moment(Domain::Disc, &mi(&[2]), &mi(&[3])).unwrap().is_zero());
        assert_eq!(
            mixed_moment(Domain::Disc, &mi(&[2]), &mi(&[2])).unwrap(),
            ExactScalar::new(rat(1, 3), 1)
        );
        assert_eq!(
            mixed_moment(Domain::Ball2, &mi(&[1, 0]), &mi(&[1, 0])).unwrap(),
            ExactScalar::new(rat(1, 6), 2)
        );
    }

    #[test]
    fn basis_element_examples() {
        let e = orthonormal_basis_element(Domain::Disc, &mi(&[3])).unwrap();
        assert_eq!(e.scale_sq, ExactScalar::new(rat(4, 1), -1));
        let e = orthonormal_basis_element(Domain::Polydisc2, &mi(&[0, 0])).unwrap();
        assert_eq!(e.scale_sq.exact_sqrt(), Some(ExactScalar::pi_power(-1)));
        let e = orthonormal_basis_element(Domain::Ball2, &mi(&[2, 1])).unwrap();
        assert_eq!(e.scale_sq, ExactScalar::new(rat(60, 1), -2));
        assert!((e.scale_f64() - 60f64.sqrt() / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let z = HoloPoly::coordinate(1, 0).to_mixed();
        assert_eq!(
            inner_product_mixed(Domain::Disc, &z, &z).unwrap(),
            ExactComplex::new(GaussRat::new(rat(1, 2), rat(0, 1)), 1)
        );
        let zzbar = z.mul_zbar(0);
        let one = HoloPoly::one(1).to_mixed();
        assert_eq!(
            inner_product_mixed(Domain::Disc, &zzbar, &one).unwrap(),
            ExactComplex::new(GaussRat::new(rat(1, 2), rat(0, 1)), 1)
        );
    }

    #[test]
    fn factorial_moments_do_not_overflow() {
        let n = monomial_norm_sq(Domain::Ball2, &mi(&[60, 60])).unwrap();
        assert!(n.is_positive());
        assert!(n.to_f64() > 0.0);
    }

    #[test]
    fn domain_parsing() {
        assert_eq!("ball2".parse::<Domain>().unwrap(), Domain::Ball2);
        assert_eq!("Disc".parse::<Domain>().unwrap(), Domain::Disc);
        assert!("annulus".parse::<Domain>().is_err());
    }
}
