//! Hilbert-Schmidt diagnostics for the canonical solution operator.
//!
//! `S₁` is Hilbert-Schmidt iff `Σ ‖S₁(e_α dz̄_j)‖² < ∞` over an orthonormal
//! basis. The image norms are computed exactly from the image polynomial and
//! cross-checked against the closed forms
//!
//! | domain | `‖S₁(e_α dz̄_1)‖²` |
//! |---|---|
//! | disc | `1 / ((n+1)(n+2))` |
//! | bidisc | `1 / ((n₁+1)(n₁+2))` |
//! | ball in C² | `(n₂+2) / ((n₁+n₂+2)(n₁+n₂+3))` |
//!
//! (coordinates swap for `dz̄_2`). The disc sum telescopes to 1; the other
//! two grow without bound, reported as a trend rather than a number.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::dbar::{basis_form_solution, orthogonal_part, Form01, multiplier_solution};
use crate::domains::{inner_product_scaled, norm_sq_scaled, Domain};
use crate::error::{Error, Result};
use crate::exact::{rat, ExactComplex, ExactScalar};
use crate::poly::{HoloPoly, MixedPoly, MultiIndex, Scaled};
use crate::quadrature::{integrate_product_domain, periodic_trapezoid, IntegralEstimate, QuadratureSpec};

/// Growth factor between consecutive radius cutoffs that flags divergence
/// of a kernel L² integral.
pub const DIVERGENCE_RHO_RATIO: f64 = 1.5;
/// Growth factor of the Hilbert-Schmidt partial sum from `N/2` to `N` that
/// flags a divergent trend.
pub const DIVERGENCE_SUM_RATIO: f64 = 1.5;
/// Radius cutoffs used by default for kernel L² integrals.
pub const DEFAULT_RHO_SWEEP: [f64; 3] = [0.9, 0.99, 0.999];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    ConvergentWithLimit { limit: ExactScalar },
    DivergentTrend,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexNorm {
    pub alpha: MultiIndex,
    /// 0-based coordinate `j` of `dz̄_j`.
    pub coordinate: usize,
    pub norm_sq: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HSReport {
    pub domain: Domain,
    pub max_degree: u32,
    pub per_index_norms: Vec<IndexNorm>,
    pub partial_sum: ExactScalar,
    pub verdict: Verdict,
    /// `(degree cutoff, partial sum)` pairs.
    pub trend_samples: Vec<(u32, f64)>,
}

/// Closed-form `‖S₁(e_α dz̄_j)‖²`.
pub fn closed_form_norm_sq(domain: Domain, alpha: &MultiIndex, j: usize) -> Result<ExactScalar> {
    domain.check_index(alpha)?;
    domain.check_coordinate(j)?;
    let value = match domain {
        Domain::Disc | Domain::Polydisc2 => {
            let n = alpha.get(j) as i64;
            rat(1, (n + 1) * (n + 2))
        }
        Domain::Ball2 => {
            let other = alpha.get(1 - j) as i64;
            let total = alpha.degree() as i64;
            rat(other + 2, (total + 2) * (total + 3))
        }
    };
    Ok(ExactScalar::new(value, 0))
}

/// `‖S₁(e_α dz̄_j)‖²` from the exact image, asserted equal to the closed form.
pub fn s1_image_norm_sq(domain: Domain, alpha: &MultiIndex, j: usize) -> Result<ExactScalar> {
    let image = basis_form_solution(domain, alpha, j)?;
    let from_image = norm_sq_scaled(domain, &image)?;
    let closed = closed_form_norm_sq(domain, alpha, j)?;
    if from_image != closed {
        return Err(Error::Consistency(format!(
            "{domain}: image norm {from_image} != closed form {closed} at alpha={alpha}, j={j}"
        )));
    }
    Ok(from_image)
}

fn partial_sum_upto(norms: &[IndexNorm], cutoff: u32) -> ExactScalar {
    norms
        .iter()
        .filter(|n| n.alpha.entries().iter().all(|&a| a <= cutoff))
        .map(|n| n.norm_sq.clone())
        .sum()
}

/// Sums `‖S₁(e_α dz̄_j)‖²` over all `α` with every entry `≤ max_degree` and
/// all coordinates `j`.
pub fn hs_partial_sum(domain: Domain, max_degree: u32) -> Result<HSReport> {
    if max_degree < 1 {
        return Err(Error::InvalidArgument("max_degree must be >= 1".into()));
    }
    let indices = MultiIndex::all_in_box(domain.dim(), max_degree);
    let per_index_norms = indices
        .iter()
        .flat_map(|alpha| (0..domain.dim()).map(move |j| (alpha, j)))
        .map(|(alpha, j)| {
            Ok(IndexNorm {
                alpha: alpha.clone(),
                coordinate: j,
                norm_sq: s1_image_norm_sq(domain, alpha, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let partial_sum: ExactScalar = per_index_norms.iter().map(|n| n.norm_sq.clone()).sum();

    let mut cutoffs = vec![max_degree / 4, max_degree / 2, max_degree];
    cutoffs.dedup();
    let trend_samples: Vec<(u32, f64)> = cutoffs
        .iter()
        .map(|&c| (c, partial_sum_upto(&per_index_norms, c).to_f64()))
        .collect();

    let verdict = match domain {
        Domain::Disc => {
            // Σ_{n≤N} 1/((n+1)(n+2)) = 1 − 1/(N+2)
            let telescoped = ExactScalar::new(rat(1, 1) - rat(1, max_degree as i64 + 2), 0);
            if partial_sum != telescoped {
                return Err(Error::Consistency(format!(
                    "disc partial sum {partial_sum} does not telescope to {telescoped}"
                )));
            }
            Verdict::ConvergentWithLimit {
                limit: ExactScalar::one(),
            }
        }
        Domain::Polydisc2 | Domain::Ball2 => {
            let half = partial_sum_upto(&per_index_norms, max_degree / 2).to_f64();
            let ratio = partial_sum.to_f64() / half;
            if ratio < DIVERGENCE_SUM_RATIO {
                return Err(Error::Consistency(format!(
                    "{domain}: partial sum grew only by {ratio:.3} from N/2 to N"
                )));
            }
            Verdict::DivergentTrend
        }
    };

    Ok(HSReport {
        domain,
        max_degree,
        per_index_norms,
        partial_sum,
        verdict,
        trend_samples,
    })
}

/// `π⁴/6`, the bound `(2π)² ∫₀¹ −log(1−s²)/(2s) ds` on the disc kernel
/// integral.
pub fn disc_kernel_l2_bound() -> ExactScalar {
    ExactScalar::new(rat(1, 6), 4)
}

/// `|kernel|²` of the integral representation, without the normalizing
/// constants.
pub fn kernel_l2_integrand(domain: Domain, z: &[Complex64], w: &[Complex64]) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let dist: f64 = z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum();
    match domain {
        Domain::Disc => dist / (one - z[0] * w[0].conj()).norm_sqr().powi(2),
        Domain::Polydisc2 => {
            let d1 = (one - z[0] * w[0].conj()).norm_sqr();
            let d2 = (one - z[1] * w[1].conj()).norm_sqr();
            dist / (d1 * d1 * d2 * d2)
        }
        Domain::Ball2 => dist / (one - z[0] * w[0].conj() - z[1] * w[1].conj()).norm_sqr().powi(3),
    }
}

/// Monte Carlo estimates of `∫∫_{ρΩ×ρΩ} |kernel|²` for each cutoff `ρ`.
pub fn kernel_l2_integral(
    domain: Domain,
    spec: &QuadratureSpec,
    rho_sweep: &[f64],
) -> Result<Vec<(f64, IntegralEstimate)>> {
    if rho_sweep.is_empty() {
        return Err(Error::InvalidArgument("empty rho sweep".into()));
    }
    rho_sweep
        .iter()
        .map(|&rho| {
            let s = spec.clone().with_rho(rho);
            s.validate(true)?;
            let est = integrate_product_domain(
                domain,
                |z, w| Complex64::new(kernel_l2_integrand(domain, z, w), 0.0),
                &s,
            )?;
            Ok((rho, est))
        })
        .collect()
}

/// Whether each estimate exceeds its predecessor by `DIVERGENCE_RHO_RATIO`.
pub fn sweep_diverges(estimates: &[(f64, IntegralEstimate)]) -> bool {
    estimates.len() >= 2
        && estimates
            .windows(2)
            .all(|p| p[1].1.value.re >= DIVERGENCE_RHO_RATIO * p[0].1.value.re)
}

/// `∫₀^{2π} (1−ρ²)/(1 − 2ρ cos(θ−φ) + ρ²) dθ` by the trapezoid rule.
pub fn poisson_check(rho: f64, phi: f64, nodes: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho = {rho} not in [0, 1)")));
    }
    if nodes == 0 {
        return Err(Error::InvalidArgument("need at least one node".into()));
    }
    let r2 = rho * rho;
    Ok(periodic_trapezoid(
        |t| (1.0 - r2) / (1.0 - 2.0 * rho * (t - phi).cos() + r2),
        nodes,
    ))
}

/// Exact Gram matrix `⟨S₁(u_m dz̄), S₁(u_n dz̄)⟩` on the disc for
/// `m, n ≤ max_n`. Entries are `sqrt(scale_sq) · body`.
pub fn pairwise_orthogonality(domain: Domain, max_n: u32) -> Result<Vec<Vec<Scaled<ExactComplex>>>> {
    if domain != Domain::Disc {
        return Err(Error::InvalidArgument(
            "pairwise orthogonality is defined for the disc".into(),
        ));
    }
    let images = (0..=max_n)
        .map(|n| basis_form_solution(domain, &MultiIndex::new(vec![n]), 0))
        .collect::<Result<Vec<_>>>()?;
    images
        .iter()
        .map(|a| images.iter().map(|b| inner_product_scaled(domain, a, b)).collect())
        .collect()
}

/// Hankel operator with symbol `z̄_j`: `g ↦ (I − P)(z̄_j g)`. Checked to agree
/// with `S₁(g dz̄_j)`.
pub fn hankel_apply(domain: Domain, j: usize, g: &HoloPoly) -> Result<MixedPoly> {
    domain.check_coordinate(j)?;
    let h = orthogonal_part(domain, &g.to_mixed().mul_zbar(j))?;
    let s1 = multiplier_solution(domain, &Form01::single(domain, j, g.clone())?)?;
    if h != s1 {
        return Err(Error::Consistency("Hankel image differs from canonical solution".into()));
    }
    Ok(h)
}

/// Poisson integral exact value.
pub const TWO_PI: f64 = 2.0 * PI;
