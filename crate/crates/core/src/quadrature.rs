//! Numerical integration over the disc, bidisc and ball.
//!
//! Two rules are available:
//!
//! * **Polar tensor.** Each complex coordinate is written `r e^{iθ}`. The
//!   angle uses the uniform trapezoid rule, which is spectrally accurate for
//!   periodic integrands. On the disc and bidisc the radius uses
//!   Gauss–Legendre on `[0, ρ]` with weight `r dr`. On the ball the radial
//!   part is written in `s_j = r_j²`, where `dλ = ¼ ds_1 ds_2 dθ_1 dθ_2` and
//!   the domain becomes the simplex `s_1 + s_2 < ρ²`; a collapsed
//!   Gauss–Legendre product covers it. Polynomials in `z, z̄` are integrated
//!   exactly up to the usual `2n − 1` degree bound.
//! * **Monte Carlo.** Uniform rejection sampling in `ρ·Ω`. Samples are drawn
//!   in fixed-size blocks; block `b` reads ChaCha8 stream `b` of the user
//!   seed, so results do not depend on how blocks are scheduled. Blocks are
//!   reduced with a fixed pairwise tree.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domains::Domain;
use crate::error::{Error, Result};

/// Samples per Monte Carlo block.
pub const MC_BLOCK: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadMethod {
    PolarTensor,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub mc_samples: u64,
    pub seed: u64,
    /// Integration runs over `ρ·Ω`.
    pub radius_cutoff: f64,
}

impl QuadratureSpec {
    pub fn polar(radial_nodes: usize, angular_nodes: usize) -> Self {
        Self {
            method: QuadMethod::PolarTensor,
            radial_nodes,
            angular_nodes,
            mc_samples: 0,
            seed: 0,
            radius_cutoff: 1.0,
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self {
            method: QuadMethod::MonteCarlo,
            radial_nodes: 0,
            angular_nodes: 0,
            mc_samples: samples,
            seed,
            radius_cutoff: 1.0,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.radius_cutoff = rho;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `boundary_singular` integrands require `ρ < 1`.
    pub fn validate(&self, boundary_singular: bool) -> Result<()> {
        let rho = self.radius_cutoff;
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidQuadrature(format!("radius cutoff {rho} not in (0, 1]")));
        }
        if boundary_singular && rho >= 1.0 {
            return Err(Error::InvalidQuadrature(
                "boundary-singular integrand needs radius cutoff < 1".into(),
            ));
        }
        match self.method {
            QuadMethod::PolarTensor if self.radial_nodes < 4 || self.angular_nodes < 8 => {
                Err(Error::InvalidQuadrature(format!(
                    "polar rule needs >= 4 radial and >= 8 angular nodes, got {}x{}",
                    self.radial_nodes, self.angular_nodes
                )))
            }
            QuadMethod::MonteCarlo if self.mc_samples < 1000 => Err(Error::InvalidQuadrature(format!(
                "Monte Carlo needs >= 1000 samples, got {}",
                self.mc_samples
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralEstimate {
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    /// Standard error of a Monte Carlo estimate; zero for deterministic rules.
    pub std_error: f64,
    pub spec_used: QuadratureSpec,
}

/// Writes a complex number as `{"re": .., "im": ..}`.
pub fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

fn as_pairs(z: &[Complex64]) -> Vec<(f64, f64)> {
    z.iter().map(|c| (c.re, c.im)).collect()
}

fn checked(v: Complex64, z: &[Complex64]) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(as_pairs(z)))
    }
}

/// Sum in a fixed balanced tree, independent of thread count.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("positive node count"));
    let half = 0.5 * (b - a);
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (a + half * (x + 1.0), half * w))
        .collect()
}

/// Radial rule for `∫_0^ρ h(r) r dr`: nodes with the `r` weight folded in.
fn radial_rule(n: usize, rho: f64) -> Vec<(f64, f64)> {
    gauss_legendre(n, 0.0, rho)
        .into_iter()
        .map(|(r, w)| (r, w * r))
        .collect()
}

fn angles(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

/// Coordinate nodes `(point, weight)` for one complex variable on `|z| < ρ`.
fn disc_nodes(radial: usize, angular: usize, rho: f64) -> Vec<(Complex64, f64)> {
    let dtheta = 2.0 * PI / angular as f64;
    let phases = angles(angular);
    radial_rule(radial, rho)
        .into_iter()
        .flat_map(|(r, w)| phases.iter().map(move |e| (e * r, w * dtheta)))
        .collect()
}

/// Radial pairs `(r_1, r_2, weight)` covering `r_1² + r_2² < ρ²`, with the
/// `¼ ds_1 ds_2` Jacobian applied.
fn ball_radial_pairs(n: usize, rho: f64) -> Vec<(f64, f64, f64)> {
    let top = rho * rho;
    let mut out = Vec::with_capacity(n * n);
    for (s1, w1) in gauss_legendre(n, 0.0, top) {
        for (s2, w2) in gauss_legendre(n, 0.0, top - s1) {
            out.push((s1.sqrt(), s2.sqrt(), 0.25 * w1 * w2));
        }
    }
    out
}

fn integrate_polar<F>(domain: Domain, f: &F, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let rho = spec.radius_cutoff;
    let m = spec.angular_nodes;
    match domain {
        Domain::Disc => {
            let nodes = disc_nodes(spec.radial_nodes, m, rho);
            let vals = nodes
                .par_iter()
                .map(|&(z, w)| checked(f(&[z]), &[z]).map(|v| v * w))
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&vals))
        }
        Domain::Polydisc2 => {
            let nodes = disc_nodes(spec.radial_nodes, m, rho);
            let rows = nodes
                .par_iter()
                .map(|&(z1, w1)| {
                    let row = nodes
                        .iter()
                        .map(|&(z2, w2)| {
                            let p = [z1, z2];
                            checked(f(&p), &p).map(|v| v * w2)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(pairwise_sum(&row) * w1)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&rows))
        }
        Domain::Ball2 => {
            let pairs = ball_radial_pairs(spec.radial_nodes, rho);
            let phases = angles(m);
            let dtheta = 2.0 * PI / m as f64;
            let rows = pairs
                .par_iter()
                .map(|&(r1, r2, w)| {
                    let mut row = Vec::with_capacity(m * m);
                    for e1 in &phases {
                        for e2 in &phases {
                            let p = [e1 * r1, e2 * r2];
                            row.push(checked(f(&p), &p)?);
                        }
                    }
                    Ok(pairwise_sum(&row) * (w * dtheta * dtheta))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&rows))
        }
    }
}

/// Running mean/variance for complex samples (variance of `|x - mean|²`).
#[derive(Clone, Copy, Debug)]
struct Moments {
    n: u64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn empty() -> Self {
        Self {
            n: 0,
            mean: Complex64::new(0.0, 0.0),
            m2: 0.0,
        }
    }

    fn push(&mut self, x: Complex64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        let delta2 = x - self.mean;
        self.m2 += delta.re * delta2.re + delta.im * delta2.im;
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        let fb = b.n as f64 / n as f64;
        Self {
            n,
            mean: a.mean + delta * fb,
            m2: a.m2 + b.m2 + delta.norm_sqr() * a.n as f64 * fb,
        }
    }

    fn tree(xs: &[Self]) -> Self {
        match xs.len() {
            0 => Self::empty(),
            1 => xs[0],
            n => Self::merge(Self::tree(&xs[..n / 2]), Self::tree(&xs[n / 2..])),
        }
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Uniform point in `|z| < ρ` by rejection from the square.
fn sample_disc<R: Rng>(rng: &mut R, rho: f64) -> Complex64 {
    loop {
        let x = rng.random_range(-rho..rho);
        let y = rng.random_range(-rho..rho);
        if x * x + y * y < rho * rho {
            return Complex64::new(x, y);
        }
    }
}

/// Uniform point in `ρ·Ω`, written into `out`.
fn sample_domain<R: Rng>(rng: &mut R, domain: Domain, rho: f64, out: &mut [Complex64]) {
    match domain {
        Domain::Disc | Domain::Polydisc2 => {
            for c in out.iter_mut() {
                *c = sample_disc(rng, rho);
            }
        }
        Domain::Ball2 => loop {
            for c in out.iter_mut() {
                *c = Complex64::new(rng.random_range(-rho..rho), rng.random_range(-rho..rho));
            }
            if out.iter().map(Complex64::norm_sqr).sum::<f64>() < rho * rho {
                return;
            }
        },
    }
}

/// Shared Monte Carlo driver: `draw` fills one sample point set and returns
/// the integrand value there.
fn monte_carlo<D>(spec: &QuadratureSpec, volume: f64, draw: D) -> Result<(Complex64, f64)>
where
    D: Fn(&mut ChaCha8Rng) -> Result<Complex64> + Sync,
{
    let total = spec.mc_samples;
    let blocks = total.div_ceil(MC_BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(spec.seed, b);
            let count = MC_BLOCK.min(total - b * MC_BLOCK);
            let mut m = Moments::empty();
            for _ in 0..count {
                m.push(draw(&mut rng)?);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Moments::tree(&parts);
    let var = if m.n > 1 { m.m2 / (m.n - 1) as f64 } else { 0.0 };
    Ok((m.mean * volume, volume * (var / m.n as f64).sqrt()))
}

/// `∫_{ρΩ} f dλ`.
pub fn integrate<F>(domain: Domain, f: F, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    spec.validate(false)?;
    let (value, std_error) = match spec.method {
        QuadMethod::PolarTensor => (integrate_polar(domain, &f, spec)?, 0.0),
        QuadMethod::MonteCarlo => {
            let dim = domain.dim();
            let rho = spec.radius_cutoff;
            monte_carlo(spec, domain.volume_scaled(rho), |rng| {
                let mut z = [Complex64::new(0.0, 0.0); 2];
                let z = &mut z[..dim];
                sample_domain(rng, domain, rho, z);
                checked(f(z), z)
            })?
        }
    };
    Ok(IntegralEstimate {
        value,
        std_error,
        spec_used: spec.clone(),
    })
}

/// `∫_{ρΩ} ∫_{ρΩ} g(z, w) dλ(z) dλ(w)` by Monte Carlo.
pub fn integrate_product_domain<G>(domain: Domain, g: G, spec: &QuadratureSpec) -> Result<IntegralEstimate>
where
    G: Fn(&[Complex64], &[Complex64]) -> Complex64 + Sync,
{
    if spec.method != QuadMethod::MonteCarlo {
        return Err(Error::InvalidQuadrature(
            "product-domain integrals use Monte Carlo only".into(),
        ));
    }
    spec.validate(false)?;
    let dim = domain.dim();
    let rho = spec.radius_cutoff;
    let vol = domain.volume_scaled(rho);
    let (value, std_error) = monte_carlo(spec, vol * vol, |rng| {
        let mut z = [Complex64::new(0.0, 0.0); 2];
        let mut w = [Complex64::new(0.0, 0.0); 2];
        sample_domain(rng, domain, rho, &mut z[..dim]);
        sample_domain(rng, domain, rho, &mut w[..dim]);
        let v = g(&z[..dim], &w[..dim]);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            let mut pts = as_pairs(&z[..dim]);
            pts.extend(as_pairs(&w[..dim]));
            Err(Error::NonFinite(pts))
        }
    })?;
    Ok(IntegralEstimate {
        value,
        std_error,
        spec_used: spec.clone(),
    })
}

/// Trapezoid rule for a `2π`-periodic function on `[0, 2π)`.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    let vals: Vec<Complex64> = (0..nodes)
        .map(|k| Complex64::new(f(h * k as f64), 0.0))
        .collect();
    pairwise_sum(&vals).re * h
}
