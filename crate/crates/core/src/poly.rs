//! Multi-indices and exact polynomials in `z` and `z̄`.
//!
//! [`HoloPoly`] holds `Σ c_α z^α`; [`MixedPoly`] holds `Σ c_{αβ} z^α z̄^β`.
//! Coefficients are Gaussian rationals. Terms are kept in graded
//! lexicographic order and zero coefficients are never stored.
//!
//! Normalized basis elements carry an irrational factor; [`Scaled`] keeps it
//! out of the coefficient field as `sqrt(scale_sq) · body`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, gauss_real, gauss_to_c64, rat_sqrt, ExactScalar, GaussRat};

/// Exponent tuple `α`; ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut e = vec![0; dim];
        e[j] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// All multi-indices of dimension `dim` with every entry `≤ max_entry`.
    pub fn all_in_box(dim: usize, max_entry: u32) -> Vec<Self> {
        let mut out = vec![Self(Vec::new())];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=max_entry).map(move |k| {
                        let mut v = m.0.clone();
                        v.push(k);
                        Self(v)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// All multi-indices of dimension `dim` with total degree `≤ max_degree`.
    pub fn all_up_to_degree(dim: usize, max_degree: u32) -> Vec<Self> {
        let mut out: Vec<Self> = Self::all_in_box(dim, max_degree)
            .into_iter()
            .filter(|m| m.degree() <= max_degree)
            .collect();
        out.sort();
        out
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Key of a term `z^α z̄^β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedKey {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
}

impl Ord for MixedKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.alpha.degree() + self.beta.degree())
            .cmp(&(other.alpha.degree() + other.beta.degree()))
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for MixedKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn insert_term<K: Ord>(terms: &mut BTreeMap<K, GaussRat>, key: K, c: GaussRat) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn monomial_c64(z: &[Complex64], alpha: &MultiIndex, beta: &MultiIndex) -> Complex64 {
    z.iter()
        .enumerate()
        .fold(Complex64::new(1.0, 0.0), |acc, (j, zj)| {
            acc * zj.powu(alpha.get(j)) * zj.conj().powu(beta.get(j))
        })
}

/// Holomorphic polynomial `Σ c_α z^α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, GaussRat>,
}

impl HoloPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: GaussRat) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussRat::one())
    }

    pub fn monomial(alpha: MultiIndex, c: GaussRat) -> Self {
        let mut p = Self::zero(alpha.dim());
        insert_term(&mut p.terms, alpha, c);
        p
    }

    /// The coordinate function `z_j`.
    pub fn coordinate(dim: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, j), GaussRat::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, GaussRat)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (a, c) in terms {
            check_dim(dim, a.dim())?;
            insert_term(&mut p.terms, a, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> GaussRat {
        self.terms.get(alpha).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut p = Self::zero(self.dim);
        for (a, d) in &self.terms {
            insert_term(&mut p.terms, a.clone(), d * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.dim), |acc, _| &acc * self)
    }

    /// Holomorphic derivative `∂/∂z_j`.
    pub fn d_dz(&self, j: usize) -> Self {
        let mut p = Self::zero(self.dim);
        for (a, c) in &self.terms {
            let k = a.get(j);
            if k == 0 {
                continue;
            }
            let lowered = a.checked_sub(&MultiIndex::unit(self.dim, j)).expect("positive exponent");
            insert_term(&mut p.terms, lowered, c * gauss_real(BigRational::from_integer(BigInt::from(k))));
        }
        p
    }

    /// `z ↦ self(F(z))`; `F` holds the components of a polynomial map.
    /// Fails when the result would exceed total degree `cap`.
    pub fn compose(&self, map: &[HoloPoly], cap: u32) -> Result<HoloPoly> {
        check_dim(self.dim, map.len())?;
        let target_dim = map.first().map_or(self.dim, HoloPoly::dim);
        for f in map {
            check_dim(target_dim, f.dim())?;
        }
        let bound = compose_degree_bound(self.terms.keys().map(|a| (a, None)), map);
        if bound > cap {
            return Err(Error::DegreeCap { degree: bound, cap });
        }
        let mut out = HoloPoly::zero(target_dim);
        for (a, c) in &self.terms {
            let mut term = HoloPoly::constant(target_dim, c.clone());
            for (j, f) in map.iter().enumerate() {
                term = &term * &f.pow(a.get(j));
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn to_mixed(&self) -> MixedPoly {
        let mut m = MixedPoly::zero(self.dim);
        for (a, c) in &self.terms {
            insert_term(
                &mut m.terms,
                MixedKey {
                    alpha: a.clone(),
                    beta: MultiIndex::zero(self.dim),
                },
                c.clone(),
            );
        }
        m
    }

    /// The antiholomorphic polynomial `conj(self)`.
    pub fn conj(&self) -> MixedPoly {
        self.to_mixed().conj()
    }

    pub fn to_float(&self) -> FloatPoly {
        self.to_mixed().to_float()
    }
}

fn compose_degree_bound<'a>(
    keys: impl Iterator<Item = (&'a MultiIndex, Option<&'a MultiIndex>)>,
    map: &[HoloPoly],
) -> u32 {
    let degs: Vec<u32> = map.iter().map(|f| f.degree().unwrap_or(0)).collect();
    keys.map(|(a, b)| {
        (0..degs.len())
            .map(|j| (a.get(j) + b.map_or(0, |b| b.get(j))) * degs[j])
            .sum::<u32>()
    })
    .max()
    .unwrap_or(0)
}

impl Add for &HoloPoly {
    type Output = HoloPoly;
    fn add(self, rhs: &HoloPoly) -> HoloPoly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial sum");
        let mut p = self.clone();
        for (a, c) in &rhs.terms {
            insert_term(&mut p.terms, a.clone(), c.clone());
        }
        p
    }
}

impl Neg for &HoloPoly {
    type Output = HoloPoly;
    fn neg(self) -> HoloPoly {
        self.scale(&-GaussRat::one())
    }
}

impl Sub for &HoloPoly {
    type Output = HoloPoly;
    fn sub(self, rhs: &HoloPoly) -> HoloPoly {
        self + &(-rhs)
    }
}

impl Mul for &HoloPoly {
    type Output = HoloPoly;
    fn mul(self, rhs: &HoloPoly) -> HoloPoly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial product");
        let mut p = HoloPoly::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                insert_term(&mut p.terms, a + b, c * d);
            }
        }
        p
    }
}

/// Polynomial `Σ c_{αβ} z^α z̄^β` in `z` and `z̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPoly {
    dim: usize,
    terms: BTreeMap<MixedKey, GaussRat>,
}

impl MixedPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(alpha: MultiIndex, beta: MultiIndex, c: GaussRat) -> Self {
        assert_eq!(alpha.dim(), beta.dim(), "alpha and beta dimensions differ");
        let mut p = Self::zero(alpha.dim());
        insert_term(&mut p.terms, MixedKey { alpha, beta }, c);
        p
    }

    /// The coordinate function `z̄_j`.
    pub fn zbar(dim: usize, j: usize) -> Self {
        Self::term(MultiIndex::zero(dim), MultiIndex::unit(dim, j), GaussRat::one())
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (MultiIndex, MultiIndex, GaussRat)>,
    ) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (a, b, c) in terms {
            check_dim(dim, a.dim())?;
            check_dim(dim, b.dim())?;
            insert_term(&mut p.terms, MixedKey { alpha: a, beta: b }, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MixedKey, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> GaussRat {
        self.terms
            .get(&MixedKey {
                alpha: alpha.clone(),
                beta: beta.clone(),
            })
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree in `z` and `z̄` together.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|k| k.alpha.degree() + k.beta.degree())
            .max()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|k| k.beta.degree() == 0)
    }

    pub fn to_holo(&self) -> Option<HoloPoly> {
        if !self.is_holomorphic() {
            return None;
        }
        let mut p = HoloPoly::zero(self.dim);
        for (k, c) in &self.terms {
            insert_term(&mut p.terms, k.alpha.clone(), c.clone());
        }
        Some(p)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut p = Self::zero(self.dim);
        for (k, d) in &self.terms {
            insert_term(&mut p.terms, k.clone(), d * c);
        }
        p
    }

    pub fn conj(&self) -> Self {
        let mut p = Self::zero(self.dim);
        for (k, c) in &self.terms {
            insert_term(
                &mut p.terms,
                MixedKey {
                    alpha: k.beta.clone(),
                    beta: k.alpha.clone(),
                },
                c.conj(),
            );
        }
        p
    }

    /// Multiplication by `z̄_j`.
    pub fn mul_zbar(&self, j: usize) -> Self {
        let e = MultiIndex::unit(self.dim, j);
        let mut p = Self::zero(self.dim);
        for (k, c) in &self.terms {
            insert_term(
                &mut p.terms,
                MixedKey {
                    alpha: k.alpha.clone(),
                    beta: &k.beta + &e,
                },
                c.clone(),
            );
        }
        p
    }

    /// Wirtinger derivative `∂/∂z̄_j`: `z^α z̄^β ↦ β_j z^α z̄^{β−e_j}`.
    pub fn d_dzbar(&self, j: usize) -> Self {
        let e = MultiIndex::unit(self.dim, j);
        let mut p = Self::zero(self.dim);
        for (k, c) in &self.terms {
            let bj = k.beta.get(j);
            if bj == 0 {
                continue;
            }
            let factor = gauss_real(BigRational::from_integer(BigInt::from(bj)));
            insert_term(
                &mut p.terms,
                MixedKey {
                    alpha: k.alpha.clone(),
                    beta: k.beta.checked_sub(&e).expect("positive exponent"),
                },
                c * factor,
            );
        }
        p
    }

    /// `z ↦ self(F(z))`, expanding `z^α z̄^β ∘ F = F^α · conj(F)^β`.
    pub fn compose(&self, map: &[HoloPoly], cap: u32) -> Result<MixedPoly> {
        check_dim(self.dim, map.len())?;
        let target_dim = map.first().map_or(self.dim, HoloPoly::dim);
        for f in map {
            check_dim(target_dim, f.dim())?;
        }
        let bound = compose_degree_bound(self.terms.keys().map(|k| (&k.alpha, Some(&k.beta))), map);
        if bound > cap {
            return Err(Error::DegreeCap { degree: bound, cap });
        }
        let conj_map: Vec<MixedPoly> = map.iter().map(HoloPoly::conj).collect();
        let mut out = MixedPoly::zero(target_dim);
        for (k, c) in &self.terms {
            let mut term = HoloPoly::constant(target_dim, c.clone()).to_mixed();
            for (j, f) in map.iter().enumerate() {
                term = &term * &f.pow(k.alpha.get(j)).to_mixed();
                for _ in 0..k.beta.get(j) {
                    term = &term * &conj_map[j];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.alpha.clone(), k.beta.clone(), gauss_to_c64(c)))
                .collect(),
        }
    }

    /// The leading (graded-lex largest) term, if any.
    pub fn leading(&self) -> Option<(&MixedKey, &GaussRat)> {
        self.terms.iter().next_back()
    }
}

impl Add for &MixedPoly {
    type Output = MixedPoly;
    fn add(self, rhs: &MixedPoly) -> MixedPoly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial sum");
        let mut p = self.clone();
        for (k, c) in &rhs.terms {
            insert_term(&mut p.terms, k.clone(), c.clone());
        }
        p
    }
}

impl Neg for &MixedPoly {
    type Output = MixedPoly;
    fn neg(self) -> MixedPoly {
        self.scale(&-GaussRat::one())
    }
}

impl Sub for &MixedPoly {
    type Output = MixedPoly;
    fn sub(self, rhs: &MixedPoly) -> MixedPoly {
        self + &(-rhs)
    }
}

impl Mul for &MixedPoly {
    type Output = MixedPoly;
    fn mul(self, rhs: &MixedPoly) -> MixedPoly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial product");
        let mut p = MixedPoly::zero(self.dim);
        for (k, c) in &self.terms {
            for (l, d) in &rhs.terms {
                insert_term(
                    &mut p.terms,
                    MixedKey {
                        alpha: &k.alpha + &l.alpha,
                        beta: &k.beta + &l.beta,
                    },
                    c * d,
                );
            }
        }
        p
    }
}

impl From<&HoloPoly> for MixedPoly {
    fn from(p: &HoloPoly) -> Self {
        p.to_mixed()
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &GaussRat) -> fmt::Result {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => write!(f, "{}", format_rational(&c.re)),
        (true, false) => write!(f, "{}i", format_rational(&c.im)),
        _ => write!(f, "({} + {}i)", format_rational(&c.re), format_rational(&c.im)),
    }
}

impl fmt::Display for MixedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_coeff(f, c)?;
            for j in 0..self.dim {
                let var = if self.dim == 1 { String::new() } else { (j + 1).to_string() };
                match k.alpha.get(j) {
                    0 => {}
                    1 => write!(f, "·z{var}")?,
                    a => write!(f, "·z{var}^{a}")?,
                }
                match k.beta.get(j) {
                    0 => {}
                    1 => write!(f, "·conj(z{var})")?,
                    b => write!(f, "·conj(z{var})^{b}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_mixed().fmt(f)
    }
}

struct TermRepr<'a> {
    alpha: &'a MultiIndex,
    beta: Option<&'a MultiIndex>,
    c: &'a GaussRat,
}

impl Serialize for TermRepr<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Term", 4)?;
        s.serialize_field("alpha", self.alpha)?;
        if let Some(beta) = self.beta {
            s.serialize_field("beta", beta)?;
        }
        s.serialize_field("re", &format_rational(&self.c.re))?;
        s.serialize_field("im", &format_rational(&self.c.im))?;
        s.end()
    }
}

/// Sorted array of `{"alpha", "beta", "re", "im"}`; coefficients are exact
/// rational strings.
impl Serialize for MixedPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&TermRepr {
                alpha: &k.alpha,
                beta: Some(&k.beta),
                c,
            })?;
        }
        seq.end()
    }
}

/// Sorted array of `{"alpha", "re", "im"}`.
impl Serialize for HoloPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (a, c) in &self.terms {
            seq.serialize_element(&TermRepr { alpha: a, beta: None, c })?;
        }
        seq.end()
    }
}

impl MixedPoly {
    /// Reads the array written by the `Serialize` impl. `dim` is needed
    /// because an empty array carries no dimension.
    pub fn from_json(dim: usize, value: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("mixed polynomial json: {m}"));
        let arr = value.as_array().ok_or_else(|| bad("expected array"))?;
        let index = |v: &serde_json::Value| -> Result<MultiIndex> {
            let entries = v
                .as_array()
                .ok_or_else(|| bad("multi-index must be an array"))?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| bad("multi-index entries must be non-negative integers"))?;
            Ok(MultiIndex::new(entries))
        };
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let alpha = index(&t["alpha"])?;
            let beta = index(&t["beta"])?;
            let re = crate::exact::parse_rational(t["re"].as_str().ok_or_else(|| bad("re must be a string"))?)?;
            let im = crate::exact::parse_rational(t["im"].as_str().ok_or_else(|| bad("im must be a string"))?)?;
            terms.push((alpha, beta, GaussRat::new(re, im)));
        }
        Self::from_terms(dim, terms)
    }
}

/// Floating-point image of an exact polynomial, for quadrature integrands.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    dim: usize,
    terms: Vec<(MultiIndex, MultiIndex, Complex64)>,
}

impl FloatPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        for t in &mut self.terms {
            t.2 *= factor;
        }
        self
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        self.terms
            .iter()
            .map(|(a, b, c)| c * monomial_c64(z, a, b))
            .sum()
    }
}

/// `sqrt(scale_sq) · body` with `scale_sq > 0` exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scaled<T> {
    pub scale_sq: ExactScalar,
    pub body: T,
}

impl<T> Scaled<T> {
    pub fn new(scale_sq: ExactScalar, body: T) -> Self {
        assert!(scale_sq.is_positive(), "scale must be positive");
        Self { scale_sq, body }
    }

    pub fn unscaled(body: T) -> Self {
        Self::new(ExactScalar::one(), body)
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Scaled<U> {
        Scaled {
            scale_sq: self.scale_sq.clone(),
            body: f(&self.body),
        }
    }

    pub fn try_map<U>(&self, f: impl FnOnce(&T) -> Result<U>) -> Result<Scaled<U>> {
        Ok(Scaled {
            scale_sq: self.scale_sq.clone(),
            body: f(&self.body)?,
        })
    }

    pub fn scale_f64(&self) -> f64 {
        self.scale_sq.to_f64().sqrt()
    }
}

/// If `b / a` is the square of a positive rational `r`, returns `r`.
fn sqrt_ratio(a: &ExactScalar, b: &ExactScalar) -> Option<BigRational> {
    let q = b / a;
    if q.pi_pow() != 0 {
        return None;
    }
    rat_sqrt(q.rational())
}

impl Scaled<MixedPoly> {
    pub fn zero(dim: usize) -> Self {
        Self::unscaled(MixedPoly::zero(dim))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Re-expresses `self` with scale `target` when the ratio of scales is a
    /// rational square.
    pub fn rescaled_to(&self, target: &ExactScalar) -> Option<MixedPoly> {
        if self.body.is_zero() {
            return Some(MixedPoly::zero(self.body.dim()));
        }
        let r = sqrt_ratio(target, &self.scale_sq)?;
        Some(self.body.scale(&gauss_real(r)))
    }

    /// Exact sum; fails when the two radicals are not rationally related.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let rhs = other.rescaled_to(&self.scale_sq).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "cannot add terms with incommensurable normalizations sqrt({}) and sqrt({})",
                self.scale_sq, other.scale_sq
            ))
        })?;
        Ok(Scaled {
            scale_sq: self.scale_sq.clone(),
            body: &self.body + &rhs,
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Scaled {
            scale_sq: &self.scale_sq * &other.scale_sq,
            body: &self.body * &other.body,
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        self.map(|b| b.scale(c))
    }

    pub fn conj(&self) -> Self {
        self.map(MixedPoly::conj)
    }

    /// Exact equality of the represented functions, independent of how the
    /// radical is split between scale and body.
    pub fn exact_eq(&self, other: &Self) -> bool {
        match other.rescaled_to(&self.scale_sq) {
            Some(b) => b == self.body,
            None => false,
        }
    }

    /// Folds the scale into the coefficients when it is a rational square.
    pub fn collapse(&self) -> Option<MixedPoly> {
        let root = self.scale_sq.exact_sqrt()?;
        (root.pi_pow() == 0).then(|| self.body.scale(&gauss_real(root.rational().clone())))
    }

    pub fn to_float(&self) -> FloatPoly {
        self.body.to_float().scaled(self.scale_f64())
    }
}

impl Scaled<HoloPoly> {
    pub fn to_mixed(&self) -> Scaled<MixedPoly> {
        self.map(HoloPoly::to_mixed)
    }

    pub fn exact_eq(&self, other: &Self) -> bool {
        self.to_mixed().exact_eq(&other.to_mixed())
    }

    pub fn to_float(&self) -> FloatPoly {
        self.body.to_float().scaled(self.scale_f64())
    }
}

impl<T: Serialize> Serialize for Scaled<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Scaled", 3)?;
        s.serialize_field("scale_sq", &self.scale_sq)?;
        s.serialize_field("scale", &self.scale_f64())?;
        s.serialize_field("terms", &self.body)?;
        s.end()
    }
}
