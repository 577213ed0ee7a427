//! Text syntax for exact polynomial symbols, points and maps.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | var | 'conj(' expr ')' | basis | '(' expr ')'
//! var    := 'z' | 'z1' | 'z2' | 'zbar' | 'zbar1' | 'zbar2'
//! basis  := ('u' | 'U') '(' integer (',' integer)* ')'
//! ```
//!
//! `u(n)` / `U(n1,n2)` is the orthonormal basis element `e_α` of the domain.
//! Numbers are exact (`0.25` is `1/4`). Division is by constants only.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::domains::{orthonormal_basis_element, Domain};
use crate::error::{Error, Result};
use crate::exact::{gauss_real, parse_rational, GaussRat};
use crate::poly::{HoloPoly, MixedPoly, MultiIndex, Scaled};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    domain: Domain,
    src: &'a str,
}

type Value = Scaled<MixedPoly>;

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn constant(&self, c: GaussRat) -> Value {
        Scaled::unscaled(HoloPoly::constant(self.domain.dim(), c).to_mixed())
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_add(&self.term()?.scale(&-GaussRat::one()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .collapse()
                    .filter(|p| p.degree().unwrap_or(0) == 0)
                    .map(|p| p.coeff(&MultiIndex::zero(self.domain.dim()), &MultiIndex::zero(self.domain.dim())))
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| self.err("division only by nonzero rational constants"))?;
                acc = acc.scale(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(self.unary()?.scale(&-GaussRat::one()));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.integer()?;
            let mut acc = self.constant(GaussRat::one());
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u32> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                s.parse().map_err(|_| self.err("expected a non-negative integer"))
            }
            _ => Err(self.err("expected a non-negative integer")),
        }
    }

    fn coordinate(&self, name: &str) -> Result<usize> {
        let dim = self.domain.dim();
        let j = match name {
            "" if dim == 1 => 0,
            "" => return Err(self.err("use z1/z2 on two-dimensional domains")),
            d => d.parse::<usize>().map_err(|_| self.err("bad coordinate"))?.wrapping_sub(1),
        };
        if j >= dim {
            return Err(self.err(&format!("coordinate {name} out of range")));
        }
        Ok(j)
    }

    fn atom(&mut self) -> Result<Value> {
        let dim = self.domain.dim();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(self.constant(gauss_real(parse_rational(&s)?)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "i" => Ok(self.constant(GaussRat::new(Zero::zero(), One::one()))),
                    "conj" => {
                        self.expect('(')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        Ok(v.conj())
                    }
                    "u" | "U" => {
                        self.expect('(')?;
                        let mut entries = vec![self.integer()?];
                        while self.eat(',') {
                            entries.push(self.integer()?);
                        }
                        self.expect(')')?;
                        let e = orthonormal_basis_element(self.domain, &MultiIndex::new(entries))?;
                        Ok(e.to_mixed())
                    }
                    name => {
                        if let Some(rest) = name.strip_prefix("zbar") {
                            let j = self.coordinate(rest)?;
                            Ok(Scaled::unscaled(MixedPoly::zbar(dim, j)))
                        } else if let Some(rest) = name.strip_prefix('z') {
                            let j = self.coordinate(rest)?;
                            Ok(Scaled::unscaled(HoloPoly::coordinate(dim, j).to_mixed()))
                        } else {
                            Err(self.err(&format!("unknown identifier {name:?}")))
                        }
                    }
                }
            }
            _ => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a symbol such as `conj(z1)*U(1,1)` into an exact scaled polynomial.
pub fn parse_symbol(domain: Domain, src: &str) -> Result<Scaled<MixedPoly>> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        domain,
        src,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a holomorphic symbol.
pub fn parse_holo(domain: Domain, src: &str) -> Result<Scaled<HoloPoly>> {
    let v = parse_symbol(domain, src)?;
    let body = v
        .body
        .to_holo()
        .ok_or_else(|| Error::Parse(format!("{src:?} is not holomorphic")))?;
    Ok(Scaled::new(v.scale_sq, body))
}

/// Parses `g_1; g_2; …` into the coefficients of a `(0,1)`-form. All
/// coefficients are brought to one common radical factor.
pub fn parse_form(domain: Domain, src: &str) -> Result<Scaled<Vec<HoloPoly>>> {
    let parts: Vec<&str> = src.split(';').collect();
    if parts.len() != domain.dim() {
        return Err(Error::Parse(format!(
            "form needs {} coefficient(s) separated by ';', got {}",
            domain.dim(),
            parts.len()
        )));
    }
    let coeffs = parts
        .iter()
        .map(|s| parse_holo(domain, s))
        .collect::<Result<Vec<_>>>()?;
    let scale = coeffs
        .iter()
        .find(|c| !c.body.is_zero())
        .map_or_else(crate::exact::ExactScalar::one, |c| c.scale_sq.clone());
    let bodies = coeffs
        .iter()
        .map(|c| {
            c.to_mixed()
                .rescaled_to(&scale)
                .and_then(|m| m.to_holo())
                .ok_or_else(|| Error::Parse("form coefficients have incommensurable normalizations".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scaled::new(scale, bodies))
}

/// Parses a polynomial map `F_1; F_2; …` with rational (unscaled) components.
pub fn parse_map(domain: Domain, src: &str) -> Result<Vec<HoloPoly>> {
    let f = parse_form(domain, src)?;
    if f.scale_sq != crate::exact::ExactScalar::one() {
        let root = f
            .scale_sq
            .exact_sqrt()
            .filter(|r| r.pi_pow() == 0)
            .ok_or_else(|| Error::Parse("map components must have rational coefficients".into()))?;
        let c = gauss_real(root.rational().clone());
        return Ok(f.body.iter().map(|p| p.scale(&c)).collect());
    }
    Ok(f.body)
}

/// Parses one complex number: `0.3`, `0.1+0.2i`, `-i`, `2.5e-1-0.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Parses a comma-separated point with one complex number per coordinate.
pub fn parse_point(domain: Domain, s: &str) -> Result<Vec<Complex64>> {
    let z = s.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    if z.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: z.len(),
        });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ExactScalar};

    #[test]
    fn basis_times_conj() {
        let v = parse_symbol(Domain::Ball2, "conj(z1)*U(1,1)").unwrap();
        assert_eq!(v.scale_sq, ExactScalar::new(rat(24, 1), -2));
        assert_eq!(
            v.body,
            MixedPoly::term(MultiIndex::new(vec![1, 1]), MultiIndex::new(vec![1, 0]), GaussRat::one())
        );
    }

    #[test]
    fn arithmetic_is_exact() {
        let v = parse_symbol(Domain::Disc, "(z + 1/2)^2 - z^2 - z").unwrap();
        assert_eq!(v.collapse().unwrap(), HoloPoly::constant(1, gauss_real(rat(1, 4))).to_mixed());
        let w = parse_symbol(Domain::Disc, "0.5*i*zbar").unwrap();
        assert_eq!(w.body, MixedPoly::zbar(1, 0).scale(&GaussRat::new(rat(0, 1), rat(1, 2))));
    }

    #[test]
    fn commensurable_radicals_combine() {
        // u(0) = 1/√π and 2·u(0) share the radical
        let v = parse_symbol(Domain::Disc, "u(0) + 2*u(0)").unwrap();
        assert_eq!(v.body, HoloPoly::constant(1, gauss_real(rat(3, 1))).to_mixed());
        assert!(parse_symbol(Domain::Disc, "u(0) + u(1)").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_symbol(Domain::Disc, "z3").is_err());
        assert!(parse_symbol(Domain::Ball2, "z").is_err());
        assert!(parse_symbol(Domain::Disc, "z /").is_err());
        assert!(parse_symbol(Domain::Disc, "1/z").is_err());
        assert!(parse_symbol(Domain::Disc, "z)").is_err());
        assert!(parse_symbol(Domain::Disc, "foo").is_err());
        assert!(parse_holo(Domain::Disc, "zbar").is_err());
    }

    #[test]
    fn forms_and_maps() {
        let f = parse_form(Domain::Ball2, "U(1,0); 0").unwrap();
        assert_eq!(f.body[1], HoloPoly::zero(2));
        assert!(parse_form(Domain::Ball2, "1").is_err());
        let m = parse_map(Domain::Disc, "1/2*z + i/3*z").unwrap();
        assert_eq!(m[0], HoloPoly::coordinate(1, 0).scale(&GaussRat::new(rat(1, 2), rat(1, 3))));
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("0.3+0i").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("0.1+0.2i").unwrap(), Complex64::new(0.1, 0.2));
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-1-2.5e-1i").unwrap(), Complex64::new(0.1, -0.25));
        assert_eq!(parse_complex("-0.4").unwrap(), Complex64::new(-0.4, 0.0));
        assert!(parse_complex("x").is_err());
        assert_eq!(parse_point(Domain::Ball2, "0.3,0.2i").unwrap().len(), 2);
        assert!(parse_point(Domain::Disc, "0.3,0.2").is_err());
    }
}
