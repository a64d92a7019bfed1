//! Polynomials with natural coefficients over named variables, in canonical
//! form, and the provenance semirings built on them.
//!
//! Text form: terms sorted by their expanded variable sequence, variables
//! sorted within a term, exponents as `^k`, coefficient prefix `k*` only when
//! it is not 1. `p^3 + 2*p*q*r` is canonical; the zero polynomial prints as
//! `0`, the unit as `1`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter;
use core::str::FromStr;

/// A product of variables with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: impl Into<String>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.into(), 1);
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.0.iter().map(|(v, &e)| (v.as_str(), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Same variables, every exponent 1.
    pub fn support(&self) -> Monomial {
        Monomial(self.0.keys().map(|v| (v.clone(), 1)).collect())
    }

    fn expanded(&self) -> impl Iterator<Item = &str> + '_ {
        self.0
            .iter()
            .flat_map(|(v, &e)| iter::repeat_n(v.as_str(), e as usize))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expanded().cmp(other.expanded())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(v)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `N[X]`: monomials with positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial(BTreeMap<Monomial, u64>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::from_term(Monomial::one(), 1)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::from_term(Monomial::var(name), 1)
    }

    pub fn from_term(m: Monomial, coefficient: u64) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, coefficient);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> + '_ {
        self.0.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.0.get(m).copied().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c > 0 {
            *self.0.entry(m).or_insert(0) += c;
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &other.0 {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, &ca) in &self.0 {
            for (b, &cb) in &other.0 {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Drops exponents: every variable occurs at most once per monomial.
    /// Coefficients of monomials that become equal are added.
    pub fn cap_exponents(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, &c) in &self.0 {
            out.add_term(m.support(), c);
        }
        out
    }

    /// Drops exponents and coefficients.
    pub fn cap_all(&self) -> Polynomial {
        Polynomial(self.cap_exponents().0.into_keys().map(|m| (m, 1)).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, &c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (c, m.is_one()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{m}")?,
                (_, false) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial: {0}")]
pub struct ParsePolynomialError(String);

impl FromStr for Polynomial {
    type Err = ParsePolynomialError;

    /// Parses sums of products such as `p^3 + 2*p*q*r`. Variable names may
    /// contain anything except whitespace, `+`, `*` and `^`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePolynomialError(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Polynomial::zero());
        }
        let mut out = Polynomial::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err());
            }
            let mut coeff: u64 = 1;
            let mut mono = Monomial::one();
            for factor in term.split('*').map(str::trim) {
                if factor.is_empty() {
                    return Err(err());
                }
                if factor.bytes().all(|b| b.is_ascii_digit()) {
                    coeff *= factor.parse::<u64>().map_err(|_| err())?;
                    continue;
                }
                let (name, exp) = match factor.rsplit_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err());
                }
                for _ in 0..exp {
                    mono = mono.mul(&Monomial::var(name));
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

/// The semirings polynomials can be evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semiring {
    /// `N[X]`: provenance polynomials.
    NX,
    /// `B[X]`: idempotent sum and product; coefficients and exponents are 1.
    BX,
    /// `Trio(X)`: exponents collapse, coefficients are kept.
    TrioX,
}

impl Semiring {
    /// Maps an `N[X]` polynomial into this semiring's canonical form.
    pub fn normalize(self, p: Polynomial) -> Polynomial {
        match self {
            Semiring::NX => p,
            Semiring::BX => p.cap_all(),
            Semiring::TrioX => p.cap_exponents(),
        }
    }

    pub fn add(self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.normalize(a.add(b))
    }

    pub fn mul(self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.normalize(a.mul(b))
    }

    pub fn sum<'a>(self, items: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        items
            .into_iter()
            .fold(Polynomial::zero(), |acc, p| self.add(&acc, p))
    }

    pub fn product<'a>(self, items: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        items
            .into_iter()
            .fold(Polynomial::one(), |acc, p| self.mul(&acc, p))
    }

    pub fn name(self) -> &'static str {
        match self {
            Semiring::NX => "nx",
            Semiring::BX => "bx",
            Semiring::TrioX => "trio",
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nx" => Ok(Semiring::NX),
            "bx" => Ok(Semiring::BX),
            "trio" => Ok(Semiring::TrioX),
            other => Err(alloc::format!("unknown semiring {other}")),
        }
    }
}

/// Convenience for tests and callers that build polynomials by hand.
pub fn parse(s: &str) -> Polynomial {
    s.parse().expect("valid polynomial")
}

impl From<Vec<(Monomial, u64)>> for Polynomial {
    fn from(terms: Vec<(Monomial, u64)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }
}
