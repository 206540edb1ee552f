//! Laurent polynomials over F₂ in the lattice variables `x`, `y`, `z` and the
//! sublattice marker `s`.
//!
//! A polynomial is a finite set of monomials; a monomial is present iff its
//! coefficient is 1. Multiplication by `x^i y^j z^k` translates a pattern of
//! sites, `conj` inverts every translation, and the commutation polynomial
//! `P(a, b) = a * conj(b)` records, coefficient by coefficient, the overlap
//! parity of `a` with every translate of `b`.
//!
//! The marker `s` is a Z₂ grading: `s * s = 1`. With that convention
//! `P(a*s, b*s)` measures overlaps on the `s` sublattice and `P(a*s, b)` never
//! has an `s⁰` coefficient, which is exactly what the two-sublattice CZ
//! calculus needs.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use thiserror::Error;

/// `x^i y^j z^k s^m`. Field order gives the canonical `(m, k, j, i)` ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub m: u8,
    pub k: i32,
    pub j: i32,
    pub i: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        m: 0,
        k: 0,
        j: 0,
        i: 0,
    };

    pub fn new(i: i32, j: i32, k: i32, m: u8) -> Self {
        assert!(m <= 1, "sublattice bit must be 0 or 1");
        Monomial { m, k, j, i }
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial {
            m: self.m ^ other.m,
            k: self.k + other.k,
            j: self.j + other.j,
            i: self.i + other.i,
        }
    }

    pub fn conj(self) -> Monomial {
        Monomial {
            m: self.m,
            k: -self.k,
            j: -self.j,
            i: -self.i,
        }
    }

    fn is_x_only(self) -> bool {
        self.j == 0 && self.k == 0 && self.m == 0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        for (name, e) in [("x", self.i), ("y", self.j), ("z", self.k)] {
            match e {
                0 => {}
                1 => factors.push(name.to_string()),
                e => factors.push(format!("{name}^{e}")),
            }
        }
        if self.m == 1 {
            factors.push("s".to_string());
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cellular automaton rule must be a polynomial in x only, got `{0}`")]
    NotUnivariate(String),
    #[error("period must be positive, got {0}")]
    BadPeriod(i32),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Element of F₂[x, x̄, y, ȳ, z, z̄] ⊗ F₂[s]/(s² − 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2LaurentPoly {
    terms: BTreeSet<Monomial>,
}

impl F2LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::ONE)
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        F2LaurentPoly { terms }
    }

    /// `x^i y^j z^k s^m`
    pub fn mono(i: i32, j: i32, k: i32, m: u8) -> Self {
        Self::from_monomial(Monomial::new(i, j, k, m))
    }

    pub fn x() -> Self {
        Self::mono(1, 0, 0, 0)
    }

    pub fn y() -> Self {
        Self::mono(0, 1, 0, 0)
    }

    pub fn z() -> Self {
        Self::mono(0, 0, 1, 0)
    }

    pub fn s() -> Self {
        Self::mono(0, 0, 0, 1)
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(it: I) -> Self {
        let mut p = Self::zero();
        for m in it {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Coefficient of `x^i y^j z^k s^m`.
    pub fn coeff(&self, i: i32, j: i32, k: i32, m: u8) -> bool {
        self.terms.contains(&Monomial { m, k, j, i })
    }

    pub fn conj(&self) -> Self {
        F2LaurentPoly {
            terms: self.terms.iter().map(|m| m.conj()).collect(),
        }
    }

    pub fn shift(&self, by: Monomial) -> Self {
        F2LaurentPoly {
            terms: self.terms.iter().map(|m| m.times(by)).collect(),
        }
    }

    /// Is this a polynomial in `x` (and `x̄`) alone?
    pub fn is_x_only(&self) -> bool {
        self.terms.iter().all(|m| m.is_x_only())
    }

    /// Reduce `x` exponents modulo `x_period` and `y` exponents modulo
    /// `y_period`, merging terms that coincide.
    pub fn reduce_periodic(
        &self,
        x_period: Option<i32>,
        y_period: Option<i32>,
    ) -> Result<Self, PolyError> {
        for p in [x_period, y_period].into_iter().flatten() {
            if p <= 0 {
                return Err(PolyError::BadPeriod(p));
            }
        }
        Ok(Self::from_monomials(self.terms.iter().map(|m| Monomial {
            i: x_period.map_or(m.i, |p| m.i.rem_euclid(p)),
            j: y_period.map_or(m.j, |p| m.j.rem_euclid(p)),
            ..*m
        })))
    }
}

/// `P(a, b) = a * conj(b)`.
pub fn commutation_poly(a: &F2LaurentPoly, b: &F2LaurentPoly) -> F2LaurentPoly {
    a * &b.conj()
}

/// `Σ_{t=0}^{rows} f(x)^t y^t`, the light cone of the automaton with update
/// rule `f`. When `x_period` is given every row is reduced modulo `x^p − 1`.
pub fn ca_expand(
    f: &F2LaurentPoly,
    rows: u32,
    x_period: Option<i32>,
) -> Result<F2LaurentPoly, PolyError> {
    if !f.is_x_only() {
        return Err(PolyError::NotUnivariate(f.to_string()));
    }
    let f = f.reduce_periodic(x_period, None)?;
    let mut out = F2LaurentPoly::zero();
    let mut row = F2LaurentPoly::one();
    for t in 0..=rows as i32 {
        for m in row.terms() {
            out.toggle(Monomial { j: t, ..*m });
        }
        if t < rows as i32 {
            row = (&row * &f).reduce_periodic(x_period, None)?;
        }
    }
    Ok(out)
}

/// X-support `q(x) * Σ_t f^t y^t` of the fractal symmetry seeded by `q` on
/// the first row.
pub fn symmetry_support(
    q: &F2LaurentPoly,
    f: &F2LaurentPoly,
    rows: u32,
    x_period: Option<i32>,
) -> Result<F2LaurentPoly, PolyError> {
    if !q.is_x_only() {
        return Err(PolyError::NotUnivariate(q.to_string()));
    }
    let cone = ca_expand(f, rows, x_period)?;
    (q * &cone).reduce_periodic(x_period, None)
}

impl Add for &F2LaurentPoly {
    type Output = F2LaurentPoly;

    fn add(self, rhs: &F2LaurentPoly) -> F2LaurentPoly {
        F2LaurentPoly {
            terms: self
                .terms
                .symmetric_difference(&rhs.terms)
                .copied()
                .collect(),
        }
    }
}

impl Add for F2LaurentPoly {
    type Output = F2LaurentPoly;

    fn add(self, rhs: F2LaurentPoly) -> F2LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&F2LaurentPoly> for F2LaurentPoly {
    fn add_assign(&mut self, rhs: &F2LaurentPoly) {
        for m in rhs.terms() {
            self.toggle(*m);
        }
    }
}

impl Mul for &F2LaurentPoly {
    type Output = F2LaurentPoly;

    fn mul(self, rhs: &F2LaurentPoly) -> F2LaurentPoly {
        let mut out = F2LaurentPoly::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                out.toggle(a.times(*b));
            }
        }
        out
    }
}

impl Mul for F2LaurentPoly {
    type Output = F2LaurentPoly;

    fn mul(self, rhs: F2LaurentPoly) -> F2LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for F2LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for F2LaurentPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut out = F2LaurentPoly::zero();
        for term in compact.split('+') {
            if term == "0" {
                continue;
            }
            out.toggle(parse_monomial(term)?);
        }
        Ok(out)
    }
}

fn parse_monomial(term: &str) -> Result<Monomial, PolyError> {
    if term.is_empty() {
        return Err(PolyError::Parse("empty term".into()));
    }
    let mut mono = Monomial::ONE;
    for factor in term.split('*') {
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => {
                let e: i32 = e
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad exponent in `{factor}`")))?;
                (v, e)
            }
            None => (factor, 1),
        };
        match var {
            "1" if exp == 1 => {}
            "x" => mono.i += exp,
            "y" => mono.j += exp,
            "z" => mono.k += exp,
            "s" => {
                if exp.rem_euclid(2) == 1 {
                    mono.m ^= 1;
                }
            }
            _ => return Err(PolyError::Parse(format!("unknown factor `{factor}`"))),
        }
    }
    Ok(mono)
}
