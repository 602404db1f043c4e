//! Exact polynomials: bivariate homogeneous forms and sparse Laurent
//! polynomials in a handful of variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Appends `coeff * monomial` to `out` in the usual `a - 3*x*y` style.
fn write_term<C: fmt::Display + Signed + One>(out: &mut String, coeff: &C, monomial: &str) {
    let first = out.is_empty();
    let negative = coeff.is_negative();
    let magnitude = coeff.abs();
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    if monomial.is_empty() {
        let _ = write!(out, "{magnitude}");
    } else if magnitude.is_one() {
        out.push_str(monomial);
    } else {
        let _ = write!(out, "{magnitude}*{monomial}");
    }
}

fn power(name: &str, e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// `sum_i a_i x^{r-i} y^i` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    coeffs: Vec<BigRational>,
}

impl HomogeneousPoly {
    /// Coefficients `a_0..a_r`; `a_i` multiplies `x^{r-i} y^i`. Must be non-empty.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous polynomial has at least one coefficient slot");
        HomogeneousPoly { coeffs }
    }

    pub fn from_integers<I: Into<BigInt>, T: IntoIterator<Item = I>>(coeffs: T) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![BigRational::zero(); degree + 1])
    }

    /// `c x^{degree-i} y^i`.
    pub fn monomial(degree: usize, i: usize, c: BigRational) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[i] = c;
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::NonIntegralResult(self.to_string()));
        }
        Ok(self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Ordinary (commutative) product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Sum of two forms of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    /// The form as a Laurent polynomial in `(x, y)`.
    pub fn to_multipoly(&self) -> Result<MultiPoly> {
        let r = self.degree() as i32;
        let mut out = MultiPoly::zero(2);
        for (i, c) in self.integer_coeffs()?.into_iter().enumerate() {
            out.add_term(vec![r - i as i32, i as i32], c);
        }
        Ok(out)
    }
}

/// Canonical text: descending powers of `x`, zero terms dropped, `*` between factors.
impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.degree() as i64;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = [power("x", r - i as i64), power("y", i as i64)].into_iter().flatten().collect();
            write_term(&mut out, c, &mono.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A sparse Laurent polynomial with big-integer coefficients. Terms are keyed
/// by exponent vectors; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn monomial(exponents: Vec<i32>, c: BigInt) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[i32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exponents: Vec<i32>, c: BigInt) {
        assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest exponent of variable `i` over all terms.
    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[perm[i]] = x;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Replaces variable `i` by `images[i]`. Negative exponents are only allowed
    /// where the image is a monomial with coefficient `±1`.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<BTreeMap<i32, MultiPoly>> = vec![BTreeMap::new(); self.nvars];
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !powers[i].contains_key(&x) {
                    let p = if x > 0 { images[i].pow(x as u32) } else { images[i].unit_inverse()?.pow((-x) as u32) };
                    powers[i].insert(x, p);
                }
                term = &term * &powers[i][&x];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    fn unit_inverse(&self) -> Result<Self> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && c.abs().is_one() => {
                Ok(Self::monomial(e.iter().map(|x| -x).collect(), c.clone()))
            }
            _ => Err(Error::NegativeExponent(-1)),
        }
    }

    /// The lexicographically first exponent vector on which the two disagree,
    /// with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<i32>, BigInt, BigInt)> {
        let keys: std::collections::BTreeSet<&Vec<i32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(e), other.coeff(e));
            (a != b).then(|| (e.clone(), a, b))
        })
    }

    /// `(exponents, coefficient)` sorted lexicographically by exponents.
    pub fn records(&self) -> Vec<(Vec<i32>, BigInt)> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
    }

    /// Canonical text with the given variable names, terms in descending
    /// lexicographic order of exponent vectors.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e.iter().zip(names).filter_map(|(&x, n)| power(n, x as i64)).collect();
            write_term(&mut out, c, &mono.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn binary(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), if negate { -c } else { c.clone() });
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("X{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, other: &MultiPoly) -> MultiPoly {
        self.binary(other, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, other: &MultiPoly) -> MultiPoly {
        self.binary(other, true)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Vec<i32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { nvars: self.nvars, terms: acc }
    }
}
