//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Variables are indexed from 1 and print as `x1`, `x2`, .... Terms live in a
//! `BTreeMap` keyed by [`Monomial`] under graded lexicographic order, so the
//! canonical sparse form (no zero coefficients, deterministic term order) is
//! the representation itself: two polynomials are equal iff their term maps
//! are identical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::Rational;

/// A power product of variables. `exps[i]` is the exponent of `x_{i+1}`;
/// the vector carries no trailing zeros, so the dense encoding is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    /// The empty power product (the constant monomial).
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn var(index: u32) -> Self {
        Self::var_pow(index, 1)
    }

    /// `x_index^exp`. Variable indices are 1-based.
    pub fn var_pow(index: u32, exp: u32) -> Self {
        Self::from_pairs([(index, exp)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs; exponents of the
    /// same variable accumulate and zero exponents are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut exps: SmallVec<[u16; 8]> = SmallVec::new();
        for (var, exp) in pairs {
            assert!(var >= 1, "variable indices are 1-based");
            if exp == 0 {
                continue;
            }
            let exp = u16::try_from(exp).expect("monomial exponent overflow");
            let idx = (var - 1) as usize;
            if exps.len() <= idx {
                exps.resize(idx + 1, 0);
            }
            exps[idx] = exps[idx].checked_add(exp).expect("monomial exponent overflow");
        }
        let mut m = Monomial { exps };
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent of `x_var` (0 if absent).
    pub fn exponent(&self, var: u32) -> u32 {
        assert!(var >= 1, "variable indices are 1-based");
        self.exps.get((var - 1) as usize).copied().unwrap_or(0) as u32
    }

    /// Largest variable index occurring (0 for the unit monomial).
    pub fn max_var(&self) -> u32 {
        self.exps.len() as u32
    }

    /// `(variable, exponent)` pairs with nonzero exponent, ascending by index.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u32 + 1, e as u32))
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (i, &e) in short.exps.iter().enumerate() {
            exps[i] = exps[i].checked_add(e).expect("monomial exponent overflow");
        }
        Monomial { exps }
    }

    /// Substitutes `x_i -> x_{perm(i)}`. Fails if a variable index exceeds
    /// the permutation's size.
    pub fn relabeled(&self, perm: &Permutation) -> Result<Monomial> {
        let k = perm.k();
        let mut pairs = Vec::with_capacity(self.exps.len());
        for (var, exp) in self.pairs() {
            if var > k {
                return Err(Error::IndexOutOfRange { index: var, k });
            }
            pairs.push((perm.image(var), exp));
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

/// Graded lexicographic order: first by total degree, then lexicographically
/// by exponents of `x1`, `x2`, .... This is a monomial order, so multiplying
/// by a fixed monomial preserves it.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (var, exp) in self.pairs() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "x{var}")?;
            } else {
                write!(f, "x{var}^{exp}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in canonical form: a map from monomials to nonzero
/// rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::unit(), c)
    }

    pub fn variable(index: u32) -> Self {
        Self::term(Monomial::var(index), Rational::one())
    }

    /// Single-term polynomial `c * m` (zero if `c` is zero).
    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Merges `c * m` into the polynomial, keeping the canonical form.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest variable index occurring in any term.
    pub fn max_var(&self) -> u32 {
        self.terms.keys().map(Monomial::max_var).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// The value of a constant polynomial; panics if any variable survives.
    pub fn constant_value(&self) -> Rational {
        match self.terms.len() {
            0 => Rational::zero(),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                assert!(m.is_unit(), "polynomial is not constant");
                c.clone()
            }
            _ => panic!("polynomial is not constant"),
        }
    }

    /// `self * c * m`. Multiplying by a fixed monomial preserves the term
    /// order, so this is a straight remap.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    /// `self * (1 - m)`, the workhorse for structural denominator factors.
    pub fn mul_one_minus(&self, m: &Monomial) -> Polynomial {
        let shifted = self.mul_monomial(m, &Rational::one());
        self - &shifted
    }

    pub fn scaled(&self, c: &Rational) -> Polynomial {
        self.mul_monomial(&Monomial::unit(), c)
    }

    /// Exact evaluation. Every variable occurring in the polynomial must be
    /// assigned; power tables are built per variable, so repeated exponents
    /// cost one multiplication each.
    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Result<Rational> {
        let nv = self.max_var() as usize;
        let mut max_exp = vec![0u32; nv];
        for m in self.terms.keys() {
            for (var, exp) in m.pairs() {
                let i = (var - 1) as usize;
                max_exp[i] = max_exp[i].max(exp);
            }
        }
        let mut pows: Vec<Vec<Rational>> = Vec::with_capacity(nv);
        for (i, &me) in max_exp.iter().enumerate() {
            let var = i as u32 + 1;
            let mut table = Vec::with_capacity(me as usize + 1);
            table.push(Rational::one());
            if me > 0 {
                let v = point
                    .get(&var)
                    .ok_or(Error::MissingAssignment(var))?;
                for e in 1..=me as usize {
                    let next = &table[e - 1] * v;
                    table.push(next);
                }
            }
            pows.push(table);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, exp) in m.pairs() {
                v *= &pows[(var - 1) as usize][exp as usize];
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> x_{perm(i)}` in every term.
    pub fn relabeled(&self, perm: &Permutation) -> Result<Polynomial> {
        let mut p = Polynomial::zero();
        for (m, c) in &self.terms {
            p.add_term(m.relabeled(perm)?, c.clone());
        }
        Ok(p)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        // merge the smaller map into a clone of the larger one
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = Polynomial::zero();
        for (mb, cb) in &small.terms {
            for (ma, ca) in &big.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // ascending graded lex, so constants and low-degree terms lead
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
