//! Rational expressions kept as a polynomial numerator over a multiset of
//! structural denominator factors `1 - prod_{i in S} x_i`.
//!
//! Denominators are never expanded or gcd-reduced: addition takes the
//! multiset maximum of the two denominators and cross-scales only by the
//! complementary factors, and equality is decided by cross-multiplication
//! restricted to the symmetric difference. This sidesteps multivariate gcd
//! entirely while staying exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

/// The factor `1 - prod_{i in S} x_i` for a nonempty index set `S`, encoded
/// as a bit mask (bit `i-1` set means `x_i` participates). Ordered by
/// `(|S|, mask)` so singleton factors sort before pair factors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SubsetFactor {
    mask: u32,
}

impl SubsetFactor {
    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut mask = 0u32;
        for &i in indices {
            assert!((1..=32).contains(&i), "variable index out of representable range");
            mask |= 1 << (i - 1);
        }
        Ok(SubsetFactor { mask })
    }

    /// The contiguous set `{lo..=hi}`.
    pub fn from_range(lo: u32, hi: u32) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(Error::EmptySubset);
        }
        Self::from_indices(&(lo..=hi).collect::<Vec<_>>())
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..32).filter(|b| self.mask & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, var: u32) -> bool {
        var >= 1 && var <= 32 && self.mask & (1 << (var - 1)) != 0
    }

    pub fn max_var(&self) -> u32 {
        32 - self.mask.leading_zeros()
    }

    /// `prod_{i in S} x_i`.
    pub fn product_monomial(&self) -> Monomial {
        Monomial::from_pairs(self.indices().map(|i| (i, 1)))
    }

    /// The expanded polynomial `1 - prod_{i in S} x_i`.
    pub fn expand(&self) -> Polynomial {
        &Polynomial::one() - &Polynomial::term(self.product_monomial(), Rational::one())
    }

    /// Exact value `1 - prod v_i` at a point.
    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Result<Rational> {
        let mut prod = Rational::one();
        for i in self.indices() {
            prod *= point.get(&i).ok_or(Error::MissingAssignment(i))?;
        }
        Ok(Rational::one() - prod)
    }

    /// Maps the index set through a permutation.
    pub fn relabeled(&self, perm: &Permutation) -> Result<SubsetFactor> {
        let k = perm.k();
        let mut mask = 0u32;
        for i in self.indices() {
            if i > k {
                return Err(Error::IndexOutOfRange { index: i, k });
            }
            mask |= 1 << (perm.image(i) - 1);
        }
        Ok(SubsetFactor { mask })
    }
}

impl Ord for SubsetFactor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.mask.cmp(&other.mask))
    }
}

impl PartialOrd for SubsetFactor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 - {}", self.product_monomial())
    }
}

/// Multiset of denominator factors: factor -> multiplicity (>= 1).
pub type FactorMultiset = BTreeMap<SubsetFactor, u32>;

fn multiset_max(a: &FactorMultiset, b: &FactorMultiset) -> FactorMultiset {
    let mut out = a.clone();
    for (f, &m) in b {
        let e = out.entry(*f).or_insert(0);
        *e = (*e).max(m);
    }
    out
}

fn multiset_min(a: &FactorMultiset, b: &FactorMultiset) -> FactorMultiset {
    let mut out = FactorMultiset::new();
    for (f, &m) in a {
        if let Some(&n) = b.get(f) {
            out.insert(*f, m.min(n));
        }
    }
    out
}

/// `a - b`, clamped at zero per factor.
fn multiset_sub(a: &FactorMultiset, b: &FactorMultiset) -> FactorMultiset {
    let mut out = FactorMultiset::new();
    for (f, &m) in a {
        let n = b.get(f).copied().unwrap_or(0);
        if m > n {
            out.insert(*f, m - n);
        }
    }
    out
}

/// `p * prod factor^multiplicity`, expanded one binomial at a time.
fn scale_by_factors(p: &Polynomial, factors: &FactorMultiset) -> Polynomial {
    let mut out = p.clone();
    for (f, &mult) in factors {
        let m = f.product_monomial();
        for _ in 0..mult {
            out = out.mul_one_minus(&m);
        }
    }
    out
}

/// A rational expression `numerator / prod factor^multiplicity` in which the
/// denominator stays factored. The zero expression is canonical: numerator 0
/// and an empty denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredRational {
    numerator: Polynomial,
    denominator: FactorMultiset,
}

impl FactoredRational {
    pub fn zero() -> Self {
        FactoredRational {
            numerator: Polynomial::zero(),
            denominator: FactorMultiset::new(),
        }
    }

    pub fn from_poly(numerator: Polynomial) -> Self {
        Self::new(numerator, [])
    }

    pub fn new<I: IntoIterator<Item = (SubsetFactor, u32)>>(
        numerator: Polynomial,
        denominator: I,
    ) -> Self {
        if numerator.is_zero() {
            return Self::zero();
        }
        let mut den = FactorMultiset::new();
        for (f, mult) in denominator {
            if mult > 0 {
                *den.entry(f).or_insert(0) += mult;
            }
        }
        FactoredRational {
            numerator,
            denominator: den,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator_multiset(&self) -> &FactorMultiset {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Largest variable index occurring anywhere in the expression.
    pub fn max_var(&self) -> u32 {
        self.denominator
            .keys()
            .map(SubsetFactor::max_var)
            .chain([self.numerator.max_var()])
            .max()
            .unwrap_or(0)
    }

    /// Substitutes `x_i -> x_{perm(i)}` in the numerator and every factor.
    pub fn relabeled(&self, perm: &Permutation) -> Result<FactoredRational> {
        let numerator = self.numerator.relabeled(perm)?;
        let mut denominator = FactorMultiset::new();
        for (f, &mult) in &self.denominator {
            *denominator.entry(f.relabeled(perm)?).or_insert(0) += mult;
        }
        Ok(FactoredRational {
            numerator,
            denominator,
        })
    }

    /// Exact value at a point; a vanishing denominator factor is a pole.
    pub fn eval(&self, point: &BTreeMap<u32, Rational>) -> Result<Rational> {
        let mut value = self.numerator.eval(point)?;
        for (f, &mult) in &self.denominator {
            let fv = f.eval(point)?;
            if fv.is_zero() {
                return Err(Error::PoleAtPoint(f.to_string()));
            }
            for _ in 0..mult {
                value /= fv.clone();
            }
        }
        Ok(value)
    }

    /// The two cross-multiplied numerators over the symmetric difference of
    /// the denominators: equality of the expressions as rational functions is
    /// equality of this pair as polynomials.
    fn cross_multiplied(&self, other: &FactoredRational) -> (Polynomial, Polynomial) {
        let common = multiset_min(&self.denominator, &other.denominator);
        let left = scale_by_factors(&self.numerator, &multiset_sub(&other.denominator, &common));
        let right = scale_by_factors(&other.numerator, &multiset_sub(&self.denominator, &common));
        (left, right)
    }

    /// Equality as rational functions (structural denominators are not
    /// required to match; removable factors are fine).
    pub fn eq_rational(&self, other: &FactoredRational) -> bool {
        let (left, right) = self.cross_multiplied(other);
        left == right
    }

    /// First graded-lex monomial at which the cross-multiplied numerators
    /// disagree, with both coefficients; `None` means the expressions are
    /// equal as rational functions.
    pub fn difference_witness(
        &self,
        other: &FactoredRational,
    ) -> Option<(Monomial, Rational, Rational)> {
        let (left, right) = self.cross_multiplied(other);
        let mut li = left.terms().peekable();
        let mut ri = right.terms().peekable();
        loop {
            match (li.peek(), ri.peek()) {
                (None, None) => return None,
                (Some((m, c)), None) => return Some(((*m).clone(), (*c).clone(), Rational::zero())),
                (None, Some((m, c))) => return Some(((*m).clone(), Rational::zero(), (*c).clone())),
                (Some((lm, lc)), Some((rm, rc))) => {
                    if lm == rm {
                        if lc != rc {
                            return Some(((*lm).clone(), (*lc).clone(), (*rc).clone()));
                        }
                        li.next();
                        ri.next();
                    } else if lm < rm {
                        return Some(((*lm).clone(), (*lc).clone(), Rational::zero()));
                    } else {
                        return Some(((*rm).clone(), Rational::zero(), (*rc).clone()));
                    }
                }
            }
        }
    }
}

impl Add for &FactoredRational {
    type Output = FactoredRational;

    /// Common denominator = multiset maximum; each numerator is scaled by the
    /// factors the other side contributes beyond the common part. No gcd
    /// reduction is attempted.
    fn add(self, rhs: &FactoredRational) -> FactoredRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let den = multiset_max(&self.denominator, &rhs.denominator);
        let left = scale_by_factors(&self.numerator, &multiset_sub(&den, &self.denominator));
        let right = scale_by_factors(&rhs.numerator, &multiset_sub(&den, &rhs.denominator));
        FactoredRational::new(&left + &right, den)
    }
}

impl Neg for FactoredRational {
    type Output = FactoredRational;
    fn neg(self) -> FactoredRational {
        FactoredRational {
            numerator: -self.numerator,
            denominator: self.denominator,
        }
    }
}

impl Neg for &FactoredRational {
    type Output = FactoredRational;
    fn neg(self) -> FactoredRational {
        -self.clone()
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({}) / ", self.numerator)?;
        for (i, (factor, &mult)) in self.denominator.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if mult == 1 {
                write!(f, "({factor})")?;
            } else {
                write!(f, "({factor})^{mult}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn factor(indices: &[u32]) -> SubsetFactor {
        SubsetFactor::from_indices(indices).unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::variable(i)
    }

    #[test]
    fn factor_expansion() {
        assert_eq!(factor(&[2]).expand(), &Polynomial::one() - &x(2));
        assert_eq!(
            factor(&[1, 2]).expand(),
            &Polynomial::one() - &(&x(1) * &x(2))
        );
        assert_eq!(
            factor(&[1, 2, 3]).expand(),
            &Polynomial::one() - &(&(&x(1) * &x(2)) * &x(3))
        );
    }

    #[test]
    fn empty_subset_rejected() {
        assert_eq!(SubsetFactor::from_indices(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn factor_order_is_graded() {
        let singles = [factor(&[1]), factor(&[2])];
        let pair = factor(&[1, 2]);
        assert!(singles[0] < singles[1]);
        assert!(singles[1] < pair);
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = FactoredRational::new(x(1), [(factor(&[1]), 1)]);
        let b = FactoredRational::new(-x(1), [(factor(&[1]), 1)]);
        let sum = &a + &b;
        assert!(sum.is_zero());
        assert!(sum.denominator_multiset().is_empty());
    }

    #[test]
    fn add_distinct_denominators() {
        // 1/(1-x1) + 1/(1-x2) = (2 - x1 - x2)/((1-x1)(1-x2))
        let a = FactoredRational::new(Polynomial::one(), [(factor(&[1]), 1)]);
        let b = FactoredRational::new(Polynomial::one(), [(factor(&[2]), 1)]);
        let sum = &a + &b;
        let expect_num = &(&Polynomial::constant(int(2)) - &x(1)) - &x(2);
        assert_eq!(sum.numerator(), &expect_num);
        let den: Vec<_> = sum.denominator_multiset().iter().collect();
        assert_eq!(den, vec![(&factor(&[1]), &1), (&factor(&[2]), &1)]);
    }

    #[test]
    fn add_with_shared_factor() {
        // x1*x2^2/((1-x2)(1-x1x2)) + (-x2*x1^2)/((1-x1)(1-x1x2))
        //   = x1*x2*(x2-x1)/((1-x1)(1-x2)(1-x1x2))
        let a = FactoredRational::new(
            Polynomial::term(Monomial::from_pairs([(1, 1), (2, 2)]), int(1)),
            [(factor(&[2]), 1), (factor(&[1, 2]), 1)],
        );
        let b = FactoredRational::new(
            Polynomial::term(Monomial::from_pairs([(1, 2), (2, 1)]), int(-1)),
            [(factor(&[1]), 1), (factor(&[1, 2]), 1)],
        );
        let sum = &a + &b;

        let mut expect_num = Polynomial::zero();
        expect_num.add_term(Monomial::from_pairs([(1, 1), (2, 2)]), int(1));
        expect_num.add_term(Monomial::from_pairs([(1, 2), (2, 1)]), int(-1));
        assert_eq!(sum.numerator(), &expect_num);

        let den: Vec<_> = sum
            .denominator_multiset()
            .keys()
            .copied()
            .collect();
        assert_eq!(den, vec![factor(&[1]), factor(&[2]), factor(&[1, 2])]);
        assert!(sum.denominator_multiset().values().all(|&m| m == 1));
    }

    #[test]
    fn eval_simple_and_pole() {
        let a = FactoredRational::new(x(1), [(factor(&[1]), 1)]);
        let point = BTreeMap::from([(1, rat(1, 2))]);
        assert_eq!(a.eval(&point).unwrap(), int(1));

        let pole = BTreeMap::from([(1, int(1))]);
        assert!(matches!(a.eval(&pole), Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn eval_three_factor_expression() {
        // x1*x2*(x2-x1)/((1-x1)(1-x2)(1-x1x2)) at (1/2, 1/3) = -1/10
        let mut num = Polynomial::zero();
        num.add_term(Monomial::from_pairs([(1, 1), (2, 2)]), int(1));
        num.add_term(Monomial::from_pairs([(1, 2), (2, 1)]), int(-1));
        let e = FactoredRational::new(
            num,
            [
                (factor(&[1]), 1),
                (factor(&[2]), 1),
                (factor(&[1, 2]), 1),
            ],
        );
        let point = BTreeMap::from([(1, rat(1, 2)), (2, rat(1, 3))]);
        assert_eq!(e.eval(&point).unwrap(), rat(-1, 10));
    }

    #[test]
    fn eq_rational_examples() {
        let e = FactoredRational::new(x(1), [(factor(&[1]), 1)]);
        assert!(e.eq_rational(&e));

        // x1/(1-x1) == x1*(1-x2)/((1-x1)(1-x2))  (removable factor)
        let padded = FactoredRational::new(
            x(1).mul_one_minus(&Monomial::var(2)),
            [(factor(&[1]), 1), (factor(&[2]), 1)],
        );
        assert!(e.eq_rational(&padded));
        assert!(padded.eq_rational(&e));

        let other = FactoredRational::new(x(2), [(factor(&[2]), 1)]);
        assert!(!e.eq_rational(&other));
        let w = e.difference_witness(&other);
        assert!(w.is_some());
    }

    #[test]
    fn witness_none_when_equal() {
        let e = FactoredRational::new(x(1), [(factor(&[1]), 1)]);
        assert_eq!(e.difference_witness(&e), None);
    }
}
