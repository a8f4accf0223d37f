//! The specialization `x_i := q^{a_i}` followed by multiplication with
//! `(1-q)^k` and the exact limit `q -> 1`.
//!
//! Every substituted expression factors as a sign, a rational scalar, a pure
//! power of `q`, q-integer factors `[s]_q = 1 + q + ... + q^{s-1}`, and a net
//! power of `(1-q)`, via the rewrite `1 - q^s = (1-q) [s]_q`. The limit is
//! then read off factor-wise: `q^m -> 1` and `[s]_q -> s`, finite exactly
//! when the net `(1-q)` exponent is nonnegative. No series expansion, no
//! numerical limiting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::tree_reduce;
use crate::perm::Permutation;
use crate::rational::{int, Rational};

/// The specialization exponents `a = (a_1, ..., a_k)`, positive integers.
/// Order is significant: it fixes the signs of both limits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ExponentVector {
    entries: Vec<u64>,
}

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parse("exponent vector must be nonempty".into()));
        }
        if entries.iter().any(|&a| a == 0) {
            return Err(Error::Parse("exponent entries must be >= 1".into()));
        }
        Ok(ExponentVector { entries })
    }

    pub fn k(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn has_repeats(&self) -> bool {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    /// Suffix sums under a permutation: `s_j = a_{pi(k)} + a_{pi(k-1)} + ...
    /// + a_{pi(k-j+1)}` for `j = 1..k`.
    pub fn suffix_sums(&self, pi: &Permutation) -> Result<Vec<u64>> {
        let k = self.k();
        if pi.k() != k {
            return Err(Error::LengthMismatch {
                expected: k as usize,
                actual: pi.k() as usize,
            });
        }
        let mut sums = Vec::with_capacity(k as usize);
        let mut acc = 0u64;
        for m in (1..=k).rev() {
            acc += self.entries[(pi.image(m) - 1) as usize];
            sums.push(acc);
        }
        Ok(sums)
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `1,2,5`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("invalid exponent {t:?}: {e}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        ExponentVector::new(entries)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// An expression of the form
/// `sign * scalar * q^{q_power} * (1-q)^{one_minus_q_exponent} *
///  prod [s]_q / prod [t]_q`, the factor-wise limit calculus object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFactorization {
    sign: i32,
    scalar: Rational,
    q_power: u64,
    numerator_qints: BTreeMap<u64, u32>,
    denominator_qints: BTreeMap<u64, u32>,
    one_minus_q_exponent: i64,
}

impl QFactorization {
    /// The exact-zero encoding.
    pub fn zero() -> Self {
        QFactorization {
            sign: 1,
            scalar: Rational::zero(),
            q_power: 0,
            numerator_qints: BTreeMap::new(),
            denominator_qints: BTreeMap::new(),
            one_minus_q_exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn q_power(&self) -> u64 {
        self.q_power
    }

    pub fn numerator_qints(&self) -> &BTreeMap<u64, u32> {
        &self.numerator_qints
    }

    pub fn denominator_qints(&self) -> &BTreeMap<u64, u32> {
        &self.denominator_qints
    }

    pub fn one_minus_q_exponent(&self) -> i64 {
        self.one_minus_q_exponent
    }

    /// Multiplies by `(1-q)^exp` (bookkeeping only).
    pub fn mul_one_minus_q(mut self, exp: i64) -> Self {
        if !self.is_zero() {
            self.one_minus_q_exponent += exp;
        }
        self
    }

    /// The exact limit at `q = 1`: `q^m -> 1`, `[s]_q -> s`, `(1-q)^e -> 0`
    /// for `e > 0`. `None` when `e < 0` (the expression diverges).
    pub fn q1_limit(&self) -> Option<Rational> {
        if self.is_zero() || self.one_minus_q_exponent > 0 {
            return Some(Rational::zero());
        }
        if self.one_minus_q_exponent < 0 {
            return None;
        }
        let mut v = if self.sign < 0 {
            -self.scalar.clone()
        } else {
            self.scalar.clone()
        };
        for (&s, &mult) in &self.numerator_qints {
            for _ in 0..mult {
                v *= int(s as i64);
            }
        }
        for (&t, &mult) in &self.denominator_qints {
            for _ in 0..mult {
                v /= int(t as i64);
            }
        }
        Some(v)
    }
}

fn qint_multiset<I: IntoIterator<Item = u64>>(items: I) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    for s in items {
        *out.entry(s).or_insert(0) += 1;
    }
    out
}

/// Substitutes `x_i := q^{a_i}` into one signed left-side term:
/// `sgn(pi) * q^{sum_i i * a_{pi(i)}} / prod_j (1 - q^{s_j})` with the suffix
/// sums `s_j`, each denominator factor rewritten as `(1-q) [s_j]_q`.
pub fn qsubst_lhs_term(pi: &Permutation, a: &ExponentVector) -> Result<QFactorization> {
    let k = pi.k();
    let sums = a.suffix_sums(pi)?;
    let q_power: u64 = (1..=k)
        .map(|i| i as u64 * a.entries()[(pi.image(i) - 1) as usize])
        .sum();
    Ok(QFactorization {
        sign: pi.sign(),
        scalar: Rational::one(),
        q_power,
        numerator_qints: BTreeMap::new(),
        denominator_qints: qint_multiset(sums),
        one_minus_q_exponent: -(k as i64),
    })
}

/// `lim_{q->1} (1-q)^k * (substituted left side)`: the alternating sum of
/// reciprocal suffix-sum products, computed term by term through the factor
/// calculus.
pub fn limit_lhs(a: &ExponentVector) -> Rational {
    let k = a.k();
    let total = Permutation::count(k);
    tree_reduce(
        0..total,
        64,
        &|range| {
            let mut acc = Rational::zero();
            for r in range {
                let pi = Permutation::unrank(k, r);
                let qf = qsubst_lhs_term(&pi, a)
                    .expect("permutation size matches by construction")
                    .mul_one_minus_q(k as i64);
                acc += qf
                    .q1_limit()
                    .expect("net (1-q) exponent is zero after scaling");
            }
            acc
        },
        &|x, y| x + y,
    )
}

/// Substitutes `x_i := q^{a_i}` into the right side. Each factor is rewritten
/// exactly:
/// `1 - q^{a_i} = (1-q)[a_i]_q`, `1 - q^{a_i+a_j} = (1-q)[a_i+a_j]_q`, and
/// `q^{a_j} - q^{a_i} = sign(a_i - a_j) * q^{min(a_i,a_j)} (1-q) [|a_i-a_j|]_q`.
/// Repeated entries make the difference product vanish and yield the exact
/// zero encoding.
pub fn qsubst_rhs(a: &ExponentVector) -> QFactorization {
    if a.has_repeats() {
        return QFactorization::zero();
    }
    let entries = a.entries();
    let k = a.k() as usize;
    let mut sign = 1i32;
    let mut q_power: u64 = entries.iter().sum();
    let mut num_qints = Vec::new();
    let mut den_qints: Vec<u64> = entries.to_vec();
    for i in 0..k {
        for j in i + 1..k {
            let (ai, aj) = (entries[i], entries[j]);
            if ai < aj {
                sign = -sign;
            }
            q_power += ai.min(aj);
            num_qints.push(ai.abs_diff(aj));
            den_qints.push(ai + aj);
        }
    }
    QFactorization {
        sign,
        scalar: Rational::one(),
        q_power,
        numerator_qints: qint_multiset(num_qints),
        denominator_qints: qint_multiset(den_qints),
        one_minus_q_exponent: -(k as i64),
    }
}

/// `lim_{q->1} (1-q)^k * (substituted right side)`:
/// `prod_{i<j}(a_i - a_j) / (prod_i a_i * prod_{i<j}(a_i + a_j))`, zero when
/// entries repeat.
pub fn limit_rhs(a: &ExponentVector) -> Rational {
    qsubst_rhs(a)
        .mul_one_minus_q(a.k() as i64)
        .q1_limit()
        .expect("net (1-q) exponent is zero after scaling")
}

/// Outcome of the limit comparison for one exponent vector.
#[derive(Debug, Clone)]
pub struct LimitCheck {
    pub a: ExponentVector,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

/// Computes both limits and compares them exactly.
pub fn check_limit_identity(a: &ExponentVector) -> LimitCheck {
    let lhs = limit_lhs(a);
    let rhs = limit_rhs(a);
    let equal = lhs == rhs;
    LimitCheck {
        a: a.clone(),
        lhs,
        rhs,
        equal,
    }
}
