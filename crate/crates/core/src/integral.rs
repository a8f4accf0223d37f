//! The limit value as an ordered-simplex integral, evaluated four mutually
//! checking ways:
//!
//! * `closed_form` — the product formula
//!   `prod_{i<j}(a_i - a_j) / (prod_i a_i * prod_{i<j}(a_i + a_j))`;
//! * `perm_sum` — the alternating sum of reciprocal suffix-sum products;
//! * `nested_simplex_integrate` — exact iterated integration of the
//!   determinant `det(t_i^{a_j - 1})` over `0 <= t_1 <= ... <= t_k <= 1`,
//!   using nothing but monomial antiderivatives (independent of the
//!   suffix-sum shortcut);
//! * `mc_estimate` — Monte Carlo over sorted uniform samples, floating point
//!   by design, with a statistical tolerance.
//!
//! The simplex integral differs from the closed form by exactly
//! `(-1)^{k(k-1)/2}` (the reversal permutation relating prefix sums to
//! suffix sums); `cross_check` asserts that relation rather than assuming it.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parallel::tree_reduce;
use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial};
use crate::rational::{int, parse_rational, Rational};

/// Identifies the sample RNG scheme in reports: one independent ChaCha8
/// stream per sample index, so estimates are reproducible for a fixed
/// `(seed, n)` whatever the worker count.
pub const MC_RNG_LABEL: &str = "chacha8(seed, stream=sample_index)";

/// Exponents `a = (a_1, ..., a_k)`, positive rationals. Order is significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExponentVector {
    entries: Vec<Rational>,
}

impl RationalExponentVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parse("exponent vector must be nonempty".into()));
        }
        if entries.iter().any(|a| !a.is_positive()) {
            return Err(Error::Parse("exponent entries must be positive".into()));
        }
        Ok(RationalExponentVector { entries })
    }

    pub fn from_integers(entries: &[u64]) -> Self {
        RationalExponentVector {
            entries: entries.iter().map(|&a| int(a as i64)).collect(),
        }
    }

    pub fn k(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// `Some` iff every entry is a positive integer.
    pub fn as_integer_entries(&self) -> Option<Vec<u64>> {
        self.entries
            .iter()
            .map(|a| {
                if a.is_integer() {
                    a.numer().to_u64()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl FromStr for RationalExponentVector {
    type Err = Error;

    /// Comma-separated integers or slash rationals, e.g. `1/2,3/2`. Floats
    /// are never accepted.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<Rational>>>()?;
        RationalExponentVector::new(entries)
    }
}

impl fmt::Display for RationalExponentVector {
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

/// `prod_{i<j}(a_i - a_j) / (prod_i a_i * prod_{i<j}(a_i + a_j))`; zero iff
/// entries repeat.
pub fn closed_form(a: &RationalExponentVector) -> Rational {
    let e = a.entries();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for ai in e {
        den *= ai;
    }
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            num *= &e[i] - &e[j];
            den *= &e[i] + &e[j];
        }
    }
    num / den
}

/// `sum_{pi in S_k} sgn(pi) / prod_j s_j(pi)` with the suffix sums
/// `s_j(pi) = a_{pi(k)} + ... + a_{pi(k-j+1)}`.
pub fn perm_sum(a: &RationalExponentVector) -> Rational {
    let k = a.k();
    let entries = a.entries();
    tree_reduce(
        0..Permutation::count(k),
        64,
        &|range| {
            let mut acc = Rational::zero();
            for r in range {
                let pi = Permutation::unrank(k, r);
                let mut suffix = Rational::zero();
                let mut prod = Rational::one();
                for m in (1..=k).rev() {
                    suffix += &entries[(pi.image(m) - 1) as usize];
                    prod *= &suffix;
                }
                if pi.sign() < 0 {
                    acc -= prod.recip();
                } else {
                    acc += prod.recip();
                }
            }
            acc
        },
        &|x, y| x + y,
    )
}

/// The expanded determinant `det(t_i^{a_j - 1}) = sum_pi sgn(pi) prod_i
/// t_i^{a_{pi(i)} - 1}` as a polynomial in `t_1..t_k`. Entries must be
/// positive integers so every exponent is a nonnegative integer.
pub fn det_polynomial(a: &RationalExponentVector) -> Result<Polynomial> {
    let ints = a.as_integer_entries().ok_or(Error::NonIntegerExponent)?;
    let k = a.k();
    let mut p = Polynomial::zero();
    for pi in Permutation::all(k) {
        let m = Monomial::from_pairs(
            (1..=k).map(|i| (i, (ints[(pi.image(i) - 1) as usize] - 1) as u32)),
        );
        p.add_term(m, int(pi.sign() as i64));
    }
    Ok(p)
}

/// Exact `∫_0^1 ∫_0^{t_k} ... ∫_0^{t_2} p dt_1 ... dt_k` by `k` rounds of
/// monomial antiderivative and bound substitution. The lower bounds
/// contribute nothing (every antiderivative carries a positive exponent).
pub fn nested_simplex_integrate(p: &Polynomial, k: u32) -> Rational {
    assert!(k >= 1);
    assert!(
        p.max_var() <= k,
        "integrand mentions variables beyond t_{k}"
    );
    let mut cur = p.clone();
    for i in 1..=k {
        let mut next = Polynomial::zero();
        for (m, c) in cur.terms() {
            let e = m.exponent(i);
            let coeff = c / int((e + 1) as i64);
            let mut pairs: Vec<(u32, u32)> = m.pairs().filter(|&(v, _)| v != i).collect();
            if i < k {
                // substitute the upper bound t_i := t_{i+1}
                pairs.push((i + 1, e + 1));
            }
            next.add_term(Monomial::from_pairs(pairs), coeff);
        }
        cur = next;
    }
    cur.constant_value()
}

/// A Monte Carlo estimate with its standard error (both already divided by
/// `k!`, the sorted-uniform density on the ordered simplex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

fn pow_entry(t: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() < 2_147_483_647.0 {
        t.powi(e as i32)
    } else {
        t.powf(e)
    }
}

/// Laplace expansion along rows, columns masked off as they are consumed.
fn det_cofactor(a: &[f64], n: usize, row: usize, used_cols: u32) -> f64 {
    if row == n {
        return 1.0;
    }
    let mut acc = 0.0;
    let mut pos = 0u32;
    for c in 0..n {
        if used_cols & (1 << c) != 0 {
            continue;
        }
        let v = a[row * n + c];
        if v != 0.0 {
            let minor = det_cofactor(a, n, row + 1, used_cols | (1 << c));
            acc += if pos % 2 == 0 { v * minor } else { -v * minor };
        }
        pos += 1;
    }
    acc
}

/// Gaussian elimination with partial pivoting, for matrices too large for
/// cofactor expansion.
fn det_elimination(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .abs()
                    .partial_cmp(&a[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        det *= a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            for c in col..n {
                a[r * n + c] -= f * a[col * n + c];
            }
        }
    }
    det
}

fn det_value(t: &[f64], exps: &[f64], scratch: &mut Vec<f64>) -> f64 {
    let n = t.len();
    scratch.clear();
    scratch.extend((0..n * n).map(|idx| pow_entry(t[idx / n], exps[idx % n])));
    if n <= 6 {
        det_cofactor(scratch, n, 0, 0)
    } else {
        det_elimination(scratch, n)
    }
}

/// Monte Carlo estimate of the ordered-simplex integral of
/// `det(t_i^{a_j - 1})`: draws `samples` uniform points in the cube, sorts
/// each coordinate tuple ascending, averages the determinant, and divides by
/// `k!`. Each sample uses its own ChaCha8 stream and partial sums combine
/// over a fixed tree, so results are bit-reproducible for a fixed
/// `(seed, samples)` under any worker count.
pub fn mc_estimate(a: &RationalExponentVector, samples: u64, seed: u64) -> McEstimate {
    assert!(samples >= 1);
    let k = a.k() as usize;
    let exps: Vec<f64> = a
        .entries()
        .iter()
        .map(|e| e.to_f64().expect("exponent fits in f64") - 1.0)
        .collect();
    let (sum, sum_sq) = tree_reduce(
        0..samples,
        4096,
        &|range| {
            let mut s = 0.0f64;
            let mut s2 = 0.0f64;
            let mut t = vec![0.0f64; k];
            let mut scratch = Vec::with_capacity(k * k);
            for i in range {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                for x in t.iter_mut() {
                    *x = rng.gen::<f64>();
                }
                t.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                let v = det_value(&t, &exps, &mut scratch);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        },
        &|(s_a, q_a), (s_b, q_b)| (s_a + s_b, q_a + q_b),
    );
    let n = samples as f64;
    let mean = sum / n;
    let variance = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let k_factorial = Permutation::count(a.k()) as f64;
    McEstimate {
        estimate: mean / k_factorial,
        stderr: (variance / n).sqrt() / k_factorial,
        samples,
        seed,
    }
}

/// The aggregated four-way comparison for one exponent vector. The exact
/// paths must agree exactly; Monte Carlo must land within four standard
/// errors of the exact integral.
#[derive(Debug, Clone)]
pub struct IntegralCheck {
    pub a: RationalExponentVector,
    pub closed: Rational,
    pub perm: Rational,
    pub closed_eq_perm: bool,
    /// `(-1)^{k(k-1)/2}`, relating the simplex integral to the closed form.
    pub sign_factor: i32,
    pub nested: Option<Rational>,
    pub nested_matches: Option<bool>,
    pub mc: Option<McEstimate>,
    pub mc_within: Option<bool>,
    pub agree: bool,
}

/// Runs every applicable path. `closed_form` and `perm_sum` always run; the
/// integration paths need positive integer entries.
pub fn cross_check(a: &RationalExponentVector, samples: u64, seed: u64) -> IntegralCheck {
    let closed = closed_form(a);
    let perm = perm_sum(a);
    let closed_eq_perm = closed == perm;
    let k = a.k();
    let sign_factor = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };

    let mut nested = None;
    let mut nested_matches = None;
    let mut mc = None;
    let mut mc_within = None;
    if a.as_integer_entries().is_some() {
        let integrand = det_polynomial(a).expect("entries are integers");
        let value = nested_simplex_integrate(&integrand, k);
        let expected = if sign_factor < 0 {
            -perm.clone()
        } else {
            perm.clone()
        };
        nested_matches = Some(value == expected);
        let est = mc_estimate(a, samples, seed);
        let exact = value.to_f64().expect("integral value fits in f64");
        mc_within = Some((est.estimate - exact).abs() <= 4.0 * est.stderr);
        nested = Some(value);
        mc = Some(est);
    }

    let agree = closed_eq_perm && nested_matches.unwrap_or(true) && mc_within.unwrap_or(true);
    IntegralCheck {
        a: a.clone(),
        closed,
        perm,
        closed_eq_perm,
        sign_factor,
        nested,
        nested_matches,
        mc,
        mc_within,
        agree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn rv(s: &str) -> RationalExponentVector {
        s.parse().unwrap()
    }

    #[test]
    fn parse_rational_vectors() {
        assert_eq!(rv("1,2").entries(), &[int(1), int(2)]);
        assert_eq!(rv("1/2,3/2").entries(), &[rat(1, 2), rat(3, 2)]);
        assert!("0,1".parse::<RationalExponentVector>().is_err());
        assert!("-1/2".parse::<RationalExponentVector>().is_err());
        assert!("0.5".parse::<RationalExponentVector>().is_err());
        assert_eq!(rv("1/2,3/2").to_string(), "1/2,3/2");
    }

    #[test]
    fn integer_entry_detection() {
        assert_eq!(rv("1,2,3").as_integer_entries(), Some(vec![1, 2, 3]));
        assert_eq!(rv("1/2,3/2").as_integer_entries(), None);
    }

    #[test]
    fn closed_form_pinned_values() {
        assert_eq!(closed_form(&rv("1,2")), rat(-1, 6));
        assert_eq!(closed_form(&rv("2,2")), rat(0, 1));
        assert_eq!(closed_form(&rv("1,2,3")), rat(-1, 180));
        assert_eq!(closed_form(&rv("1/2,3/2")), rat(-2, 3));
        assert_eq!(closed_form(&rv("2,4")), rat(-1, 24));
    }

    #[test]
    fn perm_sum_pinned_values() {
        assert_eq!(perm_sum(&rv("5")), rat(1, 5));
        assert_eq!(perm_sum(&rv("1,2")), rat(-1, 6));
        assert_eq!(perm_sum(&rv("1,2,3")), rat(-1, 180));
    }

    #[test]
    fn perm_sum_matches_closed_form_on_rationals() {
        for a in ["1/2,3/2", "1/3,2/3,5/3", "3/7,2", "5/2"] {
            let a = rv(a);
            assert_eq!(perm_sum(&a), closed_form(&a), "mismatch for a={a}");
        }
    }

    #[test]
    fn perm_sum_with_repeats_is_zero() {
        assert_eq!(perm_sum(&rv("2,2")), rat(0, 1));
        assert_eq!(perm_sum(&rv("1,3,3")), rat(0, 1));
    }

    #[test]
    fn det_polynomial_small_cases() {
        let x = Polynomial::variable;
        assert_eq!(det_polynomial(&rv("1,2")).unwrap(), &x(2) - &x(1));

        let sq = |i| Polynomial::term(Monomial::var_pow(i, 2), int(1));
        assert_eq!(det_polynomial(&rv("1,3")).unwrap(), &sq(2) - &sq(1));

        // classical: det(t_i^{j-1}) is the Vandermonde product
        let mut vdm = Polynomial::one();
        for (i, j) in [(1u32, 2u32), (1, 3), (2, 3)] {
            vdm = &vdm * &(&x(j) - &x(i));
        }
        assert_eq!(det_polynomial(&rv("1,2,3")).unwrap(), vdm);
    }

    #[test]
    fn det_polynomial_rejects_non_integers() {
        assert_eq!(det_polynomial(&rv("1/2,3/2")), Err(Error::NonIntegerExponent));
    }

    #[test]
    fn nested_integration_pinned_values() {
        // simplex volume
        assert_eq!(nested_simplex_integrate(&Polynomial::one(), 2), rat(1, 2));
        // int_0^1 int_0^{t2} (t2 - t1) = 1/6
        let p = &Polynomial::variable(2) - &Polynomial::variable(1);
        assert_eq!(nested_simplex_integrate(&p, 2), rat(1, 6));
        // Vandermonde in three variables
        let vdm = det_polynomial(&rv("1,2,3")).unwrap();
        let got = nested_simplex_integrate(&vdm, 3);
        assert_eq!(got, rat(1, 180));
        assert_eq!(got, perm_sum(&rv("1,2,3")).abs());
    }

    #[test]
    fn nested_matches_signed_perm_sum() {
        for a in ["1,2", "1,2,3", "2,4", "1,3,4", "2,3,5,6"] {
            let a = rv(a);
            let k = a.k();
            let value = nested_simplex_integrate(&det_polynomial(&a).unwrap(), k);
            let sign = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(value, perm_sum(&a) * int(sign), "sign relation failed for {a}");
        }
    }

    #[test]
    fn alternation_and_homogeneity() {
        let a = rv("1,4,2");
        let swapped = rv("4,1,2");
        assert_eq!(closed_form(&a), -closed_form(&swapped));
        assert_eq!(perm_sum(&a), -perm_sum(&swapped));
        assert_eq!(
            det_polynomial(&a).unwrap(),
            -det_polynomial(&swapped).unwrap()
        );

        // closed_form(lambda a) = lambda^{-k} closed_form(a)
        let scaled = rv("3,12,6");
        assert_eq!(closed_form(&scaled), closed_form(&a) / int(27));
    }

    #[test]
    fn mc_is_deterministic_and_sane() {
        let a = rv("3");
        let e1 = mc_estimate(&a, 20_000, 7);
        let e2 = mc_estimate(&a, 20_000, 7);
        assert_eq!(e1.estimate.to_bits(), e2.estimate.to_bits());
        assert_eq!(e1.stderr.to_bits(), e2.stderr.to_bits());
        // exact value 1/3
        assert!((e1.estimate - 1.0 / 3.0).abs() <= 3.0 * e1.stderr);
    }

    #[test]
    fn mc_zero_integrand() {
        let e = mc_estimate(&rv("2,2"), 5_000, 1);
        assert_eq!(e.estimate, 0.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn cross_check_small() {
        let c = cross_check(&rv("1,2"), 50_000, 11);
        assert!(c.agree, "cross check failed: {c:?}");
        assert_eq!(c.closed, rat(-1, 6));
        assert_eq!(c.perm, rat(-1, 6));
        assert_eq!(c.nested, Some(rat(1, 6)));
        assert_eq!(c.sign_factor, -1);

        let c = cross_check(&rv("1/2,3/2"), 1, 0);
        assert!(c.agree);
        assert!(c.nested.is_none());
        assert!(c.mc.is_none());
    }
}
