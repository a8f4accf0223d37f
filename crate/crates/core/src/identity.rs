//! Constructs the two sides of the antisymmetrization identity
//!
//! ```text
//!   sum_{pi in S_k} sgn(pi) pi[ x1 x2^2 ... xk^k /
//!       ((1 - x_k)(1 - x_k x_{k-1}) ... (1 - x_k ... x_1)) ]
//!     = x1 ... xk prod_{i<j} (x_j - x_i) /
//!       ( prod_i (1 - x_i) prod_{i<j} (1 - x_i x_j) )
//! ```
//!
//! and verifies their equality, either symbolically (exact cross-multiplied
//! polynomial equality) or numerically (exact rational evaluation at random
//! pole-free points).

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factored::{FactoredRational, SubsetFactor};
use crate::perm::{antisymmetrize, Permutation};
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

/// Default largest `k` for the symbolic route; the summed numerator grows
/// like `k! * 2^k` factor products.
pub const DEFAULT_SYMBOLIC_BUDGET: u32 = 5;
/// Default largest `k` for the numeric route (the `k!`-term evaluation).
pub const DEFAULT_NUMERIC_BUDGET: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Symbolic,
    Numeric,
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyMode::Symbolic => write!(f, "symbolic"),
            VerifyMode::Numeric => write!(f, "numeric"),
        }
    }
}

/// Outcome of one verification run. `equal == false` carries a witness: the
/// first differing monomial (symbolic) or the offending point (numeric).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub k: u32,
    pub mode: VerifyMode,
    pub equal: bool,
    pub lhs_term_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerator_monomials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_tested: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_s: f64,
}

/// The unsigned base term of the left side: numerator `x1 x2^2 ... xk^k`,
/// denominator factors over the index suffixes `{k}`, `{k-1,k}`, ...,
/// `{1..k}`.
pub fn lhs_base(k: u32) -> FactoredRational {
    assert!(k >= 1);
    let num = Polynomial::term(
        Monomial::from_pairs((1..=k).map(|i| (i, i))),
        Rational::one(),
    );
    let den = (1..=k).map(|j| (SubsetFactor::from_range(k - j + 1, k).unwrap(), 1));
    FactoredRational::new(num, den)
}

/// `sgn(pi) * relabel(base, pi)`, one summand of the left side.
pub fn lhs_term(k: u32, pi: &Permutation) -> Result<FactoredRational> {
    let t = lhs_base(k).relabeled(pi)?;
    Ok(if pi.sign() < 0 { -t } else { t })
}

/// The full antisymmetrized left side as a single factored rational.
pub fn build_lhs(k: u32) -> FactoredRational {
    antisymmetrize(&lhs_base(k), k).expect("base term variables lie within 1..=k")
}

/// The right side: `x1...xk prod_{i<j}(x_j - x_i)` expanded over singleton
/// and pair factors.
pub fn build_rhs(k: u32) -> FactoredRational {
    assert!(k >= 1);
    let mut num = Polynomial::term(
        Monomial::from_pairs((1..=k).map(|i| (i, 1))),
        Rational::one(),
    );
    for i in 1..=k {
        for j in i + 1..=k {
            let diff = &Polynomial::variable(j) - &Polynomial::variable(i);
            num = &num * &diff;
        }
    }
    let mut den = Vec::new();
    for i in 1..=k {
        den.push((SubsetFactor::from_indices(&[i]).unwrap(), 1));
        for j in i + 1..=k {
            den.push((SubsetFactor::from_indices(&[i, j]).unwrap(), 1));
        }
    }
    FactoredRational::new(num, den)
}

/// Exact symbolic verification: builds both sides and compares them as
/// rational functions by cross-multiplication.
pub fn verify_symbolic(k: u32, budget: u32) -> Result<VerificationReport> {
    assert!(k >= 1);
    if k > budget {
        return Err(Error::BudgetExceeded { k, budget });
    }
    let start = Instant::now();
    let lhs = build_lhs(k);
    let rhs = build_rhs(k);
    let witness = lhs
        .difference_witness(&rhs)
        .map(|(m, lc, rc)| format!("monomial {m}: lhs coefficient {lc}, rhs coefficient {rc}"));
    Ok(VerificationReport {
        k,
        mode: VerifyMode::Symbolic,
        equal: witness.is_none(),
        lhs_term_count: Permutation::count(k),
        numerator_monomials: Some(lhs.numerator().nterms() as u64),
        points_tested: None,
        witness,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Evaluates the left side at a point by an exact regrouping of the `k!`-term
/// sum. Errors on a pole.
///
/// Permutations are built by filling positions `k, k-1, ..., 1`; after `j`
/// placements the denominator factor `1 - x_{pi(k)} ... x_{pi(k-j+1)}`
/// depends only on the *set* `S` of placed elements, so the sum collapses to
/// a recursion over subsets:
///
/// ```text
///   W(∅) = 1
///   W(S) = Σ_{t ∈ S} (-1)^{|{s ∈ S: s < t}|} v_t^{k-|S|+1} W(S \ {t})
///          / (1 - Π_{s ∈ S} v_s)
/// ```
///
/// and the left side equals `W({1..k})`. This is `O(2^k k)` exact rational
/// operations instead of `k!`, with identical value and identical pole set
/// (every nonempty subset is some permutation's suffix set).
pub fn eval_lhs(k: u32, point: &BTreeMap<u32, Rational>) -> Result<Rational> {
    let mut coords = Vec::with_capacity(k as usize);
    for i in 1..=k {
        coords.push(point.get(&i).ok_or(Error::MissingAssignment(i))?.clone());
    }
    // power tables v_i^e for e <= k
    let pows: Vec<Vec<Rational>> = coords
        .iter()
        .map(|v| {
            let mut t = Vec::with_capacity(k as usize + 1);
            t.push(Rational::one());
            for e in 1..=k as usize {
                let next = &t[e - 1] * v;
                t.push(next);
            }
            t
        })
        .collect();
    let n = 1usize << k;
    // subset coordinate products via the low-bit recurrence
    let mut subset_prod = vec![Rational::one(); n];
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        subset_prod[mask] = &subset_prod[mask & (mask - 1)] * &coords[low];
    }
    let mut w = vec![Rational::zero(); n];
    w[0] = Rational::one();
    for mask in 1..n {
        let size = mask.count_ones();
        let position = (k - size + 1) as usize;
        let mut acc = Rational::zero();
        let mut bits = mask;
        let mut rank = 0u32;
        while bits != 0 {
            let low = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let term = &pows[low][position] * &w[mask & !(1 << low)];
            if rank % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            rank += 1;
        }
        let factor = Rational::one() - &subset_prod[mask];
        if factor.is_zero() {
            let set: Vec<u32> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect();
            return Err(Error::PoleAtPoint(
                SubsetFactor::from_indices(&set).unwrap().to_string(),
            ));
        }
        w[mask] = acc / factor;
    }
    Ok(w[n - 1].clone())
}

/// Evaluates the right side at a point from its factor structure,
/// `prod v_i prod (v_j - v_i) / (prod (1 - v_i) prod (1 - v_i v_j))`,
/// without touching the expanded numerator. Exactly the same rational
/// function as `build_rhs(k)`, at `O(k^2)` cost per point.
pub fn eval_rhs(k: u32, point: &BTreeMap<u32, Rational>) -> Result<Rational> {
    let mut coords = Vec::with_capacity(k as usize);
    for i in 1..=k {
        coords.push(point.get(&i).ok_or(Error::MissingAssignment(i))?.clone());
    }
    let mut num = Rational::one();
    for v in &coords {
        num *= v;
    }
    for i in 0..k as usize {
        for j in i + 1..k as usize {
            num *= &coords[j] - &coords[i];
        }
    }
    let mut den = Rational::one();
    for i in 1..=k {
        let f = SubsetFactor::from_indices(&[i]).unwrap();
        let fv = f.eval(point)?;
        if fv.is_zero() {
            return Err(Error::PoleAtPoint(f.to_string()));
        }
        den *= fv;
        for j in i + 1..=k {
            let f = SubsetFactor::from_indices(&[i, j]).unwrap();
            let fv = f.eval(point)?;
            if fv.is_zero() {
                return Err(Error::PoleAtPoint(f.to_string()));
            }
            den *= fv;
        }
    }
    Ok(num / den)
}

/// True when some factor `1 - prod_{i in S} v_i` vanishes for a nonempty
/// subset `S` of the coordinates, i.e. the point lies on a pole of either
/// side.
fn hits_pole(coords: &[Rational]) -> bool {
    let k = coords.len();
    let n = 1usize << k;
    let mut prod = vec![Rational::one(); n];
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        prod[mask] = &prod[mask & (mask - 1)] * &coords[low];
        if prod[mask].is_one() {
            return true;
        }
    }
    false
}

/// Numeric verification: samples `trials` random rational points with
/// coordinates `n/d`, `1 <= n < d <= 97`, rejects pole points, and asserts
/// exact equality of both sides at every accepted point.
pub fn verify_numeric(k: u32, trials: u64, seed: u64) -> Result<VerificationReport> {
    assert!(k >= 1 && trials >= 1);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<Rational>> = Vec::with_capacity(trials as usize);
    let mut rejected = 0u64;
    while (points.len() as u64) < trials {
        if rejected > 100 * trials {
            return Err(Error::DegeneratePointExhaustion(rejected));
        }
        let coords: Vec<Rational> = (0..k)
            .map(|_| {
                let d = rng.gen_range(2..=97u64);
                let n = rng.gen_range(1..d);
                Rational::new(n.into(), d.into())
            })
            .collect();
        if hits_pole(&coords) {
            rejected += 1;
            continue;
        }
        points.push(coords);
    }

    let outcomes: Vec<Result<Option<String>>> = points
        .par_iter()
        .map(|coords| {
            let point: BTreeMap<u32, Rational> = coords
                .iter()
                .enumerate()
                .map(|(i, v)| (i as u32 + 1, v.clone()))
                .collect();
            let lv = eval_lhs(k, &point)?;
            let rv = eval_rhs(k, &point)?;
            if lv == rv {
                return Ok(None);
            }
            let loc: Vec<String> = coords
                .iter()
                .enumerate()
                .map(|(i, v)| format!("x{}={}", i + 1, v))
                .collect();
            Ok(Some(format!("point {}: lhs {}, rhs {}", loc.join(", "), lv, rv)))
        })
        .collect();
    let mut equal = true;
    let mut witness = None;
    for outcome in outcomes {
        if let Some(w) = outcome? {
            equal = false;
            witness = Some(w);
            break;
        }
    }
    Ok(VerificationReport {
        k,
        mode: VerifyMode::Numeric,
        equal,
        lhs_term_count: Permutation::count(k),
        numerator_monomials: None,
        points_tested: Some(points.len() as u64),
        witness,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn factor(indices: &[u32]) -> SubsetFactor {
        SubsetFactor::from_indices(indices).unwrap()
    }

    #[test]
    fn lhs_term_k1_identity() {
        let t = lhs_term(1, &Permutation::identity(1)).unwrap();
        let expect = FactoredRational::new(Polynomial::variable(1), [(factor(&[1]), 1)]);
        assert_eq!(t, expect);
    }

    #[test]
    fn lhs_term_k2_identity() {
        let t = lhs_term(2, &Permutation::identity(2)).unwrap();
        let expect = FactoredRational::new(
            Polynomial::term(Monomial::from_pairs([(1, 1), (2, 2)]), int(1)),
            [(factor(&[2]), 1), (factor(&[1, 2]), 1)],
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn lhs_term_k2_swap() {
        let swap = Permutation::from_images(vec![2, 1]).unwrap();
        let t = lhs_term(2, &swap).unwrap();
        let expect = FactoredRational::new(
            Polynomial::term(Monomial::from_pairs([(1, 2), (2, 1)]), int(-1)),
            [(factor(&[1]), 1), (factor(&[1, 2]), 1)],
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn build_lhs_k1() {
        let lhs = build_lhs(1);
        let expect = FactoredRational::new(Polynomial::variable(1), [(factor(&[1]), 1)]);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn build_lhs_k2_closed_form() {
        // x1*x2*(x2-x1) / ((1-x1)(1-x2)(1-x1x2))
        let lhs = build_lhs(2);
        let mut num = Polynomial::zero();
        num.add_term(Monomial::from_pairs([(1, 1), (2, 2)]), int(1));
        num.add_term(Monomial::from_pairs([(1, 2), (2, 1)]), int(-1));
        let expect = FactoredRational::new(
            num,
            [
                (factor(&[1]), 1),
                (factor(&[2]), 1),
                (factor(&[1, 2]), 1),
            ],
        );
        assert_eq!(lhs, expect);
    }

    #[test]
    fn build_rhs_small() {
        let rhs1 = build_rhs(1);
        assert_eq!(
            rhs1,
            FactoredRational::new(Polynomial::variable(1), [(factor(&[1]), 1)])
        );
        // k = 2 matches the LHS representation exactly
        assert_eq!(build_rhs(2), build_lhs(2));
    }

    #[test]
    fn rhs_k3_numerator_is_expanded_product() {
        let rhs = build_rhs(3);
        let x = Polynomial::variable;
        let mut expect = Polynomial::term(Monomial::from_pairs([(1, 1), (2, 1), (3, 1)]), int(1));
        for (i, j) in [(1u32, 2u32), (1, 3), (2, 3)] {
            expect = &expect * &(&x(j) - &x(i));
        }
        assert_eq!(rhs.numerator(), &expect);
        // denominator: 3 singletons + 3 pairs
        assert_eq!(rhs.denominator_multiset().len(), 6);
    }

    #[test]
    fn verify_symbolic_small_k() {
        for k in 1..=3 {
            let r = verify_symbolic(k, DEFAULT_SYMBOLIC_BUDGET).unwrap();
            assert!(r.equal, "identity must hold at k={k}");
            assert_eq!(r.lhs_term_count, Permutation::count(k));
        }
    }

    #[test]
    fn verify_symbolic_budget() {
        assert!(matches!(
            verify_symbolic(6, 5),
            Err(Error::BudgetExceeded { k: 6, budget: 5 })
        ));
    }

    #[test]
    fn lhs_denominator_subsets_after_summation() {
        // all factors distinct (multiplicity 1) subsets of {1..k}
        for k in 2..=4u32 {
            let lhs = build_lhs(k);
            for (f, &mult) in lhs.denominator_multiset() {
                assert_eq!(mult, 1);
                assert!(f.max_var() <= k);
            }
        }
    }

    #[test]
    fn both_sides_alternate_under_transpositions() {
        for k in 2..=4u32 {
            let lhs = build_lhs(k);
            let rhs = build_rhs(k);
            for i in 1..=k {
                for j in i + 1..=k {
                    let tau = Permutation::transposition(k, i, j);
                    assert_eq!(lhs.relabeled(&tau).unwrap(), -lhs.clone());
                    assert_eq!(rhs.relabeled(&tau).unwrap(), -rhs.clone());
                }
            }
        }
    }

    /// The literal factored sum over all k! permutations, as an oracle for
    /// the subset recursion in `eval_lhs`.
    fn naive_lhs_eval(k: u32, point: &BTreeMap<u32, Rational>) -> Rational {
        let mut termwise = Rational::zero();
        for pi in Permutation::all(k) {
            termwise += lhs_term(k, &pi).unwrap().eval(point).unwrap();
        }
        termwise
    }

    #[test]
    fn eval_lhs_matches_symbolic_sum() {
        let point = BTreeMap::from([(1, rat(1, 2)), (2, rat(1, 3)), (3, rat(2, 5))]);
        for k in 1..=3u32 {
            let direct = eval_lhs(k, &point).unwrap();
            let symbolic = build_lhs(k).eval(&point).unwrap();
            assert_eq!(direct, symbolic);
            assert_eq!(direct, naive_lhs_eval(k, &point));
        }
    }

    #[test]
    fn eval_lhs_matches_naive_term_sum_k5() {
        let point = BTreeMap::from([
            (1, rat(1, 2)),
            (2, rat(1, 3)),
            (3, rat(2, 5)),
            (4, rat(5, 7)),
            (5, rat(3, 11)),
        ]);
        for k in 4..=5u32 {
            assert_eq!(eval_lhs(k, &point).unwrap(), naive_lhs_eval(k, &point));
        }
    }

    #[test]
    fn both_sides_agree_at_a_pinned_point() {
        // k = 2 at (1/2, 1/3): both sides evaluate to -1/10
        let point = BTreeMap::from([(1, rat(1, 2)), (2, rat(1, 3))]);
        assert_eq!(eval_lhs(2, &point).unwrap(), rat(-1, 10));
        assert_eq!(build_rhs(2).eval(&point).unwrap(), rat(-1, 10));
        assert_eq!(eval_rhs(2, &point).unwrap(), rat(-1, 10));
    }

    #[test]
    fn eval_rhs_matches_expanded_polynomial_route() {
        let point = BTreeMap::from([
            (1, rat(1, 2)),
            (2, rat(1, 3)),
            (3, rat(2, 5)),
            (4, rat(5, 7)),
        ]);
        for k in 1..=4u32 {
            assert_eq!(
                eval_rhs(k, &point).unwrap(),
                build_rhs(k).eval(&point).unwrap()
            );
        }
    }

    #[test]
    fn verify_numeric_seeded() {
        for k in 1..=5 {
            let r = verify_numeric(k, 8, 42).unwrap();
            assert!(r.equal, "numeric check failed at k={k}: {:?}", r.witness);
            assert_eq!(r.points_tested, Some(8));
        }
    }

    #[test]
    fn pole_detection() {
        assert!(hits_pole(&[int(1)]));
        assert!(hits_pole(&[int(2), rat(1, 2)]));
        assert!(!hits_pole(&[rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn eval_lhs_reports_pole() {
        let point = BTreeMap::from([(1, int(2)), (2, rat(1, 2))]);
        // x1*x2 = 1 puts the point on the pair factor's zero set
        assert!(matches!(
            eval_lhs(2, &point),
            Err(Error::PoleAtPoint(_))
        ));
    }
}
