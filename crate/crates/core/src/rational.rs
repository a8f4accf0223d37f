//! Exact rational scalars.
//!
//! The kernel does all correctness-critical arithmetic in arbitrary-precision
//! rationals; floating point appears only in the Monte Carlo estimator. The
//! wire format is the lowest-terms `p/q` string with the sign on the
//! numerator (`-1/180`), with the `/q` part omitted for integers.

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for small constants.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// An integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lowest-terms wire format: `-1/180`, `2`, `0`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses either an integer (`3`) or a slash rational (`-1/180`). Floats are
/// rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    s.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_is_lowest_terms_with_sign_on_numerator() {
        assert_eq!(format_rational(&rat(-2, 360)), "-1/180");
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(0, 7)), "0");
        assert_eq!(format_rational(&rat(1, -6)), "-1/6");
    }

    #[test]
    fn parse_accepts_integers_and_slash_rationals() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-1/180").unwrap(), rat(-1, 180));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), rat(1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("x").is_err());
    }
}
