//! Exact rationals and a couple of helpers used throughout the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Lowest-terms string with positive denominator, `"p"` when integral.
pub fn to_string(q: &Q) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    q.to_string()
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Q::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub(crate) fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(q))
}

pub(crate) fn serialize_vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(to_string))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_are_lowest_terms() {
        assert_eq!(to_string(&frac(6, -4)), "-3/2");
        assert_eq!(to_string(&frac(4, 2)), "2");
        assert_eq!(to_string(&frac(0, 7)), "0");
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse("-3/2"), Some(frac(-3, 2)));
        assert_eq!(parse(" 5 "), Some(int(5)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
