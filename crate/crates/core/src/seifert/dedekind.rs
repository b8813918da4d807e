//! Dedekind sums `s(b, a) = sum_{k=1}^{a-1} ((k/a)) ((kb/a))`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numerics::ExactRational;

/// `s(b, a)` for `a >= 1`, `gcd(a, b) = 1`, by the reciprocity law
/// `s(b, a) + s(a, b) = -1/4 + (a^2 + b^2 + 1) / (12 a b)`.
pub fn dedekind_sum(b: i64, a: i64) -> Result<ExactRational> {
    if a < 1 {
        return Err(Error::InvalidInput(format!(
            "dedekind_sum needs a >= 1, got {a}"
        )));
    }
    if b.gcd(&a) != 1 {
        return Err(Error::NotCoprime(vec![b.unsigned_abs(), a as u64]));
    }
    let (mut b, mut a) = (b.rem_euclid(a) as i128, a as i128);
    let mut acc = ExactRational::zero();
    let mut sign = 1i64;
    // Invariant: result = acc + sign * s(b, a), with 0 <= b < a.
    while b > 0 && a > 1 {
        let term = ExactRational::new(a * a + b * b + 1, 12 * a * b) - ExactRational::new(1, 4);
        acc = acc + ExactRational::from_integer(sign) * term;
        sign = -sign;
        (a, b) = (b, a % b);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(dedekind_sum(1, 2).unwrap(), ExactRational::zero());
        assert_eq!(dedekind_sum(1, 3).unwrap(), ExactRational::new(1, 18));
        assert_eq!(dedekind_sum(2, 5).unwrap(), ExactRational::zero());
        assert_eq!(dedekind_sum(0, 1).unwrap(), ExactRational::zero());
    }

    #[test]
    fn closed_form_for_one() {
        for a in 2..60i64 {
            let expect = ExactRational::new((a - 1) * (a - 2), 12 * a);
            assert_eq!(dedekind_sum(1, a).unwrap(), expect);
        }
    }

    #[test]
    fn odd_and_periodic() {
        assert_eq!(dedekind_sum(-2, 7).unwrap(), -dedekind_sum(2, 7).unwrap());
        assert_eq!(dedekind_sum(9, 7).unwrap(), dedekind_sum(2, 7).unwrap());
    }

    #[test]
    fn rejects_common_factor() {
        assert!(matches!(dedekind_sum(2, 4), Err(Error::NotCoprime(_))));
        assert!(dedekind_sum(1, 0).is_err());
    }
}
