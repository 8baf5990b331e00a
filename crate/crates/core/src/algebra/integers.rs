use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{sample_small_biased, AlgebraError, PartialAlgebra, Prng};

/// The integers with `a/b = a * b^-1`, defined only for `b = 1` or `b = -1`.
#[derive(Clone, Debug, Default)]
pub struct IntInverse;

/// The integers with `a/b` the unique `c` such that `c * b = a`, undefined
/// when there is no such `c` (including every `b = 0`).
#[derive(Clone, Debug, Default)]
pub struct IntDirect;

pub fn make_int_inverse_division() -> IntInverse {
    IntInverse
}

pub fn make_int_direct_division() -> IntDirect {
    IntDirect
}

pub(crate) fn encode_int(a: &BigInt) -> Value {
    match a.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(a.to_string()),
    }
}

fn decode_int(name: &str, s: &str) -> Result<BigInt, AlgebraError> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| AlgebraError::BadElement { algebra: name.to_string(), input: s.to_string() })
}

macro_rules! ring_ops {
    () => {
        fn zero(&self) -> BigInt {
            BigInt::zero()
        }

        fn one(&self) -> BigInt {
            BigInt::one()
        }

        fn add(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
            Some(a + b)
        }

        fn neg(&self, a: &BigInt) -> Option<BigInt> {
            Some(-a)
        }

        fn mul(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
            Some(a * b)
        }

        fn elements(&self) -> Option<Vec<BigInt>> {
            None
        }

        fn sample(&self, rng: &mut Prng) -> BigInt {
            sample_small_biased(rng, 1000).into()
        }

        fn encode(&self, e: &BigInt) -> Value {
            encode_int(e)
        }

        fn decode(&self, s: &str) -> Result<BigInt, AlgebraError> {
            decode_int(&self.name(), s)
        }
    };
}

impl PartialAlgebra for IntInverse {
    type Elem = BigInt;

    fn name(&self) -> String {
        "int-inv".into()
    }

    ring_ops!();

    fn div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        (b.abs().is_one()).then(|| a * b)
    }
}

impl PartialAlgebra for IntDirect {
    type Elem = BigInt;

    fn name(&self) -> String {
        "int-direct".into()
    }

    ring_ops!();

    fn div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: i64) -> BigInt {
        n.into()
    }

    #[test]
    fn inverse_division_only_by_units() {
        let z = make_int_inverse_division();
        assert_eq!(z.div(&i(6), &i(-1)), Some(i(-6)));
        assert_eq!(z.div(&i(6), &i(1)), Some(i(6)));
        assert_eq!(z.div(&i(6), &i(2)), None);
        assert_eq!(z.div(&i(0), &i(0)), None);
    }

    #[test]
    fn direct_division_exact_quotients() {
        let z = make_int_direct_division();
        assert_eq!(z.div(&i(6), &i(2)), Some(i(3)));
        assert_eq!(z.div(&i(-6), &i(4)), None);
        assert_eq!(z.div(&i(-8), &i(4)), Some(i(-2)));
        assert_eq!(z.div(&i(1), &i(3)), None);
        assert_eq!(z.div(&i(0), &i(0)), None);
    }

    #[test]
    fn direct_division_matches_brute_force() {
        let z = make_int_direct_division();
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                let brute = (-30i64..=30).find(|c| c * b == a && b != 0);
                assert_eq!(z.div(&i(a), &i(b)), brute.map(i), "{a}/{b}");
            }
        }
    }

    #[test]
    fn big_values_encode_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(encode_int(&big), Value::String(big.to_string()));
        assert_eq!(encode_int(&i(-5)), Value::from(-5));
        assert_eq!(IntDirect.decode(&big.to_string()).unwrap(), big);
    }
}
