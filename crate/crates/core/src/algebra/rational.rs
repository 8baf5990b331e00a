use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use super::{enlarge, AlgebraError, Enlarged, PartialAlgebra, Prng};

/// The rational field; `a/b` is undefined exactly when `b = 0`.
#[derive(Clone, Debug, Default)]
pub struct RationalField;

/// The common meadow of rationals: `Enl(Q)`.
pub fn make_rational_cm() -> Enlarged<RationalField> {
    enlarge(RationalField).expect("infinite carrier")
}

/// Rationals with absolute value strictly below `bound`. Every operation is
/// undefined when its result would leave that interval.
#[derive(Clone, Debug)]
pub struct BoundedQ {
    bound: BigRational,
}

pub fn make_bounded_q(bound: BigRational) -> Result<BoundedQ, AlgebraError> {
    if bound <= BigRational::one() {
        return Err(AlgebraError::BadBound(render_rational(&bound)));
    }
    Ok(BoundedQ { bound })
}

impl BoundedQ {
    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    fn keep(&self, q: BigRational) -> Option<BigRational> {
        (q.abs() < self.bound).then_some(q)
    }
}

/// `p/q`, or just `p` when the denominator is one.
pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Reads `p/q`, an integer, or a finite decimal such as `9.5`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().ok()? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        let magnitude = BigRational::new(int.abs() * &scale + frac, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn sample_rational(rng: &mut Prng) -> BigRational {
    let (num, den) = if rng.gen_bool(0.5) {
        (rng.gen_range(-6i64..=6), rng.gen_range(1i64..=6))
    } else {
        (rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=1000))
    };
    BigRational::new(num.into(), den.into())
}

fn bad(name: &str, s: &str) -> AlgebraError {
    AlgebraError::BadElement { algebra: name.to_string(), input: s.to_string() }
}

impl PartialAlgebra for RationalField {
    type Elem = BigRational;

    fn name(&self) -> String {
        "rat-cm".into()
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a + b)
    }

    fn neg(&self, a: &BigRational) -> Option<BigRational> {
        Some(-a)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a * b)
    }

    fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn sample(&self, rng: &mut Prng) -> BigRational {
        sample_rational(rng)
    }

    fn encode(&self, e: &BigRational) -> Value {
        Value::String(render_rational(e))
    }

    fn decode(&self, s: &str) -> Result<BigRational, AlgebraError> {
        parse_rational(s).ok_or_else(|| bad(&self.name(), s))
    }
}

impl PartialAlgebra for BoundedQ {
    type Elem = BigRational;

    fn name(&self) -> String {
        format!("bounded-q:{}", render_rational(&self.bound))
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        self.keep(a + b)
    }

    fn neg(&self, a: &BigRational) -> Option<BigRational> {
        self.keep(-a)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        self.keep(a * b)
    }

    fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            return None;
        }
        self.keep(a / b)
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn sample(&self, rng: &mut Prng) -> BigRational {
        for _ in 0..64 {
            let q = sample_rational(rng);
            if q.abs() < self.bound {
                return q;
            }
        }
        BigRational::zero()
    }

    fn encode(&self, e: &BigRational) -> Value {
        Value::String(render_rational(e))
    }

    fn decode(&self, s: &str) -> Result<BigRational, AlgebraError> {
        parse_rational(s).and_then(|q| self.keep(q)).ok_or_else(|| bad(&self.name(), s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("6/4"), BigRational::new(3.into(), 2.into()));
        assert_eq!(q("9.5"), q("19/2"));
        assert_eq!(q("-0.25"), q("-1/4"));
        assert_eq!(q("-7"), BigRational::from_integer((-7).into()));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1.2.3"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn render_forms() {
        assert_eq!(render_rational(&q("4/2")), "2");
        assert_eq!(render_rational(&q("-2/6")), "-1/3");
    }

    #[test]
    fn bounded_q_overflow_is_undefined() {
        let b = make_bounded_q(q("10")).unwrap();
        assert_eq!(b.add(&q("9.5"), &q("1")), None);
        assert_eq!(b.add(&q("8.5"), &q("1")), Some(q("9.5")));
        assert_eq!(b.mul(&q("5"), &q("2")), None);
        assert_eq!(b.div(&q("1"), &q("1/20")), None);
        assert_eq!(b.div(&q("1"), &q("0")), None);
        assert!(b.decode("10").is_err());
    }

    #[test]
    fn bounded_q_needs_room_for_one() {
        assert!(make_bounded_q(q("1")).is_err());
        assert!(make_bounded_q(q("1/2")).is_err());
    }

    #[test]
    fn bounded_q_samples_stay_inside() {
        let b = make_bounded_q(q("3/2")).unwrap();
        let mut rng = crate::algebra::prng(1);
        for _ in 0..500 {
            assert!(b.sample(&mut rng).abs() < q("3/2"));
        }
    }
}
