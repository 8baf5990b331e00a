use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use super::rational::{parse_rational, render_rational};
use super::{sample_small_biased, AlgebraError, Prng, TotalAlgebra};

/// An element of the three-level structure `{0 < c < bot}`. Level `0` holds
/// `Z[1/3]`, level `c` holds all of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatElem {
    Level0(BigRational),
    LevelC(BigRational),
    Bot,
}

/// A generalised common meadow that satisfies AVL but not the closed
/// conditional `0/2 * 0/3 = 0/2 * 0/5 -> 0/3 = 0/5`.
#[derive(Clone, Debug, Default)]
pub struct Lattice3;

pub fn make_three_level_lattice() -> Lattice3 {
    Lattice3
}

fn is_power_of_3(n: &BigInt) -> bool {
    let three = BigInt::from(3);
    let mut n = n.abs();
    if n.is_zero() {
        return false;
    }
    while n.is_multiple_of(&three) {
        n /= &three;
    }
    n.is_one()
}

/// Units of `Z[1/3]` are exactly `±3^k` for `k` in `Z`.
pub fn is_z3_unit(q: &BigRational) -> bool {
    is_power_of_3(q.numer()) && is_power_of_3(q.denom())
}

fn in_z3(q: &BigRational) -> bool {
    is_power_of_3(q.denom())
}

impl Lattice3 {
    fn bad(&self, s: &str) -> AlgebraError {
        AlgebraError::BadElement { algebra: self.name(), input: s.to_string() }
    }

    fn make(&self, level: &str, value: &str, raw: &str) -> Result<LatElem, AlgebraError> {
        let q = parse_rational(value).ok_or_else(|| self.bad(raw))?;
        match level.trim() {
            "0" if in_z3(&q) => Ok(LatElem::Level0(q)),
            "c" => Ok(LatElem::LevelC(q)),
            _ => Err(self.bad(raw)),
        }
    }

    fn ring_op(
        &self,
        a: &LatElem,
        b: &LatElem,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> LatElem {
        use LatElem::*;
        match (a, b) {
            (Bot, _) | (_, Bot) => Bot,
            (Level0(x), Level0(y)) => Level0(f(x, y)),
            (Level0(x) | LevelC(x), Level0(y) | LevelC(y)) => LevelC(f(x, y)),
        }
    }
}

impl TotalAlgebra for Lattice3 {
    type Elem = LatElem;

    fn name(&self) -> String {
        "lattice3".into()
    }

    fn zero(&self) -> LatElem {
        LatElem::Level0(BigRational::zero())
    }

    fn one(&self) -> LatElem {
        LatElem::Level0(BigRational::one())
    }

    fn bot(&self) -> LatElem {
        LatElem::Bot
    }

    fn add(&self, a: &LatElem, b: &LatElem) -> LatElem {
        self.ring_op(a, b, |x, y| x + y)
    }

    fn neg(&self, a: &LatElem) -> LatElem {
        match a {
            LatElem::Level0(x) => LatElem::Level0(-x),
            LatElem::LevelC(x) => LatElem::LevelC(-x),
            LatElem::Bot => LatElem::Bot,
        }
    }

    fn mul(&self, a: &LatElem, b: &LatElem) -> LatElem {
        self.ring_op(a, b, |x, y| x * y)
    }

    fn div(&self, a: &LatElem, b: &LatElem) -> LatElem {
        use LatElem::*;
        match (a, b) {
            (Bot, _) | (_, Bot) => Bot,
            (_, Level0(y) | LevelC(y)) if y.is_zero() => Bot,
            (Level0(x), Level0(y)) if is_z3_unit(y) => Level0(x / y),
            (Level0(x) | LevelC(x), Level0(y) | LevelC(y)) => LevelC(x / y),
        }
    }

    fn elements(&self) -> Option<Vec<LatElem>> {
        None
    }

    fn sample(&self, rng: &mut Prng) -> LatElem {
        let roll: u32 = rng.gen_range(0..16);
        if roll == 0 {
            return LatElem::Bot;
        }
        if roll < 9 {
            let m = BigInt::from(sample_small_biased(rng, 1000));
            let k: i32 = rng.gen_range(-2..=2);
            let scale = BigInt::from(3).pow(k.unsigned_abs());
            let q = if k >= 0 {
                BigRational::from_integer(m * scale)
            } else {
                BigRational::new(m, scale)
            };
            return LatElem::Level0(q);
        }
        let num = sample_small_biased(rng, 1000);
        let den = if rng.gen_bool(0.5) { rng.gen_range(1..=6) } else { rng.gen_range(1..=1000) };
        LatElem::LevelC(BigRational::new(num.into(), BigInt::from(den)))
    }

    fn encode(&self, e: &LatElem) -> Value {
        match e {
            LatElem::Level0(q) => json!({"level": "0", "value": render_rational(q)}),
            LatElem::LevelC(q) => json!({"level": "c", "value": render_rational(q)}),
            LatElem::Bot => Value::String("bot".into()),
        }
    }

    /// Accepts `bot`, `0:1/3`, `c:5`, the JSON object form, or the rendered
    /// form `{level:0,value:1/3}`.
    fn decode(&self, s: &str) -> Result<LatElem, AlgebraError> {
        let t = s.trim();
        if matches!(t, "bot" | "_|_") {
            return Ok(LatElem::Bot);
        }
        if let Ok(Value::Object(obj)) = serde_json::from_str::<Value>(t) {
            let field = |k: &str| match obj.get(k) {
                Some(Value::String(v)) => Some(v.clone()),
                Some(Value::Number(n)) => Some(n.to_string()),
                _ => None,
            };
            let (level, value) = field("level").zip(field("value")).ok_or_else(|| self.bad(s))?;
            return self.make(&level, &value, s);
        }
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let mut level = None;
            let mut value = None;
            for part in inner.split(',') {
                match part.split_once(':') {
                    Some(("level", v)) => level = Some(v),
                    Some(("value", v)) => value = Some(v),
                    _ => return Err(self.bad(s)),
                }
            }
            let (level, value) = level.zip(value).ok_or_else(|| self.bad(s))?;
            return self.make(level, value, s);
        }
        let (level, value) = t.split_once(':').ok_or_else(|| self.bad(s))?;
        self.make(level, value, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eval, Valuation};
    use crate::term::parse;

    fn l0(s: &str) -> LatElem {
        LatElem::Level0(parse_rational(s).unwrap())
    }

    fn lc(s: &str) -> LatElem {
        LatElem::LevelC(parse_rational(s).unwrap())
    }

    #[test]
    fn zero_times_is_level_local() {
        let m = make_three_level_lattice();
        assert_eq!(m.mul(&m.zero(), &l0("1/3")), l0("0"));
        assert_eq!(m.mul(&m.zero(), &lc("1/2")), lc("0"));
    }

    #[test]
    fn division_at_level_zero() {
        let m = make_three_level_lattice();
        assert_eq!(m.div(&m.one(), &l0("3")), l0("1/3"));
        assert_eq!(m.div(&m.one(), &l0("-1/9")), l0("-9"));
        assert_eq!(m.div(&m.one(), &l0("2")), lc("1/2"));
        assert_eq!(m.div(&l0("6"), &l0("2")), lc("3"));
        assert_eq!(m.div(&m.one(), &l0("0")), LatElem::Bot);
        assert_eq!(m.div(&m.one(), &lc("0")), LatElem::Bot);
        assert_eq!(m.div(&lc("1"), &l0("3")), lc("1/3"));
    }

    #[test]
    fn phi_235_refuted() {
        let m = make_three_level_lattice();
        let v = Valuation::new();
        let e = |s: &str| eval(&parse(s).unwrap(), &m, &v).unwrap();
        assert_eq!(e("0/2 * (0/3)"), lc("0"));
        assert_eq!(e("0/2 * (0/5)"), lc("0"));
        assert_eq!(e("0/3"), l0("0"));
        assert_eq!(e("0/5"), lc("0"));
    }

    #[test]
    fn cond_uses_level_zero() {
        let m = make_three_level_lattice();
        assert_eq!(m.cond(&l0("1"), &lc("0"), &l0("2")), l0("2"));
        assert_eq!(m.cond(&l0("1"), &lc("5"), &l0("2")), l0("1"));
        assert_eq!(m.cond(&l0("1"), &LatElem::Bot, &l0("2")), LatElem::Bot);
    }

    #[test]
    fn units() {
        assert!(is_z3_unit(&parse_rational("-27").unwrap()));
        assert!(is_z3_unit(&parse_rational("1/81").unwrap()));
        assert!(!is_z3_unit(&parse_rational("2/3").unwrap()));
        assert!(!is_z3_unit(&parse_rational("0").unwrap()));
    }

    #[test]
    fn decode_forms() {
        let m = make_three_level_lattice();
        assert_eq!(m.decode("0:1/3").unwrap(), l0("1/3"));
        assert_eq!(m.decode("c:1/2").unwrap(), lc("1/2"));
        assert_eq!(m.decode(r#"{"level":"c","value":"7"}"#).unwrap(), lc("7"));
        assert_eq!(m.decode("{level:0,value:-2}").unwrap(), l0("-2"));
        assert_eq!(m.decode("bot").unwrap(), LatElem::Bot);
        assert!(m.decode("0:1/2").is_err());
        assert!(m.decode("d:1").is_err());
    }

    #[test]
    fn samples_are_well_formed() {
        let m = make_three_level_lattice();
        let mut rng = crate::algebra::prng(3);
        for _ in 0..1000 {
            if let LatElem::Level0(q) = m.sample(&mut rng) {
                assert!(in_z3(&q));
            }
        }
    }
}
