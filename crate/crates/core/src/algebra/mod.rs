//! Total and partial algebras over the ring-with-division signature, the
//! `Enl`/`Pdt` transforms between them, and term evaluation.
//!
//! A [`TotalAlgebra`] has an absorptive element `bot`; a [`PartialAlgebra`]
//! instead reports undefined results as `None`. [`enlarge`] turns the latter
//! into the former by sending every undefined result to a fresh `bot`, and
//! [`restrict`] goes back.

mod eval;
mod integers;
mod lattice;
mod named;
mod rational;
mod table;
mod zn;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde_json::Value;

pub use eval::{eager_eq, eval, eval_partial, eval_with, Compiled, EvalError, Valuation};
pub use integers::{make_int_direct_division, make_int_inverse_division, IntDirect, IntInverse};
pub use lattice::{is_z3_unit, make_three_level_lattice, LatElem, Lattice3};
pub use named::{Named, NamedError, PartialVisitor, TotalVisitor, ALGEBRA_NAMES};
pub use rational::{
    make_bounded_q, make_rational_cm, parse_rational, render_rational, BoundedQ, RationalField,
};
pub use table::{TableAlgebra, TableError, TableParts, SHIPPED_TABLES};
pub use zn::{direct_division_solutions, make_zn_inverse_division, Zn, ZnRing};

/// Seeded generator used by every sampler and fuzzer.
pub type Prng = rand_chacha::ChaCha8Rng;

pub fn prng(seed: u64) -> Prng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("carrier needs at least two elements, found {0}")]
    TooSmall(usize),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("bound must be a rational greater than 1, got {0}")]
    BadBound(String),
    #[error("cannot read {input:?} as an element of {algebra}")]
    BadElement { algebra: String, input: String },
}

/// An algebra with total operations and an absorptive `bot`.
pub trait TotalAlgebra {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn bot(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `cond(x; y; z)`: bot if `y` is bot, `z` if `y` is a zero of its own
    /// level (`0*y = y`), otherwise `x`. In a ring with bot the zero test is
    /// plain equality with `0`.
    fn cond(&self, x: &Self::Elem, y: &Self::Elem, z: &Self::Elem) -> Self::Elem {
        if *y == self.bot() {
            self.bot()
        } else if self.mul(&self.zero(), y) == *y {
            z.clone()
        } else {
            x.clone()
        }
    }

    /// All elements in enumeration order, or `None` for an infinite carrier.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn sample(&self, rng: &mut Prng) -> Self::Elem;

    fn encode(&self, e: &Self::Elem) -> Value;

    fn decode(&self, s: &str) -> Result<Self::Elem, AlgebraError>;

    /// Human form: the JSON encoding without quotes.
    fn render(&self, e: &Self::Elem) -> String {
        render_value(&self.encode(e))
    }

    fn is_finite(&self) -> bool {
        self.elements().is_some()
    }
}

/// An algebra whose operations may be undefined. There is no `bot`.
pub trait PartialAlgebra {
    type Elem: Clone + Eq + Hash + Debug;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn sample(&self, rng: &mut Prng) -> Self::Elem;
    fn encode(&self, e: &Self::Elem) -> Value;
    fn decode(&self, s: &str) -> Result<Self::Elem, AlgebraError>;

    fn render(&self, e: &Self::Elem) -> String {
        render_value(&self.encode(e))
    }
}

pub fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) => {
            let fields: Vec<String> =
                map.iter().map(|(k, v)| format!("{k}:{}", render_value(v))).collect();
            format!("{{{}}}", fields.join(","))
        }
        other => other.to_string(),
    }
}

/// An element of a partial algebra's carrier, or the added `bot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WithBot<E> {
    Val(E),
    Bot,
}

impl<E> WithBot<E> {
    pub fn val(&self) -> Option<&E> {
        match self {
            WithBot::Val(e) => Some(e),
            WithBot::Bot => None,
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, WithBot::Bot)
    }
}

impl<E> From<Option<E>> for WithBot<E> {
    fn from(o: Option<E>) -> Self {
        o.map_or(WithBot::Bot, WithBot::Val)
    }
}

/// `Enl(P)`: the partial algebra `P` made total with a fresh absorptive `bot`.
#[derive(Clone, Debug)]
pub struct Enlarged<P> {
    inner: P,
}

impl<P: PartialAlgebra> Enlarged<P> {
    /// Skips the size check; for callers that only evaluate.
    pub(crate) fn wrap(inner: P) -> Self {
        Enlarged { inner }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    fn lift2(
        &self,
        a: &WithBot<P::Elem>,
        b: &WithBot<P::Elem>,
        f: impl Fn(&P::Elem, &P::Elem) -> Option<P::Elem>,
    ) -> WithBot<P::Elem> {
        match (a, b) {
            (WithBot::Val(a), WithBot::Val(b)) => f(a, b).into(),
            _ => WithBot::Bot,
        }
    }
}

/// Rejects finite carriers with fewer than two elements.
pub fn enlarge<P: PartialAlgebra>(p: P) -> Result<Enlarged<P>, AlgebraError> {
    if let Some(elems) = p.elements() {
        if elems.len() < 2 {
            return Err(AlgebraError::TooSmall(elems.len()));
        }
    }
    Ok(Enlarged { inner: p })
}

impl<P: PartialAlgebra> TotalAlgebra for Enlarged<P> {
    type Elem = WithBot<P::Elem>;

    fn name(&self) -> String {
        self.inner.name()
    }

    fn zero(&self) -> Self::Elem {
        WithBot::Val(self.inner.zero())
    }

    fn one(&self) -> Self::Elem {
        WithBot::Val(self.inner.one())
    }

    fn bot(&self) -> Self::Elem {
        WithBot::Bot
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.lift2(a, b, |a, b| self.inner.add(a, b))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        match a {
            WithBot::Val(a) => self.inner.neg(a).into(),
            WithBot::Bot => WithBot::Bot,
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.lift2(a, b, |a, b| self.inner.mul(a, b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.lift2(a, b, |a, b| self.inner.div(a, b))
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let mut out: Vec<_> = self.inner.elements()?.into_iter().map(WithBot::Val).collect();
        out.push(WithBot::Bot);
        Some(out)
    }

    fn sample(&self, rng: &mut Prng) -> Self::Elem {
        if rng.gen_ratio(1, 16) {
            WithBot::Bot
        } else {
            WithBot::Val(self.inner.sample(rng))
        }
    }

    fn encode(&self, e: &Self::Elem) -> Value {
        match e {
            WithBot::Val(e) => self.inner.encode(e),
            WithBot::Bot => Value::String("bot".into()),
        }
    }

    fn decode(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        if matches!(s.trim(), "bot" | "_|_") {
            Ok(WithBot::Bot)
        } else {
            self.inner.decode(s).map(WithBot::Val)
        }
    }
}

/// `Pdt(A)`: the total algebra `A` with `bot` removed and every operation
/// that would return `bot` left undefined.
#[derive(Clone, Debug)]
pub struct Restricted<T> {
    inner: T,
}

impl<T: TotalAlgebra> Restricted<T> {
    pub fn inner(&self) -> &T {
        &self.inner
    }

    fn keep(&self, e: T::Elem) -> Option<T::Elem> {
        (e != self.inner.bot()).then_some(e)
    }
}

/// Rejects finite algebras with fewer than two elements besides `bot`.
pub fn restrict<T: TotalAlgebra>(t: T) -> Result<Restricted<T>, AlgebraError> {
    if let Some(elems) = t.elements() {
        let n = elems.iter().filter(|e| **e != t.bot()).count();
        if n < 2 {
            return Err(AlgebraError::TooSmall(n));
        }
    }
    Ok(Restricted { inner: t })
}

impl<T: TotalAlgebra> PartialAlgebra for Restricted<T> {
    type Elem = T::Elem;

    fn name(&self) -> String {
        format!("pdt({})", self.inner.name())
    }

    fn zero(&self) -> Self::Elem {
        self.inner.zero()
    }

    fn one(&self) -> Self::Elem {
        self.inner.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.keep(self.inner.add(a, b))
    }

    fn neg(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.keep(self.inner.neg(a))
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.keep(self.inner.mul(a, b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.keep(self.inner.div(a, b))
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let bot = self.inner.bot();
        Some(self.inner.elements()?.into_iter().filter(|e| *e != bot).collect())
    }

    fn sample(&self, rng: &mut Prng) -> Self::Elem {
        let bot = self.inner.bot();
        for _ in 0..64 {
            let e = self.inner.sample(rng);
            if e != bot {
                return e;
            }
        }
        self.inner.zero()
    }

    fn encode(&self, e: &Self::Elem) -> Value {
        self.inner.encode(e)
    }

    fn decode(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        let e = self.inner.decode(s)?;
        if e == self.inner.bot() {
            return Err(AlgebraError::BadElement { algebra: self.name(), input: s.to_string() });
        }
        Ok(e)
    }
}

/// Small integers are drawn more often than large ones so that fuzzing hits
/// zero, units and small zero divisors regularly.
pub(crate) fn sample_small_biased(rng: &mut Prng, max: i64) -> i64 {
    if rng.gen_bool(0.5) {
        rng.gen_range(-4..=4)
    } else {
        rng.gen_range(-max..=max)
    }
}
