use std::collections::{BTreeMap, HashMap};

use super::{PartialAlgebra, TotalAlgebra};
use crate::term::Term;

pub type Valuation<E> = BTreeMap<String, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value bound for variable {0}")]
    Unbound(String),
    #[error("`bot` cannot be evaluated in a partial algebra")]
    BotInPartial,
    #[error("`cond` cannot be evaluated in a partial algebra")]
    CondInPartial,
}

/// Structural evaluation. Strictness in `bot` comes from the algebra itself.
pub fn eval<A: TotalAlgebra>(
    t: &Term,
    alg: &A,
    v: &Valuation<A::Elem>,
) -> Result<A::Elem, EvalError> {
    eval_with(t, alg, &|name| v.get(name).cloned())
}

pub fn eval_with<A, F>(t: &Term, alg: &A, lookup: &F) -> Result<A::Elem, EvalError>
where
    A: TotalAlgebra,
    F: Fn(&str) -> Option<A::Elem>,
{
    Ok(match t {
        Term::Var(x) => lookup(x).ok_or_else(|| EvalError::Unbound(x.clone()))?,
        Term::Zero => alg.zero(),
        Term::One => alg.one(),
        Term::Bot => alg.bot(),
        Term::Neg(a) => alg.neg(&eval_with(a, alg, lookup)?),
        Term::Add(a, b) => alg.add(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?),
        Term::Mul(a, b) => alg.mul(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?),
        Term::Div(a, b) => alg.div(&eval_with(a, alg, lookup)?, &eval_with(b, alg, lookup)?),
        Term::Cond(x, y, z) => alg.cond(
            &eval_with(x, alg, lookup)?,
            &eval_with(y, alg, lookup)?,
            &eval_with(z, alg, lookup)?,
        ),
    })
}

/// Kleene-strict evaluation: `None` when any step is undefined.
pub fn eval_partial<P: PartialAlgebra>(
    t: &Term,
    alg: &P,
    v: &Valuation<P::Elem>,
) -> Result<Option<P::Elem>, EvalError> {
    if t.has_bot() {
        return Err(EvalError::BotInPartial);
    }
    if t.has_cond() {
        return Err(EvalError::CondInPartial);
    }
    // variables are checked up front so that an undefined subterm cannot
    // hide a missing binding
    for x in t.free_vars() {
        if !v.contains_key(&x) {
            return Err(EvalError::Unbound(x));
        }
    }
    Ok(partial_rec(t, alg, v))
}

fn partial_rec<P: PartialAlgebra>(t: &Term, alg: &P, v: &Valuation<P::Elem>) -> Option<P::Elem> {
    match t {
        Term::Var(x) => v.get(x).cloned(),
        Term::Zero => Some(alg.zero()),
        Term::One => Some(alg.one()),
        Term::Neg(a) => alg.neg(&partial_rec(a, alg, v)?),
        Term::Add(a, b) => alg.add(&partial_rec(a, alg, v)?, &partial_rec(b, alg, v)?),
        Term::Mul(a, b) => alg.mul(&partial_rec(a, alg, v)?, &partial_rec(b, alg, v)?),
        Term::Div(a, b) => alg.div(&partial_rec(a, alg, v)?, &partial_rec(b, alg, v)?),
        Term::Bot | Term::Cond(..) => unreachable!("rejected by eval_partial"),
    }
}

/// Eager equality: true when either side is undefined, else value equality.
pub fn eager_eq<P: PartialAlgebra>(
    t: &Term,
    r: &Term,
    alg: &P,
    v: &Valuation<P::Elem>,
) -> Result<bool, EvalError> {
    let a = eval_partial(t, alg, v)?;
    let b = eval_partial(r, alg, v)?;
    Ok(match (a, b) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    })
}

/// Terms compiled to a shared DAG over variable slots, for evaluating the
/// same terms under many valuations. Identical subterms are stored once.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    roots: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Var(usize),
    Zero,
    One,
    Bot,
    Neg(usize),
    Add(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Cond(usize, usize, usize),
}

impl Compiled {
    /// `vars` fixes the slot order; an unlisted variable is an error.
    pub fn new(t: &Term, vars: &[String]) -> Result<Compiled, EvalError> {
        Compiled::many(std::slice::from_ref(t), vars)
    }

    /// One program for several terms; `eval_all` returns their values in order.
    pub fn many(terms: &[Term], vars: &[String]) -> Result<Compiled, EvalError> {
        let mut b = Builder { vars, ops: Vec::new(), seen: HashMap::new() };
        let roots = terms.iter().map(|t| b.add(t)).collect::<Result<_, _>>()?;
        Ok(Compiled { ops: b.ops, roots })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Value of the first term.
    pub fn eval<A: TotalAlgebra>(&self, alg: &A, env: &[A::Elem]) -> A::Elem {
        let mut buf = Vec::with_capacity(self.ops.len());
        self.run(alg, env, &mut buf);
        buf.swap_remove(self.roots[0])
    }

    pub fn eval_all<A: TotalAlgebra>(&self, alg: &A, env: &[A::Elem]) -> Vec<A::Elem> {
        let mut buf = Vec::with_capacity(self.ops.len());
        self.run(alg, env, &mut buf);
        self.roots.iter().map(|&r| buf[r].clone()).collect()
    }

    fn run<A: TotalAlgebra>(&self, alg: &A, env: &[A::Elem], buf: &mut Vec<A::Elem>) {
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => env[i].clone(),
                Op::Zero => alg.zero(),
                Op::One => alg.one(),
                Op::Bot => alg.bot(),
                Op::Neg(a) => alg.neg(&buf[a]),
                Op::Add(a, b) => alg.add(&buf[a], &buf[b]),
                Op::Mul(a, b) => alg.mul(&buf[a], &buf[b]),
                Op::Div(a, b) => alg.div(&buf[a], &buf[b]),
                Op::Cond(x, y, z) => alg.cond(&buf[x], &buf[y], &buf[z]),
            };
            buf.push(v);
        }
    }
}

struct Builder<'a> {
    vars: &'a [String],
    ops: Vec<Op>,
    seen: HashMap<Op, usize>,
}

impl Builder<'_> {
    fn add(&mut self, t: &Term) -> Result<usize, EvalError> {
        let op = match t {
            Term::Var(x) => Op::Var(
                self.vars.iter().position(|v| v == x).ok_or_else(|| EvalError::Unbound(x.clone()))?,
            ),
            Term::Zero => Op::Zero,
            Term::One => Op::One,
            Term::Bot => Op::Bot,
            Term::Neg(a) => Op::Neg(self.add(a)?),
            Term::Add(a, b) => Op::Add(self.add(a)?, self.add(b)?),
            Term::Mul(a, b) => Op::Mul(self.add(a)?, self.add(b)?),
            Term::Div(a, b) => Op::Div(self.add(a)?, self.add(b)?),
            Term::Cond(x, y, z) => Op::Cond(self.add(x)?, self.add(y)?, self.add(z)?),
        };
        if let Some(&i) = self.seen.get(&op) {
            return Ok(i);
        }
        self.ops.push(op);
        self.seen.insert(op, self.ops.len() - 1);
        Ok(self.ops.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        enlarge, make_bounded_q, make_int_direct_division, make_rational_cm,
        make_zn_inverse_division, parse_rational, WithBot,
    };
    use crate::term::parse;

    fn val<E>(pairs: &[(&str, E)]) -> Valuation<E>
    where
        E: Clone,
    {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn one_over_zero_is_bot_in_rationals() {
        let q = make_rational_cm();
        assert_eq!(eval(&parse("1/0").unwrap(), &q, &Valuation::new()).unwrap(), WithBot::Bot);
    }

    #[test]
    fn x_minus_x_at_bot() {
        let z = make_zn_inverse_division(10).unwrap();
        let v = val(&[("x", WithBot::Bot)]);
        assert_eq!(eval(&parse("x + -x").unwrap(), &z, &v).unwrap(), WithBot::Bot);
    }

    #[test]
    fn zero_times_square() {
        let z = make_zn_inverse_division(10).unwrap();
        let v = val(&[("x", WithBot::Val(5))]);
        let a = eval(&parse("0*(x*x)").unwrap(), &z, &v).unwrap();
        let b = eval(&parse("0*x").unwrap(), &z, &v).unwrap();
        assert_eq!(a, WithBot::Val(0));
        assert_eq!(a, b);
    }

    #[test]
    fn cond_is_not_strict_in_unused_branch() {
        let q = make_rational_cm();
        let v = Valuation::new();
        assert_eq!(eval(&parse("cond(0; 1; bot)").unwrap(), &q, &v).unwrap(), q.zero());
        assert_eq!(eval(&parse("cond(0; bot; 1)").unwrap(), &q, &v).unwrap(), WithBot::Bot);
        assert_eq!(eval(&parse("cond(0; 0; 1)").unwrap(), &q, &v).unwrap(), q.one());
    }

    #[test]
    fn unbound_variable() {
        let q = make_rational_cm();
        assert_eq!(
            eval(&parse("x + 1").unwrap(), &q, &Valuation::new()).unwrap_err(),
            EvalError::Unbound("x".into())
        );
    }

    #[test]
    fn partial_evaluation_examples() {
        let z = make_int_direct_division();
        let v = Valuation::new();
        assert_eq!(eval_partial(&parse("1/3 * (3/1)").unwrap(), &z, &v).unwrap(), None);
        assert_eq!(
            eval_partial(&parse("(1*3)/(3*1)").unwrap(), &z, &v).unwrap(),
            Some(1.into())
        );
        let b = make_bounded_q(parse_rational("10").unwrap()).unwrap();
        let v = val(&[("x", parse_rational("19/2").unwrap())]);
        assert_eq!(eval_partial(&parse("x + 1").unwrap(), &b, &v).unwrap(), None);
        assert_eq!(
            eval_partial(&parse("bot").unwrap(), &b, &v).unwrap_err(),
            EvalError::BotInPartial
        );
        assert_eq!(
            eval_partial(&parse("cond(x; x; x)").unwrap(), &b, &v).unwrap_err(),
            EvalError::CondInPartial
        );
        assert_eq!(
            eval_partial(&parse("1/0 + y").unwrap(), &b, &v).unwrap_err(),
            EvalError::Unbound("y".into())
        );
    }

    #[test]
    fn eager_equality_examples() {
        let z = make_int_direct_division();
        let v = Valuation::new();
        let t = |s: &str| parse(s).unwrap();
        assert!(eager_eq(&t("1"), &t("1/0"), &z, &v).unwrap());
        assert!(!eager_eq(&t("1"), &t("2"), &z, &v).unwrap());
        assert!(eager_eq(&t("1/3 * (3/1)"), &t("(1*3)/(3*1)"), &z, &v).unwrap());
        // Tarski-wise the same pair differs
        let e = enlarge(z).unwrap();
        let v = Valuation::new();
        assert_ne!(
            eval(&t("1/3 * (3/1)"), &e, &v).unwrap(),
            eval(&t("(1*3)/(3*1)"), &e, &v).unwrap()
        );
    }

    #[test]
    fn eager_equality_is_not_transitive() {
        let z = make_int_direct_division();
        let v = Valuation::new();
        let (t, r, s) = (parse("1").unwrap(), parse("1/0").unwrap(), parse("2").unwrap());
        assert!(eager_eq(&t, &r, &z, &v).unwrap());
        assert!(eager_eq(&r, &s, &z, &v).unwrap());
        assert!(!eager_eq(&t, &s, &z, &v).unwrap());
    }

    #[test]
    fn compiled_matches_tree_evaluation() {
        let z = make_zn_inverse_division(7).unwrap();
        let t = parse("x/y + cond(x; y; 1/0)*-x").unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        let c = Compiled::new(&t, &vars).unwrap();
        for a in z.elements().unwrap() {
            for b in z.elements().unwrap() {
                let v = val(&[("x", a.clone()), ("y", b.clone())]);
                assert_eq!(c.eval(&z, &[a.clone(), b.clone()]), eval(&t, &z, &v).unwrap());
            }
        }
        assert!(Compiled::new(&t, &vars[..1]).is_err());
        let shared = Compiled::new(&parse("x/y + x/y").unwrap(), &vars).unwrap();
        assert_eq!(shared.len(), 4);
    }

    use crate::algebra::TotalAlgebra;
}
