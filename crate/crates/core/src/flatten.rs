//! Fracterm flattening: every `cond`-free term equals, in any model of the
//! fracterm calculus axioms, a single fraction `p/q` with `p` and `q` free of
//! division and `bot`.

use serde::Serialize;

use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatFracterm {
    pub num: Term,
    pub den: Term,
}

impl FlatFracterm {
    pub fn to_term(&self) -> Term {
        Term::div(self.num.clone(), self.den.clone())
    }
}

impl std::fmt::Display for FlatFracterm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.to_term().fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlattenError {
    #[error("cannot flatten a term containing `cond`")]
    Cond,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlattenStats {
    pub input_size: usize,
    pub output_num_size: usize,
    pub output_den_size: usize,
}

pub fn flatten(t: &Term) -> Result<FlatFracterm, FlattenError> {
    if t.has_cond() {
        return Err(FlattenError::Cond);
    }
    Ok(flat(t))
}

pub fn flatten_stats(t: &Term) -> Result<FlattenStats, FlattenError> {
    let f = flatten(t)?;
    Ok(FlattenStats {
        input_size: t.size(),
        output_num_size: f.num.size(),
        output_den_size: f.den.size(),
    })
}

fn frac(num: Term, den: Term) -> FlatFracterm {
    FlatFracterm { num, den }
}

fn mul3(a: Term, b: Term, c: Term) -> Term {
    Term::mul(Term::mul(a, b), c)
}

fn flat(t: &Term) -> FlatFracterm {
    // a division-free subterm is already p/1, and p/q with both sides
    // division-free is already flat
    if t.is_ring_term() {
        return frac(t.clone(), Term::One);
    }
    if let Term::Div(p, q) = t {
        if p.is_ring_term() && q.is_ring_term() {
            return frac((**p).clone(), (**q).clone());
        }
    }
    match t {
        Term::Bot => frac(Term::One, Term::Zero),
        Term::Neg(a) => {
            let a = flat(a);
            frac(Term::neg(a.num), a.den)
        }
        Term::Add(a, b) => {
            let (FlatFracterm { num: p, den: q }, FlatFracterm { num: r, den: s }) = (flat(a), flat(b));
            frac(
                Term::add(Term::mul(p, s.clone()), Term::mul(q.clone(), r)),
                Term::mul(q, s),
            )
        }
        Term::Mul(a, b) => {
            let (FlatFracterm { num: p, den: q }, FlatFracterm { num: r, den: s }) = (flat(a), flat(b));
            frac(Term::mul(p, r), Term::mul(q, s))
        }
        // (p/q)/(r/s) = (p*s*s)/(q*r*s); the field rule (p*s)/(q*r) would
        // lose the `bot` produced by s = 0
        Term::Div(a, b) => {
            let (FlatFracterm { num: p, den: q }, FlatFracterm { num: r, den: s }) = (flat(a), flat(b));
            frac(mul3(p, s.clone(), s.clone()), mul3(q, r, s))
        }
        Term::Var(_) | Term::Zero | Term::One => unreachable!("ring terms handled above"),
        Term::Cond(..) => unreachable!("rejected by flatten"),
    }
}
