//! Seeded random terms for fuzzing.

use rand::Rng;

use super::Term;

#[derive(Clone, Debug)]
pub struct TermShape {
    pub max_depth: usize,
    pub vars: Vec<String>,
    pub allow_bot: bool,
    pub allow_cond: bool,
    pub allow_div: bool,
}

impl TermShape {
    pub fn new(max_depth: usize, vars: &[&str]) -> TermShape {
        TermShape {
            max_depth,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            allow_bot: true,
            allow_cond: false,
            allow_div: true,
        }
    }

    pub fn with_cond(mut self, on: bool) -> Self {
        self.allow_cond = on;
        self
    }

    pub fn with_bot(mut self, on: bool) -> Self {
        self.allow_bot = on;
        self
    }

    pub fn with_div(mut self, on: bool) -> Self {
        self.allow_div = on;
        self
    }
}

pub fn random_term<R: Rng + ?Sized>(rng: &mut R, shape: &TermShape) -> Term {
    gen(rng, shape, shape.max_depth)
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, shape: &TermShape) -> Term {
    let roll = rng.gen_range(0..10);
    match roll {
        0..=5 if !shape.vars.is_empty() => {
            Term::Var(shape.vars[rng.gen_range(0..shape.vars.len())].clone())
        }
        6 | 7 => Term::One,
        9 if shape.allow_bot => Term::Bot,
        _ => Term::Zero,
    }
}

fn gen<R: Rng + ?Sized>(rng: &mut R, shape: &TermShape, depth: usize) -> Term {
    // stop early often enough that a depth bound of 8 gives terms of a few
    // dozen nodes rather than hundreds
    if depth == 0 || rng.gen_ratio(1, 3) {
        return leaf(rng, shape);
    }
    let d = depth - 1;
    loop {
        match rng.gen_range(0..9) {
            0 => return Term::neg(gen(rng, shape, d)),
            1 | 2 => return Term::add(gen(rng, shape, d), gen(rng, shape, d)),
            3 | 4 => return Term::mul(gen(rng, shape, d), gen(rng, shape, d)),
            5..=7 if shape.allow_div => {
                return Term::div(gen(rng, shape, d), gen(rng, shape, d))
            }
            8 if shape.allow_cond => {
                return Term::cond(gen(rng, shape, d), gen(rng, shape, d), gen(rng, shape, d))
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn respects_shape() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let shape = TermShape::new(5, &["x", "y"]).with_bot(false).with_div(false);
        for _ in 0..500 {
            let t = random_term(&mut rng, &shape);
            assert!(t.depth() <= 6);
            assert!(t.is_ring_term());
            assert!(t.free_vars().iter().all(|v| v == "x" || v == "y"));
        }
    }

    #[test]
    fn deterministic() {
        let shape = TermShape::new(8, &["x"]).with_cond(true);
        let a: Vec<Term> = {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            (0..20).map(|_| random_term(&mut rng, &shape)).collect()
        };
        let b: Vec<Term> = {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            (0..20).map(|_| random_term(&mut rng, &shape)).collect()
        };
        assert_eq!(a, b);
    }
}
