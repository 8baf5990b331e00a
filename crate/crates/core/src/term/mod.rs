//! Terms over the signature `{0, 1, bot, -, +, *, /, cond}` plus variables.
//!
//! Terms are plain immutable trees. Numerals exist only in the concrete
//! syntax: the parser expands them into sums of `1`, and the renderer never
//! folds them back.

mod gen;
mod json;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use gen::{random_term, TermShape};
pub use json::JsonTermError;
pub use parse::{
    parse, parse_conditional, parse_equation, ParseError, Token, MAX_NUMERAL,
};

/// Abstract syntax of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Bot,
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    /// `cond(x; y; z)`: "if y = 0 then z else x", bot when y is bot.
    Cond(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(l: Term, r: Term) -> Term {
        Term::Add(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(num: Term, den: Term) -> Term {
        Term::Div(Box::new(num), Box::new(den))
    }

    pub fn cond(x: Term, y: Term, z: Term) -> Term {
        Term::Cond(Box::new(x), Box::new(y), Box::new(z))
    }

    /// The numeral `n` as a sum of ones.
    ///
    /// `n` is split into its binary digits; the power `2^k` is the perfectly
    /// balanced sum of `2^k` ones and the powers are summed lowest first,
    /// nested to the right. So `3 = 1 + (1+1)` and `6 = (1+1) + ((1+1)+(1+1))`.
    pub fn numeral(n: u64) -> Term {
        if n == 0 {
            return Term::Zero;
        }
        let mut powers = Vec::new();
        let mut bit = 0;
        let mut rest = n;
        while rest > 0 {
            if rest & 1 == 1 {
                powers.push(Self::power_of_two(bit));
            }
            rest >>= 1;
            bit += 1;
        }
        let mut acc = powers.pop().expect("n > 0 has a set bit");
        while let Some(p) = powers.pop() {
            acc = Term::add(p, acc);
        }
        acc
    }

    fn power_of_two(k: u32) -> Term {
        if k == 0 {
            Term::One
        } else {
            let half = Self::power_of_two(k - 1);
            Term::add(half.clone(), half)
        }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Zero | Term::One | Term::Bot => vec![],
            Term::Neg(t) => vec![t],
            Term::Add(l, r) | Term::Mul(l, r) | Term::Div(l, r) => vec![l, r],
            Term::Cond(x, y, z) => vec![x, y, z],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Var(_) | Term::Zero | Term::One | Term::Bot => vec![],
            Term::Neg(t) => vec![t],
            Term::Add(l, r) | Term::Mul(l, r) | Term::Div(l, r) => vec![l, r],
            Term::Cond(x, y, z) => vec![x, y, z],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Subterm at a root-relative path of child indices.
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `path` replaced by `with`.
    pub fn replace_at(&self, path: &[usize], with: Term) -> Option<Term> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.children_mut().into_iter().nth(i)?;
        }
        *cur = with;
        Some(out)
    }

    /// Extends `s` so that `self`, read as a pattern, becomes `t`. Variables
    /// already bound in `s` must agree. On failure `s` may hold partial
    /// bindings.
    pub fn match_onto(&self, t: &Term, s: &mut Substitution) -> bool {
        match (self, t) {
            (Term::Var(v), _) => match s.get(v) {
                Some(bound) => bound == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    true
                }
            },
            (Term::Zero, Term::Zero) | (Term::One, Term::One) | (Term::Bot, Term::Bot) => true,
            (Term::Neg(a), Term::Neg(b)) => a.match_onto(b, s),
            (Term::Add(a, b), Term::Add(c, d))
            | (Term::Mul(a, b), Term::Mul(c, d))
            | (Term::Div(a, b), Term::Div(c, d)) => a.match_onto(c, s) && b.match_onto(d, s),
            (Term::Cond(a, b, c), Term::Cond(x, y, z)) => {
                a.match_onto(x, s) && b.match_onto(y, s) && c.match_onto(z, s)
            }
            _ => false,
        }
    }

    /// Paths of all subterms in preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            let children = t.children();
            for (i, c) in children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((c, p));
            }
            out.push(path);
        }
        out
    }

    pub fn contains(&self, pred: &impl Fn(&Term) -> bool) -> bool {
        pred(self) || self.children().iter().any(|c| c.contains(pred))
    }

    pub fn has_div(&self) -> bool {
        self.contains(&|t| matches!(t, Term::Div(..)))
    }

    pub fn has_bot(&self) -> bool {
        self.contains(&|t| matches!(t, Term::Bot))
    }

    pub fn has_cond(&self) -> bool {
        self.contains(&|t| matches!(t, Term::Cond(..)))
    }

    /// True for terms over the plain ring signature: no division, bot or cond.
    pub fn is_ring_term(&self) -> bool {
        !self.contains(&|t| matches!(t, Term::Div(..) | Term::Bot | Term::Cond(..)))
    }

    /// A division whose numerator and denominator are ring terms.
    pub fn is_flat_fracterm(&self) -> bool {
        match self {
            Term::Div(p, q) => p.is_ring_term() && q.is_ring_term(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    /// Variables in order of first occurrence (preorder, left to right).
    pub fn vars_in_order(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.collect_vars(&mut |v| {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        });
        out
    }

    fn collect_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Term::Var(v) => f(v),
            _ => {
                for c in self.children() {
                    c.collect_vars(f);
                }
            }
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Term {
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Zero | Term::One | Term::Bot => self.clone(),
            Term::Neg(t) => Term::neg(t.substitute(s)),
            Term::Add(l, r) => Term::add(l.substitute(s), r.substitute(s)),
            Term::Mul(l, r) => Term::mul(l.substitute(s), r.substitute(s)),
            Term::Div(l, r) => Term::div(l.substitute(s), r.substitute(s)),
            Term::Cond(x, y, z) => {
                Term::cond(x.substitute(s), y.substitute(s), z.substitute(s))
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) => 1,
            Term::Mul(..) => 2,
            Term::Div(..) => 3,
            Term::Neg(_) => 4,
            _ => 5,
        }
    }

    fn render_child(&self, out: &mut String, parens: bool) {
        if parens {
            out.push('(');
            self.render_into(out);
            out.push(')');
        } else {
            self.render_into(out);
        }
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Term::Var(v) => out.push_str(v),
            Term::Zero => out.push('0'),
            Term::One => out.push('1'),
            Term::Bot => out.push_str("bot"),
            Term::Neg(t) => {
                out.push('-');
                t.render_child(out, t.precedence() <= 4);
            }
            Term::Add(l, r) => {
                l.render_child(out, false);
                out.push_str(" + ");
                r.render_child(out, r.precedence() <= 1);
            }
            Term::Mul(l, r) => {
                l.render_child(out, l.precedence() < 2);
                out.push('*');
                r.render_child(out, r.precedence() <= 2);
            }
            Term::Div(l, r) => {
                l.render_child(out, l.precedence() < 3);
                out.push('/');
                r.render_child(out, r.precedence() <= 3);
            }
            Term::Cond(x, y, z) => {
                out.push_str("cond(");
                x.render_into(out);
                out.push_str("; ");
                y.render_into(out);
                out.push_str("; ");
                z.render_into(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Simultaneous replacement of variables by terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) -> Option<Term> {
        self.0.insert(var.into(), t)
    }

    pub fn with(mut self, var: impl Into<String>, t: Term) -> Self {
        self.insert(var, t);
        self
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<String, Term> = self
            .0
            .iter()
            .map(|(v, t)| (v.clone(), t.substitute(other)))
            .collect();
        for (v, t) in &other.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// `lhs = rhs`, optionally labelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub name: Option<String>,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs, name: None }
    }

    pub fn named(name: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs, name: Some(name.into()) }
    }

    /// Same sides, ignoring the label.
    pub fn same_as(&self, other: &Equation) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs
    }

    pub fn flipped(&self) -> Equation {
        Equation { lhs: self.rhs.clone(), rhs: self.lhs.clone(), name: self.name.clone() }
    }

    pub fn substitute(&self, s: &Substitution) -> Equation {
        Equation {
            lhs: self.lhs.substitute(s),
            rhs: self.rhs.substitute(s),
            name: self.name.clone(),
        }
    }

    pub fn vars_in_order(&self) -> Vec<String> {
        let mut vars = self.lhs.vars_in_order();
        for v in self.rhs.vars_in_order() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Equal,
    NotEqual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub eq: Equation,
    pub polarity: Polarity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Equal => write!(f, "{} = {}", self.eq.lhs, self.eq.rhs),
            Polarity::NotEqual => write!(f, "{} != {}", self.eq.lhs, self.eq.rhs),
        }
    }
}

/// `c1 /\ ... /\ cn -> lhs = rhs`. With no conditions it is a plain equation.
///
/// Negated conditions are allowed so that laws such as `0*x != 0 -> x = bot`
/// can be written down and model-checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConditionalEquation {
    pub conditions: Vec<Condition>,
    pub conclusion: Equation,
    pub name: Option<String>,
}

impl ConditionalEquation {
    pub fn is_equation(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn has_negated_condition(&self) -> bool {
        self.conditions.iter().any(|c| c.polarity == Polarity::NotEqual)
    }

    /// Variables in order of first occurrence: conditions, then conclusion.
    pub fn vars_in_order(&self) -> Vec<String> {
        let mut vars: Vec<String> = Vec::new();
        let eqs = self.conditions.iter().map(|c| &c.eq).chain(std::iter::once(&self.conclusion));
        for eq in eqs {
            for v in eq.vars_in_order() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        vars
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.conditions
            .iter()
            .flat_map(|c| [&c.eq.lhs, &c.eq.rhs])
            .chain([&self.conclusion.lhs, &self.conclusion.rhs])
    }
}

impl From<Equation> for ConditionalEquation {
    fn from(eq: Equation) -> Self {
        let name = eq.name.clone();
        ConditionalEquation { conditions: Vec::new(), conclusion: eq, name }
    }
}

impl fmt::Display for ConditionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conditions.iter().enumerate() {
            if i > 0 {
                f.write_str(" /\\ ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.conditions.is_empty() {
            f.write_str(" -> ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// Checks the identifier shape `[a-zA-Z][a-zA-Z0-9_]*`, minus reserved words.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !parse::is_reserved(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn matching_binds_and_checks() {
        let pat = parse("x + 0*x").unwrap();
        let mut s = Substitution::new();
        assert!(pat.match_onto(&parse("1/y + 0*(1/y)").unwrap(), &mut s));
        assert_eq!(s.get("x"), Some(&parse("1/y").unwrap()));
        let mut s = Substitution::new();
        assert!(!pat.match_onto(&parse("1 + 0*y").unwrap(), &mut s));
        let mut s = Substitution::new().with("x", Term::One);
        assert!(!pat.match_onto(&parse("y + 0*y").unwrap(), &mut s));
    }

    #[test]
    fn render_examples() {
        assert_eq!(Term::div(Term::One, Term::Zero).render(), "1/0");
        assert_eq!(Term::neg(Term::neg(Term::var("x"))).render(), "-(-x)");
        let t = Term::add(Term::var("x"), Term::mul(Term::Zero, Term::var("y")));
        assert_eq!(t.render(), "x + 0*y");
    }

    #[test]
    fn render_keeps_associativity() {
        for s in ["a + (b + c)", "a/(b*c)", "a*(b*c)", "a/(b/c)", "(a*b)/c", "(a + b)*c", "-(a*b)", "-(-1)"] {
            assert_eq!(p(s).render(), s);
            assert_eq!(p(&p(s).render()), p(s));
        }
        assert_eq!(p("(a + b) + c").render(), "a + b + c");
        assert_eq!(p("(a/b)*c").render(), "a/b*c");
        assert_eq!(p("a*(b/c)").render(), "a*b/c");
    }

    #[test]
    fn substitute_examples() {
        let s = Substitution::new().with("x", Term::One);
        assert_eq!(p("x + y").substitute(&s), p("1 + y"));
        let s = Substitution::new().with("x", p("1/0"));
        assert_eq!(p("x/x").substitute(&s), p("(1/0)/(1/0)"));
        assert_eq!(p("x").substitute(&Substitution::new()), p("x"));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let s = Substitution::new().with("x", p("y")).with("y", p("x"));
        assert_eq!(p("x + y").substitute(&s), p("y + x"));
    }

    #[test]
    fn free_vars_examples() {
        let names = |s: &str| p(s).free_vars().into_iter().collect::<Vec<_>>();
        assert_eq!(names("x + 0*y"), vec!["x", "y"]);
        assert!(names("1/0").is_empty());
        assert_eq!(names("cond(x; y; x)"), vec!["x", "y"]);
    }

    #[test]
    fn flat_fracterm_examples() {
        assert!(p("(x + 1)/(y*y)").is_flat_fracterm());
        assert!(!p("(1/x)/y").is_flat_fracterm());
        assert!(!p("x + 1").is_flat_fracterm());
        assert!(!p("bot/1").is_flat_fracterm());
        assert!(!p("cond(x; y; z)/1").is_flat_fracterm());
    }

    #[test]
    fn numerals_expand_by_binary_digits() {
        assert_eq!(Term::numeral(0), Term::Zero);
        assert_eq!(Term::numeral(1), Term::One);
        assert_eq!(Term::numeral(2), p("1 + 1"));
        assert_eq!(Term::numeral(3), p("1 + (1 + 1)"));
        assert_eq!(Term::numeral(6), p("(1 + 1) + ((1 + 1) + (1 + 1))"));
        assert!(Term::numeral(1000).depth() <= 20);
    }

    #[test]
    fn positions_and_replacement() {
        let t = p("x + 0*y");
        assert_eq!(t.subterm(&[1, 1]), Some(&Term::var("y")));
        assert_eq!(t.subterm(&[2]), None);
        assert_eq!(t.replace_at(&[1], Term::One), Some(p("x + 1")));
        assert_eq!(t.positions(), vec![vec![], vec![0], vec![1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn vars_in_order_follows_first_occurrence() {
        let ce = parse_conditional("x/y * u/v = x*u/(y*v)").unwrap();
        assert_eq!(ce.vars_in_order(), vec!["x", "y", "u", "v"]);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x_1"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("bot"));
        assert!(!is_identifier(""));
    }
}
