//! Homomorphisms and congruences on generalised common meadows.
//!
//! Finite algebras are tabulated first, so maps and quotients work on element
//! indices of a [`TableAlgebra`]. Every map handed out has been checked
//! against all operations, including division, on every argument tuple.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::{
    make_zn_inverse_division, prng, AlgebraError, TableAlgebra, TableParts, TotalAlgebra, WithBot,
};
use crate::laws::{check_suite, CheckError, LawSet, Mode};

/// Where a map stops commuting with an operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomFailure {
    pub op: String,
    pub args: Vec<String>,
    /// The image of the operation's result in the source.
    pub mapped: String,
    /// The operation applied to the images of the arguments.
    pub expected: String,
}

impl fmt::Display for HomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}): result maps to {} but the images give {}",
            self.op,
            self.args.join(", "),
            self.mapped,
            self.expected
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HomError {
    #[error("{0} is infinite, this operation needs a finite carrier")]
    Infinite(String),
    #[error("the element must not be bot")]
    BotElement,
    #[error("{0} satisfies 0*a = 0, expected an element with 0*a != 0")]
    ZeroLevel(String),
    #[error("not a homomorphism: {0}")]
    NotHom(HomFailure),
    #[error("relation is not a congruence: {0}")]
    NotCongruence(String),
    #[error("{m} does not divide {n}, reduction mod {m} is not a ring homomorphism")]
    NotDivisor { n: u64, m: u64 },
    #[error("{algebra} fails {law}: {detail}")]
    Precondition { algebra: String, law: String, detail: String },
    #[error("result {algebra} fails {law}: {detail}")]
    Postcondition { algebra: String, law: String, detail: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

fn tabulate<A: TotalAlgebra>(alg: &A) -> Result<(TableAlgebra, Vec<A::Elem>), HomError> {
    TableAlgebra::from_algebra(alg).ok_or_else(|| HomError::Infinite(alg.name()))
}

fn index_of<E: PartialEq>(elems: &[E], e: &E) -> usize {
    elems.iter().position(|x| x == e).expect("element of the tabulated carrier")
}

/// Checks `h(f(x)) = f(h(x))` one operation instance at a time.
struct Commutes<'a, A: TotalAlgebra, B: TotalAlgebra, H> {
    src: &'a A,
    dst: &'a B,
    h: H,
}

impl<A, B, H> Commutes<'_, A, B, H>
where
    A: TotalAlgebra,
    B: TotalAlgebra,
    H: Fn(&A::Elem) -> B::Elem,
{
    fn compare(&self, op: &str, args: &[&A::Elem], result: &A::Elem, on_images: B::Elem) -> Result<(), HomFailure> {
        let mapped = (self.h)(result);
        if mapped == on_images {
            return Ok(());
        }
        Err(HomFailure {
            op: op.to_string(),
            args: args.iter().map(|a| self.src.render(a)).collect(),
            mapped: self.dst.render(&mapped),
            expected: self.dst.render(&on_images),
        })
    }

    /// `bot` must go to `bot`; `0` and `1` go to the given images.
    fn constants(&self, zero: B::Elem, one: B::Elem) -> Result<(), HomFailure> {
        let (s, d) = (self.src, self.dst);
        self.compare("zero", &[], &s.zero(), zero)?;
        self.compare("one", &[], &s.one(), one)?;
        self.compare("bot", &[], &s.bot(), d.bot())
    }

    fn binary(&self, op: &str, a: &A::Elem, b: &A::Elem) -> Result<(), HomFailure> {
        let (s, d) = (self.src, self.dst);
        let (ha, hb) = ((self.h)(a), (self.h)(b));
        let (result, on_images) = match op {
            "add" => (s.add(a, b), d.add(&ha, &hb)),
            "mul" => (s.mul(a, b), d.mul(&ha, &hb)),
            "div" => (s.div(a, b), d.div(&ha, &hb)),
            _ => unreachable!("unknown operation {op}"),
        };
        self.compare(op, &[a, b], &result, on_images)
    }

    fn neg(&self, a: &A::Elem) -> Result<(), HomFailure> {
        self.compare("neg", &[a], &self.src.neg(a), self.dst.neg(&(self.h)(a)))
    }

    /// Constants, then `add`, `neg`, `mul`, inverses `1/b`, and general
    /// division, each over all arguments in enumeration order. Inverses come
    /// before general division so a failure is reported at its simplest
    /// instance.
    fn exhaustive(&self, elems: &[A::Elem], zero: B::Elem, one: B::Elem) -> Result<(), HomFailure> {
        self.constants(zero, one)?;
        for op in ["add", "neg", "mul", "inv", "div"] {
            for a in elems {
                match op {
                    "neg" => self.neg(a)?,
                    "inv" => self.binary("div", &self.src.one(), a)?,
                    _ => {
                        for b in elems {
                            self.binary(op, a, b)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn sampled(&self, trials: u64, seed: u64, zero: B::Elem, one: B::Elem) -> Result<(), HomFailure> {
        self.constants(zero, one)?;
        let mut rng = prng(seed);
        for _ in 0..trials {
            let a = self.src.sample(&mut rng);
            let b = self.src.sample(&mut rng);
            for op in ["add", "mul", "div"] {
                self.binary(op, &a, &b)?;
            }
            self.neg(&a)?;
        }
        Ok(())
    }
}

/// A homomorphism between finite algebras, as a table over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMap {
    pub source: TableAlgebra,
    pub target: TableAlgebra,
    pub map: Vec<usize>,
}

impl HomMap {
    /// Builds and verifies the map.
    pub fn new(source: TableAlgebra, target: TableAlgebra, map: Vec<usize>) -> Result<HomMap, HomError> {
        assert_eq!(map.len(), source.size(), "map must cover the source carrier");
        let hom = HomMap { source, target, map };
        hom.verify().map_err(HomError::NotHom)?;
        Ok(hom)
    }

    pub fn identity(t: &TableAlgebra) -> HomMap {
        HomMap { source: t.clone(), target: t.clone(), map: (0..t.size()).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Exhaustive check of every operation and constant.
    pub fn verify(&self) -> Result<(), HomFailure> {
        let c = Commutes { src: &self.source, dst: &self.target, h: |i: &usize| self.map[*i] };
        let elems: Vec<usize> = (0..self.source.size()).collect();
        c.exhaustive(&elems, self.target.zero(), self.target.one())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &HomMap) -> HomMap {
        HomMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&i| next.map[i]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    /// `{"source": name, "target": name, "map": {source label: target label}}`.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .map
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.label(i).to_string(), Value::String(self.target.label(j).into())))
            .collect();
        json!({"source": self.source.name(), "target": self.target.name(), "map": map})
    }
}

impl fmt::Display for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} -> {}", self.source.name(), self.target.name())?;
        let lines: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("  {} |-> {}", self.source.label(i), self.target.label(j)))
            .collect();
        f.write_str(&lines.join("\n"))
    }
}

/// `M_0 = {a | 0*a = 0}` of a finite algebra, in enumeration order.
pub fn zero_part<A: TotalAlgebra>(alg: &A) -> Result<Vec<A::Elem>, HomError> {
    let elems = alg.elements().ok_or_else(|| HomError::Infinite(alg.name()))?;
    Ok(zero_part_of(alg, &elems))
}

/// The members of `probe` that lie in `M_0`.
pub fn zero_part_of<A: TotalAlgebra>(alg: &A, probe: &[A::Elem]) -> Vec<A::Elem> {
    let zero = alg.zero();
    probe.iter().filter(|a| alg.mul(&zero, a) == zero).cloned().collect()
}

/// `rho(a)`: `a` on `M_0`, `bot` elsewhere.
pub fn rho_image<A: TotalAlgebra>(alg: &A, a: &A::Elem) -> A::Elem {
    if alg.mul(&alg.zero(), a) == alg.zero() {
        a.clone()
    } else {
        alg.bot()
    }
}

/// `rho` onto the enlargement of the ring `M_0` with inverse-based division.
pub fn map_rho<A: TotalAlgebra>(alg: &A) -> Result<HomMap, HomError> {
    let (src, _) = tabulate(alg)?;
    let mut kept: Vec<usize> = zero_part_of(&src, &(0..src.size()).collect::<Vec<_>>());
    kept.push(src.bot());
    let pos = |i: usize| kept.iter().position(|&k| k == i).unwrap_or(kept.len() - 1);
    let bot = kept.len() - 1;
    let ring = &kept[..bot];
    let inverse = |b: usize| ring.iter().copied().find(|&c| src.mul(&b, &c) == src.one());
    let square = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        kept.iter().map(|&a| kept.iter().map(|&b| f(a, b)).collect()).collect()
    };
    let div = |a: usize, b: usize| {
        if a == src.bot() || b == src.bot() {
            return bot;
        }
        inverse(b).map_or(bot, |c| pos(src.mul(&a, &c)))
    };
    let parts = TableParts {
        carrier: kept.iter().map(|&i| src.carrier()[i].clone()).collect(),
        zero: pos(src.zero()),
        one: pos(src.one()),
        bot,
        add: square(&|a, b| pos(src.add(&a, &b))),
        mul: square(&|a, b| pos(src.mul(&a, &b))),
        div: square(&div),
        neg: kept.iter().map(|&a| pos(src.neg(&a))).collect(),
    };
    let target = TableAlgebra::new(format!("rho({})", src.name()), parts)
        .expect("restriction of a valid table");
    let map = (0..src.size()).map(|i| pos(rho_image(&src, &i))).collect();
    HomMap::new(src, target, map)
}

/// The endomorphism `b |-> b + 0*a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi<E> {
    pub shift: E,
}

impl<E: Clone> Phi<E> {
    pub fn apply<A: TotalAlgebra<Elem = E>>(&self, alg: &A, b: &E) -> E {
        alg.add(b, &self.shift)
    }
}

/// `phi_{0*a}`, checked to commute with every operation: over all pairs in
/// `Mode::Exhaustive` (finite carriers only), over sampled pairs in fuzz mode.
/// It sends `0` and `1` to `0*a` and `1 + 0*a`, the constants of its image.
pub fn map_phi<A: TotalAlgebra>(alg: &A, a: &A::Elem, mode: Mode) -> Result<Phi<A::Elem>, HomError> {
    if *a == alg.bot() {
        return Err(HomError::BotElement);
    }
    let phi = Phi { shift: alg.mul(&alg.zero(), a) };
    let c = Commutes { src: alg, dst: alg, h: |b: &A::Elem| phi.apply(alg, b) };
    let zero = phi.apply(alg, &alg.zero());
    let one = phi.apply(alg, &alg.one());
    let checked = match mode {
        Mode::Exhaustive => {
            let elems = alg.elements().ok_or_else(|| HomError::Infinite(alg.name()))?;
            c.exhaustive(&elems, zero, one)
        }
        Mode::Fuzz { trials, seed } => c.sampled(trials, seed, zero, one),
    };
    checked.map_err(HomError::NotHom)?;
    Ok(phi)
}

/// A partition of a finite carrier, classes ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceTable {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl CongruenceTable {
    /// Groups `0..n` by `key`, then checks that every operation respects the
    /// grouping.
    pub fn from_key<K: Eq + Hash>(t: &TableAlgebra, key: impl Fn(usize) -> K) -> Result<CongruenceTable, HomError> {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(t.size());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..t.size() {
            let next = classes.len();
            let c = *ids.entry(key(i)).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(i);
            class_of.push(c);
        }
        let cong = CongruenceTable { class_of, classes };
        cong.check(t)?;
        Ok(cong)
    }

    fn rep(&self, i: usize) -> usize {
        self.classes[self.class_of[i]][0]
    }

    fn check(&self, t: &TableAlgebra) -> Result<(), HomError> {
        let n = t.size();
        let bad = |op: &str, a: usize, b: usize| {
            HomError::NotCongruence(format!(
                "{op}({}, {}) and {op}({}, {}) fall in different classes",
                t.label(a),
                t.label(b),
                t.label(self.rep(a)),
                t.label(self.rep(b))
            ))
        };
        for a in 0..n {
            let ra = self.rep(a);
            if self.class_of[t.neg(&a)] != self.class_of[t.neg(&ra)] {
                return Err(bad("neg", a, a));
            }
            for b in 0..n {
                let rb = self.rep(b);
                for (op, f) in [
                    ("add", TableAlgebra::add as fn(&TableAlgebra, &usize, &usize) -> usize),
                    ("mul", TableAlgebra::mul),
                    ("div", TableAlgebra::div),
                ] {
                    if self.class_of[f(t, &a, &b)] != self.class_of[f(t, &ra, &rb)] {
                        return Err(bad(op, a, b));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The quotient algebra and the natural map onto it. Each class is named
    /// after its least element, except that the class of bot is `bot`.
    pub fn quotient(&self, t: &TableAlgebra, name: String) -> Result<HomMap, HomError> {
        let reps: Vec<usize> = self.classes.iter().map(|c| c[0]).collect();
        let cls = |i: usize| self.class_of[i];
        let square = |f: fn(&TableAlgebra, &usize, &usize) -> usize| -> Vec<Vec<usize>> {
            reps.iter().map(|a| reps.iter().map(|b| cls(f(t, a, b))).collect()).collect()
        };
        let parts = TableParts {
            carrier: self
                .classes
                .iter()
                .map(|c| t.carrier()[if c.contains(&t.bot()) { t.bot() } else { c[0] }].clone())
                .collect(),
            zero: cls(t.zero()),
            one: cls(t.one()),
            bot: cls(t.bot()),
            add: square(TableAlgebra::add),
            mul: square(TableAlgebra::mul),
            div: square(TableAlgebra::div),
            neg: reps.iter().map(|r| cls(t.neg(r))).collect(),
        };
        let target = TableAlgebra::new(name, parts).expect("quotient of a valid table");
        HomMap::new(t.clone(), target, self.class_of.clone())
    }
}

/// Which congruence `quotient_by` divides out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientMode {
    /// `p =_a q` iff `p + 0*a = q + 0*a`.
    #[default]
    Standard,
    /// `='_a`: every `b` with `b + 0*a = b` is sent to `bot`, nothing else is
    /// identified. Needs `0*a != 0`.
    Prime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub congruence: CongruenceTable,
    pub hom: HomMap,
}

/// Divides a finite algebra by `=_a` or `='_a`. The result is checked to be
/// a homomorphic image satisfying the ring-with-bot laws.
pub fn quotient_by<A: TotalAlgebra>(alg: &A, a: &A::Elem, mode: QuotientMode) -> Result<Quotient, HomError> {
    let (t, elems) = tabulate(alg)?;
    quotient_table(&t, index_of(&elems, a), mode)
}

fn quotient_table(t: &TableAlgebra, a: usize, mode: QuotientMode) -> Result<Quotient, HomError> {
    if a == t.bot() {
        return Err(HomError::BotElement);
    }
    let za = t.mul(&t.zero(), &a);
    let (congruence, name) = match mode {
        QuotientMode::Standard => {
            (CongruenceTable::from_key(t, |p| t.add(&p, &za))?, format!("{}/={}", t.name(), t.label(a)))
        }
        QuotientMode::Prime => {
            if za == t.zero() {
                return Err(HomError::ZeroLevel(t.label(a).to_string()));
            }
            let key = |p: usize| if t.add(&p, &za) == p { t.bot() } else { p };
            (CongruenceTable::from_key(t, key)?, format!("{}/='{}", t.name(), t.label(a)))
        }
    };
    let hom = congruence.quotient(t, name)?;
    require(&hom.target, "e-wcr-bot", true)?;
    Ok(Quotient { congruence, hom })
}

/// Checks a suite exhaustively; `post` picks which error a failure becomes.
fn require(t: &TableAlgebra, suite: &str, post: bool) -> Result<(), HomError> {
    let set = LawSet::resolve(suite).expect("built-in suite");
    let report = check_suite(t, &set, Mode::Exhaustive)?;
    let Some(v) = report.verdicts.iter().find(|v| !v.holds) else {
        return Ok(());
    };
    let (algebra, law, detail) = (t.name(), v.law.clone(), v.to_string());
    Err(if post {
        HomError::Postcondition { algebra, law, detail }
    } else {
        HomError::Precondition { algebra, law, detail }
    })
}

/// The first pair `(a, b)`, `a` not after `b` in enumeration order, of
/// non-bot elements with `a + b = bot`.
pub fn detect_bot_splitting<A: TotalAlgebra>(alg: &A) -> Result<Option<(A::Elem, A::Elem)>, HomError> {
    let elems = alg.elements().ok_or_else(|| HomError::Infinite(alg.name()))?;
    let bot = alg.bot();
    let proper: Vec<&A::Elem> = elems.iter().filter(|e| **e != bot).collect();
    for (i, a) in proper.iter().enumerate() {
        for b in &proper[i..] {
            if alg.add(a, b) == bot {
                return Ok(Some(((*a).clone(), (*b).clone())));
            }
        }
    }
    Ok(None)
}

/// Searches sampled pairs for bot-splitting; for infinite carriers.
pub fn detect_bot_splitting_sampled<A: TotalAlgebra>(alg: &A, trials: u64, seed: u64) -> Option<(A::Elem, A::Elem)> {
    let mut rng = prng(seed);
    let bot = alg.bot();
    (0..trials).find_map(|_| {
        let a = alg.sample(&mut rng);
        let b = alg.sample(&mut rng);
        (a != bot && b != bot && alg.add(&a, &b) == bot).then_some((a, b))
    })
}

/// All ordered pairs of nonzero residues with `a*b = 0 (mod n)`.
pub fn zero_divisors(n: u64) -> Result<Vec<(u64, u64)>, HomError> {
    if n < 2 {
        return Err(AlgebraError::BadModulus(n).into());
    }
    let n128 = n as u128;
    Ok((1..n)
        .flat_map(|a| (1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| (a as u128 * b as u128).is_multiple_of(n128))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendVerdict {
    pub from: u64,
    pub to: u64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<HomFailure>,
}

impl fmt::Display for ExtendVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "x |-> x mod {} extends to Z_{}+bot -> Z_{}+bot", self.to, self.from, self.to),
            Some(fail) => write!(f, "x |-> x mod {} does not extend: {fail}", self.to),
        }
    }
}

/// Whether reduction mod `m`, with `bot |-> bot`, is a homomorphism between
/// the common-division enlargements of `Z_n` and `Z_m`.
pub fn extend_ring_hom(n: u64, m: u64) -> Result<ExtendVerdict, HomError> {
    let src = make_zn_inverse_division(n)?;
    let dst = make_zn_inverse_division(m)?;
    if !n.is_multiple_of(m) {
        return Err(HomError::NotDivisor { n, m });
    }
    let reduce = |x: &WithBot<u64>| match x {
        WithBot::Val(v) => WithBot::Val(v % m),
        WithBot::Bot => WithBot::Bot,
    };
    let c = Commutes { src: &src, dst: &dst, h: reduce };
    let elems = src.elements().expect("Z_n is finite");
    let failure = c.exhaustive(&elems, dst.zero(), dst.one()).err();
    Ok(ExtendVerdict { from: n, to: m, holds: failure.is_none(), failure })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub hom: HomMap,
    /// Label, in the algebra at that stage, of each element quotiented away.
    pub steps: Vec<String>,
}

impl Saturation {
    pub fn to_json(&self, avoid: Option<usize>) -> Value {
        let mut v = json!({"steps": self.steps, "hom": self.hom.to_json(), "result": self.hom.target.to_json()});
        if let Some(a) = avoid {
            v["avoid"] = json!({
                "element": self.hom.source.label(a),
                "image": self.hom.target.label(self.hom.apply(a)),
            });
        }
        v
    }
}

/// Quotients a finite GCM satisfying AVL down to a common meadow.
///
/// Repeatedly takes `U = {b | b != 0, 0*b = b, b != bot}` in the current
/// image and divides out `=_b` for the first member of `U`, starting with
/// `0*avoid` when `avoid` is given, until `U` is empty. The input must pass
/// E_ftc-cm and AVL; the output is checked against E_ftc-cm, AVL and NVL,
/// and `avoid` is checked to stay away from `bot`.
pub fn saturate_to_cm<A: TotalAlgebra>(alg: &A, avoid: Option<&A::Elem>) -> Result<Saturation, HomError> {
    let (t, elems) = tabulate(alg)?;
    saturate_table(&t, avoid.map(|a| index_of(&elems, a)))
}

pub fn saturate_table(t: &TableAlgebra, avoid: Option<usize>) -> Result<Saturation, HomError> {
    require(t, "e-ftc-cm+avl", false)?;
    if let Some(a) = avoid {
        if a == t.bot() {
            return Err(HomError::BotElement);
        }
    }
    let mut hom = HomMap::identity(t);
    let mut steps = Vec::new();
    loop {
        let cur = &hom.target;
        let zero = cur.zero();
        let u: Vec<usize> = (0..cur.size())
            .filter(|&b| b != zero && b != cur.bot() && cur.mul(&zero, &b) == b)
            .collect();
        let Some(&first) = u.first() else { break };
        let b = avoid
            .map(|a| cur.mul(&zero, &hom.apply(a)))
            .filter(|z| u.contains(z))
            .unwrap_or(first);
        steps.push(cur.label(b).to_string());
        let q = quotient_table(cur, b, QuotientMode::Standard)?;
        hom = hom.then(&q.hom);
    }
    hom.target = hom.target.clone().with_name(format!("cm({})", t.name()));
    require(&hom.target, "e-ftc-cm+avl+nvl", true)?;
    if let Some(a) = avoid {
        if hom.apply(a) == hom.target.bot() {
            return Err(HomError::Postcondition {
                algebra: hom.target.name(),
                law: "avoid".into(),
                detail: format!("{} is sent to bot", t.label(a)),
            });
        }
    }
    Ok(Saturation { hom, steps })
}
