use super::{Judgement, Kernel, ProofScript, Rejection, RejectReason, Rule, Step};
use crate::laws::LawSet;
use crate::term::{parse, Equation, Substitution, Term};

/// Writes scripts step by step. Each step is checked by a [`Kernel`] as it is
/// added, and its claim is the equation the kernel derives, so a finished
/// builder always yields a script the kernel accepts.
pub struct ScriptBuilder<'a> {
    kernel: Kernel<'a>,
    laws: &'a LawSet,
    laws_name: Option<String>,
    steps: Vec<Step>,
}

fn subst_of(pairs: &[(&str, &str)]) -> Result<Substitution, RejectReason> {
    pairs
        .iter()
        .map(|(v, t)| {
            parse(t)
                .map(|t| (v.to_string(), t))
                .map_err(|e| RejectReason::BadSubstitution { detail: format!("{v}: {e}") })
        })
        .collect()
}

impl<'a> ScriptBuilder<'a> {
    /// `target` is `h1 /\ ... -> l = r` in law syntax.
    pub fn new(target: &str, laws: &'a LawSet, laws_name: &str) -> Result<ScriptBuilder<'a>, RejectReason> {
        let ce = crate::term::parse_conditional(target).map_err(|e| RejectReason::Malformed { detail: e.to_string() })?;
        let hypotheses = ce.conditions.into_iter().map(|c| c.eq).collect();
        let target = Judgement { hypotheses, conclusion: ce.conclusion };
        Ok(ScriptBuilder {
            kernel: Kernel::new(target, laws),
            laws,
            laws_name: Some(laws_name.to_string()),
            steps: Vec::new(),
        })
    }

    fn fail(&self, reason: RejectReason) -> Rejection {
        Rejection { step: self.steps.len() + 1, id: None, reason }
    }

    fn step(&mut self, rule: Rule, assumed: Option<Equation>) -> Result<String, Rejection> {
        let id = format!("s{}", self.steps.len() + 1);
        let placeholder = assumed.unwrap_or_else(|| Equation::new(Term::Zero, Term::Zero));
        let claim = self.kernel.derive_equation(&rule, &placeholder).map_err(|r| self.fail(r))?;
        let step = Step { id: id.clone(), rule, claim };
        if let Err(r) = self.kernel.push(&step) {
            return Err(self.fail(r));
        }
        self.steps.push(step);
        Ok(id)
    }

    pub fn equation(&self, id: &str) -> &Equation {
        self.kernel.equation(id).expect("id returned by this builder")
    }

    pub fn axiom(&mut self, law: &str, subst: &[(&str, &str)]) -> Result<String, Rejection> {
        let subst = subst_of(subst).map_err(|r| self.fail(r))?;
        self.step(Rule::Axiom { law: law.into(), subst }, None)
    }

    pub fn hyp(&mut self, index: usize) -> Result<String, Rejection> {
        self.step(Rule::Hyp { index }, None)
    }

    pub fn assume(&mut self, eq: &str) -> Result<String, Rejection> {
        let eq = crate::term::parse_equation(eq).map_err(|e| self.fail(RejectReason::Malformed { detail: e.to_string() }))?;
        self.step(Rule::Assume, Some(eq))
    }

    pub fn refl(&mut self, term: Term) -> Result<String, Rejection> {
        self.step(Rule::Refl { term }, None)
    }

    pub fn sym(&mut self, of: &str) -> Result<String, Rejection> {
        self.step(Rule::Sym { of: of.into() }, None)
    }

    pub fn trans(&mut self, of: &[&str]) -> Result<String, Rejection> {
        self.step(Rule::Trans { of: of.iter().map(|s| s.to_string()).collect() }, None)
    }

    pub fn cong(&mut self, context: Term, at: &[usize], of: &str) -> Result<String, Rejection> {
        self.step(Rule::Cong { context, at: at.to_vec(), of: of.into() }, None)
    }

    pub fn subst(&mut self, of: &str, subst: &[(&str, &str)]) -> Result<String, Rejection> {
        let subst = subst_of(subst).map_err(|r| self.fail(r))?;
        self.step(Rule::Subst { of: of.into(), subst }, None)
    }

    pub fn discharge(&mut self, law: &str, subst: &[(&str, &str)], premises: &[&str]) -> Result<String, Rejection> {
        let subst = subst_of(subst).map_err(|r| self.fail(r))?;
        let premises = premises.iter().map(|s| s.to_string()).collect();
        self.step(Rule::Discharge { law: law.into(), subst, premises }, None)
    }

    pub fn rcm(&mut self, left: &str, left_assumption: &str, right: &str, right_assumption: &str) -> Result<String, Rejection> {
        let rule = Rule::Rcm {
            left: left.into(),
            left_assumption: left_assumption.into(),
            right: right.into(),
            right_assumption: right_assumption.into(),
        };
        self.step(rule, None)
    }

    pub fn rcm_prime(&mut self, of: &str, assumption: &str) -> Result<String, Rejection> {
        self.step(Rule::RcmPrime { of: of.into(), assumption: assumption.into() }, None)
    }

    /// Extends `chain : a = b` with `by : l = r`, where `l` sits at `at` in
    /// `b`, giving `a = b[at := r]`. With `chain = None` the result is
    /// `b = b[at := r]` for `b` the context itself.
    fn extend(&mut self, chain: Option<&str>, context: &Term, at: &[usize], by: &str) -> Result<String, Rejection> {
        let step = if at.is_empty() { by.to_string() } else { self.cong(context.clone(), at, by)? };
        match chain {
            Some(c) => self.trans(&[c, &step]),
            None => Ok(step),
        }
    }

    fn apply(&mut self, chain: &mut Chain, at: &[usize], by: &str) -> Result<(), Rejection> {
        let id = self.extend(chain.id.as_deref(), &chain.rhs.clone(), at, by)?;
        chain.rhs = self.equation(&id).rhs.clone();
        chain.id = Some(id);
        Ok(())
    }

    /// First position of `chain` (or exactly `at`) where `pattern` matches
    /// after the bindings in `fixed`.
    fn find(&self, chain: &Chain, pattern: &Term, fixed: &Substitution, at: Option<&[usize]>) -> Result<(Vec<usize>, Substitution), Rejection> {
        let candidates = match at {
            Some(p) => vec![p.to_vec()],
            None => chain.rhs.positions(),
        };
        candidates
            .into_iter()
            .find_map(|p| {
                let sub = chain.rhs.subterm(&p)?;
                let mut s = fixed.clone();
                pattern.match_onto(sub, &mut s).then_some((p, s))
            })
            .ok_or_else(|| self.fail(RejectReason::Mismatch { expected: pattern.to_string(), found: chain.rhs.to_string() }))
    }

    fn unbound(&self, to: &Term, s: &Substitution) -> Result<(), Rejection> {
        match to.free_vars().into_iter().find(|v| s.get(v).is_none()) {
            Some(v) => Err(self.fail(RejectReason::BadSubstitution { detail: format!("{v} is not fixed") })),
            None => Ok(()),
        }
    }

    /// Rewrites the right side of `chain` with an instance of `law`. The
    /// instance is found by matching the law's left side (right side when
    /// `backward`) against subterms in preorder, after fixing the variables
    /// in `fix`; `at` forces the position.
    pub fn rw(
        &mut self,
        chain: &mut Chain,
        law: &str,
        backward: bool,
        fix: &[(&str, &str)],
        at: Option<&[usize]>,
    ) -> Result<(), Rejection> {
        let l = self.laws.get(law).ok_or_else(|| self.fail(RejectReason::UnknownLaw { law: law.into() }))?;
        let concl = l.body.conclusion.clone();
        let (from, to) = if backward { (&concl.rhs, &concl.lhs) } else { (&concl.lhs, &concl.rhs) };
        let fixed = subst_of(fix).map_err(|r| self.fail(r))?;
        let (pos, s) = self.find(chain, from, &fixed, at)?;
        self.unbound(to, &s)?;
        let pairs: Vec<(String, String)> = s.iter().map(|(v, t)| (v.clone(), t.render())).collect();
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(v, t)| (v.as_str(), t.as_str())).collect();
        let ax = self.axiom(law, &refs)?;
        let by = if backward { self.sym(&ax)? } else { ax };
        self.apply(chain, &pos, &by)
    }

    /// Like [`rw`](Self::rw), but with the equation proved by step `by`.
    /// Variables of the hypotheses and assumptions behind `by` only match
    /// themselves; any other binding is introduced with a `subst` step.
    pub fn rw_step(
        &mut self,
        chain: &mut Chain,
        by: &str,
        backward: bool,
        fix: &[(&str, &str)],
        at: Option<&[usize]>,
    ) -> Result<(), Rejection> {
        let eq = self.kernel.equation(by).ok_or_else(|| self.fail(RejectReason::UnknownStep { id: by.into() }))?.clone();
        let (from, to) = if backward { (&eq.rhs, &eq.lhs) } else { (&eq.lhs, &eq.rhs) };
        let mut fixed = subst_of(fix).map_err(|r| self.fail(r))?;
        for v in self.kernel.rigid_vars(by) {
            if fixed.get(&v).is_none() {
                fixed.insert(v.clone(), Term::Var(v));
            }
        }
        let (pos, s) = self.find(chain, from, &fixed, at)?;
        self.unbound(to, &s)?;
        let moving: Vec<(String, String)> = s
            .iter()
            .filter(|(v, t)| **t != Term::Var((*v).clone()))
            .map(|(v, t)| (v.clone(), t.render()))
            .collect();
        let inst = if moving.is_empty() {
            by.to_string()
        } else {
            let refs: Vec<(&str, &str)> = moving.iter().map(|(v, t)| (v.as_str(), t.as_str())).collect();
            self.subst(by, &refs)?
        };
        let inst = if backward { self.sym(&inst)? } else { inst };
        self.apply(chain, &pos, &inst)
    }

    /// Closes a chain, emitting `refl` if it never moved.
    pub fn close(&mut self, chain: Chain) -> Result<String, Rejection> {
        match chain.id {
            Some(id) => Ok(id),
            None => self.refl(chain.rhs),
        }
    }

    pub fn finish(self) -> Result<ProofScript, Rejection> {
        self.kernel.finish().map_err(|r| Rejection {
            step: self.steps.len(),
            id: self.steps.last().map(|s| s.id.clone()),
            reason: r,
        })?;
        Ok(ProofScript { target: self.kernel.target().clone(), laws: self.laws_name, steps: self.steps })
    }
}

/// An equational chain `start = ... = rhs` under construction.
#[derive(Clone, Debug)]
pub struct Chain {
    id: Option<String>,
    rhs: Term,
}

impl Chain {
    pub fn start(t: &str) -> Chain {
        Chain { id: None, rhs: parse(t).expect("chain start parses") }
    }

    /// Continues from a proved equation `a = b`.
    pub fn from_step(b: &ScriptBuilder<'_>, id: &str) -> Chain {
        Chain { id: Some(id.to_string()), rhs: b.equation(id).rhs.clone() }
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }
}
