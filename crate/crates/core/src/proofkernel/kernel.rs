use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::{Judgement, ProofScript, Rule, Step};
use crate::laws::LawSet;
use crate::term::{Equation, Polarity, Substitution, Term};

/// Why a step was refused. Each kind of fault has its own variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RejectReason {
    #[error("script has no steps")]
    Empty,
    #[error("malformed line: {detail}")]
    Malformed { detail: String },
    #[error("step id {id:?} is used twice")]
    DuplicateId { id: String },
    #[error("step {id:?} is not an earlier step")]
    UnknownStep { id: String },
    #[error("law {law:?} is not in the law set")]
    UnknownLaw { law: String },
    #[error("law {law:?} is conditional, use a discharge step")]
    ConditionalLaw { law: String },
    #[error("law {law:?} has a negated condition and cannot be discharged")]
    NegatedCondition { law: String },
    #[error("bad substitution: {detail}")]
    BadSubstitution { detail: String },
    #[error("substituting {var} is unsound, it occurs in hypothesis or assumption {source_eq}")]
    UnsoundSubstitution { var: String, source_eq: String },
    #[error("target has no hypothesis {index}")]
    BadHypothesis { index: usize },
    #[error("position {path:?} does not exist in {context}")]
    PositionOutOfRange { path: Vec<usize>, context: String },
    #[error("expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("law {law:?} needs {expected} premises, got {found}")]
    PremiseCount { law: String, expected: usize, found: usize },
    #[error("step {id:?} is not an assume step")]
    NotAssumption { id: String },
    #[error("rule shape: {detail}")]
    RuleShape { detail: String },
    #[error("step claims {claimed} but the rule gives {derived}")]
    ClaimMismatch { claimed: String, derived: String },
    #[error("final step proves {derived}, target is {target}")]
    TargetMismatch { target: String, derived: String },
    #[error("final step still depends on assumption {id:?}")]
    Undischarged { id: String },
}

/// The first bad step, 1-based; 0 points at the header.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("step {step}{}: {reason}", .id.as_ref().map(|i| format!(" ({i})")).unwrap_or_default())]
pub struct Rejection {
    pub step: usize,
    pub id: Option<String>,
    pub reason: RejectReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Dep {
    Hyp(usize),
    Assume(usize),
}

#[derive(Clone, Debug)]
struct Derived {
    eq: Equation,
    deps: BTreeSet<Dep>,
    assume: bool,
}

/// Incremental checking state: the target, the laws, and every step
/// accepted so far.
pub struct Kernel<'a> {
    target: Judgement,
    laws: &'a LawSet,
    ids: HashMap<String, usize>,
    derived: Vec<Derived>,
}

fn bot_eq(t: &Term) -> Equation {
    Equation::new(t.clone(), Term::Bot)
}

fn zero_times(t: &Term) -> Term {
    Term::mul(Term::Zero, t.clone())
}

impl<'a> Kernel<'a> {
    pub fn new(target: Judgement, laws: &'a LawSet) -> Kernel<'a> {
        Kernel { target, laws, ids: HashMap::new(), derived: Vec::new() }
    }

    pub fn target(&self) -> &Judgement {
        &self.target
    }

    /// Equation proved by an accepted step.
    pub fn equation(&self, id: &str) -> Option<&Equation> {
        self.ids.get(id).map(|&i| &self.derived[i].eq)
    }

    pub fn len(&self) -> usize {
        self.derived.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derived.is_empty()
    }

    /// Hypotheses and open assumptions that step `id` rests on.
    pub fn dependencies(&self, id: &str) -> Vec<Equation> {
        self.get(id).map(|d| d.deps.iter().map(|&x| self.dep_equation(x).clone()).collect()).unwrap_or_default()
    }

    /// Ids of the accepted steps, in order.
    pub fn step_ids(&self) -> Vec<String> {
        let mut ids: Vec<(&String, &usize)> = self.ids.iter().collect();
        ids.sort_by_key(|(_, &i)| i);
        ids.into_iter().map(|(id, _)| id.clone()).collect()
    }

    /// Variables of the hypotheses and assumptions `id` depends on; a
    /// `subst` step on `id` must leave them alone.
    pub(crate) fn rigid_vars(&self, id: &str) -> BTreeSet<String> {
        let Ok(d) = self.get(id) else { return BTreeSet::new() };
        d.deps
            .iter()
            .flat_map(|&dep| {
                let eq = self.dep_equation(dep);
                eq.lhs.free_vars().into_iter().chain(eq.rhs.free_vars())
            })
            .collect()
    }

    fn get(&self, id: &str) -> Result<&Derived, RejectReason> {
        self.ids
            .get(id)
            .map(|&i| &self.derived[i])
            .ok_or_else(|| RejectReason::UnknownStep { id: id.to_string() })
    }

    fn assumption(&self, id: &str) -> Result<(usize, &Derived), RejectReason> {
        let &i = self.ids.get(id).ok_or_else(|| RejectReason::UnknownStep { id: id.to_string() })?;
        let d = &self.derived[i];
        if !d.assume {
            return Err(RejectReason::NotAssumption { id: id.to_string() });
        }
        Ok((i, d))
    }

    fn dep_equation(&self, d: Dep) -> &Equation {
        match d {
            Dep::Hyp(i) => &self.target.hypotheses[i],
            Dep::Assume(i) => &self.derived[i].eq,
        }
    }

    /// Instantiates a law. Keys must be variables of the law.
    fn law_instance(
        &self,
        law: &str,
        subst: &Substitution,
    ) -> Result<(Vec<(Equation, Polarity)>, Equation), RejectReason> {
        let l = self.laws.get(law).ok_or_else(|| RejectReason::UnknownLaw { law: law.to_string() })?;
        let vars = l.body.vars_in_order();
        if let Some((v, _)) = subst.iter().find(|(v, _)| !vars.contains(v)) {
            return Err(RejectReason::BadSubstitution { detail: format!("{v} is not a variable of {law}") });
        }
        let conds = l.body.conditions.iter().map(|c| (c.eq.substitute(subst), c.polarity)).collect();
        let mut concl = l.body.conclusion.substitute(subst);
        concl.name = None;
        Ok((conds, concl))
    }

    /// The equation `rule` proves; `claim` is only read by `assume` steps.
    pub(crate) fn derive_equation(&self, rule: &Rule, claim: &Equation) -> Result<Equation, RejectReason> {
        self.derive(rule, claim).map(|d| d.eq)
    }

    fn derive(&self, rule: &Rule, claim: &Equation) -> Result<Derived, RejectReason> {
        let plain = |eq: Equation, deps: BTreeSet<Dep>| Derived { eq, deps, assume: false };
        Ok(match rule {
            Rule::Axiom { law, subst } => {
                let (conds, eq) = self.law_instance(law, subst)?;
                if !conds.is_empty() {
                    return Err(RejectReason::ConditionalLaw { law: law.clone() });
                }
                plain(eq, BTreeSet::new())
            }
            Rule::Hyp { index } => {
                let eq = self
                    .target
                    .hypotheses
                    .get(*index)
                    .ok_or(RejectReason::BadHypothesis { index: *index })?;
                plain(eq.clone(), BTreeSet::from([Dep::Hyp(*index)]))
            }
            Rule::Assume => {
                let me = self.derived.len();
                Derived { eq: claim.clone(), deps: BTreeSet::from([Dep::Assume(me)]), assume: true }
            }
            Rule::Refl { term } => plain(Equation::new(term.clone(), term.clone()), BTreeSet::new()),
            Rule::Sym { of } => {
                let d = self.get(of)?;
                plain(d.eq.flipped(), d.deps.clone())
            }
            Rule::Trans { of } => {
                if of.len() < 2 {
                    return Err(RejectReason::RuleShape { detail: "trans needs at least two steps".into() });
                }
                let first = self.get(&of[0])?;
                let (lhs, mut rhs, mut deps) = (first.eq.lhs.clone(), first.eq.rhs.clone(), first.deps.clone());
                for id in &of[1..] {
                    let d = self.get(id)?;
                    if d.eq.lhs != rhs {
                        return Err(RejectReason::Mismatch { expected: rhs.to_string(), found: d.eq.lhs.to_string() });
                    }
                    rhs = d.eq.rhs.clone();
                    deps.extend(d.deps.iter().copied());
                }
                plain(Equation::new(lhs, rhs), deps)
            }
            Rule::Cong { context, at, of } => {
                let d = self.get(of)?;
                let out_of_range =
                    || RejectReason::PositionOutOfRange { path: at.clone(), context: context.to_string() };
                let hole = context.subterm(at).ok_or_else(out_of_range)?;
                if *hole != d.eq.lhs {
                    return Err(RejectReason::Mismatch { expected: d.eq.lhs.to_string(), found: hole.to_string() });
                }
                let after = context.replace_at(at, d.eq.rhs.clone()).ok_or_else(out_of_range)?;
                plain(Equation::new(context.clone(), after), d.deps.clone())
            }
            Rule::Subst { of, subst } => {
                let d = self.get(of)?;
                let mentioned: BTreeSet<String> =
                    d.eq.lhs.free_vars().union(&d.eq.rhs.free_vars()).cloned().collect();
                for (v, t) in subst.iter() {
                    if *t == Term::Var(v.clone()) || !mentioned.contains(v) {
                        continue;
                    }
                    for &dep in &d.deps {
                        let eq = self.dep_equation(dep);
                        if eq.lhs.free_vars().contains(v) || eq.rhs.free_vars().contains(v) {
                            return Err(RejectReason::UnsoundSubstitution { var: v.clone(), source_eq: eq.to_string() });
                        }
                    }
                }
                plain(d.eq.substitute(subst), d.deps.clone())
            }
            Rule::Discharge { law, subst, premises } => {
                let (conds, eq) = self.law_instance(law, subst)?;
                if conds.iter().any(|(_, p)| *p == Polarity::NotEqual) {
                    return Err(RejectReason::NegatedCondition { law: law.clone() });
                }
                if conds.len() != premises.len() {
                    return Err(RejectReason::PremiseCount {
                        law: law.clone(),
                        expected: conds.len(),
                        found: premises.len(),
                    });
                }
                let mut deps = BTreeSet::new();
                for ((cond, _), id) in conds.iter().zip(premises) {
                    let d = self.get(id)?;
                    if !d.eq.same_as(cond) {
                        return Err(RejectReason::Mismatch { expected: cond.to_string(), found: d.eq.to_string() });
                    }
                    deps.extend(d.deps.iter().copied());
                }
                plain(eq, deps)
            }
            Rule::Rcm { left, left_assumption, right, right_assumption } => {
                let (la, a_l) = self.assumption(left_assumption)?;
                let (ra, a_r) = self.assumption(right_assumption)?;
                let (l, r) = (self.get(left)?, self.get(right)?);
                let t = &a_l.eq.lhs;
                let rr = &a_r.eq.lhs;
                let shape = [(&a_l.eq, bot_eq(t)), (&l.eq, bot_eq(rr)), (&a_r.eq, bot_eq(rr)), (&r.eq, bot_eq(t))];
                for (what, (have, want)) in ["left assumption", "left", "right assumption", "right"].iter().zip(shape) {
                    if !have.same_as(&want) {
                        return Err(RejectReason::RuleShape { detail: format!("{what} should be {want}, is {have}") });
                    }
                }
                let mut deps: BTreeSet<Dep> = l.deps.iter().copied().filter(|d| *d != Dep::Assume(la)).collect();
                deps.extend(r.deps.iter().copied().filter(|d| *d != Dep::Assume(ra)));
                plain(Equation::new(zero_times(t), zero_times(rr)), deps)
            }
            Rule::RcmPrime { of, assumption } => {
                let (ia, a) = self.assumption(assumption)?;
                let d = self.get(of)?;
                if a.eq.rhs != Term::Bot || d.eq.rhs != Term::Bot {
                    return Err(RejectReason::RuleShape {
                        detail: format!("need t = bot and r = bot, have {} and {}", a.eq, d.eq),
                    });
                }
                let (t, r) = (&a.eq.lhs, &d.eq.lhs);
                let deps = d.deps.iter().copied().filter(|x| *x != Dep::Assume(ia)).collect();
                plain(Equation::new(zero_times(r), zero_times(&Term::add(t.clone(), r.clone()))), deps)
            }
        })
    }

    /// Checks one step and records it.
    pub fn push(&mut self, step: &Step) -> Result<&Equation, RejectReason> {
        if self.ids.contains_key(&step.id) {
            return Err(RejectReason::DuplicateId { id: step.id.clone() });
        }
        let d = self.derive(&step.rule, &step.claim)?;
        if !d.eq.same_as(&step.claim) {
            return Err(RejectReason::ClaimMismatch { claimed: step.claim.to_string(), derived: d.eq.to_string() });
        }
        self.ids.insert(step.id.clone(), self.derived.len());
        self.derived.push(d);
        Ok(&self.derived.last().expect("just pushed").eq)
    }

    /// The last step must prove the target conclusion from hypotheses only.
    pub fn finish(&self) -> Result<(), RejectReason> {
        let last = self.derived.last().ok_or(RejectReason::Empty)?;
        if !last.eq.same_as(&self.target.conclusion) {
            return Err(RejectReason::TargetMismatch {
                target: self.target.conclusion.to_string(),
                derived: last.eq.to_string(),
            });
        }
        if let Some(Dep::Assume(i)) = last.deps.iter().find(|d| matches!(d, Dep::Assume(_))) {
            let id = self.ids.iter().find(|(_, &k)| k == *i).map(|(id, _)| id.clone()).unwrap_or_default();
            return Err(RejectReason::Undischarged { id });
        }
        Ok(())
    }
}

impl fmt::Debug for Kernel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel").field("target", &self.target).field("steps", &self.derived.len()).finish()
    }
}

/// Accepts the script or names its first bad step.
pub fn check_proof(script: &ProofScript, laws: &LawSet) -> Result<(), Rejection> {
    let mut k = Kernel::new(script.target.clone(), laws);
    for (i, step) in script.steps.iter().enumerate() {
        k.push(step).map_err(|reason| Rejection { step: i + 1, id: Some(step.id.clone()), reason })?;
    }
    k.finish().map_err(|reason| Rejection {
        step: script.steps.len(),
        id: script.steps.last().map(|s| s.id.clone()),
        reason,
    })
}
