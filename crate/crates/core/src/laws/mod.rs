//! Laws as data and the model checker that validates them.
//!
//! Law files hold one law per line, `name : lhs = rhs` or
//! `name : c1 /\ c2 -> lhs = rhs`, with `!=` for a negated condition. Lines
//! starting with `#` are comments; a `#!` line attaches a note to the law
//! that follows it.

mod check;

use std::collections::BTreeSet;
use std::path::Path;

use crate::term::{is_identifier, parse_conditional, ConditionalEquation, ParseError};

pub use check::{
    check_at, check_conditional, check_eager, check_eager_at, check_equation, check_law,
    check_suite, check_suite_eager, scan_zn, CheckError, Mode, Semantics, SideValues, SuiteReport,
    Verdict, VerdictMode, DEFAULT_SEED, DEFAULT_TRIALS, MAX_EXHAUSTIVE_VARS,
};

const E_WCR_BOT: &str = include_str!("../../laws/e_wcr_bot.laws");
const E_FTC_CM_DIV: &str = include_str!("../../laws/e_ftc_cm.laws");
const E_COND_OP: &str = include_str!("../../laws/e_cond_op.laws");
const EXTRA: &str = include_str!("../../laws/extra.laws");
const DERIVED: &str = include_str!("../../laws/derived.laws");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    pub name: String,
    pub body: ConditionalEquation,
    pub note: Option<String>,
}

impl Law {
    pub fn new(name: impl Into<String>, body: ConditionalEquation) -> Law {
        let name = name.into();
        let body = ConditionalEquation { name: Some(name.clone()), ..body };
        Law { name, body, note: None }
    }

    /// Parses a law body in concrete syntax.
    pub fn parse(name: &str, body: &str) -> Result<Law, ParseError> {
        Ok(Law::new(name, parse_conditional(body)?))
    }

    pub fn is_equation(&self) -> bool {
        self.body.is_equation()
    }

    /// `name : body` in law-file syntax.
    pub fn to_line(&self) -> String {
        format!("{} : {}", self.name, self.body)
    }
}

impl std::fmt::Display for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_line())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LawError {
    #[error("line {line}: expected `name : law`")]
    MissingName { line: usize },
    #[error("line {line}: invalid law name {name:?}")]
    BadName { line: usize, name: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("law name {0:?} appears twice")]
    Duplicate(String),
    #[error("unknown law or law set {0:?}")]
    Unknown(String),
    #[error("cannot read law file: {0}")]
    Io(#[from] std::io::Error),
}

/// Reads law-file text.
pub fn parse_law_file(text: &str) -> Result<Vec<Law>, LawError> {
    let mut laws: Vec<Law> = Vec::new();
    let mut note: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if let Some(n) = s.strip_prefix("#!") {
            note = Some(n.trim().to_string());
            continue;
        }
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (name, body) = s.split_once(':').ok_or(LawError::MissingName { line })?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(LawError::BadName { line, name: name.to_string() });
        }
        if laws.iter().any(|l| l.name == name) {
            return Err(LawError::Duplicate(name.to_string()));
        }
        let mut law = Law::parse(name, body).map_err(|source| LawError::Parse { line, source })?;
        law.note = note.take();
        laws.push(law);
    }
    Ok(laws)
}

/// An ordered collection of laws with unique names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawSet {
    pub name: String,
    laws: Vec<Law>,
}

/// Built-in set names, in the order `models` lists them.
pub const BUILTIN_SETS: &[&str] =
    &["e-wcr-bot", "e-ftc-cm", "e-cond-op", "nvl", "avl", "phi-235", "derived"];

fn shipped(text: &str) -> Vec<Law> {
    parse_law_file(text).expect("shipped law files parse")
}

impl LawSet {
    pub fn new(name: impl Into<String>, laws: Vec<Law>) -> Result<LawSet, LawError> {
        let mut seen = BTreeSet::new();
        for l in &laws {
            if !seen.insert(l.name.clone()) {
                return Err(LawError::Duplicate(l.name.clone()));
            }
        }
        Ok(LawSet { name: name.into(), laws })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<LawSet, LawError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file").to_string();
        LawSet::new(name, parse_law_file(&text)?)
    }

    pub fn e_wcr_bot() -> LawSet {
        LawSet { name: "e-wcr-bot".into(), laws: shipped(E_WCR_BOT) }
    }

    pub fn e_ftc_cm() -> LawSet {
        let mut laws = shipped(E_WCR_BOT);
        laws.extend(shipped(E_FTC_CM_DIV));
        LawSet { name: "e-ftc-cm".into(), laws }
    }

    pub fn e_cond_op() -> LawSet {
        LawSet { name: "e-cond-op".into(), laws: shipped(E_COND_OP) }
    }

    pub fn derived() -> LawSet {
        LawSet { name: "derived".into(), laws: shipped(DERIVED) }
    }

    fn extra(name: &str) -> LawSet {
        let law = shipped(EXTRA).into_iter().find(|l| l.name == name).expect("shipped law");
        LawSet { name: name.replace('_', "-"), laws: vec![law] }
    }

    pub fn builtin(name: &str) -> Option<LawSet> {
        Some(match name {
            "e-wcr-bot" => LawSet::e_wcr_bot(),
            "e-ftc-cm" => LawSet::e_ftc_cm(),
            "e-cond-op" => LawSet::e_cond_op(),
            "nvl" => LawSet::extra("nvl"),
            "avl" => LawSet::extra("avl"),
            "phi-235" => LawSet::extra("phi_235"),
            "derived" => LawSet::derived(),
            _ => return None,
        })
    }

    /// Every shipped law, each name once.
    pub fn all_builtin() -> LawSet {
        let mut laws = shipped(E_WCR_BOT);
        for text in [E_FTC_CM_DIV, E_COND_OP, EXTRA, DERIVED] {
            laws.extend(shipped(text));
        }
        LawSet { name: "all".into(), laws }
    }

    /// Resolves `a+b+...` where each part names a built-in set or a single
    /// shipped law. Laws already present are not repeated.
    pub fn resolve(spec: &str) -> Result<LawSet, LawError> {
        let all = LawSet::all_builtin();
        let mut laws: Vec<Law> = Vec::new();
        for part in spec.split('+').map(str::trim) {
            let found = match LawSet::builtin(part) {
                Some(set) => set.laws,
                None => vec![all
                    .get(part)
                    .or_else(|| all.get(&part.replace('-', "_")))
                    .cloned()
                    .ok_or_else(|| LawError::Unknown(part.to_string()))?],
            };
            for l in found {
                if !laws.iter().any(|x| x.name == l.name) {
                    laws.push(l);
                }
            }
        }
        Ok(LawSet { name: spec.to_string(), laws })
    }

    pub fn get(&self, name: &str) -> Option<&Law> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub fn laws(&self) -> &[Law] {
        &self.laws
    }

    pub fn len(&self) -> usize {
        self.laws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.laws.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Law> {
        self.laws.iter()
    }
}

impl<'a> IntoIterator for &'a LawSet {
    type Item = &'a Law;
    type IntoIter = std::slice::Iter<'a, Law>;

    fn into_iter(self) -> Self::IntoIter {
        self.laws.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_conditional;

    #[test]
    fn builtin_sizes() {
        assert_eq!(LawSet::e_wcr_bot().len(), 11);
        assert_eq!(LawSet::e_ftc_cm().len(), 16);
        assert_eq!(LawSet::e_cond_op().len(), 5);
        assert_eq!(LawSet::derived().len(), 5);
        for name in BUILTIN_SETS {
            assert!(LawSet::builtin(name).is_some(), "{name}");
        }
    }

    #[test]
    fn shipped_laws_round_trip() {
        for law in &LawSet::all_builtin() {
            let again = parse_conditional(&law.body.to_string()).unwrap();
            assert_eq!(again.conditions, law.body.conditions, "{}", law.name);
            assert_eq!(again.conclusion, law.body.conclusion, "{}", law.name);
            let lines = parse_law_file(&law.to_line()).unwrap();
            assert_eq!(lines[0].body.conclusion, law.body.conclusion);
        }
    }

    #[test]
    fn notes_attach_to_next_law() {
        let set = LawSet::e_cond_op();
        assert!(set.get("cond_unit").unwrap().note.is_some());
        assert!(set.get("cond_zero").unwrap().note.is_none());
    }

    #[test]
    fn resolve_unions() {
        let s = LawSet::resolve("e-ftc-cm+avl").unwrap();
        assert_eq!(s.len(), 17);
        assert_eq!(s.laws().last().unwrap().name, "avl");
        assert_eq!(LawSet::resolve("avl+avl").unwrap().len(), 1);
        assert_eq!(LawSet::resolve("div-mul").unwrap().names(), vec!["div_mul"]);
        assert!(matches!(LawSet::resolve("nope"), Err(LawError::Unknown(_))));
    }

    #[test]
    fn file_errors() {
        assert!(matches!(parse_law_file("x + 0 = x"), Err(LawError::MissingName { line: 1 })));
        assert!(matches!(parse_law_file("\n9a : x = x"), Err(LawError::BadName { line: 2, .. })));
        assert!(matches!(parse_law_file("a : x = "), Err(LawError::Parse { line: 1, .. })));
        assert!(matches!(parse_law_file("a : x = x\na : y = y"), Err(LawError::Duplicate(_))));
    }

    #[test]
    fn nvl_has_negated_condition() {
        let set = LawSet::builtin("nvl").unwrap();
        assert!(set.laws()[0].body.has_negated_condition());
    }
}
