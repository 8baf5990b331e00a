//! JSON form of terms: `{"op": "div", "args": [...]}`, `{"op": "var", "name": "x"}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{is_identifier, parse, Term};

#[derive(Debug, thiserror::Error)]
pub enum JsonTermError {
    #[error("expected a JSON object or a term string, got {0}")]
    NotATerm(Value),
    #[error("unknown op {0:?}")]
    UnknownOp(String),
    #[error("op {op:?} takes {want} arguments, got {got}")]
    Arity { op: String, want: usize, got: usize },
    #[error("invalid variable name {0:?}")]
    BadVar(String),
    #[error(transparent)]
    Parse(#[from] super::ParseError),
}

impl Term {
    pub fn to_json(&self) -> Value {
        let op = |name: &str, args: &[&Term]| {
            json!({ "op": name, "args": args.iter().map(|a| a.to_json()).collect::<Vec<_>>() })
        };
        match self {
            Term::Var(v) => json!({ "op": "var", "name": v }),
            Term::Zero => json!({ "op": "zero" }),
            Term::One => json!({ "op": "one" }),
            Term::Bot => json!({ "op": "bot" }),
            Term::Neg(t) => op("neg", &[t]),
            Term::Add(l, r) => op("add", &[l, r]),
            Term::Mul(l, r) => op("mul", &[l, r]),
            Term::Div(l, r) => op("div", &[l, r]),
            Term::Cond(x, y, z) => op("cond", &[x, y, z]),
        }
    }

    /// Accepts the AST object form or a string in the concrete syntax.
    pub fn from_json(v: &Value) -> Result<Term, JsonTermError> {
        if let Value::String(s) = v {
            return Ok(parse(s)?);
        }
        let obj = v.as_object().ok_or_else(|| JsonTermError::NotATerm(v.clone()))?;
        let op = obj
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| JsonTermError::NotATerm(v.clone()))?;
        if op == "var" {
            let name = obj.get("name").and_then(Value::as_str).unwrap_or_default();
            if !is_identifier(name) {
                return Err(JsonTermError::BadVar(name.to_string()));
            }
            return Ok(Term::var(name));
        }
        let args = match obj.get("args") {
            None => Vec::new(),
            Some(Value::Array(a)) => a.iter().map(Term::from_json).collect::<Result<Vec<_>, _>>()?,
            Some(other) => return Err(JsonTermError::NotATerm(other.clone())),
        };
        let want = match op {
            "zero" | "one" | "bot" => 0,
            "neg" => 1,
            "add" | "mul" | "div" => 2,
            "cond" => 3,
            other => return Err(JsonTermError::UnknownOp(other.to_string())),
        };
        if args.len() != want {
            return Err(JsonTermError::Arity { op: op.to_string(), want, got: args.len() });
        }
        let mut it = args.into_iter();
        let mut next = || it.next().expect("arity checked");
        Ok(match op {
            "zero" => Term::Zero,
            "one" => Term::One,
            "bot" => Term::Bot,
            "neg" => Term::neg(next()),
            "add" => Term::add(next(), next()),
            "mul" => Term::mul(next(), next()),
            "div" => Term::div(next(), next()),
            _ => Term::cond(next(), next(), next()),
        })
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Term::from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ast_shape() {
        let t = parse("1/x").unwrap();
        assert_eq!(
            t.to_json(),
            json!({"op": "div", "args": [{"op": "one"}, {"op": "var", "name": "x"}]})
        );
    }

    #[test]
    fn accepts_strings_and_objects() {
        let t = parse("cond(x; -y; bot)").unwrap();
        assert_eq!(Term::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(Term::from_json(&json!("cond(x; -y; bot)")).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            Term::from_json(&json!({"op": "add", "args": [{"op": "one"}]})),
            Err(JsonTermError::Arity { .. })
        ));
        assert!(matches!(
            Term::from_json(&json!({"op": "pow", "args": []})),
            Err(JsonTermError::UnknownOp(_))
        ));
        assert!(matches!(
            Term::from_json(&json!({"op": "var", "name": "9"})),
            Err(JsonTermError::BadVar(_))
        ));
        assert!(Term::from_json(&json!(3)).is_err());
    }
}
