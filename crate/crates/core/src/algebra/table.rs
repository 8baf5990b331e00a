use std::path::Path;

use rand::Rng;
use serde_json::{json, Value};

use super::{render_value, AlgebraError, Prng, TotalAlgebra};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("cannot read table file: {0}")]
    Io(#[from] std::io::Error),
    #[error("table is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("table field {0:?} is missing or has the wrong shape")]
    Field(&'static str),
    #[error("table field {field:?} refers to element {index}, carrier has {size}")]
    OutOfRange { field: &'static str, index: usize, size: usize },
    #[error("carrier labels must be distinct, {0:?} repeats")]
    DuplicateLabel(String),
    #[error("carrier must not be empty")]
    Empty,
}

/// Names of the table algebras bundled with the crate.
pub const SHIPPED_TABLES: &[&str] = &["two-level", "three-level", "z6-split"];

const TWO_LEVEL: &str = include_str!("../../tables/two-level.json");
const THREE_LEVEL: &str = include_str!("../../tables/three-level.json");
const Z6_SPLIT: &str = include_str!("../../tables/z6-split.json");

/// A finite total algebra given by operation tables over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableAlgebra {
    name: String,
    carrier: Vec<Value>,
    labels: Vec<String>,
    zero: usize,
    one: usize,
    bot: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    div: Vec<Vec<usize>>,
    neg: Vec<usize>,
}

pub struct TableParts {
    pub carrier: Vec<Value>,
    pub zero: usize,
    pub one: usize,
    pub bot: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub div: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
}

impl TableAlgebra {
    pub fn new(name: impl Into<String>, p: TableParts) -> Result<TableAlgebra, TableError> {
        let n = p.carrier.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        let check = |field: &'static str, index: usize| {
            if index < n {
                Ok(())
            } else {
                Err(TableError::OutOfRange { field, index, size: n })
            }
        };
        check("zero", p.zero)?;
        check("one", p.one)?;
        check("bot", p.bot)?;
        for (field, table) in [("add", &p.add), ("mul", &p.mul), ("div", &p.div)] {
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return Err(TableError::Field(field));
            }
            for &i in table.iter().flatten() {
                check(field, i)?;
            }
        }
        if p.neg.len() != n {
            return Err(TableError::Field("neg"));
        }
        for &i in &p.neg {
            check("neg", i)?;
        }
        let labels: Vec<String> = p.carrier.iter().map(render_value).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(TableError::DuplicateLabel(l.clone()));
            }
        }
        Ok(TableAlgebra {
            name: name.into(),
            carrier: p.carrier,
            labels,
            zero: p.zero,
            one: p.one,
            bot: p.bot,
            add: p.add,
            mul: p.mul,
            div: p.div,
            neg: p.neg,
        })
    }

    /// Reads `{"carrier": [...], "add": [[...]], "mul": [[...]], "neg": [...],
    /// "div": [[...]], "zero": i, "one": j, "bot": k}`. An optional `"name"`
    /// labels the algebra.
    pub fn from_json(v: &Value) -> Result<TableAlgebra, TableError> {
        let obj = v.as_object().ok_or(TableError::Field("carrier"))?;
        let carrier = obj
            .get("carrier")
            .and_then(Value::as_array)
            .cloned()
            .ok_or(TableError::Field("carrier"))?;
        let index = |field: &'static str| {
            obj.get(field)
                .and_then(Value::as_u64)
                .map(|i| i as usize)
                .ok_or(TableError::Field(field))
        };
        let row = |field: &'static str, v: &Value| -> Result<Vec<usize>, TableError> {
            v.as_array()
                .ok_or(TableError::Field(field))?
                .iter()
                .map(|x| x.as_u64().map(|i| i as usize).ok_or(TableError::Field(field)))
                .collect()
        };
        let square = |field: &'static str| -> Result<Vec<Vec<usize>>, TableError> {
            obj.get(field)
                .and_then(Value::as_array)
                .ok_or(TableError::Field(field))?
                .iter()
                .map(|r| row(field, r))
                .collect()
        };
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("table").to_string();
        TableAlgebra::new(
            name,
            TableParts {
                carrier,
                zero: index("zero")?,
                one: index("one")?,
                bot: index("bot")?,
                add: square("add")?,
                mul: square("mul")?,
                div: square("div")?,
                neg: row("neg", obj.get("neg").ok_or(TableError::Field("neg"))?)?,
            },
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<TableAlgebra, TableError> {
        let text = std::fs::read_to_string(path)?;
        TableAlgebra::from_json(&serde_json::from_str(&text)?)
    }

    /// A bundled table by name. `two-level` and `three-level` stack copies of
    /// `Z_2` in a chain of levels; `z6-split` has `Z_6` below `Z_3` and `Z_2`
    /// whose join is `bot`, so it has zero divisors and bot-splitting.
    pub fn shipped(name: &str) -> Option<TableAlgebra> {
        let text = match name {
            "two-level" => TWO_LEVEL,
            "three-level" => THREE_LEVEL,
            "z6-split" => Z6_SPLIT,
            _ => return None,
        };
        let v: Value = serde_json::from_str(text).expect("shipped table is JSON");
        Some(TableAlgebra::from_json(&v).expect("shipped table is well formed"))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "carrier": self.carrier,
            "add": self.add,
            "mul": self.mul,
            "neg": self.neg,
            "div": self.div,
            "zero": self.zero,
            "one": self.one,
            "bot": self.bot,
        })
    }

    /// Tabulates a finite algebra. Returns the table and the source element
    /// behind each index.
    pub fn from_algebra<A: TotalAlgebra>(alg: &A) -> Option<(TableAlgebra, Vec<A::Elem>)> {
        let elems = alg.elements()?;
        let idx = |e: &A::Elem| elems.iter().position(|x| x == e).expect("operation left the carrier");
        let square =
            |f: &dyn Fn(&A::Elem, &A::Elem) -> A::Elem| -> Vec<Vec<usize>> {
                elems.iter().map(|a| elems.iter().map(|b| idx(&f(a, b))).collect()).collect()
            };
        let parts = TableParts {
            carrier: elems.iter().map(|e| alg.encode(e)).collect(),
            zero: idx(&alg.zero()),
            one: idx(&alg.one()),
            bot: idx(&alg.bot()),
            add: square(&|a, b| alg.add(a, b)),
            mul: square(&|a, b| alg.mul(a, b)),
            div: square(&|a, b| alg.div(a, b)),
            neg: elems.iter().map(|a| idx(&alg.neg(a))).collect(),
        };
        let table = TableAlgebra::new(alg.name(), parts).ok()?;
        Some((table, elems))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> TableAlgebra {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn carrier(&self) -> &[Value] {
        &self.carrier
    }
}

impl TotalAlgebra for TableAlgebra {
    type Elem = usize;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn zero(&self) -> usize {
        self.zero
    }

    fn one(&self) -> usize {
        self.one
    }

    fn bot(&self) -> usize {
        self.bot
    }

    fn add(&self, a: &usize, b: &usize) -> usize {
        self.add[*a][*b]
    }

    fn neg(&self, a: &usize) -> usize {
        self.neg[*a]
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }

    fn div(&self, a: &usize, b: &usize) -> usize {
        self.div[*a][*b]
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.carrier.len()).collect())
    }

    fn sample(&self, rng: &mut Prng) -> usize {
        rng.gen_range(0..self.carrier.len())
    }

    fn encode(&self, e: &usize) -> Value {
        self.carrier[*e].clone()
    }

    fn decode(&self, s: &str) -> Result<usize, AlgebraError> {
        let t = s.trim();
        if let Some(i) = self.labels.iter().position(|l| l == t) {
            return Ok(i);
        }
        if let Ok(v) = serde_json::from_str::<Value>(t) {
            if let Some(i) = self.carrier.iter().position(|c| *c == v) {
                return Ok(i);
            }
        }
        Err(AlgebraError::BadElement { algebra: self.name.clone(), input: s.to_string() })
    }

    fn render(&self, e: &usize) -> String {
        self.labels[*e].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_zn_inverse_division;

    #[test]
    fn tabulated_zn_agrees() {
        let z = make_zn_inverse_division(6).unwrap();
        let (t, elems) = TableAlgebra::from_algebra(&z).unwrap();
        assert_eq!(t.size(), 7);
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                assert_eq!(elems[t.div(&i, &j)], z.div(a, b));
                assert_eq!(elems[t.add(&i, &j)], z.add(a, b));
            }
        }
        assert_eq!(t.render(&t.bot()), "bot");
    }

    #[test]
    fn json_round_trip() {
        let z = make_zn_inverse_division(3).unwrap();
        let (t, _) = TableAlgebra::from_algebra(&z).unwrap();
        assert_eq!(TableAlgebra::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rejects_bad_tables() {
        let mut v = json!({
            "carrier": [0, "bot"], "add": [[0, 1], [1, 1]], "mul": [[0, 1], [1, 1]],
            "neg": [0, 1], "div": [[1, 1], [1, 1]], "zero": 0, "one": 0, "bot": 1
        });
        assert!(TableAlgebra::from_json(&v).is_ok());
        v["add"] = json!([[0, 2], [1, 1]]);
        assert!(matches!(TableAlgebra::from_json(&v), Err(TableError::OutOfRange { .. })));
        v["add"] = json!([[0, 1]]);
        assert!(matches!(TableAlgebra::from_json(&v), Err(TableError::Field("add"))));
        v["add"] = json!([[0, 1], [1, 1]]);
        v["carrier"] = json!([0, 0]);
        assert!(matches!(TableAlgebra::from_json(&v), Err(TableError::DuplicateLabel(_))));
    }

    #[test]
    fn shipped_tables_load() {
        for name in SHIPPED_TABLES {
            let t = TableAlgebra::shipped(name).unwrap();
            assert_eq!(t.name(), *name);
            assert_eq!(t.render(&t.bot()), "bot");
        }
        assert!(TableAlgebra::shipped("nope").is_none());
    }

    #[test]
    fn decode_by_label() {
        let z = make_zn_inverse_division(3).unwrap();
        let (t, _) = TableAlgebra::from_algebra(&z).unwrap();
        assert_eq!(t.decode("2").unwrap(), 2);
        assert_eq!(t.decode("bot").unwrap(), t.bot());
        assert!(t.decode("7").is_err());
    }
}
