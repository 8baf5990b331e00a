//! Regenerates the shipped proof scripts and the mutant fixtures.
//!
//! cargo run -p meadowlab --example build_scripts -- [out_dir]
//!
//! Scripts are written with [`ScriptBuilder`], so every claim is the one the
//! kernel computes. Rewrites are given as short strings:
//! `[<]name[@i.j.k][{v=term,...}]`, where `<` rewrites right to left, `@`
//! forces the position and `{}` fixes law variables. A name starting with `$`
//! refers to an earlier proved step instead of a law.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use meadowlab::laws::LawSet;
use meadowlab::proofkernel::{check_proof, Chain, ProofScript, Rejection, ScriptBuilder};

type Res<T> = Result<T, Rejection>;

struct Writer<'a> {
    b: ScriptBuilder<'a>,
    named: HashMap<String, String>,
}

struct Rw<'s> {
    backward: bool,
    name: &'s str,
    at: Option<Vec<usize>>,
    fix: Vec<(&'s str, &'s str)>,
}

fn parse_rw(tok: &str) -> Rw<'_> {
    let (backward, rest) = match tok.strip_prefix('<') {
        Some(r) => (true, r),
        None => (false, tok),
    };
    let (head, fix) = match rest.split_once('{') {
        Some((h, f)) => {
            let f = f.strip_suffix('}').expect("closing brace");
            let fix = f.split(',').map(|kv| kv.split_once('=').expect("v=term")).collect();
            (h, fix)
        }
        None => (rest, vec![]),
    };
    let (name, at) = match head.split_once('@') {
        Some((n, p)) => (n, Some(p.split('.').map(|i| i.parse().expect("path index")).collect())),
        None => (head, None),
    };
    Rw { backward, name, at, fix }
}

impl<'a> Writer<'a> {
    fn new(target: &str, laws: &'a LawSet) -> Writer<'a> {
        let b = ScriptBuilder::new(target, laws, &laws.name).expect("target parses");
        Writer { b, named: HashMap::new() }
    }

    fn id(&self, name: &str) -> String {
        self.named.get(name).cloned().unwrap_or_else(|| panic!("no step named {name}"))
    }

    fn name(&mut self, name: &str, id: String) -> String {
        self.named.insert(name.to_string(), id.clone());
        id
    }

    /// Rewrites `start` with each token in turn and names the result.
    fn chain(&mut self, name: &str, start: &str, rws: &[&str]) -> Res<String> {
        let mut c = Chain::start(start);
        self.run(&mut c, rws)?;
        let id = self.b.close(c)?;
        Ok(self.name(name, id))
    }

    /// Continues from a proved step.
    fn chain_from(&mut self, name: &str, from: &str, rws: &[&str]) -> Res<String> {
        let from = self.id(from);
        let mut c = Chain::from_step(&self.b, &from);
        self.run(&mut c, rws)?;
        let id = self.b.close(c)?;
        Ok(self.name(name, id))
    }

    fn run(&mut self, c: &mut Chain, rws: &[&str]) -> Res<()> {
        for tok in rws {
            let rw = parse_rw(tok);
            let at = rw.at.as_deref();
            let r = match rw.name.strip_prefix('$') {
                Some(step) => {
                    let id = self.id(step);
                    self.b.rw_step(c, &id, rw.backward, &rw.fix, at)
                }
                None => self.b.rw(c, rw.name, rw.backward, &rw.fix, at),
            };
            r.inspect_err(|_| eprintln!("rewrite {tok} failed on {}", c.rhs()))?;
        }
        Ok(())
    }

    fn sym(&mut self, name: &str, of: &str) -> Res<String> {
        let of = self.id(of);
        let id = self.b.sym(&of)?;
        Ok(self.name(name, id))
    }

    fn finish(self) -> Res<ProofScript> {
        self.b.finish()
    }
}

/// `x + 0*x = x`
fn lemma_x0(w: &mut Writer) -> Res<()> {
    w.chain("X0", "x + 0*x", &["<mul_one@0", "mul_comm@0", "mul_comm@1", "<distrib", "add_zero", "mul_comm", "mul_one"])?;
    Ok(())
}

/// `0*0 = 0`, needs X0.
fn lemma_z00(w: &mut Writer) -> Res<()> {
    w.chain("Z00", "0*0", &["<add_zero{x=0*0}", "add_comm", "$X0"])?;
    Ok(())
}

/// `0*bot = bot`
fn lemma_z0b(w: &mut Writer) -> Res<()> {
    w.chain("Z0B", "0*bot", &["<add_neg", "add_comm", "add_bot"])?;
    Ok(())
}

/// `y*bot = bot`, needs Z00 and Z0B.
fn lemma_mb(w: &mut Writer) -> Res<()> {
    w.chain(
        "B0",
        "bot",
        &["<add_bot{x=x/0}", "bot_div@1", "div_add", "mul_comm@0.0", "mul_comm@0.1", "mul_one@0.1", "add_zero", "$Z00"],
    )?;
    w.sym("B", "B0")?;
    w.chain(
        "MB",
        "y*bot",
        &["<$Z0B@1", "mul_assoc", "mul_comm@0", "bot_div@1", "div_one@0", "div_mul", "mul_comm@0", "mul_one@0", "mul_one@1", "$B"],
    )?;
    Ok(())
}

/// From `h : z = z + 1`, proves `z = bot`. Needs X0 and MB.
fn succ_fix_from(w: &mut Writer, z: &str, h: &str) -> Res<String> {
    w.chain(
        "E1",
        &format!("0*({z})"),
        &[&format!("<add_neg{{x={z}}}"), &format!("${h}@0"), "add_assoc", "add_comm@1", "<add_assoc", "add_neg@0", "add_comm"],
    )?;
    w.chain("G", &format!("1/(0*({z}))"), &["$E1@1", "div_shift", "<div_one", "<$E1"])?;
    w.chain("H", &format!("0*({z})"), &["<$G", "<mul_one@0", "<div_mul", "<bot_div@0", "mul_comm", "$MB"])?;
    w.chain("FIX", z, &["<$X0", "$H@1", "add_bot"])
}

fn zero_one_bot(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("0 = 1 -> 0 = bot", laws);
    let h = w.b.hyp(0)?;
    w.name("HYP", h);
    w.chain("END", "0", &["$HYP", "div_one", "<$HYP@1", "<bot_div"])?;
    w.finish()
}

fn succ_fix(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("x = x + 1 -> x = bot", laws);
    lemma_x0(&mut w)?;
    lemma_z00(&mut w)?;
    lemma_z0b(&mut w)?;
    lemma_mb(&mut w)?;
    let h = w.b.hyp(0)?;
    w.name("HYP", h);
    succ_fix_from(&mut w, "x", "HYP")?;
    w.finish()
}

fn zero_mul_inv(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("0*x = 1/y -> x = bot", laws);
    lemma_x0(&mut w)?;
    lemma_z00(&mut w)?;
    lemma_z0b(&mut w)?;
    lemma_mb(&mut w)?;
    let h = w.b.hyp(0)?;
    w.name("HYP", h);
    // y*(1/y) = y/y = 1 + 0/y
    w.chain("T", "y*(1/y)", &["div_one@0", "div_mul", "mul_comm@0", "mul_one@0", "mul_one@1"])?;
    // 1 + 0/y = 0*(y*x)
    w.chain(
        "A",
        "1 + 0/y",
        &["div_one@0", "div_add", "mul_one@0.0", "mul_one@0.1", "mul_one@1", "add_zero", "<$T", "<$HYP", "mul_assoc", "mul_comm@0", "<mul_assoc"],
    )?;
    // 0*(1 + 0/y) = 0/y
    w.chain(
        "C",
        "0*(1 + 0/y)",
        &["distrib", "mul_comm@0", "mul_one@0", "add_comm", "add_zero", "div_one@0", "div_mul", "$Z00", "mul_one@1"],
    )?;
    // 0*(1 + 0/y) = 1 + 0/y
    w.chain("D", "0*(1 + 0/y)", &["$A@1", "mul_assoc", "$Z00", "<$A"])?;
    w.sym("C'", "C")?;
    w.chain_from("Z", "C'", &["$D", "add_comm"])?;
    let fix = succ_fix_from(&mut w, "0/y", "Z")?;
    w.name("ZBOT", fix);
    w.chain("ZI", "0*(1/x)", &["div_one@0", "div_mul", "mul_comm@0", "mul_one@0", "mul_one@1"])?;
    w.chain("END", "x", &["<$X0", "<$Z00@1.0", "<mul_assoc@1", "$HYP", "$ZI", "$ZBOT", "add_bot"])?;
    w.finish()
}

fn avl_squares(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("x*x = 0 -> x = 0", laws);
    lemma_x0(&mut w)?;
    lemma_z00(&mut w)?;
    lemma_z0b(&mut w)?;
    let h = w.b.hyp(0)?;
    w.name("HYP", h);
    w.chain("P1", "0*x", &["<zero_square", "$HYP", "$Z00"])?;
    w.chain("P2", "1/x * 1/x", &["div_mul", "mul_one", "$HYP", "<bot_div"])?;
    w.chain("P3", "0*(1/x)", &["<zero_square", "$P2", "$Z0B"])?;
    w.chain("P4", "1/x", &["<$X0", "$P3", "add_bot"])?;
    let p4 = w.id("P4");
    let avl = w.b.discharge("avl", &[], &[&p4])?;
    w.name("AVL", avl);
    w.sym("AVL'", "AVL")?;
    w.chain_from("END", "AVL'", &["$P1"])?;
    w.finish()
}

/// The two halves of `1/x = bot <-> 1/(x*x) = bot`, each under its
/// assumption. Returns `(a1, left, a2, right)`.
fn inverse_square_halves(w: &mut Writer) -> Res<(String, String, String, String)> {
    lemma_x0(w)?;
    lemma_z00(w)?;
    lemma_z0b(w)?;
    lemma_mb(w)?;
    let a1 = w.b.assume("1/x = bot")?;
    w.name("A1", a1.clone());
    let left = w.chain("L", "1/(x*x)", &["<mul_one@0", "<div_mul", "$A1", "$A1", "$MB"])?;
    let a2 = w.b.assume("1/(x*x) = bot")?;
    w.name("A2", a2.clone());
    let right = w.chain("R", "1/x", &["<$X0", "<zero_square@1", "div_mul", "mul_one", "$A2", "$Z0B", "add_bot"])?;
    Ok((a1, left, a2, right))
}

fn rcm_inverse_square(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("0*(1/x) = 0*(1/(x*x))", laws);
    let (a1, left, a2, right) = inverse_square_halves(&mut w)?;
    w.b.rcm(&left, &a1, &right, &a2)?;
    w.finish()
}

fn rcm_via_prime(laws: &LawSet) -> Res<ProofScript> {
    let mut w = Writer::new("0*(1/x) = 0*(1/(x*x))", laws);
    let (a1, left, a2, right) = inverse_square_halves(&mut w)?;
    let p1 = w.b.rcm_prime(&left, &a1)?;
    w.name("P1", p1);
    let p2 = w.b.rcm_prime(&right, &a2)?;
    w.name("P2", p2);
    w.chain_from("END", "P2", &["add_comm@1", "<$P1"])?;
    w.finish()
}

/// One-line edits of shipped scripts, each of which the kernel must reject.
/// `(file, source script, description, edit)`; the edit gets the step lines.
type Edit = fn(&mut Vec<serde_json::Value>);

fn mutants() -> Vec<(&'static str, &'static str, &'static str, Edit)> {
    fn step_mut(lines: &mut [serde_json::Value], i: usize) -> &mut serde_json::Map<String, serde_json::Value> {
        lines[i].as_object_mut().expect("step object")
    }
    fn first(lines: &[serde_json::Value], rule: &str) -> usize {
        lines.iter().position(|l| l["rule"] == rule).expect("rule present")
    }
    vec![
        ("drop_trans", "ZERO_ONE_BOT", "the first trans step is removed", |l| {
            let i = first(l, "trans");
            l.remove(i);
        }),
        ("drop_step", "SUCC_FIX", "a cited step is removed", |l| {
            let i = first(l, "cong");
            l.remove(i);
        }),
        ("wrong_claim", "ZERO_ONE_BOT", "a claim is altered", |l| {
            let i = first(l, "axiom");
            step_mut(l, i).insert("claim".into(), "1 = 1/0".into());
        }),
        ("unknown_law", "ZERO_ONE_BOT", "an axiom cites a law outside the set", |l| {
            let i = first(l, "axiom");
            step_mut(l, i).insert("law".into(), "mul_inverse".into());
        }),
        ("bad_subst", "SUCC_FIX", "a substitution names a variable the law lacks", |l| {
            let i = first(l, "axiom");
            let s = step_mut(l, i);
            let subst = s.entry("subst").or_insert(serde_json::json!({}));
            subst.as_object_mut().expect("subst map").insert("w".into(), "0".into());
        }),
        ("position_out_of_range", "SUCC_FIX", "a congruence path leaves the context", |l| {
            let i = first(l, "cong");
            step_mut(l, i).insert("at".into(), serde_json::json!([0, 0, 0, 0, 0, 0]));
        }),
        ("bad_hypothesis", "ZERO_ONE_BOT", "a hyp step uses an index the target lacks", |l| {
            let i = first(l, "hyp");
            step_mut(l, i).insert("index".into(), 1.into());
        }),
        ("forward_reference", "ZERO_ONE_BOT", "a trans step cites a later step", |l| {
            let i = first(l, "trans");
            step_mut(l, i).insert("of".into(), serde_json::json!(["s1", "s99"]));
        }),
        ("unsound_subst", "SUCC_FIX", "a step derived from the hypothesis is instantiated", |l| {
            let h = first(l, "hyp");
            let id = l[h]["id"].clone();
            let extra = serde_json::json!({"id": "bad", "rule": "subst", "of": id, "subst": {"x": "0"}, "claim": "0 = 0 + 1"});
            l.insert(h + 1, extra);
        }),
        ("rcm_shape", "RCM_INVERSE_SQUARE", "rcm premises are swapped", |l| {
            let i = first(l, "rcm");
            let s = step_mut(l, i);
            let (left, right) = (s["left"].clone(), s["right"].clone());
            s.insert("left".into(), right);
            s.insert("right".into(), left);
        }),
        ("undischarged", "RCM_INVERSE_SQUARE", "the final rcm step is dropped and an assumption proves the target", |l| {
            let i = first(l, "rcm");
            l.remove(i);
            l.push(serde_json::json!({"id": "fake", "rule": "assume", "claim": "0*(1/x) = 0*(1/(x*x))"}));
        }),
        ("wrong_target", "AVL_SQUARES", "the last step is dropped", |l| {
            l.pop();
        }),
        ("not_assumption", "RCM_VIA_PRIME", "rcm_prime cites a derived step as its assumption", |l| {
            let i = first(l, "rcm_prime");
            let of = l[i]["of"].clone();
            step_mut(l, i).insert("assumption".into(), of);
        }),
    ]
}

fn write(out: &Path, file: &str, text: &str) {
    let path = out.join(file);
    std::fs::write(&path, text).unwrap_or_else(|e| panic!("write {}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts"));
    std::fs::create_dir_all(out.join("mutants")).expect("create output dir");
    let base = LawSet::resolve("e-ftc-cm").expect("law set");
    let avl = LawSet::resolve("e-ftc-cm+avl").expect("law set");
    type Build = fn(&LawSet) -> Res<ProofScript>;
    let jobs: [(&str, &str, &LawSet, Build); 6] = [
        ("ZERO_ONE_BOT", "zero_one_bot.jsonl", &base, zero_one_bot),
        ("SUCC_FIX", "succ_fix.jsonl", &base, succ_fix),
        ("ZERO_MUL_INV", "zero_mul_inv.jsonl", &base, zero_mul_inv),
        ("AVL_SQUARES", "avl_squares.jsonl", &avl, avl_squares),
        ("RCM_INVERSE_SQUARE", "rcm_inverse_square.jsonl", &base, rcm_inverse_square),
        ("RCM_VIA_PRIME", "rcm_via_prime.jsonl", &base, rcm_via_prime),
    ];
    let mut texts = HashMap::new();
    for (name, file, laws, build) in jobs {
        let script = build(laws).unwrap_or_else(|r| panic!("{name}: {r}"));
        check_proof(&script, laws).unwrap_or_else(|r| panic!("{name} does not check: {r}"));
        let text = script.to_jsonl();
        write(&out, file, &text);
        println!("  {name}: {} steps", script.steps.len());
        texts.insert(name, text);
    }
    for (file, source, what, edit) in mutants() {
        let text = &texts[source];
        let mut lines: Vec<serde_json::Value> =
            text.lines().map(|l| serde_json::from_str(l).expect("own output parses")).collect();
        let mut steps = lines.split_off(1);
        edit(&mut steps);
        let mut body = format!("# {source}: {what}\n");
        for l in lines.iter().chain(&steps) {
            body.push_str(&serde_json::to_string(l).expect("json"));
            body.push('\n');
        }
        write(&out.join("mutants"), &format!("{file}.jsonl"), &body);
    }
}
