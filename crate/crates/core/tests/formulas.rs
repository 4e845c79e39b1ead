//! Compiled predicates against a direct interpreter of the same syntax tree.
//!
//! Every quantifier in the corpus is bounded by the free variables, so the
//! interpreter only needs a finite range for each bound variable, and the
//! automaton must agree with it on every assignment below 2^10.

use std::collections::BTreeMap;

use pwalnut::automata::Dfao;
use pwalnut::logic::{parse_predicate, CmpOp, Connective, Formula, Quantifier, Session, Term};

const SETUP: &str = r#"
morphism h "0->1100, 1->0112, 2->1010";
image Wh h VTM;
morphism g "0->1100, 1->0111, 2->1010";
image Wg g VTM;
"#;

/// Predicates with free variables. The definitions of squares, antisquares,
/// c-antisquares, cubes and weak overlaps come first, written for the partial
/// word `Wh` whose hole is letter 2.
const CORPUS: &[&str] = &[
    // square of order n at i
    "(n>0) & At (t<n) => (Wh[i+t]=Wh[i+n+t] | Wh[i+t]=@2 | Wh[i+n+t]=@2)",
    // trivial square: exactly one hole and order 1
    "n=1 & ((Wh[i]=@2 & Wh[i+1]!=@2) | (Wh[i]!=@2 & Wh[i+1]=@2))",
    // antisquare: hole-free, halves differ everywhere
    "(n>0) & At (t<n) => (Wh[i+t]!=Wh[i+n+t] & Wh[i+t]!=@2 & Wh[i+n+t]!=@2)",
    // c-antisquare: no column holds the same letter twice
    "(n>0) & At (t<n) => ~(Wh[i+t]=Wh[i+n+t] & Wh[i+t]!=@2)",
    // cube
    "(n>0) & At (t<n) => ((Wh[i+t]=Wh[i+n+t] | Wh[i+t]=@2 | Wh[i+n+t]=@2) & (Wh[i+n+t]=Wh[i+2*n+t] | Wh[i+n+t]=@2 | Wh[i+2*n+t]=@2) & (Wh[i+t]=Wh[i+2*n+t] | Wh[i+t]=@2 | Wh[i+2*n+t]=@2))",
    // weak overlap of order n >= 2
    "(n>1) & At (t<=n) => (Wh[i+t]=Wh[i+n+t] | Wh[i+t]=@2 | Wh[i+n+t]=@2)",
    // weak period n of the factor of length 3n at i
    "(n>0) & At (t+n<3*n) => (Wh[i+t]=Wh[i+t+n] | Wh[i+t]=@2 | Wh[i+t+n]=@2)",
    // full-word square and antisquare in Thue-Morse
    "(n>0) & At (t<n) => T[i+t]=T[i+n+t]",
    "(n>0) & At (t<n) => T[i+t]!=T[i+n+t]",
    // squares in the filled image
    "(n>0) & At (t<n) => Wg[i+t]=Wg[i+n+t]",
    // arithmetic
    "n=3*i+1",
    "i+n=7",
    "i-n=2",
    "n-i<3",
    "n<i",
    "i<=n & n<=i+2",
    "i!=n",
    "i>=2*n",
    "Et t+t=n & t<i",
    // letters and Boolean connectives
    "T[i]=@1 ^ T[n]=@1",
    "T[i]=@0 <=> T[n]=@0",
    "T[i]=T[n] => T[i+1]=T[n+1]",
    "VTM[i]=T[n]",
    "VTM[n]!=@1 | i=0",
    "T[2*i+1]!=T[n]",
    "Wh[i]!=@2 & Wh[n]=@2",
    "Et (t<n) & T[t]=@1 & T[t+1]=@1 & t>=i",
    "Es,t (s<n & t<n & s<t) & VTM[s]=VTM[t] & VTM[s]=@1 & i<=s",
];

struct Interp<'a> {
    words: &'a BTreeMap<String, Dfao>,
}

impl Interp<'_> {
    fn term(&self, t: &Term, env: &BTreeMap<String, u64>) -> Option<u64> {
        Some(match t {
            Term::Var(v) => env[v],
            Term::Const(c) => *c,
            Term::Add(a, b) => self.term(a, env)? + self.term(b, env)?,
            // a negative difference makes the comparison false
            Term::Sub(a, b) => self.term(a, env)?.checked_sub(self.term(b, env)?)?,
            Term::Scale(c, a) => c * self.term(a, env)?,
            Term::Index(w, i) => self.words[w].eval(self.term(i, env)?) as u64,
            Term::Letter(c) => *c as u64,
        })
    }

    fn holds(&self, f: &Formula, env: &mut BTreeMap<String, u64>, range: u64) -> bool {
        match f {
            Formula::Cmp(op, a, b) => match (self.term(a, env), self.term(b, env)) {
                (Some(x), Some(y)) => match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                },
                _ => false,
            },
            Formula::Not(g) => !self.holds(g, env, range),
            Formula::Bin(c, a, b) => {
                let (x, y) = (self.holds(a, env, range), self.holds(b, env, range));
                match c {
                    Connective::And => x && y,
                    Connective::Or => x || y,
                    Connective::Xor => x != y,
                    Connective::Implies => !x || y,
                    Connective::Iff => x == y,
                }
            }
            Formula::Quant(q, vars, body) => self.quant(*q, vars, body, env, range),
        }
    }

    fn quant(
        &self,
        q: Quantifier,
        vars: &[String],
        body: &Formula,
        env: &mut BTreeMap<String, u64>,
        range: u64,
    ) -> bool {
        let Some((v, rest)) = vars.split_first() else {
            return self.holds(body, env, range);
        };
        let mut any = false;
        let mut all = true;
        for x in 0..range {
            env.insert(v.clone(), x);
            let r = self.quant(q, rest, body, env, range);
            any |= r;
            all &= r;
            if (q == Quantifier::Exists && any) || (q == Quantifier::Forall && !all) {
                break;
            }
        }
        env.remove(v);
        if q == Quantifier::Exists {
            any
        } else {
            all
        }
    }
}

fn session() -> Session {
    let mut s = Session::new();
    s.run_script(SETUP).unwrap();
    s
}

fn words(s: &Session) -> BTreeMap<String, Dfao> {
    ["T", "VTM", "Wh", "Wg"]
        .iter()
        .map(|n| (n.to_string(), s.word(n).unwrap().clone()))
        .collect()
}

pub fn corpus_matches_interpreter() {
    let mut s = session();
    let words = words(&s);
    let interp = Interp { words: &words };
    for (k, text) in CORPUS.iter().enumerate() {
        let p = parse_predicate(text).unwrap();
        let r = s.eval(&format!("f{k}"), &p).unwrap();
        let vars = r.free_vars.clone();
        // assignments below 2^10 in total: 1024 values of one variable, or
        // 32 x 32 for two
        let side: u64 = if vars.len() == 1 { 1024 } else { 32 };
        assert!(vars.len() <= 2, "{text}");
        let mut mismatches = Vec::new();
        for code in 0..side.pow(vars.len() as u32) {
            let values: Vec<u64> = (0..vars.len()).map(|j| code / side.pow(j as u32) % side).collect();
            let mut env: BTreeMap<String, u64> = vars.iter().cloned().zip(values.iter().copied()).collect();
            // bound variables never exceed three times the free ones here
            let range = 3 * values.iter().sum::<u64>() + 3;
            let expected = interp.holds(&p.formula, &mut env, range);
            if r.automaton.accepts(&values) != expected {
                mismatches.push(values);
            }
        }
        assert!(
            mismatches.is_empty(),
            "{text}: {} mismatches, first {:?}",
            mismatches.len(),
            mismatches.first()
        );
    }
    assert!(CORPUS.len() >= 20);
}

pub fn sentences() {
    let cases = [
        ("?msd_2 An T[2*n]=T[n]", true),
        ("?msd_2 An T[2*n+1]!=T[n]", true),
        ("?msd_2 En T[n]=T[n+1] & T[n+1]=T[n+2]", false),
        ("?msd_2 En VTM[n]=VTM[n+1]", false),
        ("?msd_2 An Em m>n & T[m]=@1", true),
        (
            "?msd_2 Ai,n (n>0) => Et (t<n) & T[i+t]!=T[i+t+n] | T[i+t]!=T[i+t+2*n]",
            true,
        ),
        ("?msd_2 Ex,y x+y=3 & x=y", false),
        ("?msd_2 Ax Ey y=x+1", true),
        ("?msd_2 Ax Ey x=2*y | x=2*y+1", true),
        ("?msd_2 Ex x-3=2 & x!=5", false),
    ];
    for (text, want) in cases {
        assert_eq!(pwalnut::logic::decide(text).unwrap(), want, "{text}");
    }
}

#[test]
fn errors_are_reported() {
    use pwalnut::logic::LogicError;
    let mut s = session();
    assert!(matches!(s.eval_text("?msd_2 X[n]=@0"), Err(LogicError::UnknownWord(_))));
    assert!(matches!(
        s.eval_text("?msd_2 T[n]=@7"),
        Err(LogicError::LetterOutOfRange { .. })
    ));
    assert!(matches!(
        s.eval_text("?msd_2 T[n]=@0 &"),
        Err(LogicError::Syntax { .. })
    ));
    assert!(matches!(s.eval_text("?lsd_2 T[n]=@0"), Err(LogicError::Syntax { .. })));
    assert!(matches!(
        pwalnut::logic::decide("?msd_2 T[n]=@0"),
        Err(LogicError::FreeVariables(_))
    ));
    assert!(s.run_script("promote T h;").is_err());
    let e = s.run_script("morphism h \"0->0\";").unwrap_err();
    assert!(matches!(e, LogicError::NameCollision(_)), "{e:?}");
    let tiny = Session::with_limit(8)
        .eval_text("?msd_2 En Ai (i<n) => T[i]=T[i+n]")
        .unwrap_err();
    assert!(tiny.is_resource_exceeded());
}

#[test]
fn script_positions_point_into_the_file() {
    let text = "morphism a \"0->01, 1->10\";\npromote A a;\neval e \"?msd_2 En A[n]=@0 &\";\n";
    match Session::new().run_script(text) {
        Err(pwalnut::logic::LogicError::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

// plain functions above so the acceptance run can call them too

#[test]
fn corpus() {
    corpus_matches_interpreter()
}

#[test]
fn closed_sentences() {
    sentences()
}
