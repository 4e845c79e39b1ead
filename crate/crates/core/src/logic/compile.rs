//! Bottom-up translation of formulas into multi-track automata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use super::ast::{CmpOp, Connective, Formula, Quantifier, Term};
use super::LogicError;
use crate::automata::{linear_automaton, BoolOp, Dfao, MultiTrackDfa, Relation};

#[derive(Debug, Clone, PartialEq)]
pub struct StatsEntry {
    pub formula: String,
    pub states: usize,
    pub millis: f64,
}

/// One line per compiled subformula, in the order they finish.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsLog {
    pub entries: Vec<StatsEntry>,
}

impl StatsLog {
    pub fn find(&self, formula: &str) -> Option<&StatsEntry> {
        self.entries.iter().find(|e| e.formula == formula)
    }

    pub fn max_states(&self) -> usize {
        self.entries.iter().map(|e| e.states).max().unwrap_or(0)
    }
}

impl fmt::Display for StatsLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{}:{} states - {}ms", e.formula, e.states, e.millis.round() as u64)?;
        }
        Ok(())
    }
}

/// A linear form `Σ coeff·var + constant`.
#[derive(Default)]
struct Linear {
    coeffs: BTreeMap<String, i64>,
    constant: i64,
}

fn overflow() -> LogicError {
    LogicError::TypeMismatch("arithmetic constant overflows".into())
}

pub struct Compiler<'a> {
    words: &'a BTreeMap<String, Dfao>,
    base: u32,
    limit: usize,
    fresh: usize,
    log: StatsLog,
}

impl<'a> Compiler<'a> {
    pub fn new(words: &'a BTreeMap<String, Dfao>, base: u32, limit: usize) -> Self {
        Compiler {
            words,
            base,
            limit,
            fresh: 0,
            log: StatsLog::default(),
        }
    }

    pub fn into_log(self) -> StatsLog {
        self.log
    }

    pub fn compile(&mut self, f: &Formula) -> Result<MultiTrackDfa, LogicError> {
        let started = Instant::now();
        let dfa = match f {
            Formula::Cmp(op, a, b) => self.comparison(*op, a, b)?,
            Formula::Not(inner) => self.compile(inner)?.complement(),
            Formula::Bin(op, a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                match op {
                    Connective::And => a.product(&b, BoolOp::And, self.limit)?,
                    Connective::Or => a.product(&b, BoolOp::Or, self.limit)?,
                    Connective::Implies => a.product(&b, BoolOp::Implies, self.limit)?,
                    Connective::Iff => a.product(&b, BoolOp::Iff, self.limit)?,
                    Connective::Xor => a.product(&b, BoolOp::Iff, self.limit)?.complement(),
                }
            }
            Formula::Quant(q, vars, body) => {
                let body = self.compile(body)?;
                let bound: Vec<&str> = vars
                    .iter()
                    .map(String::as_str)
                    .filter(|v| body.vars().iter().any(|b| b == v))
                    .collect();
                match q {
                    Quantifier::Exists => body.project(&bound, self.limit)?,
                    // A x φ  =  ~E x ~φ
                    Quantifier::Forall => body.complement().project(&bound, self.limit)?.complement(),
                }
            }
        };
        self.log.entries.push(StatsEntry {
            formula: f.to_string(),
            states: dfa.states(),
            millis: started.elapsed().as_secs_f64() * 1e3,
        });
        Ok(dfa)
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        // `#` cannot occur in a parsed name
        format!("#{}", self.fresh)
    }

    fn word(&self, name: &str) -> Result<&'a Dfao, LogicError> {
        let w = self
            .words
            .get(name)
            .ok_or_else(|| LogicError::UnknownWord(name.to_string()))?;
        if w.base() != self.base {
            return Err(crate::automata::AutomataError::BaseMismatch(w.base(), self.base).into());
        }
        Ok(w)
    }

    fn comparison(&mut self, op: CmpOp, a: &Term, b: &Term) -> Result<MultiTrackDfa, LogicError> {
        match (a.is_letter_valued(), b.is_letter_valued()) {
            (false, false) => self.arithmetic(op, a, b),
            (true, true) => self.letters(op, a, b),
            _ => Err(LogicError::TypeMismatch(format!(
                "cannot compare the letter {} with the number {}",
                if a.is_letter_valued() { a } else { b },
                if a.is_letter_valued() { b } else { a },
            ))),
        }
    }

    fn linearize(&self, t: &Term, k: i64, out: &mut Linear, guards: &mut Vec<(Term, Term)>) -> Result<(), LogicError> {
        match t {
            Term::Var(v) => *out.coeffs.entry(v.clone()).or_default() += k,
            Term::Const(c) => {
                let c = i64::try_from(*c).map_err(|_| overflow())?;
                out.constant = c
                    .checked_mul(k)
                    .and_then(|x| x.checked_add(out.constant))
                    .ok_or_else(overflow)?;
            }
            Term::Add(x, y) => {
                self.linearize(x, k, out, guards)?;
                self.linearize(y, k, out, guards)?;
            }
            Term::Sub(x, y) => {
                // x - y only denotes a natural number when y <= x
                self.linearize(x, k, out, guards)?;
                self.linearize(y, -k, out, guards)?;
                guards.push(((**y).clone(), (**x).clone()));
            }
            Term::Scale(c, x) => {
                let c = i64::try_from(*c)
                    .ok()
                    .and_then(|c| c.checked_mul(k))
                    .ok_or_else(overflow)?;
                self.linearize(x, c, out, guards)?;
            }
            Term::Index(..) | Term::Letter(_) => {
                return Err(LogicError::TypeMismatch(format!("{t} is a letter, not a number")))
            }
        }
        Ok(())
    }

    fn arithmetic(&mut self, op: CmpOp, a: &Term, b: &Term) -> Result<MultiTrackDfa, LogicError> {
        let mut lin = Linear::default();
        let mut guards = Vec::new();
        self.linearize(a, 1, &mut lin, &mut guards)?;
        self.linearize(b, -1, &mut lin, &mut guards)?;
        let c = lin.constant;
        let terms: Vec<(&str, i64)> = lin.coeffs.iter().map(|(v, &k)| (v.as_str(), k)).collect();
        let negated: Vec<(&str, i64)> = terms.iter().map(|&(v, k)| (v, -k)).collect();
        // Σ + c  op  0
        let mut dfa = match op {
            CmpOp::Eq => linear_automaton(self.base, &terms, Relation::Eq, -c)?,
            CmpOp::Ne => linear_automaton(self.base, &terms, Relation::Eq, -c)?.complement(),
            CmpOp::Lt => linear_automaton(self.base, &terms, Relation::Le, -c - 1)?,
            CmpOp::Le => linear_automaton(self.base, &terms, Relation::Le, -c)?,
            CmpOp::Gt => linear_automaton(self.base, &negated, Relation::Le, c - 1)?,
            CmpOp::Ge => linear_automaton(self.base, &negated, Relation::Le, c)?,
        };
        for (small, big) in guards {
            let guard = self.arithmetic(CmpOp::Le, &small, &big)?;
            dfa = dfa.product(&guard, BoolOp::And, self.limit)?;
        }
        Ok(dfa)
    }

    /// A variable standing for the value of `t`, plus the automaton tying a
    /// fresh variable to `t` when `t` is not already a variable.
    fn position(&mut self, t: &Term) -> Result<(String, Option<MultiTrackDfa>), LogicError> {
        if let Term::Var(v) = t {
            return Ok((v.clone(), None));
        }
        let v = self.fresh_var();
        let tie = self.arithmetic(CmpOp::Eq, &Term::Var(v.clone()), t)?;
        Ok((v, Some(tie)))
    }

    fn bind(&self, dfa: MultiTrackDfa, var: &str, tie: Option<MultiTrackDfa>) -> Result<MultiTrackDfa, LogicError> {
        match tie {
            None => Ok(dfa),
            Some(tie) => Ok(dfa
                .product(&tie, BoolOp::And, self.limit)?
                .project(&[var], self.limit)?),
        }
    }

    fn letters(&mut self, op: CmpOp, a: &Term, b: &Term) -> Result<MultiTrackDfa, LogicError> {
        if !matches!(op, CmpOp::Eq | CmpOp::Ne) {
            return Err(LogicError::TypeMismatch(format!(
                "letters can only be compared with = and !=, not {op}"
            )));
        }
        let equal = op == CmpOp::Eq;
        match (a, b) {
            (Term::Letter(x), Term::Letter(y)) => {
                let holds = (x == y) == equal;
                Ok(if holds {
                    MultiTrackDfa::universal(self.base, Vec::new())
                } else {
                    MultiTrackDfa::empty(self.base, Vec::new())
                })
            }
            (Term::Index(w, t), Term::Letter(c)) | (Term::Letter(c), Term::Index(w, t)) => {
                let word = self.word(w)?;
                let alphabet = word.output_alphabet();
                if !alphabet.contains(c) {
                    return Err(LogicError::LetterOutOfRange {
                        word: w.clone(),
                        letter: *c,
                    });
                }
                let wanted: BTreeSet<u32> = if equal {
                    BTreeSet::from([*c])
                } else {
                    alphabet.into_iter().filter(|x| x != c).collect()
                };
                let (var, tie) = self.position(t)?;
                let member = word.membership(&var, &wanted);
                self.bind(member, &var, tie)
            }
            (Term::Index(w1, t1), Term::Index(w2, t2)) => {
                let (word1, word2) = (self.word(w1)?, self.word(w2)?);
                let (x, tie_x) = self.position(t1)?;
                let (y, tie_y) = if Term::Var(x.clone()) == **t2 {
                    // same position on both sides; give the second its own track
                    let y = self.fresh_var();
                    let tie = self.arithmetic(CmpOp::Eq, &Term::Var(y.clone()), t2)?;
                    (y, Some(tie))
                } else {
                    self.position(t2)?
                };
                let mut dfa = word1.equal_letters(&x, word2, &y)?;
                if !equal {
                    dfa = dfa.complement();
                }
                let dfa = self.bind(dfa, &x, tie_x)?;
                self.bind(dfa, &y, tie_y)
            }
            _ => unreachable!("both sides are letter valued"),
        }
    }
}
