use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(u64),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    /// Multiplication by a constant; the parser accepts `c*t` and `t*c`.
    Scale(u64, Box<Term>),
    /// `W[t]`
    Index(String, Box<Term>),
    /// `@c`
    Letter(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    Bin(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Vec<String>, Box<Formula>),
}

/// A formula with its numeration annotation (`?msd_k`), if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub base: Option<u32>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Morphism {
        name: String,
        text: String,
    },
    Promote {
        name: String,
        morphism: String,
    },
    Image {
        name: String,
        morphism: String,
        word: String,
    },
    Eval {
        name: String,
        predicate: Predicate,
        line: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub commands: Vec<Command>,
}

impl Term {
    pub fn plus(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn minus(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn index(word: &str, t: Term) -> Term {
        Term::Index(word.to_string(), Box::new(t))
    }

    pub fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Scale(_, t) | Term::Index(_, t) => t.collect_vars(out),
            Term::Const(_) | Term::Letter(_) => {}
        }
    }

    fn collect_words(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Index(w, t) => {
                out.insert(w.clone());
                t.collect_words(out);
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.collect_words(out);
                b.collect_words(out);
            }
            Term::Scale(_, t) => t.collect_words(out),
            _ => {}
        }
    }

    /// True for terms denoting letters rather than numbers.
    pub fn is_letter_valued(&self) -> bool {
        matches!(self, Term::Index(..) | Term::Letter(_))
    }
}

impl Formula {
    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Formula {
        Formula::Cmp(op, a, b)
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn bin(op: Connective, a: Formula, b: Formula) -> Formula {
        Formula::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quantifier, vars: &[&str], body: Formula) -> Formula {
        Formula::Quant(q, vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut out);
        out
    }

    fn free_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.free_into(out),
            Formula::Bin(_, a, b) => {
                a.free_into(out);
                b.free_into(out);
            }
            Formula::Quant(_, vars, body) => {
                let mut inner = BTreeSet::new();
                body.free_into(&mut inner);
                for v in vars {
                    inner.remove(v);
                }
                out.extend(inner);
            }
        }
    }

    /// Names of every indexed word.
    pub fn words(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.words_into(&mut out);
        out
    }

    fn words_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Cmp(_, a, b) => {
                a.collect_words(out);
                b.collect_words(out);
            }
            Formula::Not(f) | Formula::Quant(_, _, f) => f.words_into(out),
            Formula::Bin(_, a, b) => {
                a.words_into(out);
                b.words_into(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Sub(a, b) => write!(f, "({a}-{b})"),
            Term::Scale(c, t) => write!(f, "({c}*{t})"),
            Term::Index(w, t) => write!(f, "{w}[{t}]"),
            Term::Letter(c) => write!(f, "@{c}"),
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Xor => "^",
            Connective::Implies => "=>",
            Connective::Iff => "<=>",
        })
    }
}

/// Walnut's log rendering: every binary node is parenthesized, comparisons
/// are not.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Cmp(op, a, b) => write!(f, "{a}{op}{b}"),
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::Bin(op, a, b) => write!(f, "({a}{op}{b})"),
            Formula::Quant(q, vars, body) => {
                let tag = match q {
                    Quantifier::Exists => 'E',
                    Quantifier::Forall => 'A',
                };
                write!(f, "({tag}{} {body})", vars.join(","))
            }
        }
    }
}
