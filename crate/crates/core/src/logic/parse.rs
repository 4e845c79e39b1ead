//! Lexer and recursive-descent parser for scripts and predicates.
//!
//! Binding strength, loosest first: `=>` and `<=>`, `|` and `^`, `&`, `~`,
//! comparisons, `+` and `-`, `*`, indexing. A quantifier swallows the rest of
//! its enclosing parenthesized formula.

use super::ast::{CmpOp, Command, Connective, Formula, Predicate, Quantifier, Script, Term};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    At,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Cmp(CmpOp),
    And,
    Or,
    Xor,
    Not,
    Implies,
    Iff,
    Question,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> LogicError {
    LogicError::Syntax {
        line: pos.line,
        column: pos.col,
        message: message.into(),
    }
}

fn lex(text: &str, start: Pos) -> Result<Vec<(Tok, Pos)>, LogicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = start;
    let mut i = 0;
    let advance = |i: &mut usize, pos: &mut Pos, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut pos, 1);
            continue;
        }
        let here = pos;
        let peek = |k: usize| chars.get(i + k).copied();
        let (tok, len) = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| syntax(here, format!("number {digits} is too large")))?;
            (Tok::Num(n), j - i)
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else {
            match (c, peek(1), peek(2)) {
                ('<', Some('='), Some('>')) => (Tok::Iff, 3),
                ('<', Some('='), _) => (Tok::Cmp(CmpOp::Le), 2),
                ('>', Some('='), _) => (Tok::Cmp(CmpOp::Ge), 2),
                ('!', Some('='), _) => (Tok::Cmp(CmpOp::Ne), 2),
                ('=', Some('>'), _) => (Tok::Implies, 2),
                ('<', ..) => (Tok::Cmp(CmpOp::Lt), 1),
                ('>', ..) => (Tok::Cmp(CmpOp::Gt), 1),
                ('=', ..) => (Tok::Cmp(CmpOp::Eq), 1),
                ('@', ..) => (Tok::At, 1),
                ('(', ..) => (Tok::LParen, 1),
                (')', ..) => (Tok::RParen, 1),
                ('[', ..) => (Tok::LBracket, 1),
                (']', ..) => (Tok::RBracket, 1),
                (',', ..) => (Tok::Comma, 1),
                ('+', ..) => (Tok::Plus, 1),
                ('-', ..) => (Tok::Minus, 1),
                ('*', ..) => (Tok::Star, 1),
                ('&', ..) => (Tok::And, 1),
                ('|', ..) => (Tok::Or, 1),
                ('^', ..) => (Tok::Xor, 1),
                ('~', ..) => (Tok::Not, 1),
                ('?', ..) => (Tok::Question, 1),
                _ => return Err(syntax(here, format!("unknown operator {c:?}"))),
            }
        };
        out.push((tok, here));
        advance(&mut i, &mut pos, len);
    }
    out.push((Tok::End, pos));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), LogicError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {what}, found {}", describe(self.peek())),
            ))
        }
    }

    fn predicate(&mut self) -> Result<Predicate, LogicError> {
        let mut base = None;
        if self.eat(&Tok::Question) {
            let pos = self.pos();
            match self.bump() {
                Tok::Ident(s) => {
                    let k = s
                        .strip_prefix("msd_")
                        .and_then(|k| k.parse::<u32>().ok())
                        .filter(|&k| k >= 2)
                        .ok_or_else(|| syntax(pos, format!("unsupported numeration system ?{s}")))?;
                    base = Some(k);
                }
                other => return Err(syntax(pos, format!("expected msd_k, found {}", describe(&other)))),
            }
        }
        let formula = self.formula()?;
        if *self.peek() != Tok::End {
            return Err(syntax(self.pos(), format!("unexpected {}", describe(self.peek()))));
        }
        Ok(Predicate { base, formula })
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        let op = match self.peek() {
            Tok::Implies => Connective::Implies,
            Tok::Iff => Connective::Iff,
            _ => return Ok(lhs),
        };
        self.bump();
        // right associative
        let rhs = self.formula()?;
        Ok(Formula::bin(op, lhs, rhs))
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        loop {
            let op = match self.peek() {
                Tok::Or => Connective::Or,
                Tok::Xor => Connective::Xor,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::bin(op, lhs, rhs);
        }
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::bin(Connective::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::negate(self.unary()?));
        }
        if let Some(q) = self.quantifier() {
            return self.quantified(q);
        }
        if *self.peek() == Tok::LParen {
            // `(` opens either a parenthesized formula or a term such as
            // `(j+i)<n`; try the comparison first and fall back
            let save = self.at;
            match self.comparison() {
                Ok(f) => return Ok(f),
                Err(cmp_err) => {
                    let cmp_reach = self.at;
                    self.at = save;
                    self.bump();
                    let inner = self.formula().and_then(|f| {
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(f)
                    });
                    return match inner {
                        Ok(f) => Ok(f),
                        Err(e) if self.at >= cmp_reach => Err(e),
                        Err(_) => Err(cmp_err),
                    };
                }
            }
        }
        self.comparison()
    }

    /// `A` or `E` at the start of a formula, either alone (`E x,y`) or glued
    /// to the first variable (`Ej`). An identifier followed by `[` is a word.
    fn quantifier(&self) -> Option<Quantifier> {
        let Tok::Ident(s) = self.peek() else { return None };
        if *self.peek_at(1) == Tok::LBracket {
            return None;
        }
        match s.chars().next() {
            Some('E') => Some(Quantifier::Exists),
            Some('A') => Some(Quantifier::Forall),
            _ => None,
        }
    }

    fn quantified(&mut self, q: Quantifier) -> Result<Formula, LogicError> {
        let Tok::Ident(s) = self.bump() else { unreachable!() };
        let mut vars = Vec::new();
        if s.len() > 1 {
            vars.push(s[1..].to_string());
        } else {
            vars.push(self.variable()?);
        }
        while self.eat(&Tok::Comma) {
            vars.push(self.variable()?);
        }
        let body = self.formula()?;
        Ok(Formula::Quant(q, vars, Box::new(body)))
    }

    fn variable(&mut self) -> Result<String, LogicError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(v) => Ok(v),
            other => Err(syntax(pos, format!("expected a variable, found {}", describe(&other)))),
        }
    }

    fn comparison(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.term()?;
        let pos = self.pos();
        let op = match self.bump() {
            Tok::Cmp(op) => op,
            other => {
                return Err(syntax(
                    pos,
                    format!("expected a comparison, found {}", describe(&other)),
                ))
            }
        };
        let rhs = self.term()?;
        Ok(Formula::Cmp(op, lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Term::plus(lhs, self.product()?);
            } else if self.eat(&Tok::Minus) {
                lhs = Term::minus(lhs, self.product()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Term, LogicError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let rhs = self.atom()?;
            lhs = match (lhs, rhs) {
                (Term::Const(c), t) | (t, Term::Const(c)) => Term::Scale(c, Box::new(t)),
                _ => return Err(syntax(pos, "only multiplication by a constant is supported")),
            };
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Term, LogicError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Term::Const(n)),
            Tok::At => match self.bump() {
                Tok::Num(n) => u32::try_from(n)
                    .map(Term::Letter)
                    .map_err(|_| syntax(pos, "letter constant is too large")),
                other => Err(syntax(
                    pos,
                    format!("expected a letter after `@`, found {}", describe(&other)),
                )),
            },
            Tok::Ident(name) => {
                if self.eat(&Tok::LBracket) {
                    let index = self.term()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Ok(Term::Index(name, Box::new(index)))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            other => Err(syntax(pos, format!("expected a term, found {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::End => "end of input".into(),
        Tok::Cmp(op) => format!("`{op}`"),
        other => {
            let s = match other {
                Tok::At => "@",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Comma => ",",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::And => "&",
                Tok::Or => "|",
                Tok::Xor => "^",
                Tok::Not => "~",
                Tok::Implies => "=>",
                Tok::Iff => "<=>",
                _ => "?",
            };
            format!("`{s}`")
        }
    }
}

fn parse_predicate_at(text: &str, start: Pos) -> Result<Predicate, LogicError> {
    let mut p = Parser {
        toks: lex(text, start)?,
        at: 0,
    };
    p.predicate()
}

/// Parses a predicate such as `?msd_2 Ex x=x`.
pub fn parse_predicate(text: &str) -> Result<Predicate, LogicError> {
    parse_predicate_at(text, Pos { line: 1, col: 1 })
}

/// Parses a script of `morphism`, `promote`, `image` and `eval` commands.
/// `#` starts a comment that runs to the end of the line.
pub fn parse_script(text: &str) -> Result<Script, LogicError> {
    let mut sc = Scanner {
        chars: text.chars().collect(),
        i: 0,
        pos: Pos { line: 1, col: 1 },
    };
    let mut commands = Vec::new();
    loop {
        sc.skip_blank();
        if sc.done() {
            break;
        }
        let line = sc.pos.line;
        let (kw, kw_pos) = sc.word()?;
        let command = match kw.as_str() {
            "morphism" => {
                let name = sc.word()?.0;
                let text = sc.string()?.0;
                Command::Morphism { name, text }
            }
            "promote" => Command::Promote {
                name: sc.word()?.0,
                morphism: sc.word()?.0,
            },
            "image" => Command::Image {
                name: sc.word()?.0,
                morphism: sc.word()?.0,
                word: sc.word()?.0,
            },
            "eval" => {
                let name = sc.word()?.0;
                let (body, at) = sc.string()?;
                Command::Eval {
                    name,
                    predicate: parse_predicate_at(&body, at)?,
                    line,
                }
            }
            other => return Err(syntax(kw_pos, format!("unknown command `{other}`"))),
        };
        sc.skip_blank();
        if !sc.eat(';') {
            return Err(syntax(sc.pos, "expected `;`"));
        }
        commands.push(command);
    }
    Ok(Script { commands })
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    pos: Pos,
}

impl Scanner {
    fn done(&self) -> bool {
        self.i >= self.chars.len()
    }

    fn step(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.chars.get(self.i) == Some(&c) {
            self.step();
            true
        } else {
            false
        }
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.get(self.i) {
            if c == '#' {
                while !self.done() && self.chars[self.i] != '\n' {
                    self.step();
                }
            } else if c.is_whitespace() {
                self.step();
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> Result<(String, Pos), LogicError> {
        self.skip_blank();
        let at = self.pos;
        let mut out = String::new();
        while let Some(&c) = self.chars.get(self.i) {
            if c.is_alphanumeric() || c == '_' {
                out.push(self.step());
            } else {
                break;
            }
        }
        if out.is_empty() {
            return Err(syntax(at, "expected a name"));
        }
        Ok((out, at))
    }

    /// A double-quoted string, which may span lines; returns the position of
    /// its first character.
    fn string(&mut self) -> Result<(String, Pos), LogicError> {
        self.skip_blank();
        if !self.eat('"') {
            return Err(syntax(self.pos, "expected a quoted string"));
        }
        let at = self.pos;
        let mut out = String::new();
        loop {
            if self.done() {
                return Err(syntax(at, "unterminated string"));
            }
            let c = self.step();
            if c == '"' {
                return Ok((out, at));
            }
            out.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::Connective::*;
    use crate::logic::ast::Quantifier::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    fn f(text: &str) -> Formula {
        parse_predicate(text).unwrap().formula
    }

    #[test]
    fn theorem_one_shape() {
        let p =
            parse_predicate("?msd_2 ~ Ej En Ai (n>3) & ((i<n)=>((Wh[j+i]=Wh[j+n+i]) \n | Wh[i+j]=@2 | Wh[i+n+j]=@2))")
                .unwrap();
        assert_eq!(p.base, Some(2));
        let wh = |t: Term| Term::index("Wh", t);
        let inner = Formula::bin(
            Or,
            Formula::bin(
                Or,
                Formula::cmp(
                    CmpOp::Eq,
                    wh(Term::plus(v("j"), v("i"))),
                    wh(Term::plus(Term::plus(v("j"), v("n")), v("i"))),
                ),
                Formula::cmp(CmpOp::Eq, wh(Term::plus(v("i"), v("j"))), Term::Letter(2)),
            ),
            Formula::cmp(
                CmpOp::Eq,
                wh(Term::plus(Term::plus(v("i"), v("n")), v("j"))),
                Term::Letter(2),
            ),
        );
        let body = Formula::bin(
            And,
            Formula::cmp(CmpOp::Gt, v("n"), Term::Const(3)),
            Formula::bin(Implies, Formula::cmp(CmpOp::Lt, v("i"), v("n")), inner.clone()),
        );
        let expected = Formula::negate(Formula::quant(
            Exists,
            &["j"],
            Formula::quant(Exists, &["n"], Formula::quant(Forall, &["i"], body)),
        ));
        assert_eq!(p.formula, expected);
        let logged = Formula::bin(Implies, Formula::cmp(CmpOp::Lt, v("i"), v("n")), inner).to_string();
        assert_eq!(
            logged,
            "(i<n=>((Wh[(j+i)]=Wh[((j+n)+i)]|Wh[(i+j)]=@2)|Wh[((i+n)+j)]=@2))"
        );
    }

    #[test]
    fn quantifier_lists_and_scope() {
        assert_eq!(
            f("Ex x=x"),
            Formula::quant(Exists, &["x"], Formula::cmp(CmpOp::Eq, v("x"), v("x")))
        );
        assert_eq!(f("E x,y x<y"), f("Ex,y x<y"));
        // the quantifier reaches past `|`
        assert_eq!(
            f("Ex x=1 | x=2"),
            Formula::quant(
                Exists,
                &["x"],
                Formula::bin(
                    Or,
                    Formula::cmp(CmpOp::Eq, v("x"), Term::Const(1)),
                    Formula::cmp(CmpOp::Eq, v("x"), Term::Const(2))
                )
            )
        );
        // but not past its closing parenthesis
        assert!(matches!(f("(Ex x=1) & y=2"), Formula::Bin(And, ..)));
        // a word named E is indexed, not quantified
        assert!(matches!(f("E[0]=@1"), Formula::Cmp(..)));
    }

    #[test]
    fn precedence() {
        // ~ binds tighter than &, & tighter than |, | tighter than =>
        assert_eq!(
            f("~a=b & c=d | e=g => h=k"),
            Formula::bin(
                Implies,
                Formula::bin(
                    Or,
                    Formula::bin(
                        And,
                        Formula::negate(Formula::cmp(CmpOp::Eq, v("a"), v("b"))),
                        Formula::cmp(CmpOp::Eq, v("c"), v("d"))
                    ),
                    Formula::cmp(CmpOp::Eq, v("e"), v("g"))
                ),
                Formula::cmp(CmpOp::Eq, v("h"), v("k"))
            )
        );
        assert_eq!(
            f("(j+i)<2*n-1"),
            Formula::cmp(
                CmpOp::Lt,
                Term::plus(v("j"), v("i")),
                Term::minus(Term::Scale(2, Box::new(v("n"))), Term::Const(1))
            )
        );
        assert_eq!(f("n*3=x"), f("3*n=x"));
        assert!(matches!(f("a=b <=> b=a"), Formula::Bin(Iff, ..)));
        assert!(matches!(f("a=b ^ b=a"), Formula::Bin(Xor, ..)));
        assert_eq!(f("((x<y))"), f("x<y"));
    }

    #[test]
    fn errors_have_positions() {
        let err = parse_predicate("Ex x=").unwrap_err();
        assert!(matches!(err, LogicError::Syntax { line: 1, column: 6, .. }), "{err:?}");
        let err = parse_predicate("x = y\n  & $").unwrap_err();
        assert!(matches!(err, LogicError::Syntax { line: 2, column: 5, .. }), "{err:?}");
        assert!(parse_predicate("x*y=z").is_err());
        assert!(parse_predicate("?lsd_2 x=y").is_err());
        assert!(parse_predicate("(x=y").is_err());
        assert!(parse_predicate("x=y)").is_err());
    }

    #[test]
    fn scripts() {
        let s = parse_script(
            "# theorem 3\nmorphism f \"0->01, 1->23\";\npromote Wf f;\nimage Wg g Wf;\neval no_sq \"?msd_2 ~ Ej\n  (j<1)\";\n",
        )
        .unwrap();
        assert_eq!(s.commands.len(), 4);
        assert_eq!(
            s.commands[0],
            Command::Morphism {
                name: "f".into(),
                text: "0->01, 1->23".into()
            }
        );
        assert!(matches!(&s.commands[3], Command::Eval { name, line: 5, .. } if name == "no_sq"));
        // errors inside an eval string point into the file
        let err = parse_script("morphism a \"0->0\";\neval x \"Ej\n   j = = 1\";").unwrap_err();
        assert!(matches!(err, LogicError::Syntax { line: 3, column: 8, .. }), "{err:?}");
        assert!(parse_script("def x \"y\";").is_err());
        assert!(parse_script("promote a b").is_err());
        assert_eq!(parse_script("  \n# nothing\n").unwrap().commands.len(), 0);
    }
}
