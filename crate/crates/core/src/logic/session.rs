use std::collections::BTreeMap;
use std::time::Instant;

use super::ast::{Command, Predicate};
use super::compile::{Compiler, StatsLog};
use super::parse::{parse_predicate, parse_script};
use super::LogicError;
use crate::automata::{Dfao, MultiTrackDfa};
use crate::morphism::Morphism;

/// Default ceiling on the states of any intermediate automaton.
pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct EvalResult {
    pub name: String,
    /// Free variables of the predicate, in track order.
    pub free_vars: Vec<String>,
    /// `Some` for sentences, `None` when free variables remain.
    pub verdict: Option<bool>,
    pub automaton: MultiTrackDfa,
    pub log: StatsLog,
    pub millis: f64,
}

impl EvalResult {
    /// `TRUE`, `FALSE`, or a note about the emitted automaton.
    pub fn summary(&self) -> String {
        match self.verdict {
            Some(true) => "TRUE".into(),
            Some(false) => "FALSE".into(),
            None => format!(
                "automaton over ({}) with {} states",
                self.free_vars.join(","),
                self.automaton.states()
            ),
        }
    }
}

/// Named morphisms, words and evaluation results, filled in by commands.
/// `T` and `VTM` are predefined.
#[derive(Debug, Clone)]
pub struct Session {
    limit: usize,
    morphisms: BTreeMap<String, Morphism>,
    words: BTreeMap<String, Dfao>,
    evals: BTreeMap<String, MultiTrackDfa>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

impl Session {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_STATE_LIMIT)
    }

    pub fn with_limit(limit: usize) -> Self {
        let words = ["T", "VTM"]
            .into_iter()
            .map(|n| (n.to_string(), Dfao::builtin(n).expect("built-in word")))
            .collect();
        Session {
            limit,
            morphisms: BTreeMap::new(),
            words,
            evals: BTreeMap::new(),
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn word(&self, name: &str) -> Option<&Dfao> {
        self.words.get(name)
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism> {
        self.morphisms.get(name)
    }

    pub fn evaluation(&self, name: &str) -> Option<&MultiTrackDfa> {
        self.evals.get(name)
    }

    fn claim(&self, name: &str) -> Result<(), LogicError> {
        if self.morphisms.contains_key(name) || self.words.contains_key(name) || self.evals.contains_key(name) {
            Err(LogicError::NameCollision(name.to_string()))
        } else {
            Ok(())
        }
    }

    pub fn define_morphism(&mut self, name: &str, m: Morphism) -> Result<(), LogicError> {
        self.claim(name)?;
        self.morphisms.insert(name.to_string(), m);
        Ok(())
    }

    pub fn define_word(&mut self, name: &str, w: Dfao) -> Result<(), LogicError> {
        self.claim(name)?;
        self.words.insert(name.to_string(), w);
        Ok(())
    }

    fn lookup_morphism(&self, name: &str) -> Result<&Morphism, LogicError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| LogicError::UnknownMorphism(name.to_string()))
    }

    /// Parses and runs a whole script, returning one result per `eval`.
    pub fn run_script(&mut self, text: &str) -> Result<Vec<EvalResult>, LogicError> {
        let script = parse_script(text)?;
        let mut out = Vec::new();
        for cmd in &script.commands {
            if let Some(r) = self.execute(cmd)? {
                out.push(r);
            }
        }
        Ok(out)
    }

    pub fn execute(&mut self, cmd: &Command) -> Result<Option<EvalResult>, LogicError> {
        match cmd {
            Command::Morphism { name, text } => {
                let m = Morphism::parse(text)?;
                self.define_morphism(name, m)?;
                Ok(None)
            }
            Command::Promote { name, morphism } => {
                // the word is k-automatic for k = the morphism's width,
                // starting from letter 0
                let m = self.lookup_morphism(morphism)?;
                let width = m.uniform_width().ok_or(crate::automata::AutomataError::NotUniform)?;
                let coding = Morphism::identity(m.domain_size() as u8);
                let w = Dfao::from_uniform_fixed_point(m, &coding, 0, width as u32)?;
                self.define_word(name, w)?;
                Ok(None)
            }
            Command::Image { name, morphism, word } => {
                let m = self.lookup_morphism(morphism)?;
                let w = self
                    .words
                    .get(word)
                    .ok_or_else(|| LogicError::UnknownWord(word.to_string()))?;
                let image = w.image(m, self.limit)?;
                self.define_word(name, image)?;
                Ok(None)
            }
            Command::Eval { name, predicate, .. } => self.eval(name, predicate).map(Some),
        }
    }

    /// Compiles `predicate`; sentences are decided, other predicates yield an
    /// automaton over their free variables.
    pub fn eval(&mut self, name: &str, predicate: &Predicate) -> Result<EvalResult, LogicError> {
        self.claim(name)?;
        let started = Instant::now();
        let base = predicate.base.unwrap_or(2);
        let mut compiler = Compiler::new(&self.words, base, self.limit);
        let automaton = compiler.compile(&predicate.formula)?;
        let log = compiler.into_log();
        let free_vars = automaton.vars().to_vec();
        let verdict = free_vars.is_empty().then(|| automaton.holds());
        self.evals.insert(name.to_string(), automaton.clone());
        Ok(EvalResult {
            name: name.to_string(),
            free_vars,
            verdict,
            automaton,
            log,
            millis: started.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// Convenience wrapper: parse and evaluate one predicate under a
    /// throwaway name.
    pub fn eval_text(&mut self, text: &str) -> Result<EvalResult, LogicError> {
        let p = parse_predicate(text)?;
        let name = format!("_{}", self.evals.len());
        self.eval(&name, &p)
    }
}

/// Decides a closed predicate over the built-in words.
pub fn decide(text: &str) -> Result<bool, LogicError> {
    let r = Session::new().eval_text(text)?;
    r.verdict.ok_or(LogicError::FreeVariables(r.free_vars))
}
