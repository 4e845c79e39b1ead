use std::collections::HashMap;

use super::minimize::{minimize, reachable, Table};
use super::AutomataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BoolOp {
    #[inline]
    fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
        }
    }
}

/// A total, minimized deterministic automaton reading tuples of base-`k`
/// digits, most significant digit first, one track per variable.
///
/// Tracks are kept sorted by variable name. A letter packs one digit per track
/// with track 0 in the least significant position. The initial state is
/// always 0, and every accepted language is invariant under prepending or
/// removing all-zero tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTrackDfa {
    base: u32,
    vars: Vec<String>,
    letters: usize,
    trans: Vec<u32>,
    accepting: Vec<bool>,
}

pub(crate) fn letter_count(base: u32, tracks: usize) -> usize {
    (base as usize).pow(tracks as u32)
}

/// For each letter over `outer` tracks, the letter over the `inner` tracks
/// (a subset of `outer`) obtained by dropping the other digits.
pub(crate) fn restrict_letters(base: u32, outer: &[String], inner: &[String]) -> Vec<u32> {
    let b = base as usize;
    let pos: Vec<usize> = inner
        .iter()
        .map(|v| outer.iter().position(|o| o == v).expect("inner track in outer"))
        .collect();
    let weights: Vec<usize> = (0..outer.len()).map(|t| b.pow(t as u32)).collect();
    (0..letter_count(base, outer.len()))
        .map(|l| {
            let mut x = 0;
            let mut mul = 1;
            for &p in &pos {
                x += (l / weights[p]) % b * mul;
                mul *= b;
            }
            x as u32
        })
        .collect()
}

fn check_vars(vars: &[String]) -> Result<(), AutomataError> {
    for w in vars.windows(2) {
        if w[0] >= w[1] {
            return Err(AutomataError::Malformed(format!(
                "tracks must be sorted and distinct, found {:?} before {:?}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

impl MultiTrackDfa {
    /// Builds and minimizes an automaton from a raw table with initial state
    /// 0. `vars` must be sorted and distinct.
    pub fn from_table(
        base: u32,
        vars: Vec<String>,
        trans: Vec<u32>,
        accepting: Vec<bool>,
    ) -> Result<Self, AutomataError> {
        if base < 2 {
            return Err(AutomataError::Malformed(format!("base {base} is below 2")));
        }
        check_vars(&vars)?;
        let letters = letter_count(base, vars.len());
        let n = accepting.len();
        if n == 0 || trans.len() != n * letters || trans.iter().any(|&t| t as usize >= n) {
            return Err(AutomataError::Malformed(
                "transition table is not total over the declared states".into(),
            ));
        }
        Ok(Self::minimized(base, vars, &trans, &accepting))
    }

    pub(crate) fn minimized(base: u32, vars: Vec<String>, trans: &[u32], accepting: &[bool]) -> Self {
        let letters = letter_count(base, vars.len());
        let labels: Vec<u32> = accepting.iter().map(|&a| a as u32).collect();
        let m = minimize(&Table {
            letters,
            trans,
            labels: &labels,
            initial: 0,
        });
        MultiTrackDfa {
            base,
            vars,
            letters,
            trans: m.trans,
            accepting: m.labels.iter().map(|&l| l == 1).collect(),
        }
    }

    fn constant(base: u32, vars: Vec<String>, accept: bool) -> Self {
        let letters = letter_count(base, vars.len());
        MultiTrackDfa {
            base,
            vars,
            letters,
            trans: vec![0; letters],
            accepting: vec![accept],
        }
    }

    pub fn universal(base: u32, mut vars: Vec<String>) -> Self {
        vars.sort();
        vars.dedup();
        Self::constant(base, vars, true)
    }

    pub fn empty(base: u32, mut vars: Vec<String>) -> Self {
        vars.sort();
        vars.dedup();
        Self::constant(base, vars, false)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn tracks(&self) -> usize {
        self.vars.len()
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    /// State count of the minimal total automaton, dead state included.
    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_accepting(&self, s: u32) -> bool {
        self.accepting[s as usize]
    }

    #[inline]
    pub fn next(&self, s: u32, letter: usize) -> u32 {
        self.trans[s as usize * self.letters + letter]
    }

    /// The non-accepting sink, if the language is not universal from every state.
    pub fn dead_state(&self) -> Option<u32> {
        (0..self.states() as u32).find(|&s| {
            !self.accepting[s as usize]
                && self.trans[s as usize * self.letters..(s as usize + 1) * self.letters]
                    .iter()
                    .all(|&t| t == s)
        })
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&a| a)
    }

    pub fn is_universal(&self) -> bool {
        self.accepting.iter().all(|&a| a)
    }

    /// Verdict of a closed sentence: whether the empty encoding is accepted.
    pub fn holds(&self) -> bool {
        self.accepting[0]
    }

    pub fn letter(&self, digits: &[u32]) -> usize {
        debug_assert_eq!(digits.len(), self.tracks());
        digits
            .iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.base as usize + d as usize)
    }

    pub fn digits(&self, letter: usize) -> Vec<u32> {
        let b = self.base as usize;
        (0..self.tracks())
            .map(|t| ((letter / b.pow(t as u32)) % b) as u32)
            .collect()
    }

    pub fn run(&self, letters: impl IntoIterator<Item = usize>) -> u32 {
        letters.into_iter().fold(0, |s, l| self.next(s, l))
    }

    /// Encodes `values` (aligned with [`vars`](Self::vars)) msd-first with
    /// `extra_zeros` leading zero tuples beyond the minimal length.
    pub fn encode(&self, values: &[u64], extra_zeros: usize) -> Vec<usize> {
        assert_eq!(values.len(), self.tracks(), "one value per track");
        let b = self.base as u64;
        let width = values
            .iter()
            .map(|&v| {
                let mut w = 0;
                let mut v = v;
                while v > 0 {
                    v /= b;
                    w += 1;
                }
                w
            })
            .max()
            .unwrap_or(0)
            + extra_zeros;
        (0..width)
            .rev()
            .map(|pos| {
                let digits: Vec<u32> = values.iter().map(|&v| (v / b.pow(pos as u32) % b) as u32).collect();
                self.letter(&digits)
            })
            .collect()
    }

    pub fn accepts(&self, values: &[u64]) -> bool {
        self.is_accepting(self.run(self.encode(values, 0)))
    }

    /// Looks values up by variable name.
    pub fn accepts_named(&self, assignment: &[(&str, u64)]) -> bool {
        let values: Vec<u64> = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|&(_, x)| x)
                    .unwrap_or_else(|| panic!("no value for track {v}"))
            })
            .collect();
        self.accepts(&values)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        out
    }

    pub fn and(&self, other: &Self) -> Result<Self, AutomataError> {
        self.product(other, BoolOp::And, usize::MAX)
    }

    pub fn or(&self, other: &Self) -> Result<Self, AutomataError> {
        self.product(other, BoolOp::Or, usize::MAX)
    }

    /// Boolean combination over the union of both track sets.
    pub fn product(&self, other: &Self, op: BoolOp, limit: usize) -> Result<Self, AutomataError> {
        if self.base != other.base {
            return Err(AutomataError::BaseMismatch(self.base, other.base));
        }
        let mut vars: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        let letters = letter_count(self.base, vars.len());
        let map_a = restrict_letters(self.base, &vars, &self.vars);
        let map_b = restrict_letters(self.base, &vars, &other.vars);
        let nb = other.states();
        let dense = self.states() * nb <= 1 << 22;
        let mut dense_ids: Vec<u32> = if dense {
            vec![u32::MAX; self.states() * nb]
        } else {
            Vec::new()
        };
        let mut sparse_ids: HashMap<u64, u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        if dense {
            dense_ids[0] = 0;
        } else {
            sparse_ids.insert(0, 0);
        }
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (a, b) = pairs[head];
            head += 1;
            accepting.push(op.eval(self.is_accepting(a), other.is_accepting(b)));
            for l in 0..letters {
                let ta = self.next(a, map_a[l] as usize);
                let tb = other.next(b, map_b[l] as usize);
                let id = if dense {
                    let slot = &mut dense_ids[ta as usize * nb + tb as usize];
                    if *slot == u32::MAX {
                        *slot = pairs.len() as u32;
                        pairs.push((ta, tb));
                    }
                    *slot
                } else {
                    let key = (ta as u64) << 32 | tb as u64;
                    let next = pairs.len() as u32;
                    let id = *sparse_ids.entry(key).or_insert(next);
                    if id == next {
                        pairs.push((ta, tb));
                    }
                    id
                };
                trans.push(id);
            }
            if pairs.len() > limit {
                return Err(AutomataError::ResourceExceeded {
                    states: pairs.len(),
                    limit,
                });
            }
        }
        Ok(Self::minimized(self.base, vars, &trans, &accepting))
    }

    /// Existentially quantifies the named tracks away.
    ///
    /// The projection is nondeterministic. Its language is the set of words
    /// accepted from the zero closure of the initial state (the states
    /// reachable on zero tuples of the removed tracks), which keeps the result
    /// invariant under leading zeros. Reading most significant digits first
    /// can make the subset construction explode even when the minimal result
    /// is tiny, so two determinizations are raced under a growing cap: the
    /// direct one, and a double reversal in which every intermediate machine
    /// reads least significant digits first.
    pub fn project(&self, remove: &[&str], limit: usize) -> Result<Self, AutomataError> {
        for r in remove {
            if !self.vars.iter().any(|v| v == r) {
                return Err(AutomataError::UnknownTrack(r.to_string()));
            }
        }
        let kept: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !remove.contains(&v.as_str()))
            .cloned()
            .collect();
        if kept.len() == self.vars.len() {
            return Ok(self.clone());
        }
        let letters = letter_count(self.base, kept.len());
        let proj = restrict_letters(self.base, &self.vars, &kept);
        let n = self.states();
        let mut fwd = Nfa::new(n, letters);
        for s in 0..n {
            for (l, &nl) in proj.iter().enumerate() {
                fwd.add(s as u32, nl as usize, self.next(s as u32, l));
            }
        }
        fwd.dedup();

        let mut initial = vec![false; n];
        let mut start = vec![0u32];
        initial[0] = true;
        let mut head = 0;
        while head < start.len() {
            for &t in fwd.succ(start[head], 0) {
                if !initial[t as usize] {
                    initial[t as usize] = true;
                    start.push(t);
                }
            }
            head += 1;
        }
        start.sort_unstable();

        let finals: Vec<u32> = (0..n as u32).filter(|&s| self.is_accepting(s)).collect();
        let rev = fwd.reversed();
        let mut forward = Subsets::new(&fwd, start);
        // the reverse language, then the reverse of that
        let mut backward = Subsets::new(&rev, finals);
        loop {
            let open = [&forward, &backward].map(|d| d.len() <= limit);
            if !open[0] && !open[1] {
                return Err(AutomataError::ResourceExceeded {
                    states: forward.len().min(backward.len()),
                    limit,
                });
            }
            // advance whichever side has done less work so far
            let go_forward = open[0] && (!open[1] || forward.work <= backward.work);
            if go_forward && forward.step() {
                let accepting = forward.accepting(|set| set.iter().any(|&s| self.is_accepting(s)));
                return Ok(Self::minimized(self.base, kept, &forward.trans, &accepting));
            }
            if !go_forward && backward.step() {
                let accepting = backward.accepting(|set| set.iter().any(|&s| initial[s as usize]));
                let (trans, accepting) = reverse_back(letters, &backward.trans, &accepting);
                return Ok(Self::minimized(self.base, kept, &trans, &accepting));
            }
        }
    }

    /// Renames tracks; names not in `mapping` are kept. The result must not
    /// have two tracks with the same name.
    pub fn rename(&self, mapping: &[(&str, &str)]) -> Result<Self, AutomataError> {
        let renamed: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                mapping
                    .iter()
                    .find(|(from, _)| from == v)
                    .map_or_else(|| v.clone(), |(_, to)| to.to_string())
            })
            .collect();
        let mut sorted = renamed.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != renamed.len() {
            return Err(AutomataError::Malformed("renaming would merge two tracks".into()));
        }
        if sorted == renamed {
            let mut out = self.clone();
            out.vars = renamed;
            return Ok(out);
        }
        // new letter -> old letter
        let remap = restrict_letters(self.base, &sorted, &renamed);
        let mut trans = Vec::with_capacity(self.trans.len());
        for s in 0..self.states() as u32 {
            for &old in &remap {
                trans.push(self.next(s, old as usize));
            }
        }
        Ok(Self::minimized(self.base, sorted, &trans, &self.accepting))
    }

    /// Adds tracks that the language does not constrain.
    pub fn cylindrify(&self, vars: &[String]) -> Result<Self, AutomataError> {
        self.and(&Self::universal(self.base, vars.to_vec()))
    }

    /// Language equality, assuming both are canonical.
    pub fn same_language(&self, other: &Self) -> bool {
        self == other
    }

    /// Number of states reachable from the initial state (all of them, for a
    /// canonical automaton).
    pub fn reachable_states(&self) -> usize {
        reachable(self.letters, &self.trans, 0).len()
    }
}

/// Given a DFA for the reverse of a language, a DFA for the language itself.
/// Determinizing the reverse of a reachable DFA cannot blow up: it yields the
/// minimal automaton.
fn reverse_back(letters: usize, trans: &[u32], accepting: &[bool]) -> (Vec<u32>, Vec<bool>) {
    let labels: Vec<u32> = accepting.iter().map(|&a| a as u32).collect();
    let r = minimize(&Table {
        letters,
        trans,
        labels: &labels,
        initial: 0,
    });
    let mut back = Nfa::new(r.labels.len(), letters);
    for (i, &t) in r.trans.iter().enumerate() {
        back.add(t, i % letters, (i / letters) as u32);
    }
    let finals: Vec<u32> = (0..r.labels.len() as u32)
        .filter(|&s| r.labels[s as usize] == 1)
        .collect();
    let mut d = Subsets::new(&back, finals);
    while !d.step() {}
    let accepting = d.accepting(|set| set.first() == Some(&0));
    (d.trans, accepting)
}

/// A nondeterministic table: `succ[s * letters + a]` lists the successors of
/// `s` on `a`.
struct Nfa {
    letters: usize,
    succ: Vec<Vec<u32>>,
}

impl Nfa {
    fn new(states: usize, letters: usize) -> Self {
        Nfa {
            letters,
            succ: vec![Vec::new(); states * letters],
        }
    }

    fn states(&self) -> usize {
        self.succ.len() / self.letters
    }

    fn add(&mut self, from: u32, letter: usize, to: u32) {
        self.succ[from as usize * self.letters + letter].push(to);
    }

    fn succ(&self, s: u32, letter: usize) -> &[u32] {
        &self.succ[s as usize * self.letters + letter]
    }

    fn dedup(&mut self) {
        for v in &mut self.succ {
            v.sort_unstable();
            v.dedup();
        }
    }

    fn reversed(&self) -> Nfa {
        let mut r = Nfa::new(self.states(), self.letters);
        for (i, targets) in self.succ.iter().enumerate() {
            for &t in targets {
                r.add(t, i % self.letters, (i / self.letters) as u32);
            }
        }
        r
    }
}

/// A subset construction that can be advanced one subset at a time.
struct Subsets<'a> {
    nfa: &'a Nfa,
    ids: HashMap<Vec<u32>, u32>,
    subsets: Vec<Vec<u32>>,
    trans: Vec<u32>,
    head: usize,
    mark: Vec<u32>,
    generation: u32,
    target: Vec<u32>,
    /// Successor entries scanned so far.
    work: u64,
}

impl<'a> Subsets<'a> {
    /// `start` must be sorted.
    fn new(nfa: &'a Nfa, start: Vec<u32>) -> Self {
        let mut ids = HashMap::new();
        ids.insert(start.clone(), 0);
        Subsets {
            nfa,
            ids,
            subsets: vec![start],
            trans: Vec::new(),
            head: 0,
            mark: vec![0; nfa.states()],
            generation: 0,
            target: Vec::new(),
            work: 0,
        }
    }

    /// Subsets discovered so far.
    fn len(&self) -> usize {
        self.subsets.len()
    }

    /// Expands one subset; true once every subset has been expanded.
    fn step(&mut self) -> bool {
        if self.head == self.subsets.len() {
            return true;
        }
        let current = std::mem::take(&mut self.subsets[self.head]);
        for a in 0..self.nfa.letters {
            self.generation += 1;
            self.target.clear();
            for &s in &current {
                let succ = self.nfa.succ(s, a);
                self.work += succ.len() as u64 + 1;
                for &t in succ {
                    if self.mark[t as usize] != self.generation {
                        self.mark[t as usize] = self.generation;
                        self.target.push(t);
                    }
                }
            }
            self.target.sort_unstable();
            let id = match self.ids.get(&self.target) {
                Some(&id) => id,
                None => {
                    let id = self.subsets.len() as u32;
                    self.ids.insert(self.target.clone(), id);
                    self.subsets.push(self.target.clone());
                    id
                }
            };
            self.trans.push(id);
        }
        self.subsets[self.head] = current;
        self.head += 1;
        self.head == self.subsets.len()
    }

    fn accepting(&self, accept: impl Fn(&[u32]) -> bool) -> Vec<bool> {
        self.subsets.iter().map(|s| accept(s)).collect()
    }
}
