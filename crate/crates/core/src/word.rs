//! Finite partial words and the repetition predicates defined over them.
//!
//! A partial word is a sequence over the letters `0..alphabet_size` extended
//! with a hole that is compatible with every letter. Squares, cubes and weak
//! overlaps are detected in the partial-word sense (a factor is a square when it
//! is *contained* in some full square), while antisquares only ever match
//! hole-free factors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} is outside an alphabet of size {alphabet_size}")]
    LetterOutOfRange { letter: u32, alphabet_size: u8 },
    #[error("alphabet size must be between 1 and 255, got {0}")]
    BadAlphabet(usize),
    #[error("antisquares are only defined over a binary alphabet (alphabet size is {0})")]
    NotBinary(u8),
    #[error("unexpected character {ch:?} at offset {offset}")]
    Parse { ch: char, offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Letter(u8),
    Hole,
}

impl Symbol {
    #[inline]
    pub fn is_hole(self) -> bool {
        matches!(self, Symbol::Hole)
    }

    #[inline]
    pub fn letter(self) -> Option<u8> {
        match self {
            Symbol::Letter(a) => Some(a),
            Symbol::Hole => None,
        }
    }

    /// Two symbols are compatible when they are equal or one of them is a hole.
    #[inline]
    pub fn compatible(self, other: Symbol) -> bool {
        match (self, other) {
            (Symbol::Letter(a), Symbol::Letter(b)) => a == b,
            _ => true,
        }
    }
}

/// A finite word over `{0, .., alphabet_size - 1}` plus the hole.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialWord {
    alphabet_size: u8,
    symbols: Vec<Symbol>,
}

impl PartialWord {
    pub fn new(alphabet_size: u8, symbols: Vec<Symbol>) -> Result<Self, WordError> {
        if alphabet_size == 0 {
            return Err(WordError::BadAlphabet(0));
        }
        for s in &symbols {
            if let Symbol::Letter(a) = *s {
                if a >= alphabet_size {
                    return Err(WordError::LetterOutOfRange {
                        letter: a as u32,
                        alphabet_size,
                    });
                }
            }
        }
        Ok(PartialWord { alphabet_size, symbols })
    }

    pub fn empty(alphabet_size: u8) -> Self {
        PartialWord {
            alphabet_size: alphabet_size.max(1),
            symbols: Vec::new(),
        }
    }

    /// A hole-free word from raw letters.
    pub fn full(alphabet_size: u8, letters: &[u8]) -> Result<Self, WordError> {
        Self::new(alphabet_size, letters.iter().map(|&a| Symbol::Letter(a)).collect())
    }

    /// Parses the human format: decimal digits for letters and `◇` or `.` for a
    /// hole. The alphabet is the smallest one containing every letter, but never
    /// smaller than binary.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let symbols = parse_symbols(text)?;
        let max = symbols
            .iter()
            .filter_map(|s| s.letter())
            .max()
            .map_or(0, |m| m as usize + 1);
        let alphabet_size = max.max(2);
        Self::new(alphabet_size as u8, symbols)
    }

    /// Parses the human format against a fixed alphabet.
    pub fn parse_with_alphabet(text: &str, alphabet_size: u8) -> Result<Self, WordError> {
        Self::new(alphabet_size, parse_symbols(text)?)
    }

    /// Parses the digit convention where the code `alphabet_size` denotes the
    /// hole, so `0210` over a binary alphabet is `0◇10`.
    pub fn from_walnut(text: &str, alphabet_size: u8) -> Result<Self, WordError> {
        let mut symbols = Vec::with_capacity(text.len());
        for (offset, ch) in text.chars().enumerate() {
            let d = ch.to_digit(10).ok_or(WordError::Parse { ch, offset })?;
            if d == alphabet_size as u32 {
                symbols.push(Symbol::Hole);
            } else if d < alphabet_size as u32 {
                symbols.push(Symbol::Letter(d as u8));
            } else {
                return Err(WordError::LetterOutOfRange {
                    letter: d,
                    alphabet_size,
                });
            }
        }
        Self::new(alphabet_size, symbols)
    }

    /// Digit form with the hole written as `alphabet_size`.
    pub fn to_walnut(&self) -> String {
        self.symbols.iter().map(|s| self.code(*s).to_string()).collect()
    }

    /// Integer code of a symbol: the letter itself, or `alphabet_size` for a hole.
    #[inline]
    pub fn code(&self, s: Symbol) -> u32 {
        match s {
            Symbol::Letter(a) => a as u32,
            Symbol::Hole => self.alphabet_size as u32,
        }
    }

    pub fn codes(&self) -> Vec<u32> {
        self.symbols.iter().map(|s| self.code(*s)).collect()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        self.symbols.get(i).copied()
    }

    pub fn hole_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_hole()).count()
    }

    pub fn is_full(&self) -> bool {
        self.hole_count() == 0
    }

    pub fn factor(&self, start: usize, len: usize) -> PartialWord {
        PartialWord {
            alphabet_size: self.alphabet_size,
            symbols: self.symbols[start..start + len].to_vec(),
        }
    }

    pub fn prefix(&self, len: usize) -> PartialWord {
        self.factor(0, len.min(self.len()))
    }

    /// Same symbols, viewed over a larger alphabet.
    pub fn widen(&self, alphabet_size: u8) -> Result<PartialWord, WordError> {
        Self::new(alphabet_size, self.symbols.clone())
    }

    /// Exchanges 0 and 1 in a binary word.
    pub fn complement(&self) -> Result<PartialWord, WordError> {
        require_binary(self)?;
        Ok(PartialWord {
            alphabet_size: 2,
            symbols: self
                .symbols
                .iter()
                .map(|s| match s {
                    Symbol::Letter(a) => Symbol::Letter(1 - a),
                    Symbol::Hole => Symbol::Hole,
                })
                .collect(),
        })
    }

    pub fn reversed(&self) -> PartialWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        PartialWord {
            alphabet_size: self.alphabet_size,
            symbols,
        }
    }

    pub fn concat(&self, other: &PartialWord) -> PartialWord {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        PartialWord {
            alphabet_size: self.alphabet_size.max(other.alphabet_size),
            symbols,
        }
    }
}

fn parse_symbols(text: &str) -> Result<Vec<Symbol>, WordError> {
    text.chars()
        .enumerate()
        .map(|(offset, ch)| match ch {
            '◇' | '.' => Ok(Symbol::Hole),
            _ => ch
                .to_digit(10)
                .map(|d| Symbol::Letter(d as u8))
                .ok_or(WordError::Parse { ch, offset }),
        })
        .collect()
}

impl fmt::Display for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            match s {
                Symbol::Letter(a) if *a < 10 => write!(f, "{a}")?,
                Symbol::Letter(a) => write!(f, "[{a}]")?,
                Symbol::Hole => f.write_str("◇")?,
            }
        }
        Ok(())
    }
}

impl FromStr for PartialWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PartialWord::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepetitionKind {
    Square,
    Antisquare,
    CAntisquare,
    Cube,
    WeakOverlap,
}

impl RepetitionKind {
    /// Length of a factor of this kind with the given order.
    pub fn span(self, order: usize) -> usize {
        match self {
            RepetitionKind::Square | RepetitionKind::Antisquare | RepetitionKind::CAntisquare => 2 * order,
            RepetitionKind::Cube => 3 * order,
            RepetitionKind::WeakOverlap => 2 * order + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub start: usize,
    pub order: usize,
    pub kind: RepetitionKind,
}

impl Occurrence {
    pub fn span(&self) -> usize {
        self.kind.span(self.order)
    }
}

pub fn compatible(u: &PartialWord, v: &PartialWord) -> bool {
    u.len() == v.len() && u.symbols.iter().zip(&v.symbols).all(|(a, b)| a.compatible(*b))
}

/// `w ⊂ u`: same length and `w` agrees with `u` at every non-hole position.
pub fn contained_in(w: &PartialWord, u: &PartialWord) -> bool {
    w.len() == u.len() && w.symbols.iter().zip(&u.symbols).all(|(a, b)| a.is_hole() || a == b)
}

fn require_binary(w: &PartialWord) -> Result<(), WordError> {
    if w.alphabet_size == 2 {
        Ok(())
    } else {
        Err(WordError::NotBinary(w.alphabet_size))
    }
}

/// Least `j` such that `holds(k)` is true for every `k` in `j..j + run`, where
/// `holds` is only consulted below `limit`. Windows of length `run >= spacing`
/// always contain a multiple of `spacing` among their first `spacing`
/// positions, so only those anchors need to be extended.
fn least_run(spacing: usize, run: usize, limit: usize, holds: impl Fn(usize) -> bool) -> Option<usize> {
    debug_assert!(spacing >= 1 && run >= spacing);
    if run > limit {
        return None;
    }
    let mut q = 0;
    while q < limit {
        if holds(q) {
            let mut back = 0;
            while back < spacing - 1 && back < q && holds(q - back - 1) {
                back += 1;
            }
            let need = run - back;
            let mut fwd = 1;
            while fwd < need && q + fwd < limit && holds(q + fwd) {
                fwd += 1;
            }
            if fwd >= need {
                return Some(q - back);
            }
        }
        q += spacing;
    }
    None
}

/// Scans orders `min_order..` and returns the lexicographically least
/// `(start, order)`.
fn least_occurrence(
    len: usize,
    min_order: usize,
    kind: RepetitionKind,
    mut least_start: impl FnMut(usize) -> Option<usize>,
) -> Option<Occurrence> {
    let mut best: Option<(usize, usize)> = None;
    let mut order = min_order.max(1);
    while kind.span(order) <= len {
        if let Some(j) = least_start(order) {
            if best.is_none_or(|(bj, _)| j < bj) {
                best = Some((j, order));
                if j == 0 {
                    break;
                }
            }
        }
        order += 1;
    }
    best.map(|(start, order)| Occurrence { start, order, kind })
}

/// Least square of order at least `min_order`, in the partial-word sense.
pub fn find_square(w: &PartialWord, min_order: usize) -> Option<Occurrence> {
    let s = &w.symbols;
    least_occurrence(s.len(), min_order, RepetitionKind::Square, |n| {
        least_run(n, n, s.len() - n, |k| s[k].compatible(s[k + n]))
    })
}

/// Least square that is not of the form `a◇` or `◇a`.
pub fn find_nontrivial_square(w: &PartialWord) -> Option<Occurrence> {
    let s = &w.symbols;
    least_occurrence(s.len(), 1, RepetitionKind::Square, |n| {
        if n == 1 {
            (0..s.len() - 1).find(|&k| match (s[k], s[k + 1]) {
                (Symbol::Letter(a), Symbol::Letter(b)) => a == b,
                (Symbol::Hole, Symbol::Hole) => true,
                _ => false,
            })
        } else {
            least_run(n, n, s.len() - n, |k| s[k].compatible(s[k + n]))
        }
    })
}

/// Least antisquare of order at least `min_order`. Antisquare factors never
/// contain holes.
pub fn find_antisquare(w: &PartialWord, min_order: usize) -> Result<Option<Occurrence>, WordError> {
    require_binary(w)?;
    let s = &w.symbols;
    Ok(least_occurrence(s.len(), min_order, RepetitionKind::Antisquare, |n| {
        least_run(n, n, s.len() - n, |k| match (s[k], s[k + n]) {
            (Symbol::Letter(a), Symbol::Letter(b)) => a != b,
            _ => false,
        })
    }))
}

/// A position triple of a cube is admissible when its non-hole symbols agree.
#[inline]
fn cube_column(a: Symbol, b: Symbol, c: Symbol) -> bool {
    a.compatible(b) && b.compatible(c) && a.compatible(c)
}

pub fn find_cube(w: &PartialWord, min_order: usize) -> Option<Occurrence> {
    let s = &w.symbols;
    least_occurrence(s.len(), min_order, RepetitionKind::Cube, |n| {
        least_run(n, n, s.len() - 2 * n, |k| cube_column(s[k], s[k + n], s[k + 2 * n]))
    })
}

/// Least factor of length `2n + 1` with weak period `n`; for `n = 1` the two
/// outer symbols must also be compatible.
pub fn find_weak_overlap(w: &PartialWord) -> Option<Occurrence> {
    let s = &w.symbols;
    least_occurrence(s.len(), 1, RepetitionKind::WeakOverlap, |n| {
        if n == 1 {
            (0..s.len() - 2).find(|&k| cube_column(s[k], s[k + 1], s[k + 2]))
        } else {
            least_run(n, n + 1, s.len() - n, |k| s[k].compatible(s[k + n]))
        }
    })
}

pub fn has_weak_period(w: &PartialWord, p: usize) -> bool {
    let s = &w.symbols;
    (0..s.len().saturating_sub(p)).all(|i| s[i].compatible(s[i + p]))
}

/// Every residue class modulo `p` must be pairwise compatible, i.e. carry at
/// most one distinct letter.
pub fn has_strong_period(w: &PartialWord, p: usize) -> bool {
    if p == 0 {
        return false;
    }
    let mut seen: Vec<Option<u8>> = vec![None; p.min(w.len())];
    for (i, s) in w.symbols.iter().enumerate() {
        if let Symbol::Letter(a) = *s {
            let slot = &mut seen[i % p];
            match slot {
                Some(b) if *b != a => return false,
                _ => *slot = Some(a),
            }
        }
    }
    true
}

/// Smallest `s` such that every factor of length `s` contains a hole, i.e. one
/// more than the longest run of letters. `None` for hole-free words.
pub fn hole_sparsity(w: &PartialWord) -> Option<usize> {
    if w.is_full() {
        return None;
    }
    let mut longest = 0;
    let mut run = 0;
    for s in &w.symbols {
        if s.is_hole() {
            run = 0;
        } else {
            run += 1;
            longest = longest.max(run);
        }
    }
    Some(longest + 1)
}

/// Expands a half-word template where `None` marks a free position into every
/// filling over `alphabet_size` letters, passing each to `emit`.
fn for_each_filling(template: &[Option<u8>], alphabet_size: u8, emit: &mut impl FnMut(&[u8])) {
    let free: Vec<usize> = template
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut cur: Vec<u8> = template.iter().map(|t| t.unwrap_or(0)).collect();
    loop {
        emit(&cur);
        // odometer over the free positions
        let mut idx = 0;
        loop {
            if idx == free.len() {
                return;
            }
            let p = free[idx];
            cur[p] += 1;
            if cur[p] < alphabet_size {
                break;
            }
            cur[p] = 0;
            idx += 1;
        }
    }
}

/// Every full square `xx` that contains some factor of `w`.
pub fn distinct_squares(w: &PartialWord) -> BTreeSet<PartialWord> {
    distinct_squares_up_to(w, w.len() / 2)
}

/// Like [`distinct_squares`] but only for orders `1..=max_order`.
pub fn distinct_squares_up_to(w: &PartialWord, max_order: usize) -> BTreeSet<PartialWord> {
    let s = &w.symbols;
    let mut out = BTreeSet::new();
    let mut template = Vec::new();
    for n in 1..=max_order.min(s.len() / 2) {
        for j in 0..=s.len() - 2 * n {
            template.clear();
            let ok = (0..n).all(|i| match (s[j + i], s[j + n + i]) {
                (Symbol::Letter(a), Symbol::Letter(b)) => {
                    template.push(Some(a));
                    a == b
                }
                (Symbol::Letter(a), Symbol::Hole) | (Symbol::Hole, Symbol::Letter(a)) => {
                    template.push(Some(a));
                    true
                }
                (Symbol::Hole, Symbol::Hole) => {
                    template.push(None);
                    true
                }
            });
            if ok {
                for_each_filling(&template, w.alphabet_size, &mut |x| {
                    let mut sq = x.to_vec();
                    sq.extend_from_slice(x);
                    out.insert(PartialWord::full(w.alphabet_size, &sq).unwrap());
                });
            }
        }
    }
    out
}

/// Hole-free antisquare factors of a binary word.
pub fn distinct_antisquares(w: &PartialWord) -> Result<BTreeSet<PartialWord>, WordError> {
    require_binary(w)?;
    let s = &w.symbols;
    let mut out = BTreeSet::new();
    for n in 1..=s.len() / 2 {
        for j in 0..=s.len() - 2 * n {
            let anti = (0..n).all(|i| match (s[j + i], s[j + n + i]) {
                (Symbol::Letter(a), Symbol::Letter(b)) => a != b,
                _ => false,
            });
            if anti {
                out.insert(w.factor(j, 2 * n));
            }
        }
    }
    Ok(out)
}

/// Every full antisquare that contains some factor of a binary word.
pub fn distinct_c_antisquares(w: &PartialWord) -> Result<BTreeSet<PartialWord>, WordError> {
    require_binary(w)?;
    let s = &w.symbols;
    let mut out = BTreeSet::new();
    let mut template = Vec::new();
    for n in 1..=s.len() / 2 {
        for j in 0..=s.len() - 2 * n {
            template.clear();
            let ok = (0..n).all(|i| match (s[j + i], s[j + n + i]) {
                (Symbol::Letter(a), Symbol::Letter(b)) => {
                    template.push(Some(a));
                    a != b
                }
                (Symbol::Letter(a), Symbol::Hole) => {
                    template.push(Some(a));
                    true
                }
                (Symbol::Hole, Symbol::Letter(b)) => {
                    template.push(Some(1 - b));
                    true
                }
                (Symbol::Hole, Symbol::Hole) => {
                    template.push(None);
                    true
                }
            });
            if ok {
                for_each_filling(&template, 2, &mut |x| {
                    let mut u = x.to_vec();
                    u.extend(x.iter().map(|a| 1 - a));
                    out.insert(PartialWord::full(2, &u).unwrap());
                });
            }
        }
    }
    Ok(out)
}
