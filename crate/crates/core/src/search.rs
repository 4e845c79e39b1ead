//! Longest binary partial words under a budget of distinct squares and
//! distinct (c-)antisquares, by exhaustive depth-first search.
//!
//! A word is explored symbol by symbol in the order `0 < 1 < ◇`. Appending a
//! symbol can only create repetitions that end at the new position, so each
//! node checks the suffixes of even length and records the repetitions it has
//! not seen before. Both counts only grow under extension, which makes
//! cutting a branch as soon as a budget is exceeded safe.

use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::word::{PartialWord, Symbol};

const HOLE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AntiMode {
    /// Hole-free factors whose halves differ everywhere.
    Antisquare,
    /// Full antisquares compatible with some factor.
    CAntisquare,
}

impl fmt::Display for AntiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AntiMode::Antisquare => "antisquare",
            AntiMode::CAntisquare => "c-antisquare",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budget {
    /// Most distinct squares allowed.
    pub a: usize,
    /// Most distinct antisquares allowed; `usize::MAX` disables the bound.
    pub b: usize,
    pub mode: AntiMode,
    /// Exact number of holes in a counted word. Shorter prefixes may have
    /// fewer.
    pub holes: usize,
}

impl Budget {
    pub fn new(a: usize, b: usize, mode: AntiMode) -> Self {
        Budget { a, b, mode, holes: 1 }
    }

    pub fn with_holes(mut self, holes: usize) -> Self {
        self.holes = holes;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The whole search tree was exhausted.
    Exact(usize),
    /// Some branch reached the cutoff, so longer words may exist.
    AtLeast(usize),
    /// No word meets the budget.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    /// First word of the reported length in search order.
    pub witness: Option<PartialWord>,
    pub nodes: u64,
}

impl SearchOutcome {
    pub fn length(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Exact(n) | Verdict::AtLeast(n) => Some(n),
            Verdict::None => None,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Exact(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the cutoff must be at least 1")]
    ZeroCutoff,
    #[error("{0}")]
    OutOfRange(String),
}

/// Distinct repetitions seen so far, keyed by their first half.
#[derive(Default)]
struct Seen {
    roots: Vec<Vec<u8>>,
}

impl Seen {
    fn contains(&self, root: &[u8]) -> bool {
        self.roots.iter().any(|r| r == root)
    }
}

struct Search {
    budget: Budget,
    cutoff: usize,
    word: Vec<u8>,
    holes: usize,
    squares: Seen,
    antis: Seen,
    best: usize,
    witness: Option<Vec<u8>>,
    truncated: bool,
    nodes: u64,
    scratch: Vec<u8>,
}

impl Search {
    /// Adds the repetitions ending at the last position; false when a budget
    /// overflows. The caller undoes additions by truncating the sets.
    fn record_suffixes(&mut self) -> bool {
        let len = self.word.len();
        for n in 1..=len / 2 {
            let s = len - 2 * n;
            if !self.record_square(s, n) || !self.record_anti(s, n) {
                return false;
            }
        }
        true
    }

    fn record_square(&mut self, s: usize, n: usize) -> bool {
        let w = &self.word;
        let mut free = 0;
        for i in (0..n).rev() {
            let (x, y) = (w[s + i], w[s + n + i]);
            if x != y && x != HOLE && y != HOLE {
                return true;
            }
            if x == HOLE && y == HOLE {
                free += 1;
            }
        }
        // every completion of the doubly-holed columns is a distinct square
        for fill in 0..1u64 << free {
            self.scratch.clear();
            let mut bit = 0;
            for i in 0..n {
                let (x, y) = (self.word[s + i], self.word[s + n + i]);
                self.scratch.push(match (x, y) {
                    (HOLE, HOLE) => {
                        bit += 1;
                        ((fill >> (bit - 1)) & 1) as u8
                    }
                    (HOLE, y) => y,
                    (x, _) => x,
                });
            }
            if !self.squares.contains(&self.scratch) {
                if self.squares.roots.len() == self.budget.a {
                    return false;
                }
                self.squares.roots.push(self.scratch.clone());
            }
        }
        true
    }

    fn record_anti(&mut self, s: usize, n: usize) -> bool {
        let w = &self.word;
        let c_mode = self.budget.mode == AntiMode::CAntisquare;
        let mut free = 0;
        for i in (0..n).rev() {
            let (x, y) = (w[s + i], w[s + n + i]);
            if x == HOLE || y == HOLE {
                if !c_mode {
                    return true;
                }
                if x == y {
                    free += 1;
                }
            } else if x == y {
                return true;
            }
        }
        for fill in 0..1u64 << free {
            self.scratch.clear();
            let mut bit = 0;
            for i in 0..n {
                let (x, y) = (self.word[s + i], self.word[s + n + i]);
                self.scratch.push(match (x, y) {
                    (HOLE, HOLE) => {
                        bit += 1;
                        ((fill >> (bit - 1)) & 1) as u8
                    }
                    (HOLE, y) => 1 - y,
                    (x, _) => x,
                });
            }
            if !self.antis.contains(&self.scratch) {
                if self.antis.roots.len() >= self.budget.b {
                    return false;
                }
                self.antis.roots.push(self.scratch.clone());
            }
        }
        true
    }

    fn descend(&mut self) {
        self.nodes += 1;
        let len = self.word.len();
        if self.holes == self.budget.holes && len > self.best {
            self.best = len;
            self.witness = Some(self.word.clone());
        }
        if len == self.cutoff {
            self.truncated = true;
            return;
        }
        let first_letter_seen = self.word.iter().any(|&x| x != HOLE);
        for sym in [0u8, 1, HOLE] {
            // complementing a word permutes its squares and antisquares, so
            // only words whose first letter is 0 are explored
            if sym == 1 && !first_letter_seen {
                continue;
            }
            if sym == HOLE && self.holes == self.budget.holes {
                continue;
            }
            let (sq, an) = (self.squares.roots.len(), self.antis.roots.len());
            self.word.push(sym);
            self.holes += usize::from(sym == HOLE);
            if self.record_suffixes() {
                self.descend();
            }
            self.holes -= usize::from(sym == HOLE);
            self.word.pop();
            self.squares.roots.truncate(sq);
            self.antis.roots.truncate(an);
        }
    }
}

fn to_word(symbols: &[u8]) -> PartialWord {
    let symbols = symbols
        .iter()
        .map(|&x| if x == HOLE { Symbol::Hole } else { Symbol::Letter(x) })
        .collect();
    PartialWord::new(2, symbols).expect("binary symbols")
}

/// Longest binary partial word with exactly `budget.holes` holes, at most
/// `budget.a` distinct squares and at most `budget.b` distinct antisquares of
/// the chosen kind, searching words of length up to `cutoff`.
pub fn longest(budget: Budget, cutoff: usize) -> Result<SearchOutcome, SearchError> {
    if cutoff == 0 {
        return Err(SearchError::ZeroCutoff);
    }
    let mut search = Search {
        budget,
        cutoff,
        word: Vec::with_capacity(cutoff),
        holes: 0,
        squares: Seen::default(),
        antis: Seen::default(),
        best: 0,
        witness: None,
        truncated: false,
        nodes: 0,
        scratch: Vec::new(),
    };
    search.descend();
    let verdict = match (&search.witness, search.truncated) {
        (_, true) => Verdict::AtLeast(search.best),
        (Some(_), false) => Verdict::Exact(search.best),
        (None, false) => Verdict::None,
    };
    Ok(SearchOutcome {
        verdict,
        witness: search.witness.as_deref().map(to_word),
        nodes: search.nodes,
    })
}

/// The lengths the closed forms predict for the first two columns:
/// `2a + 1` at `(a, 0)` and `4a - 1` at `(a, 1)` for antisquares (the latter
/// from `a = 2`), and `1` at `(a, 0)` for c-antisquares.
pub fn column_closed_form(a: usize, b: usize, mode: AntiMode) -> Result<usize, SearchError> {
    match (mode, b) {
        (AntiMode::Antisquare, 0) => Ok(2 * a + 1),
        (AntiMode::Antisquare, 1) if a >= 2 => Ok(4 * a - 1),
        (AntiMode::CAntisquare, 0) => Ok(1),
        _ => Err(SearchError::OutOfRange(format!(
            "no closed form for ({a}, {b}) with {mode}s"
        ))),
    }
}

/// Longest one-hole word with at most `a` squares and no antisquare bound;
/// defined for `a <= 2`.
pub fn unconstrained_square_cap(a: usize) -> Result<SearchOutcome, SearchError> {
    if a > 2 {
        return Err(SearchError::OutOfRange(format!(
            "the square cap is only established for a <= 2, not {a}"
        )));
    }
    longest(Budget::new(a, usize::MAX, AntiMode::Antisquare), 64)
}

/// One computed table cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub a: usize,
    pub b: usize,
    pub mode: AntiMode,
    pub outcome: SearchOutcome,
    pub millis: f64,
}

/// Computes every cell of `rows x cols`, in row-major order.
pub fn region(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
    mode: AntiMode,
    holes: usize,
    cutoff: usize,
) -> Result<Vec<CellResult>, SearchError> {
    let mut out = Vec::new();
    for a in rows {
        for b in cols.clone() {
            let started = Instant::now();
            let outcome = longest(Budget::new(a, b, mode).with_holes(holes), cutoff)?;
            out.push(CellResult {
                a,
                b,
                mode,
                outcome,
                millis: started.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(out)
}

/// Renders cells in the layout of the published tables: one row per `a`,
/// one column per `b`, `≥n` for truncated cells.
pub fn render_table(cells: &[CellResult]) -> String {
    use std::collections::BTreeMap;
    let mut grid: BTreeMap<usize, BTreeMap<usize, String>> = BTreeMap::new();
    let mut cols = std::collections::BTreeSet::new();
    for c in cells {
        cols.insert(c.b);
        let text = match c.outcome.verdict {
            Verdict::Exact(n) => n.to_string(),
            Verdict::AtLeast(n) => format!(">={n}"),
            Verdict::None => "-".into(),
        };
        grid.entry(c.a).or_default().insert(c.b, text);
    }
    let mut out = String::from("a\\b");
    for b in &cols {
        out.push_str(&format!("\t{b}"));
    }
    out.push('\n');
    for (a, row) in grid {
        out.push_str(&a.to_string());
        for b in &cols {
            out.push('\t');
            out.push_str(row.get(b).map_or("", String::as_str));
        }
        out.push('\n');
    }
    out
}
