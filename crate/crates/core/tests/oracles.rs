//! Word-level predicates and counters against direct transcriptions of their
//! definitions, over every binary partial word of length at most 12 with at
//! most two holes.

use std::collections::BTreeSet;

use pwalnut::word::{self, PartialWord, RepetitionKind, Symbol};

/// `None` is a hole.
type Raw = Vec<Option<u8>>;

fn all_words(max_len: usize, max_holes: usize) -> Vec<Raw> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        for mask in 0u32..(1 << len) {
            for holes in holes_upto(len, max_holes) {
                let w: Raw = (0..len)
                    .map(|i| {
                        if holes.contains(&i) {
                            None
                        } else {
                            Some((mask >> i & 1) as u8)
                        }
                    })
                    .collect();
                // letters under a hole are ignored, so keep one copy
                if holes.iter().all(|&i| mask >> i & 1 == 0) {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn holes_upto(len: usize, max_holes: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    if max_holes >= 1 {
        out.extend((0..len).map(|i| vec![i]));
    }
    if max_holes >= 2 {
        for i in 0..len {
            for j in i + 1..len {
                out.push(vec![i, j]);
            }
        }
    }
    out
}

fn to_word(w: &Raw) -> PartialWord {
    let s = w.iter().map(|c| c.map_or(Symbol::Hole, Symbol::Letter)).collect();
    PartialWord::new(2, s).unwrap()
}

fn compat(a: Option<u8>, b: Option<u8>) -> bool {
    a.is_none() || b.is_none() || a == b
}

fn first(
    w: &Raw,
    min: usize,
    span: impl Fn(usize) -> usize,
    at: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    for start in 0..w.len() {
        for n in min.max(1)..=w.len() {
            if start + span(n) <= w.len() && at(start, n) {
                return Some((start, n));
            }
        }
    }
    None
}

fn square_at(w: &Raw, i: usize, n: usize) -> bool {
    (0..n).all(|k| compat(w[i + k], w[i + n + k]))
}

fn occ(o: Option<word::Occurrence>) -> Option<(usize, usize)> {
    o.map(|o| (o.start, o.order))
}

pub fn repetition_finders() {
    for raw in all_words(12, 2) {
        let w = to_word(&raw);
        for min in 1..=3 {
            assert_eq!(
                occ(word::find_square(&w, min)),
                first(&raw, min, |n| 2 * n, |i, n| square_at(&raw, i, n)),
                "square {w} {min}"
            );
            let anti = |i: usize, n: usize| {
                (0..n).all(|k| matches!((raw[i + k], raw[i + n + k]), (Some(a), Some(b)) if a != b))
            };
            assert_eq!(
                occ(word::find_antisquare(&w, min).unwrap()),
                first(&raw, min, |n| 2 * n, anti),
                "antisquare {w} {min}"
            );
            let cube = |i: usize, n: usize| {
                (0..n).all(|k| {
                    let (a, b, c) = (raw[i + k], raw[i + n + k], raw[i + 2 * n + k]);
                    compat(a, b) && compat(b, c) && compat(a, c)
                })
            };
            assert_eq!(
                occ(word::find_cube(&w, min)),
                first(&raw, min, |n| 3 * n, cube),
                "cube {w} {min}"
            );
        }
        // trivial squares are a letter next to one hole
        let nontrivial =
            |i: usize, n: usize| square_at(&raw, i, n) && !(n == 1 && (raw[i].is_none() != raw[i + 1].is_none()));
        assert_eq!(
            occ(word::find_nontrivial_square(&w)),
            first(&raw, 1, |n| 2 * n, nontrivial),
            "nontrivial {w}"
        );
        let overlap = |i: usize, n: usize| {
            (0..=n).all(|k| compat(raw[i + k], raw[i + n + k])) && (n > 1 || compat(raw[i], raw[i + 2]))
        };
        assert_eq!(
            occ(word::find_weak_overlap(&w)),
            first(&raw, 1, |n| 2 * n + 1, overlap),
            "weak overlap {w}"
        );
    }
}

#[test]
fn occurrences_report_their_kind() {
    let w = PartialWord::parse("01◇0").unwrap();
    let o = word::find_square(&w, 1).unwrap();
    assert_eq!((o.start, o.order, o.kind, o.span()), (1, 1, RepetitionKind::Square, 2));
}

pub fn periods_and_sparsity() {
    for raw in all_words(10, 2) {
        let w = to_word(&raw);
        for p in 1..=raw.len() + 1 {
            let weak = (0..raw.len()).all(|i| i + p >= raw.len() || compat(raw[i], raw[i + p]));
            assert_eq!(word::has_weak_period(&w, p), weak, "weak {w} {p}");
            let strong = (0..raw.len()).all(|i| (0..raw.len()).all(|j| i % p != j % p || compat(raw[i], raw[j])));
            assert_eq!(word::has_strong_period(&w, p), strong, "strong {w} {p}");
        }
        let sparsity = if raw.iter().all(Option::is_some) {
            None
        } else {
            (1..=raw.len() + 1)
                .find(|&s| (0..raw.len().saturating_sub(s) + 1).all(|i| raw[i..(i + s).min(raw.len())].contains(&None)))
        };
        assert_eq!(word::hole_sparsity(&w), sparsity, "sparsity {w}");
    }
}

fn binary_words(len: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << len).map(move |m| (0..len).map(|i| (m >> i & 1) as u8).collect())
}

/// `factor ⊂ full`: the full word agrees at every letter of the factor.
fn covers(factor: &[Option<u8>], full: &[u8]) -> bool {
    factor.iter().zip(full).all(|(a, b)| a.is_none_or(|a| a == *b))
}

fn some_factor_covered_by(raw: &Raw, full: &[u8]) -> bool {
    raw.windows(full.len()).any(|f| covers(f, full))
}

fn naive_set(raw: &Raw, half_to_word: impl Fn(&[u8]) -> Vec<u8>) -> BTreeSet<PartialWord> {
    let mut out = BTreeSet::new();
    for n in 1..=raw.len() / 2 {
        for x in binary_words(n) {
            let u = half_to_word(&x);
            if some_factor_covered_by(raw, &u) {
                out.insert(PartialWord::full(2, &u).unwrap());
            }
        }
    }
    out
}

pub fn distinct_counters() {
    for raw in all_words(12, 2) {
        let w = to_word(&raw);
        let squares = naive_set(&raw, |x| [x, x].concat());
        assert_eq!(word::distinct_squares(&w), squares, "squares {w}");
        let anti = |x: &[u8]| {
            let bar: Vec<u8> = x.iter().map(|a| 1 - a).collect();
            [x, &bar].concat()
        };
        let c_anti = naive_set(&raw, anti);
        assert_eq!(word::distinct_c_antisquares(&w).unwrap(), c_anti, "c-antisquares {w}");
        // plain antisquares are the hole-free ones among those
        let plain: BTreeSet<PartialWord> = c_anti
            .into_iter()
            .filter(|u| {
                let bits: Vec<u8> = u.symbols().iter().map(|s| s.letter().unwrap()).collect();
                raw.windows(bits.len())
                    .any(|f| f.iter().zip(&bits).all(|(a, b)| *a == Some(*b)))
            })
            .collect();
        assert_eq!(word::distinct_antisquares(&w).unwrap(), plain, "antisquares {w}");
        for k in 1..=3 {
            let upto: BTreeSet<_> = squares.iter().filter(|s| s.len() <= 2 * k).cloned().collect();
            assert_eq!(word::distinct_squares_up_to(&w, k), upto, "squares up to {k} in {w}");
        }
    }
}

/// Ternary words with holes exercise the square finder over a larger
/// alphabet, where compatibility is no longer decided by one bit.
#[test]
fn ternary_cubes_and_squares() {
    let syms = [Some(0), Some(1), Some(2), None];
    for len in 0..=7usize {
        for code in 0..4usize.pow(len as u32) {
            let raw: Raw = (0..len).map(|i| syms[code / 4usize.pow(i as u32) % 4]).collect();
            let s = raw.iter().map(|c| c.map_or(Symbol::Hole, Symbol::Letter)).collect();
            let w = PartialWord::new(3, s).unwrap();
            let cube = |i: usize, n: usize| {
                (0..n).all(|k| {
                    let (a, b, c) = (raw[i + k], raw[i + n + k], raw[i + 2 * n + k]);
                    compat(a, b) && compat(b, c) && compat(a, c)
                })
            };
            assert_eq!(occ(word::find_cube(&w, 1)), first(&raw, 1, |n| 3 * n, cube), "cube {w}");
            assert_eq!(
                occ(word::find_square(&w, 2)),
                first(&raw, 2, |n| 2 * n, |i, n| square_at(&raw, i, n)),
                "square {w}"
            );
        }
    }
}

#[test]
fn antisquares_need_a_binary_alphabet() {
    let w = PartialWord::parse_with_alphabet("012", 3).unwrap();
    assert!(word::find_antisquare(&w, 1).is_err());
    assert!(word::distinct_antisquares(&w).is_err());
    assert!(word::distinct_c_antisquares(&w).is_err());
}

// plain functions above so the acceptance run can call them too

#[test]
fn finders() {
    repetition_finders()
}

#[test]
fn periods() {
    periods_and_sparsity()
}

#[test]
fn counters() {
    distinct_counters()
}
