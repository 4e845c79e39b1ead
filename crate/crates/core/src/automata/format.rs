//! Plain-text serialization and Graphviz export.
//!
//! ```text
//! base 2 tracks 2 vars x y
//! 0 accepting
//! 1
//! 0 (0,0) 0
//! 0 (1,0) 1
//! ...
//! ```
//!
//! The initial state is always `0`. DFAO files use `tracks 1` and state lines
//! of the form `3 output=2`. Transition digit tuples list tracks in `vars`
//! order.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::dfa::MultiTrackDfa;
use super::dfao::Dfao;
use super::AutomataError;

fn tuple(digits: &[u32]) -> String {
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn dfa_to_text(dfa: &MultiTrackDfa) -> String {
    let mut out = format!("base {} tracks {}", dfa.base(), dfa.tracks());
    if dfa.tracks() > 0 {
        out.push_str(" vars ");
        out.push_str(&dfa.vars().join(" "));
    }
    out.push('\n');
    for s in 0..dfa.states() as u32 {
        if dfa.is_accepting(s) {
            writeln!(out, "{s} accepting").unwrap();
        } else {
            writeln!(out, "{s}").unwrap();
        }
    }
    for s in 0..dfa.states() as u32 {
        for l in 0..dfa.letters() {
            writeln!(out, "{s} {} {}", tuple(&dfa.digits(l)), dfa.next(s, l)).unwrap();
        }
    }
    out
}

pub fn dfao_to_text(dfao: &Dfao) -> String {
    let m = dfao.minimized();
    let mut out = format!("base {} tracks 1\n", m.base());
    for s in 0..m.states() as u32 {
        writeln!(out, "{s} output={}", m.output(s)).unwrap();
    }
    for s in 0..m.states() as u32 {
        for d in 0..m.base() {
            writeln!(out, "{s} ({d}) {}", m.next(s, d)).unwrap();
        }
    }
    out
}

struct Parsed {
    base: u32,
    tracks: usize,
    vars: Vec<String>,
    accepting: Vec<bool>,
    outputs: Vec<Option<u32>>,
    edges: Vec<(usize, Vec<u32>, u32)>,
}

fn bad(line: usize, msg: impl Into<String>) -> AutomataError {
    AutomataError::Format {
        line,
        message: msg.into(),
    }
}

fn parse(text: &str) -> Result<Parsed, AutomataError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() < 4 || words[0] != "base" || words[2] != "tracks" {
        return Err(bad(ln, "expected `base <k> tracks <t>`"));
    }
    let base: u32 = words[1].parse().map_err(|_| bad(ln, "bad base"))?;
    let tracks: usize = words[3].parse().map_err(|_| bad(ln, "bad track count"))?;
    let vars: Vec<String> = match words.get(4) {
        Some(&"vars") => words[5..].iter().map(|s| s.to_string()).collect(),
        Some(other) => return Err(bad(ln, format!("unexpected {other:?}"))),
        None => (0..tracks).map(|t| format!("x{t}")).collect(),
    };
    if vars.len() != tracks {
        return Err(bad(ln, "variable list does not match the track count"));
    }
    let mut parsed = Parsed {
        base,
        tracks,
        vars,
        accepting: Vec::new(),
        outputs: Vec::new(),
        edges: Vec::new(),
    };
    for (ln, line) in lines {
        if let Some(open) = line.find('(') {
            let close = line.find(')').ok_or_else(|| bad(ln, "unclosed tuple"))?;
            let from: usize = line[..open].trim().parse().map_err(|_| bad(ln, "bad source state"))?;
            let inner = line[open + 1..close].trim();
            let digits: Vec<u32> = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|d| d.trim().parse().map_err(|_| bad(ln, "bad digit")))
                    .collect::<Result<_, _>>()?
            };
            if digits.len() != tracks || digits.iter().any(|&d| d >= base) {
                return Err(bad(ln, "digit tuple does not fit the header"));
            }
            let to: u32 = line[close + 1..]
                .trim()
                .parse()
                .map_err(|_| bad(ln, "bad target state"))?;
            parsed.edges.push((from, digits, to));
        } else {
            let mut parts = line.split_whitespace();
            let id: usize = parts.next().unwrap().parse().map_err(|_| bad(ln, "bad state id"))?;
            if id != parsed.accepting.len() {
                return Err(bad(ln, "state lines must be numbered 0, 1, 2, ..."));
            }
            let mut accepting = false;
            let mut output = None;
            for p in parts {
                if p == "accepting" {
                    accepting = true;
                } else if let Some(v) = p.strip_prefix("output=") {
                    output = Some(v.parse().map_err(|_| bad(ln, "bad output"))?);
                } else {
                    return Err(bad(ln, format!("unexpected {p:?}")));
                }
            }
            parsed.accepting.push(accepting);
            parsed.outputs.push(output);
        }
    }
    if parsed.accepting.is_empty() {
        return Err(bad(ln, "no states"));
    }
    Ok(parsed)
}

fn table(p: &Parsed, letter: impl Fn(&[u32]) -> usize, letters: usize) -> Result<Vec<u32>, AutomataError> {
    let n = p.accepting.len();
    let mut trans = vec![u32::MAX; n * letters];
    for (from, digits, to) in &p.edges {
        if *from >= n || *to as usize >= n {
            return Err(bad(0, "transition refers to an undeclared state"));
        }
        trans[from * letters + letter(digits)] = *to;
    }
    if trans.contains(&u32::MAX) {
        return Err(bad(0, "transition table is not total"));
    }
    Ok(trans)
}

pub fn dfa_from_text(text: &str) -> Result<MultiTrackDfa, AutomataError> {
    let p = parse(text)?;
    let mut order: Vec<usize> = (0..p.tracks).collect();
    order.sort_by(|&a, &b| p.vars[a].cmp(&p.vars[b]));
    let sorted: Vec<String> = order.iter().map(|&t| p.vars[t].clone()).collect();
    let b = p.base as usize;
    let letters = b.pow(p.tracks as u32);
    let trans = table(
        &p,
        |digits| order.iter().rev().fold(0, |acc, &t| acc * b + digits[t] as usize),
        letters,
    )?;
    MultiTrackDfa::from_table(p.base, sorted, trans, p.accepting.clone())
}

pub fn dfao_from_text(text: &str) -> Result<Dfao, AutomataError> {
    let p = parse(text)?;
    if p.tracks != 1 {
        return Err(bad(1, "a DFAO reads a single track"));
    }
    let output = p
        .outputs
        .iter()
        .map(|o| o.ok_or_else(|| bad(0, "every DFAO state needs output=<c>")))
        .collect::<Result<Vec<_>, _>>()?;
    let trans = table(&p, |d| d[0] as usize, p.base as usize)?;
    Dfao::new(p.base, trans, output, 0)
}

fn edge_labels(edges: BTreeMap<(u32, u32), Vec<String>>, out: &mut String) {
    for ((from, to), labels) in edges {
        writeln!(out, "  {from} -> {to} [label=\"{}\"];", labels.join(", ")).unwrap();
    }
}

/// Graphviz rendering; the dead state and its incoming edges are omitted.
pub fn dfa_to_dot(dfa: &MultiTrackDfa, name: &str) -> String {
    let dead = dfa.dead_state();
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
    writeln!(out, "  // tracks: {}", dfa.vars().join(" ")).unwrap();
    out.push_str("  init [shape=point];\n  init -> 0;\n");
    for s in 0..dfa.states() as u32 {
        if Some(s) == dead {
            continue;
        }
        let shape = if dfa.is_accepting(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  {s} [shape={shape}];").unwrap();
    }
    let mut edges: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for s in 0..dfa.states() as u32 {
        if Some(s) == dead {
            continue;
        }
        for l in 0..dfa.letters() {
            let t = dfa.next(s, l);
            if Some(t) != dead {
                edges.entry((s, t)).or_default().push(tuple(&dfa.digits(l)));
            }
        }
    }
    edge_labels(edges, &mut out);
    out.push_str("}\n");
    out
}

/// Graphviz rendering with `state/output` node labels.
pub fn dfao_to_dot(dfao: &Dfao, name: &str) -> String {
    let m = dfao.minimized();
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
    out.push_str("  init [shape=point];\n  init -> 0;\n");
    for s in 0..m.states() as u32 {
        writeln!(out, "  {s} [shape=circle, label=\"{s}/{}\"];", m.output(s)).unwrap();
    }
    let mut edges: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for s in 0..m.states() as u32 {
        for d in 0..m.base() {
            edges.entry((s, m.next(s, d))).or_default().push(d.to_string());
        }
    }
    edge_labels(edges, &mut out);
    out.push_str("}\n");
    out
}
