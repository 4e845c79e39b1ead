//! Browser bindings. Each export wraps a plain function returning
//! `Result<String, String>` so the logic can be tested without a JS host.

use wasm_bindgen::prelude::*;

use pwalnut::automata::{dfao_to_dot, Dfao};
use pwalnut::logic::Session;
use pwalnut::morphism::{catalog, Morphism};
use pwalnut::search::{longest, AntiMode, Budget, Verdict};
use pwalnut::word::{self, PartialWord};

// keep the page responsive: a runaway predicate fails instead of hanging
const STATE_LIMIT: usize = 200_000;
const MAX_PREFIX: usize = 200_000;
const MAX_CUTOFF: usize = 48;

fn prefix(spec: &str, length: usize) -> Result<PartialWord, String> {
    if length > MAX_PREFIX {
        return Err(format!("length is capped at {MAX_PREFIX} in the browser"));
    }
    let spec = spec.trim();
    if spec.contains("->") {
        let m = Morphism::parse(spec).map_err(|e| e.to_string())?;
        m.fixed_point_prefix(0, length).map_err(|e| e.to_string())
    } else {
        catalog::named_word_prefix(spec, length).map_err(|e| e.to_string())
    }
}

/// Prints a prefix and the result of scanning it for `kind`.
pub fn scan(spec: &str, length: usize, kind: &str, min_order: usize) -> Result<String, String> {
    let w = prefix(spec, length)?;
    let found = match kind {
        "square" => word::find_square(&w, min_order),
        "antisquare" => word::find_antisquare(&w, min_order).map_err(|e| e.to_string())?,
        "cube" => word::find_cube(&w, min_order),
        "nontrivial-square" => word::find_nontrivial_square(&w),
        "weak-overlap" => word::find_weak_overlap(&w),
        other => return Err(format!("unknown repetition {other:?}")),
    };
    let shown: String = w.to_string().chars().take(120).collect();
    let ellipsis = if w.len() > 120 { "..." } else { "" };
    let verdict = match found {
        Some(o) => format!(
            "{kind} of order {} at position {}: {}",
            o.order,
            o.start,
            w.factor(o.start, o.span())
        ),
        None => format!("no {kind} of order >= {min_order} in {} symbols", w.len()),
    };
    Ok(format!("{shown}{ellipsis}\n{verdict}"))
}

/// Runs a script, or a single predicate if the text starts with `?` or a
/// quantifier rather than a command.
pub fn evaluate(text: &str) -> Result<String, String> {
    let mut session = Session::with_limit(STATE_LIMIT);
    let t = text.trim();
    let is_script = ["morphism", "promote", "image", "eval"]
        .iter()
        .any(|k| t.starts_with(k));
    let results = if is_script {
        session.run_script(t).map_err(|e| e.to_string())?
    } else {
        vec![session.eval_text(t).map_err(|e| e.to_string())?]
    };
    if results.is_empty() {
        return Ok("no eval commands".into());
    }
    let mut out = String::new();
    for r in results {
        out.push_str(&format!("{}: {} ({:.0}ms)\n", r.name, r.summary(), r.millis));
    }
    Ok(out)
}

/// One table cell: the longest one-hole binary word with at most `a`
/// distinct squares and `b` distinct antisquares.
pub fn cell(a: usize, b: usize, c_antisquares: bool, cutoff: usize) -> Result<String, String> {
    if cutoff > MAX_CUTOFF {
        return Err(format!("cutoff is capped at {MAX_CUTOFF} in the browser"));
    }
    let mode = if c_antisquares {
        AntiMode::CAntisquare
    } else {
        AntiMode::Antisquare
    };
    let o = longest(Budget::new(a, b, mode), cutoff).map_err(|e| e.to_string())?;
    let head = match o.verdict {
        Verdict::Exact(n) => format!("longest length {n}"),
        Verdict::AtLeast(n) => format!("length at least {n} (cutoff reached)"),
        Verdict::None => "no word fits".into(),
    };
    let witness = o.witness.map_or(String::new(), |w| format!("\nwitness {w}"));
    Ok(format!("{head}{witness}\n{} nodes", o.nodes))
}

/// DOT source for `T`, `VTM`, or a catalog word with a uniform generator.
pub fn word_dot(name: &str) -> Result<String, String> {
    let d = match Dfao::builtin(name) {
        Ok(d) => d,
        Err(_) => {
            let named = catalog::lookup(name).map_err(|e| e.to_string())?;
            let width = named
                .generator
                .uniform_width()
                .ok_or_else(|| format!("{name} has no uniform generator"))?;
            let id = Morphism::identity(named.generator.domain_size() as u8);
            let mut d = Dfao::from_uniform_fixed_point(&named.generator, &id, named.seed, width as u32)
                .map_err(|e| e.to_string())?;
            for m in &named.images {
                d = d.image(m, STATE_LIMIT).map_err(|e| e.to_string())?.minimized();
            }
            d
        }
    };
    Ok(dfao_to_dot(&d, name))
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = scanWord)]
pub fn scan_word(spec: &str, length: usize, kind: &str, min_order: usize) -> Result<String, JsValue> {
    js(scan(spec, length, kind, min_order))
}

#[wasm_bindgen(js_name = evaluate)]
pub fn evaluate_js(text: &str) -> Result<String, JsValue> {
    js(evaluate(text))
}

#[wasm_bindgen(js_name = searchCell)]
pub fn search_cell(a: usize, b: usize, c_antisquares: bool, cutoff: usize) -> Result<String, JsValue> {
    js(cell(a, b, c_antisquares, cutoff))
}

#[wasm_bindgen(js_name = wordDot)]
pub fn word_dot_js(name: &str) -> Result<String, JsValue> {
    js(word_dot(name))
}
